import random

import pytest

from dyncolor.embedding import (
    add_cofacial_edge,
    all_rotation_systems,
    c3c3_torus,
    cofacial,
    embed,
    emit_rotation,
    find_embedding,
    induced_embedding,
    k5_torus,
    k7_torus,
    parse_rotation,
    petersen_torus,
    random_rotation,
    trace_faces,
)
from dyncolor.errors import (
    DisconnectedGraph,
    MalformedRotation,
    NotCofacial,
    ParseError,
    WouldDisconnect,
)
from dyncolor.families import (
    complete,
    cube,
    cycle,
    random_connected_graph,
    wheel,
)
from dyncolor.graph import Graph


def c5_embedding():
    return embed(cycle(5), [(4, 1), (0, 2), (1, 3), (2, 4), (3, 0)])


def test_cycle_two_faces():
    emb = c5_embedding()
    assert emb.genus == 0
    assert emb.face_multiset() == (5, 5)


def test_k4_exhaustive_search_finds_planar():
    # brute force over all rotation systems of K4 reaches F=4
    best = max(len(trace_faces(rot).faces) for rot in all_rotation_systems(complete(4)))
    assert best == 4
    emb = find_embedding(complete(4))
    assert emb.genus == 0 and emb.face_multiset() == (3, 3, 3, 3)


def test_k5_torus_embedding():
    emb = k5_torus()
    assert emb.genus == 1
    assert len(emb.faces) == 5  # 2 - 2*1 - 5 + 10


def test_k7_and_petersen_named_embeddings():
    assert k7_torus().genus == 1
    assert k7_torus().face_multiset() == (3,) * 14
    assert petersen_torus().genus == 1


def test_dart_partition_and_euler_integrality():
    rng = random.Random(0)
    checked = 0
    while checked < 1000:
        n = rng.randrange(2, 11)
        g = random_connected_graph(n, 0.35, rng)
        emb = trace_faces(random_rotation(g, rng))
        darts = [d for f in emb.faces for d in f.darts]
        assert len(darts) == 2 * g.m
        assert len(set(darts)) == 2 * g.m
        assert emb.genus >= 0
        checked += 1


def test_malformed_rotation_rejected():
    g = cycle(3)
    with pytest.raises(MalformedRotation):
        trace_faces_bad = embed(g, [(1, 1), (0, 2), (1, 0)])
    with pytest.raises(DisconnectedGraph):
        embed(Graph(4, [(0, 1), (2, 3)]), [(1,), (0,), (3,), (2,)])


def test_cofacial_c5_and_cube():
    emb = c5_embedding()
    for u in range(5):
        for v in range(u + 1, 5):
            ok, face = cofacial(emb, u, v)
            assert ok and u in face and v in face
    # adjacency implies cofaciality everywhere on K4
    emb4 = find_embedding(complete(4))
    assert all(cofacial(emb4, u, v)[0] for u in range(4) for v in range(u + 1, 4))
    # antipodal cube corners share no face in a planar embedding
    embq = find_embedding(cube())
    assert embq.genus == 0
    assert not cofacial(embq, 0, 7)[0]


def test_cofacial_grid_all_pairs():
    # tracing the nine 4-faces shows every vertex pair of C3xC3 is cofacial
    emb = c3c3_torus()
    assert all(f.length == 4 for f in emb.faces)
    for u in range(9):
        for v in range(u + 1, 9):
            assert cofacial(emb, u, v)[0]


def test_add_chord_splits_face():
    emb = c5_embedding()
    out = add_cofacial_edge(emb, 0, 2)
    assert out.genus == 0
    assert out.face_multiset() == (3, 4, 5)
    assert sum(f.length for f in out.faces) == 2 * out.graph.m == 12


def test_add_existing_edge_is_noop():
    emb = c5_embedding()
    assert add_cofacial_edge(emb, 0, 1) is emb


def test_add_grid_diagonal_keeps_genus():
    emb = c3c3_torus()
    out = add_cofacial_edge(emb, 0, 4)  # diagonal of the face 0,1,4,3
    assert out.genus == 1
    assert out.graph.m == 19


def test_add_not_cofacial_raises():
    embq = find_embedding(cube())
    with pytest.raises(NotCofacial):
        add_cofacial_edge(embq, 0, 7)


def test_induced_embedding_cases():
    # deleting the hub of a wheel leaves the rim cycle with two faces
    w5 = wheel(5)
    emb = find_embedding(w5, max_genus=0, exhaustive_cap=0, seed=3)
    assert emb.genus == 0
    out, remap = induced_embedding(emb, {0})
    assert out.face_multiset() == (5, 5)
    assert out.genus == 0
    # deleting one K5 vertex keeps genus <= 1
    out2, _ = induced_embedding(k5_torus(), {4})
    assert out2.graph == complete(4)
    assert out2.genus <= 1
    # degree-1 vertex attached to C4
    g = Graph(5, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 4)])
    emb3 = find_embedding(g)
    out3, _ = induced_embedding(emb3, {4})
    assert out3.graph == cycle(4)
    assert out3.genus == 0


def test_induced_embedding_never_raises_genus():
    rng = random.Random(1)
    for _ in range(60):
        g = random_connected_graph(rng.randrange(4, 9), 0.5, rng)
        emb = trace_faces(random_rotation(g, rng))
        v = rng.randrange(g.n)
        try:
            out, _ = induced_embedding(emb, {v})
        except WouldDisconnect:
            continue
        assert out.genus <= emb.genus


def test_would_disconnect():
    g = Graph(3, [(0, 1), (1, 2)])
    emb = find_embedding(g)
    with pytest.raises(WouldDisconnect):
        induced_embedding(emb, {1})


def test_rotation_format_roundtrip():
    for emb in (c5_embedding(), c3c3_torus(), k5_torus()):
        again = parse_rotation(emit_rotation(emb))
        assert again.rotation.rotation == emb.rotation.rotation
        assert again.genus == emb.genus


def test_rotation_format_rejects_bad_input():
    with pytest.raises(ParseError):
        parse_rotation("")
    with pytest.raises(ParseError):
        parse_rotation("rot x\n")
    with pytest.raises(ParseError):
        parse_rotation("rot 2\n0: 1 1\n1: 0\n")
    with pytest.raises(MalformedRotation):
        parse_rotation("rot 3\n0: 1\n1: 0 2\n2:\n")


def test_faces_are_canonical_cycles():
    emb = c3c3_torus()
    for f in emb.faces:
        assert f.darts[0] == min(f.darts)


def test_min_genus_agrees_with_planarity_oracle():
    import networkx as nx

    from dyncolor.embedding import rotation_space
    from dyncolor.families import random_connected_graph

    rng = random.Random(12)
    for _ in range(60):
        g = random_connected_graph(rng.randrange(2, 8), 0.45, rng)
        if rotation_space(g) > 20000:
            continue  # only the exhaustive regime certifies the minimum
        emb = find_embedding(g)
        ref = nx.Graph()
        ref.add_nodes_from(range(g.n))
        ref.add_edges_from(g.edges())
        planar, _ = nx.check_planarity(ref)
        assert (emb.genus == 0) == planar

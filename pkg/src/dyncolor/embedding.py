"""Combinatorial (orientable) embeddings as rotation systems.

A rotation system lists each vertex's neighbors in clockwise order.  Faces are
traced with the next-dart rule: after dart (u -> v), turn to (v -> w) where w is
the successor of u in the rotation at v.  The Euler genus of the traced
embedding is (2 - V + E - F) / 2.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import permutations
from math import factorial

from .errors import (
    DisconnectedGraph,
    MalformedRotation,
    NotCofacial,
    ParseError,
    WouldDisconnect,
)
from .graph import Graph, VertexRemap, delete_vertices

Dart = tuple[int, int]


@dataclass(frozen=True)
class RotationSystem:
    graph: Graph
    rotation: tuple[tuple[int, ...], ...]

    def validate(self) -> None:
        g = self.graph
        if len(self.rotation) != g.n:
            raise MalformedRotation("rotation has wrong number of vertices")
        for v in range(g.n):
            if sorted(self.rotation[v]) != list(g.neighbors(v)):
                raise MalformedRotation(
                    f"rotation at {v} is not a permutation of its neighborhood"
                )

    def successor(self, v: int, w: int) -> int:
        """Neighbor following w in the clockwise order at v."""
        rot = self.rotation[v]
        return rot[(rot.index(w) + 1) % len(rot)]


@dataclass(frozen=True)
class Face:
    """Closed boundary walk, stored as its lexicographically least dart rotation."""

    darts: tuple[Dart, ...]

    @property
    def length(self) -> int:
        return len(self.darts)

    def boundary_vertices(self) -> tuple[int, ...]:
        """Vertex sequence along the walk (tails of the darts), with repeats."""
        return tuple(u for u, _ in self.darts)

    def vertex_set(self) -> frozenset[int]:
        return frozenset(u for u, _ in self.darts)

    def __contains__(self, v: int) -> bool:
        return any(u == v for u, _ in self.darts)


def _canonical_cycle(darts: list[Dart]) -> tuple[Dart, ...]:
    k = min(range(len(darts)), key=lambda i: darts[i])
    return tuple(darts[k:] + darts[:k])


@dataclass(frozen=True)
class EmbeddedGraph:
    rotation: RotationSystem
    faces: tuple[Face, ...]
    genus: int

    @property
    def graph(self) -> Graph:
        return self.rotation.graph

    def face_of_dart(self, dart: Dart) -> Face:
        for f in self.faces:
            if dart in f.darts:
                return f
        raise KeyError(dart)

    def faces_at(self, v: int) -> list[Face]:
        """Faces incident to v, one entry per boundary visit (corner)."""
        return [f for f in self.faces for u, _ in f.darts if u == v]

    def face_multiset(self) -> tuple[int, ...]:
        return tuple(sorted(f.length for f in self.faces))


def trace_faces(rot: RotationSystem) -> EmbeddedGraph:
    rot.validate()
    g = rot.graph
    if not g.is_connected() or g.n == 0:
        raise DisconnectedGraph("face tracing requires a connected, non-empty graph")
    if g.n == 1:
        # a lone vertex on the sphere: one face with an empty boundary walk
        return EmbeddedGraph(rot, (Face(()),), 0)
    succ_at = [
        {w: rot.rotation[v][(i + 1) % len(rot.rotation[v])]
         for i, w in enumerate(rot.rotation[v])}
        for v in range(g.n)
    ]
    unused: set[Dart] = {(u, v) for u in range(g.n) for v in g.neighbors(u)}
    faces: list[Face] = []
    while unused:
        start = min(unused)
        walk: list[Dart] = []
        dart = start
        while True:
            walk.append(dart)
            unused.discard(dart)
            u, v = dart
            dart = (v, succ_at[v][u])
            if dart == start:
                break
        faces.append(Face(_canonical_cycle(walk)))
    euler = g.n - g.m + len(faces)
    if euler > 2 or euler % 2 != 0:
        raise MalformedRotation(f"impossible Euler characteristic {euler}")
    return EmbeddedGraph(rot, tuple(sorted(faces, key=lambda f: f.darts)), (2 - euler) // 2)


def embed(g: Graph, rotation) -> EmbeddedGraph:
    return trace_faces(RotationSystem(g, tuple(tuple(r) for r in rotation)))


def cofacial(emb: EmbeddedGraph, u: int, v: int) -> tuple[bool, Face | None]:
    """Whether some face boundary visits both u and v; returns a witness face."""
    if u == v:
        raise ValueError("cofacial requires distinct vertices")
    for f in emb.faces:
        if u in f and v in f:
            return True, f
    return False, None


def add_cofacial_edge(emb: EmbeddedGraph, u: int, v: int) -> EmbeddedGraph:
    """Add edge uv inside a common face; the witness face splits, genus is kept.

    Re-adding an existing edge is a no-op, matching the convention that
    multiedges are ignored.
    """
    g = emb.graph
    if u == v:
        raise ValueError("cannot add a loop")
    if g.has_edge(u, v):
        return emb
    ok, face = cofacial(emb, u, v)
    if not ok:
        raise NotCofacial(f"{u} and {v} share no face")
    darts = face.darts
    k = len(darts)

    def corner_before(x: int) -> int:
        # tail of the dart entering x at the first boundary visit of x
        for i in range(k):
            if darts[i][1] == x:
                return darts[i][0]
        raise AssertionError  # face contains x

    a = corner_before(u)
    c = corner_before(v)
    new_rot = []
    for w in range(g.n):
        order = list(emb.rotation.rotation[w])
        if w == u:
            order.insert(order.index(a) + 1, v)
        elif w == v:
            order.insert(order.index(c) + 1, u)
        new_rot.append(tuple(order))
    g2 = Graph(g.n, list(g.edges()) + [(u, v)])
    out = trace_faces(RotationSystem(g2, tuple(new_rot)))
    if out.genus != emb.genus:
        raise AssertionError("face split changed genus; corner bookkeeping bug")
    return out


def induced_embedding(
    emb: EmbeddedGraph, delete
) -> tuple[EmbeddedGraph, VertexRemap]:
    """Embedding induced on G - delete: rotations restricted, faces retraced."""
    doomed = set(delete)
    g2, remap = delete_vertices(emb.graph, doomed)
    if g2.n == 0 or not g2.is_connected():
        raise WouldDisconnect("deletion disconnects (or empties) the graph")
    rot = []
    for v in range(emb.graph.n):
        if v in doomed:
            continue
        rot.append(tuple(
            remap.image[w] for w in emb.rotation.rotation[v] if w not in doomed
        ))
    out = trace_faces(RotationSystem(g2, tuple(rot)))
    if out.genus > emb.genus:
        raise AssertionError("induced embedding raised genus")
    return out, remap


# -- rotation-system search ------------------------------------------------------

def rotation_space(g: Graph) -> int:
    out = 1
    for v in range(g.n):
        out *= factorial(max(g.degree(v) - 1, 0))
    return out


def all_rotation_systems(g: Graph):
    """All rotation systems of g, one per choice of cyclic orders."""
    choices = []
    for v in range(g.n):
        nbrs = g.neighbors(v)
        if len(nbrs) <= 2:
            choices.append([tuple(nbrs)])
        else:
            first = nbrs[0]
            choices.append([(first,) + rest for rest in permutations(nbrs[1:])])

    def rec(v: int, acc: list[tuple[int, ...]]):
        if v == g.n:
            yield RotationSystem(g, tuple(acc))
            return
        for order in choices[v]:
            acc.append(order)
            yield from rec(v + 1, acc)
            acc.pop()

    yield from rec(0, [])


def random_rotation(g: Graph, rng: random.Random) -> RotationSystem:
    rot = []
    for v in range(g.n):
        order = list(g.neighbors(v))
        rng.shuffle(order)
        rot.append(tuple(order))
    return RotationSystem(g, tuple(rot))


def find_embedding(
    g: Graph,
    *,
    max_genus: int | None = None,
    seed: int = 0,
    restarts: int = 60,
    steps: int = 1500,
    exhaustive_cap: int = 20000,
) -> EmbeddedGraph | None:
    """Best embedding found by bounded search (exhaustive when cheap, else local).

    Returns the minimum-genus embedding encountered; None when max_genus is set
    and no embedding within it was found.  Deterministic for a fixed seed.
    """
    if not g.is_connected() or g.n == 0:
        raise DisconnectedGraph("embedding search requires a connected graph")
    target = 0 if max_genus is None else max_genus
    best: EmbeddedGraph | None = None
    if rotation_space(g) <= exhaustive_cap:
        for rot in all_rotation_systems(g):
            emb = trace_faces(rot)
            if best is None or emb.genus < best.genus:
                best = emb
            if best.genus <= target:
                return best
        return best if max_genus is None or best.genus <= max_genus else None

    rng = random.Random(seed)
    mutable = [v for v in range(g.n) if g.degree(v) >= 3]
    for _ in range(restarts):
        rot = [list(order) for order in random_rotation(g, rng).rotation]
        cur = trace_faces(RotationSystem(g, tuple(tuple(r) for r in rot)))
        if best is None or cur.genus < best.genus:
            best = cur
        for _ in range(steps):
            if best.genus <= target:
                return best
            v = rng.choice(mutable)
            i, j = rng.sample(range(len(rot[v])), 2)
            rot[v][i], rot[v][j] = rot[v][j], rot[v][i]
            cand = trace_faces(RotationSystem(g, tuple(tuple(r) for r in rot)))
            if cand.genus <= cur.genus:
                cur = cand
                if cur.genus < best.genus:
                    best = cur
            else:
                rot[v][i], rot[v][j] = rot[v][j], rot[v][i]
    if best is not None and best.genus <= target:
        return best
    return best if max_genus is None else None


# -- rotation-system text format --------------------------------------------------

def parse_rotation(text: str) -> EmbeddedGraph:
    lines = text.splitlines()
    offset = 0
    header = None
    body: list[tuple[str, int]] = []
    for line in text.splitlines(keepends=True):
        stripped = line.split("#", 1)[0].strip()
        if stripped:
            if header is None:
                header = (stripped, offset)
            else:
                body.append((stripped, offset))
        offset += len(line)
    del lines
    if header is None:
        raise ParseError("empty rotation file", 0)
    parts = header[0].split()
    if len(parts) != 2 or parts[0] != "rot":
        raise ParseError("expected header 'rot <n>'", header[1])
    try:
        n = int(parts[1])
    except ValueError:
        raise ParseError("bad vertex count in header", header[1])
    if n <= 0:
        raise ParseError("vertex count must be positive", header[1])
    orders: dict[int, list[int]] = {}
    for stripped, off in body:
        if ":" not in stripped:
            raise ParseError("expected '<v>: w1 w2 ...'", off)
        head, _, tail = stripped.partition(":")
        try:
            v = int(head.strip())
            nbrs = [int(t) for t in tail.split()]
        except ValueError:
            raise ParseError("non-integer vertex id", off)
        if not 0 <= v < n:
            raise ParseError(f"vertex {v} out of range", off)
        if v in orders:
            raise ParseError(f"duplicate line for vertex {v}", off)
        if len(set(nbrs)) != len(nbrs):
            raise ParseError(f"repeated neighbor at vertex {v}", off)
        if v in nbrs:
            raise ParseError(f"loop at vertex {v}", off)
        if any(not 0 <= w < n for w in nbrs):
            raise ParseError(f"neighbor out of range at vertex {v}", off)
        orders[v] = nbrs
    for v in range(n):
        orders.setdefault(v, [])
    for v in range(n):
        for w in orders[v]:
            if v not in orders[w]:
                raise MalformedRotation(
                    f"asymmetric adjacency: {w} lists... {v} lists {w} but not vice versa"
                )
    edges = [(v, w) for v in range(n) for w in orders[v] if v < w]
    g = Graph(n, edges)
    return trace_faces(RotationSystem(g, tuple(tuple(orders[v]) for v in range(n))))


def emit_rotation(emb: EmbeddedGraph) -> str:
    lines = [f"rot {emb.graph.n}"]
    for v in range(emb.graph.n):
        lines.append(f"{v}: " + " ".join(str(w) for w in emb.rotation.rotation[v]))
    return "\n".join(lines) + "\n"


# -- known toroidal embeddings ------------------------------------------------------

def c3c3_torus() -> EmbeddedGraph:
    """C3 x C3 quadrangulation of the torus: 9 vertices, 9 square faces."""
    from .families import grid_torus

    g = grid_torus(3, 3)
    rot = []
    for i in range(3):
        for j in range(3):
            rot.append((
                i * 3 + (j + 1) % 3,      # right
                ((i + 1) % 3) * 3 + j,    # down
                i * 3 + (j + 2) % 3,      # left
                ((i + 2) % 3) * 3 + j,    # up
            ))
    emb = embed(g, rot)
    if emb.genus != 1 or emb.face_multiset() != (4,) * 9:
        raise AssertionError("C3xC3 torus rotation is wrong")
    return emb


def k7_torus() -> EmbeddedGraph:
    """Triangular embedding of K7 on the torus (14 triangles)."""
    from .families import complete

    g = complete(7)
    rot = tuple(
        tuple((i + d) % 7 for d in (1, 3, 2, 6, 4, 5))
        for i in range(7)
    )
    emb = embed(g, rot)
    if emb.genus != 1:
        raise AssertionError("K7 torus rotation is wrong")
    return emb


def k5_torus() -> EmbeddedGraph:
    """A genus-1 embedding of K5 (5 faces)."""
    from .families import complete

    emb = find_embedding(complete(5), max_genus=1)
    if emb is None or emb.genus != 1:
        raise AssertionError("K5 torus embedding not found")
    return emb


def petersen_torus() -> EmbeddedGraph:
    """A genus-1 embedding of the Petersen graph (5 faces)."""
    from .families import petersen

    emb = find_embedding(petersen(), max_genus=1)
    if emb is None or emb.genus != 1:
        raise AssertionError("Petersen torus embedding not found")
    return emb

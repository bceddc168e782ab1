"""Reducible-configuration catalog: detection, reduction construction, and
brute-force certification of extendability and rejection budgets.

The first ten kinds target 3-dynamic 10-paintability on the torus; the three
KP kinds target 2-dynamic 4-paintability of sparse graphs.  Detectors match
the catalog statements; reduction builders transcribe the proof constructions
(deletion set S, added edges E', and the per-vertex rejection triggers).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from itertools import combinations

from .coloring import verify_r_dynamic
from .embedding import EmbeddedGraph, add_cofacial_edge, induced_embedding
from .errors import (
    BudgetExceeded,
    EmbeddingRequired,
    EmbeddingSurgeryFailed,
    WouldDisconnect,
)
from .graph import Graph, VertexRemap, add_edges, subgraph
from .paintgame import (
    CertificationReport,
    PaintSolver,
    RejectionRule,
    dull_rule,
    run_gprime_first,
)


class ConfigKind(Enum):
    DEG_LE_2 = "deg<=2"
    ADJACENT_3S = "adjacent-3s"
    MANY_3_NBRS = "many-3-neighbors"
    FOUR_WITH_3_NBR = "4-with-3-neighbor"
    LIGHT_TRIANGLE = "light-triangle"
    TWIN_TRIANGLES = "twin-triangles"
    TRIANGLE_AND_4VTX = "triangle-and-4-vertex"
    THREE_TRIANGLE_FAN = "three-triangle-fan"
    EXP4_MEETS_3FACE = "expensive-4-meets-3-face"
    ALL4S_QUAD_FACE = "all-4s-quad-face"
    KP_PENDANT = "kp-pendant"
    KP_TWO_TWO = "kp-two-two"
    KP_THREE_WITH_TWOS = "kp-three-with-twos"

    @property
    def target(self) -> tuple[int, int]:
        """(r, k) the kind certifies."""
        if self in KP_KINDS:
            return (2, 4)
        return (3, 10)

    @property
    def needs_embedding(self) -> bool:
        return self in _FACE_KINDS


TORUS_KINDS = (
    ConfigKind.DEG_LE_2,
    ConfigKind.ADJACENT_3S,
    ConfigKind.MANY_3_NBRS,
    ConfigKind.FOUR_WITH_3_NBR,
    ConfigKind.LIGHT_TRIANGLE,
    ConfigKind.TWIN_TRIANGLES,
    ConfigKind.TRIANGLE_AND_4VTX,
    ConfigKind.THREE_TRIANGLE_FAN,
    ConfigKind.EXP4_MEETS_3FACE,
    ConfigKind.ALL4S_QUAD_FACE,
)

KP_KINDS = (
    ConfigKind.KP_PENDANT,
    ConfigKind.KP_TWO_TWO,
    ConfigKind.KP_THREE_WITH_TWOS,
)

_FACE_KINDS = {
    ConfigKind.MANY_3_NBRS,
    ConfigKind.TWIN_TRIANGLES,
    ConfigKind.TRIANGLE_AND_4VTX,
    ConfigKind.THREE_TRIANGLE_FAN,
    ConfigKind.EXP4_MEETS_3FACE,
    ConfigKind.ALL4S_QUAD_FACE,
}

# certified per-kind rejection bounds (key: role or kind-level default)
CATALOG_BUDGETS: dict[ConfigKind, dict[str, int]] = {
    ConfigKind.DEG_LE_2: {"deg1": 3, "deg2": 6},
    ConfigKind.ADJACENT_3S: {"v1": 8, "v2": 9},
    ConfigKind.MANY_3_NBRS: {"x": 9, "v": 9},
    ConfigKind.FOUR_WITH_3_NBR: {"v1": 9, "v2": 9},
    ConfigKind.LIGHT_TRIANGLE: {"v1": 8, "v2": 8},
    ConfigKind.TWIN_TRIANGLES: {"v": 9},
    ConfigKind.TRIANGLE_AND_4VTX: {"v": 9, "x": 9},
    ConfigKind.THREE_TRIANGLE_FAN: {"v": 9},
    ConfigKind.EXP4_MEETS_3FACE: {"v": 7},
    ConfigKind.ALL4S_QUAD_FACE: {"v": 9},
    ConfigKind.KP_PENDANT: {"v": 2},
    ConfigKind.KP_TWO_TWO: {"u": 3, "v": 3},
    ConfigKind.KP_THREE_WITH_TWOS: {"u": 3, "w": 3},
}


@dataclass(frozen=True)
class ConfigMatch:
    kind: ConfigKind
    roles: dict

    def role(self, name: str):
        return self.roles[name]

    def located_vertices(self) -> tuple[int, ...]:
        out: list[int] = []
        for val in self.roles.values():
            if isinstance(val, int):
                out.append(val)
            else:
                out.extend(val)
        return tuple(dict.fromkeys(out))

    def render(self) -> str:
        parts = []
        for name, val in self.roles.items():
            if isinstance(val, int):
                parts.append(f"{name}={val}")
            else:
                parts.append(f"{name}=({','.join(map(str, val))})")
        return f"{self.kind.value}: " + " ".join(parts)


# ---------------------------------------------------------------------------
# face census helpers


def is_expensive_3face(g: Graph, face) -> bool:
    return face.length == 3 and any(g.degree(v) == 3 for v in face.vertex_set())


def is_expensive_4face(g: Graph, face) -> bool:
    if face.length != 4:
        return False
    return sum(1 for v in face.boundary_vertices() if g.degree(v) == 3) >= 2


def is_costly_3face(g: Graph, face) -> bool:
    return face.length == 3 and any(g.degree(v) == 4 for v in face.vertex_set())


def corner_face(emb: EmbeddedGraph, v: int, i: int):
    """Face at the corner of v between rotation positions i and i+1."""
    rot = emb.rotation.rotation[v]
    a = rot[i % len(rot)]
    return emb.face_of_dart((a, v))


def three_faces_at(emb: EmbeddedGraph, v: int) -> list:
    return [f for f in emb.faces if f.length == 3 and v in f]


# ---------------------------------------------------------------------------
# detectors


def _detect_deg_le_2(g: Graph):
    out = []
    for v in g.vertices():
        nbrs = g.neighbors(v)
        if len(nbrs) == 0:
            out.append(ConfigMatch(ConfigKind.DEG_LE_2, {"v": v, "nbrs": ()}))
        elif len(nbrs) == 1:
            out.append(ConfigMatch(ConfigKind.DEG_LE_2,
                                   {"v": v, "u": nbrs[0], "nbrs": nbrs}))
        elif len(nbrs) == 2:
            out.append(ConfigMatch(ConfigKind.DEG_LE_2,
                                   {"v": v, "y": nbrs[0], "z": nbrs[1], "nbrs": nbrs}))
    return out


def _detect_adjacent_3s(g: Graph):
    out = []
    for u, v in g.edges():
        if g.degree(u) <= 3 and g.degree(v) <= 3:
            roles = {"v1": u, "v2": v}
            if g.degree(u) == 3 and g.degree(v) == 3:
                y1, z1 = (w for w in g.neighbors(u) if w != v)
                y2, z2 = (w for w in g.neighbors(v) if w != u)
                roles.update({"y1": y1, "z1": z1, "y2": y2, "z2": z2})
            out.append(ConfigMatch(ConfigKind.ADJACENT_3S, roles))
    return out


def _detect_many_3_nbrs(emb: EmbeddedGraph):
    g = emb.graph
    out = []
    for v in g.vertices():
        xs = [x for x in emb.rotation.rotation[v] if g.degree(x) == 3]
        k = len(xs)
        if k < 2:
            continue
        e3 = sum(1 for f in emb.faces
                 if v in f and is_expensive_3face(g, f))
        e4 = sum(1 for f in emb.faces
                 if v in f and is_expensive_4face(g, f))
        d = g.degree(v)
        if d + k - e3 - e4 < 10:
            pairs = []
            for x in xs:
                rot = emb.rotation.rotation[x]
                i = rot.index(v)
                pairs.append((rot[(i + 1) % 3], rot[(i + 2) % 3]))
            out.append(ConfigMatch(ConfigKind.MANY_3_NBRS, {
                "v": v, "xs": tuple(xs),
                "ys": tuple(p[0] for p in pairs),
                "zs": tuple(p[1] for p in pairs),
                "e3": e3, "e4": e4,
            }))
    return out


def _detect_four_with_3_nbr(g: Graph):
    out = []
    for u, v in g.edges():
        for v1, v2 in ((u, v), (v, u)):
            if g.degree(v1) <= 4 and g.degree(v2) <= 3 and g.degree(v1) > 3:
                out.append(ConfigMatch(ConfigKind.FOUR_WITH_3_NBR, {"v1": v1, "v2": v2}))
        if g.degree(u) <= 3 and g.degree(v) <= 3:
            # both small: still within the statement; canonical orientation
            out.append(ConfigMatch(ConfigKind.FOUR_WITH_3_NBR, {"v1": u, "v2": v}))
    return out


def _detect_light_triangle(g: Graph):
    out = []
    for a in g.vertices():
        for b, c in combinations(g.neighbors(a), 2):
            if a < b < c and g.has_edge(b, c):
                if sum(1 for x in (a, b, c) if g.degree(x) >= 5) <= 1:
                    out.append(ConfigMatch(ConfigKind.LIGHT_TRIANGLE,
                                           {"cycle": (a, b, c)}))
    return out


def _detect_twin_triangles(emb: EmbeddedGraph):
    g = emb.graph
    out = []
    for u, w in g.edges():
        f1 = emb.face_of_dart((u, w))
        f2 = emb.face_of_dart((w, u))
        if f1 is f2 or f1.length != 3 or f2.length != 3:
            continue
        for uu, vv in ((u, w), (w, u)):
            if g.degree(vv) > 5:
                continue
            y = next(iter(f1.vertex_set() - {u, w}))
            z = next(iter(f2.vertex_set() - {u, w}))
            off = set(g.neighbors(vv)) - {uu, y, z}
            if all(g.degree(x) >= 4 for x in off):
                out.append(ConfigMatch(ConfigKind.TWIN_TRIANGLES,
                                       {"u": uu, "v": vv, "y": y, "z": z}))
    return out


def _consecutive_pair_avoiding(emb: EmbeddedGraph, x: int, avoid: int):
    """Two neighbors of x consecutive in its rotation, neither equal to avoid."""
    rot = emb.rotation.rotation[x]
    d = len(rot)
    for i in range(d):
        a, b = rot[i], rot[(i + 1) % d]
        if a != avoid and b != avoid and a != b:
            return a, b
    return None


def _detect_triangle_and_4vtx(emb: EmbeddedGraph):
    g = emb.graph
    out = []
    for v in g.vertices():
        if g.degree(v) > 7:
            continue
        if len(three_faces_at(emb, v)) <= 1:
            continue
        threes = [w for w in g.neighbors(v) if g.degree(w) == 3]
        if len(threes) > 1:
            continue
        if len(threes) == 1:
            candidates = threes if g.degree(threes[0]) <= 4 else []
        else:
            candidates = [w for w in g.neighbors(v) if g.degree(w) <= 4]
        for x in candidates:
            if g.degree(x) < 3:
                continue  # low degree is its own configuration
            pair = _consecutive_pair_avoiding(emb, x, v)
            if pair is None:
                continue
            y, z = pair
            out.append(ConfigMatch(ConfigKind.TRIANGLE_AND_4VTX,
                                   {"v": v, "x": x, "y": y, "z": z}))
    return out


def _detect_three_triangle_fan(emb: EmbeddedGraph):
    g = emb.graph
    out = []
    for v in g.vertices():
        d = g.degree(v)
        if not 4 <= d <= 6:
            continue
        rot = emb.rotation.rotation[v]
        for i in range(d):
            z, x, y, u = (rot[(i + j) % d] for j in range(4))
            if len({z, x, y, u}) != 4:
                continue
            faces = [corner_face(emb, v, (i + j) % d) for j in range(3)]
            if all(f.length == 3 for f in faces):
                out.append(ConfigMatch(ConfigKind.THREE_TRIANGLE_FAN,
                                       {"v": v, "z": z, "x": x, "y": y, "u": u}))
    return out


def _detect_exp4_meets_3face(emb: EmbeddedGraph):
    g = emb.graph
    out = []
    for f4 in emb.faces:
        if f4.length != 4:
            continue
        b = f4.boundary_vertices()
        three_pos = [i for i in range(4) if g.degree(b[i]) == 3]
        if len(three_pos) != 2 or (three_pos[1] - three_pos[0]) % 4 != 2:
            continue
        for i in range(4):
            u, w = f4.darts[i]
            other = emb.face_of_dart((w, u))
            if other is f4 or other.length != 3:
                continue
            if g.degree(u) == 3:
                v, u1 = u, w
            elif g.degree(w) == 3:
                v, u1 = w, u
            else:
                continue
            pos_v = b.index(v)
            u2 = b[(pos_v + 2) % 4]
            nbrs_on_face = {b[(pos_v + 1) % 4], b[(pos_v + 3) % 4]}
            y = next(iter(nbrs_on_face - {u1}))
            z = next(iter(other.vertex_set() - {v, u1}))
            out.append(ConfigMatch(ConfigKind.EXP4_MEETS_3FACE,
                                   {"v": v, "u1": u1, "u2": u2, "y": y, "z": z}))
    return out


def _detect_all4s_quad_face(emb: EmbeddedGraph):
    g = emb.graph
    out = []
    for f in emb.faces:
        if f.length != 4:
            continue
        b = f.boundary_vertices()
        if len(set(b)) != 4:
            continue
        if all(g.degree(v) <= 4 for v in b):
            out.append(ConfigMatch(ConfigKind.ALL4S_QUAD_FACE, {"face": b}))
    return out


def _detect_kp_pendant(g: Graph):
    return [
        ConfigMatch(ConfigKind.KP_PENDANT, {"v": v, "u": g.neighbors(v)[0]})
        for v in g.vertices()
        if g.degree(v) == 1
    ]


def _detect_kp_two_two(g: Graph):
    out = []
    for a, b in g.edges():
        if g.degree(a) != 2 or g.degree(b) != 2:
            continue
        for u, v in ((a, b), (b, a)):
            (uprime,) = (w for w in g.neighbors(u) if w != v)
            (vprime,) = (w for w in g.neighbors(v) if w != u)
            if g.degree(uprime) >= 3:
                out.append(ConfigMatch(ConfigKind.KP_TWO_TWO,
                                       {"u": u, "v": v, "u'": uprime, "v'": vprime}))
    return out


def _detect_kp_three_with_twos(g: Graph):
    out = []
    for u in g.vertices():
        if g.degree(u) != 3:
            continue
        t = tuple(w for w in g.neighbors(u) if g.degree(w) == 2)
        if t:
            v = t[0]
            (vprime,) = (w for w in g.neighbors(v) if w != u)
            out.append(ConfigMatch(ConfigKind.KP_THREE_WITH_TWOS,
                                   {"u": u, "T": t, "v": v, "v'": vprime}))
    return out


_GRAPH_DETECTORS = {
    ConfigKind.DEG_LE_2: _detect_deg_le_2,
    ConfigKind.ADJACENT_3S: _detect_adjacent_3s,
    ConfigKind.FOUR_WITH_3_NBR: _detect_four_with_3_nbr,
    ConfigKind.LIGHT_TRIANGLE: _detect_light_triangle,
    ConfigKind.KP_PENDANT: _detect_kp_pendant,
    ConfigKind.KP_TWO_TWO: _detect_kp_two_two,
    ConfigKind.KP_THREE_WITH_TWOS: _detect_kp_three_with_twos,
}

_FACE_DETECTORS = {
    ConfigKind.MANY_3_NBRS: _detect_many_3_nbrs,
    ConfigKind.TWIN_TRIANGLES: _detect_twin_triangles,
    ConfigKind.TRIANGLE_AND_4VTX: _detect_triangle_and_4vtx,
    ConfigKind.THREE_TRIANGLE_FAN: _detect_three_triangle_fan,
    ConfigKind.EXP4_MEETS_3FACE: _detect_exp4_meets_3face,
    ConfigKind.ALL4S_QUAD_FACE: _detect_all4s_quad_face,
}


def find_configs(target, kinds=TORUS_KINDS) -> list[ConfigMatch]:
    """Exhaustive matches of the requested kinds in a Graph or EmbeddedGraph."""
    if isinstance(target, EmbeddedGraph):
        g, emb = target.graph, target
    else:
        g, emb = target, None
    out: list[ConfigMatch] = []
    for kind in kinds:
        if kind in _GRAPH_DETECTORS:
            out.extend(_GRAPH_DETECTORS[kind](g))
        else:
            if emb is None:
                raise EmbeddingRequired(f"{kind.value} needs face information")
            out.extend(_FACE_DETECTORS[kind](emb))
    return out


# ---------------------------------------------------------------------------
# reductions


@dataclass
class Reduction:
    kind: ConfigKind
    match: ConfigMatch
    s_order: tuple[int, ...]
    added_edges: tuple[tuple[int, int], ...]
    gprime_vertices: frozenset[int]
    gprime_edges: frozenset[tuple[int, int]]
    triggers: dict[int, tuple[RejectionRule, ...]]
    budgets: dict[int, int]
    gprime: Graph
    remap: VertexRemap
    gprime_embedding: EmbeddedGraph | None = None
    witness_faces: tuple = ()

    def render(self) -> str:
        lines = [f"reduction for {self.match.render()}",
                 f"  S = {list(self.s_order)}",
                 f"  E' = {[tuple(e) for e in self.added_edges] or '(none)'}"]
        for t in self.s_order:
            lines.append(f"  triggers for {t} (budget {self.budgets[t]}):")
            for rule in self.triggers.get(t, ()):
                lines.append(f"    - {rule.render()}")
        return "\n".join(lines)


def _colored_any(watch, note=""):
    return RejectionRule("colored_any", frozenset(watch), note=note)


def _colored_all(watch, note=""):
    return RejectionRule("colored_all", frozenset(watch), note=note)


def _assemble(g: Graph, kind, match, s_order, wanted_edges, triggers, budgets,
              emb: EmbeddedGraph | None) -> Reduction:
    s = set(s_order)
    added = tuple(
        (min(u, v), max(u, v))
        for u, v in dict.fromkeys(tuple(sorted(e)) for e in wanted_edges)
        if not g.has_edge(u, v)
    )
    keep = frozenset(g.vertices()) - s
    gp_edges = frozenset(
        (u, v) for u, v in g.edges() if u in keep and v in keep
    ) | frozenset(added)
    dense, remap = subgraph(g, keep)
    dense = add_edges(dense, [(remap.image[u], remap.image[v]) for u, v in added])
    gp_emb = None
    witnesses: tuple = ()
    if emb is not None:
        try:
            gp_emb, emb_remap = induced_embedding(emb, s)
            wit = []
            for u, v in added:
                du, dv = emb_remap.image[u], emb_remap.image[v]
                from .embedding import cofacial

                ok, face = cofacial(gp_emb, du, dv)
                if not ok:
                    raise EmbeddingSurgeryFailed(
                        f"E' edge {u}-{v} not cofacial after deleting S"
                    )
                wit.append(face)
                gp_emb = add_cofacial_edge(gp_emb, du, dv)
            witnesses = tuple(wit)
            if emb_remap.image != remap.image:
                raise AssertionError("remap mismatch between graph and embedding")
        except WouldDisconnect:
            gp_emb, witnesses = None, ()
    return Reduction(kind, match, tuple(s_order), added, keep, gp_edges,
                     triggers, budgets, dense, remap, gp_emb, witnesses)


def build_reduction(emb_or_graph, match: ConfigMatch) -> Reduction:
    """Transcribe the proof construction for a detected configuration."""
    if isinstance(emb_or_graph, EmbeddedGraph):
        g, emb = emb_or_graph.graph, emb_or_graph
    else:
        g, emb = emb_or_graph, None
    kind = match.kind
    if kind.needs_embedding and emb is None:
        raise EmbeddingRequired(f"{kind.value} reduction needs an embedding")
    builder = _BUILDERS[kind]
    return builder(g, emb, match)


def _build_deg_le_2(g, emb, match):
    v = match.role("v")
    nbrs = g.neighbors(v)
    if len(nbrs) <= 1:
        triggers = {v: tuple(
            [_colored_any({u}, f"{u} colored") for u in nbrs]
            + [dull_rule(g, u) for u in nbrs]
        )}
        budget = CATALOG_BUDGETS[ConfigKind.DEG_LE_2]["deg1"]
        return _assemble(g, match.kind, match, (v,), (), triggers,
                         {v: budget}, emb)
    y, z = nbrs
    triggers = {v: (
        _colored_any({y}, f"{y} colored"),
        _colored_any({z}, f"{z} colored"),
        dull_rule(g, y),
        dull_rule(g, z),
    )}
    budget = CATALOG_BUDGETS[ConfigKind.DEG_LE_2]["deg2"]
    return _assemble(g, match.kind, match, (v,), ((y, z),), triggers,
                     {v: budget}, emb)


def _build_adjacent_3s(g, emb, match):
    if "y1" not in match.roles:
        raise ValueError("construction needs two vertices of degree exactly 3; "
                         "reduce lower degrees with the deg<=2 configuration first")
    v1, v2 = match.role("v1"), match.role("v2")
    y1, z1, y2, z2 = (match.role(n) for n in ("y1", "z1", "y2", "z2"))
    outer = {y1, z1, y2, z2}
    triggers = {
        v1: tuple([_colored_any(outer, "y/z colored"),
                   dull_rule(g, y1), dull_rule(g, z1)]),
        v2: tuple([_colored_any(outer, "y/z colored"),
                   dull_rule(g, y2), dull_rule(g, z2),
                   _colored_any({v1}, "partner colored")]),
    }
    budgets = {v1: CATALOG_BUDGETS[match.kind]["v1"], v2: CATALOG_BUDGETS[match.kind]["v2"]}
    return _assemble(g, match.kind, match, (v1, v2), ((y1, z1), (y2, z2)),
                     triggers, budgets, emb)


def _build_many_3_nbrs(g, emb, match):
    v = match.role("v")
    xs, ys, zs = match.role("xs"), match.role("ys"), match.role("zs")
    triggers = {}
    reject_v = (set(g.neighbors(v)) - set(xs)) | set(ys) | set(zs)
    triggers[v] = (_colored_any(reject_v, "guard neighborhood colored"),)
    for i, x in enumerate(xs):
        rules = [
            _colored_any({v, ys[i], zs[i]}, "v/y/z colored"),
            dull_rule(g, ys[i]),
            dull_rule(g, zs[i]),
        ]
        # only the second and third 3-neighbors watch their predecessors;
        # three mutually distinct rounds already feed the center's count
        if i == 1:
            rules.append(_colored_any({xs[0]}, "earlier x colored"))
        elif i == 2:
            rules.append(_colored_any({xs[0], xs[1]}, "earlier xs colored"))
        triggers[x] = tuple(rules)
    budgets = {v: len(reject_v)}
    budgets.update({x: CATALOG_BUDGETS[match.kind]["x"] for x in xs})
    wanted = tuple((ys[i], zs[i]) for i in range(len(xs)))
    return _assemble(g, match.kind, match, (v,) + tuple(xs), wanted,
                     triggers, budgets, emb)


def _build_four_with_3_nbr(g, emb, match):
    v1, v2 = match.role("v1"), match.role("v2")
    if g.degree(v1) != 4 or g.degree(v2) != 3:
        raise ValueError("construction needs degrees exactly (4, 3); smaller "
                         "degrees reduce through other configurations")
    threes = [w for w in g.neighbors(v1) if g.degree(w) == 3]
    if threes != [v2] and set(threes) != {v2}:
        raise ValueError("construction expects v2 to be v1's only 3-neighbor")
    if emb is None:
        raise EmbeddingRequired("need an embedding to pick the cofacial pair at v1")
    pair = _consecutive_pair_avoiding(emb, v1, v2)
    y1, z1 = pair
    (w,) = set(g.neighbors(v1)) - {v2, y1, z1}
    y2, z2 = (x for x in g.neighbors(v2) if x != v1)
    outer = {y1, z1, y2, z2}
    triggers = {
        v1: tuple([_colored_any(outer, "y/z colored"),
                   dull_rule(g, y1), dull_rule(g, z1),
                   _colored_any({w}, "fourth neighbor colored")]),
        v2: tuple([_colored_any(outer, "y/z colored"),
                   dull_rule(g, y2), dull_rule(g, z2),
                   _colored_any({v1}, "partner colored")]),
    }
    budgets = {v1: CATALOG_BUDGETS[match.kind]["v1"], v2: CATALOG_BUDGETS[match.kind]["v2"]}
    red = _assemble(g, match.kind, match, (v1, v2), ((y1, z1), (y2, z2)),
                    triggers, budgets, emb)
    red.match = replace(match, roles={**match.roles, "y1": y1, "z1": z1,
                                      "y2": y2, "z2": z2, "w": w})
    return red


def _build_light_triangle(g, emb, match):
    a, b, c = match.role("cycle")
    fours = [x for x in (a, b, c) if g.degree(x) == 4]
    if len(fours) < 2:
        raise ValueError("construction needs two degree-4 vertices on the cycle; "
                         "a 3-vertex reduces through the 4-with-3-neighbor kind")
    v1, v2 = fours[:2]
    (z,) = {a, b, c} - {v1, v2}
    if emb is None:
        raise EmbeddingRequired("need an embedding to pick face-consecutive y_i")
    ys = {}
    for vi, vother in ((v1, v2), (v2, v1)):
        rot = emb.rotation.rotation[vi]
        d = len(rot)
        y = None
        for i in range(d):
            # y, vi, z consecutive on a face <=> y right before z around vi
            if rot[i] == z:
                cand = rot[(i - 1) % d]
                if cand != vother:
                    y = cand
                cand2 = rot[(i + 1) % d]
                if y is None and cand2 != vother:
                    y = cand2
        if y is None:
            raise ValueError("no admissible y_i next to the shared neighbor")
        ys[vi] = y
    y1, y2 = ys[v1], ys[v2]
    triggers = {
        v1: tuple([_colored_any({y1, y2, z}, "y/z colored"), dull_rule(g, y1)]),
        v2: tuple([_colored_any({y1, y2, z}, "y/z colored"), dull_rule(g, y2),
                   _colored_any({v1}, "partner colored")]),
    }
    budgets = {v1: CATALOG_BUDGETS[match.kind]["v1"], v2: CATALOG_BUDGETS[match.kind]["v2"]}
    red = _assemble(g, match.kind, match, (v1, v2), ((y1, z), (y2, z)),
                    triggers, budgets, emb)
    red.match = replace(match, roles={**match.roles, "v1": v1, "v2": v2,
                                      "z": z, "y1": y1, "y2": y2})
    return red


def _build_twin_triangles(g, emb, match):
    v, y, z = match.role("v"), match.role("y"), match.role("z")
    triggers = {v: tuple([_colored_any(set(g.neighbors(v)), "neighborhood colored"),
                          dull_rule(g, y), dull_rule(g, z)])}
    budgets = {v: CATALOG_BUDGETS[match.kind]["v"]}
    return _assemble(g, match.kind, match, (v,), ((y, z),), triggers, budgets, emb)


def _build_triangle_and_4vtx(g, emb, match):
    v, x, y, z = (match.role(n) for n in ("v", "x", "y", "z"))
    triggers = {
        v: (_colored_any(set(g.neighbors(v)) | {y, z}, "N(v)+y+z colored"),),
        x: tuple([_colored_any(set(g.neighbors(x)), "N(x) colored"),
                  dull_rule(g, v), dull_rule(g, y), dull_rule(g, z)]),
    }
    budgets = {v: CATALOG_BUDGETS[match.kind]["v"], x: CATALOG_BUDGETS[match.kind]["x"]}
    return _assemble(g, match.kind, match, (v, x), ((y, z),), triggers, budgets, emb)


def _build_three_triangle_fan(g, emb, match):
    v, x, y, z = (match.role(n) for n in ("v", "x", "y", "z"))
    ny = frozenset(set(g.neighbors(y)) - {v, x})
    nz = frozenset(set(g.neighbors(z)) - {v, x})
    rules = [_colored_any(set(g.neighbors(v)) | {x}, "N(v)+x colored")]
    if ny:
        rules.append(RejectionRule("few_colors", watch=ny, observe=ny,
                                   threshold=1, note="N(y)-{v,x} still colorless"))
    if nz:
        rules.append(RejectionRule("few_colors", watch=nz, observe=nz,
                                   threshold=1, note="N(z)-{v,x} still colorless"))
    triggers = {v: tuple(rules)}
    budgets = {v: CATALOG_BUDGETS[match.kind]["v"]}
    return _assemble(g, match.kind, match, (v,), ((y, z),), triggers, budgets, emb)


def _build_exp4_meets_3face(g, emb, match):
    v, y, z = match.role("v"), match.role("y"), match.role("z")
    triggers = {v: tuple([_colored_any(set(g.neighbors(v)), "N(v) colored"),
                          dull_rule(g, y), dull_rule(g, z)])}
    budgets = {v: CATALOG_BUDGETS[match.kind]["v"]}
    return _assemble(g, match.kind, match, (v,), ((y, z),), triggers, budgets, emb)


def _build_all4s_quad_face(g, emb, match):
    face = match.role("face")
    if any(g.degree(v) != 4 for v in face):
        raise ValueError("construction needs all four face vertices of degree 4")
    v1, v2, v3, v4 = face
    ext: dict[int, tuple[int, int]] = {}
    for idx, vi in enumerate(face):
        off = [w for w in emb.rotation.rotation[vi] if w not in face]
        if len(off) != 2:
            raise ValueError("face vertex with a chord; reduce via the triangle kinds")
        ext[vi] = (off[0], off[1])
    y = {i + 1: ext[face[i]][0] for i in range(4)}
    z = {i + 1: ext[face[i]][1] for i in range(4)}
    keep = frozenset(g.vertices()) - set(face)

    def gp_degree(w: int) -> int:
        return sum(1 for q in g.neighbors(w) if q in keep)

    def low_degree_rules(i: int):
        rules = []
        for w in (y[i], z[i]):
            if gp_degree(w) == 2:
                gp_nbrs = frozenset(q for q in g.neighbors(w) if q in keep)
                rules.append(_colored_any(gp_nbrs, f"reduced-degree {w} support"))
        return rules

    triggers = {
        v1: tuple([_colored_any({y[1], z[1]}, "own y/z colored")]
                  + low_degree_rules(1)
                  + [_colored_all({y[2], z[2]}, "next pair monochrome"),
                     _colored_all({y[4], z[4]}, "previous pair monochrome")]),
        v2: tuple([_colored_any({v1, y[2], z[2]}, "v1/own y/z colored")]
                  + low_degree_rules(2)
                  + [_colored_all({y[1], z[1]}, "pair 1 monochrome"),
                     _colored_all({y[3], z[3]}, "pair 3 monochrome")]),
        v3: (_colored_any({v1, v2, y[2], z[2], y[3], z[3], y[4], z[4]},
                          "listed set colored"),),
        v4: (_colored_any({v1, v2, v3, y[1], z[1], y[3], z[3], y[4], z[4]},
                          "listed set colored"),),
    }
    budgets = {v: CATALOG_BUDGETS[match.kind]["v"] for v in face}
    return _assemble(g, match.kind, match, tuple(face), (), triggers, budgets, emb)


def _build_kp_pendant(g, emb, match):
    v, u = match.role("v"), match.role("u")
    others = frozenset(set(g.neighbors(u)) - {v})
    rules = [_colored_any({u}, "u colored")]
    if others:
        rules.append(_colored_all(others, "all other neighbors of u colored"))
    triggers = {v: tuple(rules)}
    budgets = {v: CATALOG_BUDGETS[match.kind]["v"]}
    return _assemble(g, match.kind, match, (v,), (), triggers, budgets, emb)


def _deficient_rule(g, w: int, watch, r: int, note: str):
    nbrs = frozenset(g.neighbors(w))
    return RejectionRule("few_colors", watch=frozenset(watch), observe=nbrs,
                         threshold=min(r, g.degree(w)), note=note)


def _build_kp_two_two(g, emb, match):
    u, v = match.role("u"), match.role("v")
    up, vp = match.role("u'"), match.role("v'")
    triggers = {
        u: tuple([_colored_any({v, up}, "v or u' colored"),
                  _deficient_rule(g, v, {vp}, 2, "v not yet 2-dynamic")]),
        v: tuple([_colored_any({vp}, "v' colored"),
                  _deficient_rule(g, u, {up}, 2, "u not yet 2-dynamic"),
                  _deficient_rule(g, vp, set(g.neighbors(vp)) - {v}, 2,
                                  "v' not yet 2-dynamic")]),
    }
    budgets = {u: CATALOG_BUDGETS[match.kind]["u"], v: CATALOG_BUDGETS[match.kind]["v"]}
    return _assemble(g, match.kind, match, (u, v), (), triggers, budgets, emb)


def _build_kp_three_with_twos(g, emb, match):
    u, t = match.role("u"), match.role("T")
    v = match.role("v")
    vp = match.role("v'")
    other = {w: next(q for q in g.neighbors(w) if q != u) for w in t}
    triggers = {u: (_colored_any(set(other.values()), "a T-partner colored"),)}
    for w in t:
        triggers[w] = (_colored_any({u, other[w], vp}, "u/w'/v' colored"),)
    budgets = {u: CATALOG_BUDGETS[match.kind]["u"]}
    budgets.update({w: CATALOG_BUDGETS[match.kind]["w"] for w in t})
    return _assemble(g, match.kind, match, (u,) + tuple(t), (), triggers,
                     budgets, emb)


_BUILDERS = {
    ConfigKind.DEG_LE_2: _build_deg_le_2,
    ConfigKind.ADJACENT_3S: _build_adjacent_3s,
    ConfigKind.MANY_3_NBRS: _build_many_3_nbrs,
    ConfigKind.FOUR_WITH_3_NBR: _build_four_with_3_nbr,
    ConfigKind.LIGHT_TRIANGLE: _build_light_triangle,
    ConfigKind.TWIN_TRIANGLES: _build_twin_triangles,
    ConfigKind.TRIANGLE_AND_4VTX: _build_triangle_and_4vtx,
    ConfigKind.THREE_TRIANGLE_FAN: _build_three_triangle_fan,
    ConfigKind.EXP4_MEETS_3FACE: _build_exp4_meets_3face,
    ConfigKind.ALL4S_QUAD_FACE: _build_all4s_quad_face,
    ConfigKind.KP_PENDANT: _build_kp_pendant,
    ConfigKind.KP_TWO_TWO: _build_kp_two_two,
    ConfigKind.KP_THREE_WITH_TWOS: _build_kp_three_with_twos,
}


# ---------------------------------------------------------------------------
# certification


@dataclass
class ExtendabilityReport:
    extendable: bool
    colorings_checked: int
    counterexample: dict[int, int] | None

    def render(self) -> str:
        if self.extendable:
            return f"extendable: all {self.colorings_checked} base colorings extend"
        return (f"NOT extendable: counterexample after "
                f"{self.colorings_checked} colorings: {self.counterexample}")


def _canonical_colorings(g: Graph, r: int, k: int, limit: int):
    """All r-dynamic colorings of g with <= k colors, one per renaming class."""
    n = g.n
    out: list[dict[int, int]] = []

    def rec(v: int, coloring: dict[int, int], used: int):
        if len(out) > limit:
            raise BudgetExceeded("too many base colorings to enumerate")
        if v == n:
            if verify_r_dynamic(g, coloring, r).ok:
                out.append(dict(coloring))
            return
        for c in range(1, min(used + 1, k) + 1):
            if any(coloring.get(w) == c for w in g.neighbors(v)):
                continue
            coloring[v] = c
            rec(v + 1, coloring, max(used, c))
            del coloring[v]

    rec(0, {}, 0)
    return out


def check_extendable(
    g: Graph,
    reduction: Reduction,
    r: int,
    *,
    k: int | None = None,
    coloring_limit: int = 200_000,
) -> ExtendabilityReport:
    """Brute-force r-extendability: every r-dynamic k-coloring of G' must extend
    to an r-dynamic coloring of G on the deleted vertices."""
    if k is None:
        k = reduction.kind.target[1]
    dense = reduction.gprime
    inverse = {reduction.remap.image[v]: v
               for v in g.vertices() if reduction.remap.image[v] is not None}
    bases = _canonical_colorings(dense, r, k, coloring_limit)
    s = list(reduction.s_order)

    def extends(base: dict[int, int]) -> bool:
        coloring = {inverse[dv]: c for dv, c in base.items()}

        def rec(i: int) -> bool:
            if i == len(s):
                return verify_r_dynamic(g, coloring, r).ok
            v = s[i]
            for c in range(1, k + 1):
                if any(coloring.get(w) == c for w in g.neighbors(v)):
                    continue
                coloring[v] = c
                if rec(i + 1):
                    del coloring[v]
                    return True
                del coloring[v]
            return False

        return rec(0)

    for i, base in enumerate(bases):
        if not extends(base):
            bad = {inverse[dv]: c for dv, c in base.items()}
            return ExtendabilityReport(False, i + 1, bad)
    return ExtendabilityReport(True, len(bases), None)


def reduction_without_added_edges(g: Graph, reduction: Reduction) -> Reduction:
    """Ablated copy with E' dropped (the not-a-subgraph negative control)."""
    return _assemble(g, reduction.kind, reduction.match, reduction.s_order,
                     (), reduction.triggers, reduction.budgets, None)


def reduction_without_rules(g: Graph, reduction: Reduction, kinds=("few_colors",)) -> Reduction:
    """Ablated copy with the named trigger kinds stripped (budget control)."""
    triggers = {
        t: tuple(rule for rule in rules if rule.kind not in kinds)
        for t, rules in reduction.triggers.items()
    }
    return Reduction(
        reduction.kind, reduction.match, reduction.s_order,
        reduction.added_edges, reduction.gprime_vertices,
        reduction.gprime_edges, triggers, reduction.budgets,
        reduction.gprime, reduction.remap, reduction.gprime_embedding,
        reduction.witness_faces,
    )


def structural_budget(reduction: Reduction, t: int) -> int:
    """Upper bound on rejections of t implied by its trigger list alone."""
    total = 0
    for rule in reduction.triggers.get(t, ()):
        if rule.kind == "colored_any":
            total += len(rule.watch)
        elif rule.kind == "colored_all":
            total += 1
        else:
            total += max(rule.threshold, 0)
    return total


def suggested_tokens(g: Graph, reduction: Reduction, r: int, k: int) -> dict[int, int]:
    """Reduced per-vertex tokens: trigger budget + 1 on T, minimal win on G'."""
    tokens = {}
    for t in reduction.s_order:
        tokens[t] = min(k, structural_budget(reduction, t) + 1)
    inner = reduction.gprime
    need = 1
    if inner.n:
        solver_k = 1
        while True:
            verdict = PaintSolver(inner, r).painter_wins(
                tuple([solver_k] * inner.n), frozenset(), frozenset(inner.vertices())
            )
            if verdict:
                need = solver_k
                break
            solver_k += 1
    for v in reduction.gprime_vertices:
        tokens[v] = need
    return tokens


@dataclass
class BudgetReport:
    ok: bool
    certification: CertificationReport
    tokens: dict[int, int]
    k: int

    def render(self) -> str:
        return (f"budget check {'PASS' if self.ok else 'FAIL'} (k={self.k}) | "
                + self.certification.render())


def check_budget(
    g_or_emb,
    reduction: Reduction,
    r: int,
    k: int,
    *,
    tokens=None,
    node_cap: int = 10_000_000,
) -> BudgetReport:
    """Play the composite strategy against the exhaustive Lister.

    Passes iff Painter survives every line with an r-dynamic final coloring and
    every deleted vertex stays within k-1 rejections.
    """
    g = g_or_emb.graph if isinstance(g_or_emb, EmbeddedGraph) else g_or_emb
    if tokens is None:
        tokens = suggested_tokens(g, reduction, r, k)
    f = [tokens[v] for v in g.vertices()]
    report = run_gprime_first(
        g, r, reduction.gprime_vertices, reduction.gprime_edges,
        reduction.triggers, f, "exhaustive",
        s_order=reduction.s_order, node_cap=node_cap,
    )
    ok = report.ok and all(
        report.max_rejections.get(t, 0) <= k - 1 for t in reduction.s_order
    )
    return BudgetReport(ok, report, dict(tokens), k)

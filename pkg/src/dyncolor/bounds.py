"""Genus-parameterized bounds and the constructive coloring pipeline.

The constructive algorithm peels a graph down to at most four vertices by
deleting low-degree vertices and contracting light edges (weight bounded by
the genus-dependent threshold), rainbow-colors the base, then replays the
peeling in reverse, choosing each reinserted vertex's color outside an
explicitly counted forbidden set.  The counting argument caps the forbidden
set at one below the palette, so a color always exists; the result is checked
by the verifier on every run.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .coloring import verify_r_dynamic
from .errors import (
    ApplicabilityError,
    BudgetExceeded,
    HypothesisFail,
    IsC5,
    NoLightEdge,
    TooLargeForExhaustive,
)
from .graph import Graph
from .paintgame import solve_xp_r


def heawood_number(genus: int) -> int:
    if genus < 0:
        raise ValueError("genus must be non-negative")
    return (7 + isqrt(1 + 48 * genus)) // 2


@dataclass(frozen=True)
class BoundProfile:
    genus: int
    r: int
    omega: int
    ell: int
    heawood: int
    r_threshold: int
    applicable: bool

    def render(self) -> str:
        tag = "applicable" if self.applicable else f"needs r >= {self.r_threshold}"
        return (f"genus {self.genus}, r {self.r}: omega {self.omega}, "
                f"palette {self.ell}, heawood {self.heawood} ({tag})")


def bound_profile(genus: int, r: int) -> BoundProfile:
    if genus < 0 or r < 1:
        raise ValueError("need genus >= 0 and r >= 1")
    if genus <= 2:
        omega = 2 * genus + 13
        ell = (genus + 5) * (r + 1) + 3
        threshold = 2 * genus + 11
    else:
        omega = 4 * genus + 7
        ell = (2 * genus + 2) * (r + 1) + 3
        threshold = 4 * genus + 5
    return BoundProfile(genus, r, omega, ell, heawood_number(genus),
                        threshold, r >= threshold)


def edge_weight(g: Graph, u: int, v: int) -> int:
    return g.degree(u) + g.degree(v)


@dataclass(frozen=True)
class LightEdgeResult:
    edge: tuple[int, int] | None
    weight: int | None
    weight_bound_violated: bool

    def render(self) -> str:
        if self.edge is not None:
            return f"light edge {self.edge} of weight {self.weight}"
        note = " (contradicts the declared genus: min degree >= 3)" \
            if self.weight_bound_violated else ""
        return f"no light edge{note}"


def find_light_edge(g: Graph, omega: int) -> LightEdgeResult:
    """Minimum-weight edge if it weighs at most omega; absence with min degree
    >= 3 contradicts the light-edge guarantee of the declared genus."""
    best = None
    for u, v in g.edges():
        w = edge_weight(g, u, v)
        if best is None or w < best[0]:
            best = (w, u, v)
    if best is None:
        return LightEdgeResult(None, None, False)
    w, u, v = best
    if w <= omega:
        return LightEdgeResult((u, v), w, False)
    return LightEdgeResult(None, w, g.min_degree() >= 3)


# ---------------------------------------------------------------------------
# contraction-based constructive coloring


@dataclass(frozen=True)
class DeleteStep:
    vertex: int


@dataclass(frozen=True)
class ContractStep:
    u: int  # absorbed endpoint (lower degree)
    v: int  # absorber
    weight: int


@dataclass
class ContractionTrace:
    r: int
    genus: int
    steps: list
    base: list[int]

    def render(self) -> str:
        lines = [f"contraction-trace", f"r {self.r}", f"genus {self.genus}"]
        for s in self.steps:
            if isinstance(s, DeleteStep):
                lines.append(f"delete {s.vertex}")
            else:
                lines.append(f"contract {s.u} {s.v} {s.weight}")
        lines.append("base " + " ".join(map(str, self.base)))
        return "\n".join(lines) + "\n"

    @staticmethod
    def parse(text: str) -> "ContractionTrace":
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if not lines or lines[0] != "contraction-trace":
            raise ValueError("not a contraction trace")
        r = genus = None
        steps: list = []
        base: list[int] = []
        for ln in lines[1:]:
            parts = ln.split()
            if parts[0] == "r":
                r = int(parts[1])
            elif parts[0] == "genus":
                genus = int(parts[1])
            elif parts[0] == "delete":
                steps.append(DeleteStep(int(parts[1])))
            elif parts[0] == "contract":
                steps.append(ContractStep(int(parts[1]), int(parts[2]), int(parts[3])))
            elif parts[0] == "base":
                base = [int(x) for x in parts[1:]]
            else:
                raise ValueError(f"bad trace line: {ln}")
        if r is None or genus is None:
            raise ValueError("trace missing r/genus header")
        return ContractionTrace(r, genus, steps, base)


def _adjacency(g: Graph) -> dict[int, set[int]]:
    return {v: set(g.neighbors(v)) for v in g.vertices()}


def _peel(g: Graph, omega: int) -> tuple[ContractionTrace, list[dict[int, set[int]]]]:
    """Forward pass: stages[i] is the adjacency before steps[i] is applied."""
    adj = _adjacency(g)
    steps: list = []
    stages: list[dict[int, set[int]]] = []
    while len(adj) > 4:
        stages.append({v: set(ns) for v, ns in adj.items()})
        low = sorted(v for v, ns in adj.items() if len(ns) <= 2)
        if low:
            v = low[0]
            nbrs = sorted(adj[v])
            for w in nbrs:
                adj[w].discard(v)
            del adj[v]
            # a suppressed 2-vertex leaves the edge between its neighbors, so
            # the reduced coloring keeps them distinct (genus is preserved)
            if len(nbrs) == 2:
                y, z = nbrs
                adj[y].add(z)
                adj[z].add(y)
            steps.append(DeleteStep(v))
            continue
        best = None
        for a in sorted(adj):
            for b in sorted(adj[a]):
                if a < b:
                    w = len(adj[a]) + len(adj[b])
                    if best is None or (w, a, b) < best:
                        best = (w, a, b)
        assert best is not None
        w, a, b = best
        if w > omega:
            raise NoLightEdge(
                f"minimum edge weight {w} exceeds omega {omega}; the declared "
                f"genus is too small for this graph"
            )
        # absorber = higher-degree endpoint, ties to the lower id
        if len(adj[a]) > len(adj[b]):
            u, v = b, a
        elif len(adj[b]) > len(adj[a]):
            u, v = a, b
        else:
            u, v = max(a, b), min(a, b)
        for x in adj[u]:
            adj[x].discard(u)
            if x != v:
                adj[x].add(v)
                adj[v].add(x)
        del adj[u]
        steps.append(ContractStep(u, v, w))
    return ContractionTrace(0, 0, steps, sorted(adj)), stages


@dataclass
class ContractionResult:
    coloring: dict[int, int]
    trace: ContractionTrace
    colors_used: int
    max_forbidden: int

    def render(self) -> str:
        return (f"colored with {self.colors_used} colors; "
                f"largest forbidden set {self.max_forbidden}")


def _reverse_color(
    g: Graph, r: int, ell: int, trace: ContractionTrace,
    stages: list[dict[int, set[int]]],
) -> tuple[dict[int, int], int]:
    color = {v: i + 1 for i, v in enumerate(trace.base)}
    max_forbidden = 0

    def deficiency_forbids(adj, w: int, skipping: int) -> set[int]:
        shown = {color[x] for x in adj[w] if x != skipping and x in color}
        if len(shown) < min(r, len(adj[w])):
            return shown
        return set()

    for step, adj in zip(reversed(trace.steps), reversed(stages)):
        if isinstance(step, DeleteStep):
            v = step.vertex
            forbidden = {color[w] for w in adj[v]}
            for w in adj[v]:
                forbidden |= deficiency_forbids(adj, w, v)
            limit = len(adj[v]) * r
        else:
            u, v = step.u, step.v
            forbidden = {color[w] for w in adj[u]} | {color[w] for w in adj[v] if w != u}
            for w in adj[u]:
                forbidden |= deficiency_forbids(adj, w, u)
            du, dv = len(adj[u]), len(adj[v])
            limit = du + dv - 1 + (r - 1) * (du - 1)
            v = u
        if len(forbidden) > min(limit, ell - 1):
            raise AssertionError(
                f"forbidden set of size {len(forbidden)} exceeds the counting "
                f"bound min({limit}, {ell - 1}); the guarantee failed"
            )
        max_forbidden = max(max_forbidden, len(forbidden))
        c = 1
        while c in forbidden:
            c += 1
        if c > ell:
            raise AssertionError("needed more colors than the palette bound")
        color[v] = c
    return color, max_forbidden


def color_by_contraction(
    g: Graph, r: int, declared_genus: int
) -> ContractionResult:
    """An r-dynamic coloring with at most ell(genus, r) colors, plus its trace."""
    prof = bound_profile(declared_genus, r)
    if not prof.applicable:
        raise ApplicabilityError(
            f"r={r} below the threshold {prof.r_threshold} for genus {declared_genus}"
        )
    if g.n == 0:
        return ContractionResult({}, ContractionTrace(r, declared_genus, [], []), 0, 0)
    # the counting chain behind the forbidden-set cap closes exactly at ell - 1
    assert (prof.omega - 3) * (r + 1) // 2 + 2 == prof.ell - 1
    trace, stages = _peel(g, prof.omega)
    trace.r, trace.genus = r, declared_genus
    color, max_forbidden = _reverse_color(g, r, prof.ell, trace, stages)
    report = verify_r_dynamic(g, color, r)
    if not report.ok:
        raise AssertionError("constructive coloring failed verification")
    used = len(set(color.values()))
    if max(color.values()) > prof.ell:
        raise AssertionError("palette bound exceeded")
    return ContractionResult(color, trace, used, max_forbidden)


def replay_contraction(g: Graph, trace: ContractionTrace) -> ContractionResult:
    """Re-run the coloring from a recorded trace, verifying each step is legal."""
    prof = bound_profile(trace.genus, trace.r)
    adj = _adjacency(g)
    stages = []
    for step in trace.steps:
        stages.append({v: set(ns) for v, ns in adj.items()})
        if isinstance(step, DeleteStep):
            v = step.vertex
            if v not in adj or len(adj[v]) > 2:
                raise ValueError(f"illegal delete of {v}")
            nbrs = sorted(adj[v])
            for w in nbrs:
                adj[w].discard(v)
            del adj[v]
            if len(nbrs) == 2:
                y, z = nbrs
                adj[y].add(z)
                adj[z].add(y)
        else:
            u, v = step.u, step.v
            if u not in adj or v not in adj[u]:
                raise ValueError(f"illegal contraction {u},{v}")
            w = len(adj[u]) + len(adj[v])
            if w != step.weight or w > prof.omega:
                raise ValueError(f"contraction {u},{v} has weight {w}, not light")
            for x in adj[u]:
                adj[x].discard(u)
                if x != v:
                    adj[x].add(v)
                    adj[v].add(x)
            del adj[u]
    if sorted(adj) != trace.base or len(adj) > 4:
        raise ValueError("trace base does not match the peeled graph")
    color, max_forbidden = _reverse_color(g, trace.r, prof.ell, trace, stages)
    report = verify_r_dynamic(g, color, trace.r)
    if not report.ok:
        raise AssertionError("replayed coloring failed verification")
    return ContractionResult(color, trace, len(set(color.values())), max_forbidden)


# ---------------------------------------------------------------------------
# maximum average degree (exhaustive-exact with a sound prune)


def mad(g: Graph, *, max_n: int = 20, force: bool = False) -> Fraction:
    """Exact max over non-empty vertex subsets of 2 e(H) / |H|."""
    if g.n == 0:
        raise ValueError("mad of the empty graph is undefined")
    if g.n > max_n and not force:
        raise TooLargeForExhaustive(f"n={g.n} above exhaustive cap {max_n}")
    n = g.n
    order = sorted(g.vertices(), key=lambda v: -g.degree(v))
    pos = {v: i for i, v in enumerate(order)}
    masks = [0] * n
    for v in g.vertices():
        for w in g.neighbors(v):
            masks[pos[v]] |= 1 << pos[w]
    best = Fraction(0)

    def upper_bound(i: int, members: int, size: int, edges: int) -> Fraction:
        rest = range(i, n)
        live = members
        for j in rest:
            live |= 1 << j
        pots = sorted(
            (bin(masks[j] & live).count("1") for j in rest), reverse=True
        )
        bound = Fraction(2 * edges, size) if size else Fraction(0)
        acc = 0
        for t, p in enumerate(pots, start=1):
            acc += p
            cand = Fraction(2 * (edges + acc), size + t)
            if cand > bound:
                bound = cand
        return bound

    def rec(i: int, members: int, size: int, edges: int):
        nonlocal best
        if size:
            cand = Fraction(2 * edges, size)
            if cand > best:
                best = cand
        if i == n:
            return
        if upper_bound(i, members, size, edges) <= best:
            return
        gained = bin(masks[i] & members).count("1")
        rec(i + 1, members | (1 << i), size + 1, edges + gained)
        rec(i + 1, members, size, edges)

    rec(0, 0, 0, 0)
    return best


# ---------------------------------------------------------------------------
# KP pipeline: 2-dynamic 4-paintability certificates for sparse graphs


@dataclass
class KpStep:
    case: str          # "1", "2a", "2b"
    removed: tuple[int, ...]
    roles: dict
    budget: int


@dataclass
class KpRemainder:
    component: tuple[int, ...]
    verdict: str       # "game-pass", "game-fail", "is-c5", "too-large"


@dataclass
class KpCertificate:
    hypothesis: str
    steps: list[KpStep]
    remainders: list[KpRemainder]

    @property
    def certified(self) -> bool:
        return all(r.verdict == "game-pass" for r in self.remainders)

    def render(self) -> str:
        lines = ["kp-chain", f"hypothesis {self.hypothesis}"]
        for s in self.steps:
            roles = " ".join(f"{k}={v}" for k, v in sorted(s.roles.items()))
            lines.append(f"case{s.case} remove {' '.join(map(str, s.removed))}"
                         f" budget {s.budget} | {roles}")
        for rem in self.remainders:
            lines.append(
                f"remainder {' '.join(map(str, rem.component))} -> {rem.verdict}"
            )
        lines.append(f"certified {self.certified}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        return json.dumps({
            "hypothesis": self.hypothesis,
            "steps": [{"case": s.case, "removed": list(s.removed),
                       "roles": {k: v if isinstance(v, int) else list(v)
                                 for k, v in s.roles.items()},
                       "budget": s.budget} for s in self.steps],
            "remainders": [{"component": list(r.component), "verdict": r.verdict}
                           for r in self.remainders],
            "certified": self.certified,
        }, indent=2)


def _is_c5(adj: dict[int, set[int]], comp: list[int]) -> bool:
    return len(comp) == 5 and all(len(adj[v]) == 2 for v in comp)


def kp_pipeline(
    g: Graph,
    *,
    girth7_planar: bool = False,
    mad_max_n: int = 20,
    game_max_n: int = 8,
    game_node_budget: int | None = 4_000_000,
) -> KpCertificate:
    """Reduction chain certifying 2-dynamic 4-paintability of a sparse graph.

    Checks the density hypothesis (or accepts the caller's planar-girth-7
    assertion), peels the unavoidable one-vertex and two-vertex
    configurations, and closes the low-degree remainder with the game solver.
    """
    if not g.is_connected():
        raise ValueError("pipeline expects a connected graph")
    if g.n == 5 and all(g.degree(v) == 2 for v in g.vertices()):
        raise IsC5("the five-cycle is the excluded graph")
    if girth7_planar:
        hypothesis = "planar-girth-7 (asserted by caller)"
    else:
        density = mad(g, max_n=max(mad_max_n, 1), force=g.n <= mad_max_n)
        if density >= Fraction(8, 3):
            raise HypothesisFail(f"mad = {density} >= 8/3")
        hypothesis = f"mad {density} < 8/3"

    adj = _adjacency(g)
    steps: list[KpStep] = []

    def remove(vs):
        for v in vs:
            for w in adj[v]:
                adj[w].discard(v)
            del adj[v]

    while True:
        pendant = next((v for v in sorted(adj) if len(adj[v]) == 1), None)
        if pendant is not None:
            (u,) = adj[pendant]
            steps.append(KpStep("1", (pendant,), {"v": pendant, "u": u}, 2))
            remove([pendant])
            continue
        isolated = next((v for v in sorted(adj) if len(adj[v]) == 0), None)
        if isolated is not None and len(adj) > 1:
            steps.append(KpStep("1", (isolated,), {"v": isolated}, 0))
            remove([isolated])
            continue
        pair = None
        for u in sorted(adj):
            if len(adj[u]) != 2:
                continue
            for v in sorted(adj[u]):
                if len(adj[v]) != 2:
                    continue
                (up,) = adj[u] - {v}
                (vp,) = adj[v] - {u}
                if len(adj[up]) >= 3:
                    pair = (u, v, up, vp)
                    break
            if pair:
                break
        if pair:
            u, v, up, vp = pair
            steps.append(KpStep("2a", (u, v),
                                {"u": u, "v": v, "u'": up, "v'": vp}, 3))
            remove([u, v])
            continue
        found = None
        for u in sorted(adj):
            if len(adj[u]) != 3:
                continue
            t = tuple(sorted(w for w in adj[u] if len(adj[w]) == 2))
            if t:
                found = (u, t)
                break
        if found:
            u, t = found
            v = t[0]
            (vp,) = adj[v] - {u}
            steps.append(KpStep("2b", (u,) + t,
                                {"u": u, "T": t, "v": v, "v'": vp}, 3))
            remove([u, *t])
            continue
        if any(len(ns) >= 3 for ns in adj.values()):
            raise AssertionError(
                "no unavoidable configuration in a max-degree->=3 remainder; "
                "the density hypothesis should make this impossible"
            )
        break

    remainders: list[KpRemainder] = []
    seen: set[int] = set()
    for s in sorted(adj):
        if s in seen:
            continue
        comp = [s]
        seen.add(s)
        queue = [s]
        while queue:
            x = queue.pop()
            for w in adj[x]:
                if w not in seen:
                    seen.add(w)
                    comp.append(w)
                    queue.append(w)
        comp.sort()
        if _is_c5(adj, comp):
            remainders.append(KpRemainder(tuple(comp), "is-c5"))
            continue
        if len(comp) > game_max_n:
            remainders.append(KpRemainder(tuple(comp), "too-large"))
            continue
        index = {v: i for i, v in enumerate(comp)}
        sub = Graph(len(comp), [(index[a], index[b])
                                for a in comp for b in adj[a]
                                if a in index and b in index and a < b])
        try:
            verdict = solve_xp_r(sub, 2, 4, max_n=game_max_n,
                                 node_budget=game_node_budget)
            remainders.append(KpRemainder(
                tuple(comp), "game-pass" if verdict.painter_wins else "game-fail"
            ))
        except BudgetExceeded:
            remainders.append(KpRemainder(tuple(comp), "too-large"))
    return KpCertificate(hypothesis, steps, remainders)

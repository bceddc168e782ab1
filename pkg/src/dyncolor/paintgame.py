"""The Lister/Painter token game with the r-dynamic winning condition.

Lister marks a nonempty set of uncolored vertices each round (each marked
vertex spends a token; marking a token-less vertex wins for Lister) and
Painter colors an independent subset of the marked set with that round's
color.  Painter wins if the final coloring is r-dynamic.  The solver is an
exact minimax over canonical states: the token vector plus the unordered
partition of colored vertices, since color names never matter.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from .coloring import verify_r_dynamic
from .errors import (
    BudgetExceeded,
    BudgetViolated,
    IllegalMark,
    IllegalResponse,
    InnerLost,
)
from .graph import Graph

Partition = frozenset[frozenset[int]]


def normalize_tokens(g: Graph, f) -> tuple[int, ...]:
    """Accept an int (uniform), sequence, or mapping; initial tokens must be positive."""
    if isinstance(f, int):
        tokens = tuple([f] * g.n)
    elif isinstance(f, dict):
        tokens = tuple(f[v] for v in g.vertices())
    else:
        tokens = tuple(f)
    if len(tokens) != g.n:
        raise ValueError("token assignment has wrong length")
    if any(t < 1 for t in tokens):
        raise ValueError("initial tokens must be positive")
    return tokens


@dataclass(frozen=True)
class GameState:
    """Position after some rounds: remaining tokens and the round color classes."""

    tokens: tuple[int, ...]
    classes: tuple[frozenset[int], ...] = ()
    lister_won: bool = False

    @property
    def colored(self) -> frozenset[int]:
        return frozenset(v for cls in self.classes for v in cls)

    def uncolored(self, g: Graph) -> frozenset[int]:
        return frozenset(g.vertices()) - self.colored

    def coloring(self) -> dict[int, int]:
        return {v: i + 1 for i, cls in enumerate(self.classes) for v in cls}

    def partition(self) -> Partition:
        return frozenset(cls for cls in self.classes if cls)


def play_round(
    g: Graph, state: GameState, marked: Iterable[int], response: Iterable[int]
) -> GameState:
    """One round of the game; flags lister_won when a token-less vertex is marked."""
    marked = frozenset(marked)
    response = frozenset(response)
    colored = state.colored
    if not marked:
        raise IllegalMark("Lister must mark a nonempty set")
    if marked & colored:
        raise IllegalMark(f"colored vertices marked: {sorted(marked & colored)}")
    if not response <= marked:
        raise IllegalResponse("response must be a subset of the marked set")
    for u, v in combinations(sorted(response), 2):
        if g.has_edge(u, v):
            raise IllegalResponse(f"response contains adjacent pair {u},{v}")
    lost = any(state.tokens[v] == 0 for v in marked)
    tokens = tuple(
        t - 1 if v in marked else t for v, t in enumerate(state.tokens)
    )
    return GameState(tokens, state.classes + (response,), state.lister_won or lost)


@dataclass
class RejectionLedger:
    counts: dict[int, int] = field(default_factory=dict)

    def bump(self, vertices: Iterable[int]) -> None:
        for v in vertices:
            self.counts[v] = self.counts.get(v, 0) + 1

    def get(self, v: int) -> int:
        return self.counts.get(v, 0)


# -- exact minimax solver -----------------------------------------------------------


def _independent_subsets(g: Graph, marked: tuple[int, ...]):
    """All independent subsets of marked (including the empty set)."""
    out: list[frozenset[int]] = [frozenset()]
    for v in marked:
        nv = set(g.neighbors(v))
        out.extend(s | {v} for s in list(out) if not (s & nv))
    return out


class PaintSolver:
    """Minimax oracle for one (graph, r) pair; memo shared across queries."""

    def __init__(self, g: Graph, r: int, *, memo: bool = True,
                 node_budget: int | None = None, deadline: float | None = None):
        self.g = g
        self.r = r
        self.memo: dict | None = {} if memo else None
        self.node_budget = node_budget
        self.deadline = deadline
        self.nodes = 0

    def _final_ok(self, partition: Partition) -> bool:
        coloring: dict[int, int] = {}
        for i, cls in enumerate(sorted(partition, key=sorted)):
            for v in cls:
                coloring[v] = i + 1
        return verify_r_dynamic(self.g, coloring, self.r).ok

    def _responses(self, marked: tuple[int, ...]) -> list[frozenset[int]]:
        subs = _independent_subsets(self.g, marked)
        subs.sort(key=lambda s: (-len(s), sorted(s)))
        return subs

    def painter_wins(self, tokens: tuple[int, ...], partition: Partition,
                     uncolored: frozenset[int]) -> bool:
        if not uncolored:
            return self._final_ok(partition)
        if any(tokens[v] == 0 for v in uncolored):
            return False
        key = None
        if self.memo is not None:
            key = (tuple(tokens[v] if v in uncolored else 0
                         for v in range(self.g.n)), partition)
            hit = self.memo.get(key)
            if hit is not None:
                return hit
        self.nodes += 1
        if self.node_budget is not None and self.nodes > self.node_budget:
            raise BudgetExceeded(f"game search exceeded {self.node_budget} nodes")
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise BudgetExceeded("game search hit the time limit")
        verdict = True
        for marked in self._lister_moves(uncolored):
            new_tokens = tuple(
                t - 1 if v in marked else t for v, t in enumerate(tokens)
            )
            if not any(
                self.painter_wins(new_tokens,
                                  partition | {resp} if resp else partition,
                                  uncolored - resp)
                for resp in self._responses(marked)
            ):
                verdict = False
                break
        if self.memo is not None:
            self.memo[key] = verdict
        return verdict

    def _lister_moves(self, uncolored: frozenset[int]):
        verts = sorted(uncolored)
        for mask in range(1, 1 << len(verts)):
            yield tuple(v for i, v in enumerate(verts) if (mask >> i) & 1)

    # -- play interfaces ---------------------------------------------------------

    def state_wins(self, state: GameState) -> bool:
        if state.lister_won:
            return False
        return self.painter_wins(state.tokens, state.partition(),
                                 state.uncolored(self.g))

    def winning_response(self, state: GameState, marked: Iterable[int]) -> frozenset[int]:
        """First winning response in the solver's deterministic order."""
        marked = tuple(sorted(set(marked)))
        tokens = tuple(
            t - 1 if v in marked else t for v, t in enumerate(state.tokens)
        )
        uncolored = state.uncolored(self.g)
        if any(state.tokens[v] == 0 for v in marked):
            raise InnerLost("a marked vertex had no tokens")
        partition = state.partition()
        for resp in self._responses(marked):
            if self.painter_wins(tokens, partition | {resp} if resp else partition,
                                 uncolored - resp):
                return resp
        raise InnerLost("no winning response from this position")

    def refuting_mark(self, state: GameState) -> tuple[int, ...]:
        """A Lister mark from which every Painter response loses."""
        uncolored = state.uncolored(self.g)
        partition = state.partition()
        for v in sorted(uncolored):
            if state.tokens[v] == 0:
                return (v,)
        for marked in self._lister_moves(uncolored):
            tokens = tuple(
                t - 1 if v in marked else t for v, t in enumerate(state.tokens)
            )
            if not any(
                self.painter_wins(tokens, partition | {r} if r else partition,
                                  uncolored - r)
                for r in self._responses(marked)
            ):
                return marked
        raise ValueError("position is winning for Painter; no refuting mark")


@dataclass
class GameVerdict:
    painter_wins: bool
    solver: PaintSolver
    tokens: tuple[int, ...]

    def strategy(self) -> "SolverPainter":
        if not self.painter_wins:
            raise ValueError("Painter does not win; no strategy to extract")
        return SolverPainter(self.solver)


def solve_xp_r(
    g: Graph,
    r: int,
    f,
    *,
    max_n: int = 7,
    force: bool = False,
    memo: bool = True,
    node_budget: int | None = None,
    time_limit: float | None = None,
) -> GameVerdict:
    """Exact minimax verdict of the r-dynamic paintability game with tokens f."""
    if g.n > max_n and not force:
        raise BudgetExceeded(f"n={g.n} above game solver cap {max_n}")
    tokens = normalize_tokens(g, f)
    deadline = None if time_limit is None else time.monotonic() + time_limit
    solver = PaintSolver(g, r, memo=memo, node_budget=node_budget,
                         deadline=deadline)
    wins = solver.painter_wins(tokens, frozenset(), frozenset(g.vertices()))
    return GameVerdict(wins, solver, tokens)


# -- painter strategies --------------------------------------------------------------


class SolverPainter:
    """Painter that replays the minimax solution (deterministic tie-breaking)."""

    def __init__(self, solver: PaintSolver):
        self.solver = solver

    def respond(self, state: GameState, marked: frozenset[int]) -> frozenset[int]:
        return self.solver.winning_response(state, marked)


@dataclass(frozen=True)
class RejectionRule:
    """Veto rule for one T-vertex: reject while the condition holds this round.

    kind 'colored_any': fires when the response-so-far touches `watch`.
    kind 'colored_all': fires when all of `watch` is being colored this round.
    kind 'few_colors' : fires when fewer than `threshold` distinct colors sit on
                        `observe` (colors from earlier rounds) and the
                        response-so-far touches `watch`.
    """

    kind: str
    watch: frozenset[int]
    observe: frozenset[int] = frozenset()
    threshold: int = 0
    note: str = ""

    def fires(self, partition: Partition, being_colored: frozenset[int]) -> bool:
        if self.kind == "colored_any":
            return bool(being_colored & self.watch)
        if self.kind == "colored_all":
            return bool(self.watch) and self.watch <= being_colored
        if self.kind == "few_colors":
            distinct = sum(1 for cls in partition if cls & self.observe)
            return distinct < self.threshold and bool(being_colored & self.watch)
        raise ValueError(f"unknown rule kind {self.kind}")

    def render(self) -> str:
        if self.kind == "colored_any":
            body = f"any of {sorted(self.watch)} is being colored"
        elif self.kind == "colored_all":
            body = f"all of {sorted(self.watch)} are being colored"
        else:
            body = (f"{sorted(self.observe)} shows < {self.threshold} colors and "
                    f"any of {sorted(self.watch)} is being colored")
        tag = f" [{self.note}]" if self.note else ""
        return f"reject while {body}{tag}"


def dull_rule(g: Graph, w: int, r: int = 3, note: str = "") -> RejectionRule:
    """Veto while w is dull (< min(r, d(w)) - 1 colors on N(w)) and a neighbor of w
    is being colored."""
    nbrs = frozenset(g.neighbors(w))
    return RejectionRule(
        "few_colors",
        watch=nbrs,
        observe=nbrs,
        threshold=min(r, g.degree(w)) - 1,
        note=note or f"dull({w})",
    )


class GPrimeFirstPainter:
    """Composite Painter: a winning strategy on G' plus trigger-vetoed T-vertices.

    The inner game state is derived from the outer one (tokens restrict, color
    classes restrict), so the painter is a pure function of the outer position
    and can be driven by an exhaustive adversary with memoization.
    """

    def __init__(
        self,
        g: Graph,
        r: int,
        gprime_vertices: frozenset[int],
        gprime_edges: frozenset[tuple[int, int]],
        s_order: Sequence[int],
        triggers: dict[int, tuple[RejectionRule, ...]],
        inner_solver: PaintSolver | None = None,
    ):
        self.g = g
        self.r = r
        self.gv = frozenset(gprime_vertices)
        self.s_order = tuple(s_order)
        if self.gv & set(self.s_order):
            raise ValueError("S overlaps V(G')")
        self.triggers = triggers
        self.dense_of = {v: i for i, v in enumerate(sorted(self.gv))}
        self.orig_of = {i: v for v, i in self.dense_of.items()}
        edges = [(self.dense_of[u], self.dense_of[w]) for u, w in gprime_edges]
        self.gprime = Graph(len(self.gv), edges)
        self.inner = inner_solver or PaintSolver(self.gprime, r)

    def inner_state(self, state: GameState) -> GameState:
        tokens = tuple(state.tokens[self.orig_of[i]] for i in range(self.gprime.n))
        classes = tuple(
            frozenset(self.dense_of[v] for v in cls if v in self.gv)
            for cls in state.classes
        )
        return GameState(tokens, classes)

    def respond(self, state: GameState, marked: frozenset[int]) -> frozenset[int]:
        inner_marked = frozenset(v for v in marked if v in self.gv)
        response: set[int] = set()
        if inner_marked:
            inner_resp = self.inner.winning_response(
                self.inner_state(state),
                frozenset(self.dense_of[v] for v in inner_marked),
            )
            response |= {self.orig_of[i] for i in inner_resp}
        partition = state.partition()
        colored = state.colored
        for t in self.s_order:
            if t not in marked or t in colored:
                continue
            vetoed = any(
                rule.fires(partition, frozenset(response))
                for rule in self.triggers.get(t, ())
            )
            if not vetoed:
                response.add(t)
        for u, v in combinations(sorted(response), 2):
            if self.g.has_edge(u, v):
                raise IllegalResponse(
                    f"triggers allowed adjacent pair {u},{v} in one round"
                )
        return frozenset(response)


# -- transcripts and adversaries -------------------------------------------------------


@dataclass
class RoundRecord:
    index: int
    marked: tuple[int, ...]
    colored: tuple[int, ...]
    tokens: tuple[int, ...]
    rejected: tuple[int, ...]


@dataclass
class Transcript:
    rounds: list[RoundRecord]
    final: GameState
    outcome: str   # 'painter', 'lister', or a failure note
    rejections: dict[int, int]

    def render(self) -> str:
        lines = []
        for rec in self.rounds:
            lines.append(
                f"round {rec.index} | marked: {' '.join(map(str, rec.marked)) or '-'}"
                f" | colored: {' '.join(map(str, rec.colored)) or '-'}"
                f" | tokens: {' '.join(map(str, rec.tokens))}"
            )
        lines.append(f"outcome: {self.outcome}")
        return "\n".join(lines)

    def to_json(self) -> str:
        return json.dumps({
            "rounds": [
                {"index": r.index, "marked": list(r.marked),
                 "colored": list(r.colored), "tokens": list(r.tokens),
                 "rejected": list(r.rejected)}
                for r in self.rounds
            ],
            "outcome": self.outcome,
            "rejections": {str(k): v for k, v in sorted(self.rejections.items())},
        }, indent=2)


def run_transcript(
    g: Graph,
    r: int,
    painter,
    marks: Iterable[Iterable[int]],
    f,
) -> Transcript:
    """Play a scripted sequence of Lister marks against a painter."""
    state = GameState(normalize_tokens(g, f))
    ledger = RejectionLedger()
    rounds: list[RoundRecord] = []
    outcome = "painter"
    for i, marked in enumerate(marks, start=1):
        marked = frozenset(marked)
        if any(state.tokens[v] == 0 for v in marked):
            outcome = "lister"
            state = play_round(g, state, marked, frozenset())
            rounds.append(RoundRecord(i, tuple(sorted(marked)), (), state.tokens, ()))
            break
        response = painter.respond(state, marked)
        state = play_round(g, state, marked, response)
        rejected = tuple(sorted(marked - response))
        ledger.bump(rejected)
        rounds.append(RoundRecord(i, tuple(sorted(marked)),
                                  tuple(sorted(response)), state.tokens, rejected))
        if not state.uncolored(g):
            break
    if outcome == "painter":
        if state.uncolored(g):
            outcome = "unfinished"
        elif not verify_r_dynamic(g, state.coloring(), r).ok:
            outcome = "painter-coloring-not-dynamic"
    return Transcript(rounds, state, outcome, dict(ledger.counts))


@dataclass
class CertificationReport:
    ok: bool
    reason: str
    losing_line: list[tuple[int, ...]] | None
    max_rejections: dict[int, int]
    states: int

    def render(self) -> str:
        head = "PASS" if self.ok else f"FAIL: {self.reason}"
        rej = " ".join(f"{v}:{c}" for v, c in sorted(self.max_rejections.items()))
        return f"{head} | states {self.states} | max rejections {rej or '-'}"


def certify_painter(
    g: Graph,
    r: int,
    f,
    painter,
    *,
    node_cap: int = 10_000_000,
    track: Iterable[int] = (),
) -> CertificationReport:
    """Exhaustive Lister: every mark sequence is played against the painter.

    The painter must be a pure function of the game state, so positions can be
    memoized.  Rejection counts are state-derivable (marks minus coloring), so
    per-vertex maxima over all lines are exact.
    """
    f = normalize_tokens(g, f)
    track = tuple(sorted(set(track)))
    memo: dict = {}
    max_rej = {v: 0 for v in track}
    states = 0
    losing: list[tuple[int, ...]] | None = None
    reason = ""

    def rejections(state: GameState, v: int) -> int:
        spent = f[v] - state.tokens[v]
        return spent - (1 if v in state.colored else 0)

    def explore(state: GameState, line: list[tuple[int, ...]]) -> bool:
        nonlocal states, losing, reason
        uncolored = state.uncolored(g)
        for v in track:
            max_rej[v] = max(max_rej[v], rejections(state, v))
        if not uncolored:
            if verify_r_dynamic(g, state.coloring(), r).ok:
                return True
            losing, reason = list(line), "final coloring not r-dynamic"
            return False
        if any(state.tokens[v] == 0 for v in uncolored):
            v = min(v for v in uncolored if state.tokens[v] == 0)
            losing, reason = list(line) + [(v,)], "marked a token-less vertex"
            return False
        key = (tuple(state.tokens[v] if v in uncolored else 0
                     for v in range(g.n)), state.partition())
        hit = memo.get(key)
        if hit is not None:
            return hit
        states += 1
        if states > node_cap:
            raise BudgetExceeded(f"exhaustive adversary exceeded {node_cap} states")
        verts = sorted(uncolored)
        ok = True
        for mask in range(1, 1 << len(verts)):
            marked = frozenset(v for i, v in enumerate(verts) if (mask >> i) & 1)
            try:
                response = painter.respond(state, marked)
            except (IllegalResponse, InnerLost, BudgetViolated) as exc:
                losing = list(line) + [tuple(sorted(marked))]
                reason = f"{type(exc).__name__}: {exc}"
                ok = False
                break
            child = play_round(g, state, marked, response)
            for t in track:
                if rejections(child, t) >= f[t] and t in child.uncolored(g):
                    losing = list(line) + [tuple(sorted(marked))]
                    reason = (f"vertex {t} drained: {rejections(child, t)} rejections"
                              f" with {f[t]} tokens")
                    ok = False
                    break
            if not ok:
                break
            line.append(tuple(sorted(marked)))
            good = explore(child, line)
            line.pop()
            if not good:
                ok = False
                break
        memo[key] = ok
        return ok

    ok = explore(GameState(f), [])
    return CertificationReport(ok, "" if ok else reason, losing, max_rej, states)


def run_gprime_first(
    g: Graph,
    r: int,
    gprime_vertices,
    gprime_edges,
    triggers: dict[int, tuple[RejectionRule, ...]],
    f,
    lister="exhaustive",
    *,
    s_order: Sequence[int] | None = None,
    node_cap: int = 10_000_000,
):
    """Drive the composite strategy; exhaustive lister or a scripted mark list.

    With the exhaustive adversary the result is a CertificationReport whose
    max_rejections must stay at or below f(v)-1 for every T-vertex; a scripted
    adversary yields a single Transcript.
    """
    gv = frozenset(gprime_vertices)
    order = tuple(s_order) if s_order is not None else tuple(
        sorted(set(g.vertices()) - gv)
    )
    painter = GPrimeFirstPainter(
        g, r, gv, frozenset(tuple(e) for e in gprime_edges), order, triggers
    )
    if lister == "exhaustive":
        return certify_painter(g, r, f, painter, node_cap=node_cap, track=order)
    transcript = run_transcript(g, r, painter, lister, f)
    tokens = normalize_tokens(g, f)
    for t in order:
        if transcript.rejections.get(t, 0) > tokens[t] - 1:
            raise BudgetViolated(
                f"vertex {t} rejected {transcript.rejections[t]} times with "
                f"{tokens[t]} tokens; the trigger set is wrong"
            )
    return transcript


# -- paint number -------------------------------------------------------------------


@dataclass(frozen=True)
class XpResult:
    lower: int
    upper: int
    exact: bool
    provenance: tuple[str, ...]

    @property
    def value(self) -> int:
        if not self.exact:
            raise ValueError("only an interval is known")
        return self.lower

    def render(self) -> str:
        if self.exact:
            return f"{self.lower}  ({'; '.join(self.provenance)})"
        return f"[{self.lower}, {self.upper}]  ({'; '.join(self.provenance)})"


def xp_r_number(
    g: Graph,
    r: int,
    *,
    max_n: int = 7,
    force: bool = False,
    node_budget: int | None = None,
    genus: int | None = None,
) -> XpResult:
    """Exact paint number by ascending uniform-token solves; interval fallback.

    When the game is out of reach, returns the sandwich between the exact (or
    partially-bounded) chromatic side and the best applicable structural upper
    bound, each tagged with its provenance.
    """
    if g.n == 0:
        return XpResult(0, 0, True, ("empty graph",))
    if g.n <= max_n or force:
        try:
            k = max(min(r, g.degree(v)) + 1 for v in g.vertices()) if g.m else 1
            while True:
                verdict = solve_xp_r(g, r, k, max_n=max_n, force=force,
                                     node_budget=node_budget)
                if verdict.painter_wins:
                    return XpResult(k, k, True, ("exhaustive game minimax",))
                k += 1
        except BudgetExceeded:
            pass
    lower, lower_note = 1, "trivial"
    try:
        from .coloring import chi_r_exact

        lower = chi_r_exact(g, r).value
        lower_note = "exact chromatic side of the sandwich"
    except BudgetExceeded as exc:
        if exc.lower:
            lower, lower_note = exc.lower, "partial chromatic search"
    upper, upper_note = g.n, "rainbow bound"
    if genus is not None:
        if genus <= 1 and r == 3 and 10 < upper:
            upper, upper_note = 10, "toroidal 3-dynamic paintability bound"
        if genus == 0 and r == 2 and 5 < upper:
            upper, upper_note = 5, "planar 2-dynamic paintability bound"
        from .bounds import bound_profile

        prof = bound_profile(genus, r)
        if prof.applicable and prof.ell < upper:
            upper, upper_note = prof.ell, "genus contraction bound"
    return XpResult(lower, upper, lower == upper, (lower_note, upper_note))


# -- strategy trees -------------------------------------------------------------------


def strategy_tree(
    g: Graph, r: int, f, solver: PaintSolver, *, node_cap: int = 200_000
) -> dict:
    """Materialized winning strategy: every Lister mark mapped to the response.

    States are shared by canonical key so the tree is a DAG in memory and in
    the serialized form (nodes table plus root).
    """
    f = normalize_tokens(g, f)
    painter = SolverPainter(solver)
    nodes: dict = {}
    order: list = []

    def key_of(state: GameState):
        return (state.tokens, tuple(sorted(map(sorted, state.partition()))))

    def build(state: GameState) -> str:
        key = key_of(state)
        name = json.dumps(key)
        if name in nodes:
            return name
        if len(nodes) > node_cap:
            raise BudgetExceeded("strategy tree too large to materialize")
        entry = {"tokens": list(state.tokens),
                 "classes": sorted(sorted(c) for c in state.partition()),
                 "moves": {}}
        nodes[name] = entry
        order.append(name)
        uncolored = sorted(state.uncolored(g))
        for mask in range(1, 1 << len(uncolored)):
            marked = frozenset(v for i, v in enumerate(uncolored) if (mask >> i) & 1)
            resp = painter.respond(state, marked)
            child = play_round(g, state, marked, resp)
            entry["moves"][" ".join(map(str, sorted(marked)))] = {
                "color": sorted(resp),
                "next": build(child) if child.uncolored(g) else None,
            }
        return name

    root = build(GameState(f))
    return {"graph_n": g.n, "edges": g.edges(), "r": r,
            "tokens": list(f), "root": root, "nodes": nodes}


class TreePainter:
    """Painter replaying a serialized strategy tree."""

    def __init__(self, tree: dict):
        self.tree = tree

    def respond(self, state: GameState, marked: frozenset[int]) -> frozenset[int]:
        key = json.dumps((state.tokens,
                          tuple(sorted(map(sorted, state.partition())))))
        node = self.tree["nodes"].get(key)
        if node is None:
            raise InnerLost("position not in strategy tree")
        move = node["moves"].get(" ".join(map(str, sorted(marked))))
        if move is None:
            raise InnerLost("mark not in strategy tree")
        return frozenset(move["color"])

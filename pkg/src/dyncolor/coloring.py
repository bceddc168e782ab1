"""r-dynamic coloring: verification, exact chromatic search, list colorability.

An r-dynamic coloring is a proper coloring where every vertex v sees at least
min(r, d(v)) distinct colors on its open neighborhood.  The exact solver is a
DSATUR-style backtracker extended with a sound dynamic-deficiency prune: a
partial coloring dies as soon as some vertex's distinct-colored-neighbor count
plus its uncolored-neighbor count drops below its requirement.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Mapping

from .errors import BudgetExceeded, ParseError, PartialInput, RNotSaturating
from .graph import Graph, graph_power


@dataclass(frozen=True)
class DynamicReport:
    r: int
    proper: bool
    improper_edges: tuple[tuple[int, int], ...]
    seen: tuple[int, ...]       # distinct colors on N(v)
    required: tuple[int, ...]   # min(r, d(v))
    violations: tuple[int, ...]

    @property
    def ok(self) -> bool:
        return self.proper and not self.violations

    def render(self) -> str:
        lines = [f"r={self.r} verdict={'PASS' if self.ok else 'FAIL'}"]
        if self.improper_edges:
            lines.append("improper edges: " +
                         " ".join(f"{u}-{v}" for u, v in self.improper_edges))
        for v in range(len(self.seen)):
            mark = "" if self.seen[v] >= self.required[v] else "  <-- deficient"
            lines.append(f"vertex {v}: sees {self.seen[v]} of {self.required[v]}{mark}")
        return "\n".join(lines)


def verify_r_dynamic(g: Graph, coloring: Mapping[int, int], r: int) -> DynamicReport:
    missing = [v for v in g.vertices() if v not in coloring]
    if missing:
        raise PartialInput(f"vertices without a color: {missing[:10]}")
    improper = tuple(
        (u, v) for u, v in g.edges() if coloring[u] == coloring[v]
    )
    seen = tuple(len({coloring[w] for w in g.neighbors(v)}) for v in g.vertices())
    required = tuple(min(r, g.degree(v)) for v in g.vertices())
    violations = tuple(v for v in g.vertices() if seen[v] < required[v])
    return DynamicReport(r, not improper, improper, seen, required, violations)


# -- exact search ----------------------------------------------------------------


class _Searcher:
    """Backtracking core shared by the k-palette and list-assignment modes."""

    def __init__(self, g: Graph, r: int, node_budget: int,
                 deadline: float | None = None):
        self.g = g
        self.r = r
        self.need = [min(r, g.degree(v)) for v in g.vertices()]
        self.node_budget = node_budget
        self.deadline = deadline
        self.nodes = 0

    def solve(self, allowed) -> dict[int, int] | None:
        """allowed(v, used_max) -> candidate colors in ascending order."""
        g = self.g
        color: dict[int, int] = {}
        nbr_colors: list[dict[int, int]] = [dict() for _ in g.vertices()]
        uncolored_nbrs = [g.degree(v) for v in g.vertices()]
        self._allowed = allowed

        def viable(w: int) -> bool:
            return len(nbr_colors[w]) + uncolored_nbrs[w] >= self.need[w]

        def pick() -> int:
            best, best_key = -1, None
            for v in g.vertices():
                if v in color:
                    continue
                sat = len(nbr_colors[v])
                key = (sat, self.need[v] - sat, g.degree(v), -v)
                if best_key is None or key > best_key:
                    best, best_key = v, key
            return best

        def rec(used_max: int) -> bool:
            if len(color) == g.n:
                return True
            self.nodes += 1
            if self.nodes > self.node_budget:
                raise BudgetExceeded(f"coloring search exceeded {self.node_budget} nodes")
            if self.deadline is not None and time.monotonic() > self.deadline:
                raise BudgetExceeded("coloring search hit the time limit")
            v = pick()
            forbidden = nbr_colors[v]
            for c in self._allowed(v, used_max):
                if c in forbidden:
                    continue
                color[v] = c
                touched = []
                ok = True
                for w in g.neighbors(v):
                    uncolored_nbrs[w] -= 1
                    nbr_colors[w][c] = nbr_colors[w].get(c, 0) + 1
                    touched.append(w)
                    if not viable(w):
                        ok = False
                if ok and rec(max(used_max, c)):
                    return True
                del color[v]
                for w in touched:
                    uncolored_nbrs[w] += 1
                    if nbr_colors[w][c] == 1:
                        del nbr_colors[w][c]
                    else:
                        nbr_colors[w][c] -= 1
            return False

        if rec(0):
            return dict(color)
        return None


def r_dynamic_coloring(
    g: Graph, r: int, k: int, *, node_budget: int = 5_000_000,
    deadline: float | None = None,
) -> dict[int, int] | None:
    """A witness r-dynamic coloring with colors in 1..k, or None.

    Colors are tried ascending and a fresh color is introduced only after all
    smaller ones are in use, so the search sees each coloring once up to renaming.
    """
    searcher = _Searcher(g, r, node_budget, deadline)

    def allowed(v: int, used_max: int):
        return range(1, min(k, used_max + 1) + 1)

    witness = searcher.solve(allowed)
    if witness is not None:
        report = verify_r_dynamic(g, witness, r)
        if not report.ok:
            raise AssertionError("solver returned a bad witness")
    return witness


@dataclass(frozen=True)
class ChiResult:
    value: int
    witness: dict[int, int]


def chi_r_exact(
    g: Graph,
    r: int,
    *,
    max_n: int = 16,
    force: bool = False,
    node_budget: int = 5_000_000,
    time_limit: float | None = None,
) -> ChiResult:
    """Exact r-dynamic chromatic number with a verifying witness."""
    if g.n > max_n and not force:
        raise BudgetExceeded(
            f"n={g.n} above solver cap {max_n}; pass force=True to override",
            lower=None, upper=g.n,
        )
    if g.n == 0:
        return ChiResult(0, {})
    deadline = None if time_limit is None else time.monotonic() + time_limit
    lower = max(min(r, g.degree(v)) + 1 for v in g.vertices())
    for k in range(lower, g.n + 1):
        try:
            witness = r_dynamic_coloring(g, r, k, node_budget=node_budget,
                                         deadline=deadline)
        except BudgetExceeded as exc:
            raise BudgetExceeded(str(exc), lower=k, upper=g.n) from exc
        if witness is not None:
            return ChiResult(k, witness)
    raise AssertionError("rainbow coloring must succeed at k=n")


def is_L_colorable_r_dynamic(
    g: Graph,
    lists: Mapping[int, set[int]],
    r: int,
    *,
    node_budget: int = 5_000_000,
) -> dict[int, int] | None:
    """A witness r-dynamic coloring drawn from the lists, or None if unsatisfiable."""
    for v in g.vertices():
        if v not in lists or not lists[v]:
            raise ValueError(f"vertex {v} has no list")
    ordered = {v: tuple(sorted(lists[v])) for v in g.vertices()}
    searcher = _Searcher(g, r, node_budget)
    witness = searcher.solve(lambda v, used_max: ordered[v])
    if witness is not None:
        report = verify_r_dynamic(g, witness, r)
        if not report.ok or any(witness[v] not in lists[v] for v in g.vertices()):
            raise AssertionError("solver returned a bad witness")
    return witness


def chi_r_via_square(g: Graph, r: int, **kwargs) -> int:
    """chi_r for saturating r (r >= max degree) via the square's chromatic number."""
    if r < g.max_degree():
        raise RNotSaturating(f"r={r} below max degree {g.max_degree()}")
    return chi_r_exact(graph_power(g, 2), 1, **kwargs).value


def ch_r_lower_bound_from_lists(
    g: Graph, r: int, k: int, *, node_budget: int = 5_000_000
) -> bool:
    """True iff the identical {1..k} assignment refutes k, proving ch_r > k."""
    lists = {v: set(range(1, k + 1)) for v in g.vertices()}
    return is_L_colorable_r_dynamic(g, lists, r, node_budget=node_budget) is None


# -- coloring file io -------------------------------------------------------------


def parse_coloring(text: str) -> dict[int, int]:
    out: dict[int, int] = {}
    offset = 0
    for line in text.splitlines(keepends=True):
        stripped = line.split("#", 1)[0].strip()
        if stripped:
            parts = stripped.split()
            if len(parts) != 2:
                raise ParseError(f"expected '<vertex> <color>', got {stripped!r}", offset)
            try:
                v, c = int(parts[0]), int(parts[1])
            except ValueError:
                raise ParseError(f"non-integer in {stripped!r}", offset)
            if c <= 0:
                raise ParseError("colors are positive integers", offset)
            out[v] = c
        offset += len(line)
    return out


def emit_coloring(coloring: Mapping[int, int]) -> str:
    return "".join(f"{v} {coloring[v]}\n" for v in sorted(coloring))


def parse_lists(text: str) -> dict[int, set[int]]:
    """Lines '<v>: c1 c2 ...' defining a list assignment."""
    out: dict[int, set[int]] = {}
    offset = 0
    for line in text.splitlines(keepends=True):
        stripped = line.split("#", 1)[0].strip()
        if stripped:
            if ":" not in stripped:
                raise ParseError("expected '<v>: c1 c2 ...'", offset)
            head, _, tail = stripped.partition(":")
            try:
                v = int(head.strip())
                colors = {int(t) for t in tail.split()}
            except ValueError:
                raise ParseError(f"non-integer in {stripped!r}", offset)
            if not colors:
                raise ParseError(f"empty list for vertex {v}", offset)
            out[v] = colors
        offset += len(line)
    return out

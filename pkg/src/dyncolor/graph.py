"""Simple undirected graphs on dense integer vertex ids, plus graph6 / edge-list io.

Graphs are immutable values: every mutating operation returns a new graph
together with a VertexRemap describing how old ids moved, so callers holding
vertex references can re-address them after surgery.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .errors import LoopRequested, NotAnEdge, ParseError


class Graph:
    """Simple undirected graph; vertices are exactly 0..n-1."""

    __slots__ = ("n", "adj")

    def __init__(self, n: int, edges=()):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise LoopRequested(f"loop requested at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range for n={n}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        self.n = n
        self.adj: tuple[tuple[int, ...], ...] = tuple(tuple(sorted(s)) for s in nbrs)

    # -- queries ------------------------------------------------------------

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adj[v]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.adj[u] if u < v]

    @property
    def m(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def vertices(self) -> range:
        return range(self.n)

    def max_degree(self) -> int:
        return max((len(a) for a in self.adj), default=0)

    def min_degree(self) -> int:
        return min((len(a) for a in self.adj), default=0)

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        seen = {0}
        queue = deque([0])
        while queue:
            u = queue.popleft()
            for w in self.adj[u]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        return len(seen) == self.n

    def components(self) -> list[list[int]]:
        seen: set[int] = set()
        comps = []
        for s in range(self.n):
            if s in seen:
                continue
            comp = [s]
            seen.add(s)
            queue = deque([s])
            while queue:
                u = queue.popleft()
                for w in self.adj[u]:
                    if w not in seen:
                        seen.add(w)
                        comp.append(w)
                        queue.append(w)
            comps.append(sorted(comp))
        return comps

    def distances_from(self, s: int) -> list[int]:
        """BFS distances; -1 for unreachable."""
        dist = [-1] * self.n
        dist[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in self.adj[u]:
                if dist[w] < 0:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return dist

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.adj == other.adj

    def __hash__(self) -> int:
        return hash((self.n, self.adj))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


REMOVED = "removed"


@dataclass(frozen=True)
class VertexRemap:
    """Maps old vertex ids to new ones after a mutating operation.

    `image[v]` is the new id of old vertex v, or None if v was removed.
    `merged_into[v]`, when present, names the old vertex that absorbed v.
    """

    image: tuple[int | None, ...]
    merged_into: dict[int, int]

    def apply(self, v: int) -> int | None:
        return self.image[v]

    def target(self, v: int) -> int | None:
        """New id of v, following merges (absorbed vertices map to the absorber)."""
        if self.image[v] is not None:
            return self.image[v]
        if v in self.merged_into:
            return self.image[self.merged_into[v]]
        return None

    def compose(self, later: "VertexRemap") -> "VertexRemap":
        image = []
        for v in range(len(self.image)):
            mid = self.image[v]
            image.append(None if mid is None else later.image[mid])
        merged = dict(self.merged_into)
        inv = {new: old for old, new in enumerate(self.image) if new is not None}
        for mid, tgt in later.merged_into.items():
            if mid in inv:
                merged[inv[mid]] = inv[tgt]
        return VertexRemap(tuple(image), merged)

    @staticmethod
    def identity(n: int) -> "VertexRemap":
        return VertexRemap(tuple(range(n)), {})


def _compact_remap(n: int, removed: set[int], merged: dict[int, int]) -> VertexRemap:
    image: list[int | None] = []
    nxt = 0
    for v in range(n):
        if v in removed:
            image.append(None)
        else:
            image.append(nxt)
            nxt += 1
    return VertexRemap(tuple(image), merged)


def delete_vertices(g: Graph, doomed) -> tuple[Graph, VertexRemap]:
    doomed = set(doomed)
    remap = _compact_remap(g.n, doomed, {})
    edges = [
        (remap.image[u], remap.image[v])
        for u, v in g.edges()
        if u not in doomed and v not in doomed
    ]
    return Graph(g.n - len(doomed), edges), remap


def contract_edge(g: Graph, u: int, v: int) -> tuple[Graph, VertexRemap]:
    """Contract edge uv; v absorbs u's edges, multiedges merged, loop dropped."""
    if not g.has_edge(u, v):
        raise NotAnEdge(f"({u},{v}) is not an edge")
    remap = _compact_remap(g.n, {u}, {u: v})
    new_v = remap.image[v]
    edges = set()
    for a, b in g.edges():
        na = new_v if a == u else remap.image[a]
        nb = new_v if b == u else remap.image[b]
        if na != nb:
            edges.add((min(na, nb), max(na, nb)))
    return Graph(g.n - 1, edges), remap


def add_edges(g: Graph, new_edges) -> Graph:
    """Union with the given pairs; already-present edges are silently kept single."""
    for u, v in new_edges:
        if u == v:
            raise LoopRequested(f"loop requested at vertex {u}")
    return Graph(g.n, list(g.edges()) + [tuple(e) for e in new_edges])


def graph_power(g: Graph, k: int) -> Graph:
    """Edge between u,v iff their distance in g is between 1 and k."""
    if k < 1:
        raise ValueError("power must be >= 1")
    edges = []
    for s in range(g.n):
        dist = g.distances_from(s)
        for t in range(s + 1, g.n):
            if 0 < dist[t] <= k:
                edges.append((s, t))
    return Graph(g.n, edges)


def subgraph(g: Graph, keep) -> tuple[Graph, VertexRemap]:
    keep = set(keep)
    return delete_vertices(g, set(g.vertices()) - keep)


# -- graph6 ------------------------------------------------------------------

_G6_HEADER = ">>graph6<<"


def _g6_decode_n(data: bytes) -> tuple[int, int]:
    """Return (n, bytes consumed) from the graph6 size field."""
    if not data:
        raise ParseError("empty graph6 string", 0)
    b0 = data[0]
    if b0 != 126:
        if not 63 <= b0 <= 125:
            raise ParseError(f"bad size byte {b0}", 0)
        return b0 - 63, 1
    if len(data) < 4:
        raise ParseError("truncated long size field", len(data))
    if data[1] != 126:
        vals = [data[i] - 63 for i in (1, 2, 3)]
        for i, x in enumerate(vals):
            if not 0 <= x <= 63:
                raise ParseError(f"bad size byte {data[i + 1]}", i + 1)
        return (vals[0] << 12) | (vals[1] << 6) | vals[2], 4
    if len(data) < 8:
        raise ParseError("truncated very long size field", len(data))
    vals = [data[i] - 63 for i in range(2, 8)]
    for i, x in enumerate(vals):
        if not 0 <= x <= 63:
            raise ParseError(f"bad size byte {data[i + 2]}", i + 2)
    n = 0
    for x in vals:
        n = (n << 6) | x
    return n, 8


def parse_graph6(text: str) -> Graph:
    s = text.strip()
    if s.startswith(_G6_HEADER):
        s = s[len(_G6_HEADER):].strip()
    data = s.encode("ascii", errors="replace")
    n, off = _g6_decode_n(data)
    nbits = n * (n - 1) // 2
    nbytes = (nbits + 5) // 6
    if len(data) - off < nbytes:
        raise ParseError(
            f"need {nbytes} data bytes for n={n}, found {len(data) - off}", len(data)
        )
    if len(data) - off > nbytes:
        raise ParseError("trailing bytes after graph6 data", off + nbytes)
    bits = []
    for i in range(nbytes):
        b = data[off + i]
        if not 63 <= b <= 126:
            raise ParseError(f"data byte {b} out of graph6 range", off + i)
        x = b - 63
        bits.extend((x >> shift) & 1 for shift in (5, 4, 3, 2, 1, 0))
    edges = []
    idx = 0
    for v in range(1, n):
        for u in range(v):
            if bits[idx]:
                edges.append((u, v))
            idx += 1
    return Graph(n, edges)


def emit_graph6(g: Graph) -> str:
    n = g.n
    if n <= 62:
        head = bytes([n + 63])
    elif n <= 258047:
        head = bytes([126, 63 + (n >> 12), 63 + ((n >> 6) & 63), 63 + (n & 63)])
    else:
        raise ValueError("graph too large for this graph6 writer")
    bits = []
    for v in range(1, n):
        for u in range(v):
            bits.append(1 if g.has_edge(u, v) else 0)
    while len(bits) % 6:
        bits.append(0)
    body = bytearray()
    for i in range(0, len(bits), 6):
        x = 0
        for b in bits[i:i + 6]:
            x = (x << 1) | b
        body.append(x + 63)
    return (head + bytes(body)).decode("ascii")


# -- edge list ----------------------------------------------------------------

def parse_edge_list(text: str) -> Graph:
    edges = []
    max_v = -1
    offset = 0
    for line in text.splitlines(keepends=True):
        stripped = line.split("#", 1)[0].strip()
        if stripped:
            parts = stripped.split()
            if len(parts) != 2:
                raise ParseError(f"expected 'u v', got {stripped!r}", offset)
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError:
                raise ParseError(f"non-integer vertex in {stripped!r}", offset)
            if u < 0 or v < 0:
                raise ParseError("negative vertex id", offset)
            if u == v:
                raise ParseError(f"loop at vertex {u}", offset)
            edges.append((u, v))
            max_v = max(max_v, u, v)
        offset += len(line)
    return Graph(max_v + 1, edges)


def emit_edge_list(g: Graph) -> str:
    return "".join(f"{u} {v}\n" for u, v in g.edges())


def parse_graph(text: str, fmt: str = "auto") -> Graph:
    if fmt == "graph6":
        return parse_graph6(text)
    if fmt == "edge-list":
        return parse_edge_list(text)
    if fmt == "auto":
        body = text.strip()
        if body.startswith(_G6_HEADER):
            return parse_graph6(text)
        # edge lists contain spaces or comments on the first payload line
        first = next((ln for ln in body.splitlines() if ln.strip()), "")
        if " " in first.strip() or first.lstrip().startswith("#"):
            return parse_edge_list(text)
        return parse_graph6(text)
    raise ValueError(f"unknown format {fmt!r}")


def emit_graph(g: Graph, fmt: str) -> str:
    if fmt == "graph6":
        return emit_graph6(g)
    if fmt == "edge-list":
        return emit_edge_list(g)
    raise ValueError(f"unknown format {fmt!r}")

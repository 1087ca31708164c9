"""Immutable digraphs on dense integer vertices.

Vertices are ``0 .. vertex_count - 1``.  Loops and duplicate edges are
rejected; antiparallel pairs ``(u, v)`` and ``(v, u)`` are allowed.
Vertex subsets are plain ``frozenset`` objects.
"""

from __future__ import annotations

import re
from typing import AbstractSet, Iterable

__all__ = [
    "Digraph",
    "GraphError",
    "ParseError",
    "BudgetExceeded",
    "PreconditionError",
    "out_neighbors",
    "in_neighbors",
    "min_out_degree",
    "is_oriented",
    "induced_subgraph",
    "prune_to_exact_outdegree",
    "count_two_paths",
    "parse_edge_list",
    "format_edge_list",
    "read_edge_list",
    "to_dot",
]


class GraphError(ValueError):
    """Malformed graph or invalid vertex reference."""


class ParseError(GraphError):
    pass


class BudgetExceeded(RuntimeError):
    """A size or step budget was exceeded."""


class PreconditionError(ValueError):
    """An operation was called outside its stated preconditions."""


class Digraph:
    """A loop-free digraph with no duplicate edges.

    Instances are immutable.  Neighbourhoods are precomputed as frozensets,
    so all queries are cheap reads.
    """

    __slots__ = ("_n", "_edges", "_out", "_in")

    def __init__(self, vertex_count: int, edges: Iterable[tuple[int, int]] = ()):
        if vertex_count < 0:
            raise GraphError(f"negative vertex count {vertex_count}")
        out: list[set[int]] = [set() for _ in range(vertex_count)]
        inn: list[set[int]] = [set() for _ in range(vertex_count)]
        seen = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise GraphError(f"edge ({u}, {v}) out of range for {vertex_count} vertices")
            if u == v:
                raise GraphError(f"loop at vertex {u}")
            if (u, v) in seen:
                raise GraphError(f"duplicate edge ({u}, {v})")
            seen.add((u, v))
            out[u].add(v)
            inn[v].add(u)
        self._n = vertex_count
        self._edges = frozenset(seen)
        self._out = tuple(frozenset(s) for s in out)
        self._in = tuple(frozenset(s) for s in inn)

    @property
    def vertex_count(self) -> int:
        return self._n

    @property
    def edges(self) -> frozenset[tuple[int, int]]:
        return self._edges

    def __len__(self) -> int:
        return self._n

    def vertices(self) -> range:
        return range(self._n)

    def edge_count(self) -> int:
        return len(self._edges)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self._edges)

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self._edges

    def _check(self, v: int) -> None:
        if not 0 <= v < self._n:
            raise GraphError(f"vertex {v} out of range for {self._n} vertices")

    def out_neighbors(self, v: int) -> frozenset[int]:
        self._check(v)
        return self._out[v]

    def in_neighbors(self, v: int) -> frozenset[int]:
        self._check(v)
        return self._in[v]

    def out_degree(self, v: int) -> int:
        return len(self.out_neighbors(v))

    def in_degree(self, v: int) -> int:
        return len(self.in_neighbors(v))

    def neighbors(self, v: int) -> frozenset[int]:
        """Undirected neighbourhood."""
        return self.out_neighbors(v) | self.in_neighbors(v)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Digraph):
            return NotImplemented
        return self._n == other._n and self._edges == other._edges

    def __hash__(self) -> int:
        return hash((self._n, self._edges))

    def __repr__(self) -> str:
        return f"{type(self).__name__}(vertex_count={self._n}, edges={len(self._edges)})"


def out_neighbors(G: Digraph, v: int) -> frozenset[int]:
    return G.out_neighbors(v)


def in_neighbors(G: Digraph, v: int) -> frozenset[int]:
    return G.in_neighbors(v)


def min_out_degree(G: Digraph) -> int:
    if G.vertex_count == 0:
        raise GraphError("minimum out-degree of the empty graph is undefined")
    return min(len(G._out[v]) for v in G.vertices())


def is_oriented(G: Digraph) -> bool:
    """True iff no antiparallel pair of edges is present."""
    return not any((v, u) in G.edges for u, v in G.edges)


def induced_subgraph(G: Digraph, W: Iterable[int]) -> tuple[Digraph, tuple[int, ...]]:
    """Subgraph induced on ``W``, reindexed in ascending order of ``W``.

    Returns the subgraph and the remap record: ``remap[i]`` is the vertex of
    ``G`` that became vertex ``i``.
    """
    members = sorted(set(W))
    for v in members:
        G._check(v)
    index = {v: i for i, v in enumerate(members)}
    edges = [
        (index[u], index[v])
        for u in members
        for v in G._out[u]
        if v in index
    ]
    return Digraph(len(members), edges), tuple(members)


def prune_to_exact_outdegree(G: Digraph, d: int) -> Digraph:
    """Spanning subgraph in which every vertex keeps exactly ``d`` out-edges.

    Each vertex keeps the ``d`` out-edges with the smallest head index.
    """
    if d < 0:
        raise PreconditionError(f"negative degree {d}")
    if G.vertex_count and min_out_degree(G) < d:
        raise PreconditionError(
            f"minimum out-degree {min_out_degree(G)} is below the requested {d}"
        )
    edges = [(u, v) for u in G.vertices() for v in sorted(G._out[u])[:d]]
    return Digraph(G.vertex_count, edges)


def count_two_paths(
    G: Digraph,
    X: AbstractSet[int],
    Y: AbstractSet[int],
    Z: AbstractSet[int],
) -> int:
    """Number of directed 2-paths ``x -> y -> z`` with x in X, y in Y, z in Z.

    The three vertices must be pairwise distinct.  The sets may overlap.
    ``y`` differs from ``x`` and ``z`` automatically since there are no loops,
    so only the ``x == z`` pairs are subtracted.
    """
    total = 0
    for y in Y:
        sources = G.in_neighbors(y) & X
        if not sources:
            continue
        targets = G._out[y] & Z
        total += len(sources) * len(targets) - len(sources & targets)
    return total


_EDGE_LINE = re.compile(r"(0|[1-9][0-9]*) (0|[1-9][0-9]*)")


def parse_edge_list(text: str, cls: type[Digraph] = Digraph) -> Digraph:
    """Parse the edge-list text format.

    The first non-comment line is ``"n m"``; exactly ``m`` lines ``"u v"``
    follow.  Lines starting with ``#`` are ignored.  The text must end with a
    newline.  Loops and duplicate edges are parse errors.
    """
    if not text.endswith("\n"):
        raise ParseError("edge list must end with a newline")
    lines = [ln for ln in text[:-1].split("\n") if not ln.startswith("#")]
    if not lines:
        raise ParseError("missing header line")
    for lineno, ln in enumerate(lines):
        if not _EDGE_LINE.fullmatch(ln):
            raise ParseError(f"malformed line {lineno + 1}: {ln!r}")
    n, m = (int(x) for x in lines[0].split(" "))
    body = lines[1:]
    if len(body) != m:
        raise ParseError(f"header declares {m} edges, found {len(body)}")
    edges = [tuple(int(x) for x in ln.split(" ")) for ln in body]
    try:
        return cls(n, edges)
    except GraphError as exc:
        raise ParseError(str(exc)) from exc


def format_edge_list(G: Digraph) -> str:
    lines = [f"{G.vertex_count} {G.edge_count()}"]
    lines.extend(f"{u} {v}" for u, v in G.sorted_edges())
    return "\n".join(lines) + "\n"


def read_edge_list(path: str, cls: type[Digraph] = Digraph) -> Digraph:
    """Read an edge-list file; ``"-"`` reads standard input."""
    if path == "-":
        import sys

        return parse_edge_list(sys.stdin.read(), cls)
    with open(path, encoding="ascii") as fh:
        return parse_edge_list(fh.read(), cls)


def to_dot(G: Digraph, name: str = "G") -> str:
    lines = [f"digraph {name} {{"]
    lines.extend(f"  v{v};" for v in G.vertices())
    lines.extend(f"  v{u} -> v{v};" for u, v in G.sorted_edges())
    lines.append("}")
    return "\n".join(lines) + "\n"


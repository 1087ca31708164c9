"""Structure of oriented trees: heights, hubs, pruning and classification."""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass
from typing import Iterable

from .digraph import (
    BudgetExceeded,
    Digraph,
    GraphError,
    PreconditionError,
    induced_subgraph,
)

__all__ = [
    "OrientedTree",
    "TreeClassification",
    "PrunedTree",
    "height_function",
    "hub_set",
    "is_grounded",
    "prune_in_leaves",
    "minimal_subtree_containing",
    "is_out_arborescence",
    "is_in_arborescence",
    "is_antidirected",
    "is_instar_subdivision",
    "tree_root",
    "classify",
    "embed_into_Tkl",
    "canonical_code",
    "canonical_tree",
]


class OrientedTree(Digraph):
    """A digraph whose underlying undirected graph is a tree."""

    __slots__ = ()

    def __init__(self, vertex_count: int, edges: Iterable[tuple[int, int]] = ()):
        super().__init__(vertex_count, edges)
        n = self.vertex_count
        if n == 0:
            raise GraphError("an oriented tree needs at least one vertex")
        if self.edge_count() != n - 1:
            raise GraphError(f"a tree on {n} vertices has {n - 1} edges, got {self.edge_count()}")
        seen = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for w in self.neighbors(v):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) != n:
            raise GraphError("underlying graph is not connected")

    @classmethod
    def from_digraph(cls, G: Digraph) -> "OrientedTree":
        if isinstance(G, OrientedTree):
            return G
        return cls(G.vertex_count, G.edges)


def height_function(T: OrientedTree) -> tuple[int, ...]:
    """Levels with ``h[v] == h[u] + 1`` on every edge, normalized to min 0."""
    h: dict[int, int] = {0: 0}
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for w in T.out_neighbors(v):
            if w not in h:
                h[w] = h[v] + 1
                queue.append(w)
        for w in T.in_neighbors(v):
            if w not in h:
                h[w] = h[v] - 1
                queue.append(w)
    low = min(h.values())
    return tuple(h[v] - low for v in T.vertices())


def hub_set(T: Digraph) -> frozenset[int]:
    return frozenset(v for v in T.vertices() if T.in_degree(v) >= 2)


def is_grounded(T: OrientedTree) -> bool:
    hubs = hub_set(T)
    if not hubs:
        return True
    h = height_function(T)
    return len({h[v] for v in hubs}) == 1


def is_out_arborescence(T: OrientedTree) -> bool:
    return all(T.in_degree(v) <= 1 for v in T.vertices())


def is_in_arborescence(T: OrientedTree) -> bool:
    return all(T.out_degree(v) <= 1 for v in T.vertices())


def is_antidirected(T: OrientedTree) -> bool:
    """No directed path of length 2, i.e. no vertex with both in- and out-edges."""
    return not any(T.in_degree(v) and T.out_degree(v) for v in T.vertices())


def is_instar_subdivision(T: OrientedTree) -> bool:
    """In-arborescence in which at most one vertex branches (a spider)."""
    return is_in_arborescence(T) and len(hub_set(T)) <= 1


def tree_root(T: OrientedTree) -> int:
    """Smallest vertex of in-degree 0 (the root of an out-arborescence)."""
    return min(v for v in T.vertices() if T.in_degree(v) == 0)


@dataclass(frozen=True)
class PrunedTree:
    """Result of leaf pruning.

    ``core`` is the pruned tree reindexed in ascending original order;
    ``kept[i]`` is the original vertex behind ``core`` vertex ``i``.
    ``removed`` lists original vertices in removal order.
    """

    core: OrientedTree
    kept: tuple[int, ...]
    removed: tuple[int, ...]


def prune_in_leaves(T: OrientedTree) -> PrunedTree:
    """Iteratively strip leaves whose single edge points into them.

    "Leaf" means undirected degree 1.  Among eligible leaves the smallest
    index goes first, so the removal order is deterministic.
    """
    degree = [len(T.neighbors(v)) for v in T.vertices()]
    alive = [True] * T.vertex_count
    heap = [v for v in T.vertices() if degree[v] == 1 and T.in_degree(v) == 1]
    heapq.heapify(heap)
    removed: list[int] = []
    while heap:
        v = heapq.heappop(heap)
        if not alive[v]:
            continue
        alive[v] = False
        removed.append(v)
        (u,) = T.in_neighbors(v)
        degree[u] -= 1
        # u's in-degree is untouched; it qualifies once it is a sink leaf
        if degree[u] == 1 and T.in_degree(u) == 1:
            heapq.heappush(heap, u)
    core, kept = induced_subgraph(T, (v for v in T.vertices() if alive[v]))
    return PrunedTree(OrientedTree.from_digraph(core), kept, tuple(removed))


def minimal_subtree_containing(
    T: OrientedTree, S: Iterable[int]
) -> tuple[OrientedTree, tuple[int, ...]]:
    """Union of all tree paths between members of ``S``, with its remap."""
    targets = set(S)
    if not targets:
        raise PreconditionError("the vertex set must be nonempty")
    for v in targets:
        T._check(v)
    degree = [len(T.neighbors(v)) for v in T.vertices()]
    alive = [True] * T.vertex_count
    stack = [v for v in T.vertices() if degree[v] <= 1 and v not in targets]
    while stack:
        v = stack.pop()
        if not alive[v] or v in targets:
            continue
        alive[v] = False
        for w in T.neighbors(v):
            if alive[w]:
                degree[w] -= 1
                if degree[w] <= 1 and w not in targets:
                    stack.append(w)
    sub, remap = induced_subgraph(T, (v for v in T.vertices() if alive[v]))
    return OrientedTree.from_digraph(sub), remap


@dataclass(frozen=True)
class TreeClassification:
    hub_set: frozenset[int]
    grounded: bool
    antidirected: bool
    out_arborescence: bool
    hub_subtree_is_out_arborescence: bool
    theorem14_applies: bool

    def to_text(self) -> str:
        def b(x: bool) -> str:
            return "true" if x else "false"

        lines = [
            "hub_set: " + " ".join(str(v) for v in sorted(self.hub_set)),
            f"grounded: {b(self.grounded)}",
            f"antidirected: {b(self.antidirected)}",
            f"out_arborescence: {b(self.out_arborescence)}",
            f"hub_subtree_is_out_arborescence: {b(self.hub_subtree_is_out_arborescence)}",
            f"theorem14_applies: {b(self.theorem14_applies)}",
        ]
        return "\n".join(lines) + "\n"


def classify(T: OrientedTree) -> TreeClassification:
    hubs = hub_set(T)
    grounded = is_grounded(T)
    if len(hubs) <= 1:
        hub_sub_arb = True
    else:
        sub, _ = minimal_subtree_containing(T, hubs)
        hub_sub_arb = is_out_arborescence(sub)
    return TreeClassification(
        hub_set=hubs,
        grounded=grounded,
        antidirected=is_antidirected(T),
        out_arborescence=is_out_arborescence(T),
        hub_subtree_is_out_arborescence=hub_sub_arb,
        theorem14_applies=grounded and hub_sub_arb,
    )


def embed_into_Tkl(T: OrientedTree, budget_vertices: int = 200_000):
    """Smallest ``(k, l)`` (lexicographic) with ``T`` a subgraph of T(k, l).

    Returns ``(k, l, embedding)`` where the embedding targets the tree built
    by :func:`treeforce.generators.t_tree`.  ``T`` must be leaf-pruned, have
    at least two hubs, and satisfy the grounded/out-arborescence hypothesis.

    For fixed ``k`` the search over ``l`` stops at the largest degree of
    ``T``: any copy inside T(k, l) for larger ``l`` touches at most that many
    children or rays per vertex, so an automorphism moves it into
    T(k, maxdeg).  Feasibility is monotone in both parameters.
    """
    from .embedders import brute_force_embed
    from .generators import t_tree, t_tree_size

    if prune_in_leaves(T).removed:
        raise PreconditionError("tree still has leaves of in-degree 1")
    if len(hub_set(T)) < 2:
        raise PreconditionError("tree needs at least two vertices of in-degree >= 2")
    if not classify(T).theorem14_applies:
        raise PreconditionError("tree is outside the grounded out-arborescence-hub class")

    max_deg = max(max(T.in_degree(v), T.out_degree(v)) for v in T.vertices())
    for k in range(1, T.vertex_count + 1):
        for l in range(1, max_deg + 1):
            if t_tree_size(k, l) < T.vertex_count:
                continue
            if t_tree_size(k, l) > budget_vertices:
                raise BudgetExceeded(f"T({k},{l}) exceeds {budget_vertices} vertices")
            host = t_tree(k, l)
            emb = brute_force_embed(host, T)
            if emb is not None:
                return k, l, emb
    raise AssertionError("no T(k, l) contains the tree; the class hypothesis is broken")


def _rooted_code(T: Digraph, root: int) -> str:
    # iterative post-order; each child contributes its edge direction flag
    order: list[tuple[int, int]] = []
    stack = [(root, -1)]
    while stack:
        v, parent = stack.pop()
        order.append((v, parent))
        for w in T.neighbors(v):
            if w != parent:
                stack.append((w, v))
    code: dict[int, str] = {}
    for v, parent in reversed(order):
        parts = []
        for w in T.neighbors(v):
            if w == parent:
                continue
            flag = ">" if T.has_edge(v, w) else "<"
            parts.append(flag + code[w])
        code[v] = "(" + "".join(sorted(parts)) + ")"
    return code[root]


def _centroids(T: Digraph) -> list[int]:
    n = T.vertex_count
    if n <= 2:
        return list(range(n))
    parent = [-1] * n
    order = []
    seen = [False] * n
    seen[0] = True
    stack = [0]
    while stack:
        v = stack.pop()
        order.append(v)
        for w in T.neighbors(v):
            if not seen[w]:
                seen[w] = True
                parent[w] = v
                stack.append(w)
    size = [1] * n
    for v in reversed(order):
        if parent[v] >= 0:
            size[parent[v]] += size[v]
    best: list[int] = []
    best_weight = n
    for v in range(n):
        weight = n - size[v]
        for w in T.neighbors(v):
            if w != parent[v]:
                weight = max(weight, size[w])
        if weight < best_weight:
            best, best_weight = [v], weight
        elif weight == best_weight:
            best.append(v)
    return best


def canonical_code(T: Digraph) -> str:
    """Isomorphism-invariant code of an oriented tree.

    Minimum over the (at most two) centroids of the rooted code, where each
    child entry carries the orientation of its edge.
    """
    return min(_rooted_code(T, c) for c in _centroids(T))


def canonical_tree(T: Digraph) -> OrientedTree:
    """Relabel ``T`` in pre-order of its canonical rooted code."""
    root = min(_centroids(T), key=lambda c: _rooted_code(T, c))
    codes: dict[tuple[int, int], str] = {}

    def sub(v: int, parent: int) -> str:
        key = (v, parent)
        if key not in codes:
            parts = []
            for w in T.neighbors(v):
                if w != parent:
                    flag = ">" if T.has_edge(v, w) else "<"
                    parts.append(flag + sub(w, v))
            codes[key] = "(" + "".join(sorted(parts)) + ")"
        return codes[key]

    label: dict[int, int] = {}
    edges = []

    def walk(v: int, parent: int) -> None:
        label[v] = len(label)
        kids = [w for w in T.neighbors(v) if w != parent]
        kids.sort(key=lambda w: (">" if T.has_edge(v, w) else "<") + sub(w, v))
        for w in kids:
            walk(w, v)
            if T.has_edge(v, w):
                edges.append((label[v], label[w]))
            else:
                edges.append((label[w], label[v]))

    walk(root, -1)
    return OrientedTree(T.vertex_count, sorted(edges))

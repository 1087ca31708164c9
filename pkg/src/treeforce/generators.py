"""Deterministic constructions of the named graph families, plus random hosts.

Numbering conventions (relied on by the embedders and certificates):

* ``out_branching(k, l)``: heap order, root 0, children of ``p`` are
  ``p*l + 1 .. p*l + l``; the leaves are the last ``l**k`` vertices.
* ``spider(k, l)``: centre 0; ray ``r`` is ``1 + r*k, ..., k + r*k`` read
  from its leaf towards the centre.
* ``t_tree(k, l)``: the branching first, then one private spider per leaf
  (in leaf order), each without its centre, ray vertices numbered as above.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterator

from .digraph import BudgetExceeded, Digraph, PreconditionError
from .trees import OrientedTree

__all__ = [
    "DEFAULT_BUDGET",
    "LevelDigraphMeta",
    "level_digraph",
    "level_digraph_size",
    "out_branching",
    "out_branching_size",
    "branching_leaves",
    "spider",
    "t_tree",
    "t_tree_size",
    "complete_digraph",
    "regular_tournament",
    "random_min_outdegree",
    "tournaments",
    "random_oriented_tree",
]

DEFAULT_BUDGET = 10**6


def _guard(size: int, budget: int, what: str) -> None:
    if size > budget:
        raise BudgetExceeded(f"{what} has {size} vertices, budget is {budget}")


@dataclass(frozen=True)
class LevelDigraphMeta:
    k: int
    d: int
    level_of: tuple[int, ...]
    index_in_level: tuple[int, ...]  # 1-based

    def level(self, i: int) -> range:
        start = sum(self.d ** (j + 1) for j in range(i))
        return range(start, start + self.d ** (i + 1))

    def to_text(self) -> str:
        return "".join(
            f"{v} {lv} {j}\n" for v, (lv, j) in enumerate(zip(self.level_of, self.index_in_level))
        )


def level_digraph_size(k: int, d: int) -> int:
    return sum(d ** (i + 1) for i in range(k + 1))


def level_digraph(k: int, d: int, budget: int = DEFAULT_BUDGET) -> tuple[Digraph, LevelDigraphMeta]:
    """The level digraph ``G_{k,d}``.

    Level ``i`` holds ``d**(i+1)`` vertices ``v_{i,1..}``, flattened level
    by level.  Vertex ``v_{i,j}`` points to ``v_{i+1,(j-1)d+1..(j-1)d+d}``;
    every vertex of level ``k`` points to all ``d`` roots of level 0.
    """
    if k < 1 or d < 1:
        raise PreconditionError("level digraph needs k >= 1 and d >= 1")
    n = level_digraph_size(k, d)
    _guard(n, budget, f"G_({k},{d})")
    offsets = [0]
    for i in range(k):
        offsets.append(offsets[-1] + d ** (i + 1))

    def vid(i: int, j: int) -> int:
        return offsets[i] + j - 1

    edges = []
    for i in range(k):
        for j in range(1, d ** (i + 1) + 1):
            for t in range(1, d + 1):
                edges.append((vid(i, j), vid(i + 1, (j - 1) * d + t)))
    for j in range(1, d ** (k + 1) + 1):
        for t in range(1, d + 1):
            edges.append((vid(k, j), vid(0, t)))

    level_of = []
    index_in_level = []
    for i in range(k + 1):
        level_of.extend([i] * d ** (i + 1))
        index_in_level.extend(range(1, d ** (i + 1) + 1))
    return Digraph(n, edges), LevelDigraphMeta(k, d, tuple(level_of), tuple(index_in_level))


def out_branching_size(k: int, l: int) -> int:
    return k + 1 if l == 1 else (l ** (k + 1) - 1) // (l - 1)


def branching_leaves(k: int, l: int) -> range:
    n = out_branching_size(k, l)
    return range(n - l**k, n)


def out_branching(k: int, l: int, budget: int = DEFAULT_BUDGET) -> OrientedTree:
    """Complete ``l``-ary out-tree of depth ``k`` (heap numbering)."""
    if k < 0 or l < 1:
        raise PreconditionError("out-branching needs k >= 0 and l >= 1")
    n = out_branching_size(k, l)
    _guard(n, budget, f"B+({k},{l})")
    internal = n - l**k
    edges = [(p, p * l + c) for p in range(internal) for c in range(1, l + 1)]
    return OrientedTree(n, edges)


def _spider_edges(k: int, l: int, center: int, first: int) -> list[tuple[int, int]]:
    edges = []
    for r in range(l):
        ray = [first + r * k + pos for pos in range(k)] + [center]
        edges.extend(zip(ray, ray[1:]))
    return edges


def spider(k: int, l: int, budget: int = DEFAULT_BUDGET) -> OrientedTree:
    """``l`` directed paths of length ``k`` meeting at centre 0."""
    if k < 1 or l < 1:
        raise PreconditionError("spider needs k >= 1 and l >= 1")
    n = k * l + 1
    _guard(n, budget, f"S-({k},{l})")
    return OrientedTree(n, _spider_edges(k, l, 0, 1))


def t_tree_size(k: int, l: int) -> int:
    return out_branching_size(k, l) + l**k * k * l


def t_tree(k: int, l: int, budget: int = DEFAULT_BUDGET) -> OrientedTree:
    """Out-branching whose every leaf is the centre of a private spider."""
    if k < 1 or l < 1:
        raise PreconditionError("T(k, l) needs k >= 1 and l >= 1")
    n = t_tree_size(k, l)
    _guard(n, budget, f"T({k},{l})")
    nb = out_branching_size(k, l)
    internal = nb - l**k
    edges = [(p, p * l + c) for p in range(internal) for c in range(1, l + 1)]
    for j, leaf in enumerate(branching_leaves(k, l)):
        edges.extend(_spider_edges(k, l, leaf, nb + j * k * l))
    return OrientedTree(n, edges)


def complete_digraph(n: int) -> Digraph:
    if n < 1:
        raise PreconditionError("complete digraph needs n >= 1")
    return Digraph(n, ((u, v) for u in range(n) for v in range(n) if u != v))


def regular_tournament(n: int) -> Digraph:
    """Rotational tournament: ``i -> i+1, ..., i+(n-1)/2`` modulo ``n``."""
    if n < 1 or n % 2 == 0:
        raise PreconditionError(f"a regular tournament needs odd n, got {n}")
    half = (n - 1) // 2
    return Digraph(n, ((i, (i + s) % n) for i in range(n) for s in range(1, half + 1)))


def random_min_outdegree(n: int, d: int, seed: int, budget: int = DEFAULT_BUDGET) -> Digraph:
    """Every vertex picks ``d`` distinct out-neighbours uniformly at random."""
    if not 0 <= d < n:
        raise PreconditionError(f"need 0 <= d < n, got d={d}, n={n}")
    _guard(n, budget, "random host")
    rng = random.Random(seed)
    edges = []
    for u in range(n):
        for x in rng.sample(range(n - 1), d):
            edges.append((u, x if x < u else x + 1))
    return Digraph(n, edges)


def tournaments(n: int) -> Iterator[Digraph]:
    """All labelled tournaments on ``n`` vertices (``2**C(n,2)`` of them)."""
    pairs = list(itertools.combinations(range(n), 2))
    for bits in range(1 << len(pairs)):
        yield Digraph(
            n,
            ((u, v) if bits >> i & 1 else (v, u) for i, (u, v) in enumerate(pairs)),
        )


def random_oriented_tree(n: int, rng: random.Random) -> OrientedTree:
    """Random recursive tree, randomly oriented and randomly relabelled."""
    edges = []
    for v in range(1, n):
        u = rng.randrange(v)
        edges.append((u, v) if rng.random() < 0.5 else (v, u))
    perm = list(range(n))
    rng.shuffle(perm)
    return OrientedTree(n, [(perm[u], perm[v]) for u, v in edges])

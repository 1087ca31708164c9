"""End-to-end acceptance checks, one test per criterion.

Each test asserts its own wall-clock limit.  The terminal summary lists a
PASS/FAIL line per criterion (see conftest.py).
"""

from __future__ import annotations

import random
import time

import pytest

from hosts import forced_local_host
from treeforce.digraph import Digraph, min_out_degree
from treeforce.embedders import (
    TRIVIAL_PROPERTY,
    branching_with_property,
    brute_force_embed,
    brute_spider_oracle,
    find_t_tree,
    instar_oracle,
    naive_embed,
    spider2_search,
    spider2_threshold,
    stall_bound,
    validate_embedding,
)
from treeforce.generators import (
    complete_digraph,
    level_digraph,
    level_digraph_size,
    out_branching,
    random_min_outdegree,
    random_oriented_tree,
    regular_tournament,
    spider,
    t_tree,
    t_tree_size,
)
from treeforce.lab import (
    ENFORCIBLE_KNOWN,
    NOT_ENFORCIBLE,
    OPEN,
    free_trees,
    tree_census,
    verify_level_blocks,
)
from treeforce.trees import OrientedTree, is_grounded, is_instar_subdivision


class Clock:
    def __init__(self, limit: float):
        self.limit = limit
        self.start = time.perf_counter()

    def check(self) -> None:
        elapsed = time.perf_counter() - self.start
        assert elapsed < self.limit, f"took {elapsed:.1f}s, limit {self.limit}s"


@pytest.mark.criterion(1, "level digraph degree profile for k, d in {1,2,3}")
def test_level_digraph_degrees():
    clock = Clock(5)
    for k in (1, 2, 3):
        for d in (1, 2, 3):
            assert level_digraph_size(k, d) <= 10**5
            G, meta = level_digraph(k, d)
            for v in G.vertices():
                assert G.out_degree(v) == d
                expected = d ** (k + 1) if meta.level_of[v] == 0 else 1
                assert G.in_degree(v) == expected
    clock.check()


@pytest.mark.criterion(2, "non-grounded trees up to 5 vertices miss G_{2t,2}")
def test_nongrounded_trees_blocked():
    clock = Clock(600)
    trees = [
        OrientedTree(r.n, r.tree) for r in tree_census(5) if not r.classification.grounded
    ]
    assert trees, "census produced no non-grounded tree"
    for T in trees:
        assert verify_level_blocks(T, 2)
    clock.check()


@pytest.mark.criterion(3, "spider S-(2,l) at out-degree ceil((1+sqrt5)l), l = 1..5, plus stall bound")
def test_spider2_guarantee():
    clock = Clock(300)
    halted_checks = 0
    for l in range(1, 6):
        d = spider2_threshold(l)
        for seed in range(100):
            host = random_min_outdegree(300, d, seed)
            cert, trace = spider2_search(host, l)
            assert cert is not None, f"l={l} seed={seed}: no spider"
            assert cert.validate(host, 2, l)
            # the local search alone, run until no move applies
            _, full = spider2_search(host, l, exhaust=True, use_direct=False)
            if full.bound_applies:
                halted_checks += 1
                assert full.halted_s >= stall_bound(d, l)
        # hosts that keep every high in-degree vertex away from the others
        for seed in range(20):
            host = forced_local_host(l, d, seed)
            assert min_out_degree(host) == d
            cert, trace = spider2_search(host, l, exhaust=True)
            assert trace.route == "local" and trace.bound_applies
            assert trace.halted_s >= stall_bound(d, l)
            assert cert is not None and cert.validate(host, 2, l)
            halted_checks += 1
    assert halted_checks >= 100
    clock.check()


@pytest.mark.criterion(4, "branching B+(k,l) at out-degree 2kl^k + 1")
def test_branching_guarantee():
    clock = Clock(300)
    for k, l in [(1, 2), (1, 3), (2, 2)]:
        d = 2 * k * l**k + 1
        pattern = out_branching(k, l)
        for seed in range(100):
            host = random_min_outdegree(200, d, seed)
            emb = branching_with_property(host, TRIVIAL_PROPERTY, k, l)
            assert emb is not None, f"(k,l)=({k},{l}) seed={seed}"
            assert validate_embedding(host, pattern, emb)
    clock.check()


@pytest.mark.criterion(5, "T(1,2) via in-star oracle; T(2,2) via brute oracle on complete hosts")
def test_t_tree_assembly():
    clock = Clock(600)
    pattern = t_tree(1, 2)
    for seed in range(50):
        host = random_min_outdegree(600, 16, seed)
        emb = find_t_tree(host, 1, 2, instar_oracle)
        assert emb is not None, f"seed={seed}"
        assert validate_embedding(host, pattern, emb)
    k, l = 2, 2
    h = 3 * k * l ** (k + 1)
    order = t_tree_size(k, l) + k * h
    assert order == 119
    for n in (order, order + 6):
        host = complete_digraph(n)
        emb = find_t_tree(host, k, l, brute_spider_oracle)
        assert emb is not None and validate_embedding(host, t_tree(k, l), emb)
    clock.check()


@pytest.mark.criterion(6, "backtracking embedder agrees with the naive matcher on 500 pairs")
def test_oracle_equivalence():
    clock = Clock(120)
    rng = random.Random(20261015)
    found = 0
    for _ in range(500):
        n = rng.randint(1, 9)
        p = rng.uniform(0.1, 0.8)
        host = Digraph(n, [(u, v) for u in range(n) for v in range(n) if u != v and rng.random() < p])
        pattern = random_oriented_tree(rng.randint(1, 5), rng)
        fast = brute_force_embed(host, pattern)
        slow = naive_embed(host, pattern)
        assert (fast is None) == (slow is None)
        if fast is not None:
            found += 1
            assert validate_embedding(host, pattern, fast)
    # both outcomes must be exercised
    assert 50 < found < 450
    clock.check()


@pytest.mark.criterion(7, "tightness: K(2l) lacks S-(2,l); directed triangle lacks a 3-path")
def test_tightness_witnesses():
    clock = Clock(60)
    for l in (1, 2, 3):
        host = complete_digraph(2 * l)
        pattern = spider(2, l)
        assert pattern.vertex_count > host.vertex_count
        assert brute_force_embed(host, pattern) is None
        assert naive_embed(host, pattern) is None
        # one more vertex suffices
        assert brute_force_embed(complete_digraph(2 * l + 1), pattern) is not None
    triangle = regular_tournament(3)
    assert brute_force_embed(triangle, spider(3, 1)) is None
    assert naive_embed(triangle, spider(3, 1)) is None
    clock.check()


@pytest.mark.criterion(8, "free-tree counts and census record invariants")
def test_census_sanity():
    clock = Clock(300)
    assert [len(free_trees(n)) for n in range(1, 9)] == [1, 1, 1, 2, 3, 6, 11, 23]
    for r in tree_census(8):
        c = r.classification
        T = OrientedTree(r.n, r.tree)
        assert r.status in (ENFORCIBLE_KNOWN, NOT_ENFORCIBLE, OPEN)
        assert (r.status == NOT_ENFORCIBLE) == (not is_grounded(T))
        known = (
            c.theorem14_applies
            or c.out_arborescence
            or c.antidirected
            or len(c.hub_set) <= 1
            or is_instar_subdivision(T)
        )
        assert (r.status == ENFORCIBLE_KNOWN) == (c.grounded and known)
        assert (r.status == OPEN) == (c.grounded and not known)
    clock.check()

"""Host constructions used only by the tests."""

import random

from treeforce.digraph import Digraph


def hub_sparse_host(n_hubs, n_rest, d, l, rest_to_rest, seed):
    """Every vertex has out-degree ``d``; no hub has an in-neighbour among hubs.

    Hubs point only into the rest; each rest vertex sends ``rest_to_rest``
    edges into the rest and the others to hubs.  Rest in-degrees are capped
    at ``2l - 1`` so the rest never reaches the high in-degree class, which
    forces the spider search off its direct route.
    """
    rng = random.Random(seed)
    hubs = list(range(n_hubs))
    rest = list(range(n_hubs, n_hubs + n_rest))
    cap = {v: 2 * l - 1 for v in rest}
    edges = []

    def pick_rest(u, k):
        pool = [v for v in rest if v != u and cap[v] > 0]
        if len(pool) < k:
            raise ValueError("rest capacity exhausted; lower n_hubs or rest_to_rest")
        chosen = rng.sample(pool, k)
        for v in chosen:
            cap[v] -= 1
        return chosen

    for h in hubs:
        edges.extend((h, v) for v in pick_rest(h, d))
    for u in rest:
        edges.extend((u, v) for v in pick_rest(u, rest_to_rest))
        edges.extend((u, v) for v in rng.sample(hubs, d - rest_to_rest))
    return Digraph(n_hubs + n_rest, edges)


def forced_local_host(l, d, seed, n_rest=200):
    """A ``hub_sparse_host`` sized to fit the capacity constraint for ``l``."""
    c = 0 if l <= 2 else min(d - 1, l)
    n_hubs = max(1, int(0.8 * n_rest * (2 * l - 1 - c) / d))
    return hub_sparse_host(n_hubs, n_rest, d, l, c, seed)

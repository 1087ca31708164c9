"""Desk-scale experiments: obstruction checks, spider scans, seeded trials, census."""

from __future__ import annotations

import hashlib
import itertools
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Iterable, Iterator, Optional

from .digraph import (
    BudgetExceeded,
    Digraph,
    PreconditionError,
    format_edge_list,
    min_out_degree,
)
from .embedders import (
    TRIVIAL_PROPERTY,
    branching_with_property,
    brute_force_embed,
    brute_spider_oracle,
    find_t_tree,
    instar_oracle,
    naive_embed,
    spider2_search,
    spider2_threshold,
)
from .generators import (
    DEFAULT_BUDGET,
    complete_digraph,
    level_digraph,
    random_min_outdegree,
    regular_tournament,
    spider,
    tournaments,
)
from .trees import (
    OrientedTree,
    TreeClassification,
    canonical_code,
    canonical_tree,
    classify,
    is_grounded,
    is_instar_subdivision,
)

__all__ = [
    "TrialReport",
    "CensusRecord",
    "ENFORCIBLE_KNOWN",
    "NOT_ENFORCIBLE",
    "OPEN",
    "verify_level_blocks",
    "spider_scan",
    "host_family",
    "theorem_trials",
    "free_trees",
    "oriented_trees",
    "census_status",
    "tree_census",
    "census_tally",
]

ENFORCIBLE_KNOWN = "ENFORCIBLE_KNOWN"
NOT_ENFORCIBLE = "NOT_ENFORCIBLE"
OPEN = "OPEN"


@dataclass
class TrialReport:
    """Outcome of a batch of trials.

    ``rows`` holds one ``(seed, success, values)`` entry per trial for the
    optional tab-separated table; ``columns`` names the experiment-specific
    values.
    """

    experiment_id: str
    parameters: dict[str, Any]
    trials: int = 0
    successes: int = 0
    failures: list[tuple[int, str]] = field(default_factory=list)
    wall_time: float = 0.0
    columns: tuple[str, ...] = ("value",)
    rows: list[tuple[int, bool, tuple[str, ...]]] = field(default_factory=list)

    def record(self, seed: int, ok: bool, values: tuple[str, ...] = ("",), reason: str = "") -> None:
        self.trials += 1
        self.rows.append((seed, ok, values))
        if ok:
            self.successes += 1
        else:
            self.failures.append((seed, reason or "not found"))

    def to_text(self, include_timing: bool = False) -> str:
        lines = [f"experiment: {self.experiment_id}"]
        lines.extend(f"{key}: {_fmt(val)}" for key, val in self.parameters.items())
        lines.append(f"trials: {self.trials}")
        lines.append(f"successes: {self.successes}")
        lines.append(f"failures: {len(self.failures)}")
        lines.extend(f"failure: {seed} {reason}" for seed, reason in self.failures)
        if include_timing:
            lines.append(f"wall_time: {self.wall_time:.3f}")
        return "\n".join(lines) + "\n"

    def table(self) -> str:
        out = ["\t".join(("seed", "success") + self.columns)]
        out.extend("\t".join((str(seed), str(int(ok))) + values) for seed, ok, values in self.rows)
        return "\n".join(out) + "\n"


def _fmt(val: Any) -> str:
    if isinstance(val, bool):
        return "true" if val else "false"
    return str(val)


def _content_name(G: Digraph) -> str:
    text = format_edge_list(G)
    return hashlib.sha256(text.encode("ascii")).hexdigest()[:16] + ".txt"


def _dump_host(G: Digraph, out_dir: Optional[str]) -> str:
    name = _content_name(G)
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
        with open(os.path.join(out_dir, name), "w", encoding="ascii") as fh:
            fh.write(format_edge_list(G))
    return name


def verify_level_blocks(T: OrientedTree, d: int, budget: int = DEFAULT_BUDGET) -> bool:
    """True iff the level digraph ``G_{2t,d}``, ``t = |V(T)|``, has no copy of ``T``.

    The absence is certified by exhaustive search.
    """
    if is_grounded(T):
        raise PreconditionError("the tree is grounded; the level obstruction does not apply")
    G, _ = level_digraph(2 * T.vertex_count, d, budget=budget)
    return brute_force_embed(G, T) is None


def host_family(name: str, **params: Any) -> Iterator[Digraph]:
    """Host streams for :func:`spider_scan`.

    ``tournaments`` (all labelled tournaments on 1..n_max vertices),
    ``complete`` (n), ``regular-tournament`` (n), ``random`` (n, d, count,
    base_seed).
    """
    if name == "tournaments":
        for n in range(1, params["n_max"] + 1):
            yield from tournaments(n)
    elif name == "complete":
        yield complete_digraph(params["n"])
    elif name == "regular-tournament":
        yield regular_tournament(params["n"])
    elif name == "random":
        base = params.get("base_seed", 0)
        for i in range(params.get("count", 1)):
            yield random_min_outdegree(params["n"], params["d"], base + i)
    else:
        raise PreconditionError(f"unknown host family {name!r}")


def spider_scan(
    k: int,
    l: int,
    hosts: Iterable[Digraph],
    delta_target: int,
    out_dir: Optional[str] = None,
) -> TrialReport:
    """Look for hosts with ``min_out_degree >= delta_target`` lacking ``spider(k, l)``.

    Each miss is a counterexample candidate; it is re-checked by the naive
    matcher and written out as an edge list named by content hash.
    """
    started = time.perf_counter()
    report = TrialReport(
        "spider-scan", {"k": k, "l": l, "delta_target": delta_target}, columns=("outcome",)
    )
    pattern = spider(k, l)
    skipped = 0
    for i, G in enumerate(hosts):
        if G.vertex_count == 0 or min_out_degree(G) < delta_target:
            skipped += 1
            continue
        emb = brute_force_embed(G, pattern)
        if emb is not None:
            report.record(i, True, ("found",))
            continue
        confirmed = naive_embed(G, pattern) is None
        name = _dump_host(G, out_dir)
        status = "counterexample" if confirmed else "candidate-unconfirmed"
        report.record(i, False, (status,), f"{status} {name}")
    report.parameters["skipped"] = skipped
    report.wall_time = time.perf_counter() - started
    return report


def _trial(which: str, params: dict[str, Any], seed: int) -> tuple[bool, tuple[str, ...], str]:
    n, d = params["n"], params["d"]
    host = random_min_outdegree(n, d, seed)
    if which == "T18":
        l = params["l"]
        cert, trace = spider2_search(host, l)
        # second pass: local search only, run until no move applies
        try:
            _, full = spider2_search(host, l, exhaust=True, use_direct=False)
        except AssertionError as exc:
            return False, (trace.route, "", "", ""), f"stall bound violated: {exc}"
        values = (trace.route, str(full.halted_s), f"{full.bound:.4f}", str(int(full.bound_applies)))
        return cert is not None, values, "" if cert else "no S-(2,l) found"
    if which == "T34":
        emb = branching_with_property(host, TRIVIAL_PROPERTY, params["k"], params["l"])
        return emb is not None, (str(emb[0]) if emb else "",), "" if emb else "Gamma(k) empty"
    if which == "T33":
        oracle = instar_oracle if params.get("oracle", "instar") == "instar" else brute_spider_oracle
        emb = find_t_tree(host, params["k"], params["l"], oracle)
        return emb is not None, (str(emb[0]) if emb else "",), "" if emb else "T(k,l) not assembled"
    raise PreconditionError(f"unknown experiment {which!r}")


def _hypothesis(which: str, params: dict[str, Any]) -> Optional[bool]:
    d = params["d"]
    if which == "T18":
        return d >= spider2_threshold(params["l"])
    k, l = params["k"], params["l"]
    if which == "T34":
        return d >= TRIVIAL_PROPERTY.degree_bound + 2 * k * l**k
    if which == "T33":
        if params.get("oracle", "instar") == "instar" and k == 1:
            # every digraph has a vertex of in-degree >= its min out-degree
            return d >= 3 * k * l ** (k + 1) + 2 * k * l**k
        return None
    raise PreconditionError(f"unknown experiment {which!r}")


def _trial_star(args: tuple[str, dict[str, Any], int]) -> tuple[bool, tuple[str, ...], str]:
    return _trial(*args)


_COLUMNS = {
    "T18": ("route", "local_halted_s", "stall_bound", "bound_applies"),
    "T34": ("root",),
    "T33": ("root",),
}


def theorem_trials(
    which: str,
    params: dict[str, Any],
    trials: int,
    base_seed: int = 0,
    jobs: int = 1,
    out_dir: Optional[str] = None,
) -> TrialReport:
    """Run one embedder over seeded random hosts (seed = base_seed + index).

    ``which`` is ``T18`` (spider with 2-rays, params l, d, n), ``T34``
    (branching with the trivial property, params k, l, d, n) or ``T33``
    (T(k, l) assembly, params k, l, d, n, oracle).  When the degree
    hypothesis holds, a failure is an implementation alarm and the host is
    dumped to ``out_dir``.
    """
    started = time.perf_counter()
    params = dict(params)
    if which not in _COLUMNS:
        raise PreconditionError(f"unknown experiment {which!r}")
    if which == "T18":
        params.setdefault("d", spider2_threshold(params["l"]))
    hyp = _hypothesis(which, params)
    shown = {**params, "base_seed": base_seed, "hypothesis_met": "unknown" if hyp is None else hyp}
    report = TrialReport(which, shown, columns=_COLUMNS[which])
    seeds = [base_seed + i for i in range(trials)]
    tasks = [(which, params, s) for s in seeds]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_trial_star, tasks))
    else:
        results = [_trial_star(t) for t in tasks]
    for seed, (ok, values, reason) in zip(seeds, results):
        if not ok and hyp:
            host = random_min_outdegree(params["n"], params["d"], seed)
            reason = f"{reason} host={_dump_host(host, out_dir)}"
        report.record(seed, ok, values, reason)
    report.wall_time = time.perf_counter() - started
    return report


def _symmetric(n: int, edges: Iterable[tuple[int, int]]) -> Digraph:
    both = []
    for u, v in edges:
        both.extend([(u, v), (v, u)])
    return Digraph(n, both)


def free_trees(n: int) -> list[tuple[tuple[int, int], ...]]:
    """Unlabelled free trees on ``n`` vertices as edge lists, grown leaf by leaf."""
    if n < 1:
        return []
    level: dict[str, tuple[tuple[int, int], ...]] = {"": ()}
    for size in range(2, n + 1):
        nxt: dict[str, tuple[tuple[int, int], ...]] = {}
        for edges in level.values():
            for v in range(size - 1):
                grown = edges + ((v, size - 1),)
                code = canonical_code(_symmetric(size, grown))
                nxt.setdefault(code, grown)
        level = nxt
    return [level[c] for c in sorted(level)]


def oriented_trees(n: int) -> list[OrientedTree]:
    """All oriented trees on ``n`` vertices up to isomorphism, in canonical form."""
    seen: dict[str, OrientedTree] = {}
    for edges in free_trees(n):
        for flips in itertools.product((False, True), repeat=len(edges)):
            T = OrientedTree(n, [(v, u) if f else (u, v) for (u, v), f in zip(edges, flips)])
            code = canonical_code(T)
            if code not in seen:
                seen[code] = canonical_tree(T)
    return [seen[c] for c in sorted(seen)]


@dataclass(frozen=True)
class CensusRecord:
    tree: tuple[tuple[int, int], ...]
    n: int
    classification: TreeClassification
    status: str

    def to_text(self) -> str:
        edges = " ".join(f"{u}>{v}" for u, v in self.tree)
        c = self.classification
        return (
            f"{self.n}\t{self.status}\t{int(c.grounded)}\t{len(c.hub_set)}\t"
            f"{int(c.theorem14_applies)}\t{edges}"
        )


def census_status(T: OrientedTree, c: Optional[TreeClassification] = None) -> str:
    c = c or classify(T)
    if not c.grounded:
        return NOT_ENFORCIBLE
    if (
        c.theorem14_applies
        or c.out_arborescence
        or c.antidirected
        or len(c.hub_set) <= 1
        or is_instar_subdivision(T)
    ):
        return ENFORCIBLE_KNOWN
    return OPEN


def tree_census(n_max: int, budget: int = 10) -> list[CensusRecord]:
    if n_max > budget:
        raise BudgetExceeded(f"census up to {n_max} vertices exceeds budget {budget}")
    records = []
    for n in range(1, n_max + 1):
        for T in oriented_trees(n):
            c = classify(T)
            records.append(CensusRecord(tuple(T.sorted_edges()), n, c, census_status(T, c)))
    return records


def census_tally(records: Iterable[CensusRecord]) -> dict[int, dict[str, int]]:
    tally: dict[int, dict[str, int]] = {}
    for r in records:
        row = tally.setdefault(r.n, {ENFORCIBLE_KNOWN: 0, NOT_ENFORCIBLE: 0, OPEN: 0})
        row[r.status] += 1
    return tally

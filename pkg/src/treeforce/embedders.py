"""Tree embedders with checkable certificates.

Every finder validates its certificate before returning it.  ``None`` is the
NOT_FOUND result throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional, Sequence

from .digraph import (
    BudgetExceeded,
    Digraph,
    PreconditionError,
    count_two_paths,
    min_out_degree,
    prune_to_exact_outdegree,
)
from .generators import (
    branching_leaves,
    out_branching,
    out_branching_size,
    spider,
    t_tree,
    t_tree_size,
)
from .trees import OrientedTree, PrunedTree, is_out_arborescence, tree_root

__all__ = [
    "TreeEmbedding",
    "SpiderCertificate",
    "CommonProperty",
    "GammaLevels",
    "SpiderSearchState",
    "Spider2Trace",
    "TRIVIAL_PROPERTY",
    "NEVER_PROPERTY",
    "validate_embedding",
    "brute_force_embed",
    "naive_embed",
    "greedy_out_arborescence",
    "greedy_extend",
    "gamma_levels",
    "branching_with_property",
    "find_t_tree",
    "brute_spider_oracle",
    "instar_oracle",
    "find_spider2",
    "spider2_search",
    "spider2_local_search",
    "spider2_threshold",
    "stall_bound",
    "parse_certificate",
]


@dataclass(frozen=True)
class TreeEmbedding:
    """Injective vertex map; ``mapping[p]`` is the host image of pattern vertex ``p``."""

    mapping: tuple[int, ...]

    def __getitem__(self, p: int) -> int:
        return self.mapping[p]

    def __len__(self) -> int:
        return len(self.mapping)

    def to_text(self, pattern: OrientedTree) -> str:
        lines = [f"root {self.mapping[tree_root(pattern)]}"]
        lines.extend(f"{p} -> {h}" for p, h in enumerate(self.mapping))
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class SpiderCertificate:
    """Centre plus rays; each ray lists its ``k`` vertices from the leaf inwards.

    The centre itself is not repeated inside the rays.
    """

    center: int
    rays: tuple[tuple[int, ...], ...]

    @property
    def k(self) -> int:
        return len(self.rays[0]) if self.rays else 0

    @property
    def l(self) -> int:
        return len(self.rays)

    def to_embedding(self) -> TreeEmbedding:
        """Map onto the numbering of :func:`treeforce.generators.spider`."""
        mapping = [self.center]
        for ray in self.rays:
            mapping.extend(ray)
        return TreeEmbedding(tuple(mapping))

    def validate(self, host: Digraph, k: Optional[int] = None, l: Optional[int] = None) -> bool:
        if not self.rays:
            return False
        if k is not None and self.k != k:
            return False
        if l is not None and self.l != l:
            return False
        if any(len(ray) != self.k for ray in self.rays):
            return False
        return validate_embedding(host, spider(self.k, self.l), self.to_embedding())

    def to_text(self) -> str:
        lines = [f"center {self.center}"]
        lines.extend(f"{p} -> {h}" for p, h in enumerate(self.to_embedding().mapping))
        return "\n".join(lines) + "\n"


def parse_certificate(text: str) -> tuple[str, int, tuple[int, ...]]:
    """Inverse of the ``to_text`` methods: ``(kind, anchor, mapping)``."""
    lines = text.strip("\n").split("\n")
    kind, anchor = lines[0].split(" ")
    if kind not in ("root", "center"):
        raise ValueError(f"unknown certificate header {lines[0]!r}")
    pairs = {}
    for ln in lines[1:]:
        p, arrow, h = ln.split(" ")
        if arrow != "->":
            raise ValueError(f"malformed certificate line {ln!r}")
        pairs[int(p)] = int(h)
    if sorted(pairs) != list(range(len(pairs))):
        raise ValueError("certificate does not cover pattern vertices 0..n-1")
    return kind, int(anchor), tuple(pairs[p] for p in range(len(pairs)))


def validate_embedding(
    host: Digraph,
    pattern: Digraph,
    embedding: TreeEmbedding | Sequence[int] | Mapping[int, int],
) -> bool:
    if isinstance(embedding, TreeEmbedding):
        mapping = embedding.mapping
    elif isinstance(embedding, Mapping):
        if set(embedding) != set(pattern.vertices()):
            return False
        mapping = tuple(embedding[p] for p in pattern.vertices())
    else:
        mapping = tuple(embedding)
    if len(mapping) != pattern.vertex_count:
        return False
    if any(not 0 <= h < host.vertex_count for h in mapping):
        return False
    if len(set(mapping)) != len(mapping):
        return False
    return all(host.has_edge(mapping[u], mapping[v]) for u, v in pattern.edges)


def _search_order(pattern: Digraph, start: int) -> list[tuple[int, int, bool]]:
    """Connected traversal: ``(vertex, anchor, anchor_points_to_vertex)``.

    Branching vertices come before leaves, so leaves (which only constrain
    injectivity) are placed last.
    """
    order = [(start, -1, False)]
    placed = {start}
    frontier = set()

    def push(v: int) -> None:
        for w in pattern.neighbors(v):
            if w not in placed:
                frontier.add(w)

    push(start)
    while frontier:
        w = min(
            frontier,
            key=lambda x: (len(pattern.neighbors(x)) == 1, -len(pattern.neighbors(x)), x),
        )
        frontier.discard(w)
        anchor = min(x for x in pattern.neighbors(w) if x in placed)
        order.append((w, anchor, pattern.has_edge(anchor, w)))
        placed.add(w)
        push(w)
    return order


def brute_force_embed(
    host: Digraph,
    pattern: OrientedTree,
    fixed: Optional[Mapping[int, int]] = None,
    max_steps: Optional[int] = None,
) -> Optional[TreeEmbedding]:
    """Exhaustive backtracking search for a copy of ``pattern`` in ``host``.

    Candidates for each pattern vertex come from the neighbourhood of its
    already-placed tree neighbour and are filtered by in/out-degree.  A
    ``None`` result is therefore a proof that no copy exists (with the
    optional ``fixed`` pins respected).

    Raises :class:`BudgetExceeded` after ``max_steps`` tentative assignments.
    """
    fixed = dict(fixed or {})
    np_ = pattern.vertex_count
    for p, h in fixed.items():
        if not (0 <= p < np_ and 0 <= h < host.vertex_count):
            raise PreconditionError(f"bad pin {p} -> {h}")
    if np_ == 0:
        return TreeEmbedding(())

    def rank(v: int) -> tuple:
        return (v not in fixed, pattern.in_degree(v) < 2, -len(pattern.neighbors(v)), v)

    start = min(pattern.vertices(), key=rank)
    order = _search_order(pattern, start)
    need_out = [pattern.out_degree(p) for p in pattern.vertices()]
    need_in = [pattern.in_degree(p) for p in pattern.vertices()]
    h_out = [len(host._out[h]) for h in host.vertices()]
    h_in = [len(host._in[h]) for h in host.vertices()]

    mapping = [-1] * np_
    used: set[int] = set()
    steps = 0

    def candidates(i: int) -> list[int]:
        p, anchor, forward = order[i]
        if anchor < 0:
            pool = host.vertices()
        elif forward:
            pool = host._out[mapping[anchor]]
        else:
            pool = host._in[mapping[anchor]]
        if p in fixed:
            pool = [fixed[p]] if fixed[p] in pool else []
        return sorted(
            h for h in pool if h not in used and h_out[h] >= need_out[p] and h_in[h] >= need_in[p]
        )

    stack = [candidates(0)]
    stack[0].reverse()
    while stack:
        i = len(stack) - 1
        p = order[i][0]
        if mapping[p] >= 0:
            used.discard(mapping[p])
            mapping[p] = -1
        if not stack[-1]:
            stack.pop()
            continue
        h = stack[-1].pop()
        steps += 1
        if max_steps is not None and steps > max_steps:
            raise BudgetExceeded(f"brute-force search exceeded {max_steps} steps")
        mapping[p] = h
        used.add(h)
        if i + 1 == np_:
            emb = TreeEmbedding(tuple(mapping))
            assert validate_embedding(host, pattern, emb)
            return emb
        nxt = candidates(i + 1)
        nxt.reverse()
        stack.append(nxt)
    return None


def naive_embed(host: Digraph, pattern: Digraph) -> Optional[TreeEmbedding]:
    """Reference matcher: assign pattern vertices in index order, no pruning."""
    n = pattern.vertex_count
    mapping: list[int] = []

    def extend() -> bool:
        p = len(mapping)
        if p == n:
            return True
        for h in range(host.vertex_count):
            if h in mapping:
                continue
            ok = True
            for q in range(p):
                if pattern.has_edge(q, p) and not host.has_edge(mapping[q], h):
                    ok = False
                    break
                if pattern.has_edge(p, q) and not host.has_edge(h, mapping[q]):
                    ok = False
                    break
            if ok:
                mapping.append(h)
                if extend():
                    return True
                mapping.pop()
        return False

    return TreeEmbedding(tuple(mapping)) if extend() else None


def greedy_out_arborescence(
    host: Digraph, pattern: OrientedTree, root_image: Optional[int] = None
) -> TreeEmbedding:
    """Breadth-first greedy copy of an out-arborescence.

    Needs ``min_out_degree(host) >= |V(pattern)| - 1``; each child takes the
    smallest unused out-neighbour of its parent's image.
    """
    if not is_out_arborescence(pattern):
        raise PreconditionError("pattern is not an out-arborescence")
    if host.vertex_count == 0:
        raise PreconditionError("empty host")
    if pattern.vertex_count > 1 and min_out_degree(host) < pattern.vertex_count - 1:
        raise PreconditionError(
            f"greedy embedding needs minimum out-degree >= {pattern.vertex_count - 1}"
        )
    root = tree_root(pattern)
    mapping = [-1] * pattern.vertex_count
    mapping[root] = 0 if root_image is None else root_image
    host._check(mapping[root])
    used = {mapping[root]}
    queue = [root]
    for p in queue:
        for c in sorted(pattern.out_neighbors(p)):
            h = min(x for x in host.out_neighbors(mapping[p]) if x not in used)
            mapping[c] = h
            used.add(h)
            queue.append(c)
    emb = TreeEmbedding(tuple(mapping))
    if not validate_embedding(host, pattern, emb):
        raise AssertionError("greedy out-arborescence produced an invalid embedding")
    return emb


def greedy_extend(
    host: Digraph, partial: TreeEmbedding, T: OrientedTree, pruned: PrunedTree
) -> TreeEmbedding:
    """Re-attach the leaves stripped by :func:`prune_in_leaves`.

    ``partial`` embeds ``pruned.core``.  Leaves go back in reverse removal
    order, each onto the smallest unused out-neighbour of its parent's image.
    """
    if not validate_embedding(host, pruned.core, partial):
        raise PreconditionError("partial embedding does not embed the pruned core")
    mapping = [-1] * T.vertex_count
    for i, orig in enumerate(pruned.kept):
        mapping[orig] = partial[i]
    used = set(partial.mapping)
    for v in reversed(pruned.removed):
        (u,) = T.in_neighbors(v)
        free = [x for x in host.out_neighbors(mapping[u]) if x not in used]
        if not free:
            raise PreconditionError(f"no unused out-neighbour left for pattern vertex {v}")
        mapping[v] = min(free)
        used.add(mapping[v])
    emb = TreeEmbedding(tuple(mapping))
    if not validate_embedding(host, T, emb):
        raise AssertionError("greedy extension produced an invalid embedding")
    return emb


@dataclass(frozen=True)
class CommonProperty:
    """Vertex property assumed to hold somewhere once min out-degree >= degree_bound.

    The predicate must also be anti-monotone: holding in a subgraph implies
    holding in the supergraph.  Neither contract is checked here.
    """

    predicate: Callable[[Digraph, int], bool]
    degree_bound: int
    name: str = "property"

    def __call__(self, G: Digraph, v: int) -> bool:
        return self.predicate(G, v)


TRIVIAL_PROPERTY = CommonProperty(lambda G, v: True, 0, "trivial")
NEVER_PROPERTY = CommonProperty(lambda G, v: False, 0, "never")


@dataclass(frozen=True)
class GammaLevels:
    levels: tuple[frozenset[int], ...]
    k: int
    l: int
    threshold: int

    def __getitem__(self, i: int) -> frozenset[int]:
        return self.levels[i]


def gamma_levels(host: Digraph, P: CommonProperty, k: int, l: int) -> GammaLevels:
    """``levels[0]`` holds the property; ``levels[i]`` has >= 2*l**k out-neighbours in ``levels[i-1]``."""
    if k < 1 or l < 2:
        raise PreconditionError("gamma levels need k >= 1 and l >= 2")
    threshold = 2 * l**k
    levels = [frozenset(v for v in host.vertices() if P(host, v))]
    for _ in range(k):
        prev = levels[-1]
        levels.append(
            frozenset(v for v in host.vertices() if len(host._out[v] & prev) >= threshold)
        )
    return GammaLevels(tuple(levels), k, l, threshold)


def branching_with_property(
    host: Digraph,
    P: CommonProperty,
    k: int,
    l: int,
    gamma: Optional[GammaLevels] = None,
) -> Optional[TreeEmbedding]:
    """Copy of ``out_branching(k, l)`` whose leaf images all satisfy ``P``.

    The root is the smallest vertex of the top gamma level; depth ``i``
    vertices are drawn from ``gamma[k - i]``, each parent taking its ``l``
    smallest unused out-neighbours there.  Success is certain once
    ``min_out_degree(host) >= P.degree_bound + 2*k*l**k``.
    """
    if gamma is None:
        gamma = gamma_levels(host, P, k, l)
    if not gamma[k]:
        return None
    root = min(gamma[k])
    n = out_branching_size(k, l)
    mapping = [-1] * n
    mapping[0] = root
    used = {root}
    depth_start = 0
    for depth in range(k):
        width = l**depth
        pool = gamma[k - depth - 1]
        for p in range(depth_start, depth_start + width):
            picks = sorted(x for x in host._out[mapping[p]] if x in pool and x not in used)[:l]
            if len(picks) < l:
                return None
            for c, h in enumerate(picks, start=1):
                mapping[p * l + c] = h
                used.add(h)
        depth_start += width
    emb = TreeEmbedding(tuple(mapping))
    if not validate_embedding(host, out_branching(k, l), emb):
        raise AssertionError("branching construction produced an invalid embedding")
    return emb


SpiderOracle = Callable[[Digraph, int, int, int], Optional[SpiderCertificate]]


def brute_spider_oracle(
    host: Digraph, center: int, k: int, h: int, max_steps: Optional[int] = None
) -> Optional[SpiderCertificate]:
    """Spider with ``h`` rays of length ``k`` centred at ``center``, by exhaustive search."""
    if host.in_degree(center) < h or host.vertex_count < k * h + 1:
        return None
    emb = brute_force_embed(host, spider(k, h), fixed={0: center}, max_steps=max_steps)
    if emb is None:
        return None
    rays = tuple(tuple(emb[1 + r * k + pos] for pos in range(k)) for r in range(h))
    return SpiderCertificate(center, rays)


def instar_oracle(host: Digraph, center: int, k: int, h: int) -> Optional[SpiderCertificate]:
    """In-star extractor for ``k == 1``: any vertex of in-degree >= ``h``."""
    if k != 1:
        raise PreconditionError("the in-star oracle only handles k = 1")
    heads = sorted(host.in_neighbors(center))
    if len(heads) < h:
        return None
    return SpiderCertificate(center, tuple((u,) for u in heads[:h]))


def find_t_tree(
    host: Digraph,
    k: int,
    l: int,
    spider_oracle: SpiderOracle,
    degree_bound: int = 0,
) -> Optional[TreeEmbedding]:
    """Copy of ``t_tree(k, l)`` assembled from a branching and big spiders.

    The leaf property is "centre of a spider with ``h = 3*k*l**(k+1)``
    rays", decided by ``spider_oracle``.  Each leaf then keeps ``l`` of its
    rays that avoid everything used so far.
    """
    if k < 1 or l < 2:
        raise PreconditionError("find_t_tree needs k >= 1 and l >= 2")
    if host.vertex_count < t_tree_size(k, l):
        return None
    h = 3 * k * l ** (k + 1)
    found: dict[int, Optional[SpiderCertificate]] = {}

    def is_centre(G: Digraph, v: int) -> bool:
        if v not in found:
            cert = spider_oracle(G, v, k, h)
            if cert is not None and not cert.validate(G, k, h):
                raise AssertionError(f"spider oracle returned an invalid certificate at {v}")
            found[v] = cert
        return found[v] is not None

    P = CommonProperty(is_centre, degree_bound, f"centre of S-({k},{h})")
    branch = branching_with_property(host, P, k, l)
    if branch is None:
        return None
    nb = out_branching_size(k, l)
    mapping = list(branch.mapping) + [-1] * (t_tree_size(k, l) - nb)
    used = set(branch.mapping)
    for j, leaf in enumerate(branching_leaves(k, l)):
        cert = found[branch[leaf]]
        chosen = []
        for ray in cert.rays:
            if not used.intersection(ray):
                chosen.append(ray)
                used.update(ray)
                if len(chosen) == l:
                    break
        if len(chosen) < l:
            return None
        for r, ray in enumerate(chosen):
            for pos, v in enumerate(ray):
                mapping[nb + j * k * l + r * k + pos] = v
    emb = TreeEmbedding(tuple(mapping))
    if not validate_embedding(host, t_tree(k, l), emb):
        raise AssertionError("T(k, l) assembly produced an invalid embedding")
    return emb


def spider2_threshold(l: int) -> int:
    """Smallest integer out-degree at or above ``(1 + sqrt 5) * l``."""
    # exact integer test of d - l >= sqrt(5) * l
    d = l + math.isqrt(5 * l * l)
    while (d - l) ** 2 < 5 * l * l:
        d += 1
    return d


def stall_bound(d: int, l: int) -> float:
    return d * (d - l) / (d + 4 * l)


@dataclass(frozen=True)
class SpiderSearchState:
    a: int
    pairs: tuple[tuple[int, int], ...]  # (q_i, b_i)
    A: frozenset[int]
    B: frozenset[int]

    @property
    def S(self) -> tuple[int, ...]:
        return tuple(b for _, b in self.pairs)

    @property
    def Q(self) -> tuple[int, ...]:
        return tuple(q for q, _ in self.pairs)

    @property
    def s(self) -> int:
        return len(self.pairs)


@dataclass
class Spider2Trace:
    l: int
    d: int = 0
    route: str = "none"  # "direct", "local" or "none"
    direct_available: bool = False
    hub: Optional[int] = None
    halted_s: Optional[int] = None
    move_free: bool = False
    extend_moves: int = 0
    exchange_moves: int = 0
    state: Optional[SpiderSearchState] = field(default=None, repr=False)

    @property
    def bound(self) -> float:
        return stall_bound(self.d, self.l)

    @property
    def bound_applies(self) -> bool:
        """Whether the counting argument covers this halted search."""
        return (
            self.route == "local"
            and self.move_free
            and not self.direct_available
            and self.d >= 2 * self.l
        )


def spider2_local_search(
    G: Digraph, a: int, B: frozenset[int], l: int, exhaust: bool = False
) -> tuple[list[tuple[int, int]], int, int, bool]:
    """Grow pairs ``(q_i, b_i)`` with ``q_i -> b_i -> a`` and ``b_i`` in ``B``.

    Extensions are tried exhaustively (feeders ascending, then their
    in-neighbours ascending) before a single exchange.  Returns the pairs,
    the two move counts and whether the search stopped with no move left.
    Stops early at ``l`` pairs unless ``exhaust``.
    """
    feeders = sorted(G._in[a] & B)
    feeder_set = frozenset(feeders)
    pairs: list[tuple[int, int]] = []
    covered: set[int] = set()
    extends = exchanges = 0

    def done() -> bool:
        return len(pairs) >= l and not exhaust

    while not done():
        for r in feeders:
            if r in covered:
                continue
            xs = [x for x in G._in[r] if x not in covered and x != a]
            if xs:
                x = min(xs)
                pairs.append((x, r))
                covered.update((x, r))
                extends += 1
                if done():
                    break
        if done():
            break
        # one extension pass leaves no extension applicable
        for i, (q, b) in enumerate(pairs):
            X = sorted(v for v in G._out[q] & feeder_set if v not in covered)
            if not X:
                continue
            Y = sorted(v for v in G._out[b] & feeder_set if v not in covered)
            pick = next(((x, y) for x in X for y in Y if x != y), None)
            if pick is not None:
                x, y = pick
                pairs[i] = (q, x)
                pairs.append((b, y))
                covered.update(pick)
                exchanges += 1
                break
        else:
            return pairs, extends, exchanges, True
    return pairs, extends, exchanges, False


def spider2_search(
    host: Digraph, l: int, *, exhaust: bool = False, use_direct: bool = True
) -> tuple[Optional[SpiderCertificate], Spider2Trace]:
    """Search for a spider with ``l`` rays of length 2, returning a trace.

    Out-degrees are first cut to exactly ``d = min_out_degree(host)``.  With
    ``A`` the vertices of in-degree >= 2l, a vertex of ``A`` with ``l``
    in-neighbours inside ``A`` yields the spider directly.  Otherwise a hub
    ``a`` in ``A`` maximizing the number of 2-paths ``V -> B -> a`` is grown
    by local search over pairs ``q_i -> b_i -> a`` with two moves:

    * extend: a fresh path ``x -> r -> a`` with ``r`` in ``B`` unused;
    * exchange: replace ``b_i`` by two fresh in-neighbours ``x``, ``y`` of
      ``a`` hit from ``q_i`` and ``b_i``; ``b_i`` becomes a ``q``.

    A move-free state reached without the direct route has
    ``s >= d(d-l)/(d+4l)``, which is checked.  ``exhaust`` keeps searching
    past ``s == l``; ``use_direct=False`` skips the direct route.
    """
    if l < 1:
        raise PreconditionError("l must be at least 1")
    trace = Spider2Trace(l=l)
    if host.vertex_count == 0:
        return None, trace
    d = min_out_degree(host)
    trace.d = d
    if d == 0 or host.vertex_count < 2 * l + 1:
        return None, trace
    G = prune_to_exact_outdegree(host, d)
    V = frozenset(G.vertices())
    A = frozenset(v for v in V if len(G._in[v]) >= 2 * l)
    B = V - A
    if not A:
        return None, trace
    in_A = {v: G._in[v] & A for v in A}
    trace.direct_available = any(len(in_A[r]) >= l for r in A)

    if use_direct and trace.direct_available:
        r = min(v for v in A if len(in_A[v]) >= l)
        heads = sorted(in_A[r])[:l]
        taken = {r, *heads}
        rays = []
        for a_i in heads:
            free = [x for x in G._in[a_i] if x not in taken]
            if not free:
                break
            x = min(free)
            taken.add(x)
            rays.append((x, a_i))
        if len(rays) == l:
            trace.route = "direct"
            cert = SpiderCertificate(r, tuple(rays))
            _check_spider(host, cert, l)
            return cert, trace

    trace.route = "local"
    a = min(A, key=lambda v: (-count_two_paths(G, V, B, frozenset((v,))), v))
    trace.hub = a
    pairs, trace.extend_moves, trace.exchange_moves, trace.move_free = spider2_local_search(
        G, a, B, l, exhaust=exhaust
    )
    trace.halted_s = len(pairs)
    trace.state = SpiderSearchState(a, tuple(pairs), A, B)
    if trace.bound_applies and len(pairs) < trace.bound:
        raise AssertionError(
            f"local search halted at s={len(pairs)} below d(d-l)/(d+4l)={trace.bound:.3f}"
        )
    if len(pairs) < l:
        return None, trace
    cert = SpiderCertificate(a, tuple(pairs[:l]))
    _check_spider(host, cert, l)
    return cert, trace


def _check_spider(host: Digraph, cert: SpiderCertificate, l: int) -> None:
    if not cert.validate(host, 2, l):
        raise AssertionError("spider search produced an invalid certificate")


def find_spider2(host: Digraph, l: int) -> Optional[SpiderCertificate]:
    return spider2_search(host, l)[0]

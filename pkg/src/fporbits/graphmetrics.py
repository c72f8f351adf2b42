"""Distances, complete-tree sizes, a constructive dense-words search, and
the shortest cycle through 0 in the undirected functional multigraph over
the algebraic closure (explored up to caps).

Cycle semantics: a self-loop at 0 is a cycle of length 1; two distinct
labeled edges joining 0 to the same vertex form a cycle of length 2; longer
cycles are simple.  Edges are identified by (directed source, label), so
parallel labeled edges are distinct.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .dynamics import FunctionalGraph, _validate_generators
from .errors import BudgetExceeded, WordPoolError
from .fields import PrimeFieldCtx
from .poly import (
    Polynomial,
    canonical_ext,
    ddf_components,
    lift_poly,
    roots_in_extensions,
    roots_in_field,
    squarefree_part,
)

__all__ = [
    "UNREACHABLE",
    "INFINITE_CYCLE",
    "tree_size_B",
    "distances_from",
    "distance",
    "CompositionWord",
    "DenseSearchResult",
    "dense_words_search",
    "recount_L",
    "derived_dense_bound",
    "WalkStep",
    "CycleSearchResult",
    "shortest_cycle_through_zero",
]

UNREACHABLE = math.inf
INFINITE_CYCLE = math.inf


def tree_size_B(k: int, h: int) -> int:
    """Number of vertices of the complete k-ary tree of depth h-1."""
    if k < 1 or h < 1:
        raise ValueError(f"tree size needs k >= 1 and h >= 1, got ({k}, {h})")
    if k == 1:
        return h
    return (k**h - 1) // (k - 1)


def distances_from(graph: FunctionalGraph, u: int) -> np.ndarray:
    """Directed BFS distances from u to every vertex; -1 when unreachable."""
    n = graph.n
    if not 0 <= u < n:
        raise ValueError(f"vertex {u} out of range")
    dist = np.full(n, -1, dtype=np.int64)
    dist[u] = 0
    frontier = np.array([u], dtype=np.int64)
    d = 0
    while frontier.size:
        d += 1
        nxt = np.unique(np.concatenate([s[frontier] for s in graph.succ]))
        nxt = nxt[dist[nxt] < 0]
        dist[nxt] = d
        frontier = nxt
    return dist


def distance(graph: FunctionalGraph, u: int, v: int):
    """Directed distance, or UNREACHABLE."""
    n = graph.n
    if not 0 <= v < n:
        raise ValueError(f"vertex {v} out of range")
    d = int(distances_from(graph, u)[v])
    return UNREACHABLE if d < 0 else d


@dataclass(frozen=True)
class CompositionWord:
    """A word over the edge labels {1..k}.

    The empty word is allowed and acts as the identity walk; it appears in
    the search pool for k >= 2, where the pool mirrors the complete k-tree
    (all words of length 0..h-1).
    """

    labels: tuple

    def __post_init__(self):
        if any(not isinstance(l, int) or l < 1 for l in self.labels):
            raise ValueError(f"labels must be positive ints, got {self.labels}")

    def __len__(self) -> int:
        return len(self.labels)

    def walk(self, graph: FunctionalGraph, v: int) -> int:
        """Endpoint of the walk from v reading labels left to right."""
        for lab in self.labels:
            v = int(graph.succ[lab - 1][v])
        return v


def _word_pool(k: int, h: int) -> list:
    """Search pool, ordered by length then lexicographically.

    k = 1: the h nonempty words of length <= h.  k >= 2: all words of
    length 0..h-1, the vertex set of the complete k-tree.  Either way the
    pool has exactly tree_size_B(k, h) entries, which is asserted.
    """
    if k == 1:
        lengths = range(1, h + 1)
    else:
        lengths = range(h)
    pool = []
    for r in lengths:
        for labels in itertools.product(range(1, k + 1), repeat=r):
            pool.append(CompositionWord(labels))
    if len(pool) != tree_size_B(k, h):
        raise RuntimeError(
            f"word pool size {len(pool)} does not reconcile with "
            f"B({k},{h}) = {tree_size_B(k, h)}"
        )
    return pool


@dataclass(frozen=True)
class DenseSearchResult:
    """Best word tuple found and the quantities entering the bound.

    L counts v with d(u,v) <= N such that every chosen word sends v to a
    target-set vertex still within distance N of u.  A_N counts target
    vertices within the ball, nu the whole ball.
    """

    words: tuple
    L: int
    A_N: int
    nu: int
    hypothesis_met: bool
    k: int
    h: int
    ell: int

    @property
    def derived_bound(self) -> Fraction:
        return derived_dense_bound(self.k, self.h, self.ell, self.A_N)

    @property
    def bound_holds(self) -> bool:
        return self.L >= self.derived_bound


def derived_dense_bound(k: int, h: int, ell: int, A_N: int) -> Fraction:
    """h * A_N / (3 * B(k,h)^(ell+1)), the explicit constant extracted from
    the counting argument."""
    return Fraction(h * A_N, 3 * tree_size_B(k, h) ** (ell + 1))


def _pack_bits(mask: np.ndarray) -> int:
    return int.from_bytes(np.packbits(mask, bitorder="little").tobytes(), "little")


def dense_words_search(
    graph: FunctionalGraph,
    u: int,
    A,
    N: int,
    h: int,
    ell: int,
    *,
    max_tuples: int = 10**6,
) -> DenseSearchResult:
    """Exhaustively maximize L over all ell-subsets of the word pool.

    Ties break to the earliest subset in pool order (by length, then
    lexicographic), making the result deterministic.
    """
    if h < 1 or ell < 1:
        raise ValueError(f"need h >= 1 and ell >= 1, got ({h}, {ell})")
    if N < 0:
        raise ValueError(f"need N >= 0, got {N}")
    n = graph.n
    k = graph.k
    A = sorted({int(a) for a in A})
    if A and not (0 <= A[0] and A[-1] < n):
        raise ValueError("target set contains non-vertices")

    pool = _word_pool(k, h)
    beta = len(pool)
    if ell > beta:
        raise WordPoolError(
            f"cannot choose {ell} distinct words from a pool of {beta}"
        )
    n_tuples = math.comb(beta, ell)
    if n_tuples > max_tuples:
        raise BudgetExceeded(
            f"{n_tuples} word tuples exceed the budget of {max_tuples}"
        )

    dist = distances_from(graph, u)
    ball = (dist >= 0) & (dist <= N)
    a_mask = np.zeros(n, dtype=bool)
    if A:
        a_mask[A] = True
    good = ball & a_mask
    nu = int(ball.sum())
    A_N = int(good.sum())
    hypothesis_met = A_N >= 3 * tree_size_B(k, h) and h * A_N >= 3 * ell * nu

    # per-word satisfaction sets as bit masks over vertices
    images: dict = {(): np.arange(n, dtype=np.int64)}
    word_bits = []
    for w in pool:
        img = images.get(w.labels)
        if img is None:
            img = graph.succ[w.labels[-1] - 1][images[w.labels[:-1]]]
            images[w.labels] = img
        word_bits.append(_pack_bits(good[img]))
    ball_bits = _pack_bits(ball)

    best_L = -1
    best_combo = None
    for combo in itertools.combinations(range(beta), ell):
        acc = ball_bits
        for i in combo:
            acc &= word_bits[i]
            if not acc:
                break
        L = acc.bit_count()
        if L > best_L:
            best_L = L
            best_combo = combo
    return DenseSearchResult(
        words=tuple(pool[i] for i in best_combo),
        L=best_L,
        A_N=A_N,
        nu=nu,
        hypothesis_met=hypothesis_met,
        k=k,
        h=h,
        ell=ell,
    )


def recount_L(graph: FunctionalGraph, u: int, A, N: int, words) -> int:
    """Independent recount of L: plain dict BFS and per-vertex walks, no
    shared arrays or bit tricks."""
    n = graph.n
    dist = {u: 0}
    dq = deque([u])
    while dq:
        v = dq.popleft()
        for s in graph.succ:
            w = int(s[v])
            if w not in dist:
                dist[w] = dist[v] + 1
                dq.append(w)
    targets = {int(a) for a in A}
    count = 0
    for v in range(n):
        if dist.get(v, n + 1) > N:
            continue
        ok = True
        for w in words:
            y = v
            for lab in w.labels:
                y = int(graph.succ[lab - 1][y])
            if dist.get(y, n + 1) > N or y not in targets:
                ok = False
                break
        if ok:
            count += 1
    return count


# -- shortest cycle through 0 over the closure -----------------------------


@dataclass(frozen=True)
class WalkStep:
    """One traversed edge.  forward means f_label(source) == target; a
    backward traversal satisfies f_label(target) == source instead."""

    source: object
    target: object
    label: int
    forward: bool


@dataclass(frozen=True)
class CycleSearchResult:
    """Outcome of the capped cycle search.

    exact means the reported length is the true shortest cycle length
    through 0 over the whole algebraic closure: every shorter length was
    excluded without any cap-trimmed expansion.  lower_bound is always
    closure-valid ("no cycle through 0 of length <= lower_bound"), even
    when deeper levels were trimmed.  subgraph_lower_bound is the same
    statement restricted to the explored degree-capped subgraph, so it can
    exceed lower_bound when extension roots were cut off.  found_length
    reports the best concrete cycle seen whether or not it was certified
    minimal; such a cycle is always genuine.  length is INFINITE_CYCLE when
    the search proved no cycle through 0 exists at all (the component of 0
    was exhausted with nothing trimmed).
    """

    exact: bool
    length: object
    found_length: object
    lower_bound: object
    subgraph_lower_bound: object
    witness: tuple | None
    host: object
    degree_cap: int
    length_cap: int
    skipped: bool


@dataclass(frozen=True)
class _IncidentEdge:
    label: int
    forward: bool  # True: the edge 0 -> f_label(0); False: a root x -> 0
    field: object
    endpoint: object
    degree: int


class _EdgeBFS:
    """Shortest path from one endpoint of a removed incident edge back to 0.

    The walk lives in a single growing host field F_{p^M}; when a backward
    expansion needs roots outside the host, the host is replaced by
    F_{p^{M j}} and all state is re-embedded (deterministically: the image
    of the old generator is the lexicographically least root of the old
    modulus).  cert tracks how far level expansion stayed complete over the
    closure; sub_cert tracks completeness within the degree cap only.
    """

    def __init__(self, fs, base, edge, depth_limit, degree_cap, max_vertices, seed):
        self.base = base
        self.fs_base = fs
        self.k = len(fs)
        self.degree_cap = degree_cap
        self.max_vertices = max_vertices
        self.seed = seed
        self.depth_limit = depth_limit

        self.host = edge.field
        self.host_degree = edge.degree
        self.fs_host = [self._lift(f) for f in fs]
        self.zero = self.host.coerce(0)
        self.start = edge.endpoint
        blocked_src = self.zero if edge.forward else self.start
        self.blocked = (blocked_src, edge.label)
        self.edge = edge

        self.parents = {self.start: None}
        self.frontier = [self.start]
        self.next_level = []
        self.found_dist = None
        self.hit = None  # (prev_vertex, label, forward) reaching 0
        self.cert = 0
        self.sub_cert = 0
        self.closure_frozen = False
        self.subgraph_frozen = False
        self.exhausted = False
        self.budget_hit = False

    def _lift(self, f: Polynomial) -> Polynomial:
        if self.host == self.base:
            return f
        return lift_poly(f, self.host, self.host.embed_base)

    def _grow(self, j: int):
        new_deg = self.host_degree * j
        new_host = canonical_ext(self.base, new_deg)
        if self.host == self.base:
            phi = new_host.embed_base
        else:
            lifted_mod = lift_poly(self.host.modulus, new_host, new_host.embed_base)
            r = roots_in_field(lifted_mod, seed=self.seed)[0]
            powers = [new_host.one]
            for _ in range(self.host_degree - 1):
                powers.append(new_host.mul(powers[-1], r))

            def phi(a, _powers=powers, _host=new_host):
                acc = _host.zero
                for coeff, pw in zip(a, _powers):
                    if coeff:
                        acc = _host.add(acc, _host.mul(_host.embed_base(coeff), pw))
                return acc

        self.parents = {
            phi(v): (None if rec is None else (phi(rec[0]), rec[1], rec[2]))
            for v, rec in self.parents.items()
        }
        self.frontier = [phi(v) for v in self.frontier]
        self.next_level = [phi(v) for v in self.next_level]
        self.start = phi(self.start)
        self.blocked = (phi(self.blocked[0]), self.blocked[1])
        if self.hit is not None:
            self.hit = (phi(self.hit[0]), self.hit[1], self.hit[2])
        self.host = new_host
        self.host_degree = new_deg
        self.zero = new_host.coerce(0)
        self.fs_host = [self._lift(f) for f in self.fs_base]

    def _offer(self, v, w, lab: int, fwd: bool) -> bool:
        """Record the neighbor w of v; returns False when the budget dies."""
        if w == self.zero:
            if self.found_dist is None:
                self.found_dist = self.depth + 1
                self.hit = (v, lab, fwd)
            return True
        if w in self.parents:
            return True
        if len(self.parents) >= self.max_vertices:
            self.budget_hit = True
            return False
        self.parents[w] = (v, lab, fwd)
        self.next_level.append(w)
        return True

    def _expand(self, i: int) -> bool:
        """Expand frontier[i]; returns closure-completeness of the step."""
        # grow the host until no in-cap root is left unsplit
        while True:
            v = self.frontier[i]
            grow = None
            for lab in range(1, self.k + 1):
                g = self.fs_host[lab - 1] - Polynomial.constant(self.host, v)
                for d, _ in ddf_components(squarefree_part(g)):
                    if d > 1 and self.host_degree * d <= self.degree_cap:
                        grow = d
                        break
                if grow:
                    break
            if grow is None:
                break
            self._grow(grow)
        v = self.frontier[i]
        clean = True
        for lab in range(1, self.k + 1):
            if self.blocked != (v, lab):
                if not self._offer(v, self.fs_host[lab - 1].eval(v), lab, True):
                    return False
            g = self.fs_host[lab - 1] - Polynomial.constant(self.host, v)
            rad = squarefree_part(g)
            if any(d > 1 for d, _ in ddf_components(rad)):
                clean = False  # roots beyond the degree cap were cut off
            for x in roots_in_field(rad, seed=self.seed):
                if self.blocked == (x, lab):
                    continue
                if not self._offer(v, x, lab, False):
                    return False
        return clean

    def run(self):
        self.depth = 0
        while self.depth < self.depth_limit:
            if not self.frontier:
                self.exhausted = True
                if not self.closure_frozen:
                    self.cert = math.inf
                if not self.subgraph_frozen:
                    self.sub_cert = math.inf
                return
            self.next_level = []
            level_clean = True
            for i in range(len(self.frontier)):
                ok = self._expand(i)
                if self.budget_hit:
                    self.closure_frozen = True
                    self.subgraph_frozen = True
                    return
                level_clean = level_clean and ok
            if self.found_dist is not None:
                return
            if level_clean and not self.closure_frozen:
                self.cert += 1
            else:
                self.closure_frozen = True
            if not self.subgraph_frozen:
                self.sub_cert += 1
            self.frontier = self.next_level
            self.depth += 1

    def witness_steps(self):
        """The full cycle walk: the removed edge from 0, then the found path."""
        if self.found_dist is None:
            return None
        e = self.edge
        first = WalkStep(self.zero, self.start, e.label, e.forward)
        chain = []
        v, lab, fwd = self.hit
        chain.append(WalkStep(v, self.zero, lab, fwd))
        cur = v
        while cur != self.start:
            prev, lab, fwd = self.parents[cur]
            chain.append(WalkStep(prev, cur, lab, fwd))
            cur = prev
        chain.reverse()
        return (first, *chain)


def shortest_cycle_through_zero(
    fs,
    degree_cap: int = 6,
    length_cap: int = 10,
    *,
    seed: int = 0,
    max_vertices: int = 200_000,
) -> CycleSearchResult:
    """Certified search for the shortest cycle through 0.

    Removes each edge incident to 0 in turn and BFS-searches the remaining
    multigraph for the shortest way back; the minimum over incident edges
    is the answer.  Exactness and the two lower bounds follow the
    CycleSearchResult contract.
    """
    fs = _validate_generators(fs)
    base = fs[0].ctx
    if not isinstance(base, PrimeFieldCtx):
        raise TypeError("the cycle search starts from a prime field")
    if degree_cap < 1 or length_cap < 1:
        raise ValueError("caps must be >= 1")

    def result(**kw):
        fields = dict(
            exact=False,
            length=None,
            found_length=None,
            lower_bound=0,
            subgraph_lower_bound=0,
            witness=None,
            host=base,
            degree_cap=degree_cap,
            length_cap=length_cap,
            skipped=False,
        )
        fields.update(kw)
        return CycleSearchResult(**fields)

    for i, f in enumerate(fs, 1):
        if f.eval(0) == 0:
            return result(
                exact=True,
                length=1,
                found_length=1,
                witness=(WalkStep(0, 0, i, True),),
            )
    if length_cap == 1:
        return result(lower_bound=1, subgraph_lower_bound=1)

    # incident edges at 0, forward first, then roots by (label, degree, value)
    incident = []
    inc_complete = True
    for i, f in enumerate(fs, 1):
        incident.append(
            _IncidentEdge(label=i, forward=True, field=base, endpoint=f.eval(0), degree=1)
        )
    for i, f in enumerate(fs, 1):
        if any(d > degree_cap for d, _ in ddf_components(squarefree_part(f))):
            inc_complete = False
        for rec in roots_in_extensions(f, degree_cap, seed=seed):
            incident.append(
                _IncidentEdge(
                    label=i, forward=False, field=rec.field,
                    endpoint=rec.value, degree=rec.degree,
                )
            )

    # parallel pair: two distinct incident edges sharing the far endpoint
    groups: dict = {}
    for e in incident:
        groups.setdefault((e.degree, e.field.to_int(e.endpoint)), []).append(e)
    for e in incident:
        pair = groups[(e.degree, e.field.to_int(e.endpoint))]
        if len(pair) >= 2:
            e1, e2 = pair[0], pair[1]
            host = e1.field
            z = host.coerce(0)
            w1 = WalkStep(z, e1.endpoint, e1.label, e1.forward)
            w2 = WalkStep(e2.endpoint, z, e2.label, not e2.forward)
            return result(
                exact=True,
                length=2,
                found_length=2,
                lower_bound=1,
                subgraph_lower_bound=1,
                witness=(w1, w2),
                host=host,
                skipped=not inc_complete,
            )
    if length_cap == 2:
        lb = 2 if inc_complete else 1
        return result(lower_bound=lb, subgraph_lower_bound=2, skipped=not inc_complete)

    best = None
    best_run = None
    runs = []
    for e in incident:
        cap_now = length_cap if best is None else min(length_cap, best - 1)
        depth_limit = cap_now - 1
        if depth_limit < 1:
            break
        run = _EdgeBFS(fs, base, e, depth_limit, degree_cap, max_vertices, seed)
        run.run()
        runs.append(run)
        if run.found_dist is not None:
            c = run.found_dist + 1
            if best is None or c < best:
                best = c
                best_run = run

    any_skip = (not inc_complete) or any(
        r.closure_frozen or r.budget_hit for r in runs
    )
    # a cycle avoiding every enumerated incident edge needs two incident
    # edges beyond the degree cap, so an incomplete enumeration caps the
    # closure bound at 1 (only length 1 stays excluded)
    if inc_complete:
        closure_lb = max(2, min((r.cert + 1 for r in runs), default=math.inf))
    else:
        closure_lb = 1
    sub_lb = max(2, min((r.sub_cert + 1 for r in runs), default=math.inf))

    if best is not None:
        exact = inc_complete and all(r.cert >= best - 2 for r in runs)
        return result(
            exact=exact,
            length=best if exact else None,
            found_length=best,
            lower_bound=(best - 1) if exact else min(closure_lb, best - 1),
            subgraph_lower_bound=min(sub_lb, best - 1),
            witness=best_run.witness_steps(),
            host=best_run.host,
            skipped=any_skip,
        )

    if inc_complete and all(r.exhausted and not r.closure_frozen for r in runs):
        return result(
            exact=True,
            length=INFINITE_CYCLE,
            lower_bound=math.inf,
            subgraph_lower_bound=math.inf,
        )

    return result(
        lower_bound=min(closure_lb, length_cap),
        subgraph_lower_bound=min(sub_lb, length_cap),
        skipped=any_skip,
    )

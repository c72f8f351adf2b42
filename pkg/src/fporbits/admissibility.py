"""Admissible families, composed families, the coset-counting window
constants, and the proof-parameter calculators.

A family g_1..g_k is admissible when every g_i has a root (over the
closure) that is not a root of any other g_j.  This is decided entirely
inside F_p[X]: strip from squarefree_part(g_i) everything shared with the
other polynomials and check that a factor survives.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np

from .arrays import modpow, polyval_mod
from .dynamics import _validate_generators
from .errors import BudgetExceeded, ContextMismatch
from .fields import PrimeFieldCtx
from .graphmetrics import (
    CompositionWord,
    CycleSearchResult,
    shortest_cycle_through_zero,
    tree_size_B,
)
from .poly import (
    Polynomial,
    ddf_components,
    poly_compose,
    poly_gcd,
    squarefree_part,
)
from .subgroups import SubgroupDescriptor

__all__ = [
    "AdmissibilityWitness",
    "is_admissible",
    "composed_family",
    "LemmaCompositionReport",
    "verify_lemma_admissible_compositions",
    "VyuginConstants",
    "vyugin_constants",
    "count_joint_coset_hits",
    "TheoremParams",
    "thm_params",
]


def _edf_one_factor(c: Polynomial, d: int, seed: int) -> Polynomial:
    """One monic irreducible factor of c, where c is a product of distinct
    irreducibles all of degree d (a distinct-degree component)."""
    ctx = c.ctx
    rng = random.Random(f"edf:{seed}:{ctx.size}:{c.degree}:{d}")
    q = ctx.size
    exp = (q**d - 1) // 2
    one = Polynomial.constant(ctx, 1)
    while c.degree > d:
        coeffs = [ctx.from_int(rng.randrange(q)) for _ in range(c.degree)]
        a = Polynomial(ctx, coeffs)
        if a.degree < 1:
            continue
        b = a.pow_mod(exp, c) - one
        if b.is_zero:
            continue
        g = poly_gcd(b, c)
        if 0 < g.degree < c.degree:
            c = g if g.degree <= c.degree - g.degree else c // g
    return c.monic()


def _one_irreducible_factor(f: Polynomial, seed: int) -> Polynomial:
    """Smallest-degree irreducible factor of a squarefree f."""
    d, comp = ddf_components(f)[0]
    return _edf_one_factor(comp, d, seed)


@dataclass(frozen=True)
class AdmissibilityWitness:
    """Per-index outcome: an irreducible factor of g_i coprime to every
    other g_j, or None when index i has no such factor (the family fails
    there)."""

    witnesses: tuple

    @property
    def admissible(self) -> bool:
        return all(w is not None for w in self.witnesses)

    @property
    def failing_indices(self) -> tuple:
        return tuple(i for i, w in enumerate(self.witnesses) if w is None)


def is_admissible(gs, *, seed: int = 0) -> AdmissibilityWitness:
    """Decide admissibility by gcd arithmetic alone.

    For each i, divide squarefree_part(g_i) by its gcd with every other
    g_j; whatever survives carries exactly the roots unique to g_i.
    """
    gs = list(gs)
    if not gs:
        raise ValueError("empty family")
    ctx = gs[0].ctx
    for i, g in enumerate(gs):
        if not isinstance(g, Polynomial):
            raise TypeError(f"entry {i} is not a Polynomial")
        if g.ctx != ctx:
            raise ContextMismatch("mixed coefficient fields in one family")
        if g.degree < 1:
            raise ValueError(f"constant polynomial at index {i}")
    witnesses = []
    for i, g in enumerate(gs):
        q = squarefree_part(g)
        for j, other in enumerate(gs):
            if j == i or q.degree < 1:
                continue
            d = poly_gcd(q, other)
            if d.degree >= 1:
                q = q // d
        witnesses.append(_one_irreducible_factor(q, seed) if q.degree >= 1 else None)
    return AdmissibilityWitness(tuple(witnesses))


def composed_family(fs, h: int, *, max_degree: int = 10**6):
    """All compositions f_{i_1} o ... o f_{i_r} with 1 <= r <= h, paired
    with their words, in word-enumeration order (length, then lex).

    Words extend on the right: the word (i_1, .., i_r) denotes
    f_{i_1}(f_{i_2}(...)), so the rightmost label acts first.  Formal
    compositions are not deduplicated; the count is asserted against the
    tree size.
    """
    fs = _validate_generators(fs)
    if h < 1:
        raise ValueError(f"need h >= 1, got {h}")
    k = len(fs)
    out = []
    prev = {(): Polynomial.x(fs[0].ctx)}
    import itertools

    for r in range(1, h + 1):
        cur = {}
        for labels in itertools.product(range(1, k + 1), repeat=r):
            prefix = prev[labels[:-1]]
            g = fs[labels[-1] - 1]
            if prefix.degree * g.degree > max_degree:
                raise BudgetExceeded(
                    f"composition degree {prefix.degree * g.degree} exceeds "
                    f"the cap {max_degree}"
                )
            poly = poly_compose(prefix, g)
            cur[labels] = poly
            out.append((CompositionWord(labels), poly))
        prev = cur
    expected = tree_size_B(k, h + 1) - 1
    if len(out) != expected:
        raise RuntimeError(
            f"composed family size {len(out)} does not reconcile with "
            f"B({k},{h + 1}) - 1 = {expected}"
        )
    return out


@dataclass(frozen=True)
class LemmaCompositionReport:
    """Outcome of the composed-family admissibility pipeline.

    A FAIL here with an exact cycle certificate would contradict a proved
    statement, so it carries maximum severity.
    """

    status: str  # PASS, FAIL or SKIPPED
    severity: str
    reason: str
    h: int
    certified_c0_floor: object
    cycle: CycleSearchResult
    family_size: int | None
    failing_indices: tuple | None


def verify_lemma_admissible_compositions(
    fs,
    h: int,
    degree_cap: int = 6,
    length_cap: int = 10,
    *,
    seed: int = 0,
) -> LemmaCompositionReport:
    """Certify h < C0/2 via the cycle search, then assert that every
    composition of length <= h is admissible.

    The certificate uses the closure-valid side of the cycle result: an
    exact length, or lower_bound + 1 as a floor on C0.
    """
    fs = _validate_generators(fs)
    if h < 1:
        raise ValueError(f"need h >= 1, got {h}")
    cyc = shortest_cycle_through_zero(fs, degree_cap, length_cap, seed=seed)
    floor = cyc.length if cyc.exact else cyc.lower_bound + 1
    if not 2 * h < floor:
        reason = (
            f"hypothesis fails: C0 = {cyc.length} <= 2h = {2 * h}"
            if cyc.exact
            else f"certificate too weak: C0 floor {floor} does not exceed 2h = {2 * h}"
        )
        return LemmaCompositionReport(
            status="SKIPPED",
            severity="info",
            reason=reason,
            h=h,
            certified_c0_floor=floor,
            cycle=cyc,
            family_size=None,
            failing_indices=None,
        )
    family = composed_family(fs, h)
    wit = is_admissible([poly for _, poly in family], seed=seed)
    if wit.admissible:
        return LemmaCompositionReport(
            status="PASS",
            severity="info",
            reason=f"all {len(family)} compositions admissible under certified C0 floor {floor}",
            h=h,
            certified_c0_floor=floor,
            cycle=cyc,
            family_size=len(family),
            failing_indices=(),
        )
    return LemmaCompositionReport(
        status="FAIL",
        severity="critical",
        reason=(
            "admissibility failed under a valid cycle certificate at indices "
            f"{wit.failing_indices}; this contradicts a proved statement"
        ),
        h=h,
        certified_c0_floor=floor,
        cycle=cyc,
        family_size=len(family),
        failing_indices=wit.failing_indices,
    )


def _int_kth_root(n: int, k: int):
    r = round(n ** (1.0 / k))
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand**k == n:
            return cand
    return None


@dataclass(frozen=True)
class VyuginConstants:
    """Window and conclusion constants for the joint coset-hit bound.

    C1 is exact.  C2 carries irrational exponents: it is kept as an
    evaluable expression plus directed-rounding decimal renderings, while
    the window test itself cross-multiplies integer powers and is exact.
    C3 is exact when (m_1*...*m_k)^(1/k) is an integer, otherwise rendered
    to the requested precision; the conclusion test is exact either way.
    """

    m: tuple
    k: int
    p: int | None
    c1: int
    c3_exact: int | None

    @property
    def _prod(self) -> int:
        return math.prod(self.m)

    @property
    def _sum(self) -> int:
        return sum(self.m)

    @property
    def c2_expression(self) -> str:
        n = 2 * self.k + 1
        return f"({self.k + 1})**(-{2 * self.k}/{n}) * ({self._prod})**(-2/{n})"

    def c2_decimal(self, digits: int = 50):
        n = 2 * self.k + 1
        with mpmath.mp.workdps(digits):
            return mpmath.power(self.k + 1, mpmath.mpf(-2 * self.k) / n) * mpmath.power(
                self._prod, mpmath.mpf(-2) / n
            )

    def c3_decimal(self, digits: int = 50):
        with mpmath.mp.workdps(digits):
            root = mpmath.power(self._prod, mpmath.mpf(1) / self.k)
            return 4 * (self.k + 1) * self._sum * root

    def _resolve_p(self, p):
        p = p if p is not None else self.p
        if p is None:
            raise ValueError("no prime p supplied for the window")
        return p

    def window_upper_decimal(self, p=None, digits: int = 50):
        p = self._resolve_p(p)
        n = 2 * self.k + 1
        with mpmath.mp.workdps(digits):
            return self.c2_decimal(digits) * mpmath.power(p, mpmath.mpf(2 * self.k) / n)

    def window_bounds(self, p=None, digits: int = 50):
        return self.c1, self.window_upper_decimal(p, digits)

    def in_window(self, group_order: int, p=None) -> bool:
        """Exact test of C1 < #G < C2 * p^(2k/(2k+1)), by raising the upper
        comparison to the (2k+1)-th power so only integers are compared."""
        p = self._resolve_p(p)
        if group_order <= self.c1:
            return False
        lhs = group_order ** (2 * self.k + 1) * (self.k + 1) ** (2 * self.k) * self._prod**2
        return lhs < p ** (2 * self.k)

    def window_status(self, group_order: int, p=None, digits: int = 50) -> str:
        """Directed-rounding counterpart of in_window: PASS, FAIL, or
        INDETERMINATE when the rendered bound straddles #G."""
        p = self._resolve_p(p)
        if group_order <= self.c1:
            return "FAIL"
        with mpmath.mp.workdps(digits):
            ub = self.window_upper_decimal(p, digits)
            margin = ub * mpmath.power(10, 10 - digits)
            g = mpmath.mpf(group_order)
            if g < ub - margin:
                return "PASS"
            if g > ub + margin:
                return "FAIL"
        return "INDETERMINATE"

    def conclusion_holds(self, count: int, group_order: int) -> bool:
        """Exact test of count <= C3 * #G^(1/2 + 1/(2k)), cross-multiplied
        to integer powers."""
        if count < 0:
            raise ValueError("count must be nonnegative")
        lhs = count ** (2 * self.k)
        rhs = (4 * (self.k + 1) * self._sum) ** (2 * self.k) * self._prod**2 * group_order ** (
            self.k + 1
        )
        return lhs <= rhs

    def conclusion_rhs_decimal(self, group_order: int, digits: int = 50):
        with mpmath.mp.workdps(digits):
            expo = mpmath.mpf(1) / 2 + mpmath.mpf(1) / (2 * self.k)
            return self.c3_decimal(digits) * mpmath.power(group_order, expo)


def vyugin_constants(m, k: int | None = None, p: int | None = None) -> VyuginConstants:
    """Build the constants for a sorted degree vector m of length k >= 2."""
    m = tuple(int(x) for x in m)
    if k is None:
        k = len(m)
    if k != len(m):
        raise ValueError(f"k = {k} does not match len(m) = {len(m)}")
    if k < 2:
        raise ValueError("the coset-hit bound needs k >= 2")
    if any(x < 1 for x in m):
        raise ValueError("degrees must be positive")
    if list(m) != sorted(m):
        raise ValueError("degree vector must be sorted ascending")
    c1 = 2 ** (2 * k) * m[-1] ** (4 * k)
    prod = math.prod(m)
    root = _int_kth_root(prod, k)
    c3_exact = 4 * (k + 1) * sum(m) * root if root is not None else None
    return VyuginConstants(m=m, k=k, p=p, c1=c1, c3_exact=c3_exact)


def count_joint_coset_hits(
    gs,
    G: SubgroupDescriptor,
    coset_reps,
    *,
    max_p: int = 10**7,
    chunk: int = 1 << 20,
) -> int:
    """Exact count of x in F_p with g_i(x) in rep_i * G for every i.

    Membership is (g_i(x) / rep_i)^d == 1, which also rejects g_i(x) = 0.
    The x-range is scanned in fixed-size chunks with an associative sum,
    so chunks are independent units of work.
    """
    ctx = G.ctx
    gs = list(gs)
    reps = [ctx.coerce(r) for r in coset_reps]
    if len(gs) != len(reps):
        raise ValueError(f"{len(gs)} polynomials but {len(reps)} coset representatives")
    if not gs:
        raise ValueError("empty family")
    for i, g in enumerate(gs):
        if not isinstance(g, Polynomial) or g.ctx != ctx:
            raise ContextMismatch(f"polynomial {i} not over the subgroup's field")
    for i, r in enumerate(reps):
        if r == 0:
            raise ValueError(f"coset representative {i} is zero")
    p = ctx.p
    if p > max_p:
        raise BudgetExceeded(f"p = {p} exceeds the brute-force budget {max_p}")
    d = G.order
    inv_reps = [ctx.inv(r) for r in reps]
    coeff_lists = [[int(c) for c in g.coeffs] for g in gs]
    total = 0
    for lo in range(0, p, chunk):
        xs = np.arange(lo, min(lo + chunk, p), dtype=np.int64)
        ok = np.ones(xs.shape, dtype=bool)
        for coeffs, ir in zip(coeff_lists, inv_reps):
            vals = polyval_mod(coeffs, xs, p)
            vals = (vals * ir) % p
            ok &= modpow(vals, d, p) == 1
        total += int(ok.sum())
    return total


@dataclass(frozen=True)
class TheoremParams:
    """Derived proof parameters for the two growth statements.

    context is "THM1" or "THM2".  THM1 fills h, beta and the exact
    subgroup threshold 2^(2 beta) d^(4 h beta).  THM2 fills ell, h (which
    may be 0 at small group orders), beta, delta0 and the exact exponent
    (2 - eps)(1/2 + 1/ell) - 1, which is always negative.
    """

    context: str
    eps: Fraction
    k: int
    d: int
    h: int
    beta: int
    ell: int | None
    delta0: float | None
    group_order: int | None
    subgroup_threshold: int | None
    exponent: Fraction | None

    def assumption_threshold(self, V: int) -> float:
        """THM2's density assumption: rho must be at least
        6 ell (1 + log k) / (eps delta0 log V)."""
        if self.context != "THM2":
            raise ValueError("the density assumption belongs to THM2")
        if V < 2:
            raise ValueError("need V >= 2 for a positive log")
        return (
            6 * self.ell * (1 + math.log(self.k))
            / (float(self.eps) * self.delta0 * math.log(V))
        )


def _coerce_eps(eps) -> Fraction:
    if isinstance(eps, Fraction):
        val = eps
    elif isinstance(eps, int):
        val = Fraction(eps)
    elif isinstance(eps, float):
        val = Fraction(str(eps))
    elif isinstance(eps, str):
        val = Fraction(eps)
    else:
        raise TypeError(f"cannot interpret eps of type {type(eps).__name__}")
    if not 0 < val <= 1:
        raise ValueError(f"eps must lie in (0, 1], got {val}")
    return val


def thm_params(context: str, eps, k: int, d: int, group_order: int | None = None) -> TheoremParams:
    """Fill TheoremParams for the requested context.

    THM1: h is the smallest integer with 1/(2 B(k,h)) < eps (exact
    rational comparison).  THM2: ell = ceil(4/eps - 1), h from the
    logarithmic formula with natural logs, delta0 in (0, 1/2).
    """
    context = context.upper()
    if context not in ("THM1", "THM2"):
        raise ValueError(f"unknown context {context!r}")
    eps = _coerce_eps(eps)
    if k < 1:
        raise ValueError(f"need k >= 1, got {k}")
    if d < 2:
        raise ValueError(f"need d >= 2, got {d}")

    if context == "THM1":
        h = 1
        while not Fraction(1, 2 * tree_size_B(k, h)) < eps:
            h += 1
            if h > 10**6:
                raise BudgetExceeded("no h below 10^6 satisfies 1/(2B(k,h)) < eps")
        beta = tree_size_B(k, h)
        threshold = 2 ** (2 * beta) * d ** (4 * h * beta)
        return TheoremParams(
            context=context,
            eps=eps,
            k=k,
            d=d,
            h=h,
            beta=beta,
            ell=None,
            delta0=None,
            group_order=group_order,
            subgroup_threshold=threshold,
            exponent=None,
        )

    if group_order is None or group_order < 2:
        raise ValueError("THM2 needs a group_order of at least 2")
    ell = math.ceil(4 / eps - 1)
    denom = (ell + 1) * math.log(k) + 2 * math.log(d)
    h = math.floor(math.log(group_order) / (2 * ell * denom))
    delta0 = (1 + math.log(k)) / (2 * ell * denom)
    if not 0 < delta0 < 0.5:
        raise AssertionError(f"delta0 = {delta0} escaped (0, 1/2)")
    exponent = (2 - eps) * (Fraction(1, 2) + Fraction(1, ell)) - 1
    if exponent >= 0:
        raise AssertionError(f"exponent {exponent} is not negative")
    beta = tree_size_B(k, h) if h >= 1 else 0
    return TheoremParams(
        context=context,
        eps=eps,
        k=k,
        d=d,
        h=h,
        beta=beta,
        ell=ell,
        delta0=delta0,
        group_order=group_order,
        subgroup_threshold=None,
        exponent=exponent,
    )

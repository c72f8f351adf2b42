"""Dense univariate polynomials over a field context, and extension fields.

Polynomials store coefficients low-to-high in a canonical form (no trailing
zeros, so the zero polynomial has an empty coefficient tuple and degree
``NEG_INFINITY``).  All arithmetic goes through the owning context, which
lets the same code run over F_p and over the canonical extensions built
here.

Extension fields F_{p^m} are represented as tuples of ints modulo the
canonical irreducible of degree m, which is the lexicographically smallest
monic irreducible (ordering coefficient vectors low-to-high as base-p
digits).  Canonicity matters: two independently constructed contexts for
the same (p, m) are interchangeable, which keeps root bookkeeping across a
whole session stable.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import lru_cache

from .errors import ContextMismatch
from .fields import PrimeFieldCtx, factor_integer

__all__ = [
    "NEG_INFINITY",
    "Polynomial",
    "poly_compose",
    "poly_gcd",
    "poly_xgcd",
    "squarefree_part",
    "roots_in_field",
    "ddf_components",
    "is_irreducible",
    "canonical_irreducible",
    "canonical_ext",
    "ExtFieldCtx",
    "lift_poly",
    "RootRecord",
    "roots_in_extensions",
]

NEG_INFINITY = float("-inf")


class Polynomial:
    """Immutable dense polynomial over a field context."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx, coeffs):
        object.__setattr__(self, "ctx", ctx)
        cs = [ctx.coerce(c) for c in coeffs]
        while cs and ctx.is_zero(cs[-1]):
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    @classmethod
    def constant(cls, ctx, c):
        return cls(ctx, [c])

    @classmethod
    def x(cls, ctx):
        return cls(ctx, [ctx.zero, ctx.one])

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INFINITY

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def lead(self):
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def _check(self, other: "Polynomial"):
        if not isinstance(other, Polynomial):
            raise TypeError(f"expected Polynomial, got {type(other).__name__}")
        if other.ctx != self.ctx:
            raise ContextMismatch(f"contexts differ: {self.ctx!r} vs {other.ctx!r}")

    def __add__(self, other):
        self._check(other)
        ctx = self.ctx
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = ctx.add(out[i], c)
        return Polynomial(ctx, out)

    def __sub__(self, other):
        self._check(other)
        ctx = self.ctx
        n = max(len(self.coeffs), len(other.coeffs))
        out = []
        for i in range(n):
            a = self.coeffs[i] if i < len(self.coeffs) else ctx.zero
            b = other.coeffs[i] if i < len(other.coeffs) else ctx.zero
            out.append(ctx.sub(a, b))
        return Polynomial(ctx, out)

    def __neg__(self):
        return Polynomial(self.ctx, [self.ctx.neg(c) for c in self.coeffs])

    def __mul__(self, other):
        self._check(other)
        ctx = self.ctx
        if self.is_zero or other.is_zero:
            return Polynomial(ctx, [])
        out = [ctx.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if ctx.is_zero(a):
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = ctx.add(out[i + j], ctx.mul(a, b))
        return Polynomial(ctx, out)

    def scale(self, c):
        ctx = self.ctx
        c = ctx.coerce(c)
        return Polynomial(ctx, [ctx.mul(a, c) for a in self.coeffs])

    def __divmod__(self, other):
        self._check(other)
        ctx = self.ctx
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        if self.degree < other.degree:
            return Polynomial(ctx, []), self
        inv_lead = ctx.inv(other.lead())
        rem = list(self.coeffs)
        db = len(other.coeffs) - 1
        quot = [ctx.zero] * (len(rem) - db)
        for i in range(len(rem) - 1, db - 1, -1):
            c = rem[i]
            if ctx.is_zero(c):
                continue
            q = ctx.mul(c, inv_lead)
            quot[i - db] = q
            for j, b in enumerate(other.coeffs):
                rem[i - db + j] = ctx.sub(rem[i - db + j], ctx.mul(q, b))
        return Polynomial(ctx, quot), Polynomial(ctx, rem)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def eval(self, x):
        """Evaluate by Horner's rule."""
        ctx = self.ctx
        x = ctx.coerce(x)
        acc = ctx.zero
        for c in reversed(self.coeffs):
            acc = ctx.add(ctx.mul(acc, x), c)
        return acc

    __call__ = eval

    def compose(self, inner: "Polynomial") -> "Polynomial":
        """self(inner(X)), Horner's rule in the polynomial ring."""
        self._check(inner)
        ctx = self.ctx
        acc = Polynomial(ctx, [])
        for c in reversed(self.coeffs):
            acc = acc * inner + Polynomial.constant(ctx, c)
        return acc

    def derivative(self) -> "Polynomial":
        ctx = self.ctx
        out = []
        for i, c in enumerate(self.coeffs[1:], start=1):
            mult = i % ctx.char
            scaled = ctx.zero
            if mult:
                scaled = ctx.mul(c, ctx.coerce(mult))
            out.append(scaled)
        return Polynomial(ctx, out)

    def monic(self) -> "Polynomial":
        if self.is_zero:
            raise ValueError("zero polynomial cannot be made monic")
        if self.lead() == self.ctx.one:
            return self
        return self.scale(self.ctx.inv(self.lead()))

    def pow_mod(self, e: int, modulus: "Polynomial") -> "Polynomial":
        """self**e mod modulus by binary exponentiation, e >= 0."""
        self._check(modulus)
        if e < 0:
            raise ValueError("negative exponent")
        result = Polynomial.constant(self.ctx, self.ctx.one) % modulus
        base = self % modulus
        while e:
            if e & 1:
                result = result * base % modulus
            base = base * base % modulus
            e >>= 1
        return result

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and other.ctx == self.ctx
            and other.coeffs == self.coeffs
        )

    def __hash__(self):
        return hash((self.ctx, self.coeffs))

    def __repr__(self):
        return f"Polynomial({self.ctx!r}, {list(self.coeffs)!r})"

    def __str__(self):
        if self.is_zero:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if self.ctx.is_zero(c):
                continue
            ci = self.ctx.to_int(c)
            if i == 0:
                terms.append(str(ci))
            elif i == 1:
                terms.append("X" if ci == 1 else f"{ci}*X")
            else:
                terms.append(f"X^{i}" if ci == 1 else f"{ci}*X^{i}")
        return " + ".join(terms)


def poly_compose(outer: Polynomial, inner: Polynomial) -> Polynomial:
    return outer.compose(inner)


def poly_gcd(f: Polynomial, g: Polynomial) -> Polynomial:
    """Monic gcd by the Euclidean algorithm."""
    if f.is_zero and g.is_zero:
        raise ValueError("gcd(0, 0) is undefined")
    while not g.is_zero:
        f, g = g, f % g
    return f.monic()


def poly_xgcd(f: Polynomial, g: Polynomial):
    """(d, s, t) with s*f + t*g = d, d the monic gcd."""
    if f.is_zero and g.is_zero:
        raise ValueError("gcd(0, 0) is undefined")
    ctx = f.ctx
    one = Polynomial.constant(ctx, ctx.one)
    zero = Polynomial(ctx, [])
    r0, r1 = f, g
    s0, s1 = one, zero
    t0, t1 = zero, one
    while not r1.is_zero:
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    c = ctx.inv(r0.lead())
    return r0.scale(c), s0.scale(c), t0.scale(c)


def _pth_root(f: Polynomial) -> Polynomial:
    """For f with zero derivative, the g with g**p == f (p the characteristic).

    Over F_q with q = p^m the coefficient map is c -> c**(q/p), the inverse
    of Frobenius.
    """
    ctx = f.ctx
    p = ctx.char
    e = ctx.size // p
    out = []
    for i, c in enumerate(f.coeffs):
        if i % p:
            if not ctx.is_zero(c):
                raise ValueError("polynomial is not a p-th power")
            continue
        out.append(ctx.pow_el(c, e))
    return Polynomial(ctx, out)


def squarefree_part(f: Polynomial) -> Polynomial:
    """Monic radical: the product of the distinct irreducible factors of f."""
    if f.is_zero:
        raise ValueError("zero polynomial has no radical")
    if f.degree < 1:
        return Polynomial.constant(f.ctx, f.ctx.one)
    f = f.monic()
    fp = f.derivative()
    if fp.is_zero:
        return squarefree_part(_pth_root(f))
    g = poly_gcd(f, fp)
    if g.degree == 0:
        return f
    w = f // g
    # w carries exactly the factors whose multiplicity is prime to the
    # characteristic; strip those from g until only p-th power content is
    # left, then recurse on its p-th root.
    c = g
    while True:
        d = poly_gcd(c, w)
        if d.degree < 1:
            break
        c = c // d
    if c.degree < 1:
        return w
    assert c.derivative().is_zero
    return w * squarefree_part(_pth_root(c))


def _split_linear(f: Polynomial, rng: random.Random) -> list:
    """Roots of f, where f is a monic squarefree product of linear factors."""
    ctx = f.ctx
    if f.degree < 1:
        return []
    if f.degree == 1:
        return [ctx.neg(f.coeffs[0])]
    half = (ctx.size - 1) // 2
    x = Polynomial.x(ctx)
    one = Polynomial.constant(ctx, ctx.one)
    while True:
        a = ctx.rand_elem(rng)
        shifted = x + Polynomial.constant(ctx, a)
        h = shifted.pow_mod(half, f) - one
        if h.is_zero:
            continue
        d = poly_gcd(h, f)
        if 0 < d.degree < f.degree:
            return _split_linear(d, rng) + _split_linear(f // d, rng)


def roots_in_field(f: Polynomial, *, seed: int = 0, exhaustive_threshold: int = 4096):
    """Distinct roots of f in its own field, sorted by the element key.

    Small fields are scanned exhaustively; larger ones go through
    gcd(f, X^q - X) followed by equal-degree splitting.  The split is
    randomized but seeded, so results are reproducible.
    """
    if f.is_zero:
        raise ValueError("every element is a root of the zero polynomial")
    ctx = f.ctx
    if f.degree < 1:
        return []
    if ctx.size <= exhaustive_threshold:
        roots = [x for x in ctx.elements() if ctx.is_zero(f.eval(x))]
        return sorted(roots, key=ctx.elem_key)
    x = Polynomial.x(ctx)
    frob = x.pow_mod(ctx.size, f)
    g = poly_gcd(frob - x, f) if not (frob - x).is_zero else f.monic()
    if g.degree < 1:
        return []
    rng = random.Random(seed)
    return sorted(_split_linear(g, rng), key=ctx.elem_key)


def ddf_components(f: Polynomial):
    """Distinct-degree components of a monic squarefree f.

    Returns [(d, g_d), ...] ascending in d, where g_d is the product of the
    irreducible factors of degree exactly d.
    """
    if f.is_zero or f.degree < 1:
        raise ValueError("need a nonconstant polynomial")
    f = f.monic()
    ctx = f.ctx
    out = []
    x = Polynomial.x(ctx)
    h = x
    d = 0
    rest = f
    while 2 * (d + 1) <= rest.degree:
        d += 1
        h = h.pow_mod(ctx.size, rest)
        g = poly_gcd(h - x, rest) if not (h - x).is_zero else rest
        if g.degree >= 1:
            out.append((d, g))
            rest = rest // g
            h = h % rest if rest.degree >= 1 else h
    if rest.degree >= 1:
        out.append((rest.degree, rest))
    return out


def is_irreducible(f: Polynomial) -> bool:
    """Rabin's irreducibility test."""
    if f.is_zero or f.degree < 1:
        return False
    f = f.monic()
    m = f.degree
    if m == 1:
        return True
    ctx = f.ctx
    x = Polynomial.x(ctx)
    prime_divs = [q for q, _ in factor_integer(m)]
    checkpoints = {m // q for q in prime_divs}
    h = x
    for i in range(1, m + 1):
        h = h.pow_mod(ctx.size, f)
        if i in checkpoints:
            d = h - x
            if d.is_zero or poly_gcd(d, f).degree > 0:
                return False
    return h == x


@lru_cache(maxsize=None)
def _canonical_irreducible_coeffs(p: int, m: int) -> tuple:
    ctx = PrimeFieldCtx(p)
    for t in itertools.count():
        digits = []
        v = t
        for _ in range(m):
            digits.append(v % p)
            v //= p
        if v:
            raise RuntimeError(f"no irreducible of degree {m} found over F_{p}")
        cand = Polynomial(ctx, digits + [1])
        if is_irreducible(cand):
            return cand.coeffs


def canonical_irreducible(ctx: PrimeFieldCtx, m: int) -> Polynomial:
    """The canonical (lexicographically least) monic irreducible of degree m."""
    if m < 1:
        raise ValueError(f"degree must be >= 1, got {m}")
    return Polynomial(ctx, _canonical_irreducible_coeffs(ctx.p, m))


class ExtFieldCtx:
    """Arithmetic context for F_{p^m} = F_p[X]/(modulus), m >= 2.

    Elements are length-m int tuples of coefficients, low-to-high.  The
    reduction of X^m .. X^{2m-2} against the modulus is precomputed so
    multiplication never runs polynomial division.
    """

    __slots__ = (
        "base",
        "modulus",
        "m",
        "p",
        "size",
        "_rows",
        "zero",
        "one",
        "_factorization",
    )

    def __init__(self, base: PrimeFieldCtx, modulus: Polynomial):
        if not isinstance(base, PrimeFieldCtx):
            raise TypeError("extension base must be a prime field context")
        if modulus.ctx != base or modulus.degree < 2:
            raise ValueError("modulus must be a degree >= 2 polynomial over the base")
        if modulus.lead() != 1:
            raise ValueError("modulus must be monic")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "modulus", modulus)
        m = modulus.degree
        p = base.p
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "size", p**m)
        object.__setattr__(self, "zero", (0,) * m)
        object.__setattr__(self, "one", (1,) + (0,) * (m - 1))
        object.__setattr__(self, "_factorization", None)
        rows = [tuple((-c) % p for c in modulus.coeffs[:m])]
        for _ in range(m - 2):
            prev = rows[-1]
            top = prev[m - 1]
            nxt = [0] + list(prev[:-1])
            if top:
                for j in range(m):
                    nxt[j] = (nxt[j] + top * rows[0][j]) % p
            rows.append(tuple(nxt))
        object.__setattr__(self, "_rows", tuple(rows))

    def __setattr__(self, name, value):
        raise AttributeError("ExtFieldCtx is immutable")

    @property
    def char(self) -> int:
        return self.p

    @property
    def order(self) -> int:
        return self.size - 1

    @property
    def factorization(self):
        if self._factorization is None:
            object.__setattr__(self, "_factorization", factor_integer(self.size - 1))
        return self._factorization

    def coerce(self, value):
        if isinstance(value, tuple) and len(value) == self.m:
            return tuple(c % self.p for c in value)
        if isinstance(value, list) and len(value) == self.m:
            return tuple(c % self.p for c in value)
        if isinstance(value, int) and not isinstance(value, bool):
            return (value % self.p,) + (0,) * (self.m - 1)
        raise TypeError(
            f"F_{self.p}^{self.m} elements are length-{self.m} tuples, got {value!r}"
        )

    def is_zero(self, a) -> bool:
        return not any(a)

    def add(self, a, b):
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def sub(self, a, b):
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def neg(self, a):
        p = self.p
        return tuple(-x % p for x in a)

    def mul(self, a, b):
        m, p = self.m, self.p
        conv = [0] * (2 * m - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    conv[i + j] += x * y
        out = [c % p for c in conv[:m]]
        for i in range(2 * m - 2, m - 1, -1):
            t = conv[i] % p
            if t:
                row = self._rows[i - m]
                for j in range(m):
                    out[j] = (out[j] + t * row[j]) % p
        return tuple(out)

    def inv(self, a):
        if not any(a):
            raise ZeroDivisionError(f"0 has no inverse in F_{self.p}^{self.m}")
        f = Polynomial(self.base, a)
        d, s, _ = poly_xgcd(f, self.modulus)
        if d.degree != 0:
            raise ArithmeticError("modulus is not irreducible")
        s = s % self.modulus
        cs = list(s.coeffs) + [0] * (self.m - len(s.coeffs))
        return tuple(cs)

    def pow_el(self, a, e: int):
        if e < 0:
            a = self.inv(a)
            e = -e
        result = self.one
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def elem_key(self, a) -> int:
        return self.to_int(a)

    def to_int(self, a) -> int:
        v = 0
        for c in reversed(a):
            v = v * self.p + c
        return v

    def from_int(self, i: int):
        if not 0 <= i < self.size:
            raise ValueError(f"index {i} out of range for F_{self.p}^{self.m}")
        out = []
        for _ in range(self.m):
            out.append(i % self.p)
            i //= self.p
        return tuple(out)

    def embed_base(self, a: int):
        return (a % self.p,) + (0,) * (self.m - 1)

    def elements(self):
        return (self.from_int(i) for i in range(self.size))

    def rand_elem(self, rng: random.Random):
        return tuple(rng.randrange(self.p) for _ in range(self.m))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ExtFieldCtx)
            and other.p == self.p
            and other.m == self.m
            and other.modulus.coeffs == self.modulus.coeffs
        )

    def __hash__(self) -> int:
        return hash(("ExtFieldCtx", self.p, self.m, self.modulus.coeffs))

    def __repr__(self) -> str:
        return f"ExtFieldCtx(p={self.p}, m={self.m})"


@lru_cache(maxsize=None)
def canonical_ext(ctx: PrimeFieldCtx, m: int):
    """The canonical F_{p^m} context (m = 1 returns the base itself).

    Cached, so repeated requests for the same (p, m) give the same object.
    """
    if m == 1:
        return ctx
    return ExtFieldCtx(ctx, canonical_irreducible(ctx, m))


def lift_poly(f: Polynomial, new_ctx, embed) -> Polynomial:
    """Map f coefficient-wise through embed into new_ctx."""
    return Polynomial(new_ctx, [embed(c) for c in f.coeffs])


@dataclass(frozen=True)
class RootRecord:
    """A root of a polynomial, tagged with the field it lives in.

    degree is the degree over the prime field of the subfield generated by
    the root's irreducible factor (not necessarily of the root itself when
    the factor was already split further, but here factors are grouped by
    exact degree so the two coincide).
    """

    value: object
    field: object
    degree: int


def roots_in_extensions(
    f: Polynomial,
    degree_cap: int,
    *,
    seed: int = 0,
    exhaustive_threshold: int = 4096,
) -> list[RootRecord]:
    """All roots of f in F_{p^d} for d <= degree_cap, via distinct-degree
    factorization of the radical.  Roots in F_{p^d} are reported in the
    canonical degree-d context; base-field roots use the base context.
    """
    if not isinstance(f.ctx, PrimeFieldCtx):
        raise TypeError("extension search starts from a prime field polynomial")
    if f.is_zero:
        raise ValueError("zero polynomial")
    if f.degree < 1:
        return []
    rad = squarefree_part(f)
    if rad.degree < 1:
        return []
    records = []
    for d, comp in ddf_components(rad):
        if d > degree_cap:
            continue
        if d == 1:
            for r in roots_in_field(
                comp, seed=seed, exhaustive_threshold=exhaustive_threshold
            ):
                records.append(RootRecord(r, f.ctx, 1))
        else:
            ext = canonical_ext(f.ctx, d)
            lifted = lift_poly(comp, ext, ext.embed_base)
            for r in roots_in_field(
                lifted, seed=seed, exhaustive_threshold=exhaustive_threshold
            ):
                records.append(RootRecord(r, ext, d))
    records.sort(key=lambda rec: (rec.degree, rec.field.to_int(rec.value)))
    return records

"""Prime field contexts, integer factorization, multiplicative orders.

A "field context" is the object every polynomial and dynamics routine works
through.  It bundles the arithmetic of one concrete finite field behind a
small protocol: ``char``, ``size``, ``order``, ``zero``/``one``, ``coerce``,
``add``/``sub``/``neg``/``mul``/``inv``/``pow_el``, ``elem_key`` (a sortable
canonical key), ``elements()`` and ``rand_elem``.  ``PrimeFieldCtx`` here
represents F_p with plain ints; extension contexts live in ``poly``.
"""

from __future__ import annotations

import math
import random
import threading

__all__ = [
    "MAX_PRIME_EXCLUSIVE",
    "is_prime",
    "factor_integer",
    "divisors_from_factorization",
    "PrimeFieldCtx",
    "mul_order",
]

# Everything downstream assumes p*p fits comfortably in hardware-ish ints and
# that deterministic Miller-Rabin witnesses below are conclusive (< 3.3e24).
MAX_PRIME_EXCLUSIVE = 1 << 62

# Sufficient for all n < 3.3 * 10**24 (in particular for the whole supported
# prime range), so is_prime is deterministic here.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for n < 2**62."""
    if n < 2:
        return False
    for small in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % small == 0:
            return n == small
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


_TRIAL_LIMIT = 10_000


def _pollard_brent(n: int, c: int) -> int:
    """Brent's cycle variant of Pollard rho with increment c; returns a
    nontrivial factor of composite odd n, or n on failure for this c."""
    if n % 2 == 0:
        return 2
    y, m = 1, 128
    g = r = q = 1
    x = ys = y
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(m, r - k)):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            g = math.gcd(q, n)
            k += m
        r *= 2
    if g == n:
        g = 1
        while g == 1:
            ys = (ys * ys + c) % n
            g = math.gcd(abs(x - ys), n)
    return g


def factor_integer(n: int) -> list[tuple[int, int]]:
    """Prime factorization of n >= 1 as sorted (prime, exponent) pairs."""
    if n < 1:
        raise ValueError(f"factor_integer expects n >= 1, got {n}")
    counts: dict[int, int] = {}
    stack = []
    m = n
    for d in range(2, _TRIAL_LIMIT):
        if d * d > m:
            break
        while m % d == 0:
            counts[d] = counts.get(d, 0) + 1
            m //= d
    if m > 1:
        stack.append(m)
    while stack:
        m = stack.pop()
        if is_prime(m):
            counts[m] = counts.get(m, 0) + 1
            continue
        if m == 1:
            continue
        # Perfect powers of a prime can defeat rho only via bad luck with c;
        # the deterministic c = 1, 2, 3, ... schedule retries until a proper
        # factor shows up (always terminates for composite m).
        c = 1
        g = _pollard_brent(m, c)
        while g == m or g == 1:
            c += 1
            g = _pollard_brent(m, c)
        stack.append(g)
        stack.append(m // g)
    return sorted(counts.items())


def divisors_from_factorization(factorization: list[tuple[int, int]]) -> list[int]:
    """All positive divisors, ascending."""
    divs = [1]
    for prime, exp in factorization:
        power = 1
        block = []
        for _ in range(exp):
            power *= prime
            block.extend(d * power for d in divs)
        divs.extend(block)
    return sorted(divs)


class PrimeFieldCtx:
    """Arithmetic context for F_p, 3 <= p < 2**62 prime.

    Elements are ints in range(p).  The factorization of p - 1 is computed
    lazily (it is only needed for multiplicative orders and subgroup work)
    and cached behind a lock so contexts can be shared across threads.
    """

    __slots__ = ("p", "_factorization", "_lock", "_primitive_root")

    def __init__(self, p: int):
        if not isinstance(p, int):
            raise TypeError(f"prime must be an int, got {type(p).__name__}")
        if p < 3 or p >= MAX_PRIME_EXCLUSIVE or not is_prime(p):
            raise ValueError(
                f"context requires an odd prime with 3 <= p < 2**62, got {p}"
            )
        self.p = p
        self._factorization: list[tuple[int, int]] | None = None
        self._lock = threading.Lock()
        self._primitive_root: int | None = None

    # -- context protocol -------------------------------------------------

    @property
    def char(self) -> int:
        return self.p

    @property
    def size(self) -> int:
        return self.p

    @property
    def order(self) -> int:
        """Order of the multiplicative group, p - 1."""
        return self.p - 1

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1

    @property
    def factorization(self) -> list[tuple[int, int]]:
        """Factorization of p - 1, computed on first use."""
        if self._factorization is None:
            with self._lock:
                if self._factorization is None:
                    self._factorization = factor_integer(self.p - 1)
        return self._factorization

    def coerce(self, value) -> int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise TypeError(
                f"F_{self.p} elements are ints, got {type(value).__name__}"
            )
        return value % self.p

    def is_zero(self, a: int) -> bool:
        return a == 0

    def add(self, a: int, b: int) -> int:
        s = a + b
        return s - self.p if s >= self.p else s

    def sub(self, a: int, b: int) -> int:
        d = a - b
        return d + self.p if d < 0 else d

    def neg(self, a: int) -> int:
        return self.p - a if a else 0

    def mul(self, a: int, b: int) -> int:
        return a * b % self.p

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError(f"0 has no inverse in F_{self.p}")
        return pow(a, self.p - 2, self.p)

    def pow_el(self, a: int, e: int) -> int:
        if e < 0:
            return pow(self.inv(a), -e, self.p)
        return pow(a, e, self.p)

    def elem_key(self, a: int) -> int:
        return a

    def to_int(self, a: int) -> int:
        return a

    def from_int(self, i: int) -> int:
        if not 0 <= i < self.p:
            raise ValueError(f"index {i} out of range for F_{self.p}")
        return i

    def elements(self):
        return range(self.p)

    def rand_elem(self, rng: random.Random) -> int:
        return rng.randrange(self.p)

    def primitive_root(self) -> int:
        """Smallest generator of the multiplicative group."""
        if self._primitive_root is None:
            primes = [q for q, _ in self.factorization]
            g = 2
            while True:
                if all(pow(g, (self.p - 1) // q, self.p) != 1 for q in primes):
                    break
                g += 1
            with self._lock:
                self._primitive_root = g
        return self._primitive_root

    def __eq__(self, other) -> bool:
        return isinstance(other, PrimeFieldCtx) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("PrimeFieldCtx", self.p))

    def __repr__(self) -> str:
        return f"PrimeFieldCtx({self.p})"


def mul_order(ctx, a) -> int:
    """Order of a in the multiplicative group of the field.

    Starts from the group order and divides out one prime at a time, so no
    discrete log and no full enumeration of divisors.
    """
    a = ctx.coerce(a)
    if ctx.is_zero(a):
        raise ValueError("0 has no multiplicative order")
    o = ctx.order
    for prime, exp in ctx.factorization:
        for _ in range(exp):
            if o % prime:
                break
            cand = o // prime
            if ctx.pow_el(a, cand) == ctx.one:
                o = cand
            else:
                break
    return o

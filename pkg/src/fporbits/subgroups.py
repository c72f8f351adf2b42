"""Subgroups of the cyclic group F_p*, the smallest subgroup containing an
orbit, and intersection statistics.

A subgroup of F_p* is determined by its order d | p-1: it is exactly
{x : x^d = 1}, so membership is one modular exponentiation and no element
enumeration is ever required.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .dynamics import SemigroupOrbit, semigroup_orbit
from .errors import ContextMismatch
from .fields import PrimeFieldCtx, divisors_from_factorization, mul_order

__all__ = [
    "SubgroupDescriptor",
    "MembershipStats",
    "subgroup_generated",
    "subgroup_from_orbit",
    "orbit_subgroup_size",
    "membership_stats",
    "enumerate_subgroups",
]


@dataclass(frozen=True)
class SubgroupDescriptor:
    """The unique subgroup of F_p* of order d, for d | p-1."""

    ctx: PrimeFieldCtx
    order: int

    def __post_init__(self):
        if not isinstance(self.ctx, PrimeFieldCtx):
            raise TypeError("subgroups are defined over prime field contexts")
        if self.order < 1 or (self.ctx.p - 1) % self.order:
            raise ValueError(
                f"order {self.order} does not divide p-1 = {self.ctx.p - 1}"
            )

    def contains(self, x: int) -> bool:
        x = self.ctx.coerce(x)
        return x != 0 and pow(x, self.order, self.ctx.p) == 1

    def elements(self) -> list:
        """All d elements, ascending.  Costs O(d log p); fine for the small
        subgroups experiments actually enumerate."""
        p = self.ctx.p
        h = pow(self.ctx.primitive_root(), (p - 1) // self.order, p)
        out = set()
        x = 1
        for _ in range(self.order):
            out.add(x)
            x = x * h % p
        return sorted(out)


@dataclass(frozen=True)
class MembershipStats:
    """T = #(orbit ∩ subgroup), V = orbit size, rho = T/V exactly."""

    T: int
    V: int
    rho: Fraction


def subgroup_generated(ctx: PrimeFieldCtx, S) -> SubgroupDescriptor:
    """Smallest subgroup of F_p* containing S.

    In a cyclic group that subgroup has order lcm of the element orders,
    so no closure enumeration happens; we stop early once the lcm reaches
    p-1.
    """
    order = 1
    full = ctx.p - 1
    for a in sorted(ctx.coerce(x) for x in S):
        if a == 0:
            raise ValueError("0 generates no subgroup; strip it before calling")
        order = lcm(order, mul_order(ctx, a))
        if order == full:
            break
    return SubgroupDescriptor(ctx, order)


def subgroup_from_orbit(orbit: SemigroupOrbit) -> SubgroupDescriptor:
    """Smallest G with 𝒱_u(N) ⊆ G ∪ {0}."""
    ctx = orbit.ctx
    return subgroup_generated(ctx, (x for x in orbit.elements if x != 0))


def orbit_subgroup_size(fs, u, N: int):
    """(G, V): the generated-subgroup descriptor and the orbit size."""
    orbit = semigroup_orbit(fs, u, N)
    return subgroup_from_orbit(orbit), orbit.v_profile[-1]


def membership_stats(orbit: SemigroupOrbit, G: SubgroupDescriptor) -> MembershipStats:
    if orbit.ctx != G.ctx:
        raise ContextMismatch("orbit and subgroup live in different fields")
    T = sum(1 for x in orbit.elements if G.contains(x))
    V = len(orbit.elements)
    return MembershipStats(T=T, V=V, rho=Fraction(T, V))


def enumerate_subgroups(ctx: PrimeFieldCtx, bounds) -> list:
    """All subgroups with lo < order < hi, ascending (strict open interval)."""
    lo, hi = bounds
    if lo > hi:
        raise ValueError(f"bounds must satisfy lo <= hi, got {bounds}")
    divs = divisors_from_factorization(ctx.factorization)
    return [SubgroupDescriptor(ctx, d) for d in divs if lo < d < hi]

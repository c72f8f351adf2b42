"""Trajectories of one polynomial, orbits of a composition semigroup, and
the labeled functional graph on a whole field.

The orbit 𝒱_u(N) is the set of values f_{i_1}∘…∘f_{i_n}(u) over all words
of length 0 ≤ n ≤ N; the empty composition is included, so u is always a
member.  V_u(n) denotes #𝒱_u(n).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .arrays import MAX_VECTOR_PRIME, polyval_mod
from .errors import BudgetExceeded, ContextMismatch
from .fields import PrimeFieldCtx
from .poly import Polynomial

__all__ = [
    "INFINITE",
    "OrbitRecord",
    "iterate_trajectory",
    "SemigroupOrbit",
    "semigroup_orbit",
    "FunctionalGraph",
    "build_graph",
]

# Period of a trajectory that is eventually periodic but not purely periodic.
INFINITE = math.inf


@dataclass(frozen=True)
class OrbitRecord:
    """One trajectory u_0, u_1, ... u_{n+1} = f(u_n), cut at the first repeat.

    prefix holds u_0 .. u_t where t is the trajectory length (the first
    index whose value already occurred, at index s).  The eventual cycle
    has length t - s; the period is that same number when the trajectory
    is purely periodic (s = 0) and INFINITE otherwise.
    """

    u: int
    prefix: tuple
    s: int
    t: int
    cycle_len: int
    period: object


def iterate_trajectory(f: Polynomial, u, step_cap: int | None = None) -> OrbitRecord:
    """Iterate u under f until the first repeated value.

    The default step_cap of p+1 makes non-termination impossible by
    pigeonhole; a smaller cap that runs out raises RuntimeError.
    """
    ctx = f.ctx
    u = ctx.coerce(u)
    if step_cap is None:
        step_cap = ctx.size + 1
    seen = {u: 0}
    prefix = [u]
    x = u
    for n in range(1, step_cap + 1):
        x = f.eval(x)
        prefix.append(x)
        hit = seen.get(x)
        if hit is not None:
            cycle_len = n - hit
            period = cycle_len if hit == 0 else INFINITE
            return OrbitRecord(
                u=u,
                prefix=tuple(prefix),
                s=hit,
                t=n,
                cycle_len=cycle_len,
                period=period,
            )
        seen[x] = n
    raise RuntimeError(
        f"no repeat within {step_cap} steps; impossible with cap >= field size"
    )


@dataclass(frozen=True)
class SemigroupOrbit:
    """Layered orbit 𝒱_u(N) of a polynomial-composition semigroup.

    layers[n] lists the elements first reached at depth n, ascending;
    v_profile[n] = V_u(n).  first_seen maps each element to its layer.
    """

    generators: tuple
    u: int
    N: int
    layers: tuple
    v_profile: tuple
    elements: frozenset
    first_seen: dict = field(repr=False)

    @property
    def ctx(self):
        return self.generators[0].ctx


def _validate_generators(fs) -> tuple:
    fs = tuple(fs)
    if not fs:
        raise ValueError("need at least one generator")
    ctx = fs[0].ctx
    for f in fs:
        if not isinstance(f, Polynomial):
            raise TypeError(f"generators must be Polynomials, got {type(f).__name__}")
        if f.ctx != ctx:
            raise ContextMismatch("generators live in different fields")
        if f.is_zero or f.degree < 1:
            raise ValueError("generators must be nonconstant")
    return fs


def semigroup_orbit(fs, u, N: int) -> SemigroupOrbit:
    """Breadth-first closure of u under all compositions of length ≤ N."""
    fs = _validate_generators(fs)
    ctx = fs[0].ctx
    if N < 0:
        raise ValueError(f"depth must be >= 0, got {N}")
    u = ctx.coerce(u)

    use_numpy = (
        isinstance(ctx, PrimeFieldCtx) and 2048 <= ctx.p < MAX_VECTOR_PRIME
    )
    if use_numpy:
        layers = _orbit_layers_numpy(fs, ctx.p, u, N)
    else:
        layers = _orbit_layers_generic(fs, ctx, u, N)

    v_profile = []
    total = 0
    first_seen = {}
    for depth, layer in enumerate(layers):
        total += len(layer)
        v_profile.append(total)
        for x in layer:
            first_seen[x] = depth
    return SemigroupOrbit(
        generators=fs,
        u=u,
        N=N,
        layers=tuple(tuple(layer) for layer in layers),
        v_profile=tuple(v_profile),
        elements=frozenset(first_seen),
        first_seen=first_seen,
    )


def _orbit_layers_numpy(fs, p: int, u: int, N: int) -> list:
    coeff_lists = [f.coeffs for f in fs]
    seen = np.zeros(p, dtype=bool)
    seen[u] = True
    frontier = np.array([u], dtype=np.int64)
    layers = [[u]]
    for _ in range(N):
        if frontier.size == 0:
            layers.append([])
            continue
        images = np.unique(
            np.concatenate([polyval_mod(cs, frontier, p) for cs in coeff_lists])
        )
        new = images[~seen[images]]
        seen[new] = True
        frontier = new
        layers.append([int(x) for x in new])
    return layers


def _orbit_layers_generic(fs, ctx, u, N: int) -> list:
    seen = {u}
    frontier = [u]
    layers = [[u]]
    for _ in range(N):
        new = set()
        for x in frontier:
            for f in fs:
                y = f.eval(x)
                if y not in seen:
                    new.add(y)
        seen |= new
        frontier = sorted(new, key=ctx.elem_key)
        layers.append(frontier)
    return layers


@dataclass(frozen=True)
class FunctionalGraph:
    """The graph on all field elements with a labeled edge x -> f_i(x) per
    generator.  Vertices are integer indices (ctx.to_int order); succ[i] is
    the full successor array for label i+1."""

    ctx: object
    generators: tuple
    succ: tuple

    @property
    def n(self) -> int:
        return self.ctx.size

    @property
    def k(self) -> int:
        return len(self.succ)


def build_graph(fs, ctx=None, max_vertices: int = 10**7) -> FunctionalGraph:
    """Realize every edge map by evaluation over the whole field."""
    fs = _validate_generators(fs)
    if ctx is None:
        ctx = fs[0].ctx
    elif fs[0].ctx != ctx:
        raise ContextMismatch("generators do not live in the given field")
    n = ctx.size
    if n > max_vertices:
        raise BudgetExceeded(
            f"field size {n} exceeds the graph budget of {max_vertices} vertices"
        )
    succ = []
    if isinstance(ctx, PrimeFieldCtx) and ctx.p < MAX_VECTOR_PRIME:
        xs = np.arange(n, dtype=np.int64)
        for f in fs:
            succ.append(polyval_mod(f.coeffs, xs, ctx.p))
    else:
        for f in fs:
            arr = np.empty(n, dtype=np.int64)
            for i in range(n):
                arr[i] = ctx.to_int(f.eval(ctx.from_int(i)))
            succ.append(arr)
    for arr in succ:
        arr.setflags(write=False)
    return FunctionalGraph(ctx=ctx, generators=fs, succ=tuple(succ))

"""
Orbits of a polynomial pair over a prime field
==============================================

Iterating every word in two generators out to a depth cap, layer by
layer, and watching single-generator trajectories fall into cycles.
"""

from fporbits import Polynomial, PrimeFieldCtx, iterate_trajectory, semigroup_orbit

ctx = PrimeFieldCtx(101)

# coefficients are listed low degree first: [1, 0, 1] is X^2 + 1
f = Polynomial(ctx, [1, 0, 1])
g = Polynomial(ctx, [3, 1])

orbit = semigroup_orbit((f, g), u=7, N=12)
print(f"orbit of u=7 under {{X^2+1, X+3}} over F_101, depth 12")
print(f"  size V = {len(orbit.elements)}")
print(f"  layer profile V(0..12) = {list(orbit.v_profile)}")

# the profile saturates once every reachable residue has appeared
saturated = next(n for n, v in enumerate(orbit.v_profile) if v == orbit.v_profile[-1])
print(f"  saturates at depth {saturated}")

# a single generator gives an eventually periodic trajectory: tail s,
# first repeat t, cycle length t - s
for h in (f, g):
    rec = iterate_trajectory(h, 7)
    print(
        f"trajectory of 7 under {h}: tail={rec.s} repeat_at={rec.t} "
        f"cycle={rec.cycle_len} period={rec.period}"
    )

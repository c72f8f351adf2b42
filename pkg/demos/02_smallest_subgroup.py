"""
Smallest subgroup containing an orbit
=====================================

The orbit of u = 1 under {X^2, X + 1} at depth 2 over F_7 has four
elements, but the smallest multiplicative subgroup containing all of
them (zero aside) already has order 6.  Intersections with smaller
subgroups are counted exactly, as fractions.
"""

from fporbits import (
    Polynomial,
    PrimeFieldCtx,
    SubgroupDescriptor,
    membership_stats,
    semigroup_orbit,
    subgroup_from_orbit,
)

ctx = PrimeFieldCtx(7)
fs = (Polynomial(ctx, [0, 0, 1]), Polynomial(ctx, [1, 1]))

orbit = semigroup_orbit(fs, u=1, N=2)
print(f"orbit elements: {sorted(int(x) for x in orbit.elements)}")

G = subgroup_from_orbit(orbit)
print(f"smallest containing subgroup: order {G.order}")

# how much of the orbit lands in each proper subgroup of F_7^*
for order in (1, 2, 3, 6):
    stats = membership_stats(orbit, SubgroupDescriptor(ctx, order))
    print(f"  subgroup of order {order}: T = {stats.T}, rho = {stats.rho}")

# the same machinery at a large prime: the orbit saturates, so a
# subgroup of order m catches about m + 1 of the p residues
big = PrimeFieldCtx(10007)
bfs = (Polynomial(big, [1, 0, 1]), Polynomial(big, [3, 1]))
borbit = semigroup_orbit(bfs, u=2, N=40)
bG = subgroup_from_orbit(borbit)
print(f"\nF_10007: V = {len(borbit.elements)}, G = {bG.order}")
for order in (2, 5003):  # 10006 = 2 * 5003
    stats = membership_stats(borbit, SubgroupDescriptor(big, order))
    print(f"  subgroup of order {order}: T = {stats.T}, rho ~ {float(stats.rho):.5f}")

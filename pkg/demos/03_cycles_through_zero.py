"""
Shortest cycle through zero, and what it certifies
==================================================

A family of polynomials acts on the residues, and compositions trace
walks through the resulting functional multigraph.  The length of the
shortest cycle through 0 controls how long a composition can stay
admissible: if h is less than half that length, every composition of
length up to h stays admissible.
"""

from fporbits import (
    Polynomial,
    PrimeFieldCtx,
    is_admissible,
    shortest_cycle_through_zero,
    verify_lemma_admissible_compositions,
)

ctx = PrimeFieldCtx(5)

# X^2 + 1 over F_5: 0 -> 1 -> 2 -> 0, a directed triangle through zero
f = Polynomial(ctx, [1, 0, 1])
res = shortest_cycle_through_zero([f])
print(f"X^2 + 1 over F_5: cycle length {res.length} (exact={res.exact})")
to_int = getattr(res.host, "to_int", int)
print(f"  witness: {[(to_int(st.source), to_int(st.target)) for st in res.witness]}")

# X^2 fixes zero, so the cycle is a loop of length 1
g = Polynomial(ctx, [0, 0, 1])
res = shortest_cycle_through_zero([g])
print(f"X^2 over F_5:    cycle length {res.length} (exact={res.exact})")

# admissibility of a family is a gcd condition on shifted compositions
print(f"\nis_admissible([X^2 + 1]) over F_5 = {is_admissible([f]).admissible}")
print(f"is_admissible([X^2]) over F_5     = {is_admissible([g]).admissible}")

# the composition certificate: h = 1 < C0/2 = 3/2 holds for X^2 + 1,
# so every length-1 composition is admissible; X^2 fails the hypothesis
for poly in (f, g):
    rep = verify_lemma_admissible_compositions([poly], h=1)
    print(f"pipeline on {poly}, h=1: {rep.status} ({rep.reason or 'certified'})")

# when the search exhausts its caps without an exact answer it still
# returns a certified floor on the cycle length
ctx13 = PrimeFieldCtx(13)
deep = Polynomial(ctx13, [5, 6, 1])
res = shortest_cycle_through_zero([deep], degree_cap=8, length_cap=4)
print(f"\nX^2 + 6X + 5 over F_13: length {res.length}, exact={res.exact}")

"""
Counting bounds in the crossed-power window
===========================================

For degrees m = (2, 2) the constants work out to C1 = 4096 and an
exact conclusion constant of 96.  Any subgroup whose order lands in
the window (C1, C2 * p^(2/3)) gets a nontrivial bound on how many
points the two polynomials can simultaneously push into prescribed
cosets.  Near p = 10^6 such windows are easy to find, and the bound
can be checked by brute count.
"""

from fporbits import ExperimentSpec, verify_vyugin, vyugin_constants
from fporbits.fields import divisors_from_factorization, factor_integer

vc = vyugin_constants((2, 2), 2)
print(f"m = (2, 2): C1 = {vc.c1}, exact conclusion constant = {vc.c3_exact}")

p = 999007
vc_p = vyugin_constants((2, 2), 2, p)
divs = divisors_from_factorization(factor_integer(p - 1))
window = [d for d in divs if vc_p.in_window(d)]
print(f"p = {p}: subgroup orders inside the window: {window}")

# one seeded experiment: random admissible quadratics, random cosets,
# exact joint hit count against the integer-exact bound
spec = ExperimentSpec(kind="vyugin", p=p, degrees=(2, 2), trials=3, seed=814)
report = verify_vyugin(spec)
for check in report.checks:
    print(f"  {check.name}: {check.status}  hits {check.lhs} <= bound {check.rhs}")
print(f"stats: {report.stats['trials']} trials, {report.stats['skipped']} skipped")

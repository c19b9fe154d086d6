"""
Building the contact from delta couplings
=========================================

The band-pass contact can be realised by short links of length eps with
delta couplings whose strengths scale like 1/eps.  As eps shrinks the
transmission of that ordinary quantum graph approaches the ideal one.
"""
import math

from qgfilter import ApproximationArrangement, convergence_study
from qgfilter.catalog import loop, star

arr = ApproximationArrangement(epsilon=1e-3, n=2, alpha=4.0)
print(f"strengths at eps = 1e-3: line point {arr.line_strength:.1f}, link ends {arr.end_strength:.1f}\n")

eps = [0.1 / 2 ** i for i in range(8)]
print("loop, theta = 1, k = 2")
print("   eps         |T_eps - T|   ratio")
for row in convergence_study(loop(1.0, 1.0), eps, (2.0,)):
    ratio = "" if row.ratio is None else f"{row.ratio:.3f}"
    print(f"  {row.epsilon:.3e}   {row.error:.3e}    {ratio}")

print("\ntwo equal Dirichlet stubs at k = pi (an energy where the ideal filter is opaque)")
for row in convergence_study(star([1.0, 1.0], ["dirichlet", "dirichlet"]), (1e-1, 1e-2, 1e-3, 1e-4), (math.pi,)):
    print(f"  eps = {row.epsilon:.0e}   |T_eps| = {abs(row.T_epsilon):.3e}")

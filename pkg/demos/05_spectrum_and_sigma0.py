"""
Spectrum from the DtN function, and energies it cannot see
==========================================================

Zeros of the DtN function are eigenvalues of the attached graph.  Two equal
Dirichlet stubs also have eigenfunctions that vanish at the contact; there
the unit-boundary problem has no solution and every filter takes its
limiting value.
"""
import math

from qgfilter import Separator, dtn_at_k, find_spectrum, scatter_direct
from qgfilter.catalog import flower, star

g = flower(loop_length=1.0, theta=1.0, stub_length=0.7)
roots = find_spectrum(g, 0.1, 10.0, 2000)
print("loop + stub: zeros of the DtN function")
for k in roots:
    print(f"  k = {k:.10f}   Lambda = {dtn_at_k(g, k).value:+.1e}")

stubs = star([1.0, 1.0], ["dirichlet", "dirichlet"])
for k in (math.pi - 0.01, math.pi, math.pi + 0.01):
    s = dtn_at_k(stubs, k)
    r = scatter_direct(stubs, k)
    print(f"k = {k:.4f}: {s.classification.value:8s}  P = {abs(r.T) ** 2:.3e}")

sep = scatter_direct(stubs.with_coupling(Separator(4.0, 1 / 3)), math.pi)
print(f"\nseparator at k = pi: T1 = {sep.transmissions[0].real:+.6f} (-54/91 = {-54 / 91:+.6f}), "
      f"T2 = {sep.transmissions[1].real:+.6f} (6/91 = {6 / 91:+.6f})")

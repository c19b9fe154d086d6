"""
Moving the passband with the magnetic field
===========================================

Only cos(theta) enters the loop filter, so the single peak in (0, pi/l]
sits at k0 = theta / l.  Raising B from 0 to pi hbar/(q S) sweeps the
passband across that whole interval; one flux quantum later it repeats.
"""
import numpy as np

from qgfilter.loop import LoopFilter, field_sweep, passband_position

f = LoopFilter.from_theta(length=1.0, theta=0.0, alpha=4.0)
print(f"flux quantum 2 pi hbar/(qS) = {f.flux_quantum:.6f}, B_max = {f.b_max:.6f}\n")

print("     B        theta    passband k   k0 = theta/l")
for b in np.linspace(0.0, f.b_max, 9):
    fb = f.with_field(b)
    print(f"{b:9.4f}  {fb.theta:8.5f}  {passband_position(fb):11.8f}  {fb.theta / fb.length:11.8f}")

# at fixed k the transmission is periodic in B
rows = field_sweep(f, 0.0, 2 * f.flux_quantum, 9, k=1.5)
print("\nP(B) at k = 1.5 over two flux quanta:")
for b, p in rows:
    print(f"  B = {b:8.4f}  P = {p:.6f}")

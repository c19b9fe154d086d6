"""
A loop threaded by a magnetic flux as a band-pass filter
========================================================

A loop of length 1 hangs off the input-output line with coupling alpha = 4
and flux angle theta = 1.  Transmission is complete exactly where the
attached loop has an eigenvalue and small everywhere else.
"""
import math

import numpy as np

from qgfilter import sweep_device
from qgfilter.catalog import loop
from qgfilter.loop import LoopFilter, peak_positions, refine_peak

graph = loop(length=1.0, theta=1.0)
points = sweep_device(graph, 0.1, 10.0, 2000)
k = np.array([p.k for p in points])
P = np.array([p.P1 for p in points])

# a coarse text plot of the transmission curve
for kk, pp in zip(k[::80], P[::80]):
    print(f"k = {kk:5.2f}  P = {pp:.4f}  " + "#" * int(60 * pp))

# the peaks sit at the zeros of the DtN function
f = LoopFilter.from_theta(1.0, 1.0, alpha=4.0)
predicted = peak_positions(f, 2).positions
local = [i for i in range(1, len(k) - 1) if P[i] >= P[i - 1] and P[i] >= P[i + 1]]
refined = [refine_peak(f, k[i - 1], k[i + 1]) for i in local]
print("\npredicted peaks:", np.round(predicted, 10))
print("refined peaks:  ", np.round(refined, 10))
print("P(pi/2) =", round(float(P[np.argmin(abs(k - math.pi / 2))]), 5), "(grid) ;",
      round(1 / (1 + 256 * math.cos(1.0) ** 2), 6), "(closed form)")

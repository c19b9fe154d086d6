"""Band-pass filter built on a loop threaded by a magnetic flux.

The loop enters only through the flux angle ``theta = q B S / hbar``; the
field ``B`` and the enclosed area ``S`` appear at the interface.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .dtn import Classification, DtNSample
from .graph import BandPass, ContactCoupling, Edge, MetricGraph, UnitSystem
from .numerics import DEFAULT_TOLERANCES, Tolerances, golden_section_min


@dataclass(frozen=True)
class LoopFilter:
    length: float
    area: float
    field: float
    alpha: float
    units: UnitSystem = field(default_factory=UnitSystem)

    def __post_init__(self):
        for name in ("length", "area", "alpha"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")

    @classmethod
    def from_theta(cls, length: float, theta: float, alpha: float, area: Optional[float] = None,
                   units: UnitSystem = UnitSystem()) -> "LoopFilter":
        """Loop with flux angle ``theta``; the area defaults to that of a circle."""
        area = length ** 2 / (4 * math.pi) if area is None else area
        return cls(length, area, theta * units.hbar / (units.charge * area), alpha, units)

    @property
    def theta(self) -> float:
        return self.units.charge * self.field * self.area / self.units.hbar

    @property
    def vector_potential(self) -> float:
        return self.area / self.length * self.field

    @property
    def flux_quantum(self) -> float:
        """Field period ``2 pi hbar / (q S)``."""
        return 2 * math.pi * self.units.hbar / (self.units.charge * self.area)

    @property
    def reduced_field(self) -> float:
        return self.field - math.floor(self.field / self.flux_quantum) * self.flux_quantum

    @property
    def b_max(self) -> float:
        return 0.5 * self.flux_quantum

    @property
    def k_max(self) -> float:
        return math.pi / self.length

    def with_field(self, b: float) -> "LoopFilter":
        return LoopFilter(self.length, self.area, b, self.alpha, self.units)

    def graph(self, coupling: Optional[ContactCoupling] = None) -> MetricGraph:
        coupling = BandPass(self.alpha) if coupling is None else coupling
        edge = Edge("loop", "0", "0", self.length, vector_potential=self.vector_potential)
        return MetricGraph((edge,), {}, "0", coupling, self.units)


def loop_dtn(f: LoopFilter, k: float, tol: Tolerances = DEFAULT_TOLERANCES) -> DtNSample:
    """Closed-form DtN value ``-2 k (cos kl - cos theta) / sin kl``."""
    if not k > 0:
        raise ValueError("wavenumber must be positive")
    lam = f.units.energy(k)
    s = math.sin(k * f.length)
    num = math.cos(k * f.length) - math.cos(f.theta)
    if abs(s) < tol.pole_guard:
        if abs(num) < tol.pole_guard:
            return DtNSample(lam, Classification.EIGEN_CONSISTENT, 0.0, 0.0, math.inf)
        return DtNSample(lam, Classification.POLE, None, 0.0, math.inf)
    return DtNSample(lam, Classification.REGULAR, -2 * k * num / s, 0.0, 1.0 / abs(s))


def detuning(f: LoopFilter, k: float, tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """``alpha^2 (cos kl - cos theta) / sin kl``; infinite at poles."""
    sample = loop_dtn(f, k, tol)
    if sample.classification is Classification.POLE:
        return math.inf
    return -f.alpha ** 2 * sample.value / (2 * k)


def loop_transmission_probability(f: LoopFilter, k: float, tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    d = detuning(f, k, tol)
    return 0.0 if math.isinf(d) else 1.0 / (1.0 + d * d)


@dataclass(frozen=True)
class PeakList:
    positions: np.ndarray
    degenerate: bool  # reduced flux angle at 0 or pi: neighbouring peaks coincide


def peak_positions(f: LoopFilter, n_max: int) -> PeakList:
    """Zeros of the DtN function, one in each ``[N pi / l, (N + 1) pi / l]``.

    With ``phi`` the reduced flux angle folded into ``[0, pi]``, the peak in
    interval ``N`` sits at ``(phi + N pi) / l`` for even ``N`` and at
    ``((N + 1) pi - phi) / l`` for odd ``N``.
    """
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    reduced = f.units.charge * f.reduced_field * f.area / f.units.hbar
    phi = math.acos(max(-1.0, min(1.0, math.cos(reduced))))
    ns = np.arange(n_max + 1)
    pos = np.where(ns % 2 == 0, phi + ns * math.pi, (ns + 1) * math.pi - phi) / f.length
    degenerate = phi < 1e-12 or abs(phi - math.pi) < 1e-12
    return PeakList(pos, degenerate)


def field_sweep(f: LoopFilter, b_min: float, b_max: float, samples: int, k: float,
                tol: Tolerances = DEFAULT_TOLERANCES) -> list[tuple[float, float]]:
    """Transmission probability at fixed ``k`` across a uniform field grid."""
    if not (math.isfinite(b_min) and math.isfinite(b_max)):
        raise ValueError("field range must be finite")
    if samples < 2:
        raise ValueError("samples must be at least 2")
    return [(float(b), loop_transmission_probability(f.with_field(float(b)), k, tol))
            for b in np.linspace(b_min, b_max, samples)]


def refine_peak(f: LoopFilter, k_lo: float, k_hi: float, xtol: float = 1e-13,
                tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """Golden-section refinement of a transmission maximum inside ``[k_lo, k_hi]``.

    Minimises ``|detuning|``, which is monotone in ``1/P - 1`` but does not
    flatten at the peak.
    """
    k_lo = max(k_lo, 1e-300)
    return golden_section_min(lambda k: abs(detuning(f, k, tol)), k_lo, k_hi, xtol)


def passband_position(f: LoopFilter, xtol: float = 1e-13) -> float:
    """Location of the single transmission peak in ``(0, pi / l]``."""
    return refine_peak(f, 0.0, f.k_max, xtol)

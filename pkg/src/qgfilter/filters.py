"""Closed-form amplitudes of the band-pass, band-stop and separator devices.

All three formulas take the DtN sample of the attached graph.  At singular
samples (no unit-Dirichlet solution) they return the exact limiting values
instead of evaluating a divergent expression.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .dtn import Classification, DtNSample, dtn_at_k
from .graph import BandPass, BandStop, MetricGraph, Separator
from .numerics import DEFAULT_TOLERANCES, NumericalDiagnostic, Tolerances

log = logging.getLogger(__name__)


def _dtn_value(sample: DtNSample) -> Optional[float]:
    if sample.classification is Classification.REGULAR:
        return sample.value
    if sample.classification is Classification.EIGEN_CONSISTENT:
        return 0.0
    return None


def _check(k, *positive):
    if not (math.isfinite(k) and k > 0):
        raise ValueError(f"wavenumber must be positive, got {k!r}")
    for p in positive:
        if not p > 0:
            raise ValueError("coupling parameters must be positive")


def bandpass_transmission(sample: DtNSample, alpha: float, k: float) -> tuple[complex, complex]:
    """``(R, T)`` with ``T = 1 / (1 + alpha^2 Lambda / (2 i k))`` and ``R = T - 1``."""
    _check(k, alpha)
    lam = _dtn_value(sample)
    if lam is None:
        return -1.0 + 0j, 0j
    T = 1.0 / (1.0 + alpha ** 2 * lam / (2j * k))
    return T - 1.0, T


def bandstop_transmission(sample: DtNSample, alpha: float, k: float) -> tuple[complex, complex]:
    """``(R, T)`` with ``T = -Lambda / (Lambda + i k / (2 alpha^2))`` and ``R = 1 + T``."""
    _check(k, alpha)
    lam = _dtn_value(sample)
    if lam is None:
        return 0j, -1.0 + 0j
    T = -lam / (lam + 1j * k / (2 * alpha ** 2))
    return 1.0 + T, T


def separator_transmission(sample: DtNSample, alpha: float, beta: float,
                           k: float) -> tuple[complex, complex, complex]:
    """``(R, T1, T2)`` of the two-output separator; ``R = T2 / beta - 1``."""
    _check(k, alpha, beta)
    lam = _dtn_value(sample)
    if lam is None:
        denom = 1 / beta + beta + beta ** 3
        T1 = -2.0 / denom + 0j
        T2 = 2.0 * beta ** 2 / denom + 0j
    else:
        a2l = alpha ** 2 * lam
        inner = 1j * k + beta ** 2 * a2l
        T1 = -2 * a2l / (a2l / beta + (1 / beta + beta) * inner)
        T2 = 2 / (a2l / (beta * inner) + 1 / beta + beta)
    return T2 / beta - 1.0, complex(T1), complex(T2)


def duality_residual(T_pass: complex, T_stop: complex) -> float:
    """Defect of ``2 (1 - 1/T_pass) = 1 / (2 (1 + 1/T_stop))``."""
    if T_pass == 0:
        raise ValueError("T_pass must be nonzero")
    if T_stop == 0 or T_stop == -1:
        raise ValueError("T_stop must differ from 0 and -1")
    return abs(2 * (1 - 1 / T_pass) - 1 / (2 * (1 + 1 / T_stop)))


@dataclass(frozen=True)
class DeviceCurvePoint:
    k: float
    E: float
    classification: str
    R: complex
    transmissions: tuple[complex, ...]

    @property
    def probabilities(self) -> tuple[float, ...]:
        return tuple(abs(t) ** 2 for t in self.transmissions)

    @property
    def P1(self) -> float:
        return self.probabilities[0]

    @property
    def P2(self) -> Optional[float]:
        p = self.probabilities
        return p[1] if len(p) > 1 else None

    @property
    def unitarity_residual(self) -> float:
        return abs(abs(self.R) ** 2 + sum(self.probabilities) - 1.0)


def device_amplitudes(graph: MetricGraph, sample: DtNSample, k: float):
    """``(R, transmissions)`` of the graph's contact coupling for a DtN sample."""
    c = graph.contact_coupling
    if isinstance(c, BandPass):
        R, T = bandpass_transmission(sample, c.alpha, k)
        return R, (T,)
    if isinstance(c, BandStop):
        R, T = bandstop_transmission(sample, c.alpha, k)
        return R, (T,)
    if isinstance(c, Separator):
        R, T1, T2 = separator_transmission(sample, c.alpha, c.beta, k)
        return R, (T1, T2)
    raise ValueError(f"no closed form for contact coupling {c!r}")


def device_point(graph: MetricGraph, k: float, tol: Tolerances = DEFAULT_TOLERANCES) -> DeviceCurvePoint:
    E = graph.units.energy(k)
    sample = dtn_at_k(graph, k, tol)
    R, ts = device_amplitudes(graph, sample, k)
    return DeviceCurvePoint(float(k), E, sample.classification.value, complex(R), tuple(complex(t) for t in ts))


def sweep_device(graph: MetricGraph, k_min: float, k_max: float, samples: int,
                 tol: Tolerances = DEFAULT_TOLERANCES) -> list[DeviceCurvePoint]:
    """Device amplitudes on a uniform wavenumber grid.

    A point whose DtN classification fails is reported with classification
    ``"diagnostic"`` and NaN amplitudes; the sweep continues.
    """
    if not (0 < k_min < k_max):
        raise ValueError("need 0 < k_min < k_max")
    if samples < 2:
        raise ValueError("samples must be at least 2")
    ports = graph.contact_coupling.ports
    points = []
    for k in np.linspace(k_min, k_max, samples):
        k = float(k)
        try:
            points.append(device_point(graph, k, tol))
        except NumericalDiagnostic as exc:
            log.warning("k=%r: %s", k, exc)
            nan = complex(math.nan, math.nan)
            points.append(DeviceCurvePoint(k, graph.units.energy(k), "diagnostic", nan, (nan,) * (ports - 1)))
    return points

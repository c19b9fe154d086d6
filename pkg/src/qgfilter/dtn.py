"""Dirichlet-to-Neumann function of the attached graph at the contact vertex.

For an energy ``lam`` the unit-Dirichlet problem asks for eigen-solutions on
every edge that satisfy all interior vertex conditions and take the value 1
at every contact edge end.  When it is uniquely solvable the DtN value is the
sum of the outgoing derivatives at the contact.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from . import _assembly
from .graph import MetricGraph
from .numerics import DEFAULT_TOLERANCES, NumericalDiagnostic, Tolerances

log = logging.getLogger(__name__)


class Classification(str, Enum):
    REGULAR = "regular"
    SIGMA0 = "sigma0"
    EIGEN_CONSISTENT = "eigen_consistent"
    POLE = "pole"


@dataclass(frozen=True)
class EdgeWave:
    """``phi(x) = exp(i a x) (c_plus exp(i kappa x) + c_minus exp(-i kappa x))`` on ``[0, length]``."""

    edge: str
    c_plus: complex
    c_minus: complex
    kappa: complex
    phase_slope: float
    length: float

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return np.exp(1j * self.phase_slope * x) * (
            self.c_plus * np.exp(1j * self.kappa * x) + self.c_minus * np.exp(-1j * self.kappa * x))

    def covariant_derivative(self, x):
        x = np.asarray(x, dtype=float)
        return 1j * self.kappa * np.exp(1j * self.phase_slope * x) * (
            self.c_plus * np.exp(1j * self.kappa * x) - self.c_minus * np.exp(-1j * self.kappa * x))


@dataclass(frozen=True)
class DtNSample:
    lam: float
    classification: Classification
    value: Optional[float]
    residual: float
    condition_estimate: float
    waves: tuple[EdgeWave, ...] = field(default=(), repr=False)

    @property
    def is_regular(self) -> bool:
        return self.classification is Classification.REGULAR

    @property
    def has_value(self) -> bool:
        """True when the DtN value is defined (regular or eigen-consistent)."""
        return self.classification in (Classification.REGULAR, Classification.EIGEN_CONSISTENT)

    @property
    def is_singular_limit(self) -> bool:
        return self.classification in (Classification.SIGMA0, Classification.POLE)


def _contact_free_singular(graph: MetricGraph, kappa, width: int, tol: Tolerances) -> bool:
    """Is ``lam`` an eigenvalue of the graph with free coupling at the contact?"""
    interior = _assembly.interior_rows(graph, kappa, 0, width)
    values, derivs = _assembly.end_rows(graph, kappa, graph.contact_ends, 0, width)
    free_rows = [values[i] - values[i + 1] for i in range(len(values) - 1)] + [derivs.sum(axis=0)]
    s = _assembly.singular_values(np.vstack([interior, np.array(free_rows)]))
    return s[-1] <= tol.rank * s[0]


def solve_dirichlet_problem(graph: MetricGraph, lam: float,
                            tol: Tolerances = DEFAULT_TOLERANCES) -> DtNSample:
    """Solve the unit-Dirichlet problem at energy ``lam`` and classify it."""
    lam = float(lam)
    if not (math.isfinite(lam) and lam > 0):
        raise ValueError(f"energy must be positive, got {lam!r}")
    width = 2 * len(graph.edges)
    kappa = _assembly.edge_wavenumbers(graph, lam)
    interior = _assembly.interior_rows(graph, kappa, 0, width)
    values, derivs = _assembly.end_rows(graph, kappa, graph.contact_ends, 0, width)
    M = np.vstack([interior, values])
    rhs = np.concatenate([np.zeros(len(interior)), np.ones(len(values))]).astype(complex)

    s = _assembly.singular_values(M)
    cond = float(s[0] / s[-1]) if s[-1] > 0 else math.inf
    if s[-1] > tol.rank * s[0]:
        x = np.linalg.solve(M, rhs)
        residual = float(np.linalg.norm(M @ x - rhs))
        total = complex(np.sum(derivs @ x))
        # round-off in the imaginary part scales with the conditioning near poles
        allowed = max(1e-10, 1e3 * np.finfo(float).eps * cond) * (1.0 + abs(total.real))
        if abs(total.imag) > allowed:
            raise NumericalDiagnostic(
                f"DtN value at lam={lam!r} has imaginary part {total.imag:.3g} (condition {cond:.3g})")
        return DtNSample(lam, Classification.REGULAR, total.real, residual, cond, _waves(graph, kappa, x))

    x, *_ = np.linalg.lstsq(M, rhs, rcond=tol.rank)
    residual = float(np.linalg.norm(M @ x - rhs))
    threshold = tol.consistency * float(np.linalg.norm(rhs))
    if 0.01 * threshold < residual < 100 * threshold:
        raise NumericalDiagnostic(
            f"cannot decide solvability at lam={lam!r}: residual {residual:.3g} near threshold {threshold:.3g}")
    if residual <= threshold:
        return DtNSample(lam, Classification.EIGEN_CONSISTENT, 0.0, residual, cond, _waves(graph, kappa, x))
    if _contact_free_singular(graph, kappa, width, tol):
        kind = Classification.SIGMA0
    else:
        kind = Classification.POLE
    return DtNSample(lam, kind, None, residual, cond)


def _waves(graph: MetricGraph, kappa, x) -> tuple[EdgeWave, ...]:
    coeffs = _assembly.spec_coefficients(graph, kappa, x)
    return tuple(
        EdgeWave(e.id, cp, cm, complex(kappa[i]), graph.units.phase_slope(e.vector_potential), e.length)
        for i, (e, (cp, cm)) in enumerate(zip(graph.edges, coeffs)))


def dtn(graph: MetricGraph, lam: float, tol: Tolerances = DEFAULT_TOLERANCES) -> DtNSample:
    sample = solve_dirichlet_problem(graph, lam, tol)
    return DtNSample(sample.lam, sample.classification, sample.value, sample.residual, sample.condition_estimate)


def dtn_at_k(graph: MetricGraph, k: float, tol: Tolerances = DEFAULT_TOLERANCES) -> DtNSample:
    """DtN sample at the energy of line wavenumber ``k``."""
    return dtn(graph, graph.units.energy(k), tol)


def find_spectrum(graph: MetricGraph, k_min: float, k_max: float, grid_points: int,
                  tol: Tolerances = DEFAULT_TOLERANCES) -> list[float]:
    """Wavenumbers in ``[k_min, k_max]`` where the DtN function vanishes.

    Sign changes between consecutive regular grid samples are refined by
    bisection; brackets that close onto a pole are discarded.  Roots closer
    together than the grid spacing are not resolved.
    """
    if not (0 < k_min < k_max):
        raise ValueError("need 0 < k_min < k_max")
    if grid_points < 2:
        raise ValueError("grid_points must be at least 2")

    def sample(k):
        return dtn_at_k(graph, k, tol)

    ks = np.linspace(k_min, k_max, grid_points)
    samples = [sample(k) for k in ks]
    roots: list[float] = []
    for i, (k, s) in enumerate(zip(ks, samples)):
        if s.classification is Classification.EIGEN_CONSISTENT or (s.is_regular and s.value == 0.0):
            roots.append(float(k))
            continue
        if i == 0:
            continue
        prev = samples[i - 1]
        if not (prev.is_regular and s.is_regular) or prev.value == 0.0:
            continue
        if np.sign(prev.value) != np.sign(s.value):
            root = _bisect(sample, float(ks[i - 1]), float(k), prev.value, s.value, tol)
            if root is not None:
                roots.append(root)
    return sorted(roots)


def _bisect(sample, lo, hi, f_lo, f_hi, tol: Tolerances):
    start_scale = min(abs(f_lo), abs(f_hi))
    # stop at the bracket tolerance, but keep going while the DtN value is still large
    while hi - lo > tol.root or (min(abs(f_lo), abs(f_hi)) > tol.zero and hi - lo > 4 * math.ulp(hi)):
        mid = 0.5 * (lo + hi)
        s = sample(mid)
        if s.classification is Classification.EIGEN_CONSISTENT:
            return mid
        if not s.is_regular:
            log.debug("bracket [%r, %r] closes on a singular point; discarded", lo, hi)
            return None
        if s.value == 0.0:
            return mid
        if np.sign(s.value) == np.sign(f_lo):
            lo, f_lo = mid, s.value
        else:
            hi, f_hi = mid, s.value
    # a pole also produces a sign change; there |DtN| grows as the bracket shrinks
    if max(abs(f_lo), abs(f_hi)) >= start_scale:
        log.debug("bracket [%r, %r] is a pole, not a root", lo, hi)
        return None
    return lo if abs(f_lo) <= abs(f_hi) else hi

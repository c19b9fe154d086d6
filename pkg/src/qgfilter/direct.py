"""Stationary scattering on the line-plus-graph system as one linear solve.

No DtN function is used here, so the amplitudes serve as an independent
check of the closed-form device formulas.

Every port is a half-line parametrised by its outgoing coordinate
``y >= 0``.  With a unit wave incident in port ``p`` the component on port
``q`` is ``delta_pq exp(-i k y) + S_qp exp(i k y)``; for the input port this
is ``exp(i k x) + R exp(-i k x)`` with ``x = -y``.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from . import _assembly
from .graph import MetricGraph, Separator
from .numerics import DEFAULT_TOLERANCES, NumericalDiagnostic, Tolerances

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ScatteringResult:
    k: float
    R: complex
    transmissions: tuple[complex, ...]

    @property
    def T(self) -> complex:
        return self.transmissions[0]

    @property
    def probabilities(self) -> tuple[float, ...]:
        return tuple(abs(t) ** 2 for t in self.transmissions)

    @property
    def reflection_probability(self) -> float:
        return abs(self.R) ** 2

    @property
    def unitarity_residual(self) -> float:
        return abs(abs(self.R) ** 2 + sum(self.probabilities) - 1.0)


def _system(graph: MetricGraph, k: float, incoming: int):
    ports = graph.contact_coupling.ports
    n = graph.n_contact
    width = ports + 2 * len(graph.edges)
    kappa = _assembly.edge_wavenumbers(graph, graph.units.energy(k))

    values, derivs = _assembly.end_rows(graph, kappa, graph.contact_ends, ports, width)
    port_values = np.zeros((ports, width), dtype=complex)
    port_derivs = np.zeros((ports, width), dtype=complex)
    port_values[:, :ports] = np.eye(ports)
    port_derivs[:, :ports] = 1j * k * np.eye(ports)
    const_values = np.zeros(ports + n, dtype=complex)
    const_derivs = np.zeros(ports + n, dtype=complex)
    const_values[incoming] = 1.0
    const_derivs[incoming] = -1j * k

    A, B = graph.contact_coupling.condition(n).matrices(ports + n)
    contact = A @ np.vstack([port_values, values]) + B @ np.vstack([port_derivs, derivs])
    contact_rhs = -(A @ const_values + B @ const_derivs)
    interior = _assembly.interior_rows(graph, kappa, ports, width)
    M = np.vstack([contact, interior])
    rhs = np.concatenate([contact_rhs, np.zeros(len(interior))])
    return M, rhs


def _solve_column(graph: MetricGraph, k: float, incoming: int, tol: Tolerances) -> np.ndarray:
    M, rhs = _system(graph, k, incoming)
    s = _assembly.singular_values(M)
    if s[-1] > tol.rank * s[0]:
        return np.linalg.solve(M, rhs)[:graph.contact_coupling.ports]
    # isolated singular k (bound state in the continuum): take the two-sided limit
    below = _solve_regular(graph, k - tol.probe, incoming, tol)
    above = _solve_regular(graph, k + tol.probe, incoming, tol)
    if np.max(np.abs(below - above)) > 1e-6:
        raise NumericalDiagnostic(f"scattering system singular at k={k!r} and one-sided limits disagree")
    log.debug("singular scattering system at k=%r; using the two-sided limit", k)
    return 0.5 * (below + above)


def _solve_regular(graph, k, incoming, tol):
    # probe points are near-singular by construction; only exact breakdown is fatal
    M, rhs = _system(graph, k, incoming)
    try:
        x = np.linalg.solve(M, rhs)
    except np.linalg.LinAlgError:
        raise NumericalDiagnostic(f"scattering system singular at probe point k={k!r}") from None
    if not np.all(np.isfinite(x)):
        raise NumericalDiagnostic(f"non-finite amplitudes at probe point k={k!r}")
    return x[:graph.contact_coupling.ports]


def _check_k(k):
    if not (math.isfinite(k) and k > 0):
        raise ValueError(f"wavenumber must be positive, got {k!r}")


def scatter_direct(graph: MetricGraph, k: float, tol: Tolerances = DEFAULT_TOLERANCES) -> ScatteringResult:
    """Reflection and transmission amplitudes for a wave incident on the input line."""
    _check_k(k)
    amps = _solve_column(graph, float(k), 0, tol)
    return ScatteringResult(float(k), complex(amps[0]), tuple(complex(a) for a in amps[1:]))


def scatter_separator_direct(graph: MetricGraph, k: float,
                             tol: Tolerances = DEFAULT_TOLERANCES) -> ScatteringResult:
    if not isinstance(graph.contact_coupling, Separator):
        raise ValueError("graph does not carry a separator coupling")
    return scatter_direct(graph, k, tol)


def scattering_matrix(graph: MetricGraph, k: float, tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """Full port scattering matrix; column ``p`` is the response to incidence in port ``p``."""
    _check_k(k)
    ports = graph.contact_coupling.ports
    return np.column_stack([_solve_column(graph, float(k), p, tol) for p in range(ports)])

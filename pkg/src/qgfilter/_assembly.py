"""Plane-wave bookkeeping shared by the Dirichlet and scattering solvers.

On every edge the component is expanded in the balanced basis

    f1(x) = exp(i a x) exp(i kappa x),   f2(x) = exp(i a x) exp(-i kappa (x - l)),

which stays bounded for evanescent (imaginary ``kappa``) waves.  Column
``2 i`` of a system matrix holds the coefficient of ``f1`` on edge ``i``
and column ``2 i + 1`` that of ``f2``.
"""
from __future__ import annotations

import numpy as np

from .graph import MetricGraph
from .numerics import NumericalDiagnostic


def edge_wavenumbers(graph: MetricGraph, energy: float) -> np.ndarray:
    kappa = np.array([graph.units.local_wavenumber(energy, e.scalar_potential) for e in graph.edges])
    lengths = np.array([e.length for e in graph.edges])
    if np.any(np.abs(kappa) * lengths < 1e-12):
        raise NumericalDiagnostic(f"energy {energy!r} coincides with an edge potential; plane-wave basis degenerates")
    return kappa


def end_rows(graph: MetricGraph, kappa: np.ndarray, ends, offset: int, width: int):
    """Value rows and outgoing covariant-derivative rows for a list of edge ends."""
    d = len(ends)
    values = np.zeros((d, width), dtype=complex)
    derivs = np.zeros((d, width), dtype=complex)
    for row, (edge_id, which) in enumerate(ends):
        i = graph.edge_index(edge_id)
        e = graph.edges[i]
        kap = kappa[i]
        decay = np.exp(1j * kap * e.length)
        c = offset + 2 * i
        if which == "a":
            values[row, c:c + 2] = (1.0, decay)
            derivs[row, c:c + 2] = (1j * kap, -1j * kap * decay)
        else:
            phase = np.exp(1j * graph.units.phase_slope(e.vector_potential) * e.length)
            values[row, c:c + 2] = (phase * decay, phase)
            derivs[row, c:c + 2] = (-1j * kap * phase * decay, 1j * kap * phase)
    return values, derivs


def interior_rows(graph: MetricGraph, kappa: np.ndarray, offset: int, width: int) -> np.ndarray:
    """Rows ``A values + B derivatives = 0`` for every non-contact vertex."""
    blocks = []
    for v, cond in graph.conditions.items():
        ends = graph.ends_at(v)
        A, B = cond.matrices(len(ends))
        values, derivs = end_rows(graph, kappa, ends, offset, width)
        blocks.append(A @ values + B @ derivs)
    if not blocks:
        return np.zeros((0, width), dtype=complex)
    return np.vstack(blocks)


def spec_coefficients(graph: MetricGraph, kappa: np.ndarray, coeffs: np.ndarray):
    """Convert balanced-basis coefficients to ``(C+, C-)`` of ``e^{iax}(C+ e^{i kappa x} + C- e^{-i kappa x})``."""
    out = []
    for i, e in enumerate(graph.edges):
        c1, c2 = coeffs[2 * i], coeffs[2 * i + 1]
        out.append((complex(c1), complex(c2 * np.exp(1j * kappa[i] * e.length))))
    return out


def singular_values(M: np.ndarray) -> np.ndarray:
    return np.linalg.svd(M, compute_uv=False)


"""Approximation of the band-pass contact by delta couplings on short links.

The contact is replaced by a point ``p0`` on the input-output line carrying
a delta coupling of strength ``n (alpha - 1) / eps``.  Short links of length
``eps`` join ``p0`` to points ``p1 .. pn``, each carrying a delta coupling of
strength ``(1 - alpha) / (alpha eps)``, and every former contact edge end is
reattached at its own ``p_j``.  As ``eps -> 0`` the transmission amplitude
tends to that of the band-pass device.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .direct import scatter_direct
from .dtn import dtn_at_k
from .filters import bandpass_transmission
from .graph import BandPass, Delta, DeltaJunction, Edge, Free, MetricGraph
from .numerics import DEFAULT_TOLERANCES, NumericalDiagnostic, Tolerances

log = logging.getLogger(__name__)

DEFAULT_EPSILONS = (1e-1, 1e-2, 1e-3, 1e-4)


@dataclass(frozen=True)
class ApproximationArrangement:
    epsilon: float
    n: int
    alpha: float

    @property
    def line_strength(self) -> float:
        return self.n * (self.alpha - 1) / self.epsilon

    @property
    def end_strength(self) -> float:
        return (1 - self.alpha) / (self.alpha * self.epsilon)


@dataclass(frozen=True)
class GenericArrangement:
    """Links from ``v1`` to ``v2 .. vN`` for a single-row ``T`` with nonnegative entries.

    ``link_lengths[j]`` is ``None`` where the corresponding entry of ``T`` is
    zero (no link).  ``strengths[0]`` belongs to ``v1``.
    """

    d: float
    t_row: tuple[float, ...]
    link_lengths: tuple[Optional[float], ...]
    strengths: tuple[float, ...]


def generic_arrangement(t_row: Sequence[float], d: float) -> GenericArrangement:
    t = np.asarray(t_row, dtype=float)
    if t.ndim != 1 or t.size == 0:
        raise ValueError("t_row must be a nonempty 1-d sequence")
    if np.any(t < 0) or not np.all(np.isfinite(t)):
        raise ValueError("only finite nonnegative T entries are supported")
    if not d > 0:
        raise ValueError("d must be positive")
    lengths = tuple(None if tj == 0 else float(d / tj) for tj in t)
    strengths = (float((np.sum(t ** 2) - np.sum(t)) / d),) + tuple(float((1 - tj) / d) for tj in t)
    return GenericArrangement(float(d), tuple(float(x) for x in t), lengths, strengths)


def build_bandpass_approximation(graph: MetricGraph, epsilon: float) -> MetricGraph:
    coupling = graph.contact_coupling
    if not isinstance(coupling, BandPass):
        raise ValueError("only the band-pass contact has a delta approximation")
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    arr = ApproximationArrangement(float(epsilon), graph.n_contact, coupling.alpha)
    c = graph.contact
    p0 = f"{c}~p0"
    names = [f"{c}~p{j + 1}" for j in range(arr.n)]
    taken = set(graph.vertices) | {e.id for e in graph.edges}
    if p0 in taken or taken.intersection(names):
        raise ValueError("generated vertex names collide with existing ids")

    # each contact edge end gets its own attachment point, in contact-end order
    attach = {end: names[j] for j, end in enumerate(graph.contact_ends)}
    edges = []
    for e in graph.edges:
        a = attach.get((e.id, "a"), e.end_a)
        b = attach.get((e.id, "b"), e.end_b)
        edges.append(Edge(e.id, a, b, e.length, e.vector_potential, e.scalar_potential))
    for j, name in enumerate(names):
        edges.append(Edge(f"{c}~link{j + 1}", p0, name, arr.epsilon))

    conditions = dict(graph.conditions)
    end_cond = Free() if arr.end_strength == 0 else Delta(arr.end_strength)
    conditions.update({name: end_cond for name in names})
    return MetricGraph(tuple(edges), conditions, p0, DeltaJunction(arr.line_strength), graph.units)


def analytic_T_epsilon(Lambda: float, n: int, alpha: float, epsilon: float, k: float) -> complex:
    """Transmission amplitude of the approximating graph from the DtN value.

    Exact when all contact edge ends of the attached graph see the same
    outgoing derivative in the unit-Dirichlet solution.
    """
    if not (k > 0 and epsilon > 0 and n >= 1):
        raise ValueError("need k > 0, epsilon > 0, n >= 1")
    if not math.isfinite(Lambda):
        raise ValueError("Lambda must be finite")
    ke = k * epsilon
    g = (1 - alpha) / (alpha * epsilon)
    x = -math.sin(ke) / k * Lambda / n + (math.cos(ke) + g / k * math.sin(ke))
    denom = (math.cos(ke) * Lambda + n * (k * math.sin(ke) - g * math.cos(ke))
             + (2j * k - n * (alpha - 1) / epsilon) * x)
    if abs(denom) == 0:
        raise NumericalDiagnostic(f"vanishing denominator at k={k!r}, epsilon={epsilon!r}")
    return 2j * k * x / denom


@dataclass(frozen=True)
class ConvergenceRow:
    epsilon: float
    k: float
    T_epsilon: complex
    T: complex
    error: float
    ratio: Optional[float]  # error relative to the previous epsilon at the same k


def convergence_study(graph: MetricGraph, epsilons: Sequence[float] = DEFAULT_EPSILONS,
                      ks: Sequence[float] = (2.0,),
                      tol: Tolerances = DEFAULT_TOLERANCES) -> list[ConvergenceRow]:
    """Errors ``|T_eps(k) - T(k)|`` with ``T_eps`` from a direct solve of the built arrangement."""
    eps = [float(e) for e in epsilons]
    if not eps or any(e <= 0 for e in eps) or any(b >= a for a, b in zip(eps, eps[1:])):
        raise ValueError("epsilons must be positive and strictly decreasing")
    if any(not k > 0 for k in ks):
        raise ValueError("wavenumbers must be positive")
    alpha = graph.contact_coupling.alpha if isinstance(graph.contact_coupling, BandPass) else None
    if alpha is None:
        raise ValueError("only the band-pass contact has a delta approximation")

    limits = {}
    for k in ks:
        _, limits[k] = bandpass_transmission(dtn_at_k(graph, k, tol), alpha, k)
    rows = []
    previous: dict[float, float] = {}
    for e in eps:
        approx = build_bandpass_approximation(graph, e)
        for k in ks:
            if k * e >= 0.5:
                log.warning("k*epsilon = %.3g >= 0.5: links are not short against the wavelength", k * e)
            t_eps = scatter_direct(approx, k, tol).T
            err = abs(t_eps - limits[k])
            ratio = err / previous[k] if k in previous and previous[k] > 0 else None
            previous[k] = err
            rows.append(ConvergenceRow(e, float(k), t_eps, limits[k], err, ratio))
    return rows

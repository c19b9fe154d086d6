"""Small attached graphs used in examples and tests."""
from __future__ import annotations

from typing import Sequence

from .graph import BandPass, ContactCoupling, Dirichlet, Edge, Free, MetricGraph, UnitSystem

_ENDS = {"dirichlet": Dirichlet, "free": Free}


def loop(length: float = 1.0, theta: float = 0.0, coupling: ContactCoupling = BandPass(4.0),
         units: UnitSystem = UnitSystem()) -> MetricGraph:
    """Single loop at the contact carrying flux angle ``theta``."""
    a = theta * units.hbar / (units.charge * length)
    return MetricGraph((Edge("loop", "0", "0", length, vector_potential=a),), {}, "0", coupling, units)


def star(lengths: Sequence[float], ends: Sequence[str], coupling: ContactCoupling = BandPass(4.0),
         potentials: Sequence[float] = (), units: UnitSystem = UnitSystem()) -> MetricGraph:
    """Stubs leaving the contact, each ending in a ``"dirichlet"`` or ``"free"`` vertex."""
    if len(lengths) != len(ends):
        raise ValueError("lengths and ends differ in size")
    pots = list(potentials) or [0.0] * len(lengths)
    edges = tuple(Edge(f"s{i}", "0", f"v{i}", l, scalar_potential=u)
                  for i, (l, u) in enumerate(zip(lengths, pots)))
    conditions = {f"v{i}": _ENDS[e]() for i, e in enumerate(ends)}
    return MetricGraph(edges, conditions, "0", coupling, units)


def stub(length: float = 1.0, end: str = "dirichlet", coupling: ContactCoupling = BandPass(4.0),
         potential: float = 0.0, units: UnitSystem = UnitSystem()) -> MetricGraph:
    return star([length], [end], coupling, [potential], units)


def flower(loop_length: float, theta: float, stub_length: float, stub_end: str = "dirichlet",
           coupling: ContactCoupling = BandPass(4.0), units: UnitSystem = UnitSystem()) -> MetricGraph:
    """A loop and a stub sharing the contact vertex."""
    a = theta * units.hbar / (units.charge * loop_length)
    edges = (Edge("loop", "0", "0", loop_length, vector_potential=a), Edge("s", "0", "v", stub_length))
    return MetricGraph(edges, {"v": _ENDS[stub_end]()}, "0", coupling, units)

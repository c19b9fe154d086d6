"""Shared numerical settings and small helpers."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable


class NumericalDiagnostic(RuntimeError):
    """Raised when a numerical decision cannot be made reliably."""


@dataclass(frozen=True)
class Tolerances:
    """Decision thresholds used across the solvers.

    ``rank`` is the relative singular-value cutoff, ``consistency`` the
    relative least-squares residual above which a singular system counts
    as having no solution, ``root`` the bracket width at which root
    bisection stops, ``zero`` the DtN magnitude a returned root must
    reach (bisection continues past ``root`` until it does),
    ``pole_guard`` the ``|sin k l|`` threshold of the closed-form loop and
    ``probe`` the wavenumber offset used to take one-sided limits at
    singular scattering systems.
    """

    rank: float = 1e-10
    consistency: float = 1e-8
    root: float = 1e-10
    zero: float = 1e-8
    pole_guard: float = 1e-8
    probe: float = 1e-9

    def __post_init__(self):
        for name in ("rank", "consistency", "root", "zero", "pole_guard", "probe"):
            if not getattr(self, name) > 0:
                raise ValueError(f"tolerance {name!r} must be positive")


DEFAULT_TOLERANCES = Tolerances()

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section_min(func: Callable[[float], float], a: float, b: float,
                       xtol: float = 1e-12, maxiter: int = 500) -> float:
    """Minimise a unimodal ``func`` on ``[a, b]`` by golden-section search."""
    if not b > a:
        raise ValueError("need a < b")
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = func(c), func(d)
    for _ in range(maxiter):
        if b - a <= xtol:
            break
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = func(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = func(d)
    # the interval ends may beat the interior probes for boundary minima
    candidates = [(func(a), a), (fc, c), (fd, d), (func(b), b)]
    return min(candidates)[1]

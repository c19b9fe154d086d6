"""Metric graphs, vertex boundary conditions and contact couplings.

A vertex condition of degree ``d`` is the linear relation
``A @ values + B @ derivatives = 0`` between the boundary values of the
incident edge components and their outgoing derivatives.  On edges that
carry a vector potential the derivative is the gauge-covariant one,
``d/dx - i q A / hbar``.
"""
from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType
from typing import Any, Mapping, NamedTuple, Sequence, Union

import numpy as np


class GraphSpecError(ValueError):
    """Invalid graph description."""


# --------------------------------------------------------------------------
# units and edges


@dataclass(frozen=True)
class UnitSystem:
    hbar: float = 1.0
    two_m: float = 1.0
    charge: float = 1.0

    def __post_init__(self):
        for name in ("hbar", "two_m", "charge"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise GraphSpecError(f"unit {name!r} must be a positive number, got {value!r}")

    def energy(self, k: float) -> float:
        """Energy of a free particle with wavenumber ``k``."""
        return (self.hbar * k) ** 2 / self.two_m

    def wavenumber(self, energy: float) -> float:
        return math.sqrt(self.two_m * energy) / self.hbar

    def local_wavenumber(self, energy: float, scalar_potential: float = 0.0) -> complex:
        """Principal-branch wavenumber on an edge with constant potential."""
        return np.sqrt(complex(self.two_m * (energy - scalar_potential))) / self.hbar

    def phase_slope(self, vector_potential: float) -> float:
        return self.charge * vector_potential / self.hbar


@dataclass(frozen=True)
class Edge:
    id: str
    end_a: str
    end_b: str
    length: float
    vector_potential: float = 0.0
    scalar_potential: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.length) and self.length > 0):
            raise GraphSpecError(f"edge {self.id!r}: length must be positive, got {self.length!r}")
        if not (math.isfinite(self.vector_potential) and math.isfinite(self.scalar_potential)):
            raise GraphSpecError(f"edge {self.id!r}: potentials must be finite")

    @property
    def is_loop(self) -> bool:
        return self.end_a == self.end_b


class EdgeEnd(NamedTuple):
    edge: str
    end: str  # "a" (x = 0) or "b" (x = length)


# --------------------------------------------------------------------------
# vertex conditions


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    rank: int
    hermiticity_defect: float


def _as_matrix(a, name: str) -> np.ndarray:
    m = np.array(a, dtype=complex)
    if m.ndim != 2:
        raise GraphSpecError(f"{name} must be a 2-d array, got shape {m.shape}")
    return m


def validate_vertex_condition(A, B, tol: float = 1e-10) -> ValidationReport:
    """Check ``rank(A|B) = d`` and ``A B^*`` Hermitian."""
    A = _as_matrix(A, "A")
    B = _as_matrix(B, "B")
    d = A.shape[0]
    if A.shape != (d, d) or B.shape != (d, d) or d < 1:
        raise GraphSpecError(f"A and B must be square of the same size, got {A.shape} and {B.shape}")
    if not tol > 0:
        raise ValueError("tol must be positive")
    s = np.linalg.svd(np.hstack([A, B]), compute_uv=False)
    rank = int(np.sum(s > tol * s[0])) if s[0] > 0 else 0
    abh = A @ B.conj().T
    defect = float(np.max(np.abs(abh - abh.conj().T)))
    scale = float(np.max(np.abs(abh)))
    ok = rank == d and defect <= tol * (1.0 + scale)
    return ValidationReport(ok, rank, defect)


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Free:
    """Continuity plus vanishing sum of outgoing derivatives."""

    def matrices(self, degree: int) -> tuple[np.ndarray, np.ndarray]:
        return _delta_matrices(degree, 0.0)


@dataclass(frozen=True)
class Delta:
    """Continuity plus ``sum psi' = strength * psi``."""

    strength: float

    def matrices(self, degree: int) -> tuple[np.ndarray, np.ndarray]:
        return _delta_matrices(degree, self.strength)


def _delta_matrices(degree: int, strength: float):
    if degree < 1:
        raise GraphSpecError("free/delta condition needs at least one edge end")
    A = np.zeros((degree, degree), dtype=complex)
    B = np.zeros((degree, degree), dtype=complex)
    for i in range(degree - 1):
        A[i, i], A[i, i + 1] = 1.0, -1.0
    A[-1, 0] = -strength
    B[-1, :] = 1.0
    return A, B


@dataclass(frozen=True)
class Dirichlet:
    def matrices(self, degree: int) -> tuple[np.ndarray, np.ndarray]:
        return np.eye(degree, dtype=complex), np.zeros((degree, degree), dtype=complex)


@dataclass(frozen=True, eq=False)
class STForm:
    """``[[I, T], [0, 0]] psi' = [[S, 0], [-T^*, I]] psi``."""

    r: int
    T: np.ndarray
    S: np.ndarray

    @property
    def degree(self) -> int:
        return self.r + self.T.shape[1]

    def matrices(self, degree: int) -> tuple[np.ndarray, np.ndarray]:
        if degree != self.degree:
            raise GraphSpecError(f"ST-form condition of degree {self.degree} used at degree {degree}")
        r, d = self.r, degree
        A = np.zeros((d, d), dtype=complex)
        B = np.zeros((d, d), dtype=complex)
        A[:r, :r] = self.S
        A[r:, :r] = -self.T.conj().T
        A[r:, r:] = np.eye(d - r)
        B[:r, :r] = -np.eye(r)
        B[:r, r:] = -self.T
        return A, B


@dataclass(frozen=True, eq=False)
class RawAB:
    A: np.ndarray
    B: np.ndarray

    def matrices(self, degree: int) -> tuple[np.ndarray, np.ndarray]:
        if self.A.shape != (degree, degree):
            raise GraphSpecError(f"raw (A, B) condition of size {self.A.shape[0]} used at degree {degree}")
        return np.array(self.A), np.array(self.B)


VertexCondition = Union[Free, Delta, Dirichlet, STForm, RawAB]


def st_form_condition(r: int, T, S, degree: int) -> STForm:
    if not 0 <= r <= degree:
        raise GraphSpecError(f"need 0 <= r <= degree, got r={r}, degree={degree}")
    T = np.array(T, dtype=complex)
    if T.size != r * (degree - r) or (T.ndim == 2 and T.size and T.shape != (r, degree - r)):
        raise GraphSpecError(f"T must have shape ({r}, {degree - r}), got {T.shape}")
    T = T.reshape(r, degree - r)
    S = np.array(S, dtype=complex)
    if S.size == 0 and r == 0:
        S = S.reshape(0, 0)
    if S.shape != (r, r):
        raise GraphSpecError(f"S must have shape ({r}, {r}), got {S.shape}")
    if not np.array_equal(S, S.conj().T):
        raise GraphSpecError("S must be Hermitian")
    return STForm(r, _frozen(T), _frozen(S))


def raw_ab_condition(A, B, tol: float = 1e-10) -> RawAB:
    report = validate_vertex_condition(A, B, tol)
    if not report.ok:
        raise GraphSpecError(
            f"(A, B) is not self-adjoint: rank {report.rank}, Hermiticity defect {report.hermiticity_defect:.3g}")
    return RawAB(_frozen(A), _frozen(B))


# --------------------------------------------------------------------------
# contact couplings; port order is (input, output[, output 2]) then graph ends


@dataclass(frozen=True)
class BandPass:
    alpha: float
    ports = 2

    def __post_init__(self):
        _check_positive("alpha", self.alpha)

    def condition(self, n: int) -> STForm:
        t = np.concatenate([[1.0], np.full(n, self.alpha)])
        return st_form_condition(1, t[None, :], np.zeros((1, 1)), n + 2)


@dataclass(frozen=True)
class BandStop:
    alpha: float
    ports = 2

    def __post_init__(self):
        _check_positive("alpha", self.alpha)

    def condition(self, n: int) -> STForm:
        return st_form_condition(2, np.full((2, n), self.alpha), np.zeros((2, 2)), n + 2)


@dataclass(frozen=True)
class Separator:
    alpha: float
    beta: float
    ports = 3

    def __post_init__(self):
        _check_positive("alpha", self.alpha)
        _check_positive("beta", self.beta)

    def condition(self, n: int) -> STForm:
        t = np.zeros((2, n + 1))
        t[0, 0] = self.beta
        t[0, 1:] = self.alpha
        t[1, 1:] = self.alpha * self.beta
        return st_form_condition(2, t, np.zeros((2, 2)), n + 3)


@dataclass(frozen=True)
class DeltaJunction:
    """Plain delta coupling of the line and the graph ends (approximating graphs)."""

    strength: float
    ports = 2

    def condition(self, n: int) -> Delta:
        return Delta(self.strength)


ContactCoupling = Union[BandPass, BandStop, Separator, DeltaJunction]


def _check_positive(name, value):
    if not (math.isfinite(value) and value > 0):
        raise GraphSpecError(f"{name} must be positive, got {value!r}")


# --------------------------------------------------------------------------
# the graph


@dataclass(frozen=True, eq=False)
class MetricGraph:
    """Attached graph together with its contact vertex and coupling.

    ``conditions`` maps every vertex other than the contact to its vertex
    condition.  Edge ends are ordered by edge order, ``a`` before ``b``.
    """

    edges: tuple[Edge, ...]
    conditions: Mapping[str, VertexCondition]
    contact: str
    contact_coupling: ContactCoupling
    units: UnitSystem = field(default_factory=UnitSystem)

    def __post_init__(self):
        edges = tuple(self.edges)
        conditions = MappingProxyType(dict(self.conditions))
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "conditions", conditions)
        if self.contact in conditions:
            raise GraphSpecError("the contact vertex must not carry its own vertex condition")
        vertices = (self.contact, *conditions.keys())
        if len(set(vertices)) != len(vertices):
            raise GraphSpecError("duplicate vertex ids")
        ids = [e.id for e in edges]
        if len(set(ids)) != len(ids):
            raise GraphSpecError("duplicate edge ids")
        ends: dict[str, list[EdgeEnd]] = {v: [] for v in vertices}
        for e in edges:
            for which, v in (("a", e.end_a), ("b", e.end_b)):
                if v not in ends:
                    raise GraphSpecError(f"edge {e.id!r} refers to unknown vertex {v!r}")
                ends[v].append(EdgeEnd(e.id, which))
        if not ends[self.contact]:
            raise GraphSpecError("the contact vertex has no incident edges")
        object.__setattr__(self, "_ends", {v: tuple(x) for v, x in ends.items()})
        object.__setattr__(self, "_edge_index", {e.id: i for i, e in enumerate(edges)})
        object.__setattr__(self, "vertices", vertices)
        self._check_connected()
        for v, cond in conditions.items():
            d = len(ends[v])
            if d == 0:
                raise GraphSpecError(f"vertex {v!r} has no incident edges")
            A, B = cond.matrices(d)
            report = validate_vertex_condition(A, B, 1e-10)
            if not report.ok:
                raise GraphSpecError(f"vertex {v!r}: condition is not self-adjoint ({report})")

    def _check_connected(self):
        adjacency: dict[str, set[str]] = {v: set() for v in self.vertices}
        for e in self.edges:
            adjacency[e.end_a].add(e.end_b)
            adjacency[e.end_b].add(e.end_a)
        seen = {self.contact}
        queue = deque([self.contact])
        while queue:
            for w in adjacency[queue.popleft()] - seen:
                seen.add(w)
                queue.append(w)
        if len(seen) != len(self.vertices):
            missing = sorted(set(self.vertices) - seen)
            raise GraphSpecError(f"graph is not connected; unreachable vertices {missing}")

    def ends_at(self, vertex: str) -> tuple[EdgeEnd, ...]:
        return self._ends[vertex]

    def edge_index(self, edge_id: str) -> int:
        return self._edge_index[edge_id]

    def edge(self, edge_id: str) -> Edge:
        return self.edges[self._edge_index[edge_id]]

    @property
    def contact_ends(self) -> tuple[EdgeEnd, ...]:
        return self._ends[self.contact]

    @property
    def n_contact(self) -> int:
        return len(self.contact_ends)

    def degree(self, vertex: str) -> int:
        return len(self._ends[vertex])

    def with_coupling(self, coupling: ContactCoupling) -> "MetricGraph":
        return MetricGraph(self.edges, dict(self.conditions), self.contact, coupling, self.units)


# --------------------------------------------------------------------------
# graph description files

_TOP_KEYS = {"units", "edges", "vertices", "contact"}
_EDGE_KEYS = {"id", "from", "to", "length", "vector_potential", "scalar_potential"}
_CONDITION_KEYS = {
    "free": set(),
    "delta": {"strength"},
    "dirichlet": set(),
    "st_form": {"r", "T", "S"},
    "raw_ab": {"A", "B"},
}


def _check_keys(obj: Mapping, allowed: set, required: set, where: str):
    if not isinstance(obj, Mapping):
        raise GraphSpecError(f"{where}: expected an object")
    unknown = set(obj) - allowed
    if unknown:
        raise GraphSpecError(f"{where}: unknown keys {sorted(unknown)}")
    missing = required - set(obj)
    if missing:
        raise GraphSpecError(f"{where}: missing keys {sorted(missing)}")


def _number(x, where: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise GraphSpecError(f"{where}: expected a number, got {x!r}")
    return float(x)


def _complex_array(x, where: str) -> np.ndarray:
    """A list of rows; each entry is a number or an ``[re, im]`` pair."""

    def entry(item) -> complex:
        if isinstance(item, list):
            if len(item) != 2:
                raise GraphSpecError(f"{where}: complex entries are written [re, im]")
            return complex(_number(item[0], where), _number(item[1], where))
        return complex(_number(item, where))

    if not isinstance(x, list) or not all(isinstance(row, list) for row in x):
        raise GraphSpecError(f"{where}: expected a list of rows")
    rows = [[entry(v) for v in row] for row in x]
    if len({len(row) for row in rows}) > 1:
        raise GraphSpecError(f"{where}: rows have different lengths")
    width = len(rows[0]) if rows else 0
    return np.array(rows, dtype=complex).reshape(len(rows), width)


def _parse_condition(obj, degree: int, where: str) -> VertexCondition:
    if not isinstance(obj, Mapping) or "type" not in obj:
        raise GraphSpecError(f"{where}: condition needs a 'type'")
    kind = obj["type"]
    if kind not in _CONDITION_KEYS:
        raise GraphSpecError(f"{where}: unknown condition type {kind!r}")
    params = _CONDITION_KEYS[kind]
    _check_keys(obj, params | {"type"}, params - {"S"}, where)
    if kind == "free":
        return Free()
    if kind == "delta":
        return Delta(_number(obj["strength"], where))
    if kind == "dirichlet":
        return Dirichlet()
    if kind == "st_form":
        r = obj["r"]
        if not isinstance(r, int) or isinstance(r, bool):
            raise GraphSpecError(f"{where}: r must be an integer")
        T = _complex_array(obj["T"], where + ".T") if obj["T"] else np.zeros((r, degree - r))
        S = _complex_array(obj["S"], where + ".S") if obj.get("S") else np.zeros((r, r))
        return st_form_condition(r, T, S, degree)
    return raw_ab_condition(_complex_array(obj["A"], where + ".A"), _complex_array(obj["B"], where + ".B"))


def _parse_coupling(obj) -> ContactCoupling:
    where = "contact.coupling"
    if not isinstance(obj, Mapping) or "type" not in obj:
        raise GraphSpecError(f"{where}: needs a 'type'")
    kind = obj["type"]
    if kind in ("bandpass", "bandstop"):
        _check_keys(obj, {"type", "alpha"}, {"alpha"}, where)
        cls = BandPass if kind == "bandpass" else BandStop
        return cls(_number(obj["alpha"], where))
    if kind == "separator":
        _check_keys(obj, {"type", "alpha", "beta"}, {"alpha", "beta"}, where)
        return Separator(_number(obj["alpha"], where), _number(obj["beta"], where))
    raise GraphSpecError(f"{where}: unknown coupling type {kind!r}")


def build_graph(spec: Mapping[str, Any]) -> MetricGraph:
    """Build a validated graph from a parsed graph description."""
    _check_keys(spec, _TOP_KEYS, {"edges", "vertices", "contact"}, "graph")
    units_obj = spec.get("units", {})
    _check_keys(units_obj, {"hbar", "two_m", "charge"}, set(), "units")
    units = UnitSystem(**{k: _number(v, f"units.{k}") for k, v in units_obj.items()})

    if not isinstance(spec["edges"], list):
        raise GraphSpecError("edges: expected an array")
    edges = []
    for i, e in enumerate(spec["edges"]):
        where = f"edges[{i}]"
        _check_keys(e, _EDGE_KEYS, {"id", "from", "to", "length"}, where)
        edges.append(Edge(
            id=str(e["id"]), end_a=str(e["from"]), end_b=str(e["to"]),
            length=_number(e["length"], where + ".length"),
            vector_potential=_number(e.get("vector_potential", 0.0), where + ".vector_potential"),
            scalar_potential=_number(e.get("scalar_potential", 0.0), where + ".scalar_potential"),
        ))

    contact_obj = spec["contact"]
    _check_keys(contact_obj, {"vertex", "coupling"}, {"vertex", "coupling"}, "contact")
    contact = str(contact_obj["vertex"])
    coupling = _parse_coupling(contact_obj["coupling"])

    if not isinstance(spec["vertices"], list):
        raise GraphSpecError("vertices: expected an array")
    degree: dict[str, int] = {}
    for e in edges:
        degree[e.end_a] = degree.get(e.end_a, 0) + 1
        degree[e.end_b] = degree.get(e.end_b, 0) + 1
    conditions: dict[str, VertexCondition] = {}
    declared = []
    for i, v in enumerate(spec["vertices"]):
        where = f"vertices[{i}]"
        _check_keys(v, {"id", "condition"}, {"id"}, where)
        vid = str(v["id"])
        declared.append(vid)
        if vid == contact:
            if "condition" in v:
                raise GraphSpecError(f"{where}: the contact vertex must not carry a condition")
            continue
        cond = v.get("condition", {"type": "free"})
        conditions[vid] = _parse_condition(cond, degree.get(vid, 0), where + ".condition")
    if contact not in declared:
        raise GraphSpecError(f"contact vertex {contact!r} is not declared in 'vertices'")
    if len(set(declared)) != len(declared):
        raise GraphSpecError("duplicate vertex ids")
    return MetricGraph(tuple(edges), conditions, contact, coupling, units)


def load_graph(path: Union[str, Path]) -> MetricGraph:
    text = Path(path).read_text(encoding="utf-8")
    try:
        spec = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphSpecError(f"{path}: invalid JSON ({exc})") from None
    return build_graph(spec)

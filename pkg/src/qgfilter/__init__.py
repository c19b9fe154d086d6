"""Quantum-graph spectral filters: DtN functions, device amplitudes and checks."""
from .approx import (ApproximationArrangement, analytic_T_epsilon, build_bandpass_approximation,
                     convergence_study, generic_arrangement)
from .direct import ScatteringResult, scatter_direct, scatter_separator_direct, scattering_matrix
from .dtn import Classification, DtNSample, dtn, dtn_at_k, find_spectrum, solve_dirichlet_problem
from .filters import (DeviceCurvePoint, bandpass_transmission, bandstop_transmission, duality_residual,
                      separator_transmission, sweep_device)
from .graph import (BandPass, BandStop, Delta, DeltaJunction, Dirichlet, Edge, Free, GraphSpecError,
                    MetricGraph, RawAB, Separator, STForm, UnitSystem, build_graph, load_graph,
                    raw_ab_condition, st_form_condition, validate_vertex_condition)
from .loop import LoopFilter, field_sweep, loop_dtn, loop_transmission_probability, peak_positions
from .numerics import NumericalDiagnostic, Tolerances

__version__ = "0.1.0"

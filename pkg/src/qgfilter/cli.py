"""Command-line front end writing CSV tables.

Exit codes: 0 success, 2 input error, 3 empty result, 4 numerical diagnostic.
"""
from __future__ import annotations

import argparse
import io
import logging
import math
import sys
from typing import Iterable, Optional, Sequence

import numpy as np

from .approx import DEFAULT_EPSILONS, convergence_study
from .dtn import dtn_at_k, find_spectrum
from .filters import sweep_device
from .graph import BandPass, GraphSpecError, MetricGraph, load_graph
from .loop import LoopFilter, loop_transmission_probability
from .numerics import NumericalDiagnostic, Tolerances

log = logging.getLogger("qgfilter")

EXIT_OK, EXIT_INPUT, EXIT_EMPTY, EXIT_NUMERIC = 0, 2, 3, 4


class InputError(Exception):
    pass


def _fmt(x) -> str:
    if isinstance(x, str):
        return x
    return "%.12e" % x


def _write_csv(path: Optional[str], header: Sequence[str], rows: Iterable[Sequence]):
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(_fmt(v) for v in row) + "\n")
    if path is None or path == "-":
        sys.stdout.write(buf.getvalue())
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())


def _tolerances(args) -> Tolerances:
    kw = {}
    if args.rank_tol is not None:
        kw["rank"] = args.rank_tol
    if args.root_tol is not None:
        kw["root"] = args.root_tol
    if args.pole_guard is not None:
        kw["pole_guard"] = args.pole_guard
    try:
        return Tolerances(**kw)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _k_range(args, required=True):
    if args.k_min is None and args.k_max is None and not required:
        return None
    if args.k_min is None or args.k_max is None:
        raise InputError("--k-min and --k-max are required")
    if not (0 < args.k_min < args.k_max):
        raise InputError("need 0 < --k-min < --k-max")
    if args.samples < 2:
        raise InputError("--samples must be at least 2")
    return args.k_min, args.k_max, args.samples


def _graph(args) -> MetricGraph:
    if args.graph is None:
        raise InputError("--graph is required")
    try:
        return load_graph(args.graph)
    except OSError as exc:
        raise InputError(f"cannot read graph file: {exc}") from None


def cmd_sweep_k(args) -> int:
    graph = _graph(args)
    tol = _tolerances(args)
    k_min, k_max, samples = _k_range(args)
    points = sweep_device(graph, k_min, k_max, samples, tol)
    three = graph.contact_coupling.ports == 3
    header = ["k", "E", "classification", "re_R", "im_R", "re_T1", "im_T1"]
    header += ["re_T2", "im_T2", "P1", "P2"] if three else ["P1"]
    header.append("unitarity_residual")
    rows = []
    for p in points:
        row = [p.k, p.E, p.classification, p.R.real, p.R.imag, p.transmissions[0].real, p.transmissions[0].imag]
        if three:
            row += [p.transmissions[1].real, p.transmissions[1].imag, p.P1, p.P2]
        else:
            row.append(p.P1)
        row.append(p.unitarity_residual)
        rows.append(row)
    _write_csv(args.output, header, rows)
    return EXIT_OK


def _loop_filter(graph: MetricGraph, area: Optional[float]) -> LoopFilter:
    if len(graph.edges) != 1 or not graph.edges[0].is_loop or not isinstance(graph.contact_coupling, BandPass):
        raise InputError("sweep-b needs a single band-pass loop at the contact")
    e = graph.edges[0]
    if e.scalar_potential != 0:
        raise InputError("sweep-b needs a loop without scalar potential")
    area = e.length ** 2 / (4 * math.pi) if area is None else area
    if not area > 0:
        raise InputError("--area must be positive")
    return LoopFilter(e.length, area, e.vector_potential * e.length / area,
                      graph.contact_coupling.alpha, graph.units)


def cmd_sweep_b(args) -> int:
    graph = _graph(args)
    tol = _tolerances(args)
    f = _loop_filter(graph, args.area)
    if args.b_min is None or args.b_max is None or not args.b_min < args.b_max:
        raise InputError("need --b-min < --b-max")
    if args.samples < 2:
        raise InputError("--samples must be at least 2")
    k_range = _k_range(args, required=False)
    if args.k is not None:
        if not args.k > 0:
            raise InputError("--k must be positive")
        ks = [args.k]
    elif k_range is not None:
        ks = list(np.linspace(*k_range))
    else:
        raise InputError("give --k or a --k-min/--k-max range")
    rows = []
    for b in np.linspace(args.b_min, args.b_max, args.samples):
        fb = f.with_field(float(b))
        for k in ks:
            rows.append([float(b), fb.theta, float(k), loop_transmission_probability(fb, float(k), tol)])
    _write_csv(args.output, ["B", "theta", "k", "P"], rows)
    return EXIT_OK


def cmd_spectrum(args) -> int:
    graph = _graph(args)
    tol = _tolerances(args)
    k_min, k_max, samples = _k_range(args)
    roots = find_spectrum(graph, k_min, k_max, samples, tol)
    rows = []
    for i, k in enumerate(roots):
        s = dtn_at_k(graph, k, tol)
        rows.append([str(i), k, graph.units.energy(k), abs(s.value) if s.value is not None else math.nan])
    _write_csv(args.output, ["index", "k_root", "lambda", "residual"], rows)
    if not roots:
        log.warning("no roots in [%g, %g]", k_min, k_max)
        return EXIT_EMPTY
    return EXIT_OK


def _parse_epsilons(text: Optional[str]):
    if text is None:
        return list(DEFAULT_EPSILONS)
    try:
        eps = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"bad --epsilons list {text!r}") from None
    if not eps or any(e <= 0 for e in eps) or any(b >= a for a, b in zip(eps, eps[1:])):
        raise InputError("--epsilons must be positive and strictly decreasing")
    return eps


def cmd_converge(args) -> int:
    graph = _graph(args)
    tol = _tolerances(args)
    if not isinstance(graph.contact_coupling, BandPass):
        raise InputError("convergence studies exist only for the band-pass coupling")
    eps = _parse_epsilons(args.epsilons)
    if args.k is not None:
        if not args.k > 0:
            raise InputError("--k must be positive")
        ks = [args.k]
    else:
        ks = [float(k) for k in np.linspace(*_k_range(args))]
    rows = []
    for r in convergence_study(graph, eps, ks, tol):
        rows.append([r.epsilon, r.k, r.T_epsilon.real, r.T_epsilon.imag, r.T.real, r.T.imag,
                     abs(r.T_epsilon), r.error, math.nan if r.ratio is None else r.ratio])
    header = ["epsilon", "k", "re_T_eps", "im_T_eps", "re_T", "im_T", "abs_T_eps", "error", "ratio"]
    _write_csv(args.output, header, rows)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--graph", metavar="PATH", help="graph description file (JSON)")
    common.add_argument("--k-min", type=float)
    common.add_argument("--k-max", type=float)
    common.add_argument("--samples", type=int, default=2000)
    common.add_argument("--k", type=float, help="single wavenumber")
    common.add_argument("--output", metavar="PATH", help="CSV output file (default: stdout)")
    common.add_argument("--rank-tol", type=float)
    common.add_argument("--root-tol", type=float)
    common.add_argument("--pole-guard", type=float)
    common.add_argument("--quiet", action="store_true")

    parser = argparse.ArgumentParser(prog="qgfilter", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("sweep-k", parents=[common], help="device amplitudes over a wavenumber grid")
    p.set_defaults(func=cmd_sweep_k)
    p = sub.add_parser("sweep-b", parents=[common], help="loop filter transmission over a field grid")
    p.add_argument("--b-min", type=float)
    p.add_argument("--b-max", type=float)
    p.add_argument("--area", type=float, help="loop area (default: circle of the loop length)")
    p.set_defaults(func=cmd_sweep_b)
    p = sub.add_parser("spectrum", parents=[common], help="zeros of the DtN function")
    p.set_defaults(func=cmd_spectrum)
    p = sub.add_parser("converge", parents=[common], help="delta-approximation convergence table")
    p.add_argument("--epsilons", metavar="LIST", help="comma-separated decreasing link lengths")
    p.set_defaults(func=cmd_converge)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    logging.basicConfig(level=logging.ERROR if args.quiet else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except (InputError, GraphSpecError, ValueError) as exc:
        log.error("%s", exc)
        return EXIT_INPUT
    except NumericalDiagnostic as exc:
        log.error("numerical diagnostic: %s", exc)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())

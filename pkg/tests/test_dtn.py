import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import loop_dtn_exact, stub_dtn_exact
from qgfilter import Classification, NumericalDiagnostic, Tolerances, dtn, dtn_at_k, find_spectrum
from qgfilter import catalog
from qgfilter.dtn import solve_dirichlet_problem
from qgfilter.graph import BandPass, Delta, Dirichlet, Edge, MetricGraph, UnitSystem

GRID = np.linspace(0.1, 10.0, 1000)


def assert_close(values, exact, rel=1e-9):
    values, exact = np.asarray(values), np.asarray(exact)
    err = np.abs(values - exact) / (1 + np.abs(exact))
    assert err.max() <= rel, f"worst relative error {err.max():.3g}"


def regular_values(graph, ks):
    out = []
    for k in ks:
        s = dtn_at_k(graph, k)
        assert s.is_regular, (k, s.classification)
        out.append(s.value)
    return np.array(out)


class TestExamples:
    def test_stub_at_one(self, dirichlet_stub):
        s = dtn_at_k(dirichlet_stub, 1.0)
        assert s.is_regular
        assert s.value == pytest.approx(-1 / math.tan(1.0), abs=1e-12)
        assert s.value == pytest.approx(-0.642093, abs=1e-6)

    def test_stub_zero_at_half_pi(self, dirichlet_stub):
        s = dtn_at_k(dirichlet_stub, math.pi / 2)
        assert s.is_regular and abs(s.value) < 1e-12

    def test_loop_zero(self, flux_loop):
        s = dtn_at_k(flux_loop, 1.0)
        assert s.is_regular and abs(s.value) < 1e-12

    def test_flux_free_loop_value(self):
        s = dtn_at_k(catalog.loop(1.0, 0.0), math.pi / 2)
        assert s.value == pytest.approx(math.pi, rel=1e-12)

    def test_loop_pole(self, flux_loop):
        assert dtn_at_k(flux_loop, math.pi).classification is Classification.POLE

    def test_flux_free_loop_eigen_consistent(self):
        s = dtn_at_k(catalog.loop(1.0, 0.0), 2 * math.pi)
        assert s.classification is Classification.EIGEN_CONSISTENT
        assert s.value == 0.0

    def test_two_stubs_sigma0(self, two_stubs):
        s = dtn_at_k(two_stubs, math.pi)
        assert s.classification is Classification.SIGMA0
        assert s.value is None

    def test_single_stub_pole(self, dirichlet_stub):
        # the sine eigenfunction is nonzero at the contact: pole, not sigma0
        assert dtn_at_k(dirichlet_stub, math.pi).classification is Classification.POLE

    def test_rejects_nonpositive_energy(self, dirichlet_stub):
        with pytest.raises(ValueError):
            dtn(dirichlet_stub, 0.0)

    def test_waves_satisfy_unit_data(self, flux_loop):
        s = solve_dirichlet_problem(flux_loop, 2.3 ** 2)
        (w,) = s.waves
        assert abs(w(0.0) - 1) < 1e-12 and abs(w(1.0) - 1) < 1e-12
        total = w.covariant_derivative(0.0) - w.covariant_derivative(1.0)
        assert abs(total - s.value) < 1e-12


class TestOracles:
    @pytest.mark.parametrize("theta", [0.0, 1.0, 2.5, math.pi])
    @pytest.mark.parametrize("length", [1.0, 1.7])
    def test_loop(self, theta, length):
        ks = GRID[np.abs(np.sin(GRID * length)) >= 1e-3]
        assert_close(regular_values(catalog.loop(length, theta), ks), loop_dtn_exact_vec(ks, length, theta))

    @pytest.mark.parametrize("length", [1.0, 0.6])
    def test_dirichlet_stub(self, length):
        ks = GRID[np.abs(np.sin(GRID * length)) >= 1e-3]
        assert_close(regular_values(catalog.stub(length), ks), -ks / np.tan(ks * length))

    def test_free_stub(self):
        ks = GRID[np.abs(np.cos(GRID * 1.3)) >= 1e-3]
        assert_close(regular_values(catalog.stub(1.3, "free"), ks), ks * np.tan(ks * 1.3))

    def test_stub_with_vector_potential(self):
        # the vector potential is a pure gauge on a tree
        g = MetricGraph((Edge("s", "0", "v", 1.0, vector_potential=2.7),), {"v": Dirichlet()}, "0", BandPass(2.0))
        ks = GRID[np.abs(np.sin(GRID)) >= 1e-3]
        assert_close(regular_values(g, ks), -ks / np.tan(ks))

    def test_evanescent_stub(self):
        U, length = 30.0, 0.8
        ks = np.linspace(0.1, 5.0, 200)
        exact = [stub_dtn_exact(1j * math.sqrt(U - k * k), length, "dirichlet") for k in ks]
        mu = np.sqrt(U - ks ** 2)
        np.testing.assert_allclose(exact, -mu / np.tanh(mu * length), rtol=1e-12)
        assert_close(regular_values(catalog.stub(length, potential=U), ks), exact)

    def test_star_is_sum_of_stubs(self):
        lengths, ends = [1.0, 0.7, 1.9], ["dirichlet", "free", "dirichlet"]
        g = catalog.star(lengths, ends)
        exact = np.array([sum(stub_dtn_exact(k, l, e) for l, e in zip(lengths, ends)) for k in GRID])
        trig = np.array([min(abs(math.sin(k)), abs(math.cos(k * 0.7)), abs(math.sin(k * 1.9))) for k in GRID])
        ks = GRID[trig >= 1e-3]
        assert_close(regular_values(g, ks), exact[trig >= 1e-3])

    def test_flower_is_loop_plus_stub(self):
        g = catalog.flower(1.3, 0.8, 0.9)
        ks = GRID[(np.abs(np.sin(GRID * 1.3)) >= 1e-3) & (np.abs(np.sin(GRID * 0.9)) >= 1e-3)]
        exact = loop_dtn_exact_vec(ks, 1.3, 0.8) - ks / np.tan(ks * 0.9)
        assert_close(regular_values(g, ks), exact)

    def test_nondefault_units(self):
        units = UnitSystem(hbar=0.5, two_m=3.0, charge=2.0)
        g = catalog.loop(1.0, 1.0, units=units)
        ks = GRID[np.abs(np.sin(GRID)) >= 1e-3]
        assert_close(regular_values(g, ks), loop_dtn_exact_vec(ks, 1.0, 1.0))


def loop_dtn_exact_vec(ks, length, theta):
    return np.array([loop_dtn_exact(k, length, theta) for k in ks])


class TestReality:
    @settings(max_examples=40, deadline=None)
    @given(seed=st.integers(0, 2 ** 31))
    def test_imaginary_part_bounded(self, seed):
        rng = np.random.default_rng(seed)
        edges = (Edge("l", "0", "0", rng.uniform(0.5, 2), vector_potential=rng.uniform(-3, 3)),
                 Edge("s", "0", "v", rng.uniform(0.5, 2), vector_potential=rng.uniform(-3, 3),
                      scalar_potential=rng.uniform(-2, 2)),
                 Edge("t", "v", "w", rng.uniform(0.5, 2), vector_potential=rng.uniform(-3, 3)))
        g = MetricGraph(edges, {"v": Delta(rng.uniform(-3, 3)), "w": Dirichlet()}, "0", BandPass(2.0))
        k = rng.uniform(0.5, 6)
        s = solve_dirichlet_problem(g, k * k)
        if s.is_regular and s.condition_estimate < 1e5:
            # recompute the complex sum from the returned waves
            ends = g.contact_ends
            total = 0j
            for edge_id, end in ends:
                w = next(w for w in s.waves if w.edge == edge_id)
                total += w.covariant_derivative(0.0) if end == "a" else -w.covariant_derivative(w.length)
            assert abs(total.imag) <= 1e-10 * (1 + abs(s.value))
            assert abs(total.real - s.value) <= 1e-10 * (1 + abs(s.value))


class TestFindSpectrum:
    def test_loop_theta1(self, flux_loop):
        roots = find_spectrum(flux_loop, 0.1, 8.0, 400)
        np.testing.assert_allclose(roots, [1, 2 * math.pi - 1, 2 * math.pi + 1], atol=1e-8)

    def test_loop_theta0(self):
        roots = find_spectrum(catalog.loop(1.0, 0.0), 0.1, 7.0, 400)
        np.testing.assert_allclose(roots, [2 * math.pi], atol=1e-8)

    def test_stub(self, dirichlet_stub):
        roots = find_spectrum(dirichlet_stub, 0.1, 5.0, 400)
        np.testing.assert_allclose(roots, [math.pi / 2, 3 * math.pi / 2], atol=1e-8)

    @pytest.mark.parametrize("graph, k_max, grid", [
        (catalog.loop(1.3, 2.0), 12.0, 1500),
        (catalog.flower(1.0, 1.0, 0.7), 12.0, 1500),
        (catalog.flower(1.0, 1.0, 0.7), 10.0, 2000),  # a root where the DtN slope is steep
        (catalog.star([1.0, 1.4], ["dirichlet", "free"]), 12.0, 1500),
    ])
    def test_roots_are_zeros(self, graph, k_max, grid):
        roots = find_spectrum(graph, 0.1, k_max, grid)
        assert roots
        for k in roots:
            s = dtn_at_k(graph, k)
            assert s.classification is Classification.EIGEN_CONSISTENT or abs(s.value) <= 1e-8

    def test_empty(self, dirichlet_stub):
        assert find_spectrum(dirichlet_stub, 1.7, 3.0, 50) == []

    def test_bad_range(self, dirichlet_stub):
        with pytest.raises(ValueError):
            find_spectrum(dirichlet_stub, 2.0, 1.0, 50)


class TestClassificationHysteresis:
    SCALES = (0.1, 1.0, 10.0)

    @pytest.mark.parametrize("graph_k", [
        (catalog.stub(1.0), math.pi / 2),
        (catalog.loop(1.0, 1.0), 1.0),
        (catalog.loop(1.0, 1.0), math.pi),
        (catalog.star([1.0, 1.0], ["dirichlet", "dirichlet"]), math.pi),
    ])
    def test_no_sigma0_regular_flip(self, graph_k):
        graph, k = graph_k
        kinds = set()
        for scale in self.SCALES:
            tol = Tolerances(rank=1e-10 * scale, consistency=1e-8 * scale)
            try:
                kinds.add(dtn_at_k(graph, k, tol).classification)
            except NumericalDiagnostic:
                kinds.add(None)
        assert not {Classification.SIGMA0, Classification.REGULAR} <= kinds
        assert len(kinds) == 1

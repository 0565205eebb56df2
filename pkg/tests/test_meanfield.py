import math

import numpy as np
import pytest

from gibbsbound.graphs import EDGE, TRIANGLE, TWOSTAR, pair_count
from gibbsbound.meanfield import (
    PhiPoly,
    finite_n_fixed_points,
    finite_n_phi,
    ising_branch_residual,
    ising_fixed_point,
    mean_delta_L_er,
    mean_field_product,
    phi,
    solve_fixed_points,
)
from gibbsbound.models import ErgmModel, IsingModel


def ergm(n, b1, motif=None, b2=None):
    terms = [(EDGE, b1)]
    if motif is not None:
        terms.append((motif, b2))
    return ErgmModel(n, terms)


def florentine_poly():
    return PhiPoly.from_model(ergm(16, -1.6339, TWOSTAR, 0.0098))


def dense_scan_roots(poly, points=10**6):
    """Independent dense-grid oracle for the number of roots."""
    xs = np.linspace(0.0, 1.0, points)
    g = np.array([poly.phi(a) - a for a in xs])
    sign = np.sign(g)
    crossings = np.nonzero(sign[:-1] * sign[1:] < 0)[0]
    return len(crossings) + int(np.sum(g == 0.0))


class TestPhiPoly:
    def test_zero_betas_give_half(self):
        poly = PhiPoly.from_model(ergm(5, 0.0, TRIANGLE, 0.0))
        for a in (0.0, 0.3, 1.0):
            assert phi(poly, a) == 0.5

    def test_florentine_phi_coefficients(self):
        poly = florentine_poly()
        for a in (0.0, 0.25, 1.0):
            assert poly.Phi(a) == pytest.approx(-1.6339 + 0.0196 * a)

    def test_edge_only_phi_constant_logistic(self):
        b1 = 0.4
        poly = PhiPoly.from_model(ergm(6, b1))
        want = math.exp(2 * b1) / (1 + math.exp(2 * b1))
        for a in (0.0, 0.5, 1.0):
            assert phi(poly, a) == pytest.approx(want)

    def test_domain_error(self):
        with pytest.raises(ValueError):
            phi(florentine_poly(), 1.5)

    def test_phi_prime_matches_finite_differences(self):
        rng = np.random.default_rng(42)
        poly = PhiPoly.from_model(ergm(10, -0.8, TRIANGLE, 0.35))
        h = 1e-6
        for a in rng.uniform(h, 1 - h, size=100):
            numeric = (poly.phi(a + h) - poly.phi(a - h)) / (2 * h)
            assert poly.phi_prime(a) == pytest.approx(numeric, abs=1e-6)

    def test_abs_variant_uses_absolute_betas(self):
        poly = PhiPoly.from_model(ergm(8, -1.0, TRIANGLE, -0.2))
        assert poly.Phi_abs(1.0) == pytest.approx(1.0 + 0.2 * 3)
        assert poly.Phi_abs_prime(1.0) == pytest.approx(0.2 * 6)


class TestSolveFixedPoints:
    def test_always_at_least_one_root(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            poly = PhiPoly.from_model(
                ergm(12, rng.normal(), TRIANGLE, rng.normal() * 0.5))
            roots = solve_fixed_points(poly)
            assert len(roots) >= 1
            for fp in roots:
                assert abs(phi(poly, fp.a_star) - fp.a_star) <= 1e-9
                assert 0.0 < fp.a_star < 1.0

    def test_beta_zero_root_is_half(self):
        roots = solve_fixed_points(PhiPoly.from_model(ergm(5, 0.0)))
        assert len(roots) == 1
        assert roots[0].a_star == pytest.approx(0.5, abs=1e-12)
        assert roots[0].stable and roots[0].unique

    def test_florentine_root(self):
        roots = solve_fixed_points(florentine_poly())
        assert len(roots) == 1
        fp = roots[0]
        assert fp.unique
        assert fp.a_star == pytest.approx(0.036743, abs=1e-6)
        assert fp.stable

    def test_multiple_roots_against_dense_scan(self):
        poly = PhiPoly.from_model(ergm(30, -2.0, TRIANGLE, 2.0))
        roots = solve_fixed_points(poly)
        assert len(roots) == dense_scan_roots(poly) == 3
        assert not roots[0].unique
        stable = [fp for fp in roots if fp.stable]
        assert len(stable) == 2  # outer roots stable, middle unstable

    def test_grid_validation(self):
        with pytest.raises(ValueError):
            solve_fixed_points(florentine_poly(), grid=32)


class TestIsingFixedPoint:
    def test_half_is_always_a_solution(self):
        m = IsingModel.complete(7, 1.9)
        p = ising_fixed_point(m)
        assert np.all(p == 0.5)
        assert ising_branch_residual(m, p) == 0.0

    def test_beta_zero_unique_half(self):
        m = IsingModel.complete(5, 0.0)
        p = ising_fixed_point(m, branch_search=True)
        assert np.allclose(p, 0.5, atol=1e-9)

    def test_iteration_limit_reports_residual(self):
        from gibbsbound.errors import NonConvergenceError
        m = IsingModel.complete(6, 3.0)
        with pytest.raises(NonConvergenceError) as err:
            ising_fixed_point(m, tol=1e-15, branch_search=True, max_iter=3)
        assert err.value.residual is not None
        assert err.value.residual > 0

    def test_low_temperature_branch(self):
        # complete neighborhoods with beta r / N = 2: magnetized branch
        N = 10
        beta = 2.0 * N / (N - 1)
        m = IsingModel.complete(N, beta)
        p = ising_fixed_point(m, tol=1e-13, branch_search=True)
        assert ising_branch_residual(m, p) <= 1e-10
        assert np.all(p > 0.5)
        # scalar bisection oracle for (2p-1) = tanh(2 beta (N-1)/N (2p-1))
        c = 2 * beta * (N - 1) / N
        lo, hi = 0.5 + 1e-9, 1.0
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if math.tanh(c * (2 * mid - 1)) - (2 * mid - 1) > 0:
                lo = mid
            else:
                hi = mid
        assert p[0] == pytest.approx(0.5 * (lo + hi), abs=1e-8)


class TestMeanFieldProduct:
    def test_ergm_constant_law(self):
        model = ergm(6, -1.0, TRIANGLE, 0.1)
        fp = solve_fixed_points(PhiPoly.from_model(model))[0]
        law = mean_field_product(model, fp)
        assert law.size == pair_count(6)
        assert np.allclose(law.p, fp.a_star)

    def test_ising_half_gives_uniform(self):
        m = IsingModel.complete(5, 0.7)
        law = mean_field_product(m, np.full(5, 0.5))
        assert np.all(law.p == 0.5)

    def test_florentine_reference_law(self):
        model = ergm(16, -1.6339, TWOSTAR, 0.0098)
        fp = solve_fixed_points(PhiPoly.from_model(model))[0]
        law = mean_field_product(model, fp)
        assert law.p[0] == pytest.approx(0.036743, abs=1e-6)

    def test_rejects_non_solution(self):
        model = ergm(6, -1.0, TRIANGLE, 0.1)
        with pytest.raises(ValueError):
            mean_field_product(model, 0.9)
        with pytest.raises(ValueError):
            mean_field_product(IsingModel.complete(4, 3.0), np.full(4, 0.9))

    def test_log_odds_identity(self):
        # any fixed point satisfies log(p/(1-p)) = E Delta_s L(Y), where
        # the expectation is linear for Ising and the limit 2 Phi(a) for ERGM
        model = ergm(9, -0.7, TRIANGLE, 0.2)
        poly = PhiPoly.from_model(model)
        for fp in solve_fixed_points(poly):
            a = fp.a_star
            assert math.log(a / (1 - a)) == pytest.approx(2 * poly.Phi(a), abs=1e-8)
        N = 8
        beta = 2.0 * N / (N - 1)
        ising = IsingModel.complete(N, beta)
        p = ising_fixed_point(ising, tol=1e-13, branch_search=True)
        for s in range(N):
            lhs = math.log(p[s] / (1 - p[s]))
            rhs = ising.delta_L(p, s)  # E Delta_s L is linear in the mean
            assert lhs == pytest.approx(rhs, abs=1e-8)


class TestFiniteSizeFixedPoints:
    def test_root_satisfies_exact_matching(self):
        # log-odds of the root equals the exact finite-n E Delta_s L
        model = ergm(5, -0.6, TRIANGLE, 0.2)
        fp = finite_n_fixed_points(model)[0]
        a = fp.a_star
        assert abs(finite_n_phi(model, a) - a) <= 1e-9
        assert math.log(a / (1 - a)) == pytest.approx(
            mean_delta_L_er(model, a), abs=1e-8)

    def test_distance_to_limit_root_shrinks_like_one_over_n(self):
        diffs = []
        for n in (10, 20, 40):
            model = ergm(n, -0.8, TRIANGLE, 0.15)
            lim = solve_fixed_points(PhiPoly.from_model(model))[0].a_star
            fin = finite_n_fixed_points(model)[0].a_star
            diffs.append(abs(lim - fin))
        assert diffs[0] > diffs[1] > diffs[2]
        assert diffs[1] / diffs[0] == pytest.approx(0.5, abs=0.15)
        assert diffs[2] / diffs[1] == pytest.approx(0.5, abs=0.15)

    def test_edge_only_roots_coincide(self):
        # no higher-order motifs, no finite-size correction
        model = ergm(7, 0.4)
        lim = solve_fixed_points(PhiPoly.from_model(model))[0].a_star
        fin = finite_n_fixed_points(model)[0].a_star
        assert fin == pytest.approx(lim, abs=1e-12)

    def test_product_law_accepts_finite_n_root(self):
        model = ergm(4, -0.4, TWOSTAR, 0.2)
        fp = finite_n_fixed_points(model)[0]
        law = mean_field_product(model, fp)
        assert law.p[0] == pytest.approx(fp.a_star)

    def test_derivative_matches_finite_differences(self):
        model = ergm(6, -0.5, TRIANGLE, 0.25)
        fp = finite_n_fixed_points(model)[0]
        h = 1e-6
        a = fp.a_star
        numeric = (finite_n_phi(model, a + h) - finite_n_phi(model, a - h)) / (2 * h)
        assert fp.phi_prime == pytest.approx(numeric, abs=1e-6)


class TestFiniteSizeDiagnostic:
    def test_gap_halves_when_n_doubles(self):
        # |E Delta L - 2 Phi| = O(1/n) on the triangle model
        b1, b2, a = -0.9, 0.3, 0.27
        gaps = []
        for n in (20, 40):
            model = ergm(n, b1, TRIANGLE, b2)
            poly = PhiPoly.from_model(model)
            gaps.append(abs(mean_delta_L_er(model, a) - 2 * poly.Phi(a)))
        assert gaps[1] == pytest.approx(gaps[0] / 2, rel=1e-9)

    def test_edge_term_has_no_gap(self):
        model = ergm(12, 0.8)
        poly = PhiPoly.from_model(model)
        assert mean_delta_L_er(model, 0.4) == pytest.approx(2 * poly.Phi(0.4))

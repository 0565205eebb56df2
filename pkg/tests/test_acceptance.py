"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s` to see every line.

The exact-inequality suites (criteria 3 and 9) enumerate all states of
small instances with an independent in-test implementation of the Gibbs
expectations (bit tricks + softmax, no library enumeration calls), so a
bound evaluator bug cannot cancel against an enumeration bug.

Criterion 3 evaluates the bounds at the finite-size update-map fixed
point, under which every step of the approximation argument is exact at
this n; the limit-map root drifts by O(1/n), which at n = 4, 5 pushes
many hypotheses-passing settings outside the stated inequality.  The
number of such limit-root violations is reported in the summary line.
"""

import math
import time

import numpy as np
import pytest

from gibbsbound.bounds import (
    bound_ising,
    bound_negbetas,
    bound_smallbetas,
    bound_triangle,
    bound_twostar,
    edge_density,
    matrix_pnorm,
    var_delta_t,
)
from gibbsbound.dynamics import (
    CouplingPair,
    contraction_rho,
    greedy_coupled_step,
    influence_matrix,
    influence_sum,
)
from gibbsbound.florentine import florentine_graph
from gibbsbound.graphs import (
    EDGE,
    TRIANGLE,
    TWOSTAR,
    LabeledGraph,
    delta_t,
    pair_count,
    pair_index_arrays,
)
from gibbsbound.harness import florentine_demo
from gibbsbound.meanfield import (
    PhiPoly,
    finite_n_fixed_points,
    solve_fixed_points,
)
from gibbsbound.models import (
    ErgmModel,
    IsingModel,
    ProductLaw,
    exact_distribution,
    stationary_from_kernel,
    transition_matrix,
)


def report(criterion, passed, detail):
    print(f"ACCEPTANCE {criterion}: {'PASS' if passed else 'FAIL'} — {detail}")


# ---------------------------------------------------------------------------
# independent enumeration machinery (bit tricks, no library calls)
# ---------------------------------------------------------------------------

_STATS_CACHE = {}


def graph_state_stats(n):
    """Per-state arrays (edge count, two-star count, triangle count)."""
    if n in _STATS_CACHE:
        return _STATS_CACHE[n]
    N = n * (n - 1) // 2
    states = ((np.arange(2**N)[:, None] >> np.arange(N)) & 1).astype(np.int64)
    I, J = pair_index_arrays(n)
    adj = np.zeros((2**N, n, n), dtype=np.int64)
    adj[:, I, J] = states
    adj[:, J, I] = states
    deg = adj.sum(axis=2)
    edges = states.sum(axis=1)
    twostar = (deg * (deg - 1)).sum(axis=1)
    tri = np.einsum("sij,sjk,ski->s", adj, adj, adj)
    _STATS_CACHE[n] = (edges, twostar, tri)
    return _STATS_CACHE[n]


def gibbs_side(n, motif, b1, b2):
    """(E edge-density, E triangle-hom-density) for edge+motif Gibbs law."""
    edges, twostar, tri = graph_state_stats(n)
    N = n * (n - 1) // 2
    second = twostar if motif is TWOSTAR else tri
    logw = b1 * 2.0 * edges + b2 * second / n
    w = np.exp(logw - logw.max())
    p = w / w.sum()
    return float(p @ (edges / N)), float(p @ (tri / n**3))


def reference_side(n, a):
    """The same two expectations under Erdos-Renyi(a), in closed form."""
    return a, n * (n - 1) * (n - 2) * a**3 / n**3


class TestCriterion1Florentine:
    def test_florentine_reproduction(self):
        t0 = time.perf_counter()
        rep = florentine_demo()
        elapsed = time.perf_counter() - t0
        ok = (abs(rep.a_star - 0.036743) <= 1e-6
              and abs(rep.displayed_value - 0.0817595) <= 1e-6
              and abs(rep.proposition_value - 0.0422) <= 5e-4
              and elapsed < 1.0)
        report(1, ok,
               f"a*={rep.a_star:.6f} displayed={rep.displayed_value:.7f} "
               f"proposition={rep.proposition_value:.4f} (flagged discrepancy) "
               f"runtime={elapsed:.3f}s")
        assert abs(rep.a_star - 0.036743) <= 1e-6
        assert abs(rep.displayed_value - 0.0817595) <= 1e-6
        assert abs(rep.proposition_value - 0.0422) <= 5e-4
        assert elapsed < 1.0


class TestCriterion2Fixture:
    def test_marriage_network_fixture(self):
        graph, _ = florentine_graph()
        from gibbsbound.graphs import injection_count
        count = injection_count(TWOSTAR, graph)
        ok = graph.n == 16 and graph.num_edges == 20 and count == 100
        report(2, ok,
               f"n={graph.n} edges={graph.num_edges} twostar_injections={count} "
               "(reference value 100; the canonical Padgett marriage data has "
               "47*2 = 94 — expected failure, see the review notes)")
        assert graph.n == 16
        assert graph.num_edges == 20
        # The canonical data's degree sequence gives sum d(d-1) = 94, not
        # the reference value 100; asserted as given, failing honestly
        # rather than altering a real historical dataset.
        assert count == 100


class TestCriterion3ExactInequality:
    def test_exact_inequality_suite(self):
        t0 = time.perf_counter()
        grids = {
            TWOSTAR: [-0.6, -0.3, -0.1, 0.1, 0.3, 0.6],
            TRIANGLE: [-0.3, -0.15, -0.05, 0.05, 0.15, 0.3],
        }
        b1_grid = [-1.5, -1.0, -0.5, 0.0, 0.5]
        settings = 0
        checks = 0
        worst_margin = math.inf
        limit_violations = 0
        failures = []
        for n in (4, 5):
            N = pair_count(n)
            for motif, b2_grid in grids.items():
                for b1 in b1_grid:
                    for b2 in b2_grid:
                        model = ErgmModel(n, [(EDGE, b1), (motif, b2)])
                        fp = finite_n_fixed_points(model)[0]
                        reports = [bound_negbetas(model, fp)]
                        if b2 > 0:
                            reports.append(bound_smallbetas(model, fp))
                        reports = [r for r in reports if r.hypotheses_ok]
                        assert reports, "grid must stay inside the hypotheses"
                        settings += 1
                        ghs = gibbs_side(n, motif, b1, b2)
                        refs = reference_side(n, fp.a_star)
                        norms = (1.0 / N, 2 * 3 * (n - 2) / n**3)
                        for rep in reports:
                            for gx, gz, dh, hname in zip(
                                    ghs, refs, norms,
                                    ("edge_density", "triangle_hom")):
                                gap = abs(gx - gz)
                                bound = rep.value * dh
                                checks += 1
                                if gap > bound:
                                    failures.append(
                                        (n, str(motif), b1, b2, rep.theorem,
                                         hname, gap, bound))
                                else:
                                    worst_margin = min(worst_margin,
                                                       bound - gap)
                        # the limit-map root, as displayed in the source:
                        # count (but do not assert) its violations
                        lim = solve_fixed_points(PhiPoly.from_model(model))[0]
                        lrep = bound_negbetas(model, lim)
                        lgx = gibbs_side(n, motif, b1, b2)
                        lrefs = reference_side(n, lim.a_star)
                        for gx, gz, dh in zip(lgx, lrefs, norms):
                            if abs(gx - gz) > lrep.value * dh:
                                limit_violations += 1
        elapsed = time.perf_counter() - t0
        ok = not failures and settings >= 50 and elapsed < 30.0
        report(3, ok,
               f"{settings} settings, {checks} exact checks, zero tolerance, "
               f"min slack {worst_margin:.2e}, runtime {elapsed:.1f}s "
               f"(finite-size root; the limit-root form violates "
               f"{limit_violations} checks at these sizes — see module docstring)")
        assert settings >= 50
        assert not failures, failures[:5]
        assert elapsed < 30.0


class TestCriterion4VarianceClosedForms:
    def variance_oracle(self, motif, n, a):
        N = pair_count(n)
        states = ((np.arange(2**N)[:, None] >> np.arange(N)) & 1).astype(np.uint8)
        w = np.prod(np.where(states == 1, a, 1 - a), axis=1)
        vals = np.array([delta_t(motif, LabeledGraph(n, row), 0)
                         for row in states], dtype=float)
        mean = w @ vals
        return float(w @ vals**2 - mean**2)

    def test_closed_forms_match_enumeration(self):
        rng = np.random.default_rng(17)
        worst = 0.0
        for n in (4, 5):
            for a in rng.uniform(0.02, 0.98, size=20):
                for motif, closed in ((TWOSTAR, 8 * (n - 2) * a * (1 - a)),
                                      (TRIANGLE, 36 * (n - 2) * a**2 * (1 - a**2))):
                    got, _ = var_delta_t(motif, n, a, mode="closed_form")
                    want = self.variance_oracle(motif, n, a)
                    assert got == pytest.approx(closed, rel=1e-12)
                    rel = abs(got - want) / want
                    worst = max(worst, rel)
        ok = worst <= 1e-10
        report(4, ok, f"closed forms vs enumeration, n in {{4,5}}, 20 random "
                      f"a values each, worst relative error {worst:.2e}")
        assert worst <= 1e-10


class TestCriterion5ReversibilityProductLaw:
    MODELS = [
        ErgmModel(4, [(EDGE, 0.4)]),
        ErgmModel(4, [(EDGE, -0.6), (TWOSTAR, 0.3)]),
        ErgmModel(4, [(EDGE, -0.2), (TWOSTAR, -0.4)]),
        ErgmModel(4, [(EDGE, 0.1), (TRIANGLE, 0.25)]),
        ErgmModel(4, [(EDGE, -0.3), (TRIANGLE, -0.2)]),
        ErgmModel(4, [(EDGE, -0.5), (TWOSTAR, 0.2), (TRIANGLE, 0.1)]),
        IsingModel.complete(6, 0.8),
        IsingModel.cycle(6, 1.5),
    ]

    def test_detailed_balance_and_stationarity(self):
        worst = 0.0
        for model in self.MODELS:
            N = model.size
            probs = exact_distribution(model)
            T = transition_matrix(model)
            for m in range(2**N):
                for s in range(N):
                    up = m | (1 << s)
                    if up == m:
                        continue
                    worst = max(worst, abs(probs[m] * T[m, up]
                                           - probs[up] * T[up, m]))
        b1 = 0.35
        k1 = ErgmModel(4, [(EDGE, b1)])
        pi = stationary_from_kernel(transition_matrix(k1))
        a = math.exp(2 * b1) / (1 + math.exp(2 * b1))
        product = exact_distribution(ProductLaw.constant(6, a))
        tv = 0.5 * float(np.abs(pi - product).sum())
        ok = worst <= 1e-12 and tv <= 1e-10
        report(5, ok, f"detailed-balance residual {worst:.2e} over "
                      f"{len(self.MODELS)} models; k=1 stationary-vs-product "
                      f"TV {tv:.2e}")
        assert worst <= 1e-12
        assert tv <= 1e-10


class TestCriterion6Contraction:
    def test_one_step_contraction_and_influence_cap(self):
        n, b1 = 20, -0.5
        N = pair_count(n)
        results = []
        for b2 in (0.5, -0.5):
            model = ErgmModel(n, [(EDGE, b1), (TWOSTAR, b2)])
            rho = contraction_rho(model)
            assert rho == pytest.approx((1 - 0.5) / N)
            rng = np.random.default_rng(2024)
            vals = []
            for _ in range(200):
                bits = (rng.random(N) < rng.random()).astype(np.uint8)
                s = int(rng.integers(N))
                pair = CouplingPair.adjacent(model, bits, s, rng=rng)
                greedy_coupled_step(model, pair)
                vals.append(pair.hamming())
            mean = float(np.mean(vals))
            se = float(np.std(vals, ddof=1) / math.sqrt(len(vals)))
            results.append((b2, mean, 1 - rho + 3 * se))
            assert mean <= 1 - rho + 3 * se
            # hard cap on the influence sums over random states
            cap = 0.5 * PhiPoly.from_model(model).Phi_abs_prime(1.0)
            rng2 = np.random.default_rng(7)
            worst = 0.0
            for _ in range(5000):
                bits = (rng2.random(N) < rng2.random()).astype(np.uint8)
                ij = int(rng2.integers(N))
                worst = max(worst, influence_sum(model, bits, ij))
            assert worst <= cap + 1e-9
        detail = "; ".join(f"b2={b2:+}: E d_H {m:.4f} <= {lim:.4f}"
                           for b2, m, lim in results)
        report(6, True, f"n=20 two-star, 200 adjacent pairs each sign, "
                        f"10^4 influence sums capped at |Phi|'(1)/2; {detail}")


class TestCriterion7InfluenceMatrix:
    def test_exact_below_analytic_and_B_norm(self):
        details = []
        for motif, b2 in ((TRIANGLE, 0.3), (TWOSTAR, -0.4)):
            model = ErgmModel(4, [(EDGE, -0.2), (motif, b2)])
            exact = influence_matrix(model, kind="exact")
            analytic = influence_matrix(model, kind="analytic")
            assert np.all(exact.entries <= analytic.entries + 1e-12)
            N = model.size
            B = analytic.B_matrix()
            for p in (1, math.inf):
                eps = 1 - analytic.norm(p)
                assert matrix_pnorm(B, p) == pytest.approx(1 - eps / N,
                                                           rel=1e-12)
            details.append(f"{motif}: max exact/analytic ratio "
                           f"{float((exact.entries / np.where(analytic.entries == 0, 1, analytic.entries)).max()):.3f}")
        report(7, True, "exact <= analytic entrywise on n=4 models; "
                        "||B||_p = 1 - eps/N verified; " + "; ".join(details))


class TestCriterion8HypothesisBoundaries:
    def test_flags_flip_exactly_at_published_thresholds(self):
        a = 0.3
        two_in = bound_twostar(10, 0.0, 1 - 1e-12, a)
        two_out = bound_twostar(10, 0.0, 1.0, a)
        tri_in = bound_triangle(10, 0.0, 1 / 3 - 1e-12, a)
        tri_out = bound_triangle(10, 0.0, 1 / 3, a)
        ok = (two_in.hypotheses_ok and not two_out.hypotheses_ok
              and tri_in.hypotheses_ok and not tri_out.hypotheses_ok)
        # negative side flips at the same magnitudes
        assert bound_twostar(10, 0.0, -(1 - 1e-12), a).hypotheses_ok
        assert not bound_twostar(10, 0.0, -1.0, a).hypotheses_ok
        assert bound_triangle(10, 0.0, -(1 / 3 - 1e-12), a).hypotheses_ok
        assert not bound_triangle(10, 0.0, -1 / 3, a).hypotheses_ok
        report(8, ok, "two-star flag flips exactly at |b2|=1, triangle at "
                      "|b2|=1/3, both signs")
        assert ok


class TestCriterion9IsingBound:
    def ising_exact_expectations(self, model, h_vals):
        N = model.n
        states = ((np.arange(2**N)[:, None] >> np.arange(N)) & 1).astype(float)
        spins = 2.0 * states - 1.0
        logw = np.zeros(2**N)
        for s, ns in enumerate(model.neighborhoods):
            for t in ns:
                logw += model.beta / N * spins[:, s] * spins[:, t]
        w = np.exp(logw - logw.max())
        p = w / w.sum()
        return [float(p @ hv) for hv in h_vals]

    def test_rho_cwbd_and_exact_inequality(self):
        rep = bound_ising(IsingModel.complete(4, 0.5))
        rho_ok = rep.constants["rho"] == pytest.approx(
            (1 - 3 * math.tanh(0.5 / 4)) / 4, rel=1e-12)
        val_ok = rep.value == pytest.approx(0.5 * math.sqrt(3) / (1 - 0.375),
                                            rel=1e-12)
        assert rho_ok and val_ok
        # exact-enumeration inequality on N = 6 instances
        N = 6
        states = ((np.arange(2**N)[:, None] >> np.arange(N)) & 1).astype(float)
        h_first = states[:, 0]
        h_pair = states[:, 0] * states[:, 1]
        h_mean = states.mean(axis=1)
        checks = 0
        worst_ratio = 0.0
        for builder in (IsingModel.complete, IsingModel.cycle):
            for beta in (0.1, 0.3, 0.5, 0.8, 1.1):
                model = builder(N, beta)
                rep = bound_ising(model)
                if not rep.hypotheses_ok:
                    continue
                exp = self.ising_exact_expectations(
                    model, (h_first, h_pair, h_mean))
                refs = (0.5, 0.25, 0.5)  # product Bernoulli(1/2)
                for got, want, dh in zip(exp, refs, (1.0, 1.0, 1.0 / N)):
                    gap = abs(got - want)
                    bound = rep.value * dh
                    checks += 1
                    assert gap <= bound
                    worst_ratio = max(worst_ratio,
                                      gap / bound if bound else 0.0)
        ok = rho_ok and val_ok and checks >= 20
        report(9, ok, f"rho and closed form reproduced; {checks} exact "
                      f"inequality checks on N=6, worst gap/bound "
                      f"{worst_ratio:.3f}")
        assert checks >= 20


class TestCriterion10VarianceScaling:
    def test_normalized_variance_halves_when_n_doubles(self):
        b1, b2 = -1.0, 0.1
        model20 = ErgmModel(20, [(EDGE, b1), (TRIANGLE, b2)])
        a = solve_fixed_points(PhiPoly.from_model(model20))[0].a_star
        vals = {}
        for n in (20, 40):
            raw, se = var_delta_t(TRIANGLE, n, a, mode="monte_carlo",
                                  samples=4000, seed=100 + n)
            vals[n] = raw / n**2  # normalized by the count denominator
        ratio = vals[40] / (0.5 * vals[20])
        ok = abs(ratio - 1.0) <= 0.25
        report(10, ok, f"normalized MC variance n=20 -> 40: halving ratio "
                       f"{ratio:.3f} (tolerance 25%)")
        assert abs(ratio - 1.0) <= 0.25

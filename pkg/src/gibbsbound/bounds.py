"""Evaluators for the explicit Wasserstein bounds and their hypotheses.

Every evaluator returns a BoundReport whose ``value`` is the bound with
the test-function factor ||Delta h|| left out (callers multiply it in);
that matches how the worked numeric examples are usually displayed.
When a hypothesis fails the report carries value = nan and
``hypotheses_ok = False`` rather than a silently wrong number.

Variance conventions: ``var_delta_t`` returns the variance of the
*unnormalized* single-edge difference Delta_{12} t(H, Z); the theorem
evaluators divide by the squared count normalization, while the
two-star/triangle closed-form bounds absorb the normalization into
their published 1/sqrt(n-2) factors.  Reports record which convention
produced each number.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, UnsupportedMotifError
from .graphs import LabeledGraph, Motif, delta_t, falling, pair_count
from .meanfield import FixedPoint, PhiPoly
from .models import ErgmModel, IsingModel, state_bits

__all__ = [
    "C2",
    "THEOREMS",
    "BoundReport",
    "TestFunction",
    "edge_density",
    "hom_density",
    "linear_function",
    "linear_from_csv",
    "delta_norm_hom",
    "var_delta_t",
    "bound_ising",
    "bound_key1",
    "bound_smallbetas",
    "bound_negbetas",
    "bound_twostar",
    "bound_triangle",
    "bound_general_pnorm",
    "matrix_pnorm",
    "expect_v_norm",
    "refined_contraction_factor",
    "check_hightemp",
    "HighTempReport",
]

#: maximum of the derivative of sech^2, appearing in the refined bounds
C2 = 4.0 / (3.0 * math.sqrt(3.0))

THEOREMS = ("key1", "ising_cwbd", "smallbetas", "negbetas",
            "twostar", "triangle", "key_pnorm")


@dataclass
class BoundReport:
    """A computed bound value with its hypothesis check and constants."""

    theorem: str
    value: float
    hypotheses_ok: bool
    constants: dict
    notes: tuple = ()

    def __post_init__(self):
        if self.theorem not in THEOREMS:
            raise ValueError(f"unknown theorem {self.theorem!r}")

    @property
    def applicable(self):
        return self.hypotheses_ok


def _not_applicable(theorem, constants, reason):
    return BoundReport(theorem, math.nan, False, constants, notes=(reason,))


# ---------------------------------------------------------------------------
# test functions
# ---------------------------------------------------------------------------

@dataclass
class TestFunction:
    """A function of the coordinates with its oscillation norms.

    ``delta_norm`` is sup_s ||Delta_s h||; ``coord_norms`` the vector of
    per-coordinate norms c_s when available.
    """

    kind: str
    delta_norm: float
    fn: object
    coord_norms: np.ndarray = None
    motif: Motif = None
    label: str = ""

    def __post_init__(self):
        if self.coord_norms is not None and len(self.coord_norms):
            if self.delta_norm < float(np.max(self.coord_norms)) - 1e-15:
                raise ValueError("delta_norm must dominate coordinate norms")

    def __call__(self, bits):
        return self.fn(bits)


def edge_density(N):
    """Mean coordinate value; for graphs, edges / C(n,2)."""
    c = np.full(N, 1.0 / N)
    return TestFunction(kind="edge_density", delta_norm=1.0 / N,
                        fn=lambda bits: float(np.mean(bits)),
                        coord_norms=c, label="edge_density")


def delta_norm_hom(motif, n):
    """Exact sup-norm of Delta_s for the homomorphism density t(H,x)/n^v.

    Adding an edge never decreases injections, so the maximum of
    delta_t over states is attained at the complete graph, where it is
    2 e_H (n-2)(n-3)...(n-v_H+1).
    """
    if motif.v > n:
        raise ValueError("motif larger than host graph")
    return 2 * motif.e * falling(n - 2, motif.v - 2) / n ** motif.v


def hom_density(motif, n):
    """Homomorphism density h(x) = t(H, x) n^{-v_H} as a test function."""
    from .graphs import injection_count
    nrm = delta_norm_hom(motif, n)
    N = pair_count(n)

    def fn(bits):
        return injection_count(motif, LabeledGraph(n, bits)) / n ** motif.v

    return TestFunction(kind="hom_density", delta_norm=nrm, fn=fn,
                        coord_norms=np.full(N, nrm), motif=motif,
                        label=f"hom_density({motif})")


def linear_function(coeffs, label="linear"):
    """h(x) = sum_s coeffs[s] x_s with c_s = |coeffs[s]|."""
    coeffs = np.asarray(coeffs, dtype=float)
    c = np.abs(coeffs)
    return TestFunction(kind="custom", delta_norm=float(c.max(initial=0.0)),
                        fn=lambda bits: float(np.dot(coeffs, bits)),
                        coord_norms=c, label=label)


def linear_from_csv(path, N):
    """Linear test function from CSV rows "coordinate,coefficient".

    Unlisted coordinates get coefficient zero; indices must lie in
    [0, N).  A header row is allowed and skipped.
    """
    import csv as _csv
    coeffs = np.zeros(N)
    with open(path, "r", encoding="utf-8", newline="") as fh:
        for row in _csv.reader(fh):
            if not row or row[0].strip().startswith("#"):
                continue
            try:
                idx = int(row[0])
            except ValueError:
                continue  # header
            if not 0 <= idx < N:
                raise ValueError(f"coordinate {idx} out of range [0, {N})")
            coeffs[idx] = float(row[1])
    return linear_function(coeffs, label=f"linear_csv({path})")


# ---------------------------------------------------------------------------
# variance of the single-edge difference under Erdos-Renyi
# ---------------------------------------------------------------------------

def _motif_shape(motif):
    if motif.v == 3 and motif.e == 2:
        return "twostar"
    if motif.v == 3 and motif.e == 3:
        return "triangle"
    if motif.v == 2 and motif.e == 1:
        return "edge"
    return None


@functools.lru_cache(maxsize=64)
def _delta_profile(motif, n):
    """delta_t(H, x, (0,1)) for every state of the n-vertex graph."""
    N = pair_count(n)
    if N > 20:
        raise CapacityError(f"exact enumeration refused for C({n},2)={N} > 20 bits")
    return np.array([delta_t(motif, LabeledGraph.from_int(n, m), 0)
                     for m in range(2**N)], dtype=float)


def var_delta_t(motif, n, a, mode="closed_form", samples=200_000, seed=None):
    """Variance of the unnormalized Delta_{12} t(H, Z), Z ~ ER(a).

    Returns (value, standard_error); the error is zero for the two
    deterministic modes.  Closed forms exist for the two-star, where
    half the difference is a sum of two independent Bin(n-2, a), and
    the triangle, where a sixth of it is Bin(n-2, a^2):

        two-star:  8 (n-2) a (1-a)
        triangle: 36 (n-2) a^2 (1 - a^2)
    """
    if not 0.0 <= a <= 1.0:
        raise ValueError("a must lie in [0,1]")
    shape = _motif_shape(motif)
    if mode == "closed_form":
        if shape == "edge":
            return 0.0, 0.0
        if shape == "twostar":
            return 8.0 * (n - 2) * a * (1 - a), 0.0
        if shape == "triangle":
            return 36.0 * (n - 2) * a**2 * (1 - a**2), 0.0
        raise UnsupportedMotifError(
            f"no closed-form variance for motif {motif}")
    if mode == "exact_enum":
        N = pair_count(n)
        if N > 20:
            raise CapacityError("exact_enum variance limited to C(n,2) <= 20")
        deltas = _delta_profile(motif, n)
        mean = 0.0
        second = 0.0
        chunk = 1 << min(N, 16)
        for start in range(0, 2**N, chunk):
            idx = np.arange(start, min(start + chunk, 2**N))
            bits = (idx[:, None] >> np.arange(N)) & 1
            w = np.prod(np.where(bits == 1, a, 1.0 - a), axis=1)
            d = deltas[idx]
            mean += float(w @ d)
            second += float(w @ d**2)
        return max(second - mean**2, 0.0), 0.0
    if mode == "monte_carlo":
        rng = np.random.default_rng(seed)
        N = pair_count(n)
        vals = np.empty(samples)
        chunk = max(1, min(samples, 4096))
        done = 0
        while done < samples:
            take = min(chunk, samples - done)
            draws = (rng.random((take, N)) < a).astype(np.uint8)
            for k in range(take):
                vals[done + k] = delta_t(motif, LabeledGraph(n, draws[k]), 0)
            done += take
        var = float(np.var(vals, ddof=1))
        centered = vals - vals.mean()
        m4 = float(np.mean(centered**4))
        se = math.sqrt(max(m4 - var**2, 0.0) / samples)
        return var, se
    raise ValueError(f"unknown mode {mode!r}")


def _normalized_stds(model, a, mode="auto", seed=None):
    """sqrt Var(Delta_12 t_ell(Z)) for ell >= 2, with the count normalization."""
    out = []
    for (motif, _beta) in model.terms[1:]:
        denom = falling(model.n, motif.v - 2)
        if mode == "auto":
            use = "closed_form" if _motif_shape(motif) else "exact_enum"
        else:
            use = mode
        raw, se = var_delta_t(motif, model.n, a, mode=use, seed=seed)
        out.append((math.sqrt(raw) / denom, se, use))
    return out


# ---------------------------------------------------------------------------
# Ising bound
# ---------------------------------------------------------------------------

def bound_ising(model):
    """Closed-form bound beta sqrt(r) / (1 - beta r / N) for the Ising model.

    The contraction constant is rho = (1 - r tanh(beta/N)) / N.  Two
    regime readings are recorded in the constants: the conservative
    beta < r/N and the weaker beta r/N < 1 that the denominator itself
    requires; the hypothesis flag follows the denominator.
    """
    N = model.n
    r = model.r
    beta = model.beta
    denom = 1.0 - beta * r / N
    constants = {
        "r": float(r),
        "N": float(N),
        "beta": beta,
        "denominator": denom,
        "rho": (1.0 - r * math.tanh(beta / N)) / N,
        "regime_stated_beta_lt_r_over_N": float(0.0 <= beta < r / N),
        "regime_denominator_beta_lt_N_over_r": float(0.0 <= beta < N / r),
    }
    if beta < 0:
        return _not_applicable("ising_cwbd", constants, "beta must be nonnegative")
    if denom <= 0:
        return _not_applicable("ising_cwbd", constants,
                               "contraction denominator 1 - beta r / N not positive")
    value = beta * math.sqrt(r) / denom
    return BoundReport("ising_cwbd", value, True, constants)


# ---------------------------------------------------------------------------
# general one-norm bound (the simplified theorem, with a supplied rho)
# ---------------------------------------------------------------------------

def _poisson_binomial_abs_moment(ps):
    """E|S - ES| for S a sum of independent Bernoulli(ps)."""
    pmf = np.array([1.0])
    for p in ps:
        nxt = np.zeros(len(pmf) + 1)
        nxt[:-1] += pmf * (1 - p)
        nxt[1:] += pmf * p
        pmf = nxt
    mu = float(np.dot(np.arange(len(pmf)), pmf))
    return float(np.dot(np.abs(np.arange(len(pmf)) - mu), pmf))


def _binomial_abs_moment(m, p):
    return _poisson_binomial_abs_moment([p] * m)


def mean_abs_delta_L(model, law, mode="exact", samples=100_000, seed=None):
    """sum_s E|Delta_s L(Y) - E Delta_s L(Y)| under the product law Y.

    Exact paths cover the Ising model (Poisson-binomial neighbor sums)
    and two-term ERGMs whose second motif is the two-star or triangle
    (single binomials, valid for a constant law).  The Monte Carlo path
    handles a constant law on any ERGM through edge exchangeability.
    """
    if isinstance(model, IsingModel):
        if mode != "exact":
            raise ValueError("the Ising path is exact; no sampling needed")
        total = 0.0
        for s, ns in enumerate(model.neighborhoods):
            moment = _poisson_binomial_abs_moment([law.p[t] for t in ns])
            total += 8.0 * abs(model.beta) / model.n * moment
        return total, 0.0
    if not isinstance(model, ErgmModel):
        raise TypeError("expected an IsingModel or ErgmModel")
    a = float(law.p[0])
    if not np.allclose(law.p, a):
        raise ValueError("ERGM paths assume a constant product law")
    N = model.size
    n = model.n
    if mode == "exact":
        if len(model.terms) == 1:
            return 0.0, 0.0
        if len(model.terms) == 2:
            motif, b2 = model.terms[1]
            shape = _motif_shape(motif)
            if shape == "twostar":
                return N * 2.0 * abs(b2) / n * _binomial_abs_moment(2 * (n - 2), a), 0.0
            if shape == "triangle":
                return N * 6.0 * abs(b2) / n * _binomial_abs_moment(n - 2, a**2), 0.0
        raise UnsupportedMotifError(
            "no exact absolute-moment path for this model; use mode='mc'")
    if mode == "mc":
        rng = np.random.default_rng(seed)
        mu = sum(b * 2 * m.e * falling(n - 2, m.v - 2) * a ** (m.e - 1)
                 / falling(n, m.v - 2) for m, b in model.terms)
        vals = np.empty(samples)
        for k in range(samples):
            bits = (rng.random(N) < a).astype(np.uint8)
            vals[k] = model.delta_L(LabeledGraph(n, bits), 0)
        dev = np.abs(vals - mu)
        return N * float(dev.mean()), N * float(dev.std(ddof=1) / math.sqrt(samples))
    raise ValueError(f"unknown mode {mode!r}")


def bound_key1(model, law, rho, mode="exact", samples=100_000, seed=None):
    """The simplified master bound (1 / (4 N rho)) sum_s E|Delta_s L(Y) - E...|.

    ``rho`` is the one-step path-coupling contraction coefficient; the
    law must satisfy the mean-field matching for the bound to apply,
    which is the caller's responsibility here.
    """
    N = model.size if hasattr(model, "size") else model.n
    constants = {"rho": rho, "N": float(N)}
    if rho <= 0:
        return _not_applicable("key1", constants, "rho must be positive")
    total, se = mean_abs_delta_L(model, law, mode=mode, samples=samples, seed=seed)
    value = total / (4.0 * N * rho)
    constants["sum_abs_moment"] = total
    constants["moment_se"] = se
    constants["value_se"] = se / (4.0 * N * rho)
    return BoundReport("key1", value, True, constants)


# ---------------------------------------------------------------------------
# ERGM bounds
# ---------------------------------------------------------------------------

def _variance_sum(model, a, weights, mode, seed):
    """sum over ell >= 2 of weights_ell * sqrt(Var Delta_12 t_ell(Z))."""
    stds = _normalized_stds(model, a, mode=mode, seed=seed)
    total = 0.0
    labels = []
    for w, (std, _se, used) in zip(weights, stds):
        total += w * std
        labels.append(used)
    return total, labels


def bound_smallbetas(model, fp, variance_mode="auto", seed=None):
    """Positive-coefficient bound C(n,2) (4 gamma)^{-1} sum beta_ell sqrt(Var).

    gamma = 1 - min(alpha_1, alpha_2) with

      alpha_1 = (Phi'(a*) + A* Phi''(1)) / 2
      alpha_2 = phi'(a*) + [C2 (A* + 1/n) Phi'(1) (Phi'(a*) + A* Phi'(1))
                            + A* Phi''(1) sech^2(Phi(a*))] / 2

    and A* = max(a*, 1 - a*).  Requires beta_ell > 0 for ell >= 2.
    """
    poly = PhiPoly.from_model(model)
    n = model.n
    a = fp.a_star if isinstance(fp, FixedPoint) else float(fp)
    A = max(a, 1.0 - a)
    sech2 = 1.0 / math.cosh(poly.Phi(a)) ** 2
    alpha1 = 0.5 * (poly.Phi_prime(a) + A * poly.Phi_second(1.0))
    alpha2 = poly.phi_prime(a) + 0.5 * (
        C2 * (A + 1.0 / n) * poly.Phi_prime(1.0)
        * (poly.Phi_prime(a) + A * poly.Phi_prime(1.0))
        + A * poly.Phi_second(1.0) * sech2)
    gamma = 1.0 - min(alpha1, alpha2)
    constants = {"a_star": a, "A_star": A, "alpha1": alpha1, "alpha2": alpha2,
                 "gamma": gamma, "C2": C2, "phi_prime": poly.phi_prime(a)}
    if any(b <= 0 for _, b in model.terms[1:]):
        return _not_applicable("smallbetas", constants,
                               "requires beta_ell > 0 for every ell >= 2")
    if gamma <= 0:
        return _not_applicable("smallbetas", constants, "gamma is not positive")
    weights = [b for _, b in model.terms[1:]]
    total, modes = _variance_sum(model, a, weights, variance_mode, seed)
    value = pair_count(n) / (4.0 * gamma) * total
    constants["variance_convention"] = "normalized Delta_12 t_ell"
    return BoundReport("smallbetas", value, True, constants,
                       notes=tuple(f"variance[{k}]={m}" for k, m in enumerate(modes)))


def bound_negbetas(model, fp, variance_mode="auto", seed=None):
    """Absolute-coefficient bound with condition |Phi|'(1) < 2.

    value = C(n,2) (4 (1 - |Phi|'(1)/2))^{-1} sum |beta_ell| sqrt(Var).
    """
    poly = PhiPoly.from_model(model)
    a = fp.a_star if isinstance(fp, FixedPoint) else float(fp)
    half_slope = 0.5 * poly.Phi_abs_prime(1.0)
    constants = {"a_star": a, "abs_phi_prime_1": poly.Phi_abs_prime(1.0),
                 "half_slope": half_slope}
    if half_slope >= 1.0:
        return _not_applicable("negbetas", constants, "|Phi|'(1) must be < 2")
    weights = [abs(b) for _, b in model.terms[1:]]
    total, modes = _variance_sum(model, a, weights, variance_mode, seed)
    value = pair_count(model.n) / (4.0 * (1.0 - half_slope)) * total
    constants["variance_convention"] = "normalized Delta_12 t_ell"
    return BoundReport("negbetas", value, True, constants,
                       notes=tuple(f"variance[{k}]={m}" for k, m in enumerate(modes)))


def bound_twostar(n, beta1, beta2, fp):
    """Two-star closed form C(n,2)(4(1-|b2|))^{-1} sqrt(8 a*(1-a*)) |b2| / sqrt(n-2)."""
    a = fp.a_star if isinstance(fp, FixedPoint) else float(fp)
    constants = {"a_star": a, "beta1": beta1, "beta2": beta2,
                 "abs_phi_prime_1": 2.0 * abs(beta2)}
    if abs(beta2) >= 1.0:
        return _not_applicable("twostar", constants, "requires |beta2| < 1")
    value = (pair_count(n) / (4.0 * (1.0 - abs(beta2)))
             * math.sqrt(8.0 * a * (1.0 - a)) * abs(beta2) / math.sqrt(n - 2))
    constants["variance_convention"] = "unnormalized, 1/sqrt(n-2) absorbed"
    return BoundReport("twostar", value, True, constants)


def bound_triangle(n, beta1, beta2, fp):
    """Triangle closed form C(n,2)(4(1-3|b2|))^{-1} 6 a* sqrt(1-a*^2) |b2| / sqrt(n-2)."""
    a = fp.a_star if isinstance(fp, FixedPoint) else float(fp)
    constants = {"a_star": a, "beta1": beta1, "beta2": beta2,
                 "abs_phi_prime_1": 6.0 * abs(beta2)}
    if abs(beta2) >= 1.0 / 3.0:
        return _not_applicable("triangle", constants, "requires |beta2| < 1/3")
    value = (pair_count(n) / (4.0 * (1.0 - 3.0 * abs(beta2)))
             * 6.0 * a * math.sqrt(1.0 - a * a) * abs(beta2) / math.sqrt(n - 2))
    constants["variance_convention"] = "unnormalized, 1/sqrt(n-2) absorbed"
    return BoundReport("triangle", value, True, constants)


# ---------------------------------------------------------------------------
# general p-norm bound from a dominating influence matrix
# ---------------------------------------------------------------------------

def matrix_pnorm(R, p):
    """Operator p-norm for p in {1, 2, inf}.

    p=1 is the max column sum, p=inf the max row sum; p=2 runs power
    iteration on R^T R to 1e-10 relative convergence.
    """
    R = np.asarray(R, dtype=float)
    if p == 1:
        return float(np.abs(R).sum(axis=0).max())
    if p in (math.inf, np.inf, "inf"):
        return float(np.abs(R).sum(axis=1).max())
    if p == 2:
        M = R.T @ R
        v = np.ones(M.shape[0]) / math.sqrt(M.shape[0])
        lam = 0.0
        for _ in range(100_000):
            w = M @ v
            norm = float(np.linalg.norm(w))
            if norm == 0.0:
                return 0.0
            v = w / norm
            if abs(norm - lam) <= 1e-10 * max(1.0, norm):
                return math.sqrt(norm)
            lam = norm
        return math.sqrt(lam)
    raise ValueError("only p in {1, 2, inf} is supported")


def _dual(p):
    if p == 1:
        return math.inf
    if p in (math.inf, np.inf, "inf"):
        return 1
    return 2  # p = 2 is self-dual


def _vector_pnorm(v, p):
    if p == 1:
        return float(np.abs(v).sum())
    if p in (math.inf, np.inf, "inf"):
        return float(np.abs(v).max(initial=0.0))
    return float(np.sqrt(np.sum(v * v)))


def expect_v_norm(model, law, p, method="exact", samples=100_000, seed=None):
    """E || v(Y) ||_p with v_s(y) = |q_X(y^{(s,1)}|y) - p_s|, Y ~ law.

    Exact enumeration for small coordinate counts; otherwise Monte
    Carlo over a shared sample of Y draws, with a CLT standard error.
    """
    N = model.size
    if method == "exact":
        if N > 16:
            raise CapacityError("exact expectation limited to N <= 16")
        total = 0.0
        for m in range(2**N):
            bits = state_bits(m, N)
            w = float(np.prod(np.where(bits == 1, law.p, 1 - law.p)))
            if w == 0.0:
                continue
            v = np.array([abs(model.conditional(bits, s) - law.p[s])
                          for s in range(N)])
            total += w * _vector_pnorm(v, p)
        return total, 0.0
    if method == "mc":
        rng = np.random.default_rng(seed)
        vals = np.empty(samples)
        for k in range(samples):
            bits = law.sample(rng)
            v = np.array([abs(model.conditional(bits, s) - law.p[s])
                          for s in range(N)])
            vals[k] = _vector_pnorm(v, p)
        return float(vals.mean()), float(vals.std(ddof=1) / math.sqrt(samples))
    raise ValueError(f"unknown method {method!r}")


def bound_general_pnorm(model, law, R, p=1, c=None, v_expectation=None,
                        v_se=0.0, method="exact", samples=100_000, seed=None):
    """Influence-matrix bound eps^{-1} ||c||_q E||v(Y)||_p, q dual to p.

    R must entrywise dominate the Glauber influence matrix of the model
    (the caller certifies this, typically via dynamics.influence_matrix)
    and have ||R||_p = 1 - eps < 1.  ``c`` holds the per-coordinate
    norms of the test function (defaults to all ones); the expectation
    may be supplied or is computed by ``expect_v_norm``.
    """
    R = np.asarray(R, dtype=float)
    norm = matrix_pnorm(R, p)
    eps = 1.0 - norm
    q = _dual(p)
    constants = {"p": float(p) if p not in (math.inf, "inf") else math.inf,
                 "norm_R_p": norm, "eps": eps}
    if eps <= 0:
        return _not_applicable("key_pnorm", constants, "||R||_p must be < 1")
    if c is None:
        c = np.ones(model.size)
    cnorm = _vector_pnorm(np.asarray(c, dtype=float), q)
    if v_expectation is None:
        v_expectation, v_se = expect_v_norm(model, law, p, method=method,
                                            samples=samples, seed=seed)
    value = cnorm * v_expectation / eps
    constants.update({"c_norm_q": cnorm, "v_expectation": v_expectation,
                      "v_se": v_se, "value_se": cnorm * v_se / eps})
    return BoundReport("key_pnorm", value, True, constants)


# ---------------------------------------------------------------------------
# high-temperature hypothesis check and the refined contraction factor
# ---------------------------------------------------------------------------

def refined_contraction_factor(poly, a_star, eps, n):
    """The clipped contraction factor of the positive-coefficient refinement.

    (Phi'(a*) + eps Phi''(1)) / 2 * min(1, sech^2(Phi(a*))
                                          + C2 (eps + 1/n) Phi'(1)).
    """
    sech2 = 1.0 / math.cosh(poly.Phi(a_star)) ** 2
    clip = min(1.0, sech2 + C2 * (eps + 1.0 / n) * poly.Phi_prime(1.0))
    return 0.5 * (poly.Phi_prime(a_star) + eps * poly.Phi_second(1.0)) * clip


@dataclass
class HighTempReport:
    """Verdict on the unique-stable-fixed-point hypothesis plus diagnostics."""

    hypothesis_ok: bool
    positivity_ok: bool
    n_roots: int
    n_stable: int
    a_star: float
    eps_max: float
    factor_at_zero: float


def check_hightemp(model, roots):
    """Check for a unique root of phi(a)=a with phi'(a)<1, plus the
    epsilon-region diagnostic: the largest eps for which the refined
    contraction factor stays below one (found by bisection; the factor
    is nondecreasing in eps)."""
    poly = PhiPoly.from_model(model)
    positivity = all(b > 0 for _, b in model.terms[1:])
    stable = [fp for fp in roots if fp.stable]
    ok = positivity and len(stable) == 1
    if not stable:
        return HighTempReport(False, positivity, len(roots), 0,
                              math.nan, 0.0, math.nan)
    a = stable[0].a_star
    f0 = refined_contraction_factor(poly, a, 0.0, model.n)
    if f0 >= 1.0:
        eps_max = 0.0
    elif refined_contraction_factor(poly, a, 1.0, model.n) < 1.0:
        eps_max = 1.0
    else:
        lo, hi = 0.0, 1.0
        for _ in range(100):
            mid = 0.5 * (lo + hi)
            if refined_contraction_factor(poly, a, mid, model.n) < 1.0:
                lo = mid
            else:
                hi = mid
        eps_max = lo
    return HighTempReport(ok, positivity, len(roots), len(stable), a,
                          eps_max, f0)

"""Mean-field fixed points for ERGM and Ising models.

For an ERGM with terms (H_ell, beta_ell) the key scalar functions are

    Phi(a)  = sum_ell beta_ell e_ell a^(e_ell - 1)
    phi(a)  = (1 + tanh(Phi(a))) / 2
    |Phi|(a) = sum_ell |beta_ell| e_ell a^(e_ell - 1)

Solutions of phi(a) = a are the Erdos-Renyi parameters matching the
Glauber update probabilities in expectation; a root with phi'(a) < 1 is
a stable (locally maximizing) one.  The Ising analogue is the vector
system (2 p_s - 1) = tanh((2 beta / N) sum_{t in nbrs[s]} (2 p_t - 1)),
which always admits p = 1/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NonConvergenceError
from .models import ErgmModel, IsingModel, ProductLaw

__all__ = [
    "PhiPoly",
    "FixedPoint",
    "phi",
    "solve_fixed_points",
    "finite_n_phi",
    "finite_n_fixed_points",
    "ising_fixed_point",
    "ising_branch_residual",
    "mean_field_product",
    "mean_delta_L_er",
]


@dataclass(frozen=True)
class PhiPoly:
    """The polynomial data (beta_ell, e_ell) driving Phi and phi."""

    coefficients: tuple  # of (beta, e) pairs

    @classmethod
    def from_model(cls, model):
        return cls(tuple((b, m.e) for m, b in model.terms))

    def Phi(self, a):
        return sum(b * e * a ** (e - 1) for b, e in self.coefficients)

    def Phi_prime(self, a):
        return sum(b * e * (e - 1) * a ** (e - 2)
                   for b, e in self.coefficients if e >= 2)

    def Phi_second(self, a):
        return sum(b * e * (e - 1) * (e - 2) * a ** (e - 3)
                   for b, e in self.coefficients if e >= 3)

    def Phi_abs(self, a):
        return sum(abs(b) * e * a ** (e - 1) for b, e in self.coefficients)

    def Phi_abs_prime(self, a):
        return sum(abs(b) * e * (e - 1) * a ** (e - 2)
                   for b, e in self.coefficients if e >= 2)

    def phi(self, a):
        if not 0.0 <= a <= 1.0:
            raise ValueError(f"a={a} outside [0,1]")
        return 0.5 * (1.0 + math.tanh(self.Phi(a)))

    def phi_prime(self, a):
        sech2 = 1.0 / math.cosh(self.Phi(a)) ** 2
        return 0.5 * sech2 * self.Phi_prime(a)


def phi(poly, a):
    """phi(a) = (1 + tanh(Phi(a))) / 2, strictly inside (0, 1)."""
    return poly.phi(a)


@dataclass(frozen=True)
class FixedPoint:
    """A root of phi(a) = a with its stability classification.

    ``stable`` means phi'(a*) < 1 strictly; a root with phi'(a*) = 1 up
    to the marginal tolerance is flagged ``marginal`` and reported
    unstable, since the bounds all need the strict inequality.
    """

    a_star: float
    phi_prime: float
    stable: bool
    unique: bool
    marginal: bool = False

    @property
    def A_star(self):
        return max(self.a_star, 1.0 - self.a_star)


_MARGINAL_TOL = 1e-8


def _scan_fixed_points(phi_fn, dphi_fn, grid, tol):
    """Grid scan plus bisection for roots of phi(a) = a on [0, 1]."""
    if grid < 64:
        raise ValueError("grid must be at least 64")
    if tol <= 0:
        raise ValueError("tol must be positive")
    xs = np.linspace(0.0, 1.0, grid + 1)
    g = np.array([phi_fn(a) - a for a in xs])
    roots = []
    for k in range(grid):
        lo, hi = xs[k], xs[k + 1]
        glo, ghi = g[k], g[k + 1]
        if glo == 0.0:
            roots.append(lo)
            continue
        if glo * ghi < 0.0:
            flo = glo
            mid = 0.5 * (lo + hi)
            for _ in range(200):
                mid = 0.5 * (lo + hi)
                fm = phi_fn(mid) - mid
                if abs(fm) <= tol or hi - lo <= 1e-16:
                    break
                if flo * fm < 0:
                    hi = mid
                else:
                    lo, flo = mid, fm
            roots.append(mid)
    if abs(g[-1]) <= tol:
        roots.append(1.0)
    # dedupe near-coincident roots from adjacent cells
    deduped = []
    for r in sorted(roots):
        if not deduped or r - deduped[-1] > 1e-9:
            deduped.append(r)
    unique = len(deduped) == 1
    out = []
    for r in deduped:
        dp = dphi_fn(r)
        marginal = abs(dp - 1.0) <= _MARGINAL_TOL
        out.append(FixedPoint(a_star=r, phi_prime=dp,
                              stable=(dp < 1.0 and not marginal),
                              unique=unique, marginal=marginal))
    return out


def solve_fixed_points(poly, grid=4096, tol=1e-12):
    """All roots of phi(a) = a found by a uniform scan plus bisection.

    phi maps [0,1] into (0,1), so phi(a) - a is positive at 0 and
    negative at 1 and at least one root always exists.  Every sign
    change on the grid is refined by bisection to |phi(a) - a| <= tol;
    phi' at each root is evaluated analytically.
    """
    return _scan_fixed_points(poly.phi, poly.phi_prime, grid, tol)


def finite_n_phi(model, a):
    """The finite-size update map (1 + tanh(E Delta_s L(Z_a) / 2)) / 2.

    Unlike the limit map, which replaces the exact expectation by
    2 Phi(a), this one keeps the falling-factorial ratios, so its fixed
    point satisfies the product-law matching condition exactly at this
    n.  The two maps differ by O(1/n).
    """
    return 0.5 * (1.0 + math.tanh(0.5 * mean_delta_L_er(model, a)))


def _finite_n_phi_prime(model, a):
    from .graphs import falling
    n = model.n
    mean = mean_delta_L_er(model, a)
    slope = sum(beta * 2 * m.e * (m.e - 1) * falling(n - 2, m.v - 2)
                / falling(n, m.v - 2) * a ** max(m.e - 2, 0)
                for m, beta in model.terms if m.e >= 2)
    return 0.25 / math.cosh(0.5 * mean) ** 2 * slope


def finite_n_fixed_points(model, grid=4096, tol=1e-12):
    """Roots of the finite-size map finite_n_phi(model, a) = a.

    At these roots every step of the master approximation argument is
    exact at this n, so the displayed bounds hold with no asymptotic
    slack; the limit-map roots drift by O(1/n) and can leave small
    instances outside the stated inequality.
    """
    return _scan_fixed_points(lambda a: finite_n_phi(model, a),
                              lambda a: _finite_n_phi_prime(model, a),
                              grid, tol)


def _ising_map(model, p):
    out = np.empty_like(p)
    for s, ns in enumerate(model.neighborhoods):
        field = sum(2.0 * p[t] - 1.0 for t in ns)
        out[s] = 0.5 * (1.0 + math.tanh(2.0 * model.beta / model.n * field))
    return out


def ising_branch_residual(model, p):
    """Max-norm residual of the Ising fixed-point system at p."""
    return float(np.max(np.abs(_ising_map(model, p) - p)))


def ising_fixed_point(model, tol=1e-12, branch_search=False, start=None,
                      damping=0.5, max_iter=20000):
    """Solve the Ising mean-field system by damped fixed-point iteration.

    p = 1/2 everywhere is always a solution and is returned immediately
    unless ``branch_search`` asks for a nontrivial branch, in which case
    the iteration p <- (1 - lam) p + lam T(p) starts from ``start``
    (default 0.9 everywhere).  Plain iteration can oscillate at large
    beta; the damping suppresses that.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    n = model.n
    if not branch_search:
        return np.full(n, 0.5)
    p = np.full(n, 0.9) if start is None else np.asarray(start, dtype=float).copy()
    for _ in range(max_iter):
        nxt = (1.0 - damping) * p + damping * _ising_map(model, p)
        if np.max(np.abs(nxt - p)) <= tol:
            p = nxt
            break
        p = nxt
    else:
        raise NonConvergenceError(
            f"Ising fixed-point iteration did not converge within {max_iter} steps",
            residual=ising_branch_residual(model, p))
    return p


def mean_field_product(model, solution, tol=1e-8):
    """Reference product law from a mean-field solution.

    For an ERGM, ``solution`` is a FixedPoint or a scalar a* and the law
    is Erdos-Renyi(a*); for an Ising model it is the vector p solving
    the displayed system.  Inputs whose residual exceeds ``tol`` are
    rejected rather than silently accepted.
    """
    if isinstance(model, ErgmModel):
        a = solution.a_star if isinstance(solution, FixedPoint) else float(solution)
        poly = PhiPoly.from_model(model)
        resid = min(abs(poly.phi(a) - a), abs(finite_n_phi(model, a) - a))
        if resid > tol:
            raise ValueError(f"a={a} is not a fixed point (residual {resid:.3g})")
        return ProductLaw.constant(model.size, a)
    if isinstance(model, IsingModel):
        p = np.asarray(solution, dtype=float)
        resid = ising_branch_residual(model, p)
        if resid > tol:
            raise ValueError(f"p is not a mean-field solution (residual {resid:.3g})")
        return ProductLaw(p)
    raise TypeError(f"no mean-field product law for {type(model).__name__}")


def mean_delta_L_er(model, a):
    """Exact E Delta_s L(Z) for Z ~ Erdos-Renyi(a) at finite n.

    For each term, E delta_t(H, Z, s) = 2 e_H (n-2)...(n-v_H+1) a^(e_H-1);
    dividing by the t-normalization leaves a gap of order 1/n from the
    limit value 2 Phi(a).
    """
    from .graphs import falling
    n = model.n
    total = 0.0
    for (motif, beta), denom in zip(model.terms,
                                    (falling(n, m.v - 2) for m, _ in model.terms)):
        mean_delta = 2 * motif.e * falling(n - 2, motif.v - 2) * a ** (motif.e - 1)
        total += beta * mean_delta / denom
    return total

"""Glauber dynamics, greedy one-step couplings, and influence matrices.

Only the discrete jump chain is simulated; the continuous-time version
with exponential holding times has the same stationary law and the
bounds consume only the per-step contraction coefficient.

Each update consumes exactly two draws from the chain's generator: one
uniform for the coordinate choice and one for the Bernoulli resample.
The greedy coupling feeds a single shared pair of draws to both chains,
setting each bit to one when the uniform falls below that chain's
conditional; the updated coordinates then disagree with probability
exactly |q_u - q_v|, the optimal Bernoulli coupling.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, NoContractionError
from .graphs import (
    LabeledGraph,
    delta2_t,
    delta_t,
    edge_linear,
    edge_pair,
    falling,
    r_motif,
)
from .graphs import pair_index_arrays as _pair_arrays
from .meanfield import FixedPoint, PhiPoly
from .models import ErgmModel, IsingModel, ProductLaw

__all__ = [
    "ChainState",
    "CouplingPair",
    "InfluenceMatrix",
    "glauber_step",
    "run_chain",
    "greedy_coupled_step",
    "coupled_update_intervals",
    "expected_coupled_hamming",
    "influence_sum",
    "influence_matrix",
    "contraction_rho",
    "region_check",
    "burn_in_default",
]


@functools.lru_cache(maxsize=16)
def _shared_endpoint_counts(n):
    """Matrix counting shared endpoints between coordinate pairs."""
    I, J = _pair_arrays(n)
    same_i = (I[:, None] == I[None, :]).astype(np.int8)
    cross1 = (I[:, None] == J[None, :]).astype(np.int8)
    cross2 = (J[:, None] == I[None, :]).astype(np.int8)
    same_j = (J[:, None] == J[None, :]).astype(np.int8)
    return same_i + cross1 + cross2 + same_j


class ChainState:
    """One Glauber chain: configuration, step counter, and generator.

    The trajectory is a deterministic function of (model, seed, initial
    state).  For graph models a dense adjacency matrix is kept in sync
    with the bits so conditionals cost O(n) per update.
    """

    __slots__ = ("x", "step", "rng", "adj")

    def __init__(self, x, rng, step=0, adj=None):
        self.x = np.asarray(x, dtype=np.uint8).copy()
        self.rng = rng
        self.step = step
        self.adj = adj

    @classmethod
    def start(cls, model, x0=None, seed=None, rng=None):
        if rng is None:
            rng = np.random.default_rng(seed)
        if x0 is None:
            x0 = np.zeros(model.size, dtype=np.uint8)
        elif isinstance(x0, LabeledGraph):
            x0 = x0.bits
        state = cls(x0, rng)
        if isinstance(model, ErgmModel):
            state.adj = LabeledGraph(model.n, state.x).adjacency()
        return state

    def graph(self, n):
        return LabeledGraph(n, self.x)


def _conditional(model, state_or_bits, s):
    if isinstance(state_or_bits, ChainState):
        if state_or_bits.adj is not None and isinstance(model, ErgmModel):
            e = edge_pair(s, model.n)
            dL = model.delta_L_adj(state_or_bits.adj, e.i, e.j)
            return 0.5 * (1.0 + math.tanh(0.5 * dL))
        return model.conditional(state_or_bits.x, s)
    return model.conditional(state_or_bits, s)


def _apply_bit(model, state, s, bit):
    state.x[s] = bit
    if state.adj is not None:
        e = edge_pair(s, model.n)
        state.adj[e.i, e.j] = state.adj[e.j, e.i] = bit


def glauber_step(model, state):
    """One jump-chain update; mutates and returns the state."""
    N = model.size
    u1 = state.rng.random()
    s = min(int(u1 * N), N - 1)
    q = _conditional(model, state, s)
    u2 = state.rng.random()
    _apply_bit(model, state, s, 1 if u2 < q else 0)
    state.step += 1
    return state


def run_chain(model, state, steps):
    for _ in range(steps):
        glauber_step(model, state)
    return state


class CouplingPair:
    """Two chains driven by one shared randomness stream.

    Constructed from a common configuration x and a coordinate s, the
    chains start at x^{(s,1)} and x^{(s,0)}, Hamming distance one.
    """

    __slots__ = ("u", "v", "rng", "step")

    def __init__(self, u, v, rng, step=0):
        self.u = u
        self.v = v
        self.rng = rng
        self.step = step

    @classmethod
    def adjacent(cls, model, x, s, seed=None, rng=None):
        if rng is None:
            rng = np.random.default_rng(seed)
        if isinstance(x, LabeledGraph):
            x = x.bits
        x = np.asarray(x, dtype=np.uint8)
        hi = x.copy()
        hi[s] = 1
        lo = x.copy()
        lo[s] = 0
        u = ChainState(hi, rng=None)
        v = ChainState(lo, rng=None)
        if isinstance(model, ErgmModel):
            u.adj = LabeledGraph(model.n, u.x).adjacency()
            v.adj = LabeledGraph(model.n, v.x).adjacency()
        return cls(u, v, rng)

    def hamming(self):
        return int(np.sum(self.u.x != self.v.x))


def greedy_coupled_step(model, pair):
    """Shared-coordinate, shared-uniform monotone update of both chains."""
    N = model.size
    u1 = pair.rng.random()
    s = min(int(u1 * N), N - 1)
    qu = _conditional(model, pair.u, s)
    qv = _conditional(model, pair.v, s)
    u2 = pair.rng.random()
    _apply_bit(model, pair.u, s, 1 if u2 < qu else 0)
    _apply_bit(model, pair.v, s, 1 if u2 < qv else 0)
    pair.u.step += 1
    pair.v.step += 1
    pair.step += 1
    return pair


def coupled_update_intervals(model, pair, s):
    """Exact outcome probabilities of the coupled update at coordinate s.

    Returns (p_both_one, p_only_u, p_only_v, p_both_zero); the disagree
    mass is |q_u - q_v| by construction.
    """
    qu = _conditional(model, pair.u, s)
    qv = _conditional(model, pair.v, s)
    both = min(qu, qv)
    return both, qu - both, qv - both, 1.0 - max(qu, qv)


def expected_coupled_hamming(model, pair):
    """Exact one-step expected Hamming distance of the greedy coupling."""
    N = model.size
    d = pair.hamming()
    total = 0.0
    for s in range(N):
        qu = _conditional(model, pair.u, s)
        qv = _conditional(model, pair.v, s)
        disagree_now = 1.0 if pair.u.x[s] != pair.v.x[s] else 0.0
        total += d - disagree_now + abs(qu - qv)
    return total / N


# ---------------------------------------------------------------------------
# influence sums and matrices
# ---------------------------------------------------------------------------

def _delta_L_all_pairs(model, bits):
    """Vector of Delta_st L over all pairs; fast for built-in motif shapes."""
    n = model.n
    I, J = _pair_arrays(n)
    g = LabeledGraph(n, bits)
    adj = g.adjacency().astype(np.int64)
    deg = adj.sum(axis=1)
    out = np.zeros(len(I))
    for (motif, beta), denom in zip(model.terms,
                                    [falling(n, m.v - 2) for m, _ in model.terms]):
        if motif.v == 2 and motif.e == 1:
            dt = np.full(len(I), 2.0)
        elif motif.v == 3 and motif.e == 2:
            dt = 2.0 * (deg[I] + deg[J] - 2 * adj[I, J])
        elif motif.v == 3 and motif.e == 3:
            codeg = adj @ adj
            dt = 6.0 * codeg[I, J]
        else:
            dt = np.array([delta_t(motif, g, k) for k in range(len(I))],
                          dtype=float)
        out += beta * dt / denom
    return out


def influence_sum(model, x, ij):
    """Exact sum over st != ij of the conditional-probability gaps.

    The analytic cap |Phi|'(1)/2 from the one-step coupling analysis is
    asserted; exceeding it indicates an implementation bug.
    """
    if not isinstance(model, ErgmModel):
        raise TypeError("influence_sum is defined for ERGMs")
    if isinstance(x, LabeledGraph):
        x = x.bits
    lin = ij if isinstance(ij, (int, np.integer)) else \
        edge_linear(ij[0], ij[1], model.n).linear
    hi = np.asarray(x, dtype=np.uint8).copy()
    hi[lin] = 1
    lo = hi.copy()
    lo[lin] = 0
    q_hi = 0.5 * (1.0 + np.tanh(0.5 * _delta_L_all_pairs(model, hi)))
    q_lo = 0.5 * (1.0 + np.tanh(0.5 * _delta_L_all_pairs(model, lo)))
    gaps = np.abs(q_hi - q_lo)
    gaps[lin] = 0.0
    total = float(gaps.sum())
    cap = 0.5 * PhiPoly.from_model(model).Phi_abs_prime(1.0)
    if total > cap + 1e-9:
        raise RuntimeError(
            f"influence sum {total} exceeds the analytic cap {cap}; "
            "this indicates an implementation bug")
    return total


@dataclass
class InfluenceMatrix:
    """Nonnegative N x N matrix with zero diagonal; exact or dominating."""

    entries: np.ndarray
    kind: str

    def norm(self, p):
        from .bounds import matrix_pnorm
        return matrix_pnorm(self.entries, p)

    def B_matrix(self):
        """The path-coupling matrix (1 - 1/N) I + R / N."""
        N = self.entries.shape[0]
        return (1.0 - 1.0 / N) * np.eye(N) + self.entries / N


def _ergm_dependency_sets(model):
    """For each coordinate r, the coordinates whose flip can move q_r."""
    n = model.n
    N = model.size
    complete = LabeledGraph.complete(n)
    deps = [set() for _ in range(N)]
    for r in range(N):
        for s in range(N):
            if s == r:
                continue
            if any(delta2_t(m, complete, r, s) > 0 for m, _ in model.terms
                   if m.e >= 2):
                deps[r].add(s)
    return deps


def _max_gap_over_assignments(conditional_at, template, coords, s):
    """Max |q(bit_s=1) - q(bit_s=0)| over assignments of the given coords."""
    best = 0.0
    coords = list(coords)
    for mask in range(2 ** len(coords)):
        for k, c in enumerate(coords):
            template[c] = (mask >> k) & 1
        template[s] = 1
        q1 = conditional_at(template)
        template[s] = 0
        q0 = conditional_at(template)
        best = max(best, abs(q1 - q0))
    for c in coords:
        template[c] = 0
    return best


def influence_matrix(model, kind="analytic"):
    """The Glauber influence matrix, exact or an analytic dominating one.

    exact: entry (r, s) is the maximum change of the conditional at r
    when bit s flips, maximized over states; the search enumerates only
    the coordinates the conditional actually depends on.  Limited to
    N <= 20 coordinates.

    analytic: for ERGMs, the Taylor bound (1/4) sum_ell |beta_ell|
    Delta_s Delta_r t_ell evaluated on the complete graph, which
    dominates every exact entry; for Ising models, tanh(|beta|/N) on
    neighboring pairs, the constant used by the contraction argument.
    """
    N = model.size
    if kind == "analytic":
        R = np.zeros((N, N))
        if isinstance(model, IsingModel):
            c = math.tanh(abs(model.beta) / model.n)
            for r, ns in enumerate(model.neighborhoods):
                for s in ns:
                    R[r, s] = c
            return InfluenceMatrix(R, "analytic_bound")
        if isinstance(model, ErgmModel):
            complete = LabeledGraph.complete(model.n)

            @functools.lru_cache(maxsize=None)
            def entry(shares_vertex):
                # on the complete graph the second difference depends
                # only on whether the two coordinates share a vertex
                if shares_vertex:
                    r, s = edge_linear(0, 1, model.n), edge_linear(0, 2, model.n)
                else:
                    r, s = edge_linear(0, 1, model.n), edge_linear(2, 3, model.n)
                total = 0.0
                for (m, b), denom in zip(
                        model.terms,
                        [falling(model.n, m.v - 2) for m, _ in model.terms]):
                    if m.e < 2:
                        continue
                    total += abs(b) * delta2_t(m, complete, r.linear, s.linear) / denom
                return 0.25 * total

            I, J = _pair_arrays(model.n)
            for r in range(N):
                for s in range(N):
                    if r == s:
                        continue
                    shares = len({I[r], J[r]} & {I[s], J[s]}) > 0
                    if not shares and model.n < 4:
                        continue
                    R[r, s] = entry(shares)
            return InfluenceMatrix(R, "analytic_bound")
        raise TypeError(f"no analytic influence matrix for {type(model).__name__}")
    if kind != "exact":
        raise ValueError("kind must be 'analytic' or 'exact'")
    if N > 20:
        raise CapacityError("exact influence matrix limited to N <= 20")
    R = np.zeros((N, N))
    template = np.zeros(N, dtype=np.uint8)
    if isinstance(model, IsingModel):
        deps = [set(ns) for ns in model.neighborhoods]
    elif isinstance(model, ErgmModel):
        deps = _ergm_dependency_sets(model)
    else:
        raise TypeError(f"no influence matrix for {type(model).__name__}")
    for r in range(N):
        def q_at(bits, r=r):
            return model.conditional(bits, r)
        for s in deps[r]:
            rest = sorted(deps[r] - {s})
            R[r, s] = _max_gap_over_assignments(q_at, template, rest, s)
    return InfluenceMatrix(R, "exact")


# ---------------------------------------------------------------------------
# contraction coefficients and the epsilon-region
# ---------------------------------------------------------------------------

def contraction_rho(model, fp=None, eps=None):
    """One-step path-coupling contraction coefficient rho.

    Ising: rho = (1 - r tanh(beta/N)) / N.  ERGM: the baseline
    (1 - |Phi|'(1)/2) / C(n,2); when ``eps`` is given (positivity of the
    non-edge coefficients required) the refined factor is also evaluated
    at the supplied fixed point and the larger valid rho is returned.
    """
    if isinstance(model, IsingModel):
        rho = (1.0 - model.r * math.tanh(model.beta / model.n)) / model.n
        if rho <= 0:
            raise NoContractionError(
                f"no contraction: r tanh(beta/N) = "
                f"{model.r * math.tanh(model.beta / model.n):.4f} >= 1")
        return rho
    if isinstance(model, ProductLaw):
        return 1.0 / model.size
    poly = PhiPoly.from_model(model)
    N = model.size
    candidates = [(1.0 - 0.5 * poly.Phi_abs_prime(1.0)) / N]
    if eps is not None:
        if any(b <= 0 for _, b in model.terms[1:]):
            raise ValueError("the refined rho needs beta_ell > 0 for ell >= 2")
        if fp is None:
            raise ValueError("the refined rho needs a fixed point")
        from .bounds import refined_contraction_factor
        a = fp.a_star if isinstance(fp, FixedPoint) else float(fp)
        candidates.append(
            (1.0 - refined_contraction_factor(poly, a, eps, model.n)) / N)
    valid = [c for c in candidates if c > 0]
    if not valid:
        raise NoContractionError(
            "neither contraction formula is positive for these parameters")
    return max(valid)


def region_check(model, x, eps, a_star):
    """Membership of x in the eps-region where the refined bound applies.

    Checks, for every edge-deleted motif H = H_ell minus e with at least
    two edges and every coordinate pair (ij, st), st != ij, that the
    local multipliers of both x^{(ij,1)} and x^{(ij,0)} are within eps
    of a*.  Deleted motifs reduced to a single edge have no multiplier
    and impose no constraint.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    if isinstance(x, LabeledGraph):
        g = x
    else:
        g = LabeledGraph(model.n, x)
    reduced = {}
    for motif, _ in model.terms[1:]:
        for e in motif.edges:
            h = motif.remove_edge(e)
            if h.e >= 2:
                reduced.setdefault(h.canonical_key(), h)
    reduced = list(reduced.values())
    if not reduced:
        return True
    n = model.n
    N = model.size
    I, J = _pair_arrays(n)
    twostar_like = [h for h in reduced if h.v == 3 and h.e == 2
                    and not h.isolated_vertices()]
    general = [h for h in reduced if h not in twostar_like]
    if twostar_like:
        # r(y; st) = (deg'_i + deg'_j) / (2n) with the opposite endpoint
        # excluded from each degree.  Flipping coordinate ij moves the
        # multiplier of st by (shared endpoints)/(2n), so both flip
        # variants of every ij reduce to one O(N^2) array check.
        deg0 = g.adjacency().sum(axis=1).astype(np.int64)
        bits0 = g.bits.astype(np.int64)
        base = (deg0[I] + deg0[J] - 2 * bits0) / (2.0 * n)
        # one flip variant of every ij leaves the bits unchanged, so the
        # unshifted multipliers must already sit inside the band
        if N > 1 and np.any(np.abs(base - a_star) > eps):
            return False
        touch = _shared_endpoint_counts(n)
        sign = np.where(bits0 == 1, -1.0, 1.0)  # the flip that changes bits
        shifted = base[None, :] + sign[:, None] * touch / (2.0 * n)
        bad = np.abs(shifted - a_star) > eps
        np.fill_diagonal(bad, False)
        if np.any(bad):
            return False
    if general:
        for ij in range(N):
            for bit in (1, 0):
                y = g.with_bit(ij, bit)
                for h in general:
                    for st in range(N):
                        if st == ij:
                            continue
                        if abs(r_motif(h, y, st) - a_star) > eps:
                            return False
    return True


def burn_in_default(model):
    """Default burn-in: ceil(10 n^2 log n) graph updates, or the
    coordinate-count analogue for Ising chains."""
    if isinstance(model, ErgmModel):
        n = model.n
        return math.ceil(10 * n * n * math.log(max(n, 2)))
    N = model.size
    return math.ceil(10 * N * math.log(max(N, 2)))

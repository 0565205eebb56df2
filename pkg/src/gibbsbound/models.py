"""Gibbs measures on {0,1}^N and product reference laws.

Two model families share one interface: a log-weight L with
P(x) proportional to exp{L(x)}, the single-coordinate differences
Delta_s L, and the Glauber conditional

    q(x^{(s,1)} | x) = (1 + tanh(Delta_s L(x) / 2)) / 2,

which never depends on the current bit at s.  The normalizing constant
is never computed except by the small-instance enumeration oracle.

Ising configurations are bit vectors over sites; the 2x-1 spin
convention is applied inside the formulas and no +-1 encoding is stored
anywhere.  ERGM configurations are edge-bit vectors of a labeled graph.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .errors import CapacityError
from .graphs import LabeledGraph, all_pairs, edge_linear, falling, pair_count

__all__ = [
    "IsingModel",
    "ErgmModel",
    "ProductLaw",
    "delta_L",
    "conditional",
    "product_conditional",
    "exact_distribution",
    "transition_matrix",
    "stationary_from_kernel",
    "state_bits",
    "ENUMERATION_LIMIT",
]

ENUMERATION_LIMIT = 24  # max coordinate count for 2^N enumeration


def _bits_of(x):
    if isinstance(x, LabeledGraph):
        return x.bits
    return np.asarray(x)


def state_bits(state, N):
    """Decode a state integer into a bit vector (bit s = coordinate s)."""
    return ((state >> np.arange(N)) & 1).astype(np.uint8)


class IsingModel:
    """Ising model on N sites with fixed symmetric neighborhoods.

    L(x) = (beta/N) * sum_s sum_{t in nbrs[s]} (2 x_s - 1)(2 x_t - 1);
    the double sum runs over ordered pairs, so each interacting pair is
    counted twice and Delta_s L(x) = (4 beta / N) sum_{t} (2 x_t - 1).
    """

    def __init__(self, n, beta, neighborhoods):
        neighborhoods = [tuple(sorted(set(ns))) for ns in neighborhoods]
        if len(neighborhoods) != n:
            raise ValueError("need one neighborhood per site")
        for s, ns in enumerate(neighborhoods):
            if s in ns:
                raise ValueError(f"site {s} lists itself as a neighbor")
            for t in ns:
                if not 0 <= t < n:
                    raise ValueError(f"site {s} has out-of-range neighbor {t}")
                if s not in neighborhoods[t]:
                    raise ValueError(f"asymmetric neighborhoods at ({s},{t})")
        self.n = n
        self.beta = float(beta)
        self.neighborhoods = tuple(neighborhoods)
        self._nbr_arrays = [np.array(ns, dtype=np.int64) for ns in neighborhoods]

    @classmethod
    def complete(cls, n, beta):
        return cls(n, beta, [[t for t in range(n) if t != s] for s in range(n)])

    @classmethod
    def cycle(cls, n, beta):
        return cls(n, beta, [[(s - 1) % n, (s + 1) % n] for s in range(n)])

    @property
    def size(self):
        return self.n

    @property
    def r(self):
        """Largest neighborhood size."""
        return max(len(ns) for ns in self.neighborhoods)

    def delta_L(self, x, s):
        bits = _bits_of(x)
        ns = self._nbr_arrays[s]
        if len(ns) == 0:
            return 0.0
        spins = 2.0 * bits[ns].astype(float) - 1.0
        return 4.0 * self.beta / self.n * float(spins.sum())

    def conditional(self, x, s):
        return 0.5 * (1.0 + math.tanh(0.5 * self.delta_L(x, s)))

    def log_weight(self, x):
        bits = _bits_of(x)
        spins = 2.0 * bits.astype(float) - 1.0
        total = 0.0
        for s, ns in enumerate(self._nbr_arrays):
            if len(ns):
                total += spins[s] * float(spins[ns].sum())
        return self.beta / self.n * total

    def __eq__(self, other):
        return (isinstance(other, IsingModel) and self.n == other.n
                and self.beta == other.beta
                and self.neighborhoods == other.neighborhoods)

    def __repr__(self):
        return f"IsingModel(n={self.n}, beta={self.beta}, r={self.r})"


class ErgmModel:
    """Exponential random graph model with normalized injection counts.

    terms is a sequence of (Motif, beta) pairs; the first motif must be
    the single edge.  L(x) = sum_ell beta_ell * t(H_ell, x) / d_ell with
    d_ell = n(n-1)...(n - v_ell + 3).
    """

    def __init__(self, n, terms):
        terms = [(m, float(b)) for m, b in terms]
        if not terms:
            raise ValueError("need at least the edge term")
        first = terms[0][0]
        if not (first.v == 2 and first.e == 1):
            raise ValueError("the first term must be the single-edge motif")
        for motif, _ in terms:
            if motif.isolated_vertices():
                raise ValueError(f"motif {motif} must be connected")
            if motif.v > n:
                raise ValueError(f"motif {motif} does not fit in {n} vertices")
        self.n = n
        self.terms = tuple(terms)
        self._denoms = tuple(falling(n, m.v - 2) for m, _ in terms)

    @property
    def size(self):
        return pair_count(self.n)

    @property
    def betas(self):
        return tuple(b for _, b in self.terms)

    @property
    def motifs(self):
        return tuple(m for m, _ in self.terms)

    def _as_graph(self, x):
        if isinstance(x, LabeledGraph):
            return x
        return LabeledGraph(self.n, x)

    def t_stats(self, x):
        """Vector of normalized counts t_ell(x)."""
        from .graphs import injection_count
        g = self._as_graph(x)
        return np.array([injection_count(m, g) / d
                         for (m, _), d in zip(self.terms, self._denoms)])

    def log_weight(self, x):
        return float(np.dot(self.betas, self.t_stats(x)))

    def delta_L(self, x, s):
        from .graphs import delta_t
        g = self._as_graph(x)
        return sum(b * delta_t(m, g, s) / d
                   for (m, b), d in zip(self.terms, self._denoms))

    def delta_L_adj(self, adj, i, j):
        """Delta_{ij} L from a dense adjacency matrix (chain fast path).

        Supports edge/two-star/triangle terms; other motifs fall back to
        the generic path through bit vectors.
        """
        total = 0.0
        for (m, b), d in zip(self.terms, self._denoms):
            if m.v == 2 and m.e == 1:
                dt = 2
            elif m.v == 3 and m.e == 2:
                di = int(adj[i].sum()) - int(adj[i, j])
                dj = int(adj[j].sum()) - int(adj[i, j])
                dt = 2 * (di + dj)
            elif m.v == 3 and m.e == 3:
                dt = 6 * int(np.dot(adj[i].astype(np.int64),
                                    adj[j].astype(np.int64)))
            else:
                lin = edge_linear(i, j, self.n).linear
                return self.delta_L(self._graph_from_adj(adj), lin)
            total += b * dt / d
        return total

    def _graph_from_adj(self, adj):
        g = LabeledGraph(self.n)
        for e in all_pairs(self.n):
            g.bits[e.linear] = adj[e.i, e.j]
        return g

    def conditional(self, x, s):
        return 0.5 * (1.0 + math.tanh(0.5 * self.delta_L(x, s)))

    def __eq__(self, other):
        return (isinstance(other, ErgmModel) and self.n == other.n
                and self.terms == other.terms)

    def __repr__(self):
        inner = ", ".join(f"{m}:{b:g}" for m, b in self.terms)
        return f"ErgmModel(n={self.n}, {inner})"


@dataclass(frozen=True)
class ProductLaw:
    """Independent Bernoulli coordinates with success vector p.

    Boundary values p_s in {0, 1} are allowed; such coordinates are
    frozen under the dynamics.
    """

    p: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.p, dtype=float)
        if np.any(p < 0) or np.any(p > 1):
            raise ValueError("success probabilities must lie in [0,1]")
        object.__setattr__(self, "p", p)

    @classmethod
    def constant(cls, N, a):
        return cls(np.full(N, float(a)))

    @property
    def size(self):
        return len(self.p)

    def conditional(self, x, s):
        return float(self.p[s])

    def sample(self, rng):
        return (rng.random(self.size) < self.p).astype(np.uint8)

    def mean(self):
        return self.p.copy()

    def __eq__(self, other):
        return isinstance(other, ProductLaw) and np.array_equal(self.p, other.p)


# ---------------------------------------------------------------------------
# free-function views of the shared interface
# ---------------------------------------------------------------------------

def delta_L(model, x, s):
    """L(x^{(s,1)}) - L(x^{(s,0)}); independent of the bit at s."""
    return model.delta_L(x, s)


def conditional(model, x, s):
    """Glauber update probability q(x^{(s,1)} | x) in (0, 1)."""
    return model.conditional(x, s)


def product_conditional(law, s):
    """For a product law the conditional is p_s regardless of the state."""
    return float(law.p[s])


# ---------------------------------------------------------------------------
# small-instance enumeration oracle
# ---------------------------------------------------------------------------

def _check_enumerable(N):
    if N > ENUMERATION_LIMIT:
        raise CapacityError(
            f"enumeration over 2^{N} states refused (limit 2^{ENUMERATION_LIMIT})")


def exact_distribution(model):
    """Normalized probability vector over all 2^N states.

    State m has coordinate s equal to bit s of m.  Log-weights are
    normalized by log-sum-exp, so large |beta| cannot overflow.
    """
    N = model.size
    _check_enumerable(N)
    if isinstance(model, ProductLaw):
        logp = np.zeros(2**N)
        for s in range(N):
            bit = ((np.arange(2**N) >> s) & 1).astype(bool)
            with np.errstate(divide="ignore"):
                logp += np.where(bit, np.log(model.p[s]), np.log1p(-model.p[s]))
        return np.exp(logp)
    logw = np.array([model.log_weight(state_bits(m, N)) for m in range(2**N)])
    probs = np.exp(logw - logsumexp(logw))
    return probs / probs.sum()  # absorb log-sum-exp roundoff


def transition_matrix(model):
    """Dense one-step Glauber kernel on all 2^N states (N <= 12)."""
    N = model.size
    if N > 12:
        raise CapacityError("dense kernel limited to N <= 12")
    size = 2**N
    T = np.zeros((size, size))
    for m in range(size):
        x = state_bits(m, N)
        for s in range(N):
            q = model.conditional(x, s)
            up = m | (1 << s)
            down = m & ~(1 << s)
            T[m, up] += q / N
            T[m, down] += (1.0 - q) / N
    return T


def stationary_from_kernel(T):
    """Stationary distribution of a stochastic matrix via eigenvector."""
    vals, vecs = np.linalg.eig(T.T)
    k = int(np.argmin(np.abs(vals - 1.0)))
    pi = np.real(vecs[:, k])
    pi = np.abs(pi)
    return pi / pi.sum()

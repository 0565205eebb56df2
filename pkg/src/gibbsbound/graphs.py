"""Edge-indexed bit graphs, motifs, and injection counting.

A simple labeled graph on ``n`` vertices is stored as a bit vector of
length ``N = n(n-1)/2``, one bit per vertex pair ``(i, j)`` with
``i < j``, ordered lexicographically.  All discrete derivatives used by
the bound evaluators (single-bit differences ``delta_t`` and mixed
second differences ``delta2_t``) are defined on top of this encoding.

Motif statistics count *edge-preserving injections*: ordered maps from
the motif's vertices into the host graph's vertices such that every
motif edge lands on a present edge.  Counts are therefore labeled; a
single-edge motif on a host with ``m`` edges counts ``2m``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache as _lru_cache
from typing import NamedTuple

import numpy as np

__all__ = [
    "EdgeIndex",
    "LabeledGraph",
    "Motif",
    "EDGE",
    "TWOSTAR",
    "TRIANGLE",
    "edge_linear",
    "edge_pair",
    "pair_count",
    "falling",
    "all_pairs",
    "pair_index_arrays",
    "hamming",
    "injection_count",
    "t_norm",
    "delta_t",
    "delta2_t",
    "r_motif",
    "parse_motif",
]


def pair_count(n):
    """Number of vertex pairs C(n, 2)."""
    return n * (n - 1) // 2


def falling(n, k):
    """Falling product n(n-1)...(n-k+1) with k factors; empty product is 1."""
    out = 1
    for i in range(k):
        out *= n - i
    return out


class EdgeIndex(NamedTuple):
    """A vertex pair (i, j), i < j, with its lexicographic rank."""

    i: int
    j: int
    linear: int


def edge_linear(i, j, n):
    """Rank of the pair (i, j) among all pairs of [0, n), lexicographic.

    Raises ValueError unless 0 <= i < j < n.
    """
    if not (0 <= i < j < n):
        raise ValueError(f"need 0 <= i < j < n, got i={i}, j={j}, n={n}")
    # pairs (0,*), (1,*), ..., (i-1,*) come first, then (i, i+1..j)
    linear = i * n - i * (i + 1) // 2 + (j - i - 1)
    return EdgeIndex(i, j, linear)


def edge_pair(linear, n):
    """Inverse of edge_linear: recover (i, j) from the rank."""
    N = pair_count(n)
    if not (0 <= linear < N):
        raise ValueError(f"linear index {linear} out of range [0, {N})")
    i = 0
    offset = linear
    while offset >= n - i - 1:
        offset -= n - i - 1
        i += 1
    return EdgeIndex(i, i + 1 + offset, linear)


def all_pairs(n):
    """All EdgeIndex values for n vertices, in linear order."""
    return [EdgeIndex(i, j, edge_linear(i, j, n).linear)
            for i in range(n) for j in range(i + 1, n)]


@_lru_cache(maxsize=64)
def pair_index_arrays(n):
    """Vertex index arrays (I, J) aligned with the linear edge order."""
    I = np.fromiter((i for i in range(n) for _ in range(i + 1, n)),
                    dtype=np.int64, count=pair_count(n))
    J = np.fromiter((j for i in range(n) for j in range(i + 1, n)),
                    dtype=np.int64, count=pair_count(n))
    return I, J


def _linear_of(s, n):
    """Accept an EdgeIndex, an (i, j) pair, or a plain linear index."""
    if isinstance(s, EdgeIndex):
        return s.linear
    if isinstance(s, tuple):
        return edge_linear(s[0], s[1], n).linear
    return int(s)


class LabeledGraph:
    """Simple graph on n vertices encoded as C(n,2) edge bits.

    Bits may be mutated through set_bit/toggle; everything else about
    the instance is fixed at construction.
    """

    __slots__ = ("n", "bits")

    def __init__(self, n, bits=None):
        if n < 1:
            raise ValueError("need at least one vertex")
        N = pair_count(n)
        if bits is None:
            bits = np.zeros(N, dtype=np.uint8)
        else:
            bits = np.asarray(bits, dtype=np.uint8).copy()
            if bits.shape != (N,):
                raise ValueError(f"bit vector must have length C({n},2)={N}")
            if np.any(bits > 1):
                raise ValueError("bits must be 0/1")
        self.n = n
        self.bits = bits

    @classmethod
    def empty(cls, n):
        return cls(n)

    @classmethod
    def complete(cls, n):
        return cls(n, np.ones(pair_count(n), dtype=np.uint8))

    @classmethod
    def from_edges(cls, n, edges):
        g = cls(n)
        for i, j in edges:
            if i == j:
                raise ValueError(f"self-loop ({i},{j}) not allowed")
            a, b = (i, j) if i < j else (j, i)
            g.bits[edge_linear(a, b, n).linear] = 1
        return g

    @classmethod
    def from_int(cls, n, state):
        """Decode a state integer; bit s of `state` is coordinate s."""
        N = pair_count(n)
        bits = (state >> np.arange(N)) & 1
        return cls(n, bits.astype(np.uint8))

    def copy(self):
        return LabeledGraph(self.n, self.bits)

    @property
    def num_edges(self):
        return int(self.bits.sum())

    def get(self, s):
        return int(self.bits[_linear_of(s, self.n)])

    def set_bit(self, s, value):
        self.bits[_linear_of(s, self.n)] = 1 if value else 0

    def toggle(self, s):
        lin = _linear_of(s, self.n)
        self.bits[lin] ^= 1

    def with_bit(self, s, value):
        """Copy with coordinate s forced to `value` (the x^{(s,1)}/x^{(s,0)} maps)."""
        g = self.copy()
        g.set_bit(s, value)
        return g

    def adjacency(self):
        """Dense symmetric 0/1 adjacency matrix."""
        n = self.n
        I, J = pair_index_arrays(n)
        adj = np.zeros((n, n), dtype=np.uint8)
        adj[I, J] = self.bits
        adj[J, I] = self.bits
        return adj

    def degrees(self):
        return self.adjacency().sum(axis=1).astype(np.int64)

    def edges(self):
        return [(e.i, e.j) for e in all_pairs(self.n) if self.bits[e.linear]]

    def __eq__(self, other):
        return (isinstance(other, LabeledGraph) and self.n == other.n
                and bool(np.array_equal(self.bits, other.bits)))

    def __repr__(self):
        return f"LabeledGraph(n={self.n}, edges={self.num_edges})"


@dataclass(frozen=True)
class Motif:
    """A small graph H used for injection counting.

    Connected with at least one edge by default; ``allow_isolated``
    admits disconnected motifs with isolated vertices (needed for the
    edge-deleted graphs of the second-difference swap identity, where
    all vertices are retained).  Isolated vertices still consume
    distinct image vertices when counting injections.
    """

    v: int
    edges: tuple
    name: str = ""
    allow_isolated: bool = False

    def __post_init__(self):
        if self.v < 2:
            raise ValueError("motif needs at least 2 vertices")
        norm = []
        seen = set()
        for a, b in self.edges:
            if a == b:
                raise ValueError("self-loops not allowed in motifs")
            if not (0 <= a < self.v and 0 <= b < self.v):
                raise ValueError(f"edge ({a},{b}) out of vertex range")
            key = (min(a, b), max(a, b))
            if key in seen:
                raise ValueError(f"duplicate edge {key}")
            seen.add(key)
            norm.append(key)
        norm.sort()
        object.__setattr__(self, "edges", tuple(norm))
        if not self.allow_isolated:
            if len(norm) < 1:
                raise ValueError("motif needs at least one edge")
            if not self._connected():
                raise ValueError("motif must be connected")

    def _connected(self):
        adj = {u: set() for u in range(self.v)}
        for a, b in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        seen = {0}
        stack = [0]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.v

    @property
    def e(self):
        return len(self.edges)

    def degree_seq(self):
        d = [0] * self.v
        for a, b in self.edges:
            d[a] += 1
            d[b] += 1
        return d

    def isolated_vertices(self):
        d = self.degree_seq()
        return [u for u in range(self.v) if d[u] == 0]

    def remove_edge(self, edge):
        """H \\ e with all vertices retained, even if left isolated."""
        key = (min(edge), max(edge))
        if key not in self.edges:
            raise ValueError(f"{key} is not an edge of the motif")
        rest = tuple(e for e in self.edges if e != key)
        label = f"{self.name or 'motif'}-minus-{key[0]}{key[1]}"
        return Motif(self.v, rest, name=label, allow_isolated=True)

    def canonical_key(self):
        """Isomorphism key: the minimal edge tuple over vertex relabelings.

        Brute force over permutations; fine for the tiny motifs used
        here (counts blow up past ~8 vertices).
        """
        best = None
        for perm in itertools.permutations(range(self.v)):
            relabeled = tuple(sorted(
                (min(perm[a], perm[b]), max(perm[a], perm[b]))
                for a, b in self.edges))
            if best is None or relabeled < best:
                best = relabeled
        return (self.v, best)

    def to_text(self):
        pairs = ",".join(f"{a}-{b}" for a, b in self.edges)
        return f"v={self.v}; edges={pairs}"

    def __str__(self):
        return self.name or self.to_text()


EDGE = Motif(2, ((0, 1),), name="edge")
TWOSTAR = Motif(3, ((0, 1), (0, 2)), name="twostar")
TRIANGLE = Motif(3, ((0, 1), (0, 2), (1, 2)), name="triangle")

_BUILTIN_MOTIFS = {"edge": EDGE, "twostar": TWOSTAR, "triangle": TRIANGLE,
                   "2star": TWOSTAR, "two-star": TWOSTAR}


def parse_motif(text):
    """Parse 'edge' / 'twostar' / 'triangle' or 'v=3; edges=0-1,0-2'."""
    key = text.strip().lower()
    if key in _BUILTIN_MOTIFS:
        return _BUILTIN_MOTIFS[key]
    v = None
    edges = None
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            raise ValueError(f"cannot parse motif fragment {part!r}")
        k, val = (x.strip() for x in part.split("=", 1))
        if k == "v":
            v = int(val)
        elif k == "edges":
            edges = []
            for pair in val.split(","):
                a, b = pair.strip().split("-")
                edges.append((int(a), int(b)))
        else:
            raise ValueError(f"unknown motif field {k!r}")
    if v is None or edges is None:
        raise ValueError(f"motif text {text!r} needs both v= and edges=")
    return Motif(v, tuple(edges))


def hamming(x, y):
    """Number of differing edge bits; requires equal vertex counts."""
    if x.n != y.n:
        raise ValueError(f"vertex counts differ: {x.n} vs {y.n}")
    return int(np.sum(x.bits != y.bits))


# ---------------------------------------------------------------------------
# injection counting
# ---------------------------------------------------------------------------

def _count_via_backtracking(motif, adj, n):
    """Count edge-preserving injections by extending partial vertex maps.

    Vertices with at least one motif edge are placed first, each (after
    the root of its component) adjacent to an already placed vertex so
    the edge constraints prune early.  Isolated vertices only need
    distinct images, contributing a falling-factorial multiplier.
    """
    deg = motif.degree_seq()
    active = [u for u in range(motif.v) if deg[u] > 0]
    n_isolated = motif.v - len(active)
    if motif.v > n:
        raise ValueError(f"motif has {motif.v} vertices but host has {n}")
    if not active:
        return falling(n, n_isolated)

    # placement order: repeatedly pick a vertex adjacent to the placed
    # prefix when one exists (new component roots otherwise)
    nbrs = {u: [] for u in active}
    for a, b in motif.edges:
        nbrs[a].append(b)
        nbrs[b].append(a)
    order = []
    placed = set()
    remaining = set(active)
    while remaining:
        cand = [u for u in remaining if any(w in placed for w in nbrs[u])]
        u = min(cand) if cand else min(remaining)
        order.append(u)
        placed.add(u)
        remaining.discard(u)
    # per position, the constraints against earlier positions
    pos = {u: k for k, u in enumerate(order)}
    constraints = [[] for _ in order]
    for a, b in motif.edges:
        lo, hi = (a, b) if pos[a] < pos[b] else (b, a)
        constraints[pos[hi]].append(pos[lo])

    count = 0
    image = [0] * len(order)
    used = np.zeros(n, dtype=bool)

    def extend(k):
        nonlocal count
        if k == len(order):
            count += falling(n - len(order), n_isolated)
            return
        for cand in range(n):
            if used[cand]:
                continue
            ok = True
            for earlier in constraints[k]:
                if not adj[cand, image[earlier]]:
                    ok = False
                    break
            if ok:
                used[cand] = True
                image[k] = cand
                extend(k + 1)
                used[cand] = False

    extend(0)
    return count


def _shape_kind(motif):
    """Classify motifs with a closed-form count; None -> backtracking."""
    if motif.isolated_vertices():
        return None
    if motif.v == 2 and motif.e == 1:
        return "edge"
    if motif.v == 3 and motif.e == 2:
        return "twostar"
    if motif.v == 3 and motif.e == 3:
        return "triangle"
    return None


def injection_count(motif, x):
    """Exact count of edge-preserving injections of the motif into x."""
    if motif.v > x.n:
        raise ValueError(f"motif has {motif.v} vertices but graph has {x.n}")
    kind = _shape_kind(motif)
    if kind == "edge":
        return 2 * x.num_edges
    adj = x.adjacency()
    if kind == "twostar":
        d = adj.sum(axis=1).astype(np.int64)
        return int(np.sum(d * (d - 1)))
    if kind == "triangle":
        a = adj.astype(np.int64)
        return int(np.trace(a @ a @ a))
    return _count_via_backtracking(motif, adj, x.n)


def t_norm(motif, x):
    """Normalized injection count t(H,x) / (n(n-1)...(n-v_H+3)).

    The denominator has v_H - 2 factors; for two-vertex motifs it is the
    empty product 1, so the single-edge statistic is twice the edge
    count.
    """
    return injection_count(motif, x) / falling(x.n, motif.v - 2)


def delta_t(motif, x, s):
    """Single-bit difference t(H, x^{(s,1)}) - t(H, x^{(s,0)}).

    Equals the number of injections into x^{(s,1)} whose image uses the
    edge s; in particular it never depends on the current bit at s and
    is always nonnegative.
    """
    lin = _linear_of(s, x.n)
    e = edge_pair(lin, x.n)
    kind = _shape_kind(motif)
    if kind == "edge":
        return 2
    adj = x.adjacency()
    if kind == "twostar":
        di = int(adj[e.i].sum()) - int(adj[e.i, e.j])
        dj = int(adj[e.j].sum()) - int(adj[e.i, e.j])
        return 2 * (di + dj)
    if kind == "triangle":
        codeg = int(np.dot(adj[e.i].astype(np.int64), adj[e.j].astype(np.int64)))
        return 6 * codeg
    hi = x.with_bit(lin, 1)
    lo = x.with_bit(lin, 0)
    return injection_count(motif, hi) - injection_count(motif, lo)


def delta2_t(motif, x, s, r):
    """Mixed second difference Delta_s Delta_r t(H, x); symmetric in (s, r)."""
    ls = _linear_of(s, x.n)
    lr = _linear_of(r, x.n)
    if ls == lr:
        raise ValueError("second difference needs two distinct coordinates")
    g = x.copy()
    g.set_bit(ls, 1)
    d_hi = delta_t(motif, g, lr)
    g.set_bit(ls, 0)
    d_lo = delta_t(motif, g, lr)
    return d_hi - d_lo


def r_motif(motif, x, ij):
    """Normalized local edge-multiplier used by the contraction region.

    Defined as (delta_t(H, x, ij) / (2 e_H n(n-1)...(n-v_H+3)))
    raised to 1/(e_H - 1); lies in [0, 1] and concentrates near the
    Erdos-Renyi parameter when x is drawn from one.  Undefined for
    single-edge motifs.
    """
    if motif.e < 2:
        raise ValueError("r is undefined for motifs with a single edge")
    base = delta_t(motif, x, ij) / (2 * motif.e * falling(x.n, motif.v - 2))
    return base ** (1.0 / (motif.e - 1))

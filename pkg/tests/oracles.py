"""Brute-force oracles, kept independent of the library's counting paths.

Everything here enumerates raw injections with itertools.permutations or
raw states with product loops; no backtracking, no closed forms.
"""

import itertools

import numpy as np


def oracle_injections(motif, graph):
    """Count edge-preserving injections by enumerating all vertex maps."""
    adj = graph.adjacency()
    count = 0
    for image in itertools.permutations(range(graph.n), motif.v):
        if all(adj[image[a], image[b]] for a, b in motif.edges):
            count += 1
    return count


def oracle_delta_t(motif, graph, s):
    hi = graph.with_bit(s, 1)
    lo = graph.with_bit(s, 0)
    return oracle_injections(motif, hi) - oracle_injections(motif, lo)


def oracle_delta2_t(motif, graph, s, r):
    out = 0
    for bs in (1, 0):
        for br in (1, 0):
            g = graph.copy()
            g.set_bit(s, bs)
            g.set_bit(r, br)
            sign = 1 if bs == br else -1
            out += sign * oracle_injections(motif, g)
    return out


def oracle_injections_using_edge(motif, graph, i, j):
    """Injections into x^{(ij,1)} whose image uses the edge (i, j)."""
    g = graph.with_bit((i, j), 1)
    adj = g.adjacency()
    count = 0
    for image in itertools.permutations(range(g.n), motif.v):
        if not all(adj[image[a], image[b]] for a, b in motif.edges):
            continue
        used = {tuple(sorted((image[a], image[b]))) for a, b in motif.edges}
        if (min(i, j), max(i, j)) in used:
            count += 1
    return count


def enumerate_states(N):
    """All 0/1 vectors of length N as a (2**N, N) uint8 array."""
    m = np.arange(2**N, dtype=np.int64)
    return ((m[:, None] >> np.arange(N)) & 1).astype(np.uint8)


def product_weights(states, p):
    """Probability of each row under independent Bernoulli(p) coordinates."""
    p = np.asarray(p, dtype=float)
    x = states.astype(float)
    return np.prod(np.where(x == 1, p, 1 - p), axis=1)

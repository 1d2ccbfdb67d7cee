"""Seeded synthetic graphs for experiments and randomized test suites.

Random generators take a mandatory seed so that every run of a suite sees
the same graphs; the deterministic shapes (ring, star) need none.
"""

from __future__ import annotations

import numpy as np

from .errors import ValidationError
from .graph import Graph, is_connected, is_strongly_connected

__all__ = [
    "erdos_renyi",
    "ring",
    "star",
    "connected_erdos_renyi",
    "strongly_connected_digraph",
]


def erdos_renyi(n: int, p: float, seed: int, *, directed: bool = False) -> Graph:
    """G(n, p) with independent edge draws; reproducible for a fixed seed."""
    if n < 1:
        raise ValidationError("erdos_renyi requires n >= 1")
    if not (0.0 <= p <= 1.0):
        raise ValidationError(f"edge probability must be in [0, 1], got {p}")
    rng = np.random.default_rng(seed)
    if directed:
        ii, jj = np.where(~np.eye(n, dtype=bool))
    else:
        ii, jj = np.triu_indices(n, k=1)
    mask = rng.random(ii.shape[0]) < p
    edges = list(zip(ii[mask].tolist(), jj[mask].tolist()))
    return Graph.from_edges(n, edges, directed=directed)


def ring(n: int, *, directed: bool = False) -> Graph:
    """Cycle 0-1-...-(n-1)-0."""
    if n < 3:
        raise ValidationError("ring requires n >= 3")
    edges = [(i, (i + 1) % n) for i in range(n)]
    return Graph.from_edges(n, edges, directed=directed)


def star(n: int, *, directed: bool = False) -> Graph:
    """Hub node 0 joined to nodes 1..n-1 (hub -> leaf when directed)."""
    if n < 2:
        raise ValidationError("star requires n >= 2")
    edges = [(0, i) for i in range(1, n)]
    return Graph.from_edges(n, edges, directed=directed)


def connected_erdos_renyi(n: int, p: float, seed: int,
                          max_tries: int = 200) -> Graph:
    """First connected G(n, p) sample along the seed sequence seed, seed+1, ..."""
    for attempt in range(max_tries):
        g = erdos_renyi(n, p, seed + attempt)
        if is_connected(g):
            return g
    raise ValidationError(
        f"no connected G({n}, {p}) sample found in {max_tries} attempts "
        f"starting at seed {seed}")


def strongly_connected_digraph(n: int, p: float, seed: int) -> Graph:
    """Random digraph guaranteed strongly connected.

    Draws directed G(n, p) and overlays a Hamiltonian cycle through a random
    node permutation, which makes every node reachable from every other while
    keeping edge weights binary.
    """
    if n < 2:
        raise ValidationError("strongly_connected_digraph requires n >= 2")
    if not (0.0 <= p <= 1.0):
        raise ValidationError(f"edge probability must be in [0, 1], got {p}")
    rng = np.random.default_rng(seed)
    ii, jj = np.where(~np.eye(n, dtype=bool))
    mask = rng.random(ii.shape[0]) < p
    pairs = set(zip(ii[mask].tolist(), jj[mask].tolist()))
    perm = rng.permutation(n)
    for a, b in zip(perm, np.roll(perm, -1)):
        pairs.add((int(a), int(b)))
    g = Graph.from_edges(n, sorted(pairs), directed=True)
    assert is_strongly_connected(g)
    return g

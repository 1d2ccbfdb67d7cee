"""Bundled demonstration graphs and their reference tables.

Two small fixtures ship with the package: the classic 34-node karate-club
friendship network (binary, undirected — the standard benchmark for
walk-based centrality experiments) and a six-node digraph whose PageRank
values are known to many published digits, used by the ``pagerank-demo``
CLI command and the acceptance suite.

The reference tables below quote the published values verbatim together
with per-entry comparison tolerances. Two entries of the alpha = 0.9 table
are printed to only four significant decimals in the source material (the
trailing digit is padding — the printed row sums to 0.99998), so those two
carry a coarser tolerance; the exact rational solutions are also included
for a sharp cross-check.
"""

from __future__ import annotations

import io
from fractions import Fraction

import numpy as np

from .graph import Graph, load_edge_list

__all__ = [
    "karate",
    "six_node_digraph",
    "SIX_NODE_ALPHAS",
    "SIX_NODE_PAGERANK_TABLE",
    "SIX_NODE_PAGERANK_TOL",
    "SIX_NODE_PAGERANK_EXACT_09",
    "SIX_NODE_H_ROWSUMS",
    "SIX_NODE_RANKING_LABELS",
]

_KARATE_EDGES = """\
1 2
1 3
1 4
1 5
1 6
1 7
1 8
1 9
1 11
1 12
1 13
1 14
1 18
1 20
1 22
1 32
2 3
2 4
2 8
2 14
2 18
2 20
2 22
2 31
3 4
3 8
3 9
3 10
3 14
3 28
3 29
3 33
4 8
4 13
4 14
5 7
5 11
6 7
6 11
6 17
7 17
9 31
9 33
9 34
10 34
14 34
15 33
15 34
16 33
16 34
19 33
19 34
20 34
21 33
21 34
23 33
23 34
24 26
24 28
24 30
24 33
24 34
25 26
25 28
25 32
26 32
27 30
27 34
28 34
29 32
29 34
30 33
30 34
31 33
31 34
32 33
32 34
33 34
"""

_SIX_NODE_EDGES = """\
1 2
1 3
3 1
3 2
3 5
4 5
4 6
5 4
5 6
6 4
"""


def karate() -> Graph:
    """The 34-node, 78-edge karate-club graph (undirected, unweighted)."""
    return load_edge_list(io.StringIO(_KARATE_EDGES), directed=False,
                          index_base=1)


def six_node_digraph() -> Graph:
    """Six-node digraph used by the PageRank demo (node 2 is dangling)."""
    return load_edge_list(io.StringIO(_SIX_NODE_EDGES), directed=True,
                          index_base=1)


# -- reference tables for the six-node fixture ------------------------------

SIX_NODE_ALPHAS = (0.9, 0.1, 0.01, 0.001)

SIX_NODE_PAGERANK_TABLE = {
    0.9: np.array([0.03721, 0.05396, 0.04151, 0.37510, 0.20600, 0.28620]),
    0.1: np.array([0.15812, 0.16603, 0.16067, 0.17812, 0.16703, 0.17002]),
    0.01: np.array([0.16583, 0.16666, 0.16610, 0.16778, 0.16667, 0.16695]),
    0.001: np.array([0.1665833, 0.1666666, 0.1666111, 0.1667778, 0.1666667,
                     0.1666945]),
}

# half-ulp of the printed precision, per entry; entries 4 and 6 of the 0.9
# table are only good to four decimals (zero-padded in the source), and
# entry 3 of the 0.01 table is truncated rather than rounded (the exact
# value 0.1661069... is printed as .16610)
SIX_NODE_PAGERANK_TOL = {
    0.9: np.array([5e-6, 5e-6, 5e-6, 5e-5, 5e-6, 5e-5]),
    0.1: np.array([5e-6] * 6),
    0.01: np.array([5e-6, 5e-6, 1e-5, 5e-6, 5e-6, 5e-6]),
    0.001: np.array([5e-8] * 6),
}

# exact solution of (I - 0.9 S) x = v, x normalized, by rational elimination
SIX_NODE_PAGERANK_EXACT_09 = (
    Fraction(260, 6987),
    Fraction(377, 6987),
    Fraction(290, 6987),
    Fraction(76000, 202623),
    Fraction(41740, 202623),
    Fraction(2000, 6987),
)

SIX_NODE_H_ROWSUMS = (
    Fraction(1, 3),
    Fraction(5, 6),
    Fraction(1, 2),
    Fraction(3, 2),
    Fraction(5, 6),
    Fraction(1, 1),
)

# ranking shared by every alpha in the table (and by the H row sums, where
# nodes 2 and 5 are tied for third place)
SIX_NODE_RANKING_LABELS = (4, 6, 5, 2, 3, 1)

"""Walk-based centrality measures.

Every function returns a :class:`CentralityVector` whose ``scores`` are
indexed by internal node id. For directed graphs the ``side`` argument picks
the role being scored: ``"broadcast"`` ranks nodes as originators of walks
(rows of ``A``, out-edges), ``"receive"`` as targets (columns of ``A``).
Undirected graphs report ``side="symmetric"`` since both roles coincide.

Parameterized measures record the parameter value actually used, including
resolved defaults, so results are self-describing.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import ConvergenceError, ValidationError
from .graph import Graph, degrees, is_connected
from .series import (
    EXPONENTIAL,
    RESOLVENT,
    exp_action,
    fa_diagonal,
    resolvent_solve,
)
from .spectral import DEFAULT_MAX_ITER, DEFAULT_TOL, dominant_eigenpair

__all__ = [
    "CentralityVector",
    "degree_centrality",
    "eigenvector_centrality",
    "katz",
    "resolvent_subgraph",
    "exp_subgraph",
    "total_communicability",
    "hits",
]

DEFAULT_ALPHA_FRACTION = 0.85  # default alpha = 0.85 / lambda1
DEFAULT_BETA = 1.0


@dataclass(frozen=True)
class CentralityVector:
    """A named, parameterized score vector over the nodes of one graph."""

    measure: str
    side: str  # "broadcast" | "receive" | "symmetric"
    parameter: float | None
    scores: np.ndarray
    solver_meta: dict = field(default_factory=dict)
    preference: str | None = None

    def __post_init__(self):
        self.scores.setflags(write=False)


def _resolve_side(g: Graph, side: str) -> str:
    if side not in ("broadcast", "receive"):
        raise ValidationError(
            f"side must be 'broadcast' or 'receive', got {side!r}")
    return side if g.directed else "symmetric"


def degree_centrality(g: Graph, *, side: str = "broadcast") -> CentralityVector:
    """Weighted out-degree (broadcast) or in-degree (receive)."""
    resolved = _resolve_side(g, side)
    out, in_ = degrees(g)
    scores = out if (resolved == "symmetric" or side == "broadcast") else in_
    return CentralityVector("degree", resolved, None, scores.copy())


def eigenvector_centrality(g: Graph, *, side: str = "broadcast",
                           tol: float = DEFAULT_TOL,
                           max_iter: int = DEFAULT_MAX_ITER) -> CentralityVector:
    """Entries of the dominant eigenvector (right for broadcast, left for
    receive), normalized to unit 2-norm."""
    resolved = _resolve_side(g, side)
    which = "right" if (resolved == "symmetric" or side == "broadcast") else "left"
    info = dominant_eigenpair(g, side=which, tol=tol, max_iter=max_iter)
    meta = {"lambda1": info.lambda1, "iterations": info.iterations,
            "residual": info.residual}
    return CentralityVector("eigenvector", resolved, None,
                            info.dominant_vector.copy(), meta)


def katz(g: Graph, alpha: float | None = None, *, side: str = "broadcast",
         tol: float = DEFAULT_TOL) -> CentralityVector:
    """Katz scores ``(I - alpha A)^{-1} 1`` (transposed for receive).

    ``alpha`` defaults to ``0.85 / lambda1`` and must stay below
    ``1 / lambda1``.
    """
    resolved = _resolve_side(g, side)
    info = dominant_eigenpair(g, tol=tol)
    if alpha is None:
        alpha = DEFAULT_ALPHA_FRACTION / info.lambda1
    transpose = g.directed and side == "receive"
    ones = np.ones(g.n)
    scores = resolvent_solve(g, alpha, ones, tol=tol, transpose=transpose,
                             lambda1=info.lambda1)
    meta = {"lambda1": info.lambda1, "alpha_max": 1.0 / info.lambda1}
    return CentralityVector("katz", resolved, float(alpha), scores, meta)


def resolvent_subgraph(g: Graph, alpha: float | None = None,
                       *, tol: float = DEFAULT_TOL) -> CentralityVector:
    """Diagonal resolvent scores ``[(I - alpha A)^{-1}]_ii`` (undirected)."""
    info = dominant_eigenpair(g, tol=tol)
    if alpha is None:
        alpha = DEFAULT_ALPHA_FRACTION / info.lambda1
    scores = fa_diagonal(g, RESOLVENT, alpha, tol=tol)
    meta = {"lambda1": info.lambda1, "alpha_max": 1.0 / info.lambda1}
    return CentralityVector("resolvent-subgraph", "symmetric", float(alpha),
                            scores, meta)


def exp_subgraph(g: Graph, beta: float = DEFAULT_BETA,
                 *, tol: float = DEFAULT_TOL) -> CentralityVector:
    """Diagonal exponential scores ``[exp(beta A)]_ii`` (undirected)."""
    scores = fa_diagonal(g, EXPONENTIAL, beta, tol=tol)
    return CentralityVector("exp-subgraph", "symmetric", float(beta), scores)


def total_communicability(g: Graph, beta: float = DEFAULT_BETA,
                          *, side: str = "broadcast",
                          tol: float = DEFAULT_TOL) -> CentralityVector:
    """Row sums ``exp(beta A) 1`` (broadcast) or column sums (receive)."""
    resolved = _resolve_side(g, side)
    transpose = g.directed and side == "receive"
    scores = exp_action(g, beta, np.ones(g.n), tol=tol, transpose=transpose)
    return CentralityVector("total-communicability", resolved, float(beta),
                            scores)


def hits(g: Graph, *, tol: float = DEFAULT_TOL,
         max_iter: int = DEFAULT_MAX_ITER) -> tuple[CentralityVector,
                                                    CentralityVector]:
    """Hub and authority scores by alternating power iteration.

    Hubs are the dominant eigenvector of ``A A^T``, authorities of
    ``A^T A``; each half-step normalizes in 2-norm, and convergence is
    declared when the Rayleigh quotient of ``A A^T`` at the hub iterate has
    residual below ``tol`` relative to itself. Requires a (weakly) connected
    graph with at least one edge; entries can be zero for nodes that play
    only one of the two roles.
    """
    if g.m == 0:
        raise ValidationError("HITS requires at least one edge")
    if not is_connected(g):
        raise ValidationError(
            "HITS requires a connected graph (hub/authority scores decouple "
            "across components)")
    n = g.n
    h = np.full(n, 1.0 / np.sqrt(n))
    a = np.zeros(n)
    sigma = 0.0
    residual = np.inf
    for it in range(1, max_iter + 1):
        a = g.matvec_t(h)
        a_norm = np.linalg.norm(a)
        a /= a_norm
        h_new = g.matvec(a)
        h_norm = np.linalg.norm(h_new)
        h = h_new / h_norm
        # Rayleigh quotient of A A^T at h, with its residual
        w = g.matvec(g.matvec_t(h))
        sigma = float(h @ w)
        residual = float(np.linalg.norm(w - sigma * h))
        if residual <= tol * max(sigma, np.finfo(float).tiny):
            break
    else:
        raise ConvergenceError(
            f"HITS did not reach tol={tol} within {max_iter} iterations "
            f"(last residual {residual:.3e})", best=(h, a), residual=residual)
    meta = {"sigma": sigma, "iterations": it, "residual": residual}
    hub_side = "symmetric" if not g.directed else "broadcast"
    auth_side = "symmetric" if not g.directed else "receive"
    hubs = CentralityVector("hits-hub", hub_side, None, h, dict(meta))
    authorities = CentralityVector("hits-authority", auth_side, None, a,
                                   dict(meta))
    return hubs, authorities

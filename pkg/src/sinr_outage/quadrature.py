"""Adaptive panel quadrature used by the CGF models and the inversion engine.

Panels are integrated with a Gauss-Legendre 16/32 pair; the difference between
the two rules is the per-panel error estimate and drives bisection.  Callers
pass an absolute tolerance on the integral (the natural scale here is a
probability, so relative control happens one level up).
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import AccuracyError


@lru_cache(maxsize=None)
def gl_nodes(n: int):
    """Cached Gauss-Legendre nodes/weights on [-1, 1]."""
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def integrate_adaptive(f, lo: float, hi: float, atol: float,
                       max_depth: int = 60, edges=None):
    """Adaptively integrate ``f`` over [lo, hi].

    ``f`` maps an array of points to an array of (possibly complex) values.
    ``edges`` optionally seeds interior break points (knees, oscillation
    half-periods).  Returns (value, err_estimate, n_eval).  Panels that still
    disagree at ``max_depth`` are accepted with their error recorded rather
    than raising: the caller owns the accuracy verdict via the estimate.
    """
    x16, w16 = gl_nodes(16)
    x32, w32 = gl_nodes(32)
    pts = [lo, hi] if edges is None else [lo] + [e for e in edges if lo < e < hi] + [hi]
    stack = [(pts[i], pts[i + 1], 0) for i in range(len(pts) - 1)]
    total = 0.0 + 0.0j
    err = 0.0
    n_eval = 0
    while stack:
        a, b, depth = stack.pop()
        h = 0.5 * (b - a)
        m = 0.5 * (a + b)
        v32 = h * np.dot(f(m + h * x32), w32)
        v16 = h * np.dot(f(m + h * x16), w16)
        n_eval += 48
        e = abs(v32 - v16)
        if e <= atol or depth >= max_depth:
            total += v32
            err += e
        else:
            stack.append((a, m, depth + 1))
            stack.append((m, b, depth + 1))
    if np.iscomplexobj(np.asarray(total)) and total.imag == 0.0:
        return total.real, err, n_eval
    return total, err, n_eval


def integrate_panels(f, edges, order: int = 16):
    """Fixed-order GL integration over prescribed panels, batched in one call.

    ``f`` receives the concatenated node array; weights are scaled per panel.
    Returns the integral only (no error estimate) -- used where the panel
    edges already guarantee resolution (half-period splitting).
    """
    x, w = gl_nodes(order)
    edges = np.asarray(edges, dtype=float)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return f(nodes) @ weights


def require_converged(err: float, atol: float, what: str, partial=None):
    """Raise AccuracyError when an error estimate misses its tolerance."""
    if not err <= atol:
        raise AccuracyError(
            f"{what}: error estimate {err:.3e} exceeds tolerance {atol:.3e}",
            partial=partial, err_estimate=err)

"""Adaptive panel quadrature with a fixed 15-point Gauss-Legendre rule.

Panels are bisected until the whole-panel estimate agrees with the sum of the
two half-panel estimates.  Supports vector-valued integrands: ``f`` receives a
node array of shape (k,) and may return shape (k,) or (m, k); the integral has
shape () or (m,) accordingly.
"""

from __future__ import annotations

import numpy as np

from .errors import ConvergenceError

_NODES, _WEIGHTS = np.polynomial.legendre.leggauss(15)


def _panel(f, a, b):
    half = 0.5 * (b - a)
    y = np.asarray(f(0.5 * (a + b) + half * _NODES))
    return half * (y @ _WEIGHTS)


def adaptive_gauss(f, a, b, abs_tol, max_depth=60, max_panels=20000):
    """Integrate f over [a, b] to absolute tolerance ``abs_tol``.

    Returns (integral, error_estimate).  Raises ConvergenceError when a panel
    cannot be resolved within ``max_depth`` bisections or the panel budget
    is exhausted.
    """
    total = None
    err = 0.0
    panels = 0
    stack = [(float(a), float(b), _panel(f, a, b), 0)]
    while stack:
        lo, hi, whole, depth = stack.pop()
        panels += 1
        if panels > max_panels:
            raise ConvergenceError(
                f"quadrature exhausted its panel budget on [{a!r}, {b!r}] "
                f"(tol={abs_tol:.3e})"
            )
        mid = 0.5 * (lo + hi)
        left = _panel(f, lo, mid)
        right = _panel(f, mid, hi)
        diff = float(np.max(np.abs(left + right - whole)))
        # Rounding floor: further splitting cannot beat this.
        floor = 4e-16 * float(np.max(np.abs(whole)) + np.max(np.abs(left)) + np.max(np.abs(right)))
        if diff <= 0.1 * abs_tol or diff <= floor:
            contrib = left + right
            total = contrib if total is None else total + contrib
            # Richardson-style estimate: the refined panel is ~15x closer.
            err += diff / 15.0
        elif depth >= max_depth:
            raise ConvergenceError(
                f"quadrature panel [{lo!r}, {hi!r}] failed to converge "
                f"(diff={diff:.3e}, tol={abs_tol:.3e})"
            )
        else:
            stack.append((lo, mid, left, depth + 1))
            stack.append((mid, hi, right, depth + 1))
    if total is None:
        total = np.zeros(np.shape(_panel(f, a, b)))
    return total, err


def composite_estimate(f, a, b, panels=8):
    """Cheap non-adaptive estimate used to set absolute tolerances."""
    edges = np.linspace(a, b, panels + 1)
    total = None
    for lo, hi in zip(edges[:-1], edges[1:]):
        p = _panel(f, lo, hi)
        total = p if total is None else total + p
    return total

"""Singularity-aware quadrature helpers.

The period integrands look like g(s)/sqrt(1 - s^m) on [0, 1]: smooth except
for an inverse-square-root blowup at the right endpoint.  The tanh-sinh
(double exponential) change of variables handles that, provided the node map
also reports the distance to the endpoint so 1 - s can be formed without
cancellation.
"""

from __future__ import annotations

import math
from typing import Callable

_HALF_PI = math.pi / 2.0


def tanh_sinh_nodes(level: int):
    """Trapezoid nodes for [0, 1] at mesh h = 2^-level.

    Returns a list of (s, dist_right, weight) with s in (0, 1) and
    dist_right = 1 - s computed in a cancellation-free form.
    """
    h = 2.0 ** (-level)
    nodes = []
    k = 0
    while True:
        t = k * h
        sh = _HALF_PI * math.sinh(t)
        ch = math.cosh(sh)
        # s = (1 + tanh(sh))/2 maps t to (0, 1); ds/dt includes the 1/2.
        w = 0.5 * h * _HALF_PI * math.cosh(t) / (ch * ch)
        one_minus = math.exp(-sh) / ch  # 1 - tanh(sh), stable for sh >> 1
        one_plus = math.exp(sh) / ch  # 1 + tanh(sh)
        s_hi, d_hi = 0.5 * one_plus, 0.5 * one_minus
        s_lo, d_lo = 0.5 * one_minus, 0.5 * one_plus
        if k == 0:
            nodes.append((s_hi, d_hi, w))
        else:
            if d_hi > 0.0:
                nodes.append((s_hi, d_hi, w))
            if s_lo > 0.0:
                nodes.append((s_lo, d_lo, w))
            if w < 1e-320 or d_hi == 0.0:
                break
        if t > 6.8:
            break
        k += 1
    return nodes


def integrate_unit(
    f: Callable[[float, float], float],
    rel_tol: float = 1e-12,
    max_level: int = 12,
) -> float:
    """Integrate f over (0, 1); f takes (s, 1 - s).

    Doubles the tanh-sinh node count until the relative change drops below
    rel_tol or the level budget is spent.
    """
    prev = None
    total = 0.0
    for level in range(3, max_level + 1):
        total = 0.0
        for s, d, w in tanh_sinh_nodes(level):
            total += w * f(s, d)
        if prev is not None:
            scale = max(abs(total), 1e-300)
            if abs(total - prev) <= rel_tol * scale:
                return total
        prev = total
    return total


def gauss_legendre(f: Callable[[float], float], a: float, b: float, n: int = 64) -> float:
    """Plain Gauss-Legendre rule for smooth integrands."""
    import numpy as np

    x, w = np.polynomial.legendre.leggauss(n)
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    return half * float(np.sum(w * np.array([f(mid + half * xi) for xi in x])))

"""Adaptive Gauss-Legendre quadrature at arbitrary precision.

15-point panels refined by bisection with an absolute-plus-relative
stopping rule.  Nodes are generated per call by Newton iteration on the
Legendre polynomial at the working precision, so the module keeps no
shared state.
"""

from __future__ import annotations

import math


def gauss_legendre_rule(npts: int, mp):
    """Nodes and weights of the npts-point rule on [-1, 1]."""
    nodes = []
    weights = []
    eps = mp.mpf(2) ** (-mp.prec + 4)
    for i in range(npts):
        # float seed, then Newton at working precision
        x = mp.mpf(math.cos(math.pi * (i + 0.75) / (npts + 0.5)))
        while True:
            p0, p1 = mp.mpf(1), x
            for k in range(2, npts + 1):
                p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
            dp = npts * (x * p1 - p0) / (x * x - 1)
            dx = p1 / dp
            x -= dx
            if abs(dx) <= eps * max(abs(x), mp.mpf(1)):
                break
        p0, p1 = mp.mpf(1), x
        for k in range(2, npts + 1):
            p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
        dp = npts * (x * p1 - p0) / (x * x - 1)
        nodes.append(x)
        weights.append(2 / ((1 - x * x) * dp * dp))
    return nodes, weights


def _panel(f, a, b, nodes, weights, mp):
    mid = (a + b) / 2
    half = (b - a) / 2
    s = mp.mpf(0)
    for x, w in zip(nodes, weights):
        s += w * f(mid + half * x)
    return half * s


def adaptive_gauss_legendre(f, a, b, mp, rel_tol, npts: int = 15, max_depth: int = 40):
    """Integrate f on [a, b] to the requested relative tolerance.

    Returns (value, error_estimate).  Each panel's error is estimated by
    comparing the one-panel value against its two halves; panels are
    bisected until the summed estimates meet rel_tol times the integral
    scale (plus a tiny absolute floor to survive an exactly zero result).
    """
    a = mp.convert(a)
    b = mp.convert(b)
    rel_tol = mp.convert(rel_tol)
    if a == b:
        return mp.mpf(0), mp.mpf(0)
    nodes, weights = gauss_legendre_rule(npts, mp)

    whole = _panel(f, a, b, nodes, weights, mp)
    scale = abs(whole) + mp.mpf(2) ** (-mp.prec)
    # stack of (a, b, one-panel value, depth)
    stack = [(a, b, whole, 0)]
    total = mp.mpf(0)
    err = mp.mpf(0)
    while stack:
        pa, pb, pv, depth = stack.pop()
        pm = (pa + pb) / 2
        left = _panel(f, pa, pm, nodes, weights, mp)
        right = _panel(f, pm, pb, nodes, weights, mp)
        diff = abs(pv - (left + right))
        # local budget: tolerance weighted by panel share of the interval
        budget = rel_tol * scale * (pb - pa) / (b - a)
        if diff <= budget or depth >= max_depth:
            total += left + right
            err += diff
        else:
            stack.append((pa, pm, left, depth + 1))
            stack.append((pm, pb, right, depth + 1))
    return total, err

"""Pure-Python/numpy implementations of the numeric kernels.

Used when the compiled ``_ckernels`` extension is not importable, or when
``FUZZYSOS_PURE=1`` is set. Signatures match ``_ckernels`` exactly.
"""
from bisect import bisect_right

import numpy as np


def pwl_eval(xs, mus, x):
    """Evaluate a piecewise-linear function, clamped to its end values."""
    n = len(xs)
    if x <= xs[0]:
        return float(mus[0])
    if x >= xs[n - 1]:
        return float(mus[n - 1])
    k = bisect_right(xs, x) - 1
    x0, x1 = xs[k], xs[k + 1]
    m0, m1 = mus[k], mus[k + 1]
    return float(m0 + (m1 - m0) * (x - x0) / (x1 - x0))


def clipped_centroid(lo, hi, n, xs, mus, offsets, clips):
    """Centroid of max_j min(mu_j(x), clips[j]) over a uniform n-point grid.

    ``xs``/``mus`` hold every term's breakpoints back to back; term ``j``
    occupies ``offsets[j]:offsets[j + 1]``. Trapezoid rule; returns
    ``(numerator, denominator)`` with the common grid step factored out.
    """
    grid = lo + (hi - lo) * (np.arange(n, dtype=np.float64) / (n - 1))
    agg = np.zeros(n, dtype=np.float64)
    for j in range(len(clips)):
        c = clips[j]
        if c <= 0.0:
            continue
        a, b = offsets[j], offsets[j + 1]
        np.maximum(agg, np.minimum(np.interp(grid, xs[a:b], mus[a:b]), c), out=agg)
    w = np.ones(n, dtype=np.float64)
    w[0] = w[-1] = 0.5
    wa = w * agg
    return float(np.dot(wa, grid)), float(wa.sum())

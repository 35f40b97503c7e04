"""Golden-section search for convex functions of one real variable.

Both routines only rely on convexity (unimodality with possibly flat
minima), which is what norms along a line provide.
"""
from __future__ import annotations

import math

import numpy as np

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def iterations_for(width: float, tol: float) -> int:
    """Number of golden-section steps that shrink ``width`` below ``tol``."""
    if width <= tol:
        return 0
    return int(math.ceil(math.log(tol / width) / math.log(INV_PHI)))


def golden_section(f, lo: float, hi: float, tol: float = 1e-12, max_iter: int = 200):
    """Minimize a convex scalar function on ``[lo, hi]``.

    Returns ``(argmin, fmin, evaluations)``. ``fmin`` is the smallest value
    actually evaluated, the endpoints included, so it never undershoots the
    true minimum.
    """
    n_iter = min(max_iter, iterations_for(hi - lo, tol))
    c = hi - INV_PHI * (hi - lo)
    d = lo + INV_PHI * (hi - lo)
    fc, fd = f(c), f(d)
    best_x, best_f = (c, fc) if fc <= fd else (d, fd)
    evals = 2
    for x_end in (lo, hi):
        fe = f(x_end)
        evals += 1
        if fe < best_f:
            best_x, best_f = x_end, fe
    for _ in range(n_iter):
        if fc <= fd:
            hi, d, fd = d, c, fc
            c = hi - INV_PHI * (hi - lo)
            fc = f(c)
            if fc < best_f:
                best_x, best_f = c, fc
        else:
            lo, c, fc = c, d, fd
            d = lo + INV_PHI * (hi - lo)
            fd = f(d)
            if fd < best_f:
                best_x, best_f = d, fd
        evals += 1
    return best_x, best_f, evals


def golden_section_batch(f, lo, hi, n_iter: int, extra=None):
    """Vectorized golden-section search over independent brackets.

    ``f`` maps an array of abscissae (one per problem) to an array of
    values. ``lo`` and ``hi`` are arrays of bracket ends. ``extra`` is an
    optional array of abscissae evaluated once up front (for example a known
    feasible point) whose values take part in the running minimum.

    Returns ``(argmin, fmin, evaluations_per_problem)``.
    """
    lo = np.array(lo, dtype=float)
    hi = np.array(hi, dtype=float)
    c = hi - INV_PHI * (hi - lo)
    d = lo + INV_PHI * (hi - lo)
    fc, fd = f(c), f(d)
    take_c = fc <= fd
    best_x = np.where(take_c, c, d)
    best_f = np.where(take_c, fc, fd)
    evals = 2
    probes = [lo, hi] if extra is None else [lo, hi, np.broadcast_to(extra, lo.shape)]
    for xs in probes:
        fs = f(xs)
        better = fs < best_f
        best_x = np.where(better, xs, best_x)
        best_f = np.where(better, fs, best_f)
        evals += 1
    for _ in range(n_iter):
        left = fc <= fd
        new_hi = np.where(left, d, hi)
        new_lo = np.where(left, lo, c)
        probe = np.where(left, new_hi - INV_PHI * (new_hi - new_lo),
                         new_lo + INV_PHI * (new_hi - new_lo))
        fp = f(probe)
        c, d = np.where(left, probe, d), np.where(left, c, probe)
        fc, fd = np.where(left, fp, fd), np.where(left, fc, fp)
        lo, hi = new_lo, new_hi
        better = fp < best_f
        best_x = np.where(better, probe, best_x)
        best_f = np.where(better, fp, best_f)
        evals += 1
    return best_x, best_f, evals

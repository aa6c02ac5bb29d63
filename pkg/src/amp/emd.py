"""Empirical mode decomposition by iterative sifting.

The decomposition peels oscillatory modes off a signal one at a time, fastest
first.  Each mode is obtained by repeatedly subtracting the mean of the upper
and lower extrema envelopes until the candidate stabilizes; what remains after
all modes are removed is a low-frequency residual trend.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

logger = logging.getLogger(__name__)

__all__ = ["EMDOptions", "sift", "interior_extrema"]


@dataclass(frozen=True)
class EMDOptions:
    """Tuning knobs for the sifting loop.

    sift_tolerance
        A sift pass stops once the normalized squared change between
        successive candidates, ``sum((h_prev - h_new)**2) / sum(h_prev**2)``,
        drops below this value.
    max_sift_iters
        Hard cap on envelope subtractions within one pass.
    max_imfs
        Hard cap on the number of extracted modes.
    residual_range_tol
        Extraction also stops when the residual's peak-to-peak range falls
        below this fraction of the input's range; at that point the leftover
        is numerical dust rather than a mode.
    """

    sift_tolerance: float = 0.2
    max_sift_iters: int = 100
    max_imfs: int = 16
    residual_range_tol: float = 1e-2


def interior_extrema(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Indices of strict interior maxima and minima of ``x``.

    Runs of equal values are treated as a single point located at the middle
    of the run, so plateaus produce one extremum rather than none or many.
    Endpoints never qualify.  Returns ``(max_indices, min_indices)``.
    """
    x = np.asarray(x, dtype=float)
    n = x.size
    change = np.nonzero(np.diff(x))[0]
    if change.size < 2:
        empty = np.empty(0, dtype=int)
        return empty, empty
    starts = np.concatenate(([0], change + 1))
    ends = np.concatenate((change, [n - 1]))  # inclusive end of each run
    v = x[starts]
    mid = (starts + ends) // 2

    inner = v[1:-1]
    is_max = (inner > v[:-2]) & (inner > v[2:])
    is_min = (inner < v[:-2]) & (inner < v[2:])
    return mid[1:-1][is_max], mid[1:-1][is_min]


def _envelope(x: np.ndarray, idx: np.ndarray) -> np.ndarray:
    """Cubic-spline envelope through the extrema at ``idx``.

    The two extrema nearest each end are mirrored beyond the window so the
    spline is anchored on both sides instead of extrapolating freely.
    """
    n = x.size
    val = x[idx]
    k = min(2, idx.size)
    left_t = -idx[:k][::-1]
    left_v = val[:k][::-1]
    right_t = 2 * (n - 1) - idx[-k:][::-1]
    right_v = val[-k:][::-1]
    knots_t = np.concatenate((left_t, idx, right_t))
    knots_v = np.concatenate((left_v, val, right_v))
    return CubicSpline(knots_t, knots_v)(np.arange(n))


def _envelope_mean(h: np.ndarray) -> np.ndarray | None:
    maxima, minima = interior_extrema(h)
    if maxima.size < 2 or minima.size < 2:
        return None
    upper = _envelope(h, maxima)
    lower = _envelope(h, minima)
    return 0.5 * (upper + lower)


def sift(x: np.ndarray, opts: EMDOptions | None = None) -> tuple[list[np.ndarray], np.ndarray]:
    """Decompose ``x`` into intrinsic mode functions plus a residual.

    Parameters
    ----------
    x : ndarray
        Input signal, typically mean-centred.
    opts : EMDOptions, optional
        Stopping parameters; defaults are usually fine.

    Returns
    -------
    imfs : list of ndarray
        Extracted modes in extraction order, fastest oscillation first.
        Empty when the input has fewer than two interior maxima or minima.
    residual : ndarray
        ``x - sum(imfs)``; the identity holds to machine precision by
        construction.

    Notes
    -----
    Each mode is refined by subtracting the mean of the upper and lower
    cubic-spline envelopes until the relative squared change between passes
    falls under ``opts.sift_tolerance``.  Extraction ends when the residual
    is monotone enough to lack two maxima or two minima, when its range is
    negligible next to the input's, or at ``opts.max_imfs``.
    """
    if opts is None:
        opts = EMDOptions()
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size < 4:
        raise ValueError("input must be a 1-d array with at least 4 samples")
    if not np.all(np.isfinite(x)):
        raise ValueError("input must be finite")

    imfs: list[np.ndarray] = []
    residual = x.copy()
    input_range = np.ptp(x)

    while len(imfs) < opts.max_imfs:
        maxima, minima = interior_extrema(residual)
        if maxima.size < 2 or minima.size < 2:
            break
        if np.ptp(residual) < opts.residual_range_tol * input_range:
            break

        h = residual
        for _ in range(opts.max_sift_iters):
            m = _envelope_mean(h)
            if m is None:
                break
            denom = float(h @ h)
            if denom == 0.0:
                break
            h_new = h - m
            delta = float(m @ m) / denom
            h = h_new
            if delta < opts.sift_tolerance:
                break

        imfs.append(h)
        residual = residual - h

    logger.debug("sift extracted %d imfs", len(imfs))
    return imfs, residual

"""Reference feature sets and distances the projection features compete with.

Two coefficient baselines (per-frequency Fourier power, full Haar detail
coefficients) and two distance baselines (Euclidean, dynamic time warping).
DTW uses squared local costs over the full alignment window with unit steps,
and reports the square root of the optimal cumulative cost, so identical
series score 0 and equal-length series never score above their Euclidean
distance.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numba
import numpy as np
from numba import njit, prange
from scipy.spatial.distance import pdist, squareform

from .core import LabeledDataset
from .project import FeatureMatrix

__all__ = [
    "DistanceMatrix",
    "fourier_power_features",
    "wavelet_coef_features",
    "dtw_distance",
    "distance_matrix",
    "apply_thread_cap",
]

_SQRT2 = np.sqrt(2.0)
# Finite stand-in for +inf on DP boundaries; never summed with itself.
_BIG = 1.0e300
_LANES = 16


def apply_thread_cap() -> int:
    """Honor the AMP_THREADS env var for numba kernels; returns the cap used.

    Unset or 0 means automatic (all available threads).
    """
    available = numba.config.NUMBA_NUM_THREADS
    raw = os.environ.get("AMP_THREADS", "0")
    try:
        cap = int(raw)
    except ValueError as exc:
        raise ValueError(f"AMP_THREADS must be an integer, got {raw!r}") from exc
    threads = available if cap <= 0 else min(cap, available)
    numba.set_num_threads(threads)
    return threads


def _as_matrix(data) -> np.ndarray:
    if isinstance(data, LabeledDataset):
        return data.matrix
    out = np.asarray(data, dtype=float)
    if out.ndim != 2:
        raise ValueError("expected a dataset or an (m, n) array")
    return out


def fourier_power_features(data) -> FeatureMatrix:
    """Per-frequency power of each mean-centred series.

    One column per frequency 1..n/2-1; the DC term is dropped and the
    Nyquist power is folded into the top frequency, so the row sum equals
    the energy of the mean-centred series.
    """
    rows = _as_matrix(data)
    n = rows.shape[1]
    if n % 2 or n < 4:
        raise ValueError("series length must be even and at least 4")
    rows = rows - rows.mean(axis=1, keepdims=True)
    spectrum = np.fft.rfft(rows, axis=1)
    power = (2.0 / n) * np.abs(spectrum[:, 1:n // 2]) ** 2
    power[:, -1] += np.abs(spectrum[:, n // 2]) ** 2 / n
    return FeatureMatrix(values=power, method="fourier-power")


def wavelet_coef_features(data) -> FeatureMatrix:
    """Full-depth Haar detail coefficients of each mean-centred series.

    Columns are scale-major, coarsest scale first, time-ordered within each
    scale: n - 1 columns for length-n series.
    """
    rows = _as_matrix(data)
    rows = rows - rows.mean(axis=1, keepdims=True)
    n = rows.shape[1]
    if n & (n - 1) or n < 2:
        raise ValueError("series length must be a power of two")
    blocks = []
    approx = rows
    while approx.shape[1] > 1:
        even = approx[:, 0::2]
        odd = approx[:, 1::2]
        blocks.append((even - odd) / _SQRT2)
        approx = (even + odd) / _SQRT2
    return FeatureMatrix(values=np.hstack(blocks[::-1]), method="wavelet-coef")


@njit(cache=True)
def _dtw_single(x, y):
    n = x.shape[0]
    m = y.shape[0]
    prev = np.empty(m + 1)
    cur = np.empty(m + 1)
    prev[0] = 0.0
    for j in range(1, m + 1):
        prev[j] = _BIG
    for i in range(1, n + 1):
        cur[0] = _BIG
        xi = x[i - 1]
        for j in range(1, m + 1):
            d = xi - y[j - 1]
            a = prev[j - 1]
            p = prev[j]
            e = cur[j - 1]
            if p < a:
                a = p
            if e < a:
                a = e
            cur[j] = d * d + a
        tmp = prev
        prev = cur
        cur = tmp
    return np.sqrt(prev[m])


@njit(parallel=True, fastmath=True, cache=True)
def _dtw_pairs(X, ii, jj, out):
    # Lockstep DP over _LANES pairs at a time: the column recurrence is
    # sequential, but lanes are independent, so the inner loop vectorizes.
    npairs = ii.shape[0]
    n = X.shape[1]
    nbatches = (npairs + _LANES - 1) // _LANES
    for t in prange(nbatches):
        lo = t * _LANES
        hi = min(lo + _LANES, npairs)
        w = hi - lo
        xt = np.zeros((n, _LANES))
        yt = np.zeros((n, _LANES))
        for b in range(w):
            xa = ii[lo + b]
            yb = jj[lo + b]
            for r in range(n):
                xt[r, b] = X[xa, r]
                yt[r, b] = X[yb, r]
        prev = np.empty((n + 1, _LANES))
        cur = np.empty((n + 1, _LANES))
        for b in range(_LANES):
            prev[0, b] = 0.0
        for j in range(1, n + 1):
            for b in range(_LANES):
                prev[j, b] = _BIG
        for i in range(1, n + 1):
            for b in range(_LANES):
                cur[0, b] = _BIG
            for j in range(1, n + 1):
                for b in range(_LANES):
                    d = xt[i - 1, b] - yt[j - 1, b]
                    a = prev[j - 1, b]
                    p = prev[j, b]
                    e = cur[j - 1, b]
                    if p < a:
                        a = p
                    if e < a:
                        a = e
                    cur[j, b] = d * d + a
            tmp = prev
            prev = cur
            cur = tmp
        for b in range(w):
            out[lo + b] = np.sqrt(prev[n, b])


def dtw_distance(x: np.ndarray, y: np.ndarray) -> float:
    """Dynamic time warping distance between two series.

    Full-window dynamic program with squared local cost and steps
    (1,0), (0,1), (1,1); returns the square root of the optimal
    cumulative cost.  Lengths may differ.
    """
    x = np.ascontiguousarray(x, dtype=float)
    y = np.ascontiguousarray(y, dtype=float)
    if x.ndim != 1 or y.ndim != 1 or x.size == 0 or y.size == 0:
        raise ValueError("inputs must be non-empty 1-d arrays")
    return float(_dtw_single(x, y))


@dataclass(frozen=True)
class DistanceMatrix:
    """Symmetric pairwise distances with a zero diagonal."""

    values: np.ndarray
    metric: str

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 2 or values.shape[0] != values.shape[1]:
            raise ValueError("distance matrix must be square")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return self.values.shape[0]


def distance_matrix(data, metric: str = "euclidean") -> DistanceMatrix:
    """All pairwise distances between rows under the chosen metric."""
    rows = _as_matrix(data)
    m = rows.shape[0]
    if metric == "euclidean":
        # Direct differences, not a gram-matrix expansion: cancellation in
        # the expansion turns duplicate rows into spurious ~1e-7 distances.
        out = squareform(pdist(rows)) if m > 1 else np.zeros((m, m))
    elif metric == "dtw":
        apply_thread_cap()
        ii, jj = np.triu_indices(m, k=1)
        flat = np.empty(ii.size)
        _dtw_pairs(np.ascontiguousarray(rows), ii.astype(np.int64),
                   jj.astype(np.int64), flat)
        out = np.zeros((m, m))
        out[ii, jj] = flat
        out = out + out.T
    else:
        raise ValueError(f"unknown metric {metric!r}")
    np.fill_diagonal(out, 0.0)
    return DistanceMatrix(values=out, metric=metric)

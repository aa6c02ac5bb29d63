"""Core containers and sample-level statistics for regularly sampled series.

A :class:`TimeSeries` is a finite, uniformly sampled real signal.  A
:class:`LabeledDataset` bundles several series that share one sampling grid,
optionally with integer group labels.  Both are frozen after construction;
the wrapped numpy arrays are marked read-only so instances can be shared
across worker threads without defensive copies.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, Sequence

import numpy as np

__all__ = [
    "TimeSeries",
    "LabeledDataset",
    "aggregate",
    "mean_center",
    "intermittence",
    "mean_intermittence",
]


def _frozen_array(values, dtype=float) -> np.ndarray:
    out = np.array(values, dtype=dtype, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class TimeSeries:
    """A uniformly sampled signal: samples[k] is the value at t0 + k*dt."""

    samples: np.ndarray
    t0: float = 0.0
    dt: float = 1.0

    def __post_init__(self):
        samples = _frozen_array(self.samples)
        if samples.ndim != 1 or samples.size == 0:
            raise ValueError("samples must be a non-empty 1-d array")
        if not np.all(np.isfinite(samples)):
            raise ValueError("samples must be finite")
        if not (self.dt > 0):
            raise ValueError("dt must be positive")
        object.__setattr__(self, "samples", samples)

    def __len__(self) -> int:
        return self.samples.size


@dataclass(frozen=True)
class LabeledDataset:
    """Series on one shared grid, with optional 1-based group labels."""

    series: tuple[TimeSeries, ...]
    labels: tuple[int, ...] | None = None
    meta: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self):
        series = tuple(self.series)
        if not series:
            raise ValueError("dataset must contain at least one series")
        first = series[0]
        for s in series[1:]:
            if len(s) != len(first) or s.t0 != first.t0 or s.dt != first.dt:
                raise ValueError("all series must share one sampling grid")
        labels = self.labels
        if labels is not None:
            labels = tuple(int(v) for v in labels)
            if len(labels) != len(series):
                raise ValueError("labels must match the number of series")
        object.__setattr__(self, "series", series)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "meta", dict(self.meta))

    def __len__(self) -> int:
        return len(self.series)

    @property
    def n_samples(self) -> int:
        return len(self.series[0])

    @property
    def t0(self) -> float:
        return self.series[0].t0

    @property
    def dt(self) -> float:
        return self.series[0].dt

    @cached_property
    def matrix(self) -> np.ndarray:
        """All series stacked row-wise into a read-only (m, n) array."""
        out = np.vstack([s.samples for s in self.series])
        out.setflags(write=False)
        return out


def aggregate(dataset: LabeledDataset | Sequence[TimeSeries]) -> TimeSeries:
    """Element-wise sum of all series in the dataset.

    All inputs must live on the same sampling grid; the result inherits it.
    """
    if isinstance(dataset, LabeledDataset):
        series = dataset.series
    else:
        series = tuple(dataset)
        if not series:
            raise ValueError("cannot aggregate an empty collection")
        dataset = LabeledDataset(series=series)  # grid-consistency check
    total = dataset.matrix.sum(axis=0)
    return TimeSeries(total, t0=dataset.t0, dt=dataset.dt)


def mean_center(x: np.ndarray) -> np.ndarray:
    """Subtract the sample mean; idempotent up to floating-point noise."""
    x = np.asarray(x, dtype=float)
    return x - x.mean()


def intermittence(x: np.ndarray, quantum: float = 1e-9) -> float:
    """Relative frequency of the most common (quantized) sample value.

    Samples are binned to ``floor(value / quantum) * quantum`` before
    counting; ``quantum=0`` counts exact float values.  A constant series
    scores 1.  The score is invariant under sample permutations.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size == 0:
        raise ValueError("input must be a non-empty 1-d array")
    if quantum < 0:
        raise ValueError("quantum must be >= 0")
    if quantum > 0:
        keys = np.floor(x / quantum)
    else:
        keys = x
    _, counts = np.unique(keys, return_counts=True)
    return float(counts.max() / x.size)


def mean_intermittence(dataset: LabeledDataset, quantum: float = 1e-9) -> float:
    """Mean of :func:`intermittence` over all series in the dataset."""
    return float(np.mean([intermittence(s.samples, quantum) for s in dataset.series]))

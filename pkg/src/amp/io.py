"""File formats: dataset JSON, feature/distance CSV, sweep configs, ingestion.

Datasets travel as JSON with full float round-trip precision (Python's float
repr is shortest-exact).  Features and distance matrices are plain CSV with
a header row.  Event logs are ingested from a two-column CSV into a smoothed
dataset on a shared grid.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import logging
from pathlib import Path

import numpy as np

from .core import LabeledDataset, TimeSeries
from .evaluate import ExperimentConfig, ExperimentResult
from .project import FeatureMatrix
from .baselines import DistanceMatrix
from .synth import smooth_events

logger = logging.getLogger(__name__)

__all__ = [
    "write_dataset",
    "read_dataset",
    "write_features",
    "read_features",
    "write_distance_matrix",
    "write_results_csv",
    "read_experiment_config",
    "ingest_events",
]


def _jsonable(value):
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def write_dataset(dataset: LabeledDataset, path) -> None:
    payload = {
        "t0": dataset.t0,
        "dt": dataset.dt,
        "labels": list(dataset.labels) if dataset.labels is not None else None,
        "meta": _jsonable(dataset.meta),
        "series": [s.samples.tolist() for s in dataset.series],
    }
    Path(path).write_text(json.dumps(payload))


def read_dataset(path) -> LabeledDataset:
    try:
        payload = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: not valid JSON ({exc})") from exc
    missing = {"t0", "dt", "labels", "meta", "series"} - set(payload)
    if missing:
        raise ValueError(f"{path}: missing keys {sorted(missing)}")
    rows = payload["series"]
    if not isinstance(rows, list) or not rows:
        raise ValueError(f"{path}: 'series' must be a non-empty list")
    t0 = float(payload["t0"])
    dt = float(payload["dt"])
    series = tuple(TimeSeries(np.asarray(row, dtype=float), t0=t0, dt=dt)
                   for row in rows)
    labels = payload["labels"]
    return LabeledDataset(series=series,
                          labels=tuple(labels) if labels is not None else None,
                          meta=payload["meta"] or {})


def write_features(features: FeatureMatrix, path) -> None:
    values = features.values
    header = ["series_index"] + [f"c_{i + 1}" for i in range(values.shape[1])]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for i, row in enumerate(values):
            writer.writerow([i] + [repr(float(v)) for v in row])


def read_features(path) -> np.ndarray:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file") from None
        if not header or header[0] != "series_index":
            raise ValueError(f"{path}: expected a 'series_index,c_1,...' header")
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise ValueError(f"{path}: line {lineno}: expected {len(header)} fields")
            try:
                rows.append([float(v) for v in row[1:]])
            except ValueError:
                raise ValueError(f"{path}: line {lineno}: non-numeric value") from None
    if not rows:
        raise ValueError(f"{path}: no feature rows")
    return np.asarray(rows)


def write_distance_matrix(dm: DistanceMatrix, path) -> None:
    values = dm.values
    header = ["series_index"] + [f"d_{i + 1}" for i in range(len(dm))]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for i, row in enumerate(values):
            writer.writerow([i] + [repr(float(v)) for v in row])


def write_results_csv(result: ExperimentResult, path) -> None:
    """One row per grid cell per method, averaged over replicates."""
    rows = result.mean_over_replicates()
    fields = ["scenario", "gamma", "amplitude", "method", "replicates",
              "failures", "rand_index", "silhouette_mean", "mean_intermittence"]
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields)
        writer.writeheader()
        for row in rows:
            writer.writerow(row)


def read_experiment_config(path, seed: int) -> ExperimentConfig:
    """Load a sweep definition; the seed is supplied by the caller."""
    try:
        payload = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(payload, dict):
        raise ValueError(f"{path}: config must be a JSON object")
    known = {f.name for f in dataclasses.fields(ExperimentConfig)}
    unknown = set(payload) - known
    if unknown:
        raise ValueError(f"{path}: unknown config keys {sorted(unknown)}")
    payload.pop("seed", None)
    for key in ("scenarios", "gammas", "amplitudes", "methods"):
        if key in payload:
            payload[key] = tuple(payload[key])
    for key in ("scenarios", "gammas", "amplitudes"):
        if key not in payload:
            raise ValueError(f"{path}: missing required key {key!r}")
    try:
        return ExperimentConfig(seed=seed, **payload)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"{path}: {exc}") from exc


def ingest_events(path, bandwidth: float, n: int, t_min: float, t_max: float) -> LabeledDataset:
    """Read a ``series_id,timestamp`` CSV and smooth it onto a shared grid.

    Timestamps are shifted to ``[0, t_max - t_min)``; events outside the
    window are ignored.  Series are ordered by first appearance.  Series
    left with no events are dropped with a logged warning.
    """
    if t_max <= t_min:
        raise ValueError("t_max must exceed t_min")
    if n < 2:
        raise ValueError("need at least two grid points")
    groups: dict[str, list[float]] = {}
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file") from None
        if [h.strip() for h in header] != ["series_id", "timestamp"]:
            raise ValueError(f"{path}: line 1: expected header 'series_id,timestamp'")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 2:
                raise ValueError(f"{path}: line {lineno}: expected 2 fields")
            sid = row[0].strip()
            if not sid:
                raise ValueError(f"{path}: line {lineno}: empty series_id")
            try:
                ts = float(row[1])
            except ValueError:
                raise ValueError(f"{path}: line {lineno}: bad timestamp {row[1]!r}") from None
            groups.setdefault(sid, []).append(ts)
    if not groups:
        raise ValueError(f"{path}: no event rows")

    horizon = t_max - t_min
    dt = horizon / n
    series = []
    kept_ids = []
    dropped = 0
    for sid, stamps in groups.items():
        times = np.sort(np.asarray(stamps)) - t_min
        times = times[(times >= 0.0) & (times < horizon)]
        if times.size == 0:
            dropped += 1
            continue
        series.append(TimeSeries(smooth_events(times, n, 0.0, dt, bandwidth),
                                 t0=0.0, dt=dt))
        kept_ids.append(sid)
    if dropped:
        logger.warning("dropped %d series with no events in [%g, %g)",
                       dropped, t_min, t_max)
    if not series:
        raise ValueError("no series with events inside the time window")
    meta = {
        "source": str(path),
        "series_ids": kept_ids,
        "dropped_series": dropped,
        "bandwidth": bandwidth,
        "t_min": t_min,
        "t_max": t_max,
    }
    return LabeledDataset(series=tuple(series), labels=None, meta=meta)

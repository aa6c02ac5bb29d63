"""Clustering-based evaluation: embedding, k-means, agreement scores, sweeps.

The experiment driver measures how well each feature or distance method
separates the two synthetic groups: k-means labels are compared to the truth
with the Rand index, and group compactness is summarized by the mean
silhouette of the true labels in a 2-d embedding.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .baselines import (
    DistanceMatrix,
    apply_thread_cap,
    distance_matrix,
    fourier_power_features,
    wavelet_coef_features,
)
from .core import LabeledDataset, mean_intermittence
from .decompose import Method
from .project import extract_features
from .synth import ScenarioConfig, build_dataset

logger = logging.getLogger(__name__)

__all__ = [
    "classical_mds",
    "kmeans",
    "silhouette_mean",
    "rand_index",
    "ExperimentConfig",
    "CellRecord",
    "ExperimentResult",
    "run_experiment",
    "FEATURE_METHODS",
    "DISTANCE_METHODS",
    "ALL_METHODS",
]

FEATURE_METHODS = ("emd-amp", "dft-amp", "dwt-amp", "dwpt-amp",
                   "fourier-power", "wavelet-coef")
DISTANCE_METHODS = ("euclidean", "dtw")
ALL_METHODS = FEATURE_METHODS + DISTANCE_METHODS


def classical_mds(distances, dims: int) -> np.ndarray:
    """Classical (Torgerson) multidimensional scaling to ``dims`` axes.

    Double-centres the squared distances, eigendecomposes, and scales the
    top eigenvectors by the square roots of their eigenvalues.  Axes with
    negative eigenvalues are zeroed.  Each axis is sign-fixed so that its
    largest-magnitude coordinate is positive, which makes the embedding
    deterministic.
    """
    D = distances.values if isinstance(distances, DistanceMatrix) else np.asarray(distances, float)
    m = D.shape[0]
    if D.ndim != 2 or D.shape != (m, m):
        raise ValueError("distances must be a square matrix")
    if not np.allclose(D, D.T, atol=1e-9):
        raise ValueError("distances must be symmetric")
    if not 1 <= dims <= m:
        raise ValueError("dims must lie in [1, m]")
    centering = np.eye(m) - np.full((m, m), 1.0 / m)
    gram = -0.5 * centering @ (D * D) @ centering
    gram = 0.5 * (gram + gram.T)
    eigval, eigvec = np.linalg.eigh(gram)
    order = np.argsort(eigval)[::-1][:dims]
    # Eigenvalues within round-off of zero are zeroed outright, not merely
    # clipped: keeping them would turn noise of size eps into coordinates of
    # size sqrt(eps), which is enough to spoil the embedding of configurations
    # with duplicate points.
    floor = 1e-12 * max(float(eigval[-1]), 0.0)
    vals = eigval[order]
    scale = np.sqrt(np.where(vals > floor, vals, 0.0))
    coords = eigvec[:, order] * scale
    for axis in range(dims):
        col = coords[:, axis]
        peak = np.argmax(np.abs(col))
        if col[peak] < 0:
            coords[:, axis] = -col
    return coords


def _kmeans_pp_init(X: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    m = X.shape[0]
    centers = np.empty((k, X.shape[1]))
    centers[0] = X[rng.integers(m)]
    d2 = ((X - centers[0]) ** 2).sum(axis=1)
    for c in range(1, k):
        total = d2.sum()
        if total > 0:
            idx = rng.choice(m, p=d2 / total)
        else:
            idx = rng.integers(m)
        centers[c] = X[idx]
        d2 = np.minimum(d2, ((X - centers[c]) ** 2).sum(axis=1))
    return centers


def _point_center_d2(X: np.ndarray, centers: np.ndarray) -> np.ndarray:
    xx = np.einsum("ij,ij->i", X, X)
    cc = np.einsum("ij,ij->i", centers, centers)
    d2 = xx[:, None] + cc[None, :] - 2.0 * (X @ centers.T)
    return np.maximum(d2, 0.0)


def _lloyd(X: np.ndarray, centers: np.ndarray,
           max_iters: int = 300) -> tuple[np.ndarray, float, list[float]]:
    """One Lloyd descent; returns (labels, final objective, objective history)."""
    k = centers.shape[0]
    m = X.shape[0]
    labels = np.full(m, -1)
    history: list[float] = []
    for _ in range(max_iters):
        d2 = _point_center_d2(X, centers)
        new_labels = d2.argmin(axis=1)
        # An emptied cluster is reseeded on the point currently worst served,
        # drawn from a cluster that can spare it, and that point is moved
        # explicitly; the donor keeps at least one member, so a single pass
        # fills every empty cluster even when all points coincide.
        for c in range(k):
            if np.any(new_labels == c):
                continue
            sizes = np.bincount(new_labels, minlength=k)
            cand = np.where(sizes[new_labels] > 1)[0]
            if cand.size == 0:
                break
            current = d2[np.arange(m), new_labels]
            farthest = cand[np.argmax(current[cand])]
            new_labels[farthest] = c
            centers[c] = X[farthest]
            d2[:, c] = ((X - centers[c]) ** 2).sum(axis=1)
        history.append(float(d2[np.arange(m), new_labels].sum()))
        if np.array_equal(new_labels, labels):
            break
        labels = new_labels
        for c in range(k):
            members = X[labels == c]
            if members.shape[0]:
                centers[c] = members.mean(axis=0)
    d2 = _point_center_d2(X, centers)
    wcss = float(d2[np.arange(m), d2.argmin(axis=1)].sum())
    history.append(wcss)
    return labels, wcss, history


def kmeans(X: np.ndarray, k: int, restarts: int = 10, seed: int = 0,
           max_iters: int = 300) -> np.ndarray:
    """Cluster rows of ``X`` into ``k`` groups; returns 0-based labels.

    Runs Lloyd's algorithm from ``restarts`` plus-plus initializations and
    keeps the assignment with the lowest within-cluster sum of squares.
    Fully deterministic for a given seed.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] < k or k < 1:
        raise ValueError("need a 2-d array with at least k rows")
    best_labels = None
    best_wcss = np.inf
    for r in range(restarts):
        rng = np.random.default_rng((seed, r))
        centers = _kmeans_pp_init(X, k, rng)
        labels, wcss, _ = _lloyd(X, centers, max_iters)
        if wcss < best_wcss:
            best_wcss = wcss
            best_labels = labels
    return best_labels


def silhouette_mean(X: np.ndarray, labels) -> float:
    """Mean silhouette of the given labeling over rows of ``X``.

    Uses Euclidean distances.  Singleton clusters score 0, as do points
    whose within and between distances are both 0.  Raises if fewer than
    two distinct labels are present.
    """
    X = np.asarray(X, dtype=float)
    labels = np.asarray(labels)
    m = X.shape[0]
    if labels.shape != (m,):
        raise ValueError("labels must match the number of rows")
    unique = np.unique(labels)
    if unique.size < 2:
        raise ValueError("silhouette requires at least two clusters")
    D = distance_matrix(X, "euclidean").values
    scores = np.empty(m)
    masks = {lab: labels == lab for lab in unique}
    for i in range(m):
        own = masks[labels[i]]
        size_own = own.sum()
        if size_own == 1:
            scores[i] = 0.0
            continue
        a = D[i, own].sum() / (size_own - 1)
        b = min(D[i, masks[lab]].mean() for lab in unique if lab != labels[i])
        denom = max(a, b)
        scores[i] = 0.0 if denom == 0 else (b - a) / denom
    return float(scores.mean())


def rand_index(pred, truth) -> float:
    """Fraction of point pairs on which two labelings agree."""
    pred = np.asarray(pred)
    truth = np.asarray(truth)
    if pred.shape != truth.shape or pred.ndim != 1 or pred.size < 2:
        raise ValueError("need two equal-length labelings of at least 2 points")
    _, pi = np.unique(pred, return_inverse=True)
    _, ti = np.unique(truth, return_inverse=True)
    table = np.zeros((pi.max() + 1, ti.max() + 1))
    np.add.at(table, (pi, ti), 1.0)

    def pairs(x):
        return float((x * (x - 1) / 2).sum())

    total = pairs(np.array([pred.size]))
    agree = total + 2 * pairs(table) - pairs(table.sum(axis=1)) - pairs(table.sum(axis=0))
    return agree / total


@dataclass(frozen=True)
class ExperimentConfig:
    """Grid definition for a benchmark sweep."""

    scenarios: tuple[str, ...]
    gammas: tuple[float, ...]
    amplitudes: tuple[float, ...]
    methods: tuple[str, ...] = ALL_METHODS
    replicates: int = 5
    m: int = 400
    n_samples: int = 1024
    horizon: float = 256.0
    bandwidth: float = 0.05
    energy_threshold: float = 0.9
    quantum: float = 1e-9
    kmeans_restarts: int = 10
    mds_dims: int = 10
    seed: int = 0

    def __post_init__(self):
        for name in self.methods:
            if name not in ALL_METHODS:
                raise ValueError(f"unknown method {name!r}")
        if self.replicates < 1:
            raise ValueError("need at least one replicate")


@dataclass(frozen=True)
class CellRecord:
    """Scores of one method on one generated dataset."""

    scenario: str
    gamma: float
    amplitude: float
    replicate: int
    method: str
    silhouette: float
    rand: float
    mean_intermittence: float
    error: str | None = None


@dataclass(frozen=True)
class ExperimentResult:
    config: ExperimentConfig
    records: tuple[CellRecord, ...] = field(default_factory=tuple)

    def mean_over_replicates(self) -> list[dict]:
        """One summary row per (scenario, gamma, amplitude, method)."""
        groups: dict[tuple, list[CellRecord]] = {}
        order: list[tuple] = []
        for rec in self.records:
            key = (rec.scenario, rec.gamma, rec.amplitude, rec.method)
            if key not in groups:
                groups[key] = []
                order.append(key)
            groups[key].append(rec)
        rows = []
        for key in order:
            recs = groups[key]
            ok = [r for r in recs if r.error is None]
            rows.append({
                "scenario": key[0],
                "gamma": key[1],
                "amplitude": key[2],
                "method": key[3],
                "replicates": len(recs),
                "failures": len(recs) - len(ok),
                "rand_index": float(np.mean([r.rand for r in ok])) if ok else float("nan"),
                "silhouette_mean": float(np.mean([r.silhouette for r in ok])) if ok else float("nan"),
                "mean_intermittence": float(np.mean([r.mean_intermittence for r in ok])) if ok else float("nan"),
            })
        return rows

    def mean_rand(self, scenario: str, gamma: float, amplitude: float, method: str) -> float:
        for row in self.mean_over_replicates():
            if (row["scenario"], row["gamma"], row["amplitude"], row["method"]) == \
                    (scenario, gamma, amplitude, method):
                return row["rand_index"]
        raise KeyError("no such grid cell")


def score_method(dataset: LabeledDataset, method: str, *,
                 energy_threshold: float = 0.9, kmeans_restarts: int = 10,
                 mds_dims: int = 10, seed: int = 0) -> tuple[float, float]:
    """(silhouette, rand) of one method on one labeled dataset.

    Feature methods cluster the feature rows directly and embed them in 2-d
    for the silhouette; distance methods are embedded first (up to
    ``mds_dims`` axes) and clustered in the embedding.
    """
    if dataset.labels is None:
        raise ValueError("dataset must carry group labels")
    truth = np.asarray(dataset.labels)
    if method in FEATURE_METHODS:
        if method.endswith("-amp"):
            F = extract_features(dataset, Method(method[:-4]),
                                 energy_threshold=energy_threshold).values
        elif method == "fourier-power":
            F = fourier_power_features(dataset).values
        else:
            F = wavelet_coef_features(dataset).values
        pred = kmeans(F, 2, restarts=kmeans_restarts, seed=seed)
        coords2 = classical_mds(distance_matrix(F, "euclidean"), 2)
    elif method in DISTANCE_METHODS:
        D = distance_matrix(dataset, method)
        coords = classical_mds(D, min(len(dataset), mds_dims))
        pred = kmeans(coords, 2, restarts=kmeans_restarts, seed=seed)
        coords2 = coords[:, :2]
    else:
        raise ValueError(f"unknown method {method!r}")
    return silhouette_mean(coords2, truth), rand_index(pred, truth)


def _cell_seed(config: ExperimentConfig, si: int, gi: int, ai: int, rep: int) -> int:
    seq = np.random.SeedSequence((config.seed, si, gi, ai, rep))
    return int(seq.generate_state(1)[0])


def _run_cell(config: ExperimentConfig, si: int, gi: int, ai: int,
              rep: int) -> list[CellRecord]:
    scenario = config.scenarios[si]
    gamma = config.gammas[gi]
    amplitude = config.amplitudes[ai]
    base = dict(scenario=scenario, gamma=gamma, amplitude=amplitude, replicate=rep)
    seed = _cell_seed(config, si, gi, ai, rep)
    try:
        dataset = build_dataset(ScenarioConfig(
            scenario=scenario, m=config.m, gamma=gamma, amplitude=amplitude,
            seed=seed, horizon=config.horizon, n_samples=config.n_samples,
            bandwidth=config.bandwidth))
        phi = mean_intermittence(dataset, config.quantum)
    except Exception as exc:  # keep the sweep alive; one bad cell is data
        logger.warning("cell %s failed to generate: %s", base, exc)
        return [CellRecord(**base, method=name, silhouette=float("nan"),
                           rand=float("nan"), mean_intermittence=float("nan"),
                           error=str(exc))
                for name in config.methods]
    records = []
    for name in config.methods:
        try:
            sil, rand = score_method(
                dataset, name, energy_threshold=config.energy_threshold,
                kmeans_restarts=config.kmeans_restarts,
                mds_dims=config.mds_dims, seed=seed)
            records.append(CellRecord(**base, method=name, silhouette=sil,
                                      rand=rand, mean_intermittence=phi))
        except Exception as exc:
            logger.warning("method %s failed on cell %s: %s", name, base, exc)
            records.append(CellRecord(**base, method=name,
                                      silhouette=float("nan"), rand=float("nan"),
                                      mean_intermittence=phi, error=str(exc)))
    return records


def run_experiment(config: ExperimentConfig) -> ExperimentResult:
    """Run the full sweep; cells are independent and may run in parallel.

    Each grid cell draws its dataset from a substream keyed by the cell's
    grid position, so results do not depend on execution order or worker
    count (AMP_THREADS caps the workers; 0 or unset means automatic).
    """
    cells = [(si, gi, ai, rep)
             for si in range(len(config.scenarios))
             for gi in range(len(config.gammas))
             for ai in range(len(config.amplitudes))
             for rep in range(config.replicates)]
    workers = apply_thread_cap()
    results: dict[tuple, list[CellRecord]] = {}
    if workers > 1 and len(cells) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = {cell: pool.submit(_run_cell, config, *cell) for cell in cells}
            for cell, fut in futures.items():
                results[cell] = fut.result()
    else:
        for cell in cells:
            results[cell] = _run_cell(config, *cell)
    records: list[CellRecord] = []
    for cell in cells:  # deterministic grid order
        records.extend(results[cell])
    return ExperimentResult(config=config, records=tuple(records))

"""Least-squares projection of individual series onto a learned basis."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import LabeledDataset, aggregate, mean_center
from .decompose import (
    BasisMatrix,
    Method,
    decompose,
    normalize_components,
    select_components,
)
from .emd import EMDOptions

__all__ = ["FeatureMatrix", "fit_series", "learn_basis", "fit_dataset", "extract_features"]

# Relative cutoff for small singular values in the least-squares solve; keeps
# the solution minimum-norm when components are linearly dependent.
_LSTSQ_RCOND = 1e-10


@dataclass(frozen=True)
class FeatureMatrix:
    """Per-series feature rows: row i describes series i.

    ``method`` names the producing method; ``basis_ref`` identifies the
    projection basis when there is one (empty for basis-free features).
    """

    values: np.ndarray
    method: str
    basis_ref: str = ""

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 2:
            raise ValueError("feature values must be a 2-d array")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def n_series(self) -> int:
        return self.values.shape[0]

    @property
    def n_features(self) -> int:
        return self.values.shape[1]


def fit_series(x: np.ndarray, basis: BasisMatrix | np.ndarray) -> np.ndarray:
    """Least-squares coefficients of ``x`` against the basis columns.

    Solves ``min_c ||x - B c||`` with a rank-revealing factorization and
    returns the minimum-norm solution.  Callers wanting the usual pipeline
    behaviour should mean-centre ``x`` first, matching the centring applied
    to the aggregate the basis came from.
    """
    columns = basis.columns if isinstance(basis, BasisMatrix) else np.asarray(basis, float)
    x = np.asarray(x, dtype=float)
    if x.shape != (columns.shape[0],):
        raise ValueError("series length must match the basis rows")
    coef, *_ = np.linalg.lstsq(columns, x, rcond=_LSTSQ_RCOND)
    return coef


def learn_basis(dataset: LabeledDataset, method: Method | str,
                energy_threshold: float = 0.9,
                emd_opts: EMDOptions | None = None) -> BasisMatrix:
    """Aggregate the dataset, decompose, and keep the dominant components."""
    total = aggregate(dataset)
    comps = decompose(total.samples, method, emd_opts=emd_opts)
    kept = select_components(comps, energy_threshold)
    return normalize_components(kept)


def fit_dataset(dataset: LabeledDataset, basis: BasisMatrix,
                center_individuals: bool = True) -> FeatureMatrix:
    """Project every series in the dataset onto a fixed basis."""
    rows = dataset.matrix
    if center_individuals:
        rows = rows - rows.mean(axis=1, keepdims=True)
    coef, *_ = np.linalg.lstsq(basis.columns, rows.T, rcond=_LSTSQ_RCOND)
    return FeatureMatrix(values=coef.T, method=basis.method.value, basis_ref=basis.ref)


def extract_features(dataset: LabeledDataset, method: Method | str,
                     energy_threshold: float = 0.9,
                     center_individuals: bool = True,
                     emd_opts: EMDOptions | None = None) -> FeatureMatrix:
    """Full pipeline: learn a basis from the aggregate, then fit each series.

    The aggregate is mean-centred before decomposition; with
    ``center_individuals`` (the default) each series is likewise mean-centred
    before its least-squares fit, so features describe shape rather than
    offset.
    """
    basis = learn_basis(dataset, method, energy_threshold, emd_opts=emd_opts)
    return fit_dataset(dataset, basis, center_individuals=center_individuals)

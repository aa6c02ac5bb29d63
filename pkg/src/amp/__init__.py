"""Shape features for intermittent time series.

The pipeline aggregates a panel of series, decomposes the aggregate into
modes (Fourier, Haar wavelet, wavelet packet, or empirical mode
decomposition), keeps the dominant modes by energy, and describes every
individual series by its least-squares coefficients against those modes.
The package also ships the synthetic event benchmark, baseline methods, and
the clustering evaluation used to compare them.
"""

from .core import (
    LabeledDataset,
    TimeSeries,
    aggregate,
    intermittence,
    mean_center,
    mean_intermittence,
)
from .decompose import (
    BasisMatrix,
    ComponentSet,
    Method,
    best_basis_cost,
    decompose,
    normalize_components,
    select_components,
)
from .emd import EMDOptions, sift
from .project import FeatureMatrix, extract_features, fit_dataset, fit_series, learn_basis
from .synth import (
    RateParams,
    ScenarioConfig,
    build_dataset,
    inject_noise,
    rate,
    sample_nhpp,
    smooth_events,
    thinned_events,
)
from .baselines import (
    DistanceMatrix,
    distance_matrix,
    dtw_distance,
    fourier_power_features,
    wavelet_coef_features,
)
from .evaluate import (
    ExperimentConfig,
    ExperimentResult,
    classical_mds,
    kmeans,
    rand_index,
    run_experiment,
    silhouette_mean,
)

__version__ = "0.1.0"

__all__ = [
    "TimeSeries", "LabeledDataset", "aggregate", "mean_center",
    "intermittence", "mean_intermittence",
    "Method", "ComponentSet", "BasisMatrix", "decompose",
    "select_components", "normalize_components", "best_basis_cost",
    "EMDOptions", "sift",
    "FeatureMatrix", "fit_series", "learn_basis", "fit_dataset", "extract_features",
    "RateParams", "ScenarioConfig", "rate", "thinned_events", "sample_nhpp",
    "smooth_events", "inject_noise", "build_dataset",
    "DistanceMatrix", "fourier_power_features", "wavelet_coef_features",
    "dtw_distance", "distance_matrix",
    "classical_mds", "kmeans", "silhouette_mean", "rand_index",
    "ExperimentConfig", "ExperimentResult", "run_experiment",
    "__version__",
]

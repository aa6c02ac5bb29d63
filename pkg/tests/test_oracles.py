"""Oracle checks: each test verifies package output against an independent
reference computed inside this file (brute force, closed form, textbook
definition, or a classical statistical test), with expected values frozen
where they are exact.
"""

import math

import numpy as np
import pytest
from scipy import linalg, stats
from scipy.integrate import cumulative_trapezoid

from amp.core import aggregate, mean_center, mean_intermittence
from amp.decompose import (
    Method,
    decompose,
    dft_components,
    dwt_components,
    haar_detail_coefficients,
    normalize_components,
    select_components,
)
from amp.baselines import distance_matrix, dtw_distance
from amp.emd import EMDOptions, sift
from amp.evaluate import (
    ExperimentConfig,
    classical_mds,
    kmeans,
    rand_index,
    run_experiment,
    silhouette_mean,
)
from amp.project import extract_features, fit_series, learn_basis
from amp.synth import (
    RateParams,
    ScenarioConfig,
    build_dataset,
    inject_noise,
    rate,
    smooth_events,
    thinned_events,
)

K0 = 1.0 / math.sqrt(2.0 * math.pi)  # peak of the standard normal density


# ---------------------------------------------------------------------------
# dynamic time warping vs exhaustive path enumeration


def brute_force_dtw(x, y):
    """Minimum over every monotone warping path, accumulated front to back.

    Exponential-time reference; only sane for tiny inputs.
    """
    n, m = len(x), len(y)
    best = [math.inf]

    def walk(i, j, acc):
        acc = acc + (x[i] - y[j]) ** 2
        if i == n - 1 and j == m - 1:
            best[0] = min(best[0], acc)
            return
        if i + 1 < n:
            walk(i + 1, j, acc)
        if j + 1 < m:
            walk(i, j + 1, acc)
        if i + 1 < n and j + 1 < m:
            walk(i + 1, j + 1, acc)

    walk(0, 0, 0.0)
    return math.sqrt(best[0])


def test_dtw_equals_brute_force_on_all_small_pairs(rng):
    for _ in range(40):
        n = int(rng.integers(1, 9))
        m = int(rng.integers(1, 9))
        x = rng.normal(size=n)
        y = rng.normal(size=m)
        assert dtw_distance(x, y) == brute_force_dtw(x, y)


def test_dtw_known_alignments():
    assert dtw_distance(np.array([1.0, 2.0, 3.0]), np.array([1.0, 2.0, 2.0, 3.0])) == 0.0
    x = np.zeros(4)
    assert dtw_distance(x, x) == 0.0


def test_dtw_matrix_agrees_with_scalar_kernel(rng):
    data = rng.normal(size=(7, 32))
    dm = distance_matrix(data, "dtw")
    for i in range(7):
        for j in range(i, 7):
            assert dm.values[i, j] == pytest.approx(
                dtw_distance(data[i], data[j]), abs=1e-12)


# ---------------------------------------------------------------------------
# least-squares projection vs closed-form normal equations


def test_fit_series_matches_hand_solved_normal_equations():
    # columns (1,0) and (1/sqrt2,1/sqrt2), x=(2,1): G c = B^T x solves to
    # c = (1, sqrt2), worked by hand before the solver existed.
    basis = np.array([[1.0, 1.0 / math.sqrt(2)], [0.0, 1.0 / math.sqrt(2)]])
    coef = fit_series(np.array([2.0, 1.0]), basis)
    assert coef == pytest.approx([1.0, math.sqrt(2.0)], abs=1e-12)


def test_fit_series_matches_normal_equations_on_random_instances(rng):
    for _ in range(25):
        n, p = int(rng.integers(3, 30)), int(rng.integers(1, 6))
        basis = rng.normal(size=(n, p))
        x = rng.normal(size=n)
        reference = np.linalg.solve(basis.T @ basis, basis.T @ x)
        assert fit_series(x, basis) == pytest.approx(reference, abs=1e-8)


def test_fit_series_orthonormal_basis_equals_inner_products(rng):
    x = rng.normal(size=256)
    basis = normalize_components(select_components(dft_components(x), 0.9))
    sample = rng.normal(size=256)
    coef = fit_series(sample, basis)
    direct = basis.columns.T @ sample
    assert np.max(np.abs(coef - direct)) < 1e-10


def test_fit_series_coefficients_are_locally_optimal(rng):
    for _ in range(10):
        basis = rng.normal(size=(20, 4))
        x = rng.normal(size=20)
        coef = fit_series(x, basis)
        base_resid = np.linalg.norm(x - basis @ coef)
        for idx in range(4):
            for delta in (1e-3, -1e-3):
                bumped = coef.copy()
                bumped[idx] += delta
                assert np.linalg.norm(x - basis @ bumped) >= base_resid


# ---------------------------------------------------------------------------
# Haar analysis vs independent synthesis


def inverse_haar(details_finest_first, approx):
    """Textbook Haar synthesis: climb from the single approximation value."""
    a = np.array([approx])
    for d in reversed(details_finest_first):
        up = np.empty(2 * a.size)
        up[0::2] = (a + d) / math.sqrt(2.0)
        up[1::2] = (a - d) / math.sqrt(2.0)
        a = up
    return a


def test_haar_coefficients_invert_back_to_signal(rng):
    x = rng.normal(size=128)
    details, approx = haar_detail_coefficients(x)
    rebuilt = inverse_haar(details, approx)
    assert np.max(np.abs(rebuilt - x)) < 1e-9


def test_dwt_components_sum_like_inverse_transform(rng):
    x = rng.normal(size=64)
    cs = dwt_components(x)
    assert np.max(np.abs(cs.components.sum(axis=0) - mean_center(x))) < 1e-9


# ---------------------------------------------------------------------------
# classical MDS vs exact embeddings and an independent eigensolver


def pairwise(points):
    diff = points[:, None, :] - points[None, :, :]
    return np.sqrt((diff ** 2).sum(axis=-1))


def test_mds_recovers_exact_2d_configuration(rng):
    points = rng.normal(size=(20, 2))
    coords = classical_mds(pairwise(points), 2)
    assert np.max(np.abs(pairwise(coords) - pairwise(points))) < 1e-8


def test_mds_equilateral_triangle():
    d = 2.5
    D = np.full((3, 3), d)
    np.fill_diagonal(D, 0.0)
    coords = classical_mds(D, 2)
    got = pairwise(coords)
    off = got[~np.eye(3, dtype=bool)]
    assert off == pytest.approx(np.full(6, d), abs=1e-9)


def test_mds_matches_independent_eigensolver(rng):
    points = rng.normal(size=(12, 3))
    D = pairwise(points)
    coords = classical_mds(D, 3)
    # independent solver: scipy.linalg.eigh on the double-centred Gram
    J = np.eye(12) - np.ones((12, 12)) / 12
    gram = -0.5 * J @ (D ** 2) @ J
    vals = linalg.eigh(gram, eigvals_only=True)[::-1][:3]
    recovered = (coords ** 2).sum(axis=0)
    assert recovered == pytest.approx(vals, abs=1e-8)


def test_mds_one_dimension_separates_two_far_blobs(rng):
    pts = np.concatenate([rng.normal(0, 0.05, size=(8, 2)),
                          rng.normal(50, 0.05, size=(8, 2)) ])
    axis = classical_mds(pairwise(pts), 1)[:, 0]
    signs = np.sign(axis)
    assert len(set(signs[:8])) == 1 and len(set(signs[8:])) == 1
    assert signs[0] != signs[8]


# ---------------------------------------------------------------------------
# silhouette and Rand index vs definition oracles


def silhouette_by_definition(X, labels):
    X = np.asarray(X, dtype=float)
    labels = np.asarray(labels)
    scores = []
    for i in range(len(X)):
        own = labels == labels[i]
        if own.sum() == 1:
            scores.append(0.0)
            continue
        d = np.linalg.norm(X - X[i], axis=1)
        a = d[own].sum() / (own.sum() - 1)
        b = min(d[labels == other].mean()
                for other in set(labels) if other != labels[i])
        scores.append(0.0 if a == b else (b - a) / max(a, b))
    return float(np.mean(scores))


def rand_by_definition(a, b):
    a, b = np.asarray(a), np.asarray(b)
    agree = total = 0
    for i in range(len(a)):
        for j in range(i + 1, len(a)):
            total += 1
            agree += (a[i] == a[j]) == (b[i] == b[j])
    return agree / total


def test_silhouette_matches_definition_oracle(rng):
    for labels in ([0] * 10 + [1] * 10,
                   [0] * 5 + [1] * 14 + [2] * 1,
                   list(rng.integers(0, 3, size=20))):
        X = rng.normal(size=(20, 3))
        if len(set(labels)) < 2:
            continue
        assert silhouette_mean(X, labels) == pytest.approx(
            silhouette_by_definition(X, labels), abs=1e-12)


def test_rand_matches_definition_oracle(rng):
    for _ in range(10):
        a = rng.integers(0, 3, size=15)
        b = rng.integers(0, 4, size=15)
        assert rand_index(a, b) == pytest.approx(rand_by_definition(a, b), abs=1e-12)


def test_rand_frozen_examples():
    assert rand_index([0, 0, 1, 1], [0, 1, 0, 1]) == pytest.approx(1 / 3, abs=1e-12)
    assert rand_index([0, 0, 1, 1], [1, 1, 0, 0]) == 1.0
    assert rand_index([0, 1, 2, 3], [0, 1, 2, 3]) == 1.0


# ---------------------------------------------------------------------------
# EMD against analytic tones


def test_emd_pure_tone_is_single_mode():
    k = np.arange(1024)
    tone = np.sin(2 * np.pi * k / 32)
    imfs, residual = sift(tone)
    assert len(imfs) == 1
    corr = np.corrcoef(imfs[0], tone)[0, 1]
    assert corr >= 0.99
    assert np.max(np.abs(residual)) < 1e-8


def test_emd_two_tones_split_fast_then_slow():
    k = np.arange(1024)
    fast = np.sin(2 * np.pi * k / 16)
    slow = np.sin(2 * np.pi * k / 128)
    imfs, _ = sift(fast + slow)
    assert len(imfs) == 2
    assert np.corrcoef(imfs[0], fast)[0, 1] >= 0.95
    assert np.corrcoef(imfs[1], slow)[0, 1] >= 0.95


def test_emd_monotone_ramp_yields_no_modes():
    ramp = np.linspace(0.0, 5.0, 257)
    imfs, residual = sift(ramp)
    assert imfs == []
    assert np.array_equal(residual, ramp)


# ---------------------------------------------------------------------------
# k-means on constructed geometry


def test_kmeans_separates_far_blobs(rng):
    # inter/intra distance ratio >= 100: membership is unambiguous
    blob_a = rng.normal(0.0, 0.1, size=(20, 2))
    blob_b = rng.normal(100.0, 0.1, size=(20, 2))
    X = np.vstack([blob_a, blob_b])
    truth = np.array([0] * 20 + [1] * 20)
    pred = kmeans(X, 2, restarts=4, seed=0)
    assert rand_index(pred, truth) == 1.0
    assert len(set(pred[:20])) == 1 and len(set(pred[20:])) == 1


def test_kmeans_duplicate_rows_share_labels(rng):
    X = np.repeat(rng.normal(size=(6, 3)), 2, axis=0)
    pred = kmeans(X, 3, restarts=4, seed=1)
    assert np.array_equal(pred[0::2], pred[1::2])


def test_kmeans_single_cluster():
    X = np.arange(12, dtype=float).reshape(6, 2)
    assert len(set(kmeans(X, 1, restarts=2, seed=0))) == 1


# ---------------------------------------------------------------------------
# event sampling statistics


def test_constant_rate_counts_pass_chi_square():
    # rate 5 over horizon 100: replicate counts should be Poisson(500)
    rng = np.random.default_rng(20260817)
    counts = np.array([
        thinned_events(lambda t: np.full_like(t, 5.0), 5.0, 100.0, rng).size
        for _ in range(200)])
    dist = stats.poisson(500.0)
    edges = np.unique(dist.ppf(np.linspace(0.08, 0.92, 12)))
    bins = np.concatenate([[-np.inf], edges, [np.inf]])
    expected = np.diff(dist.cdf(bins)) * counts.size
    observed = np.histogram(counts, bins=bins)[0]
    expected *= observed.sum() / expected.sum()
    result = stats.chisquare(observed, expected)
    assert result.pvalue >= 0.01


def test_event_time_distribution_matches_rate_shape():
    # pooled event times over many replicates follow the normalized rate integral
    params = RateParams(amplitude=1.5, mixing=0.0, t1_base=2.0, t2_base=4.0,
                        alpha1=0.0078, alpha2=0.0314)
    horizon = 16.0
    rng = np.random.default_rng(99)
    pooled = np.concatenate([
        thinned_events(lambda t: rate(t, 1, params), params.amplitude,
                       horizon, rng)
        for _ in range(500)])
    grid = np.linspace(0.0, horizon, 4001)
    density = rate(grid, 1, params)
    cdf = np.concatenate([[0.0], cumulative_trapezoid(density, grid)])
    cdf /= cdf[-1]
    result = stats.kstest(pooled, lambda v: np.interp(v, grid, cdf))
    assert result.pvalue >= 0.01


def test_thinning_accepts_everything_at_the_dominating_rate():
    rng = np.random.default_rng(3)
    events = thinned_events(lambda t: np.full_like(t, 2.0), 2.0, 50.0, rng)
    assert events.size > 0
    assert np.all(np.diff(events) >= 0)
    assert events.min() >= 0.0 and events.max() < 50.0


# ---------------------------------------------------------------------------
# noise injection and kernel smoothing against frozen values


def test_inject_noise_adds_exactly_2050_events_absent_clipping(rng):
    times = np.sort(rng.uniform(0.0, 200.0, size=300))
    noisy = inject_noise(times, horizon=256.0, rng=rng)
    assert noisy.size == times.size + 2050


def test_inject_noise_single_anchor_spacing(rng):
    times = np.array([10.0])
    noisy = inject_noise(times, horizon=256.0, rng=rng, anchors=1)
    added = np.sort(np.setdiff1d(noisy, times))
    # one anchor contributes 41 events over [t*, t*+0.02], spacing 0.0005;
    # the anchor time itself is duplicated by the burst's first event
    assert noisy.size == 42
    burst = noisy[noisy >= 10.0]
    assert burst.size == 42
    assert np.allclose(np.diff(np.unique(burst)), 0.0005, atol=1e-12)
    assert added.max() == pytest.approx(10.02, abs=1e-12)


def test_smooth_single_event_on_grid_point_peaks_at_k0():
    series = smooth_events(np.array([2.0]), n=32, t0=0.0, dt=0.25, bandwidth=0.05)
    assert series.max() == pytest.approx(K0, abs=1e-15)
    assert series[8] == series.max()


def test_smooth_coincident_events_average_out():
    single = smooth_events(np.array([2.0]), n=32, t0=0.0, dt=0.25, bandwidth=0.05)
    double = smooth_events(np.array([2.0, 2.0]), n=32, t0=0.0, dt=0.25, bandwidth=0.05)
    assert np.array_equal(single, double)


# ---------------------------------------------------------------------------
# generation determinism and intermittence direction


def test_build_dataset_is_bit_identical_for_fixed_seed():
    cfg = ScenarioConfig(scenario="syn3", m=20, gamma=0.1, amplitude=2.0, seed=42,
                         horizon=64.0, n_samples=256)
    first = build_dataset(cfg)
    second = build_dataset(cfg)
    assert np.array_equal(first.matrix, second.matrix)
    assert first.labels == second.labels
    assert first.meta["noisy_series"] == second.meta["noisy_series"]


def test_run_experiment_is_deterministic():
    config = ExperimentConfig(scenarios=("syn1",), gammas=(0.0,), amplitudes=(5.0,),
                              methods=("dft-amp",), replicates=1, m=16,
                              n_samples=128, horizon=32.0, seed=11)
    assert run_experiment(config).records == run_experiment(config).records


def test_intermittence_decreases_with_rate_amplitude():
    # busier series spend fewer samples at the modal (zero) value
    low, high = [], []
    for rep in range(10):
        for phi, out in ((1.0, low), (10.0, high)):
            ds = build_dataset(ScenarioConfig(
                scenario="syn1", m=40, gamma=0.0, amplitude=phi, seed=500 + rep))
            out.append(mean_intermittence(ds))
    assert np.mean(low) > np.mean(high)


# ---------------------------------------------------------------------------
# decomposition spot values


def test_dft_single_harmonic_concentrates_all_energy():
    k = np.arange(1024)
    cs = dft_components(np.cos(2 * np.pi * 4 * k / 1024))
    assert len(cs) == 1022
    assert cs.energies[0] == pytest.approx(512.0, rel=1e-12)
    assert np.all(cs.energies[1:] < 1e-10 * cs.energies[0])


def test_dwt_haar_step_is_single_coarse_component():
    x = np.concatenate([np.ones(64), -np.ones(64)])
    cs = dwt_components(x)
    assert cs.energies[0] == pytest.approx(128.0, rel=1e-12)
    assert np.all(cs.energies[1:] < 1e-20)
    assert np.max(np.abs(cs.components[0] - x)) < 1e-12


def test_emd_decompose_of_syn1_features_cluster_cleanly():
    ds = build_dataset(ScenarioConfig(scenario="syn1", m=400, gamma=0.0,
                                      amplitude=5.0, seed=0))
    features = extract_features(ds, Method.EMD).values
    pred = kmeans(features, 2, restarts=10, seed=0)
    assert rand_index(pred, np.asarray(ds.labels)) >= 0.95

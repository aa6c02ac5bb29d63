"""Synthetic two-group event benchmark: point processes, smoothing, noise.

Each series is a realization of a non-homogeneous Poisson process whose rate
mixes two sinusoidal patterns, a fast one and a slow one.  The two groups
weight the patterns oppositely, so a mixing value of 0 gives maximally
distinct groups and 0.5 makes them statistically identical.  Event times are
turned into regularly sampled series by Gaussian kernel smoothing, which
preserves the intermittent character of sparse event data.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import LabeledDataset, TimeSeries

logger = logging.getLogger(__name__)

__all__ = [
    "RateParams",
    "ScenarioConfig",
    "SCENARIOS",
    "rate",
    "thinned_events",
    "sample_nhpp",
    "smooth_events",
    "inject_noise",
    "build_dataset",
]

_INV_SQRT_2PI = 1.0 / np.sqrt(2.0 * np.pi)
# Kernel support cutoff in bandwidths.  Cutting the Gaussian at 2 sigma keeps
# grid points away from all events at exactly zero, which is what makes a
# smoothed sparse event set intermittent (a full-support kernel would leave
# faint positive values everywhere and the modal-value share would collapse).
_KERNEL_CUTOFF = 2.0

# Salts separating the independent random substreams drawn from one seed.
_EVENTS_STREAM = 0
_SUBSET_STREAM = 1
_NOISE_STREAM = 2


@dataclass(frozen=True)
class RateParams:
    """Rate-function parameters shared by the two groups.

    ``t1_base``/``alpha1`` give the fast pattern's period ramp and
    ``t2_base``/``alpha2`` the slow one's: pattern i oscillates with
    instantaneous period ``base + alpha * t``.  ``mixing`` in [0, 1] blends
    the patterns; group 1 weights the slow pattern by ``1 - mixing`` while
    group 2 swaps the weights.  ``amplitude`` is the peak event rate.
    """

    amplitude: float
    mixing: float
    t1_base: float
    t2_base: float
    alpha1: float = 0.0
    alpha2: float = 0.0

    def __post_init__(self):
        if self.amplitude < 0:
            raise ValueError("amplitude must be non-negative")
        if not 0.0 <= self.mixing <= 1.0:
            raise ValueError("mixing must lie in [0, 1]")
        if self.t1_base <= 0 or self.t2_base <= 0:
            raise ValueError("base periods must be positive")
        if self.alpha1 < 0 or self.alpha2 < 0:
            raise ValueError("period drifts must be non-negative")


def _phase(t: np.ndarray, base: float, drift: float) -> np.ndarray:
    # Integral of pi / (base + drift * s) over [0, t]: the resulting sin^2
    # oscillation has instantaneous period exactly base + drift * t.
    if drift == 0.0:
        return np.pi * t / base
    return (np.pi / drift) * np.log1p(drift * t / base)


def rate(t, group: int, params: RateParams):
    """Event rate of the given group (1 or 2) at time(s) ``t``.

    Always within ``[0, params.amplitude]``.  Swapping ``mixing`` for
    ``1 - mixing`` exchanges the two groups' rates.
    """
    if group not in (1, 2):
        raise ValueError("group must be 1 or 2")
    t = np.asarray(t, dtype=float)
    fast = np.sin(_phase(t, params.t1_base, params.alpha1)) ** 2
    slow = np.sin(_phase(t, params.t2_base, params.alpha2)) ** 2
    w = params.mixing if group == 1 else 1.0 - params.mixing
    return params.amplitude * (w * fast + (1.0 - w) * slow)


def thinned_events(rate_fn: Callable[[np.ndarray], np.ndarray], rate_max: float,
                   horizon: float, rng: np.random.Generator) -> np.ndarray:
    """Sample a non-homogeneous Poisson process on [0, horizon) by thinning.

    Candidate events are drawn from a homogeneous process at ``rate_max`` and
    each is kept with probability ``rate_fn(t) / rate_max``.  ``rate_fn`` must
    never exceed ``rate_max``.  Returns sorted accepted times.
    """
    if horizon <= 0:
        raise ValueError("horizon must be positive")
    if rate_max < 0:
        raise ValueError("rate_max must be non-negative")
    if rate_max == 0.0:
        return np.empty(0)
    count = rng.poisson(rate_max * horizon)
    candidates = np.sort(rng.uniform(0.0, horizon, size=count))
    keep = rng.uniform(0.0, rate_max, size=count) < rate_fn(candidates)
    return candidates[keep]


def sample_nhpp(params: RateParams, group: int, horizon: float,
                rng: np.random.Generator) -> np.ndarray:
    """Event times for one series of the given group."""
    return thinned_events(lambda t: rate(t, group, params), params.amplitude,
                          horizon, rng)


def smooth_events(times: np.ndarray, n: int, t0: float, dt: float,
                  bandwidth: float) -> np.ndarray:
    """Gaussian-kernel smoothing of event times onto a regular grid.

    Sample j is ``mean_k K((t_j - times_k) / bandwidth)`` with K the standard
    normal density, so a grid point sitting exactly on a lone event scores
    ``K(0) = 1 / sqrt(2 pi)`` and every sample lies in ``[0, K(0)]``.

    Kernel support is cut off at two bandwidths: a grid point farther than
    ``2 * bandwidth`` from every event stays exactly zero.  Without the
    cutoff the Gaussian tails would leave faint positive values everywhere
    and a sparse event set would not produce an intermittent series at all.
    """
    times = np.asarray(times, dtype=float)
    if times.size == 0:
        raise ValueError("cannot smooth an empty event sequence")
    if bandwidth <= 0 or dt <= 0 or n <= 0:
        raise ValueError("n, dt, and bandwidth must be positive")
    out = np.zeros(n)
    cut = _KERNEL_CUTOFF * bandwidth
    width = int(cut / dt) + 1
    if 2 * width + 1 >= n:
        z = (t0 + dt * np.arange(n)[:, None] - times[None, :]) / bandwidth
        w = np.exp(-0.5 * z * z) * _INV_SQRT_2PI
        w[np.abs(z) > _KERNEL_CUTOFF] = 0.0
        out = w.sum(axis=1)
    else:
        # Each event only reaches grid points within the kernel cutoff.
        base = np.floor((times - t0) / dt).astype(np.int64)
        offsets = np.arange(-width, width + 2)
        idx = base[:, None] + offsets[None, :]
        valid = (idx >= 0) & (idx < n)
        idx_c = np.clip(idx, 0, n - 1)
        z = (t0 + dt * idx_c - times[:, None]) / bandwidth
        w = np.exp(-0.5 * z * z) * _INV_SQRT_2PI
        w[~valid | (np.abs(z) > _KERNEL_CUTOFF)] = 0.0
        np.add.at(out, idx_c.ravel(), w.ravel())
    return out / times.size


def inject_noise(times: np.ndarray, horizon: float, rng: np.random.Generator,
                 anchors: int = 50, burst: int = 41, span: float = 0.02) -> np.ndarray:
    """Add dense bursts of events at randomly chosen anchor events.

    Picks ``anchors`` existing events without replacement and plants
    ``burst`` equally spaced events across ``[t*, t* + span]`` at each, so
    ``anchors * burst`` events are added; bursts are clipped to
    ``[0, horizon)``.  Duplicated times are allowed.  ``anchors=0`` returns
    the input unchanged (sorted); fewer events than anchors is an error.
    """
    times = np.asarray(times, dtype=float)
    if anchors < 0 or burst < 2 or span <= 0:
        raise ValueError("need anchors >= 0, burst >= 2, span > 0")
    if times.size < anchors:
        raise ValueError(f"need at least {anchors} events to anchor noise "
                         f"bursts, got {times.size}")
    if anchors == 0:
        return np.sort(times)
    picked = rng.choice(times, size=anchors, replace=False)
    added = (picked[:, None] + np.linspace(0.0, span, burst)[None, :]).ravel()
    added = added[(added >= 0.0) & (added < horizon)]
    return np.sort(np.concatenate((times, added)))


@dataclass(frozen=True)
class ScenarioConfig:
    """Everything needed to build one synthetic dataset reproducibly."""

    scenario: str
    m: int
    gamma: float
    amplitude: float
    seed: int
    horizon: float = 256.0
    n_samples: int = 1024
    bandwidth: float = 0.05
    max_retries: int = 100

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise ValueError(f"unknown scenario {self.scenario!r}")
        if self.m < 2:
            raise ValueError("need at least two series")
        if self.amplitude <= 0:
            raise ValueError("amplitude must be positive")
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError("gamma must lie in [0, 1]")


# Scenario presets: (t1_base, t2_base, alpha1, alpha2, burst noise?).
# syn1 is stationary; syn2 ramps both periods; syn3 adds event-burst noise
# to a random tenth of the series on top of syn2.
SCENARIOS: dict[str, tuple[float, float, float, float, bool]] = {
    "syn1": (2.0, 8.0, 0.0, 0.0, False),
    "syn2": (2.0, 4.0, 0.0078, 0.0314, False),
    "syn3": (2.0, 4.0, 0.0078, 0.0314, True),
}


def _scenario_params(cfg: ScenarioConfig) -> tuple[RateParams, bool]:
    t1, t2, a1, a2, noisy = SCENARIOS[cfg.scenario]
    params = RateParams(amplitude=cfg.amplitude, mixing=cfg.gamma,
                        t1_base=t1, t2_base=t2, alpha1=a1, alpha2=a2)
    return params, noisy


def build_dataset(cfg: ScenarioConfig) -> LabeledDataset:
    """Generate a labeled two-group dataset for one scenario.

    The first half of the series belongs to group 1, the rest to group 2.
    Every series draws from its own counter-based substream of ``cfg.seed``,
    so results are identical regardless of generation order; a series that
    comes out empty is redrawn from a fresh substream (up to
    ``cfg.max_retries`` times).
    """
    params, noisy_scenario = _scenario_params(cfg)
    m = cfg.m
    dt = cfg.horizon / cfg.n_samples
    labels = tuple(1 if i < m - m // 2 else 2 for i in range(m))

    noisy: frozenset[int] = frozenset()
    if noisy_scenario and m >= 10:
        subset_rng = np.random.default_rng((cfg.seed, _SUBSET_STREAM))
        noisy = frozenset(subset_rng.choice(m, size=m // 10, replace=False).tolist())

    series = []
    for i in range(m):
        times = np.empty(0)
        for attempt in range(cfg.max_retries):
            rng = np.random.default_rng((cfg.seed, _EVENTS_STREAM, i, attempt))
            times = sample_nhpp(params, labels[i], cfg.horizon, rng)
            if times.size:
                break
        if times.size == 0:
            raise RuntimeError(
                f"series {i} stayed empty after {cfg.max_retries} retries; "
                "the configured rate is too low")
        if i in noisy:
            noise_rng = np.random.default_rng((cfg.seed, _NOISE_STREAM, i))
            try:
                times = inject_noise(times, cfg.horizon, noise_rng)
            except ValueError as exc:
                raise ValueError(f"series {i}: {exc}") from exc
        x = smooth_events(times, cfg.n_samples, 0.0, dt, cfg.bandwidth)
        series.append(TimeSeries(x, t0=0.0, dt=dt))

    logger.debug("built %s dataset: m=%d, %d noisy series", cfg.scenario, m, len(noisy))
    meta = {
        "scenario": cfg.scenario,
        "m": m,
        "gamma": cfg.gamma,
        "amplitude": cfg.amplitude,
        "seed": cfg.seed,
        "horizon": cfg.horizon,
        "n_samples": cfg.n_samples,
        "bandwidth": cfg.bandwidth,
        "noisy_series": sorted(noisy),
    }
    return LabeledDataset(series=tuple(series), labels=labels, meta=meta)

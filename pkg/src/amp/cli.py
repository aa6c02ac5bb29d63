"""Command-line entry point.

Exit codes: 0 on success, 1 on usage errors, 2 on data errors.  Diagnostics
go to stderr; only requested data is written to stdout.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import io as amp_io
from .baselines import distance_matrix, fourier_power_features, wavelet_coef_features
from .core import intermittence, mean_intermittence
from .decompose import Method
from .evaluate import classical_mds, kmeans, rand_index, silhouette_mean
from .project import extract_features
from .synth import ScenarioConfig, build_dataset


class _Parser(argparse.ArgumentParser):
    """argparse with usage failures mapped to exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _build_parser() -> _Parser:
    parser = _Parser(prog="amp", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("synth", help="generate a synthetic two-group dataset")
    p.add_argument("--scenario", required=True, choices=["syn1", "syn2", "syn3"])
    p.add_argument("--m", type=int, required=True, help="number of series")
    p.add_argument("--gamma", type=float, default=0.0, help="pattern mixing in [0, 1]")
    p.add_argument("--varphi", type=float, required=True, help="peak event rate")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--n", type=int, default=1024, help="grid points")
    p.add_argument("--horizon", type=float, default=256.0, help="time horizon")
    p.add_argument("--bandwidth", type=float, default=0.05, help="smoothing bandwidth")
    p.add_argument("--out", required=True, help="output dataset JSON")

    p = sub.add_parser("ingest", help="smooth an event-log CSV into a dataset")
    p.add_argument("--in", dest="src", required=True, help="CSV with series_id,timestamp")
    p.add_argument("--t-min", type=float, required=True)
    p.add_argument("--t-max", type=float, required=True)
    p.add_argument("--n", type=int, default=1024)
    p.add_argument("--bandwidth", type=float, default=0.05)
    p.add_argument("--out", required=True, help="output dataset JSON")

    p = sub.add_parser("extract", help="projection features from a dataset")
    p.add_argument("--in", dest="src", required=True, help="dataset JSON")
    p.add_argument("--method", required=True, choices=[m.value for m in Method])
    p.add_argument("--et", type=float, default=0.9, help="cumulative energy threshold")
    p.add_argument("--no-center", action="store_true",
                   help="skip mean-centring of individual series before fitting")
    p.add_argument("--out", required=True, help="output features CSV")

    p = sub.add_parser("baseline", help="baseline features or distances")
    p.add_argument("--in", dest="src", required=True, help="dataset JSON")
    p.add_argument("--method", required=True,
                   choices=["fourier-power", "wavelet-coef", "euclidean", "dtw"])
    p.add_argument("--out", required=True, help="output CSV")

    p = sub.add_parser("evaluate", help="cluster features and score against labels")
    p.add_argument("--features", required=True, help="features CSV")
    p.add_argument("--labels-from", required=True, help="dataset JSON carrying labels")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--restarts", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output JSON")

    p = sub.add_parser("experiment", help="run a benchmark sweep from a config")
    p.add_argument("--config", required=True, help="sweep JSON")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True, help="output results CSV")

    p = sub.add_parser("intermittence", help="print per-series intermittence")
    p.add_argument("--in", dest="src", required=True, help="dataset JSON")
    p.add_argument("--quantum", type=float, default=1e-9)

    return parser


def _cmd_synth(args) -> None:
    cfg = ScenarioConfig(scenario=args.scenario, m=args.m, gamma=args.gamma,
                         amplitude=args.varphi, seed=args.seed,
                         horizon=args.horizon, n_samples=args.n,
                         bandwidth=args.bandwidth)
    dataset = build_dataset(cfg)
    amp_io.write_dataset(dataset, args.out)
    print(f"wrote {args.out}: {len(dataset)} series x {dataset.n_samples} samples",
          file=sys.stderr)


def _cmd_ingest(args) -> None:
    dataset = amp_io.ingest_events(args.src, bandwidth=args.bandwidth, n=args.n,
                                   t_min=args.t_min, t_max=args.t_max)
    amp_io.write_dataset(dataset, args.out)
    print(f"wrote {args.out}: {len(dataset)} series x {dataset.n_samples} samples",
          file=sys.stderr)


def _cmd_extract(args) -> None:
    dataset = amp_io.read_dataset(args.src)
    features = extract_features(dataset, Method(args.method),
                                energy_threshold=args.et,
                                center_individuals=not args.no_center)
    amp_io.write_features(features, args.out)
    print(f"wrote {args.out}: {features.n_series} x {features.n_features} "
          f"({features.basis_ref})", file=sys.stderr)


def _cmd_baseline(args) -> None:
    dataset = amp_io.read_dataset(args.src)
    if args.method == "fourier-power":
        amp_io.write_features(fourier_power_features(dataset), args.out)
    elif args.method == "wavelet-coef":
        amp_io.write_features(wavelet_coef_features(dataset), args.out)
    else:
        amp_io.write_distance_matrix(distance_matrix(dataset, args.method), args.out)
    print(f"wrote {args.out}", file=sys.stderr)


def _cmd_evaluate(args) -> None:
    values = amp_io.read_features(args.features)
    dataset = amp_io.read_dataset(args.labels_from)
    if dataset.labels is None:
        raise ValueError(f"{args.labels_from}: dataset carries no labels")
    if len(dataset) != values.shape[0]:
        raise ValueError("feature rows do not match the number of labeled series")
    truth = np.asarray(dataset.labels)
    pred = kmeans(values, args.k, restarts=args.restarts, seed=args.seed)
    coords = classical_mds(distance_matrix(values, "euclidean"), min(2, len(dataset)))
    payload = {
        "rand_index": rand_index(pred, truth),
        "silhouette_mean": silhouette_mean(coords, truth),
        "k": args.k,
        "seed": args.seed,
    }
    Path(args.out).write_text(json.dumps(payload, indent=2) + "\n")
    print(f"wrote {args.out}", file=sys.stderr)


def _cmd_experiment(args) -> None:
    from .evaluate import run_experiment  # heavier import path kept local
    config = amp_io.read_experiment_config(args.config, seed=args.seed)
    result = run_experiment(config)
    amp_io.write_results_csv(result, args.out)
    failures = sum(1 for r in result.records if r.error is not None)
    print(f"wrote {args.out}: {len(result.records)} records, {failures} failures",
          file=sys.stderr)


def _cmd_intermittence(args) -> None:
    dataset = amp_io.read_dataset(args.src)
    for i, s in enumerate(dataset.series):
        print(f"{i},{intermittence(s.samples, args.quantum)!r}")
    print(f"mean,{mean_intermittence(dataset, args.quantum)!r}")


_COMMANDS = {
    "synth": _cmd_synth,
    "ingest": _cmd_ingest,
    "extract": _cmd_extract,
    "baseline": _cmd_baseline,
    "evaluate": _cmd_evaluate,
    "experiment": _cmd_experiment,
    "intermittence": _cmd_intermittence,
}


def main(argv=None) -> int:
    logging.basicConfig(stream=sys.stderr, level=logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        _COMMANDS[args.command](args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    except BrokenPipeError:
        return 0
    except (ValueError, OSError, RuntimeError, KeyError) as exc:
        print(f"amp: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

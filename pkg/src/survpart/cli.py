"""Batch command line front end.

Four subcommands cover the pipeline: simulate writes a synthetic cohort,
train fits one model on a seeded split, gridsearch cross-validates a
hyperparameter grid, and evaluate scores a saved model on a dataset.
Every output is plain CSV or JSON and byte-identical under a repeated
invocation with the same arguments.
"""

import argparse
import csv
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .data import load_csv, save_csv, split
from .errors import (
    CSVParseError,
    NumericError,
    TrainingDivergenceError,
    UndefinedMetricError,
)
from .metrics import MetricReport, evaluate_model
from .simulate import GENERATORS
from .training import (
    MODES,
    TrainConfig,
    derive_seed,
    grid_search_cv,
    load_model,
    save_model,
    train,
)

FILE_SCHEMA_VERSION = 1


def _u64(text):
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return value


def _out_dir(path) -> Path:
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_json(path, doc) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1, sort_keys=True)
        fh.write("\n")


def _load_json(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    version = doc.pop("schema_version", FILE_SCHEMA_VERSION)
    if version != FILE_SCHEMA_VERSION:
        raise ValueError(f"{path}: unsupported schema_version {version!r}")
    return doc


def _resolve_t_max(args, data_path):
    """Explicit flag wins, then the simulator's metadata sidecar, then the
    sample maximum (load_csv default)."""
    if getattr(args, "t_max", None) is not None:
        return args.t_max
    meta_path = Path(data_path).parent / "meta.json"
    if meta_path.exists():
        return float(_load_json(meta_path)["t_max"])
    return None


def _write_trace_csv(path, trace) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["epoch", "train_loss", "val_loss", "tau"])
        for epoch, train_loss, val_loss, tau in trace:
            writer.writerow([epoch, repr(train_loss), repr(val_loss), repr(tau)])


def _write_cut_history_csv(path, cut_history) -> None:
    history = np.atleast_2d(np.asarray(cut_history, dtype=np.float64))
    m = history.shape[1]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["epoch"] + [f"c{j + 1}" for j in range(m)])
        for epoch, row in enumerate(history):
            writer.writerow([epoch] + [repr(float(v)) for v in row])


def cmd_simulate(args) -> int:
    out = _out_dir(args.out)
    sim = GENERATORS[args.gen](args.n, args.seed)
    save_csv(sim.dataset, out / "data.csv")
    meta = {
        "schema_version": FILE_SCHEMA_VERSION,
        "generator": args.gen,
        "n": args.n,
        "seed": args.seed,
        "t_max": sim.dataset.t_max,
        "true_cuts": [float(c) for c in sim.true_cuts],
        "cluster_sizes": np.bincount(sim.clusters).tolist(),
        "n_events": int(sim.dataset.events.sum()),
    }
    _write_json(out / "meta.json", meta)
    print(f"wrote {out / 'data.csv'} and {out / 'meta.json'}")
    return 0


def _build_train_config(args) -> TrainConfig:
    doc = _load_json(args.config) if args.config else {}
    config = TrainConfig.from_dict(doc)
    if getattr(args, "mode", None):
        config = replace(config, mode=args.mode)
    if getattr(args, "seed", None) is not None:
        config = replace(config, seed=args.seed)
    return config


def cmd_train(args) -> int:
    out = _out_dir(args.out)
    config = _build_train_config(args)
    dataset = load_csv(args.data, t_max=_resolve_t_max(args, args.data))
    train_set, val_set, test_set = split(
        dataset, config.fractions, derive_seed(config.seed, 0, 0)
    )
    run_config = replace(config, seed=derive_seed(config.seed, 1, 0))
    try:
        model = train(run_config, train_set, val_set)
    except TrainingDivergenceError as err:
        if err.trace:
            _write_trace_csv(out / "trace.csv", err.trace)
        print(f"training diverged: {err}", file=sys.stderr)
        return 1
    model.fingerprints["dataset"] = dataset.fingerprint()
    save_model(out / "model.json", model)
    _write_trace_csv(out / "trace.csv", model.train_trace)
    _write_cut_history_csv(out / "cuts_history.csv", model.cut_history)
    save_csv(test_set, out / "test.csv")
    cuts = ", ".join(f"{c:.3f}" for c in model.cuts.interior)
    print(
        f"trained {config.mode} model: best epoch {model.best_epoch}, "
        f"cut points [{cuts}], artifacts in {out}"
    )
    return 0


def cmd_gridsearch(args) -> int:
    out = _out_dir(args.out)
    doc = _load_json(args.config)
    base = TrainConfig.from_dict(doc.get("base", {}))
    grid_spec = doc.get("grid", {})
    folds = int(doc.get("folds", 5))
    seed = args.seed if args.seed is not None else int(doc.get("seed", 0))
    configs = [base]
    for key, values in grid_spec.items():
        if not isinstance(values, list) or not values:
            raise ValueError(f"grid axis {key!r} must be a non-empty list")
        configs = [replace(cfg, **{key: v}) for cfg in configs for v in values]
    dataset = load_csv(args.data, t_max=_resolve_t_max(args, args.data))
    result = grid_search_cv(configs, dataset, folds=folds, seed=seed, jobs=args.jobs)

    config_fields = list(TrainConfig.__dataclass_fields__)
    with open(out / "leaderboard.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["rank", "mean_val_ci", "std_val_ci", "n_failed"] + config_fields)
        for rank, res in enumerate(result.results, start=1):
            cfg = res.config.to_dict()
            writer.writerow(
                [rank, repr(res.mean_val_ci), repr(res.std_val_ci), res.n_failed]
                + [cfg[f] for f in config_fields]
            )

    if all(res.n_failed == folds for res in result.results):
        for res in result.results:
            for err in res.errors:
                print(err, file=sys.stderr)
        print("every grid cell failed", file=sys.stderr)
        return 1

    fold_scores = result.best.fold_val_ci
    candidates = [f for f, m in enumerate(result.winner_models) if m is not None]
    best_fold = max(candidates, key=lambda f: fold_scores[f])
    save_model(out / "winner_model.json", result.winner_models[best_fold])

    report_doc = {
        "schema_version": FILE_SCHEMA_VERSION,
        "config": result.best_config.to_dict(),
        "mean_val_ci": result.best.mean_val_ci,
        "std_val_ci": result.best.std_val_ci,
        "fold_val_ci": result.best.fold_val_ci,
        "errors": result.best.errors,
        "fold_reports": [
            r.to_json_dict() if r is not None else None
            for r in result.winner_test_reports
        ],
        "test_summary": {
            name: {"mean": mean, "std": std}
            for name, (mean, std) in result.winner_test_summary.items()
        },
    }
    _write_json(out / "winner_report.json", report_doc)

    metric_names = ("cindex", "auc_last", "calib_slope", "calib_intercept")
    with open(out / "winner_report.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["fold"] + list(MetricReport.CSV_FIELDS))
        for f, rep in enumerate(result.winner_test_reports):
            row = rep.to_csv_row() if rep is not None else [""] * len(MetricReport.CSV_FIELDS)
            writer.writerow([f] + row)
        for stat, pick in (("mean", 0), ("std", 1)):
            row = [stat]
            for name in MetricReport.CSV_FIELDS:
                if name in metric_names and name in result.winner_test_summary:
                    row.append(repr(result.winner_test_summary[name][pick]))
                else:
                    row.append("")
            writer.writerow(row)

    best = result.best
    print(
        f"grid search over {len(configs)} configurations, {folds} folds: "
        f"best mean validation CI {best.mean_val_ci:.4f} "
        f"(std {best.std_val_ci:.4f}), artifacts in {out}"
    )
    return 0


def cmd_evaluate(args) -> int:
    out = _out_dir(args.out)
    model = load_model(args.model)
    dataset = load_csv(args.data, t_max=_resolve_t_max(args, args.data))
    fingerprint = dataset.fingerprint()
    warning = None
    for key, value in sorted(model.fingerprints.items()):
        if value == fingerprint:
            warning = (
                f"dataset matches the fingerprint of the model's {key!r} data; "
                "these metrics are in-sample"
            )
            break
    report = evaluate_model(model, dataset, provenance_warning=warning)
    _write_json(out / "report.json", report.to_json_dict())
    with open(out / "report.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(list(MetricReport.CSV_FIELDS))
        writer.writerow(report.to_csv_row())
    if warning:
        print(f"warning: {warning}", file=sys.stderr)
    if report.reasons:
        for name, reason in sorted(report.reasons.items()):
            print(f"{name} undefined: {reason}", file=sys.stderr)
        return 1
    print(
        f"cindex {report.cindex:.4f}, auc {report.auc_last:.4f}, "
        f"calibration slope {report.calib_slope:.4f} "
        f"intercept {report.calib_intercept:.4f}, report in {out}"
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="survpart",
        description="Discrete-time survival models with learnable cut points",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="generate a synthetic cohort")
    p.add_argument("--gen", required=True, choices=sorted(GENERATORS))
    p.add_argument("--n", type=int, required=True, help="number of records")
    p.add_argument("--seed", type=_u64, default=0)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("train", help="fit one model on a seeded split")
    p.add_argument("--data", required=True, help="dataset CSV")
    p.add_argument("--config", help="TrainConfig JSON; defaults apply if omitted")
    p.add_argument("--out", required=True)
    p.add_argument("--mode", choices=MODES, help="override the configured mode")
    p.add_argument("--seed", type=_u64, help="override the configured seed")
    p.add_argument("--t-max", type=float, dest="t_max", help="override the horizon")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("gridsearch", help="cross-validated hyperparameter search")
    p.add_argument("--data", required=True)
    p.add_argument("--config", required=True, help="JSON with base, grid, folds")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=_u64, help="override the configured seed")
    p.add_argument("--jobs", type=int, default=1, help="parallel grid cells")
    p.add_argument("--t-max", type=float, dest="t_max")
    p.set_defaults(func=cmd_gridsearch)

    p = sub.add_parser("evaluate", help="score a saved model on a dataset")
    p.add_argument("--model", required=True, help="model artifact JSON")
    p.add_argument("--data", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--t-max", type=float, dest="t_max")
    p.set_defaults(func=cmd_evaluate)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (
        CSVParseError,
        NumericError,
        TrainingDivergenceError,
        UndefinedMetricError,
        ValueError,
        OSError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""Command-line entry point: ``qbplab simulate | bench | roc``.

Every flag may also come from a JSON file given with ``--config``; flags
on the command line win.  ``QBPLAB_OUTDIR`` sets the default output
directory for ``bench``.
"""
from __future__ import annotations

import argparse
import datetime as _dt
import json
import os
import platform
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .cv import rdcv, simulate_benchmark
from .data import DataError, load_csv, write_csv
from .io import save_model
from .methods import METHOD_NAMES, get_method
from .metrics import roc_curve
from .simgen import DESIGN_IDS, DesignError, build_design, sample_dataset

ENV_OUTDIR = "QBPLAB_OUTDIR"
FAILED_MARKER = "FAILED"

# command -> {option: default}; None means "required unless supplied elsewhere"
_DEFAULTS = {
    "simulate": {"design": None, "n": None, "seed": 0, "out": None, "correlation": "identity"},
    "bench": {"design": None, "data": None, "label": "y", "methods": None, "reps": 500,
              "seed": 0, "out": None, "threads": None, "validation_n": 5000, "folds": 6,
              "outer_folds": 6, "n": None, "correlation": "identity"},
    "roc": {"data": None, "label": "y", "method": None, "params": None, "out": None,
            "save_model": None},
}


class UsageError(Exception):
    pass


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qbplab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"qbplab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON file with option values (flags win)")

    p = sub.add_parser("simulate", help="draw one synthetic dataset")
    common(p)
    p.add_argument("--design", help=f"design id ({', '.join(DESIGN_IDS)})")
    p.add_argument("--n", type=int, help="override the design's sample size")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="output CSV path")
    p.add_argument("--correlation", help="'identity' or a CSV file with a 35x35 matrix")

    p = sub.add_parser("bench", help="benchmark methods on a design or a dataset")
    common(p)
    p.add_argument("--design", help="simulation protocol on this design")
    p.add_argument("--data", help="rdCV protocol on this CSV dataset")
    p.add_argument("--label", help="label column of --data (default y)")
    p.add_argument("--methods", help=f"comma-separated subset of {','.join(METHOD_NAMES)}")
    p.add_argument("--reps", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help=f"output directory (default ${ENV_OUTDIR} or ./qbplab-out)")
    p.add_argument("--threads", type=int, help="worker processes (default: all CPUs)")
    p.add_argument("--validation-n", dest="validation_n", type=int)
    p.add_argument("--folds", type=int, help="tuning folds (inner folds for rdCV)")
    p.add_argument("--outer-folds", dest="outer_folds", type=int, help="rdCV outer folds")
    p.add_argument("--n", type=int, help="override the design's training size")
    p.add_argument("--correlation")

    p = sub.add_parser("roc", help="in-sample ROC curve of one fitted method")
    common(p)
    p.add_argument("--data")
    p.add_argument("--label")
    p.add_argument("--method")
    p.add_argument("--params", help="JSON object of method parameters (default: method default)")
    p.add_argument("--out", help="output CSV path")
    p.add_argument("--save-model", dest="save_model", help="also write the fitted model as JSON")
    return parser


def resolve_config(command: str, ns: argparse.Namespace) -> dict:
    """Merge defaults < config file < command-line flags."""
    cfg = dict(_DEFAULTS[command])
    if getattr(ns, "config", None):
        try:
            loaded = json.loads(Path(ns.config).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {ns.config}: {exc}") from None
        if not isinstance(loaded, dict):
            raise UsageError("config file must hold a JSON object")
        for key, value in loaded.items():
            key = key.replace("-", "_")
            if key not in cfg:
                raise UsageError(f"unknown config key {key!r} for {command}")
            cfg[key] = value
    for key in cfg:
        value = getattr(ns, key, None)
        if value is not None:
            cfg[key] = value
    return cfg


def _method_list(value) -> list:
    if value is None:
        raise UsageError(f"--methods is required (choose from {', '.join(METHOD_NAMES)})")
    names = value.split(",") if isinstance(value, str) else list(value)
    names = [n.strip() for n in names if n.strip()]
    if not names:
        raise UsageError("--methods is empty")
    for n in names:
        if n not in METHOD_NAMES:
            raise UsageError(f"unknown method {n!r}; valid names: {', '.join(METHOD_NAMES)}")
    return names


def _design_id(value) -> str:
    did = str(value).strip().lower()
    if did not in DESIGN_IDS:
        raise UsageError(f"unknown design {value!r}; valid ids: {', '.join(DESIGN_IDS)}")
    return did


def cmd_simulate(cfg: dict) -> int:
    if cfg["design"] is None or cfg["out"] is None:
        raise UsageError("simulate needs --design and --out")
    design = build_design(_design_id(cfg["design"]), cfg["correlation"])
    rng = np.random.default_rng(int(cfg["seed"]))
    ds, mask = sample_dataset(design, rng, cfg["n"])
    out = Path(cfg["out"])
    write_csv(ds, out, "y")
    sidecar = {
        "design": design.id,
        "seed": int(cfg["seed"]),
        "n": ds.n,
        "n_cases": ds.n_cases,
        "correlation": str(cfg["correlation"]),
        "relevance_mask": [bool(b) for b in mask],
        "names": list(ds.names),
        "qbplab_version": __version__,
    }
    out.with_suffix(".json").write_text(json.dumps(sidecar, indent=1) + "\n", encoding="utf-8")
    return 0


def _bench_compute(cfg: dict):
    methods = _method_list(cfg["methods"])
    threads = cfg["threads"] or os.cpu_count() or 1
    if (cfg["design"] is None) == (cfg["data"] is None):
        raise UsageError("bench needs exactly one of --design or --data")
    if int(cfg["reps"]) < 1:
        raise UsageError("--reps must be >= 1")
    if cfg["design"] is not None:
        did = _design_id(cfg["design"])
        return "simulation", simulate_benchmark(
            build_design(did, cfg["correlation"]), methods, reps=int(cfg["reps"]),
            seed=int(cfg["seed"]), validation_n=int(cfg["validation_n"]), K=int(cfg["folds"]),
            threads=threads, n=cfg["n"])
    ds = load_csv(cfg["data"], cfg["label"])
    return "rdcv", rdcv(ds, methods, reps=int(cfg["reps"]), K_outer=int(cfg["outer_folds"]),
                        K_inner=int(cfg["folds"]), seed=int(cfg["seed"]), threads=threads,
                        dataset_name=Path(cfg["data"]).stem)


def cmd_bench(cfg: dict) -> int:
    out = Path(cfg["out"] or os.environ.get(ENV_OUTDIR) or "qbplab-out")
    out.mkdir(parents=True, exist_ok=True)
    marker = out / FAILED_MARKER
    try:
        protocol, result = _bench_compute(cfg)
        if marker.exists():
            marker.unlink()
        result.to_csv(out / "repetitions.csv")
        result.summary_to_csv(out / "summary.csv")
        provenance = {
            "protocol": protocol,
            "config": {k: v for k, v in cfg.items()},
            "seed": int(cfg["seed"]),
            "qbplab_version": __version__,
            "python": platform.python_version(),
            "numpy": np.__version__,
            "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
        }
        (out / "provenance.json").write_text(json.dumps(provenance, indent=1, default=str) + "\n",
                                             encoding="utf-8")
    except UsageError:
        raise
    except Exception as exc:
        marker.write_text(f"{type(exc).__name__}: {exc}\n", encoding="utf-8")
        raise
    return 0


def cmd_roc(cfg: dict) -> int:
    if cfg["data"] is None or cfg["method"] is None or cfg["out"] is None:
        raise UsageError("roc needs --data, --method and --out")
    method = get_method(_method_list(cfg["method"])[0])
    ds = load_csv(cfg["data"], cfg["label"])
    method.check(ds)
    ds.require_both_classes()
    params = cfg["params"]
    if params is None:
        params = method.default_params(ds)
    elif isinstance(params, str):
        try:
            params = json.loads(params)
        except json.JSONDecodeError as exc:
            raise UsageError(f"--params is not valid JSON: {exc}") from None
    model = method.fit(ds, params)
    curve = roc_curve(method.rank_scores(model, ds.features), ds.labels)
    curve.to_csv(cfg["out"], comment=f"method={method.name} params={json.dumps(params, sort_keys=True)}")
    if cfg["save_model"]:
        save_model(model, cfg["save_model"])
    return 0


_COMMANDS = {"simulate": cmd_simulate, "bench": cmd_bench, "roc": cmd_roc}


def main(argv=None) -> int:
    parser = _build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = resolve_config(ns.command, ns)
        return _COMMANDS[ns.command](cfg)
    except UsageError as exc:
        parser.error(str(exc))  # exits with status 2
    except (DataError, DesignError, ValueError, OSError) as exc:
        print(f"qbplab {ns.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end: run campaigns from manifests, write CSV + JSON.

Output contract: every campaign writes ``result.csv`` with one fixed
column schema (absent fields left empty, numbers at 6 significant
digits) and ``meta.json`` with full provenance. Reruns with the same
manifest and seed produce byte-identical result files.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
from pathlib import Path

from . import __version__
from .engine import (
    SimConfig,
    run_batch,
    replicate_actions,
    sweep_b,
    sweep_pq,
    tune_hyperparameters,
)
from .game import Action
from .manifest import (
    CAMPAIGNS,
    TRACE_CAMPAIGNS,
    ExperimentManifest,
    ManifestError,
    parse_manifest,
)
from .policies import EpsilonGreedy, ThompsonSampling, UCB1, policy_name

CSV_COLUMNS = [
    "campaign", "policy", "epsilon", "c", "prior", "p", "q", "b",
    "rounds", "replicates", "window", "I", "I_R", "stderr_I",
]

SEED_ENV_VAR = "SIMCLI_SEED"


class CliError(Exception):
    """User-facing failure; rendered as a single-line error."""


def _fmt(value) -> str:
    """Serialize one CSV field: empty for absent, 6 significant digits."""
    if value is None or value == "":
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, int):
        return str(value)
    return f"{value:.6g}"


def _policy_columns(spec) -> dict:
    cols = {"policy": policy_name(spec), "epsilon": None, "c": None, "prior": None}
    if isinstance(spec, EpsilonGreedy):
        cols["epsilon"] = spec.epsilon
    elif isinstance(spec, UCB1):
        cols["c"] = spec.c
    elif isinstance(spec, ThompsonSampling):
        cols["prior"] = spec.prior
    return cols


def _base_row(manifest: ExperimentManifest) -> dict:
    config = manifest.config
    return {
        "campaign": manifest.campaign,
        **_policy_columns(config.policy),
        "p": config.strategy.p,
        "q": config.strategy.q,
        "b": config.game.b,
        "rounds": config.rounds,
        "replicates": config.replicates,
        "window": None,
        "I": None,
        "I_R": None,
        "stderr_I": None,
    }


def _campaign_rows(
    manifest: ExperimentManifest, workers: int | None
) -> tuple[list[dict], dict]:
    """Run the campaign; return CSV rows plus campaign-specific metadata."""
    config = manifest.config
    extra_meta: dict = {}

    if manifest.campaign == "run":
        result = run_batch(config, workers=workers)
        row = _base_row(manifest)
        row.update(I=result.I, I_R=result.I_R, stderr_I=result.stderr_I)
        return [row], extra_meta

    if manifest.campaign == "sweep-b":
        sweep = sweep_b(config, manifest.grids["b"], workers=workers)
        rows = []
        for cell in sweep.cells:
            row = _base_row(manifest)
            row.update(
                b=cell.point["b"], I=cell.I, I_R=cell.I_R, stderr_I=cell.stderr_I
            )
            rows.append(row)
        return rows, extra_meta

    if manifest.campaign == "sweep-pq":
        sweep = sweep_pq(
            config, manifest.grids["p"], manifest.grids["q"], workers=workers
        )
        rows = []
        for cell in sweep.cells:
            row = _base_row(manifest)
            row.update(
                p=cell.point["p"], q=cell.point["q"],
                I=cell.I, I_R=cell.I_R, stderr_I=cell.stderr_I,
            )
            rows.append(row)
        return rows, extra_meta

    if manifest.campaign == "tune":
        grid_name, grid = next(iter(manifest.grids.items()))
        best_value, sweep = tune_hyperparameters(config, grid, workers=workers)
        rows = []
        for cell in sweep.cells:
            row = _base_row(manifest)
            row[grid_name] = cell.point[grid_name]
            row.update(I=cell.I, I_R=cell.I_R, stderr_I=cell.stderr_I)
            rows.append(row)
        extra_meta = {"tuned_parameter": grid_name, "best_value": best_value}
        return rows, extra_meta

    if manifest.campaign == "time-course":
        result = run_batch(config, workers=workers)
        rows = []
        for (window, mean_i), (_, mean_ir) in zip(
            result.per_window_I, result.per_window_I_R
        ):
            row = _base_row(manifest)
            row.update(window=window, I=mean_i, I_R=mean_ir)
            rows.append(row)
        return rows, extra_meta

    raise CliError(f"unknown campaign {manifest.campaign!r}")


def _manifest_echo(manifest: ExperimentManifest) -> dict:
    config = manifest.config
    policy = _policy_columns(config.policy)
    return {
        "campaign": manifest.campaign,
        "policy": {k: v for k, v in policy.items() if v is not None},
        "opponent": {"p": config.strategy.p, "q": config.strategy.q},
        "game": {"b": config.game.b},
        "run": {
            "rounds": config.rounds,
            "replicates": config.replicates,
            "initial_reputation": str(config.initial_reputation),
            "trace_window": config.trace_window,
        },
        "grids": {k: list(v) for k, v in manifest.grids.items()},
        "emit_traces": manifest.emit_traces,
    }


def _write_traces(config: SimConfig, traces_dir: Path) -> int:
    traces_dir.mkdir(parents=True, exist_ok=True)
    reward_of = {
        (0, 0): config.game.b + 3.0, (0, 1): 0.0, (1, 0): 3.0, (1, 1): 3.0,
    }
    symbol = {0: "C", 1: "D"}
    for k in range(config.replicates):
        actions, opponents = replicate_actions(config, k)
        path = traces_dir / f"replicate_{k}.csv"
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["round", "action", "opponent_action", "reward"])
            for t in range(config.rounds):
                a, o = int(actions[t]), int(opponents[t])
                writer.writerow([t + 1, symbol[a], symbol[o], _fmt(reward_of[a, o])])
    return config.replicates


def execute(
    manifest: ExperimentManifest,
    out_dir: str | None = None,
    workers: int | None = None,
    emit_traces: bool = False,
) -> Path:
    """Run a validated manifest and write result.csv + meta.json.

    Partial outputs are removed if anything fails midway.
    """
    target = out_dir or manifest.output_dir
    if target is None:
        raise CliError("no output directory: set output_dir in the manifest or pass --out")
    emit = emit_traces or manifest.emit_traces
    if emit and manifest.campaign not in TRACE_CAMPAIGNS:
        raise CliError(
            f"--emit-traces is only supported for campaigns: {', '.join(TRACE_CAMPAIGNS)}"
        )

    out_path = Path(target)
    out_path.mkdir(parents=True, exist_ok=True)
    created: list[Path] = []
    started = time.monotonic()
    try:
        rows, extra_meta = _campaign_rows(manifest, workers)

        csv_path = out_path / "result.csv"
        created.append(csv_path)
        with csv_path.open("w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS, lineterminator="\n")
            writer.writeheader()
            for row in rows:
                writer.writerow({k: _fmt(row[k]) for k in CSV_COLUMNS})

        traces_written = 0
        if emit:
            traces_dir = out_path / "traces"
            created.append(traces_dir)
            traces_written = _write_traces(manifest.config, traces_dir)

        meta = {
            "engine_version": __version__,
            "master_seed": str(manifest.config.master_seed),
            "workers": workers,
            "wall_clock_seconds": round(time.monotonic() - started, 3),
            "manifest": _manifest_echo(manifest),
            "rows_written": len(rows),
            "traces_written": traces_written,
            **extra_meta,
        }
        meta_path = out_path / "meta.json"
        created.append(meta_path)
        with meta_path.open("w") as fh:
            json.dump(meta, fh, indent=2, sort_keys=True)
            fh.write("\n")
    except Exception:
        for path in reversed(created):
            if path.is_dir():
                for child in sorted(path.glob("**/*"), reverse=True):
                    child.unlink()
                path.rmdir()
            elif path.exists():
                path.unlink()
        raise
    return out_path


def _resolve_seed(manifest: ExperimentManifest) -> ExperimentManifest:
    env_value = os.environ.get(SEED_ENV_VAR)
    if env_value is not None and manifest.seed_provided:
        raise CliError(
            f"seed set in both the manifest and {SEED_ENV_VAR}; remove one"
        )
    if env_value is not None:
        try:
            seed = int(env_value, 10)
        except ValueError as exc:
            raise CliError(f"{SEED_ENV_VAR} must be an unsigned decimal integer") from exc
        if not 0 <= seed < 2**64:
            raise CliError(f"{SEED_ENV_VAR} must fit in 64 bits, got {seed}")
        return manifest.with_seed(seed)
    if not manifest.seed_provided:
        raise CliError(f"no seed: set 'seed' in the manifest or {SEED_ENV_VAR}")
    return manifest


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="simcli",
        description="Run simulation campaigns from a manifest and write CSV results.",
    )
    parser.add_argument("campaign", choices=CAMPAIGNS)
    parser.add_argument("--manifest", required=True, help="path to the YAML manifest")
    parser.add_argument(
        "--workers", type=int, default=None,
        help="worker cap for the engine (default: machine parallelism)",
    )
    parser.add_argument("--out", default=None, help="output directory (overrides manifest)")
    parser.add_argument(
        "--emit-traces", action="store_true",
        help="also write per-replicate round traces (run/time-course only)",
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        try:
            text = Path(args.manifest).read_text()
        except OSError as exc:
            raise CliError(f"cannot read manifest: {exc}") from exc
        manifest = parse_manifest(text)
        if manifest.campaign != args.campaign:
            raise CliError(
                f"campaign mismatch: command line says {args.campaign!r}, "
                f"manifest says {manifest.campaign!r}"
            )
        if args.workers is not None and args.workers < 1:
            raise CliError(f"--workers must be >= 1, got {args.workers}")
        manifest = _resolve_seed(manifest)
        out = execute(
            manifest,
            out_dir=args.out,
            workers=args.workers,
            emit_traces=args.emit_traces,
        )
    except (CliError, ManifestError) as exc:
        print(f"simcli: error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # unexpected failure: still one parsable line
        print(f"simcli: internal-error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Experiment manifests: a strict YAML schema for simulation campaigns.

One document fully describes a campaign: the policy, the opponent
strategy, the game, the run protocol, and (for sweeps) the parameter
grids. Validation is strict: unknown keys are errors, every field is
range-checked, and nothing runs until the whole manifest is sound.
Exploration hyperparameters may be written as fractions ("1/128") to
avoid decimal rounding in configs.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Any

import yaml

from .engine import SimConfig
from .env import OpponentStrategy
from .game import Action, GameParams
from .policies import EpsilonGreedy, PolicySpec, ThompsonSampling, UCB1

CAMPAIGNS = ("run", "sweep-b", "sweep-pq", "tune", "time-course")

# Campaigns that honor emit_traces (per-replicate round logs); sweeps would
# produce one trace set per cell, which is never what anyone wants.
TRACE_CAMPAIGNS = ("run", "time-course")


class ManifestError(ValueError):
    """Raised for any malformed or invalid manifest."""


@dataclass(frozen=True)
class ExperimentManifest:
    campaign: str
    config: SimConfig
    grids: dict[str, tuple[float, ...]]
    output_dir: str | None
    emit_traces: bool
    seed_provided: bool

    def with_seed(self, master_seed: int) -> "ExperimentManifest":
        return replace(self, config=replace(self.config, master_seed=master_seed))


def _require_mapping(value: Any, where: str) -> dict:
    if not isinstance(value, dict):
        raise ManifestError(f"{where} must be a mapping, got {type(value).__name__}")
    return value


def _reject_unknown(mapping: dict, allowed: set[str], where: str) -> None:
    unknown = sorted(set(mapping) - allowed)
    if unknown:
        raise ManifestError(f"unknown key(s) in {where}: {', '.join(unknown)}")


def _number(value: Any, field: str) -> float:
    """Accept ints, floats, and fraction strings like '1/128'."""
    if isinstance(value, bool):
        raise ManifestError(f"{field}: expected a number, got a boolean")
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str) and "/" in value:
        num, _, den = value.partition("/")
        try:
            return float(num.strip()) / float(den.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ManifestError(f"{field}: bad fraction {value!r}") from exc
    raise ManifestError(f"{field}: expected a number, got {value!r}")


def _integer(value: Any, field: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ManifestError(f"{field}: expected an integer, got {value!r}")
    return value


def _boolean(value: Any, field: str) -> bool:
    if not isinstance(value, bool):
        raise ManifestError(f"{field}: expected a boolean, got {value!r}")
    return value


def _parse_policy(raw: Any) -> PolicySpec:
    section = _require_mapping(raw, "policy")
    kind = section.get("kind")
    if kind is None:
        raise ManifestError("policy.kind is required")
    try:
        if kind == "epsilon-greedy":
            _reject_unknown(section, {"kind", "epsilon"}, "policy")
            if "epsilon" not in section:
                raise ManifestError("policy.epsilon is required for epsilon-greedy")
            return EpsilonGreedy(_number(section["epsilon"], "policy.epsilon"))
        if kind == "ucb1":
            _reject_unknown(section, {"kind", "c"}, "policy")
            if "c" not in section:
                raise ManifestError("policy.c is required for ucb1")
            return UCB1(_number(section["c"], "policy.c"))
        if kind == "thompson":
            _reject_unknown(section, {"kind", "prior"}, "policy")
            prior = _number(section.get("prior", 0.5), "policy.prior")
            return ThompsonSampling(prior)
    except ValueError as exc:
        if isinstance(exc, ManifestError):
            raise
        raise ManifestError(f"policy: {exc}") from exc
    raise ManifestError(
        f"policy.kind must be one of epsilon-greedy, ucb1, thompson; got {kind!r}"
    )


def _parse_opponent(raw: Any) -> OpponentStrategy:
    section = _require_mapping(raw, "opponent")
    _reject_unknown(section, {"p", "q"}, "opponent")
    missing = [k for k in ("p", "q") if k not in section]
    if missing:
        raise ManifestError(f"opponent: missing required field(s): {', '.join(missing)}")
    try:
        return OpponentStrategy(
            _number(section["p"], "opponent.p"), _number(section["q"], "opponent.q")
        )
    except ValueError as exc:
        if isinstance(exc, ManifestError):
            raise
        raise ManifestError(f"opponent: {exc}") from exc


def _parse_game(raw: Any) -> GameParams:
    section = _require_mapping(raw, "game")
    _reject_unknown(section, {"b"}, "game")
    if "b" not in section:
        raise ManifestError("game.b is required")
    try:
        return GameParams(_number(section["b"], "game.b"))
    except ValueError as exc:
        if isinstance(exc, ManifestError):
            raise
        raise ManifestError(f"game: {exc}") from exc


_RUN_DEFAULTS = {
    "rounds": 2000,
    "replicates": 500,
    "initial_reputation": "C",
    "trace_window": 50,
}


def _parse_run(raw: Any) -> dict:
    if raw is None:
        section = {}
    else:
        section = _require_mapping(raw, "run")
    _reject_unknown(section, set(_RUN_DEFAULTS), "run")
    merged = {**_RUN_DEFAULTS, **section}
    rep = merged["initial_reputation"]
    if rep not in ("C", "D"):
        raise ManifestError(
            f"run.initial_reputation must be 'C' or 'D', got {rep!r}"
        )
    return {
        "rounds": _integer(merged["rounds"], "run.rounds"),
        "replicates": _integer(merged["replicates"], "run.replicates"),
        "trace_window": _integer(merged["trace_window"], "run.trace_window"),
        "initial_reputation": Action.COOPERATE if rep == "C" else Action.DEFECT,
    }


def _expand_grid(raw: Any, field: str) -> tuple[float, ...]:
    if isinstance(raw, list):
        if not raw:
            raise ManifestError(f"{field}: grid must be nonempty")
        return tuple(_number(v, field) for v in raw)
    if isinstance(raw, dict):
        _reject_unknown(raw, {"start", "stop", "step"}, field)
        missing = [k for k in ("start", "stop", "step") if k not in raw]
        if missing:
            raise ManifestError(f"{field}: missing {', '.join(missing)}")
        start = _number(raw["start"], f"{field}.start")
        stop = _number(raw["stop"], f"{field}.stop")
        stepv = _number(raw["step"], f"{field}.step")
        if stepv <= 0:
            raise ManifestError(f"{field}.step must be > 0, got {stepv}")
        if stop < start:
            raise ManifestError(f"{field}: stop {stop} < start {start}")
        n = int((stop - start) / stepv + 1e-9)
        return tuple(round(start + k * stepv, 12) for k in range(n + 1))
    raise ManifestError(f"{field}: expected a list or start/stop/step mapping")


_GRID_KEYS = {
    "sweep-b": {"b"},
    "sweep-pq": {"p", "q"},
    "tune": {"epsilon", "c"},
}


def _parse_grids(raw: Any, campaign: str, policy: PolicySpec) -> dict[str, tuple[float, ...]]:
    if campaign not in _GRID_KEYS:
        if raw is not None:
            raise ManifestError(f"grids are not allowed for campaign {campaign!r}")
        return {}
    if raw is None:
        raise ManifestError(f"campaign {campaign!r} requires a grids section")
    section = _require_mapping(raw, "grids")
    allowed = _GRID_KEYS[campaign]
    _reject_unknown(section, allowed, "grids")

    if campaign == "tune":
        if set(section) == {"epsilon"}:
            if not isinstance(policy, EpsilonGreedy):
                raise ManifestError("grids.epsilon requires an epsilon-greedy policy")
            return {"epsilon": _expand_grid(section["epsilon"], "grids.epsilon")}
        if set(section) == {"c"}:
            if not isinstance(policy, UCB1):
                raise ManifestError("grids.c requires a ucb1 policy")
            return {"c": _expand_grid(section["c"], "grids.c")}
        raise ManifestError("tune requires exactly one grid: epsilon or c")

    missing = sorted(allowed - set(section))
    if missing:
        raise ManifestError(f"grids: missing {', '.join(missing)}")
    return {k: _expand_grid(section[k], f"grids.{k}") for k in sorted(section)}


_TOP_KEYS = {
    "campaign", "seed", "output_dir", "emit_traces",
    "policy", "opponent", "game", "run", "grids",
}
_REQUIRED_TOP = ("campaign", "game", "opponent", "policy")


def parse_manifest(text: str) -> ExperimentManifest:
    """Parse and fully validate a manifest document.

    Raises ManifestError with the offending field named; YAML syntax
    errors keep their line information.
    """
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ManifestError(f"manifest is not valid YAML: {exc}") from exc
    if raw is None:
        raise ManifestError(
            "empty manifest; missing required fields: " + ", ".join(_REQUIRED_TOP)
        )
    top = _require_mapping(raw, "manifest")
    _reject_unknown(top, _TOP_KEYS, "manifest")
    missing = [k for k in _REQUIRED_TOP if k not in top]
    if missing:
        raise ManifestError("missing required fields: " + ", ".join(missing))

    campaign = top["campaign"]
    if campaign not in CAMPAIGNS:
        raise ManifestError(
            f"campaign must be one of {', '.join(CAMPAIGNS)}; got {campaign!r}"
        )
    policy = _parse_policy(top["policy"])
    strategy = _parse_opponent(top["opponent"])
    game = _parse_game(top["game"])
    run = _parse_run(top.get("run"))
    grids = _parse_grids(top.get("grids"), campaign, policy)

    seed_provided = "seed" in top
    seed = 0
    if seed_provided:
        seed = _integer(top["seed"], "seed")
        if not 0 <= seed < 2**64:
            raise ManifestError(f"seed must be a 64-bit unsigned integer, got {seed}")

    output_dir = top.get("output_dir")
    if output_dir is not None and not isinstance(output_dir, str):
        raise ManifestError(f"output_dir must be a string, got {output_dir!r}")

    emit_traces = _boolean(top.get("emit_traces", False), "emit_traces")
    if emit_traces and campaign not in TRACE_CAMPAIGNS:
        raise ManifestError(
            f"emit_traces is only supported for campaigns: {', '.join(TRACE_CAMPAIGNS)}"
        )

    try:
        config = SimConfig(
            policy=policy,
            strategy=strategy,
            game=game,
            master_seed=seed,
            **run,
        )
    except ValueError as exc:
        raise ManifestError(str(exc)) from exc

    return ExperimentManifest(
        campaign=campaign,
        config=config,
        grids=grids,
        output_dir=output_dir,
        emit_traces=emit_traces,
        seed_provided=seed_provided,
    )

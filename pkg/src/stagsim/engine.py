"""Seeded simulation replicates, batch aggregation, and sweep campaigns.

A replicate is one full round sequence of a policy playing against the
reputation-conditioned population; replicates are the independent units
over which cooperation indices and standard errors are computed. Batches
aggregate integer cooperation counts, so results are bit-identical no
matter how replicates are scheduled across workers.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from . import _kernels
from .env import OpponentStrategy, ReputationState, step
from .game import Action, GameParams
from .policies import (
    EpsilonGreedy,
    PolicySpec,
    ThompsonSampling,
    UCB1,
    init_state,
    select_action,
    update,
)
from .rng import derive_stream


@dataclass(frozen=True)
class SimConfig:
    policy: PolicySpec
    strategy: OpponentStrategy
    game: GameParams
    rounds: int = 2000
    replicates: int = 500
    master_seed: int = 0
    initial_reputation: Action = Action.COOPERATE
    trace_window: int = 50

    def __post_init__(self) -> None:
        if self.rounds < 1:
            raise ValueError(f"rounds must be >= 1, got {self.rounds}")
        if self.replicates < 1:
            raise ValueError(f"replicates must be >= 1, got {self.replicates}")
        if self.trace_window < 1:
            raise ValueError(f"trace_window must be >= 1, got {self.trace_window}")
        if not 0 <= self.master_seed < 2**64:
            raise ValueError(
                f"master_seed must be a 64-bit unsigned integer, got {self.master_seed}"
            )
        if not isinstance(self.initial_reputation, Action):
            raise ValueError("initial_reputation must be an Action")


@dataclass(frozen=True)
class RunResult:
    """Aggregated outcome of one batch of replicates."""

    I: float
    I_R: float
    stderr_I: float
    per_window_I: tuple[tuple[int, float], ...]
    per_window_I_R: tuple[tuple[int, float], ...]
    config: SimConfig
    per_replicate_I: np.ndarray


@dataclass(frozen=True)
class SweepCell:
    point: dict[str, float]
    I: float
    I_R: float
    stderr_I: float


@dataclass(frozen=True)
class SweepResult:
    axes: dict[str, tuple[float, ...]]
    cells: tuple[SweepCell, ...] = field(default_factory=tuple)


_KERNELS: dict[type, tuple[Callable, str]] = {
    EpsilonGreedy: (_kernels.epsilon_greedy_replicate, "epsilon"),
    UCB1: (_kernels.ucb1_replicate, "c"),
    ThompsonSampling: (_kernels.thompson_replicate, "prior"),
}


def replicate_actions(
    config: SimConfig, replicate_index: int, cell_index: int = 0
) -> tuple[np.ndarray, np.ndarray]:
    """Fast path for one replicate: (agent actions, opponent actions) as
    uint8 arrays with 0 = cooperate, 1 = defect.

    Bit-identical to run_replicate (enforced by tests)."""
    kernel, hyper_field = _KERNELS[type(config.policy)]
    rng = derive_stream(config.master_seed, replicate_index, cell_index)
    initial_rep = 0 if config.initial_reputation is Action.COOPERATE else 1
    return kernel(
        rng,
        config.rounds,
        config.strategy.p,
        config.strategy.q,
        config.game.b,
        getattr(config.policy, hyper_field),
        initial_rep,
    )


def run_replicate(
    config: SimConfig, replicate_index: int, cell_index: int = 0
) -> tuple[list[Action], list[Action]]:
    """Reference loop for one replicate, composed from the policy and
    environment primitives: select, play, update, round after round.

    Slow but transparent; the compiled kernels must match it exactly.
    """
    if replicate_index >= config.replicates:
        raise ValueError(
            f"replicate_index {replicate_index} out of range for "
            f"{config.replicates} replicates"
        )
    rng = derive_stream(config.master_seed, replicate_index, cell_index)
    state = init_state(config.policy, config.game)
    reputation = ReputationState(config.initial_reputation)
    actions: list[Action] = []
    opponent_actions: list[Action] = []
    for _ in range(config.rounds):
        action = select_action(config.policy, state, rng)
        reward, opponent_action, reputation = step(
            config.strategy, reputation, action, config.game, rng
        )
        state = update(config.policy, state, action, reward, config.game, rng)
        actions.append(action)
        opponent_actions.append(opponent_action)
    return actions, opponent_actions


def _window_slices(rounds: int, window: int) -> list[tuple[int, int]]:
    return [(start, min(start + window, rounds)) for start in range(0, rounds, window)]


def _replicate_counts(
    config: SimConfig, replicate_index: int, cell_index: int
) -> tuple[int, int, np.ndarray, np.ndarray]:
    """Integer cooperation counts for one replicate: totals and per-window."""
    actions, opponents = replicate_actions(config, replicate_index, cell_index)
    coop = actions == 0
    recv = opponents == 0
    slices = _window_slices(config.rounds, config.trace_window)
    win_coop = np.array([int(coop[a:z].sum()) for a, z in slices], dtype=np.int64)
    win_recv = np.array([int(recv[a:z].sum()) for a, z in slices], dtype=np.int64)
    return int(coop.sum()), int(recv.sum()), win_coop, win_recv


def _resolve_workers(workers: int | None) -> int:
    if workers is None:
        return max(1, os.cpu_count() or 1)
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    return workers


def run_batch(
    config: SimConfig, workers: int | None = None, cell_index: int = 0
) -> RunResult:
    """Run all replicates of a config and aggregate cooperation indices.

    The aggregate is a pure function of (config, cell_index): replicate
    streams are derived per index, integer counts are merged in index
    order, so executions with any worker count agree bit for bit.
    """
    n_workers = _resolve_workers(workers)
    indices = range(config.replicates)
    task = lambda k: _replicate_counts(config, k, cell_index)  # noqa: E731
    if n_workers > 1 and config.replicates > 1:
        chunk = max(1, config.replicates // (n_workers * 4))
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            stats = list(pool.map(task, indices, chunksize=chunk))
    else:
        stats = [task(k) for k in indices]

    slices = _window_slices(config.rounds, config.trace_window)
    total_rounds = config.rounds * config.replicates
    coop_total = sum(s[0] for s in stats)
    recv_total = sum(s[1] for s in stats)
    win_coop = np.sum([s[2] for s in stats], axis=0)
    win_recv = np.sum([s[3] for s in stats], axis=0)
    win_sizes = np.array([z - a for a, z in slices], dtype=np.int64)

    per_replicate_I = np.array([s[0] / config.rounds for s in stats])
    if config.replicates > 1:
        stderr = float(
            per_replicate_I.std(ddof=1) / np.sqrt(config.replicates)
        )
    else:
        stderr = 0.0

    denom = win_sizes * config.replicates
    per_window_I = tuple(
        (w, float(win_coop[w] / denom[w])) for w in range(len(slices))
    )
    per_window_I_R = tuple(
        (w, float(win_recv[w] / denom[w])) for w in range(len(slices))
    )
    return RunResult(
        I=coop_total / total_rounds,
        I_R=recv_total / total_rounds,
        stderr_I=stderr,
        per_window_I=per_window_I,
        per_window_I_R=per_window_I_R,
        config=config,
        per_replicate_I=per_replicate_I,
    )


def _check_grid(name: str, grid: Sequence[float], lo: float, hi: float) -> tuple[float, ...]:
    values = tuple(float(v) for v in grid)
    if not values:
        raise ValueError(f"{name} grid must be nonempty")
    for v in values:
        if not lo <= v <= hi:
            raise ValueError(f"{name} grid value {v} outside [{lo}, {hi}]")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ValueError(f"{name} grid must be strictly increasing")
    return values


def _run_cells(
    configs: list[SimConfig], workers: int | None
) -> list[RunResult]:
    """One batch per config; cell index = list position. Cells are
    independent tasks, parallelized across workers."""
    n_workers = _resolve_workers(workers)
    task = lambda ic: run_batch(ic[1], workers=1, cell_index=ic[0])  # noqa: E731
    if n_workers > 1 and len(configs) > 1:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            return list(pool.map(task, enumerate(configs)))
    return [task(ic) for ic in enumerate(configs)]


def sweep_b(
    base: SimConfig, b_grid: Sequence[float], workers: int | None = None
) -> SweepResult:
    """One batch per benefit value, everything else fixed."""
    grid = _check_grid("b", b_grid, 0.0, float("inf"))
    configs = [replace(base, game=GameParams(b)) for b in grid]
    results = _run_cells(configs, workers)
    cells = tuple(
        SweepCell({"b": b}, r.I, r.I_R, r.stderr_I) for b, r in zip(grid, results)
    )
    return SweepResult(axes={"b": grid}, cells=cells)


def sweep_pq(
    base: SimConfig,
    p_grid: Sequence[float],
    q_grid: Sequence[float],
    workers: int | None = None,
) -> SweepResult:
    """Full Cartesian product over cooperation probabilities, row-major
    (p outer, q inner), with independent derived streams per cell."""
    p_values = _check_grid("p", p_grid, 0.0, 1.0)
    q_values = _check_grid("q", q_grid, 0.0, 1.0)
    points = [(p, q) for p in p_values for q in q_values]
    configs = [
        replace(base, strategy=OpponentStrategy(p, q)) for p, q in points
    ]
    results = _run_cells(configs, workers)
    cells = tuple(
        SweepCell({"p": p, "q": q}, r.I, r.I_R, r.stderr_I)
        for (p, q), r in zip(points, results)
    )
    return SweepResult(axes={"p": p_values, "q": q_values}, cells=cells)


def tune_hyperparameters(
    base: SimConfig, grid: Sequence[float], workers: int | None = None
) -> tuple[float, SweepResult]:
    """Grid-search the exploration hyperparameter that maximizes the
    cooperation index at the base (p, q, b).

    Only epsilon-greedy (epsilon) and UCB1 (c) are tunable. Ties go to
    the smaller value, i.e. less exploration.
    """
    if isinstance(base.policy, EpsilonGreedy):
        name = "epsilon"
        values = _check_grid(name, grid, 0.0, 1.0)
        configs = [replace(base, policy=EpsilonGreedy(v)) for v in values]
    elif isinstance(base.policy, UCB1):
        name = "c"
        values = _check_grid(name, grid, 0.0, float("inf"))
        configs = [replace(base, policy=UCB1(v)) for v in values]
    else:
        raise ValueError("hyperparameter tuning applies to epsilon-greedy and UCB1 only")

    results = _run_cells(configs, workers)
    cells = tuple(
        SweepCell({name: v}, r.I, r.I_R, r.stderr_I)
        for v, r in zip(values, results)
    )
    best_value = None
    best_I = -1.0
    for v, r in zip(values, results):
        if r.I > best_I:  # strict: earlier (smaller) value wins ties
            best_value, best_I = v, r.I
    return best_value, SweepResult(axes={name: values}, cells=cells)


def time_course(
    config: SimConfig, workers: int | None = None
) -> list[tuple[int, float, float]]:
    """Windowed cooperation and received-cooperation means, in round order."""
    result = run_batch(config, workers=workers)
    return [
        (w, mean_i, mean_ir)
        for (w, mean_i), (_, mean_ir) in zip(
            result.per_window_I, result.per_window_I_R
        )
    ]

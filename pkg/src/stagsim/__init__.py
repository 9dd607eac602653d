"""Bandit learners in a reputation-conditioned coordination game.

Deterministic, seedable simulations of epsilon-greedy, UCB1, and
Thompson-sampling agents repeatedly playing a generalized Stag Hunt
against a population whose cooperation depends on the agent's previous
action, plus sweep campaigns over the game and strategy parameters.
"""

__version__ = "0.1.0"

from .engine import (
    RunResult,
    SimConfig,
    SweepCell,
    SweepResult,
    run_batch,
    run_replicate,
    sweep_b,
    sweep_pq,
    time_course,
    tune_hyperparameters,
)
from .env import OpponentStrategy, ReputationState, opponent_act, step
from .game import Action, GameParams, PayoffPair, max_payoff, payoff
from .policies import (
    EpsilonGreedy,
    ThompsonSampling,
    UCB1,
    dominance_threshold,
    init_state,
    select_action,
    update,
)
from .rng import derive_stream

__all__ = [
    "Action",
    "EpsilonGreedy",
    "GameParams",
    "OpponentStrategy",
    "PayoffPair",
    "ReputationState",
    "RunResult",
    "SimConfig",
    "SweepCell",
    "SweepResult",
    "ThompsonSampling",
    "UCB1",
    "derive_stream",
    "dominance_threshold",
    "init_state",
    "max_payoff",
    "opponent_act",
    "payoff",
    "run_batch",
    "run_replicate",
    "select_action",
    "step",
    "sweep_b",
    "sweep_pq",
    "time_course",
    "tune_hyperparameters",
    "update",
]

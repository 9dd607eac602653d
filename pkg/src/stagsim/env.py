"""Reputation-conditioned opponent population.

Each round the learning agent faces a fresh opponent drawn from an
infinite population. The opponent saw the agent's previous action and
cooperates with probability p after a cooperation, or q after a
defection. Opponents carry no identity or memory across rounds.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .game import Action, GameParams, payoff


@dataclass(frozen=True)
class OpponentStrategy:
    """Pair of cooperation probabilities conditioned on the agent's last action."""

    p: float  # P(opponent cooperates | agent's previous action was C)
    q: float  # P(opponent cooperates | agent's previous action was D)

    def __post_init__(self) -> None:
        for name in ("p", "q"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must be a probability in [0, 1], got {value}")

    @classmethod
    def always_trust(cls) -> "OpponentStrategy":
        return cls(1.0, 1.0)

    @classmethod
    def never_trust(cls) -> "OpponentStrategy":
        return cls(0.0, 0.0)

    @classmethod
    def trust_cooperators(cls) -> "OpponentStrategy":
        return cls(1.0, 0.0)

    @classmethod
    def trust_defectors(cls) -> "OpponentStrategy":
        return cls(0.0, 1.0)


@dataclass(frozen=True)
class ReputationState:
    """The agent action the current opponent observed (always defined)."""

    last_algorithm_action: Action


def opponent_act(
    strategy: OpponentStrategy, state: ReputationState, rng: np.random.Generator
) -> Action:
    """Draw the opponent's action given the agent's reputation.

    Consumes exactly one uniform draw, even when the relevant probability
    is 0 or 1, so stream positions never depend on strategy values.
    """
    prob = (
        strategy.p
        if state.last_algorithm_action is Action.COOPERATE
        else strategy.q
    )
    return Action.COOPERATE if rng.random() < prob else Action.DEFECT


def step(
    strategy: OpponentStrategy,
    state: ReputationState,
    algorithm_action: Action,
    params: GameParams,
    rng: np.random.Generator,
) -> tuple[float, Action, ReputationState]:
    """Play one round: the opponent reacts to the *current* reputation state.

    Returns (agent reward, opponent action, next reputation state). The next
    state records only the agent's action; opponent behaviour never enters
    the reputation.
    """
    opponent_action = opponent_act(strategy, state, rng)
    reward = payoff(algorithm_action, opponent_action, params).robot_payoff
    return reward, opponent_action, ReputationState(algorithm_action)

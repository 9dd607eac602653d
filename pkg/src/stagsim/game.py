"""Payoff structure of the generalized two-player coordination game.

Both players start each round with an endowment of 3. Mutual cooperation
adds a benefit b on top of the endowment, a unilateral cooperator loses
everything, and a defector always keeps the endowment.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

# Fixed starting endowment; every payoff and threshold is written against it.
BASELINE_ENDOWMENT = 3.0


class Action(Enum):
    COOPERATE = "C"
    DEFECT = "D"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class GameParams:
    """Game parameterized by the extra benefit ``b`` of mutual cooperation.

    ``b`` is real-valued so benefit sweeps can use fractional steps.
    """

    b: float

    def __post_init__(self) -> None:
        # "not >= 0" also rejects NaN
        if not self.b >= 0:
            raise ValueError(f"mutual-cooperation benefit b must be >= 0, got {self.b}")


@dataclass(frozen=True)
class PayoffPair:
    robot_payoff: float
    opponent_payoff: float


def payoff(robot: Action, opponent: Action, params: GameParams) -> PayoffPair:
    """Payoffs for one round of the game.

    (C, C) -> (b+3, b+3); (C, D) -> (0, 3); (D, C) -> (3, 0); (D, D) -> (3, 3).
    """
    if robot is Action.COOPERATE:
        if opponent is Action.COOPERATE:
            both = params.b + BASELINE_ENDOWMENT
            return PayoffPair(both, both)
        return PayoffPair(0.0, BASELINE_ENDOWMENT)
    if opponent is Action.COOPERATE:
        return PayoffPair(BASELINE_ENDOWMENT, 0.0)
    return PayoffPair(BASELINE_ENDOWMENT, BASELINE_ENDOWMENT)


def max_payoff(params: GameParams) -> float:
    """Largest attainable single-round payoff (b+3), used for reward rescaling."""
    return params.b + BASELINE_ENDOWMENT


def payoff_values(params: GameParams) -> tuple[float, float, float]:
    """The full set of possible single-round payoffs: (0, 3, b+3)."""
    return (0.0, BASELINE_ENDOWMENT, max_payoff(params))

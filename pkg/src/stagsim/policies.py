"""The three bandit learners, behind one select/update interface.

All three treat the game as a two-armed bandit over {cooperate, defect}
and know nothing about the opponent population:

* epsilon-greedy keeps a running mean reward per arm and exploits the
  best one except for an epsilon fraction of uniformly random picks.
* UCB1 adds the confidence bonus c*sqrt(ln t / n_a) to each running mean.
* Thompson sampling keeps a Beta posterior per arm over the rescaled
  reward r/(b+3) and plays the arm with the larger posterior sample.

State objects are immutable values; ``update`` returns a new state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .game import Action, GameParams, max_payoff, payoff_values


@dataclass(frozen=True)
class EpsilonGreedy:
    epsilon: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.epsilon <= 1.0:
            raise ValueError(f"epsilon must be in [0, 1], got {self.epsilon}")


@dataclass(frozen=True)
class UCB1:
    c: float

    def __post_init__(self) -> None:
        if not self.c >= 0:
            raise ValueError(f"exploration coefficient c must be >= 0, got {self.c}")


@dataclass(frozen=True)
class ThompsonSampling:
    prior: float = 0.5

    def __post_init__(self) -> None:
        if not self.prior > 0:
            raise ValueError(f"Beta prior must be > 0, got {self.prior}")


PolicySpec = Union[EpsilonGreedy, UCB1, ThompsonSampling]


@dataclass(frozen=True)
class EpsilonGreedyState:
    """Running mean reward and pull count per arm, (cooperate, defect)."""

    q_value: tuple[float, float]
    count: tuple[int, int]


@dataclass(frozen=True)
class UCB1State:
    q_value: tuple[float, float]
    count: tuple[int, int]
    t: int  # total pulls; always count[0] + count[1]


@dataclass(frozen=True)
class TSState:
    """Beta posterior parameters per arm, (cooperate, defect)."""

    alpha: tuple[float, float]
    beta: tuple[float, float]


PolicyState = Union[EpsilonGreedyState, UCB1State, TSState]

_ARM = {Action.COOPERATE: 0, Action.DEFECT: 1}
_ACTIONS = (Action.COOPERATE, Action.DEFECT)


def init_state(spec: PolicySpec, params: GameParams) -> PolicyState:
    """Fresh learning state for a policy.

    epsilon-greedy starts with zero value estimates and greedy ties broken
    toward cooperation, so the first arm it commits to is cooperate and a
    failed cooperation is retried until defection has actually been tried.
    This is what produces the optimistic early phase that later shrinks to
    whatever the payoffs support. UCB1 needs no value optimism because its
    cold-start rule forces one pull of each arm. Thompson sampling starts
    with all four Beta parameters equal (default 0.5) so that neither arm
    is favoured.
    """
    if isinstance(spec, EpsilonGreedy):
        return EpsilonGreedyState(q_value=(0.0, 0.0), count=(0, 0))
    if isinstance(spec, UCB1):
        return UCB1State(q_value=(0.0, 0.0), count=(0, 0), t=0)
    if isinstance(spec, ThompsonSampling):
        return TSState(alpha=(spec.prior, spec.prior), beta=(spec.prior, spec.prior))
    raise TypeError(f"unknown policy spec: {spec!r}")


def select_action(
    spec: PolicySpec, state: PolicyState, rng: np.random.Generator
) -> Action:
    """Pick the next action.

    Draw order is part of the determinism contract:

    * epsilon-greedy: one coin draw always (even for epsilon 0 or 1), then
      one uniform draw only when exploring. Greedy ties go to cooperate
      with no draw.
    * UCB1: unpulled arms are pulled first (cooperate before defect) with
      no draw; otherwise exact bonus ties consume one uniform draw.
    * Thompson sampling: one Beta draw per arm, cooperate first; ties
      (probability zero) go to cooperate.
    """
    if isinstance(spec, EpsilonGreedy):
        if rng.random() < spec.epsilon:
            return Action.COOPERATE if rng.random() < 0.5 else Action.DEFECT
        q_c, q_d = state.q_value
        return Action.COOPERATE if q_c >= q_d else Action.DEFECT

    if isinstance(spec, UCB1):
        n_c, n_d = state.count
        if n_c == 0:
            return Action.COOPERATE
        if n_d == 0:
            return Action.DEFECT
        q_c, q_d = state.q_value
        log_t = math.log(state.t)
        u_c = q_c + spec.c * math.sqrt(log_t / n_c)
        u_d = q_d + spec.c * math.sqrt(log_t / n_d)
        if u_c > u_d:
            return Action.COOPERATE
        if u_d > u_c:
            return Action.DEFECT
        return Action.COOPERATE if rng.random() < 0.5 else Action.DEFECT

    if isinstance(spec, ThompsonSampling):
        theta_c = rng.beta(state.alpha[0], state.beta[0])
        theta_d = rng.beta(state.alpha[1], state.beta[1])
        return Action.COOPERATE if theta_c >= theta_d else Action.DEFECT

    raise TypeError(f"unknown policy spec: {spec!r}")


def update(
    spec: PolicySpec,
    state: PolicyState,
    action: Action,
    reward: float,
    params: GameParams,
    rng: np.random.Generator,
) -> PolicyState:
    """Fold one observed reward into the learning state.

    Rewards outside {0, 3, b+3} are rejected: they can only come from a
    miswired environment. For Thompson sampling the reward is rescaled to
    [0, 1] and one Bernoulli trial (one uniform draw, consumed even when
    the rescaled reward is 0 or 1) decides which Beta parameter grows.
    """
    if reward not in payoff_values(params):
        raise ValueError(
            f"reward {reward} is not a possible payoff for b={params.b}; "
            "environment wiring bug"
        )
    arm = _ARM[action]

    if isinstance(spec, (EpsilonGreedy, UCB1)):
        count = list(state.count)
        q_value = list(state.q_value)
        count[arm] += 1
        # incremental mean; with a zero initial count the first observed
        # reward replaces the initial value outright
        q_value[arm] += (reward - q_value[arm]) / count[arm]
        if isinstance(spec, UCB1):
            return UCB1State(tuple(q_value), tuple(count), state.t + 1)
        return EpsilonGreedyState(tuple(q_value), tuple(count))

    if isinstance(spec, ThompsonSampling):
        rescaled = reward / max_payoff(params)
        alpha = list(state.alpha)
        beta = list(state.beta)
        if rng.random() < rescaled:
            alpha[arm] += 1.0
        else:
            beta[arm] += 1.0
        return TSState(tuple(alpha), tuple(beta))

    raise TypeError(f"unknown policy spec: {spec!r}")


def dominance_threshold(
    p: float, q: float, params: GameParams, epsilon: float
) -> tuple[bool, float]:
    """Whether cooperation payoff-dominates defection for epsilon-greedy.

    With the agent cooperating on greedy rounds, its reputation is C except
    after the epsilon/2 fraction of explored defections, so cooperation's
    long-run mean reward is ((1-eps/2)*p + (eps/2)*q)*(b+3). Dominance holds
    strictly when that exceeds the defection payoff 3. Returns
    (holds, margin) with margin = that mean minus 3.
    """
    for name, value in (("p", p), ("q", q), ("epsilon", epsilon)):
        if not 0.0 <= value <= 1.0:
            raise ValueError(f"{name} must be in [0, 1], got {value}")
    mean_coop = ((1.0 - epsilon / 2.0) * p + (epsilon / 2.0) * q) * max_payoff(params)
    margin = mean_coop - 3.0
    return margin > 0.0, margin


def policy_name(spec: PolicySpec) -> str:
    """Short stable name used in CSV output and figures."""
    if isinstance(spec, EpsilonGreedy):
        return "epsilon-greedy"
    if isinstance(spec, UCB1):
        return "ucb1"
    if isinstance(spec, ThompsonSampling):
        return "thompson"
    raise TypeError(f"unknown policy spec: {spec!r}")

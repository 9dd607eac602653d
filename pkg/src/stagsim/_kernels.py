"""Compiled per-replicate loops.

Each kernel plays one full replicate and returns the action sequences of
both players (0 = cooperate, 1 = defect). The draw order matches the
pure-Python composition of select_action / step / update exactly, so a
kernel fed the same stream produces bit-identical sequences; the test
suite enforces this equivalence.

Kernels are nogil so replicates can run on a thread pool.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def epsilon_greedy_replicate(rng, rounds, p, q, b, epsilon, initial_rep):
    actions = np.empty(rounds, dtype=np.uint8)
    opponent_actions = np.empty(rounds, dtype=np.uint8)
    q_value = np.zeros(2)
    count = np.zeros(2, dtype=np.int64)
    rep = initial_rep
    for t in range(rounds):
        if rng.random() < epsilon:
            a = 0 if rng.random() < 0.5 else 1
        else:
            a = 0 if q_value[0] >= q_value[1] else 1
        prob = p if rep == 0 else q
        opp = 0 if rng.random() < prob else 1
        if a == 0:
            reward = (b + 3.0) if opp == 0 else 0.0
        else:
            reward = 3.0
        rep = a
        count[a] += 1
        q_value[a] += (reward - q_value[a]) / count[a]
        actions[t] = a
        opponent_actions[t] = opp
    return actions, opponent_actions


@njit(cache=True, nogil=True)
def ucb1_replicate(rng, rounds, p, q, b, c, initial_rep):
    actions = np.empty(rounds, dtype=np.uint8)
    opponent_actions = np.empty(rounds, dtype=np.uint8)
    q_value = np.zeros(2)
    count = np.zeros(2, dtype=np.int64)
    rep = initial_rep
    for t in range(rounds):
        if count[0] == 0:
            a = 0
        elif count[1] == 0:
            a = 1
        else:
            log_t = np.log(count[0] + count[1])
            u_c = q_value[0] + c * np.sqrt(log_t / count[0])
            u_d = q_value[1] + c * np.sqrt(log_t / count[1])
            if u_c > u_d:
                a = 0
            elif u_d > u_c:
                a = 1
            else:
                a = 0 if rng.random() < 0.5 else 1
        prob = p if rep == 0 else q
        opp = 0 if rng.random() < prob else 1
        if a == 0:
            reward = (b + 3.0) if opp == 0 else 0.0
        else:
            reward = 3.0
        rep = a
        count[a] += 1
        q_value[a] += (reward - q_value[a]) / count[a]
        actions[t] = a
        opponent_actions[t] = opp
    return actions, opponent_actions


@njit(cache=True, nogil=True)
def thompson_replicate(rng, rounds, p, q, b, prior, initial_rep):
    actions = np.empty(rounds, dtype=np.uint8)
    opponent_actions = np.empty(rounds, dtype=np.uint8)
    alpha = np.full(2, prior)
    beta = np.full(2, prior)
    rep = initial_rep
    for t in range(rounds):
        theta_c = rng.beta(alpha[0], beta[0])
        theta_d = rng.beta(alpha[1], beta[1])
        a = 0 if theta_c >= theta_d else 1
        prob = p if rep == 0 else q
        opp = 0 if rng.random() < prob else 1
        if a == 0:
            reward = (b + 3.0) if opp == 0 else 0.0
        else:
            reward = 3.0
        rep = a
        if rng.random() < reward / (b + 3.0):
            alpha[a] += 1.0
        else:
            beta[a] += 1.0
        actions[t] = a
        opponent_actions[t] = opp
    return actions, opponent_actions

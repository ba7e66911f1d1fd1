from __future__ import unicode_literals
from __future__ import absolute_import
import logging

import numpy as np

from .bisim import map_state
from .const import DEFAULT_GAMMA, DEFAULT_TOL

log = logging.getLogger(__name__)

TIE_TOL = 1e-9
MAX_SWEEPS = 100000


class AbstractPolicy(object):
    """
    pi^i(z): an action per abstract state (greedy), or a uniform draw from an
    injected random stream on every query (random).
    """
    def __init__(self, kind, n_actions, table=None, values=None, index=None, rng=None, residuals=None):
        self.kind = kind
        self.n_actions = n_actions
        self.table = tuple(table) if table is not None else None
        self.values = values
        self.index = index
        self.rng = rng
        self.residuals = residuals or []

    def action(self, z):
        if self.kind == 'random':
            return int(self.rng.integers(0, self.n_actions))
        return self.table[z]

    def act(self, ab, s):
        return self.action(map_state(ab, s))

    def lift(self, ab):
        """
        This policy as a function of concrete states of ab's source.
        """
        return lambda s: self.act(ab, s)

    def __repr__(self):
        if self.kind == 'random':
            return '<AbstractPolicy: random over %d actions>' % self.n_actions
        return '<AbstractPolicy %s: %s>' % (self.index, list(self.table))


def q_values(q, values, gamma):
    return q.rewards + gamma * np.matmul(q.transitions, values).T


def greedy(qvals):
    best = qvals.max(axis=1, keepdims=True)
    return [int(np.flatnonzero(row >= top - TIE_TOL)[0])
            for row, top in zip(qvals, best[:, 0])]


def value_iteration(q, gamma=DEFAULT_GAMMA, tol=DEFAULT_TOL, index=None):
    if not 0.0 <= gamma < 1.0:
        raise ValueError("gamma must lie in [0, 1), got %r" % gamma)
    if tol <= 0:
        raise ValueError("tol must be positive, got %r" % tol)

    values = np.zeros(q.n_states)
    residuals = []
    for sweep in range(MAX_SWEEPS):
        updated = q_values(q, values, gamma).max(axis=1)
        residual = float(np.max(np.abs(updated - values)))
        values = updated
        residuals.append(residual)
        if residual < tol:
            break
    else:
        log.warning("value iteration on %r stopped after %d sweeps (residual %g)",
                    q, MAX_SWEEPS, residual)

    log.debug("value iteration on %r converged in %d sweeps", q, len(residuals))
    table = greedy(q_values(q, values, gamma))
    return AbstractPolicy('greedy', q.n_actions, table=table, values=values,
                          index=index, residuals=residuals)


def evaluate_policy(q, policy, gamma=DEFAULT_GAMMA):
    """
    Exact discounted value of a deterministic policy on the quotient.
    """
    states = np.arange(q.n_states)
    actions = np.asarray(policy.table)
    transitions = q.transitions[actions, states, :]
    rewards = q.rewards[states, actions]
    return np.linalg.solve(np.eye(q.n_states) - gamma * transitions, rewards)


def random_policy(n_actions, rng):
    if n_actions < 1:
        raise ValueError("n_actions must be at least 1, got %r" % n_actions)
    return AbstractPolicy('random', n_actions, rng=rng)

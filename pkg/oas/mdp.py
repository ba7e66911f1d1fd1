from __future__ import unicode_literals
from __future__ import absolute_import
import logging

import numpy as np

from .const import PROB_TOL

log = logging.getLogger(__name__)


PATTERNS = [
    'step',
    'periodic',
    'random',
    'scripted',
]


class InvalidMdp(ValueError):
    def __init__(self, errors, name=None):
        self.errors = list(errors)
        self.name = name
        prefix = "Invalid MDP" if name is None else "Invalid MDP '%s'" % name
        super(InvalidMdp, self).__init__(
            "%s:\n  %s" % (prefix, "\n  ".join(self.errors)))


class ScheduleError(ValueError):
    pass


class Mdp(object):
    """
    A finite MDP: per-action transition matrices P[a, s, s'] and a reward
    table R[s, a]. Arrays are copied and frozen on construction.
    """
    def __init__(self, transitions, rewards, state_labels=None, action_labels=None, name=None):
        self.transitions = _frozen(transitions)
        self.rewards = _frozen(rewards)
        self.state_labels = tuple(state_labels) if state_labels else None
        self.action_labels = tuple(action_labels) if action_labels else None
        self.name = name

    @property
    def n_actions(self):
        return self.transitions.shape[0]

    @property
    def n_states(self):
        return self.transitions.shape[1]

    def state_label(self, s):
        if self.state_labels:
            return self.state_labels[s]
        return 's%d' % s

    def action_label(self, a):
        if self.action_labels:
            return self.action_labels[a]
        return 'a%d' % a

    def with_rewards(self, rewards, name=None):
        """
        A context sharing this MDP's dynamics under another reward table.
        """
        return Mdp(
            self.transitions,
            broadcast_rewards(rewards, self.n_actions),
            state_labels=self.state_labels,
            action_labels=self.action_labels,
            name=name)

    def __repr__(self):
        return '<Mdp: %s states=%d actions=%d>' % (
            self.name or '-', self.n_states, self.n_actions)


def _frozen(values):
    array = np.array(values, dtype=float)
    array.setflags(write=False)
    return array


def broadcast_rewards(rewards, n_actions):
    """
    State-only rewards (one value per state) become action-constant rows.
    """
    rewards = np.asarray(rewards, dtype=float)
    if rewards.ndim == 1:
        return np.repeat(rewards[:, np.newaxis], n_actions, axis=1)
    return rewards


def validate_mdp(m):
    """
    Return the list of every violated MDP invariant. An empty list means the
    MDP is valid.
    """
    errors = []
    transitions, rewards = m.transitions, m.rewards

    if transitions.ndim != 3 or transitions.shape[1] != transitions.shape[2]:
        errors.append(
            "transitions must have shape (n_actions, n_states, n_states), got %s"
            % (transitions.shape,))
        return errors

    n_actions, n_states, _ = transitions.shape
    if n_actions < 1 or n_states < 1:
        errors.append("MDP needs at least one state and one action")
        return errors

    for a in range(n_actions):
        for s in range(n_states):
            row = transitions[a, s]
            if not np.all(np.isfinite(row)):
                errors.append("P[%s, %s] contains a non-finite entry"
                              % (m.action_label(a), m.state_label(s)))
                continue
            bad = np.flatnonzero((row < 0.0) | (row > 1.0))
            for s_next in bad:
                errors.append("P[%s, %s -> %s] = %r is outside [0, 1]" % (
                    m.action_label(a), m.state_label(s),
                    m.state_label(s_next), row[s_next]))
            total = row.sum()
            if abs(total - 1.0) > PROB_TOL:
                errors.append("P[%s, %s] sums to %.12g, not 1" % (
                    m.action_label(a), m.state_label(s), total))

    if rewards.shape != (n_states, n_actions):
        errors.append("rewards must have shape (%d, %d), got %s"
                      % (n_states, n_actions, rewards.shape))
    else:
        for s, a in zip(*np.nonzero(~np.isfinite(rewards))):
            errors.append("R[%s, %s] = %r is not finite" % (
                m.state_label(s), m.action_label(a), rewards[s, a]))

    if m.state_labels and len(m.state_labels) != n_states:
        errors.append("expected %d state labels, got %d"
                      % (n_states, len(m.state_labels)))
    if m.action_labels and len(m.action_labels) != n_actions:
        errors.append("expected %d action labels, got %d"
                      % (n_actions, len(m.action_labels)))

    return errors


def check_mdp(m):
    errors = validate_mdp(m)
    if errors:
        raise InvalidMdp(errors, name=m.name)
    return m


def normalized(m):
    """
    Validate and renormalize every transition row exactly once. Rows are
    already within PROB_TOL of 1, this only removes float drift.
    """
    check_mdp(m)
    transitions = np.array(m.transitions)
    transitions /= transitions.sum(axis=2, keepdims=True)
    return Mdp(transitions, m.rewards, m.state_labels, m.action_labels, name=m.name)


def load_mdp(d, name=None):
    """
    Build an Mdp from a plain dictionary, as read from an MDP file:

        states: [s1, s2, s3]          # optional labels
        actions: [L, R]               # optional labels
        transitions:                  # mapping by action label, or a list
          L: [[1, 0, 0], ...]
        rewards: [[0, 0], ...]        # per (state, action), or one per state
    """
    if not isinstance(d, dict):
        raise InvalidMdp(["an MDP must be a mapping with 'transitions' and 'rewards'"], name)

    unknown = set(d) - set(['name', 'states', 'actions', 'transitions', 'rewards'])
    if unknown:
        raise InvalidMdp(["unsupported key '%s'" % k for k in sorted(unknown)], name)
    for key in ('transitions', 'rewards'):
        if key not in d:
            raise InvalidMdp(["missing '%s'" % key], name)

    name = d.get('name', name)
    action_labels = d.get('actions')
    transitions = d['transitions']

    if isinstance(transitions, dict):
        if action_labels is None:
            action_labels = list(transitions)
        missing = [a for a in action_labels if a not in transitions]
        if missing:
            raise InvalidMdp(["no transition matrix for action '%s'" % a for a in missing], name)
        transitions = [transitions[a] for a in action_labels]

    try:
        transitions = np.array(transitions, dtype=float)
        rewards = broadcast_rewards(d['rewards'], transitions.shape[0] if transitions.ndim == 3 else 1)
    except (TypeError, ValueError) as e:
        raise InvalidMdp(["malformed numeric table: %s" % e], name)

    return normalized(Mdp(
        transitions, rewards,
        state_labels=d.get('states'),
        action_labels=action_labels,
        name=name))


def dump_mdp(m):
    d = {
        'transitions': m.transitions.tolist(),
        'rewards': m.rewards.tolist(),
    }
    if m.name:
        d['name'] = m.name
    if m.state_labels:
        d['states'] = list(m.state_labels)
    if m.action_labels:
        d['actions'] = list(m.action_labels)
        d['transitions'] = dict(zip(m.action_labels, d['transitions']))
    return d


def sample_transition(m, s, a, rng):
    """
    Draw s' ~ P(.|s, a), consuming exactly one uniform from rng.
    """
    if not 0 <= s < m.n_states:
        raise IndexError("state %r out of range [0, %d)" % (s, m.n_states))
    if not 0 <= a < m.n_actions:
        raise IndexError("action %r out of range [0, %d)" % (a, m.n_actions))

    row = m.transitions[a, s]
    s_next = int(np.searchsorted(np.cumsum(row), rng.random(), side='right'))
    if s_next >= m.n_states:
        s_next = int(np.flatnonzero(row)[-1])
    return s_next


class ContextCatalog(object):
    """
    The ordered contexts M^0..M^{N-1} of a time-varying MDP.
    """
    def __init__(self, contexts):
        contexts = tuple(contexts)
        if not contexts:
            raise InvalidMdp(["a context catalog needs at least one MDP"])
        first = contexts[0]
        for i, m in enumerate(contexts):
            if (m.n_states, m.n_actions) != (first.n_states, first.n_actions):
                raise InvalidMdp([
                    "context %d has %d states and %d actions, context 0 has %d and %d"
                    % (i, m.n_states, m.n_actions, first.n_states, first.n_actions)])
        self.contexts = contexts

    @property
    def n_states(self):
        return self.contexts[0].n_states

    @property
    def n_actions(self):
        return self.contexts[0].n_actions

    def __len__(self):
        return len(self.contexts)

    def __getitem__(self, i):
        return self.contexts[i]

    def __iter__(self):
        return iter(self.contexts)


class SwitchSchedule(object):
    """
    Ground truth for a trial: the active context index at every step.
    """
    def __init__(self, pattern, params, sequence):
        self.pattern = pattern
        self.params = dict(params)
        self.sequence = tuple(int(i) for i in sequence)

    @property
    def horizon(self):
        return len(self.sequence)

    def active(self, t):
        return self.sequence[t]

    def switch_times(self):
        return [t for t in range(1, self.horizon)
                if self.sequence[t] != self.sequence[t - 1]]

    def __eq__(self, other):
        return isinstance(other, SwitchSchedule) and self.sequence == other.sequence

    def __ne__(self, other):
        return not self == other

    def __repr__(self):
        return '<SwitchSchedule: %s T=%d>' % (self.pattern, self.horizon)


def expand_script(script):
    """
    A script is a list of context indices, or a list of [context, count] runs.
    """
    sequence = []
    for entry in script:
        if isinstance(entry, (list, tuple)):
            if len(entry) != 2 or entry[1] < 0:
                raise ScheduleError("script run %r must be [context, count]" % (entry,))
            sequence.extend([entry[0]] * entry[1])
        else:
            sequence.append(entry)
    return sequence


def make_schedule(pattern, params, horizon, rng=None, n_contexts=2):
    params = params or {}
    if horizon is None and pattern == 'scripted':
        horizon = len(expand_script(params.get('script', [])))
    if horizon is None or horizon < 1:
        raise ScheduleError("horizon must be a positive integer, got %r" % (horizon,))

    if pattern == 'step':
        switch_at = params.get('switch_at')
        if switch_at is None or switch_at < 0 or switch_at >= horizon:
            raise ScheduleError(
                "step switch time must lie in [0, %d), got %r" % (horizon, switch_at))
        sequence = [0 if t < switch_at else 1 for t in range(horizon)]

    elif pattern == 'periodic':
        period = params.get('period')
        if period is None or period <= 0:
            raise ScheduleError("period must be positive, got %r" % (period,))
        sequence = [(t // period) % n_contexts for t in range(horizon)]

    elif pattern == 'random':
        if rng is None:
            raise ScheduleError("the random pattern needs a seeded random stream")
        sequence = rng.integers(0, n_contexts, size=horizon).tolist()

    elif pattern == 'scripted':
        sequence = expand_script(params.get('script') or [])
        if len(sequence) != horizon:
            raise ScheduleError(
                "script covers %d steps but the horizon is %d" % (len(sequence), horizon))

    else:
        raise ScheduleError("unknown switching pattern '%s' (expected one of: %s)"
                            % (pattern, ", ".join(PATTERNS)))

    bad = sorted(set(i for i in sequence if not 0 <= i < n_contexts))
    if bad:
        raise ScheduleError("schedule refers to contexts %s outside the catalog of %d"
                            % (bad, n_contexts))

    return SwitchSchedule(pattern, params, sequence)

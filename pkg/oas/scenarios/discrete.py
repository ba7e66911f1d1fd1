from __future__ import unicode_literals
from __future__ import absolute_import
import logging

from ..bisim import abstract
from ..mdp import ContextCatalog, load_mdp

log = logging.getLogger(__name__)


STATE_LABELS = ['s1', 's2', 's3']

# Moving toward a wall reaches it with probability 0.6 from either other
# cell and stops in the middle cell otherwise.
DEFAULT_TRANSITIONS = {
    'states': STATE_LABELS,
    'actions': ['L', 'R'],
    'transitions': {
        'L': [[1.0, 0.0, 0.0],
              [0.6, 0.4, 0.0],
              [0.6, 0.4, 0.0]],
        'R': [[0.0, 0.4, 0.6],
              [0.0, 0.4, 0.6],
              [0.0, 0.0, 1.0]],
    },
}

# Context 0 rewards s3, context 1 rewards s1.
CONTEXT_REWARDS = [
    ('object-at-s3', [0.0, 0.0, 1.0]),
    ('object-at-s1', [1.0, 0.0, 0.0]),
]

EXPECTED_BLOCKS = [
    set([frozenset([0, 1]), frozenset([2])]),
    set([frozenset([0]), frozenset([1, 2])]),
]

REWARD_SOURCES = ['observed', 'true']


class ScenarioConsistencyError(ValueError):
    pass


class DiscreteScenario(object):
    """
    The three-cell tracking world: two contexts with shared dynamics whose
    reward marks the object's cell, and their bisimulation abstractions.
    """
    def __init__(self, catalog, abstractions, sigma=0.0, reward_from='observed'):
        if not 0.0 <= sigma <= 1.0:
            raise ValueError("sigma must lie in [0, 1], got %r" % sigma)
        if reward_from not in REWARD_SOURCES:
            raise ValueError("reward_from must be one of %s, got %r"
                             % (", ".join(REWARD_SOURCES), reward_from))
        self.catalog = catalog
        self.abstractions = abstractions
        self.sigma = sigma
        self.reward_from = reward_from

    @property
    def n_states(self):
        return self.catalog.n_states

    @property
    def n_actions(self):
        return self.catalog.n_actions

    def observe(self, s, rng):
        return observe_state_discrete(s, self.sigma, rng, self.n_states)

    def reward(self, context, s_true, s_observed, a):
        s = s_observed if self.reward_from == 'observed' else s_true
        return float(self.catalog[context].rewards[s, a])


def build_discrete_scenario(transitions_config=None, sigma=0.0, reward_from='observed'):
    config = dict(transitions_config or DEFAULT_TRANSITIONS)
    config.setdefault('states', STATE_LABELS)
    config['rewards'] = [0.0] * len(config['states'])

    base = load_mdp(config, name='tracking')
    if base.n_states != 3:
        raise ScenarioConsistencyError(
            "the tracking world has 3 states, transitions-config describes %d" % base.n_states)

    catalog = ContextCatalog([base.with_rewards(rewards, name=name)
                              for name, rewards in CONTEXT_REWARDS])
    abstractions = [abstract(m, i) for i, m in enumerate(catalog)]

    for ab, expected in zip(abstractions, EXPECTED_BLOCKS):
        if ab.partition.as_sets() != expected:
            raise ScenarioConsistencyError(
                "context '%s' abstracts to blocks %s, expected %s; "
                "check the transitions-config" % (
                    ab.source.name,
                    _describe(ab.partition.as_sets()),
                    _describe(expected)))

    log.debug("discrete scenario: %s", ", ".join(repr(ab) for ab in abstractions))
    return DiscreteScenario(catalog, abstractions, sigma=sigma, reward_from=reward_from)


def _describe(blocks):
    return '{%s}' % ', '.join(
        '{%s}' % ','.join(STATE_LABELS[s] for s in sorted(block))
        for block in sorted(blocks, key=min))


def observe_state_discrete(s, sigma, rng, n_states=3):
    """
    With probability sigma report one of the other states, chosen uniformly.
    Always consumes one uniform, plus one more when the report is wrong.
    """
    if rng.random() >= sigma:
        return s
    others = [o for o in range(n_states) if o != s]
    return others[int(rng.integers(0, len(others)))]

from __future__ import unicode_literals
from __future__ import absolute_import
from collections import namedtuple
import logging

import numpy as np

from .const import DEFAULT_EPSILON, DEFAULT_GAMMA, DEFAULT_TOL
from .filter import DetectionModel, OasFilter
from .mdp import sample_transition
from .policy import random_policy, value_iteration
from .scenarios import (
    ACTION_NAMES,
    ContinuousScenario,
    DiscreteScenario,
    PursuitPolicy,
    observe_state_continuous,
    step_continuous,
)

log = logging.getLogger(__name__)


STREAMS = ['schedule', 'transitions', 'observations', 'policy']


FilterConfig = namedtuple('FilterConfig', 'model epsilon prior gamma tol')
FilterConfig.__new__.__defaults__ = (DEFAULT_EPSILON, None, DEFAULT_GAMMA, DEFAULT_TOL)


Streams = namedtuple('Streams', STREAMS)


def trial_streams(seed):
    """
    Independent generators for each source of randomness in a trial, all
    derived from the trial seed.
    """
    children = np.random.SeedSequence(seed).spawn(len(STREAMS))
    return Streams(*[np.random.default_rng(child) for child in children])


class TrialError(Exception):
    def __init__(self, cause, seed, step, experiment=None):
        self.cause = cause
        self.seed = seed
        self.step = step
        self.experiment = experiment
        where = "seed %s, step %s" % (seed, step)
        if experiment:
            where = "experiment '%s', %s" % (experiment, where)
        super(TrialError, self).__init__("%s: %s" % (where, cause))


class TrialTrace(object):
    """
    Everything observed in one trial, one entry per step.
    """
    def __init__(self, seed, n_abstractions, config=None, step_seconds=None):
        self.seed = seed
        self.n_abstractions = n_abstractions
        self.config = dict(config or {})
        self.step_seconds = step_seconds
        self.true_ctx = []
        self.state = []
        self.observed = []
        self.reward = []
        self.belief = []
        self.ml = []
        self.action = []

    def record(self, true_ctx, state, observed, reward, belief, ml, action):
        self.true_ctx.append(true_ctx)
        self.state.append(state)
        self.observed.append(observed)
        self.reward.append(reward)
        self.belief.append(np.array(belief))
        self.ml.append(ml)
        self.action.append(action)

    @property
    def horizon(self):
        return len(self.ml)

    def beliefs(self):
        return np.array(self.belief).reshape(self.horizon, self.n_abstractions)


class DiscreteEnvironment(object):
    def __init__(self, scenario, streams):
        self.scenario = scenario
        self.streams = streams
        self.abstractions = scenario.abstractions
        self.state = int(streams.transitions.integers(0, scenario.n_states))
        self.observed = scenario.observe(self.state, streams.observations)

    def policies(self, mode, filter_config):
        if mode == 'random':
            policy = random_policy(self.scenario.n_actions, self.streams.policy)
            return [lambda obs, p=policy: p.action(None)] * len(self.abstractions)
        if mode == 'abstract':
            policies = []
            for ab in self.abstractions:
                pi = value_iteration(ab.quotient, filter_config.gamma, filter_config.tol, index=ab.index)
                policies.append(pi.lift(ab))
            return policies
        raise ValueError("policy '%s' is not available in the discrete scenario" % mode)

    def step(self, context, a):
        scenario = self.scenario
        self.state = sample_transition(scenario.catalog[context], self.state, a, self.streams.transitions)
        self.observed = scenario.observe(self.state, self.streams.observations)
        reward = scenario.reward(context, self.state, self.observed, a)
        return self.state, self.observed, reward


class ContinuousEnvironment(object):
    def __init__(self, scenario, streams, abstractions):
        self.scenario = scenario
        self.streams = streams
        self.abstractions = abstractions
        self.state = scenario.true_state()
        self.observed = observe_state_continuous(self.state, scenario.depth_noise, streams.observations)

    def policies(self, mode, filter_config):
        sc = self.scenario
        if mode == 'pursuit':
            return [PursuitPolicy(ab, sc.speed, sc.turn_rate, sc.period).action
                    for ab in self.abstractions]
        if mode == 'random':
            policy = random_policy(len(ACTION_NAMES), self.streams.policy)
            return [lambda obs, p=policy: p.action(None)] * len(self.abstractions)
        raise ValueError("policy '%s' is not available in the continuous scenario" % mode)

    def step(self, context, a):
        self.scenario, self.state, reward = step_continuous(self.scenario, a, holder=context)
        self.observed = observe_state_continuous(
            self.state, self.scenario.depth_noise, self.streams.observations)
        return self.state, self.observed, reward


def make_environment(scenario, streams, abstractions=None):
    if isinstance(scenario, DiscreteScenario):
        return DiscreteEnvironment(scenario, streams)
    if isinstance(scenario, ContinuousScenario):
        if abstractions is None:
            raise ValueError("the continuous scenario needs its projection abstractions")
        return ContinuousEnvironment(scenario, streams, abstractions)
    raise TypeError("unsupported scenario %r" % (scenario,))


def run_trial(scenario, schedule, policy_mode, filter_config, seed,
              abstractions=None, perturb=None, config=None, experiment=None):
    """
    Run one seeded trial. Each step picks the action from the previous ML
    abstraction's policy on the previous observation, executes it under the
    schedule's active context, then runs the filter on the new reward and
    observation.

    `perturb(t, observed, ml)` may replace the observation handed to the
    policy; the filter always sees the unperturbed one.
    """
    streams = trial_streams(seed)
    env = make_environment(scenario, streams, abstractions)
    detection = DetectionModel(env.abstractions, filter_config.epsilon)

    try:
        oas = OasFilter(filter_config.model, detection, filter_config.prior)
        policies = env.policies(policy_mode, filter_config)
    except ValueError as e:
        raise TrialError(e, seed, None, experiment)

    step_seconds = getattr(scenario, 'period', None)
    trace = TrialTrace(seed, len(env.abstractions), config=config, step_seconds=step_seconds)

    for t in range(schedule.horizon):
        try:
            context = schedule.active(t)
            observed = env.observed
            if perturb is not None:
                observed = perturb(t, observed, oas.ml)
            a = policies[oas.ml](observed)
            state, observed, reward = env.step(context, a)
            belief, ml = oas.step(reward, observed, a)
        except (ArithmeticError, IndexError, ValueError) as e:
            raise TrialError(e, seed, t, experiment)
        trace.record(context, state, observed, reward, belief.probs, ml, a)

    log.debug("trial seed=%s: %d steps, %d degenerate updates",
              seed, trace.horizon, len(oas.degenerate_steps))
    return trace

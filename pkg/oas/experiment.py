from __future__ import unicode_literals
from __future__ import absolute_import
import logging

from .config import ConfigurationError, load_yaml
from .const import DEFAULT_BOUNDARY_MARGIN
from .filter import AbstractionTransitionModel, stay_transition_model
from .harness import FilterConfig, run_trial, trial_streams
from .metrics import compute_metrics
from .mdp import InvalidMdp, ScheduleError, make_schedule
from .scenarios import (
    ScenarioConfigError,
    ScenarioConsistencyError,
    build_continuous_scenario,
    build_discrete_scenario,
    projection_abstractions,
)

log = logging.getLogger(__name__)


SCHEDULE_KEYS = ['switch_at', 'period', 'script']


class Experiment(object):
    """
    One named entry of a suite file: a scenario, a switching pattern and the
    filter settings, run once per seed.
    """
    def __init__(self, name, scenario='discrete', pattern='step', **options):
        self.name = name
        self.scenario_kind = scenario
        self.pattern = pattern
        self.options = options
        self._scenario = None

    def __repr__(self):
        return '<Experiment: %s>' % self.name

    @property
    def label(self):
        return self.options.get('label', self.name)

    @property
    def pattern_label(self):
        return self.label

    @property
    def model_label(self):
        if 'transition_matrix' in self.options:
            return 'matrix'
        return 'stay=%g' % self.options['stay_prob']

    @property
    def seeds(self):
        return list(self.options['seeds'])

    @property
    def horizon(self):
        return self.options['horizon']

    @property
    def policy_mode(self):
        return self.options['policy']

    @property
    def step_seconds(self):
        if self.scenario_kind == 'continuous':
            return self.scenario.period
        return None

    @property
    def scenario(self):
        if self._scenario is None:
            self._scenario = self.build_scenario()
        return self._scenario

    def build_scenario(self):
        scenario_file = self.options.get('scenario_file')
        layout = load_yaml(scenario_file) if scenario_file else None
        try:
            if self.scenario_kind == 'discrete':
                return build_discrete_scenario(
                    layout, sigma=self.options['sigma'], reward_from=self.options['reward_from'])
            return build_continuous_scenario(layout, depth_noise=self.options['depth_noise'])
        except (InvalidMdp, ScenarioConsistencyError, ScenarioConfigError) as e:
            raise ConfigurationError("experiment '%s': %s" % (self.name, e))

    def abstractions(self):
        if self.scenario_kind == 'discrete':
            return self.scenario.abstractions
        sc = self.scenario
        return projection_abstractions(sc.reward_radius, sc.depth_noise,
                                       self.options.get('boundary_margin', DEFAULT_BOUNDARY_MARGIN))

    def schedule(self, seed):
        params = dict((k, self.options[k]) for k in SCHEDULE_KEYS if k in self.options)
        try:
            return make_schedule(self.pattern, params, self.horizon,
                                 rng=trial_streams(seed).schedule,
                                 n_contexts=len(self.abstractions()))
        except ScheduleError as e:
            raise ConfigurationError("experiment '%s': %s" % (self.name, e))

    def filter_config(self):
        n = len(self.abstractions())
        try:
            if 'transition_matrix' in self.options:
                model = AbstractionTransitionModel(self.options['transition_matrix'])
            else:
                model = stay_transition_model(n, self.options['stay_prob'])
        except ValueError as e:
            raise ConfigurationError("experiment '%s': %s" % (self.name, e))
        if model.n != n:
            raise ConfigurationError("experiment '%s': transition_matrix is %dx%d but there are %d abstractions"
                                     % (self.name, model.n, model.n, n))
        prior = self.options['prior']
        if prior != 'uniform' and len(prior) != n:
            raise ConfigurationError("experiment '%s': prior has %d entries but there are %d abstractions"
                                     % (self.name, len(prior), n))
        return FilterConfig(model, self.options['epsilon'], prior,
                            self.options['gamma'], self.options['tol'])

    def validate(self):
        """
        Build everything a run needs without running it.
        """
        self.filter_config()
        self.schedule(self.seeds[0])
        return self

    def run_seed(self, seed, perturb=None):
        schedule = self.schedule(seed)
        trace = run_trial(self.scenario, schedule, self.policy_mode, self.filter_config(), seed,
                          abstractions=self.abstractions(), perturb=perturb,
                          config=self.config_dict(), experiment=self.name)
        metrics = compute_metrics(trace, schedule).in_seconds(self.step_seconds)
        log.debug("%s seed=%s: accuracy %.4f", self.name, seed, metrics.accuracy)
        return trace, metrics

    def config_dict(self):
        d = dict(self.options)
        d.update(name=self.name, scenario=self.scenario_kind, pattern=self.pattern)
        return d

import logging
import numbers
import os
import sys
import yaml
from collections import namedtuple

from oas.cli.utils import find_candidates_in_parent_dirs
from oas.const import (
    DEFAULT_BOUNDARY_MARGIN,
    DEFAULT_CONTINUOUS_HORIZON,
    DEFAULT_DEPTH_NOISE,
    DEFAULT_EPSILON,
    DEFAULT_GAMMA,
    DEFAULT_HORIZON,
    DEFAULT_PERIOD,
    DEFAULT_SEEDS,
    DEFAULT_STAY_PROB,
    DEFAULT_SWITCH_AT,
    DEFAULT_TOL,
    PROB_TOL,
)
from oas.mdp import PATTERNS


ALLOWED_KEYS = [
    'boundary_margin',
    'depth_noise',
    'epsilon',
    'extends',
    'gamma',
    'horizon',
    'label',
    'name',
    'pattern',
    'period',
    'policy',
    'prior',
    'reward_from',
    'scenario',
    'scenario_file',
    'script',
    'seeds',
    'sigma',
    'stay_prob',
    'switch_at',
    'tol',
    'transition_matrix',
]

CONFIG_HINTS = {
    'eps': 'epsilon',
    'margin': 'boundary_margin',
    'model': 'stay_prob',
    'noise': 'sigma',
    'period_length': 'period',
    'policy_mode': 'policy',
    'seed': 'seeds',
    'stay': 'stay_prob',
    'stay_probability': 'stay_prob',
    'steps': 'horizon',
    'switch_time': 'switch_at',
    'T': 'horizon',
    'transitions': 'scenario_file',
}

SCENARIOS = ['discrete', 'continuous']

POLICIES = {
    'discrete': ['random', 'abstract'],
    'continuous': ['pursuit', 'random'],
}

REWARD_SOURCES = {
    'discrete': ['observed', 'true'],
    'continuous': ['true'],
}


SUPPORTED_FILENAMES = [
    'oas.yml',
    'oas.yaml',
]


log = logging.getLogger(__name__)


ConfigDetails = namedtuple('ConfigDetails', 'config working_dir filename')


def find(base_dir, filename):
    if filename == '-':
        return ConfigDetails(yaml.safe_load(sys.stdin), os.getcwd(), None)

    if filename:
        filename = os.path.join(base_dir, filename)
    else:
        filename = get_config_path(base_dir)
    return ConfigDetails(load_yaml(filename), os.path.dirname(filename), filename)


def get_config_path(base_dir):
    (candidates, path) = find_candidates_in_parent_dirs(SUPPORTED_FILENAMES, base_dir)

    if len(candidates) == 0:
        raise SuiteFileNotFound(SUPPORTED_FILENAMES)

    winner = candidates[0]

    if len(candidates) > 1:
        log.warning("Found multiple suite files with supported names: %s", ", ".join(candidates))
        log.warning("Using %s\n", winner)

    return os.path.join(path, winner)


def parse_config(path):
    return load(find('.', path))


def load(config_details):
    dictionary, working_dir, filename = config_details
    if not isinstance(dictionary, dict):
        raise ConfigurationError(
            "Top level of %s must map experiment names to their options." % (filename or 'the suite'))

    experiment_dicts = []

    for name, experiment_dict in list(dictionary.items()):
        if str(name).startswith('x-'):
            continue
        if not isinstance(experiment_dict, dict):
            raise ConfigurationError('Experiment "%s" doesn\'t have any configuration options. All top level keys in a suite file must map to a dictionary of experiment options.' % name)
        loader = ExperimentLoader(working_dir=working_dir, filename=filename)
        experiment_dict = loader.make_experiment_dict(name, experiment_dict)
        validate_paths(experiment_dict)
        experiment_dicts.append(experiment_dict)

    if not experiment_dicts:
        raise ConfigurationError("%s defines no experiments." % (filename or 'The suite'))

    return experiment_dicts


def serialize(experiment_dicts):
    """
    The suite tree for a list of resolved experiment dicts; load() of the
    result gives the same dicts back.
    """
    tree = {}
    for experiment_dict in experiment_dicts:
        options = dict(experiment_dict)
        tree[options.pop('name')] = options
    return tree


class ExperimentLoader(object):
    def __init__(self, working_dir, filename=None, already_seen=None):
        self.working_dir = os.path.abspath(working_dir)
        if filename:
            self.filename = os.path.abspath(filename)
        else:
            self.filename = filename
        self.already_seen = already_seen or []

    def detect_cycle(self, name):
        if self.signature(name) in self.already_seen:
            raise CircularReference(self.already_seen + [self.signature(name)])

    def make_experiment_dict(self, name, experiment_dict, resolve=True, source=None):
        experiment_dict = experiment_dict.copy()
        experiment_dict['name'] = name
        experiment_dict = self.resolve_extends(experiment_dict, source or name)
        if 'scenario_file' in experiment_dict:
            experiment_dict['scenario_file'] = expand_path(self.working_dir, experiment_dict['scenario_file'])
        if not resolve:
            return experiment_dict
        return process_experiment_options(experiment_dict)

    def resolve_extends(self, experiment_dict, source):
        if 'extends' not in experiment_dict:
            return experiment_dict

        extends_options = self.validate_extends_options(experiment_dict['name'], experiment_dict['extends'])

        if 'file' in extends_options:
            other_config_path = expand_path(self.working_dir, extends_options['file'])
        else:
            other_config_path = self.filename

        other_working_dir = os.path.dirname(other_config_path)
        other_already_seen = self.already_seen + [self.signature(source)]
        other_loader = ExperimentLoader(
            working_dir=other_working_dir,
            filename=other_config_path,
            already_seen=other_already_seen,
        )

        other_config = load_yaml(other_config_path)
        if extends_options['experiment'] not in (other_config or {}):
            raise ConfigurationError(
                "Cannot extend experiment '%s' in %s: no such experiment"
                % (extends_options['experiment'], other_config_path))
        other_experiment_dict = other_config[extends_options['experiment']]
        other_loader.detect_cycle(extends_options['experiment'])
        other_experiment_dict = other_loader.make_experiment_dict(
            experiment_dict['name'],
            other_experiment_dict,
            resolve=False,
            source=extends_options['experiment'],
        )

        return merge_experiment_dicts(other_experiment_dict, experiment_dict)

    def signature(self, name):
        return (self.filename, name)

    def validate_extends_options(self, experiment_name, extends_options):
        error_prefix = "Invalid 'extends' configuration for %s:" % experiment_name

        if not isinstance(extends_options, dict):
            raise ConfigurationError("%s must be a dictionary" % error_prefix)

        if 'experiment' not in extends_options:
            raise ConfigurationError(
                "%s you need to specify an experiment, e.g. 'experiment: step-i'" % error_prefix
            )

        if 'file' not in extends_options and self.filename is None:
            raise ConfigurationError(
                "%s you need to specify a 'file', e.g. 'file: table-one.yml'" % error_prefix
            )

        for k, _ in extends_options.items():
            if k not in ['file', 'experiment']:
                raise ConfigurationError(
                    "%s unsupported configuration option '%s'" % (error_prefix, k)
                )

        return extends_options


def merge_experiment_dicts(base, override):
    d = base.copy()
    if 'depth_noise' in base and 'depth_noise' in override:
        d['depth_noise'] = dict(base['depth_noise'], **override['depth_noise'])
        override = dict(override)
        del override['depth_noise']
    if 'transition_matrix' in override:
        d.pop('stay_prob', None)
    if 'stay_prob' in override:
        d.pop('transition_matrix', None)
    d.update((k, v) for k, v in override.items() if k != 'extends')
    return d


def process_experiment_options(experiment_dict):
    name = experiment_dict['name']

    for k in experiment_dict:
        if k not in ALLOWED_KEYS:
            msg = "Unsupported config option for %s experiment: '%s'" % (name, k)
            if k in CONFIG_HINTS:
                msg += " (did you mean '%s'?)" % CONFIG_HINTS[k]
            raise ConfigurationError(msg)

    options = OptionReader(experiment_dict)
    d = {'name': name}

    d['scenario'] = options.choice('scenario', SCENARIOS, required=True)
    scenario = d['scenario']
    d['label'] = options.string('label', default=str(name))
    if 'scenario_file' in experiment_dict:
        d['scenario_file'] = options.string('scenario_file')

    d['pattern'] = options.choice('pattern', PATTERNS, required=True)
    if d['pattern'] == 'step':
        d['switch_at'] = options.integer('switch_at', DEFAULT_SWITCH_AT, minimum=0)
    elif d['pattern'] == 'periodic':
        d['period'] = options.integer('period', DEFAULT_PERIOD, minimum=1)
    elif d['pattern'] == 'scripted':
        d['script'] = options.script('script')

    default_horizon = DEFAULT_HORIZON if scenario == 'discrete' else DEFAULT_CONTINUOUS_HORIZON
    d['horizon'] = options.integer('horizon', default_horizon, minimum=1)
    if d['pattern'] == 'step' and d['switch_at'] >= d['horizon']:
        raise ConfigurationError("%s.switch_at (%d) must be smaller than the horizon (%d)"
                                 % (name, d['switch_at'], d['horizon']))

    if scenario == 'discrete':
        d['sigma'] = options.number('sigma', 0.0, 0.0, 1.0)
        d['reward_from'] = options.choice('reward_from', REWARD_SOURCES[scenario], default='observed')
    else:
        d['depth_noise'] = options.depth_noise('depth_noise')
        d['boundary_margin'] = options.number('boundary_margin', DEFAULT_BOUNDARY_MARGIN, 0.0, None)
        d['reward_from'] = options.choice('reward_from', REWARD_SOURCES[scenario], default='true')

    if 'transition_matrix' in experiment_dict:
        if 'stay_prob' in experiment_dict:
            raise ConfigurationError("%s: set either 'stay_prob' or 'transition_matrix', not both" % name)
        d['transition_matrix'] = options.stochastic_matrix('transition_matrix')
    else:
        d['stay_prob'] = options.number('stay_prob', DEFAULT_STAY_PROB, 0.0, 1.0)

    d['epsilon'] = options.number('epsilon', DEFAULT_EPSILON, 0.0, 1.0, upper_open=True)
    d['prior'] = options.prior('prior')
    d['policy'] = options.choice('policy', POLICIES[scenario], default=POLICIES[scenario][0])
    d['gamma'] = options.number('gamma', DEFAULT_GAMMA, 0.0, 1.0, upper_open=True)
    d['tol'] = options.number('tol', DEFAULT_TOL, 0.0, None, lower_open=True)
    d['seeds'] = options.seeds('seeds')

    return d


class OptionReader(object):
    """
    Typed access to one experiment's raw options; every failure names the
    offending key path.
    """
    def __init__(self, experiment_dict):
        self.raw = experiment_dict
        self.name = experiment_dict['name']

    def path(self, key):
        return '%s.%s' % (self.name, key)

    def fail(self, key, problem):
        raise ConfigurationError("%s %s" % (self.path(key), problem))

    def get(self, key, default=None, required=False):
        if key not in self.raw or self.raw[key] is None:
            if required:
                self.fail(key, "is required")
            return default
        return self.raw[key]

    def string(self, key, default=None):
        value = self.get(key, default)
        if not isinstance(value, str):
            self.fail(key, "must be a string, got %r" % (value,))
        return value

    def choice(self, key, choices, default=None, required=False):
        value = self.get(key, default, required)
        if value not in choices:
            self.fail(key, "must be one of %s, got %r" % (", ".join(choices), value))
        return value

    def integer(self, key, default, minimum=None):
        value = self.get(key, default)
        if isinstance(value, bool) or not isinstance(value, numbers.Integral):
            self.fail(key, "must be an integer, got %r" % (value,))
        if minimum is not None and value < minimum:
            self.fail(key, "must be at least %d, got %d" % (minimum, value))
        return int(value)

    def number(self, key, default, low, high, lower_open=False, upper_open=False):
        return self._float(key, self.get(key, default), low, high, lower_open, upper_open)

    def _float(self, key, value, low=None, high=None, lower_open=False, upper_open=False):
        if isinstance(value, bool):
            self.fail(key, "must be a number, got %r" % (value,))
        try:
            value = float(value)
        except (TypeError, ValueError):
            self.fail(key, "must be a number, got %r" % (value,))
        too_low = low is not None and (value < low or (lower_open and value == low))
        too_high = high is not None and (value > high or (upper_open and value == high))
        if too_low or too_high or value != value:
            self.fail(key, "is out of range %s%s, %s%s: %r" % (
                '(' if lower_open else '[', low, high if high is not None else 'inf',
                ')' if upper_open or high is None else ']', value))
        return value

    def script(self, key):
        value = self.get(key, required=True)
        if not isinstance(value, list) or not value:
            self.fail(key, "must be a non-empty list of context indices or [context, count] runs")
        for entry in value:
            if isinstance(entry, list):
                if len(entry) != 2 or not all(isinstance(v, int) and v >= 0 for v in entry):
                    self.fail(key, "run %r must be [context, count]" % (entry,))
            elif isinstance(entry, bool) or not isinstance(entry, int) or entry < 0:
                self.fail(key, "entry %r is not a context index" % (entry,))
        return value

    def depth_noise(self, key):
        value = self.get(key, DEFAULT_DEPTH_NOISE)
        if not isinstance(value, dict) or set(value) - set(['a', 'b']):
            self.fail(key, "must be a mapping with keys 'a' and 'b'")
        noise = dict(DEFAULT_DEPTH_NOISE, **value)
        return dict((k, self._float('%s.%s' % (key, k), noise[k], 0.0)) for k in ('a', 'b'))

    def stochastic_matrix(self, key):
        value = self.get(key)
        if (not isinstance(value, list) or not value or
                not all(isinstance(row, list) and len(row) == len(value) for row in value)):
            self.fail(key, "must be a square list of lists")
        matrix = [[self._float(key, v, 0.0, 1.0) for v in row] for row in value]
        for j in range(len(matrix)):
            total = sum(row[j] for row in matrix)
            if abs(total - 1.0) > PROB_TOL:
                self.fail(key, "column %d sums to %r, not 1" % (j, total))
        return matrix

    def prior(self, key):
        value = self.get(key, 'uniform')
        if value == 'uniform':
            return value
        if not isinstance(value, list) or not value:
            self.fail(key, "must be 'uniform' or a list of probabilities")
        probs = [self._float(key, v, 0.0, 1.0) for v in value]
        if abs(sum(probs) - 1.0) > PROB_TOL:
            self.fail(key, "sums to %r, not 1" % sum(probs))
        return probs

    def seeds(self, key):
        value = self.get(key, list(DEFAULT_SEEDS))
        if (not isinstance(value, list) or not value or
                not all(isinstance(s, int) and not isinstance(s, bool) and s >= 0 for s in value)):
            self.fail(key, "must be a non-empty list of non-negative integers")
        return list(value)


def parse_seeds(value):
    """
    `--seeds 0,1,2` or `--seeds 0-4`.
    """
    seeds = []
    try:
        for part in value.split(','):
            part = part.strip()
            if '-' in part:
                low, high = part.split('-', 1)
                seeds.extend(range(int(low), int(high) + 1))
            elif part:
                seeds.append(int(part))
    except ValueError:
        raise ConfigurationError("--seeds expects a list like 0,1,2 or a range like 0-4, got %r" % value)
    if not seeds:
        raise ConfigurationError("--seeds needs at least one seed")
    return seeds


def validate_paths(experiment_dict):
    if 'scenario_file' in experiment_dict:
        path = experiment_dict['scenario_file']
        if not os.path.exists(path) or not os.access(path, os.R_OK):
            raise ConfigurationError("scenario file %s either does not exist or is not accessible." % path)


def expand_path(working_dir, path):
    return os.path.abspath(os.path.join(working_dir, os.path.expanduser(path)))


def load_yaml(filename):
    try:
        with open(filename, 'r') as fh:
            return yaml.safe_load(fh)
    except IOError as e:
        raise ConfigurationError(str(e))
    except yaml.YAMLError as e:
        raise ConfigurationError("%s is not valid YAML: %s" % (filename, e))


class ConfigurationError(Exception):
    def __init__(self, msg):
        self.msg = msg

    def __str__(self):
        return self.msg


class CircularReference(ConfigurationError):
    def __init__(self, trail):
        self.trail = trail

    @property
    def msg(self):
        lines = [
            "{} in {}".format(experiment_name, filename)
            for (filename, experiment_name) in self.trail
        ]
        return "Circular reference:\n  {}".format("\n  extends ".join(lines))


class SuiteFileNotFound(ConfigurationError):
    def __init__(self, supported_filenames):
        super(SuiteFileNotFound, self).__init__("""
        Can't find a suite file in this directory or any parent. Are you in the right directory?

        Supported filenames: %s
        """ % ", ".join(supported_filenames))

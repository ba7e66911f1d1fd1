from __future__ import unicode_literals
from __future__ import absolute_import
import csv
import json
import os
import shutil
import tempfile

import mock

from .. import fixture, unittest
from oas import config
from oas.experiment import Experiment
from oas.output import OutputError
from oas.suite import NoSuchExperiment, Suite


def load_suite(*parts):
    return Suite.from_dicts('test', config.load(config.find('.', fixture(*parts))))


def read_tree(path):
    files = {}
    for root, _, names in os.walk(path):
        for name in names:
            full = os.path.join(root, name)
            with open(full, 'rb') as fh:
                files[os.path.relpath(full, path)] = fh.read()
    return files


class SuiteTest(unittest.TestCase):
    def setUp(self):
        self.suite = load_suite('simple-suite', 'oas.yml')

    def test_from_dicts(self):
        self.assertEqual(self.suite.experiment_names, ['step-i', 'periodic-ii'])
        step = self.suite.get_experiment('step-i')
        self.assertEqual(step.pattern, 'step')
        self.assertEqual(step.seeds, [0, 1])
        self.assertEqual(step.model_label, 'stay=0.8')
        self.assertEqual(self.suite.get_experiment('periodic-ii').model_label, 'stay=0.5')

    def test_duplicate_names(self):
        d = {'name': 'a', 'scenario': 'discrete', 'pattern': 'step'}
        with self.assertRaises(config.ConfigurationError):
            Suite.from_dicts('test', [d, dict(d)])

    def test_get_experiment_missing(self):
        with self.assertRaises(NoSuchExperiment) as ctx:
            self.suite.get_experiment('nope')
        self.assertEqual(ctx.exception.msg, 'No such experiment: nope')

    def test_get_experiments(self):
        self.assertEqual(len(self.suite.get_experiments()), 2)
        self.assertEqual([e.name for e in self.suite.get_experiments(['periodic-ii'])], ['periodic-ii'])

    def test_with_seeds(self):
        suite = self.suite.with_seeds([5, 6, 7])
        self.assertEqual(suite.get_experiment('step-i').seeds, [5, 6, 7])
        self.assertEqual(self.suite.get_experiment('step-i').seeds, [0, 1])

    def test_experiment_dicts_reload(self):
        again = Suite.from_dicts('test', config.load(config.ConfigDetails(
            config.serialize(self.suite.experiment_dicts()), '.', None)))
        self.assertEqual(again.experiment_dicts(), self.suite.experiment_dicts())

    def test_validate(self):
        self.assertIs(self.suite.validate(), self.suite)

    def test_validate_scenario_files(self):
        suite = load_suite('scenario-file', 'oas.yml')
        suite.validate()
        self.assertEqual(suite.get_experiment('hallway').step_seconds, 0.2)
        self.assertIsNone(suite.get_experiment('dash').step_seconds)

    def test_projections_use_the_experiment_noise_model(self):
        hallway = load_suite('scenario-file', 'oas.yml').get_experiment('hallway')
        first, second = hallway.abstractions()
        self.assertEqual(first.margin, 4.0)
        self.assertEqual(second.depth_noise, {'a': 0.02, 'b': 0.01})


class SuiteRunTest(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.mkdtemp()
        self.suite = load_suite('simple-suite', 'oas.yml')

    def tearDown(self):
        shutil.rmtree(self.tmp)

    def test_writes_outputs(self):
        out_dir = os.path.join(self.tmp, 'out')
        results = self.suite.run(out_dir)

        self.assertEqual([r.experiment.name for r in results], ['step-i', 'periodic-ii'])
        self.assertEqual(len(results[0].metrics), 2)
        self.assertEqual(sorted(os.listdir(out_dir)), ['manifest.json', 'metrics.csv', 'traces'])
        self.assertEqual(sorted(os.listdir(os.path.join(out_dir, 'traces'))), [
            'periodic-ii-seed0.csv', 'periodic-ii-seed1.csv', 'step-i-seed0.csv', 'step-i-seed1.csv',
        ])

        with open(os.path.join(out_dir, 'metrics.csv')) as fh:
            rows = list(csv.DictReader(fh))
        self.assertEqual([(r['pattern'], r['model']) for r in rows],
                         [('step-i', 'stay=0.8'), ('periodic-ii', 'stay=0.5')])
        for row in rows:
            self.assertTrue(0.0 <= float(row['accuracy_mean']) <= 1.0)

        with open(os.path.join(out_dir, 'manifest.json')) as fh:
            manifest = json.load(fh)
        self.assertEqual(manifest['x-manifest']['seeds'], [0, 1])
        self.assertEqual(sorted(k for k in manifest if not k.startswith('x-')), ['periodic-ii', 'step-i'])

    def test_traces_off(self):
        out_dir = os.path.join(self.tmp, 'out')
        self.suite.run(out_dir, traces=False)
        self.assertEqual(sorted(os.listdir(out_dir)), ['manifest.json', 'metrics.csv'])

    def test_selected_experiments(self):
        out_dir = os.path.join(self.tmp, 'out')
        results = self.suite.run(out_dir, traces=False, experiment_names=['periodic-ii'])
        self.assertEqual(len(results), 1)
        with open(os.path.join(out_dir, 'manifest.json')) as fh:
            self.assertNotIn('step-i', json.load(fh))

    def test_parallel_does_not_change_output(self):
        serial, parallel = os.path.join(self.tmp, 'serial'), os.path.join(self.tmp, 'parallel')
        self.suite.run(serial, parallel=1)
        self.suite.run(parallel, parallel=4)
        self.assertEqual(read_tree(serial), read_tree(parallel))

    def test_rerun_from_manifest(self):
        first, second = os.path.join(self.tmp, 'first'), os.path.join(self.tmp, 'second')
        self.suite.run(first)
        again = Suite.from_dicts('test', config.load(config.find(first, 'manifest.json')))
        again.run(second, parallel=3)
        self.assertEqual(read_tree(first), read_tree(second))

    def test_unwritable_out_dir_fails_before_running(self):
        blocker = os.path.join(self.tmp, 'file')
        open(blocker, 'w').close()
        with mock.patch.object(Experiment, 'run_seed') as run_seed:
            with self.assertRaises(OutputError):
                self.suite.run(os.path.join(blocker, 'out'))
        self.assertFalse(run_seed.called)

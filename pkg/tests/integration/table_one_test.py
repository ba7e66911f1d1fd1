from __future__ import unicode_literals
from __future__ import absolute_import
import shutil
import tempfile

from .testcases import SuiteTestCase


class TableOneTest(SuiteTestCase):
    """
    The five switching patterns under random actions, 500 steps and five
    seeds, filtered with stay probability 0.8 (-i) and 0.5 (-ii).
    """
    @classmethod
    def setUpClass(cls):
        out_dir = tempfile.mkdtemp()
        try:
            results = cls.load_suite('table-one', 'oas.yml').run(out_dir, traces=False, parallel=4)
        finally:
            shutil.rmtree(out_dir)
        cls.summary = dict((r.experiment.name, r.summary) for r in results)

    def accuracy(self, name):
        return self.summary[name]['accuracy'][0]

    def test_step_is_tracked_almost_perfectly(self):
        self.assertGreaterEqual(self.accuracy('step-i'), 0.95)
        self.assertLessEqual(self.summary['step-i']['avg_lag'][0], 2.0)
        self.assertGreaterEqual(self.accuracy('noisy-step-i'), 0.90)

    def test_sticky_model_ordering(self):
        self.assertGreater(self.accuracy('step-i'), self.accuracy('periodic-i'))
        self.assertGreater(self.accuracy('periodic-i'), self.accuracy('random-i'))

    def test_periodic(self):
        self.assertTrue(0.86 <= self.accuracy('periodic-i') <= 1.0, self.accuracy('periodic-i'))
        self.assertLessEqual(self.summary['periodic-i']['max_lag'][0], 10.0)

    def test_random(self):
        for name in ('random-i', 'random-ii'):
            self.assertTrue(0.77 <= self.accuracy(name) <= 0.91, (name, self.accuracy(name)))

    def test_forgetful_model_on_step(self):
        self.assertTrue(0.76 <= self.accuracy('step-ii') <= 0.90, self.accuracy('step-ii'))
        self.assertLessEqual(self.summary['step-ii']['avg_lag'][0], 1.0)

    def test_observation_noise_does_not_change_accuracy(self):
        self.assertGreaterEqual(self.accuracy('noisy-step-i'), 0.90)
        self.assertLessEqual(abs(self.accuracy('step-i') - self.accuracy('noisy-step-i')), 0.05)

    def test_forgetful_model_reads_the_observed_state(self):
        # With stay 0.5 the belief restarts every step, so accuracy after the
        # switch tracks how often s2 is observed, and noise changes that.
        self.assertLess(self.accuracy('noisy-step-ii'), self.accuracy('step-ii'))

    def test_rewards_are_normalized(self):
        for name, summary in self.summary.items():
            self.assertTrue(0.0 <= summary['normalized_reward'][0] <= 1.0, name)

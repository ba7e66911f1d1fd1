from __future__ import unicode_literals
from __future__ import absolute_import
import os
import shutil
import tempfile

from oas import config
from oas.suite import Suite
from .. import fixture, unittest


class SuiteTestCase(unittest.TestCase):
    """
    Runs suites from the fixtures directory into a scratch output directory
    that is removed after each test.
    """
    def setUp(self):
        self.tmp = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.tmp)

    def out_dir(self, name='out'):
        return os.path.join(self.tmp, name)

    @staticmethod
    def load_suite(*parts):
        return Suite.from_dicts('test', config.load(config.find('.', fixture(*parts))))

    @staticmethod
    def read_tree(path):
        files = {}
        for root, _, names in os.walk(path):
            for name in names:
                full = os.path.join(root, name)
                with open(full, 'rb') as fh:
                    files[os.path.relpath(full, path)] = fh.read()
        return files

from __future__ import unicode_literals
from __future__ import absolute_import
import io
import os
import shutil
import tempfile
import threading
import time

from .. import unittest
from oas import utils


class ParallelExecuteTest(unittest.TestCase):
    def execute(self, objects, func, limit=None):
        stream = io.StringIO()
        return utils.parallel_execute(objects, func, lambda obj: 'job %s' % obj, 'Running',
                                      limit=limit, stream=stream), stream

    def test_results_in_input_order(self):
        def slow_square(n):
            time.sleep(0.01 * (5 - n))
            return n * n

        results, _ = self.execute(range(5), slow_square, limit=5)
        self.assertEqual(results, [0, 1, 4, 9, 16])

    def test_status_lines(self):
        _, stream = self.execute([1, 2], lambda n: n)
        output = stream.getvalue()
        self.assertIn('Running job 1... \r\n', output)
        self.assertIn('Running job 2... done\n', output)

    def test_limit(self):
        lock = threading.Lock()
        state = {'running': 0, 'peak': 0}

        def track(n):
            with lock:
                state['running'] += 1
                state['peak'] = max(state['peak'], state['running'])
            time.sleep(0.01)
            with lock:
                state['running'] -= 1
            return n

        results, _ = self.execute(range(8), track, limit=2)
        self.assertEqual(results, list(range(8)))
        self.assertLessEqual(state['peak'], 2)

    def test_first_error_in_input_order_is_raised(self):
        def fail_odd(n):
            if n % 2:
                time.sleep(0.01 * (5 - n))
                raise ValueError('odd %d' % n)
            return n

        with self.assertRaises(ValueError) as ctx:
            self.execute(range(5), fail_odd, limit=5)
        self.assertEqual(str(ctx.exception), 'odd 1')

    def test_empty(self):
        results, _ = self.execute([], lambda n: n)
        self.assertEqual(results, [])


class JsonHashTest(unittest.TestCase):
    def test_key_order_does_not_matter(self):
        self.assertEqual(utils.json_hash({'a': 1, 'b': [1, 2]}), utils.json_hash({'b': [1, 2], 'a': 1}))

    def test_values_matter(self):
        self.assertNotEqual(utils.json_hash({'a': 1}), utils.json_hash({'a': 2}))

    def test_unicode(self):
        self.assertEqual(len(utils.json_hash({'label': 'caf\xe9'})), 64)


class AtomicWriteTest(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.tmp)

    def test_writes_and_replaces(self):
        path = os.path.join(self.tmp, 'out.csv')
        utils.atomic_write(path, 'a\n')
        utils.atomic_write(path, 'b\n')
        with open(path, 'rb') as fh:
            self.assertEqual(fh.read(), b'b\n')
        self.assertEqual(os.listdir(self.tmp), ['out.csv'])

    def test_failure_leaves_no_temp_file(self):
        path = os.path.join(self.tmp, 'out.csv')
        with self.assertRaises(TypeError):
            utils.atomic_write(path, b'not text')
        self.assertEqual(os.listdir(self.tmp), [])

    def test_creates_parent_directories(self):
        path = os.path.join(self.tmp, 'traces', 'out.csv')
        utils.atomic_write(path, 'a\n')
        self.assertEqual(os.listdir(os.path.join(self.tmp, 'traces')), ['out.csv'])

    def test_mkdir(self):
        path = os.path.join(self.tmp, 'a', 'b')
        self.assertEqual(utils.mkdir(path), path)
        self.assertEqual(utils.mkdir(path), path)
        self.assertTrue(os.path.isdir(path))

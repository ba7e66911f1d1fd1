import os
import unittest  # NOQA


FIXTURES_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'fixtures')


def fixture(*parts):
    return os.path.join(FIXTURES_DIR, *parts)

from __future__ import absolute_import
from textwrap import dedent


class UserError(Exception):
    def __init__(self, msg):
        self.msg = dedent(msg).strip()

    def __str__(self):
        return self.msg


class TrialFailed(UserError):
    def __init__(self, error):
        super(TrialFailed, self).__init__("""
        Trial failed (%s).

        Run with --verbose for the full log, or `oas validate` to check the suite file.
        """ % error)

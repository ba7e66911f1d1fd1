from __future__ import unicode_literals
from __future__ import absolute_import
import logging
import os
import re

from .. import config
from ..const import ENV_CONFIG
from ..suite import Suite
from .docopt_command import DocoptCommand

log = logging.getLogger(__name__)


# Verbs that never read a suite file.
STANDALONE_COMMANDS = ('help', 'version', 'quotient', 'trace-stats')


class Command(DocoptCommand):
    base_dir = '.'

    def perform_command(self, options, handler, command_options):
        if options['COMMAND'] in STANDALONE_COMMANDS:
            handler(None, command_options)
            return

        explicit_config_path = command_options.get('CONFIG') or os.environ.get(ENV_CONFIG)
        suite = self.get_suite(explicit_config_path)

        handler(suite, command_options)

    def get_suite(self, config_path=None):
        config_details = config.find(self.base_dir, config_path)
        return Suite.from_dicts(
            self.get_suite_name(config_details),
            config.load(config_details))

    def get_suite_name(self, config_details):
        def normalize_name(name):
            return re.sub(r'[^a-z0-9-]', '', name.lower())

        if config_details.filename:
            stem = os.path.splitext(os.path.basename(config_details.filename))[0]
            if stem not in ('oas', ''):
                return normalize_name(stem)

        suite = os.path.basename(os.path.abspath(config_details.working_dir))
        if suite:
            return normalize_name(suite)

        return 'default'

from __future__ import print_function
from __future__ import unicode_literals
from inspect import getdoc
import logging
import os
import re
import sys

from .. import __version__
from ..bisim import NotABisimulation, abstract
from ..config import ConfigurationError, load_yaml, parse_seeds
from ..const import DEFAULT_OUT_DIR, ENV_OUT_DIR, EQUIV_TOL
from ..harness import TrialError
from ..mdp import InvalidMdp, SwitchSchedule, load_mdp
from ..metrics import MetricsError, compute_metrics, count_changes
from ..output import OutputError, read_trace
from ..suite import NoSuchExperiment
from .command import Command
from .docopt_command import NoSuchCommand
from .errors import TrialFailed, UserError
from .formatter import Formatter
from .utils import get_version_info

log = logging.getLogger(__name__)

console_handler = logging.StreamHandler(sys.stderr)


def main():
    setup_logging()
    try:
        command = TopLevelCommand()
        command.sys_dispatch()
    except KeyboardInterrupt:
        log.error("\nAborting.")
        sys.exit(1)
    except (UserError, NoSuchExperiment, ConfigurationError) as e:
        log.error(e.msg)
        sys.exit(1)
    except NoSuchCommand as e:
        log.error("No such command: %s", e.command)
        log.error("")
        log.error("\n".join(parse_doc_section("commands:", getdoc(e.supercommand))))
        sys.exit(1)
    except TrialError as e:
        log.error(TrialFailed(e).msg)
        sys.exit(1)
    except (OutputError, MetricsError, InvalidMdp) as e:
        log.error(e)
        sys.exit(1)


def setup_logging():
    console_handler.setFormatter(logging.Formatter())
    console_handler.setLevel(logging.INFO)
    root_logger = logging.getLogger()
    root_logger.addHandler(console_handler)
    root_logger.setLevel(logging.DEBUG)


# stolen from docopt master
def parse_doc_section(name, source):
    pattern = re.compile('^([^\n]*' + name + '[^\n]*\n?(?:[ \t].*?(?:\n|$))*)',
                         re.IGNORECASE | re.MULTILINE)
    return [s.strip() for s in pattern.findall(source)]


def fmt(value):
    return '%.4f' % value


class TopLevelCommand(Command):
    """Track which attention mechanism explains the reward, and score it.

    Usage:
      oas [options] [COMMAND] [ARGS...]
      oas -h|--help

    Options:
      --verbose                 Show more output
      -v, --version             Print version and exit

    Commands:
      help               Get help on a command
      quotient           Print the bisimulation partition and quotient of an MDP file
      run                Run a suite of experiments
      trace-stats        Recompute metrics from a trace file
      validate           Validate a suite file and print its experiments
      version            Show the oas version information

    """
    def docopt_options(self):
        options = super(TopLevelCommand, self).docopt_options()
        options['version'] = get_version_info('oas')
        return options

    def perform_command(self, options, handler, command_options):
        if options.get('--verbose'):
            console_handler.setLevel(logging.DEBUG)
        super(TopLevelCommand, self).perform_command(options, handler, command_options)

    def help(self, suite, options):
        """
        Get help on a command.

        Usage: help COMMAND
        """
        handler = self.get_handler(options['COMMAND'])
        raise SystemExit(getdoc(handler))

    def quotient(self, suite, options):
        """
        Compute the coarsest bisimulation of an MDP file and print its
        partition and quotient.

        Usage: quotient [options] MDP_FILE

        Options:
            --tol TOL     Tolerance for comparing rewards and probabilities
        """
        tol = EQUIV_TOL
        if options['--tol'] is not None:
            try:
                tol = float(options['--tol'])
            except ValueError:
                raise UserError("--tol expects a number, got %r" % options['--tol'])
            if tol <= 0:
                raise UserError("--tol must be positive")

        d = load_yaml(options['MDP_FILE'])
        if not isinstance(d, dict):
            raise UserError("%s does not describe an MDP" % options['MDP_FILE'])
        m = load_mdp(d, name=d.get('name') or os.path.basename(options['MDP_FILE']))
        try:
            ab = abstract(m, tol=tol)
        except NotABisimulation as e:
            raise UserError(str(e))
        q = ab.quotient

        print(Formatter().table(
            ['State', 'Block'],
            [[m.state_label(s), q.state_label(z)] for s, z in enumerate(ab.partition.block_of)]))
        print()
        headers = ['Block', 'Action', 'Reward'] + ['-> %s' % q.state_label(z) for z in range(q.n_states)]
        rows = []
        for z in range(q.n_states):
            for a in range(q.n_actions):
                rows.append([q.state_label(z), q.action_label(a), fmt(q.rewards[z, a])] +
                            [fmt(p) for p in q.transitions[a, z]])
        print(Formatter().table(headers, rows))

    def run(self, suite, options):
        """
        Run every experiment of a suite for each of its seeds, then write the
        metrics table, the run manifest and the per-trial traces.

        Usage: run [options] [CONFIG]

        Options:
            --seeds LIST      Seeds to run, e.g. 0,1,2 or 0-4 (overrides the suite file)
            --out-dir DIR     Output directory (default: $OAS_OUT_DIR or ./oas-out)
            --traces MODE     Write one trace file per trial: on or off [default: on]
            --parallel N      Number of trials to run at once [default: 1]
        """
        if options['--traces'] not in ('on', 'off'):
            raise UserError("--traces must be 'on' or 'off', got %r" % options['--traces'])
        try:
            parallel = int(options['--parallel'])
        except ValueError:
            parallel = 0
        if parallel < 1:
            raise UserError("--parallel expects a positive integer, got %r" % options['--parallel'])

        if options['--seeds']:
            suite = suite.with_seeds(parse_seeds(options['--seeds']))
        out_dir = options['--out-dir'] or os.environ.get(ENV_OUT_DIR) or DEFAULT_OUT_DIR

        results = suite.run(out_dir, traces=options['--traces'] == 'on', parallel=parallel)

        headers = ['Experiment', 'Pattern', 'Model', 'Accuracy', 'Avg lag', 'Max lag', 'Reward']
        rows = []
        for result in results:
            s = result.summary
            rows.append([
                result.experiment.name,
                result.experiment.pattern_label,
                result.experiment.model_label,
                '%s +/- %s' % (fmt(s['accuracy'][0]), fmt(s['accuracy'][1])),
                fmt(s['avg_lag'][0]),
                fmt(s['max_lag'][0]),
                fmt(s['normalized_reward'][0]),
            ])
        print(Formatter().table(headers, rows))

    def trace_stats(self, suite, options):
        """
        Recompute a trial's metrics from its trace file.

        Usage: trace-stats [options] TRACE_FILE

        Options:
            --step-seconds S    Report lags in seconds, S per step
        """
        step_seconds = None
        if options['--step-seconds'] is not None:
            try:
                step_seconds = float(options['--step-seconds'])
            except ValueError:
                raise UserError("--step-seconds expects a number, got %r" % options['--step-seconds'])

        record = read_trace(options['TRACE_FILE'])
        schedule = SwitchSchedule('scripted', {}, record.true_ctx)
        metrics = compute_metrics(record, schedule).in_seconds(step_seconds)

        rows = [[name, fmt(value)] for name, value in metrics.as_row()]
        rows.append(['switches', str(metrics.switches)])
        rows.append(['ml changes', str(count_changes(record.ml))])
        rows.append(['steps', str(record.horizon)])
        print(Formatter().table(['Metric', 'Value'], rows))

    def validate(self, suite, options):
        """
        Validate a suite file and list its experiments.

        Usage: validate [options] [CONFIG]

        Options:
            -q, --quiet    Only validate, don't print anything.
        """
        suite.validate()
        if options['--quiet']:
            return

        headers = ['Experiment', 'Scenario', 'Pattern', 'Horizon', 'Model', 'Policy', 'Seeds']
        rows = []
        for experiment in suite.experiments:
            rows.append([
                experiment.name,
                experiment.scenario_kind,
                experiment.pattern,
                str(experiment.horizon),
                experiment.model_label,
                experiment.policy_mode,
                ','.join(str(seed) for seed in experiment.seeds),
            ])
        print(Formatter().table(headers, rows))

    def version(self, suite, options):
        """
        Show version informations

        Usage: version [--short]

        Options:
            --short     Shows only the oas version number.
        """
        if options['--short']:
            print(__version__)
        else:
            print(get_version_info('full'))

from __future__ import unicode_literals
from __future__ import absolute_import
from collections import namedtuple
import logging
import os

from .config import ConfigurationError, serialize
from .const import MANIFEST_FILENAME, METRICS_FILENAME, TRACE_DIRNAME
from .experiment import Experiment
from .metrics import aggregate
from .output import (
    ensure_out_dir,
    metrics_row,
    trace_filename,
    write_manifest,
    write_metrics_table,
    write_trace,
)
from .utils import parallel_execute

log = logging.getLogger(__name__)


ExperimentResult = namedtuple('ExperimentResult', 'experiment metrics summary')


class Suite(object):
    """
    A collection of experiments loaded from one suite file.
    """
    def __init__(self, name, experiments):
        self.name = name
        self.experiments = experiments

    @classmethod
    def from_dicts(cls, name, experiment_dicts):
        names = [d['name'] for d in experiment_dicts]
        duplicates = sorted(set(n for n in names if names.count(n) > 1))
        if duplicates:
            raise ConfigurationError("Duplicate experiment names: %s" % ", ".join(duplicates))
        return cls(name, [Experiment(**dict(d)) for d in experiment_dicts])

    @property
    def experiment_names(self):
        return [experiment.name for experiment in self.experiments]

    def get_experiment(self, name):
        """
        Retrieve an experiment by name. Raises NoSuchExperiment
        if the named experiment does not exist.
        """
        for experiment in self.experiments:
            if experiment.name == name:
                return experiment

        raise NoSuchExperiment(name)

    def get_experiments(self, experiment_names=None):
        if not experiment_names:
            return self.experiments
        return [self.get_experiment(name) for name in experiment_names]

    def with_seeds(self, seeds):
        dicts = self.experiment_dicts()
        for d in dicts:
            d['seeds'] = list(seeds)
        return Suite.from_dicts(self.name, dicts)

    def experiment_dicts(self, experiment_names=None):
        return [experiment.config_dict() for experiment in self.get_experiments(experiment_names)]

    def validate(self):
        for experiment in self.experiments:
            experiment.validate()
        return self

    def run(self, out_dir, traces=True, parallel=1, experiment_names=None):
        """
        Run every (experiment, seed) trial, then write the metrics table, the
        manifest and, if asked, one trace file per trial. Results do not
        depend on `parallel`.
        """
        experiments = self.get_experiments(experiment_names)
        for experiment in experiments:
            experiment.validate()
        ensure_out_dir(out_dir)
        trace_dir = ensure_out_dir(os.path.join(out_dir, TRACE_DIRNAME)) if traces else None

        jobs = [(experiment, seed) for experiment in experiments for seed in experiment.seeds]
        log.info("Running %d trials of %d experiments", len(jobs), len(experiments))
        outcomes = parallel_execute(
            jobs,
            lambda job: job[0].run_seed(job[1]),
            lambda job: '%s seed %d' % (job[0].name, job[1]),
            'Running',
            limit=parallel,
        )

        if traces:
            for (experiment, seed), (trace, _) in zip(jobs, outcomes):
                write_trace(os.path.join(trace_dir, trace_filename(experiment.name, seed)), trace)
            log.info("Wrote %d traces to %s", len(jobs), trace_dir)

        results = []
        for experiment in experiments:
            metrics = [m for (e, _), (_, m) in zip(jobs, outcomes) if e is experiment]
            summary = aggregate(metrics)
            log.info("%s: accuracy %.4f over %d seeds", experiment.name, summary['accuracy'][0], len(metrics))
            results.append(ExperimentResult(experiment, metrics, summary))

        metrics_path = os.path.join(out_dir, METRICS_FILENAME)
        write_metrics_table(metrics_path, [metrics_row(r.experiment, r.summary) for r in results])
        log.info("Wrote %s", metrics_path)

        manifest_path = os.path.join(out_dir, MANIFEST_FILENAME)
        write_manifest(manifest_path, serialize(self.experiment_dicts(experiment_names)),
                       [seed for _, seed in jobs])
        log.info("Wrote %s", manifest_path)

        return results


class NoSuchExperiment(Exception):
    def __init__(self, name):
        self.name = name
        self.msg = "No such experiment: %s" % self.name

    def __str__(self):
        return self.msg

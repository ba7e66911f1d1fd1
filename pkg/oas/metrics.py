from __future__ import unicode_literals
from __future__ import absolute_import
from __future__ import division
from collections import OrderedDict, namedtuple
from itertools import groupby

import numpy as np


FIELDS = ['accuracy', 'avg_lag', 'max_lag', 'normalized_reward']
LAG_FIELDS = ['avg_lag', 'max_lag']


class MetricsError(ValueError):
    pass


def lag_in_seconds(lag, step_seconds):
    return lag * step_seconds


class TrialMetrics(namedtuple('TrialMetrics', FIELDS + ['switches'])):
    """
    Accuracy, lag (in steps unless converted) and normalized reward of one
    trial.
    """
    def in_seconds(self, step_seconds):
        if not step_seconds:
            return self
        return self._replace(**dict((field, lag_in_seconds(getattr(self, field), step_seconds))
                                    for field in LAG_FIELDS))

    def as_row(self):
        return [(field, getattr(self, field)) for field in FIELDS]


def switch_lags(true_ctx, ml):
    """
    For each switch at tau, the steps until the ML index first equals the new
    context, searched up to the next switch; never catching up counts as the
    whole window.
    """
    horizon = len(true_ctx)
    switches = [t for t in range(1, horizon) if true_ctx[t] != true_ctx[t - 1]]
    lags = []
    for k, tau in enumerate(switches):
        end = switches[k + 1] if k + 1 < len(switches) else horizon
        window = end - tau
        lag = next((j for j in range(window) if ml[tau + j] == true_ctx[tau]), window)
        lags.append(lag)
    return lags


def count_changes(ml, min_dwell=1):
    """
    Number of times the ML index moves to a new value that then holds for at
    least min_dwell steps; shorter excursions are ignored.
    """
    runs = [(value, len(list(group))) for value, group in groupby(ml)]
    if not runs:
        return 0
    stable = runs[0][0]
    changes = 0
    for value, length in runs[1:]:
        if value != stable and length >= min_dwell:
            changes += 1
            stable = value
    return changes


def compute_metrics(trace, schedule):
    true_ctx = list(schedule.sequence)
    ml = list(trace.ml)
    if len(ml) != len(true_ctx):
        raise MetricsError("trace has %d steps but the schedule has %d" % (len(ml), len(true_ctx)))
    if not true_ctx:
        raise MetricsError("cannot score an empty trace")

    horizon = len(true_ctx)
    correct = sum(1 for got, want in zip(ml, true_ctx) if got == want)
    lags = switch_lags(true_ctx, ml)

    return TrialMetrics(
        accuracy=correct / horizon,
        avg_lag=float(np.mean(lags)) if lags else 0.0,
        max_lag=float(max(lags)) if lags else 0.0,
        normalized_reward=float(np.sum(trace.reward)) / horizon,
        switches=len(lags))


def aggregate(metrics_list):
    """
    Mean and population standard deviation of every metric over seeds.
    """
    if not metrics_list:
        raise MetricsError("nothing to aggregate")
    summary = OrderedDict()
    for field in FIELDS:
        values = np.sort([getattr(m, field) for m in metrics_list])
        summary[field] = (float(values.mean()), float(values.std()))
    return summary

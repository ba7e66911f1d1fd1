from __future__ import unicode_literals
from __future__ import absolute_import
import csv
import io
import json
import logging
import os

from . import __version__
from .const import MANIFEST_KEY
from .metrics import FIELDS
from .utils import atomic_write, json_hash, mkdir

log = logging.getLogger(__name__)


METRICS_COLUMNS = ['pattern', 'model'] + [
    '%s_%s' % (field, stat) for field in FIELDS for stat in ('mean', 'std')]

FLOAT_FORMAT = '%.6f'


class OutputError(Exception):
    pass


def write_output(path, text):
    try:
        atomic_write(path, text)
    except OSError as e:
        raise OutputError("cannot write %s: %s" % (path, e.strerror or e))


def _csv_text(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator='\n')
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def metrics_row(experiment, summary):
    row = [experiment.pattern_label, experiment.model_label]
    for field in FIELDS:
        mean, std = summary[field]
        row.extend([FLOAT_FORMAT % mean, FLOAT_FORMAT % std])
    return row


def format_metrics_table(rows):
    return _csv_text(METRICS_COLUMNS, rows)


def write_metrics_table(path, rows):
    write_output(path, format_metrics_table(rows))


def trace_columns(n_abstractions):
    return (['t', 'true_ctx', 'ml'] +
            ['belief_%d' % i for i in range(n_abstractions)] +
            ['state', 'obs', 'action', 'reward'])


def _cell(value):
    if hasattr(value, 'tolist'):
        value = value.tolist()
    if isinstance(value, (list, tuple)):
        return ';'.join(repr(float(v)) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def format_trace(trace):
    rows = []
    for t in range(trace.horizon):
        rows.append(
            [t, trace.true_ctx[t], trace.ml[t]] +
            [repr(float(p)) for p in trace.belief[t]] +
            [_cell(trace.state[t]), _cell(trace.observed[t]), trace.action[t], repr(float(trace.reward[t]))])
    return _csv_text(trace_columns(trace.n_abstractions), rows)


def write_trace(path, trace):
    write_output(path, format_trace(trace))


def trace_filename(experiment_name, seed):
    return '%s-seed%d.csv' % (experiment_name, seed)


class TraceRecord(object):
    """
    A trace file read back: the columns trace-stats needs.
    """
    def __init__(self, true_ctx, ml, beliefs, reward, action):
        self.true_ctx = true_ctx
        self.ml = ml
        self.beliefs = beliefs
        self.reward = reward
        self.action = action

    @property
    def horizon(self):
        return len(self.ml)


def read_trace(path):
    try:
        with open(path, 'r', newline='') as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            rows = list(reader)
    except IOError as e:
        raise OutputError(str(e))

    required = ['t', 'true_ctx', 'ml', 'action', 'reward']
    if header is None or any(column not in header for column in required):
        raise OutputError("%s is not a trace file: expected columns %s" % (path, ", ".join(required)))

    column = dict((name, i) for i, name in enumerate(header))
    belief_columns = [column[name] for name in header if name.startswith('belief_')]
    try:
        return TraceRecord(
            true_ctx=[int(row[column['true_ctx']]) for row in rows],
            ml=[int(row[column['ml']]) for row in rows],
            beliefs=[[float(row[i]) for i in belief_columns] for row in rows],
            reward=[float(row[column['reward']]) for row in rows],
            action=[int(row[column['action']]) for row in rows])
    except (IndexError, ValueError) as e:
        raise OutputError("%s has a malformed row: %s" % (path, e))


def build_manifest(tree, seeds):
    manifest = dict((name, dict(sorted(options.items()))) for name, options in tree.items())
    manifest[MANIFEST_KEY] = {
        'version': __version__,
        'digest': json_hash(tree),
        'seeds': sorted(set(seeds)),
    }
    return manifest


def write_manifest(path, tree, seeds):
    # Keys stay in suite order: a re-run writes its metrics rows in this order.
    text = json.dumps(build_manifest(tree, seeds), indent=2) + '\n'
    write_output(path, text)


def ensure_out_dir(path):
    if os.path.exists(path) and not os.path.isdir(path):
        raise OutputError("output path %s exists and is not a directory" % path)
    try:
        mkdir(path)
    except OSError as e:
        raise OutputError("cannot create output directory %s: %s" % (path, e.strerror or e))
    if not os.access(path, os.W_OK | os.X_OK):
        raise OutputError("output directory %s is not writable" % path)
    return path

from __future__ import unicode_literals
from __future__ import absolute_import
import hashlib
import json
import logging
import os
import sys
import tempfile

from queue import Queue, Empty
from threading import Thread


log = logging.getLogger(__name__)


def parallel_execute(objects, obj_callable, msg_index, msg, limit=None, stream=None):
    """
    Call obj_callable on every object using at most `limit` threads and
    return the results in the order of `objects`. The first failure (in
    that order) is re-raised once every call has finished.
    """
    stream = stream or sys.stderr
    objects = list(objects)
    limit = max(1, min(limit or len(objects) or 1, len(objects) or 1))
    lines = []
    results = [None] * len(objects)
    errors = {}

    for obj in objects:
        write_out_msg(stream, lines, msg_index(obj), msg)

    tasks = Queue()
    done_q = Queue()
    for position, obj in enumerate(objects):
        tasks.put((position, obj))

    def worker():
        while True:
            try:
                position, obj = tasks.get_nowait()
            except Empty:
                return
            try:
                results[position] = obj_callable(obj)
                done_q.put((position, None))
            except Exception as e:
                errors[position] = e
                done_q.put((position, e))

    for _ in range(limit):
        t = Thread(target=worker)
        t.daemon = True
        t.start()

    done = 0
    while done < len(objects):
        try:
            position, error = done_q.get(timeout=1)
        except Empty:
            continue
        status = 'error' if error is not None else 'done'
        write_out_msg(stream, lines, msg_index(objects[position]), msg, status=status)
        done += 1

    if errors:
        stream.write("\n")
        for position in sorted(errors):
            stream.write("ERROR: for {}  {} \n".format(msg_index(objects[position]), errors[position]))
        raise errors[min(errors)]

    return results


def write_out_msg(stream, lines, msg_index, msg, status="done"):
    """
    Using special ANSI code characters we can write out the msg over the top of
    a previous status message, if it exists.
    """
    obj_index = msg_index
    if msg_index in lines:
        position = lines.index(obj_index)
        diff = len(lines) - position
        # move up
        stream.write("%c[%dA" % (27, diff))
        # erase
        stream.write("%c[2K\r" % 27)
        stream.write("{} {}... {}\n".format(msg, obj_index, status))
        # move back down
        stream.write("%c[%dB" % (27, diff))
    else:
        lines.append(obj_index)
        stream.write("{} {}... \r\n".format(msg, obj_index))

    stream.flush()


def json_hash(obj):
    dump = json.dumps(obj, sort_keys=True, separators=(',', ':'))
    h = hashlib.sha256()
    h.update(dump.encode('utf-8'))
    return h.hexdigest()


def atomic_write(path, text):
    """
    Write text to a sibling temp file and rename it over path, so readers
    never see a partial file.
    """
    directory = mkdir(os.path.dirname(os.path.abspath(path)))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix='.%s.' % os.path.basename(path))
    try:
        with os.fdopen(fd, 'w', newline='\n') as fh:
            fh.write(text)
        os.replace(tmp, path)
    except Exception:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise
    log.debug("wrote %s", path)


def mkdir(path):
    if not os.path.isdir(path):
        os.makedirs(path)
    return path

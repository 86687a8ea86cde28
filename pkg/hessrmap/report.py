# -*- coding: utf-8 -*-
# This file is part of hessrmap

"""
Check records and the JSON/CSV report writers.

Every number in a report is written as a decimal string (``%.12e`` for
reals), keys are sorted and nothing time-dependent is recorded, so a report
is byte-stable for a fixed specification and seed.

"""

import csv
import json
import hashlib
import logging
from numbers import Integral, Real
from pathlib import Path

import numpy as np

from . import __version__
from .runconfig import rcParams

__all__ = ['CheckRecord', 'Report', 'PASS', 'FAIL', 'SKIPPED', 'encode', 'digest']
LOG = logging.getLogger(__name__)

PASS = 'pass'
FAIL = 'fail'
SKIPPED = 'skipped'
STATUSES = (PASS, FAIL, SKIPPED)
CSV_COLUMNS = ('name', 'point', 'status', 'residual', 'tolerance', 'message')


def _real(value) -> str:
    return format(float(value), '.12e')


def encode(value):
    """Recursively turn numbers (and arrays of numbers) into decimal strings."""
    if value is None or isinstance(value, (bool, np.bool_, str)):
        return bool(value) if isinstance(value, np.bool_) else value
    if isinstance(value, Integral):
        return str(int(value))
    if isinstance(value, Real):
        return _real(value)
    if isinstance(value, np.ndarray):
        return encode(value.tolist())
    if isinstance(value, dict):
        return {str(k): encode(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [encode(v) for v in value]
    raise TypeError("Cannot encode %r in a report" % (value,))


def digest(value) -> str:
    """Short sha256 digest of an array rendered at report precision."""
    if value is None:
        return None
    arr = np.asarray(value, dtype=float)
    text = json.dumps({'shape': list(arr.shape), 'values': encode(arr.ravel())})
    return 'sha256:' + hashlib.sha256(text.encode('utf-8')).hexdigest()[:16]


class CheckRecord:
    """
    Outcome of one check at one point.

    ``closed`` and ``oracle`` hold the compared values; only their digests are
    serialized.  ``values`` carries extra reported quantities.

    """
    __slots__ = ('name', 'point', 'status', 'residual', 'tolerance', 'closed', 'oracle',
                 'values', 'message')

    def __init__(self, name, point, status, residual=None, tolerance=None, closed=None,
                 oracle=None, values=None, message=None):
        if status not in STATUSES:
            raise ValueError("Invalid record status %r" % status)
        self.name = name
        self.point = point
        self.status = status
        self.residual = residual
        self.tolerance = tolerance
        self.closed = closed
        self.oracle = oracle
        self.values = dict(values or {})
        self.message = message

    @classmethod
    def compare(cls, name, point, residual, tolerance, closed=None, oracle=None, values=None,
                message=None) -> 'CheckRecord':
        status = PASS if residual <= tolerance else FAIL
        return cls(name, point, status, residual, tolerance, closed, oracle, values, message)

    @classmethod
    def skipped(cls, name, point, message) -> 'CheckRecord':
        return cls(name, point, SKIPPED, message=message)

    @classmethod
    def failed(cls, name, point, message, values=None) -> 'CheckRecord':
        return cls(name, point, FAIL, values=values, message=message)

    @property
    def passed(self) -> bool:
        return self.status == PASS

    @property
    def sort_key(self):
        return self.name, self.point

    def to_json(self) -> dict:
        return {'name': self.name,
                'point': encode(self.point),
                'status': self.status,
                'residual': encode(self.residual),
                'tolerance': encode(self.tolerance),
                'closed': digest(self.closed),
                'oracle': digest(self.oracle),
                'values': encode(self.values),
                'message': self.message}

    def __repr__(self):
        return "<CheckRecord(%s[%s] %s residual=%s)>" % (self.name, self.point, self.status,
                                                          self.residual)


class Report:
    def __init__(self, command, records=(), meta=None):
        self.command = command
        self.records = sorted(records, key=lambda r: r.sort_key)
        self.meta = dict(meta or {})

    def extend(self, records):
        self.records = sorted(list(self.records) + list(records), key=lambda r: r.sort_key)

    @property
    def summary(self) -> dict:
        counts = {status: 0 for status in STATUSES}
        for record in self.records:
            counts[record.status] += 1
        counts['total'] = len(self.records)
        return counts

    @property
    def exit_code(self) -> int:
        return 1 if self.summary[FAIL] else 0

    def to_json(self) -> dict:
        return {'schema': rcParams['report.schema'] or 'hessrmap.report/1',
                'version': __version__,
                'command': self.command,
                'meta': encode(self.meta),
                'summary': encode(self.summary),
                'records': [r.to_json() for r in self.records]}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2) + '\n'

    def write(self, path):
        path = Path(path)
        LOG.info("Writing %s report (%d records) to %s", self.command, len(self.records), path)
        with path.open('w', encoding='utf-8', newline='\n') as fd:
            fd.write(self.dumps())

    def write_csv(self, path):
        path = Path(path)
        LOG.info("Writing CSV summary to %s", path)
        with path.open('w', encoding='utf-8', newline='') as fd:
            writer = csv.DictWriter(fd, fieldnames=CSV_COLUMNS, lineterminator='\n')
            writer.writeheader()
            for record in self.records:
                row = record.to_json()
                writer.writerow({key: '' if row[key] is None else row[key]
                                 for key in CSV_COLUMNS})

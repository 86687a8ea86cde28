# -*- coding: utf-8 -*-

import csv
import json

import numpy as np
import pytest

from hessrmap.report import CheckRecord, Report, encode, digest, PASS, FAIL, SKIPPED


def test_encode_numbers_as_strings():
    assert '2' == encode(2)
    assert '5.000000000000e-01' == encode(0.5)
    assert ['1', '2.500000000000e+00'] == encode([1, 2.5])
    assert {'a': ['0.000000000000e+00']} == encode({'a': np.zeros(1)})
    assert encode(None) is None
    assert encode(np.bool_(True)) is True
    assert 'text' == encode('text')
    with pytest.raises(TypeError):
        encode(object())


def test_digest():
    a = np.arange(4.0).reshape(2, 2)
    assert digest(a) == digest(a.copy())
    assert digest(a) != digest(a.T)
    assert digest(a).startswith('sha256:')
    assert digest(None) is None


def test_record_status():
    assert PASS == CheckRecord.compare('x', 0, 1e-9, 1e-8).status
    assert FAIL == CheckRecord.compare('x', 0, 1e-7, 1e-8).status
    assert SKIPPED == CheckRecord.skipped('x', 0, 'not special real').status
    failed = CheckRecord.failed('domain.base', 3, 'degenerate', values={'det': 0.0})
    assert not failed.passed
    assert {'det': '0.000000000000e+00'} == failed.to_json()['values']
    with pytest.raises(ValueError):
        CheckRecord('x', 0, 'maybe')


def test_report_orders_and_counts():
    records = [CheckRecord.compare('b', 1, 0.0, 1.0), CheckRecord.compare('b', 0, 2.0, 1.0),
               CheckRecord.skipped('a', 0, 'skip')]
    report = Report('verify', records)
    assert [('a', 0), ('b', 0), ('b', 1)] == [r.sort_key for r in report.records]
    assert {PASS: 1, FAIL: 1, SKIPPED: 1, 'total': 3} == report.summary
    assert 1 == report.exit_code
    passing = Report('verify', [records[0], records[2]])
    assert 0 == passing.exit_code
    passing.extend([records[1]])
    assert 1 == passing.exit_code


def test_report_json_is_stable(outdir):
    records = [CheckRecord.compare('a', 0, 1e-9, 1e-8, closed=np.eye(2), oracle=np.eye(2),
                                   values={'det': 2.0})]
    report = Report('analyze', records, meta={'seed': 42})
    text = report.dumps()
    assert text == Report('analyze', list(records), meta={'seed': 42}).dumps()
    obj = json.loads(text)
    assert 'hessrmap.report/1' == obj['schema']
    assert '42' == obj['meta']['seed']
    assert '1' == obj['summary']['pass']
    record = obj['records'][0]
    assert '1.000000000000e-09' == record['residual']
    assert record['closed'] == record['oracle']

    path = outdir.joinpath('report.json')
    report.write(path)
    assert text == path.read_text()


def test_report_csv(outdir):
    report = Report('rmap', [CheckRecord.compare('a', 0, 0.5, 1.0),
                             CheckRecord.skipped('b', 1, 'not special real')])
    path = outdir.joinpath('report.csv')
    report.write_csv(path)
    with path.open() as fd:
        rows = list(csv.DictReader(fd))
    assert ['a', 'b'] == [row['name'] for row in rows]
    assert '' == rows[1]['residual']
    assert 'not special real' == rows[1]['message']

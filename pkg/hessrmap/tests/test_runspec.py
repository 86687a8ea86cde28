# -*- coding: utf-8 -*-

import numpy as np
import pytest

from hessrmap.errors import InputError
from hessrmap.bundle import BundlePoint
from hessrmap.runspec import RunSpec, load_json, load_points, random_cubic_chart, sample_points

STU = {"dimension": 3, "terms": [{"exponents": [1, 1, 1], "num": 1, "den": 1}]}


def test_explicit_points(rcParams):
    spec = RunSpec.from_json({'chart': {'potential': STU}, 'points': [[1, 1, 1], [1, 2, 1]]},
                             config=rcParams)
    assert 3 == spec.chart.dimension
    assert 2 == len(spec.points)
    assert [BundlePoint([1, 1, 1]), BundlePoint([1, 2, 1])] == spec.bundle_points
    assert np.array_equal([1.0, 0.0, 0.0], spec.ricci_x)
    assert np.array_equal(np.full(3, 0.5), spec.u0_prime)
    assert 'richardson_4th' == spec.oracle.scheme


def test_bundle_points_fill_base_points(rcParams):
    obj = {'chart': {'potential': STU}, 'bundle_points': [{'x': [1, 1, 1], 'u': [0, 1, 0]}]}
    spec = RunSpec.from_json(obj, config=rcParams)
    assert np.array_equal([1.0, 1.0, 1.0], spec.points[0])
    assert np.array_equal([0.0, 1.0, 0.0], spec.bundle_points[0].u)


def test_no_points_is_invalid(rcParams):
    with pytest.raises(InputError):
        RunSpec.from_json({'chart': {'potential': STU}, 'points': []}, config=rcParams)


@pytest.mark.parametrize("obj, where", [
    ([], 'spec'),
    ({'chart': {'potential': STU}, 'points': [[1, 1, 1]], 'colour': 1}, 'spec'),
    ({'points': [[1, 1, 1]]}, 'spec.chart'),
    ({'chart': {'potential': STU}, 'points': [[1, 1]]}, 'spec.points[0]'),
    ({'chart': {'potential': STU}, 'points': [[1, 1, 1]], 'seed': -1}, 'spec.seed'),
    ({'chart': {'potential': STU}, 'points': [[1, 1, 1]], 'oracle': {'scheme': 'x'}},
     'oracle.scheme'),
    ({'chart': {'potential': STU}, 'sample': {'count': 2}}, 'spec.sample'),
    ({'chart': {'random_cubic': {'dimension': 2}}, 'points': [[0, 0]]},
     'spec.chart.random_cubic'),
    ({'chart': {'potential': STU}, 'points': [[1, 1, 1]], 'commands': ['plot']},
     'spec.commands'),
    ({'chart': {'potential': STU}, 'points': [[1, 1, 1]], 'reflection': {'u0': [1]}},
     'spec.reflection.u0'),
    ({'chart': {'random_cubic': {'dimension': 2}}, 'seed': 1,
      'sample': {'cond_cap': 'big'}}, 'spec.sample.cond_cap'),
    ({'chart': {'random_cubic': {'dimension': 2}}, 'seed': 1,
      'sample': {'cond_cap': 0.5}}, 'spec.sample.cond_cap'),
    ({'chart': {'random_cubic': {'dimension': 2}}, 'seed': 1,
      'sample': {'max_rejections': True}}, 'spec.sample.max_rejections'),
    ({'chart': {'random_cubic': {'dimension': 2}}, 'seed': 1,
      'sample': {'center': [0, 0, 0]}}, 'spec.sample.center'),
    ({'chart': {'random_cubic': {'dimension': 2}}, 'seed': 1,
      'sample': {'box': -0.1}}, 'spec.sample.box'),
    ({'chart': {'random_cubic': {'dimension': 2}}, 'seed': 1,
      'sample': {'box': [[0, 1]]}}, 'spec.sample.box'),
])
def test_invalid_specs(rcParams, obj, where):
    with pytest.raises(InputError) as exc:
        RunSpec.from_json(obj, config=rcParams)
    assert where == exc.value.where


def test_random_cubic_is_seeded(rcParams):
    obj = {'chart': {'random_cubic': {'dimension': 3}}, 'sample': {'count': 4}, 'seed': 42}
    first = RunSpec.from_json(obj, config=rcParams)
    second = RunSpec.from_json(obj, config=rcParams)
    assert first.chart == second.chart
    assert first.chart.is_special_real()
    assert all(np.array_equal(a, b) for a, b in zip(first.points, second.points))
    assert 4 == len(first.points)
    other = RunSpec.from_json(obj, config=rcParams, seed=7)
    assert 7 == other.seed


def test_sampling_with_fibers(rcParams):
    obj = {'chart': {'random_cubic': {'dimension': 2}}, 'points': [[0.0, 0.1]],
           'sample': {'count': 3, 'fiber_box': 2.0}, 'seed': 3}
    spec = RunSpec.from_json(obj, config=rcParams)
    assert 4 == len(spec.points)
    assert 4 == len(spec.bundle_points)
    assert np.array_equal([0.0, 0.0], spec.bundle_points[0].u)
    assert all(np.all(np.abs(bp.u) <= 2.0) for bp in spec.bundle_points[1:])


def test_sample_points_in_box():
    rng = np.random.default_rng(5)
    chart = random_cubic_chart(rng, 4)
    points = sample_points(chart, rng, 10, [[-0.1, 0.1]] * 4)
    assert 10 == len(points)
    for p in points:
        assert np.all(np.abs(p) <= 0.1)
        assert chart.in_domain(p)


def test_sample_points_rejection_limit(cubic1):
    rng = np.random.default_rng(0)
    with pytest.raises(InputError):
        sample_points(cubic1, rng, 1, [[0.0, 0.0]], max_rejections=10)


def test_cli_overrides(rcParams):
    obj = {'chart': {'potential': STU}, 'points': [[1, 1, 1]], 'oracle': {'tol_rel': 1e-5}}
    spec = RunSpec.from_json(obj, config=rcParams, points=[[1, 2, 3], [2, 2, 2]],
                             oracle_overrides={'scheme': 'central_2nd'}, perturb=1e-3,
                             output='out.json')
    assert 2 == len(spec.points)
    assert 'central_2nd' == spec.oracle.scheme
    assert 1e-5 == spec.oracle.tol_rel
    assert 1e-3 == spec.perturb
    assert 'out.json' == spec.output


def test_load_points():
    base, bundle = load_points({'bundle_points': [{'x': [1.0], 'u': [2.0]}]}, 1)
    assert [] == base
    assert [BundlePoint([1.0], [2.0])] == bundle
    with pytest.raises(InputError):
        load_points({'points': [[1.0]], 'extra': []}, 1)


def test_load_json_errors(specfile):
    with pytest.raises(InputError) as exc:
        load_json(specfile('{"chart": \n  {"potential": }'))
    assert exc.value.where.startswith('line 2')
    with pytest.raises(InputError):
        load_json('/nonexistent/hessrmap/spec.json')


def test_summary_is_plain_data(rcParams):
    spec = RunSpec.from_json({'chart': {'potential': STU}, 'points': [[1, 1, 1]], 'seed': 1},
                             config=rcParams)
    summary = spec.summary()
    assert 3 == summary['dimension']
    assert [[1.0, 1.0, 1.0]] == summary['points']
    assert 1 == summary['seed']

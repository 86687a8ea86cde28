# -*- coding: utf-8 -*-

import json
import threading
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from hessrmap.dispatcher import Dispatcher, CheckContext
from hessrmap.hessian import HessianChart
from hessrmap.oracle import OracleConfig
from hessrmap.polynomial import PolynomialPotential
from hessrmap.runconfig import _ConfigParams
from hessrmap.runspec import random_cubic_chart, sample_points


def potential(dimension, terms):
    """Terms as {exponents: coefficient}, coefficients given as strings or ints."""
    return PolynomialPotential(dimension, {k: Fraction(v) for k, v in terms.items()})


@pytest.fixture(scope="module")
def cfg_dict():
    return {
        "version": 0.3,
        "chart": {"degeneracy_tol": 1e-10, "max_invariant_dimension": 8},
        "oracle": {
            "base_step": 1e-4,
            "scheme": "richardson_4th",
            "tol_abs": 1e-8,
            "tol_rel": 1e-6,
            "nested_step_factor": 10.0
        },
        "sampling": {"box": 0.2, "fiber_box": 1.0, "cond_cap": 1e6, "max_rejections": 1000},
        "tolerances": {"exact": 1e-12, "roundtrip": 1e-10},
        "dispatch": {"workers": 2},
        "logging": {"logdir": None},
        "report": {"schema": "hessrmap.report/1"}
    }


@pytest.fixture
def rcParams(cfg_dict):
    return _ConfigParams(config=cfg_dict)


@pytest.fixture
def cfg():
    return OracleConfig()


@pytest.fixture
def stu():
    """h = x1 x2 x3"""
    return HessianChart(potential(3, {(1, 1, 1): 1}))


@pytest.fixture
def cubic1():
    """h = x^3 / 6"""
    return HessianChart(potential(1, {(3,): '1/6'}))


@pytest.fixture
def quartic1():
    """h = x^4 / 24"""
    return HessianChart(potential(1, {(4,): '1/24'}))


@pytest.fixture
def quartic2():
    """h = x1^4 / 24 + x1 x2^2 / 2 + x2^2: a two dimensional chart with d^4 h != 0"""
    return HessianChart(potential(2, {(4, 0): '1/24', (1, 2): '1/2', (0, 2): 1}))


@pytest.fixture
def quadratic3():
    """h = 1/2 sum x_i^2"""
    return HessianChart(potential(3, {(2, 0, 0): '1/2', (0, 2, 0): '1/2', (0, 0, 2): '1/2'}))


@pytest.fixture(params=range(20))
def random_cubic(request):
    """Twenty seeded random cubic charts of dimension 1 to 5, five well-conditioned points each."""
    rng = np.random.default_rng(1000 + request.param)
    chart = random_cubic_chart(rng, 1 + request.param % 5)
    return chart, sample_points(chart, rng, 5, 0.2)


@pytest.fixture
def sigExit():
    sig = threading.Event()
    yield sig
    sig.set()


@pytest.fixture
def registry(cfg):
    """An idle dispatcher with an empty identity registry."""
    Dispatcher.detach_all()
    disp = Dispatcher(CheckContext(None, cfg, "analyze"))
    yield disp
    if disp.is_alive():
        disp.exit(join=True)
    disp.detach_all()


@pytest.fixture
def specfile(tmpdir):
    """Write a run specification to a temporary file and return its path."""
    def _write(obj, name='spec.json'):
        path = Path(str(tmpdir)).joinpath(name)
        with path.open('w') as fd:
            if isinstance(obj, str):
                fd.write(obj)
            else:
                json.dump(obj, fd)
        return path
    return _write


@pytest.fixture
def outdir(tmpdir):
    return Path(str(tmpdir.mkdir('out')))

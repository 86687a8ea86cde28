# -*- coding: utf-8 -*-

import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from hessrmap.errors import InputError
from hessrmap.polynomial import (PolynomialPotential, Monomial, derivative_tensor, evaluate,
                                 canonical_cubic, affine_pullback, MAX_DEGREE, MAX_DIMENSION)

from .conftest import potential


def _terms(dimension, max_exp=3):
    exps = st.tuples(*[st.integers(0, max_exp)] * dimension)
    coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=12)
    return st.dictionaries(exps, coeffs, max_size=6)


@st.composite
def polynomials(draw, dimension=None):
    n = dimension or draw(st.integers(1, 3))
    return PolynomialPotential(n, draw(_terms(n)))


def test_like_terms_merge_and_zeros_drop():
    h = PolynomialPotential(2, [Monomial((1, 0), 2), Monomial((1, 0), -2), Monomial((0, 2), 3)])
    assert 1 == len(h.terms)
    assert Fraction(3) == h.coefficient((0, 2))
    assert PolynomialPotential(2).is_zero()
    assert 0 == PolynomialPotential(2).degree


def test_degree_and_homogeneity():
    h = potential(3, {(1, 1, 1): 1})
    assert 3 == h.degree
    assert h.is_homogeneous(3)
    assert not (h + 1).is_homogeneous(3)
    assert 3 == h.homogeneous_part(3).degree


def test_partial_exact():
    h = potential(1, {(4,): '1/24'})
    assert potential(1, {(3,): '1/6'}) == h.partial(0)
    assert potential(1, {(0,): 1}) == h.partial(0).partial(0).partial(0).partial(0)
    assert h.partial(0).partial(0).partial(0).partial(0).partial(0).is_zero()
    with pytest.raises(InputError):
        h.partial(1)


def test_evaluate_is_exact():
    h = potential(2, {(1, 1): '1/3', (2, 0): '1/2'})
    assert Fraction(1, 3) * Fraction(1, 2) * 3 + Fraction(1, 8) == h.evaluate([0.5, 3])
    assert pytest.approx(0.625) == evaluate(h, [0.5, 3])


def test_derivative_tensor_values():
    stu = potential(3, {(1, 1, 1): 1})
    g = derivative_tensor(stu, 2, [1, 1, 1])
    assert np.array_equal(np.ones((3, 3)) - np.eye(3), g)
    S = derivative_tensor(stu, 3, [0.3, -2, 5])
    assert 1.0 == S[0, 1, 2] == S[2, 1, 0] == S[1, 0, 2]
    assert 0.0 == S[0, 0, 1]
    q = potential(1, {(4,): '1/24'})
    assert np.array_equal([[[2.0]]], derivative_tensor(q, 3, [2]))
    assert np.array_equal([[3.0]], derivative_tensor(potential(1, {(3,): '1/6'}), 2, [3]))


@settings(max_examples=40, deadline=None)
@given(polynomials(), st.data())
def test_derivative_tensor_totally_symmetric(h, data):
    p = data.draw(st.lists(st.floats(-2, 2), min_size=h.dimension, max_size=h.dimension))
    T = derivative_tensor(h, 3, p)
    for axes in [(1, 0, 2), (0, 2, 1), (2, 1, 0), (1, 2, 0)]:
        assert np.array_equal(T, T.transpose(axes))


@settings(max_examples=40, deadline=None)
@given(polynomials(), polynomials())
def test_partial_is_linear(f, g):
    if f.dimension != g.dimension:
        return
    for i in range(f.dimension):
        assert (f + g).partial(i) == f.partial(i) + g.partial(i)
        assert (f * g).partial(i) == f.partial(i) * g + f * g.partial(i)


@settings(max_examples=25, deadline=None)
@given(polynomials())
def test_json_wire_form(h):
    text = json.dumps(h.to_json())
    assert h == PolynomialPotential.loads(text)


@pytest.mark.parametrize("obj, where", [
    ({"dimension": 0, "terms": []}, "potential.dimension"),
    ({"dimension": MAX_DIMENSION + 1, "terms": []}, "potential.dimension"),
    ({"dimension": 2, "terms": {}}, "potential.terms"),
    ({"dimension": 2, "terms": [{"exponents": [1], "num": 1}]}, "potential.terms[0].exponents"),
    ({"dimension": 1, "terms": [{"exponents": [-1], "num": 1}]}, "potential.terms[0].exponents"),
    ({"dimension": 1, "terms": [{"exponents": [MAX_DEGREE + 1], "num": 1}]},
     "potential.terms[0].exponents"),
    ({"dimension": 1, "terms": [{"exponents": [1], "num": 1.5}]}, "potential.terms[0].num"),
    ({"dimension": 1, "terms": [{"exponents": [1], "num": 1, "den": 0}]},
     "potential.terms[0].den"),
    ({"dimension": 1, "terms": [{"exponents": [2], "num": 1}, {"exponents": [2], "num": 3}]},
     "potential.terms[1]"),
])
def test_from_json_errors_carry_location(obj, where):
    with pytest.raises(InputError) as exc:
        PolynomialPotential.from_json(obj)
    assert where == exc.value.where
    assert where in str(exc.value)


def test_loads_reports_line_and_column():
    with pytest.raises(InputError) as exc:
        PolynomialPotential.loads('{"dimension": 1,\n "terms": [}')
    assert exc.value.where.startswith("line 2 column")


def test_canonical_cubic():
    S = np.zeros((2, 2, 2), dtype=int)
    S[0, 0, 0] = 6
    for perm in [(0, 1, 1), (1, 0, 1), (1, 1, 0)]:
        S[perm] = 2
    b = [[2, 0], [0, 4]]
    h = canonical_cubic(S, b)
    assert Fraction(1) == h.coefficient((3, 0))
    assert Fraction(1) == h.coefficient((1, 2))
    assert Fraction(1) == h.coefficient((2, 0))
    assert Fraction(2) == h.coefficient((0, 2))
    p = [0.25, -0.5]
    assert np.allclose(derivative_tensor(h, 3, p), S)
    assert np.allclose(derivative_tensor(h, 2, [0, 0]), b)


def test_canonical_cubic_rejects_asymmetric():
    S = np.zeros((2, 2, 2), dtype=int)
    S[0, 0, 1] = 1
    with pytest.raises(InputError):
        canonical_cubic(S, np.eye(2, dtype=int))
    with pytest.raises(InputError):
        canonical_cubic(np.zeros((2, 2, 2), dtype=int), [[1, 1], [0, 1]])


def test_affine_pullback():
    h = potential(2, {(1, 1): 1})
    A = [[1, 1], [0, 2]]
    c = [1, 0]
    pulled = affine_pullback(h, A, c)
    for p in ([0.5, 0.25], [-1.0, 2.0]):
        image = np.array(A, dtype=float) @ p + c
        assert h.evaluate(image) == pulled.evaluate(p)
    with pytest.raises(InputError):
        affine_pullback(h, [[1, 1], [1, 1]], c)

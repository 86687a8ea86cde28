# -*- coding: utf-8 -*-

import threading

import numpy as np
import pytest

from hessrmap import oracle
from hessrmap.errors import DomainError, InputError
from hessrmap.hessian import HessianChart, commutators
from hessrmap.runspec import random_cubic_chart, sample_points

from .conftest import potential

STU_POINT = [1.0, 1.0, 1.0]


def test_metric_at(stu, cubic1, quadratic3):
    assert np.array_equal(np.eye(3), quadratic3.metric_at([0.3, -7.0, 2.0]))
    assert np.array_equal(np.ones((3, 3)) - np.eye(3), stu.metric_at(STU_POINT))
    assert np.array_equal([[3.0]], cubic1.metric_at([3.0]))


def test_in_domain(stu, cubic1):
    assert not cubic1.in_domain([0.0])
    assert cubic1.in_domain([1.0])
    assert not stu.in_domain([1.0, 1.0, 0.0])
    assert stu.in_domain(STU_POINT)
    with pytest.raises(DomainError) as exc:
        cubic1.check_domain([0.0])
    assert 0.0 == exc.value.det


def test_cubic_form_and_special_real(stu, cubic1, quartic1, quadratic3):
    assert 0.0 == oracle.sup_norm(quadratic3.cubic_form_at([1.0, 2.0, 3.0]))
    assert np.array_equal([[[1.0]]], cubic1.cubic_form_at([5.0]))
    assert np.array_equal([[[2.0]]], quartic1.cubic_form_at([2.0]))
    assert stu.is_special_real()
    assert quadratic3.is_special_real()
    assert not quartic1.is_special_real()


def test_signature(stu, quadratic3):
    assert (1, 2, 0) == stu.signature(STU_POINT)
    assert (3, 0, 0) == quadratic3.signature([0.0, 0.0, 0.0])


def test_shat(cubic1, quadratic3, stu):
    assert pytest.approx(0.5) == cubic1.shat_at([1.0], [1.0])[0, 0]
    assert 0.0 == oracle.sup_norm(quadratic3.shat_basis([0.1, 0.2, 0.3]))
    p = [1.0, 1.2, 0.8]
    A = stu.shat_basis(p)
    X, Y = np.array([0.3, -1.0, 2.0]), np.array([1.5, 0.5, -0.25])
    assert np.allclose(stu.shat_at(p, X) @ Y, stu.shat_at(p, Y) @ X, atol=1e-13)
    gA = np.einsum('kl,ilj->ikj', stu.metric_at(p), A)
    assert np.allclose(gA, gA.transpose(0, 2, 1), atol=1e-14)
    with pytest.raises(DomainError):
        cubic1.shat_basis([0.0])


def test_christoffels(cubic1, random_cubic):
    assert pytest.approx(0.5) == cubic1.christoffels_at([1.0], 'levi_civita')[0, 0, 0]
    chart, points = random_cubic
    for p in points:
        flat = chart.christoffels_at(p, 'flat')
        lc = chart.christoffels_at(p, 'levi_civita')
        conj = chart.christoffels_at(p, 'conjugate')
        assert 0.0 == oracle.sup_norm(flat)
        assert np.array_equal(conj, 2.0 * lc - flat)
    with pytest.raises(InputError):
        cubic1.christoffels_at([1.0], 'sasaki')


def test_levi_civita_against_oracle(cfg, random_cubic):
    chart, points = random_cubic
    for p in points:
        fd = oracle.christoffels_of_metric(chart.metric_field(), p, cfg)
        assert cfg.accepts(chart.christoffels_at(p, 'levi_civita'), fd)


def test_curvature_closed_forms(cubic1, quadratic3):
    assert 0.0 == oracle.sup_norm(cubic1.curvature_at([2.0]))
    assert 0.0 == oracle.sup_norm(quadratic3.curvature_at([0.1, 0.2, 0.3]))
    assert (3, 3, 3, 3) == quadratic3.curvature_at([0.0] * 3, 'conjugate').shape


def test_stu_curvature_against_oracle(cfg, stu):
    closed = stu.curvature_at(STU_POINT)
    fd = oracle.riemann_curvature(stu.metric_field(), STU_POINT, cfg)
    assert cfg.accepts(closed, fd)
    assert oracle.sup_norm(closed) > 0.1


def test_base_curvature_and_conjugate_flatness(cfg, random_cubic):
    chart, points = random_cubic
    for p in points:
        fd = oracle.riemann_curvature(chart.metric_field(), p, cfg)
        assert cfg.accepts(chart.curvature_at(p, 'levi_civita'), fd)
        conj = oracle.curvature_of_connection(chart.christoffel_field('conjugate'), p, cfg)
        assert oracle.sup_norm(conj) < 1e-6


def test_commutators_antisymmetric():
    rng = np.random.default_rng(7)
    A = rng.normal(size=(3, 2, 2))
    C = commutators(A)
    assert np.allclose(C, -C.transpose(1, 0, 2, 3))
    assert np.allclose(C[0, 1], A[0] @ A[1] - A[1] @ A[0])


def test_ds_identities(cfg, quadratic3, random_cubic):
    assert (0.0, 0.0) == tuple(quadratic3.ds_identities_at([0.1, 0.2, 0.3], cfg))
    chart, points = random_cubic
    for p in points:
        residuals = chart.ds_identities_at(p, cfg)
        assert residuals.d_levi_civita < 1e-6
        assert residuals.d_flat < 1e-6


def test_ds_identities_quartic(cfg, quartic2):
    residuals = quartic2.ds_identities_at([1.0, 0.5], cfg)
    assert residuals.d_flat < 1e-6


def test_relative_invariant(stu, cubic1, quadratic3):
    assert potential(3, {(1, 1, 1): 2}) == stu.relative_invariant()
    assert potential(1, {(1,): 1}) == cubic1.relative_invariant()
    assert potential(3, {(0, 0, 0): 1}) == quadratic3.relative_invariant()
    assert stu.relative_invariant() is stu.relative_invariant()


def test_relative_invariant_matches_det(random_cubic):
    chart, points = random_cubic
    delta = chart.relative_invariant()
    assert delta.degree <= chart.dimension
    for p in points:
        det = np.linalg.det(chart.metric_at(p))
        assert pytest.approx(det, rel=1e-12) == float(delta.evaluate(p))


def test_relative_invariant_dimension_six():
    rng = np.random.default_rng(11)
    chart = random_cubic_chart(rng, 6)
    delta = chart.relative_invariant()
    assert delta.degree <= 6
    for p in sample_points(chart, rng, 3, 0.2):
        det = np.linalg.det(chart.metric_at(p))
        assert pytest.approx(det, rel=1e-10) == float(delta.evaluate(p))


def test_relative_invariant_shared_across_threads():
    chart = random_cubic_chart(np.random.default_rng(12), 4)
    results = []
    threads = [threading.Thread(target=lambda: results.append(chart.relative_invariant()))
               for _ in range(4)]
    for thread in threads:
        thread.start()
    for thread in threads:
        thread.join()
    assert 4 == len(results)
    assert all(r is results[0] for r in results)


def test_metric_field_leaves_domain(cfg, stu):
    # the stencil at x3 = h reaches the x3 = 0 face
    with pytest.raises(DomainError):
        oracle.christoffels_of_metric(stu.metric_field(), [1.0, 1.0, 1e-4], cfg)
    with pytest.raises(DomainError):
        stu.metric_field()([1.0, 1.0, 0.0])


def test_gradient_commutators(cfg, cubic1, quadratic3, random_cubic):
    assert 0.0 == cubic1.gradient_commutator_check([1.0], cfg)
    assert quadratic3.gradient_commutator_check([0.1, 0.2, 0.3], cfg) < 1e-12
    chart, points = random_cubic
    for p in points:
        assert chart.gradient_commutator_check(p, cfg) < 1e-5


def test_gradient_commutators_leave_domain(cfg, cubic1):
    with pytest.raises(DomainError):
        cubic1.gradient_commutator_check([1e-4], cfg)


def test_p_tensor(quartic1, stu):
    assert pytest.approx(2.0) == quartic1.p_tensor_at([1.0])[0, 0, 0, 0]
    assert 0.0 == oracle.sup_norm(stu.p_tensor_at(STU_POINT))


def test_chart_json(stu):
    obj = stu.to_json()
    assert stu == HessianChart.from_json(obj)
    with pytest.raises(InputError) as exc:
        HessianChart.from_json({'potential': obj['potential'], 'mode': 'x'})
    assert 'chart' == exc.value.where
    with pytest.raises(InputError):
        HessianChart.from_json({'degeneracy_tol': 1e-3})
    with pytest.raises(InputError):
        HessianChart(stu.potential, degeneracy_tol=-1.0)

# -*- coding: utf-8 -*-
# This file is part of hessrmap

"""Identities of the base Hessian chart."""

import logging

import numpy as np

from .. import oracle
from ..polynomial import derivative_tensor
from ..report import CheckRecord
from . import Identity

__all__ = ['PointData', 'LeviCivitaCurvature', 'ConjugateFlatness', 'Christoffels',
           'ShapeSymmetry', 'ShapeExteriorDerivatives', 'RelativeInvariant',
           'GradientCommutators', 'ConjugateDuality', 'GradientFields', 'SpecialReal']
LOG = logging.getLogger(__name__)


class PointData(Identity):
    """Signature, determinant, relative invariant and S^ basis of g at a point."""
    name = 'base.point_data'
    commands = ('analyze',)

    def check(self, context, index, point):
        chart = context.chart
        det, cond = chart.domain_estimates(point)
        signature = chart.signature(point)
        values = {'signature': list(signature), 'det': det, 'cond': cond,
                  'special_real': chart.is_special_real(),
                  'relative_invariant': None,
                  'shat': chart.shat_basis(point)}
        if chart.dimension <= context.max_invariant_dimension:
            values['relative_invariant'] = float(chart.relative_invariant().evaluate(point))
        yield self.bound(index, signature[2], 0, values=values, closed=chart.metric_at(point))


class LeviCivitaCurvature(Identity):
    name = 'base.levi_civita_curvature'
    commands = ('analyze', 'verify')

    def check(self, context, index, point):
        chart = context.chart
        closed = chart.curvature_at(point, 'levi_civita')
        fd = oracle.riemann_curvature(chart.metric_field(), point, context.cfg)
        yield self.compare(context, index, closed, fd)


class ConjugateFlatness(Identity):
    name = 'base.conjugate_flatness'
    commands = ('analyze', 'verify')

    def check(self, context, index, point):
        chart = context.chart
        fd = oracle.curvature_of_connection(chart.christoffel_field('conjugate'), point,
                                            context.cfg)
        scale = oracle.sup_norm(chart.christoffels_at(point, 'conjugate'))
        yield self.bound(index, oracle.sup_norm(fd), context.cfg.tolerance(scale + scale ** 2))


class Christoffels(Identity):
    name = 'base.christoffels'

    def check(self, context, index, point):
        chart = context.chart
        lc = chart.christoffels_at(point, 'levi_civita')
        fd = oracle.christoffels_of_metric(chart.metric_field(), point, context.cfg)
        yield self.compare(context, index, lc, fd, 'levi_civita')
        relation = (chart.christoffels_at(point, 'conjugate') - 2.0 * lc
                    + chart.christoffels_at(point, 'flat'))
        yield self.bound(index, oracle.sup_norm(relation), context.exact_tol, 'conjugate')


class ShapeSymmetry(Identity):
    """``g S^_X`` is symmetric and ``S^_X Y = S^_Y X``."""
    name = 'base.shape_symmetry'

    def check(self, context, index, point):
        chart = context.chart
        g = chart.metric_at(point)
        A = chart.shat_basis(point)
        gA = np.einsum('kl,ilj->ikj', g, A)
        tol = context.exact_tol * max(1.0, oracle.sup_norm(gA))
        yield self.bound(index, oracle.sup_norm(gA - gA.transpose(0, 2, 1)), tol, 'g_symmetric')
        tol = context.exact_tol * max(1.0, oracle.sup_norm(A))
        yield self.bound(index, oracle.sup_norm(A - A.transpose(2, 1, 0)), tol, 'torsion_free')


class ShapeExteriorDerivatives(Identity):
    """``d^D S^ = 0`` and ``d^flat S^ + 2 [S^, S^] = 0``."""
    name = 'base.shape_exterior'

    def check(self, context, index, point):
        chart = context.chart
        residuals = chart.ds_identities_at(point, context.cfg)
        A = chart.shat_basis(point)
        scale = oracle.sup_norm(A)
        tol = context.cfg.tolerance(scale + scale ** 2)
        yield self.bound(index, residuals.d_levi_civita, tol, 'd_levi_civita')
        yield self.bound(index, residuals.d_flat, tol, 'd_flat')


class RelativeInvariant(Identity):
    name = 'base.relative_invariant'
    commands = ('analyze', 'verify')

    def check(self, context, index, point):
        chart = context.chart
        if chart.dimension > context.max_invariant_dimension:
            yield CheckRecord.skipped(self.name, index, "dimension above max_invariant_dimension")
            return
        delta = chart.relative_invariant()
        value = float(delta.evaluate(point))
        det, cond = chart.domain_estimates(point)
        tol = context.exact_tol * max(1.0, abs(value)) * max(1.0, cond)
        values = {'relative_invariant': value, 'det': det, 'degree': delta.degree}
        yield self.bound(index, abs(value - det), tol, values=values)
        if chart.is_special_real():
            yield self.bound(index, max(0, delta.degree - chart.dimension), 0, 'degree')


class GradientCommutators(Identity):
    name = 'base.gradient_commutators'

    def check(self, context, index, point):
        chart = context.chart
        residual = chart.gradient_commutator_check(point, context.cfg)
        ginv = chart.inverse_metric_field()(point)
        scale = oracle.sup_norm(ginv) * (1.0 + oracle.sup_norm(chart.cubic_form_at(point)))
        yield self.bound(index, residual, context.cfg.tolerance(scale ** 2))


class ConjugateDuality(Identity):
    """``X g(Y, Z) = g(flat_X Y, Z) + g(Y, conj_X Z)``"""
    name = 'base.conjugate_duality'

    def check(self, context, index, point):
        chart = context.chart
        g = chart.metric_at(point)
        flat = chart.christoffels_at(point, 'flat')
        conj = chart.christoffels_at(point, 'conjugate')
        closed = (np.einsum('ikj,kl->ijl', flat, g) + np.einsum('jk,ikl->ijl', g, conj))
        fd = oracle.fd_gradient(chart.metric_field(), point, context.cfg)
        yield self.compare(context, index, closed, fd)


class GradientFields(Identity):
    """``g(d_i, .) = d(d_i h)``: the coordinate fields are gradients of the partials of h."""
    name = 'base.gradient_fields'

    def check(self, context, index, point):
        chart = context.chart
        n = chart.dimension
        dh = oracle.TensorField(lambda q: derivative_tensor(chart.potential, 1, q), (n,),
                                name='dh')
        fd = oracle.fd_gradient(dh, point, context.cfg)
        yield self.compare(context, index, chart.metric_at(point), fd)


class SpecialReal(Identity):
    """The special real flag agrees with the vanishing of d^4 h at the point."""
    name = 'base.special_real'
    commands = ('analyze', 'verify')

    def check(self, context, index, point):
        chart = context.chart
        quartic = oracle.sup_norm(chart.quartic_form_at(point))
        special = chart.is_special_real()
        consistent = not special or quartic == 0.0
        values = {'special_real': special, 'quartic_norm': quartic}
        yield CheckRecord.compare(self.name, index, 0.0 if consistent else 1.0, 0.0,
                                  values=values)


__identities__ = [PointData, LeviCivitaCurvature, ConjugateFlatness, Christoffels,
                  ShapeSymmetry, ShapeExteriorDerivatives, RelativeInvariant,
                  GradientCommutators, ConjugateDuality, GradientFields, SpecialReal]

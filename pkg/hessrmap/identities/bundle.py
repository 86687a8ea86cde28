# -*- coding: utf-8 -*-
# This file is part of hessrmap

"""Identities of the Kähler structure the r-map puts on the tangent bundle."""

import logging

import numpy as np

from .. import bundle, oracle
from ..errors import NotInImageError
from ..report import CheckRecord
from . import Identity

__all__ = ['KahlerStructure', 'SpecialKahler', 'KahlerClosed', 'ShapeN', 'CurvatureGN',
           'CurvatureNablaN', 'RicciN', 'ExteriorN', 'Distributions', 'Reflection',
           'MetricDerivative', 'RoundTrip']
LOG = logging.getLogger(__name__)


def _scale(*arrays) -> float:
    return max(oracle.sup_norm(a) for a in arrays)


class BundleIdentity(Identity):
    target = 'bundle'
    commands = ('rmap', 'verify')


class KahlerStructure(BundleIdentity):
    """J^2 = -1, omega = gN J antisymmetric, gammaLC is the Levi-Civita connection of gN."""
    name = 'bundle.kahler_structure'

    def check(self, context, index, bp):
        chart, cfg = context.chart, context.cfg
        n = chart.dimension
        data = bundle.kahler_data_at(chart, bp)
        exact = context.exact_tol * max(1.0, oracle.sup_norm(data.gN))
        yield self.bound(index, oracle.sup_norm(data.J @ data.J + np.eye(2 * n)), exact,
                         'complex_structure')
        yield self.bound(index, oracle.sup_norm(data.omega + data.omega.T), exact,
                         'omega_antisymmetric')
        yield self.bound(index, oracle.sup_norm(data.gN - data.gN.T), exact, 'metric_symmetric')
        fiber = data.gammaLC[n:] - np.einsum('kl,ilj->ikj', data.J, data.gammaLC[:n])
        yield self.bound(index, oracle.sup_norm(fiber), exact, 'fiber_christoffels')
        gfield = bundle.metric_field(chart)
        fd = oracle.christoffels_of_metric(gfield, bp.coords, cfg)
        yield self.compare(context, index, data.gammaLC, fd, 'levi_civita')
        du = [oracle.fd_partial(gfield, bp.coords, n + a, cfg) for a in range(n)]
        yield self.bound(index, _scale(*du), cfg.tolerance(data.gN), 'u_independent')


class SpecialKahler(BundleIdentity):
    """
    The special connection is torsion free, symplectic, special and flat.

    Flatness holds only for special real charts; ``verify`` skips it on other
    charts while ``rmap`` reports it as a failure with the curvature norm.

    """
    name = 'bundle.special_kahler'

    def check(self, context, index, bp):
        chart, cfg = context.chart, context.cfg
        data = bundle.kahler_data_at(chart, bp)
        report = bundle.special_kahler_check(chart, bp, cfg)
        gamma = oracle.sup_norm(data.gammaN)
        omega = oracle.sup_norm(data.omega)
        values = {'residual': report.flatness}
        yield self.bound(index, report.torsion, context.exact_tol * max(1.0, gamma), 'torsion')
        yield self.bound(index, report.nabla_omega, cfg.tolerance(omega * (1.0 + gamma)),
                         'nabla_omega')
        yield self.bound(index, report.nabla_J_symmetry, cfg.tolerance(1.0 + gamma),
                         'nabla_J_symmetry')
        if context.command == 'verify' and not chart.is_special_real():
            yield CheckRecord.skipped(self.part('flatness'), index, "not special real")
        else:
            yield self.bound(index, report.flatness, cfg.tolerance(gamma + gamma ** 2),
                             'flatness', values=values)


class KahlerClosed(BundleIdentity):
    name = 'bundle.domega'

    def check(self, context, index, bp):
        chart = context.chart
        residual = bundle.domega_residual(chart, bp, context.cfg)
        yield self.bound(index, residual, context.cfg.tolerance(chart.cubic_form_at(bp.x)))


class ShapeN(BundleIdentity):
    """S^N anticommutes with J and is the difference of the two connections."""
    name = 'bundle.shatN'
    commands = ('verify',)

    def check(self, context, index, bp):
        chart = context.chart
        n = chart.dimension
        data = bundle.kahler_data_at(chart, bp)
        B = bundle.shatN_basis(chart, bp)
        J = data.J
        exact = context.exact_tol * max(1.0, oracle.sup_norm(B))
        anti = np.einsum('kl,ilj->ikj', J, B) + np.einsum('ikl,lj->ikj', B, J)
        yield self.bound(index, oracle.sup_norm(anti), exact, 'anticommutes')
        along_J = np.einsum('ki,kab->iab', J, B) - np.einsum('iab,bc->iac', B, J)
        yield self.bound(index, oracle.sup_norm(along_J), exact, 'along_J')
        difference = data.gammaLC - data.gammaN - B
        yield self.bound(index, oracle.sup_norm(difference), exact, 'connection_difference')
        X = np.arange(1, 2 * n + 1, dtype=float)
        linear = bundle.shatN_at(chart, bp, X) - np.einsum('i,ikj->kj', X, B)
        yield self.bound(index, oracle.sup_norm(linear), exact * 2 * n * n, 'linear')


class CurvatureGN(BundleIdentity):
    """Curvature of gN against the oracle, against -[S^N, S^N], and non-flatness for cubic cones."""
    name = 'bundle.curvature_gN'
    requires_special_real = True

    def check(self, context, index, bp):
        chart = context.chart
        closed = bundle.curvature_gN_at(chart, bp)
        fd = oracle.riemann_curvature(bundle.metric_field(chart), bp.coords, context.cfg)
        yield self.compare(context, index, closed, fd, 'oracle')
        bracket = bundle.shatN_bracket_at(chart, bp)
        yield self.bound(index, oracle.sup_norm(closed - bracket),
                         context.exact_tol * max(1.0, oracle.sup_norm(closed)), 'bracket')
        if chart.potential.is_homogeneous(3):
            norm = oracle.sup_norm(closed)
            yield self.bound(index, max(0.0, 1e-3 - norm), 0.0, 'not_flat',
                             values={'norm': norm})


class CurvatureNablaN(BundleIdentity):
    """Curvature of the special connection from P, and flatness iff d^4 h vanishes."""
    name = 'bundle.curvature_nablaN'

    def check(self, context, index, bp):
        chart, cfg = context.chart, context.cfg
        closed = bundle.curvature_nablaN_at(chart, bp)
        fd = oracle.curvature_of_connection(bundle.nablaN_field(chart), bp.coords, cfg)
        yield self.compare(context, index, closed, fd, 'oracle')
        norm = oracle.sup_norm(fd)
        quartic = oracle.sup_norm(chart.quartic_form_at(bp.x))
        flat = norm <= cfg.tolerance(closed)
        consistent = flat == (quartic == 0.0)
        yield CheckRecord.compare(self.part('flat_iff_special'), index,
                                  0.0 if consistent else 1.0, 0.0,
                                  values={'norm': norm, 'quartic_norm': quartic,
                                          'special_real': chart.is_special_real()})


class RicciN(BundleIdentity):
    name = 'bundle.ricci'

    def check(self, context, index, bp):
        chart, cfg = context.chart, context.cfg
        spec = context.spec
        n = chart.dimension
        X = spec.ricci_x if spec is not None else np.eye(n)[0]
        Y = spec.ricci_u if spec is not None else np.zeros(n)
        value = bundle.ricci_N_at(chart, bp, X, Y)
        q = bp.coords

        R = oracle.curvature_of_connection(bundle.nablaN_field(chart), q, cfg)
        yield self.compare(context, index, value.nabla, np.einsum('kjkl->jl', R), 'nablaN')

        if value.metric is None:
            for part in ('metric', 'value', 'nonnegative', 'strict', 'ricci_form'):
                yield CheckRecord.skipped(self.part(part), index, "not special real")
            return
        Rg = oracle.riemann_curvature(bundle.metric_field(chart), q, cfg)
        yield self.compare(context, index, value.metric_tensor, np.einsum('kjkl->jl', Rg),
                           'metric')
        Z = np.concatenate([X, Y])
        quadratic = Z @ value.metric_tensor @ Z
        yield self.bound(index, abs(quadratic - value.metric),
                         context.exact_tol * max(1.0, abs(value.metric)), 'value',
                         values={'ricci': value.metric})
        signature = chart.signature(bp.x)
        if signature[1] == 0 and signature[2] == 0:
            yield self.bound(index, max(0.0, -value.metric), context.exact_tol, 'nonnegative')
            kernel = n - np.linalg.matrix_rank(chart.cubic_form_at(bp.x).reshape(n, n * n))
            if kernel:
                yield CheckRecord.skipped(self.part('strict'), index,
                                          "cubic form has a nontrivial kernel")
            elif not np.any(Z):
                yield CheckRecord.skipped(self.part('strict'), index, "zero direction")
            else:
                # ric(Z, Z) > 0 for Z != 0 once X -> S_X is injective
                yield self.bound(index, 0.0 if value.metric > 0 else 1.0, 0.0, 'strict',
                                 values={'ricci': value.metric})
        else:
            for part in ('nonnegative', 'strict'):
                yield CheckRecord.skipped(self.part(part), index, "metric is indefinite")
        J = bundle.complex_structure(n)
        yield self.compare(context, index, value.ricci_form,
                           0.5 * np.einsum('kl,ablk->ab', J, Rg), 'ricci_form')


class ExteriorN(BundleIdentity):
    """``d^nablaN S^N = -2 [S^N, S^N]`` in block form and ``d^DN S^N = 0``."""
    name = 'bundle.exterior'
    commands = ('verify',)
    requires_special_real = True

    def check(self, context, index, bp):
        chart = context.chart
        result = bundle.exterior_identities_at(chart, bp, context.cfg)
        scale = oracle.sup_norm(bundle.shatN_basis(chart, bp))
        tol = context.cfg.tolerance(scale + scale ** 2)
        yield self.bound(index, result.d_special, tol, 'd_special')
        yield self.bound(index, result.d_levi_civita, tol, 'd_levi_civita')
        yield self.bound(index, result.block_form,
                         context.exact_tol * max(1.0, scale ** 2), 'block_form')


class Distributions(BundleIdentity):
    """Horizontal and vertical distributions: orthogonal, Lagrangian, totally geodesic and flat."""
    name = 'bundle.distributions'
    commands = ('verify',)

    def check(self, context, index, bp):
        report = bundle.distribution_check(context.chart, bp)
        for field, residual in report._asdict().items():
            yield self.bound(index, residual, context.exact_tol, field)


class Reflection(BundleIdentity):
    """Fiber reflections preserve gN and the special connection and reverse J."""
    name = 'bundle.reflection'
    commands = ('verify',)

    def check(self, context, index, bp):
        n = context.chart.dimension
        spec = context.spec
        u0 = spec.u0 if spec is not None else np.zeros(n)
        u0_prime = spec.u0_prime if spec is not None else np.full(n, 0.5)
        report = bundle.reflection_isometry_check(context.chart, bp, u0, u0_prime)
        tol = context.roundtrip_tol
        values = {'holomorphic': report.holomorphic}
        for field in ('metric', 'antiholomorphic', 'nablaN', 'levi_civita', 'involution',
                      'translation'):
            yield self.bound(index, getattr(report, field), tol, field,
                             values=values if field == 'antiholomorphic' else None)


class MetricDerivative(BundleIdentity):
    """``(nablaN_X gN)(Y, Z) = 2 gN(S^N_X Y, Z)``, totally symmetric."""
    name = 'bundle.metric_derivative'
    commands = ('verify',)

    def check(self, context, index, bp):
        chart = context.chart
        closed = bundle.nablaN_metric_derivative_at(chart, bp)
        fd = oracle.covariant_derivative(bundle.metric_field(chart), bundle.nablaN_field(chart),
                                         bp.coords, context.cfg)
        hessian = chart.is_special_real()
        yield self.compare(context, index, closed, fd, 'oracle', values={'hessian': hessian})
        tol = context.exact_tol * max(1.0, oracle.sup_norm(closed))
        asym = max(oracle.sup_norm(closed - closed.transpose(1, 0, 2)),
                   oracle.sup_norm(closed - closed.transpose(0, 2, 1)))
        yield self.bound(index, asym, tol, 'symmetric')


class RoundTrip(BundleIdentity):
    """Chart -> bundle metric -> reconstructed base metric."""
    name = 'bundle.roundtrip'
    commands = ('roundtrip', 'verify')

    def check(self, context, index, bp):
        chart = context.chart
        n = chart.dimension
        gfield = bundle.metric_field(chart)
        perturb = context.perturb
        if perturb:
            def field(q):
                return gfield(q) + perturb * float(np.sum(q[n:])) * np.eye(2 * n)
        else:
            field = gfield
        try:
            result = bundle.reconstruct_base(field, [bp], context.cfg, context.roundtrip_tol)
        except NotInImageError as e:
            yield CheckRecord.failed(self.name, index, str(e), values=e.residuals)
            return
        deviation = oracle.sup_norm(result.metrics[0] - chart.metric_at(bp.x))
        yield self.bound(index, deviation, context.roundtrip_tol, values=result.residuals,
                         closed=result.metrics[0])


__identities__ = [KahlerStructure, SpecialKahler, KahlerClosed, ShapeN, CurvatureGN,
                  CurvatureNablaN, RicciN, ExteriorN, Distributions, Reflection,
                  MetricDerivative, RoundTrip]

# -*- coding: utf-8 -*-
# This file is part of hessrmap

"""
Geometry of a Hessian chart ``(U, g = d^2 h, d)`` given by a polynomial potential.

Three connections live on the chart:

- ``flat``: the coordinate connection of the affine chart
- ``levi_civita``: D = flat + S^, where ``S^_X = 1/2 g^-1 S(X, ., .)``
- ``conjugate``: flat + 2 S^

All closed forms use the layout documented in :mod:`hessrmap.oracle`.

"""

import math
import logging
import threading
from collections import namedtuple
from fractions import Fraction
from typing import Tuple

import numpy as np

from . import oracle
from .errors import DomainError, InputError
from .polynomial import PolynomialPotential, as_point, derivative_polynomials, derivative_tensor

__all__ = ['HessianChart', 'CONNECTIONS', 'DSIdentities', 'commutators']
LOG = logging.getLogger(__name__)

CONNECTIONS = ('flat', 'levi_civita', 'conjugate')
DSIdentities = namedtuple('DSIdentities', ['d_levi_civita', 'd_flat'])


def commutators(A) -> np.ndarray:
    """``out[i, j] = [A_i, A_j]`` for a stack of square matrices ``A[i]``."""
    AA = np.einsum('ikl,jlm->ijkm', A, A)
    return AA - AA.transpose(1, 0, 2, 3)


def _accumulate(acc, a, b, sign):
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            key = tuple(x + y for x, y in zip(e1, e2))
            acc[key] = acc.get(key, 0) + sign * c1 * c2


def _determinant(second, n) -> PolynomialPotential:
    """Exact determinant of the symmetric polynomial matrix ``second[(i, j)]``, i <= j."""
    denominator = 1
    for poly in second.values():
        for t in poly.terms:
            q = t.coefficient.denominator
            denominator = denominator * q // math.gcd(denominator, q)
    entries = {key: {t.exponents: int(t.coefficient * denominator) for t in poly.terms}
               for key, poly in second.items()}
    memo = {(): {(0,) * n: 1}}

    def _minor(columns):
        if columns in memo:
            return memo[columns]
        row = n - len(columns)
        acc = {}
        for idx, col in enumerate(columns):
            entry = entries[tuple(sorted((row, col)))]
            if entry:
                _accumulate(acc, entry, _minor(columns[:idx] + columns[idx + 1:]),
                            -1 if idx % 2 else 1)
        memo[columns] = {k: v for k, v in acc.items() if v}
        return memo[columns]

    scale = denominator ** n
    return PolynomialPotential(n, {k: Fraction(v, scale)
                                   for k, v in _minor(tuple(range(n))).items()})


class HessianChart:
    """
    A polynomial potential together with the nondegeneracy tolerance of its domain.

    Parameters
    ----------
    potential : PolynomialPotential
    degeneracy_tol : float
        A point belongs to the domain when ``|det g|`` exceeds this fraction of
        the product of the row sup-norms of ``g``.

    """

    def __init__(self, potential: PolynomialPotential, degeneracy_tol=1e-10):
        if not isinstance(potential, PolynomialPotential):
            raise InputError("Chart potential must be a PolynomialPotential")
        if isinstance(degeneracy_tol, bool) or not isinstance(degeneracy_tol, (int, float)) \
                or not degeneracy_tol > 0:
            raise InputError("degeneracy_tol must be positive", 'chart.degeneracy_tol')
        self._potential = potential
        self._tol = float(degeneracy_tol)
        self._delta = None
        self._delta_lock = threading.Lock()

    @classmethod
    def from_json(cls, obj, where='chart', degeneracy_tol=1e-10) -> 'HessianChart':
        if not isinstance(obj, dict):
            raise InputError("Chart must be a JSON object", where)
        if 'potential' not in obj:
            raise InputError("Chart is missing 'potential'", where)
        unknown = set(obj) - {'potential', 'degeneracy_tol'}
        if unknown:
            raise InputError("Unknown chart fields: %s" % ", ".join(sorted(unknown)), where)
        tol = obj.get('degeneracy_tol', degeneracy_tol)
        if isinstance(tol, bool) or not isinstance(tol, (int, float)):
            raise InputError("degeneracy_tol must be a number", where + '.degeneracy_tol')
        potential = PolynomialPotential.from_json(obj['potential'], where + '.potential')
        return cls(potential, tol)

    def to_json(self) -> dict:
        return {'potential': self._potential.to_json(), 'degeneracy_tol': self._tol}

    @property
    def dimension(self) -> int:
        return self._potential.dimension

    @property
    def potential(self) -> PolynomialPotential:
        return self._potential

    @property
    def degeneracy_tol(self) -> float:
        return self._tol

    def is_special_real(self) -> bool:
        return self._potential.degree <= 3

    def __eq__(self, other):
        if not isinstance(other, HessianChart):
            return NotImplemented
        return self._potential == other._potential and self._tol == other._tol

    def __hash__(self):
        return hash((self._potential, self._tol))

    def __repr__(self):
        return "<HessianChart(n=%d, h=%s)>" % (self.dimension, self._potential)

    # Point values

    def metric_at(self, point) -> np.ndarray:
        return derivative_tensor(self._potential, 2, point)

    def cubic_form_at(self, point) -> np.ndarray:
        return derivative_tensor(self._potential, 3, point)

    def quartic_form_at(self, point) -> np.ndarray:
        """``d^4 h`` at ``point``, the flat derivative of the cubic form."""
        return derivative_tensor(self._potential, 4, point)

    @staticmethod
    def _det_scale(g) -> float:
        rows = np.max(np.abs(g), axis=1)
        rows[rows == 0] = 1.0
        return float(np.prod(rows))

    def domain_estimates(self, point) -> Tuple[float, float]:
        """``(det g, cond g)`` at ``point``; the condition estimate is inf on singular g."""
        g = self.metric_at(point)
        det = float(np.linalg.det(g))
        with np.errstate(all='ignore'):
            try:
                cond = float(np.linalg.cond(g))
            except np.linalg.LinAlgError:
                cond = float('inf')
        return det, cond

    def in_domain(self, point) -> bool:
        g = self.metric_at(point)
        return abs(float(np.linalg.det(g))) > self._tol * self._det_scale(g)

    def check_domain(self, point) -> np.ndarray:
        """
        Return the metric at ``point`` or raise when it is degenerate.

        Raises
        ------
        DomainError

        """
        p = as_point(point, self.dimension)
        g = self.metric_at(p)
        if abs(float(np.linalg.det(g))) > self._tol * self._det_scale(g):
            return g
        det, cond = self.domain_estimates(p)
        raise DomainError("Metric is degenerate at %s" % np.array2string(p), point=p,
                          det=det, cond=cond)

    def signature(self, point) -> Tuple[int, int, int]:
        """Counts of positive, negative and (numerically) zero eigenvalues of g."""
        eig = np.linalg.eigvalsh(self.metric_at(point))
        cutoff = 1e-12 * max(1.0, float(np.max(np.abs(eig))))
        return (int(np.sum(eig > cutoff)), int(np.sum(eig < -cutoff)),
                int(np.sum(np.abs(eig) <= cutoff)))

    def shat_basis(self, point) -> np.ndarray:
        """``A[i, k, j]`` = (S^_{e_i})^k_j, solved against g without inverting it."""
        g = self.check_domain(point)
        n = self.dimension
        S = self.cubic_form_at(point)
        rhs = S.transpose(1, 0, 2).reshape(n, n * n)
        return 0.5 * np.linalg.solve(g, rhs).reshape(n, n, n).transpose(1, 0, 2)

    def shat_at(self, point, direction) -> np.ndarray:
        X = as_point(direction, self.dimension)
        return np.einsum('i,ikj->kj', X, self.shat_basis(point))

    def christoffels_at(self, point, which='levi_civita') -> np.ndarray:
        if which not in CONNECTIONS:
            raise InputError("Unknown connection %r, expected one of %s" % (which, CONNECTIONS))
        A = self.shat_basis(point)
        if which == 'flat':
            return np.zeros_like(A)
        if which == 'levi_civita':
            return A
        return 2.0 * A

    def curvature_at(self, point, which='levi_civita') -> np.ndarray:
        """Closed forms: ``R^D(e_i, e_j) = -[S^_i, S^_j]``; flat and conjugate are zero."""
        A = self.christoffels_at(point, which)
        n = self.dimension
        if which != 'levi_civita':
            return np.zeros((n,) * 4)
        return -commutators(A)

    def p_tensor_at(self, point) -> np.ndarray:
        """
        ``P[i, j, k, l]`` = (g^-1 (nabla_i S)(e_j, e_l, .))^k.

        Identically zero exactly when the chart is special real.

        """
        g = self.check_domain(point)
        n = self.dimension
        D4 = self.quartic_form_at(point)
        rhs = D4.transpose(3, 0, 1, 2).reshape(n, n ** 3)
        return np.linalg.solve(g, rhs).reshape(n, n, n, n).transpose(1, 2, 0, 3)

    # Derived checks

    def ds_identities_at(self, point, cfg: oracle.OracleConfig) -> DSIdentities:
        """
        Residual sup-norms of ``d^D S^`` and ``d^flat S^ + 2[S^, S^]``.

        Both exterior covariant derivatives come from the finite-difference oracle.

        """
        p = as_point(point, self.dimension)
        A = self.shat_basis(p)
        shat = self.shat_field()
        d_lc = oracle.exterior_covariant_derivative(shat, self.christoffel_field('levi_civita'),
                                                    p, cfg)
        d_flat = oracle.exterior_covariant_derivative(shat, self.christoffel_field('flat'), p, cfg)
        return DSIdentities(oracle.sup_norm(d_lc),
                            oracle.sup_norm(d_flat + 2.0 * commutators(A)))

    def gradient_commutator_check(self, point, cfg: oracle.OracleConfig) -> float:
        """
        Sup-norm of the brackets of the gradient fields ``grad x^i = g^-1 e_i``.

        Rows of g^-1 are differentiated by the oracle; every stencil point must
        lie in the domain.

        """
        p = as_point(point, self.dimension)
        ginv = self.inverse_metric_field()
        G = ginv(p)
        dG = oracle.fd_gradient(ginv, p, cfg)
        C = np.einsum('ij,jkl->ikl', G, dG)
        return oracle.sup_norm(C - C.transpose(1, 0, 2))

    def relative_invariant(self) -> PolynomialPotential:
        """
        ``det(d^2 h)`` as an exact polynomial.

        Laplace expansion along rows, memoised on the remaining column set and
        carried out on integer coefficients over a common denominator.  The
        result is computed once per chart; concurrent callers wait for it.
        For special real charts the degree is at most n.

        """
        with self._delta_lock:
            if self._delta is None:
                self._delta = _determinant(derivative_polynomials(self._potential, 2),
                                           self.dimension)
                LOG.debug("Relative invariant of %r has degree %d", self, self._delta.degree)
            return self._delta

    # Fields for the oracle

    def metric_field(self) -> oracle.TensorField:
        n = self.dimension
        return oracle.TensorField(self.check_domain, (n, n), 'll', name='metric')

    def inverse_metric_field(self) -> oracle.TensorField:
        n = self.dimension
        return oracle.TensorField(lambda q: np.linalg.solve(self.check_domain(q), np.eye(n)),
                                  (n, n), 'uu', name='inverse_metric')

    def cubic_form_field(self) -> oracle.TensorField:
        n = self.dimension
        return oracle.TensorField(self.cubic_form_at, (n, n, n), 'lll', name='cubic_form')

    def shat_field(self) -> oracle.TensorField:
        n = self.dimension
        return oracle.TensorField(self.shat_basis, (n, n, n), 'lul', name='shat')

    def christoffel_field(self, which='levi_civita') -> oracle.TensorField:
        n = self.dimension
        return oracle.TensorField(lambda q: self.christoffels_at(q, which), (n, n, n),
                                  name='christoffels_' + which)

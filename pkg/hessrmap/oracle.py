# -*- coding: utf-8 -*-
# This file is part of hessrmap

"""
Finite-difference differential geometry oracle.

Everything here works on arbitrary sampled tensor fields and never uses the
closed forms of :mod:`hessrmap.hessian` or :mod:`hessrmap.bundle`; those
modules are checked against it.

Array layout conventions (shared with the closed forms)
--------------------------------------------------------
- connection coefficients ``gamma[i, k, j]`` = Gamma^k_ij, i.e. ``gamma[i]`` is
  the matrix of nabla_{d_i} acting on coordinate fields
- curvature ``R[i, j, k, l]`` = (R(d_i, d_j))^k_l with
  R(X, Y) = [nabla_X, nabla_Y] - nabla_[X,Y]
- derivatives prepend the differentiation slot: ``out[m, ...]``

"""

import copy
import logging

import numpy as np

from .errors import DomainError, InputError

__all__ = ['OracleConfig', 'TensorField', 'sup_norm', 'fd_partial', 'fd_gradient',
           'christoffels_of_metric', 'curvature_of_connection', 'riemann_curvature',
           'ricci', 'covariant_derivative', 'exterior_derivative',
           'exterior_covariant_derivative', 'torsion']
LOG = logging.getLogger(__name__)

SCHEMES = ('central_2nd', 'richardson_4th')


def sup_norm(value) -> float:
    arr = np.asarray(value, dtype=float)
    if arr.size == 0:
        return 0.0
    return float(np.max(np.abs(arr)))


class OracleConfig:
    """
    Step policy and tolerances of the oracle.

    Parameters
    ----------
    base_step : float
        Step for direction i is ``base_step * max(1, |p_i|)``.
    scheme : str
        ``central_2nd`` or ``richardson_4th`` (one Richardson level).
    tol_abs, tol_rel : float
        A closed form passes when ``|closed - oracle| <= tol_abs + tol_rel * |oracle|``
        in the sup norm.
    nested_step_factor : float
        Step multiplier for second-order compositions (curvature of a metric),
        where nested difference quotients amplify round-off.

    """
    options = ('base_step', 'scheme', 'tol_abs', 'tol_rel', 'nested_step_factor')

    def __init__(self, base_step=1e-4, scheme='richardson_4th', tol_abs=1e-8,
                 tol_rel=1e-6, nested_step_factor=10.0):
        self.base_step = float(base_step)
        self.scheme = scheme
        self.tol_abs = float(tol_abs)
        self.tol_rel = float(tol_rel)
        self.nested_step_factor = float(nested_step_factor)
        if not self.base_step > 0:
            raise InputError("base_step must be positive", 'oracle.base_step')
        if scheme not in SCHEMES:
            raise InputError("Unknown scheme %r, expected one of %s" % (scheme, SCHEMES),
                             'oracle.scheme')
        if not (self.tol_abs > 0 and self.tol_rel > 0):
            raise InputError("Tolerances must be positive", 'oracle')
        if not self.nested_step_factor >= 1:
            raise InputError("nested_step_factor must be >= 1", 'oracle.nested_step_factor')

    @classmethod
    def from_json(cls, obj, where='oracle', defaults=None):
        if obj is None:
            obj = {}
        if not isinstance(obj, dict):
            raise InputError("Oracle configuration must be a JSON object", where)
        params = dict(defaults or {})
        for key, value in obj.items():
            if key not in cls.options:
                raise InputError("Unknown oracle option %r" % key, where)
            if key != 'scheme' and (isinstance(value, bool) or
                                    not isinstance(value, (int, float))):
                raise InputError("'%s' must be a number" % key, "%s.%s" % (where, key))
            params[key] = value
        return cls(**params)

    def to_json(self) -> dict:
        return {key: getattr(self, key) for key in self.options}

    def replace(self, **changes) -> 'OracleConfig':
        params = self.to_json()
        params.update({k: v for k, v in changes.items() if v is not None})
        return OracleConfig(**params)

    def nested(self) -> 'OracleConfig':
        cfg = copy.copy(self)
        cfg.base_step = self.base_step * self.nested_step_factor
        return cfg

    def step(self, point, index) -> float:
        return self.base_step * max(1.0, abs(float(point[index])))

    def tolerance(self, oracle) -> float:
        return self.tol_abs + self.tol_rel * sup_norm(oracle)

    @staticmethod
    def residual(closed, oracle) -> float:
        return sup_norm(np.asarray(closed, dtype=float) - np.asarray(oracle, dtype=float))

    def accepts(self, closed, oracle) -> bool:
        return self.residual(closed, oracle) <= self.tolerance(oracle)

    def __eq__(self, other):
        if not isinstance(other, OracleConfig):
            return NotImplemented
        return self.to_json() == other.to_json()

    def __repr__(self):
        return "<OracleConfig(%s)>" % ", ".join("%s=%r" % kv for kv in self.to_json().items())


class TensorField:
    """
    A point-evaluation contract: ``field(p)`` returns a dense array of fixed shape.

    Parameters
    ----------
    fn : Callable[[np.ndarray], np.ndarray]
    shape : tuple
    variance : str, Optional
        One character per slot, ``u`` (upper) or ``l`` (lower); required by
        :func:`covariant_derivative`.

    """

    def __init__(self, fn, shape, variance=None, name=None):
        self._fn = fn
        self.shape = tuple(shape)
        if variance is not None and (len(variance) != len(self.shape) or
                                     set(variance) - {'u', 'l'}):
            raise InputError("Variance %r does not match shape %s" % (variance, self.shape))
        self.variance = variance
        self.name = name or getattr(fn, '__name__', 'field')

    @property
    def rank(self) -> int:
        return len(self.shape)

    def __call__(self, point) -> np.ndarray:
        value = np.asarray(self._fn(np.asarray(point, dtype=float)), dtype=float)
        if value.shape != self.shape:
            raise InputError("Field %s returned shape %s, declared %s"
                             % (self.name, value.shape, self.shape))
        return value

    def __repr__(self):
        return "<TensorField(%s, shape=%s, variance=%s)>" % (self.name, self.shape,
                                                           self.variance)


def fd_partial(field, point, index, cfg: OracleConfig) -> np.ndarray:
    """Partial derivative of ``field`` along coordinate ``index`` at ``point``."""
    p = np.asarray(point, dtype=float)
    h = cfg.step(p, index)

    def _central(step):
        e = np.zeros_like(p)
        e[index] = step
        return (field(p + e) - field(p - e)) / (2.0 * step)

    if cfg.scheme == 'central_2nd':
        return _central(h)
    return (4.0 * _central(h / 2.0) - _central(h)) / 3.0


def fd_gradient(field, point, cfg: OracleConfig) -> np.ndarray:
    """All coordinate partials stacked along a new leading axis."""
    p = np.asarray(point, dtype=float)
    return np.stack([fd_partial(field, p, i, cfg) for i in range(p.shape[0])])


def _solve_metric(g, rhs, point):
    try:
        cond = np.linalg.cond(g)
        if not np.isfinite(cond) or cond > 1e14:
            raise np.linalg.LinAlgError("ill-conditioned")
        return np.linalg.solve(g, rhs)
    except np.linalg.LinAlgError:
        det = float(np.linalg.det(g))
        LOG.debug("Oracle metric degenerate at %s", point)
        raise DomainError("Metric is degenerate", point=point, det=det,
                          cond=float(np.linalg.cond(g)))


def christoffels_of_metric(gfield, point, cfg: OracleConfig) -> np.ndarray:
    """Levi-Civita coefficients ``gamma[i, k, j]`` from difference quotients of ``gfield``."""
    p = np.asarray(point, dtype=float)
    g = gfield(p)
    n = g.shape[0]
    dg = fd_gradient(gfield, p, cfg)
    lowered = dg + dg.transpose(1, 0, 2) - dg.transpose(1, 2, 0)
    sol = _solve_metric(g, lowered.reshape(n * n, n).T, p)
    return 0.5 * sol.reshape(n, n, n).transpose(1, 0, 2)


def curvature_of_connection(gamma_field, point, cfg: OracleConfig) -> np.ndarray:
    """``R_IJ = d_I Gamma_J - d_J Gamma_I + [Gamma_I, Gamma_J]`` with difference-quotient partials."""
    p = np.asarray(point, dtype=float)
    G = gamma_field(p)
    dG = fd_gradient(gamma_field, p, cfg)
    GG = np.einsum('ikl,jlm->ijkm', G, G)
    return dG - dG.transpose(1, 0, 2, 3) + GG - GG.transpose(1, 0, 2, 3)


def riemann_curvature(gfield, point, cfg: OracleConfig) -> np.ndarray:
    p = np.asarray(point, dtype=float)
    n = p.shape[0]
    nested = cfg.nested()
    gamma = TensorField(lambda q: christoffels_of_metric(gfield, q, nested), (n, n, n),
                        name='christoffels_of_metric')
    return curvature_of_connection(gamma, p, nested)


def ricci(gfield, point, cfg: OracleConfig) -> np.ndarray:
    """``ric(Y, Z) = tr(X -> R(X, Y) Z)``: contraction of the first and third slots."""
    return np.einsum('kjkl->jl', riemann_curvature(gfield, point, cfg))


def covariant_derivative(tensor_field, gamma_field, point, cfg: OracleConfig) -> np.ndarray:
    """
    Covariant derivative of a tensor field; the new lower slot comes first.

    The correction sign for every slot is taken from ``tensor_field.variance``.

    """
    if tensor_field.variance is None:
        raise InputError("Covariant derivative needs a declared variance")
    p = np.asarray(point, dtype=float)
    T = tensor_field(p)
    G = gamma_field(p)
    out = fd_gradient(tensor_field, p, cfg)
    for axis, kind in enumerate(tensor_field.variance):
        moved = np.moveaxis(T, axis, 0)
        if kind == 'u':
            term = np.tensordot(G, moved, axes=([2], [0]))
            out = out + np.moveaxis(term, 1, 1 + axis)
        else:
            term = np.tensordot(G, moved, axes=([1], [0]))
            out = out - np.moveaxis(term, 1, 1 + axis)
    return out


def exterior_derivative(kform_field, point, cfg: OracleConfig) -> np.ndarray:
    """``(d w)[j0..jk] = sum_a (-1)^a d_{j_a} w[j0..^ja..jk]`` for an antisymmetric array ``w``."""
    D = fd_gradient(kform_field, point, cfg)
    out = np.zeros_like(D)
    for a in range(D.ndim):
        out = out + (-1) ** a * np.moveaxis(D, 0, a)
    return out


def exterior_covariant_derivative(form_field, gamma_field, point,
                                  cfg: OracleConfig) -> np.ndarray:
    """
    Exterior covariant derivative of an endomorphism-valued one-form.

    ``form_field`` returns ``A[i, k, j]`` = (A(d_i))^k_j; the result is
    ``out[m, i]`` = nabla_m(A_i) - nabla_i(A_m) as an endomorphism, with
    nabla acting on endomorphisms by commutator.

    """
    p = np.asarray(point, dtype=float)
    A = form_field(p)
    G = gamma_field(p)
    dA = fd_gradient(form_field, p, cfg)
    bracket = np.einsum('mkl,ilj->mikj', G, A) - np.einsum('ikl,mlj->mikj', A, G)
    return dA - dA.transpose(1, 0, 2, 3) + bracket - bracket.transpose(1, 0, 2, 3)


def torsion(gamma) -> np.ndarray:
    """``T[i, k, j] = Gamma^k_ij - Gamma^k_ji`` of coefficients at a point."""
    G = np.asarray(gamma, dtype=float)
    return G - G.transpose(2, 1, 0)

# -*- coding: utf-8 -*-
# This file is part of hessrmap

"""
The r-map: the Kähler structure induced on N = TM by a Hessian chart.

Points of N are given in canonical coordinates ``(x, u)``, where ``x`` are the
affine base coordinates and ``u`` the components of a tangent vector; the
index order of every 2n-array is ``(x1..xn, u1..un)``.

Structures (all independent of u)::

    gN    = diag(g, g)
    J     = [[0, -I], [I, 0]]
    omega = gN J
    levi-civita of gN:   G_i = diag(S^_i, S^_i),   G_i' = J G_i
    special connection:  G_i = diag(0, 2 S^_i),    G_i' = [[0, 0], [2 S^_i, 0]]

"""

import logging
from collections import namedtuple

import numpy as np

from . import oracle
from .errors import InputError, NotInImageError, UnsupportedModeError
from .hessian import HessianChart, commutators
from .polynomial import as_point

__all__ = ['BundlePoint', 'KahlerData', 'RicciValue', 'AxiomReport', 'DistributionReport',
           'ReflectionReport', 'ExteriorIdentities', 'ReconstructedBase',
           'complex_structure', 'kahler_data_at', 'domega_residual', 'shatN_basis',
           'shatN_at', 'curvature_gN_at', 'shatN_bracket_at', 'p_tensor_at',
           'curvature_nablaN_at', 'ricci_N_at', 'special_kahler_check',
           'distribution_check', 'reflection_isometry_check', 'exterior_identities_at',
           'nablaN_metric_derivative_at', 'reconstruct_base', 'metric_field',
           'omega_field', 'complex_structure_field', 'nablaN_field', 'levi_civita_field',
           'shatN_field']
LOG = logging.getLogger(__name__)

RicciValue = namedtuple('RicciValue', ['metric', 'metric_tensor', 'ricci_form', 'nabla'])
AxiomReport = namedtuple('AxiomReport', ['torsion', 'nabla_omega', 'nabla_J_symmetry',
                                         'flatness'])
DistributionReport = namedtuple('DistributionReport', [
    'orthogonality', 'omega_horizontal', 'omega_vertical', 'nablaN_horizontal',
    'nablaN_vertical', 'levi_civita_horizontal'])
ReflectionReport = namedtuple('ReflectionReport', [
    'metric', 'antiholomorphic', 'holomorphic', 'nablaN', 'levi_civita', 'involution',
    'translation'])
ExteriorIdentities = namedtuple('ExteriorIdentities', ['d_special', 'd_levi_civita',
                                                       'block_form'])
ReconstructedBase = namedtuple('ReconstructedBase', ['points', 'metrics', 'residuals'])


def _readonly(arr) -> np.ndarray:
    arr = np.array(arr, dtype=float)
    arr.setflags(write=False)
    return arr


class BundlePoint:
    """A point ``(x, u)`` of the tangent bundle in canonical coordinates."""
    __slots__ = ('_x', '_u')

    def __init__(self, x, u=None):
        x = np.asarray(x, dtype=float)
        if x.ndim != 1:
            raise InputError("Bundle point base must be a vector")
        n = x.shape[0]
        self._x = _readonly(as_point(x, n))
        self._u = _readonly(np.zeros(n) if u is None else as_point(u, n))

    @classmethod
    def from_json(cls, obj, dimension, where='bundle_point') -> 'BundlePoint':
        if not isinstance(obj, dict) or 'x' not in obj:
            raise InputError("Bundle point must be an object with 'x' and 'u'", where)
        unknown = set(obj) - {'x', 'u'}
        if unknown:
            raise InputError("Unknown bundle point fields: %s" % ", ".join(sorted(unknown)),
                             where)
        try:
            x = as_point(obj['x'], dimension)
            u = as_point(obj.get('u', [0.0] * dimension), dimension)
        except InputError as e:
            raise InputError(str(e), where)
        return cls(x, u)

    def to_json(self) -> dict:
        return {'x': self._x.tolist(), 'u': self._u.tolist()}

    @classmethod
    def from_coords(cls, coords) -> 'BundlePoint':
        q = np.asarray(coords, dtype=float)
        if q.ndim != 1 or q.shape[0] % 2:
            raise InputError("Canonical coordinates must have even length, got %s" % (q.shape,))
        n = q.shape[0] // 2
        return cls(q[:n], q[n:])

    @property
    def x(self) -> np.ndarray:
        return self._x

    @property
    def u(self) -> np.ndarray:
        return self._u

    @property
    def dimension(self) -> int:
        return self._x.shape[0]

    @property
    def coords(self) -> np.ndarray:
        return _readonly(np.concatenate([self._x, self._u]))

    def reflect(self, u0) -> 'BundlePoint':
        """``(x, u) -> (x, -u + 2 u0)``"""
        u0 = as_point(u0, self.dimension)
        return BundlePoint(self._x, -self._u + 2.0 * u0)

    def __eq__(self, other):
        if not isinstance(other, BundlePoint):
            return NotImplemented
        return np.array_equal(self._x, other._x) and np.array_equal(self._u, other._u)

    def __hash__(self):
        return hash((self._x.tobytes(), self._u.tobytes()))

    def __repr__(self):
        return "<BundlePoint(x=%s, u=%s)>" % (self._x.tolist(), self._u.tolist())


class KahlerData:
    """Point values of the r-map structures; all arrays are read-only."""
    __slots__ = ('gN', 'J', 'omega', 'gammaN', 'gammaLC')

    def __init__(self, gN, J, omega, gammaN, gammaLC):
        self.gN = _readonly(gN)
        self.J = _readonly(J)
        self.omega = _readonly(omega)
        self.gammaN = _readonly(gammaN)
        self.gammaLC = _readonly(gammaLC)

    def __repr__(self):
        return "<KahlerData(dim=%d)>" % self.gN.shape[0]


def complex_structure(n) -> np.ndarray:
    I = np.eye(n)
    Z = np.zeros((n, n))
    return np.block([[Z, -I], [I, Z]])


def _chart_point(chart: HessianChart, bp) -> BundlePoint:
    if not isinstance(bp, BundlePoint):
        bp = BundlePoint.from_coords(bp)
    if bp.dimension != chart.dimension:
        raise InputError("Bundle point has base dimension %d, chart has %d"
                         % (bp.dimension, chart.dimension))
    return bp


def _block_metric(g) -> np.ndarray:
    n = g.shape[0]
    gN = np.zeros((2 * n, 2 * n))
    gN[:n, :n] = g
    gN[n:, n:] = g
    return gN


def _connections(A):
    n = A.shape[0]
    J = complex_structure(n)
    gammaLC = np.zeros((2 * n, 2 * n, 2 * n))
    gammaN = np.zeros((2 * n, 2 * n, 2 * n))
    gammaLC[:n, :n, :n] = A
    gammaLC[:n, n:, n:] = A
    gammaLC[n:] = np.einsum('kl,ilj->ikj', J, gammaLC[:n])
    gammaN[:n, n:, n:] = 2.0 * A
    gammaN[n:, n:, :n] = 2.0 * A
    return gammaN, gammaLC


def kahler_data_at(chart: HessianChart, bp) -> KahlerData:
    """
    Evaluate ``(gN, J, omega, gammaN, gammaLC)`` at a bundle point.

    Raises
    ------
    DomainError
        If the base point is outside the chart domain.

    """
    bp = _chart_point(chart, bp)
    g = chart.check_domain(bp.x)
    gN = _block_metric(g)
    J = complex_structure(chart.dimension)
    gammaN, gammaLC = _connections(chart.shat_basis(bp.x))
    return KahlerData(gN, J, gN @ J, gammaN, gammaLC)


def shatN_basis(chart: HessianChart, bp) -> np.ndarray:
    """
    ``B[I]`` = S^N along the I-th canonical direction.

    Horizontal directions give ``diag(S^, -S^)``, vertical ones
    ``[[0, -S^], [-S^, 0]]``.

    """
    bp = _chart_point(chart, bp)
    A = chart.shat_basis(bp.x)
    n = chart.dimension
    B = np.zeros((2 * n, 2 * n, 2 * n))
    B[:n, :n, :n] = A
    B[:n, n:, n:] = -A
    B[n:, :n, n:] = -A
    B[n:, n:, :n] = -A
    return B


def shatN_at(chart: HessianChart, bp, direction) -> np.ndarray:
    X = as_point(direction, 2 * chart.dimension)
    return np.einsum('i,ikj->kj', X, shatN_basis(chart, bp))


def _require_special(chart, what):
    if not chart.is_special_real():
        raise UnsupportedModeError("%s has a closed form only for special real charts "
                                   "(potential degree %d)" % (what, chart.potential.degree))


def curvature_gN_at(chart: HessianChart, bp) -> np.ndarray:
    """
    Levi-Civita curvature of gN assembled from its blocks.

    Raises
    ------
    UnsupportedModeError
        For charts of degree above three.

    """
    _require_special(chart, "Curvature of gN")
    bp = _chart_point(chart, bp)
    A = chart.shat_basis(bp.x)
    n = chart.dimension
    comm = commutators(A)
    AA = np.einsum('ikl,jlm->ijkm', A, A)
    anti = AA + AA.transpose(1, 0, 2, 3)
    R = np.zeros((2 * n,) * 4)
    for rows in (slice(0, n), slice(n, 2 * n)):
        R[rows, rows, :n, :n] = -comm
        R[rows, rows, n:, n:] = -comm
    R[:n, n:, :n, n:] = anti
    R[:n, n:, n:, :n] = -anti
    R[n:, :n] = -R[:n, n:].transpose(1, 0, 2, 3)
    return R


def shatN_bracket_at(chart: HessianChart, bp) -> np.ndarray:
    """``-[S^N_I, S^N_J]`` over all canonical direction pairs."""
    return -commutators(shatN_basis(chart, bp))


def p_tensor_at(chart: HessianChart, bp) -> np.ndarray:
    bp = _chart_point(chart, bp)
    return chart.p_tensor_at(bp.x)


def curvature_nablaN_at(chart: HessianChart, bp) -> np.ndarray:
    """
    Curvature of the special connection.

    With ``P[i, j]`` the endomorphism g^-1 (nabla_i S)(e_j, ., .) the blocks are
    ``R(h_i, h_j) = diag(0, P_ij - P_ji)``, ``R(h_i, v_j) = [[0, 0], [P_ij, 0]]``
    and ``R(v_i, v_j) = 0``.

    """
    P = p_tensor_at(chart, bp)
    n = chart.dimension
    R = np.zeros((2 * n,) * 4)
    R[:n, :n, n:, n:] = P - P.transpose(1, 0, 2, 3)
    R[:n, n:, n:, :n] = P
    R[n:, :n, n:, :n] = -P.transpose(1, 0, 2, 3)
    return R


def ricci_N_at(chart: HessianChart, bp, Xh=None, Yv=None) -> RicciValue:
    """
    Ricci data of the r-map at ``bp``.

    Parameters
    ----------
    Xh, Yv : array-like, Optional
        Horizontal and vertical parts of the direction ``Xh^h + Yv^v``; zero
        when omitted.

    Returns
    -------
    RicciValue
        ``metric`` is ``ric(X^h + Y^v, X^h + Y^v) = 2 tr S^_X^2 + 2 tr S^_Y^2``,
        ``metric_tensor`` the full Ricci matrix of gN and ``ricci_form`` its
        Kähler form ``rho(X, Y) = ric(JX, Y)``; these three are None on charts
        that are not special real.  ``nabla`` is the Ricci tensor of the special
        connection, whose only nonzero block is ``ric(h_i, h_j) = -tr P_ij``.

    """
    bp = _chart_point(chart, bp)
    n = chart.dimension
    X = np.zeros(n) if Xh is None else as_point(Xh, n)
    Y = np.zeros(n) if Yv is None else as_point(Yv, n)
    P = chart.p_tensor_at(bp.x)
    nabla = np.zeros((2 * n, 2 * n))
    nabla[:n, :n] = -np.einsum('ijkk->ij', P)
    if not chart.is_special_real():
        return RicciValue(None, None, None, nabla)
    A = chart.shat_basis(bp.x)
    SX = np.einsum('i,ikj->kj', X, A)
    SY = np.einsum('i,ikj->kj', Y, A)
    value = 2.0 * np.trace(SX @ SX) + 2.0 * np.trace(SY @ SY)
    r = 2.0 * np.einsum('ikl,jlk->ij', A, A)
    ric = _block_metric(r)
    rho = complex_structure(n).T @ ric
    return RicciValue(float(value), ric, rho, nabla)


def special_kahler_check(chart: HessianChart, bp, cfg: oracle.OracleConfig) -> AxiomReport:
    """
    Residual sup-norms of the special Kähler axioms for the special connection.

    Torsion is read off the closed-form coefficients; the covariant
    derivatives of omega and J and the curvature come from the oracle.

    """
    bp = _chart_point(chart, bp)
    q = bp.coords
    data = kahler_data_at(chart, bp)
    gamma = nablaN_field(chart)
    d_omega = oracle.covariant_derivative(omega_field(chart), gamma, q, cfg)
    d_J = oracle.covariant_derivative(complex_structure_field(chart), gamma, q, cfg)
    flat = oracle.curvature_of_connection(gamma, q, cfg)
    return AxiomReport(torsion=oracle.sup_norm(oracle.torsion(data.gammaN)),
                       nabla_omega=oracle.sup_norm(d_omega),
                       nabla_J_symmetry=oracle.sup_norm(d_J - d_J.transpose(2, 1, 0)),
                       flatness=oracle.sup_norm(flat))


def domega_residual(chart: HessianChart, bp, cfg: oracle.OracleConfig) -> float:
    bp = _chart_point(chart, bp)
    return oracle.sup_norm(oracle.exterior_derivative(omega_field(chart), bp.coords, cfg))


def distribution_check(chart: HessianChart, bp) -> DistributionReport:
    """Closed-form residuals of the horizontal/vertical splitting of TN."""
    bp = _chart_point(chart, bp)
    n = chart.dimension
    data = kahler_data_at(chart, bp)
    h, v = slice(0, n), slice(n, 2 * n)
    sup = oracle.sup_norm
    return DistributionReport(
        orthogonality=max(sup(data.gN[h, v]), sup(data.gN[v, h])),
        omega_horizontal=sup(data.omega[h, h]),
        omega_vertical=sup(data.omega[v, v]),
        nablaN_horizontal=sup(data.gammaN[h, :, h]),
        nablaN_vertical=sup(data.gammaN[v, :, v]),
        levi_civita_horizontal=sup(data.gammaLC[h, v, h]))


def _transport(gamma, L, Linv):
    return np.einsum('ka,bac,bi,cj->ikj', Linv, gamma, L, L)


def reflection_isometry_check(chart: HessianChart, bp, u0, u0_prime=None) -> ReflectionReport:
    """
    Compare the structures at ``bp`` with those pulled back along the fiber reflection.

    The reflection reverses the fiber, so it conjugates J to -J; the
    ``antiholomorphic`` residual measures ``|dS J dS^-1 + J|`` and
    ``holomorphic`` reports whether J itself was preserved.  ``translation``
    is the deviation of the composed reflections through ``u0`` and
    ``u0_prime`` from the fiber translation by ``2 (u0_prime - u0)``, or None.

    """
    bp = _chart_point(chart, bp)
    n = chart.dimension
    L = np.diag(np.concatenate([np.ones(n), -np.ones(n)]))
    Linv = L
    image = bp.reflect(u0)
    here = kahler_data_at(chart, bp)
    there = kahler_data_at(chart, image)
    sup = oracle.sup_norm
    J_conj = L @ here.J @ Linv
    translation = None
    if u0_prime is not None:
        twice = image.reflect(u0_prime)
        shift = 2.0 * (as_point(u0_prime, n) - as_point(u0, n))
        translation = max(sup(twice.x - bp.x), sup(twice.u - bp.u - shift))
    back = image.reflect(u0)
    return ReflectionReport(
        metric=sup(L.T @ there.gN @ L - here.gN),
        antiholomorphic=sup(J_conj + there.J),
        holomorphic=bool(np.array_equal(J_conj, there.J)),
        nablaN=sup(_transport(there.gammaN, L, Linv) - here.gammaN),
        levi_civita=sup(_transport(there.gammaLC, L, Linv) - here.gammaLC),
        involution=max(sup(back.x - bp.x), sup(back.u - bp.u)),
        translation=translation)


def exterior_identities_at(chart: HessianChart, bp,
                           cfg: oracle.OracleConfig) -> ExteriorIdentities:
    """
    Residuals of ``d^nablaN S^N + 2 [S^N, S^N] = 0`` and ``d^DN S^N = 0`` from the oracle.

    ``block_form`` compares ``-2 [S^N, S^N]`` with its block expression
    ``hh = vv = -2 diag([S^_i, S^_j], [S^_i, S^_j])`` and
    ``hv = 2 [[0, {S^_i, S^_j}], [-{S^_i, S^_j}, 0]]``.

    """
    bp = _chart_point(chart, bp)
    q = bp.coords
    B = shatN_basis(chart, bp)
    shat = shatN_field(chart)
    d_special = oracle.exterior_covariant_derivative(shat, nablaN_field(chart), q, cfg)
    d_lc = oracle.exterior_covariant_derivative(shat, levi_civita_field(chart), q, cfg)
    bracket = commutators(B)
    n = chart.dimension
    A = chart.shat_basis(bp.x)
    comm = commutators(A)
    AA = np.einsum('ikl,jlm->ijkm', A, A)
    anti = AA + AA.transpose(1, 0, 2, 3)
    blocks = np.zeros_like(bracket)
    for rows in (slice(0, n), slice(n, 2 * n)):
        blocks[rows, rows, :n, :n] = -2.0 * comm
        blocks[rows, rows, n:, n:] = -2.0 * comm
    blocks[:n, n:, :n, n:] = 2.0 * anti
    blocks[:n, n:, n:, :n] = -2.0 * anti
    blocks[n:, :n] = -blocks[:n, n:].transpose(1, 0, 2, 3)
    return ExteriorIdentities(d_special=oracle.sup_norm(d_special + 2.0 * bracket),
                              d_levi_civita=oracle.sup_norm(d_lc),
                              block_form=oracle.sup_norm(blocks + 2.0 * bracket))


def nablaN_metric_derivative_at(chart: HessianChart, bp) -> np.ndarray:
    """``out[i, j, k] = (nablaN_i gN)(e_j, e_k) = 2 gN(S^N_i e_j, e_k)``; totally symmetric."""
    bp = _chart_point(chart, bp)
    gN = _block_metric(chart.check_domain(bp.x))
    return 2.0 * np.einsum('lk,ilj->ijk', gN, shatN_basis(chart, bp))


def reconstruct_base(gN_field, samples, cfg: oracle.OracleConfig, tol=1e-10) -> ReconstructedBase:
    """
    Recover base metric samples from a bundle metric given in canonical coordinates.

    Parameters
    ----------
    gN_field : Callable
        Evaluates a 2n x 2n matrix at canonical coordinates ``(x, u)``.
    samples : Sequence
        Bundle points (or coordinate vectors) to sample at.
    cfg : OracleConfig
        Step policy for the u-dependence and Hessian-symmetry checks.
    tol : float
        Absolute tolerance of the block-structure and u-independence checks.

    Raises
    ------
    NotInImageError
        When the samples are not the image of a Hessian chart under the r-map:
        non-block-diagonal, unequal blocks, u-dependent, or with a flat
        derivative of g that is not totally symmetric.

    """
    if len(samples) == 0:
        raise InputError("reconstruct_base needs at least one sample")
    points, metrics = [], []
    residuals = {'symmetry': 0.0, 'off_diagonal': 0.0, 'block_mismatch': 0.0,
                 'u_dependence': 0.0, 'hessian_asymmetry': 0.0}
    hessian_tol = 0.0
    for sample in samples:
        bp = sample if isinstance(sample, BundlePoint) else BundlePoint.from_coords(sample)
        n = bp.dimension
        q = bp.coords
        field = oracle.TensorField(gN_field, (2 * n, 2 * n), name='gN')
        G = field(q)
        h, v = slice(0, n), slice(n, 2 * n)
        residuals['symmetry'] = max(residuals['symmetry'], oracle.sup_norm(G - G.T))
        residuals['off_diagonal'] = max(residuals['off_diagonal'], oracle.sup_norm(G[h, v]),
                                        oracle.sup_norm(G[v, h]))
        residuals['block_mismatch'] = max(residuals['block_mismatch'],
                                          oracle.sup_norm(G[h, h] - G[v, v]))
        for a in range(n):
            du = oracle.fd_partial(field, q, n + a, cfg)
            residuals['u_dependence'] = max(residuals['u_dependence'], oracle.sup_norm(du))

        base = oracle.TensorField(lambda x, u=bp.u: field(np.concatenate([x, u]))[:n, :n],
                                  (n, n), name='g')
        dg = oracle.fd_gradient(base, bp.x, cfg)
        residuals['hessian_asymmetry'] = max(residuals['hessian_asymmetry'],
                                             oracle.sup_norm(dg - dg.transpose(1, 0, 2)))
        hessian_tol = max(hessian_tol, cfg.tolerance(dg))
        points.append(bp.x)
        metrics.append(_readonly(G[h, h]))

    structural = ('symmetry', 'off_diagonal', 'block_mismatch', 'u_dependence')
    failed = [k for k in structural if residuals[k] > tol]
    if residuals['hessian_asymmetry'] > hessian_tol:
        failed.append('hessian_asymmetry')
    if failed:
        LOG.info("Bundle metric rejected by reconstruct_base: %s", ", ".join(failed))
        raise NotInImageError("Bundle metric is not an r-map image in canonical coordinates "
                              "(%s)" % ", ".join(failed), residuals)
    return ReconstructedBase(points, metrics, residuals)


# Fields over canonical coordinates

def metric_field(chart: HessianChart) -> oracle.TensorField:
    n = chart.dimension
    return oracle.TensorField(lambda q: _block_metric(chart.check_domain(q[:n])),
                              (2 * n, 2 * n), 'll', name='gN')


def omega_field(chart: HessianChart) -> oracle.TensorField:
    n = chart.dimension
    J = complex_structure(n)
    return oracle.TensorField(lambda q: _block_metric(chart.check_domain(q[:n])) @ J,
                              (2 * n, 2 * n), 'll', name='omega')


def complex_structure_field(chart: HessianChart) -> oracle.TensorField:
    n = chart.dimension
    J = complex_structure(n)
    return oracle.TensorField(lambda q: J, (2 * n, 2 * n), 'ul', name='J')


def nablaN_field(chart: HessianChart) -> oracle.TensorField:
    n = chart.dimension
    return oracle.TensorField(lambda q: _connections(chart.shat_basis(q[:n]))[0],
                              (2 * n,) * 3, name='gammaN')


def levi_civita_field(chart: HessianChart) -> oracle.TensorField:
    n = chart.dimension
    return oracle.TensorField(lambda q: _connections(chart.shat_basis(q[:n]))[1],
                              (2 * n,) * 3, name='gammaLC')


def shatN_field(chart: HessianChart) -> oracle.TensorField:
    n = chart.dimension
    return oracle.TensorField(lambda q: shatN_basis(chart, BundlePoint.from_coords(q)),
                              (2 * n,) * 3, 'lul', name='shatN')

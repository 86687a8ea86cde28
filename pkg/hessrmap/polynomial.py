# -*- coding: utf-8 -*-
# This file is part of hessrmap

"""
Exact sparse multivariate polynomials with rational coefficients.

Every potential is kept as a map from exponent vectors to
:class:`fractions.Fraction` coefficients, so derivative identities hold
exactly; floating point only enters when a derivative tensor is evaluated at
a point.

"""

import json
import math
import logging
import functools
import itertools
from fractions import Fraction
from numbers import Rational, Real
from typing import Dict, Iterable, Tuple

import numpy as np

from .errors import InputError

__all__ = ['Monomial', 'PolynomialPotential', 'as_point', 'evaluate',
           'derivative_tensor', 'derivative_polynomials', 'canonical_cubic',
           'affine_pullback', 'MAX_DEGREE', 'MAX_DIMENSION']
LOG = logging.getLogger(__name__)

MAX_DEGREE = 12
MAX_DIMENSION = 16


def _fraction(value, where=None) -> Fraction:
    if isinstance(value, bool):
        raise InputError("Boolean is not a valid coefficient", where)
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    if isinstance(value, Rational):
        return Fraction(int(value.numerator), int(value.denominator))
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError):
            raise InputError("Invalid rational literal %r" % value, where)
    if isinstance(value, (Real, np.floating, np.integer)):
        value = float(value)
        if not math.isfinite(value):
            raise InputError("Coefficient must be finite", where)
        return Fraction(value)
    raise InputError("Unsupported coefficient type %s" % type(value).__name__, where)


class Monomial:
    """A single term ``coefficient * prod(x_i ** exponents[i])``."""
    __slots__ = ('_exponents', '_coefficient')

    def __init__(self, exponents, coefficient=1):
        exps = tuple(exponents)
        for e in exps:
            if isinstance(e, bool) or not isinstance(e, (int, np.integer)) or e < 0:
                raise InputError("Exponents must be nonnegative integers, got %r" % (exps,))
        self._exponents = tuple(int(e) for e in exps)
        self._coefficient = _fraction(coefficient)

    @property
    def exponents(self) -> Tuple[int, ...]:
        return self._exponents

    @property
    def coefficient(self) -> Fraction:
        return self._coefficient

    @property
    def degree(self) -> int:
        return sum(self._exponents)

    def __eq__(self, other):
        if not isinstance(other, Monomial):
            return NotImplemented
        return (self._exponents, self._coefficient) == (other._exponents, other._coefficient)

    def __hash__(self):
        return hash((self._exponents, self._coefficient))

    def __repr__(self):
        return "<Monomial(%s, %s)>" % (self._exponents, self._coefficient)


class PolynomialPotential:
    """
    Sparse polynomial in ``dimension`` variables ``x1 .. xn``.

    Instances are immutable and hashable; like terms are merged and zero
    coefficients dropped on construction.

    Parameters
    ----------
    dimension : int
    terms : Iterable[Monomial] or Dict[Tuple[int, ...], Rational]

    """

    def __init__(self, dimension: int, terms=()):
        if isinstance(dimension, bool) or not isinstance(dimension, (int, np.integer)) \
                or dimension < 1:
            raise InputError("Polynomial dimension must be a positive integer, "
                             "got %r" % (dimension,))
        self._dimension = int(dimension)
        if isinstance(terms, dict):
            terms = [Monomial(k, v) for k, v in terms.items()]
        acc = {}  # type: Dict[Tuple[int, ...], Fraction]
        for term in terms:
            if not isinstance(term, Monomial):
                term = Monomial(*term)
            if len(term.exponents) != self._dimension:
                raise InputError("Exponent vector %s does not match dimension %d"
                                 % (term.exponents, self._dimension))
            acc[term.exponents] = acc.get(term.exponents, Fraction(0)) + term.coefficient
        self._terms = {k: v for k, v in sorted(acc.items()) if v != 0}
        self._hash = hash((self._dimension, tuple(self._terms.items())))

    @classmethod
    def constant(cls, dimension, value):
        return cls(dimension, {(0,) * dimension: _fraction(value)})

    @classmethod
    def variable(cls, dimension, index):
        if not 0 <= index < dimension:
            raise InputError("Variable index %d out of range" % index)
        exps = [0] * dimension
        exps[index] = 1
        return cls(dimension, {tuple(exps): Fraction(1)})

    @property
    def dimension(self) -> int:
        return self._dimension

    @property
    def terms(self) -> Tuple[Monomial, ...]:
        return tuple(Monomial(k, v) for k, v in self._terms.items())

    @property
    def degree(self) -> int:
        """Total degree; 0 for constants and for the zero polynomial."""
        return max((sum(k) for k in self._terms), default=0)

    def is_zero(self) -> bool:
        return not self._terms

    def coefficient(self, exponents) -> Fraction:
        return self._terms.get(tuple(exponents), Fraction(0))

    def homogeneous_part(self, degree: int) -> 'PolynomialPotential':
        return PolynomialPotential(self._dimension, {k: v for k, v in self._terms.items()
                                                     if sum(k) == degree})

    def is_homogeneous(self, degree: int) -> bool:
        return bool(self._terms) and all(sum(k) == degree for k in self._terms)

    def partial(self, index: int) -> 'PolynomialPotential':
        if not 0 <= index < self._dimension:
            raise InputError("Partial derivative index %d out of range" % index)
        result = {}
        for exps, coeff in self._terms.items():
            e = exps[index]
            if e == 0:
                continue
            lowered = exps[:index] + (e - 1,) + exps[index + 1:]
            result[lowered] = coeff * e
        return PolynomialPotential(self._dimension, result)

    def evaluate(self, point) -> Fraction:
        """Exact value at a point whose float coordinates are taken as exact binary rationals."""
        p = as_point(point, self._dimension)
        coords = [Fraction(float(x)) for x in p]
        total = Fraction(0)
        for exps, coeff in self._terms.items():
            value = coeff
            for x, e in zip(coords, exps):
                if e:
                    value *= x ** e
            total += value
        return total

    def _coerce(self, other):
        if isinstance(other, PolynomialPotential):
            if other.dimension != self._dimension:
                raise InputError("Cannot combine polynomials of dimension %d and %d"
                                 % (self._dimension, other.dimension))
            return other
        return PolynomialPotential.constant(self._dimension, other)

    def __add__(self, other):
        other = self._coerce(other)
        return PolynomialPotential(self._dimension, self.terms + other.terms)

    __radd__ = __add__

    def __neg__(self):
        return PolynomialPotential(self._dimension, {k: -v for k, v in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        result = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                key = tuple(a + b for a, b in zip(e1, e2))
                result[key] = result.get(key, Fraction(0)) + c1 * c2
        return PolynomialPotential(self._dimension, result)

    __rmul__ = __mul__

    def __pow__(self, power: int):
        if not isinstance(power, int) or power < 0:
            raise InputError("Polynomial powers must be nonnegative integers")
        result = PolynomialPotential.constant(self._dimension, 1)
        base = self
        while power:
            if power & 1:
                result = result * base
            base = base * base
            power >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, PolynomialPotential):
            return self._dimension == other._dimension and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == PolynomialPotential.constant(self._dimension, other)
        return NotImplemented

    def __hash__(self):
        return self._hash

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for exps, coeff in sorted(self._terms.items(), key=lambda kv: (-sum(kv[0]), kv[0])):
            factors = ["x%d^%d" % (i + 1, e) if e > 1 else "x%d" % (i + 1)
                       for i, e in enumerate(exps) if e]
            if not factors:
                parts.append(str(coeff))
            elif coeff == 1:
                parts.append("*".join(factors))
            elif coeff == -1:
                parts.append("-" + "*".join(factors))
            else:
                parts.append("%s*%s" % (coeff, "*".join(factors)))
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return "<PolynomialPotential(n=%d): %s>" % (self._dimension, str(self))

    def to_json(self) -> dict:
        return {"dimension": self._dimension,
                "terms": [{"exponents": list(k), "num": v.numerator, "den": v.denominator}
                          for k, v in self._terms.items()]}

    @classmethod
    def from_json(cls, obj, where='potential') -> 'PolynomialPotential':
        """
        Parse the polynomial wire form and enforce the degree and dimension caps.

        Raises
        ------
        InputError
            With a path annotation naming the offending field.

        """
        if not isinstance(obj, dict):
            raise InputError("Polynomial must be a JSON object", where)
        dim = obj.get('dimension')
        if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
            raise InputError("'dimension' must be a positive integer", where + '.dimension')
        if dim > MAX_DIMENSION:
            raise InputError("Dimension %d exceeds the cap of %d" % (dim, MAX_DIMENSION),
                             where + '.dimension')
        terms = obj.get('terms')
        if not isinstance(terms, list):
            raise InputError("'terms' must be a list", where + '.terms')
        seen = set()
        parsed = []
        for i, term in enumerate(terms):
            loc = "%s.terms[%d]" % (where, i)
            if not isinstance(term, dict):
                raise InputError("Term must be a JSON object", loc)
            exps = term.get('exponents')
            if not isinstance(exps, list) or len(exps) != dim:
                raise InputError("'exponents' must be a list of %d integers" % dim,
                                 loc + '.exponents')
            if any(isinstance(e, bool) or not isinstance(e, int) or e < 0 for e in exps):
                raise InputError("Exponents must be nonnegative integers", loc + '.exponents')
            if sum(exps) > MAX_DEGREE:
                raise InputError("Term degree %d exceeds the cap of %d"
                                 % (sum(exps), MAX_DEGREE), loc + '.exponents')
            num, den = term.get('num'), term.get('den', 1)
            for key, val in (('num', num), ('den', den)):
                if isinstance(val, bool) or not isinstance(val, int):
                    raise InputError("'%s' must be an integer" % key, loc + '.' + key)
            if den == 0:
                raise InputError("'den' must be nonzero", loc + '.den')
            key = tuple(exps)
            if key in seen:
                raise InputError("Duplicate exponent vector %s" % (key,), loc)
            seen.add(key)
            parsed.append(Monomial(key, Fraction(num, den)))
        return cls(dim, parsed)

    @classmethod
    def loads(cls, text: str) -> 'PolynomialPotential':
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as e:
            raise InputError("Malformed polynomial JSON: %s" % e.msg,
                             "line %d column %d" % (e.lineno, e.colno))
        return cls.from_json(obj)


def as_point(point, dimension: int) -> np.ndarray:
    """Coerce a coordinate sequence to a finite float vector of the given length."""
    try:
        p = np.asarray(point, dtype=float)
    except (TypeError, ValueError):
        raise InputError("Point coordinates must be real numbers, got %r" % (point,))
    if p.ndim != 1 or p.shape[0] != dimension:
        raise InputError("Point has %s coordinates, expected %d"
                         % (p.shape[0] if p.ndim == 1 else p.shape, dimension))
    if not np.all(np.isfinite(p)):
        raise InputError("Point coordinates must be finite, got %r" % (point,))
    return p


def evaluate(h: PolynomialPotential, point) -> float:
    """Value of ``h`` at ``point``; exact rational sum rounded once to float."""
    return float(h.evaluate(point))


@functools.lru_cache(maxsize=512)
def derivative_polynomials(h: PolynomialPotential, order: int) -> Dict[Tuple[int, ...], PolynomialPotential]:
    """Exact partial derivatives of ``h``, keyed by sorted index tuples."""
    if isinstance(order, bool) or not isinstance(order, int) or order < 1:
        raise InputError("Derivative order must be a positive integer, got %r" % (order,))
    if order == 1:
        return {(i,): h.partial(i) for i in range(h.dimension)}
    lower = derivative_polynomials(h, order - 1)
    result = {}
    for combo in itertools.combinations_with_replacement(range(h.dimension), order):
        result[combo] = lower[combo[:-1]].partial(combo[-1])
    return result


class _DerivativeTable:
    """Float evaluator for all order-k partials, one coefficient row per sorted index tuple."""

    def __init__(self, h: PolynomialPotential, order: int):
        n = h.dimension
        polys = derivative_polynomials(h, order)
        combos = list(polys)
        monomials = sorted({t.exponents for p in polys.values() for t in p.terms})
        column = {e: j for j, e in enumerate(monomials)}
        self.shape = (n,) * order
        self.exponents = np.array(monomials, dtype=np.int64).reshape(len(monomials), n)
        self.coeffs = np.zeros((len(combos), len(monomials)))
        for row, combo in enumerate(combos):
            for t in polys[combo].terms:
                self.coeffs[row, column[t.exponents]] = float(t.coefficient)
        positions, sources = [], []
        for row, combo in enumerate(combos):
            for perm in set(itertools.permutations(combo)):
                positions.append(np.ravel_multi_index(perm, self.shape))
                sources.append(row)
        self.positions = np.array(positions, dtype=np.int64)
        self.sources = np.array(sources, dtype=np.int64)

    def __call__(self, p: np.ndarray) -> np.ndarray:
        mono = np.prod(np.power(p[np.newaxis, :], self.exponents), axis=1)
        values = self.coeffs @ mono
        out = np.empty(int(np.prod(self.shape)))
        out[self.positions] = values[self.sources]
        return out.reshape(self.shape)


@functools.lru_cache(maxsize=512)
def _derivative_table(h: PolynomialPotential, order: int) -> _DerivativeTable:
    return _DerivativeTable(h, order)


def derivative_tensor(h: PolynomialPotential, order: int, point) -> np.ndarray:
    """
    Array of all order-k partials of ``h`` at ``point``.

    Each sorted index tuple is evaluated once and written to every
    permutation, so the result is exactly totally symmetric.

    """
    if isinstance(order, bool) or not isinstance(order, int) or order < 1:
        raise InputError("Derivative order must be a positive integer, got %r" % (order,))
    p = as_point(point, h.dimension)
    return _derivative_table(h, order)(p)


def _fraction_array(values, shape, name):
    try:
        arr = np.array(values, dtype=object)
    except (TypeError, ValueError):
        raise InputError("%s is not a rectangular array" % name)
    if arr.shape != shape:
        raise InputError("%s has shape %s, expected %s" % (name, arr.shape, shape))
    out = np.empty(shape, dtype=object)
    for idx in np.ndindex(*shape):
        out[idx] = _fraction(arr[idx], "%s%s" % (name, list(idx)))
    return out


def canonical_cubic(S, b) -> PolynomialPotential:
    """
    Build ``h = 1/6 S_ijk x^i x^j x^k + 1/2 b_ij x^i x^j``.

    Parameters
    ----------
    S : array_like, shape (n, n, n)
        Totally symmetric cubic coefficients.
    b : array_like, shape (n, n)
        Symmetric quadratic coefficients.

    Raises
    ------
    InputError
        If either input is not (exactly) symmetric.

    """
    try:
        b_arr = np.array(b, dtype=object)
    except (TypeError, ValueError):
        raise InputError("b is not a rectangular array")
    if b_arr.ndim != 2 or b_arr.shape[0] != b_arr.shape[1] or b_arr.shape[0] < 1:
        raise InputError("b must be a square matrix")
    n = b_arr.shape[0]
    S_ = _fraction_array(S, (n, n, n), 'S')
    b_ = _fraction_array(b, (n, n), 'b')
    for i, j, k in itertools.product(range(n), repeat=3):
        for perm in itertools.permutations((i, j, k)):
            if S_[perm] != S_[i, j, k]:
                raise InputError("S is not totally symmetric", "S[%d][%d][%d]" % (i, j, k))
    for i, j in itertools.product(range(n), repeat=2):
        if b_[i, j] != b_[j, i]:
            raise InputError("b is not symmetric", "b[%d][%d]" % (i, j))
    terms = {}
    for i, j, k in itertools.product(range(n), repeat=3):
        exps = [0] * n
        for idx in (i, j, k):
            exps[idx] += 1
        key = tuple(exps)
        terms[key] = terms.get(key, Fraction(0)) + S_[i, j, k] / 6
    for i, j in itertools.product(range(n), repeat=2):
        exps = [0] * n
        exps[i] += 1
        exps[j] += 1
        key = tuple(exps)
        terms[key] = terms.get(key, Fraction(0)) + b_[i, j] / 2
    return PolynomialPotential(n, terms)


def affine_pullback(h: PolynomialPotential, A, c, tol=1e-12) -> PolynomialPotential:
    """
    Compose ``h`` with the affine map ``x -> A x + c``.

    Float entries of ``A`` and ``c`` are taken as exact binary rationals.

    Raises
    ------
    InputError
        If ``A`` is (numerically) singular or shapes do not match.

    """
    n = h.dimension
    A_ = _fraction_array(A, (n, n), 'A')
    c_ = _fraction_array(c, (n,), 'c')
    A_float = np.array(A_, dtype=float)
    scale = np.prod([max(np.max(np.abs(row)), 1e-300) for row in A_float])
    det = np.linalg.det(A_float)
    if abs(det) <= tol * scale:
        raise InputError("Affine map is singular (det=%.3e)" % det)
    images = []
    for i in range(n):
        lin = PolynomialPotential.constant(n, c_[i])
        for j in range(n):
            if A_[i, j] != 0:
                lin = lin + PolynomialPotential.variable(n, j) * A_[i, j]
        images.append(lin)
    powers = {}

    def _power(i, e):
        if (i, e) not in powers:
            powers[(i, e)] = images[i] ** e
        return powers[(i, e)]

    result = PolynomialPotential(n)
    for term in h.terms:
        acc = PolynomialPotential.constant(n, term.coefficient)
        for i, e in enumerate(term.exponents):
            if e:
                acc = acc * _power(i, e)
        result = result + acc
    LOG.debug("Affine pullback produced %d terms from %d", len(result.terms), len(h.terms))
    return result

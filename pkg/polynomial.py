"""
Dense real polynomials in ascending coefficient order
coeffs[k] multiplies s^k; every value is canonical (no trailing zeros)
"""

import logging
import math
import numbers
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as P

import config
from errors import DomainError, NumericalError, ParameterError

logger = logging.getLogger(__name__)

# Degree of the zero polynomial
ZERO_DEGREE = float('-inf')


def _canonical(coeffs):
    """Trim trailing coefficients that are negligible against the largest one"""
    arr = np.asarray(coeffs, dtype=float).ravel()
    if arr.size == 0:
        return ()
    if not np.all(np.isfinite(arr)):
        raise ParameterError(f"Non-finite polynomial coefficients: {arr.tolist()}")

    scale = float(np.max(np.abs(arr)))
    if scale == 0.0:
        return ()

    threshold = config.POLYNOMIAL_CONFIG['trim_tolerance'] * scale
    last = arr.size - 1
    while last >= 0 and abs(arr[last]) < threshold:
        last -= 1
    return tuple(float(c) for c in arr[:last + 1])


@dataclass(frozen=True)
class Polynomial:
    """Immutable real polynomial; Polynomial([1, 2]) is 1 + 2s"""

    coeffs: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, 'coeffs', _canonical(self.coeffs))

    @classmethod
    def zero(cls):
        return cls(())

    @classmethod
    def constant(cls, value):
        return cls((value,))

    @property
    def degree(self):
        if not self.coeffs:
            return ZERO_DEGREE
        return len(self.coeffs) - 1

    @property
    def is_zero(self):
        return not self.coeffs

    @property
    def leading(self):
        return self.coeffs[-1] if self.coeffs else 0.0

    def as_array(self, length=None):
        """Coefficients as a float array, zero-padded to length"""
        arr = np.array(self.coeffs, dtype=float)
        if length is not None and length > arr.size:
            arr = np.concatenate([arr, np.zeros(length - arr.size)])
        return arr

    def derivative(self):
        if self.degree == ZERO_DEGREE or self.degree == 0:
            return Polynomial.zero()
        return Polynomial(P.polyder(self.as_array()))

    def __call__(self, z):
        return evaluate(self, z)

    def __add__(self, other):
        if isinstance(other, numbers.Real):
            other = Polynomial.constant(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        if isinstance(other, numbers.Real):
            other = Polynomial.constant(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return sub(self, other)

    def __mul__(self, other):
        if isinstance(other, numbers.Real):
            return Polynomial(tuple(other * c for c in self.coeffs))
        if not isinstance(other, Polynomial):
            return NotImplemented
        return mul(self, other)

    __rmul__ = __mul__

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0.0:
                continue
            if k == 0:
                terms.append(f"{c:g}")
            elif k == 1:
                terms.append(f"{c:g} s")
            else:
                terms.append(f"{c:g} s^{k}")
        return " + ".join(terms)


# ============================================================================
# Ring operations
# ============================================================================

def add(a, b):
    """Coefficient-wise sum"""
    if a.is_zero:
        return b
    if b.is_zero:
        return a
    return Polynomial(P.polyadd(a.as_array(), b.as_array()))


def sub(a, b):
    if b.is_zero:
        return a
    if a.is_zero:
        return -b
    return Polynomial(P.polysub(a.as_array(), b.as_array()))


def mul(a, b):
    """Convolution of the coefficient lists"""
    if a.is_zero or b.is_zero:
        return Polynomial.zero()
    return Polynomial(P.polymul(a.as_array(), b.as_array()))


def convex_combination(p0, p1, lam):
    """(1 - lam) p0 + lam p1 for lam in [0, 1]"""
    if not 0.0 <= lam <= 1.0:
        raise ParameterError(f"Convex weight {lam} outside [0, 1]")
    if lam == 0.0:
        return p0
    if lam == 1.0:
        return p1
    length = max(len(p0.coeffs), len(p1.coeffs))
    return Polynomial((1.0 - lam) * p0.as_array(length) + lam * p1.as_array(length))


# ============================================================================
# Evaluation
# ============================================================================

def evaluate(p, z):
    """
    Horner evaluation at a complex point (or elementwise on an array of points)
    """
    if np.ndim(z) == 0:
        acc = 0j
        for c in reversed(p.coeffs):
            acc = acc * z + c
        return complex(acc)

    z = np.asarray(z, dtype=complex)
    if p.is_zero:
        return np.zeros(z.shape, dtype=complex)
    return P.polyval(z, np.array(p.coeffs, dtype=float))


def compose_affine(p, a, b):
    """
    Coefficients (ascending, complex) of q(t) = p(a + b t)
    """
    if p.is_zero:
        return np.zeros(1, dtype=complex)
    q = np.array([p.coeffs[-1]], dtype=complex)
    step = np.array([a, b], dtype=complex)
    for c in reversed(p.coeffs[:-1]):
        q = P.polyadd(P.polymul(q, step), [c])
    return q


def cauchy_bound(p):
    """Every root r of p satisfies |r| <= 1 + max_k |c_k / c_d|"""
    if p.is_zero:
        raise DomainError("Cauchy bound of the zero polynomial")
    if p.degree == 0:
        return 0.0
    lead = abs(p.leading)
    return 1.0 + max(abs(c) for c in p.coeffs[:-1]) / lead


# ============================================================================
# Roots
# ============================================================================

def _residual_scale(coeffs, r):
    """Sum |c_k| |r|^k, the natural scale of a residual at r"""
    return float(P.polyval(abs(r), np.abs(coeffs)))


def roots(p):
    """
    All deg(p) roots with multiplicity

    Companion-matrix eigenvalues followed by Newton polishing. Every returned
    root r satisfies |p(r)| <= residual_tolerance * sum |c_k| |r|^k, otherwise
    NumericalError is raised.
    """
    if p.is_zero:
        raise DomainError("Roots of the zero polynomial are undefined")
    if p.degree == 0:
        return []

    coeffs = np.array(p.coeffs, dtype=float)

    # Exact zeros at the constant end are roots at the origin
    zero_count = 0
    while coeffs[zero_count] == 0.0:
        zero_count += 1
    core = coeffs[zero_count:]
    n = core.size - 1

    found = [0j] * zero_count
    if n >= 1:
        eig = np.linalg.eigvals(P.polycompanion(core))
        found.extend(_polish(Polynomial(core), eig))

    tolerance = config.POLYNOMIAL_CONFIG['residual_tolerance']
    for r in found:
        residual = abs(P.polyval(r, coeffs))
        scale = _residual_scale(coeffs, r)
        if residual > tolerance * max(scale, np.finfo(float).tiny):
            logger.error(f"Root {r} of {p} fails residual check ({residual:.3e} vs scale {scale:.3e})")
            raise NumericalError(
                f"Root finder did not converge for {p}: residual {residual:.3e} at {r}"
            )

    return sorted(found, key=lambda r: (r.real, r.imag))


def _polish(p, estimates):
    """Newton steps that are kept only while they shrink the residual"""
    coeffs = p.as_array()
    deriv = p.derivative().as_array()
    polished = []
    for r in estimates:
        r = complex(r)
        best = abs(P.polyval(r, coeffs))
        for _ in range(config.POLYNOMIAL_CONFIG['polish_iterations']):
            if best == 0.0:
                break
            slope = P.polyval(r, deriv)
            if slope == 0:
                break
            candidate = r - P.polyval(r, coeffs) / slope
            value = abs(P.polyval(candidate, coeffs))
            if not math.isfinite(value) or value >= best:
                break
            r, best = complex(candidate), value
        polished.append(r)
    return polished

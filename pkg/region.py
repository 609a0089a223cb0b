"""
Stability regions D

Open, simply-connected subsets of the complex plane with membership tests and
boundary parametrizations. The native sweep parameter of each kind:

    hurwitz            z = i t                      (Re z < 0)
    shifted(sigma)     z = -sigma + i t             (Re z < -sigma)
    disk               z = exp(i t), t in [0, 2pi)  (|z| < 1)
    sector(phi)        z = |t| exp(i sign(t) (pi - phi))
                       (|arg(-z)| < phi, the vertex 0 excluded)
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as P

from errors import ParameterError
from polynomial import compose_affine

logger = logging.getLogger(__name__)

HURWITZ = 'hurwitz'
DISK = 'disk'
SHIFTED = 'shifted'
SECTOR = 'sector'

KINDS = (HURWITZ, DISK, SHIFTED, SECTOR)

# Points within this relative distance of a curved boundary count as boundary
BOUNDARY_EPS = 1e-14


@dataclass(frozen=True)
class Region:
    kind: str
    sigma: float = 0.0
    phi: float = math.pi / 2

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ParameterError(f"Unknown region kind: {self.kind}")
        if self.kind == SHIFTED and not self.sigma >= 0.0:
            raise ParameterError(f"Shift must be non-negative, got {self.sigma}")
        if self.kind == SECTOR:
            if not 0.0 < self.phi <= math.pi / 2:
                raise ParameterError(f"Sector half-angle must lie in (0, pi/2], got {self.phi}")
            if self.phi == math.pi / 2:
                # The right-angle sector is the open left half-plane
                object.__setattr__(self, 'kind', HURWITZ)

    @property
    def is_bounded(self):
        return self.kind == DISK

    def __str__(self):
        return region_name(self)


def hurwitz():
    return Region(HURWITZ)


def disk():
    return Region(DISK)


def shifted(sigma):
    return Region(SHIFTED, sigma=float(sigma))


def sector(phi):
    return Region(SECTOR, phi=float(phi))


def parse_region(text):
    """
    Parse a region name: "hurwitz", "disk", "shifted:<sigma>", "sector:<phi-radians>"
    """
    name, _, arg = text.strip().partition(':')
    name = name.lower()
    try:
        if name == HURWITZ and not arg:
            return hurwitz()
        if name == DISK and not arg:
            return disk()
        if name == SHIFTED and arg:
            return shifted(float(arg))
        if name == SECTOR and arg:
            return sector(float(arg))
    except ValueError as e:
        raise ParameterError(f"Invalid region '{text}': {e}") from e
    raise ParameterError(f"Invalid region '{text}' (expected hurwitz, disk, shifted:<sigma> or sector:<phi>)")


def region_name(r):
    if r.kind == SHIFTED:
        return f"shifted:{r.sigma!r}"
    if r.kind == SECTOR:
        return f"sector:{r.phi!r}"
    return r.kind


# ============================================================================
# Membership
# ============================================================================

def contains(r, z):
    """Strict membership in the open region (elementwise on arrays)"""
    scalar = np.ndim(z) == 0
    z = np.asarray(z, dtype=complex)

    if r.kind == HURWITZ:
        inside = z.real < 0.0
    elif r.kind == SHIFTED:
        inside = z.real < -r.sigma
    elif r.kind == DISK:
        inside = np.abs(z) < 1.0 - BOUNDARY_EPS
    else:
        angle = np.abs(np.angle(-z))
        inside = (z != 0) & (angle < r.phi * (1.0 - BOUNDARY_EPS))

    return bool(inside) if scalar else inside


def boundary_distance(r, z):
    """Euclidean distance from z to the boundary of r"""
    z = complex(z)
    if r.kind == HURWITZ:
        return abs(z.real)
    if r.kind == SHIFTED:
        return abs(z.real + r.sigma)
    if r.kind == DISK:
        return abs(abs(z) - 1.0)

    best = math.inf
    for sign in (1.0, -1.0):
        direction = complex(math.cos(math.pi - r.phi), sign * math.sin(math.pi - r.phi))
        t = max(0.0, (z * direction.conjugate()).real)
        best = min(best, abs(z - t * direction))
    return best


# ============================================================================
# Boundary parametrization
# ============================================================================

def boundary_map(r, t):
    """Map native sweep parameters to boundary points (elementwise)"""
    t = np.asarray(t, dtype=float)
    if r.kind == HURWITZ:
        return 1j * t
    if r.kind == SHIFTED:
        return -r.sigma + 1j * t
    if r.kind == DISK:
        return np.cos(t) + 1j * np.sin(t)

    angle = math.pi - r.phi
    return np.abs(t) * (math.cos(angle) + 1j * np.sign(t) * math.sin(angle))


def boundary_parameters(r, count, sweep_limit=1.0):
    """Uniform native parameters: [0, 2pi) for the disk, [-limit, limit] otherwise"""
    if count < 2:
        raise ParameterError(f"Boundary sample count must be at least 2, got {count}")
    if r.kind == DISK:
        return 2.0 * math.pi * np.arange(count) / count
    if not sweep_limit > 0.0:
        raise ParameterError(f"Sweep limit must be positive, got {sweep_limit}")
    return np.linspace(-sweep_limit, sweep_limit, count)


def boundary_points(r, count, sweep_limit=1.0):
    """Ordered samples of the boundary of r"""
    z = boundary_map(r, boundary_parameters(r, count, sweep_limit))
    return [complex(v) for v in z]


def real_axis_parameters(r):
    """Native parameters where the boundary meets the real axis"""
    if r.kind == DISK:
        return [0.0, math.pi]
    return [0.0]


def upper_parameter_range(r, sweep_limit):
    """Native parameter interval covering the boundary with Im z >= 0"""
    if r.kind == DISK:
        return 0.0, math.pi
    return 0.0, sweep_limit


def boundary_restriction(r, p, degree=None):
    """
    Restrict p to the upper half of the boundary

    Returns (E, O, to_native): real ascending coefficient arrays in a parameter
    u >= 0 and the map from u to the native sweep parameter, such that
    p(z(u)) = kappa(u) * (E(u) + i O(u)). kappa depends only on u and the common
    degree, so Im(p_a conj p_b) has the sign of O_a E_b - E_a O_b for any two
    polynomials restricted with the same degree.
    """
    if r.kind == HURWITZ:
        q = compose_affine(p, 0.0, 1j)
        to_native = _identity
    elif r.kind == SHIFTED:
        q = compose_affine(p, -r.sigma, 1j)
        to_native = _identity
    elif r.kind == SECTOR:
        angle = math.pi - r.phi
        q = compose_affine(p, 0.0, complex(math.cos(angle), math.sin(angle)))
        to_native = _identity
    else:
        # z = (1 + iu) / (1 - iu) = exp(2i atan u); p(z) (1 - iu)^d = q(u)
        d = p.degree if degree is None else degree
        d = max(int(d), 0) if p.coeffs else 0
        q = np.zeros(1, dtype=complex)
        for k, c in enumerate(p.coeffs):
            term = P.polymul(P.polypow([1.0, 1j], k), P.polypow([1.0, -1j], d - k))
            q = P.polyadd(q, c * term)
        to_native = _tangent_to_angle

    q = np.atleast_1d(np.asarray(q, dtype=complex))
    return q.real.copy(), q.imag.copy(), to_native


def _identity(u):
    return np.asarray(u, dtype=float)


def _tangent_to_angle(u):
    return 2.0 * np.arctan(np.asarray(u, dtype=float))

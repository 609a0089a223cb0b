"""
Stability decision engine

Member tests (roots against the region), one-parameter segment tests, zero
exclusion over the lambda-hypercube of a critical family, the family driver
and the brute-force Monte Carlo oracle.

Zero exclusion at a boundary point z works on the 2^k corner values of
det(z; lambda) over the k active rows. det(z; lambda) is multi-affine, so its
values over any sub-box are convex combinations of that sub-box's corner
values: their bounding rectangle and convex hull both enclose the value set.
Sub-box corners are obtained from the root corners by multilinear
interpolation, so no polynomial work is repeated during bisection.
"""

import itertools
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields

import numpy as np
from numpy.polynomial import polynomial as P

import config
import critical_set as cs
import determinant
import family as fam
import region as reg
from errors import CapacityError, DomainError, NumericalError, ParameterError
from polynomial import cauchy_bound, evaluate, roots
from robust_helpers import validate_range

logger = logging.getLogger(__name__)

STABLE = 'stable'
UNSTABLE = 'unstable'
INCONCLUSIVE = 'inconclusive'

# Collinearity roots are folded into the sweep for at most this many corners
MAX_COLLINEAR_CORNERS = 16

# Real-root acceptance for sweep polynomials
REAL_ROOT_TOL = 1e-8

# Candidate zeros passed to the root check per search
ZERO_CANDIDATES = 3


# ============================================================================
# Configuration and results
# ============================================================================

@dataclass(frozen=True)
class CheckerConfig:
    boundary_count: int = config.CHECKER_CONFIG['boundary_count']
    sweep_multiple: float = config.CHECKER_CONFIG['sweep_multiple']
    sweep_limit: object = config.CHECKER_CONFIG['sweep_limit']
    max_depth: int = config.CHECKER_CONFIG['max_depth']
    exclusion_margin: float = config.CHECKER_CONFIG['exclusion_margin']
    oracle_samples: int = config.CHECKER_CONFIG['oracle_samples']
    seed: int = config.CHECKER_CONFIG['seed']
    marginal_tol: float = config.CHECKER_CONFIG['marginal_tol']
    refine_rounds: int = config.CHECKER_CONFIG['refine_rounds']
    refine_fraction: float = config.CHECKER_CONFIG['refine_fraction']
    degree_samples: int = config.CHECKER_CONFIG['degree_samples']
    box_budget: int = config.CHECKER_CONFIG['box_budget']
    budget: int = config.CHECKER_CONFIG['budget']
    workers: int = config.CHECKER_CONFIG['workers']

    def __post_init__(self):
        if self.boundary_count < 2:
            raise ParameterError(f"boundary_count must be at least 2, got {self.boundary_count}")
        for name in ('sweep_multiple', 'exclusion_margin', 'marginal_tol'):
            if not getattr(self, name) > 0:
                raise ParameterError(f"{name} must be positive, got {getattr(self, name)}")
        if self.sweep_limit is not None and not self.sweep_limit > 0:
            raise ParameterError(f"sweep_limit must be positive, got {self.sweep_limit}")
        for name in ('max_depth', 'box_budget', 'budget', 'workers'):
            if getattr(self, name) < 1:
                raise ParameterError(f"{name} must be at least 1, got {getattr(self, name)}")
        for name in ('oracle_samples', 'seed', 'refine_rounds', 'degree_samples'):
            if getattr(self, name) < 0:
                raise ParameterError(f"{name} must be non-negative, got {getattr(self, name)}")
        ok, message = validate_range(self.refine_fraction, 0.0, 1.0, 'refine_fraction')
        if not ok or self.refine_fraction == 0.0:
            raise ParameterError(message or "refine_fraction must be positive")

    @classmethod
    def from_mapping(cls, mapping):
        """Build from a dict of CHECKER_CONFIG keys; unknown keys are rejected"""
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(mapping) - known)
        if unknown:
            raise ParameterError(f"Unknown checker settings: {', '.join(unknown)}")
        values = {}
        for f in fields(cls):
            if f.name not in mapping:
                continue
            value = mapping[f.name]
            try:
                if f.name == 'sweep_limit':
                    values[f.name] = None if value is None else float(value)
                elif isinstance(f.default, int):
                    if isinstance(value, bool) or float(value) != int(value):
                        raise ParameterError(f"{f.name} must be an integer, got {value!r}")
                    values[f.name] = int(value)
                else:
                    values[f.name] = float(value)
            except (TypeError, ValueError) as e:
                if isinstance(e, ParameterError):
                    raise
                raise ParameterError(f"Invalid value for {f.name}: {value!r}") from e
        return cls(**values)

    def replace(self, **changes):
        data = asdict(self)
        data.update({k: v for k, v in changes.items() if v is not None})
        return CheckerConfig.from_mapping(data)

    def to_dict(self):
        return asdict(self)


@dataclass
class Witness:
    """
    Member that is not D-stable

    lambdas are the edge parameters of the critical family (None for oracle
    witnesses), params the per-cell parameter grid of the checked family.
    """
    params: object = None
    root: object = None
    marginal: bool = False
    lambdas: object = None
    boundary_point: object = None
    critical_index: object = None
    critical_family: object = None

    def to_dict(self):
        return {
            'params': self.params,
            'root': self.root,
            'marginal': self.marginal,
            'lambdas': self.lambdas,
            'boundary_point': self.boundary_point,
            'critical_index': self.critical_index,
            'critical_family': self.critical_family,
        }


@dataclass
class Verdict:
    status: str
    witness: object = None
    diagnostics: dict = field(default_factory=dict)
    reason: object = None
    label: object = None
    marginal: bool = False

    @property
    def is_stable(self):
        return self.status == STABLE

    def to_dict(self):
        return {
            'status': self.status,
            'label': self.label,
            'reason': self.reason,
            'marginal': self.marginal,
            'witness': self.witness.to_dict() if self.witness is not None else None,
            'diagnostics': self.diagnostics,
        }


def _config(cfg):
    return CheckerConfig() if cfg is None else cfg


def _stable(diagnostics, label):
    return Verdict(STABLE, diagnostics=diagnostics, label=label)


def _unstable(witness, diagnostics):
    where = 'on the boundary of D' if witness.marginal else 'outside D'
    return Verdict(
        UNSTABLE,
        witness=witness,
        diagnostics=diagnostics,
        label=f"unstable: a member has a root {where}",
        marginal=witness.marginal,
    )


def _inconclusive(reason, diagnostics):
    return Verdict(INCONCLUSIVE, diagnostics=diagnostics, reason=reason, label=f"inconclusive: {reason}")


_SUMMED = ('families_checked', 'boundary_points', 'critical_points', 'boxes', 'unresolved_points')


def _merge_diagnostics(a, b):
    merged = dict(a)
    for key, value in b.items():
        if key in _SUMMED:
            merged[key] = merged.get(key, 0) + value
        elif key == 'max_depth_reached':
            merged[key] = max(merged.get(key, 0), value)
        elif key == 'min_exclusion':
            merged[key] = min(merged.get(key, math.inf), value)
        else:
            merged.setdefault(key, value)
    return merged


def _witness_order(v):
    index = v.witness.critical_index if v.witness is not None else None
    return math.inf if index is None else index


def merge_verdicts(a, b):
    """
    Aggregate two verdicts: any unstable wins, then any inconclusive, else stable

    Ties keep the witness with the lower critical index, so the merge is
    associative and commutative.
    """
    diagnostics = _merge_diagnostics(a.diagnostics, b.diagnostics)
    if UNSTABLE in (a.status, b.status):
        pick = min((v for v in (a, b) if v.status == UNSTABLE), key=_witness_order)
        return _unstable(pick.witness, diagnostics)
    if INCONCLUSIVE in (a.status, b.status):
        pick = min(
            (v for v in (a, b) if v.status == INCONCLUSIVE),
            key=lambda v: (v.diagnostics.get('first_index', math.inf), v.reason or ''),
        )
        merged = _inconclusive(pick.reason, diagnostics)
        merged.diagnostics['first_index'] = pick.diagnostics.get('first_index', math.inf)
        return merged
    return _stable(diagnostics, a.label or b.label)


# ============================================================================
# Member tests
# ============================================================================

def is_stable(p, r):
    """True iff every root of p lies in the open region r"""
    if p.is_zero:
        raise DomainError("Stability of the zero polynomial is undefined")
    return all(reg.contains(r, z) for z in roots(p))


def member_check(p, r, marginal_tol=None):
    """
    (stable, root, marginal) for one determinant

    Roots within marginal_tol of the boundary make the member not D-stable.
    root is the first offending root, preferring roots strictly outside D;
    marginal is True when every offending root lies in the boundary band.
    """
    tol = config.CHECKER_CONFIG['marginal_tol'] if marginal_tol is None else marginal_tol
    if p.is_zero:
        return False, None, False

    outside = None
    band = None
    for z in roots(p):
        inside = reg.contains(r, z)
        near = reg.boundary_distance(r, z) <= tol
        if not inside and not near and outside is None:
            outside = z
        elif near and band is None:
            band = z
    if outside is not None:
        return False, outside, False
    if band is not None:
        return False, band, True
    return True, None, False


def routh_hurwitz_stable(coeffs):
    """
    Hurwitz stability by the Routh array, vectorized over rows of ascending coefficients

    A row is stable iff the leading coefficient is nonzero and the first column
    of its Routh array keeps one strict sign. Zero pivots count as unstable.
    """
    c = np.atleast_2d(np.asarray(coeffs, dtype=float))
    high = c[:, ::-1].copy()
    lead = high[:, 0]
    valid = lead != 0.0
    high = np.where((lead < 0.0)[:, None], -high, high)

    d = high.shape[1] - 1
    if d == 0:
        return valid
    stable = valid & np.all(high > 0.0, axis=1)

    width = d // 2 + 1
    prev = np.zeros((c.shape[0], width + 1))
    cur = np.zeros((c.shape[0], width + 1))
    prev[:, :high[:, 0::2].shape[1]] = high[:, 0::2]
    cur[:, :high[:, 1::2].shape[1]] = high[:, 1::2]

    for _ in range(d):
        pivot = cur[:, 0]
        stable &= pivot > 0.0
        safe = np.where(pivot > 0.0, pivot, 1.0)
        nxt = np.zeros_like(prev)
        nxt[:, :-1] = prev[:, 1:] - (prev[:, 0] / safe)[:, None] * cur[:, 1:]
        prev, cur = cur, nxt
    return stable


# ============================================================================
# Corner geometry of a critical family
# ============================================================================

class _Corners:
    """Corner determinants of a critical family over its active rows"""

    def __init__(self, cf):
        self.cf = cf
        self.active = cf.active_rows
        self.k = len(self.active)
        self.bits = np.array(list(itertools.product((0, 1), repeat=self.k)), dtype=bool).reshape(2 ** self.k, self.k)
        self.polys = [determinant.det(cf.instantiate(self.full(bits))) for bits in self.bits]

    def full(self, local):
        """Edge parameters of every row from values on the active rows"""
        lams = np.zeros(self.cf.n)
        lams[list(self.active)] = np.asarray(local, dtype=float)
        return lams

    def values(self, z):
        """(len(z), 2^k) corner determinant values"""
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        return np.stack([evaluate(p, z) for p in self.polys], axis=1)

    def interpolate(self, corner_values, points):
        """det(z; lambda) at local points (P, k) from the root corner values (2^k,)"""
        points = np.atleast_2d(points)
        weights = np.where(self.bits[None, :, :], points[:, None, :], 1.0 - points[:, None, :]).prod(axis=2)
        return weights @ corner_values

    def box_corners(self, lo, hi):
        return lo + self.bits * (hi - lo)


def _degree_check(corners):
    """
    None when deg det is constant on the hypercube, else (reason, local lambdas)

    The leading coefficient is multi-affine in lambda, so it keeps its sign on
    the box iff all corners share degree and leading sign.
    """
    degrees = [p.degree for p in corners.polys]
    if any(p.is_zero for p in corners.polys):
        index = next(i for i, p in enumerate(corners.polys) if p.is_zero)
        return "det vanishes identically at a corner", corners.bits[index].astype(float)
    if len(set(degrees)) > 1:
        index = int(np.argmin(degrees))
        return f"deg(det) drops to {degrees[index]} at a corner", corners.bits[index].astype(float)

    signs = [math.copysign(1.0, p.leading) for p in corners.polys]
    if len(set(signs)) > 1:
        for a, b in itertools.combinations(range(len(signs)), 2):
            diff = corners.bits[a] ^ corners.bits[b]
            if signs[a] != signs[b] and diff.sum() == 1:
                la, lb = corners.polys[a].leading, corners.polys[b].leading
                t = la / (la - lb)
                local = corners.bits[a].astype(float)
                local[np.argmax(diff)] = t if corners.bits[b][np.argmax(diff)] else 1.0 - t
                return "leading coefficient of det changes sign", local
    return None


def _sweep_limit(corners, r, cfg):
    """Sweep limit beyond which no member can have a root"""
    if r.is_bounded:
        return None
    if cfg.sweep_limit is not None:
        return float(cfg.sweep_limit)
    d = corners.polys[0].degree
    if d < 1:
        return cfg.sweep_multiple
    arrays = np.array([p.as_array(d + 1) for p in corners.polys])
    lead = np.min(np.abs(arrays[:, d]))
    bound = 1.0 + np.max(np.abs(arrays[:, :d])) / lead
    return float(cfg.sweep_multiple * (1.0 + bound))


def _real_roots(c):
    c = np.asarray(c, dtype=float)
    scale = np.max(np.abs(c)) if c.size else 0.0
    if scale == 0.0:
        return []
    keep = np.nonzero(np.abs(c) >= 1e-12 * scale)[0]
    c = c[:keep[-1] + 1]
    if c.size < 2:
        return []
    out = []
    for z in P.polyroots(c):
        if abs(z.imag) <= REAL_ROOT_TOL * max(1.0, abs(z)) and z.real >= -REAL_ROOT_TOL:
            out.append(max(z.real, 0.0))
    return out


def _critical_parameters(corners, r, lo, hi):
    """Native parameters where two corner values become collinear with 0"""
    polys = corners.polys
    if len(polys) < 2 or len(polys) > MAX_COLLINEAR_CORNERS:
        return np.array([])
    degree = polys[0].degree
    parts = [reg.boundary_restriction(r, p, degree) for p in polys]
    to_native = parts[0][2]

    found = []
    for (ea, oa, _), (eb, ob, _) in itertools.combinations(parts, 2):
        c = P.polysub(P.polymul(oa, eb), P.polymul(ea, ob))
        if np.max(np.abs(c)) <= 1e-12 * max(np.max(np.abs(ea)), np.max(np.abs(oa)), 1.0) ** 2:
            # always collinear: the segment passes 0 where the values turn opposite
            c = P.polyadd(P.polymul(ea, eb), P.polymul(oa, ob))
        found.extend(_real_roots(c))

    if not found:
        return np.array([])
    t = to_native(np.array(found))
    return t[(t >= lo) & (t <= hi)]


def _hull_distance(values):
    """
    Distance from 0 to the convex hull of each row of values (0.0 inside)

    Outside the hull the distance is the smallest point-to-segment distance over
    all pairs, since hull edges are among the pairs.
    """
    values = np.atleast_2d(values)
    count = values.shape[1]
    if count == 1:
        return np.abs(values[:, 0])

    ia, ib = np.triu_indices(count, 1)
    a = values[:, ia]
    d = values[:, ib] - a
    dd = np.abs(d) ** 2
    t = np.where(dd > 0.0, -np.real(np.conj(d) * a) / np.where(dd > 0.0, dd, 1.0), 0.0)
    dist = np.abs(a + np.clip(t, 0.0, 1.0) * d).min(axis=1)

    # 0 is outside the hull iff the values fit in an open half-plane
    angles = np.sort(np.angle(values), axis=1)
    gaps = np.diff(angles, axis=1).max(axis=1)
    wrap = 2.0 * math.pi - (angles[:, -1] - angles[:, 0])
    outside = np.maximum(gaps, wrap) > math.pi
    return np.where(outside, dist, 0.0)


def _rect_distance(values):
    """Distance from 0 to the bounding rectangle of values"""
    re_lo, re_hi = values.real.min(), values.real.max()
    im_lo, im_hi = values.imag.min(), values.imag.max()
    dx = max(re_lo, -re_hi, 0.0)
    dy = max(im_lo, -im_hi, 0.0)
    return math.hypot(dx, dy)


def _scale(values):
    s = np.max(np.abs(np.atleast_2d(values)), axis=1)
    return np.where(s > 0.0, s, 1.0)


def det_enclosure(cf, z, box=None):
    """
    Rectangular enclosure (re_lo, re_hi, im_lo, im_hi) of det(z; lambda) over a box

    box is (lo, hi) over all n rows, the unit hypercube by default.
    """
    corners = _Corners(cf)
    values = corners.values(complex(z))[0]
    if box is None:
        sub = values
    else:
        lo = np.asarray(box[0], dtype=float)[list(corners.active)]
        hi = np.asarray(box[1], dtype=float)[list(corners.active)]
        sub = corners.interpolate(values, corners.box_corners(lo, hi))
    return float(sub.real.min()), float(sub.real.max()), float(sub.imag.min()), float(sub.imag.max())


# ============================================================================
# Zero search inside a box
# ============================================================================

def _zero_candidates(corners, values, lo, hi):
    """
    Local lambdas where det(z; lambda) is closest to 0 along axis lines and
    axis planes through the box center and corners

    On a plane (a, b) the determinant is bilinear, c0 + c1 u + c2 v + c3 u v,
    and its zeros solve Im((c0 + c1 u) conj(c2 + c3 u)) = 0 for real u.
    """
    k = corners.k
    anchors = [(lo + hi) / 2.0] + list(corners.box_corners(lo, hi)[:8])
    candidates = []

    for anchor in anchors:
        for a in range(k):
            pts = np.array([anchor, anchor])
            pts[0, a], pts[1, a] = lo[a], hi[a]
            f0, f1 = corners.interpolate(values, pts)
            c1 = f1 - f0
            u = 0.0 if c1 == 0 else float(np.clip(-np.real(f0 * np.conj(c1)) / abs(c1) ** 2, 0.0, 1.0))
            point = anchor.copy()
            point[a] = lo[a] + u * (hi[a] - lo[a])
            candidates.append(point)

        for a, b in itertools.combinations(range(k), 2):
            pts = np.array([anchor] * 4)
            for row, (ua, ub) in enumerate(((0, 0), (1, 0), (0, 1), (1, 1))):
                pts[row, a] = hi[a] if ua else lo[a]
                pts[row, b] = hi[b] if ub else lo[b]
            f00, f10, f01, f11 = corners.interpolate(values, pts)
            c0, c1, c2, c3 = f00, f10 - f00, f01 - f00, f11 - f10 - f01 + f00
            q = [
                np.imag(c0 * np.conj(c2)),
                np.imag(c1 * np.conj(c2) + c0 * np.conj(c3)),
                np.imag(c1 * np.conj(c3)),
            ]
            for u in _real_roots(q) or [0.0, 0.5, 1.0]:
                if u > 1.0 + REAL_ROOT_TOL:
                    continue
                u = min(u, 1.0)
                den = c2 + c3 * u
                if abs(den) == 0.0:
                    continue
                v = -(c0 + c1 * u) / den
                if not -REAL_ROOT_TOL <= v.real <= 1.0 + REAL_ROOT_TOL:
                    continue
                point = anchor.copy()
                point[a] = lo[a] + u * (hi[a] - lo[a])
                point[b] = lo[b] + float(np.clip(v.real, 0.0, 1.0)) * (hi[b] - lo[b])
                candidates.append(point)

    if not candidates:
        return []
    candidates = np.array(candidates)
    size = np.abs(corners.interpolate(values, candidates))
    order = np.argsort(size, kind='stable')
    return [candidates[i] for i in order[:ZERO_CANDIDATES]]


def _member_witness(corners, local, r, cfg, z=None):
    """Witness at local lambdas when that member is not D-stable"""
    lams = np.clip(corners.full(local), 0.0, 1.0)
    p = determinant.det(corners.cf.instantiate(lams))
    stable, root, marginal = member_check(p, r, cfg.marginal_tol)
    if stable:
        return None
    return Witness(
        lambdas=[float(x) for x in lams],
        root=root,
        marginal=marginal,
        boundary_point=None if z is None else complex(z),
    )


def _exclude_at(corners, values, z, r, cfg, stats):
    """
    Bisect the active hypercube at one boundary point

    Returns ('excluded', None), ('witness', Witness) or ('unresolved', reason).
    """
    k = corners.k
    margin = cfg.exclusion_margin * float(np.max(np.abs(values)) or 1.0)

    for local in _zero_candidates(corners, values, np.zeros(k), np.ones(k)):
        hit = _member_witness(corners, local, r, cfg, z)
        if hit is not None:
            return 'witness', hit

    stack = [(np.zeros(k), np.ones(k), 0)]
    boxes = 0
    while stack:
        lo, hi, depth = stack.pop()
        boxes += 1
        stats['max_depth_reached'] = max(stats['max_depth_reached'], depth)
        sub = corners.interpolate(values, corners.box_corners(lo, hi))
        if _rect_distance(sub) > margin or _hull_distance(sub[None, :])[0] > margin:
            continue

        if depth >= cfg.max_depth or boxes >= cfg.box_budget:
            for local in _zero_candidates(corners, values, lo, hi):
                hit = _member_witness(corners, local, r, cfg, z)
                if hit is not None:
                    stats['boxes'] += boxes
                    return 'witness', hit
            stats['boxes'] += boxes
            if boxes >= cfg.box_budget:
                return 'unresolved', f"box budget of {cfg.box_budget} exhausted at z={complex(z):.6g}"
            return 'unresolved', f"subdivision depth {cfg.max_depth} exhausted at z={complex(z):.6g}"

        axis = int(np.argmax(hi - lo))
        mid = (lo[axis] + hi[axis]) / 2.0
        upper_lo = lo.copy()
        upper_lo[axis] = mid
        lower_hi = hi.copy()
        lower_hi[axis] = mid
        stack.append((upper_lo, hi, depth + 1))
        stack.append((lo, lower_hi, depth + 1))

    stats['boxes'] += boxes
    return 'excluded', None


# ============================================================================
# Critical family and segment checks
# ============================================================================

def _sweep(corners, r, cfg, limit):
    """Upper-half sweep parameters: uniform grid, real-axis points, collinearity points, midpoints"""
    lo, hi = reg.upper_parameter_range(r, limit)
    base = np.linspace(lo, hi, cfg.boundary_count // 2 + 1)
    crossings = _critical_parameters(corners, r, lo, hi)
    axis = [t for t in reg.real_axis_parameters(r) if lo <= t <= hi]
    points = np.unique(np.concatenate([base, np.asarray(axis, dtype=float), crossings]))
    mids = (points[1:] + points[:-1]) / 2.0
    return np.unique(np.concatenate([points, mids])), len(crossings), (lo, hi)


def _refine(corners, r, cfg, params, distances, span):
    """Trisect around the boundary points closest to excluding 0"""
    lo, hi = span
    for _ in range(cfg.refine_rounds):
        count = max(1, int(math.ceil(cfg.refine_fraction * params.size)))
        worst = np.argsort(distances, kind='stable')[:count]
        new = []
        for i in worst:
            if i > 0:
                new.append(params[i] - (params[i] - params[i - 1]) / 3.0)
            if i < params.size - 1:
                new.append(params[i] + (params[i + 1] - params[i]) / 3.0)
        new = np.setdiff1d(np.clip(np.array(new), lo, hi), params)
        if new.size == 0:
            break
        values = corners.values(reg.boundary_map(r, new))
        params = np.concatenate([params, new])
        distances = np.concatenate([distances, _hull_distance(values) / _scale(values)])
        order = np.argsort(params, kind='stable')
        params, distances = params[order], distances[order]
    return params, distances


def critical_family_stable(cf, r, cfg=None):
    """
    Zero exclusion over the lambda-hypercube of one critical family

    1. deg det constant on the hypercube (exact, from the corners)
    2. the base member (all lambda = 0) is D-stable
    3. 0 is excluded from the value set at every swept boundary point, with
       bisection of the hypercube where the corner hull does not exclude it

    For one active row the witness is the first exit from the base member
    (smallest lambda among the boundary crossings).
    """
    cfg = _config(cfg)
    corners = _Corners(cf)
    stats = {
        'families_checked': 1,
        'boundary_points': 0,
        'critical_points': 0,
        'boxes': 0,
        'unresolved_points': 0,
        'max_depth_reached': 0,
        'min_exclusion': math.inf,
    }

    drop = _degree_check(corners)
    if drop is not None:
        reason, local = drop
        stats['degree_drop_lambdas'] = [float(x) for x in corners.full(local)]
        return _inconclusive(reason, stats)

    hit = _member_witness(corners, np.zeros(corners.k), r, cfg)
    if hit is not None:
        return _unstable(hit, stats)

    if corners.k == 0:
        return _stable(stats, "stable: the critical family is a single D-stable matrix")

    limit = _sweep_limit(corners, r, cfg)
    stats['sweep_limit'] = limit
    params, crossings, span = _sweep(corners, r, cfg, limit)
    stats['critical_points'] = crossings

    values = corners.values(reg.boundary_map(r, params))
    distances = _hull_distance(values) / _scale(values)
    params, distances = _refine(corners, r, cfg, params, distances, span)
    stats['boundary_points'] = int(params.size)
    stats['min_exclusion'] = float(distances.min())
    logger.debug(
        f"critical family {cf.columns}: {params.size} boundary points, "
        f"{crossings} collinearity points, min exclusion {stats['min_exclusion']:.3e}"
    )

    witnesses = []
    unresolved = None
    for i in np.nonzero(distances <= cfg.exclusion_margin)[0]:
        z = complex(reg.boundary_map(r, params[i]))
        outcome, info = _exclude_at(corners, corners.values(z)[0], z, r, cfg, stats)
        if outcome == 'witness':
            if corners.k > 1:
                return _unstable(info, stats)
            witnesses.append(info)
        elif outcome == 'unresolved':
            stats['unresolved_points'] += 1
            unresolved = unresolved or info
    if witnesses:
        return _unstable(min(witnesses, key=lambda w: sum(w.lambdas)), stats)

    # Corners are covered by the sweep; this catches crossings between samples
    for bits in corners.bits[1:]:
        hit = _member_witness(corners, bits.astype(float), r, cfg)
        if hit is not None:
            return _unstable(hit, stats)

    if unresolved is not None:
        return _inconclusive(unresolved, stats)
    return _stable(stats, "stable: 0 is excluded from every swept value set")


def segment_stable(p0, p1, r, cfg=None):
    """D-stability of the segment (1 - lambda) p0 + lambda p1, lambda in [0, 1]"""
    cf = cs.CriticalFamily(
        columns=(0,),
        edges=((p0, p1),),
        fixed=((None,),),
        sources=(((cs.EDGE, 0, 1),),),
    )
    return critical_family_stable(cf, r, cfg)


# ============================================================================
# Family driver
# ============================================================================

def _cell_params(entry, source, poly, lam):
    if entry.kind == fam.INTERVAL:
        return fam.polynomial_params(entry, poly)
    weights = [0.0] * entry.m
    if source[0] == cs.EDGE:
        _, a, b = source
        weights[a] += 1.0 - lam
        weights[b] += lam
    else:
        weights[source[1]] = 1.0
    return weights


def _witness_params(f, cf, lams):
    """Per-cell parameters of f selecting the critical member at lams"""
    grid = cf.instantiate(lams)
    return [
        [
            _cell_params(entry, cf.sources[i][j], grid[i][j], lams[i] if j == cf.columns[i] else 0.0)
            for j, entry in enumerate(row)
        ]
        for i, row in enumerate(f.entries)
    ]


def _check_batch(batch, f, r, cfg):
    """Check (index, critical family) pairs of f; stops at the first unstable one"""
    verdict = None
    for index, cf in batch:
        try:
            v = critical_family_stable(cf, r, cfg)
        except NumericalError as e:
            v = _inconclusive(f"root finder failed: {e}", {'families_checked': 1})
        if v.status == UNSTABLE:
            v.witness.critical_index = index
            v.witness.critical_family = cf.describe()
            v.witness.params = _witness_params(f, cf, v.witness.lambdas)
        elif v.status == INCONCLUSIVE:
            v.diagnostics['first_index'] = index
        verdict = v if verdict is None else merge_verdicts(verdict, v)
        if v.status == UNSTABLE:
            break
    return verdict


def _batches(stream, size):
    stream = iter(stream)
    while True:
        batch = list(itertools.islice(stream, size))
        if not batch:
            return
        yield batch


def _run_parallel(stream, f, r, cfg):
    """Check batches on a process pool; stops submitting once a batch is unstable"""
    verdict = None
    batches = _batches(enumerate(stream), 64)
    with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
        pending = [pool.submit(_check_batch, b, f, r, cfg) for b in itertools.islice(batches, cfg.workers * 2)]
        while pending:
            v = pending.pop(0).result()
            verdict = v if verdict is None else merge_verdicts(verdict, v)
            if verdict.status == UNSTABLE:
                for future in pending:
                    future.cancel()
                break
            batch = next(batches, None)
            if batch is not None:
                pending.append(pool.submit(_check_batch, batch, f, r, cfg))
    return verdict


def _vertex_scan(f, r, cfg, rng, budget=None):
    """(first pure-vertex member that is not D-stable, members scanned)"""
    scanned = 0
    for params, grid in fam.vertex_assignments(f, budget=budget, rng=rng):
        scanned += 1
        try:
            stable, root, marginal = member_check(determinant.det(grid), r, cfg.marginal_tol)
        except NumericalError as e:
            logger.warning(f"Skipping vertex member: {e}")
            continue
        if not stable:
            return Witness(params=params, root=root, marginal=marginal), scanned
    return None, scanned


def family_stable(f, r, cfg=None):
    """
    Robust D-stability of a matrix family through its critical subset

    Interval families on the Hurwitz region use Kharitonov edges and vertices;
    everything else runs on the polytopic critical subset, with interval
    entries expanded into box corners. Pure-vertex members are scanned first,
    they belong to every critical subset.
    """
    cfg = _config(cfg)
    degree = determinant.check_degree_invariant(f, cfg.degree_samples, cfg.seed)
    diagnostics = {'degree': degree.to_dict()}

    witness, scanned = _vertex_scan(f, r, cfg, np.random.default_rng(cfg.seed), max(cfg.degree_samples, 1))
    diagnostics['vertex_members_scanned'] = scanned
    if witness is not None:
        diagnostics['path'] = 'vertex'
        logger.info(f"Vertex member is not D-stable: root {witness.root}")
        return _unstable(witness, diagnostics)

    if not degree.constant:
        return _inconclusive(
            f"deg(det) is not constant on the family (observed degrees {degree.degrees})",
            diagnostics,
        )

    path, _, stream, count = cs.select_critical(f, r, point_edges=True)
    diagnostics['path'] = path
    diagnostics['critical_count'] = count
    if count > cfg.budget:
        raise CapacityError(
            f"{count} critical families exceed the budget of {cfg.budget}; raise --budget to check them",
            count=count,
        )
    logger.info(f"Checking {count} critical families on the {path} path")

    if cfg.workers > 1 and count > 64:
        verdict = _run_parallel(stream, f, r, cfg)
    else:
        verdict = _check_batch(enumerate(stream), f, r, cfg)

    if verdict is None:
        verdict = _stable({'families_checked': 0}, "stable: the family has no critical members")
    verdict.diagnostics = _merge_diagnostics(diagnostics, verdict.diagnostics)
    verdict.diagnostics.pop('first_index', None)
    if verdict.status == STABLE:
        verdict.label = f"stable: all {count} critical families exclude 0 on the swept boundary"
    return verdict


def confirm_witness(f, witness, r, cfg=None):
    """Re-instantiate a witness on f and confirm it by direct root computation"""
    cfg = _config(cfg)
    p = determinant.det(fam.sample(f, witness.params))
    stable, _, _ = member_check(p, r, cfg.marginal_tol)
    return not stable


# ============================================================================
# Oracle side
# ============================================================================

def _sample_chunk(f, r, cfg, seed_seq, count):
    """(members checked, first witness, numerical failures) for one random stream"""
    rng = np.random.default_rng(seed_seq)
    failures = 0
    for checked in range(1, count + 1):
        params, grid = fam.random_member(f, rng)
        try:
            stable, root, marginal = member_check(determinant.det(grid), r, cfg.marginal_tol)
        except NumericalError:
            failures += 1
            continue
        if not stable:
            return checked, Witness(params=params, root=root, marginal=marginal), failures
    return count, None, failures


def monte_carlo_oracle(f, r, cfg=None):
    """
    One-sided brute-force check: every pure-vertex member, then random members

    Dirichlet(1) weights per polytopic entry and uniform box points per
    interval entry, one seeded stream per worker. A stable result only means
    no counterexample was found.
    """
    cfg = _config(cfg)
    streams = np.random.SeedSequence(cfg.seed).spawn(1 + cfg.workers)

    witness, vertex_members = _vertex_scan(f, r, cfg, np.random.default_rng(streams[0]))
    diagnostics = {'vertex_members': vertex_members, 'samples': 0, 'one_sided': True}
    if witness is not None:
        return _unstable(witness, diagnostics)

    sizes = [len(part) for part in np.array_split(np.arange(cfg.oracle_samples), cfg.workers)]
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(
                _sample_chunk,
                [f] * cfg.workers, [r] * cfg.workers, [cfg] * cfg.workers, streams[1:], sizes,
            ))
    else:
        results = [_sample_chunk(f, r, cfg, streams[1], sizes[0])]

    failures = 0
    for checked, hit, failed in results:
        diagnostics['samples'] += checked
        failures += failed
        if hit is not None and witness is None:
            witness = hit
    diagnostics['numerical_failures'] = failures

    if witness is not None:
        return _unstable(witness, diagnostics)
    return _stable(diagnostics, f"stable (no counterexample found at {cfg.oracle_samples} samples)")


def _fixed_params(f):
    params = []
    for row in f.entries:
        prow = []
        for entry in row:
            if entry.kind == fam.POLYTOPIC:
                prow.append([1.0] + [0.0] * (entry.m - 1))
            else:
                prow.append(list(entry.lower))
        params.append(prow)
    return params


def value_set(f, z, samples, seed=None):
    """
    det values at z over sampled parameters

    A CriticalFamily is sampled uniformly on its hypercube, a MatrixFamily
    through random_member. A fixed family yields its single value.
    """
    return value_set_sweep(f, [z], samples, seed=seed)[0]


def value_set_sweep(f, zs, samples, seed=None):
    """
    value_set at each point of zs with one shared draw of parameters

    Entry k of every row comes from the same member, so a column of the
    result traces one member's det along the sweep.
    """
    rng = np.random.default_rng(config.CHECKER_CONFIG['seed'] if seed is None else seed)
    zs = np.asarray(zs, dtype=complex).ravel()
    if isinstance(f, cs.CriticalFamily):
        corners = _Corners(f)
        values = corners.values(zs)
        if corners.k == 0:
            return [[complex(row[0])] for row in values]
        points = rng.uniform(0.0, 1.0, (samples, corners.k))
        return [[complex(v) for v in corners.interpolate(row, points)] for row in values]

    if fam.is_fixed(f):
        grids = [fam.sample(f, _fixed_params(f))]
    else:
        grids = [fam.random_member(f, rng)[1] for _ in range(samples)]
    return [
        [complex(np.linalg.det(determinant.evaluate_matrix(grid, complex(z)))) for grid in grids]
        for z in zs
    ]


def boundary_margin(f, r, cfg=None):
    """
    Smallest normalized |det(z)| over upper boundary points and sampled members

    |det(z)| is divided by sum |c_k| |z|^k. Sampled members are up to
    degree_samples pure vertices and degree_samples random members.
    """
    cfg = _config(cfg)
    rng = np.random.default_rng(cfg.seed)
    members = [grid for _, grid in fam.vertex_assignments(f, budget=max(cfg.degree_samples, 1), rng=rng)]
    members += [fam.random_member(f, rng)[1] for _ in range(cfg.degree_samples)]

    best = math.inf
    for grid in members:
        p = determinant.det(grid)
        if p.is_zero:
            return 0.0
        limit = None
        if not r.is_bounded:
            limit = cfg.sweep_limit or cfg.sweep_multiple * (1.0 + cauchy_bound(p))
        lo, hi = reg.upper_parameter_range(r, limit)
        z = reg.boundary_map(r, np.linspace(lo, hi, cfg.boundary_count))
        size = np.abs(evaluate(p, z))
        scale = P.polyval(np.abs(z), np.abs(p.as_array()))
        best = min(best, float(np.min(size / np.where(scale > 0.0, scale, 1.0))))
    return best


def family_sweep_limit(f, r, cfg=None):
    """Native sweep limit covering the roots of sampled vertex members (None for bounded regions)"""
    cfg = _config(cfg)
    if r.is_bounded:
        return None
    if cfg.sweep_limit is not None:
        return float(cfg.sweep_limit)
    rng = np.random.default_rng(cfg.seed)
    bound = 0.0
    for _, grid in fam.vertex_assignments(f, budget=max(cfg.degree_samples, 1), rng=rng):
        p = determinant.det(grid)
        if not p.is_zero:
            bound = max(bound, cauchy_bound(p))
    return float(cfg.sweep_multiple * (1.0 + bound))

"""
Uncertain polynomial matrix families

A MatrixFamily is an n x n grid of uncertain entries. Each entry is either
    PolytopicEntry  - convex hull of m generator polynomials
    IntervalEntry   - coefficient-wise interval box [lower, upper]

Parameter assignments ("params") pick one member of a family: an n x n grid
whose cells hold barycentric weights over the generators (polytopic) or a
coefficient vector inside the box (interval).
"""

import itertools
import logging
import math
from dataclasses import dataclass

import numpy as np

import config
from errors import CapacityError, ParameterError
from polynomial import Polynomial

logger = logging.getLogger(__name__)

POLYTOPIC = 'polytopic'
INTERVAL = 'interval'
MIXED = 'mixed'

# Tolerance for simplex and box membership of parameter assignments
PARAM_TOL = 1e-9

# Kharitonov low/high patterns, period 4 in the coefficient index
# (True = upper bound). Order f1, f2, f3, f4.
KHARITONOV_PATTERNS = (
    (False, False, True, True),
    (False, True, True, False),
    (True, False, False, True),
    (True, True, False, False),
)

# Kharitonov edge cycle (1,2), (2,4), (4,3), (3,1) as 0-based vertex indices
KHARITONOV_EDGE_PAIRS = ((0, 1), (1, 3), (3, 2), (2, 0))


# ============================================================================
# Entries
# ============================================================================

def _as_polynomial(value):
    return value if isinstance(value, Polynomial) else Polynomial(tuple(value))


@dataclass(frozen=True)
class PolytopicEntry:
    """Convex hull of the generator polynomials"""

    generators: tuple

    def __post_init__(self):
        gens = tuple(_as_polynomial(g) for g in self.generators)
        if not gens:
            raise ParameterError("A polytopic entry needs at least one generator")
        object.__setattr__(self, 'generators', gens)

    @property
    def kind(self):
        return POLYTOPIC

    @property
    def m(self):
        return len(self.generators)


@dataclass(frozen=True)
class IntervalEntry:
    """Interval polynomial: coefficient k ranges over [lower[k], upper[k]]"""

    lower: tuple
    upper: tuple

    def __post_init__(self):
        lower = tuple(float(c) for c in self.lower)
        upper = tuple(float(c) for c in self.upper)
        if not lower:
            raise ParameterError("An interval entry needs at least one coefficient")
        if len(lower) != len(upper):
            raise ParameterError(
                f"Interval bounds differ in length: {len(lower)} lower vs {len(upper)} upper"
            )
        for k, (lo, hi) in enumerate(zip(lower, upper)):
            if not (math.isfinite(lo) and math.isfinite(hi)):
                raise ParameterError(f"Non-finite interval bound at coefficient {k}")
            if lo > hi:
                raise ParameterError(f"Empty interval at coefficient {k}: [{lo}, {hi}]")
        object.__setattr__(self, 'lower', lower)
        object.__setattr__(self, 'upper', upper)

    @property
    def kind(self):
        return INTERVAL

    @property
    def length(self):
        """Declared coefficient count (entry degree bound + 1)"""
        return len(self.lower)

    @property
    def is_degenerate(self):
        return self.lower == self.upper

    def contains_coeffs(self, coeffs, tol=PARAM_TOL):
        c = np.asarray(coeffs, dtype=float)
        if c.shape != (self.length,):
            return False
        lo = np.array(self.lower)
        hi = np.array(self.upper)
        slack = tol * np.maximum(1.0, np.abs(hi) + np.abs(lo))
        return bool(np.all(c >= lo - slack) and np.all(c <= hi + slack))


@dataclass(frozen=True)
class MatrixFamily:
    """Square grid of uncertain entries"""

    entries: tuple

    def __post_init__(self):
        rows = tuple(tuple(row) for row in self.entries)
        n = len(rows)
        if n < 1:
            raise ParameterError("A matrix family needs n >= 1")
        for i, row in enumerate(rows):
            if len(row) != n:
                raise ParameterError(f"Row {i} has {len(row)} entries, expected {n}")
            for j, cell in enumerate(row):
                if not isinstance(cell, (PolytopicEntry, IntervalEntry)):
                    raise ParameterError(f"Cell ({i}, {j}) is not an uncertain entry")
        object.__setattr__(self, 'entries', rows)

    @property
    def n(self):
        return len(self.entries)

    @property
    def kind(self):
        kinds = {cell.kind for row in self.entries for cell in row}
        return kinds.pop() if len(kinds) == 1 else MIXED

    def cells(self):
        """(i, j, entry) in row-major order"""
        for i, row in enumerate(self.entries):
            for j, cell in enumerate(row):
                yield i, j, cell


# ============================================================================
# Kharitonov constructions
# ============================================================================

def kharitonov_vertices(e):
    """The four Kharitonov polynomials (f1, f2, f3, f4) of an interval entry"""
    vertices = []
    for pattern in KHARITONOV_PATTERNS:
        coeffs = [
            e.upper[k] if pattern[k % 4] else e.lower[k]
            for k in range(e.length)
        ]
        vertices.append(Polynomial(coeffs))
    return tuple(vertices)


def kharitonov_edges(e):
    """Edge pairs (f1,f2), (f2,f4), (f4,f3), (f3,f1)"""
    f = kharitonov_vertices(e)
    return tuple((f[a], f[b]) for a, b in KHARITONOV_EDGE_PAIRS)


# ============================================================================
# Vertex and edge sets of polytopic entries
# ============================================================================

def distinct_generators(e):
    """(original index, polynomial) for the first occurrence of each generator"""
    seen = set()
    distinct = []
    for k, g in enumerate(e.generators):
        if g not in seen:
            seen.add(g)
            distinct.append((k, g))
    return distinct


def vertex_set(e):
    """K_ij: the generators with duplicates removed"""
    return [g for _, g in distinct_generators(e)]


def edge_set(e):
    """E_ij: every unordered pair of distinct generators"""
    return list(itertools.combinations(vertex_set(e), 2))


# ============================================================================
# Members
# ============================================================================

def _weighted_sum(generators, weights):
    length = max(len(g.coeffs) for g in generators) or 1
    total = np.zeros(length)
    for g, w in zip(generators, weights):
        if w != 0.0:
            total += w * g.as_array(length)
    return Polynomial(total)


def _cell_member(entry, value, where):
    if entry.kind == POLYTOPIC:
        w = np.asarray(value, dtype=float)
        if w.shape != (entry.m,):
            raise ParameterError(f"Cell {where}: expected {entry.m} weights, got {np.shape(value)}")
        if np.any(w < -PARAM_TOL) or abs(w.sum() - 1.0) > PARAM_TOL * entry.m:
            raise ParameterError(f"Cell {where}: weights {w.tolist()} are not on the simplex")
        return _weighted_sum(entry.generators, np.clip(w, 0.0, None))

    if not entry.contains_coeffs(value):
        raise ParameterError(f"Cell {where}: coefficients {list(value)} lie outside the box")
    c = np.clip(np.asarray(value, dtype=float), entry.lower, entry.upper)
    return Polynomial(c)


def sample(f, params):
    """Concrete member of f selected by a parameter grid"""
    if len(params) != f.n or any(len(row) != f.n for row in params):
        raise ParameterError(f"Parameter grid must be {f.n} x {f.n}")
    return tuple(
        tuple(_cell_member(cell, params[i][j], (i, j)) for j, cell in enumerate(row))
        for i, row in enumerate(f.entries)
    )


def polynomial_params(entry, poly, weights=None):
    """
    Parameter value of one cell for a member polynomial

    Polytopic cells take explicit barycentric weights; interval cells take the
    member's coefficients padded to the declared length.
    """
    if entry.kind == POLYTOPIC:
        if weights is None:
            raise ParameterError("Polytopic cells need barycentric weights")
        return [float(w) for w in weights]
    return [float(c) for c in poly.as_array(entry.length)][:entry.length]


def random_member(f, rng):
    """(params, grid) drawn uniformly per entry: Dirichlet(1) weights or box points"""
    params = []
    for row in f.entries:
        prow = []
        for cell in row:
            if cell.kind == POLYTOPIC:
                if cell.m == 1:
                    prow.append([1.0])
                else:
                    prow.append(rng.dirichlet(np.ones(cell.m)).tolist())
            else:
                prow.append(rng.uniform(cell.lower, cell.upper).tolist())
        params.append(prow)
    return params, sample(f, params)


def is_fixed(f):
    """True when every entry is a single polynomial"""
    for _, _, cell in f.cells():
        if cell.kind == POLYTOPIC and len(vertex_set(cell)) > 1:
            return False
        if cell.kind == INTERVAL and not cell.is_degenerate:
            return False
    return True


# ============================================================================
# Interval boxes as polytopes
# ============================================================================

def interval_as_polytopic(e, cap=None):
    """
    The box corners of an interval entry as polytope generators

    Zero-width coordinates contribute a single value, so a degenerate box
    yields one generator.
    """
    cap = config.FAMILY_CONFIG['corner_cap'] if cap is None else cap
    if e.length > cap:
        raise CapacityError(
            f"Interval entry with {e.length} coefficients exceeds the corner cap of {cap}; "
            f"sample the box directly instead",
            count=2 ** e.length,
        )
    axes = [(lo,) if lo == hi else (lo, hi) for lo, hi in zip(e.lower, e.upper)]
    return PolytopicEntry(tuple(Polynomial(c) for c in itertools.product(*axes)))


def as_polytopic(f, cap=None):
    """Family with every interval entry replaced by its corner polytope"""
    if f.kind == POLYTOPIC:
        return f
    return MatrixFamily(tuple(
        tuple(cell if cell.kind == POLYTOPIC else interval_as_polytopic(cell, cap) for cell in row)
        for row in f.entries
    ))


def _cell_vertices(entry, cap):
    """(param, polynomial) for every vertex of one entry"""
    if entry.kind == POLYTOPIC:
        out = []
        for k, g in distinct_generators(entry):
            w = [0.0] * entry.m
            w[k] = 1.0
            out.append((w, g))
        return out

    if entry.length <= cap:
        corners = interval_as_polytopic(entry, cap).generators
    else:
        corners = tuple(dict.fromkeys(kharitonov_vertices(entry)))
    return [(polynomial_params(entry, g), g) for g in corners]


def vertex_count(f, cap=None):
    cap = config.FAMILY_CONFIG['corner_cap'] if cap is None else cap
    return math.prod(len(_cell_vertices(cell, cap)) for _, _, cell in f.cells())


def vertex_assignments(f, budget=None, rng=None, cap=None):
    """
    (params, grid) for pure-vertex members

    Exhaustive while the product of per-cell vertex counts stays within budget;
    beyond it, budget vertex members are drawn at random with rng.
    """
    budget = config.FAMILY_CONFIG['vertex_budget'] if budget is None else budget
    cap = config.FAMILY_CONFIG['corner_cap'] if cap is None else cap
    per_cell = [_cell_vertices(cell, cap) for _, _, cell in f.cells()]
    n = f.n
    total = math.prod(len(v) for v in per_cell)

    if total <= budget:
        choices = itertools.product(*per_cell)
    else:
        logger.info(f"{total} vertex members exceed the budget of {budget}; sampling {budget}")
        rng = np.random.default_rng(config.CHECKER_CONFIG['seed']) if rng is None else rng
        choices = (
            tuple(v[rng.integers(len(v))] for v in per_cell)
            for _ in range(budget)
        )

    for choice in choices:
        params = [[choice[i * n + j][0] for j in range(n)] for i in range(n)]
        grid = tuple(tuple(choice[i * n + j][1] for j in range(n)) for i in range(n))
        yield params, grid


# ============================================================================
# Random families (acceptance batches)
# ============================================================================

def random_polytopic_family(n, m, degree, rng, coeff_range=3, monic_diagonal=True):
    """
    Random polytopic family with integer generator coefficients in
    [-coeff_range, coeff_range]

    With monic_diagonal, diagonal generators are monic of the given degree and
    off-diagonal generators have lower degree, so deg det = n * degree on the
    whole family.
    """
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            gens = []
            for _ in range(m):
                if monic_diagonal and i == j:
                    c = rng.integers(-coeff_range, coeff_range + 1, size=degree).tolist() + [1]
                elif monic_diagonal:
                    c = rng.integers(-coeff_range, coeff_range + 1, size=max(degree, 1)).tolist()
                    if degree == 0:
                        c = [0]
                else:
                    c = rng.integers(-coeff_range, coeff_range + 1, size=degree + 1).tolist()
                gens.append(Polynomial(c))
            row.append(PolytopicEntry(tuple(gens)))
        rows.append(tuple(row))
    return MatrixFamily(tuple(rows))


def random_interval_entry(degree, rng, center_range=(0.5, 5.0), max_width=0.5):
    """Random interval polynomial with positive coefficient intervals"""
    centers = rng.uniform(center_range[0], center_range[1], size=degree + 1)
    widths = rng.uniform(0.0, max_width, size=degree + 1) * centers
    return IntervalEntry(tuple(centers - widths / 2), tuple(centers + widths / 2))

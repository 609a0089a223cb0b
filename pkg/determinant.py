"""
Determinants and cofactors of concrete polynomial matrices
Also verifies the standing assumption that deg(det A) is constant on a family
"""

import logging
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import sympy

import config
import family as fam
from errors import ParameterError
from polynomial import Polynomial, ZERO_DEGREE

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PolyMatrix:
    """Square grid of canonical polynomials"""

    cells: tuple

    def __post_init__(self):
        rows = tuple(
            tuple(c if isinstance(c, Polynomial) else Polynomial(tuple(c)) for c in row)
            for row in self.cells
        )
        n = len(rows)
        if n < 1 or any(len(row) != n for row in rows):
            raise ParameterError("A polynomial matrix must be square with n >= 1")
        object.__setattr__(self, 'cells', rows)

    @property
    def n(self):
        return len(self.cells)


def _as_matrix(M):
    return M if isinstance(M, PolyMatrix) else PolyMatrix(M)


def _expansion_det(cells, rows, cols):
    """Laplace expansion along the first listed row, memoized on column subsets"""
    k = len(rows)
    one = Polynomial.constant(1.0)

    @lru_cache(maxsize=None)
    def expand(depth, mask):
        if depth == k:
            return one
        row = rows[depth]
        total = Polynomial.zero()
        sign = 1
        for pos, col in enumerate(cols):
            if not mask & (1 << pos):
                continue
            cell = cells[row][col]
            if not cell.is_zero:
                term = cell * expand(depth + 1, mask & ~(1 << pos))
                total = total + term if sign > 0 else total - term
            sign = -sign
        return total

    return expand(0, (1 << len(cols)) - 1)


def det(M):
    """Determinant polynomial by memoized cofactor expansion"""
    M = _as_matrix(M)
    return _expansion_det(M.cells, tuple(range(M.n)), tuple(range(M.n)))


def minor(M, i, j):
    """
    Signed cofactor (-1)^(i+j) det(M without row i, column j), 0-based

    For every column j, sum_i M[i][j] * minor(M, i, j) equals det(M).
    """
    M = _as_matrix(M)
    n = M.n
    if not (0 <= i < n and 0 <= j < n):
        raise IndexError(f"Cofactor index ({i}, {j}) out of range for n={n}")
    if n == 1:
        return Polynomial.constant(1.0)
    rows = tuple(r for r in range(n) if r != i)
    cols = tuple(c for c in range(n) if c != j)
    sub = _expansion_det(M.cells, rows, cols)
    return sub if (i + j) % 2 == 0 else -sub


def det_fraction_free(M, exact=False):
    """
    Determinant by fraction-free (Bareiss) elimination in exact rational arithmetic

    Float coefficients are converted exactly to rationals. With exact=True the
    ascending coefficients are returned as sympy Rationals.
    """
    M = _as_matrix(M)
    s = sympy.Symbol('s')
    rows = [
        [sum((sympy.Rational(c) * s ** k for k, c in enumerate(cell.coeffs)), sympy.Integer(0))
         for cell in row]
        for row in M.cells
    ]
    value = sympy.expand(sympy.Matrix(rows).det(method='bareiss'))
    coeffs = sympy.Poly(value, s).all_coeffs()[::-1]
    if exact:
        return tuple(sympy.Rational(c) for c in coeffs)
    return Polynomial([float(c) for c in coeffs])


def evaluate_matrix(M, z):
    """Complex matrix of cell values at z"""
    M = _as_matrix(M)
    return np.array([[cell(z) for cell in row] for row in M.cells], dtype=complex)


# ============================================================================
# Degree invariance
# ============================================================================

@dataclass
class DegreeReport:
    constant: bool
    expected_degree: object
    degrees: list
    witness: object = None
    witness_degree: object = None
    vertex_members: int = 0
    sample_members: int = 0
    vertex_exhaustive: bool = True

    def to_dict(self):
        return {
            'constant': self.constant,
            'expected_degree': self.expected_degree,
            'observed_degrees': self.degrees,
            'witness': self.witness,
            'witness_degree': self.witness_degree,
            'vertex_members': self.vertex_members,
            'sample_members': self.sample_members,
            'vertex_exhaustive': self.vertex_exhaustive,
        }


def _degree_label(d):
    return None if d == ZERO_DEGREE else int(d)


def check_degree_invariant(f, samples, seed, vertex_budget=None):
    """
    Compare deg(det) over every vertex member plus random interior members

    Heuristic: a constant verdict is evidence, not a certificate. The witness
    is the first member seen with the lowest degree.
    """
    rng = np.random.default_rng(seed)
    first_seen = {}
    vertex_members = 0
    budget = vertex_budget
    exhaustive = fam.vertex_count(f) <= (budget or config.FAMILY_CONFIG['vertex_budget'])

    for params, grid in fam.vertex_assignments(f, budget=budget, rng=rng):
        d = det(grid).degree
        first_seen.setdefault(d, params)
        vertex_members += 1

    for _ in range(samples):
        params, grid = fam.random_member(f, rng)
        d = det(grid).degree
        first_seen.setdefault(d, params)

    observed = sorted(first_seen)
    expected = observed[-1]
    report = DegreeReport(
        constant=len(observed) == 1,
        expected_degree=_degree_label(expected),
        degrees=[_degree_label(d) for d in observed],
        vertex_members=vertex_members,
        sample_members=samples,
        vertex_exhaustive=exhaustive,
    )
    if not report.constant:
        lowest = observed[0]
        report.witness = first_seen[lowest]
        report.witness_degree = _degree_label(lowest)
        logger.info(
            f"deg(det) not constant: observed {report.degrees}, witness degree {report.witness_degree}"
        )
    return report

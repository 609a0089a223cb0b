#!/usr/bin/env python3
"""Test determinants, cofactors and the degree-invariance precheck"""

import os
import sys
sys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)), '..'))

import numpy as np
import pytest

import family as fam
from determinant import (
    PolyMatrix, check_degree_invariant, det, det_fraction_free, evaluate_matrix, minor,
)
from errors import ParameterError
from polynomial import Polynomial


def poly(*coeffs):
    return Polynomial(coeffs)


def random_matrix(rng, n, degree, coeff_range=3):
    return PolyMatrix(tuple(
        tuple(Polynomial(rng.integers(-coeff_range, coeff_range + 1, size=degree + 1).tolist())
              for _ in range(n))
        for _ in range(n)
    ))


def exact_matches(p, exact):
    """Coefficient-wise equality of a float determinant and exact rationals"""
    expected = [float(c) for c in exact]
    while expected and expected[-1] == 0.0:
        expected.pop()
    return list(p.coeffs) == expected


def test_det_examples():
    print("Testing det...")

    s = poly(0, 1)
    one = poly(1)
    assert det([[s, one], [one, s]]) == poly(-1, 0, 1)
    print("  ✓ [[s, 1], [1, s]] = s^2 - 1")

    p = poly(3, -2, 1)
    assert det([[p]]) == p
    print("  ✓ 1x1 determinant")

    assert det([[poly(1, 1), poly(2)], [poly(3), poly(4, 1)]]) == poly(-2, 5, 1)
    print("  ✓ [[s+1, 2], [3, s+4]] = s^2 + 5s - 2")

    zero_row = [[poly(), poly()], [poly(1), poly(2)]]
    assert det(zero_row).is_zero
    print("  ✓ A zero row gives the zero polynomial")

    with pytest.raises(ParameterError):
        PolyMatrix(((poly(1), poly(2)), (poly(3),)))
    print("  ✓ Non-square grids rejected")

    print("✓ Det OK\n")


def test_minor():
    print("Testing minor...")

    a, b, c, d = poly(1, 1), poly(2), poly(3, 0, 1), poly(4, 1)
    M = [[a, b], [c, d]]
    assert minor(M, 0, 0) == d
    assert minor(M, 0, 1) == -c
    assert minor([[a]], 0, 0) == poly(1)
    print("  ✓ 2x2 cofactors with signs")

    with pytest.raises(IndexError):
        minor(M, 2, 0)
    print("  ✓ Out-of-range index rejected")

    rng = np.random.default_rng(2)
    for _ in range(20):
        M = random_matrix(rng, 3, 2)
        for j in range(3):
            total = Polynomial.zero()
            for i in range(3):
                total = total + M.cells[i][j] * minor(M, i, j)
            assert total == det(M)
    print("  ✓ Column expansion reproduces det on random 3x3 matrices")

    print("✓ Minor OK\n")


def test_det_against_fraction_free():
    print("Testing det against fraction-free elimination...")

    rng = np.random.default_rng(4)
    for trial in range(100):
        n = int(rng.integers(1, 5))
        M = random_matrix(rng, n, int(rng.integers(0, 3)))
        ours = det(M)
        assert exact_matches(ours, det_fraction_free(M, exact=True)), \
            f"Trial {trial}: {ours} differs from the exact determinant"
    print("  ✓ 100 random integer matrices agree exactly")

    M = PolyMatrix(((poly(0.5, 0.25), poly(0.1)), (poly(0.3), poly(1.5, 2.0))))
    ours, exact = det(M), det_fraction_free(M)
    assert np.allclose(ours.coeffs, exact.coeffs, rtol=1e-12, atol=0.0)
    print("  ✓ Float coefficients agree within rounding")

    print("✓ Fraction-free comparison OK\n")


def test_det_row_properties():
    print("Testing det under repeated and swapped rows...")

    rng = np.random.default_rng(9)
    for trial in range(100):
        n = int(rng.integers(2, 5))
        M = random_matrix(rng, n, int(rng.integers(0, 3)))
        i, j = rng.choice(n, size=2, replace=False)

        repeated = list(M.cells)
        repeated[j] = repeated[i]
        assert det(PolyMatrix(tuple(repeated))).is_zero, f"Trial {trial}: repeated row gives nonzero det"

        swapped = list(M.cells)
        swapped[i], swapped[j] = swapped[j], swapped[i]
        assert det(PolyMatrix(tuple(swapped))) == -det(M), f"Trial {trial}: row swap keeps the sign"
    print("  ✓ Two identical rows give 0, a row swap flips the sign (n <= 4)")

    print("✓ Row properties OK\n")


def test_evaluate_matrix():
    print("Testing evaluate_matrix...")

    rng = np.random.default_rng(8)
    for _ in range(10):
        M = random_matrix(rng, 3, 2)
        z = complex(rng.normal(), rng.normal())
        numeric = np.linalg.det(evaluate_matrix(M, z))
        assert abs(numeric - det(M)(z)) < 1e-9 * max(1.0, abs(numeric))
    print("  ✓ Determinant of values equals value of determinant")

    print("✓ Evaluate matrix OK\n")


def test_degree_invariant():
    print("Testing check_degree_invariant...")

    lam_s_plus_1 = fam.MatrixFamily(((fam.PolytopicEntry(([1], [1, 1])),),))
    report = check_degree_invariant(lam_s_plus_1, samples=100, seed=42)
    assert not report.constant
    assert report.witness == [[[1.0, 0.0]]], f"Unexpected witness {report.witness}"
    assert report.witness_degree == 0 and report.expected_degree == 1
    print("  ✓ [[lambda s + 1]]: degree drops at the vertex 1")

    shifted = fam.MatrixFamily(((fam.IntervalEntry((1, 1), (2, 1)),),))
    report = check_degree_invariant(shifted, samples=100, seed=42)
    assert report.constant and report.expected_degree == 1
    print("  ✓ [[s + a]], a in [1, 2]: constant degree 1")

    zero = fam.PolytopicEntry(([0],))
    diag = fam.MatrixFamily((
        (fam.PolytopicEntry(([1, 1], [2, 1])), zero),
        (zero, fam.PolytopicEntry(([1, 1], [2, 1]))),
    ))
    report = check_degree_invariant(diag, samples=1000, seed=42)
    assert report.constant and report.expected_degree == 2
    assert report.sample_members == 1000 and report.vertex_members == 4
    assert report.vertex_exhaustive
    assert report.to_dict()['observed_degrees'] == [2]
    print("  ✓ diag(s + a, s + b): constant degree 2 over 1000 samples")

    print("✓ Degree invariant OK\n")


if __name__ == '__main__':
    test_det_examples()
    test_minor()
    test_det_against_fraction_free()
    test_det_row_properties()
    test_evaluate_matrix()
    test_degree_invariant()
    print("\n✅ Determinant module PASSED\n")

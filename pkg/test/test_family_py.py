#!/usr/bin/env python3
"""Test uncertain entries, families and member sampling"""

import os
import sys
sys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)), '..'))

import numpy as np
import pytest

import family as fam
from errors import CapacityError, ParameterError
from polynomial import Polynomial


def poly(*coeffs):
    return Polynomial(coeffs)


BOX = fam.IntervalEntry((1, 3, 5, 7), (2, 4, 6, 8))


def test_entries():
    print("Testing entry construction...")

    e = fam.PolytopicEntry(([1, 1], [2, 1]))
    assert e.m == 2 and e.generators[0] == poly(1, 1)
    assert e.kind == fam.POLYTOPIC
    with pytest.raises(ParameterError):
        fam.PolytopicEntry(())
    print("  ✓ Polytopic entries")

    assert BOX.length == 4 and not BOX.is_degenerate
    for lower, upper in (((1, 2), (0, 3)), ((1,), (1, 2)), ((), ()), ((float('inf'),), (1,))):
        with pytest.raises(ParameterError):
            fam.IntervalEntry(lower, upper)
    print("  ✓ Interval entries validate their bounds")

    with pytest.raises(ParameterError):
        fam.MatrixFamily(((e, e), (e,)))
    with pytest.raises(ParameterError):
        fam.MatrixFamily(())
    print("  ✓ Families must be square and nonempty")

    mixed = fam.MatrixFamily(((e, BOX), (BOX, e)))
    assert mixed.kind == fam.MIXED
    assert fam.MatrixFamily(((e,),)).kind == fam.POLYTOPIC
    assert [(i, j) for i, j, _ in mixed.cells()] == [(0, 0), (0, 1), (1, 0), (1, 1)]
    print("  ✓ Family kinds and cell order")

    print("✓ Entries OK\n")


def test_kharitonov():
    print("Testing Kharitonov constructions...")

    f1, f2, f3, f4 = fam.kharitonov_vertices(BOX)
    assert f1 == poly(1, 3, 6, 8)
    assert f2 == poly(1, 4, 6, 7)
    assert f3 == poly(2, 3, 5, 8)
    assert f4 == poly(2, 4, 5, 7)
    print("  ✓ Vertex patterns LLHH, LHHL, HLLH, HHLL")

    edges = fam.kharitonov_edges(BOX)
    assert edges == ((f1, f2), (f2, f4), (f4, f3), (f3, f1))
    endpoints = [p for pair in edges for p in pair]
    assert all(endpoints.count(f) == 2 for f in (f1, f2, f3, f4))
    print("  ✓ Four edges, every vertex used twice")

    point = fam.IntervalEntry((1, 2, 3), (1, 2, 3))
    vertices = fam.kharitonov_vertices(point)
    assert len(set(vertices)) == 1 and vertices[0] == poly(1, 2, 3)
    assert all(a == b for a, b in fam.kharitonov_edges(point))
    print("  ✓ Degenerate box collapses")

    long_box = fam.IntervalEntry(tuple(range(9)), tuple(range(1, 10)))
    f1 = fam.kharitonov_vertices(long_box)[0]
    assert f1.coeffs == (0, 1, 3, 4, 4, 5, 7, 8, 8)
    print("  ✓ Pattern repeats with period four")

    print("✓ Kharitonov OK\n")


def test_vertex_and_edge_sets():
    print("Testing vertex_set and edge_set...")

    e = fam.PolytopicEntry(([1, 1], [2, 1]))
    assert fam.vertex_set(e) == [poly(1, 1), poly(2, 1)]
    assert len(fam.edge_set(e)) == 1
    print("  ✓ m = 2")

    twin = fam.PolytopicEntry(([1, 2], [1, 2]))
    assert fam.vertex_set(twin) == [poly(1, 2)]
    assert fam.edge_set(twin) == []
    print("  ✓ Duplicates removed, a point has no edges")

    three = fam.PolytopicEntry(([1], [2], [3]))
    assert len(fam.vertex_set(three)) == 3
    assert len(fam.edge_set(three)) == 3
    print("  ✓ m = 3 gives C(3, 2) edges")

    print("✓ Vertex and edge sets OK\n")


def test_sample():
    print("Testing sample...")

    a = fam.PolytopicEntry(([1, 1], [3, 1]))
    b = fam.PolytopicEntry(([0], [2]))
    f = fam.MatrixFamily(((a, b), (b, a)))

    grid = fam.sample(f, [[[1, 0], [1, 0]], [[1, 0], [1, 0]]])
    assert grid == ((poly(1, 1), poly(0)), (poly(0), poly(1, 1)))
    print("  ✓ All weight on the first generator")

    grid = fam.sample(f, [[[0.5, 0.5], [1, 0]], [[1, 0], [1, 0]]])
    assert grid[0][0] == poly(2, 1)
    print("  ✓ Midpoint weights")

    for bad in ([[[0.7, 0.7], [1, 0]], [[1, 0], [1, 0]]],
                [[[-0.5, 1.5], [1, 0]], [[1, 0], [1, 0]]],
                [[[1], [1, 0]], [[1, 0], [1, 0]]],
                [[[1, 0], [1, 0]]]):
        with pytest.raises(ParameterError):
            fam.sample(f, bad)
    print("  ✓ Weights off the simplex rejected")

    g = fam.MatrixFamily(((BOX,),))
    assert fam.sample(g, [[list(BOX.lower)]])[0][0] == poly(*BOX.lower)
    with pytest.raises(ParameterError):
        fam.sample(g, [[[0, 3, 5, 7]]])
    with pytest.raises(ParameterError):
        fam.sample(g, [[[1, 3, 5]]])
    print("  ✓ Interval coefficients inside the box")

    print("✓ Sample OK\n")


def test_random_member():
    print("Testing random_member...")

    a = fam.PolytopicEntry(([1, 1], [3, 1], [2, 2]))
    f = fam.MatrixFamily(((a, BOX), (fam.PolytopicEntry(([5],)), a)))
    rng = np.random.default_rng(1)
    for _ in range(100):
        params, grid = fam.random_member(f, rng)
        assert abs(sum(params[0][0]) - 1.0) < 1e-12 and min(params[0][0]) >= 0.0
        assert BOX.contains_coeffs(params[0][1])
        assert params[1][0] == [1.0]
        assert fam.sample(f, params) == grid
    print("  ✓ Members lie in the family and re-sample identically")

    print("✓ Random member OK\n")


def test_interval_as_polytopic():
    print("Testing interval_as_polytopic...")

    e = fam.interval_as_polytopic(fam.IntervalEntry((0,), (1,)))
    assert set(e.generators) == {poly(0), poly(1)}
    print("  ✓ q0 in [0, 1] gives {0, 1}")

    e = fam.interval_as_polytopic(fam.IntervalEntry((0, 2), (1, 3)))
    assert len(e.generators) == 4
    print("  ✓ Two intervals give four corners")

    e = fam.interval_as_polytopic(fam.IntervalEntry((1, 2), (1, 2)))
    assert e.generators == (poly(1, 2),)
    print("  ✓ Degenerate box gives one generator")

    with pytest.raises(CapacityError) as info:
        fam.interval_as_polytopic(fam.IntervalEntry((0,) * 5, (1,) * 5), cap=4)
    assert info.value.count == 32
    print("  ✓ Corner cap enforced")

    f = fam.MatrixFamily(((BOX, fam.PolytopicEntry(([1],))),) * 2)
    pf = fam.as_polytopic(f)
    assert pf.kind == fam.POLYTOPIC and pf.entries[0][0].m == 16
    print("  ✓ Mixed family normalized")

    print("✓ Interval as polytopic OK\n")


def test_vertex_assignments():
    print("Testing vertex_assignments...")

    a = fam.PolytopicEntry(([1, 1], [3, 1]))
    three = fam.PolytopicEntry(([1], [2], [3]))
    f = fam.MatrixFamily(((a, three), (three, a)))
    assert fam.vertex_count(f) == 2 * 3 * 3 * 2
    members = list(fam.vertex_assignments(f))
    assert len(members) == 36
    assert len({grid for _, grid in members}) == 36
    for params, grid in members:
        assert fam.sample(f, params) == grid
    print("  ✓ Exhaustive product of per-cell vertices")

    sampled = list(fam.vertex_assignments(f, budget=10, rng=np.random.default_rng(0)))
    assert len(sampled) == 10
    print("  ✓ Sampling beyond the budget")

    assert fam.is_fixed(fam.MatrixFamily(((fam.PolytopicEntry(([1], [1])),),)))
    assert not fam.is_fixed(f)
    print("  ✓ is_fixed")

    print("✓ Vertex assignments OK\n")


def test_random_families():
    print("Testing random family generators...")

    from determinant import det

    rng = np.random.default_rng(5)
    for n in (1, 2, 3):
        f = fam.random_polytopic_family(n, 2, 2, rng)
        for _ in range(5):
            _, grid = fam.random_member(f, rng)
            assert det(grid).degree == 2 * n
    print("  ✓ Monic diagonals fix deg det = n * degree")

    e = fam.random_interval_entry(4, rng)
    assert e.length == 5 and all(lo > 0 for lo in e.lower)
    print("  ✓ Positive random interval entries")

    print("✓ Random families OK\n")


if __name__ == '__main__':
    test_entries()
    test_kharitonov()
    test_vertex_and_edge_sets()
    test_sample()
    test_random_member()
    test_interval_as_polytopic()
    test_vertex_assignments()
    test_random_families()
    print("\n✅ Family module PASSED\n")

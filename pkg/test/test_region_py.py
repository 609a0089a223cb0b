#!/usr/bin/env python3
"""Test stability regions and boundary parametrizations"""

import math
import os
import sys
sys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)), '..'))

import numpy as np
import pytest
from numpy.polynomial import polynomial as P

import region as reg
from errors import ParameterError
from polynomial import Polynomial, evaluate


def test_contains():
    print("Testing contains...")

    h = reg.hurwitz()
    assert reg.contains(h, -1)
    assert not reg.contains(h, 0)
    assert not reg.contains(h, 1j)
    assert not reg.contains(h, 0.5 - 2j)
    print("  ✓ Hurwitz half-plane (boundary excluded)")

    d = reg.disk()
    assert reg.contains(d, 0.5)
    assert not reg.contains(d, 1)
    assert not reg.contains(d, 1j)
    assert not reg.contains(d, -1 + 1j)
    print("  ✓ Unit disk (boundary excluded)")

    s = reg.shifted(0.5)
    assert not reg.contains(s, -0.4)
    assert reg.contains(s, -0.6 + 3j)
    print("  ✓ Shifted half-plane")

    sec = reg.sector(math.pi / 4)
    assert reg.contains(sec, -1)
    assert reg.contains(sec, -2 + 1j)
    assert not reg.contains(sec, -1 + 2j)
    assert not reg.contains(sec, 0)
    print("  ✓ Sector")

    mask = reg.contains(h, np.array([-1.0, 1.0, -1e-3j - 1e-9]))
    assert mask.tolist() == [True, False, True]
    print("  ✓ Elementwise on arrays")

    print("✓ Contains OK\n")


def test_region_construction():
    print("Testing region construction and names...")

    assert reg.sector(math.pi / 2).kind == reg.HURWITZ
    print("  ✓ Right-angle sector is the half-plane")

    for bad in (lambda: reg.shifted(-1.0), lambda: reg.sector(0.0), lambda: reg.sector(2.0),
                lambda: reg.Region('ellipse')):
        with pytest.raises(ParameterError):
            bad()
    print("  ✓ Invalid parameters rejected")

    for text in ('hurwitz', 'disk', 'shifted:0.25', 'sector:0.5'):
        r = reg.parse_region(text)
        assert reg.parse_region(reg.region_name(r)) == r
    print("  ✓ Names round-trip")

    for text in ('ellipse', 'shifted', 'sector:abc', 'disk:2', 'shifted:-1'):
        with pytest.raises(ParameterError):
            reg.parse_region(text)
    print("  ✓ Malformed names rejected")

    print("✓ Construction OK\n")


def test_boundary_points():
    print("Testing boundary_points...")

    pts = reg.boundary_points(reg.disk(), 4)
    assert np.allclose(pts, [1, 1j, -1, -1j])
    print("  ✓ Disk quarter points")

    pts = reg.boundary_points(reg.hurwitz(), 3, sweep_limit=1.0)
    assert np.allclose(pts, [-1j, 0, 1j])
    print("  ✓ Hurwitz uniform grid")

    pts = np.array(reg.boundary_points(reg.sector(math.pi / 4), 11, sweep_limit=2.0))
    assert np.allclose(pts.real, -np.abs(pts.imag))
    print("  ✓ Sector samples on the two rays")

    pts = np.array(reg.boundary_points(reg.shifted(0.3), 5, sweep_limit=2.0))
    assert np.allclose(pts.real, -0.3)
    print("  ✓ Shifted line")

    with pytest.raises(ParameterError):
        reg.boundary_points(reg.hurwitz(), 1)
    with pytest.raises(ParameterError):
        reg.boundary_parameters(reg.hurwitz(), 8, sweep_limit=0.0)
    print("  ✓ Invalid sample counts rejected")

    assert reg.real_axis_parameters(reg.disk()) == [0.0, math.pi]
    assert reg.real_axis_parameters(reg.hurwitz()) == [0.0]
    print("  ✓ Real-axis parameters")

    print("✓ Boundary points OK\n")


def test_boundary_points_not_contained():
    print("Testing that boundary samples lie outside the open region...")

    regions = (reg.hurwitz(), reg.disk(), reg.shifted(0.7), reg.sector(math.pi / 6), reg.sector(1.2))
    for r in regions:
        for limit in (0.5, 3.0, 40.0):
            pts = reg.boundary_points(r, 257, sweep_limit=limit)
            assert not np.any(reg.contains(r, np.array(pts))), f"{reg.region_name(r)} contains a boundary sample"
    print("  ✓ contains(r, z) is false on every boundary sample")

    rng = np.random.default_rng(21)
    cloud = rng.normal(scale=3.0, size=5000) + 1j * rng.normal(scale=3.0, size=5000)
    h = reg.hurwitz()
    assert np.array_equal(reg.contains(h, cloud), cloud.real < 0.0)
    assert all(reg.contains(h, z) == (z.real < 0.0) for z in cloud[:200])
    print("  ✓ Hurwitz membership equals Re z < 0 on a random cloud")

    print("✓ Boundary exclusion OK\n")


def test_boundary_distance():
    print("Testing boundary_distance...")

    assert reg.boundary_distance(reg.hurwitz(), -2 + 5j) == 2.0
    assert abs(reg.boundary_distance(reg.disk(), 0.5j) - 0.5) < 1e-15
    assert abs(reg.boundary_distance(reg.shifted(1.0), -0.75) - 0.25) < 1e-15

    sec = reg.sector(math.pi / 4)
    z = -1.0
    assert abs(reg.boundary_distance(sec, z) - math.sin(math.pi / 4)) < 1e-12
    assert reg.boundary_distance(sec, 0) == 0.0
    print("  ✓ Distances to each boundary kind")

    print("✓ Boundary distance OK\n")


@pytest.mark.parametrize('region', [
    reg.hurwitz(), reg.shifted(0.4), reg.sector(math.pi / 3), reg.disk(),
])
def test_boundary_restriction(region):
    print(f"Testing boundary_restriction on {region}...")

    rng = np.random.default_rng(11)
    for _ in range(20):
        p = Polynomial(rng.normal(size=int(rng.integers(1, 6))))
        E, O, to_native = reg.boundary_restriction(region, p)
        u = rng.uniform(0.0, 4.0, size=9)
        q = P.polyval(u, E) + 1j * P.polyval(u, O)
        z = reg.boundary_map(region, to_native(u))
        value = evaluate(p, z)
        if region.kind == reg.DISK:
            value = value * (1.0 - 1j * u) ** p.degree
        assert np.allclose(q, value, atol=1e-9 * max(1.0, np.max(np.abs(q))))
        assert np.all(np.imag(z) >= -1e-12), "Restriction must cover the upper half"
    print(f"  ✓ p(z(u)) = kappa(u) (E + iO) on {region}")


if __name__ == '__main__':
    test_contains()
    test_region_construction()
    test_boundary_points()
    test_boundary_points_not_contained()
    test_boundary_distance()
    for r in (reg.hurwitz(), reg.shifted(0.4), reg.sector(math.pi / 3), reg.disk()):
        test_boundary_restriction(r)
    print("\n✅ Region module PASSED\n")

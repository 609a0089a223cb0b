#!/usr/bin/env python3
"""Test helper functions"""

import json
import math
import os
import sys
sys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)), '..'))

import numpy as np
import pytest

import family as fam
import robust_helpers as helpers
from errors import DomainError


def test_jsonable():
    print("Testing jsonable...")

    value = helpers.jsonable({
        'z': 1 + 2j,
        'n': np.int64(3),
        'x': np.float64(0.5),
        'flag': np.bool_(True),
        'arr': np.array([1.0, 2.0]),
        'nested': ({'inf': math.inf},),
    })
    assert value == {
        'z': {'re': 1.0, 'im': 2.0},
        'n': 3,
        'x': 0.5,
        'flag': True,
        'arr': [1.0, 2.0],
        'nested': [{'inf': 'inf'}],
    }
    json.dumps(value)
    print("  Complex, numpy and non-finite values ✓")

    assert helpers.jsonable(-math.inf) == '-inf' and helpers.jsonable(math.nan) == 'nan'
    print("  Non-finite markers ✓")

    print("✓ jsonable OK\n")


def test_reports():
    print("Testing reports...")

    report = helpers.stability_report('check', 'stable', 'stable: ok', {'families_checked': 4}, {'seed': 42},
                                      witness={'root': 1.0})
    assert report['exit_code'] == 0 and 'witness' not in report
    assert report['config'] == {'seed': 42} and report['tool'] == 'polystab'
    print("  Stable report drops the witness ✓")

    report = helpers.stability_report('check', 'unstable', 'unstable', {}, {}, witness={'root': 1 + 1j},
                                      extra={'region': 'hurwitz'})
    assert report['exit_code'] == 1 and report['witness'] == {'root': {'re': 1.0, 'im': 1.0}}
    assert report['region'] == 'hurwitz'
    print("  Unstable report keeps the witness ✓")

    assert helpers.exit_code_for('inconclusive') == 2
    error = helpers.error_report('check', 'line 3: bad', extra={'line': 3})
    assert error['exit_code'] == 3 and error['status'] == 'error' and error['line'] == 3
    print("  Exit codes and error reports ✓")

    print("✓ Reports OK\n")


def test_require_family_kind():
    print("Testing require_family_kind...")

    @helpers.require_family_kind(fam.INTERVAL)
    def interval_only(f):
        return f.n

    box = fam.MatrixFamily(((fam.IntervalEntry((1,), (2,)),),))
    assert interval_only(box) == 1
    with pytest.raises(DomainError):
        interval_only(fam.MatrixFamily(((fam.PolytopicEntry(([1],)),),)))
    print("  Family kind precondition ✓")

    print("✓ require_family_kind OK\n")


def test_validation():
    print("Testing validation...")

    valid, msg = helpers.validate_range(0.5, 0.0, 1.0, "refine_fraction")
    assert valid and msg is None
    valid, msg = helpers.validate_range(1.5, 0.0, 1.0, "refine_fraction")
    assert not valid and "refine_fraction" in msg
    print(f"  Range rejection ✓: {msg}")

    print("✓ Validation OK\n")


if __name__ == '__main__':
    test_jsonable()
    test_reports()
    test_require_family_kind()
    test_validation()
    print("\n✅ Helper functions PASSED\n")

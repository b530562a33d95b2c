"""Cochain complexes of chain moduli rings and their cohomology."""

import numpy as np
import pytest

from isocx.complexes import (
    FieldComplex,
    Specialization,
    build_complex,
    compositions,
    expected_profile,
    h2_cokernel_check,
    rank_generating_check,
)
from isocx.field import GF
from isocx.isogeny import sigma_pow
from isocx.linalg import fq_matmul


def test_compositions_enumeration():
    assert compositions(0, 0) == [()]
    assert compositions(1, 0) == []
    assert compositions(3, 2) == [(1, 2), (2, 1)]
    assert compositions(4, 2) == [(1, 3), (2, 2), (3, 1)]
    assert compositions(2, 3) == []
    for r in range(1, 7):
        total = sum(len(compositions(r, q)) for q in range(1, r + 1))
        assert total == 2 ** (r - 1)


def test_build_complex_dims():
    assert build_complex(2, 0).dims == [1]
    assert build_complex(2, 1).dims == [0, 3]
    assert build_complex(2, 2).dims == [0, 7, 9]
    cx = build_complex(3, 3)
    assert cx.dims[3] == sigma_pow(3, 1) ** 3 == 64
    assert cx.dims[1] == sigma_pow(3, 3) == 40
    assert cx.dims[2] == 2 * sigma_pow(3, 1) * sigma_pow(3, 2) == 104


def test_coboundary_squares_to_zero():
    for p, r in ((2, 3), (3, 3), (2, 4)):
        cx = build_complex(p, r)
        for q in range(len(cx.deltas) - 1):
            if cx.deltas[q].size and cx.deltas[q + 1].size:
                comp = fq_matmul(cx.field, cx.deltas[q + 1], cx.deltas[q])
                assert not comp.any()


def test_complex_validates_shapes():
    field = GF(2)
    with pytest.raises(ValueError):
        FieldComplex(field, [2, 3], [np.zeros((2, 2), dtype=np.int16)])
    with pytest.raises(ValueError):
        FieldComplex(field, [2, 3], [])


def test_cohomology_closed_point_examples():
    assert build_complex(2, 0).cohomology() == {0: 1}
    assert build_complex(2, 1).cohomology() == {1: 3}
    assert build_complex(2, 2).cohomology() == {2: 2}
    assert build_complex(3, 1).cohomology() == {1: 4}
    assert build_complex(2, 3).cohomology() == {}


def test_expected_profile_table():
    assert expected_profile(2, 0) == {0: 1}
    assert expected_profile(3, 1) == {1: 4}
    assert expected_profile(5, 2) == {2: 5}
    assert expected_profile(2, 3) == {}
    assert expected_profile(2, 4) == {}
    assert expected_profile(2, 9) == {}


def test_concentration_at_field_points():
    # the profile is the same at every parameter value, prime and quadratic
    for p in (2, 3):
        for r in range(0, 3):
            want = expected_profile(p, r)
            for a in range(p):
                cx = build_complex(p, r, Specialization.field_point(a))
                assert cx.cohomology() == want
            ext = GF(p, 2)
            for a in range(ext.q):
                cx = build_complex(p, r, Specialization.field_point(a), ext)
                assert cx.cohomology() == want


def test_concentration_spot_checks_depth_three():
    assert build_complex(2, 3, Specialization.field_point(1)).cohomology() == {}
    F4 = GF(2, 2)
    assert build_complex(2, 3, Specialization.field_point(2), F4).cohomology() == {}


def test_euler_characteristic_matches_generating_function():
    # chi of the complex equals the T^r coefficient of (1 - T)(1 - pT)
    for p in (2, 3):
        coeffs = [1, -(p + 1), p, 0, 0]
        for r in range(0, 5):
            cx = build_complex(p, r)
            chi = sum((-1) ** q * d for q, d in enumerate(cx.dims))
            assert chi == coeffs[r]


def test_rank_generating_report():
    for p in (2, 3):
        rep = rank_generating_check(p, r_max=5, build_up_to=3)
        assert rep["pass"] and rep["dims_ok"] and rep["cohomology_ok"]
        assert rep["dim_failures"] == []
        assert rep["profiles"] == {
            r: expected_profile(p, r) for r in range(0, 4)
        }


def test_generating_function_coefficients():
    # named coefficients: 9 = sigma(2)^2 at (q, r) = (2, 2), 104 at p = 3
    assert build_complex(2, 2).dims[2] == 9 == sigma_pow(2, 1) ** 2
    assert build_complex(3, 3).dims[2] == 104


def test_h2_cokernel():
    for p in (2, 3, 5):
        assert h2_cokernel_check(p)


def test_specialization_validation():
    with pytest.raises(ValueError):
        Specialization("closed_point", 1)
    with pytest.raises(ValueError):
        Specialization("generic", 0)
    with pytest.raises(ValueError):
        build_complex(2, 1, Specialization.field_point(2))
    with pytest.raises(ValueError):
        build_complex(2, 1, None, GF(3))

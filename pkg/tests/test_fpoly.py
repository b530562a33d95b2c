"""Divisor-pair polynomials, ideal membership, and the composition law."""

import pytest

from isocx.fpoly import (
    FiniteRingSpec,
    category_closure_check,
    f_m,
    ideal_membership,
    poly_degree,
)
from isocx.isogeny import f_poly


def _sigma(m: int) -> int:
    return sum(d for d in range(1, m + 1) if m % d == 0)


def _mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            k = tuple(x + y for x, y in zip(ea, eb))
            c = out.get(k, 0) + ca * cb
            if c:
                out[k] = c
            elif k in out:
                del out[k]
    return out


def test_f_m_small_cases():
    assert f_m(1) == {(1, 0): 1, (0, 1): -1}
    assert f_m(2) == {(3, 0): 1, (2, 2): -1, (1, 1): -1, (0, 3): 1}
    want = {(0, 0): 1}
    for d in (1, 2, 4):
        want = _mul(want, {(d, 0): 1, (0, 4 // d): -1})
    assert f_m(4) == want


def test_f_m_degrees_and_unit_leading_coefficients():
    for m in range(1, 17):
        F = f_m(m)
        sig = _sigma(m)
        assert poly_degree(F, 0) == sig
        assert poly_degree(F, 1) == sig
        assert F[(sig, 0)] == 1
        assert abs(F[(0, sig)]) == 1


def test_f_m_reduces_to_char_p_chain_polynomial():
    for p, r in ((2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1)):
        FZ = f_m(p ** r)
        modp = {e: c % p for e, c in FZ.items() if c % p}
        assert modp == f_poly(p, r).terms


def test_f_m_rejects_nonpositive():
    with pytest.raises(ValueError):
        f_m(0)


def test_ideal_membership_named_cases():
    assert ideal_membership(1, 1)
    assert ideal_membership(2, 1)
    assert ideal_membership(1, 2)
    assert ideal_membership(2, 2)


def test_ideal_membership_all_products_to_sixteen():
    for m in range(1, 17):
        for n in range(1, 17):
            if m * n <= 16:
                assert ideal_membership(m, n), (m, n)


def test_ideal_membership_validation():
    with pytest.raises(ValueError):
        ideal_membership(0, 1)
    with pytest.raises(ValueError):
        ideal_membership(16, 16)


def test_ring_spec_constructions():
    z6 = FiniteRingSpec.zmod(6)
    assert len(list(z6.elements)) == 6
    assert z6.add(4, 5) == 3 and z6.mul(4, 5) == 2
    f4 = FiniteRingSpec.gf(4)
    assert len(f4.elements) == 4
    u = (0, 1)
    assert f4.mul(u, u) == (1, 1)  # u^2 = u + 1
    t8 = FiniteRingSpec.gf_trunc(2, 3)
    assert len(t8.elements) == 8
    t = (0, 1, 0)
    assert t8.mul(t, t) == (0, 0, 1)
    assert t8.mul(t8.mul(t, t), t) == t8.zero == (0, 0, 0)
    with pytest.raises(ValueError):
        FiniteRingSpec.zmod(0)
    with pytest.raises(ValueError):
        FiniteRingSpec.gf(6)


def test_power_table():
    z5 = FiniteRingSpec.zmod(5)
    table = z5.power_table(4)
    for a in range(5):
        assert table[a] == [pow(a, k, 5) for k in range(5)] or a == 0
    assert table[0] == [1, 0, 0, 0, 0]


def test_composite_morphism_exists_mod_four():
    # the motivating example: both F_2(2, 2) and F_4(2, 2) vanish mod 4
    def evaluate(F, a, b, n):
        return sum(c * pow(a, i, n) * pow(b, j, n) for (i, j), c in F.items()) % n

    assert evaluate(f_m(2), 2, 2, 4) == 0
    assert evaluate(f_m(4), 2, 2, 4) == 0
    assert evaluate(f_m(2), 1, 2, 4) != 0


def test_closure_small_modular_rings():
    for n in range(1, 13):
        rep = category_closure_check(FiniteRingSpec.zmod(n), 6)
        assert rep["pass"], rep
        assert rep["counterexamples"] == []
        if n > 1:
            assert rep["checked"] > 0


def test_closure_extension_rings():
    for ring in (
        FiniteRingSpec.gf(4),
        FiniteRingSpec.gf(8),
        FiniteRingSpec.gf(9),
        FiniteRingSpec.gf_trunc(2, 3),
    ):
        rep = category_closure_check(ring, 6)
        assert rep["pass"], rep

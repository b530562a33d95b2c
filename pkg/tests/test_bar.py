"""Bar-side chain complexes and the word-order filtration."""

import itertools

import numpy as np
import pytest

from isocx.bar import (
    bar_complex,
    bar_homology,
    descent_set,
    gr_piece_check,
)
from isocx.complexes import build_complex, expected_profile


def test_descent_set():
    assert descent_set(()) == ()
    assert descent_set((2, 2)) == ()
    assert descent_set((0, 1)) == ()
    assert descent_set((1, 0)) == (1,)
    assert descent_set((1, 0, 2, 0)) == (1, 3)
    assert descent_set((0, 1, 0, 0)) == (2,)


def test_bar_dims():
    cx = bar_complex(2, 2)
    assert cx.dims == {1: 7, 2: 9}
    assert bar_complex(2, 3).dims[3] == 27
    assert bar_complex(3, 2).dims == {1: 13, 2: 16}


def test_grade_one_has_zero_differential():
    for p in (2, 3):
        cx = bar_complex(p, 1)
        assert cx.dims == {1: p + 1}
        assert cx.boundary[1].shape == (0, p + 1)
        assert cx.homology() == {1: p + 1}


def test_bar_rejects_grade_zero():
    with pytest.raises(ValueError):
        bar_complex(2, 0)


def test_boundary_squares_to_zero():
    for p, r in ((2, 4), (3, 3)):
        cx = bar_complex(p, r)
        for q in range(2, r):
            A = cx.boundary[q].astype(np.int64)
            B = cx.boundary[q + 1].astype(np.int64)
            if A.size and B.size:
                assert not ((A @ B) % p).any()


def test_bar_homology_examples():
    assert bar_homology(2, 0) == {0: 1}
    assert bar_homology(2, 2) == {2: 2}
    assert bar_homology(3, 1) == {1: 4}
    assert bar_homology(2, 4) == {}


def test_bar_homology_matches_dual_side():
    # same ranks as the cochain complex at the closed point, degree by degree
    for p in (2, 3):
        for r in range(0, 4):
            assert bar_homology(p, r) == expected_profile(p, r)
            cx = build_complex(p, r)
            assert cx.cohomology() == bar_homology(p, r)
            if r >= 1:
                bar_dims = bar_complex(p, r).dims
                assert [bar_dims[q] for q in range(1, r + 1)] == cx.dims[1:]


def test_gr_piece_single_letter():
    for p in (2, 3):
        for i in range(p + 1):
            rep = gr_piece_check(p, 1, (i,))
            assert rep["pass"]
            assert rep["dims"] == {1: 1}
            assert rep["homology"] == {1: 1}


def test_gr_piece_examples():
    # all-zero word: one splitting per degree, no homology
    rep = gr_piece_check(2, 2, (0, 0))
    assert rep["pass"]
    assert rep["dims"] == {1: 1, 2: 1}
    assert rep["homology"] == {}
    # the inadmissible word (1, 0) survives only split apart
    rep = gr_piece_check(2, 2, (1, 0))
    assert rep["pass"]
    assert rep["dims"] == {1: 0, 2: 1}
    assert rep["descents"] == (1,)
    assert rep["homology"] == {2: 1}
    # an interior inadmissible segment contributes nothing
    rep = gr_piece_check(2, 3, (1, 0, 1))
    assert rep["pass"]
    assert rep["dims"] == {1: 0, 2: 1, 3: 1}
    assert rep["homology"] == {}


def test_gr_piece_validation():
    with pytest.raises(ValueError):
        gr_piece_check(2, 2, (1,))
    with pytest.raises(ValueError):
        gr_piece_check(2, 2, (3, 0))


def test_gr_pieces_sum_to_total():
    # every word passes its own check, the boundary never raises the order,
    # and rank-1 words are counted by the all-descents rule
    for p in (2, 3):
        for r in range(1, 4):
            total = 0
            for I in itertools.product(range(p + 1), repeat=r):
                rep = gr_piece_check(p, r, I)
                assert rep["pass"], (p, r, I)
                assert rep["order_ok"]
                total += rep["expected_rank"]
            want = {1: p + 1, 2: p}.get(r, 0)
            assert total == want
            assert total == sum(bar_homology(p, r).values())

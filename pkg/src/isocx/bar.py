"""Bar-side chain complexes of the power-operation ring at the closed fiber.

The degree-q part of the grade-r bar complex is spanned by q-tuples of
admissible words with lengths summing to r; the boundary is the alternating
sum of neighbor products.  Everything here is over the prime field with the
base parameter set to zero, which is where the concentration statement
lives: homology sits in degree r only, with ranks 1, p+1, p, 0, 0 for
r = 0..4, matching the cochain side by duality.

Products of neighboring factors are computed in the full ring and only then
evaluated at zero.  That matters: multiplying two admissible words can
produce admissible terms whose coefficients have nonzero constant part even
though every rewriting step introduces a positive power of the parameter,
because migrating those powers back through a prefix regenerates constants.

The tail-major word order filters each degree by the concatenated word.  The
graded piece of a word I is spanned by its splittings into admissible
segments, i.e. by cut sets containing every descent of I (a nonzero letter
followed by a zero); its homology is concentrated in degree r with rank 1
exactly when all r - 1 positions are descents, and rank 0 otherwise.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from .complexes import compositions
from .field import GF, TruncSeries
from .gamma import (
    DEFAULT_TRUNC,
    GammaRing,
    admissible_basis,
    is_admissible,
    order_compare,
    word_order_key,
)
from .isogeny import sigma_pow
from .linalg import fq_rank

__all__ = [
    "BarComplexOverK",
    "bar_complex",
    "bar_homology",
    "descent_set",
    "gr_piece_check",
]


def descent_set(word: tuple[int, ...]) -> tuple[int, ...]:
    """Positions k (1-based) where a nonzero letter is followed by a zero."""
    return tuple(
        k for k in range(1, len(word)) if word[k - 1] != 0 and word[k] == 0
    )


@lru_cache(maxsize=None)
def _shared_ring(p: int, trunc: int) -> GammaRing:
    return GammaRing(GF(p), trunc)


def _tuple_basis(p: int, r: int, q: int) -> list[tuple[tuple[int, ...], ...]]:
    """Degree-q basis tuples, composition-major then product-lex within."""
    out = []
    for comp in compositions(r, q):
        pools = [admissible_basis(p, part) for part in comp]
        out.extend(itertools.product(*pools))
    return out


class BarComplexOverK:
    """Chain complex in degrees 1..r with boundary d_q: degree q -> q - 1.

    basis[q] lists the tuples of admissible words; boundary[q] is the matrix
    of d_q over the prime field (empty for q = 1).  d o d = 0 is asserted on
    construction.
    """

    def __init__(self, p: int, r: int, trunc: int = DEFAULT_TRUNC):
        if r < 1:
            raise ValueError("bar complex needs grade r >= 1")
        self.p = p
        self.r = r
        self.field = GF(p)
        ring = _shared_ring(p, trunc)
        self.basis = {q: _tuple_basis(p, r, q) for q in range(1, r + 1)}
        self.index = {
            q: {t: i for i, t in enumerate(bas)} for q, bas in self.basis.items()
        }
        self.dims = {q: len(bas) for q, bas in self.basis.items()}
        prod_cache: dict = {}

        def word_product(I, J):
            key = (I, J)
            if key not in prod_cache:
                prod_cache[key] = ring.gamma_mul(
                    ring.word_element(I), ring.word_element(J)
                )
            return prod_cache[key]

        def push_left(prefix, coeff):
            # express (prefix tuple) * coeff in the left-coefficient basis
            items = {(): coeff}
            for W in reversed(prefix):
                nxt: dict = {}
                for suffix, a in items.items():
                    shifted = ring.normalize(ring.right_mult_word(W, a), len(W))
                    for J, c in shifted.coeffs.items():
                        key = (J,) + suffix
                        nxt[key] = nxt[key] + c if key in nxt else c
                items = nxt
            return items

        self.boundary = {1: np.zeros((0, self.dims[1]), dtype=np.int16)}
        for q in range(2, r + 1):
            D = np.zeros((self.dims[q - 1], self.dims[q]), dtype=np.int16)
            row_of = self.index[q - 1]
            for col, tup in enumerate(self.basis[q]):
                for i in range(1, q):
                    merged = word_product(tup[i - 1], tup[i])
                    sign = self.field.neg(1) if i % 2 else 1
                    for K, a in merged.coeffs.items():
                        for pre, c in push_left(tup[: i - 1], a).items():
                            v = c.constant_term()
                            if not v:
                                continue
                            v = self.field.mul(sign, v)
                            tgt = pre + (K,) + tup[i + 1:]
                            row = row_of[tgt]
                            D[row, col] = self.field.add(D[row, col], v)
            self.boundary[q] = D
        for q in range(2, r):
            comp = _matmul_modp(p, self.boundary[q], self.boundary[q + 1])
            assert not comp.any(), f"boundary square nonzero at degree {q + 1}"

    def homology(self) -> dict[int, int]:
        """Degree -> rank over the prime field; zero ranks omitted."""
        ranks = {q: fq_rank(self.field, d) for q, d in self.boundary.items()}
        out = {}
        for q in range(1, self.r + 1):
            h = self.dims[q] - ranks[q] - ranks.get(q + 1, 0)
            assert h >= 0, "rank bookkeeping underflow"
            if h:
                out[q] = h
        return out


def _matmul_modp(p: int, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    if not A.size or not B.size:
        return np.zeros((A.shape[0], B.shape[1]), dtype=np.int16)
    return (A.astype(np.int64) @ B.astype(np.int64) % p).astype(np.int16)


@lru_cache(maxsize=None)
def bar_complex(p: int, r: int, trunc: int = DEFAULT_TRUNC) -> BarComplexOverK:
    return BarComplexOverK(p, r, trunc)


def bar_homology(p: int, r: int, trunc: int = DEFAULT_TRUNC) -> dict[int, int]:
    """Homology profile of the grade-r bar complex over the prime field."""
    if r == 0:
        return {0: 1}
    return bar_complex(p, r, trunc).homology()


def _admissible_splittings(I: tuple[int, ...], q: int) -> list[tuple[int, ...]]:
    """Cut sets of size q - 1 splitting I into q admissible segments."""
    r = len(I)
    out = []
    for cuts in itertools.combinations(range(1, r), q - 1):
        bounds = (0,) + cuts + (r,)
        segs = [I[bounds[k]: bounds[k + 1]] for k in range(q)]
        if all(is_admissible(s) for s in segs):
            out.append(cuts)
    return out


def gr_piece_check(p: int, r: int, I, trunc: int = DEFAULT_TRUNC) -> dict:
    """Graded-piece report for the concatenated word I.

    Buckets the bar basis by concatenation, compares the bucket dimensions
    with the splitting count, verifies the boundary never raises the word in
    the tail-major order, and computes the bucket complex homology against
    the all-descents rank rule.
    """
    I = tuple(I)
    if len(I) != r:
        raise ValueError(f"word {I} does not have length {r}")
    if any(not 0 <= a <= p for a in I):
        raise ValueError(f"word {I} has letters outside 0..{p}")
    cx = bar_complex(p, r, trunc)
    key_I = word_order_key(I)
    buckets = {
        q: [i for i, t in enumerate(bas) if sum(t, ()) == I]
        for q, bas in cx.basis.items()
    }
    dims = {q: len(ix) for q, ix in buckets.items()}
    model_dims = {q: len(_admissible_splittings(I, q)) for q in range(1, r + 1)}
    order_ok = True
    for q in range(2, r + 1):
        D = cx.boundary[q]
        for col in buckets[q]:
            for row in np.nonzero(D[:, col])[0]:
                tgt = sum(cx.basis[q - 1][int(row)], ())
                if word_order_key(tgt) > key_I:
                    order_ok = False
    # bucket complex: rows and columns restricted to the same concatenation
    ranks = {}
    for q in range(2, r + 1):
        sub = cx.boundary[q][np.ix_(buckets[q - 1], buckets[q])]
        ranks[q] = fq_rank(cx.field, sub) if sub.size else 0
    homology = {}
    for q in range(1, r + 1):
        h = dims[q] - ranks.get(q, 0) - ranks.get(q + 1, 0)
        if h:
            homology[q] = h
    descents = descent_set(I)
    expected_rank = 1 if len(descents) == r - 1 else 0
    expected = {r: expected_rank} if expected_rank else {}
    ok = dims == model_dims and order_ok and homology == expected
    return {
        "word": I,
        "descents": descents,
        "dims": dims,
        "model_dims": model_dims,
        "order_ok": order_ok,
        "homology": homology,
        "expected_rank": expected_rank,
        "pass": ok,
    }

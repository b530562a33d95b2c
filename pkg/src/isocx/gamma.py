"""The graded dual of the chain moduli tower: power-operation words.

Grade r is the left-A dual of the depth-r chain ring, a free module on the
admissible words of length r in the letters P_0, ..., P_p (a word is
admissible when its zeros form a prefix; there are sigma(p^r) of them).  The
base A = k[[x]]/(x^T) is not central: letters migrate series coefficients to
the left through the grade-1 relations

    P_0 x = -x^{p+1} P_p,   P_1 x = P_0 + x P_p,
    P_i x = P_{i-1}  (1 < i < p),   P_p x = P_{p-1} + x^p P_p,

with a coefficientwise Frobenius twist per letter, and the quadratic relation
P_i P_0 = - sum_{j=1..p} x^j P_i P_j (i >= 1) rewrites inadmissible words.
Every rewrite strictly decreases the word in the tail-major order exposed by
word_order_key, so normalize() processes pending words largest-first and
terminates with each word handled exactly once.

Truncation does not commute with migration: x^n for n >= T migrates through
one letter to terms of degree about n/p, so the ideal (x^T) is not stable
under right multiplication and arithmetic naively truncated at T silently
corrupts degrees below T (associativity then genuinely fails on concrete
triples).  Coefficients are therefore carried at a working precision W and
only read off mod x^T.  Since one letter multiplies degrees by at most p
(deg P_i x^n expansions = pn + 1), terms dropped at degree >= W land at
valuation >= W / p^L after migrating through L further letters; the default
W = p^3 T is exact mod x^T for any products of total grade <= 4, and the
work argument raises the budget beyond that.

Pairing with the depth-r chain ring goes through full refinement: the functional
of the word (i_1, ..., i_r) reads off the coefficient of x_1^{i_1}...x_r^{i_r}
in the refinement of an element into the all-ones chain ring, where the
letters form the dual basis of the monomial basis.
"""

from __future__ import annotations

import heapq
import itertools
import random

import numpy as np

from .field import FieldSpec, TruncSeries
from .isogeny import (
    DEFAULT_TRUNC,
    ChainShape,
    IsogRingElement,
    mul_var,
    one,
    sigma_pow,
)
from .linalg import fq_rank

__all__ = [
    "is_admissible",
    "word_order_key",
    "order_compare",
    "admissible_basis",
    "sample_element",
    "GammaElement",
    "GammaRing",
]


def is_admissible(word: tuple[int, ...]) -> bool:
    """True when every zero letter sits in an initial run of zeros."""
    seen_nonzero = False
    for a in word:
        if a:
            seen_nonzero = True
        elif seen_nonzero:
            return False
    return True


def word_order_key(word: tuple[int, ...]) -> tuple[int, ...]:
    """Sort key for the tail-major word order.

    Words compare by last letter first, with a larger letter meaning a
    smaller word; ties recurse into the preceding prefix.
    """
    return tuple(-a for a in reversed(word))


def order_compare(a: tuple[int, ...], b: tuple[int, ...]) -> int:
    """-1, 0, 1 as a precedes, equals, follows b; words must share a length."""
    if len(a) != len(b):
        raise ValueError(f"cannot compare words of lengths {len(a)} and {len(b)}")
    ka, kb = word_order_key(a), word_order_key(b)
    return -1 if ka < kb else (1 if ka > kb else 0)


def admissible_basis(p: int, r: int) -> list[tuple[int, ...]]:
    """All admissible length-r words over {0..p}, lexicographically sorted.

    The listing order is presentation only; rewriting uses word_order_key,
    which sorts differently.
    """
    words = []
    for z in range(r + 1):
        for tail in itertools.product(range(1, p + 1), repeat=r - z):
            words.append((0,) * z + tail)
    words.sort()
    assert len(words) == sigma_pow(p, r)
    return words


def sample_element(ring: "GammaRing", rng: random.Random, grade: int,
                   words: int = 2, monomials: int = 2) -> "GammaElement":
    """Random element: a few admissible words with short polynomial coefficients.

    Coefficient supports stay below the read-off precision so sampled inputs
    are honest ring elements regardless of the working precision in use.
    """
    basis = admissible_basis(ring.p, grade)
    coeffs = {}
    for w in rng.sample(basis, min(words, len(basis))):
        c = [0] * ring.trunc
        for _ in range(monomials):
            c[rng.randrange(ring.trunc)] = rng.randrange(1, ring.field.q)
        coeffs[w] = ring.lift(TruncSeries(ring.field, ring.trunc, c))
    return GammaElement(ring, grade, coeffs)


class GammaElement:
    """Graded element: admissible (or raw) words with left series coefficients."""

    __slots__ = ("ring", "grade", "coeffs")

    def __init__(self, ring: "GammaRing", grade: int, coeffs: dict):
        clean = {}
        for word, s in coeffs.items():
            word = tuple(word)
            if len(word) != grade:
                raise ValueError(f"word {word} does not have grade {grade}")
            if any(not 0 <= a <= ring.p for a in word):
                raise ValueError(f"letters of {word} outside 0..{ring.p}")
            if not s.is_zero():
                clean[word] = ring.lift(s)
        self.ring = ring
        self.grade = grade
        self.coeffs = clean

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other):
        if self.ring is not other.ring or self.grade != other.grade:
            raise ValueError("mismatched gamma grades")
        out = dict(self.coeffs)
        for w, s in other.coeffs.items():
            out[w] = out[w] + s if w in out else s
        return GammaElement(self.ring, self.grade, out)

    def __sub__(self, other):
        if self.ring is not other.ring or self.grade != other.grade:
            raise ValueError("mismatched gamma grades")
        out = dict(self.coeffs)
        for w, s in other.coeffs.items():
            out[w] = out[w] - s if w in out else -s
        return GammaElement(self.ring, self.grade, out)

    def __eq__(self, other):
        return (
            isinstance(other, GammaElement)
            and self.ring is other.ring
            and self.grade == other.grade
            and self.coeffs == other.coeffs
        )

    def __repr__(self):
        return f"GammaElement(grade={self.grade}, {len(self.coeffs)} words)"


class GammaRing:
    """Shared context: field, truncation, memoized migration and refinement data.

    trunc is the read-off precision used by the pairing; work is the internal
    precision of element coefficients (default p^3 * trunc, sound for total
    grade <= 4; see the module docstring).
    """

    def __init__(self, field: FieldSpec, trunc: int = DEFAULT_TRUNC,
                 work: int | None = None):
        if trunc < field.p + 2:
            raise ValueError(f"truncation {trunc} below p + 2")
        if work is None:
            work = field.p ** 3 * trunc
        if work < trunc:
            raise ValueError(f"working precision {work} below truncation {trunc}")
        self.field = field
        self.p = field.p
        self.trunc = trunc
        self.work = work
        self._mig: np.ndarray | None = None  # (p+1, p+1, work, cols built)
        self._refine: dict[int, list[dict]] = {}
        self._pair_arrays: dict[int, np.ndarray] = {}
        self._rewrite_mig: dict[tuple, dict] = {}

    # element constructors ----------------------------------------------

    def zero_series(self) -> TruncSeries:
        return TruncSeries.zero(self.field, self.work)

    def one_series(self) -> TruncSeries:
        return TruncSeries.one(self.field, self.work)

    def lift(self, s: TruncSeries) -> TruncSeries:
        """Adopt a series as a coefficient, treating it as an exact polynomial."""
        if s.field != self.field:
            raise ValueError("series field does not match the ring context")
        if s.trunc == self.work:
            return s
        if len(s.coeffs) > self.work:
            raise ValueError("series support exceeds the working precision")
        return TruncSeries(self.field, self.work, s.coeffs)

    def letter(self, i: int) -> GammaElement:
        """The generator P_i as a grade-1 element."""
        if not 0 <= i <= self.p:
            raise ValueError(f"letter {i} outside 0..{self.p}")
        return GammaElement(self, 1, {(i,): self.one_series()})

    def word_element(self, word, coeff: TruncSeries | None = None) -> GammaElement:
        if coeff is None:
            coeff = self.one_series()
        return GammaElement(self, len(word), {tuple(word): self.lift(coeff)})

    # right migration ----------------------------------------------------

    def _x_matrix(self) -> list[list[TruncSeries]]:
        """Right multiplication by x on grade 1: row i expands P_i * x."""
        p, W, f = self.p, self.work, self.field
        zero = self.zero_series()
        X = [[zero for _ in range(p + 1)] for _ in range(p + 1)]
        X[0][p] = -TruncSeries.x(f, W, p + 1)
        X[1][0] = self.one_series()
        X[1][p] = TruncSeries.x(f, W, 1)
        for i in range(2, p):
            X[i][i - 1] = self.one_series()
        X[p][p - 1] = self.one_series()
        X[p][p] = X[p][p] + TruncSeries.x(f, W, p)
        return X

    def _sparse_x(self) -> list[tuple[int, int, int, int]]:
        """The nonzero entries of the grade-1 matrix as (i, j, shift, scalar)."""
        p, f = self.p, self.field
        ent = [(0, p, p + 1, f.neg(1)), (1, 0, 0, 1), (1, p, 1, 1),
               (p, p - 1, 0, 1), (p, p, p, 1)]
        ent.extend((i, i - 1, 0, 1) for i in range(2, p))
        return ent

    def _migration(self, deg: int) -> np.ndarray:
        """Operator table M with M[i, j, :, n] = coefficients of the expansion
        of P_i x^n along P_j, built as far as column deg (capped at work)."""
        p, W = self.p, self.work
        deg = min(deg, W - 1)
        if self._mig is None:
            M = np.zeros((p + 1, p + 1, W, 1), dtype=np.int32)
            for i in range(p + 1):
                M[i, i, 0, 0] = 1
            self._mig = M
        have = self._mig.shape[3]
        if deg >= have:
            grow = max(deg + 1, min(2 * have, W))
            M = np.zeros((p + 1, p + 1, W, grow), dtype=np.int32)
            M[:, :, :, :have] = self._mig
            sparse = self._sparse_x()
            for n in range(have, grow):
                cur = M[:, :, :, n - 1]
                nxt = M[:, :, :, n]
                for t, j, s, c in sparse:
                    if s:
                        nxt[:, j, s:] += c * cur[:, t, : W - s]
                    else:
                        nxt[:, j, :] += c * cur[:, t, :]
                np.mod(nxt, self.p, out=nxt)
            self._mig = M
        return self._mig

    def xpow(self, n: int) -> list[list[TruncSeries]]:
        """Right-multiplication matrix of x^n, read from the operator table."""
        if n >= self.work:
            zero = self.zero_series()
            return [[zero] * (self.p + 1) for _ in range(self.p + 1)]
        M = self._migration(n)
        f, W = self.field, self.work
        return [
            [TruncSeries(f, W, M[i, j, :, n].tolist()) for j in range(self.p + 1)]
            for i in range(self.p + 1)
        ]

    def _apply_letter(self, i: int, vecs: np.ndarray) -> np.ndarray:
        """Migrate the columns of vecs (work x n, encoded entries) through P_i,
        twist included; returns (p+1, work, n)."""
        field, p = self.field, self.p
        deg = int(np.max(np.nonzero(np.any(vecs, axis=1))[0])) if vecs.any() else 0
        M = self._migration(deg)[i, :, :, : deg + 1]
        tw = field.FROB[vecs] if field.m == 2 else vecs
        top = tw[: deg + 1].astype(np.int32)
        if field.m == 1:
            out = (M @ top) % p
        else:
            lo = (M @ (top % p)) % p
            hi = (M @ (top // p)) % p
            out = lo + p * hi
        return out

    def right_mult_letter(self, i: int, f: TruncSeries) -> list[TruncSeries]:
        """P_i * f = sum_j out[j] * P_j, after the per-letter Frobenius twist."""
        vec = np.array(f.padded(self.work), dtype=np.int16)[:, None]
        res = self._apply_letter(i, vec)
        field, W = self.field, self.work
        return [TruncSeries(field, W, res[j, :, 0].tolist()) for j in range(self.p + 1)]

    def right_mult_word(self, word, f: TruncSeries) -> dict:
        """Migrate f left through the word; same-length words with new letters."""
        word = tuple(word)
        f = self.lift(f)
        if not word:
            return {(): f} if not f.is_zero() else {}
        field, W = self.field, self.work
        items: list[tuple[tuple, np.ndarray]] = [
            ((), np.array(f.padded(W), dtype=np.int16))
        ]
        for letter in reversed(word):
            if not items:
                break
            vecs = np.stack([v for _, v in items], axis=1)
            res = self._apply_letter(letter, vecs)
            new = []
            for j in range(self.p + 1):
                for c, (suffix, _) in enumerate(items):
                    col = res[j, :, c]
                    if col.any():
                        new.append(((j,) + suffix, col.astype(np.int16)))
            items = new
        out = {}
        for key, vec in items:
            nz = np.nonzero(vec)[0]
            if nz.size:
                out[key] = TruncSeries(field, W, vec[: nz[-1] + 1].tolist())
        return out

    def right_mult(self, elem: GammaElement, f: TruncSeries) -> GammaElement:
        """elem * f with the series migrated into left coefficients."""
        out: dict[tuple, TruncSeries] = {}
        for I, cI in elem.coeffs.items():
            for J, h in self.right_mult_word(I, f).items():
                s = cI * h
                out[J] = out[J] + s if J in out else s
        return GammaElement(self, elem.grade, out)

    # normalization ------------------------------------------------------

    @staticmethod
    def _rightmost_bad(word: tuple[int, ...]) -> int:
        """Index t of the rightmost zero preceded by a nonzero letter; -1 if none."""
        for t in range(len(word) - 1, 0, -1):
            if word[t] == 0 and word[t - 1] != 0:
                return t
        return -1

    def normalize(self, coeffs: dict, grade: int | None = None) -> GammaElement:
        """Rewrite arbitrary words into the admissible basis.

        Pending words are processed largest-first in the word order; each
        rewrite replaces the rightmost inadmissible pair and only produces
        strictly smaller words, which is asserted per step.
        """
        pending: dict[tuple, TruncSeries] = {}
        g = grade
        for word, s in coeffs.items():
            word = tuple(word)
            if g is None:
                g = len(word)
            if len(word) != g:
                raise ValueError("mixed word lengths in one element")
            if not s.is_zero():
                pending[word] = pending[word] + s if word in pending else s
        if g is None:
            raise ValueError("grade undetermined for an empty element")
        done: dict[tuple, TruncSeries] = {}
        # min-heap on the reversed word pops the largest word first (the order
        # key is the negated reversed word); stale entries are skipped lazily
        heap = [w[::-1] for w in pending]
        heapq.heapify(heap)
        while pending:
            I = heapq.heappop(heap)[::-1]
            if I not in pending:
                continue
            s = pending.pop(I)
            if s.is_zero():
                continue
            t = self._rightmost_bad(I)
            if t < 0:
                assert I not in done
                done[I] = s
                continue
            U, i, V = I[: t - 1], I[t - 1], I[t + 1:]
            key_I = word_order_key(I)
            for j in range(1, self.p + 1):
                mig = self._rewrite_mig.get((U, j))
                if mig is None:
                    mig = self.right_mult_word(
                        U, -TruncSeries.x(self.field, self.work, j))
                    self._rewrite_mig[(U, j)] = mig
                for U2, h in mig.items():
                    K = U2 + (i, j) + V
                    assert word_order_key(K) < key_I, "rewrite failed to decrease"
                    v = s * h
                    if not v.is_zero():
                        if K not in pending:
                            heapq.heappush(heap, K[::-1])
                        pending[K] = pending[K] + v if K in pending else v
        return GammaElement(self, g, done)

    # multiplication -----------------------------------------------------

    def gamma_mul(self, a: GammaElement, b: GammaElement) -> GammaElement:
        """Graded product: migrate b's coefficients through a's words, then
        concatenate and normalize."""
        if a.ring is not self or b.ring is not self:
            raise ValueError("elements belong to a different ring context")
        raw: dict[tuple, TruncSeries] = {}
        for I, fI in a.coeffs.items():
            for J, gJ in b.coeffs.items():
                for I2, h in self.right_mult_word(I, gJ).items():
                    K = I2 + J
                    s = fI * h
                    raw[K] = raw[K] + s if K in raw else s
        return self.normalize(raw, a.grade + b.grade)

    def mod_trunc(self, elem: GammaElement) -> dict:
        """Coefficients cut down to the read-off precision, dropping zeros."""
        out = {}
        for w, s in elem.coeffs.items():
            cut = TruncSeries(self.field, self.trunc, s.coeffs[: self.trunc])
            if not cut.is_zero():
                out[w] = cut
        return out

    def eq_mod_trunc(self, a: GammaElement, b: GammaElement) -> bool:
        """Equality of elements at the read-off precision."""
        return a.grade == b.grade and self.mod_trunc(a) == self.mod_trunc(b)

    # refinement and pairing ---------------------------------------------

    def refine_table(self, r: int) -> list[dict]:
        """Entry a: the full refinement of x_1^a in the all-ones chain ring,
        as a dict exponent-word -> series coefficient."""
        if r not in self._refine:
            if r == 0:
                # tables live at read-off precision, unlike element coefficients
                self._refine[0] = [{(): TruncSeries.one(self.field, self.trunc)}]
            else:
                shape = ChainShape(self.field, (1,) * r, self.trunc)
                elem = one(shape)
                table = []
                for a in range(sigma_pow(self.p, r)):
                    table.append(dict(elem.coeffs))
                    if a + 1 < sigma_pow(self.p, r):
                        elem = mul_var(elem, r)
                self._refine[r] = table
        return self._refine[r]

    def word_index(self, word: tuple[int, ...]) -> int:
        idx = 0
        for a in word:
            idx = idx * (self.p + 1) + a
        return idx

    def pair_array(self, r: int) -> np.ndarray:
        """Dense pairing data: PT[word_index, a, :] = series coefficients of the
        pairing of the word against x_1^a, for every length-r word."""
        if r not in self._pair_arrays:
            W = (self.p + 1) ** r
            sig = sigma_pow(self.p, r)
            PT = np.zeros((W, sig, self.trunc), dtype=np.int16)
            for a, row in enumerate(self.refine_table(r)):
                for expo, s in row.items():
                    PT[self.word_index(expo), a, :] = s.padded()
            self._pair_arrays[r] = PT
        return self._pair_arrays[r]

    def pairing(self, word, m: IsogRingElement) -> TruncSeries:
        """Dual-basis evaluation of a word functional against a ring element.

        Accepts elements of the depth-r ring (refined first) or of the
        all-ones shape (read directly); left coefficients multiply in.
        """
        word = tuple(word)
        r = len(word)
        rs = m.shape.rs
        if m.shape.trunc != self.trunc or m.shape.field != self.field:
            raise ValueError("element base does not match the ring context")
        if r == 0:
            if rs != ():
                raise ValueError("grade-0 pairing needs the empty shape")
            return m.coeffs.get((), self.zero_series())
        if rs == (1,) * r:
            s = m.coeffs.get(word)
            return s if s is not None else self.zero_series()
        if rs == (r,):
            table = self.refine_table(r)
            out = self.zero_series()
            for expo, s in m.coeffs.items():
                v = table[expo[0]].get(word)
                if v is not None:
                    out = out + s * v
            return out
        raise ValueError(f"pairing undefined for shape {rs}")

    def pair_matrix_rank(self, r: int) -> int:
        """Rank over k of the admissible-word pairing matrix at the closed point."""
        PT = self.pair_array(r)
        rows = [self.word_index(w) for w in admissible_basis(self.p, r)]
        M = PT[rows, :, 0]
        return fq_rank(self.field, M)

    def duality_check(self, r1: int, r2: int, collect: bool = False):
        """Product-coproduct duality on basis words.

        For all admissible I (grade r1), J (grade r2) and every monomial of
        the depth-(r1+r2) ring: the normalized product's pairing agrees with
        the concatenated-word functional through full refinement.  Also
        demands the admissible pairing matrices at the closed point be
        invertible in grades r1, r2 and r1 + r2.
        """
        field, T = self.field, self.trunc
        r = r1 + r2
        PT = self.pair_array(r)
        sig = sigma_pow(self.p, r)
        ADD, MUL = field.ADD, field.MUL
        failures = []
        for I in admissible_basis(self.p, r1):
            for J in admissible_basis(self.p, r2):
                prod = self.gamma_mul(self.word_element(I), self.word_element(J))
                lhs = np.zeros((sig, T), dtype=np.int16)
                for K, s in prod.coeffs.items():
                    block = PT[self.word_index(K)]
                    for t, c in enumerate(s.coeffs[:T]):
                        if c:
                            seg = MUL[c, block[:, : T - t]]
                            lhs[:, t:] = ADD[lhs[:, t:], seg]
                rhs = PT[self.word_index(I + J)]
                if not np.array_equal(lhs, rhs):
                    failures.append((I, J))
        ok = not failures
        for rr in sorted({r1, r2, r}):
            if self.pair_matrix_rank(rr) != sigma_pow(self.p, rr):
                ok = False
                failures.append(("pairing_matrix_rank", rr))
        return (ok, failures) if collect else ok

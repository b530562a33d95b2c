"""Exact dense linear algebra: ranks over small finite fields, Smith form over Z.

Matrices over F_q are numpy arrays of element indices (see field.py).  Row
reduction is vectorized through the field's lookup tables, and matrix products
go through exact float64 BLAS on the coefficient components, so ranks of the
few-thousand-row matrices that show up in the cochain complexes stay cheap.

The integer Smith normal form is the classical pivot-and-reduce algorithm on
Python ints; boundary matrices here are sparse with unit pivots, so entry
growth is a non-issue and nothing clever is required.
"""

from __future__ import annotations

import numpy as np

from .field import FieldSpec

__all__ = [
    "FqMatrix",
    "fq_rank",
    "fq_rref",
    "fq_matmul",
    "smith_normal_form",
]


def _as_index_array(data) -> np.ndarray:
    arr = np.array(data, dtype=np.int16)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1) if arr.size else arr.reshape(0, 0)
    if arr.ndim != 2:
        raise ValueError(f"need a 2-d matrix, got shape {arr.shape}")
    return arr


def fq_rref(field: FieldSpec, mat) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over F_q.

    Returns:
        (R, pivots): R the fully reduced matrix (index-encoded) and the list
        of pivot column positions.  len(pivots) is the rank.
    """
    A = _as_index_array(mat).copy()
    m, n = A.shape
    ADD, MUL, NEG, INV = field.ADD, field.MUL, field.NEG, field.INV
    pivots: list[int] = []
    pr = 0
    for col in range(n):
        if pr >= m:
            break
        nz = np.nonzero(A[pr:, col])[0]
        if nz.size == 0:
            continue
        r0 = pr + int(nz[0])
        if r0 != pr:
            A[[pr, r0]] = A[[r0, pr]]
        pivval = int(A[pr, col])
        if pivval != 1:
            A[pr] = MUL[int(INV[pivval]), A[pr]]
        colvals = A[:, col].copy()
        colvals[pr] = 0
        rows = np.nonzero(colvals)[0]
        if rows.size:
            factors = NEG[colvals[rows]]
            A[rows] = ADD[A[rows], MUL[factors[:, None], A[pr][None, :]]]
        pivots.append(col)
        pr += 1
    return A, pivots


def fq_rank(field: FieldSpec, mat) -> int:
    A = _as_index_array(mat)
    if A.size == 0:
        return 0
    return len(fq_rref(field, A)[1])


def _int_matmul_mod(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    # entries < p <= 7 and inner dim < 10^4 keep products well inside float64
    # exactness, so BLAS does the heavy lifting
    C = np.rint(A.astype(np.float64) @ B.astype(np.float64)).astype(np.int64)
    return C % p


def fq_matmul(field: FieldSpec, A, B) -> np.ndarray:
    """Exact product of index-encoded matrices over F_q."""
    A = _as_index_array(A)
    B = _as_index_array(B)
    if A.shape[1] != B.shape[0]:
        raise ValueError(f"shape mismatch {A.shape} x {B.shape}")
    p = field.p
    if field.m == 1:
        return _int_matmul_mod(A, B, p).astype(np.int16)
    # split into u-coefficient components and multiply mod the quadratic modulus
    mb, mc = field.modulus
    u2c0, u2c1 = (-mc) % p, (-mb) % p
    A0, A1 = A % p, A // p
    B0, B1 = B % p, B // p
    P00 = _int_matmul_mod(A0, B0, p)
    P01 = _int_matmul_mod(A0, B1, p)
    P10 = _int_matmul_mod(A1, B0, p)
    P11 = _int_matmul_mod(A1, B1, p)
    C0 = (P00 + u2c0 * P11) % p
    C1 = (P01 + P10 + u2c1 * P11) % p
    return (C0 + p * C1).astype(np.int16)


def fq_matvec(field: FieldSpec, A, v) -> np.ndarray:
    return fq_matmul(field, A, np.asarray(v, dtype=np.int16).reshape(-1, 1)).ravel()


class FqMatrix:
    """Thin wrapper pairing an index-encoded numpy array with its field."""

    def __init__(self, field: FieldSpec, data):
        self.field = field
        self.data = _as_index_array(data)

    @classmethod
    def zeros(cls, field, rows, cols):
        return cls(field, np.zeros((rows, cols), dtype=np.int16))

    @classmethod
    def identity(cls, field, n):
        return cls(field, np.eye(n, dtype=np.int16))

    @property
    def shape(self):
        return self.data.shape

    def rank(self) -> int:
        return fq_rank(self.field, self.data)

    def rref(self):
        R, piv = fq_rref(self.field, self.data)
        return FqMatrix(self.field, R), piv

    def mul(self, other: "FqMatrix") -> "FqMatrix":
        if self.field != other.field:
            raise ValueError("mismatched fields")
        return FqMatrix(self.field, fq_matmul(self.field, self.data, other.data))

    def __eq__(self, other):
        return (
            isinstance(other, FqMatrix)
            and self.field == other.field
            and self.data.shape == other.data.shape
            and bool(np.all(self.data == other.data))
        )

    def __repr__(self):
        return f"FqMatrix({self.field!r}, shape={self.data.shape})"


def smith_normal_form(rows) -> list[int]:
    """Nonzero invariant factors d_1 | d_2 | ... of an integer matrix.

    The number of factors is the rank; factors > 1 are the torsion part of
    the cokernel restricted to the pivot block.
    """
    A = [[int(x) for x in row] for row in rows]
    m = len(A)
    n = len(A[0]) if m else 0
    t = 0
    out: list[int] = []
    while t < m and t < n:
        # locate a nonzero entry of smallest magnitude in the trailing block
        best = None
        for i in range(t, m):
            Ai = A[i]
            for j in range(t, n):
                v = Ai[j]
                if v:
                    if best is None or abs(v) < abs(best[2]):
                        best = (i, j, v)
                        if abs(v) == 1:
                            break
            if best is not None and abs(best[2]) == 1:
                break
        if best is None:
            break
        bi, bj, _ = best
        if bi != t:
            A[t], A[bi] = A[bi], A[t]
        if bj != t:
            for row in A:
                row[t], row[bj] = row[bj], row[t]
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
        while True:
            # clear column t
            restart = False
            for i in range(t + 1, m):
                if A[i][t]:
                    qv = A[i][t] // A[t][t]
                    if qv:
                        At = A[t]
                        Ai = A[i]
                        for j in range(t, n):
                            Ai[j] -= qv * At[j]
                    if A[i][t]:
                        # remainder is a strictly smaller pivot candidate
                        A[t], A[i] = A[i], A[t]
                        if A[t][t] < 0:
                            A[t] = [-x for x in A[t]]
                        restart = True
                        break
            if restart:
                continue
            # clear row t
            for j in range(t + 1, n):
                if A[t][j]:
                    qv = A[t][j] // A[t][t]
                    if qv:
                        for row in A:
                            row[j] -= qv * row[t]
                    if A[t][j]:
                        for row in A:
                            row[t], row[j] = row[j], row[t]
                        if A[t][t] < 0:
                            A[t] = [-x for x in A[t]]
                        restart = True
                        break
            if restart:
                continue
            # enforce divisibility into the trailing block
            piv = A[t][t]
            fixed = True
            for i in range(t + 1, m):
                Ai = A[i]
                for j in range(t + 1, n):
                    if Ai[j] % piv:
                        At = A[t]
                        for jj in range(t, n):
                            At[jj] += Ai[jj]
                        fixed = False
                        break
                if not fixed:
                    break
            if fixed:
                break
        out.append(A[t][t])
        t += 1
    for a, b in zip(out, out[1:]):
        assert b % a == 0, "invariant factor chain broken"
    return out

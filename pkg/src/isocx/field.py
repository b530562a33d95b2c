"""Small finite fields and truncated power series.

Field elements are encoded as integer indices 0..q-1.  For F_p the index is
the residue itself; for F_{p^2} = F_p[u]/(modulus) the element c0 + c1*u has
index c0 + c1*p.  All arithmetic goes through precomputed lookup tables, so
the same code path serves the prime field and the quadratic extension, and
numpy fancy indexing on the table arrays gives vectorized matrix arithmetic
elsewhere in the package.

Truncated power series k[[x]]/(x^T) are the coefficient base of the chain
moduli rings.  They are immutable and hashable so they can key memo tables.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "FieldSpec",
    "GF",
    "TruncSeries",
    "series",
    "frobenius_twist",
]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _find_irreducible_quadratic(p: int) -> tuple[int, int]:
    """Coefficients (b, c) of the first monic irreducible u^2 + b*u + c over F_p."""
    for b in range(p):
        for c in range(p):
            if all((t * t + b * t + c) % p for t in range(p)):
                return b, c
    raise ValueError(f"no irreducible quadratic over F_{p}")  # unreachable for prime p


class FieldSpec:
    """F_q with q = p^m, m in {1, 2}, with full arithmetic lookup tables.

    Args:
        p: prime characteristic.
        m: extension degree, 1 or 2.
        modulus: for m=2, coefficients (b, c) of the monic modulus u^2 + b*u + c.
            Defaults to the lexicographically first irreducible choice.
            Irreducibility is checked by exhaustive root search.
    """

    def __init__(self, p: int, m: int = 1, modulus: tuple[int, int] | None = None):
        if not is_prime(p):
            raise ValueError(f"p = {p} is not prime")
        if m not in (1, 2):
            raise ValueError(f"extension degree m = {m} not supported (need 1 or 2)")
        self.p = p
        self.m = m
        self.q = p ** m
        if m == 1:
            self.modulus = None
        else:
            if modulus is None:
                modulus = _find_irreducible_quadratic(p)
            b, c = int(modulus[0]) % p, int(modulus[1]) % p
            if any((t * t + b * t + c) % p == 0 for t in range(p)):
                raise ValueError(f"u^2 + {b}u + {c} has a root mod {p}, not irreducible")
            self.modulus = (b, c)
        self._build_tables()

    def _build_tables(self):
        p, q = self.p, self.q
        add = [[0] * q for _ in range(q)]
        mul = [[0] * q for _ in range(q)]
        neg = [0] * q
        if self.m == 1:
            for a in range(q):
                neg[a] = (-a) % p
                for b in range(q):
                    add[a][b] = (a + b) % p
                    mul[a][b] = (a * b) % p
        else:
            mb, mc = self.modulus
            # u^2 = u2c0 + u2c1 * u
            u2c0, u2c1 = (-mc) % p, (-mb) % p
            self._u_square = (u2c0, u2c1)
            for a in range(q):
                a0, a1 = a % p, a // p
                neg[a] = (-a0) % p + p * ((-a1) % p)
                for b in range(q):
                    b0, b1 = b % p, b // p
                    add[a][b] = (a0 + b0) % p + p * ((a1 + b1) % p)
                    hi = a1 * b1
                    c0 = (a0 * b0 + hi * u2c0) % p
                    c1 = (a0 * b1 + a1 * b0 + hi * u2c1) % p
                    mul[a][b] = c0 + p * c1
        inv = [0] * q
        for a in range(1, q):
            for b in range(1, q):
                if mul[a][b] == 1:
                    inv[a] = b
                    break
            assert inv[a] != 0, "unit without inverse; tables corrupt"
        frob = [0] * q
        for a in range(1, q):
            acc = a
            for _ in range(p - 1):
                acc = mul[acc][a]
            frob[a] = acc
        self._add = add
        self._mul = mul
        self._neg = neg
        self._inv = inv
        self._frob = frob
        self.ADD = np.array(add, dtype=np.int16)
        self.MUL = np.array(mul, dtype=np.int16)
        self.NEG = np.array(neg, dtype=np.int16)
        self.INV = np.array(inv, dtype=np.int16)
        self.FROB = np.array(frob, dtype=np.int16)

    # scalar operations -------------------------------------------------

    def add(self, a: int, b: int) -> int:
        return self._add[a][b]

    def sub(self, a: int, b: int) -> int:
        return self._add[a][self._neg[b]]

    def mul(self, a: int, b: int) -> int:
        return self._mul[a][b]

    def neg(self, a: int) -> int:
        return self._neg[a]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return self._inv[a]

    def pow(self, a: int, n: int) -> int:
        if n < 0:
            a, n = self.inv(a), -n
        out = 1
        base = a
        while n:
            if n & 1:
                out = self._mul[out][base]
            base = self._mul[base][base]
            n >>= 1
        return out

    def frob(self, a: int, r: int = 1) -> int:
        """r-fold Frobenius a -> a^(p^r); the identity on the prime field."""
        if self.m == 1:
            return a
        out = a
        for _ in range(r % self.m):
            out = self._frob[out]
        return out

    def from_int(self, n: int) -> int:
        """Image of the integer n under Z -> F_q."""
        return n % self.p

    def coeffs(self, a: int) -> tuple[int, int]:
        return a % self.p, a // self.p

    def elements(self) -> range:
        return range(self.q)

    # equality / caching -------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, FieldSpec)
            and (self.p, self.m, self.modulus) == (other.p, other.m, other.modulus)
        )

    def __hash__(self):
        return hash((self.p, self.m, self.modulus))

    def __repr__(self):
        if self.m == 1:
            return f"GF({self.p})"
        b, c = self.modulus
        return f"GF({self.p}^2; u^2+{b}u+{c})"


_field_cache: dict[tuple[int, int], FieldSpec] = {}


def GF(p: int, m: int = 1) -> FieldSpec:
    """Cached field constructor with the default modulus choice."""
    key = (p, m)
    if key not in _field_cache:
        _field_cache[key] = FieldSpec(p, m)
    return _field_cache[key]


class TruncSeries:
    """Element of k[[x]]/(x^T), stored as a coefficient tuple.

    Trailing zeros are stripped so the stored tuple length is the support
    bound, not T; cost of arithmetic then scales with the actual support,
    which matters once large working truncations appear.  padded() recovers
    a dense list when a consumer needs positional access.
    """

    __slots__ = ("field", "trunc", "coeffs", "_hash")

    def __init__(self, field: FieldSpec, trunc: int, coeffs=()):
        cs = tuple(coeffs)
        if len(cs) > trunc:
            cs = cs[:trunc]
        n = len(cs)
        while n and not cs[n - 1]:
            n -= 1
        self.field = field
        self.trunc = trunc
        self.coeffs = cs if n == len(cs) else cs[:n]
        self._hash = None

    def padded(self, n: int | None = None) -> list:
        """Dense coefficient list of length n (default: the truncation order)."""
        if n is None:
            n = self.trunc
        cs = list(self.coeffs[:n])
        cs.extend([0] * (n - len(cs)))
        return cs

    # constructors -------------------------------------------------------

    @classmethod
    def zero(cls, field, trunc):
        return cls(field, trunc)

    @classmethod
    def one(cls, field, trunc):
        return cls(field, trunc, (1,))

    @classmethod
    def x(cls, field, trunc, n=1):
        if n >= trunc:
            return cls(field, trunc)
        return cls(field, trunc, (0,) * n + (1,))

    @classmethod
    def const(cls, field, trunc, c):
        return cls(field, trunc, (c,))

    # predicates ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def constant_term(self) -> int:
        return self.coeffs[0] if self.coeffs else 0

    def valuation(self) -> int:
        """Index of the first nonzero coefficient; trunc for the zero class."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return self.trunc

    # arithmetic ---------------------------------------------------------

    def _check(self, other):
        if self.trunc != other.trunc:
            raise ValueError(f"mismatched truncation orders {self.trunc} != {other.trunc}")
        if self.field != other.field:
            raise ValueError("mismatched coefficient fields")

    def __add__(self, other):
        self._check(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        add = self.field._add
        out = [add[x][y] for x, y in zip(a, b)]
        out.extend(a[len(b):])
        return TruncSeries(self.field, self.trunc, out)

    def __neg__(self):
        neg = self.field._neg
        return TruncSeries(self.field, self.trunc, [neg[a] for a in self.coeffs])

    def __sub__(self, other):
        self._check(other)
        f = self.field
        add, neg = f._add, f._neg
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        out = [0] * n
        for i, c in enumerate(a):
            out[i] = c
        for i, c in enumerate(b):
            out[i] = add[out[i]][neg[c]]
        return TruncSeries(f, self.trunc, out)

    def __mul__(self, other):
        self._check(other)
        f = self.field
        T = self.trunc
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return TruncSeries(f, T)
        if len(a) * len(b) >= 1024:
            return self._mul_numpy(other)
        add, mul = f._add, f._mul
        out = [0] * min(len(a) + len(b) - 1, T)
        n = len(out)
        for i, ai in enumerate(a):
            if ai:
                row = mul[ai]
                for j, bj in enumerate(b):
                    if bj and i + j < n:
                        k = i + j
                        out[k] = add[out[k]][row[bj]]
        return TruncSeries(f, T, out)

    def _mul_numpy(self, other):
        """Dense product via integer convolution; exact, then reduced mod p."""
        f = self.field
        p, T = f.p, self.trunc
        a = np.array(self.coeffs, dtype=np.int64)
        b = np.array(other.coeffs, dtype=np.int64)
        if f.m == 1:
            out = np.convolve(a, b)[:T] % p
        else:
            a0, a1 = a % p, a // p
            b0, b1 = b % p, b // p
            hi = np.convolve(a1, b1)
            c0 = np.convolve(a0, b0)
            c1 = np.convolve(a0, b1) + np.convolve(a1, b0)
            u0, u1 = f._u_square
            out = ((c0 + u0 * hi) % p + p * ((c1 + u1 * hi) % p))[:T]
        return TruncSeries(f, T, out.tolist())

    def scale(self, c: int) -> "TruncSeries":
        if c == 0:
            return TruncSeries(self.field, self.trunc)
        if c == 1:
            return self
        row = self.field._mul[c]
        return TruncSeries(self.field, self.trunc, [row[a] for a in self.coeffs])

    def shift(self, n: int) -> "TruncSeries":
        """Multiply by x^n."""
        if n == 0:
            return self
        return TruncSeries(self.field, self.trunc, (0,) * n + self.coeffs)

    def frobenius(self, r: int = 1) -> "TruncSeries":
        """Coefficientwise a -> a^(p^r); the identity over the prime field."""
        if self.field.m == 1 or r % self.field.m == 0:
            return self
        fr = self.field._frob
        cs = self.coeffs
        for _ in range(r % self.field.m):
            cs = tuple(fr[a] for a in cs)
        return TruncSeries(self.field, self.trunc, cs)

    # hashing / comparison ----------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, TruncSeries)
            and self.trunc == other.trunc
            and self.field == other.field
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.trunc, self.coeffs))
        return self._hash

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                if i == 0:
                    terms.append(f"{c}")
                elif i == 1:
                    terms.append(f"{c}*x" if c != 1 else "x")
                else:
                    terms.append(f"{c}*x^{i}" if c != 1 else f"x^{i}")
        body = " + ".join(terms) if terms else "0"
        return f"<{body} mod x^{self.trunc}>"


def series(field: FieldSpec, trunc: int, coeffs=()) -> TruncSeries:
    return TruncSeries(field, trunc, coeffs)


def frobenius_twist(f: TruncSeries, r: int = 1) -> TruncSeries:
    """Coefficientwise Frobenius f^(p^r); series variable untouched."""
    return f.frobenius(r)

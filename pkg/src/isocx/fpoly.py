"""Divisor-pair polynomials over Z and the composition law they certify.

F_m(x, y) is the product of x^d - y^e over all factorizations m = d*e.  Two
facts are machine-checked here.  First, F_{mn}(x, z) lies in the ideal
generated by F_m(x, y) and F_n(y, z): both generators are monic up to sign
in their junior variable, so reducing F_{mn} by exact division (z first,
then y) terminates with a canonical remainder, and Z[x,y,z] mod the pair is
free over Z[x] on the monomials y^a z^b with a < sigma(m), b < sigma(n) --
a zero remainder is therefore a membership certificate, not a heuristic.
Second, the relation "some F_m vanishes" composes: over any finite ring in
the supported shapes, F_m(a,b) = 0 and F_n(b,c) = 0 force F_{mn}(a,c) = 0,
checked by exhaustive enumeration with factored evaluation.

Polynomials are sparse integer maps from exponent tuples; products expand
factors in increasing total degree to keep intermediates small.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

from .field import is_prime

__all__ = [
    "f_m",
    "poly_degree",
    "ideal_membership",
    "FiniteRingSpec",
    "category_closure_check",
]

DEFAULT_BUDGET = 64_000  # cap on sigma(m) * sigma(n) * sigma(mn)


def _divisor_pairs(m: int) -> list[tuple[int, int]]:
    return [(d, m // d) for d in range(1, m + 1) if m % d == 0]


def _sigma(m: int) -> int:
    return sum(e for _, e in _divisor_pairs(m))


def _poly_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            key = tuple(x + y for x, y in zip(ea, eb))
            c = out.get(key, 0) + ca * cb
            if c:
                out[key] = c
            elif key in out:
                del out[key]
    return out


def poly_degree(poly: dict, var: int) -> int:
    return max((e[var] for e in poly), default=-1)


@lru_cache(maxsize=None)
def f_m(m: int) -> dict:
    """Expanded F_m(x, y) as a map (deg_x, deg_y) -> integer coefficient."""
    if m < 1:
        raise ValueError("m must be positive")
    factors = [
        {(d, 0): 1, (0, e): -1} for d, e in _divisor_pairs(m)
    ]
    factors.sort(key=lambda f: max(sum(e) for e in f))
    out = {(0, 0): 1}
    for f in factors:
        out = _poly_mul(out, f)
    return out


def _embed(poly: dict, positions: tuple[int, int], nvars: int = 3) -> dict:
    """Place a bivariate polynomial into nvars variables at the given slots."""
    out = {}
    for (a, b), c in poly.items():
        e = [0] * nvars
        e[positions[0]] = a
        e[positions[1]] = b
        out[tuple(e)] = c
    return out


def _reduce_by(f: dict, g: dict, var: int) -> dict:
    """Remainder of f modulo g, dividing out the leading power of var.

    g must have a constant (unit) coefficient on its top power of var, which
    holds for every embedded F_m: the junior-variable leading term is a sign.
    """
    dg = poly_degree(g, var)
    lead = [(e, c) for e, c in g.items() if e[var] == dg]
    assert len(lead) == 1 and abs(lead[0][1]) == 1, "divisor not monic up to sign"
    sign = lead[0][1]
    f = dict(f)
    while True:
        df = poly_degree(f, var)
        if df < dg:
            return f
        top = {e: c for e, c in f.items() if e[var] == df}
        for e, c in top.items():
            shift = list(e)
            shift[var] -= dg
            q = c * sign  # dividing by the +-1 leading coefficient
            for eg, cg in g.items():
                key = tuple(x + y for x, y in zip(shift, eg))
                v = f.get(key, 0) - q * cg
                if v:
                    f[key] = v
                elif key in f:
                    del f[key]


def ideal_membership(m: int, n: int, budget: int = DEFAULT_BUDGET) -> bool:
    """Whether F_{mn}(x, z) reduces to zero against F_m(x, y) and F_n(y, z)."""
    if m < 1 or n < 1:
        raise ValueError("m and n must be positive")
    cost = _sigma(m) * _sigma(n) * _sigma(m * n)
    if cost > budget:
        raise ValueError(f"case size {cost} exceeds budget {budget}")
    target = _embed(f_m(m * n), (0, 2))       # F_{mn}(x, z)
    g_n = _embed(f_m(n), (1, 2))              # F_n(y, z), junior variable z
    g_m = _embed(f_m(m), (0, 1))              # F_m(x, y), junior variable y
    rem = _reduce_by(target, g_n, 2)
    rem = _reduce_by(rem, g_m, 1)
    return not rem


# finite rings -----------------------------------------------------------

_IRREDUCIBLE = {
    4: (2, 2, (1, 1, 1)),
    8: (2, 3, (1, 1, 0, 1)),
    9: (3, 2, (1, 0, 1)),
}


def _gf_elements(p: int, k: int, modulus: tuple[int, ...]):
    elems = [tuple(t) for t in itertools.product(range(p), repeat=k)]

    def add(a, b):
        return tuple((x + y) % p for x, y in zip(a, b))

    def mul(a, b):
        conv = [0] * (2 * k - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                conv[i + j] += x * y
        for top in range(2 * k - 2, k - 1, -1):
            c = conv[top] % p
            if c:
                for i in range(k + 1):
                    conv[top - k + i] -= c * modulus[i]
            conv[top] = 0
        return tuple(v % p for v in conv[:k])

    return elems, add, mul, (0,) * k, (1,) + (0,) * (k - 1)


class FiniteRingSpec:
    """A small enumerable commutative ring with uniform add/mul access."""

    def __init__(self, label, elements, add, mul, zero, one):
        self.label = label
        self.elements = list(elements)
        self.add = add
        self.mul = mul
        self.zero = zero
        self.one = one

    def __repr__(self):
        return f"FiniteRingSpec({self.label})"

    @classmethod
    def zmod(cls, n: int) -> "FiniteRingSpec":
        if n < 1:
            raise ValueError("modulus must be positive")
        return cls(
            f"Z/{n}", range(n),
            lambda a, b: (a + b) % n, lambda a, b: (a * b) % n, 0, 1 % n,
        )

    @classmethod
    def gf(cls, q: int) -> "FiniteRingSpec":
        if is_prime(q):
            return cls.zmod(q)
        if q not in _IRREDUCIBLE:
            raise ValueError(f"no modulus on file for F_{q}")
        p, k, modulus = _IRREDUCIBLE[q]
        elems, add, mul, zero, one = _gf_elements(p, k, modulus)
        return cls(f"F_{q}", elems, add, mul, zero, one)

    @classmethod
    def gf_trunc(cls, q: int, e: int) -> "FiniteRingSpec":
        """The ring F_q[t] / (t^e)."""
        base = cls.gf(q)
        elems = [tuple(t) for t in itertools.product(base.elements, repeat=e)]

        def add(a, b):
            return tuple(base.add(x, y) for x, y in zip(a, b))

        def mul(a, b):
            out = [base.zero] * e
            for i, x in enumerate(a):
                for j, y in enumerate(b):
                    if i + j < e:
                        out[i + j] = base.add(out[i + j], base.mul(x, y))
            return tuple(out)

        zero = (base.zero,) * e
        one = (base.one,) + (base.zero,) * (e - 1)
        return cls(f"F_{q}[t]/(t^{e})", elems, add, mul, zero, one)

    def power_table(self, emax: int) -> dict:
        """element -> [1, a, a^2, ..., a^emax]."""
        out = {}
        for a in self.elements:
            row = [self.one]
            for _ in range(emax):
                row.append(self.mul(row[-1], a))
            out[a] = row
        return out


def _vanishing_pairs(ring: FiniteRingSpec, m: int, powers: dict) -> set:
    neg = {a: next(b for b in ring.elements
                   if ring.add(a, b) == ring.zero) for a in ring.elements}
    pairs = set()
    dps = _divisor_pairs(m)
    for a in ring.elements:
        pa = powers[a]
        for b in ring.elements:
            pb = powers[b]
            acc = ring.one
            for d, e in dps:
                acc = ring.mul(acc, ring.add(pa[d], neg[pb[e]]))
                if acc == ring.zero:
                    break
            if acc == ring.zero:
                pairs.add((a, b))
    return pairs


def category_closure_check(ring: FiniteRingSpec, m_max: int = 6) -> dict:
    """Exhaustive composition check of the vanishing relation.

    For every m, n <= m_max and every a, b, c in the ring with F_m(a,b) = 0
    and F_n(b,c) = 0, demands F_{mn}(a,c) = 0.  Returns the counterexample
    list (empty on pass) and how many composable triples were inspected.
    """
    emax = m_max * m_max
    powers = ring.power_table(emax)
    values = sorted({v for m in range(1, m_max + 1) for v in (m,)}
                    | {m * n for m in range(1, m_max + 1)
                       for n in range(1, m_max + 1)})
    zeros = {v: _vanishing_pairs(ring, v, powers) for v in values}
    by_source: dict = {}
    counterexamples = []
    checked = 0
    for n in range(1, m_max + 1):
        for b, c in zeros[n]:
            by_source.setdefault(b, []).append((n, c))
    for m in range(1, m_max + 1):
        for a, b in zeros[m]:
            for n, c in by_source.get(b, ()):
                checked += 1
                if (a, c) not in zeros[m * n]:
                    counterexamples.append((m, n, a, b, c))
    return {
        "ring": ring.label,
        "m_max": m_max,
        "checked": checked,
        "counterexamples": counterexamples,
        "pass": not counterexamples,
    }

"""Subgroup lattices of finite abelian p-groups and their chain complexes.

Subgroups of prod Z/p^{e_i} are lattices between the exponent lattice and
Z^n, held in row Hermite normal form so equality is literal tuple equality.
The order complex has the proper nontrivial subgroups as vertices and the
strict inclusion chains as faces; its reduced homology (with the empty face
in degree -1) is computed over Z through the Smith form, or over a finite
field by ranks.

The degree-p^r cochain complex of an ambient (Z/p^M)^2 is spanned in degree
q by chains G_1 < ... < G_q with |G_q| = p^r; the coboundary deletes G_k
with sign (-1)^k for k = 1..q only, so the family keeps its maximal member
and the complex splits along it.  Each block is, up to a global sign, the
dual of the reduced simplicial boundary of the top subgroup's order
complex, which is what product_decomposition_check certifies degreewise.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .field import GF, FieldSpec, is_prime
from .complexes import FieldComplex
from .linalg import fq_rank, smith_normal_form

__all__ = [
    "AbelianPGroup",
    "Subgroup",
    "SimplicialComplexData",
    "enumerate_subgroups",
    "order_complex",
    "reduced_homology",
    "build_group_complex",
    "product_decomposition_check",
    "steinberg_rank",
]

SIZE_CAP = 9  # enumerate_subgroups refuses groups beyond p^SIZE_CAP


@dataclass(frozen=True)
class AbelianPGroup:
    """The group prod Z/p^{e_i} with e_1 >= e_2 >= ... >= 1."""

    p: int
    exponents: tuple[int, ...]

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        e = tuple(int(x) for x in self.exponents)
        if e != tuple(sorted(e, reverse=True)) or (e and e[-1] < 1):
            raise ValueError("exponents must be descending and positive")
        if len(e) > 3:
            raise ValueError("at most three cyclic factors supported")
        object.__setattr__(self, "exponents", e)

    @property
    def n(self) -> int:
        return len(self.exponents)

    @property
    def order(self) -> int:
        return self.p ** sum(self.exponents)

    def moduli(self) -> tuple[int, ...]:
        return tuple(self.p ** e for e in self.exponents)


@dataclass(frozen=True)
class Subgroup:
    """A subgroup in canonical form: the HNF rows of its lattice lift.

    mat is upper triangular with p-power diagonal d_i | p^{e_i} and the
    above-diagonal entries reduced mod the column pivot; order is the index
    formula |G| / prod(d_i).
    """

    group: AbelianPGroup
    mat: tuple[tuple[int, ...], ...]
    order: int

    def contains(self, other: "Subgroup") -> bool:
        return all(_solves(self.mat, row) for row in other.mat)

    def elements(self) -> frozenset:
        mods = self.group.moduli()
        zero = (0,) * self.group.n
        seen = {zero}
        frontier = [zero]
        gens = [tuple(v % m for v, m in zip(row, mods)) for row in self.mat]
        while frontier:
            cur = frontier.pop()
            for g in gens:
                nxt = tuple((a + b) % m for a, b, m in zip(cur, g, mods))
                if nxt not in seen:
                    seen.add(nxt)
                    frontier.append(nxt)
        return frozenset(seen)

    def invariant_factors(self) -> tuple[int, ...]:
        """Cyclic decomposition d_1 | d_2 | ... of the subgroup itself."""
        rel = [_solve_coeffs(self.mat, (0,) * i + (m,) + (0,) * (self.group.n - i - 1))
               for i, m in enumerate(self.group.moduli())]
        return tuple(d for d in smith_normal_form(rel) if d > 1)

    def is_elementary(self, rank: int | None = None) -> bool:
        facs = self.invariant_factors()
        if any(d != self.group.p for d in facs):
            return False
        return rank is None or len(facs) == rank

    def killed_by_p(self) -> bool:
        return all(d <= self.group.p for d in self.invariant_factors())


def _solve_coeffs(mat, target) -> list[int]:
    """Integer x with x . mat = target, via back substitution; None if none."""
    n = len(mat)
    rem = list(target)
    x = [0] * n
    for i in range(n):
        d = mat[i][i]
        if rem[i] % d:
            return None
        x[i] = rem[i] // d
        for j in range(i, n):
            rem[j] -= x[i] * mat[i][j]
    return x if not any(rem) else None


def _solves(mat, target) -> bool:
    return _solve_coeffs(mat, target) is not None


def enumerate_subgroups(G: AbelianPGroup, order: int | None = None) -> list[Subgroup]:
    """All subgroups of G in canonical form, smallest order first.

    Optionally restricted to a single order.  Completeness: the HNF of any
    intermediate lattice has pivot d_i dividing p^{e_i} (project to the
    trailing coordinates), so scanning reduced matrices with those pivots
    hits every subgroup exactly once; the exponent rows are then checked for
    membership, which prunes invalid off-diagonal choices.
    """
    if sum(G.exponents) > SIZE_CAP:
        raise ValueError(f"group order exceeds p^{SIZE_CAP}")
    p, n = G.p, G.n
    divisors = [[p ** k for k in range(e + 1)] for e in G.exponents]
    full = p ** sum(G.exponents)
    out = []
    for diag in itertools.product(*divisors):
        above = [(i, j) for j in range(n) for i in range(j)]
        pools = [range(diag[j]) for _, j in above]
        for offs in itertools.product(*pools):
            rows = [[0] * n for _ in range(n)]
            for i in range(n):
                rows[i][i] = diag[i]
            for (i, j), v in zip(above, offs):
                rows[i][j] = v
            mat = tuple(tuple(r) for r in rows)
            ok = all(
                _solves(mat, (0,) * i + (m,) + (0,) * (n - i - 1))
                for i, m in enumerate(G.moduli())
            )
            if not ok:
                continue
            size = full // int(np.prod(diag))
            if order is None or size == order:
                out.append(Subgroup(G, mat, size))
    out.sort(key=lambda s: (s.order, s.mat))
    return out


class SimplicialComplexData:
    """Vertices plus faces per dimension; faces are vertex index tuples.

    Faces of dimension q are the strict inclusion chains of q + 1 vertices,
    listed in ascending index order; every smaller subchain is present by
    construction (checked).
    """

    def __init__(self, vertices: list, faces: dict[int, list[tuple[int, ...]]]):
        self.vertices = list(vertices)
        self.faces = {q: sorted(fs) for q, fs in faces.items() if fs}
        for q, fs in self.faces.items():
            if q == 0:
                continue
            below = set(self.faces.get(q - 1, ()))
            for f in fs:
                for k in range(len(f)):
                    sub = f[:k] + f[k + 1:]
                    assert sub in below, f"face {f} missing boundary {sub}"

    @property
    def top_dim(self) -> int:
        return max(self.faces, default=-1)

    def face_count(self, q: int) -> int:
        if q == -1:
            return 1
        return len(self.faces.get(q, ()))


def order_complex(G: AbelianPGroup) -> SimplicialComplexData:
    """Chains of proper nontrivial subgroups of G."""
    subs = [s for s in enumerate_subgroups(G) if 1 < s.order < G.order]
    return _chain_complex_data(subs)


def _chain_complex_data(subs: list[Subgroup]) -> SimplicialComplexData:
    n = len(subs)
    lt = [[False] * n for _ in range(n)]
    for i, a in enumerate(subs):
        for j, b in enumerate(subs):
            if i != j and a.order < b.order and b.contains(a):
                lt[i][j] = True
    faces: dict[int, list[tuple[int, ...]]] = {}
    if n:
        faces[0] = [(i,) for i in range(n)]
    q = 0
    while faces.get(q):
        nxt = []
        for chain in faces[q]:
            last = chain[-1]
            nxt.extend(chain + (j,) for j in range(n) if lt[last][j])
        if nxt:
            faces[q + 1] = nxt
        q += 1
    return SimplicialComplexData(subs, faces)


def _boundary_matrices(X: SimplicialComplexData) -> dict[int, list[list[int]]]:
    """d_q: chains of dimension q to dimension q - 1, down to the empty face."""
    out = {}
    if X.face_count(0):
        out[0] = [[1] * X.face_count(0)]  # augmentation onto the empty face
    for q in range(1, X.top_dim + 1):
        rows = {f: i for i, f in enumerate(X.faces[q - 1])}
        mat = [[0] * X.face_count(q) for _ in range(X.face_count(q - 1))]
        for col, f in enumerate(X.faces[q]):
            for k in range(len(f)):
                sub = f[:k] + f[k + 1:]
                mat[rows[sub]][col] += (-1) ** k
        out[q] = mat
    return out


def reduced_homology(X: SimplicialComplexData, coeff: FieldSpec | None = None):
    """Reduced homology profile, empty face included in degree -1.

    Over Z (coeff None): degree -> (free rank, torsion factors), trivial
    degrees omitted.  Over a finite field: degree -> rank, zeros omitted.
    """
    bnd = _boundary_matrices(X)
    dims = {-1: 1}
    for q in range(0, X.top_dim + 1):
        dims[q] = X.face_count(q)
    if coeff is None:
        snf = {q: smith_normal_form(m) for q, m in bnd.items()}
        ranks = {q: len(f) for q, f in snf.items()}
        out = {}
        for q in sorted(dims):
            free = dims[q] - ranks.get(q, 0) - ranks.get(q + 1, 0)
            tors = tuple(d for d in snf.get(q + 1, ()) if d > 1)
            if free or tors:
                out[q] = (free, tors)
        return out
    p = coeff.p
    ranks = {}
    for q, m in bnd.items():
        # boundary entries live in {-1, 0, 1}; residues mod p are valid indices
        arr = np.array(m, dtype=np.int64) % p
        ranks[q] = fq_rank(coeff, arr.astype(np.int16))
    out = {}
    for q in sorted(dims):
        h = dims[q] - ranks.get(q, 0) - ranks.get(q + 1, 0)
        if h:
            out[q] = h
    return out


def steinberg_rank(p: int, r: int) -> int:
    """Top homology rank of the order complex of an elementary group."""
    return p ** (r * (r - 1) // 2)


@lru_cache(maxsize=None)
def _ambient_chains(p: int, r: int, M: int):
    """Subgroups of (Z/p^M)^2 with order <= p^r, and chains topping at p^r."""
    G = AbelianPGroup(p, (M, M))
    subs = [s for s in enumerate_subgroups(G) if 1 < s.order <= p ** r]
    tops = [i for i, s in enumerate(subs) if s.order == p ** r]
    lt = {
        (i, j)
        for i, a in enumerate(subs)
        for j, b in enumerate(subs)
        if i != j and a.order < b.order and b.contains(a)
    }
    chains = {1: [(t,) for t in tops]}
    q = 1
    while chains[q]:
        ext = []
        for chain in chains[q]:
            head = chain[0]
            ext.extend(
                (i,) + chain for i in range(len(subs)) if (i, head) in lt
            )
        q += 1
        chains[q] = ext
    del chains[q]
    return G, subs, chains


def build_group_complex(
    p: int, r: int, M: int, field: FieldSpec | None = None
) -> FieldComplex:
    """Cochain complex of subgroup chains in (Z/p^M)^2 topping at order p^r."""
    if field is None:
        field = GF(p)
    if M < r:
        raise ValueError(f"torsion level {M} below r = {r}")
    if r == 0:
        return FieldComplex(field, [1], [])
    _, _, chains = _ambient_chains(p, r, M)
    top = max(chains)
    dims = [0] + [len(chains.get(q, ())) for q in range(1, top + 1)]
    deltas = [np.zeros((dims[1], 0), dtype=np.int16)]
    for q in range(1, top):
        idx = {c: i for i, c in enumerate(chains[q])}
        D = np.zeros((dims[q + 1], dims[q]), dtype=np.int16)
        for row, chain in enumerate(chains[q + 1]):
            for k in range(1, q + 1):
                src = chain[: k - 1] + chain[k:]
                sign = 1 if k % 2 == 0 else field.neg(1)
                col = idx[src]
                D[row, col] = field.add(D[row, col], sign)
        deltas.append(D)
    return FieldComplex(field, dims, deltas)


def product_decomposition_check(
    p: int, r: int, M: int, field: FieldSpec | None = None
) -> bool:
    """Blockwise match with the order-complex duals, plus per-factor homology.

    Chains are partitioned by their maximal subgroup G; the block of the
    coboundary over G must equal minus the transpose of the reduced
    simplicial boundary of P_G (the degree shift puts the empty face in
    cochain degree 1).  Factors with pG != 0 must be acyclic; elementary
    factors of rank r must carry exactly the Steinberg rank in degree r.
    """
    if field is None:
        field = GF(p)
    if r == 0:
        return build_group_complex(p, r, M, field).cohomology() == {0: 1}
    cx = build_group_complex(p, r, M, field)
    _, subs, chains = _ambient_chains(p, r, M)
    tops = [i for i, s in enumerate(subs) if s.order == p ** r]
    for q in range(1, r + 1):
        if len(chains.get(q, ())) != cx.dims[q]:
            return False
    for t in tops:
        below = [s for s in subs if s.order < subs[t].order and subs[t].contains(s)]
        X = _chain_complex_data(below)
        bnd = _boundary_matrices(X)
        # partition bijection: a degree-q chain topping at t <-> a (q-2)-face
        sel = {
            q: [i for i, c in enumerate(chains.get(q, ())) if c[-1] == t]
            for q in range(1, r + 1)
        }
        for q in range(1, r + 1):
            if len(sel[q]) != X.face_count(q - 2):
                return False
        face_idx = {
            q: {f: i for i, f in enumerate(X.faces.get(q, ()))}
            for q in range(0, X.top_dim + 1)
        }
        vert_of = {s.mat: i for i, s in enumerate(below)}

        def face_of(chain):
            # strip the shared top; remaining members name a face of P_G
            if len(chain) == 1:
                return 0
            key = tuple(vert_of[subs[v].mat] for v in chain[:-1])
            return face_idx[len(key) - 1][key]

        for q in range(1, r):
            rows, cols = sel[q + 1], sel[q]
            got = np.zeros((X.face_count(q - 1), X.face_count(q - 2)), dtype=np.int16)
            for a, i in enumerate(rows):
                for b, j in enumerate(cols):
                    got[face_of(chains[q + 1][i]), face_of(chains[q][j])] = (
                        cx.deltas[q][i, j]
                    )
            want = np.zeros_like(got)
            raw = bnd.get(q - 1)
            if raw is not None:
                neg = -np.array(raw, dtype=np.int64).T
                want[neg % p == 1] = 1
                want[neg % p == p - 1] = field.neg(1)
            if not np.array_equal(got, want):
                return False
        # per-factor homology over the coefficient field
        prof = reduced_homology(X, field)
        if subs[t].is_elementary(r):
            if prof != {r - 2: steinberg_rank(p, r)}:
                return False
        else:
            if prof:
                return False
    return True

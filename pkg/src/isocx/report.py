"""Verification suites and machine-readable reports.

A suite is a deterministic list of cases derived from a SuiteConfig.  Each
case names the inputs, an expected outcome baked into the suite definition
(rank tables, generating-function coefficients, sigma counts), and a kind
that selects the computation; a case passes iff expected == computed, so
nothing here feeds a computed value back into its own expectation.

Reports are a pure function of the config: case order is fixed at build
time, worker processes return records positionally, and the serialized
millis field is pinned to zero (wall-clock timings go to stderr instead,
see cli.py).  Running with a different --jobs value changes nothing in the
emitted bytes.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from time import perf_counter

from .field import GF, TruncSeries, is_prime
from .isogeny import (
    DEFAULT_TRUNC,
    sigma_pow,
    socle_check,
    relations_sequence_check,
)
from .complexes import (
    Specialization,
    build_complex,
    rank_generating_check,
    h2_cokernel_check,
)
from .gamma import GammaRing, admissible_basis, sample_element
from .bar import bar_complex, gr_piece_check
from .groups import (
    AbelianPGroup,
    build_group_complex,
    enumerate_subgroups,
    order_complex,
    product_decomposition_check,
    reduced_homology,
    steinberg_rank,
)
from .fpoly import FiniteRingSpec, category_closure_check, ideal_membership

__all__ = [
    "ConfigError",
    "SuiteConfig",
    "SUITES",
    "build_cases",
    "run",
    "render_json",
    "render_csv",
]

SUITES = ("main", "gamma", "bar", "groups", "appendix")

# small primes where the desk-scale sweeps (gamma, bar, groups, quadratic
# specialization) stay cheap; larger configured primes keep the per-prime
# main-suite cases only
SMALL = (2, 3)


class ConfigError(ValueError):
    """Rejected configuration; reported before any computation starts."""


@dataclass(frozen=True)
class SuiteConfig:
    primes: tuple[int, ...] = (2, 3, 5)
    r_max: int = 4
    trunc: int = DEFAULT_TRUNC
    ext: int = 2
    torsion: int = 4
    m_max: int = 6
    jobs: int = 1
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "primes", tuple(dict.fromkeys(self.primes)))
        for p in self.primes:
            if not is_prime(p):
                raise ConfigError(f"p = {p} is not prime")
            if self.trunc < p + 2:
                raise ConfigError(
                    f"truncation {self.trunc} below p + 2 = {p + 2} for p = {p}")
        if not self.primes:
            raise ConfigError("need at least one prime")
        if not 0 <= self.r_max <= 5:
            raise ConfigError(f"r_max = {self.r_max} outside 0..5")
        if self.ext not in (1, 2):
            raise ConfigError(f"extension degree {self.ext} not in {{1, 2}}")
        if self.torsion < self.r_max:
            raise ConfigError(
                f"torsion level {self.torsion} below r_max = {self.r_max}")
        if self.m_max < 1:
            raise ConfigError(f"appendix budget {self.m_max} below 1")
        if self.jobs < 1:
            raise ConfigError(f"jobs = {self.jobs} below 1")


# expected-value tables ---------------------------------------------------
#
# These are the verification targets; they are written down directly rather
# than derived from the code under test.

def concentration_ranks(p: int, r: int) -> list[int]:
    """Dense cohomology ranks in degrees 0..r: single spot 1, p+1, p, 0, 0."""
    table = {0: 1, 1: p + 1, 2: p}
    out = [0] * (r + 1)
    if r <= 4:
        out[r] = table.get(r, 0)
    return out


def dims_from_generating_function(p: int, r: int) -> list[int]:
    """Degree-q dimensions at p^r as T^r coefficients of (f(T) - 1)^q.

    f(T) = 1 / ((1 - T)(1 - pT)) = sum sigma(p^n) T^n; integer series
    arithmetic only, independent of any complex construction.
    """
    g = [0] + [sigma_pow(p, n) for n in range(1, r + 1)]
    out = []
    power = [1] + [0] * r
    for q in range(r + 1):
        if q:
            power = [sum(power[i] * g[n - i] for i in range(n + 1))
                     for n in range(r + 1)]
        out.append(power[r])
    return out


def _profile_to_ranks(profile: dict, top: int) -> list[int]:
    return [int(profile.get(q, 0)) for q in range(top + 1)]


def _int_homology_json(hom: dict) -> dict:
    """Nonzero reduced integral homology as {degree: [free, [torsion...]]}."""
    out = {}
    for q, (free, tors) in sorted(hom.items()):
        if free or tors:
            out[str(q)] = [int(free), [int(t) for t in tors]]
    return out


def _case_seed(seed: int, p: int, tag: int) -> int:
    return (seed * 1000003 + p * 10007 + tag) % (2 ** 31)


# case computations -------------------------------------------------------
#
# Each takes the params dict of its case and returns (expected, computed),
# both JSON-ready.  They run in worker processes, so they only touch module
# state that is rebuilt per process (memo caches).

def _case_concentration(ps: dict):
    p, r = ps["p"], ps["r"]
    if ps["ext"] == 0:
        spec, field = Specialization.closed_point(), GF(p)
    else:
        spec, field = Specialization.field_point(ps["a"]), GF(p, ps["ext"])
    cx = build_complex(p, r, spec, field=field)
    expected = {
        "dims": dims_from_generating_function(p, r),
        "ranks": concentration_ranks(p, r),
    }
    computed = {
        "dims": [int(d) for d in cx.dims],
        "ranks": _profile_to_ranks(cx.cohomology(), r),
    }
    return expected, computed


def _case_rank_generating(ps: dict):
    res = rank_generating_check(ps["p"], r_max=5)
    expected = {"dims_ok": True, "cohomology_ok": True}
    computed = {"dims_ok": bool(res["dims_ok"]),
                "cohomology_ok": bool(res["cohomology_ok"])}
    return expected, computed


def _case_cokernel(ps: dict):
    return {"ok": True}, {"ok": bool(h2_cokernel_check(ps["p"]))}


def _case_socle(ps: dict):
    return {"ok": True}, {"ok": bool(socle_check(ps["r"], ps["p"]))}


def _case_relations(ps: dict):
    return {"ok": True}, {"ok": bool(relations_sequence_check(ps["p"]))}


@lru_cache(maxsize=None)
def _gamma_ring(p: int, trunc: int) -> GammaRing:
    # per-process cache; migration and pairing tables are expensive to rebuild
    return GammaRing(GF(p), trunc)


def _case_gamma_basis(ps: dict):
    p, r = ps["p"], ps["r"]
    ring = _gamma_ring(p, ps["trunc"])
    expected = {"count": sigma_pow(p, r), "pairing_rank": sigma_pow(p, r)}
    computed = {"count": len(admissible_basis(p, r)),
                "pairing_rank": int(ring.pair_matrix_rank(r))}
    return expected, computed


def _case_gamma_duality(ps: dict):
    ring = _gamma_ring(ps["p"], ps["trunc"])
    ok = ring.duality_check(ps["r1"], ps["r2"])
    return {"ok": True}, {"ok": bool(ok)}


def _case_gamma_assoc(ps: dict):
    ring = _gamma_ring(ps["p"], ps["trunc"])
    rng = random.Random(ps["seed"])
    failures = 0
    for _ in range(ps["trials"]):
        g1 = rng.randint(1, 2)
        g2 = rng.randint(1, 3 - g1)
        g3 = rng.randint(1, 4 - g1 - g2)
        a = sample_element(ring, rng, g1)
        b = sample_element(ring, rng, g2)
        c = sample_element(ring, rng, g3)
        lhs = ring.gamma_mul(ring.gamma_mul(a, b), c)
        rhs = ring.gamma_mul(a, ring.gamma_mul(b, c))
        if not ring.eq_mod_trunc(lhs, rhs):
            failures += 1
    expected = {"trials": ps["trials"], "failures": 0}
    computed = {"trials": ps["trials"], "failures": failures}
    return expected, computed


def _case_gamma_order(ps: dict):
    # normalize arbitrary raw words; the strict-decrease assertion inside
    # every rewrite step is the property under test
    p = ps["p"]
    ring = _gamma_ring(p, ps["trunc"])
    rng = random.Random(ps["seed"])
    failures = 0
    for _ in range(ps["trials"]):
        r = rng.randint(2, 4)
        word = tuple(rng.randint(0, p) for _ in range(r))
        coeff = TruncSeries.x(ring.field, ring.work, rng.randrange(ps["trunc"]))
        try:
            ring.normalize({word: coeff})
        except AssertionError:
            failures += 1
    return {"failures": 0}, {"failures": failures}


def _case_bar_homology(ps: dict):
    p, r = ps["p"], ps["r"]
    expected = {
        "dims": dims_from_generating_function(p, r),
        "ranks": concentration_ranks(p, r),
    }
    if r == 0:
        # degree 0 is the ground field itself
        return expected, {"dims": [1], "ranks": [1]}
    cx = bar_complex(p, r, ps["trunc"])
    computed = {
        "dims": [int(cx.dims.get(q, 0)) for q in range(r + 1)],
        "ranks": _profile_to_ranks(cx.homology(), r),
    }
    return expected, computed


def _case_bar_gr(ps: dict):
    p, r = ps["p"], ps["r"]
    total = 0
    all_ok = True
    for I in itertools.product(range(p + 1), repeat=r):
        res = gr_piece_check(p, r, I, ps["trunc"])
        all_ok = all_ok and bool(res["pass"])
        total += int(res["homology"].get(r, 0))
    expected = {"all_ok": True, "rank_sum": concentration_ranks(p, r)[r]}
    computed = {"all_ok": all_ok, "rank_sum": total}
    return expected, computed


def _case_st_homology(ps: dict):
    p = ps["p"]
    exps = tuple(ps["exponents"])
    X = order_complex(AbelianPGroup(p, exps))
    hom = _int_homology_json(reduced_homology(X))
    if all(e == 1 for e in exps) and len(exps) >= 2:
        r = len(exps)
        expected = {str(r - 2): [steinberg_rank(p, r), []]}
    else:
        expected = {}
    return expected, hom


def _case_group_complex(ps: dict):
    p, r = ps["p"], ps["r"]
    cx = build_group_complex(p, r, ps["M"])
    expected = {"ranks": concentration_ranks(p, min(r, 4))}
    computed = {"ranks": _profile_to_ranks(cx.cohomology(), r)}
    return expected, computed


def _case_group_decomposition(ps: dict):
    ok = product_decomposition_check(ps["p"], ps["r"], ps["M"])
    return {"ok": True}, {"ok": bool(ok)}


def _case_subgroup_count(ps: dict):
    p, r, M = ps["p"], ps["r"], ps["M"]
    G = AbelianPGroup(p, (M,) * 2)
    subs = enumerate_subgroups(G, order=p ** r)
    return {"count": sigma_pow(p, r)}, {"count": len(subs)}


def _case_membership(ps: dict):
    return {"member": True}, {"member": bool(ideal_membership(ps["m"], ps["n"]))}


_CLOSURE_RINGS = {
    "gf4": lambda: FiniteRingSpec.gf(4),
    "gf8": lambda: FiniteRingSpec.gf(8),
    "gf9": lambda: FiniteRingSpec.gf(9),
    "trunc8": lambda: FiniteRingSpec.gf_trunc(2, 3),
}


def _case_closure(ps: dict):
    label = ps["ring"]
    if label.startswith("zmod"):
        ring = FiniteRingSpec.zmod(int(label[4:]))
    else:
        ring = _CLOSURE_RINGS[label]()
    res = category_closure_check(ring, ps["m_max"])
    expected = {"counterexamples": 0}
    computed = {"counterexamples": len(res["counterexamples"])}
    return expected, computed


_KINDS = {
    "concentration": _case_concentration,
    "rank-generating": _case_rank_generating,
    "cokernel": _case_cokernel,
    "socle": _case_socle,
    "relations": _case_relations,
    "basis": _case_gamma_basis,
    "duality": _case_gamma_duality,
    "associativity": _case_gamma_assoc,
    "rewrite-order": _case_gamma_order,
    "homology": _case_bar_homology,
    "gr-pieces": _case_bar_gr,
    "building-homology": _case_st_homology,
    "group-complex": _case_group_complex,
    "decomposition": _case_group_decomposition,
    "subgroup-count": _case_subgroup_count,
    "membership": _case_membership,
    "closure": _case_closure,
}


# suite assembly ----------------------------------------------------------

def _main_cases(cfg: SuiteConfig) -> list[dict]:
    cases = []
    for p in cfg.primes:
        top = min(cfg.r_max, 4 if p in SMALL else 3)
        for r in range(top + 1):
            cases.append({"kind": "concentration", "p": p, "r": r,
                          "ext": 0, "a": 0})
    for p in cfg.primes:
        if p not in SMALL:
            continue
        for r in range(min(cfg.r_max, 3) + 1):
            for ext in range(1, cfg.ext + 1):
                for a in range(p ** ext):
                    cases.append({"kind": "concentration", "p": p, "r": r,
                                  "ext": ext, "a": a})
    for p in cfg.primes:
        if p in SMALL:
            cases.append({"kind": "rank-generating", "p": p})
    for p in cfg.primes:
        cases.append({"kind": "cokernel", "p": p})
    for p in cfg.primes:
        for r in range(1, min(cfg.r_max, 3) + 1):
            cases.append({"kind": "socle", "p": p, "r": r})
    for p in cfg.primes:
        cases.append({"kind": "relations", "p": p})
    return cases


def _gamma_cases(cfg: SuiteConfig) -> list[dict]:
    primes = [p for p in cfg.primes if p in SMALL]
    cases = []
    for p in primes:
        for r in range(1, min(cfg.r_max, 4) + 1):
            cases.append({"kind": "basis", "p": p, "r": r, "trunc": cfg.trunc})
    for p in primes:
        cases.append({"kind": "duality", "p": p, "r1": 1, "r2": 0,
                      "trunc": cfg.trunc})
        for r1 in range(1, 4):
            for r2 in range(1, 4):
                if r1 + r2 <= min(cfg.r_max, 4):
                    cases.append({"kind": "duality", "p": p, "r1": r1,
                                  "r2": r2, "trunc": cfg.trunc})
    trials = -(-1000 // max(len(primes), 1))
    for p in primes:
        cases.append({"kind": "associativity", "p": p, "trials": trials,
                      "seed": _case_seed(cfg.seed, p, 1), "trunc": cfg.trunc})
        cases.append({"kind": "rewrite-order", "p": p, "trials": 100,
                      "seed": _case_seed(cfg.seed, p, 2), "trunc": cfg.trunc})
    return cases


def _bar_cases(cfg: SuiteConfig) -> list[dict]:
    cases = []
    for p in cfg.primes:
        if p not in SMALL:
            continue
        top = min(cfg.r_max, 4)
        for r in range(top + 1):
            cases.append({"kind": "homology", "p": p, "r": r,
                          "trunc": cfg.trunc})
        for r in range(1, top + 1):
            cases.append({"kind": "gr-pieces", "p": p, "r": r,
                          "trunc": cfg.trunc})
    return cases


def _groups_cases(cfg: SuiteConfig) -> list[dict]:
    cases = []
    for p in cfg.primes:
        if p not in SMALL:
            continue
        for exps in [[2], [3], [2, 1], [2, 2], [1, 1], [1, 1, 1]]:
            cases.append({"kind": "building-homology", "p": p,
                          "exponents": exps})
        for r in range(1, min(cfg.r_max, 3) + 1):
            cases.append({"kind": "group-complex", "p": p, "r": r, "M": r})
            cases.append({"kind": "decomposition", "p": p, "r": r, "M": r})
            cases.append({"kind": "subgroup-count", "p": p, "r": r,
                          "M": cfg.torsion})
    return cases


def _appendix_cases(cfg: SuiteConfig) -> list[dict]:
    cases = []
    for m in range(1, 17):
        for n in range(1, 17):
            if m * n <= 16:
                cases.append({"kind": "membership", "m": m, "n": n})
    for n in range(1, 31):
        cases.append({"kind": "closure", "ring": f"zmod{n}",
                      "m_max": cfg.m_max})
    for label in sorted(_CLOSURE_RINGS):
        cases.append({"kind": "closure", "ring": label, "m_max": cfg.m_max})
    return cases


_SUITE_BUILDERS = {
    "main": _main_cases,
    "gamma": _gamma_cases,
    "bar": _bar_cases,
    "groups": _groups_cases,
    "appendix": _appendix_cases,
}


def build_cases(cfg: SuiteConfig, suite: str) -> list[tuple[str, dict]]:
    """Deterministic (suite, params) list for one suite name or 'all'."""
    names = SUITES if suite == "all" else (suite,)
    out = []
    for name in names:
        if name not in _SUITE_BUILDERS:
            raise ConfigError(f"unknown suite {name!r}")
        out.extend((name, ps) for ps in _SUITE_BUILDERS[name](cfg))
    return out


# execution ---------------------------------------------------------------

def _run_case(task: tuple[str, dict]) -> tuple[dict, float]:
    suite, params = task
    t0 = perf_counter()
    expected, computed = _KINDS[params["kind"]](params)
    ms = (perf_counter() - t0) * 1000.0
    record = {
        "suite": suite,
        "params": params,
        "expected": expected,
        "computed": computed,
        "pass": expected == computed,
        "millis": 0,
    }
    return record, ms


def run(cfg: SuiteConfig, suite: str) -> tuple[list[dict], list[float], bool]:
    """Execute a suite; returns (records, wall-clock millis, all passed).

    Records come back in case order whatever the parallelism; the millis
    list is positional and excluded from the serialized report.
    """
    tasks = build_cases(cfg, suite)
    if cfg.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(_run_case, tasks))
    else:
        results = [_run_case(t) for t in tasks]
    records = [rec for rec, _ in results]
    timings = [ms for _, ms in results]
    return records, timings, all(rec["pass"] for rec in records)


# serialization -----------------------------------------------------------

def render_json(records: list[dict]) -> str:
    return json.dumps(records, indent=2, sort_keys=True) + "\n"


def render_csv(records: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    cols = ["suite", "params", "expected", "computed", "pass", "millis"]
    writer.writerow(cols)
    for rec in records:
        writer.writerow([
            rec["suite"],
            json.dumps(rec["params"], sort_keys=True, separators=(",", ":")),
            json.dumps(rec["expected"], sort_keys=True, separators=(",", ":")),
            json.dumps(rec["computed"], sort_keys=True, separators=(",", ":")),
            "true" if rec["pass"] else "false",
            rec["millis"],
        ])
    return buf.getvalue()

"""Reproduction checks shared by ``hhint selftest`` and the acceptance tests.

Each check returns ``(passed, detail)``; :func:`run_checks` times them and
turns exceptions into failures.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .algebra import (
    AlgebraError,
    center,
    from_structure_constants,
    group_algebra,
    nakayama_algebra,
    symmetric_group_generators,
    trunc_poly_algebra,
)
from .derlie import (
    Derivation,
    ad,
    bracket,
    derivation_space,
    derived_series,
    extend_from_generators,
    hh1,
    inner_derivations,
    leibniz_defect,
    p_power,
    preserves_radical,
    witt_basis,
)
from .exactlin import Subspace, matpow
from .fixtures import random_algebra_pool, structural_fixtures
from .hochschild import differential, from_endo, is_coboundary
from .integrate import (
    ObstructedAt,
    certify_polynomial,
    commutator,
    compose,
    compose_polynomials,
    find_certificate,
    is_polynomial_automorphism,
    lift,
    obstruction,
    power,
    random_truncated_automorphism,
)
from .symgroup import hh1_dim_sym, lemma_counts, series_coeffs

SEED = 20240531


@dataclass(frozen=True)
class CheckResult:
    key: int
    title: str
    passed: bool
    detail: dict
    seconds: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.key:>2} {self.title} ({self.seconds:.2f}s)"


def _sym(n: int, p: int):
    return group_algebra(symmetric_group_generators(n), p)


# ------------------------------------------------------------------ 1-4


def check_sym_p(corrupt: bool = False):
    detail = {}
    ok = True
    for p in (3, 5):
        t = time.perf_counter()
        direct = hh1(_sym(p, p)).dim
        formula = hh1_dim_sym(p, p)
        secs = time.perf_counter() - t
        detail[p] = {"formula": formula, "direct": direct, "seconds": round(secs, 2)}
        ok &= formula == direct == 1 and secs <= 60
    return ok, detail


PAIRS = [(2, 2), (3, 2), (3, 3), (4, 2), (4, 3), (5, 2), (5, 3), (5, 5)]


def check_formula_vs_direct(corrupt: bool = False):
    detail = {}
    for n, p in PAIRS:
        detail[f"{n},{p}"] = (hh1_dim_sym(n, p), hh1(_sym(n, p)).dim)
    return all(a == b for a, b in detail.values()), detail


def check_series(corrupt: bool = False):
    t = time.perf_counter()
    mismatches = []
    for p in (2, 3, 5, 7):
        coeffs = series_coeffs(p, 40)
        mismatches += [(p, n) for n in range(1, 41) if coeffs[n] != hh1_dim_sym(n, p)]
    secs = time.perf_counter() - t
    return not mismatches and secs < 1.0, {"mismatches": mismatches, "seconds": round(secs, 3)}


def check_lemma(corrupt: bool = False):
    bad = [(n, p) for p in (2, 3, 5, 7) for n in range(1, 41) if len(set(lemma_counts(n, p))) != 1]
    return not bad, {"failures": bad}


# ------------------------------------------------------------------ 5, 8, 10


def _trunc23():
    A = trunc_poly_algebra(2, 3)
    return A, witt_basis(A)


def check_trunc_poly(corrupt: bool = False):
    t = time.perf_counter()
    A, W = _trunc23()
    der, inn = derivation_space(A), inner_derivations(A)
    certified = {k: find_certificate(D) for k, D in W.items()}
    certified = {k: c for k, c in certified.items() if c is not None}
    bad = sorted(set(W) - set(certified))
    refuted = {}
    for k in ("f_0,0", "g_0,0"):
        v = lift(W[k], A.p + 1, budget=None)
        refuted[k] = {
            "moves_radical": not preserves_radical(W[k]),
            "exhaustive_order": v.order if isinstance(v, ObstructedAt) else None,
        }
    e, f = W["g_1,0"], W["f_0,1"]
    h = W["f_1,0"] - W["g_0,1"]
    sl2 = bracket(e, f) == h and bracket(h, f) == -2 * f and bracket(h, e) == 2 * e
    L = Subspace.from_vectors(np.array([W[k].vector for k in certified]), A.p, A.dim**2)
    series = derived_series(A, L, modulo=inn)
    secs = time.perf_counter() - t
    ok = (
        der.dim == 18
        and inn.dim == 0
        and len(certified) == 16
        and bad == ["f_0,0", "g_0,0"]
        and all(r["moves_radical"] and r["exhaustive_order"] == 3 for r in refuted.values())
        and sl2
        and series[-1] > 0
        and secs <= 30
    )
    return ok, {
        "der": der.dim, "inn": inn.dim, "certified": len(certified), "not_certified": bad,
        "refuted": refuted, "sl2": sl2, "derived_series": series, "seconds": round(secs, 2),
    }


def check_closure(corrupt: bool = False):
    A, W = _trunc23()
    p = A.p
    order = 2 * p + 1
    certs = {k: find_certificate(D) for k, D in W.items()}
    certs = {k: c for k, c in certs.items() if c is not None}
    failures = []
    keys = sorted(certs)
    for i, k1 in enumerate(keys):
        c1 = certs[k1]
        w1 = c1.witness(order)
        powered = power(w1, p)
        Dp = matpow(c1.derivation.matrix, p, p)
        if any(np.any(powered.coeff(j)) for j in range(1, p)) or not np.array_equal(powered.coeff(p), Dp):
            failures.append(("p-power", k1))
        for k2 in keys[i:]:
            c2 = certs[k2]
            s = compose_polynomials(A, c1.series, c2.series)
            total = (c1.derivation + c2.derivation).matrix
            if not (is_polynomial_automorphism(A, s) and np.array_equal(s[1], total)):
                failures.append(("compose", k1, k2))
            comm = commutator(w1, c2.witness(order))
            lead = bracket(c1.derivation, c2.derivation).matrix
            if comm.effective_offset < 2 or not np.array_equal(comm.coeff(2), lead):
                failures.append(("commutator", k1, k2))
    return not failures, {"certified": len(keys), "failures": failures}


def check_obstruction_orders(corrupt: bool = False):
    cases = [(trunc_poly_algebra(2, 3), "f_0,0"), (trunc_poly_algebra(2, 3), "g_0,0"),
             (trunc_poly_algebra(2, 2), "f_0,0"), (trunc_poly_algebra(2, 2), "g_0,0")]
    rows = []
    for A, name in cases:
        rows.append((f"trunc(2,{A.p})", name, witt_basis(A)[name]))
    for p in (2, 3, 5, 7):
        A = trunc_poly_algebra(1, p)
        rows.append((f"trunc(1,{p})", "d/dx", extend_from_generators(A, {A.generators[0]: A.unit})))
    detail = {}
    ok = True
    for tag, name, D in rows:
        A = D.algebra
        v = lift(D, 2 * A.p * A.p, budget=None)
        order = v.order if isinstance(v, ObstructedAt) else None
        detail[f"{tag}:{name}"] = order
        ok &= order is not None and _is_power_of(order, A.p)
    return ok, detail


def _is_power_of(n: int, p: int) -> bool:
    while n > 1 and n % p == 0:
        n //= p
    return n == 1


# ------------------------------------------------------------------ 6


def nakayama_arrow_derivation(A) -> Derivation:
    """``a_1 -> a_1``, every other generator to zero."""
    a1 = A.labels.index("a1")
    return extend_from_generators(A, {a1: A.basis_vector(a1)}, label="a1->a1")


def check_nakayama(corrupt: bool = False):
    detail = {}
    ok = True
    for p in (3, 5):
        A = nakayama_algebra(p - 1, p - 1, p)
        h = hh1(A)
        D = nakayama_arrow_derivation(A)
        cert = certify_polynomial([D], A)
        outer = not h.inn.member(D.vector)
        detail[p] = {"dim": A.dim, "hh1": h.dim, "certified": cert, "outer": outer}
        ok &= h.dim == 1 and cert and outer
    return ok, detail


# ------------------------------------------------------------------ 7, 9


def check_obstruction_calculus(corrupt: bool = False):
    rng = np.random.default_rng(SEED)
    pool = random_algebra_pool()
    non_cocycles = 0
    for _ in range(200):
        A = pool[rng.integers(len(pool))]
        alpha = random_truncated_automorphism(A, int(rng.integers(2, 7)), rng)
        obs = obstruction(alpha, check=False)
        non_cocycles += bool(np.any(differential(obs, A)))
    additivity_failures = 0
    for _ in range(100):
        A = pool[rng.integers(len(pool))]
        n = int(rng.integers(2, 6))
        a1 = random_truncated_automorphism(A, n, rng)
        a2 = random_truncated_automorphism(A, n, rng)
        n = min(a1.order, a2.order)
        a1, a2 = (a if a.order == n else a.truncate(n) for a in (a1, a2))
        diff = np.mod(obstruction(compose(a1, a2)) - obstruction(a1) - obstruction(a2), A.p)
        additivity_failures += not is_coboundary(diff, A)
    ok = non_cocycles == 0 and additivity_failures == 0
    return ok, {"non_cocycles": non_cocycles, "additivity_failures": additivity_failures}


def _corrupted_fixture():
    A = trunc_poly_algebra(2, 3)
    c = A.structconst.copy()
    x, y = A.generators
    xy = A.labels.index("x*y")
    c[x, y, xy] = (c[x, y, xy] + 1) % A.p
    return from_structure_constants(A.p, A.labels, c, A.unit)


def check_structural(corrupt: bool = False):
    rng = np.random.default_rng(SEED + 1)
    fixtures = structural_fixtures()
    detail: dict = {}
    try:
        if corrupt:
            fixtures["corrupted trunc(2,3)"] = _corrupted_fixture()
        detail["associativity"] = True
    except AlgebraError as exc:
        detail["associativity"] = f"{type(exc).__name__}: {exc}"
    failures = []
    for name, A in fixtures.items():
        der = derivation_space(A)
        if any(np.any(leibniz_defect(A, v.reshape(A.dim, A.dim))) for v in der.basis):
            failures.append(("leibniz", name))
        if inner_derivations(A).dim != A.dim - center(A).dim:
            failures.append(("inner", name))
        if A.generators is not None and A.dim <= 64:
            if not derivation_space(A, "generators").equal(derivation_space(A, "full")):
                failures.append(("solvers", name))
    names = list(fixtures)
    for k in range(200):
        A = fixtures[names[k % len(names)]]
        d, p = A.dim, A.p
        f0 = rng.integers(0, p, size=d)
        f1 = from_endo(rng.integers(0, p, size=(d, d)))
        if np.any(differential(differential(f0, A), A)) or np.any(differential(differential(f1, A), A)):
            failures.append(("d^2", names[k % len(names)]))
    for k in range(50):
        A = fixtures[names[k % len(names)]]
        d, p = A.dim, A.p
        der, inn = derivation_space(A), inner_derivations(A)
        if der.dim == 0:
            continue
        D = Derivation(A, np.mod(rng.integers(0, p, der.dim) @ der.basis, p).reshape(d, d))
        E = Derivation(A, np.mod(rng.integers(0, p, der.dim) @ der.basis, p).reshape(d, d))
        I = ad(A, rng.integers(0, p, size=d))
        if not inn.member((p_power(D + I) - p_power(D)).vector):
            failures.append(("p-power mod inner", names[k % len(names)]))
        if not inn.member((bracket(D + I, E) - bracket(D, E)).vector):
            failures.append(("bracket mod inner", names[k % len(names)]))
    detail["failures"] = failures
    return detail["associativity"] is True and not failures, detail


# ------------------------------------------------------------------ registry


CHECKS: list[tuple[int, str, Callable]] = [
    (1, "HH1(kS_p) = 1 for p = 3, 5 by formula and by direct computation", check_sym_p),
    (2, "partition formula matches direct HH1(kS_n) for eight (n, p)", check_formula_vs_direct),
    (3, "generating series matches formula sums, n <= 40", check_series),
    (4, "counting lemma holds for n <= 40, p in {2, 3, 5, 7}", check_lemma),
    (5, "k[x,y]/(x^3,y^3): 16 of 18 Witt classes integrable, not solvable", check_trunc_poly),
    (6, "Nakayama N(p-1, p-1): one class, integrable via a1 -> a1", check_nakayama),
    (7, "obstructions are cocycles and additive on classes", check_obstruction_calculus),
    (8, "witnesses closed under composition, commutator, p-th power", check_closure),
    (9, "structural invariants on fixture algebras", check_structural),
    (10, "exhaustive obstruction orders are powers of p", check_obstruction_orders),
]


def run_check(key: int, corrupt: bool = False) -> CheckResult:
    _, title, fn = next(c for c in CHECKS if c[0] == key)
    t = time.perf_counter()
    try:
        passed, detail = fn(corrupt=corrupt)
    except Exception as exc:  # reported as a failed item, never swallowed silently
        passed, detail = False, {"error": f"{type(exc).__name__}: {exc}"}
    return CheckResult(key, title, bool(passed), detail, time.perf_counter() - t)


def run_checks(keys=None, corrupt: bool = False) -> list[CheckResult]:
    keys = [c[0] for c in CHECKS] if keys is None else list(keys)
    return [run_check(k, corrupt=corrupt) for k in keys]

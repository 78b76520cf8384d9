import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hhint.algebra import matrix_algebra, nakayama_algebra, trunc_poly_algebra
from hhint.derlie import NotCentral, bracket, derivation_space, extend_from_generators, witt_basis
from hhint.fixtures import random_algebra_pool
from hhint.hochschild import cup, from_endo
from hhint.integrate import (
    BudgetExhausted,
    InvalidAutomorphism,
    LiftedTo,
    ObstructedAt,
    TruncatedAutomorphism,
    central_scale_auto,
    certify_polynomial,
    commutator,
    compose,
    extend_once,
    find_certificate,
    hs_check,
    inner_automorphism,
    integrable_report,
    invert,
    is_polynomial_automorphism,
    lift,
    obstruction,
    polynomial_from_generators,
    power,
    random_truncated_automorphism,
)
from hhint.checks import nakayama_arrow_derivation

POOL = random_algebra_pool()
T23 = trunc_poly_algebra(2, 3)
W = witt_basis(T23)


def multiplicative(A, series):
    """Independent check: sum_i a_i(xy) t^i == (sum a_j(x) t^j)(sum a_l(y) t^l) mod t^N on basis pairs."""
    N, p, d = len(series), A.p, A.dim
    for a in range(d):
        for b in range(d):
            ab = A.mul(A.basis_vector(a), A.basis_vector(b))
            for n in range(N):
                lhs = series[n] @ ab
                rhs = sum(A.mul(series[j][:, a], series[n - j][:, b]) for j in range(n + 1))
                if np.any((lhs - rhs) % p):
                    return False
    return True


def brute_max_order(A, D, cap):
    """Largest N <= cap such that some 1 + Dt + a_2 t^2 + ... is multiplicative mod t^N."""
    d, p = A.dim, A.p
    best = 2
    frontier = [[np.eye(d, dtype=np.int64), D]]
    for N in range(3, cap + 1):
        nxt = []
        for s in frontier:
            for entries in itertools.product(range(p), repeat=d * d):
                cand = s + [np.array(entries, dtype=np.int64).reshape(d, d)]
                if multiplicative(A, cand):
                    nxt.append(cand)
        if not nxt:
            break
        best, frontier = N, nxt
    return best


# ---------------------------------------------------------------- examples


def test_truncated_automorphism_validation():
    with pytest.raises(ValueError):
        TruncatedAutomorphism.one_plus(W["f_1,0"], order=1)
    alpha = TruncatedAutomorphism.one_plus(W["f_1,0"], 3)
    assert alpha.effective_offset == 1 and not alpha.is_identity()
    assert TruncatedAutomorphism.identity(T23, 4).is_identity()
    ok, where = hs_check(TruncatedAutomorphism.one_plus(W["f_0,0"], 3))
    assert not ok and where[0] == 2


def test_leading_term_algebra():
    a = TruncatedAutomorphism.one_plus(W["f_1,0"], 3)
    b = TruncatedAutomorphism.one_plus(W["g_0,1"], 3)
    a3, _ = extend_once(TruncatedAutomorphism.one_plus(W["f_1,0"], 2))
    b3, _ = extend_once(TruncatedAutomorphism.one_plus(W["g_0,1"], 2))
    assert a3 is not None and b3 is not None
    assert np.array_equal(compose(a3, b3).leading, (W["f_1,0"] + W["g_0,1"]).matrix)
    assert np.array_equal(invert(a3).leading, (-W["f_1,0"]).matrix)
    assert np.array_equal(power(a3, 2).leading, (2 * W["f_1,0"]).matrix)
    assert a.order == b.order == 3


def test_commutator_leading_term_is_bracket():
    f01, g10 = W["f_0,1"], W["g_1,0"]
    a = lift(f01, 4).witness
    b = lift(g10, 4).witness
    c = commutator(a, b)
    assert c.effective_offset == 2
    assert np.array_equal(c.coeff(2), bracket(f01, g10).matrix)


def test_obstruction_at_order_two_is_cup_square():
    for name in ("f_0,0", "f_1,0", "g_2,1"):
        D = W[name]
        obs = obstruction(TruncatedAutomorphism.one_plus(D, 2))
        M = from_endo(D.matrix)
        assert np.array_equal(obs, cup(M, M, T23))


def test_free_extension_of_f00_stops():
    alpha = TruncatedAutomorphism.one_plus(W["f_0,0"], 2)
    alpha3, der = extend_once(alpha)
    assert alpha3 is not None and der.dim == 18
    alpha4, _ = extend_once(alpha3)
    assert alpha4 is None


def test_inner_automorphism_extends():
    for A in (T23, nakayama_algebra(2, 2, 3)):
        a = np.arange(A.dim) % A.p
        alpha = inner_automorphism(A, a, 20)
        assert hs_check(alpha)[0] and multiplicative(A, alpha.series()[:6])
        alpha = TruncatedAutomorphism.one_plus(alpha.leading, 2, algebra=A)
        for _ in range(18):
            alpha, _ = extend_once(alpha)
            assert alpha is not None
        assert alpha.order == 20


def test_lift_examples():
    assert isinstance(lift(0 * W["f_1,0"], 7), LiftedTo)
    v = lift(W["f_1,0"], 12)
    assert isinstance(v, LiftedTo) and v.order == 12 and hs_check(v.witness)[0]
    for name in ("f_0,0", "g_0,0"):
        v = lift(W[name], 8, budget=None)
        assert isinstance(v, ObstructedAt) and v.order == 3
    assert isinstance(lift(W["f_1,0"], 12, budget=1), BudgetExhausted)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_lift_order_of_d_dx(p):
    A = trunc_poly_algebra(1, p)
    D = extend_from_generators(A, {A.generators[0]: A.unit})
    v = lift(D, p + 3, budget=None)
    assert isinstance(v, ObstructedAt) and v.order == p


@pytest.mark.parametrize("image", ["1", "x"])
def test_lift_against_brute_force_over_f2(image):
    A = trunc_poly_algebra(1, 2)
    D = extend_from_generators(A, {A.generators[0]: A.basis_vector(A.labels.index(image))})
    brute = brute_max_order(A, D.matrix, 5)
    v = lift(D, 5, budget=None)
    got = v.order if isinstance(v, (LiftedTo, ObstructedAt)) else None
    assert got == brute


def test_central_scale_auto():
    alpha = lift(W["f_1,0"], 5).witness
    x = T23.basis_vector(T23.generators[0])
    assert np.array_equal(central_scale_auto(alpha, x).leading, W["f_2,0"].matrix)
    assert central_scale_auto(alpha, T23.unit).equals(alpha)
    assert central_scale_auto(alpha, np.zeros(9, dtype=np.int64)).is_identity()
    M = matrix_algebra(2, 3)
    beta = inner_automorphism(M, M.basis_vector(1), 4)
    with pytest.raises(NotCentral):
        central_scale_auto(beta, M.basis_vector(1))


def test_invalid_automorphism_rejected():
    bad = TruncatedAutomorphism.one_plus(np.eye(9, dtype=np.int64), 2, algebra=T23)
    assert not hs_check(bad)[0]
    with pytest.raises(InvalidAutomorphism):
        compose(bad, bad)


def test_certificates():
    cert = find_certificate(W["f_1,0"])
    assert cert is not None and cert.degree >= 1
    assert is_polynomial_automorphism(T23, cert.series) and hs_check(cert.witness(10))[0]
    assert certify_polynomial([W["f_0,1"]], T23)
    assert not certify_polynomial([W["f_0,0"]], T23)
    assert find_certificate(W["f_0,0"], max_degree=2) is None
    series = polynomial_from_generators(T23, [W["f_0,0"]])
    assert not is_polynomial_automorphism(T23, series)
    N = nakayama_algebra(2, 2, 3)
    assert find_certificate(nakayama_arrow_derivation(N)) is not None


def test_reports():
    assert integrable_report(matrix_algebra(2, 3))["classes"] == []
    rep = integrable_report(nakayama_algebra(2, 2, 3))
    assert rep["hh1_dim"] == 1 and rep["certified_integrable_dim"] == 1
    rep = integrable_report(T23)
    assert rep["hh1_dim"] == 18 and rep["certified_integrable_dim"] == 16
    assert rep["certified_non_integrable"] == ["f_0,0", "g_0,0"] and rep["undecided"] == []


# -------------------------------------------------------------- properties


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(POOL), st.integers(0, 2**32 - 1), st.integers(2, 6))
def test_random_automorphisms_are_multiplicative(A, seed, order):
    alpha = random_truncated_automorphism(A, order, np.random.default_rng(seed))
    assert multiplicative(A, alpha.series())
    assert compose(alpha, invert(alpha)).is_identity()
    assert compose(invert(alpha), alpha).is_identity()


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(POOL), st.integers(0, 2**32 - 1))
def test_obstructions_are_cocycles_and_extensions_valid(A, seed):
    rng = np.random.default_rng(seed)
    alpha = random_truncated_automorphism(A, 4, rng)
    ext, der = extend_once(alpha)  # obstruction() asserts the cocycle condition
    assert der == derivation_space(A)
    if ext is not None:
        assert multiplicative(A, ext.series())


@settings(max_examples=12, deadline=None)
@given(st.sampled_from(sorted(W)), st.integers(3, 12))
def test_certified_classes_lift(name, order):
    D = W[name]
    cert = find_certificate(D)
    if cert is None:
        return
    v = lift(D, order)
    assert isinstance(v, LiftedTo) and v.order == order
    assert multiplicative(T23, cert.witness(order).series())

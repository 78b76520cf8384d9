import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hhint.algebra import (
    AssociativityViolation,
    OrderBound,
    RadicalUnavailable,
    SpecParseError,
    UnitViolation,
    center,
    dump_spec,
    elementary_abelian_generators,
    from_structure_constants,
    group_algebra,
    ideal_power,
    matrix_algebra,
    nakayama_algebra,
    parse_cycles,
    parse_spec,
    radical,
    symmetric_group_generators,
    trunc_poly_algebra,
)
from hhint.fixtures import exterior_algebra, truncated_free_algebra, upper_triangular_algebra


def test_one_dimensional_field():
    A = from_structure_constants(5, ["1"], np.ones((1, 1, 1)), [1])
    assert A.dim == 1 and center(A).dim == 1 and radical(A).dim == 0


def test_matrix_algebra_valid():
    A = matrix_algebra(2, 3)
    assert A.dim == 4 and center(A).dim == 1


def test_broken_associativity_reports_triple():
    A = trunc_poly_algebra(1, 3)  # 1, x, x^2
    c = A.structconst.copy()
    c[1, 1, 2] = 2  # x*x = 2x^2 is fine on its own ...
    c[1, 2, :] = 0
    c[1, 2, 0] = 1  # ... but x*x^2 = 1 is not associative with it
    with pytest.raises(AssociativityViolation) as info:
        from_structure_constants(3, A.labels, c, A.unit)
    i, j, k = info.value.triple
    lhs = np.einsum("u,uk->k", c[i, j], c[:, k, :]) % 3
    rhs = np.einsum("u,ju->j", c[j, k], c[i, :, :].T) % 3
    assert not np.array_equal(lhs, rhs)


def test_unit_violation():
    c = np.zeros((2, 2, 2), dtype=int)
    c[0, 0, 0] = c[0, 1, 1] = c[1, 0, 1] = 1
    with pytest.raises(UnitViolation):
        from_structure_constants(3, ["a", "b"], c, [0, 1])


def test_cyclic_group_c2():
    A = group_algebra("(1 2)", 2)
    assert A.dim == 2 and A.is_commutative()


def test_c3xc3_matches_truncated_polynomials():
    G = group_algebra(elementary_abelian_generators(3, 2), 3)
    T = trunc_poly_algebra(2, 3)
    assert G.dim == T.dim == 9 and G.is_commutative() and T.is_commutative()
    for A in (G, T):
        J = radical(A)
        assert J.dim == 8
        # nilpotency degree: J^5 = 0, J^4 != 0
        assert ideal_power(A, J, 4).dim > 0 and ideal_power(A, J, 5).dim == 0


def test_s3_center():
    A = group_algebra(symmetric_group_generators(3), 3)
    assert A.dim == 6 and center(A).dim == 3
    assert A.radical is None  # not a 3-group
    with pytest.raises(RadicalUnavailable):
        radical(A)


def test_group_tensor_is_a_permutation_table():
    A = group_algebra(symmetric_group_generators(4), 5)
    c = A.structconst
    assert np.all(np.count_nonzero(c, axis=2) == 1) and set(np.unique(c)) == {0, 1}


def test_group_order_bound():
    with pytest.raises(OrderBound):
        group_algebra(symmetric_group_generators(8), 2)


def test_parse_cycles_composes_adjacent_cycles():
    assert parse_cycles("(1 2),(1 2 3)") == [{1: 2, 2: 1}, {1: 2, 2: 3, 3: 1}]
    # right to left: (1 2)(2 3) sends 3 -> 2 -> 1
    assert parse_cycles("(1 2)(2 3)") == [{1: 2, 2: 3, 3: 1}]
    with pytest.raises(ValueError):
        parse_cycles("(1 1)")


def test_trunc_poly_examples():
    A = trunc_poly_algebra(1, 2)
    x = A.generators[0]
    assert A.dim == 2 and not A.mul(A.basis_vector(x), A.basis_vector(x)).any()
    assert radical(trunc_poly_algebra(2, 3)).dim == 8
    assert trunc_poly_algebra(2, 5).dim == 25
    assert trunc_poly_algebra(2, 3).labels[:5] == ("1", "x", "y", "x^2", "x*y")


def test_nakayama_examples():
    assert nakayama_algebra(2, 2, 3).dim == 6
    assert nakayama_algebra(4, 4, 5).dim == 20
    A = nakayama_algebra(1, 2, 3)
    assert A.dim == 3 and A.is_commutative()
    N = nakayama_algebra(2, 2, 3)
    assert N.labels == ("e1", "e2", "a1", "a2", "a1a2", "a2a1")
    prod = N.mul(N.basis_vector(2), N.basis_vector(3))
    assert np.array_equal(prod, N.basis_vector(4))
    assert not N.mul(N.basis_vector(3), N.basis_vector(3)).any()


@pytest.mark.parametrize("m,n", [(1, 1), (2, 2), (3, 2), (2, 3), (4, 4)])
def test_nakayama_radical_nilpotency(m, n):
    A = nakayama_algebra(m, n, 5)
    J = radical(A)
    assert ideal_power(A, J, n).dim > 0 and ideal_power(A, J, n + 1).dim == 0


def test_radical_of_c4_against_nilpotent_enumeration():
    A = group_algebra("(1 2 3 4)", 2)
    assert radical(A).dim == 3
    nilpotent = 0
    for v in itertools.product(range(2), repeat=4):
        v = np.array(v)
        if not A.power(v, 4).any():
            nilpotent += 1
    assert nilpotent == 2**3


def test_computed_radical_commutative():
    A = trunc_poly_algebra(2, 3)
    B = from_structure_constants(3, A.labels, A.structconst, A.unit)
    assert radical(B) == radical(A)


@pytest.mark.parametrize("p,r", [(2, 2), (3, 2), (2, 3)])
def test_group_and_polynomial_presentations_agree(p, r):
    G = group_algebra(elementary_abelian_generators(p, r), p)
    T = trunc_poly_algebra(r, p)
    assert G.dim == T.dim and radical(G).dim == radical(T).dim


def test_extra_fixtures_are_valid():
    assert exterior_algebra(3, 3).dim == 8 and not exterior_algebra(2, 3).is_commutative()
    assert truncated_free_algebra(2, 2, 2).dim == 7
    assert center(upper_triangular_algebra(2, 3)).dim == 1


# ------------------------------------------------------------ spec files


def test_spec_roundtrip():
    for A in (nakayama_algebra(2, 2, 3), group_algebra("(1 2 3)", 3)):
        B = parse_spec(dump_spec(A))
        assert np.array_equal(A.structconst, B.structconst) and B.labels == A.labels
        assert B.fingerprint() == parse_spec(dump_spec(A)).fingerprint()


def test_spec_comments_and_defaults():
    text = "# k[x]/(x^2)\np = 3\ndim = 2\nunit = 0:1\nmul 0 0 = 0:1\nmul 0 1 = 1:1\nmul 1 0 = 1:1  # x\n"
    A = parse_spec(text)
    assert A.dim == 2 and A.labels == ("e0", "e1")


@pytest.mark.parametrize(
    "text,line",
    [
        ("p = 3\ndim = 1\nunit = 0:1\nfoo bar\n", 4),
        ("p = 4\ndim = 1\nunit = 0:1\n", 1),
        ("p = 3\ndim = 2\nbasis = a\nunit = 0:1\n", 3),
        ("p = 3\ndim = 1\nunit = 0:1\nmul 0 0 = 0:1\nmul 0 0 = 0:1\n", 5),
        ("p = 3\ndim = 1\nunit = 0:1\nmul 0 5 = 0:1\n", 4),
        ("p = 3\ndim = 1\nunit = 0;1\n", 3),
    ],
)
def test_spec_errors_carry_line_numbers(text, line):
    with pytest.raises(SpecParseError) as info:
        parse_spec(text)
    assert info.value.lineno == line


def test_fingerprint_is_stable_and_sensitive():
    a, b = trunc_poly_algebra(2, 3), trunc_poly_algebra(2, 3)
    assert a.fingerprint() == b.fingerprint()
    assert a.fingerprint() != group_algebra(elementary_abelian_generators(3, 2), 3).fingerprint()


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([2, 3, 5]), st.integers(1, 3), st.integers(1, 3))
def test_nakayama_presets_validate(p, m, n):
    A = nakayama_algebra(m, n, p)
    assert A.dim == m * (n + 1)
    A.check()

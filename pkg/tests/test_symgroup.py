import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hhint.algebra import group_algebra, symmetric_group_generators
from hhint.derlie import hh1
from hhint.symgroup import (
    Partition,
    hh1_contribution,
    hh1_dim_sym,
    lemma_counts,
    partition_count,
    partitions,
    series_coeffs,
    singular_count,
)


def brute_partitions(n):
    """Multisets of positive integers summing to ``n``, by filtering all compositions."""
    seen = set()
    for k in range(1, n + 1):
        for combo in itertools.combinations_with_replacement(range(1, n + 1), k):
            if sum(combo) == n:
                seen.add(tuple(sorted(combo, reverse=True)))
    return seen if n else {()}


# ---------------------------------------------------------------- examples


def test_partition_examples():
    assert partitions(0) == [Partition((), ())]
    assert len(partitions(5)) == 7 and len(partitions(10)) == 42
    assert [str(lam) for lam in partitions(4)] == ["(4)", "(3,1)", "(2^2)", "(2,1^2)", "(1^4)"]
    with pytest.raises(ValueError):
        partitions(-1)
    with pytest.raises(ValueError):
        Partition.make((1, 2), (1, 1))


@pytest.mark.parametrize("n", range(0, 13))
def test_enumeration_matches_brute_force_and_euler(n):
    got = {lam.as_sequence() for lam in partitions(n)}
    assert got == brute_partitions(n)
    assert len(partitions(n)) == partition_count(n)
    assert all(lam.n == n for lam in partitions(n))


def test_contribution_examples():
    for p in (2, 3, 5):
        assert hh1_contribution(Partition.from_sequence([p]), p) == 1
    assert hh1_contribution(Partition.from_sequence([1, 1, 1]), 2) == 1
    assert hh1_contribution(Partition.from_sequence([2, 1]), 3) == 0
    # centralizer of (12)(34) in S4 is dihedral of order 8, with two independent characters mod 2
    assert hh1_contribution(Partition.from_sequence([2, 2]), 2) == 2


def test_dimension_examples():
    assert hh1_dim_sym(3, 3) == 1
    assert hh1_dim_sym(3, 2) == 2
    assert hh1_dim_sym(4, 2) == 6
    assert hh1_dim_sym(2, 5) == 0


@pytest.mark.parametrize("n,p", [(2, 2), (3, 2), (3, 3), (4, 2), (4, 3)])
def test_dimension_against_group_algebra(n, p):
    A = group_algebra(symmetric_group_generators(n), p)
    assert hh1(A).dim == hh1_dim_sym(n, p)


def test_series_examples():
    assert series_coeffs(3, 3)[3] == 1
    assert series_coeffs(2, 4)[4] == 6
    for p in (2, 3, 5, 7):
        assert series_coeffs(p, p - 1) == [0] * p
    with pytest.raises(ValueError):
        series_coeffs(3, -1)


def test_lemma_and_singular_examples():
    assert lemma_counts(3, 3) == (1, 1)
    assert lemma_counts(4, 2) == (3, 3)
    assert lemma_counts(0, 3) == (0, 0)
    assert singular_count(3, 3) == 1 and singular_count(4, 2) == 3
    assert singular_count(4, 5) == 0


# -------------------------------------------------------------- properties


@given(st.integers(0, 30), st.sampled_from([2, 3, 5, 7]))
def test_series_matches_sum_over_partitions(n, p):
    assert series_coeffs(p, n)[n] == hh1_dim_sym(n, p)
    assert hh1_dim_sym(n, p) == sum(hh1_contribution(lam, p) for lam in partitions(n))


@given(st.integers(0, 30), st.sampled_from([2, 3, 5, 7]))
def test_counting_identity_and_bounds(n, p):
    without_mult, with_mult = lemma_counts(n, p)
    assert without_mult == with_mult
    assert singular_count(n, p) <= without_mult
    if p >= 3:
        assert hh1_dim_sym(n, p) == without_mult
    else:
        assert hh1_dim_sym(n, p) >= without_mult
    if n < p:
        assert without_mult == 0 and singular_count(n, p) == 0

"""Small algebras beyond the presets, and the fixture registry used by the
self-test and the randomized invariant checks."""

from __future__ import annotations

import itertools

import numpy as np

from .algebra import (
    Algebra,
    elementary_abelian_generators,
    from_structure_constants,
    group_algebra,
    matrix_algebra,
    nakayama_algebra,
    symmetric_group_generators,
    trunc_poly_algebra,
)
from .exactlin import Subspace, check_prime


def exterior_algebra(r: int, p: int) -> Algebra:
    """Exterior algebra on ``r`` generators (basis: subsets by size, then lex)."""
    p = check_prime(p)
    subsets = [s for k in range(r + 1) for s in itertools.combinations(range(r), k)]
    index = {s: i for i, s in enumerate(subsets)}
    d = len(subsets)
    c = np.zeros((d, d, d), dtype=np.int64)
    for S in subsets:
        for T in subsets:
            if set(S) & set(T):
                continue
            seq = S + T
            inversions = sum(1 for a, b in itertools.combinations(seq, 2) if a > b)
            c[index[S], index[T], index[tuple(sorted(seq))]] = -1 if inversions % 2 else 1
    labels = ["1" if not s else "^".join(f"e{i + 1}" for i in s) for s in subsets]
    return from_structure_constants(
        p, labels, c, np.eye(d, dtype=np.int64)[0], kind="exterior",
        generators=[index[(i,)] for i in range(r)],
        words=[[index[(i,)] for i in s] for s in subsets],
        radical=Subspace.from_vectors(np.eye(d, dtype=np.int64)[1:], p, d),
        params={"vars": r},
    )


def truncated_free_algebra(r: int, length: int, p: int) -> Algebra:
    """Free algebra on ``r`` letters modulo all words longer than ``length``."""
    p = check_prime(p)
    words = [w for k in range(length + 1) for w in itertools.product(range(r), repeat=k)]
    index = {w: i for i, w in enumerate(words)}
    d = len(words)
    c = np.zeros((d, d, d), dtype=np.int64)
    for u in words:
        for v in words:
            if len(u) + len(v) <= length:
                c[index[u], index[v], index[u + v]] = 1
    names = "xyzw"
    labels = ["1" if not w else "".join(names[i] for i in w) for w in words]
    return from_structure_constants(
        p, labels, c, np.eye(d, dtype=np.int64)[0], kind="trunc-free",
        generators=[index[(i,)] for i in range(r)],
        words=[[index[(i,)] for i in w] for w in words],
        radical=Subspace.from_vectors(np.eye(d, dtype=np.int64)[1:], p, d),
        params={"letters": r, "length": length},
    )


def upper_triangular_algebra(n: int, p: int) -> Algebra:
    p = check_prime(p)
    pairs = [(i, j) for i in range(n) for j in range(i, n)]
    index = {ij: k for k, ij in enumerate(pairs)}
    d = len(pairs)
    c = np.zeros((d, d, d), dtype=np.int64)
    for (i, j) in pairs:
        for k in range(j, n):
            c[index[(i, j)], index[(j, k)], index[(i, k)]] = 1
    unit = np.zeros(d, dtype=np.int64)
    unit[[index[(i, i)] for i in range(n)]] = 1
    strict = [np.eye(d, dtype=np.int64)[index[(i, j)]] for (i, j) in pairs if i < j]
    return from_structure_constants(
        p, [f"E{i + 1}{j + 1}" for i, j in pairs], c, unit, kind="upper-triangular",
        radical=Subspace.from_vectors(np.array(strict, dtype=np.int64).reshape(-1, d), p, d),
        params={"n": n},
    )


def structural_fixtures() -> dict[str, Algebra]:
    """Eight algebras covering every preset family plus noncommutative and non-generated cases."""
    return {
        "trunc(2,3)": trunc_poly_algebra(2, 3),
        "kS3@3": group_algebra(symmetric_group_generators(3), 3),
        "kS3@2": group_algebra(symmetric_group_generators(3), 2),
        "kC2xC2@2": group_algebra(elementary_abelian_generators(2, 2), 2),
        "nakayama(2,2)@3": nakayama_algebra(2, 2, 3),
        "M2@3": matrix_algebra(2, 3),
        "exterior(3)@3": exterior_algebra(3, 3),
        "free(2,2)@2": truncated_free_algebra(2, 2, 2),
    }


def random_algebra_pool() -> list[Algebra]:
    """Algebras of dimension at most 8 for randomized obstruction checks."""
    return [
        trunc_poly_algebra(1, 2),
        trunc_poly_algebra(1, 3),
        trunc_poly_algebra(1, 5),
        trunc_poly_algebra(1, 7),
        trunc_poly_algebra(2, 2),
        exterior_algebra(2, 3),
        exterior_algebra(3, 3),
        exterior_algebra(3, 2),
        truncated_free_algebra(2, 2, 2),
        truncated_free_algebra(2, 2, 3),
        group_algebra(symmetric_group_generators(3), 2),
        group_algebra(symmetric_group_generators(3), 3),
        group_algebra(elementary_abelian_generators(2, 2), 2),
        group_algebra("(1 2 3)", 3),
        group_algebra("(1 2 3 4)", 2),
        nakayama_algebra(2, 2, 3),
        nakayama_algebra(3, 1, 2),
        matrix_algebra(2, 2),
        upper_triangular_algebra(2, 3),
    ]

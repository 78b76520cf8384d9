"""Partition combinatorics and closed-form dimensions of HH^1(F_p S_n)."""

from __future__ import annotations

from functools import lru_cache
from typing import NamedTuple

__all__ = [
    "Partition",
    "partitions",
    "partition_count",
    "hh1_contribution",
    "hh1_dim_sym",
    "series_coeffs",
    "lemma_counts",
    "singular_count",
]


class Partition(NamedTuple):
    """``(parts[0]^mults[0], ...)`` with strictly decreasing parts."""

    parts: tuple[int, ...]
    mults: tuple[int, ...]

    @classmethod
    def make(cls, parts, mults) -> "Partition":
        parts, mults = tuple(parts), tuple(mults)
        if len(parts) != len(mults):
            raise ValueError("parts and multiplicities differ in length")
        if any(a <= b for a, b in zip(parts, parts[1:])):
            raise ValueError("parts must be strictly decreasing")
        if any(x <= 0 for x in parts + mults):
            raise ValueError("parts and multiplicities must be positive")
        return cls(parts, mults)

    @classmethod
    def from_sequence(cls, seq) -> "Partition":
        parts: list[int] = []
        mults: list[int] = []
        for x in sorted(seq, reverse=True):
            if x <= 0:
                raise ValueError("parts must be positive")
            if parts and parts[-1] == x:
                mults[-1] += 1
            else:
                parts.append(x)
                mults.append(1)
        return cls(tuple(parts), tuple(mults))

    @property
    def n(self) -> int:
        return sum(a * e for a, e in zip(self.parts, self.mults))

    def as_sequence(self) -> tuple[int, ...]:
        return tuple(a for a, e in zip(self.parts, self.mults) for _ in range(e))

    def multiplicity(self, part: int) -> int:
        for a, e in zip(self.parts, self.mults):
            if a == part:
                return e
        return 0

    def __str__(self):
        inner = ",".join(f"{a}^{e}" if e > 1 else str(a) for a, e in zip(self.parts, self.mults))
        return f"({inner})"


@lru_cache(maxsize=None)
def _grouped(n: int, largest: int) -> tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]:
    # largest part first, then its multiplicity in decreasing order: reverse-lex
    if n == 0:
        return (((), ()),)
    out = []
    for part in range(min(n, largest), 0, -1):
        for mult in range(n // part, 0, -1):
            for parts, mults in _grouped(n - part * mult, part - 1):
                out.append(((part,) + parts, (mult,) + mults))
    return tuple(out)


def partitions(n: int) -> list[Partition]:
    """All partitions of ``n`` in reverse-lexicographic order: ``(n)`` first, ``(1^n)`` last."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return list(_partitions(n))


@lru_cache(maxsize=64)
def _partitions(n: int) -> tuple[Partition, ...]:
    return tuple(Partition(parts, mults) for parts, mults in _grouped(n, n))


def partition_count(n: int) -> int:
    # Euler's product, independent of the enumeration above
    coeffs = [1] + [0] * n
    for k in range(1, n + 1):
        for m in range(k, n + 1):
            coeffs[m] += coeffs[m - k]
    return coeffs[n]


def hh1_contribution(lam: Partition, p: int) -> int:
    """dim Hom(prod_i C_{lambda_i} x S_{e_i}/A_{e_i}, k^+) for the class of cycle type ``lam``."""
    total = 0
    for part, mult in zip(lam.parts, lam.mults):
        total += part % p == 0
        total += p == 2 and mult >= 2
    return total


def hh1_dim_sym(n: int, p: int) -> int:
    total = 0
    for parts, mults in _partitions(n):
        total += sum(1 for a in parts if a % p == 0)
        if p == 2:
            total += sum(1 for e in mults if e >= 2)
    return total


def _series_mul(a: list[int], b: list[int], N: int) -> list[int]:
    out = [0] * (N + 1)
    for i, x in enumerate(a[: N + 1]):
        if x:
            for j, y in enumerate(b[: N + 1 - i]):
                out[i + j] += x * y
    return out


def series_coeffs(p: int, N: int) -> list[int]:
    """Coefficients ``t^0..t^N`` of the HH^1(kS_n) generating function.

    ``t^p/(1-t^p) * prod 1/(1-t^n)`` for odd ``p``; ``2t^2/(1-t^2) * prod 1/(1-t^n)`` for ``p = 2``.
    """
    if N < 0:
        raise ValueError("N must be nonnegative")
    euler = [1] + [0] * N
    for k in range(1, N + 1):
        geometric = [1 if m % k == 0 else 0 for m in range(N + 1)]
        euler = _series_mul(euler, geometric, N)
    scale = 2 if p == 2 else 1
    head = [scale if m >= p and m % p == 0 else 0 for m in range(N + 1)]
    return _series_mul(head, euler, N)


def lemma_counts(n: int, p: int) -> tuple[int, int]:
    """(distinct parts divisible by ``p``, occurrences of the part ``p``) summed over all partitions."""
    without_mult = 0
    with_mult = 0
    for lam in _partitions(n):
        without_mult += sum(1 for a in lam.parts if a % p == 0)
        with_mult += lam.multiplicity(p)
    return without_mult, with_mult


def singular_count(n: int, p: int) -> int:
    """Number of partitions of ``n`` with some part divisible by ``p``."""
    return sum(1 for lam in _partitions(n) if any(a % p == 0 for a in lam.parts))

"""Dense exact linear algebra over prime fields.

Matrices are plain numpy ``int64`` arrays whose entries are reduced mod ``p``;
the modulus travels alongside as an explicit argument.  Every routine returns
fresh arrays, so values can be shared freely between callers.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "MAX_MODULUS",
    "ModulusMismatch",
    "DimensionMismatch",
    "FieldScalar",
    "check_prime",
    "as_matrix",
    "matmul",
    "matpow",
    "inverse",
    "rref",
    "rank",
    "kernel",
    "solve",
    "AffineSolver",
    "Subspace",
]

MAX_MODULUS = 1 << 15


class ModulusMismatch(ValueError):
    pass


class DimensionMismatch(ValueError):
    pass


@lru_cache(maxsize=None)
def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def check_prime(p: int) -> int:
    p = int(p)
    if not _is_prime(p):
        raise ValueError(f"modulus {p} is not prime")
    if p >= MAX_MODULUS:
        raise ValueError(f"modulus {p} exceeds supported bound {MAX_MODULUS}")
    return p


@dataclass(frozen=True)
class FieldScalar:
    """An element of F_p."""

    value: int
    p: int

    def __post_init__(self):
        check_prime(self.p)
        object.__setattr__(self, "value", int(self.value) % self.p)

    def _other(self, other) -> int:
        if isinstance(other, FieldScalar):
            if other.p != self.p:
                raise ModulusMismatch(f"F_{self.p} vs F_{other.p}")
            return other.value
        return int(other)

    def __add__(self, other):
        return FieldScalar(self.value + self._other(other), self.p)

    __radd__ = __add__

    def __sub__(self, other):
        return FieldScalar(self.value - self._other(other), self.p)

    def __rsub__(self, other):
        return FieldScalar(self._other(other) - self.value, self.p)

    def __mul__(self, other):
        return FieldScalar(self.value * self._other(other), self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldScalar(-self.value, self.p)

    def inverse(self) -> "FieldScalar":
        if self.value == 0:
            raise ZeroDivisionError("zero has no inverse")
        return FieldScalar(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other):
        return self * FieldScalar(self._other(other), self.p).inverse()

    def __int__(self):
        return self.value


def as_matrix(M, p: int) -> np.ndarray:
    """Coerce ``M`` to a 2-d int64 array reduced mod p.

    Nested sequences of :class:`FieldScalar` are accepted; all of them must
    carry modulus ``p``.
    """
    if isinstance(M, np.ndarray):
        arr = M
    else:
        rows = [list(r) for r in M]
        for r in rows:
            for x in r:
                if isinstance(x, FieldScalar) and x.p != p:
                    raise ModulusMismatch(f"entry over F_{x.p} in a matrix over F_{p}")
        arr = np.array([[int(x) for x in r] for r in rows], dtype=np.int64)
        if arr.size == 0:
            arr = arr.reshape(len(rows), 0)
    arr = np.asarray(arr, dtype=np.int64)
    if arr.ndim != 2:
        raise DimensionMismatch(f"expected a 2-d matrix, got shape {arr.shape}")
    return np.mod(arr, p)


def matmul(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    # float64 BLAS is exact while every partial sum stays below 2**53
    inner = A.shape[-1]
    if inner * (p - 1) ** 2 < (1 << 52):
        out = np.matmul(A.astype(np.float64), B.astype(np.float64))
        return np.mod(out, p).astype(np.int64)
    return np.mod(np.matmul(A.astype(object), B.astype(object)), p).astype(np.int64)


def matpow(A: np.ndarray, e: int, p: int) -> np.ndarray:
    result = np.eye(A.shape[0], dtype=np.int64)
    base = np.mod(A, p)
    while e:
        if e & 1:
            result = matmul(result, base, p)
        base = matmul(base, base, p)
        e >>= 1
    return result


def _rref_inplace(A: np.ndarray, p: int, track_rows: bool = False):
    rows, cols = A.shape
    perm = np.arange(rows)
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
            perm[[r, i]] = perm[[i, r]]
        inv = pow(int(A[r, c]), -1, p)
        if inv != 1:
            A[r, c:] = A[r, c:] * inv % p
        col = A[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            A[hit, c:] = (A[hit, c:] - np.outer(col[hit], A[r, c:])) % p
        pivots.append(c)
        r += 1
    if track_rows:
        return pivots, perm[:r]
    return pivots


def rref(M, p: int) -> tuple[np.ndarray, tuple[int, ...], int]:
    """Reduced row echelon form of ``M`` over F_p.

    Returns ``(R, pivots, rank)``; ``R`` keeps the shape of ``M`` with the
    zero rows at the bottom.
    """
    A = as_matrix(M, p).copy()
    pivots = _rref_inplace(A, p)
    return A, tuple(pivots), len(pivots)


def rank(M, p: int) -> int:
    return rref(M, p)[2]


def _kernel_rows(R: np.ndarray, pivots: Sequence[int], ncols: int, p: int) -> np.ndarray:
    pivset = set(pivots)
    free = [c for c in range(ncols) if c not in pivset]
    K = np.zeros((len(free), ncols), dtype=np.int64)
    piv = list(pivots)
    for k, f in enumerate(free):
        K[k, f] = 1
        if piv:
            K[k, piv] = (-R[: len(piv), f]) % p
    return K


def kernel(M, p: int) -> "Subspace":
    """Right kernel ``{x : M x = 0}`` as a :class:`Subspace`."""
    A = as_matrix(M, p)
    R, pivots, _ = rref(A, p)
    K = _kernel_rows(R, pivots, A.shape[1], p)
    return Subspace.from_vectors(K, p, A.shape[1])


def solve(M, b, p: int):
    """Solve ``M x = b``.

    Returns ``(particular, kernel)`` or ``None`` when inconsistent.  The
    particular solution has every free variable set to zero.
    """
    A = as_matrix(M, p)
    b = np.mod(np.asarray(b, dtype=np.int64).reshape(-1), p)
    if b.shape[0] != A.shape[0]:
        raise DimensionMismatch(f"rhs has length {b.shape[0]}, matrix has {A.shape[0]} rows")
    n = A.shape[1]
    aug = np.concatenate([A, b[:, None]], axis=1)
    R, pivots, _ = rref(aug, p)
    if pivots and pivots[-1] == n:
        return None
    x = np.zeros(n, dtype=np.int64)
    for i, c in enumerate(pivots):
        x[c] = R[i, n]
    K = _kernel_rows(R[:, :n], pivots, n, p)
    return x, Subspace.from_vectors(K, p, n)


class AffineSolver:
    """Repeated solves of ``M x = b`` for a fixed ``M``.

    Factors ``M`` once: an independent set of rows and the pivot columns of
    its row space, plus the inverse of that square block.  Each solve is then
    one small product and a residual check against every row.
    """

    def __init__(self, M, p: int):
        self.p = p
        self.M = as_matrix(M, p)
        m, n = self.M.shape
        work = self.M.copy()
        _, rows = _rref_inplace(work, p, track_rows=True)
        self.rows = np.sort(rows)
        sub = self.M[self.rows]
        R, pivots, r = rref(sub, p)
        self.pivots = np.array(pivots, dtype=np.int64)
        self.rank = r
        self.block_inv = inverse(sub[:, self.pivots], p) if r else np.zeros((0, 0), np.int64)
        self.kernel = Subspace.from_vectors(_kernel_rows(R, pivots, n, p), p, n)

    def solve(self, b):
        """Particular solution (free variables zero) or ``None``."""
        p = self.p
        b = np.mod(np.asarray(b, dtype=np.int64).reshape(-1), p)
        if b.shape[0] != self.M.shape[0]:
            raise DimensionMismatch("rhs length does not match the factored matrix")
        x = np.zeros(self.M.shape[1], dtype=np.int64)
        if self.rank:
            x[self.pivots] = matmul(self.block_inv, b[self.rows][:, None], p)[:, 0]
        if np.any(matmul(self.M, x[:, None], p)[:, 0] != b):
            return None
        return x


def inverse(M, p: int) -> np.ndarray:
    A = as_matrix(M, p)
    n = A.shape[0]
    if A.shape != (n, n):
        raise DimensionMismatch("inverse of a non-square matrix")
    R, pivots, r = rref(np.concatenate([A, np.eye(n, dtype=np.int64)], axis=1), p)
    if r < n or pivots[n - 1] != n - 1:
        raise ZeroDivisionError("matrix is singular")
    return R[:, n:]


@dataclass(frozen=True, eq=False)
class Subspace:
    """Subspace of F_p^n held as an RREF basis."""

    p: int
    ambient_dim: int
    basis: np.ndarray
    pivots: tuple[int, ...]

    @classmethod
    def from_vectors(cls, vectors, p: int, ambient_dim: int) -> "Subspace":
        V = np.asarray(vectors, dtype=np.int64).reshape(-1, ambient_dim)
        if V.shape[0] == 0:
            return cls.zero(p, ambient_dim)
        R, pivots, r = rref(V, p)
        return cls(p, ambient_dim, R[:r].copy(), pivots)

    @classmethod
    def zero(cls, p: int, ambient_dim: int) -> "Subspace":
        return cls(p, ambient_dim, np.zeros((0, ambient_dim), dtype=np.int64), ())

    @classmethod
    def full(cls, p: int, ambient_dim: int) -> "Subspace":
        return cls(p, ambient_dim, np.eye(ambient_dim, dtype=np.int64), tuple(range(ambient_dim)))

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def __len__(self):
        return self.dim

    def _check(self, other: "Subspace"):
        if other.p != self.p:
            raise ModulusMismatch(f"F_{self.p} vs F_{other.p}")
        if other.ambient_dim != self.ambient_dim:
            raise DimensionMismatch(f"ambient {self.ambient_dim} vs {other.ambient_dim}")

    def reduce(self, v) -> np.ndarray:
        """Normal form of ``v`` modulo this subspace (pivot entries cleared)."""
        v = np.mod(np.asarray(v, dtype=np.int64).reshape(-1), self.p)
        if v.shape[0] != self.ambient_dim:
            raise DimensionMismatch("vector length does not match ambient dimension")
        if self.dim == 0:
            return v
        coeffs = v[list(self.pivots)]
        return np.mod(v - coeffs @ self.basis, self.p)

    def coordinates(self, v) -> np.ndarray | None:
        """Coefficients of ``v`` in the RREF basis, or ``None`` if ``v`` is outside."""
        v = np.mod(np.asarray(v, dtype=np.int64).reshape(-1), self.p)
        if np.any(self.reduce(v)):
            return None
        return v[list(self.pivots)].copy()

    def member(self, v) -> bool:
        return not np.any(self.reduce(v))

    def __contains__(self, v) -> bool:
        return self.member(v)

    def contains(self, other: "Subspace") -> bool:
        self._check(other)
        return all(self.member(v) for v in other.basis)

    def sum(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace.from_vectors(np.vstack([self.basis, other.basis]), self.p, self.ambient_dim)

    def annihilator(self) -> "Subspace":
        """``{w : w . v = 0 for all v in self}``."""
        if self.dim == 0:
            return Subspace.full(self.p, self.ambient_dim)
        return kernel(self.basis, self.p)

    def intersect(self, other: "Subspace") -> "Subspace":
        self._check(other)
        relations = np.vstack([self.annihilator().basis, other.annihilator().basis])
        if relations.shape[0] == 0:
            return Subspace.full(self.p, self.ambient_dim)
        return kernel(relations, self.p)

    def equal(self, other: "Subspace") -> bool:
        self._check(other)
        return self.pivots == other.pivots and np.array_equal(self.basis, other.basis)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.p == other.p and self.ambient_dim == other.ambient_dim and self.equal(other)

    __hash__ = None

    def quotient_dim(self, sub: "Subspace") -> int:
        self._check(sub)
        if not self.contains(sub):
            raise ValueError("second argument is not a subspace of the first")
        return self.dim - sub.dim

    def complement_in(self, sup: "Subspace") -> np.ndarray:
        """Rows of ``sup.basis`` extending this subspace's basis to one of ``sup``.

        Greedy over the RREF basis of ``sup`` in order, so the choice is canonical.
        """
        self._check(sup)
        p = self.p
        rows = [r.copy() for r in self.basis]
        pivs = list(self.pivots)
        chosen = []
        for v in sup.basis:
            w = v.copy()
            for row, c in zip(rows, pivs):
                if w[c]:
                    w = (w - w[c] * row) % p
            nz = np.flatnonzero(w)
            if nz.size == 0:
                continue
            c = int(nz[0])
            w = w * pow(int(w[c]), -1, p) % p
            for k, row in enumerate(rows):
                if row[c]:
                    rows[k] = (row - row[c] * w) % p
            rows.append(w)
            pivs.append(c)
            chosen.append(v)
        if len(rows) != sup.dim:
            raise ValueError("subspace is not contained in the given superspace")
        return np.array(chosen, dtype=np.int64).reshape(-1, self.ambient_dim)

    def elements(self) -> Iterable[np.ndarray]:
        """All vectors, coefficients in lexicographic order over the RREF basis."""
        import itertools

        for coeffs in itertools.product(range(self.p), repeat=self.dim):
            yield np.mod(np.asarray(coeffs, dtype=np.int64) @ self.basis, self.p) if self.dim else np.zeros(
                self.ambient_dim, dtype=np.int64
            )

    def __repr__(self):
        return f"Subspace(p={self.p}, dim={self.dim}, ambient={self.ambient_dim})"

"""Truncated automorphisms of ``A[t]/(t^N)``, obstruction classes, lifting
search and polynomial integrability certificates.

A truncated automorphism with offset ``m`` and order ``N`` is
``1 + a_m t^m + ... + a_{N-1} t^{N-1}``; each ``a_i`` is an endomorphism
matrix.  Series are passed around as lists ``[a_0, a_1, ...]`` with
``a_0 = 1``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Sequence, Union

import numpy as np

from .algebra import Algebra, RadicalUnavailable, center
from .derlie import (
    Derivation,
    NotADerivation,
    NotCentral,
    derivation_space,
    hh1,
    is_derivation,
    preserves_radical,
    witt_basis,
)
from .exactlin import Subspace, kernel, matmul, solve
from .hochschild import (
    coboundary_solver,
    cup,
    differential,
    from_endo,
    is_coboundary,
    solve_coboundary,
)

__all__ = [
    "TruncatedAutomorphism",
    "LiftedTo",
    "ObstructedAt",
    "BudgetExhausted",
    "InvalidAutomorphism",
    "hs_check",
    "compose",
    "invert",
    "power",
    "commutator",
    "obstruction",
    "extend_once",
    "lift",
    "inner_automorphism",
    "central_scale_auto",
    "polynomial_from_generators",
    "is_polynomial_automorphism",
    "certify_polynomial",
    "Certificate",
    "find_certificate",
    "integrable_report",
    "random_truncated_automorphism",
]

DEFAULT_BUDGET = 10**6


class InvalidAutomorphism(ValueError):
    pass


def _eye(A: Algebra) -> np.ndarray:
    return np.eye(A.dim, dtype=np.int64)


@dataclass(frozen=True, eq=False)
class TruncatedAutomorphism:
    algebra: Algebra
    offset: int
    order: int
    coeffs: tuple[np.ndarray, ...]

    def __post_init__(self):
        if not 1 <= self.offset < self.order:
            raise ValueError(f"need 1 <= offset < order, got m={self.offset}, N={self.order}")
        if len(self.coeffs) != self.order - self.offset:
            raise ValueError("coefficient count must equal order - offset")
        p = self.algebra.p
        object.__setattr__(
            self, "coeffs", tuple(np.mod(np.asarray(a, dtype=np.int64), p) for a in self.coeffs)
        )

    @classmethod
    def from_series(cls, A: Algebra, series: Sequence[np.ndarray], offset: int | None = None):
        """Build from ``[a_0, ..., a_{N-1}]``; ``offset`` defaults to the first nonzero term."""
        N = len(series)
        if offset is None:
            offset = next((i for i in range(1, N) if np.any(series[i] % A.p)), N - 1)
        for i in range(1, offset):
            if np.any(series[i] % A.p):
                raise ValueError(f"coefficient {i} is nonzero below the offset {offset}")
        return cls(A, offset, N, tuple(series[offset:]))

    @classmethod
    def one_plus(cls, D: Derivation | np.ndarray, order: int = 2, offset: int = 1, algebra=None):
        """``1 + D t^m`` truncated at ``t^order`` (higher terms zero)."""
        A = D.algebra if isinstance(D, Derivation) else algebra
        M = D.matrix if isinstance(D, Derivation) else np.asarray(D)
        zeros = [np.zeros_like(M) for _ in range(order - offset - 1)]
        return cls(A, offset, order, (M, *zeros))

    @classmethod
    def identity(cls, A: Algebra, order: int):
        return cls(A, 1, order, tuple(np.zeros((A.dim, A.dim), np.int64) for _ in range(order - 1)))

    def coeff(self, i: int) -> np.ndarray:
        if i == 0:
            return _eye(self.algebra)
        if 0 < i < self.offset:
            return np.zeros((self.algebra.dim,) * 2, dtype=np.int64)
        if self.offset <= i < self.order:
            return self.coeffs[i - self.offset]
        raise IndexError(f"coefficient {i} outside order {self.order}")

    def series(self) -> list[np.ndarray]:
        return [self.coeff(i) for i in range(self.order)]

    @property
    def leading(self) -> np.ndarray:
        return self.coeffs[0]

    @property
    def effective_offset(self) -> int:
        """Index of the first nonzero coefficient (``order`` for the identity)."""
        for i in range(self.offset, self.order):
            if np.any(self.coeff(i)):
                return i
        return self.order

    def is_identity(self) -> bool:
        return self.effective_offset == self.order

    def truncate(self, order: int) -> "TruncatedAutomorphism":
        if not self.offset < order <= self.order:
            raise ValueError("can only truncate to a smaller order above the offset")
        return TruncatedAutomorphism(self.algebra, self.offset, order, self.coeffs[: order - self.offset])

    def with_offset(self, m: int) -> "TruncatedAutomorphism":
        return TruncatedAutomorphism.from_series(self.algebra, self.series(), offset=m)

    def equals(self, other: "TruncatedAutomorphism") -> bool:
        return (
            other.algebra is self.algebra
            and other.order == self.order
            and all(np.array_equal(self.coeff(i), other.coeff(i)) for i in range(self.order))
        )

    def __repr__(self):
        return f"TruncatedAutomorphism(m={self.offset}, N={self.order}, {self.algebra!r})"


# ------------------------------------------------------ HS identities


def _products(A: Algebra, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """``P[a, b] = X(e_a) Y(e_b)``."""
    return cup(from_endo(X), from_endo(Y), A)


def _apply_to_products(A: Algebra, X: np.ndarray) -> np.ndarray:
    """``Q[a, b] = X(e_a e_b)``."""
    c = A.structconst
    out = np.tensordot(c.astype(np.float64), X.astype(np.float64), axes=([2], [1]))
    return np.mod(np.rint(out), A.p).astype(np.int64)


def _convolution(A: Algebra, series: Sequence[np.ndarray], i: int, skip_ends: bool = False) -> np.ndarray:
    """``sum_{j+l=i} a_j(x) a_l(y)`` over nonzero terms (``j, l >= 1`` if ``skip_ends``)."""
    d = A.dim
    out = np.zeros((d, d, d), dtype=np.int64)
    lo = 1 if skip_ends else 0
    for j in range(lo, i + 1 - lo):
        l = i - j
        if j >= len(series) or l >= len(series):
            continue
        X, Y = series[j], series[l]
        if not (np.any(X) and np.any(Y)):
            continue
        out = out + _products(A, X, Y)
    return np.mod(out, A.p)


def hs_check(alpha: TruncatedAutomorphism) -> tuple[bool, tuple[int, int, int] | None]:
    """Check the Hasse-Schmidt identities at every order below ``N``.

    Returns ``(ok, (order, a, b))`` with the first failing order and basis pair.
    """
    A = alpha.algebra
    s = alpha.series()
    for i in range(alpha.offset, alpha.order):
        lhs = _apply_to_products(A, s[i])
        rhs = _convolution(A, s, i)
        bad = np.argwhere(np.any(lhs != rhs, axis=2))
        if bad.size:
            return False, (i, int(bad[0][0]), int(bad[0][1]))
    return True, None


def _assert_valid(alpha: TruncatedAutomorphism) -> TruncatedAutomorphism:
    ok, where = hs_check(alpha)
    if not ok:
        raise InvalidAutomorphism(f"Hasse-Schmidt identity fails at order {where[0]} on pair {where[1:]}")
    return alpha


# --------------------------------------------------- group operations


def _series_product(a: Sequence[np.ndarray], b: Sequence[np.ndarray], p: int, order: int) -> list[np.ndarray]:
    out = []
    for n in range(order):
        acc = np.zeros_like(a[0])
        for i in range(n + 1):
            j = n - i
            if i < len(a) and j < len(b) and np.any(a[i]) and np.any(b[j]):
                acc = acc + matmul(a[i], b[j], p)
        out.append(np.mod(acc, p))
    return out


def compose(alpha: TruncatedAutomorphism, beta: TruncatedAutomorphism, check: bool = True) -> TruncatedAutomorphism:
    """``alpha o beta`` truncated at the common order; offset is the smaller one."""
    if alpha.algebra is not beta.algebra:
        raise ValueError("automorphisms of different algebras")
    if alpha.order != beta.order:
        raise ValueError("automorphisms of different orders")
    s = _series_product(alpha.series(), beta.series(), alpha.algebra.p, alpha.order)
    out = TruncatedAutomorphism.from_series(alpha.algebra, s, offset=min(alpha.offset, beta.offset))
    return _assert_valid(out) if check else out


def invert(alpha: TruncatedAutomorphism, check: bool = True) -> TruncatedAutomorphism:
    A, p = alpha.algebra, alpha.algebra.p
    a = alpha.series()
    inv = [_eye(A)]
    for n in range(1, alpha.order):
        acc = np.zeros_like(inv[0])
        for i in range(1, n + 1):
            if np.any(a[i]):
                acc = acc - matmul(a[i], inv[n - i], p)
        inv.append(np.mod(acc, p))
    out = TruncatedAutomorphism.from_series(A, inv, offset=alpha.offset)
    return _assert_valid(out) if check else out


def power(alpha: TruncatedAutomorphism, k: int, check: bool = True) -> TruncatedAutomorphism:
    out = TruncatedAutomorphism.identity(alpha.algebra, alpha.order).with_offset(alpha.offset)
    for _ in range(k):
        out = compose(out, alpha, check=False)
    return _assert_valid(out) if check else out


def commutator(alpha: TruncatedAutomorphism, beta: TruncatedAutomorphism, check: bool = True) -> TruncatedAutomorphism:
    """``alpha beta alpha^-1 beta^-1``."""
    x = compose(alpha, beta, check=False)
    x = compose(x, invert(alpha, check=False), check=False)
    x = compose(x, invert(beta, check=False), check=False)
    return _assert_valid(x) if check else x


def central_scale_auto(alpha: TruncatedAutomorphism, z) -> TruncatedAutomorphism:
    """``1 + z a_1 t + z^2 a_2 t^2 + ...`` for central ``z``."""
    A = alpha.algebra
    if alpha.offset != 1:
        raise ValueError("central scaling needs offset 1")
    z = np.mod(np.asarray(z, dtype=np.int64), A.p)
    if not center(A).member(z):
        raise NotCentral("scaling element is not central")
    s = alpha.series()
    zpow = A.unit.copy()
    out = [s[0]]
    for i in range(1, alpha.order):
        zpow = A.mul(zpow, z)
        out.append(matmul(A.left_matrix(zpow), s[i], A.p))
    return _assert_valid(TruncatedAutomorphism.from_series(A, out, offset=1))


def inner_automorphism(A: Algebra, a, order: int) -> TruncatedAutomorphism:
    """Conjugation ``x -> u x u^{-1}`` by the unit ``u = 1 + a t``."""
    a = np.mod(np.asarray(a, dtype=np.int64), A.p)
    p = A.p
    u_pows = [A.unit.copy()]  # (-a)^j
    for _ in range(1, order):
        u_pows.append(A.mul(u_pows[-1], (-a) % p))
    La = A.left_matrix(a)
    series = []
    for n in range(order):
        # sum_{i in {0,1}} u_i x (-a)^{n-i}
        acc = matmul(A.right_matrix(u_pows[n]), _eye(A), p)
        if n >= 1:
            acc = acc + matmul(La, A.right_matrix(u_pows[n - 1]), p)
        series.append(np.mod(acc, p))
    return _assert_valid(TruncatedAutomorphism.from_series(A, series, offset=1))


# ----------------------------------------------------------- obstructions


def obstruction(alpha: TruncatedAutomorphism, check: bool = True) -> np.ndarray:
    """``sum_{j+l=N, j,l>=1} a_j(x) a_l(y)`` as a 2-cochain; asserted to be a cocycle."""
    A = alpha.algebra
    obs = _convolution(A, alpha.series(), alpha.order, skip_ends=True)
    if check and np.any(differential(obs, A)):
        raise InvalidAutomorphism("obstruction cochain is not a cocycle")
    return obs


def extend_once(alpha: TruncatedAutomorphism):
    """Extend to order ``N+1`` with the canonical choice of ``a_N``.

    Returns ``(extension or None, Der(A))``.  Every valid ``a_N`` differs from
    the canonical one by a derivation.
    """
    A = alpha.algebra
    obs = obstruction(alpha)
    res = solve_coboundary(obs, A)
    der = derivation_space(A)
    if res is None:
        return None, der
    beta, _ = res
    # the identity reads a_N(xy) - x a_N(y) - a_N(x) y = obs, i.e. d(-a_N) = obs
    new = TruncatedAutomorphism(A, alpha.offset, alpha.order + 1, alpha.coeffs + (np.mod(-beta, A.p),))
    return _assert_valid(new), der


# -------------------------------------------------------------- lifting


@dataclass(frozen=True)
class LiftedTo:
    order: int
    witness: TruncatedAutomorphism
    explored: int = 0


@dataclass(frozen=True)
class ObstructedAt:
    """No extension of ``1 + Dt`` exists beyond ``order`` (exhaustive)."""

    order: int
    evidence: dict = field(default_factory=dict)


@dataclass(frozen=True)
class BudgetExhausted:
    order: int
    explored: int


LiftVerdict = Union[LiftedTo, ObstructedAt, BudgetExhausted]


class _OutOfBudget(Exception):
    pass


class _LiftSearch:
    """Depth-first search over Hasse-Schmidt extensions of ``1 + Dt``.

    At a node of order ``n`` the admissible ``a_n`` form the coset
    ``P + Der(A)``.  When the target is further away, the coset is cut down to
    the affine subspace whose next obstruction is a coboundary (the next
    obstruction is affine in ``a_n``), and only that subspace is enumerated:
    basis in RREF order, coefficients lexicographic.

    Choices are further identified modulo derivations known to lift to order
    ``ceil(N/n)``: substituting ``t -> t^n`` in such a lift gives an
    automorphism ``1 + delta t^n + ...`` modulo ``t^N``, and composing with it
    moves between the two choices without changing how far they extend.
    Known lifts come from inner derivations, polynomial certificates and
    recursive searches at the smaller order.
    """

    def __init__(self, D: Derivation, target: int, budget: int | None, memo: dict | None = None):
        self.A = D.algebra
        self.D = D
        self.target = target
        self.budget = budget
        self.explored = 0
        self.best = 2
        self.best_series = [_eye(self.A), D.matrix]
        self.solver = coboundary_solver(self.A)
        self.der = derivation_space(self.A)
        d = self.A.dim
        self.der_mats = self.der.basis.reshape(-1, d, d)
        # a_1 u K + K u a_1 for every derivation basis element K
        self._cross = [
            np.mod(_products(self.A, D.matrix, K) + _products(self.A, K, D.matrix), self.A.p)
            for K in self.der_mats
        ]
        self._residual_cross = None
        self.memo = {} if memo is None else memo
        self._equiv: dict[int, Subspace] = {}

    def _reaches(self, i: int, R: Derivation, order: int) -> bool:
        m = self.memo.setdefault(i, {"ok": 2, "bad": None, "cert": None})
        if m["cert"] is None:
            m["cert"] = find_certificate(R) is not None
        if m["cert"] or order <= m["ok"]:
            return True
        if m["bad"] is not None and order >= m["bad"]:
            return False
        v = _LiftSearch(R, order, self.budget, self.memo).run()
        if isinstance(v, LiftedTo):
            m["ok"] = order
            return True
        if isinstance(v, ObstructedAt):
            m["ok"], m["bad"] = max(m["ok"], v.order), v.order + 1
        return False

    def _equivalence(self, n: int) -> Subspace:
        """Derivation-coordinate subspace of choices at order ``n`` that do not matter."""
        M = -(-self.target // n)
        if M not in self._equiv:
            k = self.der.dim
            if M <= 2:
                self._equiv[M] = Subspace.full(self.A.p, k)
            else:
                h = hh1(self.A)
                vecs = [self.der.coordinates(v) for v in h.inn.basis]
                vecs += [
                    self.der.coordinates(R.vector)
                    for i, R in enumerate(h.class_reps)
                    if self._reaches(i, R, M)
                ]
                self._equiv[M] = Subspace.from_vectors(
                    np.array(vecs, dtype=np.int64).reshape(-1, k), self.A.p, k
                )
        return self._equiv[M]

    def _residual(self, c: np.ndarray) -> np.ndarray:
        # c minus the image of its canonical preimage: zero iff c is a coboundary
        s = self.solver
        p = self.A.p
        x = np.zeros(s.M.shape[1], dtype=np.int64)
        if s.rank:
            x[s.pivots] = matmul(s.block_inv, c.reshape(-1)[s.rows][:, None], p)[:, 0]
        return np.mod(c.reshape(-1) - matmul(s.M, x[:, None], p)[:, 0], p)

    def _choices(self, series: list[np.ndarray]) -> Iterator[np.ndarray] | None:
        A, p = self.A, self.A.p
        n = len(series)
        obs = _convolution(A, series, n, skip_ends=True)
        x = self.solver.solve(obs.reshape(-1))
        if x is None:
            return None
        P = np.mod(-x.reshape(A.dim, A.dim), p)
        self.best = max(self.best, n + 1)
        if n + 1 >= self.target:
            self.best_series = series + [P]
            return iter([P])
        # next obstruction with a_n = P + sum k_i K_i is base + sum k_i cross_i
        base = _convolution(A, series + [P], n + 1, skip_ends=True)
        if self._residual_cross is None:
            cols = [self._residual(w) for w in self._cross]
            self._residual_cross = np.array(cols, dtype=np.int64).T.reshape(-1, len(cols))
        rb = self._residual(base)
        if self.der.dim == 0:
            return iter([P]) if not np.any(rb) else None
        sol = solve(self._residual_cross, (-rb) % p, p)
        if sol is None:
            return None
        k0, ker = sol
        same = ker.intersect(self._equivalence(n))
        directions = same.complement_in(ker).reshape(-1, self.der.dim)
        return self._enumerate(P, k0, directions)

    def _enumerate(self, P, k0, directions: np.ndarray) -> Iterator[np.ndarray]:
        p = self.A.p
        for coeffs in itertools.product(range(p), repeat=len(directions)):
            k = k0.copy()
            if len(directions):
                k = np.mod(k + np.asarray(coeffs, dtype=np.int64) @ directions, p)
            K = np.tensordot(k, self.der_mats, axes=(0, 0)) if self.der.dim else 0
            yield np.mod(P + K, p)

    def _visit(self, series: list[np.ndarray]):
        if len(series) >= self.target:
            return series
        choices = self._choices(series)
        if choices is None:
            return None
        for a_n in choices:
            self.explored += 1
            if self.budget is not None and self.explored > self.budget:
                raise _OutOfBudget
            found = self._visit(series + [a_n])
            if found is not None:
                return found
        return None

    def run(self) -> LiftVerdict:
        A = self.A
        start = [_eye(A), self.D.matrix]
        try:
            found = self._visit(start)
        except _OutOfBudget:
            return BudgetExhausted(self.best, self.explored)
        if found is not None:
            witness = _assert_valid(TruncatedAutomorphism.from_series(A, found[: self.target], offset=1))
            return LiftedTo(self.target, witness, self.explored)
        return ObstructedAt(self.best, {"explored": self.explored, "exhaustive": True})


def lift(D: Derivation, order: int, budget: int | None = DEFAULT_BUDGET) -> LiftVerdict:
    """Search for an automorphism of ``A[t]/(t^order)`` with leading term ``D t``.

    ``budget`` caps the number of explored nodes; ``None`` searches
    exhaustively.  ``ObstructedAt(n)`` is only returned when the whole search
    tree has been exhausted, and then ``n`` is the largest order any extension
    of ``1 + Dt`` reaches.
    """
    A = D.algebra
    if not is_derivation(A, D.matrix):
        raise NotADerivation("lift needs a derivation")
    if order < 2:
        raise ValueError("target order must be at least 2")
    if order == 2:
        return LiftedTo(2, TruncatedAutomorphism.one_plus(D, 2))
    return _LiftSearch(D, order, budget).run()


# --------------------------------------------------------- certificates


def _poly_mul(A: Algebra, f: np.ndarray, g: np.ndarray) -> np.ndarray:
    # f, g: (deg+1, d) polynomials in t with coefficients in A
    p = A.p
    out = np.zeros((f.shape[0] + g.shape[0] - 1, A.dim), dtype=np.int64)
    for i in range(f.shape[0]):
        if not np.any(f[i]):
            continue
        left = np.tensordot(f[i], A.structconst, axes=(0, 0))  # (v, k)
        out[i: i + g.shape[0]] += g @ left
    return np.mod(out, p)


def polynomial_from_generators(A: Algebra, maps: Sequence) -> list[np.ndarray]:
    """Full coefficient maps of the substitution ``g -> g + sum_i a_i(g) t^i``.

    Each basis element is expanded along its factorization word.  The result
    ``[a_0, ..., a_R]`` is a well-defined algebra map only if it passes
    :func:`is_polynomial_automorphism`.
    """
    if A.generators is None or A.words is None:
        raise ValueError("algebra carries no generators")
    mats = [m.matrix if isinstance(m, Derivation) else np.asarray(m, dtype=np.int64) for m in maps]
    r = len(mats)
    gen_poly = {}
    for g in A.generators:
        poly = np.zeros((r + 1, A.dim), dtype=np.int64)
        poly[0, g] = 1
        for i, M in enumerate(mats, start=1):
            poly[i] = M[:, g]
        gen_poly[g] = np.mod(poly, A.p)
    memo: dict[tuple[int, ...], np.ndarray] = {(): A.unit[None, :].copy()}

    def expand(word):
        if word in memo:
            return memo[word]
        val = _poly_mul(A, gen_poly[word[0]], expand(word[1:]))
        memo[word] = val
        return val

    polys = [expand(tuple(w)) for w in A.words]
    R = max(pl.shape[0] for pl in polys) - 1
    series = [np.zeros((A.dim, A.dim), dtype=np.int64) for _ in range(R + 1)]
    for x, pl in enumerate(polys):
        for i in range(pl.shape[0]):
            series[i][:, x] = pl[i]
    while len(series) > 1 and not np.any(series[-1]):
        series.pop()
    return series


def is_polynomial_automorphism(A: Algebra, series: Sequence[np.ndarray]) -> bool:
    """``1 + a_1 t + ... + a_R t^R`` is multiplicative on ``A[t]`` exactly.

    The Hasse-Schmidt identity is checked at every order up to ``2R``, with
    coefficients beyond ``R`` zero.
    """
    series = [np.mod(np.asarray(s, dtype=np.int64), A.p) for s in series]
    if not np.array_equal(series[0], _eye(A)):
        return False
    R = len(series) - 1
    for i in range(1, 2 * R + 1):
        lhs = _apply_to_products(A, series[i]) if i <= R else 0
        rhs = _convolution(A, series, i)
        if np.any(np.mod(lhs - rhs, A.p)):
            return False
    return True


def certify_polynomial(maps: Sequence, A: Algebra) -> bool:
    """Whether the substitution built from ``maps`` is an automorphism of ``A[[t]]``.

    With generators available, ``maps`` act through their values on the
    generators; otherwise they are taken as the full coefficient maps.  A
    ``True`` result certifies that ``maps[0]`` is integrable to all orders.
    """
    if A.generators is not None and A.words is not None:
        series = polynomial_from_generators(A, maps)
    else:
        mats = [m.matrix if isinstance(m, Derivation) else np.asarray(m) for m in maps]
        series = [_eye(A)] + mats
    if len(series) < 2 or not is_derivation(A, series[1]):
        return False
    return is_polynomial_automorphism(A, series)


@dataclass(frozen=True, eq=False)
class Certificate:
    """An exact polynomial automorphism ``1 + D t + ...`` of ``A[t]``."""

    derivation: Derivation
    series: tuple[np.ndarray, ...]
    generator_maps: tuple[np.ndarray, ...] = ()

    @property
    def degree(self) -> int:
        return len(self.series) - 1

    def witness(self, order: int) -> TruncatedAutomorphism:
        A = self.derivation.algebra
        s = list(self.series[:order])
        s += [np.zeros((A.dim, A.dim), dtype=np.int64)] * (order - len(s))
        return TruncatedAutomorphism.from_series(A, s, offset=1)


def compose_polynomials(A: Algebra, a: Sequence[np.ndarray], b: Sequence[np.ndarray]) -> list[np.ndarray]:
    """Exact product of two polynomial automorphisms (no truncation)."""
    return _series_product(list(a), list(b), A.p, len(a) + len(b) - 1)


def _sparse_candidates(A: Algebra, gens: Sequence[int]) -> Iterator[np.ndarray]:
    # generator images with at most one nonzero coordinate, zero first
    d, p = A.dim, A.p
    G = len(gens)
    opts = [None] + [(k, c) for k in range(d) for c in range(1, p)]
    for choice in itertools.product(opts, repeat=G):
        M = np.zeros((d, d), dtype=np.int64)
        for g, ch in zip(gens, choice):
            if ch is not None:
                M[ch[0], g] = ch[1]
        yield M


def find_certificate(D: Derivation, max_degree: int = 1, max_candidates: int = 2000) -> Certificate | None:
    """Look for a polynomial automorphism with leading term ``D``.

    Degree 1 first (all higher generator terms zero), then sparse generator
    images for each further degree, up to ``max_candidates`` attempts.
    """
    A = D.algebra
    if A.generators is None or A.words is None:
        if is_polynomial_automorphism(A, [_eye(A), D.matrix]):
            return Certificate(D, (_eye(A), D.matrix))
        return None
    tried = 0
    prefix = [D.matrix]
    for extra in range(max_degree):
        candidates = [()] if extra == 0 else itertools.product(_sparse_candidates(A, A.generators), repeat=extra)
        for tail in candidates:
            tried += 1
            if tried > max_candidates:
                return None
            maps = prefix + list(tail)
            if extra and not np.any(maps[-1]):
                continue
            series = polynomial_from_generators(A, maps)
            if len(series) >= 2 and np.array_equal(series[1], D.matrix) and is_polynomial_automorphism(A, series):
                return Certificate(D, tuple(series), tuple(maps))
    return None


# --------------------------------------------------------------- reports


def _radical_verdict(D: Derivation):
    try:
        return preserves_radical(D)
    except RadicalUnavailable:
        return None


def integrable_report(
    A: Algebra,
    n_max: int | None = None,
    budget: int | None = DEFAULT_BUDGET,
    classes: dict[str, Derivation] | None = None,
    cert_degree: int = 1,
    inner_search: bool = True,
    lift_certified: bool = False,
) -> dict:
    """Per-class integrability verdicts with provenance labels.

    ``classes`` defaults to the Witt basis for ``F_p[x,y]/(x^p,y^p)`` and to
    the canonical HH^1 class representatives otherwise.  A class is certified
    integrable by a polynomial automorphism (tried on the representative and,
    with ``inner_search``, on representatives shifted by ``ad(c e_i)``), and
    certified non-integrable when it moves the radical or when the lifting
    search is exhausted.
    """
    p = A.p
    if n_max is None:
        n_max = 2 * p * p
    h = hh1(A)
    if classes is None:
        if A.kind == "trunc-poly" and A.params.get("vars") == 2:
            classes = witt_basis(A)
        else:
            classes = {f"class{k}": D for k, D in enumerate(h.class_reps)}
    rows = []
    certified = []
    can_lift = A.dim <= 40
    for name, D in classes.items():
        row: dict = {"class": name}
        rad = _radical_verdict(D)
        row["preserves_radical"] = rad
        cert = None
        if rad is not False:
            cert = find_certificate(D, max_degree=cert_degree)
            if cert is None and inner_search:
                cert = _shifted_certificate(D, cert_degree)
        if cert is not None:
            row["certificate_degree"] = cert.degree
            row["verdict"] = "INTEGRABLE"
            row["provenance"] = "CERTIFIED"
            certified.append(cert.derivation)
        if cert is None or lift_certified:
            if can_lift:
                target = n_max if rad is not False else max(n_max, p + 1)
                v = lift(D, target, budget=None if rad is False else budget)
                row["lift"] = _verdict_dict(v)
            else:
                v = None
                row["lift"] = {"status": "SKIPPED", "reason": f"dimension {A.dim} > 40"}
        if cert is None:
            if rad is False:
                row["verdict"] = "NOT_INTEGRABLE"
                row["provenance"] = "CERTIFIED"
            elif isinstance(v, ObstructedAt):
                row["verdict"] = "NOT_INTEGRABLE"
                row["provenance"] = "EXHAUSTIVE"
            elif isinstance(v, LiftedTo):
                row["verdict"] = "UNDECIDED"
                row["provenance"] = "HEURISTIC"
            else:
                row["verdict"] = "UNDECIDED"
                row["provenance"] = "UNDECIDED"
        rows.append(row)
    d2 = A.dim**2
    cert_space = Subspace.from_vectors(
        np.array([D.vector for D in certified], dtype=np.int64).reshape(-1, d2), p, d2
    ).sum(h.inn)
    return {
        "classes": rows,
        "hh1_dim": h.dim,
        "certified_integrable_dim": cert_space.dim - h.inn.dim,
        "certified_non_integrable": [r["class"] for r in rows if r["verdict"] == "NOT_INTEGRABLE"],
        "undecided": [r["class"] for r in rows if r["verdict"] == "UNDECIDED"],
        "n_max": n_max,
        "budget": budget,
        "_certified_space": cert_space,
    }


def _shifted_certificate(D: Derivation, cert_degree: int) -> Certificate | None:
    from .derlie import ad

    A = D.algebra
    for i in range(A.dim):
        for c in range(1, A.p):
            shift = ad(A, c * A.basis_vector(i))
            if shift.is_zero():
                continue
            cert = find_certificate(D + shift, max_degree=cert_degree)
            if cert is not None:
                return cert
    return None


def _verdict_dict(v: LiftVerdict) -> dict:
    if isinstance(v, LiftedTo):
        return {"status": "LIFTED", "order": v.order, "explored": v.explored}
    if isinstance(v, ObstructedAt):
        return {"status": "OBSTRUCTED", "order": v.order, **v.evidence}
    return {"status": "BUDGET_EXHAUSTED", "order": v.order, "explored": v.explored}


def random_truncated_automorphism(A: Algebra, order: int, rng: np.random.Generator) -> TruncatedAutomorphism:
    """Greedy random extension of ``1 + Dt`` for a random derivation ``D``.

    Stops early when the random path becomes obstructed, so the returned order
    may be smaller than requested (never below 2).
    """
    der = derivation_space(A)
    d, p = A.dim, A.p

    def rand_der():
        if der.dim == 0:
            return np.zeros((d, d), dtype=np.int64)
        k = rng.integers(0, p, size=der.dim)
        return np.mod(k @ der.basis, p).reshape(d, d)

    alpha = TruncatedAutomorphism.one_plus(rand_der(), 2, algebra=A)
    while alpha.order < order:
        ext, _ = extend_once(alpha)
        if ext is None:
            break
        coeffs = ext.coeffs[:-1] + (np.mod(ext.coeffs[-1] + rand_der(), p),)
        alpha = _assert_valid(TruncatedAutomorphism(A, 1, ext.order, coeffs))
    return alpha

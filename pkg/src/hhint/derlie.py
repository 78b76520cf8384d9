"""Derivations, inner derivations, HH^1, and the restricted Lie structure.

Endomorphisms are ``d x d`` matrices whose column ``j`` is the image of the
basis element ``e_j``.  Subspaces of End(A) use the row-major flattening of
that matrix as coordinates.
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass

import numpy as np

from .algebra import Algebra, center, radical
from .exactlin import Subspace, kernel, matmul, matpow

__all__ = [
    "Derivation",
    "HH1Presentation",
    "NotADerivation",
    "NotCentral",
    "NotBracketClosed",
    "leibniz_defect",
    "is_derivation",
    "derivation_space",
    "inner_derivations",
    "ad",
    "hh1",
    "bracket",
    "p_power",
    "extend_from_generators",
    "witt_basis",
    "monomial_derivations",
    "preserves_radical",
    "central_scale",
    "derived_series",
    "is_solvable",
]


class NotADerivation(ValueError):
    pass


class NotCentral(ValueError):
    pass


class NotBracketClosed(ValueError):
    pass


def _ftd(a, b, axes, p):
    out = np.tensordot(a.astype(np.float64), b.astype(np.float64), axes=axes)
    return np.mod(np.rint(out), p).astype(np.int64)


def leibniz_defect(A: Algebra, M: np.ndarray) -> np.ndarray:
    """``D(e_a e_b) - e_a D(e_b) - D(e_a) e_b`` for all pairs, shape ``(d, d, d)``."""
    c, p = A.structconst, A.p
    M = np.asarray(M, dtype=np.int64)
    d_of_prod = _ftd(c, M, axes=([2], [1]), p=p)  # (a,b,k) = sum_u c[a,b,u] M[k,u]
    left = _ftd(c, M, axes=([1], [0]), p=p).transpose(0, 2, 1)  # e_a D(e_b)
    right = _ftd(M, c, axes=([0], [0]), p=p)  # D(e_a) e_b
    return np.mod(d_of_prod - left - right, p)


def is_derivation(A: Algebra, M: np.ndarray) -> bool:
    return not np.any(leibniz_defect(A, M))


@dataclass(frozen=True, eq=False)
class Derivation:
    algebra: Algebra
    matrix: np.ndarray
    label: str | None = None

    def __post_init__(self):
        M = np.mod(np.asarray(self.matrix, dtype=np.int64), self.algebra.p)
        if M.shape != (self.algebra.dim, self.algebra.dim):
            raise ValueError("derivation matrix has the wrong shape")
        object.__setattr__(self, "matrix", M)

    @classmethod
    def checked(cls, A: Algebra, M, label=None) -> "Derivation":
        D = cls(A, M, label)
        if not is_derivation(A, D.matrix):
            raise NotADerivation(f"{label or 'map'} violates the Leibniz rule")
        return D

    @property
    def vector(self) -> np.ndarray:
        return self.matrix.reshape(-1)

    @property
    def p(self) -> int:
        return self.algebra.p

    def __call__(self, v) -> np.ndarray:
        return self.matrix @ np.asarray(v, dtype=np.int64) % self.p

    def _same(self, other: "Derivation"):
        if other.algebra is not self.algebra:
            raise ValueError("derivations live on different algebras")

    def __add__(self, other: "Derivation") -> "Derivation":
        self._same(other)
        return Derivation(self.algebra, self.matrix + other.matrix)

    def __sub__(self, other: "Derivation") -> "Derivation":
        self._same(other)
        return Derivation(self.algebra, self.matrix - other.matrix)

    def __neg__(self) -> "Derivation":
        return Derivation(self.algebra, -self.matrix)

    def __rmul__(self, k: int) -> "Derivation":
        return Derivation(self.algebra, int(k) * self.matrix)

    def __eq__(self, other):
        if not isinstance(other, Derivation):
            return NotImplemented
        return other.algebra is self.algebra and np.array_equal(self.matrix, other.matrix)

    __hash__ = None

    def is_zero(self) -> bool:
        return not np.any(self.matrix)

    def __repr__(self):
        name = self.label or "Derivation"
        return f"<{name} on {self.algebra!r}>"


# --------------------------------------------------------- solvers


_word_ops: "weakref.WeakKeyDictionary[Algebra, np.ndarray]" = weakref.WeakKeyDictionary()


def _word_operator(A: Algebra) -> np.ndarray:
    """``T[x]`` maps generator images to ``D(e_x)`` via the factorization word.

    Shape ``(d, d, G*d)``; unknown block ``k`` holds ``D(g_k)``.  Words are read
    as ``x = g * rest``, so ``D(x) = g D(rest) + D(g) rest``.
    """
    T = _word_ops.get(A)
    if T is not None:
        return T
    if A.generators is None or A.words is None:
        raise ValueError("algebra carries no generators")
    d, p = A.dim, A.p
    gens = list(A.generators)
    G = len(gens)
    pos = {g: k for k, g in enumerate(gens)}
    c = A.structconst
    memo: dict[tuple[int, ...], tuple[np.ndarray, np.ndarray]] = {
        (): (np.zeros((d, G * d), dtype=np.int64), A.unit.copy())
    }

    def op(word):
        hit = memo.get(word)
        if hit is not None:
            return hit
        g, rest = word[0], word[1:]
        t_rest, v_rest = op(rest)
        sel = np.zeros((d, G * d), dtype=np.int64)
        sel[np.arange(d), pos[g] * d + np.arange(d)] = 1
        left_g = c[g].T  # column j = e_g e_j
        right_rest = np.tensordot(c, v_rest, axes=(1, 0)).T % p  # column j = e_j rest
        t = (matmul(left_g, t_rest, p) + matmul(right_rest, sel, p)) % p
        v = c[g].T @ v_rest % p
        memo[word] = (t, v)
        return t, v

    T = np.zeros((d, d, G * d), dtype=np.int64)
    for x, w in enumerate(A.words):
        T[x] = op(tuple(w))[0]
    _word_ops[A] = T
    return T


def _derivations_by_generators(A: Algebra) -> Subspace:
    d, p = A.dim, A.p
    c = A.structconst
    T = _word_operator(A)
    n_unknown = T.shape[2]
    blocks = []
    Tflat = T.reshape(d, d * n_unknown)
    for g in A.generators:
        lhs = matmul(c[g], Tflat, p).reshape(d, d, n_unknown)  # D(e_g e_h)
        left_g = c[g].T
        lt = np.stack([matmul(left_g, T[h], p) for h in range(d)])  # e_g D(e_h)
        rt = _ftd(c[:, :, :], T[g], axes=([0], [0]), p=p)  # (h, i, u): D(e_g) e_h
        blocks.append(np.mod(lhs - lt - rt, p).reshape(d * d, n_unknown))
    rows = np.vstack(blocks)
    rows = rows[np.any(rows, axis=1)]
    if rows.shape[0]:
        rows = np.unique(rows, axis=0)
    sol = kernel(rows, p) if rows.shape[0] else Subspace.full(p, n_unknown)
    # D[:, j] = T[j] @ u  ->  matrix entries (i, j)
    mats = np.einsum("jiu,ku->kij", T.astype(np.float64), sol.basis.astype(np.float64))
    mats = np.mod(np.rint(mats), p).astype(np.int64)
    return Subspace.from_vectors(mats.reshape(sol.dim, d * d), p, d * d)


def _derivations_full(A: Algebra) -> Subspace:
    """Leibniz on every basis pair, all ``d^2`` matrix entries unknown.

    The kernel is narrowed one left factor ``e_a`` at a time so the constraint
    block never exceeds ``d^2 x d^2``.
    """
    d, p = A.dim, A.p
    c = A.structconst
    eye = np.eye(d, dtype=np.int64)
    K = np.eye(d * d, dtype=np.int64)  # columns span the current solution set
    for a in range(d):
        # rows (b, k), columns (i, j)
        t1 = np.einsum("bj,ik->bkij", c[a], eye)  # D(e_a e_b)
        t2 = np.einsum("ik,jb->bkij", c[a], eye)  # e_a D(e_b)
        t3 = np.einsum("ibk,j->bkij", c, eye[a])  # D(e_a) e_b
        C = np.mod(t1 - t2 - t3, p).reshape(d * d, d * d)
        CK = matmul(C, K, p)
        sub = kernel(CK, p)
        if sub.dim == 0:
            return Subspace.zero(p, d * d)
        K = matmul(K, sub.basis.T.copy(), p)
    return Subspace.from_vectors(K.T.copy(), p, d * d)


_der_cache: "weakref.WeakKeyDictionary[Algebra, Subspace]" = weakref.WeakKeyDictionary()


def derivation_space(A: Algebra, method: str = "auto") -> Subspace:
    """All derivations of ``A`` as a subspace of End(A).

    ``method`` is ``"generators"`` (unknowns are the images of the generators,
    extended along factorization words), ``"full"`` (all matrix entries
    unknown) or ``"auto"`` (generators when available).
    """
    if method == "auto":
        method = "generators" if A.generators is not None and A.words is not None else "full"
        cached = _der_cache.get(A)
        if cached is not None:
            return cached
        out = derivation_space(A, method)
        _der_cache[A] = out
        return out
    if method == "generators":
        return _derivations_by_generators(A)
    if method == "full":
        return _derivations_full(A)
    raise ValueError(f"unknown method {method!r}")


def ad(A: Algebra, a) -> Derivation:
    """Inner derivation ``x -> a x - x a``."""
    a = np.asarray(a, dtype=np.int64)
    return Derivation(A, A.left_matrix(a) - A.right_matrix(a), label="ad")


def inner_derivations(A: Algebra) -> Subspace:
    c = A.structconst
    d = A.dim
    # ad(e_j)[k, i] = c[j,i,k] - c[i,j,k]
    mats = c.transpose(0, 2, 1) - c.transpose(1, 2, 0)
    return Subspace.from_vectors(np.mod(mats, A.p).reshape(d, d * d), A.p, d * d)


@dataclass(frozen=True, eq=False)
class HH1Presentation:
    algebra: Algebra
    der: Subspace
    inn: Subspace
    class_reps: tuple[Derivation, ...]

    @property
    def dim(self) -> int:
        return len(self.class_reps)

    def class_of(self, D: Derivation) -> np.ndarray:
        """Coordinates of ``D`` modulo inner derivations in the class-rep basis."""
        d2 = self.algebra.dim ** 2
        basis = np.vstack([self.inn.basis] + [r.vector[None, :] for r in self.class_reps]).reshape(-1, d2)
        from .exactlin import solve

        res = solve(basis.T.copy(), D.vector, self.algebra.p)
        if res is None:
            raise NotADerivation("not in the derivation space")
        return res[0][self.inn.dim:]


_hh1_cache: "weakref.WeakKeyDictionary[Algebra, HH1Presentation]" = weakref.WeakKeyDictionary()


def hh1(A: Algebra) -> HH1Presentation:
    cached = _hh1_cache.get(A)
    if cached is not None:
        return cached
    der = derivation_space(A)
    inn = inner_derivations(A)
    reps = inn.complement_in(der)
    d = A.dim
    out = HH1Presentation(
        A, der, inn, tuple(Derivation(A, r.reshape(d, d), label=f"class{k}") for k, r in enumerate(reps))
    )
    _hh1_cache[A] = out
    return out


# ----------------------------------------------------- Lie operations


def bracket(D1: Derivation, D2: Derivation) -> Derivation:
    D1._same(D2)
    p = D1.p
    M = matmul(D1.matrix, D2.matrix, p) - matmul(D2.matrix, D1.matrix, p)
    return Derivation.checked(D1.algebra, M)


def p_power(D: Derivation) -> Derivation:
    return Derivation.checked(D.algebra, matpow(D.matrix, D.p, D.p))


def extend_from_generators(A: Algebra, images: dict[int, np.ndarray], label=None) -> Derivation:
    """The derivation with prescribed generator images (unlisted ones map to 0).

    Raises :class:`NotADerivation` if the images violate the relations.
    """
    T = _word_operator(A)
    d = A.dim
    u = np.zeros(T.shape[2], dtype=np.int64)
    pos = {g: k for k, g in enumerate(A.generators)}
    for g, v in images.items():
        u[pos[g] * d:(pos[g] + 1) * d] = np.asarray(v, dtype=np.int64)
    M = np.einsum("jiu,u->ij", T, u) % A.p
    return Derivation.checked(A, M, label)


def monomial_derivations(A: Algebra) -> dict[str, Derivation]:
    """``m * d/dx_v`` for every monomial ``m`` and variable ``x_v`` of a truncated polynomial algebra."""
    if A.kind != "trunc-poly":
        raise ValueError("monomial derivations need a truncated polynomial algebra")
    out = {}
    r = A.params["vars"]
    for v in range(r):
        for x in range(A.dim):
            D = extend_from_generators(A, {A.generators[v]: A.basis_vector(x)})
            out[f"{A.labels[x]}*d/d{A.labels[A.generators[v]]}"] = D
    return out


def witt_basis(A: Algebra) -> dict[str, Derivation]:
    """The ``2p^2`` derivations ``f_{a,b}`` (x -> x^a y^b, y -> 0) and ``g_{c,d}`` (y -> x^c y^d, x -> 0)."""
    if A.kind != "trunc-poly" or A.params.get("vars") != 2:
        raise ValueError("the Witt basis is defined for F_p[x,y]/(x^p, y^p)")
    exps = [tuple(e) for e in A.params["exponents"]]
    index = {e: i for i, e in enumerate(exps)}
    gx, gy = A.generators
    out = {}
    p = A.p
    for name, gen in (("f", gx), ("g", gy)):
        for a in range(p):
            for b in range(p):
                img = A.basis_vector(index[(a, b)])
                out[f"{name}_{a},{b}"] = extend_from_generators(A, {gen: img}, label=f"{name}_{a},{b}")
    span = Subspace.from_vectors(np.array([D.vector for D in out.values()]), p, A.dim**2)
    assert span.equal(derivation_space(A)), "Witt basis does not span Der(A)"
    return out


def preserves_radical(D: Derivation) -> bool:
    J = radical(D.algebra)
    return all(J.member(D(v)) for v in J.basis)


def central_scale(z, D: Derivation) -> Derivation:
    A = D.algebra
    z = np.mod(np.asarray(z, dtype=np.int64), A.p)
    if not center(A).member(z):
        raise NotCentral("scaling element is not central")
    return Derivation.checked(A, matmul(A.left_matrix(z), D.matrix, A.p))


def _span_brackets(A: Algebra, L: Subspace) -> Subspace:
    d, p = A.dim, A.p
    mats = L.basis.reshape(-1, d, d)
    out = []
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            out.append((matmul(mats[i], mats[j], p) - matmul(mats[j], mats[i], p)).reshape(-1))
    return Subspace.from_vectors(np.mod(np.array(out, dtype=np.int64), p).reshape(-1, d * d), p, d * d)


def derived_series(A: Algebra, L: Subspace, modulo: Subspace | None = None) -> list[int]:
    """Dimensions of ``L, [L,L], [[L,L],[L,L]], ...`` until stable or zero.

    With ``modulo`` (normally the inner derivations) the computation runs on
    ``L + modulo`` and dimensions are reported relative to ``modulo``.
    """
    base = modulo if modulo is not None else Subspace.zero(A.p, A.dim**2)
    cur = L.sum(base)
    if not cur.contains(_span_brackets(A, cur)):
        raise NotBracketClosed("subspace is not closed under the bracket")
    dims = [cur.dim - base.dim]
    while dims[-1] > 0:
        nxt = _span_brackets(A, cur).sum(base)
        if nxt.dim == cur.dim:
            break
        cur = nxt
        dims.append(cur.dim - base.dim)
    return dims


def is_solvable(A: Algebra, L: Subspace, modulo: Subspace | None = None) -> bool:
    return derived_series(A, L, modulo)[-1] == 0

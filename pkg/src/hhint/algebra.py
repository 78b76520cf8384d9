"""Finite-dimensional associative unital algebras over F_p.

An :class:`Algebra` is given by structure constants ``c`` with
``e_i e_j = sum_k c[i, j, k] e_k``.  Constructors validate associativity and
the unit laws.  The presets (group algebras, truncated polynomial algebras,
cyclic Nakayama algebras) also record generators, a factorization word for
every basis element, and the Jacobson radical.
"""

from __future__ import annotations

import hashlib
import itertools
import re
from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .exactlin import Subspace, check_prime, kernel, matmul, matpow

__all__ = [
    "Algebra",
    "AlgebraError",
    "AssociativityViolation",
    "UnitViolation",
    "OrderBound",
    "RadicalUnavailable",
    "SpecParseError",
    "MAX_DIM",
    "MAX_GROUP_ORDER",
    "from_structure_constants",
    "parse_cycles",
    "group_algebra",
    "trunc_poly_algebra",
    "nakayama_algebra",
    "matrix_algebra",
    "center",
    "radical",
    "ideal_power",
    "parse_spec",
    "load_spec",
    "dump_spec",
]

MAX_DIM = 512
MAX_GROUP_ORDER = 5040


class AlgebraError(ValueError):
    pass


class AssociativityViolation(AlgebraError):
    def __init__(self, i: int, j: int, k: int):
        super().__init__(f"(e{i} e{j}) e{k} != e{i} (e{j} e{k})")
        self.triple = (i, j, k)


class UnitViolation(AlgebraError):
    def __init__(self, i: int):
        super().__init__(f"unit law fails on basis element {i}")
        self.index = i


class OrderBound(AlgebraError):
    pass


class RadicalUnavailable(AlgebraError):
    pass


class SpecParseError(AlgebraError):
    def __init__(self, lineno: int, msg: str):
        super().__init__(f"line {lineno}: {msg}")
        self.lineno = lineno


@dataclass(frozen=True, eq=False)
class Algebra:
    p: int
    labels: tuple[str, ...]
    structconst: np.ndarray
    unit: np.ndarray
    kind: str = "generic"
    generators: tuple[int, ...] | None = None
    words: tuple[tuple[int, ...], ...] | None = None
    radical: Subspace | None = None
    params: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return len(self.labels)

    def basis_vector(self, i: int) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.int64)
        v[i] = 1
        return v

    def mul(self, x, y) -> np.ndarray:
        """Product of two coordinate vectors."""
        x = np.asarray(x, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        t = matmul(x[None, :], self.structconst.reshape(self.dim, -1), self.p).reshape(self.dim, self.dim)
        return matmul(y[None, :], t, self.p)[0]

    def left_matrix(self, x) -> np.ndarray:
        """Matrix of ``v -> x v`` (columns are images of basis vectors)."""
        x = np.asarray(x, dtype=np.int64)
        M = np.tensordot(x, self.structconst, axes=(0, 0)) % self.p
        return M.T.copy()

    def right_matrix(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        M = np.tensordot(self.structconst, x, axes=(1, 0)) % self.p
        return M.T.copy()

    def power(self, x, n: int) -> np.ndarray:
        out = self.unit.copy()
        for _ in range(n):
            out = self.mul(out, x)
        return out

    def is_commutative(self) -> bool:
        return np.array_equal(self.structconst, self.structconst.transpose(1, 0, 2))

    def check(self) -> None:
        """Re-assert associativity, unit laws, words and radical."""
        _check_associative(self.structconst, self.p)
        _check_unit(self.structconst, self.unit, self.p)
        if self.words is not None:
            for i, w in enumerate(self.words):
                if not np.array_equal(self.evaluate_word(w), self.basis_vector(i)):
                    raise AlgebraError(f"factorization word of {self.labels[i]} does not evaluate to it")
        if self.radical is not None:
            _check_nilpotent_ideal(self, self.radical)

    def evaluate_word(self, word: Sequence[int]) -> np.ndarray:
        out = self.unit.copy()
        for g in word:
            out = out @ self.structconst[:, g, :] % self.p
        return out

    def fingerprint(self) -> str:
        h = hashlib.sha256()
        h.update(f"{self.p}|{self.dim}|{self.kind}|".encode())
        h.update(np.ascontiguousarray(self.structconst, dtype=np.int64).tobytes())
        h.update(np.ascontiguousarray(self.unit, dtype=np.int64).tobytes())
        return h.hexdigest()[:16]

    def describe(self) -> dict:
        return {
            "p": self.p,
            "dim": self.dim,
            "kind": self.kind,
            "hash": self.fingerprint(),
            "params": dict(self.params),
        }

    def __repr__(self):
        return f"Algebra(kind={self.kind!r}, p={self.p}, dim={self.dim})"


def _check_associative(c: np.ndarray, p: int) -> None:
    d = c.shape[0]
    counts = np.count_nonzero(c, axis=2)
    if counts.max(initial=0) <= 1:
        _check_associative_monomial(c, counts, p)
        return
    for i in range(d):
        # (e_i e_j) e_k = sum_u c[i,j,u] c[u,k,:]
        left = matmul(c[i], c.reshape(d, d * d), p).reshape(d, d, d)
        # e_i (e_j e_k) = sum_u c[j,k,u] c[i,u,:]
        right = matmul(c.reshape(d * d, d), c[i], p).reshape(d, d, d)
        bad = np.argwhere(left != right)
        if bad.size:
            j, k, _ = (int(v) for v in bad[0])
            raise AssociativityViolation(i, j, k)


def _check_associative_monomial(c: np.ndarray, counts: np.ndarray, p: int) -> None:
    # each product e_i e_j is a scalar multiple of a single basis element
    d = c.shape[0]
    target = np.where(counts > 0, np.argmax(c != 0, axis=2), 0)
    coef = np.take_along_axis(c, target[:, :, None], axis=2)[:, :, 0]
    idx = np.arange(d)
    left_t = target[target[:, :, None], idx[None, None, :]]
    left_c = coef[:, :, None] * coef[target[:, :, None], idx[None, None, :]] % p
    right_t = target[idx[:, None, None], target[None, :, :]]
    right_c = coef[None, :, :] * coef[idx[:, None, None], target[None, :, :]] % p
    bad = np.argwhere((left_c != right_c) | ((left_c != 0) & (left_t != right_t)))
    if bad.size:
        i, j, k = (int(v) for v in bad[0])
        raise AssociativityViolation(i, j, k)


def _check_unit(c: np.ndarray, unit: np.ndarray, p: int) -> None:
    d = c.shape[0]
    left = np.tensordot(unit, c, axes=(0, 0)) % p
    right = np.tensordot(unit, c, axes=(0, 1)) % p
    eye = np.eye(d, dtype=np.int64)
    for i in range(d):
        if not (np.array_equal(left[i], eye[i]) and np.array_equal(right[i], eye[i])):
            raise UnitViolation(i)


def from_structure_constants(p, labels, c, unit, *, kind="generic", generators=None, words=None,
                             radical=None, params=None) -> Algebra:
    p = check_prime(p)
    c = np.mod(np.asarray(c, dtype=np.int64), p)
    d = len(labels)
    if c.shape != (d, d, d):
        raise AlgebraError(f"structure constants must have shape {(d, d, d)}, got {c.shape}")
    if d > MAX_DIM:
        raise OrderBound(f"dimension {d} exceeds bound {MAX_DIM}")
    unit = np.mod(np.asarray(unit, dtype=np.int64).reshape(-1), p)
    if unit.shape != (d,):
        raise AlgebraError("unit vector has the wrong length")
    _check_associative(c, p)
    _check_unit(c, unit, p)
    A = Algebra(
        p=p,
        labels=tuple(labels),
        structconst=c,
        unit=unit,
        kind=kind,
        generators=None if generators is None else tuple(generators),
        words=None if words is None else tuple(tuple(w) for w in words),
        radical=radical,
        params=dict(params or {}),
    )
    if words is not None:
        for i, w in enumerate(A.words):
            if not np.array_equal(A.evaluate_word(w), A.basis_vector(i)):
                raise AlgebraError(f"factorization word of {A.labels[i]} does not evaluate to it")
    if radical is not None:
        _check_nilpotent_ideal(A, radical)
    return A


def _check_nilpotent_ideal(A: Algebra, J: Subspace) -> None:
    c = A.structconst
    for v in J.basis:
        left = np.tensordot(c, v, axes=(1, 0)) % A.p  # rows: e_i v
        right = np.tensordot(v, c, axes=(0, 0)) % A.p  # rows: v e_i
        if any(J.member(w) is False for w in np.vstack([left, right])):
            raise AlgebraError("radical is not a two-sided ideal")
    power = J
    for _ in range(A.dim + 1):
        if power.dim == 0:
            return
        power = _product_space(A, power, J)
    raise AlgebraError("radical is not nilpotent")


def _product_space(A: Algebra, U: Subspace, V: Subspace) -> Subspace:
    d = A.dim
    if U.dim == 0 or V.dim == 0:
        return Subspace.zero(A.p, d)
    # products u_a v_b for all basis pairs
    t = np.einsum("ai,bj,ijk->abk", U.basis, V.basis, A.structconst) % A.p
    return Subspace.from_vectors(t.reshape(-1, d), A.p, d)


def ideal_power(A: Algebra, J: Subspace, n: int) -> Subspace:
    """The span of all n-fold products of elements of ``J`` (``n >= 1``)."""
    out = J
    for _ in range(n - 1):
        out = _product_space(A, out, J)
    return out


# ---------------------------------------------------------------- groups


def parse_cycles(text: str) -> list[dict[int, int]]:
    """Parse ``"(1 2),(1 2 3)"`` into point maps (1-based points).

    Consecutive cycles without a separating comma, like ``"(1 2)(3 4)"``, are
    multiplied into a single generator.
    """
    gens = []
    for chunk in re.split(r",\s*(?=\()", text.strip()):
        chunk = chunk.strip()
        if not chunk:
            continue
        if not re.fullmatch(r"(\(\s*\d+(?:[\s,]+\d+)*\s*\))+", chunk):
            raise AlgebraError(f"cannot parse permutation {chunk!r}")
        perm: dict[int, int] = {}
        for cyc in re.findall(r"\(([^)]*)\)", chunk):
            pts = [int(x) for x in re.split(r"[\s,]+", cyc.strip())]
            if len(set(pts)) != len(pts):
                raise AlgebraError(f"repeated point in cycle ({cyc})")
            cyc_map = {a: b for a, b in zip(pts, pts[1:] + pts[:1])}
            # written products act right to left, matching (gh)(i) = g(h(i))
            pts_all = set(perm) | set(cyc_map)
            perm = {x: perm.get(cyc_map.get(x, x), cyc_map.get(x, x)) for x in pts_all}
        gens.append(perm)
    if not gens:
        raise AlgebraError("no generators given")
    return gens


def _perm_tuple(perm: dict[int, int], n: int) -> tuple[int, ...]:
    return tuple(perm.get(i + 1, i + 1) - 1 for i in range(n))


def _compose(g: tuple[int, ...], h: tuple[int, ...]) -> tuple[int, ...]:
    # (g h)(i) = g(h(i))
    return tuple(g[h[i]] for i in range(len(h)))


def _cycle_label(perm: tuple[int, ...]) -> str:
    seen = set()
    parts = []
    for i in range(len(perm)):
        if i in seen or perm[i] == i:
            continue
        cyc = [i]
        seen.add(i)
        j = perm[i]
        while j != i:
            cyc.append(j)
            seen.add(j)
            j = perm[j]
        parts.append("(" + " ".join(str(x + 1) for x in cyc) + ")")
    return "".join(parts) or "()"


def group_algebra(gens, p: int, *, max_order: int = MAX_GROUP_ORDER, labels: Sequence[str] | None = None) -> Algebra:
    """Group algebra of the permutation group generated by ``gens``.

    ``gens`` is a cycle-notation string or a list of point maps.  Basis
    elements are the group elements in breadth-first order from the identity,
    each reached by left multiplication by a generator; the recorded word is a
    shortest one.
    """
    p = check_prime(p)
    if isinstance(gens, str):
        gens = parse_cycles(gens)
    n = max([max(max(g), max(g.values())) for g in gens if g] + [1])
    gtuples = [_perm_tuple(g, n) for g in gens]
    for g in gtuples:
        if sorted(g) != list(range(n)):
            raise AlgebraError(f"not a permutation: {g}")
    ident = tuple(range(n))
    index = {ident: 0}
    elems = [ident]
    words: list[tuple[int, ...]] = [()]
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        for gi, g in enumerate(gtuples):
            y = _compose(g, x)
            if y not in index:
                if len(elems) >= max_order:
                    raise OrderBound(f"group order exceeds bound {max_order}")
                index[y] = len(elems)
                elems.append(y)
                words.append((gi,) + words[index[x]])
                queue.append(y)
    N = len(elems)
    # word entries must be basis indices of the generators
    gen_idx = [index[g] for g in gtuples]
    words = [tuple(gen_idx[g] for g in w) for w in words]
    c = np.zeros((N, N, N), dtype=np.int64)
    for i, x in enumerate(elems):
        for j, y in enumerate(elems):
            c[i, j, index[_compose(x, y)]] = 1
    unit = np.zeros(N, dtype=np.int64)
    unit[0] = 1
    rad = None
    q = N
    while q % p == 0:
        q //= p
    if q == 1 and N > 1:
        aug = np.zeros((N - 1, N), dtype=np.int64)
        aug[:, 0] = p - 1
        aug[np.arange(N - 1), np.arange(1, N)] = 1
        rad = Subspace.from_vectors(aug, p, N)
    elif N == 1:
        rad = Subspace.zero(p, 1)
    generators = tuple(dict.fromkeys(gen_idx))
    return from_structure_constants(
        p,
        labels if labels is not None else [_cycle_label(e) for e in elems],
        c,
        unit,
        kind="group",
        generators=generators,
        words=words,
        radical=rad,
        params={"order": N, "degree": n},
    )


def symmetric_group_generators(n: int) -> str:
    if n < 2:
        return "()"
    if n == 2:
        return "(1 2)"
    return "(1 2),(" + " ".join(str(i) for i in range(1, n + 1)) + ")"


def elementary_abelian_generators(p: int, r: int) -> str:
    gens = []
    for k in range(r):
        pts = range(k * p + 1, (k + 1) * p + 1)
        gens.append("(" + " ".join(str(x) for x in pts) + ")")
    return ",".join(gens)


# ------------------------------------------------------ truncated polynomials


def trunc_poly_algebra(r: int, p: int, *, max_dim: int = MAX_DIM) -> Algebra:
    """``F_p[x_1..x_r]/(x_1^p, ..., x_r^p)`` on the monomial basis, graded-lex order."""
    p = check_prime(p)
    if r < 0:
        raise AlgebraError("variable count must be nonnegative")
    d = p**r
    if d > max_dim:
        raise OrderBound(f"dimension {d} exceeds bound {max_dim}")
    exps = sorted(itertools.product(range(p), repeat=r), key=lambda e: (sum(e), tuple(-x for x in e)))
    index = {e: i for i, e in enumerate(exps)}
    c = np.zeros((d, d, d), dtype=np.int64)
    for i, a in enumerate(exps):
        for j, b in enumerate(exps):
            s = tuple(x + y for x, y in zip(a, b))
            if all(x < p for x in s):
                c[i, j, index[s]] = 1
    names = ["x", "y", "z"] if r <= 3 else [f"x{k + 1}" for k in range(r)]
    labels = [_monomial_label(e, names) for e in exps]
    gen_idx = [index[tuple(int(k == v) for k in range(r))] for v in range(r)] if p > 1 else []
    words = []
    for e in exps:
        w = []
        for v in range(r):
            w.extend([gen_idx[v]] * e[v])
        words.append(tuple(w))
    unit = np.zeros(d, dtype=np.int64)
    unit[0] = 1
    rad = Subspace.from_vectors(np.eye(d, dtype=np.int64)[1:], p, d) if d > 1 else Subspace.zero(p, d)
    return from_structure_constants(
        p, labels, c, unit, kind="trunc-poly", generators=gen_idx, words=words, radical=rad,
        params={"vars": r, "exponents": [list(e) for e in exps]},
    )


def _monomial_label(e, names) -> str:
    parts = []
    for v, k in enumerate(e):
        if k == 1:
            parts.append(names[v])
        elif k > 1:
            parts.append(f"{names[v]}^{k}")
    return "*".join(parts) or "1"


# ------------------------------------------------------------- Nakayama


def nakayama_algebra(m: int, n: int, p: int, *, max_dim: int = MAX_DIM) -> Algebra:
    """Cyclic quiver with ``m`` vertices modulo all paths of length ``> n``.

    Arrow ``a_i`` runs from vertex ``e_i`` to ``e_{i+1}`` (indices mod m);
    paths compose left to right, so ``a_1 a_2`` is nonzero.  Basis order is
    (length, start vertex).
    """
    p = check_prime(p)
    if m < 1 or n < 1:
        raise AlgebraError("need m >= 1 and n >= 1")
    d = m * (n + 1)
    if d > max_dim:
        raise OrderBound(f"dimension {d} exceeds bound {max_dim}")
    paths = [(length, start) for length in range(n + 1) for start in range(m)]
    index = {pth: i for i, pth in enumerate(paths)}
    c = np.zeros((d, d, d), dtype=np.int64)
    for i, (l1, s1) in enumerate(paths):
        for j, (l2, s2) in enumerate(paths):
            if (s1 + l1) % m == s2 and l1 + l2 <= n:
                c[i, j, index[(l1 + l2, s1)]] = 1
    labels = []
    for length, s in paths:
        if length == 0:
            labels.append(f"e{s + 1}")
        else:
            labels.append("".join(f"a{(s + k) % m + 1}" for k in range(length)))
    vertices = [index[(0, s)] for s in range(m)]
    arrows = [index[(1, s)] for s in range(m)]
    words = []
    for length, s in paths:
        if length == 0:
            words.append((index[(0, s)],))
        else:
            words.append(tuple(arrows[(s + k) % m] for k in range(length)))
    unit = np.zeros(d, dtype=np.int64)
    unit[vertices] = 1
    rad = Subspace.from_vectors(np.eye(d, dtype=np.int64)[m:], p, d) if n >= 1 else Subspace.zero(p, d)
    return from_structure_constants(
        p, labels, c, unit, kind="nakayama", generators=arrows + vertices, words=words, radical=rad,
        params={"m": m, "n": n},
    )


def matrix_algebra(n: int, p: int) -> Algebra:
    """Full matrix algebra on matrix units ``E_ij`` (row-major order)."""
    p = check_prime(p)
    d = n * n
    c = np.zeros((d, d, d), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                c[i * n + j, j * n + k, i * n + k] = 1
    unit = np.zeros(d, dtype=np.int64)
    unit[[i * n + i for i in range(n)]] = 1
    return from_structure_constants(
        p, [f"E{i + 1}{j + 1}" for i in range(n) for j in range(n)], c, unit,
        kind="matrix", radical=Subspace.zero(p, d), params={"n": n},
    )


# --------------------------------------------------------- center, radical


def center(A: Algebra) -> Subspace:
    d = A.dim
    c = A.structconst
    # rows (i, k): coefficient of e_k in z e_i - e_i z, as a function of z_j
    M = (c.transpose(1, 2, 0) - c.transpose(0, 2, 1)).reshape(d * d, d)
    return kernel(M, A.p)


def radical(A: Algebra) -> Subspace:
    """Jacobson radical: supplied by the constructor, or computed when commutative.

    In the commutative case the Frobenius map is F_p-linear and the radical is
    the kernel of its ``k``-th iterate once ``p**k >= dim``.
    """
    if A.radical is not None:
        return A.radical
    if not A.is_commutative():
        raise RadicalUnavailable("radical of a noncommutative algebra must be supplied")
    d, p = A.dim, A.p
    F = np.zeros((d, d), dtype=np.int64)
    for i in range(d):
        F[:, i] = A.power(A.basis_vector(i), p)
    k = 0
    while p**k < d:
        k += 1
    return kernel(matpow(F, max(k, 1), p), p)


# ----------------------------------------------------------- spec files


def parse_spec(text: str) -> Algebra:
    """Parse the line-oriented algebra spec format.

    Header lines ``p = ...``, ``dim = ...``, ``basis = ...`` (labels separated
    by commas, or by whitespace when there is no comma) and
    ``unit = i:c,...`` followed by ``mul i j = k:c [k:c ...]`` lines; omitted
    products are zero and ``#`` starts a comment.
    """
    header: dict[str, tuple[int, str]] = {}
    muls: list[tuple[int, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("mul"):
            muls.append((lineno, line))
            continue
        m = re.fullmatch(r"(\w+)\s*=\s*(.*)", line)
        if not m:
            raise SpecParseError(lineno, f"unrecognized line {raw.strip()!r}")
        key = m.group(1)
        if key not in ("p", "dim", "basis", "unit"):
            raise SpecParseError(lineno, f"unknown header {key!r}")
        if key in header:
            raise SpecParseError(lineno, f"duplicate header {key!r}")
        header[key] = (lineno, m.group(2).strip())
    for key in ("p", "dim", "unit"):
        if key not in header:
            raise SpecParseError(len(text.splitlines()) + 1, f"missing header {key!r}")
    try:
        p = check_prime(int(header["p"][1]))
    except ValueError as exc:
        raise SpecParseError(header["p"][0], str(exc)) from None
    try:
        d = int(header["dim"][1])
    except ValueError:
        raise SpecParseError(header["dim"][0], "dim must be an integer") from None
    if d < 1 or d > MAX_DIM:
        raise SpecParseError(header["dim"][0], f"dim must be in 1..{MAX_DIM}")
    if "basis" in header:
        raw_labels = header["basis"][1]
        sep = r"\s*,\s*" if "," in raw_labels else r"\s+"
        labels = [s for s in re.split(sep, raw_labels) if s]
        if len(labels) != d:
            raise SpecParseError(header["basis"][0], f"expected {d} labels, got {len(labels)}")
    else:
        labels = [f"e{i}" for i in range(d)]
    unit = np.zeros(d, dtype=np.int64)
    lu, utext = header["unit"]
    for k, cval in _parse_sparse(utext, lu, d):
        unit[k] = (unit[k] + cval) % p
    c = np.zeros((d, d, d), dtype=np.int64)
    seen = set()
    for lineno, line in muls:
        m = re.fullmatch(r"mul\s+(\d+)\s+(\d+)\s*=\s*(.*)", line)
        if not m:
            raise SpecParseError(lineno, "expected 'mul <i> <j> = <k>:<c> ...'")
        i, j = int(m.group(1)), int(m.group(2))
        if not (0 <= i < d and 0 <= j < d):
            raise SpecParseError(lineno, "basis index out of range")
        if (i, j) in seen:
            raise SpecParseError(lineno, f"duplicate product {i} {j}")
        seen.add((i, j))
        for k, cval in _parse_sparse(m.group(3), lineno, d, sep=r"\s+"):
            c[i, j, k] = (c[i, j, k] + cval) % p
    return from_structure_constants(p, labels, c, unit)


def _parse_sparse(text: str, lineno: int, d: int, sep: str = r"[,\s]+"):
    out = []
    for tok in (t for t in re.split(sep, text.strip()) if t):
        m = re.fullmatch(r"(\d+):(-?\d+)", tok)
        if not m:
            raise SpecParseError(lineno, f"bad sparse entry {tok!r}")
        k = int(m.group(1))
        if not 0 <= k < d:
            raise SpecParseError(lineno, f"index {k} out of range")
        out.append((k, int(m.group(2))))
    return out


def load_spec(path) -> Algebra:
    with open(path, encoding="utf-8") as fh:
        return parse_spec(fh.read())


def dump_spec(A: Algebra) -> str:
    lines = [
        f"p = {A.p}",
        f"dim = {A.dim}",
        "basis = " + ", ".join(A.labels),
        "unit = " + ",".join(f"{k}:{int(v)}" for k, v in enumerate(A.unit) if v),
    ]
    for i in range(A.dim):
        for j in range(A.dim):
            row = A.structconst[i, j]
            nz = np.flatnonzero(row)
            if nz.size:
                lines.append(f"mul {i} {j} = " + " ".join(f"{k}:{int(row[k])}" for k in nz))
    return "\n".join(lines) + "\n"

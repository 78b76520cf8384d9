"""Low-degree Hochschild cochains with circle products, cup product,
Gerstenhaber bracket and differential.

A cochain of degree ``n`` is an integer array of shape ``(d,)*n + (d,)``: the
first ``n`` axes index basis tensors ``e_{a_1} (x) ... (x) e_{a_n}`` and the
last axis holds the coordinates of the value.  Degree 0 cochains are algebra
elements.  Endomorphism matrices (column ``j`` = image of ``e_j``) convert
with :func:`from_endo` / :func:`to_endo`.

Only degrees up to 3 are materialized.
"""

from __future__ import annotations

import weakref

import numpy as np

from .algebra import Algebra
from .exactlin import AffineSolver

MAX_DEGREE = 3
MAX_SOLVER_DIM = 40


class DegreeOutOfRange(ValueError):
    pass


def degree(f: np.ndarray) -> int:
    return f.ndim - 1


def from_endo(M: np.ndarray) -> np.ndarray:
    return np.asarray(M, dtype=np.int64).T.copy()


def to_endo(f: np.ndarray) -> np.ndarray:
    if degree(f) != 1:
        raise DegreeOutOfRange("only degree-1 cochains are endomorphisms")
    return f.T.copy()


def identity_cochain(A: Algebra) -> np.ndarray:
    return np.eye(A.dim, dtype=np.int64)


def multiplication_element(A: Algebra) -> np.ndarray:
    return A.structconst.copy()


def _tensordot(a, b, axes, p):
    # float64 contraction is exact for the small dimensions used here
    out = np.tensordot(a.astype(np.float64), b.astype(np.float64), axes=axes)
    return np.mod(np.rint(out), p).astype(np.int64)


def circle_i(f: np.ndarray, g: np.ndarray, i: int, p: int) -> np.ndarray:
    """``f o_i g = f(1^{(x)i} (x) g (x) 1^{(x)(m-i-1)})`` for ``f`` of degree m."""
    m, n = degree(f), degree(g)
    if not 0 <= i <= m - 1:
        raise DegreeOutOfRange(f"insertion slot {i} outside 0..{m - 1}")
    if m + n - 1 > MAX_DEGREE:
        raise DegreeOutOfRange(f"result degree {m + n - 1} exceeds {MAX_DEGREE}")
    r = _tensordot(g, f, axes=([n], [i]), p=p)
    # axes now: g inputs (n), f inputs other than slot i (m-1), output
    return np.moveaxis(r, list(range(n)), list(range(i, i + n)))


def cup(f: np.ndarray, g: np.ndarray, A: Algebra) -> np.ndarray:
    """``(f u g)(x_1..x_{m+n}) = f(x_1..x_m) g(x_{m+1}..x_{m+n})``."""
    m, n = degree(f), degree(g)
    if m + n > MAX_DEGREE:
        raise DegreeOutOfRange(f"result degree {m + n} exceeds {MAX_DEGREE}")
    fc = _tensordot(f, A.structconst, axes=([m], [0]), p=A.p)  # (a.., v, k)
    r = _tensordot(g, fc, axes=([n], [m]), p=A.p)  # (b.., a.., k)
    return np.moveaxis(r, list(range(n)), list(range(m, m + n)))


def circle(f: np.ndarray, g: np.ndarray, p: int) -> np.ndarray:
    m, n = degree(f), degree(g)
    shape = (f.shape[0],) * (m + n - 1) + (f.shape[-1],)
    out = np.zeros(shape, dtype=np.int64)
    for i in range(m):
        sign = -1 if (i * (n - 1)) % 2 else 1
        out = out + sign * circle_i(f, g, i, p)
    return np.mod(out, p)


def graded_bracket(f: np.ndarray, g: np.ndarray, p: int) -> np.ndarray:
    """``[f, g] = f o g - (-1)^{(m-1)(n-1)} g o f``."""
    m, n = degree(f), degree(g)
    if m + n - 1 > MAX_DEGREE:
        raise DegreeOutOfRange(f"result degree {m + n - 1} exceeds {MAX_DEGREE}")
    sign = -1 if ((m - 1) * (n - 1)) % 2 else 1
    fg = circle(f, g, p) if m > 0 else None
    gf = circle(g, f, p) if n > 0 else None
    shape = (f.shape[-1],) * (m + n - 1) + (f.shape[-1],)
    out = np.zeros(shape, dtype=np.int64)
    if fg is not None:
        out = out + fg
    if gf is not None:
        out = out - sign * gf
    return np.mod(out, p)


def differential(f: np.ndarray, A: Algebra) -> np.ndarray:
    """``d(f) = [m, f]``; on C^1 this is ``x f(y) - f(xy) + f(x) y``."""
    if degree(f) > MAX_DEGREE - 1:
        raise DegreeOutOfRange("differential is only stored up to degree 2 inputs")
    return graded_bracket(multiplication_element(A), f, A.p)


def differential_matrix(A: Algebra) -> np.ndarray:
    """Matrix of d: C^1 -> C^2 in endomorphism coordinates.

    Columns are indexed by ``i*d + j`` for the matrix entry ``M[i, j]``
    (coefficient of ``e_i`` in ``f(e_j)``); rows by ``(a, b, k)``.
    """
    d = A.dim
    c = A.structconst
    eye = np.eye(d, dtype=np.int64)
    # x_a f(e_b): delta_{jb} c[a,i,k]
    t1 = np.einsum("aik,jb->abkij", c, eye)
    # -f(e_a e_b): -c[a,b,j] delta_{ik}
    t2 = -np.einsum("abj,ik->abkij", c, eye)
    # f(e_a) e_b: delta_{ja} c[i,b,k]
    t3 = np.einsum("ibk,ja->abkij", c, eye)
    return np.mod(t1 + t2 + t3, A.p).reshape(d**3, d * d)


_solvers: "weakref.WeakKeyDictionary[Algebra, AffineSolver]" = weakref.WeakKeyDictionary()


def coboundary_solver(A: Algebra) -> AffineSolver:
    if A.dim > MAX_SOLVER_DIM:
        raise ValueError(f"coboundary solving is limited to dimension {MAX_SOLVER_DIM}")
    s = _solvers.get(A)
    if s is None:
        s = AffineSolver(differential_matrix(A), A.p)
        _solvers[A] = s
    return s


def solve_coboundary(c2: np.ndarray, A: Algebra):
    """Find ``beta`` in C^1 with ``d(beta) = c2``.

    Returns ``(beta_endo_matrix, kernel)`` where the kernel is Der(A) in
    endomorphism coordinates, or ``None`` when ``c2`` is not a coboundary.
    """
    if degree(c2) != 2:
        raise DegreeOutOfRange("expected a 2-cochain")
    s = coboundary_solver(A)
    x = s.solve(c2.reshape(-1))
    if x is None:
        return None
    return x.reshape(A.dim, A.dim), s.kernel


def is_coboundary(c2: np.ndarray, A: Algebra) -> bool:
    return solve_coboundary(c2, A) is not None


def is_cocycle(c2: np.ndarray, A: Algebra) -> bool:
    return not np.any(differential(c2, A))

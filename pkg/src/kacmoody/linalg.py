"""Real-linear algebra on truncated Kac-Moody data.

Complex elements are "realified" into coordinate vectors (real and imaginary
parts of every stored coefficient).  Exact data stay in :class:`Fraction`;
float data go through numpy with an explicit tolerance.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np

from .affine import KMElement
from .scalar import Backend, re_im


class WindowError(ValueError):
    """An element has modes outside the truncation window."""


def realify_loop(loop: Sequence, N: int) -> list:
    out = []
    for f in loop:
        if f and (f.kmin < -N or f.kmax > N):
            raise WindowError(f"modes {f.kmin}..{f.kmax} exceed the window |k| <= {N}")
        for k in range(-N, N + 1):
            out.extend(re_im(f[k]))
    return out


def realify(x: KMElement, N: int, include_cd: bool = True) -> list:
    """Real coordinates ``(Re, Im)`` of loop modes ``-N..N`` per component, then ``c`` and ``d``."""
    out = realify_loop(x.loop, N)
    if include_cd:
        out.extend(re_im(x.c))
        out.extend(re_im(x.d))
    elif x.c or x.d:
        raise WindowError("element has c/d parts but the coordinates exclude them")
    return out


def unrealify(v: Sequence, km, N: int, include_cd: bool = True) -> KMElement:
    """Inverse of :func:`realify` for the algebra ``km``."""
    from .scalar import GaussianRational

    def sc(a, b):
        if km.backend is Backend.EXACT:
            return GaussianRational(Fraction(a), Fraction(b))
        return complex(float(a), float(b))

    width = 2 * (2 * N + 1)
    loop = []
    for i in range(km.dim):
        block = v[i * width:(i + 1) * width]
        loop.append({k: sc(block[2 * (k + N)], block[2 * (k + N) + 1]) for k in range(-N, N + 1)})
    c = d = 0
    if include_cd:
        base = km.dim * width
        c = sc(v[base], v[base + 1])
        d = sc(v[base + 2], v[base + 3])
    return km.element(loop, c, d)


def coordinate_labels(dim: int, N: int, include_cd: bool = True) -> list[str]:
    labels = [f"{part}(z^{k} e{i})" for i in range(dim) for k in range(-N, N + 1) for part in ("Re", "Im")]
    if include_cd:
        labels += ["Re(c)", "Im(c)", "Re(d)", "Im(d)"]
    return labels


# -- exact routines ---------------------------------------------------------


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over the rationals."""
    M = [[Fraction(v) for v in row] for row in rows]
    pivots: list[int] = []
    if not M:
        return M, pivots
    ncols = len(M[0])
    r = 0
    for col in range(ncols):
        p = next((i for i in range(r, len(M)) if M[i][col]), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        inv = 1 / M[r][col]
        M[r] = [v * inv for v in M[r]]
        for i in range(len(M)):
            if i != r and M[i][col]:
                f = M[i][col]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(col)
        r += 1
        if r == len(M):
            break
    return M[:r], pivots


def rank(rows: Sequence[Sequence], backend: Backend = Backend.EXACT, tol: float = 1e-9) -> int:
    if not rows:
        return 0
    if Backend(backend) is Backend.FLOAT:
        return int(np.linalg.matrix_rank(np.array(rows, dtype=float), tol=tol))
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence]) -> list[list[Fraction]]:
    """Basis of ``{x : M x = 0}`` for the exact matrix with the given rows."""
    ncols = len(rows[0])
    R, pivots = rref(rows)
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, p in enumerate(pivots):
            v[p] = -R[r][f]
        basis.append(v)
    return basis


class RealSpan:
    """Membership tests in the real span of a fixed list of coordinate vectors."""

    def __init__(self, vectors: Sequence[Sequence], backend: Backend = Backend.EXACT, tol: float = 1e-9):
        self.backend = Backend(backend)
        self.tol = tol
        self.n = len(vectors)
        if self.backend is Backend.EXACT:
            self._R, self._pivots = rref(vectors) if vectors else ([], [])
            self.rank = len(self._pivots)
        else:
            A = np.array(vectors, dtype=float).T if vectors else np.zeros((0, 0))
            self._A = A
            self.rank = int(np.linalg.matrix_rank(A, tol=tol)) if vectors else 0

    def residual(self, v: Sequence) -> object:
        """Component of ``v`` outside the span (exact vector or float norm)."""
        if self.backend is Backend.EXACT:
            w = [Fraction(x) for x in v]
            for row, p in zip(self._R, self._pivots):
                if w[p]:
                    f = w[p]
                    w = [a - f * b for a, b in zip(w, row)]
            return w
        b = np.array(v, dtype=float)
        if self._A.size == 0:
            return float(np.linalg.norm(b))
        x, *_ = np.linalg.lstsq(self._A, b, rcond=None)
        return float(np.linalg.norm(self._A @ x - b))

    def contains(self, v: Sequence) -> bool:
        r = self.residual(v)
        if self.backend is Backend.EXACT:
            return not any(r)
        scale = max(1.0, float(np.linalg.norm(np.array(v, dtype=float))))
        return r <= self.tol * scale


def solve(A_cols: Sequence[Sequence], b: Sequence, backend: Backend = Backend.EXACT, tol: float = 1e-9) -> list:
    """Coefficients ``x`` with ``sum_j x_j A_cols[j] = b``; raises if inconsistent."""
    if Backend(backend) is Backend.FLOAT:
        A = np.array(A_cols, dtype=float).T
        rhs = np.array(b, dtype=float)
        x, *_ = np.linalg.lstsq(A, rhs, rcond=None)
        if np.linalg.norm(A @ x - rhs) > tol * max(1.0, np.linalg.norm(rhs)):
            raise ValueError("vector is not in the span")
        return [float(v) for v in x]
    m = len(b)
    n = len(A_cols)
    aug = [[Fraction(A_cols[j][i]) for j in range(n)] + [Fraction(b[i])] for i in range(m)]
    R, pivots = rref(aug)
    if n in pivots:
        raise ValueError("vector is not in the span")
    x = [Fraction(0)] * n
    for row, p in zip(R, pivots):
        x[p] = row[n]
    return x


def inertia(G: Sequence[Sequence]) -> tuple[int, int, int]:
    """Exact ``(neg, zero, pos)`` counts of a symmetric rational matrix by congruence."""
    M = [[Fraction(v) for v in row] for row in G]
    n = len(M)
    for i in range(n):
        for j in range(n):
            if M[i][j] != M[j][i]:
                raise ValueError("matrix is not symmetric")
    neg = pos = 0
    idx = list(range(n))
    while idx:
        p = next((i for i in idx if M[i][i]), None)
        if p is None:
            pair = next(((i, j) for i in idx for j in idx if i != j and M[i][j]), None)
            if pair is None:
                break
            i, j = pair
            # congruence e_i -> e_i + e_j makes the (i, i) entry 2 M[i][j] (+ M[j][j] = 0)
            for k in range(n):
                M[i][k] += M[j][k]
            for k in range(n):
                M[k][i] += M[k][j]
            p = i
        piv = M[p][p]
        if piv > 0:
            pos += 1
        else:
            neg += 1
        idx.remove(p)
        row = M[p][:]
        for i in idx:
            if row[i]:
                f = row[i] / piv
                for j in idx:
                    M[i][j] -= f * row[j]
    return neg, len(idx), pos

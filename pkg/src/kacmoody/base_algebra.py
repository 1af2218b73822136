"""Finite-dimensional Lie algebras given by structure constants and an invariant form."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .scalar import Backend, GaussianRational, as_scalar, backend_of, scalar_from_json, scalar_to_json, zero

KINDS = ("abelian", "semisimple", "reductive_product")


@dataclass(frozen=True)
class Block:
    """One direct factor of a reductive product."""

    name: str
    kind: str
    offset: int
    dim: int

    @property
    def indices(self) -> range:
        return range(self.offset, self.offset + self.dim)


@dataclass(frozen=True, eq=False)
class BaseAlgebra:
    """Lie algebra ``g`` with ``[e_i, e_j] = sum_k c[i][j][k] e_k`` and form ``B``.

    Structure constants and form entries are stored exactly; float-backend
    computations convert them on the fly.
    """

    dim: int
    c: tuple
    B: tuple
    kind: str
    blocks: tuple = ()
    name: str = ""
    _terms: tuple = field(init=False, repr=False)
    _float: dict = field(init=False, repr=False)

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dimension must be positive")
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}")
        c = tuple(tuple(tuple(as_scalar(v, Backend.EXACT) for v in row) for row in plane) for plane in self.c)
        B = tuple(tuple(as_scalar(v, Backend.EXACT) for v in row) for row in self.B)
        if len(c) != self.dim or any(len(p) != self.dim or any(len(r) != self.dim for r in p) for p in c):
            raise ValueError("structure constants must be dim x dim x dim")
        if len(B) != self.dim or any(len(r) != self.dim for r in B):
            raise ValueError("form must be dim x dim")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "B", B)
        if not self.blocks:
            object.__setattr__(self, "blocks", (Block(self.name or self.kind, self.kind, 0, self.dim),))
        terms = []
        for i, j in itertools.combinations(range(self.dim), 2):
            out = tuple((k, v) for k, v in enumerate(c[i][j]) if v)
            if out:
                terms.append((i, j, out))
        object.__setattr__(self, "_terms", tuple(terms))
        object.__setattr__(self, "_float", {})
        problems = self.validate()
        if problems:
            raise ValueError("invalid Lie algebra data: " + "; ".join(problems[:3]))

    # -- data for each backend ----------------------------------------------
    def terms(self, backend: Backend) -> tuple:
        """Nonzero brackets ``(i, j, ((k, c_ijk), ...))`` for ``i < j``."""
        if Backend(backend) is Backend.EXACT:
            return self._terms
        if "terms" not in self._float:
            self._float["terms"] = tuple(
                (i, j, tuple((k, complex(v)) for k, v in out)) for i, j, out in self._terms
            )
        return self._float["terms"]

    def form_matrix(self, backend: Backend) -> tuple:
        if Backend(backend) is Backend.EXACT:
            return self.B
        if "B" not in self._float:
            self._float["B"] = tuple(tuple(complex(v) for v in row) for row in self.B)
        return self._float["B"]

    def form_entries(self, backend: Backend) -> tuple:
        """Nonzero ``(i, j, B_ij)``."""
        key = ("Bnz", Backend(backend))
        if key not in self._float:
            B = self.form_matrix(backend)
            self._float[key] = tuple((i, j, B[i][j]) for i in range(self.dim) for j in range(self.dim) if B[i][j])
        return self._float[key]

    # -- operations ----------------------------------------------------------
    def _check_vec(self, x: Sequence):
        if len(x) != self.dim:
            raise ValueError(f"vector of length {len(x)} in algebra of dimension {self.dim}")

    def bracket(self, x: Sequence, y: Sequence) -> tuple:
        """Bilinear bracket of coordinate vectors."""
        self._check_vec(x)
        self._check_vec(y)
        backend = _backend_of_vectors(x, y)
        out = [zero(backend)] * self.dim
        for i, j, ks in self.terms(backend):
            w = x[i] * y[j] - x[j] * y[i]
            if w:
                for k, v in ks:
                    out[k] = out[k] + v * w
        return tuple(out)

    def form(self, x: Sequence, y: Sequence):
        """``x^T B y`` (bilinear, no conjugation)."""
        self._check_vec(x)
        self._check_vec(y)
        backend = _backend_of_vectors(x, y)
        total = zero(backend)
        for i, j, b in self.form_entries(backend):
            total = total + b * x[i] * y[j]
        return total

    def basis_vector(self, i: int, backend: Backend = Backend.EXACT) -> tuple:
        return tuple(as_scalar(int(k == i), backend) for k in range(self.dim))

    def killing_form(self) -> tuple:
        """``tr(ad e_i ad e_j)`` computed from the structure constants."""
        n = self.dim
        c = self.c
        return tuple(
            tuple(sum((c[i][k][m] * c[j][m][k] for k in range(n) for m in range(n)), GaussianRational(0)) for j in range(n))
            for i in range(n)
        )

    def is_abelian(self) -> bool:
        return not self._terms

    def validate(self) -> list[str]:
        """Antisymmetry, Jacobi, symmetry and invariance of the form on all basis triples."""
        n, c, B = self.dim, self.c, self.B
        problems = []
        for i, j in itertools.product(range(n), repeat=2):
            for k in range(n):
                if c[i][j][k] != -c[j][i][k]:
                    problems.append(f"antisymmetry fails at ({i},{j},{k})")
            if B[i][j] != B[j][i]:
                problems.append(f"form not symmetric at ({i},{j})")
        for i, j, k in itertools.product(range(n), repeat=3):
            # Jacobi: [[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j]
            for m in range(n):
                s = GaussianRational(0)
                for p in range(n):
                    s += c[i][j][p] * c[p][k][m] + c[j][k][p] * c[p][i][m] + c[k][i][p] * c[p][j][m]
                if s:
                    problems.append(f"Jacobi fails on basis triple ({i},{j},{k})")
                    break
            # invariance: <[e_i,e_j],e_k> + <e_j,[e_i,e_k]> = 0
            s = sum((c[i][j][p] * B[p][k] + B[j][p] * c[i][k][p] for p in range(n)), GaussianRational(0))
            if s:
                problems.append(f"form not invariant on ({i},{j},{k})")
        if self.kind == "abelian" and self._terms:
            problems.append("kind=abelian but some bracket is nonzero")
        return problems

    # -- serialization -------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "c": [[[scalar_to_json(v) for v in row] for row in plane] for plane in self.c],
            "B": [[scalar_to_json(v) for v in row] for row in self.B],
            "kind": self.kind,
            "blocks": [[b.name, b.kind, b.offset, b.dim] for b in self.blocks],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "BaseAlgebra":
        def conv(v):
            return as_scalar(scalar_from_json(v) if isinstance(v, list) else Fraction(str(v)), Backend.EXACT)

        blocks = tuple(Block(*b) for b in obj.get("blocks", ()))
        return cls(
            dim=int(obj["dim"]),
            c=tuple(tuple(tuple(conv(v) for v in row) for row in plane) for plane in obj["c"]),
            B=tuple(tuple(conv(v) for v in row) for row in obj["B"]),
            kind=obj["kind"],
            blocks=blocks,
        )

    def __repr__(self):
        return f"BaseAlgebra({self.name or self.kind}, dim={self.dim})"


def _backend_of_vectors(*vecs) -> Backend:
    kinds = {backend_of(v) for vec in vecs for v in vec if not isinstance(v, int)}
    if len(kinds) > 1:
        from .scalar import BackendMismatchError

        raise BackendMismatchError("vectors mix exact and float scalars")
    return kinds.pop() if kinds else Backend.EXACT


def _zeros(n):
    return [[[0] * n for _ in range(n)] for _ in range(n)]


def abelian(k: int) -> BaseAlgebra:
    """``C^k`` with zero bracket and the identity (Euclidean) form."""
    if k < 1:
        raise ValueError("abelian(k) needs k >= 1")
    B = [[int(i == j) for j in range(k)] for i in range(k)]
    return BaseAlgebra(k, _zeros(k), B, "abelian", name=f"abelian({k})")


def sl2() -> BaseAlgebra:
    """Basis ``(e, h, f)``; trace form of the defining representation."""
    c = _zeros(3)
    E, H, F = 0, 1, 2
    for (i, j, k, v) in ((H, E, E, 2), (H, F, F, -2), (E, F, H, 1)):
        c[i][j][k] = v
        c[j][i][k] = -v
    B = [[0, 0, 1], [0, 2, 0], [1, 0, 0]]
    return BaseAlgebra(3, c, B, "semisimple", name="sl2")


def su2_realform() -> BaseAlgebra:
    """Compact basis ``u_a`` with ``[u_a, u_b] = eps_abc u_c``; form is minus the Killing form."""
    c = _zeros(3)
    for a, b, d in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        c[a][b][d] = 1
        c[b][a][d] = -1
    tmp = BaseAlgebra(3, c, [[1 if i == j else 0 for j in range(3)] for i in range(3)], "semisimple")
    B = [[-v for v in row] for row in tmp.killing_form()]
    return BaseAlgebra(3, c, B, "semisimple", name="su2")


def product(factors: Sequence[BaseAlgebra]) -> BaseAlgebra:
    """Direct product; the block structure of every factor is kept."""
    factors = list(factors)
    if not factors:
        raise ValueError("product of an empty list")
    if len(factors) == 1:
        return factors[0]
    n = sum(f.dim for f in factors)
    c = _zeros(n)
    B = [[0] * n for _ in range(n)]
    blocks = []
    off = 0
    for f in factors:
        for i, j, k in itertools.product(range(f.dim), repeat=3):
            c[off + i][off + j][off + k] = f.c[i][j][k]
        for i, j in itertools.product(range(f.dim), repeat=2):
            B[off + i][off + j] = f.B[i][j]
        for b in f.blocks:
            blocks.append(Block(b.name, b.kind, off + b.offset, b.dim))
        off += f.dim
    kinds = {b.kind for b in blocks}
    kind = kinds.pop() if len(kinds) == 1 else "reductive_product"
    name = " x ".join(f.name or f.kind for f in factors)
    return BaseAlgebra(n, c, B, kind, blocks=tuple(blocks), name=name)


def construct_base_algebra(desc) -> BaseAlgebra:
    """Build from a description such as ``"abelian:2"``, ``"sl2"``, ``"su2"`` or ``"abelian:1,sl2"``.

    A list or tuple of specs builds the direct product.
    """
    if isinstance(desc, BaseAlgebra):
        return desc
    if isinstance(desc, (list, tuple)):
        return product([construct_base_algebra(s) for s in desc])
    parts = [p.strip() for p in str(desc).split(",") if p.strip()]
    if not parts:
        raise ValueError("empty base algebra description")
    if len(parts) > 1:
        return product([construct_base_algebra(p) for p in parts])
    name, _, arg = parts[0].partition(":")
    name = name.lower()
    if name == "abelian":
        return abelian(int(arg or 1))
    if name == "sl2":
        return sl2()
    if name in ("su2", "su2_realform"):
        return su2_realform()
    raise ValueError(f"unknown base algebra {parts[0]!r}")

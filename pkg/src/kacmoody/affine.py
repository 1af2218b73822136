"""The geometric affine Kac-Moody algebra ``L(g) + Cc + Cd``.

Conventions (fixed here, used everywhere):

* loops are truncated Laurent polynomials ``f(z) = sum_k f_k z**k`` with values in ``g``;
* ``[d, f] = z f'(z)``, so ``exp(s d)`` acts on loops by ``f(z) -> f(e**s z)``;
* ``[f, g] = [f(z), g(z)]_0 + omega(f, g) c`` with ``omega(f, g) = Res <f, g'>``;
* ``<f, g> = sum_k <f_k, g_{-k}>`` (the circle average), ``<c, d> = -1``,
  all other pairings with ``c`` and ``d`` vanish.

With these conventions the form is invariant under the full bracket; the
rotation direction of the circle is ``i d``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .base_algebra import BaseAlgebra, construct_base_algebra
from .laurent import LaurentPoly, lp_commutator_product
from .scalar import Backend, BackendMismatchError, as_scalar, backend_of, scalar_from_json, scalar_to_json, zero


@dataclass(frozen=True, eq=False)
class KMElement:
    """Loop part, ``c`` coefficient and ``d`` coefficient of an element."""

    loop: tuple
    c: object
    d: object
    backend: Backend

    def __add__(self, other: "KMElement") -> "KMElement":
        self._check(other)
        return KMElement(
            tuple(a + b for a, b in zip(self.loop, other.loop)), self.c + other.c, self.d + other.d, self.backend
        )

    def __neg__(self) -> "KMElement":
        return KMElement(tuple(-a for a in self.loop), -self.c, -self.d, self.backend)

    def __sub__(self, other: "KMElement") -> "KMElement":
        return self + (-other)

    def scale(self, s) -> "KMElement":
        if backend_of(s) is not self.backend and not isinstance(s, int):
            raise BackendMismatchError("scalar does not match element backend")
        s = as_scalar(s, self.backend)
        return KMElement(tuple(a.scale(s) for a in self.loop), s * self.c, s * self.d, self.backend)

    def __rmul__(self, s) -> "KMElement":
        return self.scale(s)

    def __mul__(self, s) -> "KMElement":
        return self.scale(s)

    def __eq__(self, other):
        if not isinstance(other, KMElement):
            return NotImplemented
        return self.loop == other.loop and self.c == other.c and self.d == other.d

    def __hash__(self):
        return hash((self.loop, self.c, self.d))

    def is_zero(self) -> bool:
        return not self.c and not self.d and all(a.is_zero() for a in self.loop)

    def _check(self, other: "KMElement"):
        if len(self.loop) != len(other.loop):
            raise ValueError("elements over base algebras of different dimension")
        if self.backend is not other.backend:
            raise BackendMismatchError("elements on different scalar backends")

    @property
    def dim(self) -> int:
        return len(self.loop)

    def degree_span(self) -> int:
        """Largest ``|k|`` among stored modes (0 for loop-free elements)."""
        return max((max(abs(f.kmin), abs(f.kmax)) for f in self.loop if f), default=0)

    def truncate(self, N: int) -> "KMElement":
        return KMElement(tuple(f.truncate(N) for f in self.loop), self.c, self.d, self.backend)

    def to_backend(self, backend) -> "KMElement":
        backend = Backend(backend)
        return KMElement(
            tuple(f.to_backend(backend) for f in self.loop),
            as_scalar(self.c, backend),
            as_scalar(self.d, backend),
            backend,
        )

    def to_json(self) -> dict:
        return {"loop": [f.to_json() for f in self.loop], "c": scalar_to_json(self.c), "d": scalar_to_json(self.d)}

    def __repr__(self):
        return f"KMElement(loop={list(self.loop)}, c={self.c}, d={self.d})"


class KMType(NamedTuple):
    kind: str
    factors: tuple = ()

    def __str__(self):
        if self.kind == "mixed":
            return f"mixed({', '.join(self.factors)})"
        return self.kind


def classify_km_type(alg: BaseAlgebra) -> KMType:
    """Euclidean for abelian ``g``, semisimple for semisimple ``g``, mixed otherwise."""
    labels = tuple("euclidean" if b.kind == "abelian" else "semisimple" for b in alg.blocks)
    if len(set(labels)) == 1:
        return KMType(labels[0], labels)
    return KMType("mixed", labels)


class AffineKacMoody:
    """Bracket, cocycle and invariant form of ``L(g) + Cc + Cd`` on one backend."""

    def __init__(self, base, backend: Backend | str = Backend.EXACT):
        self.base: BaseAlgebra = construct_base_algebra(base)
        self.backend = Backend(backend)
        self.dim = self.base.dim

    def __repr__(self):
        return f"AffineKacMoody({self.base!r}, {self.backend.value})"

    # -- constructors --------------------------------------------------------
    def _zero_loop(self) -> tuple:
        return tuple(LaurentPoly.zero(self.backend) for _ in range(self.dim))

    def element(self, loop: Sequence | None = None, c=0, d=0) -> KMElement:
        if loop is None:
            loop = self._zero_loop()
        loop = tuple(
            f.to_backend(self.backend) if isinstance(f, LaurentPoly) else LaurentPoly(f, self.backend) for f in loop
        )
        if len(loop) != self.dim:
            raise ValueError(f"loop has {len(loop)} components, base algebra has {self.dim}")
        return KMElement(loop, as_scalar(c, self.backend), as_scalar(d, self.backend), self.backend)

    def zero(self) -> KMElement:
        return self.element()

    def c_elem(self, coeff=1) -> KMElement:
        return self.element(c=coeff)

    def d_elem(self, coeff=1) -> KMElement:
        return self.element(d=coeff)

    def mode(self, k: int, i: int = 0, coeff=1) -> KMElement:
        """``coeff * z**k e_i``."""
        if not 0 <= i < self.dim:
            raise ValueError(f"basis index {i} out of range for dimension {self.dim}")
        loop = list(self._zero_loop())
        loop[i] = LaurentPoly.monomial(k, coeff, self.backend)
        return self.element(loop)

    def basis(self, N: int, include_cd: bool = True) -> list[KMElement]:
        """Complex basis ``z**k e_i`` (|k| <= N), then ``c``, ``d``."""
        out = [self.mode(k, i) for k in range(-N, N + 1) for i in range(self.dim)]
        if include_cd:
            out += [self.c_elem(), self.d_elem()]
        return out

    def from_json(self, obj: dict) -> KMElement:
        loop = [LaurentPoly.from_json(f, self.backend) for f in obj.get("loop", [{}] * self.dim)]
        c = scalar_from_json(obj.get("c", [0, 0]))
        d = scalar_from_json(obj.get("d", [0, 0]))
        return self.element(loop, as_scalar(c, self.backend), as_scalar(d, self.backend))

    def _check(self, *xs: KMElement):
        for x in xs:
            if x.dim != self.dim:
                raise ValueError(f"element has {x.dim} loop components, algebra has {self.dim}")
            if x.backend is not self.backend:
                raise BackendMismatchError(f"{x.backend.value} element in {self.backend.value} algebra")

    # -- loop-level operations ----------------------------------------------
    def loop_bracket(self, f: Sequence[LaurentPoly], g: Sequence[LaurentPoly]) -> tuple:
        """Pointwise ``[f(z), g(z)]_0``."""
        out = list(self._zero_loop())
        for i, j, ks in self.base.terms(self.backend):
            w = lp_commutator_product(f[i], g[j], f[j], g[i])
            if w:
                for k, v in ks:
                    out[k] = out[k] + w.scale(v)
        return tuple(out)

    def cocycle(self, f: Sequence[LaurentPoly], g: Sequence[LaurentPoly]):
        """``omega(f, g) = Res <f, g'> = sum_k (-k) <f_k, g_{-k}>``."""
        total = zero(self.backend)
        for i, j, b in self.base.form_entries(self.backend):
            gj = g[j].coeffs
            s = zero(self.backend)
            for k, v in f[i].coeffs.items():
                w = gj.get(-k)
                if w is not None and k:
                    s = s + (-k) * v * w
            if s:
                total = total + b * s
        return total

    def loop_pairing(self, f: Sequence[LaurentPoly], g: Sequence[LaurentPoly]):
        """Circle average ``(1/2pi) int <f(e^it), g(e^it)> dt = sum_k <f_k, g_{-k}>``."""
        total = zero(self.backend)
        for i, j, b in self.base.form_entries(self.backend):
            gj = g[j].coeffs
            s = zero(self.backend)
            for k, v in f[i].coeffs.items():
                w = gj.get(-k)
                if w is not None:
                    s = s + v * w
            if s:
                total = total + b * s
        return total

    @staticmethod
    def d_action(f: Sequence[LaurentPoly]) -> tuple:
        """``[d, f] = z f'``."""
        return tuple(p.z_derivative() for p in f)

    # -- the Lie algebra -----------------------------------------------------
    def bracket(self, X: KMElement, Y: KMElement) -> KMElement:
        self._check(X, Y)
        loop = list(self.loop_bracket(X.loop, Y.loop))
        if X.d:
            loop = [a + p.z_derivative().scale(X.d) for a, p in zip(loop, Y.loop)]
        if Y.d:
            loop = [a - p.z_derivative().scale(Y.d) for a, p in zip(loop, X.loop)]
        return KMElement(tuple(loop), self.cocycle(X.loop, Y.loop), zero(self.backend), self.backend)

    def metric(self, X: KMElement, Y: KMElement):
        self._check(X, Y)
        return self.loop_pairing(X.loop, Y.loop) - (X.c * Y.d + X.d * Y.c)

    def classify(self) -> KMType:
        return classify_km_type(self.base)


def km_bracket(km: AffineKacMoody, X: KMElement, Y: KMElement) -> KMElement:
    return km.bracket(X, Y)


def cocycle(km: AffineKacMoody, f: Sequence[LaurentPoly], g: Sequence[LaurentPoly]):
    return km.cocycle(f, g)


def km_metric(km: AffineKacMoody, X: KMElement, Y: KMElement):
    return km.metric(X, Y)

"""Levi-Civita connection, curvature and metric signature of the bi-invariant metric."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .affine import AffineKacMoody, KMElement
from .linalg import RealSpan, inertia, realify
from .scalar import Backend, GaussianRational, as_scalar


class DegeneratePlaneError(ValueError):
    """``|g ^ h|^2`` vanishes, so the sectional curvature is undefined."""


@dataclass(frozen=True)
class TruncationWindow:
    N: int
    include_cd: bool = True

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("window N must be >= 1")


def _half(km: AffineKacMoody):
    return as_scalar(GaussianRational(1, 0) / 2, km.backend)


def connection(km: AffineKacMoody, X: KMElement, Y: KMElement) -> KMElement:
    """Left-invariant Levi-Civita connection ``nabla_X Y = [X, Y] / 2``."""
    return km.bracket(X, Y).scale(_half(km))


def curvature(km: AffineKacMoody, g: KMElement, h: KMElement, k: KMElement) -> KMElement:
    """``R{g, h, k} = [[g, h], k] / 4``."""
    quarter = as_scalar(GaussianRational(1, 0) / 4, km.backend)
    return km.bracket(km.bracket(g, h), k).scale(quarter)


def sectional_curvature(km: AffineKacMoody, g: KMElement, h: KMElement, rel_tol: float = 1e-12):
    """``<R{g, h, g}, h> / (<g, g><h, h> - <g, h>^2)``.

    The denominator may be negative (indefinite metric); only a vanishing one is an
    error: exactly zero on the exact backend, below ``rel_tol * |<g,g><h,h>|`` on floats.
    """
    gg, hh, gh = km.metric(g, g), km.metric(h, h), km.metric(g, h)
    den = gg * hh - gh * gh
    if km.backend is Backend.EXACT:
        if not den:
            raise DegeneratePlaneError("|g ^ h|^2 = 0: the plane is degenerate")
    else:
        ref = abs(gg * hh)
        if abs(den) <= rel_tol * (ref if ref else 1.0):
            raise DegeneratePlaneError(f"|g ^ h|^2 = {den} is zero within tolerance")
    num = km.metric(curvature(km, g, h, g), h)
    return num / den


@dataclass
class IndexResult:
    neg: int
    zero: int
    pos: int
    eigenvalues: list = field(default_factory=list)
    exact_inertia: tuple | None = None

    @property
    def index(self) -> int:
        return self.neg

    def to_json(self) -> dict:
        out = {"index": {"neg": self.neg, "zero": self.zero, "pos": self.pos}, "eigenvalues": self.eigenvalues}
        if self.exact_inertia is not None:
            out["exact_inertia"] = list(self.exact_inertia)
        return out


def gram_matrix(km: AffineKacMoody, basis: Sequence[KMElement], tol: float = 1e-9) -> list[list]:
    """Real Gram matrix of the metric on a real basis; raises if some entry is not real."""
    G = []
    for x in basis:
        row = []
        for y in basis:
            v = km.metric(x, y)
            if isinstance(v, GaussianRational):
                if v.imag:
                    raise ValueError(f"metric value {v} is not real on this basis")
                row.append(v.real)
            else:
                if abs(v.imag) > tol * max(1.0, abs(v)):
                    raise ValueError(f"metric value {v} is not real on this basis")
                row.append(v.real)
        G.append(row)
    return G


def metric_index(km: AffineKacMoody, window: TruncationWindow, basis: Sequence[KMElement], tol: float = 1e-9
                 ) -> IndexResult:
    """Sign counts of the Gram matrix on ``basis`` (plus ``c``, ``d`` if the window says so)."""
    elems = list(basis)
    if window.include_cd:
        elems += [km.c_elem(), km.d_elem()]
    if elems:
        vecs = [realify(x, window.N) for x in elems]
        r = RealSpan(vecs, km.backend, tol).rank
        if r < len(elems):
            raise ValueError(f"basis is real-linearly dependent: rank {r} < {len(elems)} vectors")
    G = gram_matrix(km, elems, tol)
    if not G:
        return IndexResult(0, 0, 0, [], (0, 0, 0) if km.backend is Backend.EXACT else None)
    ev = np.linalg.eigvalsh(np.array(G, dtype=float))
    ev = sorted(float(v) for v in ev)
    neg = sum(v < -tol for v in ev)
    pos = sum(v > tol for v in ev)
    exact = inertia(G) if km.backend is Backend.EXACT else None
    return IndexResult(neg, len(ev) - neg - pos, pos, ev, exact)

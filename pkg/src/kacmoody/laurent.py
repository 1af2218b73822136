"""Finite Laurent polynomials over the exact or float scalar backend.

A :class:`LaurentPoly` stands in for a holomorphic function on C*: only finitely
many modes are kept and the growth condition on the tails is vacuous.
"""

from __future__ import annotations

import math
from types import MappingProxyType
from typing import Iterable, Mapping

import numpy as np

from .scalar import (
    Backend,
    BackendMismatchError,
    GaussianRational,
    as_scalar,
    backend_of,
    scalar_from_json,
    scalar_to_json,
    zero,
)

FLUSH = 1e-300


def _canonical(coeffs: Mapping[int, object], backend: Backend) -> dict:
    out = {}
    if backend is Backend.EXACT:
        for k, v in coeffs.items():
            if v:
                out[int(k)] = v
    else:
        for k, v in coeffs.items():
            if abs(v) >= FLUSH:
                out[int(k)] = v
    return dict(sorted(out.items()))


class LaurentPoly:
    """Immutable Laurent polynomial ``sum_k a_k z**k``."""

    __slots__ = ("_c", "backend")

    def __init__(self, coeffs: Mapping[int, object] | None = None, backend: Backend | str | None = None):
        coeffs = dict(coeffs or {})
        if backend is None:
            kinds = {backend_of(v) for v in coeffs.values()}
            if len(kinds) > 1:
                raise BackendMismatchError("mixed exact and float coefficients")
            backend = kinds.pop() if kinds else Backend.EXACT
        backend = Backend(backend)
        coeffs = {k: as_scalar(v, backend) for k, v in coeffs.items()}
        self._c = _canonical(coeffs, backend)
        self.backend = backend

    @classmethod
    def _trusted(cls, coeffs: dict, backend: Backend) -> "LaurentPoly":
        obj = cls.__new__(cls)
        obj._c = _canonical(coeffs, backend)
        obj.backend = backend
        return obj

    @classmethod
    def monomial(cls, k: int, coeff=1, backend: Backend | str = Backend.EXACT) -> "LaurentPoly":
        return cls({k: coeff}, backend)

    @classmethod
    def zero(cls, backend: Backend | str = Backend.EXACT) -> "LaurentPoly":
        return cls({}, backend)

    # -- inspection ----------------------------------------------------------
    @property
    def coeffs(self) -> Mapping[int, object]:
        return MappingProxyType(self._c)

    def __getitem__(self, k: int):
        return self._c.get(k, zero(self.backend))

    @property
    def kmin(self) -> int | None:
        return next(iter(self._c), None)

    @property
    def kmax(self) -> int | None:
        return next(reversed(self._c), None) if self._c else None

    def is_zero(self) -> bool:
        return not self._c

    def __bool__(self):
        return bool(self._c)

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        return hash(tuple(self._c.items()))

    def __repr__(self):
        if not self._c:
            return "LaurentPoly(0)"
        terms = " + ".join(f"({v})z^{k}" for k, v in self._c.items())
        return f"LaurentPoly({terms})"

    def to_backend(self, backend: Backend | str) -> "LaurentPoly":
        backend = Backend(backend)
        if backend is self.backend:
            return self
        return LaurentPoly({k: as_scalar(v, backend) for k, v in self._c.items()}, backend)

    def _check(self, other: "LaurentPoly"):
        if other.backend is not self.backend:
            raise BackendMismatchError(f"{self.backend.value} vs {other.backend.value} Laurent polynomials")

    # -- vector space --------------------------------------------------------
    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        self._check(other)
        out = dict(self._c)
        for k, v in other._c.items():
            out[k] = out[k] + v if k in out else v
        return LaurentPoly._trusted(out, self.backend)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly._trusted({k: -v for k, v in self._c.items()}, self.backend)

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self + (-other)

    def scale(self, s) -> "LaurentPoly":
        if backend_of(s) is not self.backend and not isinstance(s, int):
            raise BackendMismatchError(f"scalar {s!r} does not match the {self.backend.value} polynomial")
        s = as_scalar(s, self.backend)
        if not s:
            return LaurentPoly.zero(self.backend)
        return LaurentPoly._trusted({k: s * v for k, v in self._c.items()}, self.backend)

    def __mul__(self, other):
        if isinstance(other, LaurentPoly):
            return lp_multiply(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    # -- analysis ------------------------------------------------------------
    def derivative(self) -> "LaurentPoly":
        return lp_derivative(self)

    def residue(self):
        return lp_residue(self)

    def z_derivative(self) -> "LaurentPoly":
        """``z * f'(z)``: multiplies the coefficient of ``z**k`` by ``k``."""
        return LaurentPoly._trusted({k: k * v for k, v in self._c.items() if k}, self.backend)

    def dilate(self, q) -> "LaurentPoly":
        """``f(q z)`` for nonzero ``q``."""
        if self.backend is Backend.EXACT:
            q = as_scalar(q, Backend.EXACT)
        else:
            q = complex(q)
        return LaurentPoly._trusted({k: v * q**k for k, v in self._c.items()}, self.backend)

    def reflect_conjugate(self) -> "LaurentPoly":
        """``conj(f(1/conj(z)))``: coefficient at ``-k`` becomes ``conj(a_k)``."""
        return LaurentPoly._trusted({-k: v.conjugate() for k, v in self._c.items()}, self.backend)

    def conjugate_coeffs(self) -> "LaurentPoly":
        return LaurentPoly._trusted({k: v.conjugate() for k, v in self._c.items()}, self.backend)

    def truncate(self, N: int) -> "LaurentPoly":
        return LaurentPoly._trusted({k: v for k, v in self._c.items() if abs(k) <= N}, self.backend)

    def __call__(self, z):
        return lp_evaluate(self, z)

    def annulus_norm(self, n: int, samples: int = 1024) -> tuple[float, float]:
        return lp_annulus_norm(self, n, samples)

    # -- serialization -------------------------------------------------------
    def to_json(self) -> dict:
        return {str(k): scalar_to_json(v) for k, v in self._c.items()}

    @classmethod
    def from_json(cls, obj: Mapping[str, object], backend: Backend | str | None = None) -> "LaurentPoly":
        coeffs = {int(k): scalar_from_json(v) for k, v in obj.items()}
        if backend is None and not coeffs:
            backend = Backend.EXACT
        return cls(coeffs, backend)


def _exact_ints(c: dict):
    """Common-denominator integer form ``(den, kmin, re[], im[])`` of exact coefficients."""
    den = 1
    for v in c.values():
        d = v.parts[2]
        den = den * d // math.gcd(den, d)
    kmin = next(iter(c))
    width = next(reversed(c)) - kmin + 1
    re = [0] * width
    im = [0] * width
    for k, v in c.items():
        a, b, d = v.parts
        f = den // d
        re[k - kmin] = a * f
        im[k - kmin] = b * f
    return den, kmin, re, im


def lp_multiply(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    """Cauchy product of two Laurent polynomials."""
    a._check(b)
    if not a._c or not b._c:
        return LaurentPoly.zero(a.backend)
    if a.backend is Backend.FLOAT:
        ka, kb = a.kmin, b.kmin
        va = np.array([a._c.get(k, 0j) for k in range(ka, a.kmax + 1)], dtype=complex)
        vb = np.array([b._c.get(k, 0j) for k in range(kb, b.kmax + 1)], dtype=complex)
        prod = np.convolve(va, vb)
        return LaurentPoly._trusted({ka + kb + i: complex(v) for i, v in enumerate(prod)}, a.backend)
    da, ka, ar, ai = _exact_ints(a._c)
    db, kb, br, bi = _exact_ints(b._c)
    n = len(ar) + len(br) - 1
    re = [0] * n
    im = [0] * n
    for i, (x, y) in enumerate(zip(ar, ai)):
        if not (x or y):
            continue
        for j, (u, v) in enumerate(zip(br, bi)):
            if u or v:
                re[i + j] += x * u - y * v
                im[i + j] += x * v + y * u
    den = da * db
    raw = GaussianRational._raw
    return LaurentPoly._trusted(
        {ka + kb + i: raw(re[i], im[i], den) for i in range(n) if re[i] or im[i]}, Backend.EXACT
    )


def lp_commutator_product(f: LaurentPoly, g: LaurentPoly, h: LaurentPoly, k: LaurentPoly) -> LaurentPoly:
    """``f*g - h*k`` in one pass (the building block of pointwise brackets)."""
    if f.backend is Backend.FLOAT or not ((f._c and g._c) and (h._c and k._c)):
        return lp_multiply(f, g) - lp_multiply(h, k)
    for p in (g, h, k):
        f._check(p)
    d1, k1, ar, ai = _exact_ints(f._c)
    d2, k2, br, bi = _exact_ints(g._c)
    d3, k3, cr, ci = _exact_ints(h._c)
    d4, k4, er, ei = _exact_ints(k._c)
    lo = min(k1 + k2, k3 + k4)
    hi = max(k1 + k2 + len(ar) + len(br), k3 + k4 + len(cr) + len(er)) - 2
    n = hi - lo + 1
    re = [0] * n
    im = [0] * n
    den1, den2 = d1 * d2, d3 * d4
    den = den1 * den2 // math.gcd(den1, den2)
    for (xr, xi, yr, yi, off, sign) in (
        (ar, ai, br, bi, k1 + k2 - lo, den // den1),
        (cr, ci, er, ei, k3 + k4 - lo, -(den // den2)),
    ):
        for i, (x, y) in enumerate(zip(xr, xi)):
            if not (x or y):
                continue
            x *= sign
            y *= sign
            base = off + i
            for j, (u, v) in enumerate(zip(yr, yi)):
                if u or v:
                    re[base + j] += x * u - y * v
                    im[base + j] += x * v + y * u
    raw = GaussianRational._raw
    return LaurentPoly._trusted({lo + i: raw(re[i], im[i], den) for i in range(n) if re[i] or im[i]}, Backend.EXACT)


def lp_derivative(f: LaurentPoly) -> LaurentPoly:
    """``f'``: the coefficient of ``z**(k-1)`` is ``k * a_k``."""
    return LaurentPoly._trusted({k - 1: k * v for k, v in f._c.items() if k}, f.backend)


def lp_residue(f: LaurentPoly):
    """Coefficient of ``z**-1``."""
    return f[-1]


def lp_evaluate(f: LaurentPoly, z):
    """Evaluate at a point (float) or an array of points (vectorised)."""
    z = np.asarray(z, dtype=complex)
    out = np.zeros_like(z)
    for k, v in f._c.items():
        out = out + complex(v) * z**k
    return out if out.ndim else complex(out)


def lp_annulus_norm(f: LaurentPoly, n: int, samples: int = 1024) -> tuple[float, float]:
    """Sampled and certified bounds on ``sup |f|`` over ``e**-n <= |z| <= e**n``.

    By the maximum-modulus principle the sup sits on one of the two boundary
    circles; ``estimate`` samples both, ``certified_upper`` is the coefficient
    bound ``sum |a_k| e**(n|k|)``.
    """
    if n < 0:
        raise ValueError("grading index n must be nonnegative")
    if samples < 8:
        raise ValueError("need at least 8 samples per circle")
    if not f._c:
        return 0.0, 0.0
    upper = math.fsum(abs(complex(v)) * math.exp(n * abs(k)) for k, v in f._c.items())
    theta = np.exp(2j * np.pi * np.arange(samples) / samples)
    est = 0.0
    for r in {math.exp(n), math.exp(-n)}:
        est = max(est, float(np.max(np.abs(lp_evaluate(f, r * theta)))))
    # sampling can only underestimate the sup; rounding must not push it past the bound
    return min(est, upper), upper


def lp_from_terms(terms: Iterable[tuple[int, object]], backend: Backend | str = Backend.EXACT) -> LaurentPoly:
    out: dict = {}
    for k, v in terms:
        out[k] = out[k] + v if k in out else v
    return LaurentPoly(out, backend)


def _split_terms(text: str) -> list[str]:
    terms, depth, cur = [], 0, ""
    for pos, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch in "+-" and depth == 0 and cur.strip() and text[pos - 1] not in "^eE/*(":
            terms.append(cur)
            cur = ""
        cur += ch
    if cur.strip():
        terms.append(cur)
    return terms


def _parse_coeff(text: str, backend: Backend):
    t = text.strip().rstrip("*").strip()
    sign = 1
    while t[:1] in ("+", "-"):
        sign = -sign if t[0] == "-" else sign
        t = t[1:].strip()
    if t.startswith("(") and t.endswith(")"):
        t = t[1:-1]
    if t in ("", "+"):
        t = "1"
    v = GaussianRational.parse(t if t != "i" else "1i") * sign
    return v if backend is Backend.EXACT else complex(v)


def parse_laurent(text: str, backend: Backend | str = Backend.EXACT) -> LaurentPoly:
    """Parse strings such as ``"z + z^-1"``, ``"1/2*z^2 - 3i"`` or ``"(1+2i)z^(-3)"``."""
    backend = Backend(backend)
    s = text.replace(" ", "")
    if not s or s == "0":
        return LaurentPoly.zero(backend)
    out: dict = {}
    for term in _split_terms(s):
        if "z" in term:
            coeff, _, power = term.partition("z")
            if power.startswith("^"):
                k = int(power[1:].strip("()"))
            elif power == "":
                k = 1
            else:
                raise ValueError(f"cannot parse term {term!r}")
        else:
            coeff, k = term, 0
        v = _parse_coeff(coeff, backend)
        out[k] = out[k] + v if k in out else v
    return LaurentPoly(out, backend)

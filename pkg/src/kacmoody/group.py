"""The Euclidean Kac-Moody group: a Heisenberg group extended by ``C*``.

An element ``(q, lam, s)`` stands for ``exp(lam + s c) . q`` where ``q = exp(delta d)``
acts on loops by ``(q |> lam)(z) = lam(q z)``.  Loops are stored through their
logarithm, so the Heisenberg part multiplies by the exact two-step BCH formula.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from typing import Sequence

from .affine import AffineKacMoody, KMElement
from .laurent import LaurentPoly
from .linalg import WindowError, nullspace, realify_loop, solve
from .scalar import (
    Backend,
    BackendMismatchError,
    GaussianRational,
    as_scalar,
    imag_unit,
    one,
    scalar_from_json,
    scalar_to_json,
    zero,
)


class BranchCutError(ValueError):
    """``log`` was asked for ``q`` on the cut of the principal branch."""


@dataclass(frozen=True, eq=False)
class GroupElement:
    q: object
    lam: tuple
    central: object
    km: AffineKacMoody = field(repr=False)

    @property
    def backend(self) -> Backend:
        return self.km.backend

    def __eq__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        return self.q == other.q and self.lam == other.lam and self.central == other.central

    def __hash__(self):
        return hash((self.q, self.lam, self.central))

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return group_multiply(self, other)

    def to_json(self) -> dict:
        return {"q": scalar_to_json(self.q), "lam": [f.to_json() for f in self.lam],
                "central": scalar_to_json(self.central)}

    def distance(self, other: "GroupElement") -> float:
        """Max coordinate difference (for float comparisons)."""
        vals = [abs(complex(self.q) - complex(other.q)), abs(complex(self.central) - complex(other.central))]
        for a, b in zip(self.lam, other.lam):
            vals += [abs(complex(v)) for v in (a - b).coeffs.values()]
        return max(vals)


def _require_euclidean(km: AffineKacMoody):
    if km.classify().kind != "euclidean":
        raise ValueError(f"the Euclidean group needs an abelian base algebra, got {km.classify()}")


def group_element(km: AffineKacMoody, q=1, lam: Sequence | None = None, central=0) -> GroupElement:
    _require_euclidean(km)
    b = km.backend
    q = as_scalar(q, b)
    if not q:
        raise ValueError("q must be nonzero")
    if lam is None:
        lam = [LaurentPoly.zero(b)] * km.dim
    lam = tuple(f.to_backend(b) if isinstance(f, LaurentPoly) else LaurentPoly(f, b) for f in lam)
    if len(lam) != km.dim:
        raise ValueError("loop vector has the wrong length")
    return GroupElement(q, lam, as_scalar(central, b), km)


def group_identity(km: AffineKacMoody) -> GroupElement:
    return group_element(km)


def group_from_json(km: AffineKacMoody, obj: dict) -> GroupElement:
    lam = [LaurentPoly.from_json(f, km.backend) for f in obj.get("lam", [{}] * km.dim)]
    return group_element(km, scalar_from_json(obj.get("q", [1, 0])), lam, scalar_from_json(obj.get("central", [0, 0])))


def act(q, lam: Sequence[LaurentPoly]) -> tuple:
    """``(q |> lam)(z) = lam(q z)``."""
    return tuple(f.dilate(q) for f in lam)


def _check(A: GroupElement, B: GroupElement):
    if A.backend is not B.backend:
        raise BackendMismatchError("group elements on different backends")
    if A.km.base is not B.km.base and A.km.base.to_json() != B.km.base.to_json():
        raise ValueError("group elements over different base algebras")


def group_multiply(A: GroupElement, B: GroupElement) -> GroupElement:
    _check(A, B)
    km = A.km
    moved = act(A.q, B.lam)
    half = as_scalar(GaussianRational(1) / 2, km.backend)
    central = A.central + B.central + half * km.cocycle(A.lam, moved)
    lam = tuple(a + b for a, b in zip(A.lam, moved))
    return GroupElement(A.q * B.q, lam, central, km)


def group_inverse(g: GroupElement) -> GroupElement:
    qi = one(g.backend) / g.q
    return GroupElement(qi, tuple(-f for f in act(qi, g.lam)), -g.central, g.km)


# -- exponential and logarithm ------------------------------------------------------


def _E(x: complex) -> complex:
    """``(e^x - 1) / x``."""
    if abs(x) < 0.1:
        term, total = 1.0 + 0j, 1.0 + 0j
        for n in range(2, 14):
            term *= x / n
            total += term
        return total
    return (cmath.exp(x) - 1) / x


def _psi(x: complex) -> complex:
    """``(sinh x - x) / x^2``."""
    if abs(x) < 0.1:
        # x/6 + x^3/120 + x^5/5040 + ...
        term, total = x / 6, x / 6
        for n in range(4, 16, 2):
            term *= x * x / (n * (n + 1))
            total += term
        return total
    return (cmath.sinh(x) - x) / (x * x)


def _central_correction(km: AffineKacMoody, lam: Sequence[LaurentPoly], delta) -> object:
    """``sum_{k>0} k <lam_k, lam_-k> psi(delta k)``: central drift of ``exp(lam + delta d)``."""
    if not delta:
        return zero(km.backend)
    total = 0j
    for i, j, b in km.base.form_entries(km.backend):
        for k, v in lam[i].coeffs.items():
            if k > 0:
                w = lam[j][-k]
                if w:
                    total += complex(b) * k * complex(v) * complex(w) * _psi(delta * k)
    return total


def group_exp(km: AffineKacMoody, X: KMElement) -> GroupElement:
    """One-parameter subgroup through ``X = lam + s c + delta d`` at time 1.

    ``q = e^delta``, ``Lam_k = lam_k (e^{delta k} - 1)/(delta k)`` and
    ``S = s + sum_{k>0} k <lam_k, lam_-k> psi(delta k)`` with ``psi(x) = (sinh x - x)/x^2``.
    """
    _require_euclidean(km)
    km._check(X)
    delta = X.d
    if km.backend is Backend.EXACT:
        if delta:
            raise ValueError("exp of a nonzero d-component is transcendental; use the float backend")
        return GroupElement(one(km.backend), X.loop, X.c, km)
    delta = complex(delta)
    lam = tuple(
        LaurentPoly({k: v * _E(delta * k) for k, v in f.coeffs.items()}, Backend.FLOAT) for f in X.loop
    )
    central = X.c + _central_correction(km, X.loop, delta)
    return GroupElement(cmath.exp(delta), lam, central, km)


def group_log(g: GroupElement, tol: float = 1e-14) -> KMElement:
    """Inverse of :func:`group_exp` on the principal domain (``q`` off the negative real axis)."""
    km = g.km
    if km.backend is Backend.EXACT:
        if g.q != 1:
            raise ValueError("log with q != 1 is transcendental; use the float backend")
        return km.element(g.lam, g.central, 0)
    q = complex(g.q)
    if q.imag == 0 and q.real < 0:
        raise BranchCutError(f"q = {q} lies on the negative real axis, the cut of the principal log branch")
    delta = cmath.log(q)
    loop = []
    for f in g.lam:
        out = {}
        for k, v in f.coeffs.items():
            e = _E(delta * k)
            if abs(e) <= tol:
                raise ValueError(f"exp is not invertible at mode {k}: delta*k lies in 2*pi*i*Z")
            out[k] = v / e
        loop.append(LaurentPoly(out, Backend.FLOAT))
    loop = tuple(loop)
    central = g.central - _central_correction(km, loop, delta)
    return km.element(loop, central, delta)


def geodesic(km: AffineKacMoody, X: KMElement, t) -> GroupElement:
    """The geodesic ``exp(t X)`` through the identity (bi-invariant metric)."""
    return group_exp(km, X.scale(as_scalar(t, km.backend)))


def geodesic_symmetry(p: GroupElement, g: GroupElement) -> GroupElement:
    """``rho_p(g) = p g^-1 p``."""
    return group_multiply(group_multiply(p, group_inverse(g)), p)


# -- charts (for finite differences) ----------------------------------------------


def chart(g: GroupElement, N: int) -> list[complex]:
    """Coordinates ``(log q, lam_{k,i} for |k| <= N, central)``."""
    coords = [cmath.log(complex(g.q))]
    for f in g.lam:
        if f and (f.kmin < -N or f.kmax > N):
            raise WindowError("loop exceeds the chart window")
        coords += [complex(f[k]) for k in range(-N, N + 1)]
    coords.append(complex(g.central))
    return coords


def from_chart(km: AffineKacMoody, v: Sequence[complex], N: int) -> GroupElement:
    width = 2 * N + 1
    lam = [LaurentPoly({k: v[1 + i * width + k + N] for k in range(-N, N + 1)}, Backend.FLOAT)
           for i in range(km.dim)]
    return GroupElement(cmath.exp(v[0]), tuple(lam), complex(v[-1]), km)


def symmetry_differential(p: GroupElement, N: int, h: float = 1e-6) -> list[list[float]]:
    """Real Jacobian of ``rho_p`` at ``p`` in chart coordinates, by central differences."""
    km = p.km
    base = chart(p, N)
    n = len(base)
    cols = []
    for j in range(n):
        for step in (h, 1j * h):
            plus = list(base)
            minus = list(base)
            plus[j] += step
            minus[j] -= step
            fp = chart(geodesic_symmetry(p, from_chart(km, plus, N)), N)
            fm = chart(geodesic_symmetry(p, from_chart(km, minus, N)), N)
            d = [(a - b) / (2 * h) for a, b in zip(fp, fm)]
            cols.append([x for z in d for x in (z.real, z.imag)])
    return [[cols[j][i] for j in range(len(cols))] for i in range(len(cols))]


# -- symmetric-space cosets --------------------------------------------------------------

CASES = ("real", "imaginary")


@dataclass(frozen=True)
class Stabilizer:
    """``K = exp(W + phase R c)`` for a real span ``W`` of loops in the window."""

    loops: tuple
    central_phase: object
    N: int
    case: str
    km: AffineKacMoody = field(repr=False, compare=False)


def _omega_phase(km: AffineKacMoody, loops: Sequence[tuple]):
    vals = [km.cocycle(a, b) for a in loops for b in loops]
    vals = [v for v in vals if v]
    iu = imag_unit(km.backend)
    if all((v.real == 0) if isinstance(v, GaussianRational) else abs(v.real) <= 1e-12 * abs(v) for v in vals):
        return iu
    if all((v.imag == 0) if isinstance(v, GaussianRational) else abs(v.imag) <= 1e-12 * abs(v) for v in vals):
        return one(km.backend)
    raise ValueError("omega takes values of different phases on W; exp(W + R c) is not a subgroup")


def stabilizer_from_loops(km: AffineKacMoody, loops: Sequence[tuple], N: int, case: str = "custom") -> Stabilizer:
    loops = tuple(tuple(f) for f in loops)
    return Stabilizer(loops, _omega_phase(km, loops), N, case, km)


def euclidean_stabilizer(km: AffineKacMoody, N: int, case: str = "real") -> Stabilizer:
    """``case='real'``: loops real on the unit circle; ``case='imaginary'``: loops in ``i R`` there."""
    _require_euclidean(km)
    if case not in CASES:
        raise ValueError(f"case must be one of {CASES}")
    b = km.backend
    iu = imag_unit(b)
    unit = iu if case == "imaginary" else one(b)
    out = []
    for i in range(km.dim):
        gens = [{0: 1}]
        for n in range(1, N + 1):
            gens += [{n: 1, -n: 1}, {n: iu, -n: -iu}]
        for g in gens:
            loop = [LaurentPoly.zero(b)] * km.dim
            loop[i] = LaurentPoly(g, b).scale(unit)
            out.append(tuple(loop))
    return stabilizer_from_loops(km, out, N, case)


@dataclass(frozen=True)
class CosetRep:
    element: GroupElement
    case: str

    def __eq__(self, other):
        return isinstance(other, CosetRep) and self.element == other.element and self.case == other.case

    def __hash__(self):
        return hash((self.element, self.case))

    def to_json(self) -> dict:
        return {"case": self.case, "element": self.element.to_json()}


def _split(stab: Stabilizer, lam: Sequence[LaurentPoly]):
    """``lam = a + b`` with ``a`` in ``W`` and ``b`` in ``i W``."""
    km, N = stab.km, stab.N
    iu = imag_unit(km.backend)
    W = [realify_loop(w, N) for w in stab.loops]
    iW = [realify_loop([f.scale(iu) for f in w], N) for w in stab.loops]
    try:
        target = realify_loop(lam, N)
    except WindowError as exc:
        raise WindowError(f"window N={N} is too small for this element: {exc}") from None
    x = solve(W + iW, target, km.backend)
    m = len(W)
    zero_loop = tuple(LaurentPoly.zero(km.backend) for _ in range(km.dim))

    def combo(coefs, gens):
        acc = list(zero_loop)
        for t, w in zip(coefs, gens):
            if t:
                s = as_scalar(t, km.backend)
                acc = [p + f.scale(s) for p, f in zip(acc, w)]
        return tuple(acc)

    a = combo(x[:m], stab.loops)
    b = combo(x[m:], [tuple(f.scale(iu) for f in w) for w in stab.loops])
    return a, b


def coset_canonicalize(g: GroupElement, stab: Stabilizer) -> CosetRep:
    """Canonical representative of ``g K``: loop part in ``q |> iW``, central part
    with the ``phase R`` component removed."""
    km = g.km
    if stab.km.base.to_json() != km.base.to_json() or stab.km.backend is not km.backend:
        raise ValueError("stabilizer belongs to a different group")
    qi = one(km.backend) / g.q
    a, b = _split(stab, act(qi, g.lam))
    half = as_scalar(GaussianRational(1) / 2, km.backend)
    t = g.central - half * km.cocycle(g.lam, act(g.q, a))
    p = stab.central_phase
    if km.backend is Backend.EXACT:
        alpha = (t / p).real
        central = t - p * GaussianRational(alpha)
    else:
        alpha = (complex(t) / complex(p)).real
        central = complex(t) - complex(p) * alpha
    return CosetRep(GroupElement(g.q, act(g.q, b), central, km), stab.case)


def in_stabilizer(g: GroupElement, stab: Stabilizer) -> bool:
    rep = coset_canonicalize(g, stab).element
    return rep == group_identity(g.km) if g.backend is Backend.EXACT else rep.distance(group_identity(g.km)) < 1e-12


def stabilizer_element(stab: Stabilizer, coefs: Sequence, central_t=0) -> GroupElement:
    """``exp(sum coefs_j w_j + t phase c)`` for real coefficients."""
    km = stab.km
    acc = [LaurentPoly.zero(km.backend) for _ in range(km.dim)]
    for t, w in zip(coefs, stab.loops):
        s = as_scalar(t, km.backend)
        acc = [p + f.scale(s) for p, f in zip(acc, w)]
    return group_element(km, 1, acc, as_scalar(central_t, km.backend) * stab.central_phase)


def coset_slice(stab: Stabilizer) -> list[tuple]:
    """Real basis of the loops fixed by canonicalization at ``q = 1`` (exact kernel computation)."""
    km, N = stab.km, stab.N
    if km.backend is not Backend.EXACT:
        raise ValueError("slice computation runs on the exact backend")
    iu = imag_unit(km.backend)
    cols = []
    for i in range(km.dim):
        for k in range(-N, N + 1):
            for unit in (one(km.backend), iu):
                loop = [LaurentPoly.zero(km.backend)] * km.dim
                loop[i] = LaurentPoly.monomial(k, unit, km.backend)
                rep = coset_canonicalize(group_element(km, 1, loop, 0), stab).element
                cols.append(realify_loop(rep.lam, N))
    n = len(cols)
    rows = [[cols[j][r] - (1 if r == j else 0) for j in range(n)] for r in range(n)]
    out = []
    for v in nullspace(rows):
        loop = []
        for i in range(km.dim):
            base = i * 2 * (2 * N + 1)
            loop.append(LaurentPoly({k: GaussianRational(v[base + 2 * (k + N)], v[base + 2 * (k + N) + 1])
                                     for k in range(-N, N + 1)}, km.backend))
        out.append(tuple(loop))
    return out


# -- BCH oracle -------------------------------------------------------------------------


def bch4(km: AffineKacMoody, X: KMElement, Y: KMElement) -> KMElement:
    """BCH series through order 4:
    ``X + Y + [X,Y]/2 + ([X,[X,Y]] + [Y,[Y,X]])/12 - [Y,[X,[X,Y]]]/24``."""
    br = km.bracket
    b = km.backend
    XY = br(X, Y)
    s2 = as_scalar(GaussianRational(1, 0) / 2, b)
    s3 = as_scalar(GaussianRational(1, 0) / 12, b)
    s4 = as_scalar(GaussianRational(-1, 0) / 24, b)
    return (X + Y + XY.scale(s2) + (br(X, XY) + br(Y, br(Y, X))).scale(s3) + br(Y, br(X, XY)).scale(s4))

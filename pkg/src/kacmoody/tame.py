"""Weighted sequence norms, the l1/l-infinity tame equivalence, and empirical tame constants.

A linear map ``phi`` is tame with offset ``r`` when ``||phi f||_n <= C(n) ||f||_{n+r}``.
A finite computation can only certify such a bound on a sample; every fit is
labelled ``sample-certified`` and, where one exists, paired with a symbolic bound.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .affine import AffineKacMoody, KMElement
from .laurent import LaurentPoly, lp_multiply, parse_laurent
from .scalar import Backend

L1_LINF_CONSTANT = 1.0 / (1.0 - math.exp(-1.0))
HEADROOM = 1.1
ALPHAS = (0.5, 1.0, 2.0)


@dataclass(frozen=True)
class GradedSequence:
    """Values ``||f_k||`` for ``k = 0..K``."""

    entries: tuple

    def __post_init__(self):
        vals = tuple(float(v) for v in self.entries)
        if any(v < 0 or math.isnan(v) for v in vals):
            raise ValueError("graded sequence entries must be nonnegative")
        object.__setattr__(self, "entries", vals)

    @property
    def K(self) -> int:
        return len(self.entries) - 1


def seq_norms(s: GradedSequence | Sequence[float], n: int) -> tuple[float, float]:
    """``(sum_k e^{nk} s_k, max_k e^{nk} s_k)``."""
    if not isinstance(s, GradedSequence):
        s = GradedSequence(tuple(s))
    if n < 0:
        raise ValueError("grading index must be nonnegative")
    terms = [math.exp(n * k) * v for k, v in enumerate(s.entries)]
    if not terms:
        return 0.0, 0.0
    return math.fsum(terms), max(terms)


@dataclass
class EquivalenceCertificate:
    passed: bool
    constants: list
    n_max: int
    counterexample: dict | None = None

    def to_json(self) -> dict:
        return {"passed": self.passed, "constants": self.constants, "n_max": self.n_max,
                "counterexample": self.counterexample}


def check_l1_linf_equivalence(s: GradedSequence | Sequence[float], n_max: int, slack: float = 1e-12
                              ) -> EquivalenceCertificate:
    """``linf_n <= l1_n`` (r = 0, C = 1) and ``l1_n <= C linf_{n+1}`` (r = 1, ``C = 1/(1 - e^-1)``).

    The second bound: ``e^{nk} s_k = e^{-k} e^{(n+1)k} s_k <= e^{-k} linf_{n+1}``, summed over ``k >= 0``.
    ``slack`` absorbs floating-point rounding in the sums only.
    """
    if not isinstance(s, GradedSequence):
        s = GradedSequence(tuple(s))
    constants = [{"r": 0, "C": 1.0}, {"r": 1, "C": L1_LINF_CONSTANT}]
    for n in range(n_max + 1):
        l1, linf = seq_norms(s, n)
        _, linf_next = seq_norms(s, n + 1)
        if linf > l1 * (1 + slack):
            return EquivalenceCertificate(False, constants, n_max, {"n": n, "r": 0, "lhs": linf, "rhs": l1})
        if l1 > L1_LINF_CONSTANT * linf_next * (1 + slack):
            return EquivalenceCertificate(False, constants, n_max,
                                          {"n": n, "r": 1, "lhs": l1, "rhs": L1_LINF_CONSTANT * linf_next})
    return EquivalenceCertificate(True, constants, n_max)


# -- maps and norms on truncated loop data ------------------------------------------


def element_norm(X: KMElement, n: int) -> float:
    """Coefficient bound ``sum_i sum_k |f_i[k]| e^{n|k|} + |c| + |d|`` (dominates the annulus sup-norm)."""
    total = [abs(complex(v)) * math.exp(n * abs(k)) for f in X.loop for k, v in f.coeffs.items()]
    total += [abs(complex(X.c)), abs(complex(X.d))]
    return math.fsum(total)


@dataclass
class NamedMap:
    name: str
    fn: Callable[[KMElement], KMElement]
    symbolic: Callable[[int, int], float] | None = None  # (n, r) -> bound, if known
    symbolic_r: int | None = None


def _poly_norm(p: LaurentPoly, n: int) -> float:
    return math.fsum(abs(complex(v)) * math.exp(n * abs(k)) for k, v in p.coeffs.items())


def parse_element(km: AffineKacMoody, text: str) -> KMElement:
    """``"0=z+z^-1,d=1"``: component index or ``c``/``d`` followed by a value."""
    loop = [LaurentPoly.zero(km.backend) for _ in range(km.dim)]
    c = d = 0
    for part in filter(None, (p.strip() for p in text.split(","))):
        key, _, val = part.partition("=")
        key = key.strip()
        if key == "c":
            c = parse_laurent(val, km.backend)[0]
        elif key == "d":
            d = parse_laurent(val, km.backend)[0]
        else:
            i = int(key)
            if not 0 <= i < km.dim:
                raise ValueError(f"component {i} outside 0..{km.dim - 1}")
            loop[i] = parse_laurent(val, km.backend)
    return km.element(loop, c, d)


def make_map(km: AffineKacMoody, name: str) -> NamedMap:
    """``zero``, ``d-action``, ``multiply:<poly>`` or ``ad:<element>``."""
    kind, _, arg = name.partition(":")
    if kind == "zero":
        return NamedMap("zero", lambda X: km.zero(), lambda n, r: 0.0, 0)
    if kind == "d-action":
        d = km.d_elem()

        def dsym(n, r):
            # sup_k |k| e^{-r|k|}: 1/e at r = 1, 2/e^2 ... ; unbounded in k for r = 0
            if r == 0:
                return math.inf
            return max(k * math.exp(-r * k) for k in range(1, 64))

        return NamedMap("d-action", lambda X: km.bracket(d, X), dsym, 1)
    if kind == "multiply":
        p = parse_laurent(arg, km.backend)

        def mul(X):
            return km.element([lp_multiply(p, f) for f in X.loop], 0, 0)

        return NamedMap(f"multiply:{arg}", mul, lambda n, r: _poly_norm(p, n), 0)
    if kind == "ad":
        X0 = parse_element(km, arg)
        return NamedMap(f"ad:{arg}", lambda X: km.bracket(X0, X), _ad_symbolic(km, X0), 1 if X0.d else 0)
    raise ValueError(f"unknown map {name!r}; expected zero, d-action, multiply:<poly> or ad:<element>")


def _ad_symbolic(km: AffineKacMoody, X: KMElement):
    """Coefficient-bound constant for ``ad X`` on loops.

    ``|[X, f]_0|_n <= max_j sum_i sum_k |c_ij^k| |X_i|_n |f|_n`` and the cocycle is bounded by
    ``max_j sum_i |B_ij| max_k |k| |X_i[k]| |f|_n``; a ``d`` part adds ``|d| sup_k |k| e^{-r|k|}``.
    """
    dim = km.dim
    cst = km.base.c
    B = km.base.B

    def bound(n, r):
        best = 0.0
        for j in range(dim):
            s = 0.0
            for i in range(dim):
                s += sum(abs(complex(cst[i][j][k])) for k in range(dim)) * _poly_norm(X.loop[i], n)
                top = max((abs(k) * abs(complex(v)) for k, v in X.loop[i].coeffs.items()), default=0.0)
                s += abs(complex(B[i][j])) * top
            best = max(best, s)
        if X.d:
            if r == 0:
                return math.inf
            best += abs(complex(X.d)) * max(k * math.exp(-r * k) for k in range(1, 64))
        return best

    return bound


def _monomials(km: AffineKacMoody, N: int) -> list[KMElement]:
    return [km.mode(k, i, 1.0) for i in range(km.dim) for k in range(-N, N + 1)]


def random_test_function(km: AffineKacMoody, rng: random.Random, N: int) -> KMElement:
    """Loop with coefficients ``e^{-alpha |k|} * uniform``, ``alpha`` drawn from ``ALPHAS``."""
    alpha = rng.choice(ALPHAS)
    loop = []
    for _ in range(km.dim):
        coeffs = {k: complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) * math.exp(-alpha * abs(k))
                  for k in range(-N, N + 1)}
        loop.append(LaurentPoly(coeffs, Backend.FLOAT))
    return km.element(loop, 0, 0)


@dataclass
class TameFit:
    map: str
    r: int | None
    b: int
    C: dict
    residual: float
    certified: bool
    window: int
    trials: int
    seed: int
    label: str = "sample-certified"
    candidates: dict = field(default_factory=dict)
    symbolic: dict | None = None

    def to_json(self) -> dict:
        def num(x):
            return x if math.isfinite(x) else str(x)

        return {
            "map": self.map,
            "label": self.label,
            "certified": self.certified,
            "r": self.r,
            "b": self.b,
            "C": {str(n): num(v) for n, v in self.C.items()},
            "residual": num(self.residual),
            "window": self.window,
            "trials": self.trials,
            "seed": self.seed,
            "candidates": self.candidates,
            "symbolic": self.symbolic,
        }


def _ratios(phi: NamedMap, inputs: Sequence[KMElement], n_range: Sequence[int], r: int) -> dict:
    out = {}
    for n in n_range:
        best = 0.0
        for f in inputs:
            den = element_norm(f, n + r)
            if den == 0:
                continue
            best = max(best, element_norm(phi.fn(f), n) / den)
        out[n] = best
    return out


def tame_fit(km: AffineKacMoody, phi: NamedMap | str, N: int, n_range: Sequence[int], trials: int, seed: int,
             r_max: int = 2, inputs: Sequence[KMElement] | None = None) -> TameFit:
    """Smallest ``r <= r_max`` whose constants ``C(n)`` are stable and survive validation.

    ``C(n)`` is the training maximum of ``||phi f||_n / ||f||_{n+r}`` times ``HEADROOM``.
    The training set holds every window monomial ``z^k e_i`` plus random test
    functions: the input norm is a weighted l1 norm, so on the truncation the
    operator norm is attained at a monomial and the random part only confirms it.
    A candidate is stable if the monomials plus the first half of the random sample
    already reach the full maximum within the headroom, and the maximum does not
    grow beyond the headroom when the window doubles.  It is validated on a fresh
    random sample.
    """
    if km.backend is not Backend.FLOAT:
        km = AffineKacMoody(km.base, Backend.FLOAT)
    if isinstance(phi, str):
        phi = make_map(km, phi)
    n_range = list(n_range)
    rng = random.Random(seed)
    if inputs is not None:
        train = [x.to_backend(Backend.FLOAT) for x in inputs]
        if all(element_norm(x, 0) == 0 for x in train):
            raise ValueError("all inputs have zero norm; nothing to fit")
        valid = train
        warm = train[: max(1, len(train) // 2)]
        wide = []
    else:
        probes = _monomials(km, N)
        randoms = [random_test_function(km, rng, N) for _ in range(trials)]
        train = probes + randoms
        warm = probes + randoms[: max(1, trials // 2)]
        valid = [random_test_function(km, rng, N) for _ in range(trials)]
        wide = _monomials(km, 2 * N) + [random_test_function(km, rng, 2 * N) for _ in range(trials)]
    candidates = {}
    chosen = None
    for r in range(r_max + 1):
        full = _ratios(phi, train, n_range, r)
        half = _ratios(phi, warm, n_range, r)
        C = {n: HEADROOM * v for n, v in full.items()}
        stable = all(full[n] <= HEADROOM * half[n] or full[n] == 0 for n in n_range)
        wide_ok = True
        if wide:
            wider = _ratios(phi, wide, n_range, r)
            wide_ok = all(wider[n] <= C[n] for n in n_range)
        check = _ratios(phi, valid, n_range, r)
        viols = []
        for n in n_range:
            if C[n] == 0:
                viols.append(math.inf if check[n] > 0 else 0.0)
            else:
                viols.append(check[n] / C[n] - 1.0)
        residual = max(viols)
        ok = stable and wide_ok and residual <= 0
        candidates[str(r)] = {"C": {str(n): C[n] for n in n_range}, "stable": stable, "window_stable": wide_ok,
                              "residual": residual, "certified": ok}
        if ok and chosen is None:
            chosen = (r, C, residual)
    symbolic = None
    if phi.symbolic is not None and phi.symbolic_r is not None:
        rs = phi.symbolic_r
        symbolic = {"r": rs, "C": {str(n): phi.symbolic(n, rs) for n in n_range}}
    if chosen is None:
        return TameFit(phi.name, None, 0, {}, math.inf, False, N, trials, seed, candidates=candidates,
                       symbolic=symbolic)
    r, C, residual = chosen
    return TameFit(phi.name, r, 0, C, residual, True, N, trials, seed, candidates=candidates, symbolic=symbolic)

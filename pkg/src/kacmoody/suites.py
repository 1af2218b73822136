"""Seeded verification suites: one battery of invariants per suite name."""

from __future__ import annotations

import logging
import math
import random
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from .affine import AffineKacMoody, KMElement
from .geometry import TruncationWindow, curvature, metric_index
from .group import (
    bch4,
    geodesic,
    geodesic_symmetry,
    group_element,
    group_exp,
    group_identity,
    group_inverse,
    group_log,
    group_multiply,
    symmetry_differential,
)
from .heisenberg import (
    MixedTypeError,
    check_involution,
    classify_real_form,
    derived_algebra_iso,
    heisenberg_real_form,
    mixed_span,
    negation_involution,
    osaka_validate,
)
from .sampling import random_element, random_nonzero_scalar, random_poly, random_scalar
from .scalar import Backend
from .tame import GradedSequence, check_l1_linf_equivalence, tame_fit

log = logging.getLogger(__name__)

SUITES = ("jacobi", "cocycle", "invariance", "flatness", "heisenberg", "classify", "signature", "group", "tame")
MAX_WITNESSES = 5


@dataclass
class SuiteConfig:
    seed: int
    base: str = "abelian:1"
    window: int = 6
    trials: int = 100
    backend: str = "exact"
    realform: str = "compact"


@dataclass
class SuiteReport:
    suite: str
    config: dict
    cases: int = 0
    failures: list = field(default_factory=list)
    failure_count: int = 0
    details: dict = field(default_factory=dict)
    wall_time: float = 0.0

    @property
    def passed(self) -> bool:
        return self.failure_count == 0

    def fail(self, witness: dict):
        self.failure_count += 1
        if len(self.failures) < MAX_WITNESSES:
            self.failures.append(witness)

    def to_json(self, timing: bool = False) -> dict:
        out = {
            "suite": self.suite,
            "passed": self.passed,
            "config": self.config,
            "cases": self.cases,
            "failure_count": self.failure_count,
            "failures": self.failures,
            "details": self.details,
        }
        if timing:
            out["wall_time"] = round(self.wall_time, 3)
        return out


def _residual(x: KMElement) -> float:
    vals = [abs(complex(v)) for f in x.loop for v in f.coeffs.values()] + [abs(complex(x.c)), abs(complex(x.d))]
    return max(vals, default=0.0)


def _is_zero(x, backend: Backend, tol: float = 1e-9) -> bool:
    if isinstance(x, KMElement):
        return x.is_zero() if backend is Backend.EXACT else _residual(x) <= tol
    return not x if backend is Backend.EXACT else abs(x) <= tol


def _dump(x) -> object:
    return x.to_json() if hasattr(x, "to_json") else str(x)


# -- algebra suites -----------------------------------------------------------------------


def _jacobi(cfg: SuiteConfig, rep: SuiteReport, rng):
    km = AffineKacMoody(cfg.base, cfg.backend)
    for case in range(cfg.trials):
        X, Y, Z = (random_element(km, rng, cfg.window) for _ in range(3))
        br = km.bracket
        J = br(br(X, Y), Z) + br(br(Y, Z), X) + br(br(Z, X), Y)
        anti = br(X, Y) + br(Y, X)
        central = br(km.c_elem(), X)
        rep.cases += 1
        if not (_is_zero(J, km.backend) and _is_zero(anti, km.backend) and _is_zero(central, km.backend)):
            rep.fail({"case": case, "X": _dump(X), "Y": _dump(Y), "Z": _dump(Z), "jacobi": _dump(J)})


def _cocycle(cfg: SuiteConfig, rep: SuiteReport, rng):
    km = AffineKacMoody(cfg.base, cfg.backend)
    for case in range(cfg.trials):
        f, g, h = (random_element(km, rng, cfg.window, c=False, d=False).loop for _ in range(3))
        lb, w = km.loop_bracket, km.cocycle
        total = w(lb(f, g), h) + w(lb(g, h), f) + w(lb(h, f), g)
        rep.cases += 1
        if not _is_zero(total, km.backend):
            rep.fail({"case": case, "value": str(total)})


def _invariance(cfg: SuiteConfig, rep: SuiteReport, rng):
    km = AffineKacMoody(cfg.base, cfg.backend)
    for case in range(cfg.trials):
        Z = km.d_elem() if case % 4 == 0 else random_element(km, rng, cfg.window)
        X, Y = random_element(km, rng, cfg.window), random_element(km, rng, cfg.window)
        val = km.metric(km.bracket(Z, X), Y) + km.metric(X, km.bracket(Z, Y))
        rep.cases += 1
        if not _is_zero(val, km.backend):
            rep.fail({"case": case, "Z": _dump(Z), "X": _dump(X), "Y": _dump(Y), "value": str(val)})


def _flatness(cfg: SuiteConfig, rep: SuiteReport, rng):
    km = AffineKacMoody(cfg.base, cfg.backend)
    rep.details["type"] = str(km.classify())
    for case in range(cfg.trials):
        g, h, k = (random_element(km, rng, cfg.window, d=False) for _ in range(3))
        R = curvature(km, g, h, k)
        rep.cases += 1
        if not _is_zero(R, km.backend):
            rep.fail({"case": case, "g": _dump(g), "h": _dump(h), "k": _dump(k), "curvature": _dump(R)})


def _heisenberg(cfg: SuiteConfig, rep: SuiteReport, rng):
    km = AffineKacMoody(cfg.base, cfg.backend)
    for eps in ("one", "i"):
        iso = derived_algebra_iso(km, cfg.window, eps)
        cert = iso.certificate
        rep.cases += cert.pairs_checked
        rep.details[f"epsilon={eps}"] = cert.to_json()
        if not cert.passed:
            rep.fail({"epsilon": eps, "certificate": cert.to_json()})


def _classify(cfg: SuiteConfig, rep: SuiteReport, rng):
    km = AffineKacMoody(cfg.base, cfg.backend)
    N = cfg.window
    for eps, expected in (("one", "noncompact"), ("i", "compact")):
        got = classify_real_form(km, heisenberg_real_form(km, N, eps), N)
        rep.cases += 1
        rep.details[f"H(eps={eps}) + d line"] = got
        if got != expected:
            rep.fail({"form": f"eps={eps}", "expected": expected, "got": got})
    rep.cases += 1
    try:
        classify_real_form(km, mixed_span(km))
        rep.fail({"form": "mixed span", "expected": "error", "got": "classified"})
    except MixedTypeError as exc:
        rep.details["mixed span"] = f"rejected: {exc}"
    if km.backend is Backend.EXACT:
        Nw = min(N, 3)
        rho = check_involution(negation_involution(km.dim), km, Nw).involution
        osaka = osaka_validate(km, rho, Nw)
        rep.cases += 1
        expect_irreducible = km.dim == 1
        rep.details["osaka"] = osaka.to_json()
        if osaka.irreducible != expect_irreducible or not all(osaka.conditions.values()):
            rep.fail({"osaka": osaka.to_json(), "expected_irreducible": expect_irreducible})


def _signature(cfg: SuiteConfig, rep: SuiteReport, rng):
    km = AffineKacMoody(cfg.base, cfg.backend)
    eps = "i" if cfg.realform == "compact" else "one"
    basis = heisenberg_real_form(km, cfg.window, eps, include_cd=False)
    res = metric_index(km, TruncationWindow(cfg.window, True), basis)
    rep.cases += 1
    rep.details.update({
        "realform": cfg.realform,
        "index": res.neg,
        "counts": {"neg": res.neg, "zero": res.zero, "pos": res.pos},
        "eigenvalues": res.eigenvalues,
        "exact_inertia": list(res.exact_inertia) if res.exact_inertia else None,
    })
    if res.neg != 1 or (res.exact_inertia is not None and res.exact_inertia[0] != 1):
        rep.fail({"reason": f"index {res.neg} is not Lorentzian", "counts": [res.neg, res.zero, res.pos]})


# -- group suite --------------------------------------------------------------------------


def _rational_group_element(km, rng, N):
    lam = [random_poly(rng, km.backend, N) for _ in range(km.dim)]
    return group_element(km, random_nonzero_scalar(rng, km.backend), lam, random_scalar(rng, km.backend))


def _group(cfg: SuiteConfig, rep: SuiteReport, rng):
    N = min(cfg.window, 4)
    ke = AffineKacMoody(cfg.base, "exact")
    kf = AffineKacMoody(cfg.base, "float")
    e = group_identity(ke)
    worst = {"bch": 0.0, "roundtrip": 0.0}
    for case in range(cfg.trials):
        A, B, C = (_rational_group_element(ke, rng, N) for _ in range(3))
        rep.cases += 1
        if group_multiply(group_multiply(A, B), C) != group_multiply(A, group_multiply(B, C)):
            rep.fail({"case": case, "law": "associativity", "A": A.to_json(), "B": B.to_json(), "C": C.to_json()})
        if group_multiply(A, group_inverse(A)) != e or group_multiply(e, A) != A:
            rep.fail({"case": case, "law": "inverse/identity", "A": A.to_json()})
        if geodesic_symmetry(A, geodesic_symmetry(A, B)) != B:
            rep.fail({"case": case, "law": "symmetry involutive", "p": A.to_json(), "g": B.to_json()})
        X = random_element(ke, rng, N, d=False)
        t = random_scalar(rng, ke.backend).real
        fwd = group_multiply(A, geodesic(ke, X, t))
        back = group_multiply(A, geodesic(ke, X, -t))
        if geodesic_symmetry(A, fwd) != back:
            rep.fail({"case": case, "law": "geodesic reversal", "p": A.to_json(), "X": X.to_json()})
        if group_log(group_exp(ke, X)) != X:
            rep.fail({"case": case, "law": "exact exp/log roundtrip", "X": X.to_json()})
        # float: BCH oracle and exp/log roundtrip with |delta| < pi
        Xf = random_element(kf, rng, N, d=False)
        Yf = random_element(kf, rng, N, d=False)
        gap = group_multiply(group_exp(kf, Xf), group_exp(kf, Yf)).distance(group_exp(kf, bch4(kf, Xf, Yf)))
        worst["bch"] = max(worst["bch"], gap)
        if gap > 1e-10:
            rep.fail({"case": case, "law": "BCH", "gap": gap})
        Z = random_element(kf, rng, N)
        delta = Z.d / abs(Z.d) * rng.uniform(0, 3.0) if Z.d else 0j
        Z = kf.element(Z.loop, Z.c, delta)
        W = group_log(group_exp(kf, Z))
        err = _residual(W - Z) / max(1.0, _residual(Z))
        worst["roundtrip"] = max(worst["roundtrip"], err)
        if err > 1e-12:
            rep.fail({"case": case, "law": "float exp/log roundtrip", "error": err})
    J = np.array(symmetry_differential(group_identity(kf), min(N, 3), 1e-6))
    dev = float(np.max(np.abs(J + np.eye(len(J)))))
    rep.cases += 1
    rep.details.update({"bch_max_gap": worst["bch"], "roundtrip_max_rel_error": worst["roundtrip"],
                        "symmetry_differential_deviation": dev})
    if dev > 1e-8:
        rep.fail({"law": "d rho_e = -id", "deviation": dev})


# -- tame suite ---------------------------------------------------------------------------


def _tame(cfg: SuiteConfig, rep: SuiteReport, rng):
    for case in range(cfg.trials):
        K = rng.randint(1, 40)
        rate = rng.uniform(0.05, 4.0)
        s = GradedSequence(tuple(rng.uniform(0, 1) * math.exp(-rate * k) for k in range(K + 1)))
        cert = check_l1_linf_equivalence(s, 6)
        rep.cases += 1
        if not cert.passed:
            rep.fail({"case": case, "counterexample": cert.counterexample})
    kf = AffineKacMoody(cfg.base, "float")
    fits = {}
    map_names = [("d-action", 1), ("zero", 0), ("ad:0=z+z^-1", 0), ("multiply:z+z^-1", 0)]
    for map_name, r_expected in map_names:
        fit = tame_fit(kf, map_name, cfg.window, range(5), min(cfg.trials, 200), cfg.seed)
        fits[map_name] = fit.to_json()
        rep.cases += 1
        if not fit.certified or fit.r is None or fit.r > r_expected:
            rep.fail({"map": map_name, "expected_r_at_most": r_expected, "fit": fit.to_json()})
    rep.details["fits"] = fits


_RUNNERS = {
    "jacobi": _jacobi,
    "cocycle": _cocycle,
    "invariance": _invariance,
    "flatness": _flatness,
    "heisenberg": _heisenberg,
    "classify": _classify,
    "signature": _signature,
    "group": _group,
    "tame": _tame,
}


def run_suite(name: str, config: SuiteConfig) -> SuiteReport:
    if name not in _RUNNERS:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    rng = random.Random(f"{name}:{config.seed}")
    rep = SuiteReport(name, asdict(config))
    start = time.perf_counter()
    log.info("running suite %s with %s", name, config)
    _RUNNERS[name](config, rep, rng)
    rep.wall_time = time.perf_counter() - start
    log.info("suite %s: %d cases, %d failures, %.2fs", name, rep.cases, rep.failure_count, rep.wall_time)
    return rep


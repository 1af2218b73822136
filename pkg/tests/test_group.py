import cmath
import math
import random

import numpy as np
import pytest

from kacmoody.affine import AffineKacMoody
from kacmoody.group import (
    BranchCutError,
    act,
    bch4,
    chart,
    coset_canonicalize,
    coset_slice,
    euclidean_stabilizer,
    geodesic,
    geodesic_symmetry,
    group_element,
    group_exp,
    group_from_json,
    group_identity,
    group_inverse,
    group_log,
    group_multiply,
    in_stabilizer,
    stabilizer_element,
    symmetry_differential,
)
from kacmoody.laurent import LaurentPoly, parse_laurent
from kacmoody.linalg import WindowError, rank, realify_loop
from kacmoody.sampling import random_element, random_nonzero_scalar, random_poly, random_scalar
from kacmoody.scalar import GaussianRational

I = GaussianRational(0, 1)


def rand_group(km, rng, N=3):
    lam = [random_poly(rng, km.backend, N) for _ in range(km.dim)]
    return group_element(km, random_nonzero_scalar(rng, km.backend), lam, random_scalar(rng, km.backend))


@pytest.fixture
def ke():
    return AffineKacMoody("abelian:2")


@pytest.fixture
def kf():
    return AffineKacMoody("abelian:2", "float")


def test_group_laws_exact(ke, rng):
    e = group_identity(ke)
    for _ in range(30):
        A, B, C = (rand_group(ke, rng) for _ in range(3))
        assert (A * B) * C == A * (B * C)
        assert A * group_inverse(A) == e == group_inverse(A) * A
        assert e * A == A == A * e


def test_group_requires_euclidean():
    with pytest.raises(ValueError):
        group_identity(AffineKacMoody("sl2"))


def test_dilation_is_an_action(ke, rng):
    for _ in range(10):
        lam = [random_poly(rng, ke.backend, 4) for _ in range(2)]
        q1, q2 = random_nonzero_scalar(rng, ke.backend), random_nonzero_scalar(rng, ke.backend)
        assert act(q1, act(q2, lam)) == act(q1 * q2, lam)
        assert act(GaussianRational(1), lam) == tuple(lam)


def test_cocycle_rotation_invariant(ke, rng):
    for _ in range(10):
        f, g = ([random_poly(rng, ke.backend, 4) for _ in range(2)] for _ in range(2))
        assert ke.cocycle(act(I, f), act(I, g)) == ke.cocycle(f, g)


def test_exp_log_exact_roundtrip(ke, rng):
    for _ in range(20):
        X = random_element(ke, rng, 4, d=False)
        assert group_log(group_exp(ke, X)) == X
    with pytest.raises(ValueError, match="float backend"):
        group_exp(ke, ke.d_elem())


def test_exp_one_parameter_subgroup(kf, rng):
    for _ in range(10):
        X = random_element(kf, rng, 3)
        s, t = rng.uniform(-1, 1), rng.uniform(-1, 1)
        lhs = group_multiply(geodesic(kf, X, s), geodesic(kf, X, t))
        assert lhs.distance(geodesic(kf, X, s + t)) < 1e-12


def test_exp_matches_product_integral(kf):
    # exp(X) = lim (1 + X/M)^M with first-order steps built from the group law alone
    X = kf.element([parse_laurent("z + 1/2*z^-2", "float"), parse_laurent("(1-i)z^-1 + z^3", "float")], 0.3, 0.4 + 0.2j)
    target = group_exp(kf, X)
    errs = []
    for M in (2**10, 2**12):
        h = 1.0 / M
        step = group_element(kf, 1 + h * complex(X.d), [f.scale(h) for f in X.loop], h * complex(X.c))
        g = group_identity(kf)
        p = step
        m = M
        while m:  # binary powering
            if m & 1:
                g = g * p
            p = p * p
            m >>= 1
        errs.append(g.distance(target))
    assert errs[1] < errs[0] / 3 and errs[1] < 5e-3


def test_exp_derivative_at_zero(kf, rng):
    X = random_element(kf, rng, 2)
    h = 1e-6
    d = [(a - b) / (2 * h) for a, b in zip(chart(geodesic(kf, X, h), 2), chart(geodesic(kf, X, -h), 2))]
    expected = [complex(X.d)] + [complex(f[k]) for f in X.loop for k in range(-2, 3)] + [complex(X.c)]
    assert np.allclose(d, expected, atol=1e-8)


def test_float_log_roundtrip_and_branch_cut(kf, rng):
    for _ in range(20):
        X = random_element(kf, rng, 3)
        X = kf.element(X.loop, X.c, complex(rng.uniform(-1, 1), rng.uniform(-3, 3)))
        W = group_log(group_exp(kf, X))
        diff = W - X
        assert max([abs(v) for f in diff.loop for v in f.coeffs.values()] + [abs(diff.c), abs(diff.d)]) < 1e-12
    with pytest.raises(BranchCutError):
        group_log(group_element(kf, -1.0, None, 0))


def test_bch_against_group_law(kf, rng):
    for _ in range(20):
        X, Y = random_element(kf, rng, 3, d=False), random_element(kf, rng, 3, d=False)
        gap = group_multiply(group_exp(kf, X), group_exp(kf, Y)).distance(group_exp(kf, bch4(kf, X, Y)))
        assert gap < 1e-10


def test_geodesic_symmetry(ke, rng):
    for _ in range(20):
        p, g = rand_group(ke, rng), rand_group(ke, rng)
        assert geodesic_symmetry(p, geodesic_symmetry(p, g)) == g
        assert geodesic_symmetry(p, p) == p
        X = random_element(ke, rng, 3, d=False)
        t = GaussianRational(rng.randint(-5, 5), 0) / 3
        assert geodesic_symmetry(p, p * geodesic(ke, X, t)) == p * geodesic(ke, X, -t)


def test_symmetry_differential_is_minus_identity(kf, rng):
    J = np.array(symmetry_differential(group_identity(kf), 2, 1e-6))
    assert np.max(np.abs(J + np.eye(len(J)))) < 1e-8
    p = geodesic(kf, random_element(kf, rng, 2, d=False), 0.5)
    J = np.array(symmetry_differential(p, 2, 1e-6))
    # rho_p is an involution, so its differential at the fixed point squares to the identity
    assert np.max(np.abs(J @ J - np.eye(len(J)))) < 1e-6


def test_group_json_roundtrip(ke, rng):
    g = rand_group(ke, rng)
    assert group_from_json(ke, g.to_json()) == g


@pytest.mark.parametrize("case", ["real", "imaginary"])
def test_coset_canonicalization(ke, rng, case):
    stab = euclidean_stabilizer(ke, 3, case)
    for _ in range(10):
        g = rand_group(ke, rng, 3)
        g = group_element(ke, GaussianRational(1) if rng.random() < 0.5 else g.q, g.lam, g.central)
        rep = coset_canonicalize(g, stab)
        k = stabilizer_element(stab, [GaussianRational(rng.randint(-3, 3)) for _ in stab.loops], rng.randint(-2, 2))
        assert in_stabilizer(k, stab)
        assert coset_canonicalize(g * k, stab) == rep
        assert coset_canonicalize(rep.element, stab) == rep
        assert in_stabilizer(group_inverse(rep.element) * g, stab)


def test_coset_slices_complementary(ke):
    N = 2
    sl = {c: coset_slice(euclidean_stabilizer(ke, N, c)) for c in ("real", "imaginary")}
    full = 2 * ke.dim * (2 * N + 1)
    assert len(sl["real"]) == len(sl["imaginary"]) == full // 2
    vecs = [realify_loop(v, N) for c in sl for v in sl[c]]
    assert rank(vecs) == full


def test_coset_window_too_small(ke):
    stab = euclidean_stabilizer(ke, 1)
    g = group_element(ke, 1, [LaurentPoly.monomial(3), LaurentPoly()], 0)
    with pytest.raises(WindowError, match="too small"):
        coset_canonicalize(g, stab)

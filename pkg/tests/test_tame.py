import math
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from kacmoody.affine import AffineKacMoody
from kacmoody.laurent import lp_annulus_norm
from kacmoody.tame import (
    L1_LINF_CONSTANT,
    GradedSequence,
    check_l1_linf_equivalence,
    element_norm,
    make_map,
    parse_element,
    random_test_function,
    seq_norms,
    tame_fit,
)

seqs = st.lists(st.floats(0, 1e3, allow_nan=False), min_size=1, max_size=30)


def test_seq_norm_examples():
    assert seq_norms([1, 0, 0, 0], 3) == (1.0, 1.0)
    assert seq_norms([0, 1, 0], 2) == pytest.approx((math.e**2, math.e**2))
    l1, linf = seq_norms([math.exp(-3 * k) for k in range(51)], 1)
    assert l1 == pytest.approx(1 / (1 - math.exp(-2)), rel=1e-12)
    assert linf == 1.0
    with pytest.raises(ValueError):
        GradedSequence((1.0, -2.0))


@given(seqs)
def test_norms_monotone_and_dominated(s):
    prev = (0.0, 0.0)
    for n in range(5):
        l1, linf = seq_norms(s, n)
        assert linf <= l1 * (1 + 1e-12)
        assert l1 >= prev[0] and linf >= prev[1]
        prev = (l1, linf)


@given(seqs)
def test_equivalence_always_certified(s):
    cert = check_l1_linf_equivalence(s, 6)
    assert cert.passed, cert.counterexample
    assert cert.constants == [{"r": 0, "C": 1.0}, {"r": 1, "C": L1_LINF_CONSTANT}]


def test_equivalence_constant_is_sharp():
    # s_k = e^{-(n+1)k} drives l1_n / linf_{n+1} to sum e^{-k}
    s = [math.exp(-k) for k in range(200)]
    l1, _ = seq_norms(s, 0)
    _, linf1 = seq_norms(s, 1)
    assert l1 / linf1 == pytest.approx(L1_LINF_CONSTANT, rel=1e-12)
    assert check_l1_linf_equivalence(s, 0).passed


def test_equivalence_single_spike_and_slow_decay():
    assert check_l1_linf_equivalence([0, 0, 5.0], 4).passed
    assert check_l1_linf_equivalence([1 / (k + 1) for k in range(40)], 6).passed


def test_parse_element_and_map_errors():
    km = AffineKacMoody("sl2", "float")
    X = parse_element(km, "0=z+z^-1,c=2,d=1/2")
    assert X.c == 2 and X.d == 0.5 and X.loop[0][1] == 1
    with pytest.raises(ValueError):
        parse_element(km, "5=z")
    with pytest.raises(ValueError):
        make_map(km, "rotate")


def test_zero_map_fit():
    fit = tame_fit(AffineKacMoody("abelian:1"), "zero", 6, range(5), 50, 1)
    assert fit.certified and fit.r == 0
    assert all(v == 0 for v in fit.C.values())


def test_d_action_fit():
    km = AffineKacMoody("abelian:1", "float")
    fit = tame_fit(km, "d-action", 8, range(5), 200, 7)
    assert fit.certified and fit.r == 1 and fit.label == "sample-certified"
    assert not fit.candidates["0"]["certified"]
    # symbolic: |k| e^{n|k|} <= e^{-1} e^{(n+1)|k|}, attained at |k| = 1
    for v in fit.C.values():
        assert v == pytest.approx(1.1 / math.e, rel=1e-12)


def test_multiply_fit_matches_symbolic():
    km = AffineKacMoody("abelian:1", "float")
    fit = tame_fit(km, "multiply:z+z^-1", 6, range(4), 100, 3)
    assert fit.certified and fit.r == 0
    # weighted l1: the operator norm is ||p||_n = 2 e^n, attained at the constant loop
    for n, v in fit.C.items():
        assert v == pytest.approx(1.1 * 2 * math.exp(n), rel=1e-12)


def test_ad_fit_sl2_and_sup_norm_oracle():
    km = AffineKacMoody("sl2", "float")
    map_name = "0=z+z^-1"
    fit = tame_fit(km, "ad:" + map_name, 6, range(5), 150, 11)
    assert fit.certified and fit.r == 0
    assert fit.C[0] == pytest.approx(4.4)
    sym = make_map(km, "ad:" + map_name).symbolic
    # sampled sup norms on the annulus respect the symbolic constant
    X = parse_element(km, map_name)
    rng = random.Random(5)
    for _ in range(20):
        f = random_test_function(km, rng, 5)
        img = km.bracket(X, f)
        for n in range(3):
            lhs = max(lp_annulus_norm(p, n, 256)[0] for p in img.loop)
            assert lhs <= sym(n, 0) * element_norm(f, n) + 1e-9


def test_fit_validation_uses_fresh_sample():
    km = AffineKacMoody("abelian:1", "float")
    a = tame_fit(km, "d-action", 6, range(3), 60, 1)
    b = tame_fit(km, "d-action", 6, range(3), 60, 2)
    assert a.certified and b.certified
    assert a.to_json()["candidates"]["1"]["residual"] <= 0


def test_fit_rejects_zero_inputs():
    km = AffineKacMoody("abelian:1", "float")
    with pytest.raises(ValueError, match="zero norm"):
        tame_fit(km, "d-action", 4, range(2), 10, 0, inputs=[km.zero()])

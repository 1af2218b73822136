import itertools

import pytest

from kacmoody.affine import AffineKacMoody
from kacmoody.heisenberg import (
    HeisenbergElement,
    Involution,
    MixedTypeError,
    NotClosedError,
    check_involution,
    circle_conjugation,
    classify_real_form,
    compact_real_form,
    derived_algebra_iso,
    heisenberg_bracket,
    heisenberg_central,
    heisenberg_generator,
    heisenberg_real_form,
    identity_involution,
    make_involution,
    mixed_span,
    negation_involution,
    noncompact_real_form,
    osaka_validate,
)
from kacmoody.scalar import GaussianRational

I = GaussianRational(0, 1)


@pytest.mark.parametrize("eps,val", [("one", 1), ("i", I)])
def test_abstract_heisenberg_relations(eps, val):
    a = lambda n, i: heisenberg_generator(n, i, 2, eps)  # noqa: E731
    c = heisenberg_central(2, eps)
    for m, n, i, j in itertools.product(range(-3, 4), range(-3, 4), range(2), range(2)):
        if not m or not n:
            continue
        br = heisenberg_bracket(a(m, i), a(n, j))
        if i == j and m == -n:
            assert br == c.scale(val if m > 0 else -val)
        else:
            assert br.is_zero()
    assert heisenberg_bracket(a(1, 0), c).is_zero()


def test_heisenberg_element_arithmetic():
    x = heisenberg_generator(1, 0, 1) + heisenberg_central(1, coeff=3)
    assert (x - x).is_zero()
    with pytest.raises(ValueError):
        heisenberg_generator(1, 0, 1, "one") + heisenberg_generator(1, 0, 1, "i")


@pytest.mark.parametrize("base", ["abelian:1", "abelian:2"])
@pytest.mark.parametrize("eps", ["one", "i"])
def test_iso_certificate(base, eps):
    km = AffineKacMoody(base)
    iso = derived_algebra_iso(km, 4, eps)
    cert = iso.certificate
    assert cert.passed, cert.to_json()
    assert cert.derived_dim == cert.expected_dim == 2 * 4 * km.dim + 1
    assert not cert.d_in_derived and not cert.zero_mode_in_derived


@pytest.mark.parametrize("eps,val", [("one", 1), ("i", I)])
def test_generators_bracket_in_algebra(eps, val):
    # independent of the iso: brackets of the chosen loop elements, computed in the algebra
    km = AffineKacMoody("abelian:2")
    iso = derived_algebra_iso(km, 3, eps)
    for n in range(1, 4):
        for i in range(2):
            br = km.bracket(iso.generator(n, i), iso.generator(-n, i))
            assert br == km.c_elem(val)
            # raw normalization: [z^n e, z^-n e] = -n c
            assert km.bracket(km.mode(n, i), km.mode(-n, i)).c == -n


def test_iso_roundtrip_and_rejections(rng):
    km = AffineKacMoody("abelian:2")
    iso = derived_algebra_iso(km, 3, "i")
    X = km.mode(2, 1, GaussianRational(3, -1)) + km.mode(-1, 0, 5) + km.c_elem(7)
    assert iso.inverse(iso.forward(X)) == X
    with pytest.raises(ValueError, match="d-component"):
        iso.forward(km.d_elem())
    with pytest.raises(ValueError, match="zero-mode"):
        iso.forward(km.mode(0, 0))
    with pytest.raises(ValueError):
        derived_algebra_iso(AffineKacMoody("sl2"), 3)


def test_dichotomy():
    km = AffineKacMoody("abelian:2")
    assert classify_real_form(km, heisenberg_real_form(km, 4, "one"), 4) == "noncompact"
    assert classify_real_form(km, heisenberg_real_form(km, 4, "i"), 4) == "compact"
    assert classify_real_form(km, compact_real_form(km, 3), 3) == "compact"
    assert classify_real_form(km, noncompact_real_form(km, 3), 3) == "noncompact"
    with pytest.raises(MixedTypeError, match="not one"):
        classify_real_form(km, mixed_span(km))


def test_classify_rejects_non_closed_and_dependent():
    km = AffineKacMoody("abelian:1")
    with pytest.raises(NotClosedError):
        # [z e, z^-1 e] = -c but c is missing
        classify_real_form(km, [km.mode(1), km.mode(-1), km.d_elem()], 2)
    with pytest.raises(ValueError, match="dependent"):
        classify_real_form(km, [km.mode(1), km.mode(1, coeff=2)])


def test_compact_semisimple_real_form():
    km = AffineKacMoody("su2")
    assert classify_real_form(km, compact_real_form(km, 2), 2) == "compact"


def test_involution_presets():
    km = AffineKacMoody("abelian:1")
    for rho in (identity_involution(1), negation_involution(1), circle_conjugation(1)):
        cert = check_involution(rho, km, 3)
        assert cert.passed and cert.involution.certified
    bad = Involution([[2]])
    cert = check_involution(bad, km, 3)
    assert not cert.involutive and cert.witness["check"] == "involutive"


def test_make_involution_picks_signs():
    km = AffineKacMoody("abelian:1")
    rho = make_involution(km, [[1]], "invert_conjugate", 3)
    assert (rho.c_sign, rho.d_sign) == (-1, -1)


def test_osaka_requires_certificate():
    km = AffineKacMoody("abelian:1")
    with pytest.raises(ValueError, match="not certified"):
        osaka_validate(km, negation_involution(1))


@pytest.mark.parametrize("preset", [negation_involution, circle_conjugation])
def test_osaka_abelian_one_irreducible(preset):
    km = AffineKacMoody("abelian:1")
    rho = check_involution(preset(1), km, 3).involution
    rep = osaka_validate(km, rho, 3)
    assert rep.conditions == {1: True, 2: True, 3: True}
    assert rep.irreducible
    assert rep.real_form_type == "compact"


def test_osaka_identity_fails_condition_three():
    km = AffineKacMoody("abelian:1")
    rho = check_involution(identity_involution(1), km, 3).involution
    rep = osaka_validate(km, rho, 3)
    assert not rep.conditions[3]
    assert any(w.get("condition") == 3 for w in rep.witnesses)


@pytest.mark.parametrize("k", [2, 3])
def test_osaka_higher_rank_reducible(k):
    km = AffineKacMoody(f"abelian:{k}")
    rho = check_involution(negation_involution(k), km, 2).involution
    rep = osaka_validate(km, rho, 2)
    assert all(rep.conditions.values())
    assert not rep.irreducible
    assert any("irreducibility" in w for w in rep.witnesses)


def test_osaka_semisimple_compact_fixed_set():
    km = AffineKacMoody("su2")
    rho = check_involution(identity_involution(3), km, 2).involution
    rep = osaka_validate(km, rho, 2)
    assert rep.conditions == {1: True, 2: True, 3: True}
    assert rep.to_json()["conditions"]

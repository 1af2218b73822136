from fractions import Fraction

import numpy as np
import pytest

from kacmoody.affine import AffineKacMoody
from kacmoody.geometry import (
    DegeneratePlaneError,
    TruncationWindow,
    connection,
    curvature,
    gram_matrix,
    metric_index,
    sectional_curvature,
)
from kacmoody.heisenberg import compact_real_form, heisenberg_real_form, noncompact_real_form
from kacmoody.laurent import LaurentPoly, parse_laurent
from kacmoody.linalg import inertia
from kacmoody.sampling import random_element
from kacmoody.scalar import GaussianRational


def const(km, vec):
    return km.element([LaurentPoly({0: v}) if v else LaurentPoly() for v in vec])


def test_sl2_curvature_structure_constants():
    km = AffineKacMoody("sl2")
    e, f = const(km, (1, 0, 0)), const(km, (0, 0, 1))
    # [[e, f], e] = [h, e] = 2e
    assert curvature(km, e, f, e) == e.scale(GaussianRational(1, 0) / 2)
    assert connection(km, e, f) == const(km, (0, Fraction(1, 2), 0))


def test_su2_sectional_matches_base_oracle():
    km = AffineKacMoody("su2")
    u1, u2 = const(km, (1, 0, 0)), const(km, (0, 1, 0))
    K = sectional_curvature(km, u1, u2)
    assert K == GaussianRational(1, 0) / 8
    # oracle from the finite-dimensional structure constants only
    c = np.array([[[float(complex(v).real) for v in row] for row in plane] for plane in km.base.c])
    B = np.array([[float(complex(v).real) for v in row] for row in km.base.B])
    a, b = np.eye(3)[0], np.eye(3)[1]
    br = lambda x, y: np.einsum("i,j,ijk->k", x, y, c)  # noqa: E731
    num = 0.25 * br(br(a, b), a) @ B @ b
    den = (a @ B @ a) * (b @ B @ b) - (a @ B @ b) ** 2
    assert float(K.real) == pytest.approx(num / den)


def test_euclidean_sectional_is_zero():
    km = AffineKacMoody("abelian:1")
    g = km.element([parse_laurent("z + z^-1")])
    h = km.element([parse_laurent("i*z - i*z^-1")])
    assert sectional_curvature(km, g, h) == 0


def test_degenerate_plane():
    km = AffineKacMoody("abelian:1")
    with pytest.raises(DegeneratePlaneError):
        sectional_curvature(km, km.c_elem(), km.mode(1))
    kf = AffineKacMoody("abelian:1", "float")
    with pytest.raises(DegeneratePlaneError):
        sectional_curvature(kf, kf.c_elem(1.0), kf.c_elem(2.0))


def test_negative_plane_allowed():
    # <c, d> = -1 makes the {c, d} plane timelike
    km = AffineKacMoody("sl2")
    assert sectional_curvature(km, km.c_elem(), km.d_elem()) == 0


def test_sectional_scale_invariant(rng):
    km = AffineKacMoody("su2")
    for _ in range(5):
        g, h = random_element(km, rng, 2, d=False), random_element(km, rng, 2, d=False)
        try:
            K = sectional_curvature(km, g, h)
        except DegeneratePlaneError:
            continue
        s, t = GaussianRational(3, 1), GaussianRational(-2, 0)
        assert sectional_curvature(km, g.scale(s), h.scale(t)) == K
        assert sectional_curvature(km, g, h + g.scale(t)) == K


def test_curvature_identities(rng):
    km = AffineKacMoody("sl2")
    m = km.metric
    for _ in range(10):
        x, y, z, w = (random_element(km, rng, 2) for _ in range(4))
        R = lambda a, b, c: curvature(km, a, b, c)  # noqa: E731
        assert (R(x, y, z) + R(y, z, x) + R(z, x, y)).is_zero()  # first Bianchi
        assert (R(x, y, z) + R(y, x, z)).is_zero()
        assert m(R(x, y, z), w) == m(R(z, w, x), y)
        # metric compatibility of the connection: <nabla_x y, z> + <y, nabla_x z> = 0
        assert m(connection(km, x, y), z) + m(y, connection(km, x, z)) == 0
        # torsion free: nabla_x y - nabla_y x = [x, y]
        assert connection(km, x, y) - connection(km, y, x) == km.bracket(x, y)


def test_flat_on_abelian(rng):
    for base in ("abelian:1", "abelian:3"):
        km = AffineKacMoody(base)
        for _ in range(20):
            g, h, k = (random_element(km, rng, 4, d=False) for _ in range(3))
            assert curvature(km, g, h, k).is_zero()


def test_lorentzian_signature():
    km = AffineKacMoody("abelian:1")
    res = metric_index(km, TruncationWindow(5), heisenberg_real_form(km, 5, "i", include_cd=False))
    assert (res.neg, res.zero, res.pos) == (1, 0, 11)
    assert res.exact_inertia == (1, 0, 11)
    cd = metric_index(km, TruncationWindow(5), [])
    assert (cd.neg, cd.zero, cd.pos) == (1, 0, 1)
    assert cd.eigenvalues == [-1.0, 1.0]


def test_noncompact_signature():
    km = AffineKacMoody("abelian:1")
    res = metric_index(km, TruncationWindow(3), heisenberg_real_form(km, 3, "one", include_cd=False))
    assert res.neg + res.zero + res.pos == 8 and res.zero == 0
    assert res.exact_inertia == (res.neg, res.zero, res.pos)


def test_metric_index_rejects_dependent_and_complex():
    km = AffineKacMoody("abelian:1")
    with pytest.raises(ValueError, match="dependent"):
        metric_index(km, TruncationWindow(2), [km.mode(1), km.mode(1, coeff=2)])
    with pytest.raises(ValueError, match="not real"):
        gram_matrix(km, [km.mode(1) + km.mode(-1, coeff=GaussianRational(0, 1)), km.mode(1)])


def test_exact_inertia_oracle(rng):
    for _ in range(20):
        n = rng.randint(1, 6)
        A = [[Fraction(rng.randint(-4, 4)) for _ in range(n)] for _ in range(n)]
        G = [[A[i][j] + A[j][i] for j in range(n)] for i in range(n)]
        ev = np.linalg.eigvalsh(np.array(G, dtype=float))
        expected = (int((ev < -1e-9).sum()), int((abs(ev) <= 1e-9).sum()), int((ev > 1e-9).sum()))
        assert inertia(G) == expected
    assert inertia([[0, 1], [1, 0]]) == (1, 0, 1)


def test_compact_and_noncompact_forms_real_gram():
    km = AffineKacMoody("abelian:2")
    for basis in (compact_real_form(km, 2, include_cd=False), noncompact_real_form(km, 2, include_cd=False)):
        G = gram_matrix(km, basis)
        assert all(G[i][j] == G[j][i] for i in range(len(G)) for j in range(len(G)))

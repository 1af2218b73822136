"""Seeded random elements for property checks."""

from __future__ import annotations

import random
from fractions import Fraction

from .affine import AffineKacMoody, KMElement
from .laurent import LaurentPoly
from .scalar import Backend, GaussianRational


def random_scalar(rng: random.Random, backend: Backend, num_max: int = 9, den_max: int = 5):
    if Backend(backend) is Backend.EXACT:
        return GaussianRational(
            Fraction(rng.randint(-num_max, num_max), rng.randint(1, den_max)),
            Fraction(rng.randint(-num_max, num_max), rng.randint(1, den_max)),
        )
    return complex(rng.uniform(-1, 1), rng.uniform(-1, 1))


def random_real(rng: random.Random, backend: Backend, num_max: int = 9, den_max: int = 5):
    if Backend(backend) is Backend.EXACT:
        return GaussianRational(Fraction(rng.randint(-num_max, num_max), rng.randint(1, den_max)))
    return complex(rng.uniform(-1, 1))


def random_poly(rng: random.Random, backend: Backend, N: int, density: float = 0.6) -> LaurentPoly:
    coeffs = {k: random_scalar(rng, backend) for k in range(-N, N + 1) if rng.random() < density}
    return LaurentPoly(coeffs, backend)


def random_element(
    km: AffineKacMoody, rng: random.Random, N: int, loop: bool = True, c: bool = True, d: bool = True,
    density: float = 0.6,
) -> KMElement:
    """Random element with modes in ``-N..N``; the flags select which parts may be nonzero."""
    b = km.backend
    f = [random_poly(rng, b, N, density) if loop else LaurentPoly.zero(b) for _ in range(km.dim)]
    cc = random_scalar(rng, b) if c else 0
    dd = random_scalar(rng, b) if d else 0
    return km.element(f, cc, dd)


def random_nonzero_scalar(rng: random.Random, backend: Backend):
    while True:
        s = random_scalar(rng, backend)
        if s:
            return s

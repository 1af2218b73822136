"""Complex scalars with two backends.

The exact backend uses :class:`GaussianRational` (a complex number whose real
and imaginary parts are rationals).  The float backend uses the builtin
``complex``.  Integers and :class:`fractions.Fraction` promote to the exact
backend; ``float`` promotes to the float backend.
"""

from __future__ import annotations

import enum
import math
from fractions import Fraction
from numbers import Rational


class Backend(str, enum.Enum):
    EXACT = "exact"
    FLOAT = "float"


class BackendMismatchError(TypeError):
    """Raised when exact and floating scalars meet in one operation."""


class GaussianRational:
    """Exact complex number ``(re + im*i) / den`` with integer parts.

    Instances are immutable and always stored in lowest terms with ``den > 0``.
    """

    __slots__ = ("_re", "_im", "_den")

    def __init__(self, re=0, im=0):
        re = Fraction(re)
        im = Fraction(im)
        den = re.denominator * im.denominator // math.gcd(re.denominator, im.denominator)
        self._set(re.numerator * (den // re.denominator), im.numerator * (den // im.denominator), den)

    def _set(self, a, b, den):
        g = math.gcd(a, b, den)
        if g != 1:
            a //= g
            b //= g
            den //= g
        self._re = a
        self._im = b
        self._den = den

    @classmethod
    def _raw(cls, a, b, den):
        # den must be positive
        obj = object.__new__(cls)
        g = math.gcd(a, b, den)
        if g != 1:
            a //= g
            b //= g
            den //= g
        obj._re = a
        obj._im = b
        obj._den = den
        return obj

    @classmethod
    def parse(cls, text: str) -> "GaussianRational":
        """Inverse of :meth:`__str__` for strings like ``'1/2+3i'``."""
        s = text.replace(" ", "")
        if not s.endswith("i"):
            return cls(Fraction(s))
        body = s[:-1]
        # split at the last sign that is not the leading one
        for pos in range(len(body) - 1, 0, -1):
            if body[pos] in "+-" and body[pos - 1] not in "eE/":
                re_part, im_part = body[:pos], body[pos:]
                break
        else:
            re_part, im_part = "0", body
        if im_part in ("", "+"):
            im_part = "1"
        elif im_part == "-":
            im_part = "-1"
        return cls(Fraction(re_part), Fraction(im_part))

    # -- accessors -----------------------------------------------------------
    @property
    def real(self) -> Fraction:
        return Fraction(self._re, self._den)

    @property
    def imag(self) -> Fraction:
        return Fraction(self._im, self._den)

    @property
    def parts(self) -> tuple[int, int, int]:
        """``(re_num, im_num, den)`` over a common denominator."""
        return self._re, self._im, self._den

    def conjugate(self) -> "GaussianRational":
        return GaussianRational._raw(self._re, -self._im, self._den)

    def abs2(self) -> Fraction:
        return Fraction(self._re * self._re + self._im * self._im, self._den * self._den)

    def __complex__(self):
        return complex(self._re / self._den, self._im / self._den)

    def __abs__(self):
        return abs(complex(self))

    def __bool__(self):
        return self._re != 0 or self._im != 0

    def is_real(self) -> bool:
        return self._im == 0

    def is_imaginary(self) -> bool:
        return self._re == 0

    # -- arithmetic ----------------------------------------------------------
    @staticmethod
    def _coerce(other):
        if type(other) is GaussianRational:
            return other
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, Rational)):
            f = Fraction(other)
            return GaussianRational._raw(f.numerator, 0, f.denominator)
        if isinstance(other, (float, complex)):
            raise BackendMismatchError("cannot mix exact and float scalars")
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self._den == o._den:
            return GaussianRational._raw(self._re + o._re, self._im + o._im, self._den)
        return GaussianRational._raw(
            self._re * o._den + o._re * self._den,
            self._im * o._den + o._im * self._den,
            self._den * o._den,
        )

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational._raw(-self._re, -self._im, self._den)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b, p = self._re, self._im, self._den
        c, d, q = o._re, o._im, o._den
        return GaussianRational._raw(a * c - b * d, a * d + b * c, p * q)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o:
            raise ZeroDivisionError("division by exact zero")
        a, b, p = self._re, self._im, self._den
        c, d, q = o._re, o._im, o._den
        n2 = c * c + d * d
        # (a+bi)/p / ((c+di)/q) = (a+bi)(c-di) q / (p (c^2+d^2))
        return GaussianRational._raw((a * c + b * d) * q, (b * c - a * d) * q, p * n2)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return (GaussianRational(1) / self) ** (-n)
        result = GaussianRational._raw(1, 0, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- comparison / hashing ------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (float, complex)):
            return False
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._re == o._re and self._im == o._im and self._den == o._den

    def __hash__(self):
        if self._im == 0:
            return hash(Fraction(self._re, self._den))
        return hash((self._re, self._im, self._den))

    def __str__(self):
        re, im = self.real, self.imag
        if im == 0:
            return str(re)
        if re == 0:
            return f"{im}i"
        sign = "-" if im < 0 else "+"
        return f"{re}{sign}{abs(im)}i"

    def __repr__(self):
        return f"GaussianRational('{self}')"


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)


def backend_of(x) -> Backend:
    if isinstance(x, (GaussianRational, int, Rational)):
        return Backend.EXACT
    if isinstance(x, (float, complex)):
        return Backend.FLOAT
    raise TypeError(f"not a scalar: {x!r}")


def as_scalar(x, backend: Backend):
    """Convert ``x`` to the canonical scalar type of ``backend``."""
    backend = Backend(backend)
    if backend is Backend.EXACT:
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, (int, Rational)):
            return GaussianRational(x)
        if isinstance(x, float):
            return GaussianRational(Fraction(x))
        if isinstance(x, complex):
            return GaussianRational(Fraction(x.real), Fraction(x.imag))
    else:
        if isinstance(x, complex):
            return x
        if isinstance(x, (GaussianRational, int, Rational, float)):
            return complex(x)
    raise TypeError(f"not a scalar: {x!r}")


def zero(backend: Backend):
    return ZERO if Backend(backend) is Backend.EXACT else 0j


def one(backend: Backend):
    return ONE if Backend(backend) is Backend.EXACT else 1 + 0j


def imag_unit(backend: Backend):
    return I if Backend(backend) is Backend.EXACT else 1j


def is_zero(x, tol: float = 0.0) -> bool:
    if isinstance(x, GaussianRational):
        return not x
    return abs(x) <= tol


def conj(x):
    return x.conjugate()


def re_im(x) -> tuple:
    """Real and imaginary parts, as Fractions (exact) or floats."""
    if isinstance(x, GaussianRational):
        return x.real, x.imag
    x = complex(x)
    return x.real, x.imag


def scalar_to_json(x):
    if isinstance(x, GaussianRational):
        return [str(x.real), str(x.imag)]
    x = complex(x)
    return [x.real, x.imag]


def scalar_from_json(obj):
    """Accepts ``[re, im]`` pairs, bare numbers and strings such as ``"1/2-3i"``.

    Strings and integers give exact scalars; floats give float scalars.
    """
    if isinstance(obj, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(obj, str):
        return GaussianRational.parse(obj)
    if isinstance(obj, int):
        return GaussianRational(obj)
    if isinstance(obj, float):
        return complex(obj)
    re, im = obj
    if all(isinstance(v, (str, int)) and not isinstance(v, bool) for v in (re, im)):
        return GaussianRational(Fraction(str(re)), Fraction(str(im)))
    return complex(float(re), float(im))

"""Exact and floating scalars.

Exact values are :class:`fractions.Fraction` (real) or :class:`CRat`
(Gaussian rational).  Anything else is treated as a float/complex and
compared with a tolerance.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from numbers import Number

FLOAT_TOL = 1e-10


class CRat:
    """Complex number with rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def make(re, im):
        im = Fraction(im)
        if im == 0:
            return Fraction(re)
        return CRat(re, im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def conjugate(self):
        return CRat(self.re, -self.im)

    def _lift(self, other):
        if isinstance(other, CRat):
            return other
        if isinstance(other, (int, Fraction)):
            return CRat(other, 0)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return complex(self) + other
        return CRat.make(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return CRat(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return complex(self) * other
        return CRat.make(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return complex(self) / other
        den = o.re * o.re + o.im * o.im
        if den == 0:
            raise ZeroDivisionError("CRat division by zero")
        return CRat.make((self.re * o.re + self.im * o.im) / den,
                         (self.im * o.re - self.re * o.im) / den)

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return other / complex(self)
        return o / self

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            return complex(self) ** n
        out = CRat(1, 0)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            try:
                return complex(self) == complex(other)
            except TypeError:
                return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __abs__(self):
        return abs(complex(self))

    @property
    def real(self):
        return self.re

    @property
    def imag(self):
        return self.im

    def __repr__(self):
        return f"CRat({self.re}, {self.im})"


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction, CRat))


def exact(x):
    """Coerce ints, rationals and ``"p/q"`` strings to Fraction; leave floats alone."""
    if isinstance(x, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, CRat):
        return CRat.make(x.re, x.im)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"non-finite scalar {x!r}")
        return x
    if isinstance(x, complex):
        return x.real if x.imag == 0 else x
    if isinstance(x, Number):
        return float(x)
    raise TypeError(f"not a scalar: {x!r}")


def real_part(x):
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, CRat):
        return x.re
    return complex(x).real


def imag_part(x):
    if isinstance(x, (int, Fraction)):
        return Fraction(0)
    if isinstance(x, CRat):
        return x.im
    return complex(x).imag


def conj(x):
    if isinstance(x, CRat):
        return x.conjugate()
    if isinstance(x, complex):
        return x.conjugate()
    return x


def make_complex(re, im):
    """Exact Gaussian rational when both parts are exact, else complex."""
    if is_exact(re) and is_exact(im):
        return CRat.make(re, im)
    im = float(im)
    if im == 0.0:
        return float(re)
    return complex(float(re), im)


def to_complex(x) -> complex:
    return complex(x)


def to_float(x) -> float:
    if isinstance(x, CRat):
        if x.im != 0:
            raise ValueError(f"{x!r} is not real")
        return float(x.re)
    if isinstance(x, complex):
        return x.real
    return float(x)


def is_zero(x, tol: float = 0.0) -> bool:
    if is_exact(x):
        return x == 0
    return abs(x) <= tol


def close(x, y, tol: float = FLOAT_TOL) -> bool:
    if is_exact(x) and is_exact(y):
        return x == y
    return abs(complex(x) - complex(y)) <= tol


def is_real(x, tol: float = FLOAT_TOL) -> bool:
    if isinstance(x, (int, Fraction)):
        return True
    if isinstance(x, CRat):
        return x.im == 0
    return abs(complex(x).imag) <= tol


def simplify(x):
    """Drop a zero imaginary part."""
    if isinstance(x, CRat):
        return CRat.make(x.re, x.im)
    if isinstance(x, complex) and x.imag == 0:
        return x.real
    return x


def cexp(x):
    if is_exact(x) and x == 0:
        return Fraction(1)
    z = cmath.exp(complex(x))
    return z.real if z.imag == 0 else z


def sort_key(x):
    return (float(real_part(x)), float(imag_part(x)))


def format_scalar(x) -> str:
    """Text form readable by the ExpPoly parser (real values only)."""
    if isinstance(x, CRat):
        if x.im != 0:
            raise ValueError("cannot format a complex scalar")
        x = x.re
    if isinstance(x, int):
        x = Fraction(x)
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, complex):
        x = x.real
    return repr(float(x))

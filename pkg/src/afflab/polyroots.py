"""Roots of small univariate polynomials.

Rational polynomials are factored exactly over Q first, so repeated roots
and rational (or Gaussian-rational) roots come out exact; only irreducible
factors of degree >= 2 with irrational roots fall back to floating point
(companion-matrix eigenvalues, polished by Newton steps).
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import sympy

from .scalars import CRat, is_exact

CLUSTER_TOL = 1e-8

_X = sympy.Symbol("x")


def _fraction(r) -> Fraction:
    r = sympy.Rational(r)
    return Fraction(int(r.p), int(r.q))


def _exact_sqrt(q: Fraction):
    if q < 0:
        return None
    n, d = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if n * n == q.numerator and d * d == q.denominator:
        return Fraction(n, d)
    return None


def _polish(coeffs, z, steps: int = 3):
    p = np.poly1d(coeffs)
    dp = p.deriv()
    for _ in range(steps):
        d = dp(z)
        if d == 0:
            break
        z = z - p(z) / d
    return z


def _clean(z, tol: float = 1e-13):
    z = complex(z)
    if abs(z.imag) <= tol * max(1.0, abs(z)):
        return z.real
    return z


def _quadratic_roots(a: Fraction, b: Fraction, c: Fraction):
    disc = b * b - 4 * a * c
    s = _exact_sqrt(abs(disc))
    if s is not None:
        if disc >= 0:
            return [(-b + s) / (2 * a), (-b - s) / (2 * a)]
        return [CRat(-b / (2 * a), s / (2 * a)), CRat(-b / (2 * a), -s / (2 * a))]
    if disc > 0:
        r = math.sqrt(disc)
        return [(-float(b) + r) / (2 * float(a)), (-float(b) - r) / (2 * float(a))]
    r = math.sqrt(-disc)
    re = -float(b) / (2 * float(a))
    im = r / (2 * float(a))
    return [complex(re, im), complex(re, -im)]


def rational_roots(coeffs) -> list[tuple[object, int]]:
    """Roots with multiplicity of a polynomial with exact coefficients.

    ``coeffs`` are highest degree first.  Returns ``[(root, multiplicity)]``.
    """
    coeffs = [Fraction(c) for c in coeffs]
    while coeffs and coeffs[0] == 0:
        coeffs = coeffs[1:]
    if len(coeffs) <= 1:
        return []
    poly = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in coeffs], _X, domain="QQ")
    _, factors = poly.factor_list()
    out = []
    for fac, mult in factors:
        fc = [_fraction(c) for c in fac.all_coeffs()]
        deg = len(fc) - 1
        if deg == 1:
            out.append((-fc[1] / fc[0], mult))
        elif deg == 2:
            out.extend((r, mult) for r in _quadratic_roots(*fc))
        else:
            ff = [float(c) for c in fc]
            zs = np.roots(ff)
            zs = [_clean(_polish(ff, z)) for z in zs]
            # keep conjugate pairs exactly conjugate
            fixed = []
            for z in zs:
                if isinstance(z, complex) and z.imag < 0:
                    continue
                fixed.append(z)
                if isinstance(z, complex):
                    fixed.append(z.conjugate())
            out.extend((z, mult) for z in fixed)
    return out


def float_roots(coeffs, cluster_tol: float = CLUSTER_TOL) -> list[tuple[object, int]]:
    """Roots of a floating polynomial, clustering nearby roots.

    A cluster's representative is its mean, which is far better conditioned
    than the individual perturbed members of a multiple root.
    """
    coeffs = [complex(c) for c in coeffs]
    while coeffs and coeffs[0] == 0:
        coeffs = coeffs[1:]
    if len(coeffs) <= 1:
        return []
    zs = list(np.roots(coeffs))
    scale = max(1.0, max(abs(z) for z in zs))
    # multiple roots split like eps**(1/m); widen the net accordingly
    tol = max(cluster_tol, 1e-4) * scale
    clusters: list[list[complex]] = []
    for z in zs:
        for cl in clusters:
            if abs(np.mean(cl) - z) <= tol:
                cl.append(z)
                break
        else:
            clusters.append([z])
    out = []
    for cl in clusters:
        z = complex(np.mean(cl))
        if len(cl) == 1:
            z = complex(_polish(coeffs, z))
        out.append((_clean(z, 1e-10), len(cl)))
    return out


def poly_roots(coeffs) -> list[tuple[object, int]]:
    if all(is_exact(c) and not isinstance(c, CRat) for c in coeffs):
        return rational_roots(coeffs)
    return float_roots(coeffs)

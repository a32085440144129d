"""Explicit geodesics of the catalogue models.

Most of these are curves in ``s = log t``; with ``x(t) = sigma(log t)``
the chain rule gives ``x' = sigma_s / t`` and ``x'' = (sigma_ss - sigma_s) / t^2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .catalogue import canonical_model, label
from .connection import geometry_n
from .errors import ParamDomainError
from .scalars import exact

INF = math.inf


@dataclass(frozen=True)
class ClosedFormGeodesic:
    case: str
    params: tuple
    models: tuple                 # connections the curve is a geodesic of
    interval: tuple               # open interval of definition (lo, hi)
    window: tuple                 # finite sub-interval used for numerical comparison
    t0: float                     # natural base point inside the window
    _jet: Callable = None         # t -> (x, x', x'') as arrays

    def pos(self, t: float) -> np.ndarray:
        return self._jet(t)[0]

    def vel(self, t: float) -> np.ndarray:
        return self._jet(t)[1]

    def acc(self, t: float) -> np.ndarray:
        return self._jet(t)[2]

    def middle(self, frac: float = 0.8) -> tuple:
        lo, hi = self.window
        pad = 0.5 * (1 - frac) * (hi - lo)
        return lo + pad, hi - pad


def _log_curve(sigma):
    """Turn ``s -> (sigma, sigma_s, sigma_ss)`` into a jet in ``t = e^s``."""
    def jet(t):
        if t <= 0:
            raise ValueError("log-parametrised geodesic needs t > 0")
        x, xs, xss = (np.asarray(v, dtype=float) for v in sigma(math.log(t)))
        return x, xs / t, (xss - xs) / (t * t)
    return jet


def _linear_in_s(direction):
    d = np.asarray([float(v) for v in direction])
    return _log_curve(lambda s: (s * d, d, np.zeros(2)))


def _conn(family, *params):
    return canonical_model(label(family, *params))


LOG_WINDOW = (Fraction(1, 20), 4.0)

CASES = (
    "M11-log", "M21-M31-log", "M31-half-exp", "M21-half-log", "M41-log", "M51-log",
    "M51-zero-cos", "N-sin", "M12-log", "M22-log", "M32-M42-log",
)


def closed_form_geodesic(case: str, *params) -> ClosedFormGeodesic:
    """Explicit geodesic by case id (see ``CASES``).

    ``M11-log``         on M_1^1:                   (0, s/2)
    ``M21-M31-log``     c1 on M_2^1(c1), M_3^1(c1): (0, s/(1+2 c1)),  c1 != -1/2
    ``M31-half-exp``    a, b on M_3^1(-1/2):         ((a/b)(e^{bt}-1), bt), or (at, 0) if b = 0
    ``M21-half-log``    on M_2^1(-1/2):              (-s, 0)
    ``M41-log``         c on M_4^1(c):               (-c s^2/8, s/2)
    ``M51-log``         c on M_5^1(c), c != 0:       (log cos(s/2c) + s/2, s/2c)
    ``M51-zero-cos``    on M_5^1(0):                 (log cos t, t)
    ``N-sin``           a, b on N:                   ((a/b) sin bt, bt), or (at, 0) if b = 0
    ``M12-log``         a1, a2 on M_1^2(a1, a2):     s (1-a2, a1)/(1+a1-a2), else s (a2, 1-a1)/(1+a2-a1)
    ``M22-log``         b1, b2 on M_2^2(b1, b2):     (s/(1+b1), 0),  b1 != -1
    ``M32-M42-log``     on M_3^2(c2), M_4^2(+-1):    (s/2, 0)
    """
    params = tuple(exact(p) for p in params)
    lw = (float(LOG_WINDOW[0]), LOG_WINDOW[1])

    def need(n):
        if len(params) != n:
            raise ParamDomainError(f"case {case} takes {n} parameter(s), got {len(params)}")

    if case == "M11-log":
        need(0)
        return ClosedFormGeodesic(case, params, (_conn("M_1^1"),), (0.0, INF), lw, 1.0,
                                  _linear_in_s((0, Fraction(1, 2))))
    if case == "M21-M31-log":
        need(1)
        c1, = params
        if 1 + 2 * c1 == 0:
            raise ParamDomainError("M21-M31-log needs c1 != -1/2")
        return ClosedFormGeodesic(case, params, (_conn("M_2^1", c1), _conn("M_3^1", c1)),
                                  (0.0, INF), lw, 1.0, _linear_in_s((0, 1 / (1 + 2 * c1))))
    if case == "M31-half-exp":
        need(2)
        a, b = (float(p) for p in params)

        def jet(t):
            if b == 0:
                return np.array([a * t, 0.0]), np.array([a, 0.0]), np.zeros(2)
            e = math.exp(b * t)
            return np.array([a / b * (e - 1), b * t]), np.array([a * e, b]), np.array([a * b * e, 0.0])
        return ClosedFormGeodesic(case, params, (_conn("M_3^1", Fraction(-1, 2)),), (-INF, INF),
                                  (-4.0, 4.0), 0.0, jet)
    if case == "M21-half-log":
        need(0)
        return ClosedFormGeodesic(case, params, (_conn("M_2^1", Fraction(-1, 2)),), (0.0, INF), lw, 1.0,
                                  _linear_in_s((-1, 0)))
    if case == "M41-log":
        need(1)
        c = float(params[0])
        sigma = lambda s: ((-c / 8 * s * s, s / 2), (-c / 4 * s, 0.5), (-c / 4, 0.0))  # noqa: E731
        return ClosedFormGeodesic(case, params, (_conn("M_4^1", params[0]),), (0.0, INF), lw, 1.0,
                                  _log_curve(sigma))
    if case == "M51-log":
        need(1)
        c = float(params[0])
        if c == 0:
            raise ParamDomainError("M51-log needs c != 0")
        k = 1 / (2 * c)

        def sigma(s):
            phi = k * s
            return ((math.log(math.cos(phi)) + s / 2, phi),
                    (-k * math.tan(phi) + 0.5, k),
                    (-k * k / math.cos(phi) ** 2, 0.0))
        half = math.pi * abs(c)          # |s/2c| < pi/2
        lo, hi = math.exp(-half), math.exp(half)
        return ClosedFormGeodesic(case, params, (_conn("M_5^1", params[0]),), (lo, hi), (lo, hi), 1.0,
                                  _log_curve(sigma))
    if case == "M51-zero-cos":
        need(0)

        def jet(t):
            return (np.array([math.log(math.cos(t)), t]), np.array([-math.tan(t), 1.0]),
                    np.array([-1 / math.cos(t) ** 2, 0.0]))
        h = math.pi / 2
        return ClosedFormGeodesic(case, params, (_conn("M_5^1", 0),), (-h, h), (-h, h), 0.0, jet)
    if case == "N-sin":
        need(2)
        a, b = (float(p) for p in params)

        def jet(t):
            if b == 0:
                return np.array([a * t, 0.0]), np.array([a, 0.0]), np.zeros(2)
            return (np.array([a / b * math.sin(b * t), b * t]), np.array([a * math.cos(b * t), b]),
                    np.array([-a * b * math.sin(b * t), 0.0]))
        return ClosedFormGeodesic(case, params, (geometry_n(),), (-INF, INF), (-10.0, 10.0), 0.0, jet)
    if case == "M12-log":
        need(2)
        a1, a2 = params
        if 1 + a1 - a2 != 0:
            d = ((1 - a2) / (1 + a1 - a2), a1 / (1 + a1 - a2))
        else:
            d = (a2 / (1 + a2 - a1), (1 - a1) / (1 + a2 - a1))
        return ClosedFormGeodesic(case, params, (_conn("M_1^2", a1, a2),), (0.0, INF), lw, 1.0,
                                  _linear_in_s(d))
    if case == "M22-log":
        need(2)
        b1, b2 = params
        if b1 == -1:
            raise ParamDomainError("M22-log needs b1 != -1")
        return ClosedFormGeodesic(case, params, (_conn("M_2^2", b1, b2),), (0.0, INF), lw, 1.0,
                                  _linear_in_s((1 / (1 + b1), 0)))
    if case == "M32-M42-log":
        need(0)
        models = tuple(_conn("M_3^2", c) for c in (-1, 1, 2)) + (_conn("M_4^2", 1), _conn("M_4^2", -1))
        return ClosedFormGeodesic(case, params, models, (0.0, INF), lw, 1.0,
                                  _linear_in_s((Fraction(1, 2), 0)))
    raise ParamDomainError(f"unknown closed-form case {case!r}; expected one of {', '.join(CASES)}")


# parameter samples used by the integrator comparison
SAMPLES = (
    ("M11-log", ()), ("M21-M31-log", (Fraction(1, 3),)), ("M21-M31-log", (Fraction(-1, 4),)),
    ("M31-half-exp", (1, 1)), ("M31-half-exp", (2, 0)), ("M21-half-log", ()), ("M41-log", (2,)),
    ("M51-log", (1,)), ("M51-log", (2,)), ("M51-zero-cos", ()), ("N-sin", (1, 1)), ("N-sin", (1, 0)),
    ("M12-log", (2, 2)), ("M22-log", (0, 1)), ("M22-log", (2, 3)), ("M32-M42-log", ()),
)

"""Affine maps between the catalogue surfaces and a residual check.

A smooth map ``Phi`` is affine from ``(M, G)`` to ``(M~, G~)`` when

    d_i d_j Phi^c + G~_ab^c(Phi) d_i Phi^a d_j Phi^b - G_ij^k d_k Phi^c = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .catalogue import canonical_model, label
from .connection import Connection, geometry_n
from .errors import SingularJacobian, UnknownMap
from .exp_poly import ExpPoly
from .scalars import exact, is_exact

JACOBIAN_TOL = 1e-12

# parameters used when a parametrised map is requested without any
DEFAULT_PARAMS = {
    "7": (Fraction(1, 3),), "8": (Fraction(1, 3),), "9": (Fraction(1),), "10": (Fraction(1),),
    "Psi": (Fraction(1, 2), Fraction(1), Fraction(-1), Fraction(1, 3)),
}

MAP_NAMES = tuple(str(i) for i in range(1, 11)) + ("Psi", "Phi_N")


@dataclass(frozen=True)
class MapSpec:
    components: tuple          # (Phi^1, Phi^2) as ExpPoly
    source: Connection
    target: Connection
    name: str

    def jacobian(self):
        return [[phi.derive(i) for i in (1, 2)] for phi in self.components]


def _conn(family, *params) -> Connection:
    return canonical_model(label(family, *params)).lift()


def catalogue_map(index, *params) -> MapSpec:
    """Catalogue map by number ``1..10``, ``"Psi"`` (four parameters) or ``"Phi_N"``."""
    name = str(index)
    if name not in MAP_NAMES:
        raise UnknownMap(f"unknown map {index!r}; expected one of {', '.join(MAP_NAMES)}")
    params = tuple(exact(p) for p in params) or DEFAULT_PARAMS.get(name, ())
    need = len(DEFAULT_PARAMS.get(name, ()))
    if len(params) != need:
        raise UnknownMap(f"map {name} takes {need} parameter(s), got {len(params)}")

    x1, x2 = ExpPoly.x1(), ExpPoly.x2()
    E = ExpPoly.exp
    cos2, sin2 = ExpPoly.cos(0, 1), ExpPoly.sin(0, 1)
    flat = _conn("M_0^0")
    if name == "1":
        return MapSpec((E(1, 0), x2 * E(1, 0)), _conn("M_1^0"), flat, name)
    if name == "2":
        return MapSpec((E(0, 1), E(-1, 0)), _conn("M_2^0"), flat, name)
    if name == "3":
        return MapSpec((x1, E(0, 1)), _conn("M_3^0"), flat, name)
    if name == "4":
        return MapSpec((x2, x2 * x2 + 2 * x1), _conn("M_4^0"), flat, name)
    if name == "5":
        return MapSpec((E(1, 0) * cos2, E(1, 0) * sin2), _conn("M_5^0"), flat, name)
    if name == "6":
        return MapSpec((E(-1, 0), x2), _conn("M_1^1"), _conn("M_4^1", 0), name)
    if name == "7":
        c1, = params
        return MapSpec((E(-1, 0), x2), _conn("M_2^1", c1), _conn("M_3^1", c1), name)
    if name == "8":
        c1, = params
        return MapSpec((x1 * E(0, -1), -x2), _conn("M_3^1", c1), _conn("M_3^1", -c1 - 1), name)
    if name == "9":
        c, = params
        return MapSpec((x1 + Fraction(1, 2) * c * x2 * x2, x2), _conn("M_4^1", c), _conn("M_4^1", 0), name)
    if name == "10":
        c, = params
        return MapSpec((x1, -x2), _conn("M_5^1", c), _conn("M_5^1", -c), name)
    if name == "Psi":
        a, b, c, d = params
        ea = Fraction(1) if a == 0 else math.exp(float(a))
        return MapSpec((ea * x1 + b * cos2 + c * sin2, x2 + d), geometry_n(), geometry_n(), name)
    return MapSpec((E(1, 0), x2), _conn("M_5^1", 0), geometry_n(), name)


def grid_points(n: int = 5, lo: float = -1.0, hi: float = 1.0) -> list:
    ticks = np.linspace(lo, hi, n)
    return [(float(u), float(v)) for u in ticks for v in ticks]


def verify_affine_map(spec: MapSpec, grid=None) -> float:
    """Largest ``|residual|`` over the grid, all ``(i, j, c)``."""
    grid = grid_points() if grid is None else grid
    phi = [f.numeric() for f in spec.components]
    jac = [[g.numeric() for g in row] for row in spec.jacobian()]
    hess = [[[f.derive(i).derive(j).numeric() for j in (1, 2)] for i in (1, 2)] for f in spec.components]
    src = spec.source.numeric_gamma()
    tgt = spec.target.numeric_gamma()
    worst = 0.0
    for x1, x2 in grid:
        J = np.array([[jac[c][i](x1, x2) for i in range(2)] for c in range(2)])   # J[c, i] = d_i Phi^c
        if abs(np.linalg.det(J)) < JACOBIAN_TOL:
            raise SingularJacobian(f"map {spec.name} has singular Jacobian at ({x1}, {x2})")
        y = (phi[0](x1, x2), phi[1](x1, x2))
        G, Gt = src(x1, x2), tgt(*y)
        for c in range(2):
            for i in range(2):
                for j in range(2):
                    r = hess[c][i][j](x1, x2)
                    r += float(J[:, i] @ Gt[:, :, c] @ J[:, j])
                    r -= float(G[i, j, :] @ J[c, :])
                    worst = max(worst, abs(r))
    return worst


def _compose(g: ExpPoly, phi) -> ExpPoly:
    """``g(Phi)`` for a polynomial ``g``."""
    out = ExpPoly.zero()
    for c, (i, j), lam in g.terms:
        if any(v != 0 for v in lam):
            raise ValueError("symbolic composition needs a polynomial coefficient")
        term = ExpPoly.const(c)
        for _ in range(i):
            term = term * phi[0]
        for _ in range(j):
            term = term * phi[1]
        out = out + term
    return out


def affine_residual(spec: MapSpec) -> list:
    """Symbolic residual ``R[c][i][j]``; needs polynomial target Christoffels."""
    phi = spec.components
    d = [[f.derive(i) for i in (1, 2)] for f in phi]        # d[c][i]
    Gt = {key: _compose(v, phi) for key, v in spec.target.christoffel.items()}
    out = []
    for c in range(2):
        rows = []
        for i in range(2):
            row = []
            for j in range(2):
                r = phi[c].derive(i + 1).derive(j + 1)
                for a in range(2):
                    for b in range(2):
                        g = Gt.get((min(a, b), max(a, b), c))
                        if g is not None and not g.is_zero():
                            r = r + g * d[a][i] * d[b][j]
                for k in range(2):
                    g = spec.source.gamma(i, j, k)
                    if not g.is_zero():
                        r = r - g * d[c][k]
                row.append(r)
            rows.append(row)
        out.append(rows)
    return out


def residual_is_exact_zero(spec: MapSpec) -> bool:
    return all(r.is_zero() and all(is_exact(t[0]) for t in r.terms)
               for rows in affine_residual(spec) for row in rows for r in row)

"""Torsion-free connections on the plane and their curvature.

Indices are 0-based internally (``gamma(0, 1, 0)`` is Gamma_12^1).  JSON
literals and CLI arguments use the 1-based ``"22_1"`` spelling.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Mapping

import numpy as np

from .exp_poly import ExpPoly, ep_format, ep_parse
from .scalars import exact, format_scalar, is_exact, to_float

RANK_TOL = 1e-12

# storage order of the six independent Christoffel symbols
GAMMA_KEYS = ((0, 0, 0), (0, 0, 1), (0, 1, 0), (0, 1, 1), (1, 1, 0), (1, 1, 1))


def _sym_key(i, j, k):
    return (i, j, k) if i <= j else (j, i, k)


@dataclass(frozen=True)
class TypeAModel:
    """Constant Christoffel symbols ``M(a, b, c, d, e, f)``.

    ``a = G_11^1, b = G_11^2, c = G_12^1, d = G_12^2, e = G_22^1, f = G_22^2``.
    Integer, rational and ``"p/q"`` inputs are stored as exact Fractions.
    """

    a: object = 0
    b: object = 0
    c: object = 0
    d: object = 0
    e: object = 0
    f: object = 0

    def __post_init__(self):
        for name in "abcdef":
            object.__setattr__(self, name, exact(getattr(self, name)))

    @classmethod
    def from_gamma(cls, gamma) -> "TypeAModel":
        if len(gamma) != 6:
            raise ValueError("a Type A model needs six Christoffel symbols")
        return cls(*gamma)

    @property
    def gamma(self) -> tuple:
        return (self.a, self.b, self.c, self.d, self.e, self.f)

    @property
    def is_exact(self) -> bool:
        return all(is_exact(g) for g in self.gamma)

    def christoffel(self, i: int, j: int, k: int):
        return self.gamma[GAMMA_KEYS.index(_sym_key(i, j, k))]

    def array(self) -> np.ndarray:
        """Float array ``G[i, j, k]``."""
        g = np.zeros((2, 2, 2))
        for i, j, k in product(range(2), repeat=3):
            g[i, j, k] = to_float(self.christoffel(i, j, k))
        return g

    def to_float(self) -> "TypeAModel":
        return TypeAModel(*(to_float(g) for g in self.gamma))

    def lift(self) -> "Connection":
        return Connection({key: ExpPoly.const(g) for key, g in zip(GAMMA_KEYS, self.gamma)})

    def close_to(self, other: "TypeAModel", tol: float = 1e-9) -> bool:
        if self.is_exact and other.is_exact:
            return self == other
        return all(abs(complex(x) - complex(y)) <= tol * max(1.0, abs(complex(x)))
                   for x, y in zip(self.gamma, other.gamma))

    def to_json(self) -> dict:
        return {"type": "A", "gamma": [format_scalar(g) if is_exact(g) else float(g)
                                       for g in self.gamma]}

    def __str__(self):
        return "M(" + ",".join(format_scalar(g) for g in self.gamma) + ")"


def _key_from_label(label: str):
    try:
        lower, upper = label.split("_")
        i, j, k = int(lower[0]) - 1, int(lower[1]) - 1, int(upper) - 1
    except (ValueError, IndexError):
        raise ValueError(f"bad Christoffel key {label!r}; expected like '22_1'") from None
    if not all(v in (0, 1) for v in (i, j, k)):
        raise ValueError(f"bad Christoffel key {label!r}")
    return _sym_key(i, j, k)


@dataclass(frozen=True)
class Connection:
    """Christoffel symbols with exponential-polynomial coefficients."""

    christoffel: Mapping = field(default_factory=dict)
    name: str = ""

    def __post_init__(self):
        table = {}
        for key, val in dict(self.christoffel).items():
            key = _key_from_label(key) if isinstance(key, str) else _sym_key(*key)
            if not isinstance(val, ExpPoly):
                val = ep_parse(val) if isinstance(val, str) else ExpPoly.const(val)
            table[key] = val
        object.__setattr__(self, "christoffel", table)

    def gamma(self, i: int, j: int, k: int) -> ExpPoly:
        return self.christoffel.get(_sym_key(i, j, k), ExpPoly.zero())

    @property
    def is_constant(self) -> bool:
        return all(v.is_constant() for v in self.christoffel.values())

    def to_type_a(self) -> TypeAModel:
        if not self.is_constant:
            raise ValueError("connection does not have constant Christoffel symbols")
        return TypeAModel(*(self.gamma(*key).constant_value() for key in GAMMA_KEYS))

    def array_at(self, point) -> np.ndarray:
        g = np.zeros((2, 2, 2))
        for (i, j, k), v in self.christoffel.items():
            g[i, j, k] = g[j, i, k] = v.eval(point)
        return g

    def numeric_gamma(self):
        """Callable ``x -> G[i, j, k]`` built once from compiled coefficients."""
        items = [((i, j, k), v.numeric()) for (i, j, k), v in self.christoffel.items()
                 if not v.is_zero()]

        def gamma_at(x1, x2):
            g = np.zeros((2, 2, 2))
            for (i, j, k), fn in items:
                g[i, j, k] = g[j, i, k] = fn(x1, x2)
            return g
        return gamma_at

    def to_json(self) -> dict:
        return {"type": "general",
                "christoffel": {f"{i + 1}{j + 1}_{k + 1}": ep_format(v)
                                for (i, j, k), v in sorted(self.christoffel.items()) if not v.is_zero()}}


def geometry_n() -> Connection:
    """The homogeneous surface whose only nonzero symbol is G_22^1 = x1."""
    return Connection({(1, 1, 0): ExpPoly.x1()}, name="N")


def model_from_json(obj):
    """Parse ``{"type":"A","gamma":[...]}`` or ``{"type":"general","christoffel":{...}}``."""
    if isinstance(obj, str):
        obj = json.loads(obj)
    kind = obj.get("type", "A")
    if kind == "A":
        return TypeAModel.from_gamma([exact(g) for g in obj["gamma"]])
    if kind == "general":
        return Connection(obj["christoffel"])
    raise ValueError(f"unknown connection type {kind!r}")


def as_connection(model) -> Connection:
    return model.lift() if isinstance(model, TypeAModel) else model


@dataclass(frozen=True)
class SymBilinear:
    """2x2 tensor of exponential polynomials ``entries[i][j]``."""

    entries: tuple

    def __post_init__(self):
        rows = tuple(tuple(v if isinstance(v, ExpPoly) else ExpPoly.const(v) for v in row)
                     for row in self.entries)
        object.__setattr__(self, "entries", rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    @property
    def symmetric(self) -> bool:
        return self.entries[0][1] == self.entries[1][0]

    def sym(self) -> "SymBilinear":
        off = (self.entries[0][1] + self.entries[1][0]) * Fraction(1, 2)
        return SymBilinear(((self.entries[0][0], off), (off, self.entries[1][1])))

    def is_zero(self, tol: float = 0.0) -> bool:
        return all(v.is_zero(tol) for row in self.entries for v in row)

    def matrix(self):
        """Entries as scalars (constant tensors only)."""
        return [[v.constant_value() for v in row] for row in self.entries]

    def evaluate(self, point) -> np.ndarray:
        return np.array([[v.eval(point) for v in row] for row in self.entries])

    def __add__(self, other: "SymBilinear") -> "SymBilinear":
        return SymBilinear(tuple(tuple(a + b for a, b in zip(r1, r2))
                                 for r1, r2 in zip(self.entries, other.entries)))

    def __mul__(self, f) -> "SymBilinear":
        return SymBilinear(tuple(tuple(v * f for v in row) for row in self.entries))

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, SymBilinear):
            return NotImplemented
        return all(a == b for r1, r2 in zip(self.entries, other.entries) for a, b in zip(r1, r2))

    __hash__ = None

    def components(self) -> tuple:
        """``(rho_11, rho_12, rho_22)`` of a constant symmetric tensor."""
        m = self.matrix()
        return (m[0][0], m[0][1], m[1][1])


def ricci_type_a(model: TypeAModel) -> SymBilinear:
    """Ricci tensor of a Type A model in closed form."""
    a, b, c, d, e, f = model.gamma
    r11 = (a - d) * d + b * (f - c)
    r12 = c * d - b * e
    r22 = -c * c + f * c + (a - d) * e
    return SymBilinear(((r11, r12), (r12, r22)))


def curvature_tensor(conn) -> list:
    """``R[i][j][k][l]`` with ``R(d_i, d_j) d_k = R[i][j][k][l] d_l``."""
    conn = as_connection(conn)
    G = [[[conn.gamma(i, j, k) for k in range(2)] for j in range(2)] for i in range(2)]
    out = [[[[None] * 2 for _ in range(2)] for _ in range(2)] for _ in range(2)]
    for i, j, k, l in product(range(2), repeat=4):
        v = G[j][k][l].derive(i + 1) - G[i][k][l].derive(j + 1)
        for m in range(2):
            v = v + G[j][k][m] * G[i][m][l] - G[i][k][m] * G[j][m][l]
        out[i][j][k][l] = v
    return out


def ricci_general(conn) -> SymBilinear:
    """Ricci tensor ``rho(X, Y) = Tr(Z -> R(Z, X) Y)``; may be non-symmetric."""
    R = curvature_tensor(conn)
    rows = tuple(tuple(R[0][j][k][0] + R[1][j][k][1] for k in range(2)) for j in range(2))
    return SymBilinear(rows)


def curvature_apply(conn, point, xi1, xi2, xi3) -> np.ndarray:
    """``R(xi1, xi2) xi3`` at ``point`` for constant vector fields."""
    R = curvature_tensor(conn)
    out = np.zeros(2)
    for i, j, k, l in product(range(2), repeat=4):
        w = xi1[i] * xi2[j] * xi3[k]
        if w:
            out[l] += w * R[i][j][k][l].eval(point)
    return out


def hessian(conn, f: ExpPoly) -> SymBilinear:
    """``H f = (d_i d_j f - G_ij^k d_k f) dx^i dx^j``."""
    conn = as_connection(conn)
    grad = (f.derive(1), f.derive(2))
    rows = []
    for i in range(2):
        row = []
        for j in range(2):
            v = grad[j].derive(i + 1)
            for k in range(2):
                g = conn.gamma(i, j, k)
                if not g.is_zero():
                    v = v - g * grad[k]
            row.append(v)
        rows.append(tuple(row))
    return SymBilinear(tuple(rows))


def ricci_rank(model: TypeAModel) -> int:
    """Rank of the (symmetric) Ricci tensor."""
    r11, r12, r22 = ricci_type_a(model).components()
    if all(is_exact(v) for v in (r11, r12, r22)):
        if r11 == 0 and r12 == 0 and r22 == 0:
            return 0
        return 2 if r11 * r22 - r12 * r12 != 0 else 1
    eig = np.linalg.eigvalsh(np.array([[float(r11), float(r12)], [float(r12), float(r22)]]))
    return int(np.sum(np.abs(eig) > RANK_TOL))

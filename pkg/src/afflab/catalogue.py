"""Normal forms of Type A models and their quasi-Einstein solution spaces."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

from . import linalg
from .connection import TypeAModel
from .errors import ParamDomainError
from .exp_poly import ExpPoly, FuncSpan
from .scalars import exact, format_scalar, is_exact

# family -> (number of parameters, Ricci rank)
FAMILIES = {
    "M_0^0": (0, 0), "M_1^0": (0, 0), "M_2^0": (0, 0), "M_3^0": (0, 0), "M_4^0": (0, 0), "M_5^0": (0, 0),
    "M_1^1": (0, 1), "M_2^1": (1, 1), "M_3^1": (1, 1), "M_4^1": (1, 1), "M_5^1": (1, 1),
    "M_1^2": (2, 2), "M_2^2": (2, 2), "M_3^2": (1, 2), "M_4^2": (1, 2),
}

# non-flat families that are also locally Type B geometries
ALSO_TYPE_B = frozenset({"M_1^1", "M_2^1", "M_3^1", "M_4^1"})

_LABEL = re.compile(r"^\s*M_?\{?(\d)\}?\^\{?(\d)\}?\s*$")


@dataclass(frozen=True)
class CanonicalLabel:
    family: str
    params: tuple = ()

    def __post_init__(self):
        family = normalise_family(self.family)
        object.__setattr__(self, "family", family)
        object.__setattr__(self, "params", tuple(exact(p) for p in self.params))
        if family != "N":
            n = FAMILIES[family][0]
            if len(self.params) != n:
                raise ParamDomainError(f"{family} takes {n} parameter(s), got {len(self.params)}")

    @property
    def rank(self) -> int:
        return FAMILIES[self.family][1]

    @property
    def also_type_b(self) -> bool:
        return self.family in ALSO_TYPE_B

    def __str__(self):
        if not self.params:
            return self.family
        return f"{self.family}(" + ",".join(format_scalar(p) for p in self.params) + ")"

    def to_json(self) -> dict:
        return {"label": self.family,
                "params": [format_scalar(p) if is_exact(p) else float(p) for p in self.params]}


def normalise_family(text: str) -> str:
    if text.strip() == "N":
        return "N"
    m = _LABEL.match(text)
    if not m:
        raise ParamDomainError(f"unknown model label {text!r}")
    family = f"M_{m.group(1)}^{m.group(2)}"
    if family not in FAMILIES:
        raise ParamDomainError(f"unknown model label {text!r}")
    return family


def label(family: str, *params) -> CanonicalLabel:
    return CanonicalLabel(family, params)


def check_params(lab: CanonicalLabel) -> None:
    """Raise ParamDomainError if the parameters leave the family's domain."""
    fam, p = lab.family, lab.params
    if fam in ("M_2^1", "M_3^1") and p[0] in (0, -1):
        raise ParamDomainError(f"{fam}: requires c1 not in {{0, -1}}")
    if fam == "M_3^2" and p[0] == 0:
        raise ParamDomainError("M_3^2: requires c2 != 0")
    if fam == "M_1^2":
        a1, a2 = p
        if a1 * a2 == 0:
            raise ParamDomainError("M_1^2: requires a1*a2 != 0")
        if a1 + a2 == 1:
            raise ParamDomainError("M_1^2: requires a1 + a2 != 1")
    if fam == "M_2^2":
        b1, b2 = p
        if b1 == 1:
            raise ParamDomainError("M_2^2: requires b1 != 1")
        if b1 == 0 and b2 == 0:
            raise ParamDomainError("M_2^2: requires (b1, b2) != (0, 0)")
    if fam == "M_4^2" and p[0] not in (1, -1):
        raise ParamDomainError("M_4^2: parameter must be +1 or -1")


def canonical_model(lab: CanonicalLabel) -> TypeAModel:
    check_params(lab)
    fam, p = lab.family, lab.params
    if fam == "N":
        raise ParamDomainError("N is not a Type A model")
    one = Fraction(1)
    table = {
        "M_0^0": lambda: (0, 0, 0, 0, 0, 0),
        "M_1^0": lambda: (1, 0, 0, 1, 0, 0),
        "M_2^0": lambda: (-1, 0, 0, 0, 0, 1),
        "M_3^0": lambda: (0, 0, 0, 0, 0, 1),
        "M_4^0": lambda: (0, 0, 0, 0, 1, 0),
        "M_5^0": lambda: (1, 0, 0, 1, -1, 0),
        "M_1^1": lambda: (-1, 0, 1, 0, 0, 2),
        "M_2^1": lambda: (-1, 0, p[0], 0, 0, 1 + 2 * p[0]),
        "M_3^1": lambda: (0, 0, p[0], 0, 0, 1 + 2 * p[0]),
        "M_4^1": lambda: (0, 0, 1, 0, p[0], 2),
        "M_5^1": lambda: (1, 0, 0, 0, 1 + p[0] * p[0], 2 * p[0]),
        "M_1^2": lambda: _m12(*p),
        "M_2^2": lambda: (1 + p[0], 0, p[1], 1, (1 + p[1] * p[1]) / (p[0] - one), 0),
        "M_3^2": lambda: (2, 0, 0, 1, p[0], 1),
        "M_4^2": lambda: (2, 0, 0, 1, p[0], 0),
    }
    return TypeAModel(*table[fam]())


def _m12(a1, a2):
    den = a1 + a2 - 1
    nums = (a1 * a1 + a2 - 1, a1 * a1 - a1, a1 * a2, a1 * a2, a2 * a2 - a2, a1 + a2 * a2 - 1)
    return tuple(n / den for n in nums)


def q_catalogue(lab: CanonicalLabel) -> FuncSpan:
    """The tabulated solution space of the quasi-Einstein equation."""
    check_params(lab)
    fam, p = lab.family, lab.params
    one, x1, x2 = ExpPoly.const(1), ExpPoly.x1(), ExpPoly.x2()
    E = ExpPoly.exp
    if fam == "N":
        return FuncSpan((ExpPoly.cos(0, 1), ExpPoly.sin(0, 1), x1))
    table = {
        "M_0^0": lambda: (one, x1, x2),
        "M_1^0": lambda: (one, E(1, 0), x2 * E(1, 0)),
        "M_2^0": lambda: (one, E(0, 1), E(-1, 0)),
        "M_3^0": lambda: (one, x1, E(0, 1)),
        "M_4^0": lambda: (one, x2, x2 * x2 + 2 * x1),
        "M_5^0": lambda: (one, E(1, 0) * ExpPoly.cos(0, 1), E(1, 0) * ExpPoly.sin(0, 1)),
        "M_1^1": lambda: _times(E(0, 1), (one, x2, E(-1, 0))),
        "M_2^1": lambda: _times(E(0, p[0]), (one, E(0, 1), E(-1, 0))),
        "M_3^1": lambda: _times(E(0, p[0]), (one, E(0, 1), x1)),
        "M_4^1": lambda: _times(E(0, 1), (one, x2, p[0] * x2 * x2 + 2 * x1)),
        "M_5^1": lambda: (E(0, p[0]) * ExpPoly.cos(0, 1), E(0, p[0]) * ExpPoly.sin(0, 1), E(1, 0)),
        "M_1^2": lambda: (E(1, 0), E(0, 1), E(p[0], p[1])),
        "M_2^2": lambda: (E(1, 0) * ExpPoly.cos(0, 1), E(1, 0) * ExpPoly.sin(0, 1), E(p[0], p[1])),
        "M_3^2": lambda: _times(E(1, 0), (one, x1 - p[0] * x2, E(0, 1))),
        "M_4^2": lambda: (E(1, 0), x2 * E(1, 0), (2 * x1 + p[0] * x2 * x2) * E(1, 0)),
    }
    return FuncSpan(tuple(ExpPoly(f.terms) for f in table[fam]()))


def _times(factor, funcs):
    return tuple(factor * f for f in funcs)


def _m12_orbit(a1, a2):
    """Parameters of every presentation of M_1^2(a1, a2) by a linear change."""
    pts = [(Fraction(1), Fraction(0)), (Fraction(0), Fraction(1)), (a1, a2)]
    out = []
    for pi, qi, ri in permutations(range(3)):
        p, q, r = pts[pi], pts[qi], pts[ri]
        m = [[p[0], q[0]], [p[1], q[1]]]
        if linalg.det2(m) == 0:
            continue
        L = linalg.inv2(m)
        out.append(tuple(linalg.matvec(L, list(r))))
    return out


def canonical_params(lab: CanonicalLabel) -> CanonicalLabel:
    """Representative of ``lab`` within its linear-equivalence class.

    Linear identifications: M_2^1(c1) ~ M_2^1(-1-c1), M_4^1(c) ~ M_4^1(s*c),
    M_5^1(c) ~ M_5^1(-c), M_2^2(b1, b2) ~ M_2^2(b1, -b2), and the six
    presentations of M_1^2 obtained by relabelling its exponents.
    """
    fam, p = lab.family, lab.params
    if fam == "M_2^1" and p[0] < Fraction(-1, 2):
        return CanonicalLabel(fam, (-1 - p[0],))
    if fam == "M_4^1" and p[0] != 0:
        return CanonicalLabel(fam, (Fraction(1),))
    if fam == "M_5^1":
        return CanonicalLabel(fam, (abs(p[0]),))
    if fam == "M_2^2":
        return CanonicalLabel(fam, (p[0], abs(p[1])))
    if fam == "M_1^2":
        return CanonicalLabel(fam, min(_m12_orbit(*p)))
    return lab


F = Fraction

GRID_C1 = (F(-2), F(-1, 2), F(1, 3), F(1), F(2))
GRID_C = (F(-1), F(0), F(1), F(2))
GRID_C2 = (F(-1), F(1), F(2))
GRID_A = ((F(2), F(2)), (F(-1), F(3)), (F(1, 2), F(1, 4)))
GRID_B = ((F(-1), F(0)), (F(-1), F(1)), (F(0), F(1)), (F(2), F(3)))


def parameter_grid() -> list[CanonicalLabel]:
    """Every family over the standard test grid."""
    out = [CanonicalLabel(f) for f in ("M_0^0", "M_1^0", "M_2^0", "M_3^0", "M_4^0", "M_5^0", "M_1^1")]
    out += [CanonicalLabel(f, (c,)) for f in ("M_2^1", "M_3^1") for c in GRID_C1]
    out += [CanonicalLabel(f, (c,)) for f in ("M_4^1", "M_5^1") for c in GRID_C]
    out += [CanonicalLabel("M_1^2", a) for a in GRID_A]
    out += [CanonicalLabel("M_2^2", b) for b in GRID_B]
    out += [CanonicalLabel("M_3^2", (c,)) for c in GRID_C2]
    out += [CanonicalLabel("M_4^2", (s,)) for s in (F(1), F(-1))]
    return out

"""Strong projective changes, flattening and linear changes of coordinates."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from . import linalg
from .connection import GAMMA_KEYS, TypeAModel, ricci_type_a
from .errors import SingularMatrix
from .exp_poly import ExpPoly
from .polyroots import poly_roots
from .scalars import exact, format_scalar, imag_part, is_exact, is_zero, to_float


@dataclass(frozen=True)
class ProjectivePotential:
    """The linear function ``g(x) = w1*x1 + w2*x2``."""

    w1: object = 0
    w2: object = 0

    def __post_init__(self):
        object.__setattr__(self, "w1", exact(self.w1))
        object.__setattr__(self, "w2", exact(self.w2))

    def __iter__(self):
        return iter((self.w1, self.w2))

    @property
    def g(self) -> ExpPoly:
        return ExpPoly.x1() * self.w1 + ExpPoly.x2() * self.w2

    def to_json(self) -> list:
        return [format_scalar(w) if is_exact(w) else float(w) for w in self]


def _potential(w) -> ProjectivePotential:
    return w if isinstance(w, ProjectivePotential) else ProjectivePotential(*w)


def projective_change(model: TypeAModel, w) -> TypeAModel:
    """``G_ij^k + w_i delta_j^k + w_j delta_i^k``."""
    w1, w2 = _potential(w)
    a, b, c, d, e, f = model.gamma
    return TypeAModel(a + 2 * w1, b, c + w2, d + w1, e, f + 2 * w2)


@dataclass(frozen=True)
class FlattenResult:
    w: ProjectivePotential          # potential in the (possibly prescaled) coordinates
    model: TypeAModel               # the flat model projective_change(prescaled, w)
    prescale: list | None           # y = prescale @ x, or None for the identity
    w_original: ProjectivePotential  # the same potential written in the input coordinates

    def __iter__(self):
        return iter((self.w, self.model, self.prescale))


def flatten(model: TypeAModel) -> FlattenResult:
    """A linear potential making the model projectively flat.

    With ``G_11^2 = 0`` the potential is explicit.  Otherwise x2 is first
    rescaled so that ``G_11^2 = 1``; then ``rho_11 = 0`` fixes ``w2`` in terms
    of ``w1`` and ``rho_12 = 0`` is a cubic in ``w1`` with a real root.
    """
    a, b, c, d, e, f = model.gamma
    if is_zero(b, 0.0 if is_exact(b) else 1e-14):
        w = ProjectivePotential(d - a, -c)
        flat = projective_change(model, w)
        _assert_flat(flat)
        return FlattenResult(w, flat, None, w)

    prescale = None
    if b != 1:
        prescale = [[Fraction(1), Fraction(0)], [Fraction(0), 1 / b]]
        model = linear_transform(model, prescale)
    a, b, c, d, e, f = model.gamma

    def w2_of(w1):
        return c - f - (a - d + w1) * (d + w1)

    # (c + w2)(d + w1) - e with w2 = w2_of(w1), expanded in w1
    k = 2 * c - f - (a - d) * d                         # c + w2 = k - a*w1 - w1^2
    coeffs = [-1, -a - d, k - a * d, k * d - e]
    roots = [r for r, _ in poly_roots(coeffs)
             if (imag_part(r) == 0 if is_exact(r) else not isinstance(r, complex))]
    if not roots:
        # float noise can push a real double root off the axis
        roots = [complex(r).real for r, _ in poly_roots(coeffs)]
    w1 = min(roots, key=lambda r: (abs(to_float(r)), to_float(w2_of(r))))
    w = ProjectivePotential(w1, w2_of(w1))
    flat = projective_change(model, w)
    r11, r12, r22 = ricci_type_a(flat).components()
    factor = -(a - d + w1) * r12
    tol = 0.0 if flat.is_exact else 1e-9 * (1 + max(abs(to_float(g)) for g in flat.gamma) ** 3)
    assert is_zero(r22 - factor, tol), \
        "rho_22 does not factor through rho_12"
    _assert_flat(flat)
    w_orig = w
    if prescale is not None:
        At = linalg.transpose(prescale)
        w_orig = ProjectivePotential(*linalg.matvec(At, [w.w1, w.w2]))
    return FlattenResult(w, flat, prescale, w_orig)


def _assert_flat(model: TypeAModel) -> None:
    comps = ricci_type_a(model).components()
    scale = 1.0 + max(abs(to_float(g)) for g in model.gamma) ** 2
    assert all(is_zero(r, 0.0 if model.is_exact else 1e-9 * scale) for r in comps), \
        f"flattened model {model} is not flat"


def linear_transform(model: TypeAModel, A) -> TypeAModel:
    """Christoffel symbols of the same connection in coordinates ``y = A x``."""
    A = [[exact(v) for v in row] for row in A]
    Ainv = linalg.inv2(A)           # raises SingularMatrix
    out = []
    for al, be, ga in GAMMA_KEYS:
        v = 0
        for i, j, k in product(range(2), repeat=3):
            coef = Ainv[i][al] * Ainv[j][be] * A[ga][k]
            if coef != 0:
                v = v + coef * model.christoffel(i, j, k)
        out.append(v)
    return TypeAModel(*out)


def compose_linear(f: ExpPoly, M) -> ExpPoly:
    """``f(M y)`` as an exponential polynomial in ``y``."""
    X = [ExpPoly.x1() * M[r][0] + ExpPoly.x2() * M[r][1] for r in range(2)]
    out = ExpPoly.zero()
    for c, (i, j), (l1, l2) in f.terms:
        lam = (l1 * M[0][0] + l2 * M[1][0], l1 * M[0][1] + l2 * M[1][1])
        term = ExpPoly.raw([(c, (0, 0), lam)])
        for _ in range(i):
            term = term * X[0]
        for _ in range(j):
            term = term * X[1]
        out = out + term
    return ExpPoly(out.terms) if f.is_real_closed() else out


def check_invertible(A) -> None:
    if linalg.det2([[exact(v) for v in row] for row in A]) == 0:
        raise SingularMatrix("matrix is singular")

"""Linear classification of Type A models into the catalogue normal forms.

Exponents of ``Q`` transform as ``lambda -> L lambda`` with ``L = A^{-T}``
under ``y = A x``, and so do the linear parts of the polynomial factors.
Each family has a recognisable pattern of exponents and polynomial parts,
which pins down a short list of candidate matrices.  A candidate is accepted
only if ``linear_transform(model, A)`` *is* a catalogue model, with the
parameters read back from its Christoffel symbols.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

from . import linalg
from .catalogue import CanonicalLabel, canonical_model, canonical_params, check_params
from .connection import TypeAModel, ricci_rank
from .errors import ClassifyError, DomainError, SingularMatrix
from .projective import ProjectivePotential, linear_transform
from .quasi_einstein import ExponentCluster, exponent_clusters
from .scalars import format_scalar, imag_part, is_exact, real_part

MATCH_TOL = 1e-8

_ONE, _ZERO = Fraction(1), Fraction(0)
E1, E2 = (_ONE, _ZERO), (_ZERO, _ONE)

_FAMILIES_BY_RANK = {
    0: ("M_0^0", "M_1^0", "M_2^0", "M_3^0", "M_4^0", "M_5^0"),
    1: ("M_1^1", "M_2^1", "M_3^1", "M_4^1", "M_5^1"),
    2: ("M_1^2", "M_2^2", "M_3^2", "M_4^2"),
}

# parameters of a catalogue model read back from its Christoffel symbols
_READERS = {
    "M_2^1": lambda g: (g.c,),
    "M_3^1": lambda g: (g.c,),
    "M_4^1": lambda g: (g.e,),
    "M_5^1": lambda g: (g.f / 2,),
    "M_1^2": lambda g: (g.b + g.c, g.d + g.e),
    "M_2^2": lambda g: (g.a - 1, g.c),
    "M_3^2": lambda g: (g.e,),
    "M_4^2": lambda g: (g.e,),
}


@dataclass(frozen=True)
class ClassifyResult:
    label: CanonicalLabel
    A: list
    w: ProjectivePotential

    def __iter__(self):
        return iter((self.label, self.A, self.w))

    def to_json(self) -> dict:
        out = self.label.to_json()
        out["A"] = [[format_scalar(v) if is_exact(v) else float(v) for v in row] for row in self.A]
        out["w"] = self.w.to_json()
        return out


def _snap(x):
    """Replace a float that is within round-off of a small rational by it."""
    if is_exact(x):
        return x
    x = float(x)
    q = Fraction(x).limit_denominator(1000)
    return q if abs(float(q) - x) <= 1e-9 * max(1.0, abs(x)) else x


def recognise(model: TypeAModel) -> CanonicalLabel | None:
    """The catalogue label whose normal form *equals* ``model``, if any."""
    for fam in _FAMILIES_BY_RANK[ricci_rank(model)]:
        params = tuple(_snap(p) for p in _READERS[fam](model)) if fam in _READERS else ()
        try:
            lab = CanonicalLabel(fam, params)
            target = canonical_model(lab)
        except DomainError:
            continue
        if model.is_exact and target.is_exact:
            if model == target:
                return lab
        elif model.close_to(target, MATCH_TOL):
            return lab
    return None


# -- candidate matrices --------------------------------------------------------

def _real_vec(v):
    return tuple(real_part(x) if is_exact(x) else complex(x).real for x in v)


def _imag_vec(v):
    return tuple(imag_part(x) if is_exact(x) else complex(x).imag for x in v)


def _sub(u, v):
    return (u[0] - v[0], u[1] - v[1])


def _A_from_L_images(src, dst):
    """``A = L^{-T}`` for the ``L`` with ``L src[k] = dst[k]``."""
    S = [[src[0][0], src[1][0]], [src[0][1], src[1][1]]]
    D = [[dst[0][0], dst[1][0]], [dst[0][1], dst[1][1]]]
    Linv = linalg.matmul(S, linalg.inv2(D))
    return linalg.transpose(Linv)


def _coeff(p, mono):
    for c, m, _ in p.terms:
        if m == mono:
            return c
    return _ZERO


def _linear_part(p):
    return tuple(real_part(_coeff(p, m)) if is_exact(_coeff(p, m)) else complex(_coeff(p, m)).real
                 for m in ((1, 0), (0, 1)))


def _quad_part(p):
    return tuple(real_part(_coeff(p, m)) if is_exact(_coeff(p, m)) else complex(_coeff(p, m)).real
                 for m in ((2, 0), (1, 1), (0, 2)))


def _norm(v) -> float:
    return max((abs(float(x)) for x in v), default=0.0)


def _nonzero(v) -> bool:
    return _norm(v) > 1e-9 if not all(is_exact(x) for x in v) else any(x != 0 for x in v)


def _sqrt(x):
    if is_exact(x) and x >= 0:
        n, d = math.isqrt(x.numerator), math.isqrt(x.denominator)
        if n * n == x.numerator and d * d == x.denominator:
            return Fraction(n, d)
    return math.sqrt(float(x))


def _candidates_three_real(lams):
    for p, q, r in permutations(range(3)):
        yield (lams[p], lams[q]), (E1, E2)                                   # M_1^2
        yield (_sub(lams[p], lams[q]), _sub(lams[r], lams[q])), (E2, (-_ONE, _ZERO))  # M_2^0, M_2^1


def _candidates_real_complex(lr, lc):
    alpha, beta = _real_vec(lc), _imag_vec(lc)
    for s in (_ONE, -_ONE):
        yield (alpha, beta), (E1, (_ZERO, s))                               # M_5^0, M_2^2
        yield (lr, beta), (E1, (_ZERO, s))                                  # M_5^1


def _candidates_double_simple(ld, n, ls):
    yield (ld, n), (E1, E2)                                                 # M_1^0
    yield (ls, n), (E2, E1)                                                 # M_3^0
    yield (ld, ls), (E2, (-_ONE, _ONE))                                     # M_1^1
    yield (_sub(ls, ld), n), (E2, E1)                                       # M_3^1
    yield (ld, ls), (E1, (_ONE, _ONE))                                      # M_3^2


def _rows_triple(lam, polys):
    """Candidate coordinate rows ``(y1, y2)`` for a single triple exponent."""
    quads = [(_quad_part(p), _linear_part(p)) for p in polys]
    quads = [qm for qm in quads if _nonzero(qm[0])]
    lam_zero = not _nonzero(lam)
    if not quads:
        if lam_zero:
            yield (E1, E2)                                                  # M_0^0
        else:
            yield (E1, lam)                                                 # M_4^1(0)
            yield (E2, lam)
        return
    (q11, q12, q22), m = max(quads, key=lambda qm: _norm(qm[0]))
    rows = [(q11, q12 / 2), (q12 / 2, q22)]
    ell = max(rows, key=_norm)
    kappa = q11 / (ell[0] * ell[0]) if abs(float(ell[0])) >= abs(float(ell[1])) else q22 / (ell[1] * ell[1])
    if lam_zero:                                                            # M_4^0
        yield (tuple(x / (2 * kappa) for x in m), ell)
        return
    cross = ell[0] * lam[1] - ell[1] * lam[0]
    if not _nonzero((cross,)):                                              # M_4^1(c), c != 0
        mu = ell[0] / lam[0] if abs(float(lam[0])) >= abs(float(lam[1])) else ell[1] / lam[1]
        yield (tuple(x / (2 * kappa * mu * mu) for x in m), lam)
        return
    # M_4^2: write m = alpha*lam + beta*ell
    try:
        alpha, _ = linalg.solve([[lam[0], ell[0]], [lam[1], ell[1]]], list(m))
    except SingularMatrix:
        return
    if not _nonzero((alpha,)):
        return
    t = _sqrt(abs(2 * kappa / alpha))
    yield (lam, tuple(t * x for x in ell))


def _candidate_matrices(model: TypeAModel):
    yield linalg.identity(2)
    clusters = exponent_clusters(model)
    real = [c for c in clusters if c.is_real]
    cplx = [c for c in clusters if not c.is_real]
    mults = sorted(c.multiplicity for c in real)
    try:
        if len(real) == 3:
            pairs = _candidates_three_real([_real_vec(c.exponent) for c in real])
        elif len(real) == 1 and len(cplx) == 2:
            lc = next(c.exponent for c in cplx if float(_imag_vec(c.exponent)[0] or 0) >= 0
                      and _nonzero(_imag_vec(c.exponent)))
            pairs = _candidates_real_complex(_real_vec(real[0].exponent), lc)
        elif mults == [1, 2]:
            dbl = next(c for c in real if c.multiplicity == 2)
            sgl = next(c for c in real if c.multiplicity == 1)
            n = max((_linear_part(p) for p in dbl.polys), key=_norm)
            pairs = _candidates_double_simple(_real_vec(dbl.exponent), n, _real_vec(sgl.exponent))
        elif mults == [3]:
            for rows in _rows_triple(_real_vec(real[0].exponent), real[0].polys):
                yield [list(rows[0]), list(rows[1])]
            return
        else:
            return
    except StopIteration:
        return
    for src, dst in pairs:
        try:
            yield _A_from_L_images(src, dst)
        except SingularMatrix:
            continue


# linear changes identifying a family member with its canonical representative
def _equivalence(lab: CanonicalLabel):
    fam, p = lab.family, lab.params
    if fam in ("M_5^1", "M_2^2"):
        return [[_ONE, _ZERO], [_ZERO, -_ONE]]
    if fam == "M_4^1" and p[0] != 0:
        return [[1 / p[0], _ZERO], [_ZERO, _ONE]]
    if fam == "M_2^1":
        return [[_ONE, _ONE], [_ZERO, -_ONE]]
    return None


def _same_label(a: CanonicalLabel, b: CanonicalLabel) -> bool:
    if a.family != b.family:
        return False
    return all((x == y) if is_exact(x) and is_exact(y) else abs(float(x) - float(y)) <= MATCH_TOL
               for x, y in zip(a.params, b.params))


def classify(model: TypeAModel) -> ClassifyResult:
    """Catalogue label of ``model`` with a matrix ``A`` realising it.

    ``linear_transform(model, A) == canonical_model(label)`` holds exactly when
    ``A`` is rational; irrational exponents force a float ``A`` and agreement
    within 1e-8.  The projective witness ``w`` is
    always zero: the classification is linear.
    """
    w0 = ProjectivePotential(0, 0)
    found = []
    for A in _candidate_matrices(model):
        try:
            T = linear_transform(model, A)
        except SingularMatrix:
            continue
        lab = recognise(T)
        if lab is None:
            continue
        canon = canonical_params(lab)
        if _same_label(canon, lab):
            return ClassifyResult(canon, A, w0)
        found.append((lab, canon, A))
    for lab, canon, A in found:
        E = _equivalence(lab)
        if E is None:
            continue
        A2 = linalg.matmul(E, A)
        lab2 = recognise(linear_transform(model, A2))
        if lab2 is not None and _same_label(lab2, canon):
            return ClassifyResult(lab2, A2, w0)
    if found:
        lab, _, A = found[0]
        return ClassifyResult(lab, A, w0)
    raise ClassifyError(f"no catalogue pattern matches {model}")

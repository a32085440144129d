"""The quasi-Einstein operator ``f -> H f + rho_s f`` and its kernel.

For a Type A model the kernel ``Q`` is found from the prolongation
``F = (f, d1 f, d2 f)``: a solution satisfies ``d_i F = B_i F`` with constant
3x3 matrices, and ``Q`` is the first component of ``exp(x1 B1 + x2 B2) F0``.
The joint generalised eigenspaces of the commuting pair ``(B1, B2)`` give
the exponents ``lambda`` and the polynomial parts (degree <= 2) of an
``exp(lambda.x) p(x)`` basis.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from . import linalg
from .connection import SymBilinear, TypeAModel, as_connection, hessian, ricci_general, ricci_type_a
from .errors import DimensionError
from .exp_poly import ExpPoly, FuncSpan, span_canonicalize
from .polyroots import poly_roots
from .scalars import CRat, conj, imag_part, is_exact, simplify

MEMBER_TOL = 1e-10
_GRID = np.linspace(-2.0, 2.0, 10)
_SPLIT_PARAMS = (Fraction(1, 3), Fraction(2, 7), Fraction(-5, 11), Fraction(3, 13),
                 Fraction(7, 17), Fraction(-4, 19), Fraction(11, 23))


@dataclass(frozen=True)
class QeResidual:
    tensor: SymBilinear
    exact_zero: bool
    max_abs: float
    scale: float = 0.0    # grid supremum of the terms making up the residual

    @property
    def vanishes(self) -> bool:
        return self.exact_zero or self.max_abs <= MEMBER_TOL * (1.0 + self.scale)


def _grid_max(fs) -> float:
    X1, X2 = np.meshgrid(_GRID, _GRID)
    worst = 0.0
    for v in fs:
        if v.is_zero():
            continue
        try:
            vals = v.evaluate(X1, X2)
        except (OverflowError, FloatingPointError):
            return float("inf")
        worst = max(worst, float(np.max(np.abs(vals))))
    return worst


def qe_apply(conn, f: ExpPoly) -> QeResidual:
    """Residual ``H f + rho_s f`` with the symmetrised Ricci tensor."""
    conn = as_connection(conn)
    rho_s = ricci_general(conn).sym()
    t = hessian(conn, f) + rho_s * f
    if t.is_zero():
        return QeResidual(t, True, 0.0)
    parts = [f, f.derive(1), f.derive(2)] + [f.derive(i).derive(j) for i in (1, 2) for j in (i, 2)]
    return QeResidual(t, False, _grid_max(v for row in t.entries for v in row), _grid_max(parts))


def qe_member(conn, f: ExpPoly) -> bool:
    return qe_apply(conn, f).vanishes


# ---------------------------------------------------------------------------
# Type A solver
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExponentCluster:
    """Joint eigenvalue ``exponent`` of (d1, d2) on Q with its polynomial parts."""

    exponent: tuple
    multiplicity: int
    polys: tuple          # polynomial parts p with exp(exponent.x) p in Q_C

    @property
    def is_real(self) -> bool:
        return all(imag_part(v) == 0 if is_exact(v) else abs(complex(v).imag) < 1e-10
                   for v in self.exponent)


def prolongation_matrices(model: TypeAModel):
    """The constant matrices ``B1, B2`` of ``d_i (f, d1 f, d2 f) = B_i (...)``."""
    rho = ricci_type_a(model).matrix()
    zero, one = Fraction(0), Fraction(1)
    out = []
    for i in range(2):
        rows = [[zero, one if i == 0 else zero, one if i == 1 else zero]]
        for j in range(2):
            rows.append([-rho[i][j], model.christoffel(i, j, 0), model.christoffel(i, j, 1)])
        out.append(rows)
    return out


def _charpoly3(c):
    tr = c[0][0] + c[1][1] + c[2][2]
    minors = (c[0][0] * c[1][1] - c[0][1] * c[1][0] + c[0][0] * c[2][2] - c[0][2] * c[2][0]
              + c[1][1] * c[2][2] - c[1][2] * c[2][1])
    det = (c[0][0] * (c[1][1] * c[2][2] - c[1][2] * c[2][1])
           - c[0][1] * (c[1][0] * c[2][2] - c[1][2] * c[2][0])
           + c[0][2] * (c[1][0] * c[2][1] - c[1][1] * c[2][0]))
    return [Fraction(1) if is_exact(tr) else 1.0, -tr, minors, -det]


def _matpow(a, n):
    out = a
    for _ in range(n - 1):
        out = linalg.matmul(out, a)
    return out


def _exact_block(B, C, kappa, m):
    """Generalised eigenspace data in exact arithmetic."""
    shifted = [[C[i][j] - (kappa if i == j else 0) for j in range(3)] for i in range(3)]
    V = linalg.nullspace(_matpow(shifted, m), 0)       # list of column vectors
    if len(V) != m:
        return None
    Vm = linalg.transpose(V)                             # 3 x m
    rows = next(S for S in combinations(range(3), m)
                if linalg.rank([Vm[r] for r in S], 0) == m)
    sub = [Vm[r] for r in rows]
    Xs = []
    for Bi in B:
        BV = linalg.matmul(Bi, Vm)
        cols = [linalg.solve(sub, [BV[r][c] for r in rows], 0) for c in range(m)]
        Xs.append(linalg.transpose(cols))
    return Vm[0], Xs


def _float_block(B, C, kappa, m, real: bool):
    """Oblique projection onto the generalised eigenspace of ``C`` at ``kappa``.

    With right and left bases ``V, W`` the compressions
    ``X = (W^H V)^{-1} W^H B V`` are second-order accurate in the error of
    ``kappa``, which is refined once from the compressed ``C``.
    """
    dtype = float if real else complex
    Cf = np.array([[complex(v) for v in row] for row in C])
    Bf = [np.array([[complex(v) for v in row] for row in Bi]) for Bi in B]
    if real:
        Cf, Bf = Cf.real, [b.real for b in Bf]
        kappa = complex(kappa).real
    for _ in range(2):
        shifted = np.linalg.matrix_power(Cf - kappa * np.eye(3), m)
        _, _, vh = np.linalg.svd(shifted)
        V = vh[-m:].conj().T.astype(dtype)
        u, _, _ = np.linalg.svd(shifted)
        W = u[:, -m:].astype(dtype)
        G = W.conj().T @ V
        if np.linalg.cond(G) > 1e8:
            return None
        Ginv = np.linalg.inv(G)
        kappa = np.trace(Ginv @ W.conj().T @ Cf @ V) / m
        if real:
            kappa = kappa.real
    Xs = [(Ginv @ W.conj().T @ b @ V).tolist() for b in Bf]
    return list(V[0]), Xs


def _nilpotent(N, m, scale) -> bool:
    P = _matpow(N, m)
    if all(is_exact(v) for row in P for v in row):
        return all(v == 0 for row in P for v in row)
    return max(abs(complex(v)) for row in P for v in row) <= 1e-6 * max(1.0, scale) ** m


def _row_times(r, M):
    return [sum((r[k] * M[k][j] for k in range(len(r))), 0 * r[0]) for j in range(len(M[0]))]


def _cluster_functions(v0, Xs, m):
    lam = tuple(simplify(sum((Xs[i][k][k] for k in range(m)), 0 * Xs[i][0][0]) / m) for i in range(2))
    N = [[[Xs[i][r][c] - (lam[i] if r == c else 0) for c in range(m)] for r in range(m)] for i in range(2)]
    half = Fraction(1, 2)
    r1 = _row_times(v0, N[0])
    r2 = _row_times(v0, N[1])
    r11 = [half * v for v in _row_times(r1, N[0])]
    r12 = _row_times(r1, N[1])
    r22 = [half * v for v in _row_times(r2, N[1])]
    monos = ((0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2))
    polys = []
    for j in range(m):
        coeffs = (v0[j], r1[j], r2[j], r11[j], r12[j], r22[j])
        polys.append(ExpPoly.raw((simplify(c), mono, (Fraction(0), Fraction(0)))
                                 for c, mono in zip(coeffs, monos)))
    return lam, N, polys


def exponent_clusters(model: TypeAModel) -> list[ExponentCluster]:
    """Joint spectrum of (d1, d2) acting on Q(model), conjugate pairs included."""
    B = prolongation_matrices(model)
    comm = [[a - b for a, b in zip(r1, r2)]
            for r1, r2 in zip(linalg.matmul(B[0], B[1]), linalg.matmul(B[1], B[0]))]
    scale = max(1.0, max(abs(complex(v)) for Bi in B for row in Bi for v in row))
    if model.is_exact:
        if any(v != 0 for row in comm for v in row):
            raise DimensionError("prolongation matrices do not commute; dim Q < 3")
    elif max(abs(complex(v)) for row in comm for v in row) > 1e-8 * scale ** 2:
        raise DimensionError("prolongation matrices do not commute; dim Q < 3")

    for t in _SPLIT_PARAMS:
        C = [[B[0][i][j] + t * B[1][i][j] for j in range(3)] for i in range(3)]
        roots = poly_roots(_charpoly3(C))
        clusters = []
        ok = True
        for kappa, m in roots:
            if not is_exact(kappa) and isinstance(kappa, complex) and kappa.imag < 0:
                continue
            if isinstance(kappa, CRat) and kappa.im < 0:
                continue
            real = imag_part(kappa) == 0 if is_exact(kappa) else not isinstance(kappa, complex)
            if model.is_exact and is_exact(kappa):
                blk = _exact_block(B, C, kappa, m)
            else:
                blk = _float_block(B, C, kappa, m, real)
            if blk is None:
                ok = False
                break
            v0, Xs = blk
            lam, N, polys = _cluster_functions(v0, Xs, m)
            if not all(_nilpotent(Ni, m, scale) for Ni in N):
                ok = False
                break
            clusters.append(ExponentCluster(lam, m, tuple(polys)))
            if not real:
                clusters.append(ExponentCluster(tuple(conj(v) for v in lam), m,
                                                tuple(p.conj() for p in polys)))
        if ok and sum(c.multiplicity for c in clusters) == 3:
            return clusters
    raise DimensionError("could not separate the joint spectrum of the prolongation")


def qe_solve_type_a(model: TypeAModel) -> FuncSpan:
    """Basis of Q(model) in reduced row-echelon form (always 3-dimensional)."""
    funcs = []
    for cl in exponent_clusters(model):
        lam = cl.exponent
        if not cl.is_real and not (imag_part(lam[0]) > 0 or (imag_part(lam[0]) == 0 and imag_part(lam[1]) > 0)):
            continue
        e = ExpPoly.exp(*lam) if cl.is_real else ExpPoly.raw([(Fraction(1), (0, 0), lam)])
        for p in cl.polys:
            f = e * p
            if cl.is_real:
                funcs.append(ExpPoly(_realify(f).terms))
            else:
                funcs.append(ExpPoly(f.real_part().terms))
                funcs.append(ExpPoly(f.imag_part().terms))
    span = span_canonicalize(funcs)
    if span.dim != 3:
        raise DimensionError(f"assembled solution space has dimension {span.dim}, expected 3")
    return span


def _realify(f: ExpPoly) -> ExpPoly:
    """Drop floating imaginary round-off from a function with real exponents."""
    out = []
    for c, mono, lam in f.terms:
        lam = tuple(v if is_exact(v) else complex(v).real for v in lam)
        if not is_exact(c):
            c = complex(c).real
        out.append((c, mono, lam))
    return ExpPoly.raw(out)

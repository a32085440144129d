"""Small dense linear algebra over exact or floating scalars.

Matrices are lists of rows.  With ``tol == 0`` the arithmetic is exact and
pivots are the first nonzero entry; otherwise partial pivoting is used and
entries below ``tol`` count as zero.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import SingularMatrix
from .scalars import is_exact


def all_exact(rows) -> bool:
    return all(is_exact(v) for row in rows for v in row)


def default_tol(rows) -> float:
    return 0.0 if all_exact(rows) else 1e-9


def rref(rows, tol: float | None = None):
    """Reduced row-echelon form.  Returns ``(matrix, pivot_columns)``."""
    m = [list(r) for r in rows]
    if tol is None:
        tol = default_tol(m)
    if not m:
        return m, []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        if r >= len(m):
            break
        if tol == 0:
            piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        else:
            piv = max(range(r, len(m)), key=lambda i: abs(m[i][c]))
            if abs(m[piv][c]) <= tol:
                piv = None
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        m[r] = [v / p for v in m[r]]
        for i in range(len(m)):
            if i != r:
                f = m[i][c]
                if (f != 0) if tol == 0 else (abs(f) > 0):
                    m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    if tol:
        for row in m:
            for j, v in enumerate(row):
                if abs(v) <= tol * 1e-3:
                    row[j] = 0.0
    return m[:r], pivots


def rank(rows, tol: float | None = None) -> int:
    return len(rref(rows, tol)[1])


def nullspace(rows, tol: float | None = None):
    """Basis (list of column vectors) of the right null space."""
    ncols = len(rows[0])
    red, piv = rref(rows, tol)
    free = [c for c in range(ncols) if c not in piv]
    zero = Fraction(0) if (tol == 0 or (tol is None and all_exact(rows))) else 0.0
    one = zero + 1
    basis = []
    for fc in free:
        v = [zero] * ncols
        v[fc] = one
        for r, pc in enumerate(piv):
            v[pc] = -red[r][fc]
        basis.append(v)
    return basis


def matmul(a, b):
    return [[sum((a[i][k] * b[k][j] for k in range(len(b))), 0 * a[0][0])
             for j in range(len(b[0]))] for i in range(len(a))]


def matvec(a, v):
    return [sum((a[i][k] * v[k] for k in range(len(v))), 0 * a[0][0]) for i in range(len(a))]


def transpose(a):
    return [list(col) for col in zip(*a)]


def identity(n, one=Fraction(1)):
    zero = one - one
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def det2(a):
    return a[0][0] * a[1][1] - a[0][1] * a[1][0]


def inv2(a):
    d = det2(a)
    if (d == 0) if is_exact(d) else abs(d) < 1e-14:
        raise SingularMatrix(f"matrix {a} is singular")
    return [[a[1][1] / d, -a[0][1] / d], [-a[1][0] / d, a[0][0] / d]]


def solve(a, b, tol: float | None = None):
    """Solve the square system ``a x = b`` (b a vector)."""
    n = len(a)
    aug = [list(a[i]) + [b[i]] for i in range(n)]
    red, piv = rref(aug, tol)
    if piv != list(range(n)):
        raise SingularMatrix("system is singular")
    return [red[i][n] for i in range(n)]

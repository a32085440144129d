import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, strategies as st

from afflab import linalg
from afflab.errors import SingularMatrix
from afflab.polyroots import poly_roots
from afflab.scalars import CRat, exact, format_scalar

from conftest import gl2, rationals


def test_roots_exact():
    # (x - 1)^2 (x + 1/2)
    roots = dict(poly_roots([1, 0 - F(3, 2), 0, F(1, 2)]))
    assert roots == {F(1): 2, F(-1, 2): 1}
    # x^2 + 1
    roots = poly_roots([1, 0, 1])
    assert {complex(r) for r, _ in roots} == {1j, -1j}
    assert all(isinstance(r, CRat) for r, _ in roots)


def test_roots_irrational():
    roots = sorted(complex(r).real for r, _ in poly_roots([1, 0, -2]))
    assert roots == pytest.approx([-math.sqrt(2), math.sqrt(2)], abs=1e-15)


@given(rationals(), rationals(), rationals())
def test_rational_roots_recovered(a, b, c):
    # (x - a)(x - b)(x - c)
    coeffs = [1, -(a + b + c), a * b + b * c + a * c, -a * b * c]
    got = {}
    for r, m in poly_roots(coeffs):
        got[r] = got.get(r, 0) + m
    want = {}
    for r in (a, b, c):
        want[r] = want.get(r, 0) + 1
    assert got == want


@given(st.lists(st.floats(-5, 5), min_size=3, max_size=3))
def test_float_roots_are_roots(cs):
    coeffs = [1.0] + cs
    for r, m in poly_roots(coeffs):
        val = np.polyval(coeffs, complex(r))
        assert abs(val) < 1e-6 * (1 + abs(complex(r))) ** 3


def test_linalg():
    A = [[F(1), F(2)], [F(3), F(4)]]
    assert linalg.matmul(A, linalg.inv2(A)) == linalg.identity(2)
    assert linalg.rank([[1, 2, 3], [2, 4, 6]], 0) == 1
    ns = linalg.nullspace([[F(1), F(1), F(0)]], 0)
    assert len(ns) == 2 and all(v[0] + v[1] == 0 for v in ns)
    with pytest.raises(SingularMatrix):
        linalg.inv2([[1, 2], [2, 4]])


@given(gl2(), st.tuples(rationals(), rationals()))
def test_solve_exact(A, b):
    x = linalg.solve(A, list(b), 0)
    assert linalg.matvec(A, x) == list(b)


def test_scalars():
    assert exact("-0.5") == F(-1, 2)
    assert exact(3) == F(3) and exact(0.25) == 0.25
    assert format_scalar(F(-7, 3)) == "-7/3" and format_scalar(F(4)) == "4"
    with pytest.raises(ValueError):
        exact(float("nan"))
    z = CRat(1, 2) * CRat(1, -2)
    assert z == F(5)

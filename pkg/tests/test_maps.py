from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from afflab.catalogue import canonical_model, label
from afflab.connection import TypeAModel, geometry_n
from afflab.errors import SingularJacobian, UnknownMap
from afflab.exp_poly import ExpPoly
from afflab.maps import (MAP_NAMES, MapSpec, affine_residual, catalogue_map, grid_points,
                         residual_is_exact_zero, verify_affine_map)


def test_map_examples():
    m4 = catalogue_map(4)
    assert m4.components == (ExpPoly.x2(), ExpPoly.x2() * ExpPoly.x2() + 2 * ExpPoly.x1())
    assert m4.source == canonical_model(label("M_4^0")).lift()
    m9 = catalogue_map(9, 3)
    assert m9.target == canonical_model(label("M_4^1", 0)).lift()
    phi = catalogue_map("Phi_N")
    assert phi.target.gamma(1, 1, 0) == ExpPoly.x1()


def test_residual_examples():
    flat = TypeAModel().lift()
    ident = MapSpec((ExpPoly.x1(), ExpPoly.x2()), flat, flat, "id")
    assert verify_affine_map(ident) == 0
    assert residual_is_exact_zero(catalogue_map(3))
    assert verify_affine_map(catalogue_map(9, 1)) < 1e-12


@pytest.mark.parametrize("name", MAP_NAMES)
def test_every_map_is_affine(name):
    assert verify_affine_map(catalogue_map(name), grid_points(5)) < 1e-9


@pytest.mark.parametrize("params", [(0, 1, 0, 0), (1, 0, 2, 1)])
def test_psi(params):
    assert verify_affine_map(catalogue_map("Psi", *params)) < 1e-9


def test_errors():
    with pytest.raises(UnknownMap):
        catalogue_map(11)
    with pytest.raises(UnknownMap):
        catalogue_map(7, 1, 2)
    flat = TypeAModel().lift()
    degenerate = MapSpec((ExpPoly.x1(), ExpPoly.x1()), flat, flat, "fold")
    with pytest.raises(SingularJacobian):
        verify_affine_map(degenerate)


def test_non_affine_map_is_caught():
    flat = TypeAModel().lift()
    square = MapSpec((ExpPoly.x1() + ExpPoly.x2() * ExpPoly.x2(), ExpPoly.x2()), flat, flat, "sq")
    assert verify_affine_map(square) > 0.5
    assert not residual_is_exact_zero(square)


params = st.fractions(-3, 3, max_denominator=5)


@given(params.filter(lambda c: c not in (0, -1)))
def test_map7_family(c1):
    assert residual_is_exact_zero(catalogue_map(7, c1))


@given(params)
def test_map9_and_10_families(c):
    assert residual_is_exact_zero(catalogue_map(9, c))
    assert residual_is_exact_zero(catalogue_map(10, c))


@given(params.filter(lambda c: c not in (0, -1)))
def test_map8_family(c1):
    assert verify_affine_map(catalogue_map(8, c1)) < 1e-9

import random
from fractions import Fraction as F

import pytest
from hypothesis import given

from afflab.catalogue import canonical_model, canonical_params, label, parameter_grid
from afflab.classify import classify, recognise
from afflab.connection import TypeAModel
from afflab.projective import linear_transform

from conftest import gammas, gl2


def test_examples():
    res = classify(TypeAModel(0, 0, F(-1, 2), 0, 0, 0))
    assert str(res.label) == "M_3^1(-1/2)"
    assert res.A == [[1, 0], [0, 1]] and tuple(res.w) == (0, 0)
    # projective_change(M_0^0, (1, 0)) is not flat; it is linearly M_4^1(0)
    assert str(classify(TypeAModel(2, 0, 0, 1, 0, 0)).label) == "M_4^1(0)"


def test_scrambled_m22():
    A = [[F(2), F(-1)], [F(1), F(3)]]
    res = classify(linear_transform(canonical_model(label("M_2^2", -1, 1)), A))
    assert res.label == label("M_2^2", -1, 1)


def _scramble(rng):
    while True:
        a = [[F(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(2)] for _ in range(2)]
        if a[0][0] * a[1][1] - a[0][1] * a[1][0] != 0:
            return a


@pytest.mark.parametrize("lab", parameter_grid(), ids=str)
def test_round_trip(lab):
    rng = random.Random(str(lab))
    want = canonical_params(lab)
    for _ in range(3):
        m = linear_transform(canonical_model(lab), _scramble(rng))
        res = classify(m)
        assert res.label == want
        assert linear_transform(m, res.A) == canonical_model(res.label)


@given(gammas(), gl2())
def test_label_is_linear_invariant(g, A):
    m = TypeAModel(*g)
    res = classify(m)
    assert linear_transform(m, res.A).close_to(canonical_model(res.label), 1e-8)
    other = classify(linear_transform(m, A)).label
    assert other.family == res.label.family
    assert all(abs(float(p) - float(q)) <= 1e-8 * max(1.0, abs(float(p)))
               for p, q in zip(other.params, res.label.params))


def test_recognise_rejects_non_normal_forms():
    assert recognise(TypeAModel(1, 2, 3, 4, 5, 6)) is None

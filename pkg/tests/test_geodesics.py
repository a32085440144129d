import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, strategies as st

from afflab.catalogue import canonical_model, label
from afflab.closed_forms import SAMPLES, closed_form_geodesic
from afflab.connection import TypeAModel, geometry_n
from afflab.errors import ParamDomainError
from afflab.geodesics import BLOWUP, REACHED, geodesic_residual, integrate, ricci_diagnostic

M11 = canonical_model(label("M_1^1"))
M31_HALF = canonical_model(label("M_3^1", F(-1, 2)))


def test_flat_line():
    tr = integrate(TypeAModel(), (0, 0), (1, 2), 10)
    assert tr.termination.kind == REACHED
    assert np.allclose(tr.x, np.outer(tr.t, [1, 2]), atol=1e-12)


def test_m11_backward_blow_up():
    tr = integrate(M11, (0, 0), (0, 0.5), -2)
    assert tr.termination.kind == BLOWUP
    assert abs(tr.termination.t_star + 1) < 1e-3
    assert tr.residual_max < 1e-6


def test_m31_half_is_exponential_not_blow_up():
    tr = integrate(M31_HALF, (0, 0), (1, 1), 20)
    assert tr.termination.kind == REACHED
    assert np.allclose(tr.position_at(2.0), [math.e ** 2 - 1, 2], atol=1e-6)


def test_n_is_bounded():
    tr = integrate(geometry_n(), (0, 0), (1, 1), 50)
    assert tr.termination.kind == REACHED
    assert np.max(np.abs(tr.x[:, 0])) <= 1 + 1e-9


def test_closed_form_values():
    assert np.allclose(closed_form_geodesic("M41-log", 2).pos(1.0), [0, 0])
    assert np.allclose(closed_form_geodesic("M31-half-exp", 1, 1).pos(2.0), [math.e ** 2 - 1, 2])
    assert np.allclose(closed_form_geodesic("M22-log", 0, 1).pos(math.e), [1, 0])
    with pytest.raises(ParamDomainError):
        closed_form_geodesic("M51-log", 0)
    with pytest.raises(ParamDomainError):
        closed_form_geodesic("nope")


@pytest.mark.parametrize("case,params", SAMPLES)
def test_closed_forms_are_geodesics(case, params):
    cf = closed_form_geodesic(case, *params)
    lo, hi = cf.middle()
    ts = np.linspace(lo, hi, 50)
    for m in cf.models:
        assert geodesic_residual(m, cf, ts) < 1e-10


def test_wrong_model_residual():
    cf = closed_form_geodesic("M31-half-exp", 1, 1)
    assert geodesic_residual(M11, cf, [1.0]) > 0.1
    line = closed_form_geodesic("N-sin", 1, 0)
    assert geodesic_residual(TypeAModel(), line, np.linspace(-1, 1, 5)) == 0


@pytest.mark.parametrize("case,params", SAMPLES)
def test_integrator_reproduces_closed_forms(case, params):
    cf = closed_form_geodesic(case, *params)
    lo, hi = cf.middle()
    t0 = cf.t0 if lo <= cf.t0 <= hi else 0.5 * (lo + hi)
    x0, u0 = cf.pos(t0), cf.vel(t0)
    for m in cf.models:
        worst = 0.0
        for end in (hi, lo):
            tr = integrate(m, x0, u0, end - t0, t0=t0)
            for t in np.linspace(t0, end, 25):
                worst = max(worst, float(np.max(np.abs(tr.position_at(t) - cf.pos(t)))))
        assert worst < 1e-6


def test_ricci_diagnostic_along_m11():
    tr = integrate(M11, (0, 0), (0, 0.5), -2)
    d = ricci_diagnostic(M11, tr)
    assert np.allclose(d[:, 2], np.abs(tr.u[:, 1]))
    assert d[-1, 2] > 1e6
    flat = integrate(TypeAModel(), (0, 0), (1, 1), 5)
    assert not np.any(ricci_diagnostic(TypeAModel(), flat)[:, 1:])


def test_csv():
    tr = integrate(TypeAModel(), (0, 0), (1, 0), 1)
    lines = tr.to_csv().splitlines()
    assert lines[0] == "t,x1,x2,u1,u2" and len(lines) == len(tr.t) + 1


angle = st.floats(0, 2 * math.pi)
shift = st.floats(-2, 2)


@given(angle, shift, shift)
def test_translation_invariance(a, p1, p2):
    m = canonical_model(label("M_2^2", 2, 3))
    u = (math.cos(a), math.sin(a))
    base = integrate(m, (0, 0), u, 0.3)
    moved = integrate(m, (p1, p2), u, 0.3)
    assert moved.termination.kind == base.termination.kind
    t = 0.9 * min(base.t_end, moved.t_end)       # some rays blow up before 0.3
    assert np.allclose(moved.position_at(t), base.position_at(t) + [p1, p2], atol=1e-9)


@given(angle, st.sampled_from([0, 1, 2]))
def test_u2_keeps_sign_on_complete_family(a, b2):
    m = canonical_model(label("M_2^2", -1, b2))
    tr = integrate(m, (0, 0), (math.cos(a), math.sin(a)), 8)
    assert tr.termination.kind == REACHED
    # round-off at the integrator's absolute tolerance can flip a vanishing u2
    assert np.all(tr.u[:, 1] * math.copysign(1, tr.u[0, 1]) >= -1e-9)


@given(angle, st.sampled_from([1, -1]))
def test_geodesics_reverse(a, sign):
    # the backward trace of u is the forward trace of -u
    u = np.array([math.cos(a), math.sin(a)])
    m = canonical_model(label("M_4^2", sign))
    f = integrate(m, (0, 0), -u, 0.2)
    b = integrate(m, (0, 0), u, -0.2)
    assert np.allclose(f.position_at(0.2), b.position_at(-0.2), atol=1e-9)

import math
import random
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, strategies as st

from afflab.catalogue import canonical_model, label, q_catalogue
from afflab.completeness import (COMPLETABLE, COMPLETE, ESSENTIALLY_INCOMPLETE, UNRESOLVED,
                                 collinearity_check, completeness_probe, projective_coordinates,
                                 tau_family, verdict)
from afflab.errors import FactorError, ParamDomainError
from afflab.exp_poly import ExpPoly, FuncSpan
from afflab.geodesics import integrate


def test_verdict_examples():
    assert verdict(label("M_3^1", F(-1, 2))).kind == COMPLETE
    v = verdict(label("M_2^1", F(-1, 2)))
    assert v.kind == COMPLETABLE and v.target == label("M_3^1", F(-1, 2))
    assert verdict(label("M_4^2", 1)).kind == ESSENTIALLY_INCOMPLETE
    assert verdict(label("M_5^0")).kind == UNRESOLVED
    assert verdict(label("M_5^1", 0)).target == label("N")
    for fam in ("M_1^0", "M_2^0", "M_3^0"):
        assert verdict(label(fam)).target == label("M_0^0")
    with pytest.raises(ParamDomainError):
        verdict(label("M_2^1", 0))


@pytest.mark.parametrize("lab", [label("M_2^2", -1, 1), label("M_4^0")], ids=str)
def test_probe_complete(lab):
    rep = completeness_probe(lab, n=16)
    assert rep.all_reached and rep.agrees_with_table


def test_probe_m11():
    rep = completeness_probe(label("M_1^1"), n=16)
    assert rep.blowups() and rep.agrees_with_table
    assert rep.ricci_max > 1e6


def test_probe_rejects_small_fans():
    with pytest.raises(ParamDomainError):
        completeness_probe(label("M_0^0"), n=4)


def test_tau_family_examples():
    fam = tau_family(0, 1, 1)
    tau = np.linspace(-3, 3, 13)
    assert np.allclose(fam.u1(tau), 0.5 * np.sin(tau) + np.cos(tau))
    assert np.allclose(fam.u2(tau), -2 * np.sin(tau) + np.cos(tau))
    assert np.max(fam.residual(tau)) < 1e-14
    fam = tau_family(1, 0, 1)
    assert fam.u1(0.0) == 0 and fam.u2(0.0) == 1
    # b = 0: tau' = u2 = 0 keeps tau at 0, so the velocity is constant in t
    still = tau_family(0, 1, 0)
    _, tau_t = still.integrate_tau(10.0)
    assert np.all(tau_t == 0)
    assert np.allclose(still.u1(tau_t), 1) and np.allclose(still.u2(tau_t), 0)
    with pytest.raises(ParamDomainError):
        tau_family(0, 0, 0)


@pytest.mark.parametrize("b2,a,b", [(0, 1, 1), (1, 0, 1), (2, 1, -1)])
def test_tau_family_along_integration(b2, a, b):
    fam = tau_family(b2, a, b)
    t, tau = fam.integrate_tau(20.0)
    assert np.max(fam.residual(tau)) < 1e-10
    assert np.ptp(tau) <= math.pi
    tr = integrate(fam.model(), (0, 0), (a, b), 20.0)
    for tk, sk in zip(t[::40], tau[::40]):
        assert np.allclose(tr.state_at(tk)[2:], [fam.u1(sk), fam.u2(sk)], atol=1e-8)


def test_collinearity_examples():
    flat = canonical_model(label("M_0^0"))
    tr = integrate(flat, (0, 0), (1, 2), 3)
    assert collinearity_check(tr, q_catalogue(label("M_0^0"))) < 1e-12
    m20 = canonical_model(label("M_2^0"))
    tr = integrate(m20, (0, 0), (0.3, -0.4), 1.5)
    span = FuncSpan((ExpPoly.const(1), ExpPoly.exp(0, 1), ExpPoly.exp(-1, 0)))
    assert collinearity_check(tr, span) < 1e-6
    lab = label("M_3^1", F(-1, 2))
    tr = integrate(canonical_model(lab), (0, 0), (1, 1), 3)
    assert collinearity_check(tr, q_catalogue(lab)) < 1e-6


def test_projective_coordinates_need_a_nonvanishing_element():
    x1 = ExpPoly.x1()
    with pytest.raises(FactorError):
        projective_coordinates(FuncSpan((ExpPoly.cos(0, 1), ExpPoly.sin(0, 1), x1)))


@given(st.floats(0, 2 * math.pi), st.sampled_from(["M_1^1", "M_2^0", "M_4^0", "M_5^0"]))
def test_collinearity_random_rays(a, fam):
    lab = label(fam)
    tr = integrate(canonical_model(lab), (0, 0), (math.cos(a), math.sin(a)), 2.0)
    assert collinearity_check(tr, q_catalogue(lab)) < 1e-6

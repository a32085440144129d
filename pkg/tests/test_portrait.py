from fractions import Fraction as F

import numpy as np
import pytest

from afflab.catalogue import label
from afflab.errors import DomainError
from afflab.portrait import PortraitSpec, cmd_portrait, render


def test_flat_rays_are_straight():
    p = render(PortraitSpec(label("M_0^0"), rays=8))
    assert len(p.polylines) == 8 and p.svg.count("<polyline") == 8
    for k, pts in enumerate(p.polylines):
        pts = np.array(pts)
        d = np.array([np.cos(2 * np.pi * k / 8), np.sin(2 * np.pi * k / 8)])
        cross = pts[:, 0] * d[1] - pts[:, 1] * d[0]
        assert np.max(np.abs(cross)) < 1e-9
        assert np.max(np.abs(pts)) == pytest.approx(3.0)


def test_n_rays_oscillate_boundedly():
    p = render(PortraitSpec(label("N")))
    assert p.blowups == 0
    for pts in p.polylines:
        assert max(abs(q[0]) for q in pts) <= 3.0


def test_complete_family_has_no_blow_ups():
    assert render(PortraitSpec(label("M_2^2", -1, 2))).blowups == 0


def test_deterministic_and_written(tmp_path):
    out = tmp_path / "m.svg"
    p = cmd_portrait(PortraitSpec(label("M_3^1", F(-1, 2)), out=str(out)))
    assert out.read_text() == p.svg == render(PortraitSpec(label("M_3^1", F(-1, 2)))).svg
    assert p.svg.startswith("<svg")


def test_spec_validation():
    with pytest.raises(DomainError):
        PortraitSpec(label("N"), view=(1, 1, 0, 2))
    with pytest.raises(DomainError):
        PortraitSpec(label("N"), rays=3)

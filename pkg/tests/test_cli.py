import json
import subprocess
import sys

import pytest

from afflab.catalogue import canonical_model, label
from afflab.cli import main
from afflab.projective import linear_transform


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verdict(capsys):
    code, out, err = run(capsys, "verdict", "--label", "M_3^1", "--params", "-0.5")
    assert code == 0 and json.loads(out)["kind"] == "Complete"
    assert "Complete" in err


def test_ricci_zero(capsys):
    code, out, _ = run(capsys, "ricci", "--gamma", "0,0,0,0,0,0")
    rep = json.loads(out)
    assert code == 0 and rep["ricci"] == [["0", "0"], ["0", "0"]] and rep["rank"] == 0


def test_classify_scrambled(capsys):
    m = linear_transform(canonical_model(label("M_2^2", -1, 1)), [[2, -1], [1, 3]])
    code, out, _ = run(capsys, "classify", "--model", json.dumps(m.to_json()))
    rep = json.loads(out)
    assert code == 0 and rep["label"] == "M_2^2" and rep["params"] == ["-1", "1"]
    assert rep["residual"] == 0 and rep["w"] == ["0", "0"]


def test_flatten_and_qsolve(capsys):
    code, out, _ = run(capsys, "flatten", "--label", "M_3^1", "--params", "1/3")
    assert code == 0 and json.loads(out)["w"] == ["0", "-1/3"]
    code, out, _ = run(capsys, "qsolve", "--gamma", "0,0,0,0,0,0")
    assert code == 0 and json.loads(out)["dim"] == 3


def test_qcheck_exit_codes(capsys):
    assert run(capsys, "qcheck", "--gamma", "0,0,0,0,0,1", "--fn", "exp(x2)")[0] == 0
    assert run(capsys, "qcheck", "--gamma", "0,0,0,0,0,0", "--fn", "exp(x1)")[0] == 3
    model = json.dumps({"type": "general", "christoffel": {"22_1": "x1"}})
    assert run(capsys, "qcheck", "--model", model, "--fn", "x1")[0] == 0


def test_geodesic_csv(capsys, tmp_path):
    csv = tmp_path / "g.csv"
    code, out, _ = run(capsys, "geodesic", "--label", "M_1^1", "--u0", "0,0.5", "--tmax", "-2",
                       "--csv", str(csv))
    rep = json.loads(out)
    assert code == 0 and rep["termination"]["kind"] == "BlowUp"
    assert abs(rep["termination"]["t_star"] + 1) < 1e-3
    assert csv.read_text().startswith("t,x1,x2,u1,u2\n")


def test_probe_json(capsys, tmp_path):
    path = tmp_path / "r.json"
    code, out, _ = run(capsys, "probe", "--label", "M_2^2", "--params", "-1,1", "--rays", "16",
                       "--json", str(path))
    assert code == 0 and json.loads(out)["all_reached"]
    assert len(json.loads(path.read_text())["fan"]) >= 16


def test_maps_verify(capsys):
    code, out, _ = run(capsys, "maps", "verify", "--name", "all", "--grid", "5")
    assert code == 0 and all(r["ok"] for r in json.loads(out)["maps"])
    code, out, _ = run(capsys, "maps", "verify", "--name", "Psi", "--params", "1,0,2,1")
    assert code == 0


def test_portrait(capsys, tmp_path):
    svg = tmp_path / "n.svg"
    code, out, _ = run(capsys, "portrait", "--label", "N", "--svg", str(svg), "--rays", "8")
    assert code == 0 and json.loads(out)["blowups"] == 0
    assert svg.read_text().count("<polyline") == 8


def test_out_flag(capsys, tmp_path):
    path = tmp_path / "v.json"
    code, out, _ = run(capsys, "verdict", "--label", "M_4^2", "--params", "1", "--out", str(path))
    assert code == 0 and out == ""
    assert json.loads(path.read_text())["kind"] == "EssentiallyIncomplete"


def test_domain_errors(capsys):
    assert run(capsys, "verdict", "--label", "M_9^9")[0] == 2
    assert run(capsys, "verdict", "--label", "M_2^1", "--params", "0")[0] == 2
    assert run(capsys, "ricci", "--gamma", "1,2")[0] == 2
    assert run(capsys, "qcheck", "--gamma", "0,0,0,0,0,0", "--fn", "exp(")[0] == 2


def test_usage_errors():
    with pytest.raises(SystemExit) as exc:
        main(["bogus"])
    assert exc.value.code == 64
    with pytest.raises(SystemExit) as exc:
        main(["geodesic", "--gamma", "0,0,0,0,0,0"])
    assert exc.value.code == 64


def test_float_mode(capsys, monkeypatch):
    monkeypatch.setenv("AFFLAB_MODE", "float")
    code, out, _ = run(capsys, "ricci", "--gamma", "0,0,-0.5,0,0,0")
    assert code == 0 and json.loads(out)["ricci"][1][1] == -0.25
    monkeypatch.setenv("AFFLAB_MODE", "fuzzy")
    assert run(capsys, "ricci", "--gamma", "0,0,0,0,0,0")[0] == 2


def test_console_script():
    res = subprocess.run([sys.executable, "-m", "afflab.cli", "verdict", "--label", "N"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["kind"] == "Complete"


PORTRAIT_MODELS = [("M_0^0", ""), ("M_4^0", ""), ("M_3^1", "-1/2"), ("N", ""),
                   ("M_2^2", "-1,0"), ("M_2^2", "-1,1"), ("M_2^2", "-1,2")]


@pytest.mark.parametrize("fam,params", PORTRAIT_MODELS)
def test_probe_then_verdict_agree(capsys, fam, params):
    code, out, _ = run(capsys, "probe", "--label", fam, "--params", params, "--rays", "16")
    probe = json.loads(out)
    code2, out2, _ = run(capsys, "verdict", "--label", fam, "--params", params)
    assert code == code2 == 0
    assert probe["all_reached"] and json.loads(out2)["kind"] == "Complete"

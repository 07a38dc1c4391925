import csv
import json
import math
import os
import pathlib
import subprocess

import jsonschema
import pytest

BIN = os.environ.get("DWALK_BIN", "dwalk")
SCHEMAS = pathlib.Path(os.environ.get("DWALK_SCHEMAS", pathlib.Path(__file__).parents[2] / "schemas"))


def run(tmp, *args, expect=0):
    proc = subprocess.run([BIN, *map(str, args)], cwd=tmp, capture_output=True, text=True, timeout=600)
    assert proc.returncode == expect, proc.stdout + proc.stderr
    return proc.stdout


def printed(stdout):
    return {k: v for k, v in (line.split(" ", 1) for line in stdout.strip().splitlines())}


def load(tmp, name, schema):
    doc = json.loads((tmp / name).read_text())
    jsonschema.validate(doc, json.loads((SCHEMAS / f"{schema}.schema.json").read_text()))
    return doc


def rows(path):
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


def test_dispersion_1d_massive_gap(tmp_path):
    out = printed(run(tmp_path, "dispersion", "--dim", 1, "--theta", 0, "--mass-dt", 0.02, "--n", 512))
    zero = [r for r in rows(tmp_path / "dwalk_out.csv") if float(r["p"]) == 0.0]
    assert len(zero) == 1
    assert sorted(float(zero[0][k]) for k in ("E_0", "E_1")) == pytest.approx([-0.02, 0.02], abs=1e-15)
    doc = load(tmp_path, "dwalk_out.json", "dispersion")
    assert float(out["max_abs_energy"]) == doc["scan"]["max_abs_energy"]
    assert float(out["bound_rhs"]) == doc["scan"]["bound_rhs"]


@pytest.mark.xfail(strict=True, reason="the theta = pi/3 Dirac band reaches about 2.38 > pi/2")
def test_dispersion_3d_below_half_pi(tmp_path):
    out = printed(run(tmp_path, "dispersion", "--dim", 3, "--theta", 1.0472, "--mass-dt", 0.05, "--n", 48))
    assert float(out["max_abs_energy"]) < math.pi / 2


def test_dispersion_3d_within_proven_bound(tmp_path):
    out = printed(run(tmp_path, "dispersion", "--dim", 3, "--theta", 1.0472, "--mass-dt", 0.05, "--n", 48))
    assert float(out["max_abs_energy"]) <= float(out["bound_rhs"])
    doc = load(tmp_path, "dwalk_out.json", "dispersion")
    assert doc["scan"]["points"] == 48**3


def test_deterministic_bytes(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    a.mkdir()
    b.mkdir()
    args = ("dispersion", "--dim", 3, "--theta", 0.7, "--mass-dt", 0.05, "--n", 24, "--offset")
    run(a, *args)
    run(b, *args)
    for name in ("dwalk_out.csv", "dwalk_out.json"):
        assert (a / name).read_bytes() == (b / name).read_bytes()
    args = ("qca-schwinger", "--N", 3, "--L", 1, "--theta", 0.3, "--mass-dt", 0.1, "--steps", 5, "--seed", 7)
    run(a, *args)
    run(b, *args)
    for name in ("dwalk_out.json", "dwalk_out_trajectory.csv"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_floats_have_17_digits(tmp_path):
    run(tmp_path, "dispersion", "--theta", 0.3, "--mass-dt", 0.1, "--n", 16)
    for row in rows(tmp_path / "dwalk_out.csv"):
        for v in row.values():
            assert v == "%.17g" % float(v)
    text = (tmp_path / "dwalk_out.json").read_text()
    assert '"max_abs_energy": %s' % ("%.17g" % json.loads(text)["scan"]["max_abs_energy"]) in text


def test_doublers_conventional_catalogue(tmp_path):
    run(tmp_path, "doublers", "--dim", 3, "--theta", 0, "--n", 32)
    doc = load(tmp_path, "dwalk_out.json", "doublers")
    found = {tuple(round(x, 9) for x in d["momentum"]) for d in doc["special_points"]["doublers"]}
    found_pi = {tuple(round(x, 9) for x in d["momentum"]) for d in doc["special_points"]["pseudo_doublers"]}

    def canon(p):
        return tuple(round(math.pi if abs(x + math.pi) < 1e-9 else x, 9) for x in p)

    cat = doc["reference_catalogue"]
    # Dirac = (K+, K-): each catalogue point with K+ = sI also carries K- = +-I
    assert {canon(c["momentum"]) for c in cat if c["sign"] == 1} <= {canon(p) for p in found}
    assert {canon(c["momentum"]) for c in cat if c["sign"] == -1} <= {canon(p) for p in found_pi}
    assert len(found) == 11 and len(found_pi) == 12


def test_doublers_family_single_orbit(tmp_path):
    run(tmp_path, "doublers", "--walk", "weyl+", "--theta", 0.5, "--n", 48, "--offset")
    doc = load(tmp_path, "dwalk_out.json", "doublers")
    q = doc["reference_q"]
    ds = doc["special_points"]["doublers"]
    assert len(ds) == 1
    assert ds[0]["momentum"] == pytest.approx([q, q, q], abs=1e-7)


def test_doublers_no_pseudo_below_half_pi(tmp_path):
    out = printed(run(tmp_path, "doublers", "--dim", 1, "--theta", 1.4, "--mass-dt", 0.05, "--n", 512))
    assert float(out["bound_rhs"]) < math.pi / 2
    assert int(out["pseudo_doublers"]) == 0
    load(tmp_path, "dwalk_out.json", "doublers")


def test_bound_check(tmp_path):
    out = printed(run(tmp_path, "bound-check", "--dim", 3, "--theta", 0.6, "--mass-dt", 0.05, "--n", 24))
    assert out["holds"] == "true"
    assert load(tmp_path, "dwalk_out.json", "bound-check")["certificate"]["axis_holds"]


@pytest.mark.parametrize("method", ["position", "momentum"])
def test_evolve_norm_constant(tmp_path, method):
    run(tmp_path, "evolve", "--dim", 1, "--theta", 0.4, "--mass-dt", 0.1, "--N", 256, "--steps", 200,
        "--init", "wavepacket", "--method", method, "--snapshot-every", 50)
    norms = [float(r["norm"]) for r in rows(tmp_path / "dwalk_out_norm.csv")]
    assert len(norms) == 201
    assert max(abs(n - 1.0) for n in norms) < 1e-12
    steps = {int(r["step"]) for r in rows(tmp_path / "dwalk_out_density.csv")}
    assert steps == {0, 50, 100, 150, 200}
    load(tmp_path, "dwalk_out.json", "evolve")


def test_evolve_3d(tmp_path):
    run(tmp_path, "evolve", "--walk", "dirac", "--theta", 0.4, "--mass-dt", 0.1, "--N", 8, "--steps", 5)
    assert load(tmp_path, "dwalk_out.json", "evolve")["max_norm_defect"] < 1e-12
    assert len(rows(tmp_path / "dwalk_out_state.csv")) == 512


def test_qca_free_sector_equivalence(tmp_path):
    out = printed(run(tmp_path, "qca-free", "--N", 6, "--theta", 0.4, "--mass-dt", 0.1, "--steps", 3))
    assert float(out["sector_equivalence_defect"]) < 1e-10
    doc = load(tmp_path, "dwalk_out.json", "qca-free")
    assert doc["summary"]["number_drift"] < 1e-10


def test_qca_schwinger_gauss(tmp_path):
    out = printed(run(tmp_path, "qca-schwinger", "--N", 4, "--L", 1, "--theta", 0.4, "--mass-dt", 0.1,
                      "--coupling-dt", 0.5, "--steps", 20))
    assert float(out["max_abs_gauss"]) < 1e-9
    doc = load(tmp_path, "dwalk_out.json", "qca-schwinger")
    assert len(rows(tmp_path / "dwalk_out_trajectory.csv")) == 21
    assert doc["gauss_commutator"] < 1e-10


def test_json_format_inlines_data(tmp_path):
    run(tmp_path, "qca-schwinger", "--N", 3, "--L", 1, "--steps", 2, "--format", "json")
    doc = load(tmp_path, "dwalk_out.json", "qca-schwinger")
    assert len(doc["trajectory"]) == 3
    assert not (tmp_path / "dwalk_out_trajectory.csv").exists()
    run(tmp_path, "dispersion", "--n", 16, "--format", "json")
    assert len(load(tmp_path, "dwalk_out.json", "dispersion")["records"]) == 16


def test_phase_bound(tmp_path):
    run(tmp_path, "phase-bound-test", "--matrix-dim", 2, "--trials", 500)
    assert load(tmp_path, "dwalk_out.json", "phase-bound-test")["holds"]


def test_config_precedence(tmp_path):
    (tmp_path / "run.cfg").write_text("theta = 0.3\nmass-dt = 0.1\nn = 64\n")
    run(tmp_path, "dispersion", "--config", "run.cfg")
    doc = load(tmp_path, "dwalk_out.json", "dispersion")
    assert (doc["scan"]["walk"]["theta"], doc["scan"]["n"]) == (0.3, 64)
    run(tmp_path, "dispersion", "--config", "run.cfg", "--theta", 0.5)
    doc = load(tmp_path, "dwalk_out.json", "dispersion")
    assert (doc["scan"]["walk"]["theta"], doc["scan"]["walk"]["mass_dt"]) == (0.5, 0.1)


@pytest.mark.parametrize("args", [
    ("dispersion", "--theta", 2.0),
    ("dispersion", "--mass-dt", -1),
    ("dispersion", "--dim", 2),
    ("dispersion", "--nonsense"),
    ("evolve", "--N", 2),
    ("doublers", "--walk", "majorana"),
])
def test_invalid_config_exit_2(tmp_path, args):
    err = json.loads(run(tmp_path, *args, expect=2))
    jsonschema.validate(err, json.loads((SCHEMAS / "error.schema.json").read_text()))
    assert err["error"] == "invalid-config"


@pytest.mark.parametrize("args", [
    ("qca-free", "--N", 12),
    ("qca-schwinger", "--N", 6, "--L", 2, "--max-gib", 0.05),
    ("dispersion", "--dim", 3, "--n", 2000),
    ("evolve", "--dim", 3, "--N", 32),
])
def test_resource_limit_exit_3(tmp_path, args):
    err = json.loads(run(tmp_path, *args, expect=3))
    assert err["error"] == "resource-limit"

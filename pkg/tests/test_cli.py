import json

import numpy as np
import pytest
from numpy.testing import assert_allclose

from gatereach import cli, su4
from gatereach.serialize import load_json

PI = np.pi

SWAP_GATE = su4.expm_hermitian(su4.coupling_hamiltonian([PI / 4] * 3))
CONST_PROFILE = {"kind": "constant", "unit": "rad/s", "theta": [2, 1, -1]}
MAS_PROFILE = {"kind": "mas-dipolar", "unit": "rad/s",
               "D": 1.0, "omega": 100.0, "beta": PI / 4}


@pytest.fixture
def workdir(tmp_path):
    (tmp_path / "swap.json").write_text(
        json.dumps(su4.matrix_to_json(SWAP_GATE)))
    (tmp_path / "hd.json").write_text(
        json.dumps(su4.matrix_to_json(su4.coupling_hamiltonian([1, 1, -2]))))
    (tmp_path / "const.json").write_text(json.dumps(CONST_PROFILE))
    (tmp_path / "mas.json").write_text(json.dumps(MAS_PROFILE))
    return tmp_path


def run(argv):
    return cli.main([str(a) for a in argv])


def test_canon_hamiltonian(workdir, capsys):
    out = workdir / "canon.json"
    assert run(["canon", "--input", workdir / "hd.json",
                "--kind", "hamiltonian", "--output", out]) == 0
    data = load_json(out.read_text())
    assert_allclose(data["theta"], [2, 1, -1], atol=1e-10)


def test_canon_unitary_swap(workdir):
    out = workdir / "canonu.json"
    assert run(["canon", "--input", workdir / "swap.json",
                "--kind", "unitary", "--output", out]) == 0
    data = load_json(out.read_text())
    assert_allclose(data["theta"], [PI / 4] * 3, atol=1e-9)


def test_canon_cnot_unitary(workdir):
    cnot = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]],
                    dtype=complex)
    (workdir / "cnot.json").write_text(json.dumps(su4.matrix_to_json(cnot)))
    out = workdir / "cnotc.json"
    assert run(["canon", "--input", workdir / "cnot.json",
                "--kind", "unitary", "--output", out]) == 0
    assert_allclose(load_json(out.read_text())["theta"], [PI / 4, 0, 0],
                    atol=1e-9)


def test_mintime_swap_constant(workdir):
    out = workdir / "mt.json"
    assert run(["mintime", "--target", workdir / "swap.json",
                "--profile", workdir / "const.json", "--output", out]) == 0
    data = load_json(out.read_text())
    assert abs(data["T_min"] - 3 * PI / 16) < 1e-9
    assert data["shift"] == [-1, 0, 0]


def test_mintime_identity_inline_theta(workdir):
    out = workdir / "mt0.json"
    assert run(["mintime", "--theta", "[0, 0, 0]",
                "--profile", workdir / "const.json", "--output", out]) == 0
    assert load_json(out.read_text())["T_min"] == 0.0


def test_mintime_mas_reports_period_count(workdir):
    out = workdir / "mtm.json"
    assert run(["mintime", "--target", workdir / "swap.json",
                "--profile", workdir / "mas.json", "--output", out]) == 0
    data = load_json(out.read_text())
    assert data["wholePeriodCount"] == 27
    assert 26.0 < data["periods"] <= 27.0


def test_synth_then_simulate_pipeline(workdir):
    sched = workdir / "sched.json"
    rep = workdir / "rep.json"
    assert run(["synth", "--target", workdir / "swap.json",
                "--profile", workdir / "const.json", "--output", sched]) == 0
    data = load_json(sched.read_text())
    assert len(data["segments"]) == 3
    for seg in data["segments"]:
        assert abs((seg["t1"] - seg["t0"]) - PI / 16) < 1e-9
    assert run(["simulate", "--schedule", sched,
                "--profile", workdir / "const.json", "--output", rep]) == 0
    report = load_json(rep.read_text())["report"]
    assert report["distance"] < 1e-6
    assert report["unitarityDefect"] < 1e-9


def test_simulate_verification_failure_exit_code(workdir):
    sched = workdir / "sched.json"
    run(["synth", "--target", workdir / "swap.json",
         "--profile", workdir / "const.json", "--output", sched])
    # target a different class: CNOT instead of swap
    cnot = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]],
                    dtype=complex)
    (workdir / "cnot.json").write_text(json.dumps(su4.matrix_to_json(cnot)))
    code = run(["simulate", "--schedule", sched,
                "--profile", workdir / "const.json",
                "--target", workdir / "cnot.json",
                "--output", workdir / "rep2.json"])
    assert code == 4


def test_profile_csv_and_figure(workdir):
    csv = workdir / "prof.csv"
    png = workdir / "prof.png"
    assert run(["profile", "--profile", workdir / "mas.json",
                "--samples", "200", "--output", csv, "--plot", png]) == 0
    lines = csv.read_text().strip().splitlines()
    assert lines[0] == "t,D"
    assert len(lines) == 201
    vals = np.array([float(l.split(",")[1]) for l in lines[1:]])
    assert np.sum(np.diff(np.sign(vals)) != 0) == 2  # two zero crossings
    assert png.exists() and png.stat().st_size > 0


def test_mintime_plot(workdir):
    png = workdir / "mt.png"
    assert run(["mintime", "--target", workdir / "swap.json",
                "--profile", workdir / "const.json",
                "--output", workdir / "mt.json", "--plot", png]) == 0
    assert png.exists() and png.stat().st_size > 0


def test_outputs_deterministic(workdir):
    a = workdir / "a.json"
    b = workdir / "b.json"
    for out in (a, b):
        run(["mintime", "--target", workdir / "swap.json",
             "--profile", workdir / "const.json", "--output", out])
    assert a.read_bytes() == b.read_bytes()


def test_mintime_output_reingestible(workdir):
    out = workdir / "mt.json"
    run(["mintime", "--target", workdir / "swap.json",
         "--profile", workdir / "const.json", "--output", out])
    data = load_json(out.read_text())
    assert set(data) >= {"T_min", "shift", "binding", "Theta", "margins"}


def test_validation_exit_codes(workdir):
    assert run(["canon", "--input", workdir / "missing.json",
                "--kind", "unitary"]) == 2
    bad = workdir / "bad.json"
    bad.write_text("{not json")
    assert run(["canon", "--input", bad, "--kind", "unitary"]) == 2
    # profile that never accumulates -> numerical failure
    null = workdir / "null.json"
    null.write_text(json.dumps({"kind": "mas-dipolar", "unit": "rad/s",
                                "D": 1.0, "omega": 1.0, "beta": 0.0}))
    assert run(["mintime", "--target", workdir / "swap.json",
                "--profile", null]) == 3
    # synth below the minimum time -> numerical failure
    assert run(["synth", "--target", workdir / "swap.json",
                "--profile", workdir / "const.json", "--time", "0.1"]) == 3


def test_config_file_supplies_flags(workdir):
    cfg = workdir / "cfg.json"
    cfg.write_text(json.dumps({"profile": str(workdir / "const.json")}))
    out = workdir / "mtc.json"
    assert run(["--config", cfg, "mintime", "--target", workdir / "swap.json",
                "--output", out]) == 0
    assert abs(load_json(out.read_text())["T_min"] - 3 * PI / 16) < 1e-9


def test_config_toml(workdir):
    cfg = workdir / "cfg.toml"
    cfg.write_text('profile = "%s"\n' % (workdir / "const.json"))
    out = workdir / "mtt.json"
    assert run(["--config", cfg, "mintime", "--target", workdir / "swap.json",
                "--output", out]) == 0


def test_tol_env_var(workdir, monkeypatch):
    monkeypatch.setenv("GATEREACH_TOL", "1e-6")
    out = workdir / "mte.json"
    assert run(["mintime", "--target", workdir / "swap.json",
                "--profile", workdir / "const.json", "--output", out]) == 0
    assert abs(load_json(out.read_text())["T_min"] - 3 * PI / 16) < 1e-5


def test_stdout_json_mode(workdir, capsys):
    assert run(["mintime", "--target", workdir / "swap.json",
                "--profile", workdir / "const.json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert abs(data["T_min"] - 3 * PI / 16) < 1e-9

import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from elementary_cycles.cli import EXIT_CONFIG, EXIT_FAIL, EXIT_IO, EXIT_NUMERICAL, EXIT_OK, main
from elementary_cycles.modulation import GaugeField
from elementary_cycles.scenarios import SCENARIOS
from elementary_cycles.topology import circle_loop, monopole_potential

CONFIGS = sorted((Path(__file__).resolve().parents[1] / "configs").glob("*.json"))


def write_config(tmp_path, scenario, parameters=None, name="cfg.json", **extra):
    cfg = {"scenario": scenario, "parameters": parameters or {}, "output": str(tmp_path / "out"), **extra}
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    return path


def run(path, capsys):
    code = main(["run", str(path)])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_ten_shipped_scenarios_covered():
    names = {json.loads(p.read_text())["scenario"] for p in CONFIGS}
    assert names == set(SCENARIOS)
    assert len(SCENARIOS) == 10


@pytest.mark.parametrize("config", CONFIGS, ids=lambda p: p.stem)
def test_shipped_configs_pass(config, tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("CYCLES_OUTPUT_DIR", str(tmp_path))
    code, out, err = run(config, capsys)
    assert code == EXIT_OK, out + err
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["verdict"] == "PASS"
    assert report["rng"] == "numpy PCG64"
    assert all(c["verdict"] == "PASS" for c in report["checks"])
    for name in report["outputs"]:
        assert (tmp_path / name).is_file()
    assert not [p for p in tmp_path.iterdir() if p.name.startswith(".")]


def test_spectrum_example(tmp_path, capsys):
    path = write_config(tmp_path, "spectrum", {"m": 1, "k": 0, "n_max": 3, "bc": "PBC"})
    code, _, _ = run(path, capsys)
    assert code == EXIT_OK
    report = json.loads((tmp_path / "out" / "report.json").read_text())
    assert report["summary"]["omega"] == [1.0, 2.0, 3.0]
    lines = (tmp_path / "out" / "spectrum.csv").read_text().splitlines()
    assert lines[0] == "n,omega,kx,ky,kz"
    assert lines[1:] == ["1,1.0,0.0,0.0,0.0", "2,2.0,0.0,0.0,0.0", "3,3.0,0.0,0.0,0.0"]


def test_cyclic_kernel_example(tmp_path, capsys):
    path = write_config(tmp_path, "cyclic_kernel", {"T": 1, "beta": 0.05, "w_max": 12, "n_max": 64})
    assert run(path, capsys)[0] == EXIT_OK
    report = json.loads((tmp_path / "out" / "report.json").read_text())
    assert report["summary"]["max_diff"] < 1e-10


def test_missing_key_message(tmp_path, capsys):
    code, _, err = run(write_config(tmp_path, "spectrum"), capsys)
    assert code == EXIT_CONFIG
    assert err.strip().endswith("missing key: m")
    assert len(err.strip().splitlines()) == 1


def test_omission_sweep_over_catalog(tmp_path, capsys):
    assert main(["list"]) == EXIT_OK
    listing = capsys.readouterr().out
    swept = 0
    for name, scenario in SCENARIOS.items():
        full = {p.name: 1.0 for p in scenario.params if p.required}
        for key in full:
            assert f"  {key} [" in listing
            params = {k: v for k, v in full.items() if k != key}
            code, _, err = run(write_config(tmp_path, name, params), capsys)
            assert code == EXIT_CONFIG
            assert f"missing key: {key}" in err
            swept += 1
    assert swept >= 1


def test_list_catalog_stable(capsys):
    main(["list"])
    first = capsys.readouterr().out
    main([])
    second = capsys.readouterr().out
    assert first == second
    headers = [line.split(":")[0] for line in first.splitlines() if not line.startswith(" ")]
    assert headers == sorted(SCENARIOS)
    assert len(headers) == 10
    assert "default" in first and "units" in first


@pytest.mark.parametrize("scenario", ["boost", "gauge_phase", "freezeout"])
def test_determinism_byte_identical(scenario, tmp_path, monkeypatch, capsys):
    config = next(p for p in CONFIGS if p.stem == scenario)
    outputs = []
    for run_id in ("a", "b"):
        d = tmp_path / run_id
        monkeypatch.setenv("CYCLES_OUTPUT_DIR", str(d))
        assert run(config, capsys)[0] == EXIT_OK
        outputs.append({p.name: p.read_bytes() for p in d.glob("*.csv")})
    assert outputs[0] == outputs[1]
    assert outputs[0]


def test_seed_changes_random_sweep(tmp_path, capsys):
    a = write_config(tmp_path, "boost", {"samples": 10}, name="a.json", seed=1)
    run(a, capsys)
    first = (tmp_path / "out" / "boost_sweep.csv").read_bytes()
    b = write_config(tmp_path, "boost", {"samples": 10}, name="b.json", seed=2)
    run(b, capsys)
    assert (tmp_path / "out" / "boost_sweep.csv").read_bytes() != first


@pytest.mark.parametrize("cfg,fragment", [
    ({"scenario": "nope"}, "unknown scenario: nope"),
    ({"scenario": "spectrum", "parameters": {"m": 1, "mass": 2}}, "unknown key: mass"),
    ({"scenario": "spectrum", "parameters": {"m": "heavy"}}, "invalid value for m"),
    ({"scenario": "spectrum", "parameters": {"m": 1, "bc": "twisted"}}, "invalid value for bc"),
    ({"scenario": "kk_tower", "parameters": {"length": -1}}, "invalid value for length"),
    ({"scenario": "kk_tower", "extra": 1}, "unknown key: extra"),
    ({"parameters": {}}, "missing key: scenario"),
    ({"scenario": "kk_tower", "seed": -3}, "invalid value for seed"),
    ({"scenario": "freezeout", "parameters": {"softwall": 0.1}}, "unsupported key: softwall"),
    ({"scenario": "freezeout", "parameters": {"mixing": 0.1}}, "unsupported key: mixing"),
    ({"scenario": "bohr_sommerfeld", "parameters": {"potential": "harmonic", "width": 2}}, "not used by potential"),
    ({"scenario": "bohr_sommerfeld", "parameters": {"potential": "quartic"}}, "invalid value for potential"),
])
def test_validation_errors(cfg, fragment, tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(cfg))
    code, _, err = run(path, capsys)
    assert code == EXIT_CONFIG
    assert fragment in err


def test_malformed_json(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    assert run(path, capsys)[0] == EXIT_CONFIG


def test_numerical_error_exit(tmp_path, capsys):
    code, _, err = run(write_config(tmp_path, "cyclic_kernel", {"n_max": 2}), capsys)
    assert code == EXIT_NUMERICAL
    assert err.startswith("numerical error:")
    code, _, _ = run(write_config(tmp_path, "spectrum", {"m": 0}), capsys)
    assert code == EXIT_NUMERICAL


def test_failing_check_exit(tmp_path, capsys):
    code, out, _ = run(write_config(tmp_path, "cyclic_kernel", {"tolerance": 1e-20}), capsys)
    assert code == EXIT_FAIL
    report = json.loads((tmp_path / "out" / "report.json").read_text())
    assert report["verdict"] == "FAIL"
    failed = [c for c in report["checks"] if c["verdict"] == "FAIL"]
    assert failed and all("value" in c and "threshold" in c for c in failed)
    assert "FAIL cyclic_kernel" in out


def test_io_errors(tmp_path, capsys):
    assert run(tmp_path / "absent.json", capsys)[0] == EXIT_IO
    path = write_config(tmp_path, "bohr_sommerfeld", {"potential": "tabulated", "file": str(tmp_path / "none.csv")})
    code, _, err = run(path, capsys)
    assert code == EXIT_IO and "none.csv" in err
    blocker = tmp_path / "blocker"
    blocker.write_text("")
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"scenario": "kk_tower", "output": str(blocker / "sub")}))
    assert run(path, capsys)[0] == EXIT_IO


def test_tabulated_potential_file(tmp_path, capsys):
    xs = np.linspace(-6, 6, 121)
    csv_path = tmp_path / "pot.csv"
    csv_path.write_text("x,V\n" + "".join(f"{x!r},{0.5 * x * x!r}\n" for x in map(float, xs)))
    path = write_config(tmp_path, "bohr_sommerfeld", {"potential": "tabulated", "file": str(csv_path), "n_max": 4})
    assert run(path, capsys)[0] == EXIT_OK
    lines = (tmp_path / "out" / "levels.csv").read_text().splitlines()
    assert lines[0] == "n,E,action,x_minus,x_plus"
    assert float(lines[2].split(",")[1]) == pytest.approx(2.0, abs=1e-8)


def test_loop_file_dirac(tmp_path, capsys):
    pts = circle_loop(radius=2.0, samples=256)
    A = monopole_potential(1.0)(pts)
    loop = tmp_path / "loop.csv"
    loop.write_text("index,x,y,z,Ax,Ay,Az\n" + "".join(
        ",".join(repr(float(v)) for v in (i, *pts[i], *A[i])) + "\n" for i in range(256)))
    path = write_config(tmp_path, "dirac_check", {"loop": str(loop), "e": 0.5})
    assert run(path, capsys)[0] == EXIT_OK


def test_gauge_field_file_uses_reversal_check(tmp_path, capsys):
    axis = np.linspace(-1, 1, 9)
    field = GaugeField.from_function(lambda p: np.stack([0 * p[:, 1], np.sin(p[:, 2]), p[:, 1] ** 2, 0 * p[:, 1]], 1),
                                     x=axis, y=axis)
    f = tmp_path / "A.csv"
    field.to_csv(f)
    path = write_config(tmp_path, "gauge_phase", {"field": str(f), "loops": 5})
    assert run(path, capsys)[0] == EXIT_OK
    report = json.loads((tmp_path / "out" / "report.json").read_text())
    assert [c["name"] for c in report["checks"]][0] == "loop_reversal_antisymmetry"


def test_redshift_infinite_observer_echo(tmp_path, capsys):
    path = write_config(tmp_path, "redshift", {"r_obs": None})
    assert run(path, capsys)[0] == EXIT_OK
    report = json.loads((tmp_path / "out" / "report.json").read_text())
    assert report["summary"]["fractional_shift"] == pytest.approx(-2.1225e-6, rel=1e-3)
    assert report["parameters"]["r_obs"] is None


def test_module_entry_point(tmp_path):
    path = write_config(tmp_path, "kk_tower", {"n_max": 4})
    proc = subprocess.run([sys.executable, "-m", "elementary_cycles", "run", str(path)], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.strip().splitlines()[-1] == "PASS kk_tower"
    masses = [float(l.split(",")[1]) for l in (tmp_path / "out" / "kk_tower.csv").read_text().splitlines()[1:]]
    assert masses == pytest.approx([1, 2, 3, 4], abs=1e-15)

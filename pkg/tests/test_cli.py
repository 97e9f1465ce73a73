import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from resonant_cqed import __version__
from resonant_cqed.cli import ExperimentConfig, main, run_experiment
from resonant_cqed.experiments import EXPERIMENTS, ConfigError, get_experiment
from resonant_cqed.reporting import ReportFile, ReportFormatError, emit_report, to_plain


def write_config(tmp_path, cfg, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(cfg))
    return str(p)


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


# -- reporting ----------------------------------------------------------------------

def test_to_plain_rounds_and_converts():
    assert to_plain(np.float64(0.1) + np.float64(0.2)) == 0.3
    assert to_plain(-0.0) == 0.0
    assert to_plain(1 + 2j) == [1.0, 2.0]
    assert to_plain(complex(1.0, 1e-30)) == [1.0, 0.0]
    assert to_plain(np.array([1, 2])) == [1, 2]
    assert to_plain({"a": (np.bool_(True), None)}) == {"a": [True, None]}
    with pytest.raises(ReportFormatError):
        to_plain(float("nan"))
    with pytest.raises(ReportFormatError):
        to_plain(object())


def test_emit_json_sorted_and_stable():
    r = ReportFile({"b": 1, "a": 2}, {"x": 1 / 3})
    out = emit_report(r)
    assert out == emit_report(r)
    assert out.endswith(b"\n")
    assert json.loads(out)["results"]["x"] == float("0.333333333333333")
    assert out.index(b'"a"') < out.index(b'"b"')


def test_emit_csv_requires_table():
    with pytest.raises(ReportFormatError):
        emit_report(ReportFile({}, {"x": 1}), "csv")
    with pytest.raises(ReportFormatError):
        emit_report(ReportFile({}, {"x": 1}), "yaml")


def test_emit_csv_rows():
    r = ReportFile({}, {"columns": ["a", "b"], "rows": [{"a": 1, "b": 0.5}, {"a": 2, "b": True}]})
    rows = list(csv.reader(io.StringIO(emit_report(r, "csv").decode())))
    assert rows == [["a", "b"], ["1", "0.5"], ["2", "true"]]


# -- config -------------------------------------------------------------------------

def test_resolve_fills_defaults():
    params = get_experiment("grover-physical-decay").resolve({})
    assert params == {"target": "eg", "kappa": 0.1, "tau": 0.1}


@pytest.mark.parametrize(
    "name,params",
    [
        ("grover-physical", {"target": "xx"}),
        ("grover-physical", {"bogus": 1}),
        ("grover-gate", {"n": 2, "target": 9}),
        ("grover-gate", {"n": "2"}),
        ("grover-physical-decay", {"kappa": 0.2}),
        ("timing-sweep", {"delta": {"start": 0, "stop": 1.2, "count": 3}}),
        ("timing-sweep", {"delta": {"start": 0, "stop": 0.1}}),
        ("feasibility", {"radiative_time": 0.0}),
        ("dj-gate", {"f0": 2}),
    ],
)
def test_invalid_parameters(name, params):
    with pytest.raises(ConfigError):
        get_experiment(name).resolve(params)


def test_unknown_experiment():
    with pytest.raises(ConfigError):
        get_experiment("nope")


def test_config_rejects_csv_for_single_runs():
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({"experiment": "grover-gate", "output": {"format": "csv"}})


# -- experiments --------------------------------------------------------------------

def test_grover_physical_experiment():
    cfg = ExperimentConfig.from_dict({"experiment": "grover-physical", "parameters": {"target": "eg"}})
    r = run_experiment(cfg)
    assert r.results["success_probability"] == pytest.approx(1.0, abs=1e-9)
    assert r.metadata["config"]["parameters"]["fock_dim"] == 2
    assert r.metadata["version"] == __version__
    assert "timestamp" not in r.metadata


def test_grover_gate_experiment():
    cfg = ExperimentConfig.from_dict({"experiment": "grover-gate", "parameters": {"n": 3, "target": 5}})
    r = run_experiment(cfg)
    assert r.results["parameters"]["iterations"] == 2
    assert r.results["success_probability"] == pytest.approx(121 / 128, abs=1e-12)


def test_decay_report_has_both_amplitudes():
    cfg = ExperimentConfig.from_dict({"experiment": "grover-physical-decay"})
    res = run_experiment(cfg).results
    assert res["phenomenological_amplitude"] == pytest.approx(0.696499, abs=1e-6)
    assert res["first_principles_amplitude"] == pytest.approx(0.854636, abs=1e-6)


def test_every_experiment_runs_and_is_deterministic():
    for name, exp in EXPERIMENTS.items():
        cfg = ExperimentConfig.from_dict({"experiment": name})
        fmt = "csv" if exp.tabular else "json"
        a = emit_report(run_experiment(cfg), fmt)
        b = emit_report(run_experiment(cfg), fmt)
        assert a == b, name


def test_timestamp_flag():
    cfg = ExperimentConfig.from_dict({"experiment": "dj-gate"})
    assert "timestamp" in run_experiment(cfg, timestamp=True).metadata


# -- command line -------------------------------------------------------------------

def test_cli_list(capsys):
    code, out, _ = run_cli(capsys, "list-experiments")
    assert code == 0
    assert sorted(line.split()[0] for line in out.splitlines()) == sorted(EXPERIMENTS)


def test_cli_run_to_file(tmp_path, capsys):
    out = tmp_path / "r.json"
    cfg = write_config(tmp_path, {"experiment": "dj-physical", "parameters": {"f0": 0, "f1": 1},
                                  "output": {"path": str(out)}})
    assert run_cli(capsys, "run", cfg, "--no-timestamp")[0] == 0
    first = out.read_bytes()
    assert run_cli(capsys, "run", cfg, "--no-timestamp")[0] == 0
    assert out.read_bytes() == first
    assert json.loads(first)["results"]["classification"] == "balanced"


def test_cli_run_stdout_with_timestamp(tmp_path, capsys):
    cfg = write_config(tmp_path, {"experiment": "dj-gate"})
    code, out, _ = run_cli(capsys, "run", cfg)
    assert code == 0
    assert "timestamp" in json.loads(out)["metadata"]


def test_cli_sweep_csv(tmp_path, capsys):
    cfg = write_config(tmp_path, {"experiment": "timing-sweep",
                                  "parameters": {"delta": {"start": 0, "stop": 0.02, "count": 3}}})
    code, out, _ = run_cli(capsys, "sweep", cfg, "--no-timestamp")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["delta", "stage_fidelity", "total_fidelity", "strategy", "early_atom"]
    assert len(rows) == 4
    assert rows[1][:3] == ["0", "1", "1"]


def test_cli_sweep_json_override(tmp_path, capsys):
    cfg = write_config(tmp_path, {"experiment": "timing-sweep"})
    code, out, _ = run_cli(capsys, "sweep", cfg, "--no-timestamp", "--format", "json")
    assert code == 0
    assert len(json.loads(out)["results"]["rows"]) == 11


def error_kind(err):
    return json.loads(err.strip().splitlines()[-1])["error"]["kind"]


@pytest.mark.parametrize(
    "content",
    [
        "{not json",
        json.dumps({"experiment": "unknown-name"}),
        json.dumps({"experiment": "grover-gate", "parameters": {"n": 0}}),
        json.dumps({"experiment": "grover-gate", "extra": 1}),
        json.dumps(["grover-gate"]),
    ],
)
def test_cli_config_errors(tmp_path, capsys, content):
    p = tmp_path / "bad.json"
    p.write_text(content)
    code, _, err = run_cli(capsys, "run", str(p))
    assert code == 2
    assert error_kind(err) == "config"


def test_cli_missing_config(tmp_path, capsys):
    code, _, err = run_cli(capsys, "validate", str(tmp_path / "none.json"))
    assert code == 2 and error_kind(err) == "config"


def test_cli_sweep_rejects_single(tmp_path, capsys):
    cfg = write_config(tmp_path, {"experiment": "grover-gate"})
    assert run_cli(capsys, "sweep", cfg)[0] == 2


def test_cli_unwritable_output(tmp_path, capsys):
    cfg = write_config(tmp_path, {"experiment": "dj-gate"})
    code, _, err = run_cli(capsys, "run", cfg, "--output", str(tmp_path / "missing" / "r.json"))
    assert code == 3 and error_kind(err) == "runtime"


def test_cli_validate_echoes_defaults(tmp_path, capsys):
    cfg = write_config(tmp_path, {"experiment": "grover-gate", "parameters": {"n": 3}})
    code, out, _ = run_cli(capsys, "validate", cfg)
    assert code == 0
    assert json.loads(out)["parameters"] == {"n": 3, "target": 0, "iterations": None}


def test_module_entry_point(tmp_path):
    cfg = write_config(tmp_path, {"experiment": "grover-gate", "parameters": {"n": 2, "target": 3}})
    runs = [
        subprocess.run([sys.executable, "-m", "resonant_cqed", "run", cfg, "--no-timestamp"],
                       capture_output=True, check=True).stdout
        for _ in range(2)
    ]
    assert runs[0] == runs[1]
    assert json.loads(runs[0])["results"]["success_probability"] == pytest.approx(1.0, abs=1e-12)

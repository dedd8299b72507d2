import json
import math
import os

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fourier_extension import cli
from fourier_extension.errors import ConfigurationError
from fourier_extension.io import (
    ExperimentConfig,
    format_value,
    read_csv,
    read_manifest,
    write_csv,
)


def run(tmp_path, *argv, name="out"):
    out = tmp_path / name
    code = cli.main(list(argv) + ["--out", str(out)])
    return code, out


# -- io ------------------------------------------------------------------------

@settings(max_examples=200)
@given(st.floats(allow_nan=False, allow_infinity=False))
def test_float_cells_round_trip(x):
    assert float(format_value(x)) == x


def test_format_value_kinds():
    assert format_value(True) == "1"
    assert format_value(7) == "7"
    assert format_value(0.1) == "1.0000000000000001e-01"
    assert format_value(None) == ""
    assert format_value(float("inf")) == "inf"


def test_csv_round_trip(tmp_path):
    p = tmp_path / "t.csv"
    write_csv(p, ("a", "b"), [{"a": 1, "b": 2.5}, {"a": 2, "b": None}])
    assert read_csv(p) == [{"a": "1", "b": "2.5000000000000000e+00"}, {"a": "2", "b": ""}]


configs = st.builds(
    ExperimentConfig,
    command=st.sampled_from(["diagnostics", "theta", "approx", "resolution", "en-curve"]),
    T=st.lists(st.floats(1.01, 10), max_size=4),
    eta=st.lists(st.floats(1, 8), max_size=4),
    kappa_star=st.lists(st.floats(1.5, 1e6), max_size=3),
    epsilon=st.floats(1e-16, 0.5),
    K=st.integers(1, 2**16),
    M=st.lists(st.integers(1, 5000), max_size=6),
    data=st.sampled_from(cli.DATA_CHOICES),
    omega=st.lists(st.floats(0.1, 1e4), max_size=3),
    function=st.lists(st.integers(1, 9), max_size=3),
)


@settings(max_examples=100)
@given(configs)
def test_config_json_round_trip(cfg):
    assert ExperimentConfig.from_json(cfg.to_json()) == cfg


def test_config_rejects_unknown():
    with pytest.raises(ConfigurationError):
        ExperimentConfig("plot")
    with pytest.raises(ConfigurationError):
        ExperimentConfig.from_json('{"command": "theta", "colour": 1}')


# -- commands -------------------------------------------------------------------

SMALL = ["--grid-k", "512"]


def test_diagnostics_rows_and_determinism(tmp_path):
    argv = ["diagnostics", "--T", "2", "--eta", "1,2,4", "--m-range", "20:40:20", *SMALL]
    code, out = run(tmp_path, *argv, name="a")
    assert code == 0
    rows = read_csv(out / "diagnostics.csv")
    assert len(rows) == 6
    assert rows[0].keys() >= {"kappa", "lambda", "mu", "kappa_over_logM", "lambda_over_M"}
    for r in rows:
        assert float(r["kappa_over_logM"]) == pytest.approx(float(r["kappa"]) / math.log(int(r["M"])))
    code, out2 = run(tmp_path, *argv, "--jobs", "2", name="b")
    assert code == 0
    for f in ("diagnostics.csv", "diagnostics.dat", "manifest.json"):
        assert (out / f).read_bytes() == (out2 / f).read_bytes()


def test_manifest_replay(tmp_path):
    code, out = run(tmp_path, "diagnostics", "--T", "1.5", "--eta", "2", "--m-range", "30",
                    "--data", "jittered", "--delta-jit", "0.25", *SMALL)
    assert code == 0
    cfg = read_manifest(out / "manifest.json", out=str(tmp_path / "replay"))
    assert cfg.data == "jittered" and cfg.delta_jit == 0.25
    assert cli.run(cfg) == 0
    assert (out / "diagnostics.csv").read_bytes() == (tmp_path / "replay" / "diagnostics.csv").read_bytes()


def test_usage_errors(tmp_path, capsys):
    assert run(tmp_path, "diagnostics", "--eta", "2", "--m-range", "")[0] == 2
    assert "--m-range" in capsys.readouterr().err
    assert run(tmp_path, "diagnostics", "--eta", "0.5", "--m-range", "10")[0] == 2
    assert "--eta" in capsys.readouterr().err
    assert run(tmp_path, "approx", "--function", "12", "--kappa-star", "25", "--m-range", "50")[0] == 2
    assert "--function" in capsys.readouterr().err
    with pytest.raises(SystemExit) as exc:
        cli.main(["theta", "--T", "abc"])
    assert exc.value.code == 2


def test_theta_needs_four_points(tmp_path):
    code, _ = run(tmp_path, "theta", "--T", "2", "--kappa-star", "25", "--m-range", "40,60", *SMALL)
    assert code == 2


def test_theta_outputs(tmp_path):
    code, out = run(tmp_path, "theta", "--T", "1.5,2,3", "--kappa-star", "25",
                    "--m-range", "40:100:20", *SMALL)
    assert code == 0
    rows = read_csv(out / "theta.csv")
    assert len(rows) == 12
    nu = json.loads((out / "theta.json").read_text())
    entry = nu[repr(25.0)]
    assert [e["T"] for e in entry["nu"]] == [1.5, 2.0, 3.0]
    assert entry["tau"] is not None


def test_approx_unresolved_regime(tmp_path):
    code, out = run(tmp_path, "approx", "--function", "1,5", "--kappa-star", "25",
                    "--T", "2", "--m-range", "40", *SMALL)
    assert code == 0
    rows = read_csv(out / "errors.csv")
    e1 = float(next(r for r in rows if r["function"] == "1")["error"])
    assert 0.1 < e1 < 10


def test_approx_with_eta(tmp_path):
    code, out = run(tmp_path, "approx", "--function", "4", "--eta", "1", "--T", "1.25",
                    "--data", "mapped-cheb", "--m-range", "40", *SMALL)
    assert code == 0
    assert read_csv(out / "errors.csv")[0]["N"] == "40"


def test_resolution_single_omega(tmp_path):
    code, out = run(tmp_path, "resolution", "--T", "2", "--eta", "2", "--omega", "20",
                    "--m-range", "400", *SMALL)
    assert code == 0
    row = read_csv(out / "resolution.csv")[0]
    fit = json.loads((out / "resolution.json").read_text())["fits"][0]
    assert fit["r"] == float(row["R_over_omega"])
    assert float(row["R_over_omega"]) == int(row["R"]) / 20


def test_resolution_not_resolved(tmp_path):
    code, out = run(tmp_path, "resolution", "--T", "2", "--eta", "2", "--omega", "200",
                    "--m-range", "100", *SMALL)
    assert code == 4
    assert read_csv(out / "resolution.csv")[0]["resolved"] == "0"


def test_en_curve(tmp_path):
    code, out = run(tmp_path, "en-curve", "--function", "5", "--T", "2", "--m-range", "5,10,20")
    assert code == 0
    errs = [float(r["error"]) for r in read_csv(out / "en_curve.csv")]
    assert errs[0] > errs[1] > errs[2]


def test_console_script_entry():
    import importlib.metadata as md
    eps = md.entry_points(group="console_scripts")
    assert any(ep.name == "fe-study" and ep.value == "fourier_extension.cli:main" for ep in eps)

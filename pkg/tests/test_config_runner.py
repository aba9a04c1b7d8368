"""Sweep configuration, presets, the experiment runner, and the CLI."""

import json
import os

import numpy as np
import pytest

from ftjc import (ConfigError, PresetError, SweepConfig, preset, preset_names,
                  run_experiment, verify_manifest)
from ftjc.cli import main


def _tiny_config(out_dir, **overrides):
    base = dict(alpha_list=(0.5,), mu=1.0, seed="fock_excited", t_max=1.0,
                dt=0.01, n_max=2, observables=("inversion", "concurrence"),
                output_dir=str(out_dir))
    base.update(overrides)
    return SweepConfig(**base)


def test_config_validation_rules(tmp_path):
    with pytest.raises(ConfigError):
        _tiny_config(tmp_path, alpha_list=(1.5,))
    with pytest.raises(ConfigError):
        _tiny_config(tmp_path, alpha_list=(0.0,))
    with pytest.raises(ConfigError):
        _tiny_config(tmp_path, mu=-1.0)
    with pytest.raises(ConfigError):
        _tiny_config(tmp_path, dt=0.02)  # coarser than t_max / 100
    with pytest.raises(ConfigError):
        _tiny_config(tmp_path, seed="thermal")
    with pytest.raises(ConfigError):
        _tiny_config(tmp_path, observables=("inversion", "inversion"))
    with pytest.raises(ConfigError):
        _tiny_config(tmp_path, observables=("voltage",))
    with pytest.raises(ConfigError):
        _tiny_config(tmp_path, observables=("mandel_q",))  # empty fock field
    with pytest.raises(ConfigError):
        _tiny_config(tmp_path, seed="coherent", n_max=40,
                     observables=("concurrence",))
    with pytest.raises(ConfigError):
        _tiny_config(tmp_path, observables=("husimi",))  # no times given
    with pytest.raises(ConfigError):
        _tiny_config(tmp_path, husimi_times=(0.5,))  # times without husimi
    with pytest.raises(ConfigError):
        _tiny_config(tmp_path, observables=("husimi",), husimi_times=(2.0,))
    with pytest.raises(ConfigError):
        _tiny_config(tmp_path, ml_tol=1e-3)
    with pytest.raises(ConfigError):
        _tiny_config(tmp_path, period_count=0)
    with pytest.raises(ConfigError):
        _tiny_config(tmp_path, output_dir="")


def test_config_dict_round_trip(tmp_path):
    cfg = _tiny_config(tmp_path, observables=("inversion",), mu_list=(0.5, 1.0))
    again = SweepConfig.from_dict(cfg.to_dict())
    assert again == cfg
    with pytest.raises(ConfigError):
        SweepConfig.from_dict({"alpha_list": [0.5], "voltage": 3})
    with pytest.raises(ConfigError):
        SweepConfig.from_dict({"t_max": "late"})


def test_presets_all_valid():
    names = list(preset_names())
    assert names == sorted(names)
    assert len(names) == 10
    for name in names:
        cfg = preset(name)
        cfg.validate()
    with pytest.raises(PresetError):
        preset("fig99")


def test_run_experiment_writes_verifiable_outputs(tmp_path):
    out = tmp_path / "run"
    cfg = _tiny_config(out)
    manifest = run_experiment(cfg)
    names = sorted(manifest["files"])
    assert names == ["concurrence_alpha0.5.tsv", "diagnostics_alpha0.5.tsv",
                     "inversion_alpha0.5.tsv"]
    report = verify_manifest(str(out))
    assert report["ok"], report["errors"]
    assert len(report["checks"]) > 0

    # values must round-trip exactly through the text format
    data = np.loadtxt(out / "inversion_alpha0.5.tsv", skiprows=1)
    assert data.shape == (101, 2)
    assert data[0, 0] == 0.0 and data[0, 1] == 1.0

    # tampering with a value must be caught
    path = out / "inversion_alpha0.5.tsv"
    lines = path.read_text().splitlines()
    lines[5] = lines[5].replace(lines[5].split("\t")[1], "0.123")
    path.write_text("\n".join(lines) + "\n")
    report = verify_manifest(str(out))
    assert not report["ok"]


def test_verify_catches_stale_extra_file(tmp_path):
    out = tmp_path / "run"
    run_experiment(_tiny_config(out))
    (out / "inversion_alpha0.75.tsv").write_text("t\tinversion\n0.0\t1.0\n")
    report = verify_manifest(str(out))
    assert not report["ok"]
    assert any("alpha0.75" in e for e in report["errors"])


def test_verify_catches_missing_file(tmp_path):
    out = tmp_path / "run"
    run_experiment(_tiny_config(out))
    os.remove(out / "concurrence_alpha0.5.tsv")
    report = verify_manifest(str(out))
    assert not report["ok"]


def test_rerun_is_byte_identical(tmp_path):
    out_a = tmp_path / "a"
    out_b = tmp_path / "b"
    run_experiment(_tiny_config(out_a, observables=("inversion", "mean_n")))
    run_experiment(_tiny_config(out_b, observables=("inversion", "mean_n")))
    for name in ("inversion_alpha0.5.tsv", "mean_n_alpha0.5.tsv",
                 "diagnostics_alpha0.5.tsv"):
        assert (out_a / name).read_bytes() == (out_b / name).read_bytes()


def test_parallel_run_matches_serial(tmp_path):
    cfg_kwargs = dict(alpha_list=(0.5, 0.75), observables=("inversion",))
    out_s = tmp_path / "serial"
    out_p = tmp_path / "parallel"
    run_experiment(_tiny_config(out_s, **cfg_kwargs))
    old = os.environ.get("FTJC_WORKERS")
    os.environ["FTJC_WORKERS"] = "2"
    try:
        run_experiment(_tiny_config(out_p, **cfg_kwargs))
    finally:
        if old is None:
            del os.environ["FTJC_WORKERS"]
        else:
            os.environ["FTJC_WORKERS"] = old
    for name in ("inversion_alpha0.5.tsv", "inversion_alpha0.75.tsv"):
        assert (out_s / name).read_bytes() == (out_p / name).read_bytes()


def test_run_with_husimi_and_coupling(tmp_path):
    out = tmp_path / "run"
    cfg = _tiny_config(out, observables=("inversion", "husimi", "coupling"),
                       husimi_times=(1.0,), husimi_window=(-5.0, 5.0, -5.0, 5.0),
                       husimi_resolution=21)
    manifest = run_experiment(cfg)
    names = sorted(manifest["files"])
    assert "husimi_alpha0.5_t1.tsv" in names
    assert "roundtrip_alpha0.5.json" in names
    assert "coupling_alpha0.5.tsv" in names
    report = verify_manifest(str(out))
    assert report["ok"], report["errors"]
    rt = json.loads((out / "roundtrip_alpha0.5.json").read_text())
    assert rt["alpha"] == 0.5
    assert rt["max_abs_dw_trimmed"] < 1e-2


def test_cli_run_presets_verify(tmp_path, capsys):
    assert main(["presets"]) == 0
    listing = capsys.readouterr().out
    assert "fig2" in listing and "fig10" in listing

    out = tmp_path / "cli_run"
    cfg_file = tmp_path / "cfg.json"
    cfg_file.write_text(json.dumps(_tiny_config(out).to_dict()))
    code = main(["run", "--config", str(cfg_file), "--observables",
                 "inversion", "--alpha", "0.75"])
    assert code == 0
    assert (out / "inversion_alpha0.75.tsv").exists()
    assert not (out / "inversion_alpha0.5.tsv").exists()

    assert main(["verify", str(out)]) == 0
    capsys.readouterr()

    # break a file, verify must fail with exit code 1
    path = out / "inversion_alpha0.75.tsv"
    path.write_text(path.read_text().replace("1.0", "0.9", 1))
    assert main(["verify", str(out)]) == 1


def test_cli_error_reporting(tmp_path, capsys):
    code = main(["run", "--out", str(tmp_path / "x")])
    assert code == 2
    err = capsys.readouterr().err
    record = json.loads(err.strip().splitlines()[-1])
    assert "error" in record and "message" in record

    code = main(["run", "--preset", "fig2", "--dt", "5.0",
                 "--out", str(tmp_path / "y")])
    assert code == 2

    # a missing directory is a verification failure, not a crash
    code = main(["verify", str(tmp_path / "missing_dir")])
    assert code == 1

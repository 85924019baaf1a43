"""Command-line interface: subcommands, exit codes, overrides, outputs."""

import json
import os
import shutil
import subprocess
import sys

import pytest

from moebius_harvest.cli import (BUNDLED_CONFIGS, EXIT_CONFIG, EXIT_NUMERICAL,
                                 EXIT_OK, EXIT_VALIDATION, load_config_text,
                                 main)

QUICK_SYSTEM = {
    "n_sites": 8, "hopping_g": 1.0, "delta": 0.6, "boundary": "moebius",
    "omega": -6.0, "epsilon_a": -6.0, "coupling_j": 1.0, "xi": 1.0,
    "gamma": 0.3, "kappa": 0.3,
}


def write_config(tmp_path, name="quick.json", *, system=None, propagation=None,
                 sweep=None, **top):
    data = dict(top)
    data["system"] = dict(QUICK_SYSTEM if system is None else system)
    if propagation is not None:
        data["propagation"] = dict(propagation)
    if sweep is not None:
        data["sweep"] = dict(sweep)
    path = tmp_path / name
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


def run_cli(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_spectrum_bundled_config(capsys):
    code, out, err = run_cli(capsys, ["spectrum", "--config", "fig2"])
    lines = out.splitlines()
    assert code == EXIT_OK
    assert err == ""
    assert lines[0] == "m,k,eps_k"
    assert len(lines) == 1 + 400
    energies = [float(line.split(",")[2]) for line in lines[1:]]
    assert min(energies) >= 2.0 * 0.25 - 1e-12
    assert max(energies) <= 2.0 + 1e-12
    momenta = [float(line.split(",")[1]) for line in lines[1:]]
    assert all(b > a for a, b in zip(momenta, momenta[1:]))


def test_bundled_name_accepts_json_suffix(capsys):
    code, out, _ = run_cli(capsys, ["spectrum", "--config", "fig3.json"])
    assert code == EXIT_OK
    assert out.splitlines()[0] == "m,k,eps_k"
    assert load_config_text("fig3.json") == load_config_text("fig3")


def test_couplings_header_and_width(capsys):
    code, out, _ = run_cli(capsys, ["couplings", "--config", "fig6"])
    lines = out.splitlines()
    assert code == EXIT_OK
    assert lines[0] == "m,k,abs_h_a,abs_h_b"
    assert len(lines) == 1 + 100
    assert all(len(line.split(",")) == 4 for line in lines[1:])


def test_dynamics_trace_columns(capsys):
    code, out, _ = run_cli(capsys, ["dynamics", "--config", "fig3"])
    lines = out.splitlines()
    assert code == EXIT_OK
    assert lines[0] == ("t_xi,t_ps,p_photon,p_acceptor,p_donors,norm2,"
                        "eta_cum,loss_cum")
    assert len(lines) > 100
    first = [float(x) for x in lines[1].split(",")]
    assert first[0] == 0.0 and first[2] == 1.0 and first[3] == 0.0
    for line in (lines[1], lines[len(lines) // 2], lines[-1]):
        row = [float(x) for x in line.split(",")]
        assert row[1] == pytest.approx(row[0] / 10.0, rel=1e-12)
        assert row[5] <= 1.0 + 1e-9
        assert abs(row[5] + row[6] + row[7] - 1.0) < 1e-6


def test_efficiency_summary_converges(tmp_path, capsys):
    config = write_config(tmp_path,
                          propagation={"step_dt": 0.005, "t_max": 80.0})
    code, out, err = run_cli(capsys, ["efficiency", "--config", config])
    assert code == EXIT_OK
    assert err == ""
    payload = json.loads(out)
    assert set(payload) == {"eta", "fluorescence_loss", "residual",
                            "terminated_by", "converged"}
    assert payload["converged"] is True
    assert 0.0 < payload["eta"] < 1.0
    assert payload["eta"] + payload["fluorescence_loss"] == pytest.approx(
        1.0, abs=1e-6)


def test_efficiency_without_decay_reports_nonconvergence(tmp_path, capsys):
    system = dict(QUICK_SYSTEM, gamma=0.0, kappa=0.0)
    config = write_config(tmp_path, system=system,
                          propagation={"step_dt": 0.01, "t_max": 5.0})
    code, out, err = run_cli(capsys, ["efficiency", "--config", config])
    assert code == EXIT_NUMERICAL
    payload = json.loads(out)
    assert payload["converged"] is False
    assert "lower bound" in err


def test_unreachable_stability_reports_numerical_error(tmp_path, capsys):
    system = dict(QUICK_SYSTEM, omega=-1e6)
    config = write_config(tmp_path, system=system,
                          propagation={"step_dt": 0.01, "t_max": 1.0})
    code, _, err = run_cli(capsys, ["efficiency", "--config", config])
    assert code == EXIT_NUMERICAL
    assert "error:" in err and "stability guard" in err


def test_sweep_csv_layout(tmp_path, capsys):
    config = write_config(
        tmp_path,
        propagation={"step_dt": 0.01, "t_max": 60.0},
        sweep={"delta_values": [0.0, 0.6], "detuning_start": -1.0,
               "detuning_stop": 1.0, "detuning_count": 3})
    code, out, _ = run_cli(capsys, ["sweep", "--config", config])
    lines = out.splitlines()
    assert code == EXIT_OK
    assert lines[0] == "delta,detuning,eta,converged"
    assert len(lines) == 1 + 6
    assert lines[1].startswith("0,-1,")
    assert lines[4].startswith("0.59999999999999998,-1,")
    assert all(line.endswith(",true") for line in lines[1:])
    etas = [float(line.split(",")[2]) for line in lines[1:]]
    assert all(0.0 <= eta <= 1.0 for eta in etas)


def test_perturb_csv_layout(tmp_path, capsys):
    system = dict(QUICK_SYSTEM, coupling_j=0.1)
    config = write_config(
        tmp_path, system=system,
        sweep={"delta_values": [0.6], "detuning_start": -2.0,
               "detuning_stop": 3.0, "detuning_count": 2})
    code, out, _ = run_cli(capsys, ["perturb", "--config", config])
    lines = out.splitlines()
    assert code == EXIT_OK
    assert lines[0] == "delta,detuning,eta,converged"
    assert len(lines) == 1 + 2
    assert all(line.endswith(",true") for line in lines[1:])


def test_pbc_compare_bundled_reduction(capsys):
    code, out, err = run_cli(capsys, ["pbc-compare", "--config", "fig3_pbc"])
    assert code == EXIT_OK
    assert err == ""
    payload = json.loads(out)
    assert payload["pass"] is True
    assert payload["max_abs_pa_difference"] < payload["tolerance"]
    assert payload["samples"] > 100


def test_pbc_compare_rejects_moebius_config(capsys):
    code, _, err = run_cli(capsys, ["pbc-compare", "--config", "fig3"])
    assert code == EXIT_CONFIG
    assert "periodic" in err


def test_validate_reports_all_checks(capsys):
    code, out, _ = run_cli(capsys, ["validate"])
    lines = out.splitlines()
    assert code == EXIT_OK
    assert len(lines) == 8
    assert all(line.startswith("PASS ") for line in lines)
    assert "deviation" in lines[0]


def test_out_file_matches_stdout_bytes(tmp_path, capsys):
    out_path = tmp_path / "spectrum.csv"
    code, _, _ = run_cli(capsys, ["spectrum", "--config", "fig2",
                                  "--out", str(out_path)])
    assert code == EXIT_OK
    code, stdout_text, _ = run_cli(capsys, ["spectrum", "--config", "fig2"])
    assert code == EXIT_OK
    assert out_path.read_bytes() == stdout_text.encode("utf-8")


def test_reruns_are_byte_identical(tmp_path, capsys):
    config = write_config(tmp_path,
                          propagation={"step_dt": 0.01, "t_max": 30.0})
    first = tmp_path / "a.csv"
    second = tmp_path / "b.csv"
    for target in (first, second):
        code, _, _ = run_cli(capsys, ["dynamics", "--config", config,
                                      "--out", str(target)])
        assert code == EXIT_OK
    assert first.read_bytes() == second.read_bytes()


def test_overrides_change_the_run(capsys):
    _, base, _ = run_cli(capsys, ["spectrum", "--config", "fig2"])
    code, shifted, _ = run_cli(capsys, ["spectrum", "--config", "fig2",
                                        "--delta", "0.6"])
    assert code == EXIT_OK
    assert shifted != base
    energies = [float(line.split(",")[2])
                for line in shifted.splitlines()[1:]]
    assert min(energies) >= 2.0 * 0.6 - 1e-12


def test_overrides_are_validated_like_config_values(capsys):
    code, _, err = run_cli(capsys, ["spectrum", "--config", "fig2",
                                    "--delta", "1.5"])
    assert code == EXIT_CONFIG
    assert "system.delta = 1.5: must lie in" in err


def test_override_creates_missing_block(tmp_path, capsys):
    config = write_config(tmp_path)  # no propagation block at all
    code, out, _ = run_cli(capsys, ["efficiency", "--config", config,
                                    "--t-max", "80", "--step-dt", "0.005"])
    assert code == EXIT_OK
    assert json.loads(out)["converged"] is True


def test_missing_config_lists_bundled_names(capsys):
    code, _, err = run_cli(capsys, ["spectrum", "--config", "nope"])
    assert code == EXIT_CONFIG
    for name in BUNDLED_CONFIGS:
        assert name in err


def test_config_syntax_error_is_reported(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text('{"system": }', encoding="utf-8")
    code, _, err = run_cli(capsys, ["spectrum", "--config", str(path)])
    assert code == EXIT_CONFIG
    assert "config syntax" in err


def test_unknown_key_in_file_is_rejected(tmp_path, capsys):
    data = json.loads(load_config_text("fig3"))
    data["system"]["twist"] = 2
    path = tmp_path / "mutated.json"
    path.write_text(json.dumps(data), encoding="utf-8")
    code, _, err = run_cli(capsys, ["dynamics", "--config", str(path)])
    assert code == EXIT_CONFIG
    assert "system.twist: unknown key" in err


def test_unwritable_output_path_is_a_config_error(tmp_path, capsys):
    target = tmp_path / "missing-dir" / "out.csv"
    code, _, err = run_cli(capsys, ["spectrum", "--config", "fig2",
                                    "--out", str(target)])
    assert code == EXIT_CONFIG
    assert "error:" in err


def test_missing_subcommand_exits_with_usage_error(capsys):
    with pytest.raises(SystemExit) as excinfo:
        main([])
    assert excinfo.value.code == 2
    assert "usage" in capsys.readouterr().err


def test_unknown_subcommand_exits_with_usage_error(capsys):
    with pytest.raises(SystemExit) as excinfo:
        main(["harvest-everything"])
    assert excinfo.value.code == 2
    capsys.readouterr()


def test_console_script_runs_with_forced_numpy_backend(tmp_path):
    executable = shutil.which("moebius-harvest")
    assert executable is not None, "console script is not installed"
    env = dict(os.environ, MOEBIUS_HARVEST_BACKEND="numpy")
    result = subprocess.run(
        [executable, "spectrum", "--config", "fig2"],
        capture_output=True, text=True, env=env, timeout=120)
    assert result.returncode == 0
    assert result.stdout.splitlines()[0] == "m,k,eps_k"
    probe = subprocess.run(
        [sys.executable, "-c",
         "import moebius_harvest as m; print(m.BACKEND)"],
        capture_output=True, text=True, env=env, timeout=120)
    assert probe.stdout.strip() == "numpy"

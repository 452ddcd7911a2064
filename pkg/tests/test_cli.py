import argparse
import csv
import math

import pytest

import main
from processes import sweep_process
from processes.sweep_process import SweepRow


ZEROS = ["0"] * 7


def test_parse_values_accepts_ranges_and_lists():
    assert main.parse_values("0:1:3") == [0.0, 0.5, 1.0]
    assert main.parse_values("0.1, 0.2,") == [0.1, 0.2]
    assert main.parse_values("") == []
    with pytest.raises(argparse.ArgumentTypeError):
        main.parse_values("1:2")
    with pytest.raises(argparse.ArgumentTypeError):
        main.parse_values("a,b")


def test_show_config_prints_effective_settings(capsys, monkeypatch):
    monkeypatch.delenv("OCTUPOLAR_CONFIG", raising=False)

    assert main.main(["--show-config"]) == 0
    out = capsys.readouterr().out
    assert "grad_tol = 1e-12" in out
    assert "seed_grid = 64x128" in out


def test_missing_command_prints_help(capsys):
    assert main.main([]) == 2
    assert "usage: octupolar" in capsys.readouterr().out


def test_unreadable_config_file_is_a_configuration_error(tmp_path, capsys):
    assert main.main(["--config", str(tmp_path / "missing.cfg"), "group"]) == 2
    assert "Configuration error" in capsys.readouterr().err


def test_group_verify(capsys):
    assert main.main(["group", "--verify"]) == 0
    assert "576/576 entries match" in capsys.readouterr().out


def test_phase_at_the_tetrahedral_point(capsys):
    assert main.main(["phase", "--cylinder", str(1 / math.sqrt(2)), "0", "0"]) == 0
    assert capsys.readouterr().out.strip() == "Td, Tetrahedral, phase Tetrahedral, 4 maxima, variant +, absolute max at pole true"


def test_parameters_outside_the_cylinder_fail(capsys):
    assert main.main(["analyze", "--cylinder", "0.1", "2.5", "0"]) == 1
    assert capsys.readouterr().err.startswith("Error: rho=2.5")


def test_zero_tensor_cannot_be_analyzed_but_can_be_plotted(tmp_path, capsys):
    assert main.main(["analyze", "--raw", *ZEROS]) == 1
    assert "identically zero" in capsys.readouterr().err

    output = tmp_path / "zero.csv"
    assert main.main(["plotdata", "--raw", *ZEROS, "--resolution", "4", "--output", str(output)]) == 0
    assert output.exists()


def test_sweep_in_degrees(monkeypatch, tmp_path, capsys):
    monkeypatch.chdir(tmp_path)
    monkeypatch.setattr(
        sweep_process, "evaluate_point", lambda p, c: SweepRow(p.k, p.rho, p.chi, 10, 3, "B3+")
    )
    output = tmp_path / "sweep.csv"

    code = main.main(["--degrees", "sweep", "--k", "0.1,0.2", "--rho", "0.5", "--chi", "-90", "--output", str(output)])

    assert code == 0
    assert "Sweep completed: 2 point(s), 0 failed." in capsys.readouterr().out
    with open(output, newline="", encoding="utf-8") as handle:
        rows = list(csv.reader(handle))
    assert [float(r[2]) for r in rows[1:]] == [pytest.approx(-90.0)] * 2
    assert (tmp_path / "logs").is_dir()

import csv
import json
import math
from dataclasses import replace
from pathlib import Path
from types import SimpleNamespace

import numpy as np
import pytest

from core.errors import NonConvergence
from core.orientation import OrientedParams, params_tensor
from core.separatrix import SectionSample, SeparatrixSection, SeparatrixSurface
from core.solver import solve_spectrum
from processes import plotdata_process, separatrix_process, sweep_process
from processes.sweep_process import SWEEP_HEADER, SweepRow
from services.analysis_service import AnalysisService, load_tensor_file
from services.group_service import GroupService
from services.sweep_service import SeparatrixService, SweepService


def read_csv(path):
    with open(path, newline="", encoding="utf-8") as handle:
        return list(csv.reader(handle))


def fake_report(phase="B3", variant="+", count=10, n_max=3):
    return SimpleNamespace(phase=phase, variant=variant, count=count, n_max=n_max)


def test_sweep_service_delegates_to_process_object(tmp_path, log_dir):
    calls = {}

    class FakeProcess:
        def build_grid(self, k_values, rho_values, chi_values):
            calls["grid"] = (list(k_values), list(rho_values), list(chi_values))
            return ["p1", "p2"]

        def run_sweep(self, points, output_path, cfg, **kwargs):
            calls["points"] = points
            calls["checkpoint"] = kwargs["checkpoint_path"]
            kwargs["log_callback"]("[SWEEP] fake")
            return [SweepRow(0.1, 0.5, 0.0, 10, 3, "B3+"), SweepRow(0.2, 0.5, 0.0, None, None, "NonConvergence")]

    messages = []
    service = SweepService(log_dir=log_dir)
    service.process = FakeProcess()
    output = tmp_path / "sweep.csv"

    result = service.run([0.1, 0.2], [0.5], [0.0], output, log_callback=messages.append)

    assert result.success is True
    assert result.message == "Sweep completed: 2 point(s), 1 failed."
    assert result.output_paths == [str(output)]
    assert calls["grid"] == ([0.1, 0.2], [0.5], [0.0])
    assert calls["points"] == ["p1", "p2"]
    assert calls["checkpoint"] == Path(f"{output}.checkpoint.jsonl")
    assert "[SWEEP] fake" in messages
    assert "[SWEEP] fake" in Path(result.details["log_path"]).read_text(encoding="utf-8")


def test_sweep_service_reports_process_errors(tmp_path, log_dir):
    class FakeProcess:
        def build_grid(self, *args):
            return []

        def run_sweep(self, *args, **kwargs):
            raise OSError("disk full")

    service = SweepService(log_dir=log_dir)
    service.process = FakeProcess()

    result = service.run([], [], [], tmp_path / "out.csv")

    assert result.success is False
    assert "disk full" in result.message


def test_build_grid_is_k_major():
    points = sweep_process.build_grid([0.1, 0.2], [0.5, 1.0], [0.0])

    assert [(p.k, p.rho) for p in points] == [(0.1, 0.5), (0.1, 1.0), (0.2, 0.5), (0.2, 1.0)]


def test_evaluate_point_appends_the_variant_to_bulk_phases(monkeypatch, cfg):
    monkeypatch.setattr(sweep_process, "solve_spectrum", lambda p, c: fake_report("B3", "-"))
    row = sweep_process.evaluate_point(OrientedParams(0.1, 0.5, 0.0), cfg)
    assert row.phase == "B3-"

    monkeypatch.setattr(sweep_process, "solve_spectrum", lambda p, c: fake_report("Tetrahedral", "+", 14, 4))
    row = sweep_process.evaluate_point(OrientedParams(0.1, 0.5, 0.0), cfg)
    assert row.phase == "Tetrahedral"


def test_evaluate_point_records_solver_failures(monkeypatch, cfg):
    def failing(p, c):
        raise NonConvergence(3, 10, 1e-3)

    monkeypatch.setattr(sweep_process, "solve_spectrum", failing)

    row = sweep_process.evaluate_point(OrientedParams(0.1, 0.5, 0.0), cfg)

    assert (row.count, row.n_max, row.phase) == (None, None, "NonConvergence")


def test_run_sweep_resumes_from_checkpoint(monkeypatch, tmp_path, cfg):
    evaluated = []

    def fake_evaluate(p, c):
        evaluated.append(p.k)
        return SweepRow(p.k, p.rho, p.chi, 14, 4, "B4+")

    monkeypatch.setattr(sweep_process, "evaluate_point", fake_evaluate)
    points = sweep_process.build_grid([0.1, 0.2, 0.3], [0.5], [math.pi / 2])
    checkpoint = tmp_path / "sweep.csv.checkpoint.jsonl"
    restored = {"index": 0, "row": {"k": 0.1, "rho": 0.5, "chi": math.pi / 2, "count": 10, "n_max": 3, "phase": "B3+"}}
    checkpoint.write_text(json.dumps(restored) + "\n" + '{"index": 1, "ro', encoding="utf-8")
    progress = []

    rows = sweep_process.run_sweep(
        points,
        tmp_path / "sweep.csv",
        cfg,
        checkpoint_path=checkpoint,
        degrees=True,
        progress_callback=progress.append,
    )

    assert sorted(evaluated) == [0.2, 0.3]
    assert [row.count for row in rows] == [10, 14, 14]
    assert not checkpoint.exists()
    table = read_csv(tmp_path / "sweep.csv")
    assert table[0] == SWEEP_HEADER
    assert [float(r[0]) for r in table[1:]] == [0.1, 0.2, 0.3]
    assert float(table[1][2]) == pytest.approx(90.0)
    assert progress[-1] == 100


def test_run_sweep_recomputes_checkpoint_rows_from_another_grid(monkeypatch, tmp_path, cfg):
    evaluated = []

    def fake_evaluate(p, c):
        evaluated.append(p.k)
        return SweepRow(p.k, p.rho, p.chi, 14, 4, "B4+")

    monkeypatch.setattr(sweep_process, "evaluate_point", fake_evaluate)
    checkpoint = tmp_path / "sweep.csv.checkpoint.jsonl"
    old_rows = [
        {"index": i, "row": {"k": k, "rho": 0.5, "chi": -1.0, "count": 10, "n_max": 3, "phase": "B3+"}}
        for i, k in enumerate([0.1, 0.2, 0.3])
    ]
    checkpoint.write_text("".join(json.dumps(r) + "\n" for r in old_rows), encoding="utf-8")
    logs = []

    points = sweep_process.build_grid([0.1, 0.25, 0.4, 0.5], [0.5], [-1.0])
    rows = sweep_process.run_sweep(
        points, tmp_path / "sweep.csv", cfg, checkpoint_path=checkpoint, log_callback=logs.append
    )

    assert sorted(evaluated) == [0.25, 0.4, 0.5]
    assert [(row.k, row.count) for row in rows] == [(0.1, 10), (0.25, 14), (0.4, 14), (0.5, 14)]
    assert any(line.startswith("[WARN] 2 checkpoint row(s)") for line in logs)
    assert [float(r[0]) for r in read_csv(tmp_path / "sweep.csv")[1:]] == [0.1, 0.25, 0.4, 0.5]


def test_run_sweep_on_an_empty_grid_writes_only_the_header(tmp_path, cfg):
    rows = sweep_process.run_sweep([], tmp_path / "empty.csv", cfg)

    assert rows == []
    assert read_csv(tmp_path / "empty.csv") == [SWEEP_HEADER]


def test_load_checkpoint_skips_torn_lines(tmp_path):
    path = tmp_path / "c.jsonl"
    entry = {"index": 2, "row": {"k": 0.3, "rho": 1.0, "chi": 0.0, "count": None, "n_max": None, "phase": "CountAmbiguous"}}
    path.write_text("\n" + json.dumps(entry) + "\n{broken", encoding="utf-8")

    done = sweep_process.load_checkpoint(path)

    assert list(done) == [2]
    assert done[2].phase == "CountAmbiguous"
    assert sweep_process.load_checkpoint(tmp_path / "missing.jsonl") == {}


def test_run_separatrix_writes_sections_and_surface(monkeypatch, tmp_path, cfg):
    def fake_trace(chi, rho_values, c):
        samples = [SectionSample(rho=r, k_crit=0.1 * r, count=10, tag="S1") for r in rho_values]
        return SeparatrixSection(chi=chi, samples=samples)

    monkeypatch.setattr(separatrix_process, "trace_section", fake_trace)
    logs = []

    surface, paths = separatrix_process.run_separatrix(
        [-math.pi / 6, -math.pi / 2], [0.5, 1.0], tmp_path / "out", cfg, workers=2, log_callback=logs.append
    )

    assert [s.chi for s in surface.sections] == [-math.pi / 2, -math.pi / 6]
    table = read_csv(paths[0])
    assert table[0] == separatrix_process.SECTION_HEADER
    assert len(table) == 5
    assert table[1][3:] == ["", ""]
    payload = json.loads(paths[1].read_text(encoding="utf-8"))
    assert payload["schema_version"] == 1
    assert len(payload["sections"]) == 2
    assert logs[-1].startswith("[OK]")


def test_separatrix_service_uses_configured_grids(tmp_path, log_dir, cfg):
    captured = {}

    class FakeProcess:
        def run_separatrix(self, chi_values, rho_values, output_dir, c, **kwargs):
            captured["grids"] = (chi_values, rho_values)
            return SeparatrixSurface(sections=[], cusp_line=[], boundary_line=[]), [Path(output_dir) / "a.csv"]

    service = SeparatrixService(cfg.with_overrides(surface_chi=[-1.0], section_rho=[0.5]), log_dir=log_dir)
    service.process = FakeProcess()

    result = service.run(tmp_path)

    assert result.success is True
    assert result.message == "Separatrix traced: 0 section(s), 0 cusp point(s)."
    assert captured["grids"] == ([-1.0], [0.5])


def test_load_tensor_file_forms(tmp_path):
    as_list = tmp_path / "list.json"
    as_list.write_text(json.dumps({"components": [0, 0, 0, 1, 0, 0, 0]}), encoding="utf-8")
    as_dict = tmp_path / "dict.json"
    as_dict.write_text(json.dumps({"components": {"alpha3": 1.0}}), encoding="utf-8")

    assert load_tensor_file(as_list).alpha3 == 1.0
    assert load_tensor_file(as_dict) == load_tensor_file(as_list)

    array = tmp_path / "array.json"
    array.write_text(json.dumps({"array": load_tensor_file(as_list).full.tolist()}), encoding="utf-8")
    assert load_tensor_file(array) == load_tensor_file(as_list)


def test_load_tensor_file_rejects_bad_input(tmp_path):
    bad = np.zeros((3, 3, 3))
    bad[0, 0, 1] = 1.0
    cases = {
        "asym.json": {"array": bad.tolist()},
        "unknown.json": {"components": {"gamma": 1.0}},
        "empty.json": {},
        "list.json": [1, 2, 3],
    }
    for name, payload in cases.items():
        path = tmp_path / name
        path.write_text(json.dumps(payload), encoding="utf-8")
        with pytest.raises(ValueError):
            load_tensor_file(path)


def test_resolve_params_requires_exactly_one_input():
    service = AnalysisService()

    with pytest.raises(ValueError):
        service.resolve_params()
    with pytest.raises(ValueError):
        service.resolve_params(cylinder=(0.1, 0.5, 0.0), raw=[0.0] * 7)


def test_resolve_params_converts_degrees():
    request = AnalysisService().resolve_params(cylinder=(0.1, 0.5, -90.0), degrees=True)

    assert request.params.chi == pytest.approx(-math.pi / 2)
    assert request.to_dict() == {"source": "cylinder"}


def test_zero_tensor_plots_without_markers(tmp_path):
    service = AnalysisService(solve_fn=lambda *args: pytest.fail("zero tensor must not be solved"))
    request = service.resolve_params(raw=[0.0] * 7, allow_zero=True)

    result = service.plotdata(request, "contour", 4, tmp_path / "zero.csv")

    assert request.params is None
    assert result.success is True
    assert result.details["markers"] == 0
    rows = read_csv(tmp_path / "zero.csv")[1:]
    assert len(rows) == 5 * 9
    assert {float(r[3]) for r in rows} == {0.0}


def test_plotdata_rejects_unknown_kind(tmp_path):
    service = AnalysisService()
    request = service.resolve_params(raw=[0.0] * 7, allow_zero=True)

    result = service.plotdata(request, "surface", 4, tmp_path / "x.csv")

    assert result.success is False
    assert "unknown plot kind" in result.message


def test_polar_markers_sit_at_value_times_direction(tmp_path):
    t = OrientedParams(0.4, 0.5, -1.0)
    marker = plotdata_process.Marker(np.array([0.0, 0.0, 1.0]), 1.0, "Max")
    path = plotdata_process.write_plotdata(params_tensor(t), "polar", 3, tmp_path / "p.csv", [marker])

    rows = read_csv(path)
    assert rows[0] == plotdata_process.POLAR_HEADER
    assert rows[-1][0] == "critical"
    assert [float(v) for v in rows[-1][1:5]] == [0.0, 0.0, 1.0, 1.0]


def test_analyze_writes_a_versioned_report(tmp_path, cfg):
    service = AnalysisService(cfg)
    request = service.resolve_params(cylinder=(1 / math.sqrt(2), 0.0, 0.0))

    result = service.analyze(request, json_path=tmp_path / "report.json")

    assert result.success is True
    assert "14 critical point(s)" in result.message
    payload = json.loads((tmp_path / "report.json").read_text(encoding="utf-8"))
    assert set(payload) == {"schema_version", "generator", "input", "report"}
    assert payload["report"]["count"] == 14
    assert len(result.details["table"].splitlines()) == 15


def test_phase_line_at_the_tetrahedral_point(cfg):
    service = AnalysisService(cfg)
    request = service.resolve_params(cylinder=(1 / math.sqrt(2), 0.0, 0.0))

    result = service.phase(request)

    assert result.message == "Td, Tetrahedral, phase Tetrahedral, 4 maxima, variant +, absolute max at pole true"


def test_phase_line_reports_a_pole_that_is_not_the_absolute_max(cfg):
    def secondary_pole(p, c):
        return replace(solve_spectrum(p, c), absolute_max_at_pole=False)

    service = AnalysisService(cfg, solve_fn=secondary_pole)
    request = service.resolve_params(cylinder=(1 / math.sqrt(2), 0.0, 0.0))

    result = service.phase(request)

    assert result.message.endswith("variant -, absolute max at pole false")


def test_analyze_reports_solver_errors():
    def failing(*args):
        raise NonConvergence(5, 10, 1e-2)

    service = AnalysisService(solve_fn=failing)
    request = service.resolve_params(cylinder=(0.1, 0.5, 0.0))

    result = service.analyze(request)

    assert result.success is False
    assert "Newton search failed for 5/10 seeds" in result.message


def test_group_service_verifies_the_table():
    service = GroupService()

    verified = service.verify()
    described = service.describe()

    assert verified.success is True
    assert verified.message == "576/576 entries match"
    assert verified.details["diff"] == ""
    assert "Subgroups (30):" in described.message
    assert described.details["subgroups"] == 30

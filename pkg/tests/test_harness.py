import json
import math
from pathlib import Path

import pytest

from photon_qsl.harness import cli
from photon_qsl.harness.config import (ConfigError, config_to_text, default_config,
                                       evaluate_expression, load_config, parse_config)
from photon_qsl.harness.emit import COLUMNS, emit, header, read_csv, render_csv, render_json
from photon_qsl.harness.report import format_critical, self_check, solve_critical
from photon_qsl.harness.sweep import EvaluationError, run_point, run_sweep
from photon_qsl.nonmarkov import critical_xi, critical_xi_numeric

DATA = Path(__file__).parent / "data"
CONFIGS = Path(__file__).parent.parent / "configs"
HEADER = "xi_rad,tau1_ps,tau2_ps,tau_inf_ps,tau_qsl_ps,n_blp,n_rhp,rhp_saturated,kappa_tau_abs,bures_angle_rad"


@pytest.mark.parametrize("text, value", [
    ("1.5", 1.5), ("pi/4", math.pi / 4), ("-2*pi", -2 * math.pi), ("1e-10", 1e-10), ("0.5 * pi + 1", 0.5 * math.pi + 1),
])
def test_expression(text, value):
    assert evaluate_expression(text) == value


@pytest.mark.parametrize("text", ["__import__('os')", "e", "1/0", "[1]", "pi pi"])
def test_expression_rejects(text):
    with pytest.raises(ConfigError):
        evaluate_expression(text)


def test_default_config_is_experimental_point():
    cfg = default_config()
    s = cfg.spectral
    assert (s.omega1, s.omega2, s.sigma, s.delta_n) == (2676.0, 2692.0, 1.8, 0.01)
    assert s.xi == cfg.alpha == math.pi / 4
    assert cfg.tau == pytest.approx(2 * math.pi / (16 * 0.01), rel=1e-15)
    assert cfg.sweep is None
    assert cfg.tolerances.quadrature_rel == 1e-10
    assert cfg.tolerances.root_abs == 1e-12
    assert cfg.tolerances.epsilon_floor == 1e-13


def test_overrides_and_sweep_defaults():
    cfg = parse_config(None, ["sweep.points=11", "state.alpha_rad = 0.3"])
    assert cfg.alpha == 0.3
    assert cfg.sweep.variable == "xi"
    assert (cfg.sweep.start, cfg.sweep.stop, cfg.sweep.points) == (0.0, math.pi / 2, 11)


def test_tau_sweep_accepts_window_end():
    cfg = parse_config("sweep.variable = tau\nsweep.start = 10\nsweep.stop = window-end\nsweep.points = 3\n")
    assert cfg.sweep.stop == cfg.tau


@pytest.mark.parametrize("text", [
    "spectral.bogus = 1",
    "no equals sign",
    "spectral.xi_rad = 2",
    "spectral.sigma_rad_per_ps = 0",
    "drive.tau_ps = -1",
    "sweep.variable = sigma",
    "sweep.variable = xi\nsweep.start = 0\nsweep.stop = 2\nsweep.points = 5",
    "sweep.variable = xi\nsweep.start = 0\nsweep.stop = 1\nsweep.points = 1",
    "sweep.variable = tau\nsweep.start = 0\nsweep.stop = 1\nsweep.points = 3",
    "output.format = xml",
    "tolerances.root_abs = 0",
])
def test_config_errors(text):
    with pytest.raises(ConfigError):
        parse_config(text)


def test_config_text_round_trip():
    cfg = parse_config(None, ["sweep.variable=alpha", "sweep.start=0", "sweep.stop=1", "sweep.points=4",
                              "spectral.xi_rad=0.3"])
    assert parse_config(config_to_text(cfg)) == cfg


def test_load_config_file():
    cfg = load_config(CONFIGS / "fig2_xi_sweep.cfg")
    assert cfg.sweep.points == 201
    with pytest.raises(ConfigError):
        load_config(CONFIGS / "missing.cfg")


def test_run_point_defaults():
    row = run_point(default_config())
    assert row.value == math.pi / 4
    assert row.n_blp == pytest.approx(0.78833683897, abs=1e-10)
    assert row.tau_qsl > 0 and row.rhp_saturated
    assert row.kappa_tau_abs == pytest.approx(0.7789, abs=5e-5)


def test_run_point_single_peak():
    row = run_point(parse_config(None, ["spectral.xi_rad=0"]))
    assert row.n_blp == 0.0 and row.n_rhp == 0.0 and not row.rhp_saturated


def test_run_point_pole_state():
    row = run_point(parse_config(None, ["state.alpha_rad=0"]))
    assert row.degenerate
    assert row.tau1 == row.tau2 == row.tau_inf == row.tau_qsl == 0.0


def test_run_point_rejects_sweep():
    with pytest.raises(ConfigError):
        run_point(parse_config(None, ["sweep.points=3"]))


def test_sweep_ratio_columns():
    rows = run_sweep(parse_config(None, ["sweep.points=9", "spectral.sigma_rad_per_ps=1.2"]))
    assert len(rows) == 9
    for r in rows:
        assert r.tau_inf == pytest.approx(2 * r.tau1, rel=1e-12)
        assert r.tau_inf == pytest.approx(math.sqrt(2) * r.tau2, rel=1e-12)


def test_sweep_degenerate_range():
    rows = run_sweep(parse_config(None, ["sweep.start=0.4", "sweep.stop=0.4", "sweep.points=2"]))
    assert rows[0] == rows[1]


def test_alpha_and_tau_sweeps():
    rows = run_sweep(parse_config(None, ["sweep.variable=alpha", "sweep.start=0", "sweep.stop=pi/2",
                                         "sweep.points=5"]))
    assert rows[0].degenerate and rows[-1].degenerate and not rows[2].degenerate
    assert len({r.n_blp for r in rows}) == 1
    rows = run_sweep(parse_config(None, ["sweep.variable=tau", "sweep.start=1", "sweep.stop=window-end",
                                         "sweep.points=4"]))
    assert [r.value for r in rows][-1] == pytest.approx(39.269908169872416)
    assert all(r.tau_qsl <= r.value for r in rows)


def test_sweep_parallel_matches_sequential():
    cfg = parse_config(None, ["sweep.points=12"])
    assert run_sweep(cfg, workers=3) == run_sweep(cfg)


def test_sweep_error_names_grid_value(monkeypatch):
    from photon_qsl import qsl
    from photon_qsl.errors import QuadratureError

    def boom(*args, **kwargs):
        raise QuadratureError("forced")

    monkeypatch.setattr(qsl, "qsl_time", boom)
    with pytest.raises(EvaluationError) as info:
        run_sweep(parse_config(None, ["sweep.points=3"]))
    assert info.value.value == 0.0 and info.value.quantity == "qsl_time"


def test_csv_single_row():
    cfg = default_config()
    text = render_csv([run_point(cfg)], cfg)
    lines = text.splitlines()
    assert len(lines) == 2 and lines[0] == HEADER
    assert len(lines[1].split(",")) == 10


def test_header_follows_sweep_variable():
    assert header(parse_config(None, ["sweep.variable=tau", "sweep.start=1", "sweep.stop=2",
                                      "sweep.points=2"]))[0] == "tau_ps"
    assert header(parse_config(None, ["sweep.variable=alpha", "sweep.start=0", "sweep.stop=1",
                                      "sweep.points=2"]))[0] == "alpha_rad"
    assert ",".join(header(default_config())) == HEADER


def test_csv_round_trip_exact():
    cfg = parse_config(None, ["sweep.points=5"])
    rows = run_sweep(cfg)
    cols = read_csv(render_csv(rows, cfg))
    assert cols["xi_rad"] == [r.value for r in rows]
    assert cols["n_blp"] == [r.n_blp for r in rows]
    assert cols["rhp_saturated"] == [r.rhp_saturated for r in rows]


def test_json_round_trip_and_metadata():
    cfg = parse_config(None, ["sweep.points=5"])
    rows = run_sweep(cfg)
    doc = json.loads(render_json(rows, cfg))
    assert doc["metadata"]["tool"] == "photon-qsl"
    assert doc["metadata"]["config"]["sweep.points"] == 5
    assert doc["metadata"]["config"]["drive.tau_ps"] == cfg.tau
    assert list(doc["columns"]) == ["xi_rad", *COLUMNS]
    for name, field in (("tau_qsl_ps", "tau_qsl"), ("n_rhp", "n_rhp"), ("bures_angle_rad", "bures_angle")):
        assert doc["columns"][name] == [getattr(r, field) for r in rows]


def test_emit_writes_file_and_sidecar(tmp_path):
    cfg = parse_config(None, ["sweep.points=3"])
    path = tmp_path / "out.csv"
    text = emit(run_sweep(cfg), cfg, path=path)
    assert path.read_text() == text
    assert parse_config((tmp_path / "out.csv.cfg").read_text()) == cfg


def test_emit_is_deterministic(tmp_path):
    cfg = parse_config(None, ["sweep.points=7"])
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    emit(run_sweep(cfg), cfg, path=a)
    emit(run_sweep(cfg), cfg, path=b)
    assert a.read_bytes() == b.read_bytes()


def test_emit_rejects_empty():
    with pytest.raises(ValueError):
        render_csv([], default_config())


def test_golden_sweep(fig2_sweep):
    cfg, rows, _ = fig2_sweep
    golden = read_csv(DATA / "fig2_sweep.csv")
    fresh = read_csv(render_csv(rows, cfg))
    assert list(golden) == list(fresh)
    for name in golden:
        assert len(golden[name]) == 201
        for g, f in zip(golden[name], fresh[name]):
            if name == "rhp_saturated":
                assert g == f
            else:
                assert abs(g - f) <= 1e-9 * max(1.0, abs(g)), name


def test_solve_critical_report():
    report = solve_critical(default_config())
    assert report.transition
    assert report.closed_form == pytest.approx(critical_xi(default_config().spectral, default_config().tau))
    assert max(abs(a - b) for a, b in zip(report.closed_form, report.bisection)) < 1e-4
    assert sum(report.closed_form) == pytest.approx(math.pi / 2, abs=1e-12)
    assert report.numeric == pytest.approx((0.2336908, math.pi / 2 - 0.2336908), abs=1e-6)
    text = format_critical(report)
    assert "closed_form" in text and "bisection" in text and "numeric_blp" in text


def test_solve_critical_no_transition():
    cfg = parse_config(None, [f"drive.tau_ps={math.pi / (16 * 0.01)!r}"])
    report = solve_critical(cfg)
    assert not report.transition
    assert format_critical(report).startswith("no transition")


def test_self_check_passes():
    results = self_check(default_config())
    assert results and all(r.passed for r in results)


def test_cli_point_csv(capsys):
    assert cli.main(["point"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == HEADER and len(out) == 2


def test_cli_point_json_to_file(tmp_path):
    path = tmp_path / "p.json"
    assert cli.main(["point", "--format", "json", "--output", str(path), "--set", "spectral.xi_rad=0"]) == 0
    doc = json.loads(path.read_text())
    assert doc["columns"]["n_blp"] == [0.0]


def test_cli_sweep_with_config(tmp_path):
    cfg = tmp_path / "s.cfg"
    cfg.write_text("sweep.variable = xi\nsweep.start = 0\nsweep.stop = pi/2\nsweep.points = 3\n")
    out = tmp_path / "s.csv"
    assert cli.main(["sweep", "--config", str(cfg), "--output", str(out)]) == 0
    assert len(out.read_text().splitlines()) == 4


def test_cli_sweep_default_grid(capsys):
    assert cli.main(["sweep", "--set", "sweep.points=3", "--workers", "2"]) == 0
    assert len(capsys.readouterr().out.splitlines()) == 4


def test_cli_critical_and_check(capsys):
    assert cli.main(["critical"]) == 0
    assert "closed_form" in capsys.readouterr().out
    assert cli.main(["check"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out and all(line.startswith("PASS") for line in out)


def test_cli_exit_codes(tmp_path, capsys, monkeypatch):
    assert cli.main(["point", "--set", "spectral.xi_rad=9"]) == 1
    assert cli.main(["point", "--set", "nonsense=1"]) == 1
    assert cli.main(["point", "--config", str(tmp_path / "absent.cfg")]) == 1
    assert cli.main(["point", "--output", str(tmp_path / "no" / "dir.csv")]) == 3

    from photon_qsl import qsl
    from photon_qsl.errors import QuadratureError

    def boom(*args, **kwargs):
        raise QuadratureError("forced")

    monkeypatch.setattr(qsl, "qsl_time", boom)
    assert cli.main(["point"]) == 2
    assert "qsl_time" in capsys.readouterr().err

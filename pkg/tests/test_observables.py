"""Conserved-integral monitors."""
import math
from fractions import Fraction

import numpy as np
import pytest

from westervelt import catalog
from westervelt.jetspace import jet, substitute, sym
from westervelt.observables import (
    MONITORS, DegenerateDenominator, MonitorRecorder, MonitorSeries, background_density,
    compile_expr, default_monitor_ids, density, drift_report, evaluate, evaluate_J,
)
from westervelt.pde import InitProfile, SolverConfig, SolverState, grid, initial_state, run


def _zero_state(cfg):
    z = np.zeros(cfg.nx)
    return SolverState(0.0, z.copy(), z.copy(), z.copy())


def _pulse(nx=128, **kw):
    base = dict(beta=0.1, x0=-10.0, x1=10.0, nx=nx, t_end=0.5, output_every=1)
    base.update(kw)
    return SolverConfig(**base)


def test_monitor_table():
    for mid in ("C5", "C6", "E", "M", "K", "H", "J_f", "Tv3", "Tv4"):
        assert MONITORS[mid].undamped_only
    for mid in ("C1", "C2", "C3", "C4"):
        assert not MONITORS[mid].undamped_only
    assert default_monitor_ids(_pulse(alpha=0.1)) == ["C1", "C2", "C3", "C4"]
    assert "Tv4" in default_monitor_ids(_pulse())


def test_c1_vanishes_on_zero_state():
    cfg = _pulse()
    assert evaluate("C1", _zero_state(cfg), cfg) == 0.0


def test_energy_of_zero_state():
    cfg = SolverConfig(beta=1.0, x0=0.0, x1=1.0, nx=16)
    assert evaluate("E", _zero_state(cfg), cfg) == pytest.approx(1 / 12, rel=1e-14)


def test_undamped_monitor_rejected_when_damped():
    cfg = _pulse(alpha=0.1)
    s = initial_state(cfg)
    with pytest.raises(ValueError):
        evaluate("E", s, cfg)
    with pytest.raises(KeyError):
        evaluate("Z", s, cfg)


def test_degenerate_denominator():
    cfg = _pulse()
    with pytest.raises(DegenerateDenominator):
        evaluate("C5", _zero_state(cfg), cfg)


def test_momentum_vanishes_for_even_data():
    cfg = _pulse(init=InitProfile("gaussian", 0.5))
    s = initial_state(cfg)
    assert abs(evaluate("M", s, cfg)) < 1e-14


def test_compiled_expression_matches_exact():
    e = catalog.integrand("Tv4")
    f = compile_expr(e)
    vals = {jet("p").variables()[0]: 0.3, jet("v", 0, 1).variables()[0]: -0.2,
            jet("v").variables()[0]: 0.7, sym("t").variables()[0]: 1.5,
            sym("x").variables()[0]: 2.0, sym("beta").variables()[0]: 0.25}
    exact = substitute(e, {k: Fraction(v).limit_denominator(10 ** 6) for k, v in vals.items()})
    assert f(vals) == pytest.approx(float(exact.constant_value()), rel=1e-12)


# -- drift_report ---------------------------------------------------------------------

def _series(values, scale=0.0):
    s = MonitorSeries("X")
    for k, v in enumerate(values):
        s.add(0.1 * k, v)
    s.scale = scale
    return s


def test_drift_constant_series():
    assert drift_report(_series([2.0, 2.0, 2.0])) == (0.0, 0.0)


def test_drift_spike():
    d, rel = drift_report(_series([1.0, 1.0, 1.5, 1.0]))
    assert d == 0.5 and rel == 0.5


def test_drift_uses_scale_floor():
    d, rel = drift_report(_series([0.0, 1e-3], scale=10.0))
    assert rel == pytest.approx(1e-4)


def test_drift_requires_two_samples():
    with pytest.raises(ValueError):
        drift_report(_series([1.0]))


def test_series_must_increase():
    s = _series([1.0])
    with pytest.raises(ValueError):
        s.add(0.0, 1.0)


# -- generalized integral ----------------------------------------------------------------

def _evolved(cfg):
    return run(cfg, initial_state(cfg))


def test_evaluate_J_zero():
    cfg = _pulse()
    assert evaluate_J(jet("v") * 0, _zero_state(cfg), cfg) == 0.0


def test_evaluate_J_vx_is_momentum():
    # any periodic snapshot will do; M is zero along runs in the v(0) = 0 gauge
    cfg = _pulse(nx=64)
    x = grid(cfg)
    s = SolverState(0.0, 0.5 * np.exp(-(x - 1) ** 2), np.zeros(64), np.sin(np.pi * x / 10))
    J = evaluate_J(lambda vt, vx: vx, s, cfg)
    M = evaluate("M", s, cfg)
    assert abs(M) > 1e-3
    assert J == pytest.approx(-cfg.beta * M, rel=1e-12)


def test_evaluate_J_vt_is_energy_without_constant():
    cfg = _pulse(nx=64, t_end=0.3, init=InitProfile("gaussian", 0.5))
    s = _evolved(cfg)
    J = evaluate_J("v[1,0] - 1/(2*beta)", s, cfg)
    E = evaluate("E", s, cfg)
    L = cfg.x1 - cfg.x0
    assert J == pytest.approx(E - L / (12 * cfg.beta ** 2), rel=1e-12)


def test_evaluate_J_rejects_bad_f():
    cfg = _pulse()
    with pytest.raises(catalog.FCurrentError):
        evaluate_J("v[0,1]^2", _zero_state(cfg), cfg)


# -- recorder ----------------------------------------------------------------------------

def test_background_is_subtracted():
    cfg = SolverConfig(beta=1.0, x0=0.0, x1=1.0, nx=16)
    bg = background_density("E", 0.0, cfg)
    np.testing.assert_allclose(bg, 1 / 12)
    rec = MonitorRecorder(cfg, ["E", "C1"])
    rec(0, _zero_state(cfg))
    assert rec.series["E"].reference == 0.0


def test_recorder_marks_degenerate_monitor():
    cfg = _pulse(nx=64, t_end=0.1)
    rec = MonitorRecorder(cfg)
    run(cfg, callback=rec)
    assert "C5" in rec.failures
    assert math.isnan(rec.series["C5"].reference)
    assert not math.isnan(rec.series["E"].reference)


def test_c3_is_time_independent():
    # the t-weighted part of T3 grows linearly, the full integral does not
    cfg = _pulse(nx=256, t_end=1.0, init=InitProfile("gaussian", 0.5, q0=0.2))
    rec = MonitorRecorder(cfg, ["C1", "C3"])
    run(cfg, callback=rec)
    c1 = rec.series["C1"].values
    c3 = rec.series["C3"].values
    ts = np.array([t for t, _ in rec.series["C3"].samples])
    assert np.ptp(c3) < 1e-8 * max(1.0, abs(c3[0]))
    growth = ts * c1
    assert np.ptp(growth) > 1e3 * np.ptp(c3)


def test_csv_output(tmp_path):
    cfg = _pulse(nx=32, t_end=0.05, init=InitProfile("sine", 0.01, width=20.0, q0=0.0))
    rec = MonitorRecorder(cfg, ["C1", "E"])
    run(cfg, callback=rec)
    rec.write_csv(tmp_path / "m.csv")
    lines = (tmp_path / "m.csv").read_text().splitlines()
    assert lines[0] == "t,C1,E"
    assert len(lines) == 1 + len(rec.series["C1"].samples)
    assert float(lines[-1].split(",")[0]) == 0.05


def test_periodic_sine_keeps_c5_c6():
    cfg = SolverConfig(beta=0.1, x0=0.0, x1=2 * math.pi, nx=128, t_end=0.5, output_every=5,
                       init=InitProfile("sine", 0.05, width=2 * math.pi, q0=1.0))
    rec = MonitorRecorder(cfg, ["C5", "C6"])
    run(cfg, callback=rec)
    assert not rec.failures
    for mid in ("C5", "C6"):
        assert drift_report(rec.series[mid])[1] < 1e-9
    assert density("C5", initial_state(cfg), cfg).shape == (128,)

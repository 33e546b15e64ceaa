"""Method-of-lines solver."""
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from westervelt.exact import make_deg2, make_deg3
from westervelt.pde import (
    ConfigError, DegenerateWaveSpeed, InitProfile, NonFiniteState, SolverConfig, SolverState,
    cfl_dt, config_to_dict, grid, initial_state, laplacian, load_config, margin,
    mms_convergence, observed_orders, parse_config, rhs, run, step,
)


def _cfg(**kw):
    base = dict(beta=0.1, x0=-10.0, x1=10.0, nx=64, t_end=1.0)
    base.update(kw)
    return SolverConfig(**base)


# -- configuration ----------------------------------------------------------------

@pytest.mark.parametrize("kw", [
    dict(alpha=-1.0), dict(beta=0.0), dict(nx=8), dict(cfl=0.0), dict(cfl=1.5),
    dict(bc="neumann"), dict(x1=-20.0), dict(t_end=0.0), dict(output_every=0),
])
def test_config_validation(kw):
    with pytest.raises(ConfigError):
        _cfg(**kw)


def test_grid_spacing():
    assert _cfg(nx=200).h == pytest.approx(0.1)
    assert _cfg(nx=201, bc="dirichlet").h == pytest.approx(0.1)
    x = grid(_cfg(nx=200))
    assert len(x) == 200 and x[0] == -10.0 and x[-1] < 10.0


def test_parse_config_round_trip():
    text = """
    # pulse
    alpha = 0
    beta = 0.2
    nx = 128
    bc = periodic
    t_end = 0.5
    init.name = sine
    init.amplitude = 0.01   # small
    init.width = 20
    output.every = 5
    """
    cfg = parse_config(text)
    assert cfg.beta == 0.2 and cfg.nx == 128 and cfg.output_every == 5
    assert cfg.init == InitProfile("sine", 0.01, 20.0)
    d = config_to_dict(cfg)
    assert d["init.name"] == "sine" and d["output.every"] == 5


@pytest.mark.parametrize("text", [
    "speed = 1", "nx = many", "beta", "beta = 1\nbeta = 2", "init.name = square",
])
def test_parse_config_errors(text):
    with pytest.raises(ConfigError):
        parse_config(text)


def test_load_config_missing(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.cfg")


# -- right-hand side --------------------------------------------------------------

def test_constant_state_is_steady():
    cfg = _cfg(init=InitProfile("constant", 0.1))
    s = initial_state(cfg)
    dp, dq, dv = rhs(s, cfg)
    assert np.all(dp == 0) and np.all(dq == 0)
    np.testing.assert_array_equal(dv, s.p)


def test_affine_state_is_steady():
    cfg = _cfg(bc="dirichlet", nx=41, init=InitProfile("affine", -1.0), beta=0.01)
    s = initial_state(cfg)
    _, dq, _ = rhs(s, cfg)
    assert np.max(np.abs(dq)) < 1e-12
    out = run(cfg.replace(t_end=0.5), s)
    np.testing.assert_allclose(out.p, s.p, atol=1e-12)


def test_laplacian_exact_on_quadratics():
    x = np.linspace(0, 1, 33)
    lap = laplacian(x ** 2, x[1] - x[0], "dirichlet")
    np.testing.assert_allclose(lap[1:-1], 2.0, rtol=1e-9)
    assert lap[0] == 0 and lap[-1] == 0


def test_degenerate_wave_speed():
    cfg = _cfg(beta=0.6, init=InitProfile("gaussian", 1.0))
    with pytest.raises(DegenerateWaveSpeed):
        initial_state(cfg)


def test_damped_rhs_uses_r():
    cfg = _cfg(alpha=0.1, init=InitProfile("constant", 0.0, r0=0.5))
    s = initial_state(cfg)
    assert s.r is not None
    dp, dq, dv, dr = rhs(s, cfg)
    np.testing.assert_allclose(dq, 0.5)
    np.testing.assert_allclose(dr, 0.5 / 0.1 * 1.0)


# -- step size ---------------------------------------------------------------------

def test_cfl_examples():
    cfg = _cfg(x0=0.0, x1=1.0, nx=100, init=InitProfile("constant", 0.0))
    s = initial_state(cfg)
    assert cfl_dt(s, cfg) == pytest.approx(0.005)
    # min(1 - 2 beta p) = 0.25 halves the step
    cfg2 = cfg.replace(beta=1.0, init=InitProfile("constant", 0.375))
    assert cfl_dt(initial_state(cfg2), cfg2) == pytest.approx(0.0025)
    cfg3 = cfg.replace(alpha=1e-3)
    assert cfl_dt(initial_state(cfg3), cfg3) <= 5e-4


# -- stepping ----------------------------------------------------------------------

def test_zero_state_stays_zero():
    cfg = _cfg(init=InitProfile("constant", 0.0))
    s = step(initial_state(cfg), cfg)
    assert s.norm() == 0.0


def test_gaussian_pulse_long_run():
    cfg = _cfg(nx=128, init=InitProfile("gaussian", 1.0))
    s = initial_state(cfg)
    for _ in range(1000):
        s = step(s, cfg)
    assert all(np.all(np.isfinite(a)) for a in s.arrays())
    assert margin(s.p, cfg.beta) >= cfg.delta


def test_unstable_step_is_caught():
    # far beyond the relaxation limit: must blow up and be reported
    cfg = _cfg(alpha=1e-3, nx=64, dt=0.5, init=InitProfile("gaussian", 0.5))
    s = initial_state(cfg)
    with pytest.raises((NonFiniteState, DegenerateWaveSpeed)):
        for _ in range(200):
            s = step(s, cfg)


def test_watchdog_never_returns_degenerate_state():
    cfg = _cfg(beta=0.45, nx=64, init=InitProfile("gaussian", 1.0, width=0.5), t_end=20.0)
    s = initial_state(cfg)
    try:
        while s.t < cfg.t_end:
            s = step(s, cfg)
            assert margin(s.p, cfg.beta) >= cfg.delta
    except (DegenerateWaveSpeed, NonFiniteState):
        pass


def test_time_reversal():
    cfg = _cfg(x0=0.0, x1=2 * math.pi, nx=64, dt=1e-3,
               init=InitProfile("sine", 0.01, width=2 * math.pi))
    s0 = initial_state(cfg)
    back = step(step(s0, cfg, 1e-3), cfg, -1e-3)
    eps = np.finfo(float).eps
    for a, b in zip(back.arrays()[:2], s0.arrays()[:2]):
        assert np.max(np.abs(a - b)) <= 10 * eps * s0.norm()


@settings(max_examples=10, deadline=None)
@given(st.floats(-5, 5))
def test_gauge_invariance(c):
    cfg = _cfg(nx=64, t_end=0.2, init=InitProfile("gaussian", 0.5))
    s0 = initial_state(cfg)
    s1 = s0.copy()
    s1.v = s1.v + c
    a, b = run(cfg, s0), run(cfg, s1)
    assert np.array_equal(a.p, b.p) and np.array_equal(a.q, b.q)


def test_run_lands_on_t_end_and_calls_back():
    cfg = _cfg(nx=32, t_end=0.37, output_every=3)
    seen = []
    out = run(cfg, callback=lambda n, s: seen.append((n, s.t)))
    assert out.t == 0.37
    assert seen[0] == (0, 0.0) and seen[-1][1] == 0.37
    assert all(n % 3 == 0 for n, _ in seen[1:-1])


def test_spatially_constant_matches_deg3():
    # p(t) with beta = 1, a1 = 1 on the minus branch starts at p = 0, p_t = 1/3
    sol = make_deg3(a1=1.0, beta=1.0)
    cfg = SolverConfig(beta=1.0, x0=0.0, x1=1.0, nx=16, t_end=0.5, dt=1e-3)
    s = initial_state(cfg, np.zeros(16), np.full(16, sol.eval_pt(0.0, 0.0)))
    out = run(cfg, s)
    assert abs(out.p[0] - (1 - math.sqrt(1 - 4 * 0.5 / 3)) / 2) < 1e-8


# -- manufactured solutions ----------------------------------------------------------

def test_mms_deg2_rounding_level():
    errs = mms_convergence(make_deg2(a1=0.3, a3=2.0, beta=0.2), 3, nx0=17, x0=-1.0, x1=1.0,
                           t_end=0.25)
    assert all(e < 1e-13 for _, e in errs)


def test_observed_orders():
    assert observed_orders([(0.1, 4e-3), (0.05, 1e-3)]) == [2.0]
    assert math.isnan(observed_orders([(0.1, 0.0), (0.05, 0.0)])[0])

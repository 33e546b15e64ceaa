"""Method-of-lines solver for the damped and undamped Westervelt equation.

The equation ``(1 - 2 beta p) p_tt - 2 beta p_t^2 - alpha p_ttt = p_xx`` is
written as a first-order system in ``(p, q, r)`` with ``q = p_t`` and, when
``alpha > 0``, ``r = p_tt``.  The potential ``v`` with ``v_t = p`` is carried
along in the gauge ``v(0, .) = 0``.  Space is discretized by second-order
central differences and time by the classical four-stage Runge-Kutta method.
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

__all__ = [
    "SolverConfig", "InitProfile", "SolverState", "ConfigError",
    "DegenerateWaveSpeed", "NonFiniteState", "grid", "initial_state",
    "margin", "laplacian", "rhs", "step", "cfl_dt", "run", "parse_config",
    "load_config", "mms_convergence", "observed_orders",
]


class ConfigError(ValueError):
    """Invalid solver configuration."""


class DegenerateWaveSpeed(ArithmeticError):
    """The hyperbolicity margin ``min(1 - 2 beta p)`` fell below ``delta``."""


class NonFiniteState(ArithmeticError):
    """A step produced NaN or infinite values."""


@dataclass(frozen=True)
class InitProfile:
    """Named initial profile.

    ``gaussian``: ``p0 = A exp(-((x - c)/w)^2)``.
    ``sine``: ``p0 = A sin(2 pi (x - c)/w)`` (``w`` is the wavelength).
    ``constant``: ``p0 = A``.
    ``affine``: ``p0 = A (x - c)``.

    ``q0`` and ``r0`` are constant values of ``p_t`` and ``p_tt``.  Only
    ``q0 = 0`` is compatible with the gauge ``v(0, .) = 0`` for the potential
    monitors, since ``v_xx = (1 - 2 beta p) p_t - alpha p_tt`` must vanish at
    ``t = 0``.
    """

    name: str = "gaussian"
    amplitude: float = 1.0
    width: float = 1.0
    center: float = 0.0
    q0: float = 0.0
    r0: float = 0.0

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        A, w, c = self.amplitude, self.width, self.center
        if self.name == "gaussian":
            return A * np.exp(-(((x - c) / w) ** 2))
        if self.name == "sine":
            return A * np.sin(2 * np.pi * (x - c) / w)
        if self.name == "constant":
            return np.full_like(x, A)
        if self.name == "affine":
            return A * (x - c)
        raise ConfigError(f"unknown init profile {self.name!r}")


_PROFILES = ("gaussian", "sine", "constant", "affine")

BoundaryFn = Callable[[float], Tuple[float, float, float, float]]


@dataclass(frozen=True)
class SolverConfig:
    """Solver parameters.

    Parameters
    ----------
    alpha, beta : float
        Damping (``alpha >= 0``) and nonlinearity (``beta > 0``).
    x0, x1 : float
        Domain end points.
    nx : int
        Number of grid points, at least 16.  Periodic grids use
        ``h = (x1 - x0)/nx``; Dirichlet grids include both end points.
    bc : {"periodic", "dirichlet"}
    cfl : float
        Courant number in ``(0, 1]``.
    t_end : float
    init : InitProfile
    output_every : int
        Output cadence in steps.
    delta : float
        Hyperbolicity margin.
    dt : float, optional
        Fixed step overriding :func:`cfl_dt`.
    boundary : callable, optional
        Dirichlet data ``t -> (p_left, p_right, q_left, q_right)``.  Without
        it the boundary values of the initial state are held fixed.
    t0 : float
        Initial time.
    """

    alpha: float = 0.0
    beta: float = 0.1
    x0: float = -10.0
    x1: float = 10.0
    nx: int = 256
    bc: str = "periodic"
    cfl: float = 0.5
    t_end: float = 1.0
    init: InitProfile = field(default_factory=InitProfile)
    output_every: int = 10
    delta: float = 1e-6
    dt: Optional[float] = None
    boundary: Optional[BoundaryFn] = None
    t0: float = 0.0

    def __post_init__(self):
        if not self.alpha >= 0:
            raise ConfigError("alpha must be >= 0")
        if not self.beta > 0:
            raise ConfigError("beta must be > 0")
        if not self.x1 > self.x0:
            raise ConfigError("need x1 > x0")
        if int(self.nx) != self.nx or self.nx < 16:
            raise ConfigError("nx must be an integer >= 16")
        if self.bc not in ("periodic", "dirichlet"):
            raise ConfigError(f"bc must be periodic or dirichlet, got {self.bc!r}")
        if not 0 < self.cfl <= 1:
            raise ConfigError("cfl must lie in (0, 1]")
        if not self.t_end > self.t0:
            raise ConfigError("t_end must exceed the initial time")
        if self.output_every < 1:
            raise ConfigError("output.every must be >= 1")
        if self.init.name not in _PROFILES:
            raise ConfigError(f"unknown init profile {self.init.name!r}")
        if self.dt is not None and not self.dt != 0:
            raise ConfigError("dt must be nonzero")

    @property
    def damped(self) -> bool:
        return self.alpha > 0

    @property
    def h(self) -> float:
        if self.bc == "periodic":
            return (self.x1 - self.x0) / self.nx
        return (self.x1 - self.x0) / (self.nx - 1)

    def replace(self, **kw) -> "SolverConfig":
        return dataclasses.replace(self, **kw)


@dataclass
class SolverState:
    """Grid state; ``r`` is ``None`` for undamped runs."""

    t: float
    p: np.ndarray
    q: np.ndarray
    v: np.ndarray
    r: Optional[np.ndarray] = None

    def arrays(self) -> List[np.ndarray]:
        out = [self.p, self.q, self.v]
        if self.r is not None:
            out.append(self.r)
        return out

    def copy(self) -> "SolverState":
        return SolverState(self.t, self.p.copy(), self.q.copy(), self.v.copy(),
                           None if self.r is None else self.r.copy())

    def norm(self) -> float:
        return float(math.sqrt(sum(float(np.dot(a, a)) for a in self.arrays())))


def grid(cfg: SolverConfig) -> np.ndarray:
    if cfg.bc == "periodic":
        return cfg.x0 + cfg.h * np.arange(cfg.nx)
    return np.linspace(cfg.x0, cfg.x1, cfg.nx)


def initial_state(cfg: SolverConfig, p0: Optional[np.ndarray] = None,
                  q0: Optional[np.ndarray] = None,
                  r0: Optional[np.ndarray] = None) -> SolverState:
    """State at ``cfg.t0`` from the init profile (or explicit arrays)."""
    x = grid(cfg)
    p = cfg.init.evaluate(x) if p0 is None else np.asarray(p0, dtype=float).copy()
    q = np.full_like(x, cfg.init.q0) if q0 is None else np.asarray(q0, dtype=float).copy()
    r = None
    if cfg.damped:
        r = np.full_like(x, cfg.init.r0) if r0 is None else np.asarray(r0, dtype=float).copy()
    state = SolverState(cfg.t0, p, q, np.zeros_like(x), r)
    _check_margin(state, cfg)
    return state


def margin(p: np.ndarray, beta: float) -> float:
    """``min(1 - 2 beta p)`` over the grid."""
    return float(np.min(1.0 - 2.0 * beta * p))


def _check_margin(state: SolverState, cfg: SolverConfig) -> None:
    m = margin(state.p, cfg.beta)
    if not m >= cfg.delta:
        raise DegenerateWaveSpeed(
            f"hyperbolicity margin {m:.3e} < {cfg.delta:g} at t={state.t:.6g}")


def laplacian(p: np.ndarray, h: float, bc: str = "periodic") -> np.ndarray:
    """Second-order central difference; zero at Dirichlet boundary nodes."""
    if bc == "periodic":
        return (np.roll(p, -1) - 2.0 * p + np.roll(p, 1)) / (h * h)
    out = np.zeros_like(p)
    out[1:-1] = (p[2:] - 2.0 * p[1:-1] + p[:-2]) / (h * h)
    return out


def rhs(state: SolverState, cfg: SolverConfig) -> List[np.ndarray]:
    """Time derivative ``[p_t, q_t, v_t(, r_t)]`` of the semi-discrete system.

    Raises
    ------
    DegenerateWaveSpeed
        If the margin is below ``cfg.delta``.
    """
    _check_margin(state, cfg)
    p, q = state.p, state.q
    b = cfg.beta
    lap = laplacian(p, cfg.h, cfg.bc)
    A = 1.0 - 2.0 * b * p
    if cfg.damped:
        r = state.r
        out = [q.copy(), r.copy(), p.copy(), (A * r - 2.0 * b * q * q - lap) / cfg.alpha]
    else:
        out = [q.copy(), (2.0 * b * q * q + lap) / A, p.copy()]
    if cfg.bc == "dirichlet" and cfg.boundary is None:
        for k in (0, 1, 3):
            if k < len(out):
                out[k][0] = out[k][-1] = 0.0
    return out


def _apply_boundary(state: SolverState, cfg: SolverConfig) -> None:
    if cfg.bc != "dirichlet" or cfg.boundary is None:
        return
    pl, pr, ql, qr = cfg.boundary(state.t)
    state.p[0], state.p[-1] = pl, pr
    state.q[0], state.q[-1] = ql, qr


def _axpy(state: SolverState, dt: float, k: Sequence[np.ndarray]) -> SolverState:
    arrs = [a + dt * d for a, d in zip(state.arrays(), k)]
    r = arrs[3] if len(arrs) > 3 else None
    return SolverState(state.t + dt, arrs[0], arrs[1], arrs[2], r)


def step(state: SolverState, cfg: SolverConfig, dt: Optional[float] = None) -> SolverState:
    """One RK4 step of size ``dt`` (default :func:`cfl_dt`).

    Raises
    ------
    DegenerateWaveSpeed
        From any stage, or if the new state violates the margin.
    NonFiniteState
        If the new state holds a NaN or infinity.
    """
    if dt is None:
        dt = cfl_dt(state, cfg)
    with np.errstate(over="ignore", invalid="ignore"):
        k1 = rhs(state, cfg)
        s = _axpy(state, 0.5 * dt, k1)
        _apply_boundary(s, cfg)
        _finite_or_raise(s)
        k2 = rhs(s, cfg)
        s = _axpy(state, 0.5 * dt, k2)
        _apply_boundary(s, cfg)
        _finite_or_raise(s)
        k3 = rhs(s, cfg)
        s = _axpy(state, dt, k3)
        _apply_boundary(s, cfg)
        _finite_or_raise(s)
        k4 = rhs(s, cfg)
        incr = [(a + 2.0 * b + 2.0 * c + d) / 6.0 for a, b, c, d in zip(k1, k2, k3, k4)]
        new = _axpy(state, dt, incr)
    _apply_boundary(new, cfg)
    _finite_or_raise(new)
    _check_margin(new, cfg)
    return new


def _finite_or_raise(state: SolverState) -> None:
    for a in state.arrays():
        if not np.all(np.isfinite(a)):
            raise NonFiniteState(f"non-finite values at t={state.t:.6g}")


def cfl_dt(state: SolverState, cfg: SolverConfig) -> float:
    """Stable step size ``cfl * h * sqrt(min(1 - 2 beta p))``, capped by
    ``cfl * alpha`` when damped.  A fixed ``cfg.dt`` takes precedence."""
    if cfg.dt is not None:
        return cfg.dt
    m = margin(state.p, cfg.beta)
    if not m >= cfg.delta:
        raise DegenerateWaveSpeed(f"hyperbolicity margin {m:.3e} < {cfg.delta:g}")
    dt = cfg.cfl * cfg.h * math.sqrt(m)
    if cfg.damped:
        dt = min(dt, cfg.cfl * cfg.alpha)
    return dt


def run(cfg: SolverConfig, state: Optional[SolverState] = None,
        callback: Optional[Callable[[int, SolverState], None]] = None) -> SolverState:
    """Integrate to ``cfg.t_end``, shortening the last step to land on it.

    ``callback(n, state)`` is called at step 0, every ``cfg.output_every``
    steps, and at the final state.
    """
    if state is None:
        state = initial_state(cfg)
    n = 0
    if callback is not None:
        callback(n, state)
    last_out = 0
    while state.t < cfg.t_end:
        dt = cfl_dt(state, cfg)
        remaining = cfg.t_end - state.t
        if dt >= remaining * (1 - 1e-12):
            dt = remaining
        state = step(state, cfg, dt)
        if dt == remaining:
            state.t = cfg.t_end
        n += 1
        if callback is not None and (n % cfg.output_every == 0 or state.t >= cfg.t_end):
            callback(n, state)
            last_out = n
    if callback is not None and last_out != n:
        callback(n, state)
    return state


# ---------------------------------------------------------------------------
# config files

_FLOAT_KEYS = {"alpha": "alpha", "beta": "beta", "x0": "x0", "x1": "x1", "cfl": "cfl",
               "t_end": "t_end", "delta": "delta", "dt": "dt", "t0": "t0"}
_INIT_KEYS = {"init.amplitude": "amplitude", "init.width": "width",
              "init.center": "center", "init.q0": "q0", "init.r0": "r0"}


def parse_config(text: str) -> SolverConfig:
    """Parse flat ``key=value`` text.

    Blank lines and ``#`` comments are ignored.  Recognized keys: ``alpha``,
    ``beta``, ``x0``, ``x1``, ``nx``, ``bc``, ``cfl``, ``t_end``, ``delta``,
    ``dt``, ``init.name``, ``init.amplitude``, ``init.width``,
    ``init.center``, ``init.q0``, ``init.r0``, ``output.every``.

    Raises
    ------
    ConfigError
        On unknown keys, malformed lines or invalid values.
    """
    kw: Dict[str, object] = {}
    init: Dict[str, object] = {}
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value")
        key, val = (s.strip() for s in line.split("=", 1))
        if key in seen:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        seen.add(key)
        try:
            if key in _FLOAT_KEYS:
                kw[_FLOAT_KEYS[key]] = float(val)
            elif key == "nx":
                kw["nx"] = int(val)
            elif key == "output.every":
                kw["output_every"] = int(val)
            elif key == "bc":
                kw["bc"] = val
            elif key == "init.name":
                init["name"] = val
            elif key in _INIT_KEYS:
                init[_INIT_KEYS[key]] = float(val)
            else:
                raise ConfigError(f"line {lineno}: unknown key {key!r}")
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"line {lineno}: bad value for {key!r}: {val!r}") from None
    kw["init"] = InitProfile(**init)
    return SolverConfig(**kw)


def load_config(path: Union[str, Path]) -> SolverConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config(text)


def config_to_dict(cfg: SolverConfig) -> Dict[str, object]:
    """Flat, JSON-friendly view of a config (callables omitted)."""
    d = {k: getattr(cfg, k) for k in ("alpha", "beta", "x0", "x1", "nx", "bc", "cfl",
                                      "t_end", "delta", "dt", "t0")}
    d["output.every"] = cfg.output_every
    for k, v in dataclasses.asdict(cfg.init).items():
        d["init." + k] = v
    return d


# ---------------------------------------------------------------------------
# manufactured-solution convergence


def mms_convergence(family, refinements: int = 3, *, nx0: int = 32,
                    x0: float = 0.0, x1: float = 1.0, t0: float = 0.0,
                    t_end: float = 0.5, bc: str = "dirichlet",
                    cfl: float = 0.5) -> List[Tuple[float, float]]:
    """Max-norm error of ``p`` at ``t_end`` against an exact solution.

    Parameters
    ----------
    family : ExactSolution
        Needs ``beta`` in ``family.params`` and ``eval_p``/``eval_pt``.
    refinements : int
        Number of grids; each halves ``h`` starting from ``nx0`` points.
    bc : {"dirichlet", "periodic"}
        Dirichlet runs take boundary values from the exact solution.

    Returns
    -------
    list of (h, error)

    Raises
    ------
    ValueError
        If the exact solution is not defined on the domain and horizon.
    """
    beta = float(family.params["beta"])
    out = []
    for k in range(refinements):
        nx = nx0 * 2 ** k if bc == "periodic" else (nx0 - 1) * 2 ** k + 1

        def boundary(t, _x0=x0, _x1=x1):
            return (family.eval_p(t, _x0), family.eval_p(t, _x1),
                    family.eval_pt(t, _x0), family.eval_pt(t, _x1))

        cfg = SolverConfig(alpha=0.0, beta=beta, x0=x0, x1=x1, nx=nx, bc=bc, cfl=cfl,
                           t_end=t_end, t0=t0,
                           boundary=boundary if bc == "dirichlet" else None)
        x = grid(cfg)
        p0 = np.array([family.eval_p(t0, xi) for xi in x])
        q0 = np.array([family.eval_pt(t0, xi) for xi in x])
        state = run(cfg, initial_state(cfg, p0, q0))
        exact = np.array([family.eval_p(t_end, xi) for xi in x])
        out.append((cfg.h, float(np.max(np.abs(state.p - exact)))))
    return out


def observed_orders(errors: Sequence[Tuple[float, float]]) -> List[float]:
    """``log2(e_i / e_{i+1})`` for consecutive refinements."""
    return [math.log2(e0 / e1) if e1 > 0 and e0 > 0 else float("nan")
            for (_, e0), (_, e1) in zip(errors, errors[1:])]

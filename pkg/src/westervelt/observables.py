"""Grid quadrature of conserved integrals and drift tracking.

Densities come from :mod:`westervelt.catalog` as exact expressions and are
compiled once into float evaluators, so the monitored quantity is the same
object the symbolic checks verify.  Jet coordinates are filled from the solver
state: ``p_t = q``; ``p_tt`` from ``r`` (damped) or the reduced equation
(undamped); ``x``-derivatives by central differences.
"""
from __future__ import annotations

import csv
import functools
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from . import catalog
from .jetspace import JetExpr, JetVar, Poly, REGISTRY, Symbol, decode, jet, parse
from .pde import SolverConfig, SolverState, grid, laplacian

__all__ = [
    "MonitorSpec", "MonitorSeries", "MONITORS", "DegenerateDenominator",
    "compile_expr", "density", "evaluate", "evaluate_J", "drift_report",
    "MonitorRecorder", "default_monitor_ids", "background_density",
]


class DegenerateDenominator(ArithmeticError):
    """A density denominator is (numerically) zero somewhere on the grid."""


@dataclass(frozen=True)
class MonitorSpec:
    id: str
    undamped_only: bool
    needs_v: bool


MONITORS: Dict[str, MonitorSpec] = {
    m.id: m for m in (
        MonitorSpec("C1", False, False), MonitorSpec("C2", False, False),
        MonitorSpec("C3", False, False), MonitorSpec("C4", False, False),
        MonitorSpec("C5", True, False), MonitorSpec("C6", True, False),
        MonitorSpec("E", True, True), MonitorSpec("M", True, True),
        MonitorSpec("K", True, True), MonitorSpec("H", True, True),
        MonitorSpec("J_f", True, True),
        MonitorSpec("Tv3", True, True), MonitorSpec("Tv4", True, True),
    )
}


def default_monitor_ids(cfg: SolverConfig) -> List[str]:
    """Columns of ``monitors.csv`` for a run."""
    ids = ["C1", "C2", "C3", "C4"]
    if not cfg.damped:
        ids += ["C5", "C6", "E", "M", "K", "H", "Tv3", "Tv4"]
    return ids


@dataclass
class MonitorSeries:
    """Time series of one monitored integral.

    ``scale`` is the largest L1 norm of the density seen so far; it serves as
    the normalization when the integral itself is near zero.
    """

    id: str
    samples: List[Tuple[float, float]] = field(default_factory=list)
    scale: float = 0.0

    def add(self, t: float, value: float, l1: float = 0.0) -> None:
        if self.samples and not t > self.samples[-1][0]:
            raise ValueError("samples must be strictly increasing in t")
        self.samples.append((float(t), float(value)))
        self.scale = max(self.scale, float(l1))

    @property
    def reference(self) -> float:
        return self.samples[0][1]

    @property
    def values(self) -> np.ndarray:
        return np.array([v for _, v in self.samples])


def drift_report(series: MonitorSeries, floor: float = 1e-300) -> Tuple[float, float]:
    """``(max |C(t) - C(0)|, that / max(|C(0)|, scale, floor))``."""
    if len(series.samples) < 2:
        raise ValueError("drift needs at least two samples")
    vals = series.values
    d = float(np.max(np.abs(vals - vals[0])))
    return d, d / max(abs(series.reference), series.scale, floor)


# ---------------------------------------------------------------------------
# compilation of exact densities


class _CompiledPoly:
    __slots__ = ("terms", "vars")

    def __init__(self, p: Poly):
        self.terms = [(float(c), decode(m)) for m, c in p.items()]
        self.vars = sorted({i for _, d in self.terms for i, _ in d})

    def __call__(self, vals: Dict[int, object]):
        powers: Dict[Tuple[int, int], object] = {}
        total = 0.0
        for c, mono in self.terms:
            term = c
            for i, e in mono:
                key = (i, e)
                pw = powers.get(key)
                if pw is None:
                    pw = vals[i] ** e if e > 1 else vals[i]
                    powers[key] = pw
                term = term * pw
            total = total + term
        return total


class CompiledExpr:
    """Float evaluator of a :class:`JetExpr`."""

    def __init__(self, e: JetExpr):
        self.expr = e
        self.num = _CompiledPoly(e._num)
        self.scale = float(e._scale)
        self.den = [(_CompiledPoly(f), k) for f, k in e._den]
        self.indeterminates = [REGISTRY.items[i] for i in sorted(e.var_indices())]

    def denominator_values(self, values: Dict) -> List[object]:
        vals = _index_values(values)
        return [f(vals) for f, _ in self.den]

    def __call__(self, values: Dict):
        vals = _index_values(values)
        out = self.scale * self.num(vals)
        for f, k in self.den:
            out = out / f(vals) ** k
        return out


def _index_values(values: Dict) -> Dict[int, object]:
    out = {}
    for ind, v in values.items():
        i = REGISTRY.lookup(ind)
        if i is not None:
            out[i] = v
    return out


@functools.lru_cache(maxsize=None)
def _compiled_integrand(mid: str) -> CompiledExpr:
    return CompiledExpr(catalog.integrand(mid))


def compile_expr(e: Union[JetExpr, str]) -> CompiledExpr:
    if isinstance(e, str):
        e = parse(e)
    return CompiledExpr(e)


# ---------------------------------------------------------------------------
# jet values on the grid


def _dx(a: np.ndarray, h: float, bc: str) -> np.ndarray:
    if bc == "periodic":
        return (np.roll(a, -1) - np.roll(a, 1)) / (2.0 * h)
    return np.gradient(a, h, edge_order=2)


def jet_values(state: SolverState, cfg: SolverConfig) -> Dict[object, object]:
    """Values of ``t, x, alpha, beta`` and the jet coordinates used by the
    monitored densities."""
    p, q = state.p, state.q
    A = 1.0 - 2.0 * cfg.beta * p
    if state.r is not None:
        ptt = state.r
    else:
        ptt = (2.0 * cfg.beta * q * q + laplacian(p, cfg.h, cfg.bc)) / A
        if cfg.bc == "dirichlet":
            # one-sided Laplacian at the ends
            lap = np.gradient(np.gradient(p, cfg.h, edge_order=2), cfg.h, edge_order=2)
            ptt[[0, -1]] = ((2.0 * cfg.beta * q * q + lap) / A)[[0, -1]]
    vx = _dx(state.v, cfg.h, cfg.bc)
    return {
        Symbol("t"): state.t, Symbol("x"): grid(cfg),
        Symbol("alpha"): cfg.alpha, Symbol("beta"): cfg.beta,
        JetVar("p"): p, JetVar("p", 1, 0): q, JetVar("p", 2, 0): ptt,
        JetVar("p", 0, 1): _dx(p, cfg.h, cfg.bc), JetVar("p", 1, 1): _dx(q, cfg.h, cfg.bc),
        JetVar("v"): state.v, JetVar("v", 0, 1): vx,
        # potential densities are written with v_t; on the grid v_t = p
        JetVar("v", 1, 0): p,
    }


def _quadrature(f: np.ndarray, cfg: SolverConfig) -> float:
    if cfg.bc == "periodic":
        return float(cfg.h * np.sum(f))
    return float(cfg.h * (np.sum(f) - 0.5 * (f[0] + f[-1])))


def _check_spec(mid: str, cfg: SolverConfig) -> None:
    spec = MONITORS.get(mid)
    if spec is None:
        raise KeyError(f"unknown monitor {mid!r}")
    if spec.undamped_only and cfg.damped:
        raise ValueError(f"monitor {mid} requires alpha = 0")


def density(mid: str, state: SolverState, cfg: SolverConfig,
            eps: float = 1e-12) -> np.ndarray:
    """Pointwise density of monitor ``mid``.

    Raises
    ------
    DegenerateDenominator
        For C5/C6 when ``|p_x^2 - (1-2 beta p) p_t^2| < eps * scale`` at a
        node, with ``scale = max(p_x^2 + |1-2 beta p| p_t^2)``.
    """
    _check_spec(mid, cfg)
    if mid == "J_f":
        raise ValueError("use evaluate_J for J_f")
    vals = jet_values(state, cfg)
    if mid in ("C5", "C6"):
        px2 = vals[JetVar("p", 0, 1)] ** 2
        At2 = (1.0 - 2.0 * cfg.beta * state.p) * state.q ** 2
        scale = float(np.max(px2 + np.abs(At2)))
        if scale == 0.0 or np.min(np.abs(px2 - At2)) < eps * scale:
            raise DegenerateDenominator(
                f"{mid}: p_x^2 - (1-2 beta p) p_t^2 vanishes on the grid at t={state.t:.6g}")
    out = _compiled_integrand(mid)(vals)
    return np.broadcast_to(np.asarray(out, dtype=float), state.p.shape)


def evaluate(mid: str, state: SolverState, cfg: SolverConfig) -> float:
    """Trapezoid quadrature of the density of ``mid`` over the grid."""
    return _quadrature(density(mid, state, cfg), cfg)


def background_density(mid: str, t: float, cfg: SolverConfig) -> np.ndarray:
    """Density of ``mid`` on the trivial solution ``p = 0, v = 0`` at time ``t``.

    Several potential-level densities are nonzero there (``E`` by a constant,
    ``Tv3`` and ``K`` by multiples of ``t``).  Their fluxes then carry an
    explicit ``x``, which does not telescope on a periodic grid, so only the
    excess over this background is conserved.
    """
    _check_spec(mid, cfg)
    x = grid(cfg)
    zero = np.zeros_like(x)
    vals = {Symbol("t"): t, Symbol("x"): x, Symbol("alpha"): cfg.alpha,
            Symbol("beta"): cfg.beta}
    for o in ((0, 0), (1, 0), (2, 0), (0, 1), (1, 1)):
        vals[JetVar("p", *o)] = zero
    for o in ((0, 0), (1, 0), (0, 1)):
        vals[JetVar("v", *o)] = zero
    if mid in ("C5", "C6"):
        return zero
    out = _compiled_integrand(mid)(vals)
    return np.broadcast_to(np.asarray(out, dtype=float), x.shape)


def evaluate_J(f: Union[JetExpr, str, Callable], state: SolverState,
               cfg: SolverConfig) -> float:
    """Integral of the density of the current with multiplier ``f(v_t, v_x)``.

    ``f`` is an exact expression in ``v[1,0]`` and ``v[0,1]`` (or a string in
    the debug syntax, or a callable taking those two jet expressions).  The
    inner antiderivative in ``v_t = p`` is the closed form produced by
    :func:`catalog.instantiate_f_current`.

    Raises
    ------
    catalog.FCurrentError
        If ``f`` is not a polynomial solution of the linear equation.
    """
    _check_spec("J_f", cfg)
    if callable(f) and not isinstance(f, JetExpr):
        f = f(jet("v", 1, 0), jet("v", 0, 1))
    elif isinstance(f, str):
        f = parse(f)
    f = JetExpr._coerce(f)
    if f.is_zero():
        return 0.0
    T = catalog.instantiate_f_current(f, "J_f").T
    vals = jet_values(state, cfg)
    dens = np.broadcast_to(np.asarray(CompiledExpr(T)(vals), dtype=float), state.p.shape)
    return _quadrature(dens, cfg)


# ---------------------------------------------------------------------------
# recording during a run


class MonitorRecorder:
    """Callback for :func:`pde.run` that samples a set of monitors.

    With ``excess=True`` (default) each sample is the integral of the density
    minus its value on the trivial solution (:func:`background_density`);
    otherwise the raw integral of :func:`evaluate`.  Monitors whose density
    becomes degenerate are recorded as NaN from that sample on; the error
    message is kept in ``failures``.
    """

    def __init__(self, cfg: SolverConfig, ids: Optional[Sequence[str]] = None,
                 excess: bool = True):
        self.cfg = cfg
        self.excess = excess
        self.ids = list(ids) if ids is not None else default_monitor_ids(cfg)
        for mid in self.ids:
            _check_spec(mid, cfg)
        self.series = {mid: MonitorSeries(mid) for mid in self.ids}
        self.failures: Dict[str, str] = {}

    def __call__(self, n: int, state: SolverState) -> None:
        for mid in self.ids:
            try:
                d = density(mid, state, self.cfg)
                if self.excess:
                    d = d - background_density(mid, state.t, self.cfg)
                val, l1 = _quadrature(d, self.cfg), _quadrature(np.abs(d), self.cfg)
            except DegenerateDenominator as exc:
                self.failures.setdefault(mid, str(exc))
                val, l1 = math.nan, 0.0
            self.series[mid].add(state.t, val, l1)

    def drift(self) -> Dict[str, Tuple[float, float]]:
        return {mid: drift_report(s) for mid, s in self.series.items()}

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["t"] + self.ids)
            cols = [self.series[mid].samples for mid in self.ids]
            for k in range(len(cols[0])):
                t = cols[0][k][0]
                w.writerow([repr(t)] + [repr(c[k][1]) for c in cols])

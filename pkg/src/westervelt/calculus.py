"""Differential operators on jet space.

Total derivatives, Euler operators, prolongations, reduction to the
solution manifold of an equation, and formal adjoints of linear total
differential operators. Everything acts on :class:`~westervelt.jetspace.JetExpr`
and is exact.

A *frame* fixes which indeterminates play the role of the two independent
coordinates and which dependent symbols have jets over them. The physical
frame uses ``(t, x)`` with dependents ``p``, ``v``, ``u``; the linear frame
uses ``(ts, xs)`` with ``vs``; the ODE frame uses ``zeta`` with ``V``; the
hodograph frame uses ``(v_t, v_x)`` as coordinates for ``f``.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from .jetspace import (
    REGISTRY, WIDTH, MASK, JetExpr, JetVar, Poly, Symbol, Indeterminate,
    JetDivisionByZero, OrderCapError, _factor_pow, _factor_id, decode, get_order_cap, jet, sym,
    substitute, _check_overflow,
)

__all__ = [
    "Frame", "FRAMES", "EquationSpec", "LinearDiffOp", "equation",
    "total_derivative", "D", "Dt", "Dx", "partial", "euler_operator",
    "prolong_evolutionary", "reduce_to_solution_manifold", "frechet_operator",
    "formal_adjoint", "t_antiderivative", "rename_potential", "potential_to_westervelt",
]


@dataclass(frozen=True)
class Frame:
    """Independent coordinates and the dependents that carry jets over them."""

    name: str
    coords: Tuple[Indeterminate, ...]
    dependents: Tuple[str, ...]


FRAMES = {
    "physical": Frame("physical", (Symbol("t"), Symbol("x")), ("p", "v", "u")),
    "linear": Frame("linear", (Symbol("ts"), Symbol("xs")), ("vs",)),
    "ode": Frame("ode", (Symbol("zeta"),), ("V",)),
    "hodograph": Frame("hodograph", (JetVar("v", 1, 0), JetVar("v", 0, 1)), ("f",)),
}

_DIRECTIONS = {
    "t": ("physical", 0), "x": ("physical", 1),
    "ts": ("linear", 0), "xs": ("linear", 1),
    "zeta": ("ode", 0),
    "vt": ("hodograph", 0), "vx": ("hodograph", 1),
}

_DEP_FRAME = {dep: fr for fr in FRAMES.values() for dep in fr.dependents}


def _resolve(direction: str) -> Tuple[Frame, int]:
    try:
        name, slot = _DIRECTIONS[direction]
    except KeyError:
        raise ValueError(f"unknown direction {direction!r}") from None
    return FRAMES[name], slot


# ---------------------------------------------------------------------------
# derivations on polynomials

# per-direction map: variable index -> (target index or None for coordinate, multiplier)
_shift_lock = threading.Lock()
_shift_tables: Dict[str, Dict[int, Optional[int]]] = {d: {} for d in _DIRECTIONS}
_target_order: Dict[int, int] = {}


def _shift_target(idx: int, direction: str) -> Optional[int]:
    """Index of D(var) if it is another jet variable, -1 if D(var)=1, else None."""
    table = _shift_tables[direction]
    if idx in table:
        target = table[idx]
        # cached targets were created under some cap; recheck against the current one
        if target is not None and target >= 0 and _target_order[target] > get_order_cap():
            raise OrderCapError(f"{REGISTRY.items[target]} exceeds jet order cap {get_order_cap()}")
        return target
    frame, slot = _resolve(direction)
    ind = REGISTRY.items[idx]
    target: Optional[int] = None
    if ind == frame.coords[slot]:
        target = -1
    elif isinstance(ind, JetVar) and ind.dependent in frame.dependents:
        shifted = ind.shifted(1, 0) if slot == 0 else ind.shifted(0, 1)
        target = REGISTRY.index(shifted)
        _target_order[target] = shifted.order
    with _shift_lock:
        table[idx] = target
    return target


def _poly_total_derivative(p: Poly, direction: str) -> Poly:
    r: Dict[int, object] = {}
    get = r.get
    for m, c in p.items():
        for i, e in decode(m):
            tgt = _shift_target(i, direction)
            if tgt is None:
                continue
            nm = m - (1 << (i * WIDTH))
            if tgt >= 0:
                nm += 1 << (tgt * WIDTH)
            v = get(nm, 0) + c * e
            if v:
                r[nm] = v
            else:
                r.pop(nm, None)
    _check_overflow(r)
    return Poly._raw(r)


_dfactor_cache: Dict[Tuple[int, str], Poly] = {}


def _derive(e: JetExpr, dpoly: Callable[[Poly], Poly], key: Optional[str] = None) -> JetExpr:
    """Apply a derivation to a rational expression via the quotient rule.

    With ``e = s*N/prod(f_i^k_i)`` and radical ``F = prod f_i``::

        d(e) = s*(dN*F - N*sum_i k_i*df_i*F/f_i) / (prod f_i^k_i * F)
    """
    if e.is_zero():
        return e
    num = dpoly(e._num)
    den = e._den
    if not den:
        return JetExpr._build(num, e._scale, {})
    dfs = []
    for f, k in den:
        if key is not None:
            ck = (_factor_id(f), key)
            df = _dfactor_cache.get(ck)
            if df is None:
                df = dpoly(f)
                _dfactor_cache[ck] = df
        else:
            df = dpoly(f)
        dfs.append(df)
    active = [i for i, df in enumerate(dfs) if not df.is_zero()]
    if not active:
        return JetExpr._build(num, e._scale, dict(den))
    rad = [den[i][0] for i in active]
    total = num
    for i in active:
        total = total * rad[active.index(i)]
    for pos, i in enumerate(active):
        f, k = den[i]
        others = Poly.constant(1)
        for q, j in enumerate(active):
            if q != pos:
                others = others * rad[q]
        total = total - (e._num * dfs[i] * others).scale(k)
    new_den = {f: k for f, k in den}
    for i in active:
        new_den[den[i][0]] += 1
    return JetExpr._build(total, e._scale, new_den)


def total_derivative(e: JetExpr, direction: str) -> JetExpr:
    """Total derivative in ``direction`` (``'t'``, ``'x'``, ``'ts'``, ``'xs'``,
    ``'zeta'``, ``'vt'`` or ``'vx'``).

    Raises
    ------
    OrderCapError
        If a jet variable would exceed the order cap.
    """
    return _derive(e, lambda p: _poly_total_derivative(p, direction), key=direction)


def D(e: JetExpr, direction: str, times: int = 1) -> JetExpr:
    for _ in range(times):
        e = total_derivative(e, direction)
    return e


def Dt(e: JetExpr, times: int = 1) -> JetExpr:
    return D(e, "t", times)


def Dx(e: JetExpr, times: int = 1) -> JetExpr:
    return D(e, "x", times)


def partial(e: JetExpr, var: Union[Indeterminate, JetExpr, str]) -> JetExpr:
    """Partial derivative with respect to one indeterminate."""
    if isinstance(var, (JetExpr, str)):
        from .jetspace import _as_indeterminate
        var = _as_indeterminate(var)
    idx = REGISTRY.index(var)
    if idx not in e.var_indices():
        return JetExpr(0)
    return _derive(e, lambda p: p.diff(idx), key=f"d{idx}")


# ---------------------------------------------------------------------------
# variational calculus


def _jet_partials(e: JetExpr, dependent: str, offset: Tuple[int, int]) -> Dict[Tuple[int, int], JetExpr]:
    out = {}
    for v in e.jet_vars(dependent):
        a, b = v.t_order - offset[0], v.x_order - offset[1]
        if a < 0 or b < 0:
            continue
        d = partial(e, v)
        if not d.is_zero():
            out[(a, b)] = d
    return out


def _directions_for(dependent: str) -> Tuple[str, Optional[str]]:
    frame = _DEP_FRAME[dependent]
    dirs = [d for d, (fr, _) in sorted(_DIRECTIONS.items(), key=lambda kv: kv[1][1])
            if fr == frame.name]
    return dirs[0], (dirs[1] if len(dirs) > 1 else None)


def euler_operator(e: JetExpr, dependent: str, offset: Tuple[int, int] = (0, 0)) -> JetExpr:
    """Variational derivative ``E_w(e) = sum_J (-D)^J de/dw_J``.

    With ``offset=(1, 0)`` the sum runs over jet variables of ``w_t`` (the
    variational derivative with respect to ``w_t``), and so on.
    """
    parts = _jet_partials(e, dependent, offset)
    if not parts:
        return JetExpr(0)
    dt, dx = _directions_for(dependent)
    amax = max(a for a, _ in parts)
    result = JetExpr(0)
    for a in range(amax, -1, -1):
        row = {b: g for (aa, b), g in parts.items() if aa == a}
        inner = JetExpr(0)
        if row:
            for b in range(max(row), -1, -1):
                if b in row:
                    inner = row[b] - total_derivative(inner, dx) if not inner.is_zero() else row[b]
                elif not inner.is_zero():
                    inner = -total_derivative(inner, dx)
        result = inner - total_derivative(result, dt) if not result.is_zero() else inner
    return result


def prolong_evolutionary(P: JetExpr, e: JetExpr, dependent: str) -> JetExpr:
    """Frechet derivative of ``e`` in the direction ``P``:
    ``sum_J D^J(P) de/dw_J``."""
    parts = _jet_partials(e, dependent, (0, 0))
    dt, dx = _directions_for(dependent)
    cache: Dict[Tuple[int, int], JetExpr] = {(0, 0): P}

    def dj(a: int, b: int) -> JetExpr:
        if (a, b) not in cache:
            if b > 0:
                cache[(a, b)] = total_derivative(dj(a, b - 1), dx)
            else:
                cache[(a, b)] = total_derivative(dj(a - 1, 0), dt)
        return cache[(a, b)]

    total = JetExpr(0)
    for (a, b), g in sorted(parts.items()):
        total = total + dj(a, b) * g
    return total


# ---------------------------------------------------------------------------
# equations and reduction


@dataclass(frozen=True)
class EquationSpec:
    """A PDE ``residual = 0`` solved for the jet variable ``leading``."""

    name: str
    residual: JetExpr
    leading: JetVar
    rewrite: JetExpr

    @property
    def dependent(self) -> str:
        return self.leading.dependent

    def __repr__(self) -> str:
        return f"EquationSpec({self.name})"


def _make_equation(name: str, residual: JetExpr, leading: JetVar) -> EquationSpec:
    lv = JetExpr(Poly.var(leading))
    coef = partial(residual, leading)
    if not partial(coef, leading).is_zero():
        raise ValueError("residual must be linear in its leading derivative")
    rest = residual - coef * lv
    return EquationSpec(name, residual, leading, (-rest / coef).cancel())


def _residuals():
    a, b = sym("alpha"), sym("beta")
    p = lambda i, j: jet("p", i, j)
    v = lambda i, j: jet("v", i, j)
    vs = lambda i, j: jet("vs", i, j)
    f = lambda i, j: jet("f", i, j)
    west = (1 - 2 * b * p(0, 0)) * p(2, 0) - 2 * b * p(1, 0) ** 2 - a * p(3, 0) - p(0, 2)
    pot = (1 - 2 * b * v(1, 0)) * v(2, 0) - a * v(3, 0) - v(0, 2)
    return {
        "westervelt_damped": (west, JetVar("p", 3, 0)),
        "westervelt_undamped": (substitute(west, {Symbol("alpha"): 0}), JetVar("p", 2, 0)),
        "potential_damped": (pot, JetVar("v", 3, 0)),
        "potential_undamped": (substitute(pot, {Symbol("alpha"): 0}), JetVar("v", 2, 0)),
        "potential_undamped_x": (substitute(pot, {Symbol("alpha"): 0}), JetVar("v", 0, 2)),
        "linear_wave": (vs(2, 0) - (1 - 2 * b * sym("ts")) * vs(0, 2), JetVar("vs", 2, 0)),
        "f_equation": (f(2, 0) - (1 - 2 * b * v(1, 0)) * f(0, 2), JetVar("f", 2, 0)),
    }


_equations: Dict[str, EquationSpec] = {}
_eq_lock = threading.Lock()

EQUATION_NAMES = ("westervelt_damped", "westervelt_undamped", "potential_damped",
                  "potential_undamped", "linear_wave", "f_equation")


def equation(name: Union[str, EquationSpec]) -> EquationSpec:
    """Look up an equation by name.

    Raises
    ------
    KeyError
        For unknown names.
    """
    if isinstance(name, EquationSpec):
        return name
    with _eq_lock:
        if not _equations:
            for n, (res, lead) in _residuals().items():
                _equations[n] = _make_equation(n, res, lead)
    try:
        return _equations[name]
    except KeyError:
        raise KeyError(f"unknown equation {name!r}") from None


class _Reducer:
    def __init__(self, eq: EquationSpec):
        self.eq = eq
        self.lead = eq.leading
        self.dt, self.dx = _directions_for(eq.dependent)
        self.memo: Dict[int, JetExpr] = {}
        self.active: set = set()
        self.lock = threading.RLock()

    def reducible(self, v: Indeterminate) -> bool:
        return (isinstance(v, JetVar) and v.dependent == self.lead.dependent
                and v.t_order >= self.lead.t_order and v.x_order >= self.lead.x_order)

    def rule(self, v: JetVar) -> JetExpr:
        idx = REGISTRY.index(v)
        with self.lock:
            if idx in self.memo:
                return self.memo[idx]
            if idx in self.active:
                raise RuntimeError(f"cyclic reduction at {v}")
            self.active.add(idx)
            try:
                i = v.t_order - self.lead.t_order
                j = v.x_order - self.lead.x_order
                if i == 0 and j == 0:
                    r = self.eq.rewrite
                elif i > 0:
                    r = self.reduce(total_derivative(self.rule(v.shifted(-1, 0)), self.dt))
                else:
                    r = self.reduce(total_derivative(self.rule(v.shifted(0, -1)), self.dx))
                self.memo[idx] = r
            finally:
                self.active.discard(idx)
            return r

    def reduce(self, e: JetExpr) -> JetExpr:
        targets = [v for v in e.variables() if self.reducible(v)]
        if not targets:
            return e
        return substitute(e, {v: self.rule(v) for v in targets})


_reducers: Dict[str, _Reducer] = {}


def _reducer(eq: EquationSpec) -> _Reducer:
    key = f"{eq.name}:{eq.leading}:{eq.rewrite}"
    r = _reducers.get(key)
    if r is None:
        r = _reducers.setdefault(key, _Reducer(eq))
    return r


def reduce_to_solution_manifold(e: JetExpr, eq: Union[str, EquationSpec]) -> JetExpr:
    """Eliminate the leading derivative and all its differential consequences.

    Every jet variable ``w_{a,b}`` with ``a >= leading.t_order`` and
    ``b >= leading.x_order`` is replaced by the corresponding total
    derivative of the rewrite rule, itself already reduced.
    """
    return _reducer(equation(eq)).reduce(e)


# ---------------------------------------------------------------------------
# linear total differential operators


class LinearDiffOp:
    """``sum c_ab D^a_1 D^b_2`` with jet-expression coefficients."""

    def __init__(self, terms: Union[Dict[Tuple[int, int], JetExpr], Sequence[Tuple[JetExpr, int, int]]],
                 dependent: str = "p"):
        if isinstance(terms, dict):
            items = list(terms.items())
        else:
            items = []
            seen = set()
            for c, a, b in terms:
                if (a, b) in seen:
                    raise ValueError(f"duplicate order ({a},{b})")
                seen.add((a, b))
                items.append(((a, b), c))
        self.dependent = dependent
        self.coeffs: Dict[Tuple[int, int], JetExpr] = {
            k: JetExpr._coerce(c) for k, c in items if not JetExpr._coerce(c).is_zero()}

    @property
    def terms(self) -> List[Tuple[JetExpr, int, int]]:
        return [(c, a, b) for (a, b), c in sorted(self.coeffs.items())]

    def apply(self, f: JetExpr) -> JetExpr:
        dt, dx = _directions_for(self.dependent)
        cache = {(0, 0): f}

        def dj(a, b):
            if (a, b) not in cache:
                cache[(a, b)] = (total_derivative(dj(a, b - 1), dx) if b
                                 else total_derivative(dj(a - 1, 0), dt))
            return cache[(a, b)]

        out = JetExpr(0)
        for (a, b), c in sorted(self.coeffs.items()):
            out = out + c * dj(a, b)
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, LinearDiffOp):
            return NotImplemented
        keys = set(self.coeffs) | set(other.coeffs)
        zero = JetExpr(0)
        return all((self.coeffs.get(k, zero) - other.coeffs.get(k, zero)).is_zero() for k in keys)

    def __repr__(self) -> str:
        return "LinearDiffOp(" + " + ".join(f"({c})*D^{a},{b}" for c, a, b in self.terms) + ")"


def frechet_operator(e: JetExpr, dependent: str) -> LinearDiffOp:
    """Linearisation of ``e`` as an explicit operator ``sum de/dw_J D^J``."""
    return LinearDiffOp(_jet_partials(e, dependent, (0, 0)), dependent)


def formal_adjoint(L: LinearDiffOp) -> LinearDiffOp:
    """Adjoint by integration by parts, expanded back to ``sum c' D^J`` form."""
    dt, dx = _directions_for(L.dependent)
    out: Dict[Tuple[int, int], JetExpr] = {}
    for (a, b), c in L.coeffs.items():
        sign = -1 if (a + b) % 2 else 1
        # D^{a-i}_t D^{b-j}_x c
        dc = {(0, 0): c}
        for i in range(a + 1):
            for j in range(b + 1):
                term = _dd(c, a - i, b - j, dt, dx, dc) * (sign * math.comb(a, i) * math.comb(b, j))
                out[(i, j)] = out.get((i, j), JetExpr(0)) + term
    return LinearDiffOp(out, L.dependent)


def _dd(c, a, b, dt, dx, cache):
    if (a, b) in cache:
        return cache[(a, b)]
    if b:
        r = total_derivative(_dd(c, a, b - 1, dt, dx, cache), dx)
    else:
        r = total_derivative(_dd(c, a - 1, 0, dt, dx, cache), dt)
    cache[(a, b)] = r
    return r


# ---------------------------------------------------------------------------
# antiderivatives and renames


def t_antiderivative(e: JetExpr, var: Union[Indeterminate, JetExpr, str]) -> JetExpr:
    """Antiderivative in one indeterminate with zero integration constant.

    Raises
    ------
    ValueError
        If the denominator of ``e`` depends on ``var``.
    """
    from .jetspace import _as_indeterminate
    if not isinstance(var, (Symbol, JetVar)):
        var = _as_indeterminate(var)
    idx = REGISTRY.index(var)
    for f, _ in e._den:
        if idx in f.var_indices():
            raise ValueError(f"expression is not polynomial in {var}")
    shift = idx * WIDTH
    r = {}
    for m, c in e._num.items():
        k = (m >> shift) & MASK
        r[m + (1 << shift)] = Fraction(c) / (k + 1)
    out = Poly(r)
    _check_overflow(out._t)
    return JetExpr._build(out, e._scale, dict(e._den))


def rename_potential(e: JetExpr) -> JetExpr:
    """Rename ``v_{a+1,b} -> p_{a,b}``; ``v`` itself must not appear."""
    binds = {}
    for v in e.jet_vars("v"):
        if v.t_order == 0:
            raise ValueError(f"{v} has no Westervelt counterpart")
        binds[v] = jet("p", v.t_order - 1, v.x_order)
    return substitute(e, binds) if binds else e


def potential_to_westervelt(e: JetExpr) -> JetExpr:
    """Express a local potential-level expression in Westervelt variables.

    ``v_x``-derivatives of order two or more are eliminated with the
    undamped potential equation, ``v_{a+1,b}`` is renamed to ``p_{a,b}``,
    and the result is reduced on the undamped Westervelt manifold.
    """
    e = reduce_to_solution_manifold(e, "potential_undamped_x")
    return reduce_to_solution_manifold(rename_potential(e), "westervelt_undamped")

"""Encoded formulas: symmetries, multipliers, currents, operators, maps.

Every entry is built from exact jet expressions. Entries whose reference form
fails its defining identity are kept verbatim with ``expected="fail"`` and
paired with a corrected entry, so the reference form stays under
regression test.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .jetspace import JetExpr, JetVar, Symbol, jet, sym, substitute, format_expr, parse
from .calculus import (
    EquationSpec, equation, partial, t_antiderivative, total_derivative,
    euler_operator,
)

__all__ = [
    "SymmetryChar", "MultiplierEntry", "ConservedCurrent", "RecursionOp", "ContactMap",
    "get_symmetries", "get_multipliers", "get_currents", "get_recursion_ops",
    "get_symmetry", "get_current", "get_multiplier",
    "contact_map", "lagrangian", "hamiltonian_density", "legendre_momentum",
    "jacobian_potential", "jacobian_westervelt", "integrand", "INTEGRANDS",
    "instantiate_f_current", "FCurrentError", "exact_families", "dump",
    "c6_tail_potential", "f_equation_residual",
]

a, b = sym("alpha"), sym("beta")
t, x = sym("t"), sym("x")


def _p(i=0, j=0):
    return jet("p", i, j)


def _v(i=0, j=0):
    return jet("v", i, j)


HALF = Fraction(1, 2)


# ---------------------------------------------------------------------------
# types


@dataclass(frozen=True)
class SymmetryChar:
    """Characteristic ``P`` of a generator ``P d_w``."""

    id: str
    equation: str
    expr: JetExpr
    order: int
    local: bool = True
    undamped_only: bool = False
    tag: str = ""
    note: str = ""


@dataclass(frozen=True)
class MultiplierEntry:
    id: str
    equation: str
    expr: JetExpr
    undamped_only: bool = False
    tag: str = ""


@dataclass(frozen=True)
class ConservedCurrent:
    """Current ``(T, Phi)`` with multiplier ``Q``:
    ``D_t T + D_x Phi = Q * residual`` off-shell (or on-shell when
    ``on_shell`` is set, in which case ``Q`` may be ``None``)."""

    id: str
    equation: str
    Q: Optional[JetExpr]
    T: JetExpr
    Phi: JetExpr
    undamped_only: bool = False
    on_shell: bool = False
    expected: str = "pass"
    tag: str = ""
    note: str = ""


@dataclass(frozen=True)
class RecursionOp:
    """``denom^{-1} (coeff_t D_t + coeff_x D_x)``."""

    id: str
    num_coeff_t: JetExpr
    num_coeff_x: JetExpr
    denom: JetExpr
    dependent: str = "v"
    tag: str = ""

    def __post_init__(self):
        if self.denom.is_zero():
            raise ValueError("recursion operator denominator vanishes")

    def apply(self, P: JetExpr) -> JetExpr:
        d = "t" if self.dependent in ("p", "v") else "ts"
        dx = "x" if d == "t" else "xs"
        return (self.num_coeff_t * total_derivative(P, d)
                + self.num_coeff_x * total_derivative(P, dx)) / self.denom


@dataclass(frozen=True)
class ContactMap:
    """Components ``(t*, x*, v*, v*_{t*}, v*_{x*})`` in physical variables and
    ``(t, x, v, v_t, v_x)`` in starred variables."""

    forward: Tuple[JetExpr, JetExpr, JetExpr, JetExpr, JetExpr]
    inverse: Tuple[JetExpr, JetExpr, JetExpr, JetExpr, JetExpr]
    physical_vars: Tuple = ()
    star_vars: Tuple = ()


# ---------------------------------------------------------------------------
# basic building blocks


def jacobian_potential() -> JetExpr:
    """``|J| = v_tt v_xx - v_tx^2``."""
    return _v(2, 0) * _v(0, 2) - _v(1, 1) ** 2


def jacobian_westervelt() -> JetExpr:
    """``|J|`` on undamped solutions: ``(1-2 beta p) p_t^2 - p_x^2``."""
    return (1 - 2 * b * _p()) * _p(1, 0) ** 2 - _p(0, 1) ** 2


def lagrangian() -> JetExpr:
    """``L = (v_x^2 - v_t^2)/2 + beta v_t^3 / 3``."""
    return HALF * (_v(0, 1) ** 2 - _v(1, 0) ** 2) + Fraction(1, 3) * b * _v(1, 0) ** 3


def legendre_momentum() -> JetExpr:
    """Conjugate momentum ``dL/dv_t``."""
    return partial(lagrangian(), JetVar("v", 1, 0))


def hamiltonian_density() -> JetExpr:
    """``h = (p^2 + v_x^2)/2 - (2 beta/3) p^3`` with ``p = v_t`` kept as ``p``."""
    return HALF * (_p() ** 2 + _v(0, 1) ** 2) - Fraction(2, 3) * b * _p() ** 3


# ---------------------------------------------------------------------------
# symmetries


def _westervelt_symmetries() -> List[SymmetryChar]:
    p, pt, px = _p(), _p(1, 0), _p(0, 1)
    A = 1 - 2 * b * p
    Jw = jacobian_westervelt()
    S = A * pt ** 2 + px ** 2
    ptt, ptx = _p(2, 0), _p(1, 1)
    P1 = -pt
    P2 = -px
    P3 = 1 - 2 * b * p - 2 * b * t * pt - 3 * b * x * px
    P4 = -t * pt - x * px
    P_1 = (S * ptt - 2 * pt * px * ptx - 2 * b * pt ** 4) / Jw ** 2
    P_2p = ((px * (3 * A * pt ** 2 + px ** 2) * _p(3, 0)
             - pt * (A * pt ** 2 + 3 * px ** 2) * _p(2, 1)) / Jw ** 3
            + (-12 * pt * px * S * (A * ptt ** 2 + ptx ** 2)
               + 6 * (A ** 2 * pt ** 4 + 6 * A * pt ** 2 * px ** 2 + px ** 4) * ptx * ptt
               + 4 * b * pt ** 3 * px * (5 * A * pt ** 2 + 7 * px ** 2) * ptt
               - 8 * pt ** 4 * b * (A * pt ** 2 + 5 * px ** 2) * ptx
               - 24 * b ** 2 * pt ** 7 * px) / Jw ** 4)
    return [
        SymmetryChar("P1", "westervelt_damped", P1, 1, tag="time translation"),
        SymmetryChar("P2", "westervelt_damped", P2, 1, tag="space translation"),
        SymmetryChar("P3", "westervelt_damped", P3, 1, tag="scaling with shift"),
        SymmetryChar("P4", "westervelt_undamped", P4, 1, undamped_only=True, tag="dilation"),
        SymmetryChar("P(1)", "westervelt_undamped", P_1, 2, undamped_only=True,
                     tag="second-order symmetry from the lifted recursion operator"),
        SymmetryChar("P(2)'", "westervelt_undamped", P_2p, 3, undamped_only=True,
                     tag="third-order symmetry D_t Pv6(3)"),
    ]


def _potential_symmetries() -> List[SymmetryChar]:
    v, vt, vx = _v(), _v(1, 0), _v(0, 1)
    vtt, vtx = _v(2, 0), _v(1, 1)
    J = jacobian_potential()
    Pv5 = t - 2 * b * t * vt - 3 * b * x * vx
    Pv6 = v - t * vt - x * vx
    Pv5p = t - 3 * b * v + b * t * vt
    Pv6_2 = -vtt / J
    Pv5p_1 = ((1 - 2 * b * vt) * vtx + 3 * b * vx * vtt) / J
    Pv6_3 = (vtx ** 3 * _v(3, 0) - 3 * vtt * vtx ** 2 * _v(2, 1)
             + 3 * vtt ** 2 * vtx * _v(1, 2) - vtt ** 3 * _v(0, 3)) / J ** 3
    # second image of the 5' hierarchy has no reference form; generated here
    Pv5p_2 = x_translation().apply(Pv5p_1)
    return [
        SymmetryChar("Pv1", "potential_damped", JetExpr(1), 0, tag="shift"),
        SymmetryChar("Pv2", "potential_damped", x, 0, tag="x-dependent shift"),
        SymmetryChar("Pv3", "potential_damped", -vt, 1, tag="time translation"),
        SymmetryChar("Pv4", "potential_damped", -vx, 1, tag="space translation"),
        SymmetryChar("Pv5", "potential_damped", Pv5, 1, tag="scaling with shift"),
        SymmetryChar("Pv6", "potential_undamped", Pv6, 1, undamped_only=True, tag="dilation"),
        SymmetryChar("Pv5'", "potential_undamped", Pv5p, 1, undamped_only=True,
                     tag="Pv5 - 3 beta Pv6"),
        SymmetryChar("Pv6(2)", "potential_undamped", Pv6_2, 2, undamped_only=True,
                     tag="second image of Pv6 under R^v"),
        SymmetryChar("Pv5'(1)", "potential_undamped", Pv5p_1, 2, undamped_only=True,
                     tag="first image of Pv5' under R^v"),
        SymmetryChar("Pv6(3)", "potential_undamped", Pv6_3, 3, undamped_only=True,
                     tag="third image of Pv6 under R^v"),
        SymmetryChar("Pv5'(2)", "potential_undamped", Pv5p_2, 3, undamped_only=True,
                     tag="second image of Pv5' under R^v (generated)"),
        SymmetryChar("Qv3-contact", "potential_undamped", _qv3(), 1, undamped_only=True,
                     tag="variational point symmetry Pv6 + (2/beta) Pv5"),
        SymmetryChar("Qv4-contact", "potential_undamped", _qv4(), 1, undamped_only=True,
                     tag="contact symmetry, characteristic form"),
        SymmetryChar("Qv5a-contact", "potential_undamped", vt - 1 / (2 * b), 1,
                     undamped_only=True, tag="f = v_t - 1/(2 beta)"),
        SymmetryChar("Qv5b-contact", "potential_undamped", vx, 1, undamped_only=True,
                     tag="f = v_x"),
    ]


def _linear_symmetries() -> List[SymmetryChar]:
    ts, xs = sym("ts"), sym("xs")
    vs = lambda i, j: jet("vs", i, j)
    return [
        SymmetryChar("Ls1", "linear_wave", -vs(0, 1), 1, tag="x* translation"),
        SymmetryChar("Ls2", "linear_wave", -(2 * ts - 1 / b) * vs(1, 0) - 3 * xs * vs(0, 1), 1,
                     tag="dilation of x* and t* - 1/(2 beta)"),
        SymmetryChar("Ls3", "linear_wave", jet("vs"), 0, tag="linear scaling"),
    ]


def _qv3() -> JetExpr:
    return 2 / b * t + _v() - 5 * t * _v(1, 0) - 7 * x * _v(0, 1)


def _qv4() -> JetExpr:
    vt, vx = _v(1, 0), _v(0, 1)
    return ((2 / b * t + _v() - 5 * t * vt) * vx
            - 4 * x * (vx ** 2 - Fraction(2, 3) / b ** 2 * (b * vt - HALF) ** 3))


_ALIASES = {"westervelt": "westervelt_undamped", "potential": "potential_undamped"}


def _canonical_eq(name: str) -> str:
    name = _ALIASES.get(name, name)
    equation(name)
    return name


def _includes(entry_eq: str, undamped_only: bool, query: str) -> bool:
    family = {"westervelt_damped": "w", "westervelt_undamped": "w",
              "potential_damped": "v", "potential_undamped": "v", "linear_wave": "l",
              "f_equation": "f"}
    if family[entry_eq] != family[query]:
        return False
    if query.endswith("_damped") and undamped_only:
        return False
    return True


@functools.lru_cache(maxsize=None)
def _all_symmetries() -> Tuple[SymmetryChar, ...]:
    return tuple(_westervelt_symmetries() + _potential_symmetries() + _linear_symmetries())


def get_symmetries(eq: str) -> List[SymmetryChar]:
    """Catalogued characteristics admitted by ``eq`` (damped lists omit
    undamped-only entries; the aliases ``westervelt`` and ``potential``
    return the undamped lists).

    Raises
    ------
    KeyError
        Unknown equation name.
    """
    q = _canonical_eq(eq)
    return [s for s in _all_symmetries() if _includes(s.equation, s.undamped_only, q)]


def get_symmetry(sid: str) -> SymmetryChar:
    for s in _all_symmetries():
        if s.id == sid:
            return s
    raise KeyError(sid)


# ---------------------------------------------------------------------------
# multipliers


@functools.lru_cache(maxsize=None)
def _all_multipliers() -> Tuple[MultiplierEntry, ...]:
    p, pt, px = _p(), _p(1, 0), _p(0, 1)
    Q5 = 2 * pt * px / (px ** 2 - (1 - 2 * b * p) * pt ** 2) ** 2
    return (
        MultiplierEntry("Q1", "westervelt_damped", JetExpr(1), tag="low-order multiplier"),
        MultiplierEntry("Q2", "westervelt_damped", x, tag="low-order multiplier"),
        MultiplierEntry("Q3", "westervelt_damped", t, tag="low-order multiplier"),
        MultiplierEntry("Q4", "westervelt_damped", t * x, tag="low-order multiplier"),
        MultiplierEntry("Q5", "westervelt_undamped", Q5, undamped_only=True,
                        tag="first-order multiplier"),
        MultiplierEntry("Qv1", "potential_damped", JetExpr(1), tag="potential multiplier"),
        MultiplierEntry("Qv2", "potential_damped", x, tag="potential multiplier"),
        MultiplierEntry("Qv3", "potential_undamped", _qv3(), undamped_only=True,
                        tag="potential multiplier"),
        MultiplierEntry("Qv4", "potential_undamped", _qv4(), undamped_only=True,
                        tag="quadratic potential multiplier"),
        MultiplierEntry("Qv5a", "potential_undamped", _v(1, 0) - 1 / (2 * b),
                        undamped_only=True, tag="f = v_t - 1/(2 beta)"),
        MultiplierEntry("Qv5b", "potential_undamped", _v(0, 1), undamped_only=True,
                        tag="f = v_x"),
    )


def get_multipliers(eq: str) -> List[MultiplierEntry]:
    q = _canonical_eq(eq)
    return [m for m in _all_multipliers() if _includes(m.equation, m.undamped_only, q)]


def get_multiplier(mid: str) -> MultiplierEntry:
    for m in _all_multipliers():
        if m.id == mid:
            return m
    raise KeyError(mid)


# ---------------------------------------------------------------------------
# currents


def _westervelt_currents() -> List[ConservedCurrent]:
    p, pt, px = _p(), _p(1, 0), _p(0, 1)
    ptt, ptx = _p(2, 0), _p(1, 1)
    A = 1 - 2 * b * p
    base = A * pt - a * ptt
    T3 = t * base - (1 - b * p) * p + a * pt
    D5 = px ** 2 - A * pt ** 2
    Q5 = 2 * pt * px / D5 ** 2
    out = [
        ConservedCurrent("C1", "westervelt_damped", JetExpr(1), base, -px,
                         tag="low-order current 1"),
        ConservedCurrent("C2", "westervelt_damped", x, x * base, p - x * px,
                         tag="low-order current 2"),
        ConservedCurrent("C3", "westervelt_damped", t, T3, -t * px,
                         tag="low-order current 3"),
        ConservedCurrent("C4", "westervelt_damped", t * x, x * T3, t * (p - x * px),
                         tag="low-order current 4"),
        ConservedCurrent("C5", "westervelt_undamped", _C5_MULT_SIGN * Q5, px / D5, pt / D5,
                         undamped_only=True, tag="first-order current 5"),
    ]
    T6, Phi6 = _t6_phi6()
    out.append(ConservedCurrent("C6", "westervelt_undamped", None, T6, Phi6,
                                undamped_only=True, on_shell=True,
                                tag="next current in the Q4 hierarchy"))
    T6r, Phi6r = _t6_phi6(tail=False)
    out.append(ConservedCurrent("C6-regular", "westervelt_undamped", None, T6r, Phi6r,
                                undamped_only=True, on_shell=True,
                                tag="C6 without its trivial tail",
                                note="differs from C6 by (D_x theta, -D_t theta), "
                                     "theta = 2*beta*p_x^2/((1-2*beta*p)^4*p_t^4)"))
    return out


def c6_tail_potential() -> JetExpr:
    """``theta`` with ``T6 - T6_regular = D_x theta`` and
    ``Phi6 - Phi6_regular = -D_t theta`` on solutions."""
    p, pt, px = _p(), _p(1, 0), _p(0, 1)
    return 2 * b * px ** 2 / ((1 - 2 * b * p) ** 4 * pt ** 4)


# sign relating the reference multiplier Q5 to the reference current (T5, Phi5);
# fixed by the engine, see tests
_C5_MULT_SIGN = 1


def _t6_phi6(tail: bool = True) -> Tuple[JetExpr, JetExpr]:
    p, pt, px = _p(), _p(1, 0), _p(0, 1)
    ptt, ptx = _p(2, 0), _p(1, 1)
    A = 1 - 2 * b * p
    S = A * pt ** 2 + px ** 2
    Jw = A * pt ** 2 - px ** 2
    T6 = (HALF * (px * (5 * S ** 2 - 4 * px ** 4) * (A * ptt ** 2 + ptx ** 2)
                  - 2 * pt * (5 * S ** 2 - 4 * A ** 2 * pt ** 4) * (A * ptt - 2 * b * pt ** 2) * ptx
                  - 8 * b * A * px * pt ** 4 * (3 * A * pt ** 2 + 5 * px ** 2) * ptt
                  + 4 * b ** 2 * px * pt ** 6 * (7 * A * pt ** 2 + 5 * px ** 2)) / Jw ** 5)
    Phi6 = (HALF * (pt * (5 * S ** 2 - 4 * A ** 2 * pt ** 4)
                    * (A * ptt ** 2 + ptx ** 2 - 4 * b * pt ** 2 * ptt)
                    - 2 * px * (5 * S ** 2 - 4 * px ** 4) * ptx * ptt
                    + 8 * b * px * pt ** 4 * (3 * A * pt ** 2 + 5 * px ** 2) * ptx
                    + 4 * b ** 2 * pt ** 7 * (A * pt ** 2 + 11 * px ** 2)) / Jw ** 5)
    if not tail:
        return T6, Phi6
    T6 = (T6 + 4 * b * px * (A * ptt - 2 * b * pt ** 2) / (A ** 4 * pt ** 4)
          - 8 * b * px ** 2 * (A * ptx - 2 * b * px * pt) / (A ** 5 * pt ** 5))
    Phi6 = (Phi6 - 4 * b * px * ptx / (A ** 4 * pt ** 4)
            + 8 * b * px ** 2 * (A * ptt - 2 * b * pt ** 2) / (A ** 5 * pt ** 5))
    return T6, Phi6


def _potential_currents() -> List[ConservedCurrent]:
    v, vt, vx, vtt = _v(), _v(1, 0), _v(0, 1), _v(2, 0)
    W = b * vt - HALF
    vm = v - t / (2 * b)
    T1 = W ** 2 / b + a * vtt
    T2 = x * (W ** 2 + a * vtt) / b
    T3 = (t * (Fraction(10, 3) / b ** 2 * W ** 3 - Fraction(5, 2) * vx ** 2)
          + 7 / b * x * W ** 2 * vx - W ** 2 * vm / b)
    Phi3 = (5 / b * t * W * vx + x * (Fraction(7, 2) * vx ** 2 - Fraction(7, 3) / b ** 2 * W ** 3)
            - vx * vm)
    T4 = (t * (Fraction(10, 3) / b ** 2 * W ** 3 * vx - Fraction(5, 6) * vx ** 3)
          + 4 / b * x * W ** 2 * (vx ** 2 - Fraction(4, 15) / b ** 2 * W ** 3)
          - W ** 2 * vx * vm / b)
    Phi4 = (t * (Fraction(5, 2) / b * W * vx ** 2 - Fraction(5, 6) / b ** 3 * W ** 4)
            + x * (Fraction(4, 3) * vx ** 3 - Fraction(8, 3) / b ** 2 * W ** 3 * vx)
            + (Fraction(1, 3) / b ** 2 * W ** 3 - HALF * vx ** 2) * vm)
    T5a = HALF * vx ** 2 - Fraction(2, 3) / b ** 2 * W ** 3
    Phi5a = -(vt - 1 / (2 * b)) * vx
    T5b = W ** 2 * vx / b ** 2
    Phi5b = HALF * vx ** 2 - Fraction(1, 3) / b ** 2 * W ** 3
    J = jacobian_potential()
    m = _POTENTIAL_MULTIPLIERS
    return [
        ConservedCurrent("Cv1", "potential_damped", m["Cv1"], T1, vx, tag="potential current 1"),
        ConservedCurrent("Cv2", "potential_damped", m["Cv2"], T2, x * vx - v,
                         expected="fail", tag="potential current 2, reference form",
                         note="damping term carries a spurious 1/beta"),
        ConservedCurrent("Cv2-undamped", "potential_undamped", m["Cv2"],
                         substitute(T2, {Symbol("alpha"): 0}), x * vx - v, undamped_only=True,
                         tag="potential current 2, reference form, alpha = 0"),
        ConservedCurrent("Cv2-corrected", "potential_damped", m["Cv2-corrected"], x * T1,
                         x * vx - v, tag="potential current 2 with density x * Tv1"),
        ConservedCurrent("Cv3", "potential_undamped", m["Cv3"], T3, Phi3, undamped_only=True,
                         tag="potential current 3"),
        ConservedCurrent("Cv4", "potential_undamped", m["Cv4"], T4, Phi4, undamped_only=True,
                         tag="potential current 4"),
        ConservedCurrent("Cv5a", "potential_undamped", m["Cv5a"], T5a, Phi5a, undamped_only=True,
                         tag="potential current 5a"),
        ConservedCurrent("Cv5b", "potential_undamped", m["Cv5b"], T5b, Phi5b, undamped_only=True,
                         expected=_CV5B_EXPECTED, tag="potential current 5b, reference form",
                         note="reference density and flux differ by a factor of beta"),
        ConservedCurrent("Cv5b-corrected", "potential_undamped", m["Cv5b-corrected"],
                         W ** 2 * vx / b, Phi5b, undamped_only=True,
                         tag="potential current 5b with the density rescaled by beta"),
        ConservedCurrent("Cv-R3", "potential_undamped", None, _v(1, 1) / J, vtt / J,
                         undamped_only=True, on_shell=True,
                         tag="current of the variational symmetry Pv6(3)"),
    ]


_CV5B_EXPECTED = "fail"

# multipliers of the reference potential currents, determined by the engine
# (sign convention: D_t T + D_x Phi = Q * ((1-2 beta v_t) v_tt - alpha v_ttt - v_xx))
_POTENTIAL_MULTIPLIERS: Dict[str, Optional[JetExpr]] = {}


def _init_potential_multipliers():
    vt, vx = _v(1, 0), _v(0, 1)
    _POTENTIAL_MULTIPLIERS.update({
        "Cv1": JetExpr(-1),
        "Cv2": -x,
        "Cv2-corrected": -x,
        "Cv3": _qv3(),
        "Cv4": _qv4(),
        "Cv5a": vt - 1 / (2 * b),
        "Cv5b": -vx / b,
        "Cv5b-corrected": -vx,
    })


_init_potential_multipliers()


@functools.lru_cache(maxsize=None)
def _all_currents() -> Tuple[ConservedCurrent, ...]:
    fc = [instantiate_f_current(f, cid) for cid, f in _f_examples()]
    return tuple(_westervelt_currents() + _potential_currents() + fc)


def _f_examples() -> List[Tuple[str, JetExpr]]:
    vt, vx = _v(1, 0), _v(0, 1)
    return [
        ("Cf-vx", vx),
        ("Cf-vt", vt - 1 / (2 * b)),
        ("Cf-quadratic", vx ** 2 + vt ** 2 - Fraction(2, 3) * b * vt ** 3),
    ]


def get_currents(eq: str) -> List[ConservedCurrent]:
    """Catalogued currents for ``eq`` (see :func:`get_symmetries` for aliases)."""
    q = _canonical_eq(eq)
    return [c for c in _all_currents() if _includes(c.equation, c.undamped_only, q)]


def get_current(cid: str) -> ConservedCurrent:
    for c in _all_currents():
        if c.id == cid:
            return c
    raise KeyError(cid)


# ---------------------------------------------------------------------------
# f-family of potential currents


class FCurrentError(ValueError):
    """``f`` is not a polynomial solution of ``f_{v_t v_t} = (1-2 beta v_t) f_{v_x v_x}``."""


def f_equation_residual(f: JetExpr) -> JetExpr:
    VT, VX = JetVar("v", 1, 0), JetVar("v", 0, 1)
    return partial(partial(f, VT), VT) - (1 - 2 * b * _v(1, 0)) * partial(partial(f, VX), VX)


def instantiate_f_current(f: JetExpr, cid: str = "Cf") -> ConservedCurrent:
    """Current of the multiplier ``f(v_t, v_x)``.

    Density and flux follow the antiderivative formulas
    ``T = int (1-2 beta v_t) f dv_t`` and
    ``Phi = int (1-2 beta v_t) v_t f_{v_x} dv_t - v_t int (1-2 beta v_t) f_{v_x} dv_t``
    with zero integration constants. Those formulas leave out terms that
    depend on ``v_x`` alone; they are restored here by integrating the
    remaining mismatch, which is a function of ``v_x`` times ``v_xx``.

    Raises
    ------
    FCurrentError
        If ``f`` depends on other jet variables, is not polynomial, or fails
        the linear equation.
    """
    f = JetExpr._coerce(f)
    VT, VX = JetVar("v", 1, 0), JetVar("v", 0, 1)
    allowed = {VT, VX, Symbol("beta")}
    if not f.is_polynomial() or any(v not in allowed for v in f.variables()):
        if not f.is_polynomial() and all(v == Symbol("beta") for f_, _ in f._den
                                         for v in _vars_of(f_)) and all(
                v in allowed for v in f.variables()):
            pass
        else:
            raise FCurrentError("f must be a polynomial in v_t and v_x")
    if not f_equation_residual(f).is_zero():
        raise FCurrentError("f does not satisfy f_vtvt = (1 - 2 beta v_t) f_vxvx")
    vt = _v(1, 0)
    w = 1 - 2 * b * vt
    fx = partial(f, VX)
    T = t_antiderivative(w * f, VT)
    Phi = t_antiderivative(w * vt * fx, VT) - vt * t_antiderivative(w * fx, VT)
    # mismatch r1 v_tt + r2 v_tx + r3 v_xx with r_i = r_i(v_t, v_x); absorb it
    # with tau(v_t, v_x) in T and phi(v_t, v_x) in Phi:
    #   tau_vt = -r1,  phi_vx = -r3,  tau_vx + phi_vt = -r2
    G = equation("potential_undamped").residual
    rem = total_derivative(T, "t") + total_derivative(Phi, "x") - f * G
    if not rem.is_zero():
        r1, r2, r3 = (partial(rem, JetVar("v", *o)) for o in ((2, 0), (1, 1), (0, 2)))
        tau = -t_antiderivative(r1, VT)
        phi = -t_antiderivative(r3, VX)
        m = -r2 - partial(tau, VX) - partial(phi, VT)
        m0 = substitute(m, {VT: 0})
        tau = tau + t_antiderivative(m0, VX)
        phi = phi + t_antiderivative(m - m0, VT)
        T, Phi = T + tau, Phi + phi
    return ConservedCurrent(cid, "potential_undamped", f, T, Phi, undamped_only=True,
                            tag="current of the multiplier f(v_t, v_x)")


def _vars_of(poly):
    from .jetspace import REGISTRY
    return [REGISTRY.items[i] for i in poly.var_indices()]


# ---------------------------------------------------------------------------
# recursion operators and contact map


def x_translation() -> RecursionOp:
    J = jacobian_potential()
    return RecursionOp("x_translation", _v(1, 1), -_v(2, 0), J,
                       tag="inherited from x* translation")


def dilation() -> RecursionOp:
    J = jacobian_potential()
    vt, vx = _v(1, 0), _v(0, 1)
    cx = 3 * vx * _v(2, 0) + (1 / b - 2 * vt) * _v(1, 1)
    ct = -(3 * vx * _v(1, 1) + (1 / b - 2 * vt) * _v(0, 2))
    return RecursionOp("dilation", ct, cx, J, tag="inherited from the dilation of x*, t*")


def westervelt_lifted() -> RecursionOp:
    """Coefficients of the Westervelt-level operator; it acts on a potential
    preimage (see :func:`westervelt.verify.apply_recursion`)."""
    return RecursionOp("westervelt_lifted", _p(0, 1), -_p(1, 0), jacobian_westervelt(),
                       dependent="p", tag="prolongation to Westervelt variables")


def get_recursion_ops() -> Dict[str, RecursionOp]:
    return {r.id: r for r in (x_translation(), dilation(), westervelt_lifted())}


def contact_map() -> ContactMap:
    ts, xs = sym("ts"), sym("xs")
    vs = lambda i, j: jet("vs", i, j)
    forward = (_v(1, 0), _v(0, 1), _v() - t * _v(1, 0) - x * _v(0, 1), -t, -x)
    inverse = (-vs(1, 0), -vs(0, 1), vs(0, 0) - ts * vs(1, 0) - xs * vs(0, 1), ts, xs)
    return ContactMap(
        forward, inverse,
        physical_vars=(Symbol("t"), Symbol("x"), JetVar("v"), JetVar("v", 1, 0), JetVar("v", 0, 1)),
        star_vars=(Symbol("ts"), Symbol("xs"), JetVar("vs"), JetVar("vs", 1, 0), JetVar("vs", 0, 1)),
    )


# ---------------------------------------------------------------------------
# conserved-integral densities


def _integrands() -> Dict[str, JetExpr]:
    p, pt, px = _p(), _p(1, 0), _p(0, 1)
    vx, v = _v(0, 1), _v()
    P = p - 1 / (2 * b)
    cur = {c.id: c for c in _westervelt_currents()}
    return {
        "C1": cur["C1"].T, "C2": cur["C2"].T, "C3": cur["C3"].T, "C4": cur["C4"].T,
        # the regular part of C6: the tail is D_x of a density singular at p_t = 0
        "C5": cur["C5"].T, "C6": cur["C6-regular"].T,
        "E": HALF * vx ** 2 - Fraction(2, 3) * b * P ** 3,
        "M": P ** 2 * vx,
        "K": (t * (HALF * vx ** 2 - Fraction(2, 3) * b * P ** 3)
              - Fraction(1, 5) * b * (7 * x * vx - v + t / (2 * b)) * P ** 2),
        "H": (HALF * t * (vx ** 2 - 4 * b * P ** 3)
              - Fraction(3, 5) * b * (4 * x * vx - v + t / (2 * b)) * P ** 2
              + Fraction(16, 25) * b ** 2 * x * vx ** 4) * vx,
    }


@functools.lru_cache(maxsize=None)
def _integrand_table() -> Tuple[Tuple[str, JetExpr], ...]:
    d = _integrands()
    for cid in ("Cv3", "Cv4"):
        T = get_current(cid).T
        d["T" + cid[1:].replace("v", "v")] = _to_p(T)
    return tuple(d.items())


def _to_p(e: JetExpr) -> JetExpr:
    return substitute(e, {JetVar("v", 1, 0): _p()})


INTEGRANDS = ("C1", "C2", "C3", "C4", "C5", "C6", "E", "M", "K", "H", "Tv3", "Tv4")


def integrand(mid: str) -> JetExpr:
    """Density of a monitored integral in the variables ``t, x, p, p_t, p_tt,
    p_x, p_tx, v, v_x`` (``v_t`` replaced by ``p``)."""
    return dict(_integrand_table())[mid]


# ---------------------------------------------------------------------------
# exact solution families (parameter metadata)


def exact_families() -> Dict[str, Dict[str, object]]:
    return {
        "deg2": {"params": ("a1", "a2", "a3"), "psi_star": "a3*ts*xs + a2*ts + a1*xs"},
        "deg3": {"params": ("a1", "branch"), "psi_star": "a1*(ts^3 - 3/2*(ts^2 + xs^2)/beta)"},
        "deg4a": {"params": ("a1",),
                  "psi_star": "a1*(2*beta*ts^3 - 3*ts^2 - xs^2)*xs/(2*beta)"},
        "deg4b": {"params": ("a2",),
                  "psi_star": "a2*(2*beta^2*ts^4 - 6*beta*ts*xs^2 - 3*(ts^2 + xs^2))/(2*beta^2)"},
        "similarity": {"params": ("branch",),
                       "psi_star": "((3*beta*xs)^2 + (2*beta*ts - 1)^3)^(-1/6)"},
    }


# ---------------------------------------------------------------------------
# dump


def dump() -> List[Dict[str, object]]:
    """All entries as plain dictionaries in the debug syntax."""
    out: List[Dict[str, object]] = []
    for s in _all_symmetries():
        out.append({"kind": "symmetry", "id": s.id, "equation": s.equation,
                    "expr": format_expr(s.expr), "order": s.order, "local": s.local,
                    "undamped_only": s.undamped_only, "tag": s.tag})
    for m in _all_multipliers():
        out.append({"kind": "multiplier", "id": m.id, "equation": m.equation,
                    "expr": format_expr(m.expr), "undamped_only": m.undamped_only,
                    "tag": m.tag})
    for c in _all_currents():
        out.append({"kind": "current", "id": c.id, "equation": c.equation,
                    "Q": None if c.Q is None else format_expr(c.Q),
                    "T": format_expr(c.T), "Phi": format_expr(c.Phi),
                    "undamped_only": c.undamped_only, "on_shell": c.on_shell,
                    "expected": c.expected, "tag": c.tag})
    for r in get_recursion_ops().values():
        out.append({"kind": "recursion", "id": r.id, "coeff_t": format_expr(r.num_coeff_t),
                    "coeff_x": format_expr(r.num_coeff_x), "denom": format_expr(r.denom),
                    "tag": r.tag})
    cm = contact_map()
    out.append({"kind": "contact", "id": "linearizing_map",
                "forward": [format_expr(e) for e in cm.forward],
                "inverse": [format_expr(e) for e in cm.inverse],
                "tag": "contact transformation to the linear wave equation"})
    out.append({"kind": "lagrangian", "id": "L", "expr": format_expr(lagrangian()),
                "tag": "Lagrangian of the undamped potential equation"})
    for k in INTEGRANDS:
        out.append({"kind": "integrand", "id": k, "expr": format_expr(integrand(k)),
                    "tag": "conserved integral density"})
    for k, fam in exact_families().items():
        out.append({"kind": "exact_family", "id": k, **fam})
    return out

"""Exact verification procedures.

Every check returns a :class:`VerifyReport` whose ``witness`` is the
expression that must vanish. ``passed`` is ``witness.is_zero()``;
``expected`` records the verdict the check is supposed to produce, so that
negative results (non-variational symmetries, operators that are not
self-adjoint, reference formulas known to be wrong) are regression-tested as well.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from . import catalog
from .calculus import (
    EquationSpec, LinearDiffOp, equation, euler_operator, formal_adjoint, frechet_operator,
    partial, potential_to_westervelt, prolong_evolutionary, reduce_to_solution_manifold,
    rename_potential, total_derivative,
)
from .catalog import ConservedCurrent, RecursionOp
from .jetspace import JetExpr, JetVar, Symbol, jet, sym, substitute

__all__ = [
    "VerifyReport", "check_symmetry", "check_multiplier", "check_current",
    "check_adjoint_symmetry", "multiplier_from_density", "check_variational",
    "check_westervelt_variational", "apply_recursion", "check_inverse_noether",
    "check_euler_lagrange", "check_hamiltonian", "check_projection_relations",
    "check_contact_roundtrip", "check_linearization", "check_similarity_ode",
    "check_recursion_images", "check_hierarchy", "check_jacobian_forms",
    "check_conserved_density", "run_suite", "SUITES", "PairMismatch",
]

b = sym("beta")


@dataclass
class VerifyReport:
    """Outcome of one exact check."""

    check_id: str
    passed: bool
    witness: JetExpr
    elapsed: float = 0.0
    expected: str = "pass"
    detail: str = ""
    parts: Tuple["VerifyReport", ...] = ()

    @property
    def ok(self) -> bool:
        """True when the verdict matches the expectation."""
        return self.passed == (self.expected == "pass")

    @property
    def residual_terms(self) -> int:
        return self.witness.term_count()

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        flag = "" if self.ok else "  [UNEXPECTED]"
        exp = "" if self.expected == "pass" else " (expected FAIL)"
        extra = f"  {self.detail}" if self.detail else ""
        return f"{self.check_id:<40} {verdict}{exp} terms={self.residual_terms}{flag}{extra}"


def _report(check_id: str, witness: JetExpr, t0: float, expected: str = "pass",
            detail: str = "", parts: Sequence[VerifyReport] = ()) -> VerifyReport:
    return VerifyReport(check_id, witness.is_zero(), witness, time.perf_counter() - t0,
                        expected, detail, tuple(parts))


def _combine(check_id: str, parts: Sequence[VerifyReport], t0: float) -> VerifyReport:
    """Aggregate sub-checks; passes when every part meets its expectation."""
    bad = [p for p in parts if not p.ok]
    witness = bad[0].witness if bad and not bad[0].witness.is_zero() else JetExpr(1 if bad else 0)
    return VerifyReport(check_id, not bad, witness, time.perf_counter() - t0,
                        "pass", "; ".join(p.check_id for p in bad), tuple(parts))


# ---------------------------------------------------------------------------
# symmetries, multipliers, currents


def check_symmetry(P: JetExpr, eq: Union[str, EquationSpec], check_id: str = "symmetry",
                   expected: str = "pass") -> VerifyReport:
    """Linearised equation applied to ``P``, reduced on-shell."""
    t0 = time.perf_counter()
    eq = equation(eq)
    det = prolong_evolutionary(JetExpr._coerce(P), eq.residual, eq.dependent)
    return _report(check_id, reduce_to_solution_manifold(det, eq), t0, expected)


def check_multiplier(Q: JetExpr, eq: Union[str, EquationSpec], check_id: str = "multiplier",
                     expected: str = "pass") -> VerifyReport:
    """Off-shell identity ``E_w(residual * Q) = 0``."""
    t0 = time.perf_counter()
    eq = equation(eq)
    return _report(check_id, euler_operator(eq.residual * Q, eq.dependent), t0, expected)


def check_current(c: ConservedCurrent, expected: Optional[str] = None) -> VerifyReport:
    """``D_t T + D_x Phi - Q * residual`` off-shell, or the divergence reduced
    on-shell for entries without a multiplier form."""
    t0 = time.perf_counter()
    eq = equation(c.equation)
    dt = "t" if eq.dependent in ("p", "v") else "ts"
    dx = "x" if dt == "t" else "xs"
    div = total_derivative(c.T, dt) + total_derivative(c.Phi, dx)
    if c.on_shell or c.Q is None:
        w = reduce_to_solution_manifold(div, eq)
    else:
        w = div - c.Q * eq.residual
    return _report(f"current {c.id}", w, t0, expected or c.expected)


def _x_euler(e: JetExpr, dep: str, a: int) -> JetExpr:
    # x-only variational derivative with respect to the slice w_{a,.}
    dx = "x" if dep in ("p", "v") else "xs"
    bmax = max((v.x_order for v in e.jet_vars(dep) if v.t_order == a), default=-1)
    out = JetExpr(0)
    for k in range(bmax, -1, -1):
        d = partial(e, JetVar(dep, a, k))
        out = d - total_derivative(out, dx) if not out.is_zero() else d
    return out


def check_conserved_density(T: JetExpr, eq: Union[str, EquationSpec],
                            check_id: str = "density", expected: str = "pass") -> VerifyReport:
    """Whether ``T`` is the density of some conservation law of ``eq``.

    ``D_t T`` is reduced on-shell, leaving a function of the Cauchy data
    ``w_{a,b}`` with ``a`` below the leading time order.  It is an
    ``x``-divergence exactly when every ``x``-variational derivative with
    respect to those slices vanishes.
    """
    t0 = time.perf_counter()
    eq = equation(eq)
    dt = "t" if eq.dependent in ("p", "v") else "ts"
    R = reduce_to_solution_manifold(total_derivative(JetExpr._coerce(T), dt), eq)
    parts = []
    for a in range(eq.leading.t_order):
        w = _x_euler(R, eq.dependent, a)
        parts.append(_report(f"{check_id} slice {a}", w, t0, expected))
    bad = [p for p in parts if not p.witness.is_zero()]
    witness = bad[0].witness if bad else JetExpr(0)
    return VerifyReport(check_id, not bad, witness, time.perf_counter() - t0, expected,
                        parts=tuple(parts))


def check_adjoint_symmetry(Q: JetExpr, eq: Union[str, EquationSpec],
                           check_id: str = "adjoint-symmetry", expected: str = "pass") -> VerifyReport:
    """Adjoint of the linearised operator applied to ``Q``, reduced on-shell."""
    t0 = time.perf_counter()
    eq = equation(eq)
    adj = formal_adjoint(frechet_operator(eq.residual, eq.dependent))
    return _report(check_id, reduce_to_solution_manifold(adj.apply(JetExpr._coerce(Q)), eq),
                   t0, expected)


def multiplier_from_density(T: JetExpr, eq: Union[str, EquationSpec]) -> JetExpr:
    """``E_{w_t}(T)`` for equations solved for ``w_tt``, ``E_{w_tt}(T)`` for
    those solved for ``w_ttt``.

    The result equals the multiplier times the coefficient of the leading
    derivative in the residual; see :func:`density_multiplier_factor`.
    """
    eq = equation(eq)
    offset = (eq.leading.t_order - 1, 0)
    return euler_operator(T, eq.dependent, offset)


def density_multiplier_factor(T: JetExpr, Q: JetExpr, eq: Union[str, EquationSpec]) -> JetExpr:
    """Ratio ``multiplier_from_density(T) / Q``, canonicalised."""
    return (multiplier_from_density(T, eq) / Q).cancel()


# ---------------------------------------------------------------------------
# variational structure

def _g_potential() -> JetExpr:
    return equation("potential_undamped").residual


def check_variational(P: JetExpr, check_id: str = "variational",
                      expected: str = "pass") -> VerifyReport:
    """``E_v(G^v * P) = 0`` off-shell, ``G^v`` the undamped potential residual."""
    t0 = time.perf_counter()
    return _report(check_id, euler_operator(_g_potential() * P, "v"), t0, expected)


class PairMismatch(ValueError):
    """``D_t P^v`` does not reproduce ``P``."""


def _same_on_westervelt(a: JetExpr, bb: JetExpr) -> bool:
    d = a - bb
    return d.is_zero() or reduce_to_solution_manifold(d, "westervelt_undamped").is_zero()


def check_westervelt_variational(P: JetExpr, Pv: JetExpr, check_id: str = "westervelt-variational",
                                 expected: str = "pass") -> VerifyReport:
    """Variational test of a Westervelt characteristic through a potential
    preimage ``Pv`` with ``D_t Pv = P``.

    Raises
    ------
    PairMismatch
        If the preimage does not project onto ``P``.
    """
    t0 = time.perf_counter()
    image = rename_potential(total_derivative(Pv, "t"))
    if not _same_on_westervelt(image, P):
        raise PairMismatch(f"{check_id}: D_t Pv does not match P")
    rep = check_variational(Pv, check_id, expected)
    rep.elapsed = time.perf_counter() - t0
    return rep


def check_euler_lagrange() -> VerifyReport:
    t0 = time.perf_counter()
    return _report("euler-lagrange E_v(L) = G", euler_operator(catalog.lagrangian(), "v")
                   - _g_potential(), t0)


def check_hamiltonian() -> VerifyReport:
    """Legendre transform, energy density, and canonical equations."""
    t0 = time.perf_counter()
    vt, vx, vxx = jet("v", 1, 0), jet("v", 0, 1), jet("v", 0, 2)
    p = jet("p")
    L = catalog.lagrangian()
    mom = catalog.legendre_momentum()
    parts = []
    s = time.perf_counter()
    parts.append(_report("hamiltonian (i) momentum", mom - (-vt + b * vt ** 2), s))
    s = time.perf_counter()
    legendre = mom * vt - L
    parts.append(_report("hamiltonian (ii) legendre",
                         legendre + (Fraction(1, 2) * (vx ** 2 + vt ** 2)
                                     - Fraction(2, 3) * b * vt ** 3), s))
    s = time.perf_counter()
    h = catalog.hamiltonian_density()
    parts.append(_report("hamiltonian (iii) dE/dp", euler_operator(h, "p") - (p - 2 * b * p ** 2), s))
    s = time.perf_counter()
    e = catalog.integrand("E")
    tv1 = substitute(catalog.get_current("Cv1").T, {Symbol("alpha"): 0, JetVar("v", 1, 0): p})
    diff = h - e + tv1 / (2 * b)
    nonconst = diff - _jet_constant_part(diff)
    parts.append(_report("hamiltonian (iv) h = E-density - Tv1/(2 beta) + const", nonconst, s,
                         detail=f"constant {_jet_constant_part(diff)}"))
    s = time.perf_counter()
    # v_t = p,  mom_t = -v_xx  reproduce G; dE/dmom = -p via dp(mom) = 2 beta p - 1
    mom_t = total_derivative(mom, "t")
    eom = (mom_t + vxx) + _g_potential()
    mom_p = substitute(mom, {JetVar("v", 1, 0): p})
    dE_dmom = euler_operator(h, "p") / partial(mom_p, JetVar("p"))
    dE_dv = euler_operator(Fraction(1, 2) * vx ** 2, "v")
    parts.append(_report("hamiltonian (v) equations of motion",
                         eom + (dE_dmom + p) ** 2 + (dE_dv + vxx) ** 2, s))
    return _combine("hamiltonian", parts, t0)


def _jet_constant_part(e: JetExpr) -> JetExpr:
    """Part of ``e`` free of jet variables and coordinates (parameters only)."""
    jet_idx = [v for v in e.variables() if isinstance(v, JetVar) or v.name in ("t", "x")]
    if not jet_idx:
        return e
    return substitute(e, {v: 0 for v in jet_idx})


# ---------------------------------------------------------------------------
# recursion


def apply_recursion(R: RecursionOp, P: JetExpr, k: int = 1) -> JetExpr:
    """``R^k(P)``.

    For the Westervelt-level operator ``P`` is a potential preimage and
    the result is ``D_t (R^v)^k P`` in Westervelt variables, reduced on-shell.
    """
    if k < 1:
        raise ValueError("k must be positive")
    if R.id == "westervelt_lifted":
        base = catalog.x_translation()
        out = JetExpr._coerce(P)
        for _ in range(k):
            out = base.apply(out).cancel()
        return potential_to_westervelt(total_derivative(out, "t")).cancel()
    out = JetExpr._coerce(P)
    for _ in range(k):
        out = R.apply(out).cancel()
    return out


def check_recursion_images() -> List[VerifyReport]:
    """The six images of the x-translation operator on the point symmetries
    plus the third image of the dilation symmetry."""
    R = catalog.x_translation()
    S = {s.id: s.expr for s in catalog.get_symmetries("potential_undamped")}
    J = catalog.jacobian_potential()
    vt, vx, vtt, vtx = jet("v", 1, 0), jet("v", 0, 1), jet("v", 2, 0), jet("v", 1, 1)
    x = sym("x")
    expected = [
        ("Pv1", JetExpr(0)),
        ("Pv2", -vtt / J),
        ("Pv3", JetExpr(0)),
        ("Pv4", JetExpr(1)),
        ("Pv5", 3 * b * x + ((1 - 2 * b * vt) * vtx + 3 * b * vx * vtt) / J),
        ("Pv6", x),
    ]
    out = []
    for sid, target in expected:
        t0 = time.perf_counter()
        out.append(_report(f"recursion R^v({sid})", apply_recursion(R, S[sid]) - target, t0))
    t0 = time.perf_counter()
    out.append(_report("recursion (R^v)^3(Pv6) = Pv6(3)",
                       apply_recursion(R, S["Pv6"], 3) - S["Pv6(3)"], t0))
    t0 = time.perf_counter()
    out.append(_report("recursion R^v(Pv5') = Pv5'(1)",
                       apply_recursion(R, S["Pv5'"]) - S["Pv5'(1)"], t0))
    t0 = time.perf_counter()
    out.append(_report("recursion short sequence R^v(R^v(Pv4))",
                       apply_recursion(R, S["Pv4"], 2), t0))
    t0 = time.perf_counter()
    out.append(_report("recursion Pv5' = Pv5 - 3 beta Pv6",
                       S["Pv5'"] - (S["Pv5"] - 3 * b * S["Pv6"]), t0))
    return out


def check_hierarchy() -> List[VerifyReport]:
    """Westervelt images of the potential hierarchy."""
    S = {s.id: s.expr for s in catalog._all_symmetries()}
    out = []
    for pot, wes in (("Pv6(2)", "P(1)"), ("Pv6(3)", "P(2)'")):
        t0 = time.perf_counter()
        img = potential_to_westervelt(total_derivative(S[pot], "t"))
        out.append(_report(f"hierarchy D_t {pot} = {wes}",
                           reduce_to_solution_manifold(img - S[wes], "westervelt_undamped"), t0))
    t0 = time.perf_counter()
    lifted = apply_recursion(catalog.westervelt_lifted(), S["Pv6"], 2)
    out.append(_report("hierarchy lifted R^2 from Pv6 = P(1)",
                       reduce_to_solution_manifold(lifted - S["P(1)"], "westervelt_undamped"), t0))
    # Q5 is the t-antiderivative of Pv6(3) up to the factor -2
    t0 = time.perf_counter()
    Q5 = catalog.get_multiplier("Q5").expr
    w = potential_to_westervelt(S["Pv6(3)"]) + Fraction(1, 2) * total_derivative(Q5, "t")
    out.append(_report("hierarchy D_t Q5 = -2 Pv6(3)",
                       reduce_to_solution_manifold(w, "westervelt_undamped"), t0))
    return out


def check_inverse_noether(Q: JetExpr, expected: str = "symmetry",
                          check_id: str = "inverse-noether") -> VerifyReport:
    """``P = -D_t^2 Q``; ``trivial`` requires ``P`` to vanish on-shell,
    ``symmetry`` requires ``P`` to pass :func:`check_symmetry` on the
    undamped equation with ``P`` nonzero."""
    t0 = time.perf_counter()
    P = -total_derivative(total_derivative(JetExpr._coerce(Q), "t"), "t")
    Pred = reduce_to_solution_manifold(P, "westervelt_undamped")
    if expected == "trivial":
        return _report(check_id, Pred, t0, detail="trivial")
    if expected != "symmetry":
        raise ValueError("expected must be 'trivial' or 'symmetry'")
    rep = check_symmetry(P, "westervelt_undamped", check_id)
    if Pred.is_zero():
        rep = VerifyReport(check_id, False, JetExpr(1), rep.elapsed, detail="image is trivial")
    rep.elapsed = time.perf_counter() - t0
    return rep


# ---------------------------------------------------------------------------
# projections, contact map, linearisation


def check_projection_relations() -> VerifyReport:
    t0 = time.perf_counter()
    S = {s.id: s.expr for s in catalog._all_symmetries()}
    M = {m.id: m.expr for m in catalog._all_multipliers()}
    parts = []
    for pv, pw in (("Pv3", "P1"), ("Pv4", "P2"), ("Pv5", "P3"), ("Pv6", "P4")):
        s = time.perf_counter()
        parts.append(_report(f"projection D_t {pv} = {pw}",
                             rename_potential(total_derivative(S[pv], "t")) - S[pw], s))
    for qv, qw in (("Qv1", "Q3"), ("Qv2", "Q4")):
        s = time.perf_counter()
        img = -total_derivative(M[qw], "t")
        if (img - M[qv]).is_zero():
            parts.append(_report(f"projection -D_t {qw} = {qv}", img - M[qv], s, detail="sign +1"))
        else:
            parts.append(_report(f"projection -D_t {qw} = {qv} up to sign", img + M[qv], s,
                                 detail="sign -1"))
    return _combine("projection relations", parts, t0)


def _star_to_physical_binds():
    cm = catalog.contact_map()
    return dict(zip(cm.star_vars, cm.forward))


def _physical_to_star_binds():
    cm = catalog.contact_map()
    return dict(zip(cm.physical_vars, cm.inverse))


def check_contact_roundtrip() -> VerifyReport:
    t0 = time.perf_counter()
    cm = catalog.contact_map()
    parts = []
    names = ("t*", "x*", "v*", "v*_t*", "v*_x*")
    inv_names = ("t", "x", "v", "v_t", "v_x")
    to_star = _physical_to_star_binds()
    to_phys = _star_to_physical_binds()
    for name, comp, var in zip(names, cm.forward, cm.star_vars):
        s = time.perf_counter()
        parts.append(_report(f"contact forward∘inverse {name}",
                             substitute(comp, to_star) - JetExpr(_var_poly(var)), s))
    for name, comp, var in zip(inv_names, cm.inverse, cm.physical_vars):
        s = time.perf_counter()
        parts.append(_report(f"contact inverse∘forward {name}",
                             substitute(comp, to_phys) - JetExpr(_var_poly(var)), s))
    return _combine("contact round trip", parts, t0)


def _var_poly(var):
    from .jetspace import Poly
    return Poly.var(var)


def check_linearization() -> VerifyReport:
    t0 = time.perf_counter()
    parts = []
    s = time.perf_counter()
    feq = equation("f_equation").residual
    binds = {JetVar("v", 1, 0): sym("ts"), JetVar("v", 0, 1): sym("xs")}
    for fv in feq.jet_vars("f"):
        binds[fv] = jet("vs", fv.t_order, fv.x_order)
    parts.append(_report("linearization (i) f-equation is the linear wave equation",
                         substitute(feq, binds) - equation("linear_wave").residual, s))
    s = time.perf_counter()
    Lw = frechet_operator(equation("linear_wave").residual, "vs")
    parts.append(_adjoint_report("linearization (ii) linear wave operator self-adjoint", Lw, s))
    s = time.perf_counter()
    Lp = frechet_operator(equation("potential_undamped").residual, "v")
    parts.append(_adjoint_report("linearization (iii) potential operator self-adjoint", Lp, s))
    s = time.perf_counter()
    Ld = frechet_operator(equation("westervelt_damped").residual, "p")
    parts.append(_adjoint_report("linearization (iv) damped Westervelt operator self-adjoint",
                                 Ld, s, expected="fail"))
    # second-order part of the contact map: Hessian of v* is minus the inverse
    # Hessian of v, so the linear residual equals G / |J|
    s = time.perf_counter()
    J = catalog.jacobian_potential()
    hess = {JetVar("vs", 2, 0): -jet("v", 0, 2) / J, JetVar("vs", 0, 2): -jet("v", 2, 0) / J,
            JetVar("vs", 1, 1): jet("v", 1, 1) / J, Symbol("ts"): jet("v", 1, 0)}
    lin = substitute(equation("linear_wave").residual, hess)
    parts.append(_report("linearization (v) linear residual = G/|J|", lin - _g_potential() / J, s))
    return _combine("linearization", parts, t0)


def _adjoint_report(cid: str, L: LinearDiffOp, t0: float, expected: str = "pass") -> VerifyReport:
    A = formal_adjoint(L)
    keys = set(A.coeffs) | set(L.coeffs)
    w = JetExpr(0)
    zero = JetExpr(0)
    # fold coefficient differences into one witness with distinct weights
    for n, k in enumerate(sorted(keys)):
        d = A.coeffs.get(k, zero) - L.coeffs.get(k, zero)
        if not d.is_zero():
            w = w + d * sym("zeta") ** (n + 1)
    return _report(cid, w, t0, expected)


def check_similarity_ode() -> VerifyReport:
    """Power-law solutions of the similarity ODE and the integrating-factor
    system, by logarithmic-derivative identities."""
    t0 = time.perf_counter()
    z, s, q = sym("zeta"), sym("s"), sym("q")
    A = b ** 2 * z ** 2 + Fraction(1, 9)
    parts = []
    for sv, qk in ((0, -1), (0, -3), (1, -4), (1, -6)):
        st = time.perf_counter()
        qq = qk * b
        e = Fraction(1 + 2 * qk, 6)
        Y = (3 * b * z) ** 2 + 1
        L1 = sv / z + e * 18 * b ** 2 * z / Y if sv else e * 18 * b ** 2 * z / Y
        L2 = partial(L1, "zeta") + L1 ** 2
        ode = A * L2 + Fraction(1, 3) * b * (5 * b - 2 * qq) * z * L1 - Fraction(1, 9) * qq * (2 * b - qq)
        parts.append(_report(f"similarity V for s={sv}, q={qk}beta (exponent {e})", ode, st))
    # integrating factor zeta^s: E_V(zeta^s ODE) = zeta^(s-2) (c0 + c2 zeta^2)
    st = time.perf_counter()
    Bc = Fraction(1, 3) * b * (5 * b - 2 * q) * z
    Cc = -Fraction(1, 9) * q * (2 * b - q)

    def d(k, g):
        return (s - k) * g + z * partial(g, "zeta")

    E = d(1, d(0, A)) - z * d(0, Bc) + z ** 2 * Cc
    target = Fraction(1, 9) * s * (s - 1) + Fraction(1, 9) * z ** 2 * (3 * b * s + 3 * b + q) * (3 * b * s + b + q)
    parts.append(_report("similarity integrating-factor system", E - target, st))
    for sv, qk in ((0, -1), (0, -3), (1, -4), (1, -6)):
        st = time.perf_counter()
        parts.append(_report(f"similarity integrating factor s={sv}, q={qk}beta",
                             substitute(E, {Symbol("s"): sv, Symbol("q"): qk * b}), st))
    st = time.perf_counter()
    parts.append(_report("similarity integrating factor s=1, q=-beta rejected",
                         substitute(E, {Symbol("s"): 1, Symbol("q"): -b}), st, expected="fail"))
    return _combine("similarity ODE", parts, t0)


def check_jacobian_forms() -> VerifyReport:
    """``v_tt v_xx - v_tx^2`` equals ``(1-2 beta p) p_t^2 - p_x^2`` on solutions."""
    t0 = time.perf_counter()
    w = potential_to_westervelt(catalog.jacobian_potential()) - catalog.jacobian_westervelt()
    return _report("|J| potential form = Westervelt form", w, t0)


# ---------------------------------------------------------------------------
# suites


def _suite_westervelt() -> List[VerifyReport]:
    out = []
    for s in catalog.get_symmetries("westervelt_undamped"):
        eqn = "westervelt_damped" if not s.undamped_only else "westervelt_undamped"
        out.append(check_symmetry(s.expr, eqn, f"symmetry {s.id} [{eqn}]"))
    p = jet("p")
    out.append(check_symmetry(JetExpr(1), "westervelt_undamped", "symmetry shift 1 rejected",
                              expected="fail"))
    for m in catalog.get_multipliers("westervelt_undamped"):
        eqn = "westervelt_damped" if not m.undamped_only else "westervelt_undamped"
        out.append(check_multiplier(m.expr, eqn, f"multiplier {m.id} [{eqn}]"))
        out.append(check_adjoint_symmetry(m.expr, eqn, f"adjoint-symmetry {m.id} [{eqn}]"))
    out.append(check_multiplier(catalog.get_multiplier("Q5").expr, "westervelt_damped",
                                "multiplier Q5 [westervelt_damped] rejected", expected="fail"))
    out.append(check_multiplier(p, "westervelt_damped", "multiplier p rejected", expected="fail"))
    out.append(check_adjoint_symmetry(jet("p", 1, 0), "westervelt_damped",
                                      "adjoint-symmetry p_t rejected", expected="fail"))
    for c in catalog.get_currents("westervelt_undamped"):
        out.append(check_current(c))
    for sid in ("Q1", "Q2", "Q3", "Q4"):
        out.append(check_inverse_noether(catalog.get_multiplier(sid).expr, "trivial",
                                         f"inverse-noether {sid} trivial"))
    Q5 = catalog.get_multiplier("Q5").expr
    out.append(check_inverse_noether(Q5, "symmetry", "inverse-noether Q5 symmetry"))
    out.append(check_inverse_noether(-Q5, "symmetry", "inverse-noether -Q5 symmetry"))
    return out


def _suite_potential() -> List[VerifyReport]:
    out = []
    for s in catalog.get_symmetries("potential_undamped"):
        eqn = "potential_damped" if s.equation == "potential_damped" else "potential_undamped"
        out.append(check_symmetry(s.expr, eqn, f"symmetry {s.id} [{eqn}]"))
    for m in catalog.get_multipliers("potential_undamped"):
        eqn = "potential_damped" if m.equation == "potential_damped" else "potential_undamped"
        out.append(check_multiplier(m.expr, eqn, f"multiplier {m.id} [{eqn}]"))
    for c in catalog.get_currents("potential_undamped"):
        out.append(check_current(c))
    out.append(check_jacobian_forms())
    out.append(check_projection_relations())
    vt = jet("v", 1, 0)
    for mid in ("E", "M", "K", "H"):
        T = substitute(catalog.integrand(mid), {JetVar("p"): vt})
        out.append(check_conserved_density(T, "potential_undamped", f"density {mid}",
                                           expected="fail" if mid == "H" else "pass"))
    t0 = time.perf_counter()
    out.append(_report("density K = -Tv3/5",
                       catalog.integrand("K") + catalog.integrand("Tv3") / 5, t0))
    return out


def _suite_recursion() -> List[VerifyReport]:
    return check_recursion_images() + check_hierarchy()


def westervelt_variational_pairs() -> List[Tuple[str, JetExpr, JetExpr, str]]:
    """(label, P, preimage, expected verdict) for point symmetries."""
    S = {s.id: s.expr for s in catalog._all_symmetries()}
    return [
        ("P1", S["P1"], S["Pv3"], "pass"),
        ("P2", S["P2"], S["Pv4"], "pass"),
        ("P3", S["P3"], S["Pv5"], "fail"),
        ("P4", S["P4"], S["Pv6"], "fail"),
        ("(2/beta)P3 + 3P4", 2 / b * S["P3"] + 3 * S["P4"], 2 / b * S["Pv5"] + 3 * S["Pv6"], "fail"),
        ("(2/beta)P3 + P4", 2 / b * S["P3"] + S["P4"], 2 / b * S["Pv5"] + S["Pv6"], "pass"),
    ]


def _suite_variational() -> List[VerifyReport]:
    S = {s.id: s.expr for s in catalog._all_symmetries()}
    M = {m.id: m.expr for m in catalog._all_multipliers()}
    out = []
    for sid in ("Pv6(3)",):
        out.append(check_variational(S[sid], f"variational {sid}"))
    for sid in ("Pv6(2)", "Pv5'(1)", "Pv5'(2)"):
        out.append(check_variational(S[sid], f"variational {sid}", expected="fail"))
    for mid in ("Qv1", "Qv2", "Qv3", "Qv4", "Qv5a", "Qv5b"):
        out.append(check_variational(M[mid], f"variational {mid}"))
    out.append(check_variational(S["Pv6"] + 2 / b * S["Pv5"], "variational Pv6 + (2/beta)Pv5"))
    for label, P, Pv, exp in westervelt_variational_pairs():
        out.append(check_westervelt_variational(P, Pv, f"westervelt-variational {label}", exp))
    return out


def _suite_mapping() -> List[VerifyReport]:
    return [check_contact_roundtrip(), check_linearization(), check_similarity_ode()]


def _suite_hamiltonian() -> List[VerifyReport]:
    return [check_euler_lagrange(), check_hamiltonian()]


SUITES: Dict[str, Callable[[], List[VerifyReport]]] = {
    "westervelt": _suite_westervelt,
    "potential": _suite_potential,
    "recursion": _suite_recursion,
    "variational": _suite_variational,
    "mapping": _suite_mapping,
    "hamiltonian": _suite_hamiltonian,
}


def run_suite(name: str = "all") -> List[VerifyReport]:
    """Run one suite (or all of them) in a fixed order.

    Raises
    ------
    KeyError
        Unknown suite name.
    """
    if name == "all":
        out: List[VerifyReport] = []
        for key in SUITES:
            out.extend(SUITES[key]())
        return out
    return SUITES[name]()

"""Total derivatives, Euler operators, reduction and adjoints."""
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from westervelt.calculus import (
    Dt, Dx, LinearDiffOp, equation, euler_operator, formal_adjoint, frechet_operator,
    partial, prolong_evolutionary, reduce_to_solution_manifold, t_antiderivative,
)
from westervelt.jetspace import (
    JetVar, OrderCapError, as_expr, is_zero, jet, order_cap, substitute, sym,
)

a, b, t, x = sym("alpha"), sym("beta"), sym("t"), sym("x")
p, pt, px, ptt, pxx, pttt = (jet("p"), jet("p", 1, 0), jet("p", 0, 1), jet("p", 2, 0),
                             jet("p", 0, 2), jet("p", 3, 0))
vt, vx, vtt, vxx = jet("v", 1, 0), jet("v", 0, 1), jet("v", 2, 0), jet("v", 0, 2)

_ATOMS = [p, pt, px, ptt, t, x, b]


@st.composite
def polys(draw):
    out = 0
    for _ in range(draw(st.integers(1, 3))):
        mono = draw(st.integers(-3, 3))
        for _ in range(draw(st.integers(0, 3))):
            mono = mono * draw(st.sampled_from(_ATOMS))
        out = out + mono
    return as_expr(out)


# -- total derivative ---------------------------------------------------------

def test_total_derivative_examples():
    assert Dt(p) == pt
    T1 = (1 - 2 * b * p) * pt - a * ptt
    assert Dt(T1) == (1 - 2 * b * p) * ptt - 2 * b * pt ** 2 - a * pttt
    assert is_zero(Dx(1 / p) + px / p ** 2)


def test_explicit_coordinates():
    assert Dt(t * p) == p + t * pt
    assert Dx(x ** 2) == 2 * x


def test_order_cap_overflow():
    with order_cap(3):
        with pytest.raises(OrderCapError):
            Dt(pttt)


@settings(max_examples=40, deadline=None)
@given(polys(), polys())
def test_total_derivatives_commute(f, g):
    e = f / (1 + g * g) if not (1 + g * g).is_zero() else f
    assert is_zero(Dt(Dx(e)) - Dx(Dt(e)))


# -- Euler operator -------------------------------------------------------------

def test_euler_of_lagrangian():
    L = Fraction(1, 2) * vx ** 2 - Fraction(1, 2) * vt ** 2 + b / 3 * vt ** 3
    assert is_zero(euler_operator(L, "v") - ((1 - 2 * b * vt) * vtt - vxx))


def test_euler_examples():
    assert euler_operator(Dt(pt * px), "p").is_zero()
    assert euler_operator(p ** 2, "p") == 2 * p


@settings(max_examples=40, deadline=None)
@given(polys(), polys())
def test_euler_annihilates_divergences(F, G):
    assert euler_operator(Dt(F) + Dx(G), "p").is_zero()


# -- prolongation ------------------------------------------------------------------

def test_prolong_constant_generator():
    assert prolong_evolutionary(jet("p") * 0 + 1, ptt, "p").is_zero()


def test_time_translation_acts_as_minus_dt():
    res = equation("westervelt_damped").residual
    assert is_zero(prolong_evolutionary(-pt, res, "p") + Dt(res))


def test_prolong_potential_residual():
    P = vt * x + sym("t") * vx ** 2
    res = equation("potential_undamped").residual
    expected = Dt((1 - 2 * b * vt) * Dt(P)) - Dx(Dx(P))
    assert is_zero(prolong_evolutionary(P, res, "v") - expected)


# -- reduction ------------------------------------------------------------------------

def test_reduce_examples():
    assert is_zero(reduce_to_solution_manifold(ptt, "westervelt_undamped")
                   - (2 * b * pt ** 2 + pxx) / (1 - 2 * b * p))
    assert is_zero(reduce_to_solution_manifold(vtt, "potential_undamped") - vxx / (1 - 2 * b * vt))
    assert is_zero(reduce_to_solution_manifold(pttt, "westervelt_damped")
                   - ((1 - 2 * b * p) * ptt - 2 * b * pt ** 2 - pxx) / a)


def test_reduce_removes_leading_derivatives():
    e = jet("p", 3, 1) * pt + jet("p", 2, 2)
    r = reduce_to_solution_manifold(e, "westervelt_undamped")
    assert all(v.t_order < 2 for v in r.jet_vars("p"))


@settings(max_examples=20, deadline=None)
@given(polys())
def test_reduce_is_idempotent(e):
    r = reduce_to_solution_manifold(e, "westervelt_undamped")
    assert is_zero(reduce_to_solution_manifold(r, "westervelt_undamped") - r)


def test_rewrite_solves_residual():
    for name in ("westervelt_damped", "westervelt_undamped", "potential_damped",
                 "potential_undamped", "linear_wave", "f_equation"):
        eq = equation(name)
        assert substitute(eq.residual, {eq.leading: eq.rewrite}).is_zero(), name


def test_unknown_equation():
    with pytest.raises((KeyError, ValueError)):
        equation("burgers")


# -- adjoint ------------------------------------------------------------------------------

def test_adjoint_examples():
    assert formal_adjoint(LinearDiffOp({(2, 0): 1})) == LinearDiffOp({(2, 0): 1})
    assert formal_adjoint(LinearDiffOp({(3, 0): 1})) == LinearDiffOp({(3, 0): -1})
    L = frechet_operator(equation("potential_undamped").residual, "v")
    assert formal_adjoint(L) == L


def test_damped_frechet_not_self_adjoint():
    L = frechet_operator(equation("westervelt_damped").residual, "p")
    assert formal_adjoint(L) != L


def test_duplicate_orders_rejected():
    with pytest.raises(ValueError):
        LinearDiffOp([(p, 1, 0), (pt, 1, 0)])


@settings(max_examples=25, deadline=None)
@given(polys(), polys(), st.integers(0, 2), st.integers(0, 2))
def test_adjoint_is_an_involution(c1, c2, i, j):
    L = LinearDiffOp({(i, j): c1, (1, 1): c2} if (i, j) != (1, 1) else {(i, j): c1})
    assert formal_adjoint(formal_adjoint(L)) == L


# -- antiderivative ---------------------------------------------------------------------------

def test_antiderivative_examples():
    got = t_antiderivative((1 - 2 * b * vt) * vx, JetVar("v", 1, 0))
    assert got == vt * vx - b * vt ** 2 * vx
    assert t_antiderivative(vt * 0, JetVar("v", 1, 0)).is_zero()


def test_antiderivative_recovers_integrand():
    e = (1 - 2 * b * vt) * (vt - 1 / (2 * b))
    F = t_antiderivative(e, JetVar("v", 1, 0))
    assert is_zero(partial(F, JetVar("v", 1, 0)) - e)
    # no constant term in v_t
    assert substitute(F, {JetVar("v", 1, 0): 0}).is_zero()


def test_antiderivative_rejects_rational():
    with pytest.raises(ValueError):
        t_antiderivative(1 / vt, JetVar("v", 1, 0))

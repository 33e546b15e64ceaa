"""Catalogue contents and the f-parametrised current."""
import json
from fractions import Fraction

import pytest

from westervelt import catalog
from westervelt.calculus import (
    Dt, Dx, equation, euler_operator, partial, reduce_to_solution_manifold,
)
from westervelt.jetspace import JetVar, is_zero, jet, parse, sym, substitute
from westervelt.verify import check_current, check_jacobian_forms

b, t, x = sym("beta"), sym("t"), sym("x")
p, pt, px = jet("p"), jet("p", 1, 0), jet("p", 0, 1)
v, vt, vx = jet("v"), jet("v", 1, 0), jet("v", 0, 1)
HALF = Fraction(1, 2)


def _ids(entries):
    return [e.id for e in entries]


def test_westervelt_symmetries():
    S = {s.id: s for s in catalog.get_symmetries("westervelt")}
    assert S["P3"].expr == 1 - 2 * b * p - 2 * b * t * pt - 3 * b * x * px
    assert S["P4"].undamped_only
    assert not S["P1"].undamped_only
    assert _ids(catalog.get_symmetries("westervelt"))[:4] == ["P1", "P2", "P3", "P4"]


def test_damped_list_omits_undamped_entries():
    assert "P4" not in _ids(catalog.get_symmetries("westervelt_damped"))


def test_potential_symmetries():
    S = {s.id: s.expr for s in catalog.get_symmetries("potential_undamped")}
    assert S["Pv6"] == v - t * vt - x * vx
    assert S["Pv1"] == 1 and S["Pv2"] == x


def test_unknown_equation_name():
    with pytest.raises(KeyError):
        catalog.get_symmetries("kdv")
    with pytest.raises(KeyError):
        catalog.get_currents("kdv")


def test_current_entries():
    C = {c.id: c for c in catalog.get_currents("westervelt")}
    a = sym("alpha")
    c1 = catalog.get_current("C1")
    assert is_zero(c1.T - ((1 - 2 * b * p) * pt - a * jet("p", 2, 0)))
    assert c1.Phi == -px
    assert c1.Q == 1
    J = px ** 2 - (1 - 2 * b * p) * pt ** 2
    assert is_zero(C["C5"].T - px / J) and is_zero(C["C5"].Phi - pt / J)


def test_potential_current_5a():
    c = catalog.get_current("Cv5a")
    W = b * vt - HALF
    assert is_zero(c.T - (HALF * vx ** 2 - Fraction(2, 3) / b ** 2 * W ** 3))
    assert is_zero(c.Phi + (vt - 1 / (2 * b)) * vx)


def test_every_current_meets_its_expectation():
    for c in catalog._all_currents():
        assert check_current(c).ok, c.id


def test_reference_entries_that_fail_are_flagged():
    bad = {c.id for c in catalog._all_currents() if c.expected == "fail"}
    assert bad == {"Cv2", "Cv5b"}


def test_c6_tail_is_trivial():
    # the singular tail of T6 is D_x theta on solutions
    T6, Phi6 = catalog._t6_phi6()
    T6r, Phi6r = catalog._t6_phi6(tail=False)
    theta = catalog.c6_tail_potential()
    eq = "westervelt_undamped"
    assert reduce_to_solution_manifold(T6 - T6r - Dx(theta), eq).is_zero()
    assert reduce_to_solution_manifold(Phi6 - Phi6r + Dt(theta), eq).is_zero()


# -- f-current ------------------------------------------------------------------

@pytest.mark.parametrize("f", [
    vx,
    vt - 1 / (2 * b),
    vx ** 2 + vt ** 2 - Fraction(2, 3) * b * vt ** 3,
])
def test_instantiate_f_current(f):
    c = catalog.instantiate_f_current(f)
    assert check_current(c).passed


def test_f_vt_matches_5a_up_to_trivial_terms():
    c = catalog.instantiate_f_current(vt - 1 / (2 * b))
    ref = catalog.get_current("Cv5a")
    # same multiplier, so the densities differ by a trivial current at most
    assert is_zero(c.Q - ref.Q)
    d = c.T - ref.T
    assert euler_operator(d, "v").is_zero()


def test_f_vx_matches_corrected_5b():
    c = catalog.instantiate_f_current(vx)
    ref = catalog.get_current("Cv5b-corrected")
    # the stored 5b current carries the opposite multiplier sign
    assert is_zero(c.Q + ref.Q)
    assert euler_operator(c.T + ref.T, "v").is_zero()


def test_f_current_rejects_non_solution():
    with pytest.raises(catalog.FCurrentError):
        catalog.instantiate_f_current(vx ** 2)


# -- Lagrangian and structure -----------------------------------------------------

def test_lagrangian():
    L = catalog.lagrangian()
    assert substitute(L, {JetVar("v", 1, 0): 0, JetVar("v", 0, 1): 0}).is_zero()
    assert partial(L, JetVar("v", 1, 0)) == -vt + b * vt ** 2
    assert is_zero(euler_operator(L, "v") - equation("potential_undamped").residual)


def test_jacobian_forms_agree_on_shell():
    assert check_jacobian_forms().passed


def test_recursion_ops_registered():
    ops = catalog.get_recursion_ops()
    assert set(ops) == {"x_translation", "dilation", "westervelt_lifted"}
    R = ops["x_translation"]
    with pytest.raises(ValueError):
        catalog.RecursionOp("bad", R.num_coeff_t, R.num_coeff_x, R.denom * 0)


def test_k_is_a_multiple_of_tv3():
    assert is_zero(catalog.integrand("K") + catalog.integrand("Tv3") / 5)


# -- dump -------------------------------------------------------------------------

def test_dump_is_json_and_parses_back():
    rows = catalog.dump()
    json.dumps(rows)
    kinds = {r["kind"] for r in rows}
    assert {"symmetry", "multiplier", "current"} <= kinds
    for r in rows:
        if r["kind"] == "symmetry":
            assert parse(r["expr"]) == catalog.get_symmetry(r["id"]).expr

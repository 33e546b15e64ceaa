"""Exact verification procedures."""
import pytest

from westervelt import catalog
from westervelt.calculus import reduce_to_solution_manifold
from westervelt.jetspace import JetExpr, is_zero, jet, sym
from westervelt.verify import (
    PairMismatch, SUITES, apply_recursion, check_adjoint_symmetry, check_contact_roundtrip,
    check_current, check_euler_lagrange, check_hamiltonian, check_inverse_noether,
    check_linearization, check_multiplier, check_projection_relations, check_similarity_ode,
    check_symmetry, check_variational, check_westervelt_variational, density_multiplier_factor,
    multiplier_from_density, run_suite, westervelt_variational_pairs,
)

a, b, x = sym("alpha"), sym("beta"), sym("x")
p, pt = jet("p"), jet("p", 1, 0)
vt, vx, vtt = jet("v", 1, 0), jet("v", 0, 1), jet("v", 2, 0)


def S(sid):
    return catalog.get_symmetry(sid).expr


def M(mid):
    return catalog.get_multiplier(mid).expr


# -- symmetries ------------------------------------------------------------------

def test_time_translation_is_a_damped_symmetry():
    assert check_symmetry(-pt, "westervelt_damped").passed


def test_shift_is_not_a_symmetry():
    rep = check_symmetry(JetExpr(1), "westervelt_undamped")
    assert not rep.passed
    ptt_red = reduce_to_solution_manifold(jet("p", 2, 0), "westervelt_undamped")
    assert is_zero(rep.witness + 2 * b * ptt_red)


def test_third_order_potential_symmetry():
    assert check_symmetry(S("Pv6(3)"), "potential_undamped").passed


@pytest.mark.parametrize("sid", ["P1", "P2", "P3"])
def test_perturbed_symmetry_fails(sid):
    assert not check_symmetry(S(sid) + p, "westervelt_damped").passed


def test_dilation_needs_alpha_zero():
    assert check_symmetry(S("P4"), "westervelt_undamped").passed
    assert not check_symmetry(S("P4"), "westervelt_damped").passed


# -- multipliers -------------------------------------------------------------------

def test_q5_multiplier():
    assert check_multiplier(M("Q5"), "westervelt_undamped").passed
    assert not check_multiplier(M("Q5"), "westervelt_damped").passed


def test_p_is_not_a_multiplier():
    assert not check_multiplier(p, "westervelt_damped").passed


def test_quadratic_potential_multiplier():
    assert check_multiplier(M("Qv4"), "potential_undamped").passed


def test_adjoint_symmetry_examples():
    assert check_adjoint_symmetry(x, "westervelt_damped").passed
    assert check_adjoint_symmetry(sym("t") * x, "westervelt_damped").passed
    assert not check_adjoint_symmetry(pt, "westervelt_damped").passed


# -- currents ------------------------------------------------------------------------

def test_current_1_and_perturbation():
    c = catalog.get_current("C1")
    assert check_current(c).passed
    bad = catalog.ConservedCurrent("C1+p", c.equation, c.Q, c.T, c.Phi + p)
    assert not check_current(bad).passed


def test_c6_on_shell():
    assert check_current(catalog.get_current("C6")).passed


def test_multiplier_from_density_factors():
    T1 = catalog.get_current("C1").T
    assert multiplier_from_density(T1, "westervelt_damped") == -a
    T5 = catalog.get_current("C5").T
    got = density_multiplier_factor(T5, M("Q5"), "westervelt_undamped")
    # the factor is the leading coefficient 1 - 2 beta p, up to the stored sign
    assert is_zero(got - (1 - 2 * b * p)) or is_zero(got + (1 - 2 * b * p))
    assert multiplier_from_density(p, "westervelt_undamped").is_zero()


# -- variational --------------------------------------------------------------------

def test_variational_classification():
    assert check_variational(S("Pv6(3)")).passed
    for sid in ("Pv6(2)", "Pv5'(1)", "Pv5'(2)"):
        assert not check_variational(S(sid)).passed, sid


def test_westervelt_variational_pairs():
    verdicts = {label: check_westervelt_variational(P, Pv).passed
                for label, P, Pv, _ in westervelt_variational_pairs()}
    assert verdicts["P1"] and verdicts["P2"]
    assert not verdicts["P3"] and not verdicts["P4"]
    assert verdicts["(2/beta)P3 + P4"]
    assert not verdicts["(2/beta)P3 + 3P4"]


def test_pair_mismatch():
    with pytest.raises(PairMismatch):
        check_westervelt_variational(S("P1"), S("Pv4"))


# -- recursion --------------------------------------------------------------------------

def test_recursion_examples():
    R = catalog.x_translation()
    J = catalog.jacobian_potential()
    assert apply_recursion(R, -vx) == 1
    assert is_zero(apply_recursion(R, x) + vtt / J)
    assert is_zero(apply_recursion(R, S("Pv6"), 3) - S("Pv6(3)"))


def test_recursion_short_sequences():
    R = catalog.x_translation()
    assert apply_recursion(R, S("Pv3")).is_zero()
    assert apply_recursion(R, apply_recursion(R, S("Pv4"))).is_zero()


def test_recursion_rejects_k_zero():
    with pytest.raises(ValueError):
        apply_recursion(catalog.x_translation(), x, 0)


# -- inverse Noether ----------------------------------------------------------------------

@pytest.mark.parametrize("mid", ["Q1", "Q2", "Q3", "Q4"])
def test_low_order_multipliers_give_trivial_symmetries(mid):
    assert check_inverse_noether(M(mid), "trivial").passed


def test_q5_gives_third_order_symmetry():
    assert check_inverse_noether(M("Q5")).passed
    assert check_inverse_noether(-M("Q5")).passed


# -- structure --------------------------------------------------------------------------

def test_structure_checks():
    assert check_euler_lagrange().passed
    assert check_hamiltonian().passed
    assert check_projection_relations().passed
    assert check_contact_roundtrip().passed


def test_linearization_parts():
    rep = check_linearization()
    assert rep.passed
    verdicts = {p.check_id[:17]: p.passed for p in rep.parts}
    assert verdicts["linearization (iv"] is False


def test_similarity_ode():
    rep = check_similarity_ode()
    assert rep.passed
    assert any(p.expected == "fail" and not p.passed for p in rep.parts)


# -- suites -------------------------------------------------------------------------------

def test_suite_names():
    assert set(SUITES) == {"westervelt", "potential", "recursion", "variational", "mapping",
                           "hamiltonian"}
    with pytest.raises(KeyError):
        run_suite("nope")


@pytest.mark.parametrize("name", ["mapping", "hamiltonian", "recursion", "variational"])
def test_small_suites_meet_expectations(name):
    reports = run_suite(name)
    assert reports and all(r.ok for r in reports)


def test_report_line_format():
    rep = check_symmetry(JetExpr(1), "westervelt_undamped", "shift", expected="fail")
    assert rep.ok
    assert "FAIL (expected FAIL)" in rep.line()
    assert "UNEXPECTED" not in rep.line()

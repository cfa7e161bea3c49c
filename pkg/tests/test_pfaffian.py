"""Linear Pfaffian systems: structure split, absorption, involutivity."""

import pytest

from cartaneq import (
    Chart,
    DifferentialForm,
    DomainError,
    Expression,
    NonEmptyEssentialTorsion,
    NotLinear,
)
from cartaneq.pfaffian import (
    PfaffianSystem,
    absorb_torsion,
    cartan_characters,
    coframe_structure_equations,
    contact_system,
    is_linear,
    prolong,
    structure_equations,
)

from conftest import seeded
from oracles import (
    brute_force_sigma,
    check_absorption_against_brute_force,
    numeric_structure,
)


def _basis(ch, name):
    return DifferentialForm.basis(ch, name)


def test_structure_split_on_the_contact_example():
    ch = Chart(coords=("x", "y", "p"))
    p = Expression.var(ch, "p")
    sys1 = PfaffianSystem(
        ch,
        [_basis(ch, "y") - p * _basis(ch, "x")],
        [_basis(ch, "x")],
        [_basis(ch, "p")],
    )
    eqs = structure_equations(sys1)
    # d omega = dx ^ dp: one tableau entry, A stores the negated
    # theta ^ pi coefficient so the sign convention here reads -1
    assert eqs.a == 1 and eqs.n == 1 and eqs.r == 1
    assert eqs.tableau_entry(0, 0, 0) == -1
    assert not eqs.T
    assert is_linear(sys1)


def test_closed_omega_has_no_structure():
    ch = Chart(coords=("x", "y", "z"))
    sys1 = PfaffianSystem(
        ch,
        [_basis(ch, "x") + _basis(ch, "y")],
        [_basis(ch, "y")],
        [_basis(ch, "z")],
    )
    eqs = structure_equations(sys1)
    assert not eqs.A and not eqs.T


def test_nonlinear_system_detected():
    ch = Chart(coords=("x1", "x2", "x3", "x4"))
    x3 = Expression.var(ch, "x3")
    sys1 = PfaffianSystem(
        ch,
        [_basis(ch, "x1") - x3 * _basis(ch, "x4")],
        [_basis(ch, "x2")],
        [_basis(ch, "x3"), _basis(ch, "x4")],
    )
    assert not is_linear(sys1)
    with pytest.raises(NotLinear):
        structure_equations(sys1)


def test_no_pi_block_is_trivially_linear():
    ch = Chart(coords=("x", "y", "p"))
    p = Expression.var(ch, "p")
    sys1 = PfaffianSystem(
        ch,
        [_basis(ch, "y") - p * _basis(ch, "x")],
        [_basis(ch, "x"), _basis(ch, "p")],
        [],
    )
    assert is_linear(sys1)


def test_block_count_must_match_chart():
    ch = Chart(coords=("x", "y", "p"))
    with pytest.raises(DomainError):
        PfaffianSystem(ch, [_basis(ch, "y")], [_basis(ch, "x")], [])


def test_exact_producer_rejects_unexpected_terms():
    ch = Chart(coords=("x", "y", "z"))
    x = Expression.var(ch, "x")
    theta = [_basis(ch, "z") - x * _basis(ch, "y")]
    pi = [_basis(ch, "x"), _basis(ch, "y")]
    with pytest.raises(NotLinear):
        coframe_structure_equations(ch, theta, pi)


def test_contact_systems_are_involutive():
    # (n, m, q) -> characters, free lambda, dim of the prolongation
    table = {
        (1, 1, 1): ((1,), 1, 1),
        (1, 1, 2): ((1,), 1, 1),
        (2, 1, 1): ((1, 1), 3, 3),
        (2, 1, 2): ((2, 1), 4, 4),
        (1, 2, 1): ((2,), 2, 2),
        (2, 2, 1): ((2, 2), 6, 6),
        (3, 1, 1): ((1, 1, 1), 6, 6),
    }
    for nmq, (chars, free, dim1) in table.items():
        eqs = structure_equations(contact_system(*nmq))
        inv = cartan_characters(eqs)
        assert inv.characters == chars
        assert inv.free_lambda == free
        assert inv.dim_prolongation == dim1
        assert inv.involutive
        assert absorb_torsion(eqs).essential == []


def test_contact_system_validates_arguments():
    for bad in ((0, 1, 1), (1, 0, 1), (1, 1, 0)):
        with pytest.raises(DomainError):
            contact_system(*bad)


def test_absorption_with_zero_tableau_keeps_all_torsion():
    rng = seeded(601)
    ch = Chart(coords=("z",))
    eqs = numeric_structure(rng, a=2, n=3, r=0)
    sol = absorb_torsion(eqs)
    want = set()
    for v in eqs.T.values():
        e = -v if v.num.lead_coeff < 0 else v
        want.add(e)
    assert set(sol.essential) == want
    assert sol.particular == {} and sol.free == []


def test_absorption_with_zero_torsion_is_trivial():
    rng = seeded(602)
    eqs = numeric_structure(rng, a=2, n=2, r=2)
    eqs.T.clear()
    sol = absorb_torsion(eqs)
    assert sol.essential == [] and sol.absorbed
    assert all(v.is_zero for v in sol.particular.values())


def test_absorption_matches_brute_force():
    rng = seeded(603)
    for _ in range(30):
        a = rng.randint(1, 3)
        n = rng.randint(1, 3)
        r = rng.randint(0, 3)
        eqs = numeric_structure(rng, a, n, r)
        check_absorption_against_brute_force(eqs, absorb_torsion(eqs))


def test_characters_match_random_flag_maximization():
    rng = seeded(604)
    for _ in range(10):
        eqs = numeric_structure(rng, a=2, n=2, r=2)
        inv = cartan_characters(eqs)
        assert inv.sigma == brute_force_sigma(eqs, rng, tries=100)


def test_zero_tableau_is_frobenius():
    rng = seeded(605)
    eqs = numeric_structure(rng, a=2, n=3, r=0)
    inv = cartan_characters(eqs)
    assert inv.characters == (0, 0, 0)
    assert inv.involutive and inv.dim_prolongation == 0


def test_prolonged_contact_system_is_the_next_jet():
    before = contact_system(1, 1, 1)
    after = prolong(before)
    target = contact_system(1, 1, 2)
    assert after.chart.dim == before.chart.dim + 1
    ea, et = structure_equations(after), structure_equations(target)
    assert (ea.a, ea.n, ea.r) == (et.a, et.n, et.r)
    assert sorted(ea.A) == sorted(et.A)
    # charts differ (lam1 vs u11) so compare entry values, not Expressions
    assert all(
        ea.A[k].const_value() == et.A[k].const_value() for k in ea.A
    )
    assert not ea.T and not et.T
    ia, it = cartan_characters(ea), cartan_characters(et)
    assert ia.characters == it.characters and ia.involutive


def test_prolong_without_free_lambda_keeps_the_chart():
    ch = Chart(coords=("x", "u"))
    sys1 = PfaffianSystem(ch, [_basis(ch, "u")], [_basis(ch, "x")], [])
    out = prolong(sys1)
    assert out.chart.dim == 2
    assert len(out.omega) == 1 and len(out.pi) == 0


def test_prolong_refuses_essential_torsion():
    ch = Chart(coords=("x", "y", "z"))
    z = Expression.var(ch, "z")
    sys1 = PfaffianSystem(
        ch,
        [_basis(ch, "y") - z * _basis(ch, "x")],
        [_basis(ch, "x"), _basis(ch, "z")],
        [],
    )
    with pytest.raises(NonEmptyEssentialTorsion):
        prolong(sys1)


def test_noninvolutive_pair_system():
    # two copies of the contact equation sharing one fiber direction:
    # dy_i = z dx_i has no second order freedom left
    ch = Chart(coords=("x1", "x2", "y1", "y2", "z"))
    z = Expression.var(ch, "z")
    omega = [
        _basis(ch, "y1") - z * _basis(ch, "x1"),
        _basis(ch, "y2") - z * _basis(ch, "x2"),
    ]
    theta = [_basis(ch, "x1"), _basis(ch, "x2")]
    pi = [_basis(ch, "z")]
    eqs = structure_equations(PfaffianSystem(ch, omega, theta, pi))
    sol = absorb_torsion(eqs)
    assert sol.essential == []
    inv = cartan_characters(eqs)
    assert inv.characters == (1, 0)
    assert inv.dim_prolongation == 0 and inv.bound == 1
    assert not inv.involutive

"""Third order contact prolongation and its expression swell."""

import pytest

from cartaneq import (
    ArgumentEscape,
    Chart,
    ChartMismatch,
    DomainError,
    VanishingJacobian,
    contact_prolongation_ode3,
    ode3_chart,
)
from cartaneq.parser import parse_expression, render_text

CH = ode3_chart()

# canonical numerator size of the fully opaque prolongation; regression
# value frozen from the first run
RBAR_MONOMIALS = 510


def E(text):
    return parse_expression(text, CH)


def test_identity_transformation():
    res = contact_prolongation_ode3(E("x"), E("y"))
    assert res.pbar == E("p")
    assert res.qbar == E("q")
    assert res.rbar == E("f")
    assert res.monomials == (1, 1, 1)


def test_shear_transformation():
    res = contact_prolongation_ode3(E("x"), E("y + x^2"))
    assert res.pbar == E("p + 2*x")
    assert res.qbar == E("q + 2")
    assert res.rbar == E("f")


def test_legendre_transformation():
    res = contact_prolongation_ode3(E("p"), E("x*p - y"))
    assert res.pbar == E("x")
    assert res.qbar == E("1/q")
    assert render_text(res.rbar) == "-f/q^3"


def test_opaque_swell_regression():
    res = contact_prolongation_ode3()
    assert res.monomials[0] == 3
    assert res.monomials[1] == 44
    assert res.monomials[2] >= 100
    assert res.monomials[2] == RBAR_MONOMIALS


def test_opaque_result_is_cached_and_deterministic():
    a = contact_prolongation_ode3()
    b = contact_prolongation_ode3()
    assert a is b
    assert render_text(a.pbar) == render_text(b.pbar)


def test_input_validation():
    with pytest.raises(DomainError):
        contact_prolongation_ode3(E("x"), None)
    with pytest.raises(VanishingJacobian):
        contact_prolongation_ode3(E("1"), E("y"))
    with pytest.raises(ArgumentEscape):
        contact_prolongation_ode3(E("q"), E("y"))
    other = Chart(coords=("x", "y", "p", "q"))
    with pytest.raises(ChartMismatch):
        contact_prolongation_ode3(
            parse_expression("x", other), parse_expression("y", other)
        )

"""Flatness tests for ODE systems and a class of PDE systems.

Both tests evaluate closed-form obstruction lists; an input is equivalent
to the flat model exactly when every residual vanishes identically.
"""

from __future__ import annotations

from .chart import Chart
from .errors import ChartMismatch, DomainError, VanishingJacobian
from .expr import Expression, TotalDerivation
from .ode2 import FlatnessReport


def odesys_chart() -> Chart:
    """Chart for x_i'' = F_i(t, x, x'): velocities are named dx1, dx2."""
    return Chart(coords=("t", "x1", "x2", "dx1", "dx2"))


def pdesys_chart() -> Chart:
    """Chart for the second order PDE system in one unknown u(x1, x2)."""
    return Chart(coords=("x1", "x2", "u", "u1", "u2"))


def _require_chart(e: Expression, chart: Chart, name: str) -> Expression:
    if not isinstance(e, Expression):
        raise TypeError(f"{name} must be an Expression")
    if e.chart != chart:
        raise ChartMismatch(f"{name} must live on the {chart.coords} chart")
    return e


def check_flat_ode_system(F1: Expression, F2: Expression) -> FlatnessReport:
    """The eight obstructions for x'' = F(t, x, x') to linearize to x'' = 0.

    The first five require the right-hand sides to be at most cubic in the
    velocities with matched cubic coefficients; the last three are the
    closure conditions coupling velocity and position derivatives.
    """
    ch = odesys_chart()
    F1 = _require_chart(F1, ch, "F1")
    F2 = _require_chart(F2, ch, "F2")
    Dt = TotalDerivation(ch, {
        "t": 1,
        "x1": Expression.var(ch, "dx1"),
        "x2": Expression.var(ch, "dx2"),
        "dx1": F1,
        "dx2": F2,
    })

    def d(e, *names):
        for n in names:
            e = e.partial(n)
        return e

    r1 = d(F2, "dx1", "dx1", "dx1")
    r2 = d(F1, "dx2", "dx2", "dx2")
    r3 = d(F2, "dx2", "dx2", "dx2") - 3 * d(F1, "dx1", "dx2", "dx2")
    r4 = d(F1, "dx1", "dx1", "dx1") - 3 * d(F2, "dx1", "dx1", "dx2")
    r5 = d(F1, "dx1", "dx1", "dx2") - d(F2, "dx1", "dx2", "dx2")
    r6 = (
        2 * Dt(d(F1, "dx2"))
        - d(F1, "dx2") * d(F1, "dx1")
        - d(F2, "dx2") * d(F1, "dx2")
        - 4 * d(F1, "x2")
    )
    r7 = (
        -(d(F2, "dx2") ** 2)
        - 2 * Dt(d(F1, "dx1"))
        - 4 * d(F2, "x2")
        + 4 * d(F1, "x1")
        + 2 * Dt(d(F2, "dx2"))
        + d(F1, "dx1") ** 2
    )
    r8 = (
        -2 * Dt(d(F2, "dx1"))
        + d(F2, "dx2") * d(F2, "dx1")
        + 4 * d(F2, "x1")
        + d(F1, "dx1") * d(F2, "dx1")
    )
    return FlatnessReport("odesys", [r1, r2, r3, r4, r5, r6, r7, r8])


def flat_system_under_point_transform(phi1: Expression,
                                      phi2: Expression):
    """Right-hand sides satisfied by solutions of Y'' = 0 with Y = phi(x).

    Differentiating Y = phi(t, x) twice in t along solutions gives
    0 = J xdd + D0^2 phi with J the x-Jacobian of phi, so the transformed
    system is x'' = -J^inverse D0^2 phi.  An independent oracle for the
    flatness test: its output must pass all eight residuals.
    """
    ch = odesys_chart()
    phi1 = _require_chart(phi1, ch, "phi1")
    phi2 = _require_chart(phi2, ch, "phi2")
    for name, e in (("phi1", phi1), ("phi2", phi2)):
        bad = {ch.key_of("dx1"), ch.key_of("dx2")} & e.variables()
        if bad:
            raise DomainError(f"{name} must not depend on the velocities")

    D0 = TotalDerivation(ch, {
        "t": 1,
        "x1": Expression.var(ch, "dx1"),
        "x2": Expression.var(ch, "dx2"),
    })
    J = [
        [phi1.partial("x1"), phi1.partial("x2")],
        [phi2.partial("x1"), phi2.partial("x2")],
    ]
    detJ = J[0][0] * J[1][1] - J[0][1] * J[1][0]
    if detJ.is_zero:
        raise VanishingJacobian("the point transformation is singular")
    A1 = D0(D0(phi1))
    A2 = D0(D0(phi2))
    F1 = -(J[1][1] * A1 - J[0][1] * A2) / detJ
    F2 = -(J[0][0] * A2 - J[1][0] * A1) / detJ
    return F1, F2


def check_flat_pde_system(f11: Expression, f12: Expression,
                          f22: Expression) -> FlatnessReport:
    """Obstructions for u_ij = f_ij(x, u, u') to flatten to u_ij = 0."""
    ch = pdesys_chart()
    f11 = _require_chart(f11, ch, "f11")
    f12 = _require_chart(f12, ch, "f12")
    f22 = _require_chart(f22, ch, "f22")

    def d(e, *names):
        for n in names:
            e = e.partial(n)
        return e

    r1 = d(f11, "u2", "u2")
    r2 = d(f22, "u1", "u1")
    r3 = d(f12, "u2", "u2") - d(f11, "u1", "u2")
    r4 = d(f22, "u1", "u2")
    r5 = d(f11, "u1", "u1") - 4 * d(f12, "u1", "u2") + d(f22, "u2", "u2")
    return FlatnessReport("pdesys", [r1, r2, r3, r4, r5])

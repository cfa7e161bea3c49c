"""Equivalence of second order scalar ODEs y'' = f(x, y, y').

The pseudogroup under study is x -> x + C, y -> eta(x, y).  Lifting the
natural coframe of the equation by the structural group, absorbing torsion
and normalizing produces an invariant coframe on the a3-bundle whose
structure coefficients I1, I2, I3 are the fundamental invariants; their
coframe derivatives satisfy syzygies coming from d^2 = 0, and the whole
class contains y'' = 6y^2 + x (Painleve I) as normal form target.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .chart import Chart
from .errors import (
    ChartMismatch,
    DomainError,
    NotEquivalent,
    NotInClass,
    VanishingJacobian,
)
from .expr import Expression
from .forms import Coframe, DifferentialForm
from .pfaffian import (
    absorb_torsion,
    cartan_characters,
    coframe_structure_equations,
)


def ode2_chart() -> Chart:
    """The base chart (x, y, p) with p = y'."""
    return Chart(coords=("x", "y", "p"))


def ode2_bundle_chart() -> Chart:
    """Base chart plus the surviving group parameter and the opaque f."""
    return Chart(
        coords=("x", "y", "p"),
        params=("a3",),
        functions=[("f", ("x", "y", "p"))],
        nonvanishing=("a3",),
    )


class EquivalenceReport:
    """Invariant coframe data for one equation (or the symbolic class).

    Fields: ``theta`` the four invariant 1-forms, ``frame`` their dual
    derivations, ``I1``/``I2``/``I3`` the fundamental invariants,
    ``structure`` the final structure equations, ``essential`` the
    essential torsion of the invariant coframe, ``absorption`` the lifted
    coframe absorption step, and ``involution`` Cartan's test on the final
    coframe.
    """

    def __init__(self, chart, f, theta, frame, invariants, structure,
                 essential, absorption, involution):
        self.chart = chart
        self.f = f
        self.theta = theta
        self.frame = frame
        self.I1, self.I2, self.I3 = invariants
        self.structure = structure
        self.essential = essential
        self.absorption = absorption
        self.involution = involution

    @property
    def invariants(self):
        return (self.I1, self.I2, self.I3)

    def structure_lines(self, render):
        """The four structure equations as text via a renderer callback."""
        out = []
        for alpha in range(4):
            pieces = []
            for (a, j, k), c in sorted(self.structure.T.items()):
                if a != alpha or c.is_zero:
                    continue
                pieces.append((j, k, c))
            if not pieces:
                out.append(f"d(theta{alpha + 1}) = 0")
                continue
            body = " + ".join(
                f"({render(c)})*theta{j + 1}^theta{k + 1}" for j, k, c in pieces
            )
            out.append(f"d(theta{alpha + 1}) = {body}")
        return out


def _normalize_sign(e: Expression) -> Expression:
    return -e if e.num.lead_coeff < 0 else e


@lru_cache(maxsize=1)
def _symbolic_report() -> EquivalenceReport:
    ch = ode2_bundle_chart()
    half = Expression.const(ch, Fraction(1, 2))
    one = Expression.const(ch, 1)
    p = Expression.var(ch, "p")
    a3 = Expression.var(ch, "a3")
    f = Expression.var(ch, "f")
    fp = Expression.var(ch, "f_p")

    dx = DifferentialForm.basis(ch, "x")
    dy = DifferentialForm.basis(ch, "y")
    dp = DifferentialForm.basis(ch, "p")
    da3 = DifferentialForm.basis(ch, "a3")

    # natural coframe of the equation and its lift by the reduced group
    om1 = dp - f * dx
    om2 = dy - p * dx
    th1 = a3 * om1 - half * fp * a3 * om2
    th2 = a3 * om2
    th3 = dx
    pi = (one / a3) * da3

    lifted = coframe_structure_equations(ch, [th1, th2, th3], [pi])
    absorption = absorb_torsion(lifted)
    th4 = absorption.absorbed_pi_forms()[0]

    theta = [th1, th2, th3, th4]
    final = coframe_structure_equations(ch, theta, [])
    I1 = final.torsion_entry(0, 1, 2)
    I2 = final.torsion_entry(3, 0, 1)
    I3 = final.torsion_entry(3, 1, 2)

    frame = Coframe(ch, theta).dual_frame()
    essential = absorb_torsion(final).essential
    involution = cartan_characters(final)
    return EquivalenceReport(
        ch, None, theta, frame, (I1, I2, I3), final, essential,
        absorption, involution,
    )


def _coerce_rhs(f, chart: Chart) -> Expression:
    """Lift a concrete right-hand side onto the bundle chart."""
    if not isinstance(f, Expression):
        raise TypeError("expected an Expression for the right-hand side")
    if f.chart == chart:
        return f
    try:
        return f.rebase(chart)
    except ChartMismatch:
        raise DomainError(
            "the right-hand side must live on the (x, y, p) chart"
        ) from None


def run_equivalence_ode2(f: Expression | None = None,
                         max_prolong: int | None = None) -> EquivalenceReport:
    """Invariant coframe of y'' = f; symbolic f when none is given.

    The symbolic run is computed once and cached; a concrete right-hand
    side is substituted into it.  ``max_prolong`` is accepted for
    interface stability; this class terminates without prolongation.
    """
    if max_prolong is not None and max_prolong < 0:
        raise DomainError("max_prolong must be nonnegative")
    rep = _symbolic_report()
    if f is None:
        return rep
    ch = rep.chart
    fc = _coerce_rhs(f, ch)

    def se(e: Expression) -> Expression:
        return e.substitute("f", fc)

    def sform(form: DifferentialForm) -> DifferentialForm:
        return DifferentialForm(
            ch, form.degree, {i: se(c) for i, c in form.comps.items()}
        )

    from .forms import VectorField
    from .pfaffian import StructureEquations

    theta = [sform(t) for t in rep.theta]
    frame = [
        VectorField(ch, {i: se(c) for i, c in X.comps.items()})
        for X in rep.frame
    ]
    structure = StructureEquations(
        ch, rep.structure.a, rep.structure.n, rep.structure.r,
        {k: se(c) for k, c in rep.structure.A.items()},
        {k: se(c) for k, c in rep.structure.T.items()},
        [sform(t) for t in rep.structure.theta_forms],
        [sform(t) for t in rep.structure.pi_forms],
    )
    essential = []
    seen = set()
    for e in rep.essential:
        v = se(e)
        if v.is_zero:
            continue
        v = _normalize_sign(v)
        if v not in seen:
            seen.add(v)
            essential.append(v)
    return EquivalenceReport(
        ch, fc, theta, frame, tuple(se(i) for i in rep.invariants),
        structure, essential, rep.absorption, rep.involution,
    )


# ----------------------------------------------------------------------
# syzygies from the Poincare lemma


SYZYGY_PARAMS = ("I1", "I2", "I3") + tuple(
    f"X{i}I{m}" for m in (1, 2, 3) for i in (1, 2, 3, 4)
)


def syzygy_chart() -> Chart:
    """Abstract ring for relations among invariants and their derivatives.

    The coordinates stand in for the invariant coframe directions; the
    parameters are the invariants and their coframe derivatives, all
    treated as independent quantities until the relations cut them down.
    """
    return Chart(coords=("q1", "q2", "q3", "q4"), params=SYZYGY_PARAMS)


class SyzygyReport:
    def __init__(self, chart, relations):
        self.chart = chart
        self.relations = relations


def syzygies_ode2(f: Expression | None = None) -> SyzygyReport:
    """All relations d(d theta) = 0 forces on the structure coefficients.

    The structure coefficients are lifted to an abstract ring where the
    invariants and their coframe derivatives are independent symbols; the
    coefficients of the resulting 3-forms are the syzygies.
    """
    rep = run_equivalence_ode2(f)
    ach = syzygy_chart()
    avar = {name: Expression.var(ach, name) for name in SYZYGY_PARAMS}

    def lift(c: Expression) -> Expression:
        if c.is_const:
            return Expression.const(ach, c.const_value())
        for m, val in zip((1, 2, 3), rep.invariants):
            if c == val:
                return avar[f"I{m}"]
            if c == -val:
                return -avar[f"I{m}"]
        raise DomainError("structure coefficient is not spanned by the invariants")

    # lifted structure 2-forms S^a = sum c[a,j,k] dq_j ^ dq_k
    dq = [DifferentialForm.basis(ach, f"q{i}") for i in (1, 2, 3, 4)]
    S = []
    for alpha in range(4):
        s = DifferentialForm.zero(ach, 2)
        for (a, j, k), c in sorted(rep.structure.T.items()):
            if a != alpha:
                continue
            s = s + lift(c) * dq[j].wedge(dq[k])
        S.append(s)

    def dscalar(e: Expression) -> DifferentialForm:
        # invariants vary only through their coframe derivatives
        out = DifferentialForm.zero(ach, 1)
        for m in (1, 2, 3):
            de = e.partial(f"I{m}")
            if de.is_zero:
                continue
            for i in (1, 2, 3, 4):
                out = out + de * avar[f"X{i}I{m}"] * dq[i - 1]
        return out

    relations = []
    seen = set()
    for alpha in range(4):
        total = DifferentialForm.zero(ach, 3)
        for (j, k), c in sorted(
            (
                ((jk[1], jk[2]), cc)
                for jk, cc in rep.structure.T.items()
                if jk[0] == alpha
            ),
            key=lambda item: item[0],
        ):
            lc = lift(c)
            block = dq[j].wedge(dq[k])
            total = total + dscalar(lc).wedge(block)
            total = total + lc * (S[j].wedge(dq[k]) - dq[j].wedge(S[k]))
        for idx in sorted(total.comps):
            r = _normalize_sign(total.comps[idx])
            if r not in seen:
                seen.add(r)
                relations.append(r)
    return SyzygyReport(ach, relations)


def realize_syzygy(rel: Expression, rep: EquivalenceReport) -> Expression:
    """Evaluate an abstract relation in coordinates for a given report."""
    ach = rel.chart
    values = {}
    for m, inv in zip((1, 2, 3), rep.invariants):
        values[ach.key_of(f"I{m}")] = inv
        for i in (1, 2, 3, 4):
            values[ach.key_of(f"X{i}I{m}")] = rep.frame[i - 1](inv)

    def lookup(k):
        got = values.get(k)
        if got is None:
            raise DomainError("relation mentions a coframe direction")
        return got

    lookup.chart = rep.chart
    num = rel._map_poly(rel.num, lookup)
    den = rel._map_poly(rel.den, lookup)
    return num / den


# ----------------------------------------------------------------------
# flatness


class FlatnessReport:
    def __init__(self, problem: str, residuals):
        self.problem = problem
        self.residuals = list(residuals)

    @property
    def flat(self) -> bool:
        return all(r.is_zero for r in self.residuals)

    def failing(self):
        """1-based indices of the nonzero residuals."""
        return [i + 1 for i, r in enumerate(self.residuals) if not r.is_zero]


def check_flat_ode2(f: Expression) -> FlatnessReport:
    """Is y'' = f equivalent to y'' = 0 under the pseudogroup?

    The two residuals are f_ppp and the combination
    f_xp + f f_pp - 2 f_y - (1/2) f_p^2 + p f_yp, which equals 2 I1.
    """
    ch = ode2_chart()
    if f.chart != ch:
        try:
            f = f.project(ch)
        except ChartMismatch:
            raise DomainError(
                "the right-hand side must live on the (x, y, p) chart"
            ) from None
    half = Expression.const(f.chart, Fraction(1, 2))
    p = Expression.var(f.chart, "p")
    fp = f.partial("p")
    r1 = fp.partial("p").partial("p")
    r2 = (
        fp.partial("x") + f * fp.partial("p") - 2 * f.partial("y")
        - half * fp ** 2 + p * fp.partial("y")
    )
    return FlatnessReport("ode2", [r1, r2])


# ----------------------------------------------------------------------
# the Painleve I normal form


def painleve_map(f: Expression):
    """Recover (eta, C) with x -> x + C, y -> eta mapping y''=f to Painleve I.

    Requires I2 = I3 = 0 (otherwise NotInClass); the candidate is then
    eta = -I1/12 and C = -(1/24) I1^2 - (1/12) X3(X3(I1)) - x, and the
    four closure residuals -12 X_i(C) must vanish (otherwise NotEquivalent
    listing the failures; a flat equation fails the X3 relation with
    residual 12).
    """
    from .parser import render_text

    rep = run_equivalence_ode2(_coerce_rhs(f, ode2_bundle_chart()))
    ch = rep.chart
    if not rep.I2.is_zero:
        raise NotInClass("I2", render_text(rep.I2))
    if not rep.I3.is_zero:
        raise NotInClass("I3", render_text(rep.I3))

    X1, X2, X3, X4 = rep.frame
    I1 = rep.I1
    c24 = Expression.const(ch, Fraction(-1, 24))
    c12 = Expression.const(ch, Fraction(-1, 12))
    x = Expression.var(ch, "x")
    eta = c12 * I1
    C = c24 * I1 * I1 + c12 * X3(X3(I1)) - x

    failures = {}
    for name, X in zip(("X1", "X2", "X3", "X4"), rep.frame):
        res = Expression.const(ch, -12) * X(C)
        if not res.is_zero:
            failures[name] = render_text(res)
    if failures:
        raise NotEquivalent(failures)

    base = ode2_chart()
    eta = eta.project(base)
    C = C.project(base)
    if eta.partial("y").is_zero:
        raise VanishingJacobian("the recovered eta does not depend on y")
    return eta, C


def pullback_ode2(eta: Expression, C: Expression,
                  fbar: Expression) -> Expression:
    """Right-hand side of the equation pulled back along x+C, eta(x, y).

    All inputs live on the base chart: eta in (x, y) with eta_y not
    identically zero, C a constant, fbar in (x, y, p).
    """
    ch = ode2_chart()
    for name, e in (("eta", eta), ("C", C), ("fbar", fbar)):
        if not isinstance(e, Expression):
            raise TypeError(f"{name} must be an Expression")
        if e.chart != ch:
            raise ChartMismatch(f"{name} must live on the (x, y, p) chart")
    pkey = ch.key_of("p")
    if pkey in eta.variables():
        raise DomainError("eta may only depend on x and y")
    if not C.is_const:
        raise DomainError("C must be a constant")
    eta_y = eta.partial("y")
    if eta_y.is_zero:
        raise VanishingJacobian("eta must depend on y")

    x = Expression.var(ch, "x")
    p = Expression.var(ch, "p")
    eta_x = eta.partial("x")
    fb = fbar.subs_coords({"x": x + C, "y": eta, "p": eta_x + p * eta_y})
    eta_xx = eta_x.partial("x")
    eta_xy = eta_x.partial("y")
    eta_yy = eta_y.partial("y")
    return (fb - eta_xx - 2 * p * eta_xy - p * p * eta_yy) / eta_y

"""Linear Pfaffian systems and the equivalence-method machinery.

The block convention throughout: a system carries three lists of 1-forms,
``omega`` (the forms generating the differential ideal), ``theta`` (the
independence directions) and ``pi`` (the remaining fiber directions), and
together they must form a genuine coframe of the chart.

Structure equations of a linear system read

    d omega^a == A[a, r, i] pi^r ^ theta^i  +  T[a, j, k] theta^j ^ theta^k

modulo the ideal spanned by the omega themselves; a pi^pi term anywhere
means the system is not linear.  The same (A, T) container also describes
a lifted coframe with group forms, in which case nothing is discarded and
the omega block coincides with the theta block.
"""

from __future__ import annotations

from itertools import combinations, combinations_with_replacement

from .chart import Chart
from .errors import DomainError, NonEmptyEssentialTorsion, NotLinear
from .expr import Expression
from .forms import Coframe, DifferentialForm
from . import linsolve


class StructureEquations:
    """Torsion and tableau of a system of 1-forms.

    ``A`` maps (alpha, rho, i) to the pi^rho ^ theta^i coefficient of
    d omega^alpha and ``T`` maps (alpha, j, k), j < k, to the torsion
    coefficient; absent keys are zero.
    """

    def __init__(self, chart, a, n, r, A, T, theta_forms, pi_forms):
        self.chart = chart
        self.a = a
        self.n = n
        self.r = r
        self.A = A
        self.T = T
        self.theta_forms = list(theta_forms)
        self.pi_forms = list(pi_forms)

    def tableau_entry(self, alpha: int, rho: int, i: int) -> Expression:
        got = self.A.get((alpha, rho, i))
        return got if got is not None else Expression.const(self.chart, 0)

    def torsion_entry(self, alpha: int, j: int, k: int) -> Expression:
        zero = Expression.const(self.chart, 0)
        if j == k:
            return zero
        if j > k:
            e = self.T.get((alpha, k, j))
            return -e if e is not None else zero
        e = self.T.get((alpha, j, k))
        return e if e is not None else zero


class PfaffianSystem:
    """A coframe split into system, independence and fiber blocks."""

    def __init__(self, chart: Chart, omega, theta, pi):
        self.chart = chart
        self.omega = list(omega)
        self.theta = list(theta)
        self.pi = list(pi)
        total = len(self.omega) + len(self.theta) + len(self.pi)
        if total != chart.dim:
            raise DomainError(
                f"blocks have {total} forms but the chart has dimension {chart.dim}"
            )
        # validates full rank as a side effect
        self.coframe = Coframe(chart, self.omega + self.theta + self.pi)

    def structure_equations(self) -> StructureEquations:
        return structure_equations(self)

    def is_linear(self) -> bool:
        try:
            self.structure_equations()
        except NotLinear:
            return False
        return True


def _split_expansion(chart, expanded, a_count, n, r, offset, reduce_mod):
    """Sort the 2-form coefficients of one d(omega) into tableau and torsion.

    ``offset`` is the global index of the first theta; pi starts right
    after the theta block.  With ``reduce_mod`` set, pairs touching the
    leading ``offset`` indices are discarded instead of rejected.
    """
    A_row = {}
    T_row = {}
    for (u, v), c in expanded.items():
        u_theta = offset <= u < offset + n
        v_theta = offset <= v < offset + n
        u_pi = u >= offset + n
        v_pi = v >= offset + n
        if u_pi and v_pi:
            raise NotLinear("a pi ^ pi term appears in the structure equations")
        if u_theta and v_theta:
            T_row[(u - offset, v - offset)] = c
        elif u_theta and v_pi:
            # stored as theta^i ^ pi^rho; the tableau is the pi ^ theta side
            A_row[(v - offset - n, u - offset)] = -c
        elif not reduce_mod:
            raise NotLinear("unexpected term outside the theta/pi span")
        # anything with an omega factor is killed modulo the ideal
    return A_row, T_row


def structure_equations(system: PfaffianSystem) -> StructureEquations:
    """Tableau and torsion of d(omega) modulo the system ideal."""
    a = len(system.omega)
    n = len(system.theta)
    r = len(system.pi)
    A = {}
    T = {}
    for alpha, w in enumerate(system.omega):
        expanded = system.coframe.express(w.d())
        A_row, T_row = _split_expansion(
            system.chart, expanded, a, n, r, offset=a, reduce_mod=True
        )
        for (rho, i), c in A_row.items():
            A[(alpha, rho, i)] = c
        for (j, k), c in T_row.items():
            T[(alpha, j, k)] = c
    return StructureEquations(
        system.chart, a, n, r, A, T, system.theta, system.pi
    )


def coframe_structure_equations(chart, theta_forms, pi_forms=()):
    """Exact structure equations of a lifted coframe.

    Expands every d(theta) against the full coframe (theta then pi) and
    keeps everything; used for coframes with group directions, where no
    ideal reduction is allowed.  The theta block plays both the system and
    the independence role, so a == n.
    """
    theta_forms = list(theta_forms)
    pi_forms = list(pi_forms)
    n = len(theta_forms)
    r = len(pi_forms)
    cof = Coframe(chart, theta_forms + pi_forms)
    A = {}
    T = {}
    for alpha, w in enumerate(theta_forms):
        expanded = cof.express(w.d())
        A_row, T_row = _split_expansion(
            chart, expanded, n, n, r, offset=0, reduce_mod=False
        )
        for (rho, i), c in A_row.items():
            A[(alpha, rho, i)] = c
        for (j, k), c in T_row.items():
            T[(alpha, j, k)] = c
    return StructureEquations(chart, n, n, r, A, T, theta_forms, pi_forms)


def is_linear(system: PfaffianSystem) -> bool:
    return system.is_linear()


# ----------------------------------------------------------------------
# torsion absorption


def _normalize_sign(e: Expression) -> Expression:
    return -e if e.num.lead_coeff < 0 else e


class AbsorptionSolution:
    """Result of solving the absorption equations.

    ``particular`` maps (rho, i) to the modification coefficient with all
    free choices set to zero; ``free`` lists the free (rho, i) slots and
    ``homogeneous`` gives, per free slot, the full homogeneous solution it
    generates.  ``essential`` is the unabsorbable torsion, each component
    sign-normalized, duplicates removed.
    """

    def __init__(self, eqs, particular, free, homogeneous, essential):
        self.equations = eqs
        self.particular = particular
        self.free = free
        self.homogeneous = homogeneous
        self.essential = essential

    @property
    def absorbed(self) -> bool:
        return not self.essential

    def lam(self, rho: int, i: int) -> Expression:
        got = self.particular.get((rho, i))
        return got if got is not None else Expression.const(
            self.equations.chart, 0
        )

    def absorbed_pi_forms(self):
        """The shifted fiber forms pi - lam theta (free choices at zero)."""
        eqs = self.equations
        out = []
        for rho, pf in enumerate(eqs.pi_forms):
            shifted = pf
            for i, tf in enumerate(eqs.theta_forms):
                lam = self.particular.get((rho, i))
                if lam is not None and not lam.is_zero:
                    shifted = shifted - lam * tf
            out.append(shifted)
        return out


def absorb_torsion(eqs: StructureEquations) -> AbsorptionSolution:
    """Solve T[a,j,k] = A[a,r,j] lam[r,k] - A[a,r,k] lam[r,j] for lam.

    Unknowns are ordered lexicographically by (rho, i).  Row reduction
    picks the cheapest pivot (fewest terms) per column, so the reported
    particular solution and essential torsion are deterministic.
    """
    chart = eqs.chart
    n, r = eqs.n, eqs.r
    zero = Expression.const(chart, 0)
    ncols = r * n

    rows = []
    for alpha in range(eqs.a):
        for j, k in combinations(range(n), 2):
            row = [zero] * (ncols + 1)
            for rho in range(r):
                Aj = eqs.A.get((alpha, rho, j))
                Ak = eqs.A.get((alpha, rho, k))
                if Aj is not None:
                    row[rho * n + k] = row[rho * n + k] + Aj
                if Ak is not None:
                    row[rho * n + j] = row[rho * n + j] - Ak
            row[ncols] = eqs.torsion_entry(alpha, j, k)
            rows.append(row)

    red, pivots = linsolve.rref(rows, chart, max_col=ncols)
    pivot_set = set(pivots)

    essential = []
    seen = set()
    for row in red:
        if all(row[c].is_zero for c in range(ncols)):
            rhs = row[ncols]
            if not rhs.is_zero:
                e = _normalize_sign(rhs)
                if e not in seen:
                    seen.add(e)
                    essential.append(e)

    free_cols = [c for c in range(ncols) if c not in pivot_set]
    particular = {}
    homogeneous = {c: {} for c in free_cols}
    for row_idx, col in enumerate(pivots):
        row = red[row_idx]
        rho, i = divmod(col, n)
        rhs = row[ncols]
        if not rhs.is_zero:
            particular[(rho, i)] = rhs
        for fc in free_cols:
            coeff = row[fc]
            if not coeff.is_zero:
                homogeneous[fc][(rho, i)] = -coeff

    free = [divmod(c, n) for c in free_cols]
    for fc in free_cols:
        homogeneous[fc][divmod(fc, n)] = Expression.const(chart, 1)
    homogeneous = {divmod(c, n): v for c, v in homogeneous.items()}
    return AbsorptionSolution(eqs, particular, free, homogeneous, essential)


# ----------------------------------------------------------------------
# Cartan characters and the involutivity test


class InvolutionReport:
    def __init__(self, characters, sigma, free_lambda, kernel_dim,
                 dim_prolongation, bound):
        self.characters = tuple(characters)
        self.sigma = tuple(sigma)
        self.free_lambda = free_lambda
        self.kernel_dim = kernel_dim
        self.dim_prolongation = dim_prolongation
        self.bound = bound

    @property
    def involutive(self) -> bool:
        return self.dim_prolongation == self.bound

    def __repr__(self):
        return (
            f"InvolutionReport(characters={self.characters}, "
            f"dim_prolongation={self.dim_prolongation}, bound={self.bound}, "
            f"involutive={self.involutive})"
        )


def _fresh_param_names(chart: Chart, count: int, stem: str):
    base = stem
    while any(chart.has_name(f"{base}{i}") for i in range(1, count + 1)):
        base += stem[-1]
    return [f"{base}{i}" for i in range(1, count + 1)]


def cartan_characters(eqs: StructureEquations) -> InvolutionReport:
    """Reduced Cartan characters and the involutivity test.

    The k-th character uses k generic flag vectors, realized as fresh
    parameters, so the ranks are ranks at a generic flag.  The dimension
    of the prolonged tableau is counted from the freedom in the absorption
    equations: solutions of the homogeneous equations produce elements of
    the prolongation, but shifting lam by anything valued in the kernel of
    w -> A(w) changes nothing, so that freedom is discounted.
    """
    chart = eqs.chart
    a, n, r = eqs.a, eqs.n, eqs.r
    zero = Expression.const(chart, 0)

    if r == 0 or n == 0:
        sigma = [0] * n
        s = [0] * n
        return InvolutionReport(s, sigma, 0, 0, 0, 0)

    flag_names = _fresh_param_names(chart, n * n, "t")
    big = chart.extend_params(flag_names)
    bigzero = Expression.const(big, 0)

    def flag(k, i):
        return Expression.var(big, flag_names[k * n + i])

    A_big = {key: e.rebase(big) for key, e in eqs.A.items()}

    def tableau_rows(k):
        # rows of A(v_k): one per alpha, columns rho
        rows = []
        for alpha in range(a):
            row = []
            for rho in range(r):
                acc = bigzero
                for i in range(n):
                    entry = A_big.get((alpha, rho, i))
                    if entry is not None:
                        acc = acc + entry * flag(k, i)
                row.append(acc)
            rows.append(row)
        return rows

    sigma = []
    stacked = []
    for k in range(n):
        stacked.extend(tableau_rows(k))
        sigma.append(linsolve.rank(stacked, big))
    s = [sigma[0]] + [sigma[k] - sigma[k - 1] for k in range(1, n)]

    # freedom in the homogeneous absorption equations
    ncols = r * n
    hom_rows = []
    for alpha in range(a):
        for j, k in combinations(range(n), 2):
            row = [zero] * ncols
            for rho in range(r):
                Aj = eqs.A.get((alpha, rho, j))
                Ak = eqs.A.get((alpha, rho, k))
                if Aj is not None:
                    row[rho * n + k] = row[rho * n + k] + Aj
                if Ak is not None:
                    row[rho * n + j] = row[rho * n + j] - Ak
            hom_rows.append(row)
    free_lambda = ncols - (linsolve.rank(hom_rows, chart) if hom_rows else 0)

    # kernel of w -> A(w) as an (a n) x r matrix
    ker_rows = []
    for alpha in range(a):
        for i in range(n):
            ker_rows.append(
                [eqs.A.get((alpha, rho, i), zero) for rho in range(r)]
            )
    kernel_dim = r - linsolve.rank(ker_rows, chart)

    dim_prolongation = free_lambda - n * kernel_dim
    bound = sum((k + 1) * s[k] for k in range(n))
    return InvolutionReport(s, sigma, free_lambda, kernel_dim,
                            dim_prolongation, bound)


# ----------------------------------------------------------------------
# jet space contact systems


def _jet_names(n: int, m: int, level: int):
    out = []
    for a in range(1, m + 1):
        for I in combinations_with_replacement(range(1, n + 1), level):
            suffix = "".join(str(i) for i in I)
            if m == 1:
                out.append(("u" + suffix, a, I))
            elif suffix:
                out.append((f"u{a}_{suffix}", a, I))
            else:
                out.append((f"u{a}", a, I))
    return out


def contact_system(n: int, m: int, q: int) -> PfaffianSystem:
    """The canonical contact system on jets of order q of maps R^n -> R^m."""
    if n < 1 or m < 1 or q < 1:
        raise DomainError("contact systems need n, m, q all at least 1")
    xs = [f"x{i}" for i in range(1, n + 1)]
    levels = [_jet_names(n, m, l) for l in range(q + 1)]
    coords = xs + [name for level in levels for name, _, _ in level]
    chart = Chart(coords=coords)

    def du(name):
        return DifferentialForm.basis(chart, name)

    by_index = {}
    for level in levels:
        for name, a, I in level:
            by_index[(a, I)] = name

    omega = []
    for l in range(q):
        for name, a, I in levels[l]:
            w = du(name)
            for i in range(1, n + 1):
                upper = by_index[(a, tuple(sorted(I + (i,))))]
                w = w - Expression.var(chart, upper) * DifferentialForm.basis(
                    chart, f"x{i}"
                )
            omega.append(w)
    theta = [DifferentialForm.basis(chart, x) for x in xs]
    pi = [du(name) for name, _, _ in levels[q]]
    return PfaffianSystem(chart, omega, theta, pi)


# ----------------------------------------------------------------------
# prolongation


def prolong(system: PfaffianSystem) -> PfaffianSystem:
    """One prolongation step of a linear Pfaffian system.

    The essential torsion must vanish (otherwise the integrability
    conditions it carries have to be dealt with first).  Free absorption
    choices become coordinates on the prolonged space and the shifted
    fiber forms join the system block.
    """
    eqs = structure_equations(system)
    sol = absorb_torsion(eqs)
    if not sol.absorbed:
        raise NonEmptyEssentialTorsion(
            f"{len(sol.essential)} essential torsion components remain"
        )
    free = sol.free
    lam_names = _fresh_param_names(system.chart, len(free), "lam")
    big = system.chart.extend_coords(lam_names)

    omega = [w.rebase(big) for w in system.omega]
    theta = [t.rebase(big) for t in system.theta]
    pis = [p.rebase(big) for p in system.pi]

    lam_vars = {
        slot: Expression.var(big, lam_names[idx])
        for idx, slot in enumerate(free)
    }
    for rho in range(eqs.r):
        shifted = pis[rho]
        for i in range(eqs.n):
            lam = sol.particular.get((rho, i))
            lam = lam.rebase(big) if lam is not None else None
            for slot, coeff in (
                (s, h.get((rho, i))) for s, h in sol.homogeneous.items()
            ):
                if coeff is not None:
                    extra = lam_vars[slot] * coeff.rebase(big)
                    lam = extra if lam is None else lam + extra
            if lam is not None and not lam.is_zero:
                shifted = shifted - lam * theta[i]
        omega.append(shifted)

    new_pi = [DifferentialForm.basis(big, nm) for nm in lam_names]
    return PfaffianSystem(big, omega, theta, new_pi)

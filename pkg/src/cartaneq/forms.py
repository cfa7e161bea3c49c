"""Differential forms, exterior algebra, coframes and their dual frames.

A k-form stores components against strictly increasing tuples of basis
indices; the basis is the chart's coordinates followed by its parameters,
so parameter directions (da3 and friends) are first-class.  The exterior
derivative feeds every component through Expression.partial, which is what
lets d see through opaque function symbols.
"""

from __future__ import annotations

from .chart import Chart
from .errors import ChartMismatch, SingularCoframe
from .expr import Expression
from . import linsolve


def _merge_sign(i_tuple, j_tuple):
    """Sorted union and permutation sign, or (None, 0) on a repeat."""
    merged = []
    i = j = 0
    sign = 1
    ni, nj = len(i_tuple), len(j_tuple)
    while i < ni and j < nj:
        a, b = i_tuple[i], j_tuple[j]
        if a == b:
            return None, 0
        if a < b:
            merged.append(a)
            i += 1
        else:
            # b jumps over the remaining entries of i_tuple
            merged.append(b)
            if (ni - i) % 2:
                sign = -sign
            j += 1
    merged.extend(i_tuple[i:])
    merged.extend(j_tuple[j:])
    return tuple(merged), sign


def _insert_sign(idx, i_tuple):
    """Insert one index into an increasing tuple, with sign; repeat kills."""
    if idx in i_tuple:
        return None, 0
    pos = 0
    while pos < len(i_tuple) and i_tuple[pos] < idx:
        pos += 1
    sign = -1 if pos % 2 else 1
    return i_tuple[:pos] + (idx,) + i_tuple[pos:], sign


class DifferentialForm:
    """An exterior form of fixed degree with expression components."""

    __slots__ = ("chart", "degree", "comps")

    def __init__(self, chart: Chart, degree: int, comps=None):
        self.chart = chart
        self.degree = degree
        clean = {}
        if comps:
            for idx, c in comps.items():
                idx = tuple(idx)
                if len(idx) != degree or list(idx) != sorted(set(idx)):
                    raise ValueError(f"bad index tuple {idx!r} for degree {degree}")
                if not c.is_zero:
                    clean[idx] = c
        self.comps = clean

    # ------------------------------------------------------------------

    @staticmethod
    def zero(chart: Chart, degree: int) -> "DifferentialForm":
        return DifferentialForm(chart, degree)

    @staticmethod
    def basis(chart: Chart, name: str) -> "DifferentialForm":
        """The coordinate differential dz for a coordinate or parameter."""
        idx = chart.basis_index(chart.key_of(name))
        return DifferentialForm(
            chart, 1, {(idx,): Expression.const(chart, 1)}
        )

    @staticmethod
    def one_form(chart: Chart, coeffs) -> "DifferentialForm":
        comps = {}
        for name, c in coeffs.items():
            idx = chart.basis_index(chart.key_of(name))
            if not isinstance(c, Expression):
                c = Expression.const(chart, c)
            if not c.is_zero:
                comps[(idx,)] = comps.get((idx,), Expression.const(chart, 0)) + c
        return DifferentialForm(chart, 1, comps)

    # ------------------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.comps

    def coefficient(self, idx) -> Expression:
        return self.comps.get(tuple(idx), Expression.const(self.chart, 0))

    def coefficient_named(self, *names) -> Expression:
        idx = tuple(
            self.chart.basis_index(self.chart.key_of(n)) for n in names
        )
        return self.coefficient(idx)

    def __eq__(self, other):
        return (
            isinstance(other, DifferentialForm)
            and self.chart == other.chart
            and self.degree == other.degree
            and self.comps == other.comps
        )

    def __hash__(self):
        return hash((self.degree, tuple(sorted(self.comps.items()))))

    def __repr__(self):
        basis = self.chart.basis_names()
        if not self.comps:
            return f"<{self.degree}-form 0>"
        from .parser import render_text

        bits = []
        for idx in sorted(self.comps):
            wedge = "^".join("d" + basis[i] for i in idx) or "1"
            bits.append(f"({render_text(self.comps[idx])}) {wedge}")
        return "<" + " + ".join(bits) + ">"

    # ------------------------------------------------------------------
    # linear structure

    def _check(self, other):
        if not isinstance(other, DifferentialForm):
            raise TypeError("expected a differential form")
        if other.chart != self.chart:
            raise ChartMismatch("forms live on different charts")
        if other.degree != self.degree:
            raise ValueError("cannot add forms of different degree")

    def __add__(self, other):
        self._check(other)
        comps = dict(self.comps)
        for idx, c in other.comps.items():
            prev = comps.get(idx)
            comps[idx] = c if prev is None else prev + c
        return DifferentialForm(self.chart, self.degree, comps)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return DifferentialForm(
            self.chart, self.degree, {i: -c for i, c in self.comps.items()}
        )

    def __mul__(self, scalar):
        if not isinstance(scalar, Expression):
            scalar = Expression.const(self.chart, scalar)
        if scalar.is_zero:
            return DifferentialForm(self.chart, self.degree)
        return DifferentialForm(
            self.chart,
            self.degree,
            {i: c * scalar for i, c in self.comps.items()},
        )

    __rmul__ = __mul__

    # ------------------------------------------------------------------
    # exterior algebra

    def wedge(self, other: "DifferentialForm") -> "DifferentialForm":
        if other.chart != self.chart:
            raise ChartMismatch("forms live on different charts")
        out = {}
        zero = Expression.const(self.chart, 0)
        for i_idx, a in self.comps.items():
            for j_idx, b in other.comps.items():
                merged, sign = _merge_sign(i_idx, j_idx)
                if merged is None:
                    continue
                term = a * b
                if sign < 0:
                    term = -term
                out[merged] = out.get(merged, zero) + term
        return DifferentialForm(self.chart, self.degree + other.degree, out)

    def d(self) -> "DifferentialForm":
        """Exterior derivative."""
        keys = self.chart.basis_keys()
        out = {}
        zero = Expression.const(self.chart, 0)
        for idx, c in self.comps.items():
            for pos, key in enumerate(keys):
                if pos in idx:
                    continue
                dc = c.partial(key)
                if dc.is_zero:
                    continue
                new_idx, sign = _insert_sign(pos, idx)
                term = dc if sign > 0 else -dc
                out[new_idx] = out.get(new_idx, zero) + term
        return DifferentialForm(self.chart, self.degree + 1, out)

    # ------------------------------------------------------------------

    def rebase(self, chart: Chart) -> "DifferentialForm":
        """Carry the form onto an extended chart, remapping basis indices."""
        if chart == self.chart:
            return self
        if not chart.is_extension_of(self.chart):
            raise ChartMismatch("target chart does not extend the source")
        nc_old = len(self.chart.coords)
        nc_new = len(chart.coords)

        def remap(i):
            return i if i < nc_old else i - nc_old + nc_new

        comps = {
            tuple(remap(i) for i in idx): c.rebase(chart)
            for idx, c in self.comps.items()
        }
        return DifferentialForm(chart, self.degree, comps)


def wedge(*forms):
    out = forms[0]
    for f in forms[1:]:
        out = out.wedge(f)
    return out


class VectorField:
    """A derivation written against the coordinate frame."""

    __slots__ = ("chart", "comps")

    def __init__(self, chart: Chart, comps):
        self.chart = chart
        clean = {}
        for idx, c in comps.items():
            if isinstance(idx, str):
                idx = chart.basis_index(chart.key_of(idx))
            if not isinstance(c, Expression):
                c = Expression.const(chart, c)
            if not c.is_zero:
                clean[idx] = c
        self.comps = clean

    def __call__(self, h: Expression) -> Expression:
        """Directional derivative of a scalar."""
        if h.chart != self.chart:
            raise ChartMismatch("scalar lives on a different chart")
        keys = self.chart.basis_keys()
        out = Expression.const(self.chart, 0)
        for idx, c in self.comps.items():
            out = out + c * h.partial(keys[idx])
        return out

    def pair(self, form: DifferentialForm) -> Expression:
        """Interior pairing with a 1-form."""
        if form.degree != 1:
            raise ValueError("pairing is defined against 1-forms")
        if form.chart != self.chart:
            raise ChartMismatch("form lives on a different chart")
        out = Expression.const(self.chart, 0)
        for (i,), c in form.comps.items():
            x = self.comps.get(i)
            if x is not None:
                out = out + x * c
        return out

    def __repr__(self):
        from .parser import render_text

        basis = self.chart.basis_names()
        bits = [
            f"({render_text(c)}) d/d{basis[i]}"
            for i, c in sorted(self.comps.items())
        ]
        return "<" + (" + ".join(bits) if bits else "0") + ">"


class Coframe:
    """A full rank system of 1-forms spanning the cotangent space."""

    def __init__(self, chart: Chart, forms):
        self.chart = chart
        self.forms = list(forms)
        n = chart.dim
        if len(self.forms) != n:
            raise SingularCoframe(
                f"need {n} one-forms for a coframe, got {len(self.forms)}"
            )
        zero = Expression.const(chart, 0)
        for f in self.forms:
            if f.chart != chart:
                raise ChartMismatch("coframe forms live on different charts")
            if f.degree != 1:
                raise ValueError("coframe entries must be 1-forms")
        self.matrix = [
            [f.comps.get((k,), zero) for k in range(n)] for f in self.forms
        ]
        self.inverse = linsolve.invert(self.matrix, chart)

    def express(self, form: DifferentialForm):
        """Components of a form in the coframe basis.

        Returns {increasing index tuple -> Expression}; for a k-form the
        coefficient of theta^{i1} ^ ... ^ theta^{ik} sits at (i1, ..., ik).
        Index tuples refer to positions in the coframe list.
        """
        if form.chart != self.chart:
            raise ChartMismatch("form lives on a different chart")
        n = self.chart.dim
        k = form.degree
        N = self.inverse
        zero = Expression.const(self.chart, 0)
        if k == 0:
            return dict(form.comps)
        out = {}
        from itertools import combinations

        for big_idx in combinations(range(n), k):
            total = zero
            for j_idx, c in form.comps.items():
                block = [[N[j][i] for i in big_idx] for j in j_idx]
                m = linsolve.det(block, self.chart)
                if not m.is_zero:
                    total = total + c * m
            if not total.is_zero:
                out[big_idx] = total
        return out

    def dual_frame(self):
        """Vector fields X_i with <X_i, theta^j> = delta_ij."""
        n = self.chart.dim
        N = self.inverse
        return [
            VectorField(self.chart, {k: N[k][i] for k in range(n)})
            for i in range(n)
        ]

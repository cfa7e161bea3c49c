"""Exact rational expressions over a chart.

An Expression is a reduced fraction of two integer polynomials: numerator
and denominator share no factor (integer content included), the denominator
has a positive leading coefficient, and zero is always 0/1.  Two equal
values therefore have identical representations, so ``==`` is a decision
procedure for equality of rational functions.

Derivatives treat opaque function symbols through the chain rule: the
partial of f_I along an argument coordinate v is the symbol f_{Iv}, and
zero along anything else.
"""

from __future__ import annotations

from fractions import Fraction

from . import poly
from .chart import KIND_COORD, KIND_DERIV, KIND_PARAM, Chart
from .errors import ArgumentEscape, ChartMismatch, DivisionByZero, UnknownName
from .poly import Polynomial, exact_div, gcd


class Expression:
    __slots__ = ("chart", "num", "den", "_hash")

    def __init__(self, chart: Chart, num: Polynomial, den: Polynomial):
        # callers must provide a reduced, sign-normalized pair; use make()
        self.chart = chart
        self.num = num
        self.den = den
        self._hash = hash((num, den))

    # ------------------------------------------------------------------
    # construction

    @staticmethod
    def make(chart: Chart, num: Polynomial, den: Polynomial) -> "Expression":
        """Canonical expression num/den, reducing as needed."""
        if den.is_zero:
            raise DivisionByZero("zero denominator")
        if num.is_zero:
            return Expression(chart, poly.zero(), poly.one())
        g = gcd(num, den)
        if not (g == poly.one()):
            num = exact_div(num, g)
            den = exact_div(den, g)
        if den.lead_coeff < 0:
            num, den = -num, -den
        return Expression(chart, num, den)

    @staticmethod
    def const(chart: Chart, value) -> "Expression":
        f = Fraction(value)
        return Expression(
            chart,
            Polynomial.const(f.numerator),
            Polynomial.const(f.denominator),
        )

    @staticmethod
    def var(chart: Chart, name: str) -> "Expression":
        """Variable by name; derivative spellings like ``f_pp`` resolve."""
        key = chart.resolve(name)
        return Expression(chart, Polynomial.var(key), poly.one())

    @staticmethod
    def from_key(chart: Chart, key) -> "Expression":
        return Expression(chart, Polynomial.var(key), poly.one())

    def _coerce(self, other) -> "Expression":
        if isinstance(other, Expression):
            if other.chart != self.chart:
                raise ChartMismatch("operands live on different charts")
            return other
        if isinstance(other, (int, Fraction)):
            return Expression.const(self.chart, other)
        return NotImplemented

    # ------------------------------------------------------------------
    # predicates

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    @property
    def is_const(self) -> bool:
        return self.num.is_const and self.den.is_const

    def const_value(self) -> Fraction:
        return Fraction(self.num.const_value(), self.den.const_value())

    @property
    def size(self) -> int:
        return len(self.num) + len(self.den)

    def variables(self) -> frozenset:
        return self.num.variables() | self.den.variables()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Expression.const(self.chart, other)
        return (
            isinstance(other, Expression)
            and self.chart == other.chart
            and self.num == other.num
            and self.den == other.den
        )

    def __hash__(self):
        return self._hash

    def __bool__(self):
        return not self.is_zero

    def __repr__(self):
        from .parser import render_text

        return f"<{render_text(self)}>"

    # ------------------------------------------------------------------
    # field operations

    def __neg__(self):
        return Expression(self.chart, -self.num, self.den)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.num, self.den
        c, d = other.num, other.den
        if b == d:
            return Expression.make(self.chart, a + c, b)
        g = gcd(b, d)
        if g == poly.one():
            num = a * d + c * b
            if num.is_zero:
                return Expression.const(self.chart, 0)
            return Expression(self.chart, num, b * d)
        b1 = exact_div(b, g)
        d1 = exact_div(d, g)
        num = a * d1 + c * b1
        if num.is_zero:
            return Expression.const(self.chart, 0)
        h = gcd(num, g)
        if not (h == poly.one()):
            num = exact_div(num, h)
            g = exact_div(g, h)
        return Expression(self.chart, num, g * b1 * d1)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.num, self.den
        c, d = other.num, other.den
        if a.is_zero or c.is_zero:
            return Expression.const(self.chart, 0)
        g1 = gcd(a, d)
        g2 = gcd(c, b)
        if not (g1 == poly.one()):
            a = exact_div(a, g1)
            d = exact_div(d, g1)
        if not (g2 == poly.one()):
            c = exact_div(c, g2)
            b = exact_div(b, g2)
        return Expression(self.chart, a * c, b * d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.num.is_zero:
            raise DivisionByZero("division by the zero expression")
        inv = Expression(self.chart, other.den, other.num)
        if inv.den.lead_coeff < 0:
            inv = Expression(self.chart, -inv.num, -inv.den)
        return self * inv

    def __rtruediv__(self, other):
        if self.num.is_zero:
            raise DivisionByZero("division by the zero expression")
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n == 0:
            return Expression.const(self.chart, 1)
        if n < 0:
            if self.num.is_zero:
                raise DivisionByZero("negative power of zero")
            base = Expression.const(self.chart, 1) / self
            n = -n
        else:
            base = self
        # reduced fractions stay reduced under powers
        return Expression(self.chart, base.num ** n, base.den ** n)

    # ------------------------------------------------------------------
    # calculus

    def _poly_partial(self, p: Polynomial, key) -> Polynomial:
        """d(p)/d(key) with the chain rule through derivative symbols."""
        out = p.derivative(key)
        if key[0] == KIND_COORD:
            for w in p.variables():
                if w[0] == KIND_DERIV:
                    higher = self.chart.extend_deriv(w, key)
                    if higher is not None:
                        out = out + p.derivative(w) * Polynomial.var(higher)
        return out

    def partial(self, name_or_key) -> "Expression":
        """Partial derivative along a coordinate or parameter."""
        if isinstance(name_or_key, str):
            key = self.chart.key_of(name_or_key)
        else:
            key = name_or_key
        if key[0] not in (KIND_COORD, KIND_PARAM):
            raise UnknownName("can only differentiate along a basis direction")
        dn = self._poly_partial(self.num, key)
        dd = self._poly_partial(self.den, key)
        if dd.is_zero:
            if dn.is_zero:
                return Expression.const(self.chart, 0)
            return Expression.make(self.chart, dn, self.den)
        return Expression.make(
            self.chart, dn * self.den - self.num * dd, self.den * self.den
        )

    # ------------------------------------------------------------------
    # substitution and evaluation

    def _map_poly(self, p: Polynomial, lookup) -> "Expression":
        """Image of p under a variable-to-expression assignment."""
        chart = lookup.chart
        total = Expression.const(chart, 0)
        cache = {}
        for m, c in p.terms:
            term = Expression.const(chart, c)
            for k, e in m:
                base = cache.get(k)
                if base is None:
                    base = cache[k] = lookup(k)
                term = term * base ** e
            total = total + term
        return total

    def substitute(self, fname: str, value: "Expression") -> "Expression":
        """Replace an opaque function symbol by a concrete expression.

        The value may only involve the function's declared arguments (and
        opaque symbols depending on a subset of them); anything else would
        contradict the partials already taken, so it raises ArgumentEscape.
        """
        fkey = self.chart.key_of(fname)
        if fkey[0] != KIND_DERIV:
            raise UnknownName(f"{fname!r} is not an opaque function")
        fidx = fkey[1]
        fn = self.chart.functions[fidx]
        if value.chart != self.chart:
            raise ChartMismatch("substitution value lives on a different chart")
        allowed = {self.chart.key_of(a) for a in fn.args}
        for w in value.variables():
            if w[0] == KIND_COORD:
                if w not in allowed:
                    raise ArgumentEscape(
                        f"{self.chart.var_name(w)!r} is not an argument of {fname!r}"
                    )
            elif w[0] == KIND_PARAM:
                raise ArgumentEscape(
                    f"group parameter {self.chart.var_name(w)!r} cannot enter {fname!r}"
                )
            else:
                inner = self.chart.functions[w[1]]
                if not set(inner.args) <= set(fn.args):
                    raise ArgumentEscape(
                        f"{inner.name!r} depends on more than the arguments of {fname!r}"
                    )

        deriv_cache = {(): value}

        def deriv_along(index):
            got = deriv_cache.get(index)
            if got is None:
                prev = deriv_along(index[:-1])
                ckey = self.chart.key_of(fn.args[index[-1]])
                got = deriv_cache[index] = prev.partial(ckey)
            return got

        def lookup(k):
            if k[0] == KIND_DERIV and k[1] == fidx:
                return deriv_along(k[3])
            return Expression.from_key(self.chart, k)

        lookup.chart = self.chart
        num = self._map_poly(self.num, lookup)
        den = self._map_poly(self.den, lookup)
        return num / den

    def subs_coords(self, mapping, target: Chart | None = None) -> "Expression":
        """Composition with a coordinate map name -> Expression.

        Derivative symbols are not rewritten, so the expression must not
        contain symbols of functions whose arguments are being replaced.
        """
        chart = target
        keymap = {}
        for name, val in mapping.items():
            if not isinstance(val, Expression):
                raise TypeError("substitution values must be expressions")
            if chart is None:
                chart = val.chart
            elif val.chart != chart:
                raise ChartMismatch("substitution values disagree on chart")
            keymap[self.chart.key_of(name)] = val
        if chart is None:
            chart = self.chart
        for w in self.variables():
            if w[0] == KIND_DERIV:
                fn = self.chart.functions[w[1]]
                for a in fn.args:
                    if self.chart.key_of(a) in keymap:
                        raise ArgumentEscape(
                            f"cannot substitute under the opaque symbol {fn.name!r}"
                        )

        def lookup(k):
            got = keymap.get(k)
            if got is not None:
                return got
            name = self.chart.var_name(k)
            if k[0] == KIND_DERIV:
                fidx = chart.key_of(self.chart.functions[k[1]].name)[1]
                return Expression.from_key(chart, (KIND_DERIV, fidx, k[2], k[3]))
            return Expression.var(chart, name)

        lookup.chart = chart
        num = self._map_poly(self.num, lookup)
        den = self._map_poly(self.den, lookup)
        return num / den

    def evaluate(self, point) -> Fraction:
        """Exact value at a point given as {name: Fraction}."""
        vals = {}
        for name, v in point.items():
            vals[self.chart.resolve(name)] = Fraction(v)
        missing = self.variables() - set(vals)
        if missing:
            names = sorted(self.chart.var_name(k) for k in missing)
            raise UnknownName(f"point does not cover {names}")
        d = self.den.evaluate(vals)
        if d == 0:
            raise DivisionByZero("denominator vanishes at the point")
        return self.num.evaluate(vals) / d

    def rebase(self, chart: Chart) -> "Expression":
        """Reinterpret on an extended chart; variable keys stay valid."""
        if chart == self.chart:
            return self
        if not chart.is_extension_of(self.chart):
            raise ChartMismatch("target chart does not extend the source")
        return Expression(chart, self.num, self.den)

    def project(self, chart: Chart) -> "Expression":
        """Reinterpret on a smaller chart that this chart extends.

        Valid only when every variable actually present is declared there.
        """
        if chart == self.chart:
            return self
        if not self.chart.is_extension_of(chart):
            raise ChartMismatch("current chart does not extend the target")
        for k in self.variables():
            kind = k[0]
            if kind == KIND_COORD and k[1] >= len(chart.coords):
                raise ChartMismatch(f"{self.chart.var_name(k)!r} missing from target")
            if kind == KIND_PARAM and k[1] >= len(chart.params):
                raise ChartMismatch(f"{self.chart.var_name(k)!r} missing from target")
            if kind == KIND_DERIV and k[1] >= len(chart.functions):
                raise ChartMismatch(f"{self.chart.var_name(k)!r} missing from target")
        return Expression(chart, self.num, self.den)


class TotalDerivation:
    """A derivation D = sum(coeff_v * d/dv) over the basis directions."""

    def __init__(self, chart: Chart, coeffs):
        self.chart = chart
        self.coeffs = {}
        for name, c in coeffs.items():
            key = chart.key_of(name)
            if key[0] not in (KIND_COORD, KIND_PARAM):
                raise UnknownName(f"{name!r} is not a basis direction")
            if not isinstance(c, Expression):
                c = Expression.const(chart, c)
            elif c.chart != chart:
                raise ChartMismatch("coefficient lives on a different chart")
            self.coeffs[key] = c

    def __call__(self, e: Expression) -> Expression:
        if e.chart != self.chart:
            raise ChartMismatch("expression lives on a different chart")
        out = Expression.const(self.chart, 0)
        for key, c in self.coeffs.items():
            if c.is_zero:
                continue
            out = out + c * e.partial(key)
        return out


def zero(chart: Chart) -> Expression:
    return Expression.const(chart, 0)


def one(chart: Chart) -> Expression:
    return Expression.const(chart, 1)

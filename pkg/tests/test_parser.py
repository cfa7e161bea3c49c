"""Grammar, canonical text rendering, and the round trip between them."""

from fractions import Fraction

import pytest

from cartaneq import (
    Chart,
    DegreeOverflow,
    Expression,
    ParseError,
    parse_expression,
    render_latex,
    render_text,
)

from conftest import random_expression, seeded

CH = Chart(coords=("x", "y", "p"), functions=[("f", ("x", "y", "p"))])


def E(text):
    return parse_expression(text, CH)


def test_basic_forms():
    x, y, p = (Expression.var(CH, n) for n in ("x", "y", "p"))
    assert E("6*y^2 + x") == 6 * y * y + x
    assert E("-p^2/y") == -(p * p) / y
    assert E("1/2") == Expression.const(CH, Fraction(1, 2))
    assert E("  x +\ty ") == x + y
    assert E("f_p") == Expression.var(CH, "f_p")
    assert E("x - (-y)") == x + y
    # unary minus binds the whole leading term, nowhere else
    assert E("-2*x^2") == -2 * x * x
    with pytest.raises(ParseError):
        E("2 - - 3")


def test_parenthesized_expansion_agrees_with_direct_evaluation():
    rng = seeded(301)
    e = E("6*(y+x)^2 + x")
    for _ in range(20):
        a = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
        b = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
        got = e.evaluate({"x": a, "y": b, "p": Fraction(0)})
        assert got == 6 * (b + a) ** 2 + a


def test_precedence_and_associativity():
    assert E("2 + 3 * 4") == 14
    assert E("2 * 3 ^ 2") == 18
    assert E("8 / 4 / 2") == 1
    assert E("2 - 3 - 4") == -5
    assert E("-x^2") == -E("x^2")


def test_parse_render_roundtrip_on_random_expressions():
    rng = seeded(302)
    for _ in range(300):
        e = random_expression(CH, rng)
        assert parse_expression(render_text(e), CH) == e


def test_roundtrip_with_derivative_symbols():
    e = E("(f_pp*x - 3*f_xy)/(f_p^2 + 1)")
    assert parse_expression(render_text(e), CH) == e


def test_render_examples():
    assert render_text(E("0")) == "0"
    assert render_text(E("-12*y")) == "-12*y"
    assert render_text(E("x/2 + 1/3")) == "(3*x + 2)/6"
    assert render_text(E("1/y")) == "1/y"
    assert render_text(E("-p^2/y")) == "-p^2/y"
    assert render_text(E("(x+y)/(x-y)")) == "(x + y)/(x - y)"


def test_parse_errors_carry_positions():
    with pytest.raises(ParseError) as exc:
        E("6*y^2 +")
    assert exc.value.position == 7
    with pytest.raises(ParseError):
        E("")
    with pytest.raises(ParseError) as exc:
        E("2x")
    assert exc.value.position == 1
    with pytest.raises(ParseError):
        E("x & y")
    with pytest.raises(ParseError):
        E("x^-2")
    with pytest.raises(ParseError):
        E("x^(2)")
    with pytest.raises(ParseError):
        E("q + 1")  # unknown name
    with pytest.raises(ParseError) as exc:
        E("x/(y - y)")
    assert exc.value.position == 1
    with pytest.raises(ParseError):
        E("1/0")


def test_exponent_bound():
    with pytest.raises(DegreeOverflow):
        E("x^600")
    assert E("x^512") == Expression.var(CH, "x") ** 512


def test_latex_rendering():
    big = Chart(coords=("x", "y", "p"), params=("a3",),
                functions=[("f", ("x", "y", "p"))])
    r = render_latex(parse_expression("f_ppp/(2*a3^2)", big))
    assert r == "\\frac{f_{ppp}}{2 a_{3}^{2}}"
    assert render_latex(parse_expression("-12*y", big)) == "-12 y"
    assert render_latex(parse_expression("x^2", big)) == "x^{2}"

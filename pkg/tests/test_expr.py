"""Parser and jet arithmetic, checked against hand values and a
finite-difference oracle that shares no code with the jet rules."""

import math

import numpy as np
import pytest

from etaquad import DomainError, Jet3, ParseError, eval_jet3, evaluate, parse


def fd_jet(fn, x):
    """Richardson-extrapolated central differences, orders 0..3.

    Step sizes are tuned per order: third differences divide by h^3, so
    they need a much larger base step than first differences before
    roundoff eats the quotient.
    """

    def d1(h):
        return (fn(x + h) - fn(x - h)) / (2.0 * h)

    def d2(h):
        return (fn(x + h) - 2.0 * fn(x) + fn(x - h)) / h ** 2

    def d3(h):
        return (fn(x + 2 * h) - 2.0 * fn(x + h) + 2.0 * fn(x - h) - fn(x - 2 * h)) / (
            2.0 * h ** 3
        )

    def rich(g, h):
        return (4.0 * g(h / 2) - g(h)) / 3.0

    def rich2(g, h):
        return (16.0 * rich(g, h / 2) - rich(g, h)) / 15.0

    return fn(x), rich(d1, 1e-4), rich(d2, 1e-3), rich2(d3, 2e-2)


# --- parsing ---------------------------------------------------------------


def test_numbers_and_precedence():
    assert parse("2+3*4").value(0.0) == 14.0
    assert parse("(2+3)*4").value(0.0) == 20.0
    assert parse("7-4-2").value(0.0) == 1.0
    assert parse("8/4/2").value(0.0) == 1.0
    assert parse("2.5e2").value(0.0) == 250.0
    assert parse(".5").value(0.0) == 0.5
    assert parse("-3").value(0.0) == -3.0
    assert parse("1 - -3").value(0.0) == 4.0


def test_x_and_t_are_the_same_variable():
    assert parse("x*x").value(3.0) == 9.0
    assert parse("t*t").value(3.0) == 9.0
    assert parse("x*t").value(3.0) == 9.0


def test_pow_examples():
    assert parse("pow(x,4)").value(2.0) == 16.0
    assert parse("pow(x, 1+1)").value(3.0) == 9.0  # constant exponent folds
    assert parse("pow(x, -2)").value(2.0) == 0.25
    assert parse("pow(x, 0)").value(5.0) == 1.0
    assert parse("pow(x, 2.5)").value(4.0) == 32.0


def test_kernel_weight_value():
    assert parse("t*(1-t)*(2*t-1)").value(0.25) == -0.09375


@pytest.mark.parametrize(
    "text,pos",
    [
        ("2x", 1),
        ("2 x", 2),
        ("(x)(x)", 3),
        ("x 3", 2),
    ],
)
def test_implicit_multiplication_rejected(text, pos):
    with pytest.raises(ParseError) as err:
        parse(text)
    assert err.value.position == pos
    assert "implicit multiplication" in err.value.message


@pytest.mark.parametrize(
    "text",
    [
        "",
        "y",
        "foo(x)",
        "x(3)",
        "abs(x, 1)",
        "pow(x)",
        "(x",
        "x +",
        "1 # 2",
        "pow(x, x)",
        "pow(x, sin(x))",
        "x ** 2",
        "--x",
    ],
)
def test_rejected_inputs(text):
    with pytest.raises(ParseError):
        parse(text)


def test_parse_error_offsets():
    with pytest.raises(ParseError) as err:
        parse("sin(x) + foo(x)")
    assert err.value.position == 9
    with pytest.raises(ParseError) as err:
        parse("pow(x, x)")
    assert err.value.position == 7


def test_has_abs_flag():
    assert parse("abs(x)").has_abs
    assert parse("1 + 2*abs(x-1)").has_abs
    assert not parse("sin(x) + pow(x,3)").has_abs


# --- value evaluation ------------------------------------------------------


def test_vectorised_matches_scalar():
    f = parse("exp(x)*sin(2*x) + pow(x,3)/(1+x*x)")
    xs = np.linspace(-2.0, 2.0, 37)
    vec = f.value(xs)
    assert vec.shape == xs.shape
    for i, x in enumerate(xs):
        assert vec[i] == pytest.approx(f.value(float(x)), abs=0.0, rel=1e-15)


def test_constant_broadcasts_to_input_shape():
    f = parse("3")
    xs = np.linspace(0.0, 1.0, 8)
    out = f.value(xs)
    assert out.shape == xs.shape
    assert np.all(out == 3.0)


def test_scalar_returns_python_float():
    v = parse("exp(x)").value(1.0)
    assert type(v) is float
    j = parse("exp(x)").jet3(1.0)
    assert all(type(c) is float for c in (j.d0, j.d1, j.d2, j.d3))


def test_value_domain_errors():
    with pytest.raises(DomainError):
        parse("log(x)").value(-1.0)
    with pytest.raises(DomainError):
        parse("1/x").value(0.0)
    with pytest.raises(DomainError):
        parse("pow(x, 0.5)").value(-4.0)
    with pytest.raises(DomainError):
        parse("pow(x, -2)").value(0.0)
    # abs values are fine at the kink; only jets refuse
    assert parse("abs(x)").value(0.0) == 0.0


def test_vectorised_domain_error_if_any_point_bad():
    f = parse("log(x)")
    with pytest.raises(DomainError):
        f.value(np.array([0.5, 2.0, -1.0]))


# --- jets ------------------------------------------------------------------


def test_sin_jet_anchor():
    j = parse("sin(x)").jet3(0.7)
    assert j.d0 == pytest.approx(0.644217687237691, abs=1e-15)
    assert j.d1 == pytest.approx(0.7648421872844885, abs=1e-15)
    assert j.d2 == pytest.approx(-0.644217687237691, abs=1e-15)
    assert j.d3 == pytest.approx(-0.7648421872844885, abs=1e-15)


def test_monomial_jet():
    j = parse("pow(x,4)").jet3(1.0)
    assert (j.d0, j.d1, j.d2, j.d3) == (1.0, 4.0, 12.0, 24.0)
    j0 = parse("pow(x,4)").jet3(0.0)
    assert (j0.d0, j0.d1, j0.d2, j0.d3) == (0.0, 0.0, 0.0, 0.0)


def test_exp_jet_all_orders_equal():
    j = parse("exp(x)").jet3(1.3)
    e = math.exp(1.3)
    for c in (j.d0, j.d1, j.d2, j.d3):
        assert c == pytest.approx(e, rel=1e-15)


CORPUS = [
    ("pow(x,6) - 3*pow(x,4) + x", 1.1),
    ("exp(2*x)*sin(3*x)", 0.4),
    ("1/(1+x*x)", 0.8),
    ("exp(x)", -1.2),
    ("sin(3*x)*x*x", 1.5),
    ("log(x)*cos(2*x)", 2.2),
    ("cos(x)/(2+sin(x))", 0.9),
    ("pow(x, 2.5)*exp(-x)", 1.7),
    ("pow(2+sin(x), -3)", 0.6),
    ("exp(cos(x))", 2.0),
]


@pytest.mark.parametrize("source,x", CORPUS)
def test_jets_match_finite_differences(source, x):
    f = parse(source)
    j = f.jet3(x)
    fd = fd_jet(f.value, x)
    for got, want in zip((j.d0, j.d1, j.d2, j.d3), fd):
        assert got == pytest.approx(want, abs=1e-5 * max(1.0, abs(want)))


def test_quotient_jet_exact():
    # 1/(1+x^2) has closed-form derivatives; check at x=1
    j = parse("1/(1+x*x)").jet3(1.0)
    assert j.d0 == pytest.approx(0.5, rel=1e-15)
    assert j.d1 == pytest.approx(-0.5, rel=1e-14)
    assert j.d2 == pytest.approx(0.5, rel=1e-14)
    assert j.d3 == pytest.approx(0.0, abs=1e-14)


def test_abs_jet_forwards_sign():
    j = parse("abs(x)").jet3(-0.5)
    assert (j.d0, j.d1, j.d2, j.d3) == (0.5, -1.0, 0.0, 0.0)
    j = parse("2*abs(sin(x))").jet3(2.0)  # sin(2) > 0
    s = parse("2*sin(x)").jet3(2.0)
    assert j.d0 == pytest.approx(s.d0)
    assert j.d3 == pytest.approx(s.d3)


def test_abs_jet_refuses_kink():
    with pytest.raises(DomainError):
        parse("abs(x)").jet3(0.0)
    with pytest.raises(DomainError):
        parse("abs(x)").jet3(5e-13)
    with pytest.raises(DomainError):
        parse("abs(x)").jet3(np.array([1.0, 1e-13]))
    # just outside the guard is fine
    assert parse("abs(x)").jet3(1e-11).d1 == 1.0


def test_fractional_pow_jet_domain():
    with pytest.raises(DomainError):
        parse("pow(x, 2.5)").jet3(-1.0)
    with pytest.raises(DomainError):
        parse("pow(x, 2.5)").jet3(0.0)


def test_negative_int_pow_jet():
    j = parse("pow(x, -2)").jet3(2.0)
    assert j.d0 == pytest.approx(0.25, rel=1e-15)
    assert j.d1 == pytest.approx(-2.0 * 2.0 ** -3, rel=1e-14)
    assert j.d2 == pytest.approx(6.0 * 2.0 ** -4, rel=1e-14)
    assert j.d3 == pytest.approx(-24.0 * 2.0 ** -5, rel=1e-14)


def test_vectorised_jets_match_scalar():
    f = parse("exp(x)*cos(2*x) + pow(x,5)")
    xs = np.linspace(-1.5, 1.5, 23)
    jv = f.jet3(xs)
    assert jv.d3.shape == xs.shape
    for i, x in enumerate(xs):
        js = f.jet3(float(x))
        assert jv.d0[i] == pytest.approx(js.d0, rel=1e-15, abs=1e-15)
        assert jv.d3[i] == pytest.approx(js.d3, rel=1e-13, abs=1e-13)


def test_jet3_algebra_helpers():
    a = Jet3.variable(2.0)
    b = (a * a + 1.0) / a  # (x^2+1)/x at 2: 2.5, d1 = 1 - 1/x^2 = 0.75
    assert b.d0 == pytest.approx(2.5)
    assert b.d1 == pytest.approx(0.75)
    c = 1.0 - a
    assert (c.d0, c.d1) == (-1.0, -1.0)
    with pytest.raises(DomainError):
        a / Jet3.constant(0.0)


def test_module_level_helpers():
    f = parse("sin(x)")
    assert evaluate(f, 0.5) == f.value(0.5)
    j = eval_jet3(f, 0.5)
    assert j.d1 == pytest.approx(math.cos(0.5), rel=1e-15)

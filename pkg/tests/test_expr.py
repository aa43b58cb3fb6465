import random

import pytest

from schwarzian_lab import expr
from schwarzian_lab.errors import (
    DivisionByZeroJet,
    ExprSyntaxError,
    MissingParameter,
    UnknownFunction,
)
from schwarzian_lab.expr import BinOp, Call, Neg, Num, Param, PowInt, Var


def jet_close(j, vals, tol=1e-12):
    return all(abs(g - w) <= tol for g, w in zip((j.d0, j.d1, j.d2, j.d3), vals))


# --- parsing ---------------------------------------------------------------

def test_parse_structure():
    e = expr.parse("1/z + 0.5*z")
    want = BinOp("+", BinOp("/", Num(1), Var()), BinOp("*", Num(0.5), Var()))
    assert e.root == want
    assert e.params == frozenset()


def test_parse_cot_example_parameters():
    e = expr.parse("sqrt(c)*cot(sqrt(c)*z)")
    assert e.params == frozenset({"c"})
    assert isinstance(e.root, BinOp) and e.root.op == "*"


def test_unbalanced_paren_reports_offset_and_expected():
    text = "z/(1 - c*z"
    with pytest.raises(ExprSyntaxError) as err:
        expr.parse(text)
    assert err.value.offset == len(text)  # end of input, 0-based
    assert ")" in err.value.expected


def test_unknown_function():
    with pytest.raises(UnknownFunction) as err:
        expr.parse("foo(z)")
    assert err.value.name == "foo"
    assert err.value.offset == 0


def test_empty_input():
    with pytest.raises(ExprSyntaxError):
        expr.parse("   ")


def test_non_ascii_rejected():
    with pytest.raises(ExprSyntaxError):
        expr.parse("z + \u03b1")


def test_precedence_and_associativity():
    assert expr.parse("a - b - c").root == BinOp(
        "-", BinOp("-", Param("a"), Param("b")), Param("c")
    )
    assert expr.parse("a / b / c").root == BinOp(
        "/", BinOp("/", Param("a"), Param("b")), Param("c")
    )
    # ^ binds tighter than unary minus, which binds tighter than *
    assert expr.parse("-z^2").root == Neg(PowInt(Var(), 2))
    assert expr.parse("2*z^2").root == BinOp("*", Num(2), PowInt(Var(), 2))
    assert expr.parse("z^-2").root == PowInt(Var(), -2)


def test_power_requires_integer_literal():
    with pytest.raises(ExprSyntaxError) as err:
        expr.parse("z^c")
    assert "integer exponent" in err.value.expected
    with pytest.raises(ExprSyntaxError):
        expr.parse("z^1.5")


def test_complex_literals():
    assert expr.parse("2i").root == Num(2j)
    assert expr.parse("1+2i").root == BinOp("+", Num(1), Num(2j))
    # a bare i is a parameter, not the imaginary unit
    assert expr.parse("i").root == Param("i")
    assert expr.parse("1.5e2i").root == Num(150j)


def test_call_of_known_functions():
    e = expr.parse("inv(z)")
    assert e.root == Call("inv", Var())


# --- evaluation -------------------------------------------------------------

def test_eval_mobius_jet_at_origin():
    # Taylor z + c z^2 + c^2 z^3 + ... gives d2 = 2c and d3 = 6 c^2.
    e = expr.parse("z/(1-c*z)")
    j = expr.eval_jet(e, 0.0, {"c": 0.3})
    assert jet_close(j, (0.0, 1.0, 0.6, 0.54), 1e-14)


def test_eval_pole_signals_division():
    e = expr.parse("1/z")
    with pytest.raises(DivisionByZeroJet) as err:
        expr.eval_jet(e, 0.0, {})
    assert err.value.span is not None


def test_eval_exp_empty_env():
    j = expr.eval_jet(expr.parse("exp(z)"), 0.0, {})
    assert jet_close(j, (1, 1, 1, 1))


def test_missing_parameter():
    with pytest.raises(MissingParameter) as err:
        expr.eval_jet(expr.parse("c*z"), 0.5, {})
    assert err.value.name == "c"


def test_eval_referentially_transparent():
    e = expr.parse("sqrt(c)*cot(sqrt(c)*z)")
    env = {"c": 1.2}
    a = expr.eval_jet(e, 0.3 + 0.1j, env)
    b = expr.eval_jet(e, 0.3 + 0.1j, env)
    assert (a.d0, a.d1, a.d2, a.d3) == (b.d0, b.d1, b.d2, b.d3)


# --- printing ----------------------------------------------------------------

def _random_node(rng: random.Random, depth: int):
    if depth <= 0:
        pick = rng.randrange(3)
        if pick == 0:
            # literals are non-negative; negation is its own node
            return Num(complex(round(rng.uniform(0, 3), 3)))
        if pick == 1:
            return Var()
        return Param(rng.choice("abc"))
    pick = rng.randrange(5)
    if pick == 0:
        return Neg(_random_node(rng, depth - 1))
    if pick == 1:
        return PowInt(_random_node(rng, 0), rng.choice([-2, 2, 3]))
    if pick == 2:
        return Call(rng.choice(expr.KNOWN_FUNCTIONS), _random_node(rng, depth - 1))
    op = rng.choice("+-*/")
    return BinOp(op, _random_node(rng, depth - 1), _random_node(rng, depth - 1))


def test_pretty_parse_round_trip_on_generated_corpus():
    rng = random.Random(1234)
    for _ in range(50):
        root = _random_node(rng, rng.randrange(1, 5))
        fn = expr.FnExpr(root, frozenset())
        text = expr.pretty(fn)
        reparsed = expr.parse(text)
        assert reparsed.root == root, text
        # pretty printing is a fixed point of parse
        assert expr.pretty(reparsed) == text


def test_pretty_of_parsed_input_round_trips():
    for text in ["sqrt(c)*cot(sqrt(c)*z)", "z/(1-c*z)", "(2*z-z^2)/(2*(1-z)^2)",
                 "1/z + 0.5*z", "-(z - 1)^3 / (1 + 2i)", "a + (b + c)",
                 "a - (b - c)", "a/(b/c)"]:
        e = expr.parse(text)
        assert expr.parse(expr.pretty(e)).root == e.root

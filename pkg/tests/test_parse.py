import math

import numpy as np
import pytest
from hypothesis import given, settings

from bergman_dual.errors import VerificationError
from bergman_dual.fncore import DOWNWARD_CUT, Pow, evaluate
from bergman_dual.parse import ParseError, format_number, load_battery, parse_expr, to_literal

from strategies import expressions, upper


def test_parse_shift_power():
    e = parse_expr("pow(shift(i, var), -1)")
    assert evaluate(e, 1j) == pytest.approx(-0.5j)


def test_parse_cayley_inverse():
    e = parse_expr("mobius(1, -i, 1, i, var)")
    for w in (1j, 2 + 1j, -0.5 + 0.1j):
        assert evaluate(e, w) == pytest.approx((w - 1j) / (w + 1j), rel=1e-15)


def test_parse_branch_arguments():
    e = parse_expr("pow(shift(-i, var), -0.5, pi, 0)")
    assert isinstance(e, Pow) and e.branch.is_principal
    e = parse_expr(f"pow(shift(-i, var), -0.5, {-math.pi / 2!r}, 0)")
    assert e.branch == DOWNWARD_CUT
    with pytest.raises(ParseError):
        parse_expr("pow(var, 0.5, -pi)")


@pytest.mark.parametrize("text,value", [
    ("const(2.5)", 2.5), ("const(-1e-3)", -1e-3), ("const(1+2j)", 1 + 2j), ("const(-i)", -1j),
    ("const(0.5-0.25j)", 0.5 - 0.25j), ("sum(1, 2, const(3i))", 3 + 3j), ("prod(2, 3)", 6),
])
def test_numeric_literals(text, value):
    assert evaluate(parse_expr(text), 0.3j) == pytest.approx(value)


@pytest.mark.parametrize("bad", ["pow(var)", "mobius(1, 2, var)", "foo(var)", "shift(i var)", "var var", "sum(", ""])
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        parse_expr(bad)


def test_format_number_round_trips():
    for z in (0.1, -3.0, 1j, 1e-300 - 2.5e10j, 0.1 + 0.2j):
        assert complex(parse_expr(f"const({format_number(z)})").value) == z


@settings(max_examples=150, deadline=None)
@given(expressions, upper)
def test_literal_round_trip(e, w):
    again = parse_expr(to_literal(e))
    assert to_literal(again) == to_literal(e)
    try:
        a = evaluate(e, w)
    except VerificationError:
        return
    b = evaluate(again, w)
    assert a == b or (np.isnan(a) and np.isnan(b))


def test_load_battery(tmp_path):
    p = tmp_path / "b.txt"
    p.write_text("# a comment line\n"
                 "mobius(1, -i, 1, i, var)   # expect: in\n"
                 "\n"
                 "var # expect: out\n"
                 "pow(shift(i, var), -2)\n")
    entries = load_battery(p)
    assert [e.expect for e in entries] == ["in", "out", None]
    assert entries[2].source == "pow(shift(i, var), -2)"


def test_load_battery_reports_line(tmp_path):
    p = tmp_path / "b.txt"
    p.write_text("var\nnot_a_function(var)\n")
    with pytest.raises(ParseError, match=":2:"):
        load_battery(p)

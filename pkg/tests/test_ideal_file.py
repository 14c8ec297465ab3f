"""Tests for ideal files and curve parametrizations."""

import pytest

from graded_workbench.algebra.groebner import same_ideal
from graded_workbench.cli.ideal_file import (
    curve_ideal,
    load_ideal_file,
    parse_curve,
    parse_ideal_file,
    render_ideal_file,
)
from graded_workbench.errors import InputError, NonHomogeneousError, ParseError

TWISTED_CUBIC_FILE = """\
# twisted cubic
char 101
vars x0 x1 x2 x3
x0*x2 - x1^2   # first quadric
x1*x3 - x2^2

x0*x3 - x1*x2
"""


def test_parse_ideal_file():
    parsed = parse_ideal_file(TWISTED_CUBIC_FILE)
    assert parsed.characteristic == 101
    assert parsed.ring.names == ("x0", "x1", "x2", "x3")
    assert len(parsed.ideal) == 3
    assert parsed.ideal.generators[0].to_string() == "-x1^2 + x0*x2"


def test_char_override():
    assert parse_ideal_file(TWISTED_CUBIC_FILE, char=7).characteristic == 7


def test_render_round_trip():
    parsed = parse_ideal_file(TWISTED_CUBIC_FILE)
    again = parse_ideal_file(render_ideal_file(parsed.ideal))
    assert again.ideal.generators == parsed.ideal.generators


def test_load_from_disk(tmp_path):
    path = tmp_path / "cubic.ideal"
    path.write_text(TWISTED_CUBIC_FILE, encoding="utf-8")
    assert len(load_ideal_file(path).ideal) == 3


def test_missing_file(tmp_path):
    with pytest.raises(InputError):
        load_ideal_file(tmp_path / "nope.ideal")


def test_file_that_is_not_utf8(tmp_path):
    path = tmp_path / "latin.ideal"
    path.write_bytes(b"char 101\nvars x y\nx^2 \xff\n")
    with pytest.raises(InputError, match="not UTF-8"):
        load_ideal_file(path)


@pytest.mark.parametrize(
    "text,line,column",
    [
        ("char 12\nvars x y\nx\n", 1, 6),
        ("char p\nvars x y\nx\n", 1, 6),
        ("vars x y\nchar 101\nx\n", 1, 1),
        ("char 101\nvars x 2y\nx\n", 2, 8),
        ("char 101\nvars x y\nx + y^\n", 3, 6),
        ("char 101\nvars x y\n\nx + z\n", 4, 5),
    ],
)
def test_parse_errors_point_at_the_problem(text, line, column):
    with pytest.raises(ParseError) as exc:
        parse_ideal_file(text)
    assert (exc.value.line, exc.value.column) == (line, column)
    assert f"line {line}, column {column}" in str(exc.value)


def test_missing_header():
    with pytest.raises(ParseError):
        parse_ideal_file("char 101\n")


def test_duplicate_variables():
    with pytest.raises(ParseError):
        parse_ideal_file("char 101\nvars x x\nx\n")


def test_non_homogeneous_generator():
    with pytest.raises(NonHomogeneousError) as exc:
        parse_ideal_file("char 101\nvars x y\nx*y\nx^2 + y\n")
    assert "line 4" in str(exc.value)
    assert exc.value.term == "y"


def test_parse_curve():
    forms = parse_curve("s^3, s^2*t, s*t^2, t^3", char=7)
    assert len(forms) == 4
    assert forms[0].ring.p == 7


def test_curve_needs_four_forms():
    with pytest.raises(InputError):
        parse_curve("s^3, s^2*t, t^3")


def test_curve_parse_error_column_is_global():
    with pytest.raises(ParseError) as exc:
        parse_curve("s^5, s^, s*t^4, t^5")
    assert exc.value.column == 7


def test_curve_ideal_of_twisted_cubic():
    I = curve_ideal("s^3, s^2*t, s*t^2, t^3", 101)
    expected = parse_ideal_file(TWISTED_CUBIC_FILE).ideal
    assert same_ideal(I, expected)

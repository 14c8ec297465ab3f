"""Ideal files and curve parametrizations.

    # comments run to the end of a line
    char 32003
    vars x0 x1 x2 x3
    x0*x2 - x1^2
    ...
"""

import logging
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from graded_workbench.algebra.field import PrimeField
from graded_workbench.algebra.groebner import implicitize_curve
from graded_workbench.algebra.polynomial import Ideal, Polynomial, Ring
from graded_workbench.errors import InputError, NonHomogeneousError, ParseError

log = logging.getLogger(__name__)

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*$")


@dataclass
class IdealFile:
    ring: Ring
    ideal: Ideal

    @property
    def characteristic(self) -> int:
        return self.ring.p


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0]


def _field(value: str, line: int, column: int) -> PrimeField:
    try:
        return PrimeField(int(value))
    except ValueError:
        raise ParseError(f"characteristic {value!r} is not an integer", line, column) from None
    except InputError as e:
        raise ParseError(e.message, line, column) from None


def parse_ideal_file(text: str, char: Optional[int] = None) -> IdealFile:
    """Parse the header and one homogeneous generator per line.

    `char` replaces the characteristic named in the header.
    """
    content = [(n, _strip_comment(raw)) for n, raw in enumerate(text.splitlines(), start=1)]
    content = [(n, body) for n, body in content if body.strip()]
    if len(content) < 2:
        raise ParseError("expected `char <p>` and `vars <names>` header lines", line=len(text.splitlines()) or 1)

    n_char, char_line = content[0]
    words = char_line.split()
    if words[0] != "char" or len(words) != 2:
        raise ParseError("first line must be `char <p>`", n_char, char_line.find(words[0]) + 1)
    fld = PrimeField(char) if char is not None else _field(words[1], n_char, char_line.find(words[1]) + 1)

    n_vars, vars_line = content[1]
    words = vars_line.split()
    if words[0] != "vars" or len(words) < 2:
        raise ParseError("second line must be `vars <name> ...`", n_vars, vars_line.find(words[0]) + 1)
    for name in words[1:]:
        if not _NAME.match(name):
            raise ParseError(f"bad variable name {name!r}", n_vars, vars_line.find(name) + 1)
    if len(set(words[1:])) != len(words[1:]):
        raise ParseError("duplicate variable name", n_vars, 1)
    ring = Ring(tuple(words[1:]), fld)

    generators = []
    for n, body in content[2:]:
        f = ring.parse(body, line=n)
        try:
            Ideal(ring, [f])
        except NonHomogeneousError as e:
            raise NonHomogeneousError(f"line {n}: {e.message}", term=e.term) from None
        generators.append(f)
    ideal = Ideal(ring, generators)
    log.info(f"parsed {len(ideal)} generators in {ring.nvars} variables over F_{ring.p}")
    return IdealFile(ring=ring, ideal=ideal)


def load_ideal_file(path: str | Path, char: Optional[int] = None) -> IdealFile:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"cannot read {path}: {e}") from e
    except UnicodeDecodeError as e:
        raise InputError(f"{path} is not UTF-8 text: {e.reason} at byte {e.start}") from e
    return parse_ideal_file(text, char=char)


def render_ideal_file(ideal: Ideal) -> str:
    lines = [f"char {ideal.ring.p}", "vars " + " ".join(ideal.ring.names)]
    lines += [g.to_string() for g in ideal.generators]
    return "\n".join(lines) + "\n"


def parse_curve(text: str, char: Optional[int] = None) -> list[Polynomial]:
    """Comma-separated binary forms in s, t, e.g. `s^5, s^4*t+s^3*t^2, s*t^4, t^5`."""
    fld = PrimeField(char) if char is not None else PrimeField()
    ring = Ring(("s", "t"), fld)
    pieces = text.split(",")
    if len(pieces) != 4:
        raise InputError(f"a curve in P^3 needs four forms, got {len(pieces)}")
    forms = []
    offset = 0
    for piece in pieces:
        try:
            forms.append(ring.parse(piece))
        except ParseError as e:
            raise ParseError(e.reason, 1, e.column + offset) from None
        offset += len(piece) + 1
    return forms


def curve_ideal(text: str, char: Optional[int] = None, method: str = "linear") -> Ideal:
    return implicitize_curve(parse_curve(text, char), method=method)

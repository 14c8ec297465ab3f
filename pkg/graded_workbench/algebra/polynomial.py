"""Sparse multivariate polynomials over F_p.

A polynomial is a dict exponent-tuple -> nonzero residue. Monomials are plain
tuples; the helpers below do the arithmetic on them.
"""

import logging
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from graded_workbench.algebra.field import PrimeField
from graded_workbench.algebra.linalg import rank_mod_p
from graded_workbench.errors import (
    InputError,
    NonHomogeneousError,
    ParseError,
    RingMismatchError,
    SingularMatrixError,
    ZeroPolynomialError,
)

log = logging.getLogger(__name__)

Monomial = tuple[int, ...]


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_div(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    """True when a divides b."""
    return all(x <= y for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x if x > y else y for x, y in zip(a, b))


def mono_gcd(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x if x < y else y for x, y in zip(a, b))


def mono_coprime(a: Monomial, b: Monomial) -> bool:
    return all(x == 0 or y == 0 for x, y in zip(a, b))


def mono_degree(a: Monomial) -> int:
    return sum(a)


def max_index(a: Monomial) -> int:
    """Index of the last variable dividing a (-1 for the constant monomial)."""
    for i in range(len(a) - 1, -1, -1):
        if a[i]:
            return i
    return -1


def unit_vector(n: int, i: int, power: int = 1) -> Monomial:
    return tuple(power if j == i else 0 for j in range(n))


@lru_cache(maxsize=None)
def monomials_of_degree(nvars: int, degree: int) -> tuple[Monomial, ...]:
    """All monomials of a degree, largest first in degrevlex."""
    if degree < 0:
        return ()
    out = []
    for combo in combinations_with_replacement(range(nvars), degree):
        exps = [0] * nvars
        for i in combo:
            exps[i] += 1
        out.append(tuple(exps))
    out.sort(key=degrevlex_key, reverse=True)
    return tuple(out)


def degrevlex_key(m: Monomial) -> tuple[int, ...]:
    return (sum(m),) + tuple(-x for x in reversed(m))


@dataclass(frozen=True, slots=True)
class OrderSpec:
    """A monomial order. `key` maps monomials to tuples; larger tuple means larger monomial."""

    kind: str = "degrevlex"
    block: int = 0

    def __post_init__(self):
        if self.kind not in ("degrevlex", "lex", "elimination"):
            raise InputError(f"unknown monomial order {self.kind!r}")
        if self.kind == "elimination" and self.block < 1:
            raise InputError("elimination order needs a block of at least one variable")

    def key(self, m: Monomial) -> tuple[int, ...]:
        if self.kind == "degrevlex":
            return degrevlex_key(m)
        if self.kind == "lex":
            return m
        return tuple(m[: self.block]) + degrevlex_key(m[self.block :])

    def compare(self, a: Monomial, b: Monomial) -> int:
        """-1, 0, 1 for a < b, a == b, a > b."""
        if len(a) != len(b):
            raise RingMismatchError("monomials from different rings")
        ka, kb = self.key(a), self.key(b)
        return (ka > kb) - (ka < kb)

    def __str__(self) -> str:
        if self.kind == "elimination":
            return f"elimination({self.block})"
        return self.kind


DEGREVLEX = OrderSpec("degrevlex")
LEX = OrderSpec("lex")


def elimination_order(block: int) -> OrderSpec:
    return OrderSpec("elimination", block)


def order_from_name(name: str) -> OrderSpec:
    if name.startswith("elimination(") and name.endswith(")"):
        return elimination_order(int(name[len("elimination(") : -1]))
    return OrderSpec(name)


@dataclass(frozen=True)
class Ring:
    """Polynomial ring F_p[names]. `weights` defaults to the standard grading."""

    names: tuple[str, ...]
    field: PrimeField = dc_field(default_factory=PrimeField)
    weights: Optional[tuple[int, ...]] = None

    def __post_init__(self):
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        if not names:
            raise InputError("a ring needs at least one variable")
        if len(set(names)) != len(names):
            raise InputError(f"duplicate variable names in {names}")
        if self.weights is None:
            object.__setattr__(self, "weights", (1,) * len(names))
        elif len(self.weights) != len(names) or min(self.weights) < 1:
            raise InputError("weights must be positive, one per variable")

    @classmethod
    def standard(cls, nvars: int, p: Optional[int] = None, prefix: str = "x") -> "Ring":
        fld = PrimeField(p) if p is not None else PrimeField()
        return cls(tuple(f"{prefix}{i}" for i in range(nvars)), fld)

    @property
    def nvars(self) -> int:
        return len(self.names)

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def is_standard_graded(self) -> bool:
        return all(w == 1 for w in self.weights)

    def degree(self, m: Monomial) -> int:
        if self.is_standard_graded:
            return sum(m)
        return sum(w * x for w, x in zip(self.weights, m))

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise RingMismatchError(f"unknown variable {name!r}") from None

    def one_monomial(self) -> Monomial:
        return (0,) * self.nvars

    def var_monomial(self, i: int, power: int = 1) -> Monomial:
        return unit_vector(self.nvars, i, power)

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return Polynomial(self, {self.one_monomial(): 1})

    def constant(self, c: int) -> "Polynomial":
        return Polynomial(self, {self.one_monomial(): c})

    def gen(self, i: int) -> "Polynomial":
        return Polynomial(self, {self.var_monomial(i): 1})

    def gens(self) -> list["Polynomial"]:
        return [self.gen(i) for i in range(self.nvars)]

    def monomial(self, m: Monomial, coeff: int = 1) -> "Polynomial":
        return Polynomial(self, {tuple(m): coeff})

    def monomials(self, degree: int) -> tuple[Monomial, ...]:
        return monomials_of_degree(self.nvars, degree)

    def parse(self, text: str, line: int = 1) -> "Polynomial":
        return parse_polynomial(self, text, line=line)

    def with_names(self, names: Sequence[str], weights: Optional[Sequence[int]] = None) -> "Ring":
        return Ring(tuple(names), self.field, tuple(weights) if weights is not None else None)

    def format_monomial(self, m: Monomial) -> str:
        parts = []
        for name, e in zip(self.names, m):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        return "*".join(parts) if parts else "1"


class Polynomial:
    __slots__ = ("ring", "terms")

    def __init__(self, ring: Ring, terms: Optional[dict] = None, *, clean: bool = False):
        self.ring = ring
        if terms is None:
            self.terms: dict[Monomial, int] = {}
        elif clean:
            self.terms = terms
        else:
            p = ring.p
            cleaned = {}
            for m, c in terms.items():
                c %= p
                if c:
                    cleaned[tuple(m)] = c
            self.terms = cleaned

    # ---- basic protocol

    def _check(self, other: "Polynomial") -> None:
        if self.ring != other.ring:
            raise RingMismatchError("polynomials from different rings")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __repr__(self) -> str:
        return f"Polynomial({self})"

    def __str__(self) -> str:
        return self.to_string()

    @property
    def is_zero(self) -> bool:
        return not self.terms

    # ---- arithmetic

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        p = self.ring.p
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = (out.get(m, 0) + c) % p
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Polynomial(self.ring, out, clean=True)

    def __neg__(self) -> "Polynomial":
        p = self.ring.p
        return Polynomial(self.ring, {m: p - c for m, c in self.terms.items()}, clean=True)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        self._check(other)
        p = self.ring.p
        out: dict[Monomial, int] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(x + y for x, y in zip(m1, m2))
                out[m] = (out.get(m, 0) + c1 * c2) % p
        return Polynomial(self.ring, {m: c for m, c in out.items() if c}, clean=True)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int) -> "Polynomial":
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c: int) -> "Polynomial":
        p = self.ring.p
        c %= p
        if c == 0:
            return self.ring.zero()
        return Polynomial(self.ring, {m: (v * c) % p for m, v in self.terms.items()}, clean=True)

    def mul_term(self, mono: Monomial, coeff: int = 1) -> "Polynomial":
        """Multiply by coeff * mono."""
        p = self.ring.p
        coeff %= p
        if coeff == 0:
            return self.ring.zero()
        return Polynomial(
            self.ring,
            {mono_mul(m, mono): (c * coeff) % p for m, c in self.terms.items()},
            clean=True,
        )

    # ---- grading

    def degree(self) -> int:
        if not self.terms:
            return -1
        return max(self.ring.degree(m) for m in self.terms)

    @property
    def homogeneous_degree(self) -> Optional[int]:
        """Common degree of all terms, or None when the polynomial is zero or inhomogeneous."""
        degrees = {self.ring.degree(m) for m in self.terms}
        if len(degrees) == 1:
            return degrees.pop()
        return None

    @property
    def is_homogeneous(self) -> bool:
        return self.homogeneous_degree is not None

    def support_variables(self) -> set[int]:
        return {i for m in self.terms for i, e in enumerate(m) if e}

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    # ---- orders

    def leading_term(self, order: OrderSpec = DEGREVLEX) -> tuple[Monomial, int]:
        if not self.terms:
            raise ZeroPolynomialError("the zero polynomial has no leading term")
        m = max(self.terms, key=order.key)
        return m, self.terms[m]

    def leading_monomial(self, order: OrderSpec = DEGREVLEX) -> Monomial:
        return self.leading_term(order)[0]

    def leading_coefficient(self, order: OrderSpec = DEGREVLEX) -> int:
        return self.leading_term(order)[1]

    def monic(self, order: OrderSpec = DEGREVLEX) -> "Polynomial":
        return self.scale(self.ring.field.inv(self.leading_coefficient(order)))

    def sorted_terms(self, order: OrderSpec = DEGREVLEX) -> list[tuple[Monomial, int]]:
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    # ---- substitution

    def substitute(self, images: Sequence["Polynomial"]) -> "Polynomial":
        """Replace x_i by images[i]; images live in any common ring."""
        if len(images) != self.ring.nvars:
            raise RingMismatchError("need one image per variable")
        target = images[0].ring
        powers: dict[tuple[int, int], Polynomial] = {}

        def power(i: int, e: int) -> Polynomial:
            key = (i, e)
            if key not in powers:
                powers[key] = images[i] if e == 1 else power(i, e - 1) * images[i]
            return powers[key]

        result_terms: dict[Monomial, int] = {}
        p = target.p
        for m, c in self.terms.items():
            prod = target.constant(c)
            for i, e in enumerate(m):
                if e:
                    prod = prod * power(i, e)
            for mm, cc in prod.terms.items():
                result_terms[mm] = (result_terms.get(mm, 0) + cc) % p
        return Polynomial(target, result_terms)

    def apply_linear_change(self, matrix) -> "Polynomial":
        """x_i -> sum_j M[i][j] x_j. Composition: apply(M2)(apply(M1)(f)) == apply(M1 @ M2)(f)."""
        check_invertible(matrix, self.ring.p)
        return self.substitute(linear_forms(self.ring, matrix))

    def map_to(self, ring: Ring, positions: Sequence[int]) -> "Polynomial":
        """Move into `ring`, sending variable i to variable positions[i] (-1 drops a variable that must be absent)."""
        out = {}
        for m, c in self.terms.items():
            new = [0] * ring.nvars
            for i, e in enumerate(m):
                if not e:
                    continue
                if positions[i] < 0:
                    raise RingMismatchError(f"variable {self.ring.names[i]} has no image")
                new[positions[i]] += e
            out[tuple(new)] = c
        return Polynomial(ring, out)

    # ---- printing

    def to_string(self, order: OrderSpec = DEGREVLEX) -> str:
        if not self.terms:
            return "0"
        fld = self.ring.field
        pieces = []
        for idx, (m, c) in enumerate(self.sorted_terms(order)):
            value = fld.lift(c)
            sign = "-" if value < 0 else "+"
            mag = abs(value)
            if not any(m):
                body = str(mag)
            elif mag == 1:
                body = self.ring.format_monomial(m)
            else:
                body = f"{mag}*{self.ring.format_monomial(m)}"
            if idx == 0:
                pieces.append(f"-{body}" if sign == "-" else body)
            else:
                pieces.append(f" {sign} {body}")
        return "".join(pieces)


def linear_forms(ring: Ring, matrix) -> list[Polynomial]:
    n = ring.nvars
    return [
        Polynomial(ring, {ring.var_monomial(j): int(matrix[i][j]) for j in range(n)})
        for i in range(n)
    ]


def check_invertible(matrix, p: int) -> None:
    arr = np.asarray(matrix, dtype=np.int64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise SingularMatrixError("change of coordinates must be a square matrix")
    if rank_mod_p(arr, p) != arr.shape[0]:
        raise SingularMatrixError("change of coordinates is singular")


# ---- parsing


class _PolyParser:
    """Recursive descent over `+ - * ^ ( )`, integers and variable names."""

    def __init__(self, ring: Ring, text: str, line: int):
        self.ring = ring
        self.text = text
        self.pos = 0
        self.line = line

    def error(self, message: str, pos: Optional[int] = None) -> ParseError:
        col = (self.pos if pos is None else pos) + 1
        return ParseError(message, line=self.line, column=col)

    def skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def parse(self) -> Polynomial:
        if not self.text.strip():
            raise self.error("empty polynomial")
        result = self.expression()
        if self.peek():
            raise self.error(f"unexpected {self.peek()!r}")
        return result

    def expression(self) -> Polynomial:
        sign = 1
        if self.peek() and self.peek() in "+-":
            sign = -1 if self.text[self.pos] == "-" else 1
            self.pos += 1
        acc = self.term().scale(sign)
        while self.peek() and self.peek() in "+-":
            op = self.text[self.pos]
            self.pos += 1
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self) -> Polynomial:
        acc = self.power()
        while self.peek() == "*":
            self.pos += 1
            acc = acc * self.power()
        return acc

    def power(self) -> Polynomial:
        base = self.atom()
        if self.peek() == "^":
            caret = self.pos
            self.pos += 1
            self.skip()
            start = self.pos
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            if start == self.pos:
                raise self.error("expected exponent after '^'", pos=caret)
            base = base ** int(self.text[start : self.pos])
        return base

    def atom(self) -> Polynomial:
        ch = self.peek()
        if not ch:
            raise self.error("unexpected end of input")
        if ch == "(":
            self.pos += 1
            inner = self.expression()
            if self.peek() != ")":
                raise self.error("expected ')'")
            self.pos += 1
            return inner
        start = self.pos
        if ch.isdigit():
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            return self.ring.constant(int(self.text[start : self.pos]))
        if ch.isalpha() or ch == "_":
            while self.pos < len(self.text) and (
                self.text[self.pos].isalnum() or self.text[self.pos] == "_"
            ):
                self.pos += 1
            name = self.text[start : self.pos]
            if name not in self.ring.names:
                raise self.error(f"unknown variable {name!r}", pos=start)
            return self.ring.gen(self.ring.names.index(name))
        raise self.error(f"unexpected {ch!r}")


def parse_polynomial(ring: Ring, text: str, line: int = 1) -> Polynomial:
    return _PolyParser(ring, text, line).parse()


# ---- ideals


class Ideal:
    """A homogeneous ideal given by nonzero homogeneous generators."""

    def __init__(self, ring: Ring, generators: Iterable[Polynomial]):
        self.ring = ring
        gens = []
        for g in generators:
            if g.ring != ring:
                raise RingMismatchError("generator from a different ring")
            if g.is_zero:
                continue
            if not g.is_homogeneous:
                raise NonHomogeneousError(
                    f"generator {g} is not homogeneous", term=_offending_term(g)
                )
            gens.append(g)
        self.generators: tuple[Polynomial, ...] = tuple(gens)
        self._gb_cache: dict = {}

    @classmethod
    def parse(cls, ring: Ring, lines: Iterable[str]) -> "Ideal":
        return cls(ring, [parse_polynomial(ring, s) for s in lines])

    def __repr__(self) -> str:
        return f"Ideal({', '.join(str(g) for g in self.generators)})"

    def __len__(self) -> int:
        return len(self.generators)

    def __iter__(self) -> Iterator[Polynomial]:
        return iter(self.generators)

    @property
    def is_zero(self) -> bool:
        return not self.generators

    def degrees(self) -> list[int]:
        return [g.degree() for g in self.generators]

    def min_degree(self) -> int:
        return min(self.degrees()) if self.generators else 0

    def is_monomial(self) -> bool:
        return all(len(g) == 1 for g in self.generators)

    def groebner(self, order: OrderSpec = DEGREVLEX):
        """Reduced Gröbner basis, cached per order."""
        if order not in self._gb_cache:
            from graded_workbench.algebra.groebner import buchberger

            self._gb_cache[order] = buchberger(self, order)
        return self._gb_cache[order]

    def apply_linear_change(self, matrix) -> "Ideal":
        check_invertible(matrix, self.ring.p)
        forms = linear_forms(self.ring, matrix)
        return Ideal(self.ring, [g.substitute(forms) for g in self.generators])

    def __add__(self, other: "Ideal") -> "Ideal":
        if self.ring != other.ring:
            raise RingMismatchError("ideals from different rings")
        return Ideal(self.ring, self.generators + other.generators)

    def __mul__(self, other: "Ideal") -> "Ideal":
        if self.ring != other.ring:
            raise RingMismatchError("ideals from different rings")
        return Ideal(self.ring, [f * g for f in self.generators for g in other.generators])


def maximal_ideal(ring: Ring) -> Ideal:
    return Ideal(ring, ring.gens())


def _offending_term(g: Polynomial) -> str:
    """First term (in degrevlex order) whose degree differs from the leading one."""
    terms = g.sorted_terms()
    lead_deg = g.ring.degree(terms[0][0])
    for m, c in terms:
        if g.ring.degree(m) != lead_deg:
            return Polynomial(g.ring, {m: c}).to_string()
    return ""


def count_standard_monomials(ring: Ring, degree: int, leading_monomials: Sequence[Monomial]) -> int:
    """dim_k (S/I)_d from the leading monomials of a Gröbner basis of I."""
    return sum(
        1
        for m in ring.monomials(degree)
        if not any(mono_divides(lm, m) for lm in leading_monomials)
    )

"""Monomial ideals: minimal generators, stability, standard monomials."""

import logging
from itertools import combinations_with_replacement
from typing import Iterable, Sequence

from graded_workbench.algebra.polynomial import (
    DEGREVLEX,
    Ideal,
    Monomial,
    Polynomial,
    Ring,
    degrevlex_key,
    max_index,
    mono_div,
    mono_divides,
)

log = logging.getLogger(__name__)


def minimalize_monomials(monomials: Iterable[Monomial]) -> tuple[Monomial, ...]:
    """Drop every monomial divisible by another; sorted smallest degree first, then degrevlex descending."""
    unique = sorted(set(monomials), key=lambda m: (sum(m), tuple(-k for k in degrevlex_key(m))))
    kept: list[Monomial] = []
    for m in unique:
        if not any(mono_divides(k, m) for k in kept):
            kept.append(m)
    return tuple(kept)


class MonomialIdeal:
    """An ideal of S given by its minimal monomial generators."""

    def __init__(self, ring: Ring, generators: Iterable[Monomial]):
        self.ring = ring
        self.generators: tuple[Monomial, ...] = minimalize_monomials(tuple(g) for g in generators)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MonomialIdeal):
            return NotImplemented
        return self.ring.nvars == other.ring.nvars and set(self.generators) == set(other.generators)

    def __hash__(self) -> int:
        return hash(frozenset(self.generators))

    def __len__(self) -> int:
        return len(self.generators)

    def __repr__(self) -> str:
        return f"MonomialIdeal({self})"

    def __str__(self) -> str:
        return ", ".join(self.ring.format_monomial(g) for g in self.generators) or "0"

    @property
    def is_unit(self) -> bool:
        return any(not any(g) for g in self.generators)

    def contains(self, m: Monomial) -> bool:
        return any(mono_divides(g, m) for g in self.generators)

    def generators_of_degree(self, degree: int) -> list[Monomial]:
        return [g for g in self.generators if sum(g) == degree]

    def max_generator_degree(self) -> int:
        return max((sum(g) for g in self.generators), default=0)

    def standard_monomials(self, degree: int) -> list[Monomial]:
        """Degree-d monomials outside the ideal, degrevlex descending."""
        return [m for m in self.ring.monomials(degree) if not self.contains(m)]

    def to_ideal(self) -> Ideal:
        return Ideal(self.ring, [self.ring.monomial(g) for g in self.generators])

    def quotient_by_variable(self, i: int) -> "MonomialIdeal":
        gens = []
        for g in self.generators:
            if g[i]:
                gens.append(g[:i] + (g[i] - 1,) + g[i + 1 :])
            else:
                gens.append(g)
        return MonomialIdeal(self.ring, gens)

    def add_variable(self, i: int) -> "MonomialIdeal":
        return MonomialIdeal(self.ring, self.generators + (self.ring.var_monomial(i),))

    def __add__(self, other: "MonomialIdeal") -> "MonomialIdeal":
        return MonomialIdeal(self.ring, self.generators + other.generators)


def is_stable_monomial_ideal(M: MonomialIdeal, strong: bool = True) -> bool:
    """Stability with x0 largest.

    strong=True: for every generator m, every x_j | m and every i < j, x_i*m/x_j is in M.
    strong=False: only x_j = the last variable dividing m is exchanged.
    """
    for g in M.generators:
        if strong:
            js = [j for j, e in enumerate(g) if e]
        else:
            js = [max_index(g)] if any(g) else []
        for j in js:
            base = g[:j] + (g[j] - 1,) + g[j + 1 :]
            for i in range(j):
                cand = base[:i] + (base[i] + 1,) + base[i + 1 :]
                if not M.contains(cand):
                    return False
    return True


def power_of_variables(ring: Ring, count: int, power: int) -> MonomialIdeal:
    """(x0, ..., x_{count-1})^power."""
    return MonomialIdeal(ring, initial_segment_monomials(ring.nvars, count, power))


def initial_segment_monomials(nvars: int, count: int, degree: int) -> list[Monomial]:
    out = []
    for combo in combinations_with_replacement(range(count), degree):
        exps = [0] * nvars
        for i in combo:
            exps[i] += 1
        out.append(tuple(exps))
    return out


def leading_monomial_ideal(ring: Ring, polys: Sequence[Polynomial], order=DEGREVLEX) -> MonomialIdeal:
    return MonomialIdeal(ring, [f.leading_monomial(order) for f in polys if not f.is_zero])


def split_monomial(m: Monomial, block: int) -> tuple[Monomial, Monomial]:
    """(part in x0..x_{block-1}, part in the remaining variables), both full-length."""
    n = len(m)
    u = tuple(m[i] if i < block else 0 for i in range(n))
    return u, mono_div(m, u)

"""Graded free resolutions of S/I over S.

Resolutions are built level by level with Schreyer's construction: the
syzygies read off from S-vector reductions form a Gröbner basis of the next
kernel for the induced order, so no module Buchberger loop is needed. The
result is then minimalized by cancelling unit entries.
"""

import heapq
import logging
from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Mapping, Optional, Sequence

import numpy as np
from sympy import Poly

from graded_workbench.algebra.hilbert import gbinom, t
from graded_workbench.algebra.linalg import rank_mod_p
from graded_workbench.algebra.monomial_ideal import MonomialIdeal, is_stable_monomial_ideal
from graded_workbench.algebra.polynomial import (
    DEGREVLEX,
    Ideal,
    Monomial,
    OrderSpec,
    Polynomial,
    Ring,
    mono_div,
    mono_divides,
    mono_lcm,
    mono_mul,
    max_index,
)
from graded_workbench.errors import (
    AlgebraError,
    NonMinimalResolutionError,
    NotAGroebnerBasisError,
    NotStableError,
    PreconditionError,
)

log = logging.getLogger(__name__)

# (basis index, monomial) -> coefficient
ModuleElement = dict[tuple[int, Monomial], int]
ChiSequence = list[int]


# ---- free modules and maps


@dataclass(frozen=True)
class GradedFreeModule:
    """⊕ S(-a_i); `twists` holds the degrees a_i of the basis elements."""

    twists: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.twists)


class GradedMap:
    """A homogeneous map source -> target stored by columns: column j is the image of basis element j."""

    def __init__(self, ring: Ring, source: GradedFreeModule, target: GradedFreeModule, columns: Sequence[Mapping[int, Polynomial]]):
        self.ring = ring
        self.source = source
        self.target = target
        self.columns: list[dict[int, Polynomial]] = [
            {row: f for row, f in col.items() if not f.is_zero} for col in columns
        ]
        if len(self.columns) != source.rank:
            raise AlgebraError("one column per source basis element is required")

    def __repr__(self) -> str:
        return f"GradedMap({self.target.rank} x {self.source.rank})"

    def entry(self, row: int, col: int) -> Polynomial:
        return self.columns[col].get(row, self.ring.zero())

    def entries(self) -> list[list[Polynomial]]:
        return [[self.entry(i, j) for j in range(self.source.rank)] for i in range(self.target.rank)]

    def is_homogeneous(self) -> bool:
        for j, col in enumerate(self.columns):
            for i, f in col.items():
                if f.homogeneous_degree != self.source.twists[j] - self.target.twists[i]:
                    return False
        return True

    def unit_entries(self) -> list[tuple[int, int]]:
        """(row, col) of every nonzero constant entry, sorted."""
        out = []
        for j, col in enumerate(self.columns):
            for i, f in col.items():
                if f.is_constant():
                    out.append((i, j))
        return sorted(out)

    def compose(self, inner: "GradedMap") -> "GradedMap":
        """self ∘ inner."""
        cols = []
        for col in inner.columns:
            acc: dict[int, Polynomial] = {}
            for k, f in col.items():
                for i, g in self.columns[k].items():
                    acc[i] = acc[i] + g * f if i in acc else g * f
            cols.append(acc)
        return GradedMap(self.ring, inner.source, self.target, cols)

    def is_zero(self) -> bool:
        return all(not col for col in self.columns)


def _to_columns(ring: Ring, elements: Sequence[ModuleElement]) -> list[dict[int, Polynomial]]:
    cols = []
    for el in elements:
        rows: dict[int, dict[Monomial, int]] = {}
        for (pos, m), c in el.items():
            rows.setdefault(pos, {})[m] = c
        cols.append({pos: Polynomial(ring, terms) for pos, terms in rows.items()})
    return cols


# ---- Schreyer frames


@dataclass
class _Frame:
    """Basis data of one free module: total lead monomial, tie-break path and degree per element."""

    monomials: list[Monomial]
    paths: list[tuple[int, ...]]

    def degrees(self) -> tuple[int, ...]:
        return tuple(sum(m) for m in self.monomials)


def _term_key(frame: _Frame, order: OrderSpec):
    def key(term: tuple[int, Monomial]) -> tuple[int, ...]:
        pos, m = term
        return order.key(mono_mul(m, frame.monomials[pos])) + frame.paths[pos]

    return key


def _neg(k: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(-x for x in k)


def _reduce_to_zero(
    element: ModuleElement,
    gens: Sequence[ModuleElement],
    leads: Sequence[tuple[int, Monomial]],
    by_position: Mapping[int, list[int]],
    key,
    p: int,
) -> dict[int, dict[Monomial, int]]:
    """Divide `element` by monic `gens`, returning the quotients; the remainder must vanish."""
    work = dict(element)
    heap = [(_neg(key(term)), term) for term in work]
    heapq.heapify(heap)
    quotients: dict[int, dict[Monomial, int]] = {}
    while heap:
        _, term = heapq.heappop(heap)
        c = work.pop(term, None)
        if c is None:
            continue
        pos, m = term
        hit = next((l for l in by_position.get(pos, ()) if mono_divides(leads[l][1], m)), None)
        if hit is None:
            raise NotAGroebnerBasisError("S-vector did not reduce to zero; generators are not a Gröbner basis")
        q = mono_div(m, leads[hit][1])
        qs = quotients.setdefault(hit, {})
        qs[q] = (qs.get(q, 0) + c) % p
        for (gp, gm), gc in gens[hit].items():
            if (gp, gm) == leads[hit]:
                continue
            tt = (gp, mono_mul(q, gm))
            old = work.get(tt)
            v = ((old or 0) - c * gc) % p
            if old is None:
                if v:
                    work[tt] = v
                    heapq.heappush(heap, (_neg(key(tt)), tt))
            elif v:
                work[tt] = v
            else:
                del work[tt]
    return quotients


def _schreyer_step(
    gens: Sequence[ModuleElement],
    leads: Sequence[tuple[int, Monomial]],
    frame: _Frame,
    order: OrderSpec,
    p: int,
) -> tuple[list[ModuleElement], list[tuple[int, Monomial]]]:
    """Syzygies of monic generators forming a Gröbner basis for the order given by `frame`."""
    key = _term_key(frame, order)
    by_position: dict[int, list[int]] = {}
    for l, (pos, _) in enumerate(leads):
        by_position.setdefault(pos, []).append(l)

    syzygies: list[ModuleElement] = []
    syz_leads: list[tuple[int, Monomial]] = []
    for i, (pos, m_i) in enumerate(leads):
        candidates: list[tuple[Monomial, int]] = []
        for j in by_position[pos]:
            if j <= i:
                continue
            candidates.append((mono_div(mono_lcm(m_i, leads[j][1]), m_i), j))
        kept: list[tuple[Monomial, int]] = []
        for q, j in sorted(candidates, key=lambda c: (sum(c[0]), c[1])):
            if not any(mono_divides(k, q) for k, _ in kept):
                kept.append((q, j))
        for t_i, j in kept:
            t_j = mono_div(mono_mul(t_i, m_i), leads[j][1])
            s_vec: ModuleElement = {}
            for (gp, gm), c in gens[i].items():
                s_vec[(gp, mono_mul(t_i, gm))] = c
            for (gp, gm), c in gens[j].items():
                tt = (gp, mono_mul(t_j, gm))
                v = (s_vec.get(tt, 0) - c) % p
                if v:
                    s_vec[tt] = v
                else:
                    s_vec.pop(tt, None)
            quotients = _reduce_to_zero(s_vec, gens, leads, by_position, key, p)
            syz: ModuleElement = {(i, t_i): 1, (j, t_j): p - 1}
            for l, qs in quotients.items():
                for q, c in qs.items():
                    v = (syz.get((l, q), 0) - c) % p
                    if v:
                        syz[(l, q)] = v
                    else:
                        syz.pop((l, q), None)
            syzygies.append(syz)
            syz_leads.append((i, t_i))

    ordering = sorted(range(len(syzygies)), key=lambda k: (syz_leads[k][0], _neg(syz_leads[k][1])))
    return [syzygies[k] for k in ordering], [syz_leads[k] for k in ordering]


def _next_frame(frame: _Frame, leads: Sequence[tuple[int, Monomial]]) -> _Frame:
    monomials = [mono_mul(m, frame.monomials[pos]) for pos, m in leads]
    paths = [frame.paths[pos] + (-j,) for j, (pos, _) in enumerate(leads)]
    return _Frame(monomials, paths)


def syzygies(generators: Sequence[Polynomial], order: OrderSpec = DEGREVLEX) -> GradedMap:
    """Generators of the syzygy module of `generators`, which must form a Gröbner basis."""
    gens = [g for g in generators if not g.is_zero]
    if not gens:
        raise PreconditionError("no nonzero generators")
    ring = gens[0].ring
    p = ring.p
    ideal_gb = Ideal(ring, gens).groebner(order)
    if set(MonomialIdeal(ring, [g.leading_monomial(order) for g in gens]).generators) != set(
        ideal_gb.initial_ideal().generators
    ):
        raise NotAGroebnerBasisError("syzygies needs a Gröbner basis as input")
    base = _Frame([ring.one_monomial()], [()])
    elements: list[ModuleElement] = []
    leads: list[tuple[int, Monomial]] = []
    scales: list[int] = []
    for g in gens:
        lm, lc = g.leading_term(order)
        inv = ring.field.inv(lc)
        elements.append({(0, m): (c * inv) % p for m, c in g.terms.items()})
        leads.append((0, lm))
        scales.append(inv)
    syz, _ = _schreyer_step(elements, leads, base, order, p)
    # rescale so the relations hold for the original generators
    syz = [{(l, m): (c * scales[l]) % p for (l, m), c in s.items()} for s in syz]
    target = GradedFreeModule(tuple(g.degree() for g in gens))
    source = GradedFreeModule(tuple(_element_degree(s, target) for s in syz))
    return GradedMap(ring, source, target, _to_columns(ring, syz))


def _element_degree(el: ModuleElement, target: GradedFreeModule) -> int:
    pos, m = next(iter(el))
    return target.twists[pos] + sum(m)


def free_resolution(I: Ideal, order: OrderSpec = DEGREVLEX) -> list[GradedMap]:
    """A graded free resolution d_1, d_2, ... of S/I (not necessarily minimal)."""
    ring = I.ring
    p = ring.p
    if I.is_zero:
        return []
    gb = I.groebner(order)
    if gb.is_unit():
        raise PreconditionError("S/I is zero for the unit ideal")
    frame = _Frame([ring.one_monomial()], [()])
    pairs = sorted(
        ((g.leading_monomial(order), g) for g in gb.elements), key=lambda x: _neg(x[0])
    )
    elements: list[ModuleElement] = [{(0, m): c for m, c in g.terms.items()} for _, g in pairs]
    leads: list[tuple[int, Monomial]] = [(0, lm) for lm, _ in pairs]
    maps: list[GradedMap] = []
    target = GradedFreeModule((0,))
    while elements:
        new_frame = _next_frame(frame, leads)
        source = GradedFreeModule(new_frame.degrees())
        maps.append(GradedMap(ring, source, target, _to_columns(ring, elements)))
        log.debug(f"level {len(maps)}: rank {source.rank}")
        if len(maps) > ring.nvars:
            raise AlgebraError("resolution longer than the number of variables")
        elements, leads = _schreyer_step(elements, leads, frame, order, p)
        frame, target = new_frame, source
    log.info(f"Schreyer resolution ranks {[1] + [d.source.rank for d in maps]}")
    return maps


# ---- minimalization


def _pop_unit(maps: list[GradedMap], k: int) -> bool:
    """Cancel the smallest unit entry of maps[k]; returns False when none is left."""
    d = maps[k]
    units = d.unit_entries()
    if not units:
        return False
    a, b = units[0]
    ring = d.ring
    u_inv = ring.field.inv(next(iter(d.columns[b][a].terms.values())))
    col_b = d.columns[b]
    new_cols = []
    for j, col in enumerate(d.columns):
        if j == b:
            continue
        factor = col.get(a)
        new = dict(col)
        if factor is not None:
            scaled = factor.scale(u_inv)
            for i, f in col_b.items():
                new[i] = new[i] - f * scaled if i in new else -(f * scaled)
        new.pop(a, None)
        new_cols.append({(i if i < a else i - 1): f for i, f in new.items() if not f.is_zero})
    src = tuple(x for j, x in enumerate(d.source.twists) if j != b)
    tgt = tuple(x for i, x in enumerate(d.target.twists) if i != a)
    maps[k] = GradedMap(ring, GradedFreeModule(src), GradedFreeModule(tgt), new_cols)

    if k + 1 < len(maps):
        nxt = maps[k + 1]
        cols = [{(i if i < b else i - 1): f for i, f in col.items() if i != b} for col in nxt.columns]
        maps[k + 1] = GradedMap(ring, nxt.source, GradedFreeModule(src), cols)
    if k > 0:
        prev = maps[k - 1]
        cols = [col for j, col in enumerate(prev.columns) if j != a]
        maps[k - 1] = GradedMap(ring, GradedFreeModule(tgt), prev.target, cols)
    return True


def _sort_bases(maps: list[GradedMap]) -> list[GradedMap]:
    """Reorder every free module by degree (stable), permuting rows and columns to match."""
    perms: list[list[int]] = []
    for d in maps:
        perms.append(sorted(range(d.source.rank), key=lambda j: d.source.twists[j]))
    out = []
    for k, d in enumerate(maps):
        perm = perms[k]
        inverse_rows = {old: new for new, old in enumerate(perms[k - 1])} if k > 0 else {0: 0}
        cols = [{inverse_rows[i]: f for i, f in d.columns[j].items()} for j in perm]
        src = GradedFreeModule(tuple(d.source.twists[j] for j in perm))
        tgt = GradedFreeModule(tuple(d.target.twists[j] for j in perms[k - 1])) if k > 0 else d.target
        out.append(GradedMap(d.ring, src, tgt, cols))
    return out


def minimalize(res: Sequence[GradedMap]) -> list[GradedMap]:
    """Cancel unit entries until every entry lies in the maximal ideal."""
    maps = list(res)
    cancelled = 0
    for k in range(len(maps)):
        while _pop_unit(maps, k):
            cancelled += 1
    while maps and maps[-1].source.rank == 0:
        maps.pop()
    log.debug(f"minimalize: {cancelled} unit cancellations")
    return _sort_bases(maps)


def minimal_free_resolution(I: Ideal, order: OrderSpec = DEGREVLEX) -> list[GradedMap]:
    return minimalize(free_resolution(I, order))


# ---- Betti tables


class BettiTable:
    """β_{i,j} = dim Tor_i(M, k)_{i+j}; columns i, rows j. Only nonzero entries are stored."""

    def __init__(self, entries: Mapping[tuple[int, int], int]):
        self.entries: dict[tuple[int, int], int] = {k: int(v) for k, v in entries.items() if v}
        if any(v < 0 for v in self.entries.values()):
            raise AlgebraError("Betti numbers are non-negative")

    @classmethod
    def from_rows(cls, rows: Mapping[int, Sequence[Optional[int]]]) -> "BettiTable":
        """rows[j][i] = β_{i,j}; None or 0 for an empty cell."""
        return cls({(i, j): v for j, row in rows.items() for i, v in enumerate(row) if v})

    def __getitem__(self, key: tuple[int, int]) -> int:
        return self.entries.get(key, 0)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BettiTable):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self) -> int:
        return hash(frozenset(self.entries.items()))

    def __repr__(self) -> str:
        return f"BettiTable({sorted(self.entries.items())})"

    def __str__(self) -> str:
        from graded_workbench.utils.text_utils import render_betti_table

        return render_betti_table(self)

    @property
    def pdim(self) -> int:
        return max((i for i, _ in self.entries), default=0)

    @property
    def reg(self) -> int:
        return max((j for _, j in self.entries), default=0)

    def row(self, j: int) -> list[int]:
        return [self[(i, j)] for i in range(self.pdim + 1)]

    def totals(self) -> list[int]:
        return [sum(v for (i, _), v in self.entries.items() if i == k) for k in range(self.pdim + 1)]

    def leq(self, other: "BettiTable") -> bool:
        """Entrywise ≤."""
        return all(v <= other[k] for k, v in self.entries.items())

    def ideal_convention(self) -> "BettiTable":
        """β_{i,j}(I) = β_{i+1,j-1}(S/I)."""
        return BettiTable({(i - 1, j + 1): v for (i, j), v in self.entries.items() if i >= 1})

    def euler_numerator(self) -> Poly:
        """Σ (-1)^i β_{i,j} t^{i+j}."""
        total = Poly(0, t, domain="ZZ")
        for (i, j), v in self.entries.items():
            total = total + Poly((-1) ** i * v * t ** (i + j), t, domain="ZZ")
        return total

    def to_json(self) -> dict:
        return {
            "entries": [[i, j, v] for (i, j), v in sorted(self.entries.items())],
            "pdim": self.pdim,
            "reg": self.reg,
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "BettiTable":
        return cls({(i, j): v for i, j, v in data["entries"]})


def betti_table(min_res: Sequence[GradedMap]) -> BettiTable:
    entries: dict[tuple[int, int], int] = {(0, 0): 1}
    for k, d in enumerate(min_res, start=1):
        if d.unit_entries():
            raise NonMinimalResolutionError(f"d_{k} has a unit entry")
        for a in d.source.twists:
            entries[(k, a - k)] = entries.get((k, a - k), 0) + 1
    return BettiTable(entries)


def resolve_betti(I: Ideal) -> BettiTable:
    return betti_table(minimal_free_resolution(I))


@dataclass(frozen=True)
class HomologicalInvariants:
    pdim: int
    depth: int
    reg: int
    is_cm: bool


def homological_invariants(bt: BettiTable, num_vars: int, krull_dim: int) -> HomologicalInvariants:
    depth = num_vars - bt.pdim
    return HomologicalInvariants(pdim=bt.pdim, depth=depth, reg=bt.reg, is_cm=depth == krull_dim)


# ---- oracles


def _quotient_bases(gb, top: int) -> list[list[Monomial]]:
    lms = gb.leading_monomials()
    return [
        [m for m in gb.ring.monomials(d) if not any(mono_divides(lm, m) for lm in lms)]
        for d in range(top + 1)
    ]


def _multiplication_matrices(gb, bases: list[list[Monomial]]) -> list[list[np.ndarray]]:
    """mult[d][x]: (S/I)_d -> (S/I)_{d+1}, multiplication by x."""
    ring = gb.ring
    out = []
    for d in range(len(bases) - 1):
        index = {m: k for k, m in enumerate(bases[d + 1])}
        per_var = []
        for x in range(ring.nvars):
            A = np.zeros((len(bases[d + 1]), len(bases[d])), dtype=np.int64)
            for c, m in enumerate(bases[d]):
                nf = gb.normal_form(ring.monomial(mono_mul(m, ring.var_monomial(x))))
                for mm, cc in nf.terms.items():
                    A[index[mm], c] = cc
            per_var.append(A)
        out.append(per_var)
    return out


def _koszul_differential(nvars: int, i: int, dim_src: int, dim_tgt: int, mult: list[np.ndarray], p: int) -> np.ndarray:
    """∂: ∧^i ⊗ (S/I)_j -> ∧^(i-1) ⊗ (S/I)_(j+1) as a dense block matrix."""
    subsets = list(combinations(range(nvars), i))
    lower = {s: k for k, s in enumerate(combinations(range(nvars), i - 1))}
    D = np.zeros((len(lower) * dim_tgt, len(subsets) * dim_src), dtype=np.int64)
    for c, subset in enumerate(subsets):
        for pos, x in enumerate(subset):
            r = lower[subset[:pos] + subset[pos + 1 :]]
            sign = 1 if pos % 2 == 0 else p - 1
            block = (mult[x] * sign) % p
            D[r * dim_tgt : (r + 1) * dim_tgt, c * dim_src : (c + 1) * dim_src] = block
    return D


def betti_koszul_oracle(I: Ideal, row_cap: Optional[int] = None) -> BettiTable:
    """β_{i,j}(S/I) for j ≤ row_cap from Koszul homology, degree by degree."""
    ring = I.ring
    N = ring.nvars
    p = ring.p
    if I.is_zero:
        return BettiTable({(0, 0): 1})
    gb = I.groebner()
    if row_cap is None:
        row_cap = resolve_betti(gb.initial_ideal().to_ideal()).reg
    guard = row_cap + 1
    bases = _quotient_bases(gb, guard + 2)
    mult = _multiplication_matrices(gb, bases)
    h = [len(b) for b in bases]

    def rank(i: int, j: int) -> int:
        if i < 1 or i > N or j < 0 or j + 1 >= len(h) or h[j] == 0 or h[j + 1] == 0:
            return 0
        return rank_mod_p(_koszul_differential(N, i, h[j], h[j + 1], mult[j], p), p)

    entries: dict[tuple[int, int], int] = {}
    for j in range(guard + 1):
        for i in range(N + 1):
            source_dim = comb(N, i) * h[j]
            kernel = source_dim - rank(i, j)
            image = rank(i + 1, j - 1) if j >= 1 else 0
            value = kernel - image
            if value:
                if j == guard:
                    raise PreconditionError(f"Koszul guard row {guard} is not zero; raise the row cap")
                entries[(i, j)] = value
    return BettiTable(entries)


def betti_stable_monomial(M: MonomialIdeal) -> BettiTable:
    """Eliahou–Kervaire: u contributes C(max(u), i) to β_{i+1, deg u - 1}(S/M)."""
    if not is_stable_monomial_ideal(M, strong=False):
        raise NotStableError(f"{M} is not a stable monomial ideal")
    entries: dict[tuple[int, int], int] = {(0, 0): 1}
    for u in M.generators:
        top = max_index(u)
        for i in range(top + 1):
            key = (i + 1, sum(u) - 1)
            entries[key] = entries.get(key, 0) + comb(top, i)
    return BettiTable(entries)


# ---- χ statistics


def chi_statistics(bt: BettiTable) -> ChiSequence:
    """χ_m = Σ_j (-1)^j β_{m-j, j}, for m = 0 .. pdim + reg."""
    return [
        sum((-1) ** j * bt[(m - j, j)] for j in range(m + 1))
        for m in range(bt.pdim + bt.reg + 1)
    ]


def chi_over_noether(bt: BettiTable, e: int) -> ChiSequence:
    """Solve χ^{S_0}_m = Σ_j C(e, j) χ^{S}_{m-j} for χ^{S}."""
    chi0 = chi_statistics(bt)
    out: list[int] = []
    for m, value in enumerate(chi0):
        out.append(value - sum(comb(e, j) * out[m - j] for j in range(1, min(m, e) + 1)))
    return out


def chi_closed_form(e: int, r: int, reg_R: int, length: Optional[int] = None, printed_sign: bool = False) -> ChiSequence:
    """(-1)^r C(e+r, m) C(m-1, r) + (-1)^reg C(e, m-1-reg) over S_0.

    printed_sign=True uses (-1)^(reg-r) on the second summand instead.
    """
    length = length if length is not None else e + 2 + reg_R
    sign = (-1) ** (reg_R - r) if printed_sign else (-1) ** reg_R
    return [
        (-1) ** r * comb(e + r, m) * gbinom(m - 1, r) + sign * gbinom(e, m - 1 - reg_R)
        for m in range(length)
    ]


def chi_noether_pattern(e: int, r: int, reg_R: int, length: int, printed_value: bool = False) -> ChiSequence:
    """χ^S of an almost maximal ring: (-1)^m C(e+m-1, e-1) for m ≤ r, ±1 at reg+1, else 0.

    The entry at reg+1 is (-1)^reg; printed_value=True puts 1 there.
    """
    out = [0] * length
    for m in range(min(r + 1, length)):
        out[m] = (-1) ** m * gbinom(e + m - 1, e - 1)
    if reg_R + 1 < length:
        out[reg_R + 1] += 1 if printed_value else (-1) ** reg_R
    return out


def predicted_betti_over_noether(e: int, r: int, reg_R: int) -> BettiTable:
    """β^{S}_{0,j} = C(e+j-1, j) for j ≤ r and β^{S}_{1,reg} = 1."""
    entries = {(0, j): comb(e + j - 1, j) for j in range(r + 1)}
    entries[(1, reg_R)] = entries.get((1, reg_R), 0) + 1
    return BettiTable(entries)

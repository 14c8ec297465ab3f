"""Buchberger's algorithm and the constructions built on it.

Pair selection is the normal strategy (smallest lcm degree, then smallest lcm
in the order) with the coprime and chain criteria. Reduction works on raw
term dicts with a lazy max-heap of pending monomials.
"""

import heapq
import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from graded_workbench.algebra.linalg import (
    left_nullspace_mod_p,
    rank_mod_p,
    random_invertible_matrix,
    row_basis_mod_p,
)
from graded_workbench.algebra.monomial_ideal import MonomialIdeal
from graded_workbench.algebra.polynomial import (
    DEGREVLEX,
    Ideal,
    Monomial,
    OrderSpec,
    Polynomial,
    Ring,
    count_standard_monomials,
    elimination_order,
    mono_coprime,
    mono_div,
    mono_divides,
    mono_lcm,
)
from graded_workbench.errors import (
    DegenerateImageError,
    GinInstabilityError,
    InputError,
    NotAGroebnerBasisError,
    SaturationLimitError,
    ZeroPolynomialError,
)
from graded_workbench.settings import (
    WORKBENCH_GENERICITY_RETRIES,
    WORKBENCH_SATURATION_ROUNDS,
    WORKBENCH_TRIALS,
)

log = logging.getLogger(__name__)

Generators = Union[Ideal, Sequence[Polynomial]]

# (leading monomial, monic term dict)
_Divisor = tuple[Monomial, dict]


def _neg_key(key: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(-k for k in key)


def _find_divisor(m: Monomial, basis: Sequence[_Divisor]) -> Optional[_Divisor]:
    for entry in basis:
        lm = entry[0]
        if all(a <= b for a, b in zip(lm, m)):
            return entry
    return None


def _reduce(terms: dict, basis: Sequence[_Divisor], order: OrderSpec, p: int) -> dict:
    """Full reduction of a term dict by monic divisors; returns the remainder."""
    key = order.key
    work = dict(terms)
    heap = [(_neg_key(key(m)), m) for m in work]
    heapq.heapify(heap)
    remainder: dict = {}
    while heap:
        _, m = heapq.heappop(heap)
        c = work.pop(m, None)
        if c is None:
            continue
        hit = _find_divisor(m, basis)
        if hit is None:
            remainder[m] = c
            continue
        lm, gterms = hit
        t = mono_div(m, lm)
        for mg, cg in gterms.items():
            if mg == lm:
                continue
            mm = tuple(a + b for a, b in zip(t, mg))
            old = work.get(mm)
            if old is None:
                v = (-c * cg) % p
                if v:
                    work[mm] = v
                    heapq.heappush(heap, (_neg_key(key(mm)), mm))
            else:
                v = (old - c * cg) % p
                if v:
                    work[mm] = v
                else:
                    del work[mm]
    return remainder


def _monic_terms(f: Polynomial, order: OrderSpec) -> _Divisor:
    lm, lc = f.leading_term(order)
    inv = f.ring.field.inv(lc)
    p = f.ring.p
    return lm, {m: (c * inv) % p for m, c in f.terms.items()}


class GroebnerBasis:
    """A Gröbner basis of the ideal its elements generate, with respect to `order`."""

    def __init__(self, ring: Ring, order: OrderSpec, elements: Sequence[Polynomial], reduced: bool):
        self.ring = ring
        self.order = order
        self.elements: tuple[Polynomial, ...] = tuple(elements)
        self.reduced = reduced
        self._divisors = [_monic_terms(g, order) for g in self.elements]

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __repr__(self) -> str:
        return f"GroebnerBasis({self.order}, {len(self.elements)} elements)"

    def leading_monomials(self) -> list[Monomial]:
        return [d[0] for d in self._divisors]

    def normal_form(self, f: Polynomial) -> Polynomial:
        return Polynomial(self.ring, _reduce(f.terms, self._divisors, self.order, self.ring.p), clean=True)

    def contains(self, f: Polynomial) -> bool:
        return self.normal_form(f).is_zero

    def initial_ideal(self) -> MonomialIdeal:
        return MonomialIdeal(self.ring, self.leading_monomials())

    def graded_piece_dim(self, degree: int) -> int:
        return count_standard_monomials(self.ring, degree, self.leading_monomials())

    def is_unit(self) -> bool:
        return any(not any(lm) for lm in self.leading_monomials())

    def ideal(self) -> Ideal:
        return Ideal(self.ring, self.elements)


def _as_generators(I: Generators) -> tuple[Ring, list[Polynomial]]:
    if isinstance(I, Ideal):
        return I.ring, list(I.generators)
    polys = [f for f in I if not f.is_zero]
    if not polys:
        raise InputError("need at least one polynomial or an Ideal to fix the ring")
    return polys[0].ring, polys


def normal_form(f: Polynomial, G: Sequence[Polynomial], order: OrderSpec = DEGREVLEX) -> Polynomial:
    basis = [_monic_terms(g, order) for g in G if not g.is_zero]
    return Polynomial(f.ring, _reduce(f.terms, basis, order, f.ring.p), clean=True)


def buchberger(I: Generators, order: OrderSpec = DEGREVLEX, reduced: bool = True) -> GroebnerBasis:
    """Gröbner basis of I; reduced (and hence unique) unless reduced=False."""
    ring, gens = _as_generators(I)
    p = ring.p
    key = order.key
    degree = ring.degree

    G: list[_Divisor] = []
    for f in sorted(gens, key=lambda g: g.degree()):
        rem = _reduce(f.terms, G, order, p)
        if rem:
            G.append(_monic_terms(Polynomial(ring, rem, clean=True), order))

    pending: set[tuple[int, int]] = set()
    heap: list = []

    def add_pairs(j: int) -> None:
        for i in range(j):
            lcm = mono_lcm(G[i][0], G[j][0])
            heapq.heappush(heap, (degree(lcm), key(lcm), i, j))
            pending.add((i, j))

    for j in range(1, len(G)):
        add_pairs(j)

    reductions = zero_reductions = skipped = 0
    while heap:
        _, _, i, j = heapq.heappop(heap)
        pending.discard((i, j))
        lm_i, g_i = G[i]
        lm_j, g_j = G[j]
        if mono_coprime(lm_i, lm_j):
            skipped += 1
            continue
        lcm = mono_lcm(lm_i, lm_j)
        if _chain_criterion(i, j, lcm, G, pending):
            skipped += 1
            continue
        s = _s_polynomial(lcm, lm_i, g_i, lm_j, g_j, p)
        rem = _reduce(s, G, order, p)
        reductions += 1
        if not rem:
            zero_reductions += 1
            continue
        G.append(_monic_terms(Polynomial(ring, rem, clean=True), order))
        add_pairs(len(G) - 1)

    log.debug(
        f"Buchberger ({order}): {len(G)} elements, {reductions} reductions, "
        f"{zero_reductions} to zero, {skipped} pairs skipped"
    )
    elements = [Polynomial(ring, t, clean=True) for _, t in G]
    if not reduced:
        return GroebnerBasis(ring, order, elements, reduced=False)
    return GroebnerBasis(ring, order, _reduce_basis(ring, G, order), reduced=True)


def _chain_criterion(i: int, j: int, lcm: Monomial, G: Sequence[_Divisor], pending: set) -> bool:
    for k in range(len(G)):
        if k == i or k == j:
            continue
        if not mono_divides(G[k][0], lcm):
            continue
        if (min(i, k), max(i, k)) in pending or (min(j, k), max(j, k)) in pending:
            continue
        return True
    return False


def _s_polynomial(lcm: Monomial, lm_i: Monomial, g_i: dict, lm_j: Monomial, g_j: dict, p: int) -> dict:
    ti = mono_div(lcm, lm_i)
    tj = mono_div(lcm, lm_j)
    out: dict = {}
    for m, c in g_i.items():
        mm = tuple(a + b for a, b in zip(ti, m))
        out[mm] = c
    for m, c in g_j.items():
        mm = tuple(a + b for a, b in zip(tj, m))
        v = (out.get(mm, 0) - c) % p
        if v:
            out[mm] = v
        else:
            out.pop(mm, None)
    return out


def _reduce_basis(ring: Ring, G: Sequence[_Divisor], order: OrderSpec) -> list[Polynomial]:
    minimal: list[_Divisor] = []
    for idx, (lm, terms) in enumerate(G):
        redundant = False
        for jdx, (other, _) in enumerate(G):
            if jdx == idx or not mono_divides(other, lm):
                continue
            if other != lm or jdx < idx:
                redundant = True
                break
        if not redundant:
            minimal.append((lm, terms))
    p = ring.p
    out = []
    for idx, (lm, terms) in enumerate(minimal):
        others = minimal[:idx] + minimal[idx + 1 :]
        tail = {m: c for m, c in terms.items() if m != lm}
        rem = _reduce(tail, others, order, p)
        rem[lm] = 1
        out.append(Polynomial(ring, rem, clean=True))
    out.sort(key=lambda f: order.key(f.leading_monomial(order)))
    return out


def initial_ideal(gb: GroebnerBasis) -> MonomialIdeal:
    if not isinstance(gb, GroebnerBasis):
        raise NotAGroebnerBasisError("initial_ideal needs a GroebnerBasis")
    return gb.initial_ideal()


def graded_piece_dim(I: Ideal, degree: int, via_gb: Optional[GroebnerBasis] = None) -> int:
    gb = via_gb if via_gb is not None else I.groebner()
    return gb.graded_piece_dim(degree)


def same_ideal(A: Ideal, B: Ideal) -> bool:
    if A.ring != B.ring:
        return False
    if A.is_zero or B.is_zero:
        return A.is_zero and B.is_zero
    return set(A.groebner().elements) == set(B.groebner().elements)


# ---- elimination, quotients, saturation


def elimination_ideal(I: Generators, first_block: int) -> Ideal:
    """I ∩ k[remaining variables], as an ideal of the ring on the remaining variables."""
    ring, _ = _as_generators(I)
    gb = buchberger(I, elimination_order(first_block))
    sub = ring.with_names(ring.names[first_block:], ring.weights[first_block:])
    positions = [-1] * first_block + list(range(sub.nvars))
    kept = [g.map_to(sub, positions) for g in gb.elements if not any(g.leading_monomial(gb.order)[:first_block])]
    log.debug(f"Eliminated {ring.names[:first_block]}: {len(kept)} of {len(gb)} basis elements survive")
    return Ideal(sub, kept)


def _tagged_ring(ring: Ring) -> Ring:
    tag = "_tag"
    while tag in ring.names:
        tag += "_"
    return ring.with_names((tag,) + ring.names, (1,) + tuple(ring.weights))


def _lift(f: Polynomial, tagged: Ring) -> Polynomial:
    return f.map_to(tagged, list(range(1, tagged.nvars)))


def intersect_ideals(A: Ideal, B: Ideal) -> Ideal:
    """A ∩ B via (t·A + (1 − t)·B) ∩ k[x]."""
    if A.is_zero or B.is_zero:
        return Ideal(A.ring, [])
    tagged = _tagged_ring(A.ring)
    t = tagged.gen(0)
    one_minus_t = tagged.one() - t
    gens = [t * _lift(f, tagged) for f in A.generators]
    gens += [one_minus_t * _lift(g, tagged) for g in B.generators]
    return Ideal(A.ring, _untag(elimination_ideal(gens, 1), A.ring))


def _untag(I: Ideal, ring: Ring) -> list[Polynomial]:
    return [Polynomial(ring, g.terms, clean=True) for g in I.generators]


def divide_exact(h: Polynomial, f: Polynomial, order: OrderSpec = DEGREVLEX) -> Polynomial:
    """q with h = q·f; raises when f does not divide h."""
    p = h.ring.p
    lm_f, lc_f = f.leading_term(order)
    inv = h.ring.field.inv(lc_f)
    rest = dict(h.terms)
    quotient: dict = {}
    while rest:
        m = max(rest, key=order.key)
        if not mono_divides(lm_f, m):
            raise InputError(f"{f} does not divide {h}")
        t = mono_div(m, lm_f)
        c = (rest[m] * inv) % p
        quotient[t] = c
        for mf, cf in f.terms.items():
            mm = tuple(a + b for a, b in zip(t, mf))
            v = (rest.get(mm, 0) - c * cf) % p
            if v:
                rest[mm] = v
            else:
                rest.pop(mm, None)
    return Polynomial(h.ring, quotient, clean=True)


def ideal_quotient(I: Ideal, f: Polynomial) -> Ideal:
    """I : f."""
    if f.is_zero:
        raise ZeroPolynomialError("ideal quotient by the zero polynomial")
    if I.is_zero:
        return Ideal(I.ring, [])
    meet = intersect_ideals(I, Ideal(I.ring, [f]))
    return Ideal(I.ring, [divide_exact(h, f) for h in meet.generators])


def quotient_by_ideal(I: Ideal, J: Ideal) -> Ideal:
    """I : J = ∩_f (I : f) over the generators f of J."""
    result: Optional[Ideal] = None
    for f in J.generators:
        q = ideal_quotient(I, f)
        result = q if result is None else intersect_ideals(result, q)
    return result if result is not None else Ideal(I.ring, I.ring.gens())


def saturation(I: Ideal, J: Ideal, max_rounds: int = WORKBENCH_SATURATION_ROUNDS) -> Ideal:
    """I : J^∞, iterating quotients until the ideal stops growing."""
    current = I
    for rounds in range(max_rounds):
        quotients = []
        stable = False
        for f in J.generators:
            q = ideal_quotient(current, f)
            # current ⊆ current : J ⊆ current : f
            if same_ideal(q, current):
                stable = True
                break
            quotients.append(q)
        if stable:
            log.debug(f"Saturation stabilised after {rounds} rounds")
            return Ideal(current.ring, current.groebner().elements)
        nxt = quotients[0]
        for q in quotients[1:]:
            nxt = intersect_ideals(nxt, q)
        current = nxt
    raise SaturationLimitError(f"saturation did not stabilise within {max_rounds} rounds")


# ---- generic coordinates


def generic_coordinates(I: Ideal, rng: Optional[np.random.Generator]) -> tuple[Ideal, np.ndarray]:
    """Random invertible change of coordinates; rng=None gives the identity."""
    n = I.ring.nvars
    if rng is None:
        M = np.eye(n, dtype=np.int64)
        return I, M
    I.ring.field.check_size(n)
    M = random_invertible_matrix(rng, n, I.ring.p)
    return I.apply_linear_change(M), M


@dataclass
class GinResult:
    """Generic initial ideal accepted because independent trials agreed. Probabilistic over F_p."""

    ideal: MonomialIdeal
    matrix: np.ndarray
    basis: GroebnerBasis
    trials_run: int
    agreeing: int
    candidates: list[MonomialIdeal] = field(default_factory=list)
    probabilistic: bool = True


def generic_initial_ideal(
    I: Ideal,
    rng: np.random.Generator,
    trials: int = WORKBENCH_TRIALS,
    retries: int = WORKBENCH_GENERICITY_RETRIES,
) -> GinResult:
    if trials < 2:
        raise InputError("generic initial ideals need at least two agreeing trials")
    seen: list[tuple[MonomialIdeal, np.ndarray, GroebnerBasis]] = []
    for attempt in range(trials + retries):
        J, M = generic_coordinates(I, rng)
        gb = buchberger(J)
        gin = gb.initial_ideal()
        seen.append((gin, M, gb))
        agreeing = [s for s in seen if s[0] == gin]
        if attempt + 1 >= trials and len(agreeing) >= 2:
            first = agreeing[0]
            log.info(f"Gin accepted after {attempt + 1} trials: {len(gin)} generators")
            return GinResult(
                ideal=gin,
                matrix=first[1],
                basis=first[2],
                trials_run=attempt + 1,
                agreeing=len(agreeing),
                candidates=[s[0] for s in seen],
            )
        if attempt + 1 >= trials:
            log.warning(f"Gin trials disagree after {attempt + 1} attempts, retrying")
    raise GinInstabilityError(
        f"no two of {len(seen)} generic initial ideals agree",
        candidates=[str(s[0]) for s in seen],
    )


# ---- curves


def implicitize_curve(
    forms: Sequence[Polynomial],
    method: str = "linear",
    names: Optional[Sequence[str]] = None,
) -> Ideal:
    """Kernel of k[x0..x_m] -> k[s,t], x_i -> forms[i]."""
    if not forms:
        raise InputError("no forms to implicitize")
    source = forms[0].ring
    if source.nvars != 2:
        raise InputError("curve forms must live in a ring with two variables")
    degrees = {f.homogeneous_degree for f in forms if not f.is_zero}
    if len(degrees) != 1 or None in degrees:
        raise InputError("curve forms must be homogeneous of one common degree")
    D = degrees.pop()
    _check_nondegenerate(forms, D)
    target = source.with_names(names or [f"x{i}" for i in range(len(forms))])
    if target.nvars != len(forms):
        raise InputError("need one target variable per form")
    log.info(f"Implicitizing {len(forms)} forms of degree {D} via {method}")
    if method == "linear":
        return _implicitize_linear(forms, target, D)
    if method == "elimination":
        return _implicitize_elimination(forms, target, D)
    raise InputError(f"unknown implicitization method {method!r}")


def _check_nondegenerate(forms: Sequence[Polynomial], D: int) -> None:
    ring = forms[0].ring
    mons = ring.monomials(D)
    A = np.array([[f.terms.get(m, 0) for m in mons] for f in forms], dtype=np.int64)
    if rank_mod_p(A, ring.p) <= 1:
        raise DegenerateImageError("all forms are proportional; the image is a point")


def _implicitize_linear(forms: Sequence[Polynomial], target: Ring, D: int) -> Ideal:
    source = forms[0].ring
    p = target.p
    n = target.nvars
    images: dict[Monomial, Polynomial] = {target.one_monomial(): source.one()}
    generators: list[Polynomial] = []
    prev_basis = np.zeros((0, 1), dtype=np.int64)
    prev_mons: tuple[Monomial, ...] = (target.one_monomial(),)
    for d in range(1, D + 1):
        mons = target.monomials(d)
        index = {m: k for k, m in enumerate(mons)}
        for m in mons:
            i = next(k for k, e in enumerate(m) if e)
            images[m] = images[m[:i] + (m[i] - 1,) + m[i + 1 :]] * forms[i]
        cols = source.monomials(d * D)
        A = np.array([[images[m].terms.get(c, 0) for c in cols] for m in mons], dtype=np.int64)
        kernel = row_basis_mod_p(left_nullspace_mod_p(A, p), p)
        # degree-d part of the ideal generated in lower degrees
        lower_rows = []
        for row in prev_basis:
            for i in range(n):
                vec = np.zeros(len(mons), dtype=np.int64)
                for k, c in enumerate(row):
                    if c:
                        m = prev_mons[k]
                        vec[index[m[:i] + (m[i] + 1,) + m[i + 1 :]]] = c
                lower_rows.append(vec)
        span = row_basis_mod_p(np.array(lower_rows, dtype=np.int64), p) if lower_rows else np.zeros((0, len(mons)), dtype=np.int64)
        rank = span.shape[0]
        for vec in kernel:
            if rank == kernel.shape[0]:
                break
            trial = np.vstack([span, vec[None, :]])
            new_rank = rank_mod_p(trial, p)
            if new_rank > rank:
                span, rank = trial, new_rank
                generators.append(Polynomial(target, {mons[k]: int(c) for k, c in enumerate(vec) if c}))
        prev_basis, prev_mons = kernel, mons
        log.debug(f"degree {d}: dim I_d = {kernel.shape[0]}, {len(generators)} generators so far")
    return Ideal(target, generators)


def _implicitize_elimination(forms: Sequence[Polynomial], target: Ring, D: int) -> Ideal:
    source = forms[0].ring
    graph = source.with_names(source.names + target.names, (1, 1) + (D,) * target.nvars)
    gens = []
    for i, f in enumerate(forms):
        lifted = f.map_to(graph, [0, 1])
        gens.append(graph.gen(2 + i) - lifted)
    eliminated = elimination_ideal(gens, 2)
    kept = [Polynomial(target, g.terms, clean=True) for g in eliminated.generators]
    return Ideal(target, buchberger(Ideal(target, kept)).elements)

"""One pass from a homogeneous ideal to every invariant the checks read.

Each step runs inside a named stage; failures come out as StageError with the
stage tag and the exit code of the underlying error.
"""

import logging
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Iterator, Optional

from graded_workbench.algebra.field import child_seeds, make_rng
from graded_workbench.algebra.groebner import GinResult, GroebnerBasis, generic_initial_ideal
from graded_workbench.algebra.hilbert import (
    DimensionData,
    HilbertPolynomialData,
    HilbertSeries,
    ReductionData,
    dimension_degree,
    hilbert_polynomial,
    hilbert_series,
    reduction_number,
)
from graded_workbench.algebra.monomial_ideal import MonomialIdeal
from graded_workbench.algebra.polynomial import DEGREVLEX, Ideal, OrderSpec
from graded_workbench.algebra.resolution import (
    BettiTable,
    HomologicalInvariants,
    betti_koszul_oracle,
    betti_table,
    homological_invariants,
    minimal_free_resolution,
    resolve_betti,
)
from graded_workbench.errors import InputError, StageError, WorkbenchError
from graded_workbench.settings import WORKBENCH_SEED, WORKBENCH_TRIALS

log = logging.getLogger(__name__)


@contextmanager
def stage(name: str, timings: dict[str, float]) -> Iterator[None]:
    start = time.perf_counter()
    log.debug(f"stage {name}: start")
    try:
        yield
    except StageError:
        raise
    except WorkbenchError as e:
        log.error(f"stage {name} failed: {e}")
        raise StageError(name, e) from e
    finally:
        timings[name] = round(time.perf_counter() - start, 4)


@dataclass
class IdealAnalysis:
    ideal: Ideal
    order: OrderSpec
    gb: GroebnerBasis
    initial: MonomialIdeal
    hilbert: HilbertSeries
    dims: DimensionData
    hilbert_poly: Optional[HilbertPolynomialData]
    betti: BettiTable
    initial_betti: BettiTable
    invariants: HomologicalInvariants
    reduction: Optional[ReductionData] = None
    gin: Optional[GinResult] = None
    oracle_betti: Optional[BettiTable] = None
    seed: int = WORKBENCH_SEED
    timings: dict[str, float] = field(default_factory=dict)

    @property
    def num_vars(self) -> int:
        return self.ideal.ring.nvars

    @property
    def e(self) -> int:
        return self.dims.codim

    @property
    def r(self) -> Optional[int]:
        return self.reduction.r if self.reduction is not None else None

    @property
    def degrevlex_initial(self) -> MonomialIdeal:
        if self.order == DEGREVLEX:
            return self.initial
        return self.ideal.groebner(DEGREVLEX).initial_ideal()


def analyze_ideal(
    I: Ideal,
    seed: int = WORKBENCH_SEED,
    *,
    order: OrderSpec = DEGREVLEX,
    oracle: bool = False,
    trials: int = WORKBENCH_TRIALS,
    gin: bool = True,
) -> IdealAnalysis:
    """Gröbner basis, Hilbert data, minimal Betti table, reduction number and Gin of I.

    The reduction number and Gin draw from independent child seeds of `seed`.
    """
    timings: dict[str, float] = {}
    reduction_seed, gin_seed = child_seeds(seed, 2)
    log.info(f"analyzing {len(I)} generators in {I.ring.nvars} variables over F_{I.ring.p} (seed {seed})")

    with stage("groebner", timings):
        gb = I.groebner(order)
        initial = gb.initial_ideal()
    with stage("hilbert", timings):
        hs = hilbert_series(initial)
        dims = dimension_degree(hs)
        if dims.unit_ideal:
            raise InputError("the ideal is the whole ring")
        hp = hilbert_polynomial(hs) if dims.krull_dim >= 1 else None
    with stage("resolution", timings):
        bt = betti_table(minimal_free_resolution(I, order))
        initial_bt = resolve_betti(initial.to_ideal())
        invariants = homological_invariants(bt, I.ring.nvars, dims.krull_dim)
    log.info(
        f"deg {dims.degree}, codim {dims.codim}, pdim {invariants.pdim}, depth {invariants.depth}, reg {invariants.reg}"
    )

    analysis = IdealAnalysis(
        ideal=I,
        order=order,
        gb=gb,
        initial=initial,
        hilbert=hs,
        dims=dims,
        hilbert_poly=hp,
        betti=bt,
        initial_betti=initial_bt,
        invariants=invariants,
        seed=seed,
        timings=timings,
    )
    with stage("reduction", timings):
        analysis.reduction = reduction_number(
            I, make_rng(reduction_seed), trials=trials, krull_dim=dims.krull_dim
        )
    if gin:
        with stage("gin", timings):
            analysis.gin = generic_initial_ideal(I, make_rng(gin_seed), trials=trials)
    if oracle:
        with stage("oracle", timings):
            analysis.oracle_betti = betti_koszul_oracle(I, row_cap=initial_bt.reg)
    return analysis

"""Random search for almost maximal curves in P^3.

Trials run concurrently (a process pool, or threads for a single worker);
hits go through one lock that checks the keys already in the sink and appends to the
JSONL sink.
"""

import asyncio
import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, List, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from graded_workbench.algebra.field import child_seeds, make_rng
from graded_workbench.cli.ideal_file import curve_ideal
from graded_workbench.cli.report import echo_ideal, run_analysis
from graded_workbench.db import WitnessDB, witness_key
from graded_workbench.errors import InputError, WorkbenchError
from graded_workbench.settings import (
    SEARCH_SPACE,
    WORKBENCH_CHAR,
    WORKBENCH_SEARCH_DB,
    WORKBENCH_SEARCH_SINK,
    WORKBENCH_SEARCH_WORKERS,
    WORKBENCH_TRIALS,
)
from graded_workbench.utils.json_utils import append_jsonl, read_jsonl

log = logging.getLogger(__name__)


class SearchSpace(BaseModel):
    """Binary forms of one degree in s, t; `candidates` replaces sampling with a fixed list."""

    model_config = ConfigDict(strict=True, extra="forbid")

    degree: int = Field(5, ge=1)
    terms: int = Field(2, ge=1)
    coefficients: List[int] = Field(default_factory=lambda: [1], min_length=1)
    fixed_ends: bool = True
    candidates: Optional[List[str]] = Field(None, min_length=1)


def build_space(overrides: Optional[Any] = None) -> SearchSpace:
    """WORKBENCH_SEARCH_SPACE with `overrides` applied, validated strictly."""
    if overrides is not None and not isinstance(overrides, dict):
        raise InputError(f"a search space must be a JSON object, got {type(overrides).__name__}")
    try:
        return SearchSpace.model_validate({**SEARCH_SPACE, **(overrides or {})})
    except ValidationError as e:
        problems = "; ".join(f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in e.errors())
        raise InputError(f"invalid search space: {problems}") from None


def _random_form(space: SearchSpace, rng) -> str:
    D = space.degree
    count = min(space.terms, D + 1)
    exps = sorted(rng.choice(D + 1, size=count, replace=False).tolist(), reverse=True)
    pieces = []
    for a in exps:
        c = int(space.coefficients[int(rng.integers(0, len(space.coefficients)))])
        mono = "*".join(p for p in (f"s^{a}" if a else "", f"t^{D - a}" if D - a else "") if p)
        pieces.append(mono if c == 1 else f"{c}*{mono}")
    return " + ".join(pieces)


def sample_forms(space: SearchSpace, rng) -> str:
    if space.candidates:
        return space.candidates[int(rng.integers(0, len(space.candidates)))]
    D = space.degree
    if space.fixed_ends:
        forms = [f"s^{D}", _random_form(space, rng), _random_form(space, rng), f"t^{D}"]
    else:
        forms = [_random_form(space, rng) for _ in range(4)]
    return ", ".join(forms)


def run_trial(space: dict, seed: int, char: int, trials: int = WORKBENCH_TRIALS) -> dict[str, Any]:
    """One sampled parametrization, analyzed end to end. Runs in a worker process."""
    sample_seed, analysis_seed = child_seeds(seed, 2)
    forms = sample_forms(SearchSpace(**space), make_rng(sample_seed))
    outcome: dict[str, Any] = {"seed": seed, "forms": forms, "hit": False}
    try:
        ideal = curve_ideal(forms, char)
        report = run_analysis(ideal, echo_ideal(ideal, "curve", forms), analysis_seed, trials=trials)
    except WorkbenchError as e:
        outcome["error"] = f"{type(e).__name__}: {e}"
        return outcome
    cls = report.classification
    outcome.update(
        hit=cls.status == "AlmostMaximal",
        status=cls.status,
        e=cls.e,
        r=cls.r,
        betti=[list(x) for x in report.betti.table["entries"]],
        cwl=report.cwl.report.overall,
        report=json.loads(report.to_json()),
    )
    return outcome


def reverify(record: dict, char: Optional[int] = None, trials: int = WORKBENCH_TRIALS) -> bool:
    """Re-run the analysis of a stored witness and compare with its stored report."""
    report = record["report"]
    forms = report["input"]["source"]
    ideal = curve_ideal(forms, char if char is not None else report["char"])
    again = run_analysis(ideal, echo_ideal(ideal, "curve", forms), report["seed"], trials=trials)
    return json.loads(again.to_json()) == report


@dataclass
class SearchResult:
    hits: list[dict] = field(default_factory=list)
    trials_run: int = 0
    duplicates: int = 0
    errors: int = 0
    aborted: bool = False
    error: Optional[str] = None


def recorded_keys(sink: Path, db: WitnessDB) -> set[str]:
    """Keys already in the sink. Lines missing from the index are added to it."""
    try:
        lines = read_jsonl(sink)
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as e:
        raise InputError(f"cannot read the witness sink {sink}: {e}") from e
    keys = set()
    for line in lines:
        key = line.get("key")
        if key is None:
            continue
        keys.add(key)
        if not db.has_witness(key):
            db.add_witness(line["e"], line["r"], line["betti"], line["cwl"], [line["forms"]], line["seed"])
            log.info(f"index was missing witness {key} from {sink}, added")
    return keys


async def run_search(
    space: SearchSpace,
    budget: int,
    seed: int,
    sink: str | Path = WORKBENCH_SEARCH_SINK,
    db_path: str = WORKBENCH_SEARCH_DB,
    char: int = WORKBENCH_CHAR,
    workers: int = WORKBENCH_SEARCH_WORKERS,
    trials: int = WORKBENCH_TRIALS,
    on_hit: Optional[Callable[[dict], None]] = None,
) -> SearchResult:
    """Run `budget` trials; each new witness is appended to the sink, then passed to `on_hit`.

    The sink decides what counts as a duplicate; the sqlite index follows it.
    """
    if budget < 0:
        raise InputError("the search budget must be non-negative")
    sink = Path(sink)
    sink.parent.mkdir(parents=True, exist_ok=True)
    sink.touch()
    Path(db_path).parent.mkdir(parents=True, exist_ok=True)
    db = WitnessDB(str(db_path))
    seen = recorded_keys(sink, db)
    result = SearchResult()
    if budget == 0:
        log.info("empty budget, nothing to search")
        return result

    semaphore = asyncio.Semaphore(max(1, workers))
    sink_lock = asyncio.Lock()
    executor = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    payload = space.model_dump()

    async def record(outcome: dict) -> None:
        async with sink_lock:
            if result.aborted:
                return
            key = witness_key(outcome["e"], outcome["r"], outcome["betti"])
            if key in seen:
                result.duplicates += 1
                log.debug(f"duplicate witness {key} from seed {outcome['seed']}")
                return
            line = {"schema": 1, "key": key, **{k: outcome[k] for k in ("seed", "forms", "e", "r", "cwl", "betti", "report")}}
            try:
                append_jsonl(sink, line)
            except OSError as e:
                result.aborted = True
                result.error = str(e)
                log.error(f"cannot write to {sink}: {e}; stopping with {len(result.hits)} hits kept")
                return
            seen.add(key)
            db.add_witness(outcome["e"], outcome["r"], outcome["betti"], outcome["cwl"], [outcome["forms"]], outcome["seed"])
            result.hits.append(line)
            log.info(f"witness {key}: e={outcome['e']}, r={outcome['r']}, cwl={outcome['cwl']} ({outcome['forms']})")
            if on_hit is not None:
                on_hit(line)

    async def one(trial_seed: int) -> None:
        async with semaphore:
            if result.aborted:
                return
            if executor is not None:
                loop = asyncio.get_running_loop()
                outcome = await loop.run_in_executor(executor, run_trial, payload, trial_seed, char, trials)
            else:
                outcome = await asyncio.to_thread(run_trial, payload, trial_seed, char, trials)
        result.trials_run += 1
        if "error" in outcome:
            result.errors += 1
            log.warning(f"trial {trial_seed} ({outcome['forms']}): {outcome['error']}")
        elif outcome["hit"]:
            await record(outcome)

    log.info(f"searching {budget} parametrizations of degree {space.degree} with {workers} workers")
    try:
        await asyncio.gather(*(one(s) for s in child_seeds(seed, budget)))
    finally:
        if executor is not None:
            executor.shutdown()
    log.info(f"search done: {result.trials_run} trials, {len(result.hits)} new witnesses, {result.duplicates} duplicates")
    return result

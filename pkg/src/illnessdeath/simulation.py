"""Cohort generators and the Monte-Carlo bias/variance harness.

The synthetic law is deliberately non-Markov: illness onset is exponential,
a fixed fraction of subjects pass through the illness state, and their total
lifetime is a deterministic multiple of the onset time, so the past (the
onset time) carries information about the future.  Occupation probabilities
under this law have a closed form, which the harness uses as the truth when
tabulating bias.

Reproducibility contract: replication r of a run with seed q draws from
``numpy.random.Philox`` keyed by ``SeedSequence((q, r))``, and within a
replication the draw order is onset times, illness marks, censoring spans,
then the two normal blocks of the entry sampler.  Results therefore depend
only on (seed, r), never on how replications are scheduled across workers.
"""

from __future__ import annotations

import math
import os
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import IO, Callable, Sequence

import numpy as np

from .errors import DegenerateCohort, EstimationError
from .estimators import (
    p01_aalen_johansen,
    p01_cif_ratio,
    p01_km_integral,
    p01_landmark,
)
from .records import Cause, IllnessDeathRecord, TransitionQuery

DEFAULT_SEED = 26
DEFAULT_EVAL_TIMES = (30.0, 40.0, 50.0, 60.0, 70.0, 80.0, 90.0, 100.0)
DEFAULT_LANDMARK = 10.0
WORKERS_ENV = "ILLNESSDEATH_WORKERS"


@dataclass(frozen=True)
class TruncationConfig:
    """Skew-normal study-entry law, clamped at the time origin."""

    location: float = -5.0
    scale: float = 10.0
    shape: float = 10.0

    def __post_init__(self) -> None:
        if not (self.scale > 0):
            raise ValueError("truncation scale must be positive")


@dataclass(frozen=True)
class ScenarioConfig:
    """Parameters of one simulated study."""

    n: int = 100
    hazard_ill: float = 0.039
    hazard_direct: float = 0.026
    progression_factor: float = 1.7
    censor_hazard: float = 0.013
    truncation: TruncationConfig | None = None
    seed: int = DEFAULT_SEED
    replications: int = 1000

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if not (self.hazard_ill > 0 and self.hazard_direct > 0):
            raise ValueError("transition hazards must be positive")
        if self.censor_hazard < 0:
            raise ValueError("censor hazard must be >= 0 (0 disables censoring)")
        if not (self.progression_factor > 1):
            raise ValueError("progression factor must exceed 1")
        if self.replications < 1:
            raise ValueError("replications must be >= 1")
        if self.seed < 0:
            raise ValueError("seed must be >= 0")


def _rng(seed: int, rep_index: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence((seed, rep_index))))


def _skew_normal(
    rng: np.random.Generator, n: int, cfg: TruncationConfig
) -> np.ndarray:
    # delta representation: |N(0,1)| tilts a second independent normal
    delta = cfg.shape / math.sqrt(1 + cfg.shape**2)
    u0 = rng.standard_normal(n)
    u1 = rng.standard_normal(n)
    return cfg.location + cfg.scale * (
        delta * np.abs(u0) + math.sqrt(1 - delta * delta) * u1
    )


def true_p01(
    query: TransitionQuery,
    hazard_ill: float = 0.039,
    hazard_direct: float = 0.026,
    progression_factor: float = 1.7,
) -> float:
    """Closed-form illness occupation probability under the simulated law.

    A subject occupies the illness state at t iff it is of the illness kind
    with onset in (max(s, t/factor), t]; conditioning on state 0 at s divides
    by the onset survival at s.
    """
    lam = hazard_ill + hazard_direct
    share = hazard_ill / lam
    lower = max(query.s, query.t / progression_factor)
    if lower >= query.t:
        return 0.0
    return (
        share
        * (math.exp(-lam * lower) - math.exp(-lam * query.t))
        / math.exp(-lam * query.s)
    )


def simulate_cohort(
    config: ScenarioConfig, rep_index: int = 0
) -> list[IllnessDeathRecord]:
    """Draw one cohort; retained subjects are those alive at study entry.

    Under truncation a subject enters the study at the clamped skew-normal
    time L and is retained iff L precedes its absorption time; a subject
    whose illness onset precedes L is recruited during illness and carries
    exit0 <= entry.  Censoring runs from study entry, so every retained
    subject is observed for a positive span.
    """
    rng = _rng(config.seed, rep_index)
    n = config.n
    lam = config.hazard_ill + config.hazard_direct
    onset = rng.exponential(1 / lam, n)
    ill = rng.random(n) < config.hazard_ill / lam
    if config.censor_hazard > 0:
        span = rng.exponential(1 / config.censor_hazard, n)
    else:
        span = np.full(n, np.inf)
    if config.truncation is not None:
        entry = np.maximum(_skew_normal(rng, n, config.truncation), 0.0)
    else:
        entry = np.zeros(n)
    absorb = np.where(ill, config.progression_factor * onset, onset)

    cohort = []
    for i in range(n):
        if entry[i] >= absorb[i]:
            continue
        ident = f"r{rep_index}s{i}"
        cens = entry[i] + span[i]
        if not ill[i]:
            if absorb[i] <= cens:
                rec = IllnessDeathRecord(ident, entry[i], absorb[i], Cause.ABSORBED)
            else:
                rec = IllnessDeathRecord(ident, entry[i], cens, Cause.CENSORED)
        elif onset[i] <= cens:
            # covers recruitment during illness too: onset <= entry < cens
            end = min(absorb[i], cens)
            cause = Cause.ABSORBED if absorb[i] <= cens else Cause.CENSORED
            rec = IllnessDeathRecord(ident, entry[i], onset[i], Cause.ILL, end, cause)
        else:
            rec = IllnessDeathRecord(ident, entry[i], cens, Cause.CENSORED)
        cohort.append(rec)
    if not cohort:
        raise DegenerateCohort(f"replication {rep_index} retained no subjects")
    return cohort


def simulate_markov_cohort(
    n: int,
    hazard_ill: float = 0.039,
    hazard_direct: float = 0.026,
    hazard_progression: float = 0.05,
    censor_hazard: float = 0.0,
    seed: int = DEFAULT_SEED,
    rep_index: int = 0,
) -> list[IllnessDeathRecord]:
    """Draw a cohort from an actual Markov law (exponential sojourns).

    Useful as a positive control: on such data the occupation-probability
    estimator and the landmark estimator target the same quantity.
    """
    if min(n, hazard_ill, hazard_direct, hazard_progression) <= 0:
        raise ValueError("n and all transition hazards must be positive")
    if censor_hazard < 0:
        raise ValueError("censor hazard must be >= 0")
    rng = _rng(seed, rep_index)
    lam = hazard_ill + hazard_direct
    onset = rng.exponential(1 / lam, n)
    ill = rng.random(n) < hazard_ill / lam
    sojourn = rng.exponential(1 / hazard_progression, n)
    if censor_hazard > 0:
        cens = rng.exponential(1 / censor_hazard, n)
    else:
        cens = np.full(n, np.inf)
    absorb = np.where(ill, onset + sojourn, onset)
    cohort = []
    for i in range(n):
        ident = f"r{rep_index}s{i}"
        if not ill[i]:
            if absorb[i] <= cens[i]:
                cohort.append(IllnessDeathRecord(ident, 0.0, absorb[i], Cause.ABSORBED))
            else:
                cohort.append(IllnessDeathRecord(ident, 0.0, cens[i], Cause.CENSORED))
        elif onset[i] <= cens[i]:
            end = min(absorb[i], cens[i])
            cause = Cause.ABSORBED if absorb[i] <= cens[i] else Cause.CENSORED
            cohort.append(
                IllnessDeathRecord(ident, 0.0, onset[i], Cause.ILL, end, cause)
            )
        else:
            cohort.append(IllnessDeathRecord(ident, 0.0, cens[i], Cause.CENSORED))
    return cohort


def markov_true_p01(
    query: TransitionQuery,
    hazard_ill: float = 0.039,
    hazard_direct: float = 0.026,
    hazard_progression: float = 0.05,
) -> float:
    """Closed-form occupation probability for the Markov control law."""
    lam = hazard_ill + hazard_direct
    if lam == hazard_progression:
        return (
            hazard_ill
            * (query.t - query.s)
            * math.exp(-hazard_progression * (query.t - query.s))
        )
    gap = query.t - query.s
    return (
        hazard_ill
        / (lam - hazard_progression)
        * (math.exp(-hazard_progression * gap) - math.exp(-lam * gap))
    )


# ---------------------------------------------------------------------------
# Monte-Carlo harness

ESTIMATORS: dict[str, Callable[[Sequence[IllnessDeathRecord], TransitionQuery], float]]
ESTIMATORS = {
    "check": p01_landmark,
    "mm": p01_cif_ratio,
    "mm-stute": p01_km_integral,
    "aj": p01_aalen_johansen,
}


@dataclass(frozen=True)
class BiasVarianceRow:
    estimator: str
    s: float
    t: float
    bias: float
    variance: float
    n_effective: int
    n_excluded: int


@dataclass(frozen=True)
class BiasVarianceTable:
    rows: tuple[BiasVarianceRow, ...]
    mean_cohort_size: float
    config: ScenarioConfig
    landmark: float

    def to_csv(self, sink: IO[str]) -> None:
        sink.write("estimator,s,t,bias,variance,n_effective,n_excluded\n")
        for r in self.rows:
            sink.write(
                f"{r.estimator},{r.s:.12g},{r.t:.12g},{r.bias:.12g},"
                f"{r.variance:.12g},{r.n_effective},{r.n_excluded}\n"
            )


def _mc_replication(args) -> tuple[int, int, list[float | None]]:
    config, rep_index, estimators, landmark, eval_times = args
    try:
        cohort = simulate_cohort(config, rep_index)
    except DegenerateCohort:
        return rep_index, 0, [None] * (len(estimators) * len(eval_times))
    cells: list[float | None] = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for name in estimators:
            fn = ESTIMATORS[name]
            for t in eval_times:
                try:
                    cells.append(float(fn(cohort, TransitionQuery(landmark, t))))
                except EstimationError:
                    cells.append(None)
    return rep_index, len(cohort), cells


def _worker_count(workers: int | None) -> int:
    if workers is not None:
        return max(1, workers)
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def run_monte_carlo(
    config: ScenarioConfig,
    estimators: Sequence[str] = ("check", "mm"),
    eval_times: Sequence[float] = DEFAULT_EVAL_TIMES,
    landmark: float = DEFAULT_LANDMARK,
    workers: int | None = None,
) -> BiasVarianceTable:
    """Tabulate bias and variance of the chosen estimators against truth.

    Replications where an estimator fails at some t (empty landmark, zero
    denominator, dead risk set) are excluded from that cell only and counted
    in n_excluded.  The result is a deterministic function of the config and
    arguments; the worker count only schedules work.
    """
    unknown = [e for e in estimators if e not in ESTIMATORS]
    if unknown:
        raise ValueError(f"unknown estimator(s): {', '.join(unknown)}")
    times = list(eval_times)
    if any(t < landmark for t in times):
        raise ValueError("every evaluation time must be >= the landmark")
    tasks = [
        (config, rep, tuple(estimators), landmark, tuple(times))
        for rep in range(config.replications)
    ]
    nworkers = _worker_count(workers)
    if nworkers > 1 and len(tasks) > 1:
        chunk = max(1, len(tasks) // (nworkers * 8))
        with ProcessPoolExecutor(max_workers=nworkers) as pool:
            outcomes = list(pool.map(_mc_replication, tasks, chunksize=chunk))
    else:
        outcomes = [_mc_replication(t) for t in tasks]
    outcomes.sort(key=lambda item: item[0])

    sizes = [size for _, size, _ in outcomes]
    if all(size == 0 for size in sizes):
        raise DegenerateCohort("every replication retained no subjects")
    rows = []
    for e_idx, name in enumerate(estimators):
        for t_idx, t in enumerate(times):
            flat = e_idx * len(times) + t_idx
            values = [
                cells[flat] for _, _, cells in outcomes if cells[flat] is not None
            ]
            excluded = config.replications - len(values)
            truth = true_p01(
                TransitionQuery(landmark, t),
                config.hazard_ill,
                config.hazard_direct,
                config.progression_factor,
            )
            arr = np.asarray(values, dtype=float)
            bias = float(arr.mean()) - truth if len(arr) else math.nan
            variance = float(arr.var(ddof=1)) if len(arr) > 1 else math.nan
            rows.append(
                BiasVarianceRow(name, landmark, t, bias, variance, len(arr), excluded)
            )
    return BiasVarianceTable(
        rows=tuple(rows),
        mean_cohort_size=float(np.mean(sizes)),
        config=config,
        landmark=landmark,
    )


# ---------------------------------------------------------------------------
# named study designs


@dataclass(frozen=True)
class Scenario:
    """A config bundled with the estimators and grid it is reported on."""

    config: ScenarioConfig
    estimators: tuple[str, ...]
    eval_times: tuple[float, ...] = DEFAULT_EVAL_TIMES
    landmark: float = DEFAULT_LANDMARK


def preset(
    name: str,
    n: int | None = None,
    replications: int | None = None,
    seed: int | None = None,
) -> Scenario:
    """Named designs: light/heavy censoring and the left-truncated study."""
    base = {
        "table1": (ScenarioConfig(censor_hazard=0.013), ("check", "mm", "aj")),
        "table2": (ScenarioConfig(censor_hazard=0.035), ("check", "mm", "aj")),
        "table3": (
            ScenarioConfig(censor_hazard=0.013, truncation=TruncationConfig()),
            ("aj", "check"),
        ),
    }
    if name not in base:
        raise ValueError(f"unknown scenario {name!r}; choose from {sorted(base)}")
    config, estimators = base[name]
    overrides = {}
    if n is not None:
        overrides["n"] = n
    if replications is not None:
        overrides["replications"] = replications
    if seed is not None:
        overrides["seed"] = seed
    if overrides:
        config = replace(config, **overrides)
    return Scenario(config=config, estimators=estimators)

"""Nonparametric estimators of the illness transition probability.

Every estimator targets P01(s, t): the probability of occupying the illness
state at time t given occupancy of the initial state at time s, without any
Markov assumption.  Estimators accept cohorts of IllnessDeathRecord and a
TransitionQuery, and return floats by default.  With ``exact=True`` all
arithmetic runs in fractions.Fraction, which makes algebraic identities
between the different representations testable to equality rather than
tolerance.

Conventions shared by all routines: at tied times, events precede
censorings; any hazard increment with an empty risk set contributes a unit
factor; products over an empty index set are 1 and sums 0.
"""

from __future__ import annotations

import warnings
from bisect import bisect_left
from fractions import Fraction
from typing import Iterable, Sequence

from .counting import CountingProcesses, StepFunction, build_counting
from .errors import (
    DegenerateWeight,
    EmptyLandmark,
    RangeWarning,
    SupportWarning,
    ZeroDenominator,
)
from .records import (
    Cause,
    IllnessDeathRecord,
    TransitionQuery,
    landmark_subset,
)

Number = float | Fraction


def _one(exact: bool) -> Number:
    return Fraction(1) if exact else 1.0


def _ratio(num: int, den: int, exact: bool) -> Number:
    return Fraction(num, den) if exact else num / den


def kaplan_meier(cp: CountingProcesses, horizon: float, exact: bool = False) -> Number:
    """Product-limit probability of still occupying state 0 at `horizon`.

    The product runs over observed state-0 exit times up to and including
    the horizon; a time with an empty risk set contributes nothing.
    """
    out = _one(exact)
    for i, v in enumerate(cp.times):
        if v > horizon:
            break
        if cp.dn0[i] and cp.y0[i]:
            out *= 1 - _ratio(cp.dn0[i], cp.y0[i], exact)
    return out


def kaplan_meier_curve(cp: CountingProcesses) -> StepFunction:
    """State-0 survival as a right-continuous step function."""
    times, values = [], []
    out = 1.0
    for i, v in enumerate(cp.times):
        if cp.dn0[i] and cp.y0[i]:
            out *= 1 - cp.dn0[i] / cp.y0[i]
            times.append(v)
            values.append(out)
    return StepFunction(1.0, tuple(times), tuple(values))


def _warn_censored_tail(cp: CountingProcesses) -> None:
    last_event = None
    last_cens = None
    for i in range(len(cp.times) - 1, -1, -1):
        if last_event is None and (cp.dn1[i] or cp.dn2[i]):
            last_event = cp.times[i]
        if last_cens is None and cp.dnc[i]:
            last_cens = cp.times[i]
        if last_event is not None and last_cens is not None:
            break
    if last_cens is not None and (last_event is None or last_cens >= last_event):
        warnings.warn(
            "largest observation is censored; the incidence limit is only "
            "partially identified",
            SupportWarning,
            stacklevel=3,
        )


def cif_limit(cp: CountingProcesses, exact: bool = False, warn: bool = True) -> Number:
    """Limit of the cumulative incidence of kind-1 observations.

    One forward pass: at each time, first credit the kind-1 mass weighted by
    the survival of the pooled event process strictly before that time, then
    absorb the time's events into the survival factor.
    """
    if warn:
        _warn_censored_tail(cp)
    total = _one(exact) * 0
    surv = _one(exact)
    for i in range(len(cp.times)):
        y = cp.y[i]
        if not y:
            continue
        if cp.dn1[i]:
            total += surv * _ratio(cp.dn1[i], y, exact)
        d = cp.dn(i)
        if d:
            surv *= 1 - _ratio(d, y, exact)
    return total


def cif_curve(cp: CountingProcesses) -> StepFunction:
    """Partial sums of the incidence limit as a step function."""
    times, values = [], []
    total, surv = 0.0, 1.0
    for i, v in enumerate(cp.times):
        y = cp.y[i]
        if not y:
            continue
        if cp.dn1[i]:
            total += surv * (cp.dn1[i] / y)
            times.append(v)
            values.append(total)
        d = cp.dn(i)
        if d:
            surv *= 1 - d / y
    return StepFunction(0.0, tuple(times), tuple(values))


def p01_cif_ratio(
    cohort: Sequence[IllnessDeathRecord],
    query: TransitionQuery,
    exact: bool = False,
) -> Number:
    """Full-cohort estimator: incidence limit over state-0 survival at s.

    Consistent without any Markov assumption when entry is universal at the
    origin.  Warns (RangeWarning) if the ratio exceeds one, which can happen
    in small samples because numerator and denominator are estimated from
    different processes.
    """
    cp = build_counting(cohort, query)
    den = kaplan_meier(cp, query.s, exact=exact)
    if den == 0:
        raise ZeroDenominator(f"estimated state-0 survival at s={query.s} is zero")
    num = cif_limit(cp, exact=exact)
    out = num / den
    if out > 1:
        warnings.warn(
            f"ratio estimate {float(out):.6g} exceeds 1", RangeWarning, stacklevel=2
        )
    return out


def p01_km_integral(
    cohort: Sequence[IllnessDeathRecord],
    query: TransitionQuery,
    exact: bool = False,
) -> Number:
    """Ordered-weights form of the full-cohort ratio estimator.

    Subjects are ranked by final observed time, events before censorings at
    ties and record id as the last resort; the i-th subject carries the
    product-limit jump mass.  Algebraically identical to p01_cif_ratio under
    these tie rules, which ``exact=True`` makes checkable to equality.
    """
    cp = build_counting(cohort, query)
    den = kaplan_meier(cp, query.s, exact=exact)
    if den == 0:
        raise ZeroDenominator(f"estimated state-0 survival at s={query.s} is zero")
    order = sorted(cohort, key=lambda r: (r.final_time, not r.observed, r.id))
    n = len(order)
    num = _one(exact) * 0
    surv = _one(exact)
    for rank, r in enumerate(order, start=1):
        if not r.observed:
            continue
        mass = surv * _ratio(1, n - rank + 1, exact)
        if r.cause0 is Cause.ILL and query.s < r.exit0 <= query.t < r.final_time:
            num += mass
        surv *= 1 - _ratio(1, n - rank + 1, exact)
    return num / den


def cif_limit_ipcw(
    cohort: Sequence[IllnessDeathRecord],
    query: TransitionQuery,
    exact: bool = False,
) -> Number:
    """Incidence limit as an inverse-censoring-weighted average.

    Requires full recruitment at the origin.  Each kind-1 observation is
    weighted by the inverse product-limit censoring survival just before its
    time; censoring hazards use the post-event risk set so tied events take
    precedence.  Identical to cif_limit on the same cohort.
    """
    cp = build_counting(cohort, query)
    if cp.y_origin != cp.size:
        raise ValueError("weighted form requires every entry at the origin")
    total = _one(exact) * 0
    g = _one(exact)
    for i in range(len(cp.times)):
        if cp.dn1[i]:
            if g == 0:
                raise DegenerateWeight(
                    "censoring weight vanished before the last kind-1 event"
                )
            total += _ratio(cp.dn1[i], 1, exact) / g
        if cp.dnc[i]:
            denom = cp.y[i] - cp.dn(i)
            if denom:
                g *= 1 - _ratio(cp.dnc[i], denom, exact)
            else:
                g = g * 0
    return total / cp.y_origin


def tsai_crowley_weight(
    cohort: Sequence[IllnessDeathRecord],
    query: TransitionQuery,
    u: float,
    exact: bool = False,
) -> Number:
    """Two-block product estimate of remaining jointly uncensored mass at u.

    The first block accumulates state-0 censoring up to the landmark s, the
    second block censoring of the landmark subset's pooled process strictly
    inside (s, u).  Factors condition on the post-event risk set at ties.
    """
    cp = build_counting(cohort, query)
    out = _one(exact)
    for i, v in enumerate(cp.times):
        if v > query.s:
            break
        if cp.dn0c[i]:
            out *= 1 - _ratio(cp.dn0c[i], cp.y0[i] - cp.dn0[i], exact)
    if u <= query.s:
        return out
    sub = build_counting(cohort, query, landmark=True)
    for i, v in enumerate(sub.times):
        if v >= u:
            break
        if sub.dnc[i]:
            out *= 1 - _ratio(sub.dnc[i], sub.y[i] - sub.dn(i), exact)
    return out


def p01_landmark(
    cohort: Sequence[IllnessDeathRecord],
    query: TransitionQuery,
    exact: bool = False,
) -> Number:
    """Landmark estimator: incidence limit on the subset in state 0 at s.

    Robust to left-truncation because conditioning on the landmark makes
    the question one about the subset's own future.  Raises EmptyLandmark
    when no subject is under observation in state 0 at s.
    """
    cp = build_counting(cohort, query, landmark=True)
    return cif_limit(cp, exact=exact)


def p01_landmark_variance(
    cohort: Sequence[IllnessDeathRecord],
    query: TransitionQuery,
    exact: bool = False,
) -> Number:
    """Plug-in variance of the landmark estimator.

    Sums squared influence of each pooled-process jump: a kind-1 jump at u
    perturbs by the mass not yet committed (one minus the remaining
    incidence), a kind-2 jump by the remaining incidence itself, both scaled
    by the survival factor through u.  The remaining incidence is built by
    one backward recursion over the grid.
    """
    cp = build_counting(cohort, query, landmark=True)
    one = _one(exact)
    zero = one * 0
    m = len(cp.times)
    remaining = [zero] * m
    acc = zero
    for i in range(m - 2, -1, -1):
        j = i + 1
        y = cp.y[j]
        if y:
            acc = _ratio(cp.dn1[j], y, exact) + (1 - _ratio(cp.dn(j), y, exact)) * acc
        remaining[i] = acc
    var = zero
    surv = one
    for i in range(m):
        y = cp.y[i]
        if not y:
            continue
        surv *= 1 - _ratio(cp.dn(i), y, exact)
        if cp.dn1[i]:
            tail = 1 - remaining[i]
            var += surv * surv * tail * tail * _ratio(cp.dn1[i], y, exact)
        if cp.dn2[i]:
            committed = surv * remaining[i]
            var += committed * committed * _ratio(cp.dn2[i], y, exact)
    return var


def risk_set_stability(
    cohort: Sequence[IllnessDeathRecord], query: TransitionQuery
) -> float:
    """Smallest pooled risk set inside (s, t], relative to the landmark size.

    A diagnostic for the landmark estimator: values near zero mean the tail
    of the window is supported by very few subjects.
    """
    cp = build_counting(cohort, query, landmark=True)
    base = cp.y_origin
    worst = 1.0
    for i, v in enumerate(cp.times):
        if v > query.t:
            break
        worst = min(worst, cp.y[i] / base)
    return worst


def p01_aalen_johansen(
    cohort: Sequence[IllnessDeathRecord],
    query: TransitionQuery,
    exact: bool = False,
) -> Number:
    """Markov occupation-probability estimator of the same quantity.

    Propagates (state-0, state-1) occupation probabilities through the
    empirical transition hazards on (s, t].  Consistent when the process is
    Markov; used as a comparator because it remains computable, and biased,
    when it is not.  Handles delayed entry into either living state.  A
    subject whose illness and absorption are tied never enters the illness
    risk set and contributes no illness exit.
    """
    records = list(cohort)
    if not landmark_subset(records, query.s):
        raise EmptyLandmark(f"no subject in state 0 at s={query.s}")
    entries0, exit0s = [], []
    starts1, exit1s = [], []
    d01: dict[float, int] = {}
    d02: dict[float, int] = {}
    d12: dict[float, int] = {}
    for r in records:
        if not r.entered_ill:
            entries0.append(r.entry)
            exit0s.append(r.exit0)
            if r.cause0 is Cause.ILL:
                d01[r.exit0] = d01.get(r.exit0, 0) + 1
            elif r.cause0 is Cause.ABSORBED:
                d02[r.exit0] = d02.get(r.exit0, 0) + 1
        if r.cause0 is Cause.ILL:
            start = max(r.entry, r.exit0)
            if start < r.exit1:
                starts1.append(start)
                exit1s.append(r.exit1)
                if r.cause1 is Cause.ABSORBED:
                    d12[r.exit1] = d12.get(r.exit1, 0) + 1
    entries0.sort()
    exit0s.sort()
    starts1.sort()
    exit1s.sort()
    one = _one(exact)
    p0, p1 = one, one * 0
    for v in sorted(set(d01) | set(d02) | set(d12)):
        if not query.s < v <= query.t:
            continue
        y0 = bisect_left(entries0, v) - bisect_left(exit0s, v)
        y1 = bisect_left(starts1, v) - bisect_left(exit1s, v)
        h01 = _ratio(d01.get(v, 0), y0, exact) if y0 else one * 0
        h02 = _ratio(d02.get(v, 0), y0, exact) if y0 else one * 0
        h12 = _ratio(d12.get(v, 0), y1, exact) if y1 else one * 0
        p1 = p1 * (1 - h12) + p0 * h01
        p0 = p0 * (1 - h01 - h02)
    return p1


def multinomial_uncensored(
    cohort: Sequence[IllnessDeathRecord],
    query: TransitionQuery,
    exact: bool = False,
) -> Number:
    """Crude ratio for fully observed cohorts recruited at the origin.

    The empirical share of subjects in state 0 at s whose illness onset lies
    in (s, t] with absorption after t.  Every product-limit estimator in
    this module collapses to this ratio when nothing is censored.
    """
    for r in cohort:
        if r.entry != 0 or not r.observed:
            raise ValueError("cohort must be fully observed from the origin")
    den = sum(1 for r in cohort if r.exit0 > query.s)
    if not den:
        raise ZeroDenominator(f"no subject beyond s={query.s}")
    num = sum(
        1
        for r in cohort
        if r.cause0 is Cause.ILL and query.s < r.exit0 <= query.t < r.final_time
    )
    return _ratio(num, den, exact)


def artificial_censoring(
    cohort: Iterable[IllnessDeathRecord], tau: float
) -> list[IllnessDeathRecord]:
    """Replace every observed time u by min(u, tau), clips becoming events.

    The point of the transform is identifiability: min(u, tau) is known to
    equal tau for every observation still alive or censored beyond tau, so
    a clipped time is an OBSERVED absorption at tau, never a censoring.  A
    stay in state 0 reaching past tau collapses to a direct absorption at
    tau.  Times at or before tau are untouched, so a cohort whose largest
    observed time is at most tau comes back unchanged.  Subjects entering
    observation at or beyond tau have no window left and are dropped.
    """
    if not (tau > 0):
        raise ValueError("tau must be positive")
    out = []
    for r in cohort:
        if r.entry >= tau:
            continue
        if r.exit0 > tau:
            out.append(IllnessDeathRecord(r.id, r.entry, tau, Cause.ABSORBED))
        elif r.exit1 is not None and r.exit1 > tau:
            out.append(
                IllnessDeathRecord(r.id, r.entry, r.exit0, r.cause0, tau, Cause.ABSORBED)
            )
        else:
            out.append(r)
    return out

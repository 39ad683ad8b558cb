"""Component-level diagnostic tables and metric-comparison statistics.

The tallies work over paired component occurrences from the optimal pairing;
units left unmatched are excluded from the case breakdown by default (their
counts are still reported so the alternative denominator can be derived).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, NamedTuple, Sequence

from .textsim import MatchCase

if TYPE_CHECKING:  # runtime import would be circular with scoring
    from .scoring import EntryEvalResult

_CASE_ORDER = (MatchCase.EXACT, MatchCase.OVER, MatchCase.UNDER,
               MatchCase.SHIFT, MatchCase.HALLUCINATION, MatchCase.NO_OVERLAP)

_TEXT_COMPONENTS = ("aspect", "opinion")


def _round2(value: float) -> float:
    return round(value, 2)


@dataclass(frozen=True)
class ComponentCaseTally:
    """Case counts for one component, split by threshold verdict."""

    accepted: dict[MatchCase, int]
    rejected: dict[MatchCase, int]
    unpaired_gold: int
    unpaired_pred: int

    def _side_dict(self, counts: dict[MatchCase, int]) -> dict:
        total = sum(counts.values())
        cases = {}
        for case in _CASE_ORDER:
            count = counts.get(case, 0)
            pct = _round2(100.0 * count / total) if total else 0.0
            cases[case.value] = {"count": count, "pct": pct}
        return {"total": total, "cases": cases}

    def to_dict(self) -> dict:
        return {
            "accepted": self._side_dict(self.accepted),
            "rejected": self._side_dict(self.rejected),
            "unpaired_gold": self.unpaired_gold,
            "unpaired_pred": self.unpaired_pred,
        }


@dataclass(frozen=True)
class MatchCaseBreakdown:
    per_component: dict[str, ComponentCaseTally]

    def to_dict(self) -> dict:
        return {c: tally.to_dict() for c, tally in self.per_component.items()}


def match_case_breakdown(results: Sequence["EntryEvalResult"]) -> MatchCaseBreakdown:
    """Tally boundary cases per paired aspect/opinion occurrence, split by
    whether the component passed its threshold."""
    if not results:
        return MatchCaseBreakdown({})
    components = [c for c in results[0].entry.task.components if c in _TEXT_COMPONENTS]
    per_component = {}
    for component in components:
        accepted: dict[MatchCase, int] = {}
        rejected: dict[MatchCase, int] = {}
        unpaired_gold = 0
        unpaired_pred = 0
        for result in results:
            for pair in result.pair_evals:
                case = pair.cases[component]
                side = accepted if pair.matched[component] else rejected
                side[case] = side.get(case, 0) + 1
            unpaired_gold += len(result.pairing.unmatched_gold)
            unpaired_pred += len(result.pairing.unmatched_pred)
        per_component[component] = ComponentCaseTally(
            accepted, rejected, unpaired_gold, unpaired_pred)
    return MatchCaseBreakdown(per_component)


@dataclass(frozen=True)
class CategoryMatchRow:
    label: str
    paired: int
    matched: int
    main_only: int
    match_pct: float

    def __post_init__(self) -> None:
        if self.matched > self.paired:
            raise ValueError("matched count cannot exceed paired count")


@dataclass(frozen=True)
class CategoryMatchTable:
    rows: tuple[CategoryMatchRow, ...]

    def to_dict(self) -> list[dict]:
        return [{"label": r.label, "paired": r.paired, "matched": r.matched,
                 "main_only": r.main_only, "match_pct": r.match_pct}
                for r in self.rows]


def category_match_table(results: Sequence["EntryEvalResult"]) -> CategoryMatchTable:
    """Per gold category label: paired count, exact full-label matches, and
    main-category-only near misses."""
    paired: dict[str, int] = {}
    matched: dict[str, int] = {}
    main_only: dict[str, int] = {}
    for result in results:
        if "category" not in result.entry.task.components:
            raise ValueError("category table requires a task with a category component")
        for pair in result.pair_evals:
            gold = result.entry.gold[pair.gold_index]
            pred = result.entry.pred[pair.pred_index]
            label = gold.category.serialize()
            paired[label] = paired.get(label, 0) + 1
            if pair.matched["category"]:
                matched[label] = matched.get(label, 0) + 1
            elif gold.category.main_key() == pred.category.main_key():
                main_only[label] = main_only.get(label, 0) + 1
    rows = []
    for label in sorted(paired):
        n, m = paired[label], matched.get(label, 0)
        rows.append(CategoryMatchRow(label, n, m, main_only.get(label, 0),
                                     _round2(100.0 * m / n)))
    return CategoryMatchTable(tuple(rows))


class ImplicitAspectStats(NamedTuple):
    total: int
    matched: int
    pct: float


def implicit_aspect_stats(results: Sequence["EntryEvalResult"]) -> ImplicitAspectStats:
    """How many implicit-aspect gold units were paired with an implicit pred."""
    total = 0
    matched = 0
    for result in results:
        if "aspect" not in result.entry.task.components:
            raise ValueError("implicit-aspect stats require a task with an aspect component")
        paired_matched = {pair.gold_index for pair in result.pair_evals
                          if pair.matched["aspect"]}
        for g_idx, unit in enumerate(result.entry.gold):
            if unit.aspect.is_implicit:
                total += 1
                if g_idx in paired_matched:
                    matched += 1
    pct = _round2(100.0 * matched / total) if total else 0.0
    return ImplicitAspectStats(total, matched, pct)


def build_payload(results: Sequence["EntryEvalResult"]) -> dict:
    """Assemble the serializable diagnostics block of a corpus report."""
    task = results[0].entry.task
    payload: dict = {"match_cases": match_case_breakdown(results).to_dict()}
    if "category" in task.components:
        payload["category_matches"] = category_match_table(results).to_dict()
    if "aspect" in task.components:
        stats = implicit_aspect_stats(results)
        payload["implicit_aspect"] = {"total": stats.total, "matched": stats.matched,
                                      "pct": stats.pct}
    return payload


def _fractional_ranks(values: Sequence[float]) -> list[float]:
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        avg_rank = (i + j) / 2 + 1  # ties share the average of their 1-based ranks
        for k in range(i, j + 1):
            ranks[order[k]] = avg_rank
        i = j + 1
    return ranks


def _pearson(xs: Sequence[float], ys: Sequence[float]) -> float:
    n = len(xs)
    mx = sum(xs) / n
    my = sum(ys) / n
    cov = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    vx = sum((x - mx) ** 2 for x in xs)
    vy = sum((y - my) ** 2 for y in ys)
    if vx == 0.0 or vy == 0.0:
        return math.nan
    return cov / math.sqrt(vx * vy)


def correlation(xs: Sequence[float], ys: Sequence[float]) -> tuple[float, float]:
    """Pearson's r and Spearman's rho (Pearson over average fractional ranks).

    Zero variance on either side yields NaN for the affected coefficient.
    """
    if len(xs) != len(ys):
        raise ValueError("correlation inputs must have equal lengths")
    if len(xs) < 2:
        raise ValueError("correlation needs at least two observations")
    pearson = _pearson(xs, ys)
    spearman = _pearson(_fractional_ranks(xs), _fractional_ranks(ys))
    return pearson, spearman


class PairedStats(NamedTuple):
    mean_delta: float
    std_delta: float
    t_statistic: float
    cohens_d: float


def _safe_ratio(mean: float, scale: float) -> float:
    if scale > 0.0:
        return mean / scale
    if mean == 0.0:
        return 0.0
    return math.copysign(math.inf, mean)


def paired_difference_stats(a: Sequence[float], b: Sequence[float]) -> PairedStats:
    """Elementwise a-b deltas: mean, sample standard deviation, paired t
    statistic, and Cohen's d. A zero-spread nonzero delta reports infinity."""
    if len(a) != len(b):
        raise ValueError("paired inputs must have equal lengths")
    n = len(a)
    if n < 2:
        raise ValueError("paired statistics need at least two observations")
    deltas = [x - y for x, y in zip(a, b)]
    mean = sum(deltas) / n
    variance = sum((d - mean) ** 2 for d in deltas) / (n - 1)
    std = math.sqrt(variance)
    return PairedStats(
        mean_delta=mean,
        std_delta=std,
        t_statistic=_safe_ratio(mean, std / math.sqrt(n)),
        cohens_d=_safe_ratio(mean, std),
    )

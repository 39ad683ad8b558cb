"""Entry evaluation: pairing plus component matching into confusion counts,
macro aggregation over a corpus, and the exact-match baseline.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

from . import diagnostics
from .core import (EvalEntry, FtsConfig, OpinionUnit, TaskKind,
                   POLICY_BOTH_EMPTY_PERFECT)
from .pairing import (Pairing, build_similarity_matrix, category_similarity,
                      optimal_assignment)
from .tagged import serialize_unit
from .textsim import MatchCase, component_text_match, normalize_text


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int = 0
    fp: int = 0
    fn: int = 0

    def __post_init__(self) -> None:
        if min(self.tp, self.fp, self.fn) < 0:
            raise ValueError("confusion counts must be nonnegative")


class PRF(NamedTuple):
    precision: float
    recall: float
    f1: float


def counts_to_prf(counts: ConfusionCounts, policy: str = POLICY_BOTH_EMPTY_PERFECT) -> PRF:
    """Entry-level precision/recall/F1 from counts.

    All-zero counts mean both sides were empty; the degenerate-entry policy
    decides whether that is a perfect abstention (1, 1, 1) or scores zero.
    Zero on one side only falls out of the arithmetic as (0, 0, 0).
    """
    if counts.tp == counts.fp == counts.fn == 0:
        value = 1.0 if policy == POLICY_BOTH_EMPTY_PERFECT else 0.0
        return PRF(value, value, value)
    precision = counts.tp / (counts.tp + counts.fp) if counts.tp + counts.fp else 0.0
    recall = counts.tp / (counts.tp + counts.fn) if counts.tp + counts.fn else 0.0
    denom = precision + recall
    return PRF(precision, recall, 2 * precision * recall / denom if denom else 0.0)


@dataclass(frozen=True)
class PairEval:
    """One optimal pair with its per-component scores, verdicts, and cases."""

    gold_index: int
    pred_index: int
    similarity: float
    scores: dict[str, float]
    matched: dict[str, bool]
    cases: dict[str, MatchCase]
    unit_matched: bool


@dataclass(frozen=True)
class EntryEvalResult:
    entry: EvalEntry
    pairing: Pairing
    pair_evals: tuple[PairEval, ...]
    unit_counts: ConfusionCounts
    component_counts: dict[str, ConfusionCounts]
    unit_prf: PRF
    component_prf: dict[str, PRF]


def evaluate_entry(entry: EvalEntry, config: FtsConfig) -> EntryEvalResult:
    """Score one entry: optimal pairing, then per-pair component matching.

    A pair is a unit true positive only if every component matches (aspect
    and opinion at their length-banded thresholds, category on the full
    label, sentiment exactly); otherwise it adds one FP and one FN. Unmatched
    preds are FPs and unmatched golds FNs, for the unit counts and for every
    component of the task.
    """
    task = entry.task
    for unit in (*entry.gold, *entry.pred):
        unit.require_valid_for(task)

    matrix = build_similarity_matrix(list(entry.gold), list(entry.pred),
                                     entry.text, task, config)
    pairing = optimal_assignment(matrix)

    pair_evals = []
    unit_tp = 0
    comp_tp = {c: 0 for c in task.components}
    comp_fp_fn_pairs = {c: 0 for c in task.components}
    for g_idx, p_idx in pairing.pairs:
        gold, pred = entry.gold[g_idx], entry.pred[p_idx]
        scores: dict[str, float] = {}
        matched: dict[str, bool] = {}
        cases: dict[str, MatchCase] = {}
        for component in task.components:
            if component == "aspect":
                score, ok, case = component_text_match(gold.aspect, pred.aspect,
                                                       entry.text, config)
                cases[component] = case
            elif component == "opinion":
                score, ok, case = component_text_match(gold.opinion, pred.opinion,
                                                       entry.text, config)
                cases[component] = case
            elif component == "category":
                score = category_similarity(gold.category, pred.category, config)
                ok = gold.category.full_key() == pred.category.full_key()
            else:
                score = 1.0 if gold.sentiment is pred.sentiment else 0.0
                ok = gold.sentiment is pred.sentiment
            scores[component] = score
            matched[component] = ok
            if ok:
                comp_tp[component] += 1
            else:
                comp_fp_fn_pairs[component] += 1
        unit_matched = all(matched.values())
        if unit_matched:
            unit_tp += 1
        pair_evals.append(PairEval(g_idx, p_idx,
                                   matrix.cells[g_idx][p_idx],
                                   scores, matched, cases, unit_matched))

    n_pairs = len(pairing.pairs)
    failed_pairs = n_pairs - unit_tp
    unit_counts = ConfusionCounts(
        tp=unit_tp,
        fp=failed_pairs + len(pairing.unmatched_pred),
        fn=failed_pairs + len(pairing.unmatched_gold),
    )
    component_counts = {
        c: ConfusionCounts(
            tp=comp_tp[c],
            fp=comp_fp_fn_pairs[c] + len(pairing.unmatched_pred),
            fn=comp_fp_fn_pairs[c] + len(pairing.unmatched_gold),
        )
        for c in task.components
    }

    policy = config.degenerate_entry_policy
    return EntryEvalResult(
        entry=entry,
        pairing=pairing,
        pair_evals=tuple(pair_evals),
        unit_counts=unit_counts,
        component_counts=component_counts,
        unit_prf=counts_to_prf(unit_counts, policy),
        component_prf={c: counts_to_prf(component_counts[c], policy)
                       for c in task.components},
    )


@dataclass(frozen=True)
class CorpusReport:
    task: TaskKind
    flavor: str  # "fts-obp" or "exact"
    entry_count: int
    parse_failures: int
    macro: PRF
    components: dict[str, PRF]
    diagnostics: dict | None

    def __post_init__(self) -> None:
        for value in self.macro:
            if not 0.0 <= value <= 1.0:
                raise ValueError("macro metrics must lie in [0, 1]")

    def to_dict(self) -> dict:
        doc: dict = {
            "task": self.task.value,
            "metric": self.flavor,
            "entry_count": self.entry_count,
            "parse_failures": self.parse_failures,
            "macro": self.macro._asdict(),
        }
        doc["components"] = {c: prf._asdict() for c, prf in self.components.items()}
        if self.diagnostics is not None:
            doc["diagnostics"] = self.diagnostics
        return doc


def _mean(values: Sequence[float]) -> float:
    return sum(values) / len(values)


def aggregate_macro(results: Sequence[EntryEvalResult]) -> CorpusReport:
    """Unweighted means of entry-level P/R/F1, unit-level and per component."""
    if not results:
        raise ValueError("cannot aggregate an empty result list")
    tasks = {r.entry.task for r in results}
    if len(tasks) != 1:
        raise ValueError(f"results span multiple tasks: {sorted(t.value for t in tasks)}")
    task = results[0].entry.task

    macro = PRF(*(_mean([getattr(r.unit_prf, f) for r in results])
                  for f in PRF._fields))
    components = {
        c: PRF(*(_mean([getattr(r.component_prf[c], f) for r in results])
                 for f in PRF._fields))
        for c in task.components
    }
    return CorpusReport(
        task=task,
        flavor="fts-obp",
        entry_count=len(results),
        parse_failures=sum(1 for r in results if r.entry.pred_parse_failed),
        macro=macro,
        components=components,
        diagnostics=diagnostics.build_payload(results),
    )


def exact_match_unit_key(unit: OpinionUnit, task: TaskKind) -> str:
    """Normalized serialized form used for set-intersection matching."""
    return normalize_text(serialize_unit(unit, task))


def exact_match_entry(entry: EvalEntry) -> ConfusionCounts:
    """Set-semantics exact matching over normalized serialized units.

    Duplicates collapse into the set on each side, so a duplicated correct
    prediction is absorbed rather than counted as a false positive; the
    one-to-one flexible scorer treats the same duplicate as an FP.
    """
    task = entry.task
    gold_keys = {exact_match_unit_key(u, task) for u in entry.gold}
    pred_keys = {exact_match_unit_key(u, task) for u in entry.pred}
    return ConfusionCounts(
        tp=len(gold_keys & pred_keys),
        fp=len(pred_keys - gold_keys),
        fn=len(gold_keys - pred_keys),
    )


def exact_match_report(entries: Sequence[EvalEntry], config: FtsConfig) -> CorpusReport:
    """Macro aggregation of the exact-match baseline, comparable to the
    flexible-metric report entry for entry."""
    if not entries:
        raise ValueError("cannot aggregate an empty entry list")
    tasks = {e.task for e in entries}
    if len(tasks) != 1:
        raise ValueError(f"entries span multiple tasks: {sorted(t.value for t in tasks)}")
    policy = config.degenerate_entry_policy
    prfs = [counts_to_prf(exact_match_entry(e), policy) for e in entries]
    macro = PRF(*(_mean([getattr(prf, f) for prf in prfs]) for f in PRF._fields))
    return CorpusReport(
        task=entries[0].task,
        flavor="exact",
        entry_count=len(entries),
        parse_failures=sum(1 for e in entries if e.pred_parse_failed),
        macro=macro,
        components={},
        diagnostics=None,
    )

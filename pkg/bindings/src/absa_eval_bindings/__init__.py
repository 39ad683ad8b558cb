"""Thin scripting facade over the absa-eval pipeline.

Everything here is mappings in, mappings out: corpora are lists of plain
record dicts (the same shape as the JSONL corpus files), reports come back
as plain dicts whose values equal the CLI's serialized reports field for
field. No logic lives here; the facade delegates in-process to the primary
package, which guarantees metric parity by construction.
"""
from __future__ import annotations

import json
from typing import Any, Mapping, Sequence

from absa_eval.core import FtsConfig, TaskKind, default_config
from absa_eval.corpus_io import (config_from_dict, document_to_json,
                                 join_entries, record_from_mapping)
from absa_eval.scoring import (aggregate_macro, evaluate_entry,
                               exact_match_report)
from absa_eval.simulation import CSV_COLUMNS, rows_as_tuples, run_simulation
from absa_eval.textsim import component_text_match

__all__ = ["evaluate", "fts", "simulate"]


def _resolve_config(config: Mapping[str, Any] | None) -> FtsConfig:
    if config is None:
        return default_config()
    return config_from_dict(dict(config))


def _collect_records(records: Sequence[Mapping[str, Any]], task: TaskKind,
                     side: str, require_units: bool) -> dict:
    out = {}
    for index, mapping in enumerate(records):
        try:
            record = record_from_mapping(dict(mapping), line_no=index,
                                         require_units=require_units)
        except ValueError as exc:
            raise ValueError(f"{side} record {index}: {exc}") from None
        if record.task is not task:
            raise ValueError(f"{side} record {index}: expected task "
                             f"{task.value}, found {record.task.value}")
        if record.id in out:
            raise ValueError(f"{side} record {index}: duplicate id {record.id!r}")
        out[record.id] = record
    return out


def evaluate(gold: Sequence[Mapping[str, Any]], pred: Sequence[Mapping[str, Any]],
             task: str, config: Mapping[str, Any] | None = None,
             metric: str = "fts-obp") -> dict:
    """Score a prediction corpus against gold and return the report mapping.

    ``gold`` and ``pred`` follow the corpus record schema; predictions may
    carry ``raw`` model output instead of parsed units. The returned mapping
    equals the CLI's serialized report for the same inputs, field for field.
    """
    kind = TaskKind.parse(task)
    gold_records = _collect_records(gold, kind, "gold", require_units=True)
    pred_records = _collect_records(pred, kind, "pred", require_units=False)
    entries = join_entries(gold_records, pred_records, kind)
    if metric == "fts-obp":
        report = aggregate_macro([evaluate_entry(e, _resolve_config(config))
                                  for e in entries])
    elif metric == "exact":
        report = exact_match_report(entries, _resolve_config(config))
    else:
        raise ValueError(f"unknown metric {metric!r}; expected 'fts-obp' or 'exact'")
    # round-trip through the canonical serialization so numbers match the CLI
    return json.loads(document_to_json(report.to_dict()))


def fts(gold: str, pred: str, input_text: str,
        config: Mapping[str, Any] | None = None) -> tuple[float, bool, str]:
    """Flexible similarity of one explicit span pair: (score, matched, case)."""
    score, matched, case = component_text_match(gold, pred, input_text,
                                                _resolve_config(config))
    return score, matched, case.value


def simulate(config: Mapping[str, Any] | None = None) -> dict:
    """The boundary-variation acceptance table as a columns/rows mapping."""
    rows = rows_as_tuples(run_simulation(_resolve_config(config)))
    return {"columns": list(CSV_COLUMNS), "rows": [list(row) for row in rows]}

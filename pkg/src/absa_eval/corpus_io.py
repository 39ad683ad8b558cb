"""Corpus file I/O: line-delimited JSON records, config files, and report
serialization.

One record per line: ``{"id", "text", "task", "units": [...]}`` for
annotations, where each unit carries the task's components (``aspect`` may be
JSON null or the string "null" for implicit targets). Prediction records may
instead carry ``{"id", "task", "raw": "<model output>"}`` with the unparsed
model output.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .core import (AspectField, CategoryLabel, EvalEntry, FtsConfig,
                   OpinionUnit, SentimentLabel, TaskKind)
from .tagged import parse_output


class CorpusSchemaError(Exception):
    """A record violated the corpus schema; carries the offending line."""

    def __init__(self, path: str | Path, line_no: int, message: str) -> None:
        super().__init__(f"{path}:{line_no}: {message}")
        self.path = str(path)
        self.line_no = line_no


class IdMismatchError(Exception):
    """Gold and prediction files do not join one-to-one on entry ids."""


@dataclass(frozen=True)
class CorpusRecord:
    id: str
    text: str | None
    task: TaskKind
    units: tuple[OpinionUnit, ...] | None
    raw: str | None
    line_no: int


def _unit_from_json(obj: Any, task: TaskKind, where: str) -> OpinionUnit:
    if not isinstance(obj, dict):
        raise ValueError(f"{where}: unit must be an object")
    unknown = set(obj) - {"aspect", "opinion", "category", "sentiment"}
    if unknown:
        raise ValueError(f"{where}: unknown unit fields {sorted(unknown)}")
    kwargs: dict[str, Any] = {}
    if "aspect" in obj:
        value = obj["aspect"]
        if value is None:
            kwargs["aspect"] = AspectField.implicit()
        elif isinstance(value, str):
            kwargs["aspect"] = AspectField.parse(value)
        else:
            raise ValueError(f"{where}: aspect must be a string or null")
    if "opinion" in obj:
        if not isinstance(obj["opinion"], str) or not obj["opinion"].strip():
            raise ValueError(f"{where}: opinion must be a non-empty string")
        kwargs["opinion"] = obj["opinion"]
    if "category" in obj:
        if not isinstance(obj["category"], str):
            raise ValueError(f"{where}: category must be a string")
        kwargs["category"] = CategoryLabel.parse(obj["category"])
    if "sentiment" in obj:
        if not isinstance(obj["sentiment"], str):
            raise ValueError(f"{where}: sentiment must be a string")
        kwargs["sentiment"] = SentimentLabel.parse(obj["sentiment"])
    unit = OpinionUnit(**kwargs)
    unit.require_valid_for(task)
    return unit


def record_from_mapping(obj: Any, line_no: int = 0,
                        require_units: bool = False) -> CorpusRecord:
    """Validate one corpus record mapping; ``line_no`` is carried through for
    error reporting."""
    if not isinstance(obj, dict):
        raise ValueError("record must be an object")
    unknown = set(obj) - {"id", "text", "task", "units", "raw"}
    if unknown:
        raise ValueError(f"unknown record fields {sorted(unknown)}")
    for key in ("id", "task"):
        if key not in obj or not isinstance(obj[key], str):
            raise ValueError(f"record needs a string {key!r} field")
    task = TaskKind.parse(obj["task"])
    has_units = "units" in obj
    has_raw = "raw" in obj
    if has_units and has_raw:
        raise ValueError('"units" and "raw" are mutually exclusive')
    if not has_units and not has_raw:
        raise ValueError('record needs either "units" or "raw"')
    if require_units and has_raw:
        raise ValueError('annotation records must carry "units", not "raw"')
    text = obj.get("text")
    if text is not None and not isinstance(text, str):
        raise ValueError('"text" must be a string')
    if require_units and text is None:
        raise ValueError('annotation records need a "text" field')

    units = None
    raw = None
    if has_units:
        if not isinstance(obj["units"], list):
            raise ValueError('"units" must be a list')
        units = tuple(_unit_from_json(u, task, f"unit {i}")
                      for i, u in enumerate(obj["units"]))
    else:
        if not isinstance(obj["raw"], str):
            raise ValueError('"raw" must be a string')
        raw = obj["raw"]
    return CorpusRecord(obj["id"], text, task, units, raw, line_no)


def read_corpus(path: str | Path, task: TaskKind, require_units: bool = False,
                strict_task: bool = False) -> dict[str, CorpusRecord]:
    """Read and validate the records of one task from a corpus file.

    Records for other tasks are ignored unless ``strict_task``. Raises
    CorpusSchemaError with the offending line number on any malformed record
    or duplicate id.
    """
    records: dict[str, CorpusRecord] = {}
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusSchemaError(path, line_no, f"invalid JSON: {exc}") from None
            try:
                record = record_from_mapping(obj, line_no, require_units)
            except ValueError as exc:
                raise CorpusSchemaError(path, line_no, str(exc)) from None
            if record.task is not task:
                if strict_task:
                    raise CorpusSchemaError(path, line_no,
                                            f"expected task {task.value}, "
                                            f"found {record.task.value}")
                continue
            if record.id in records:
                raise CorpusSchemaError(path, line_no,
                                        f"duplicate id {record.id!r} for task {task.value}")
            records[record.id] = record
    return records


def join_entries(gold: dict[str, CorpusRecord], pred: dict[str, CorpusRecord],
                 task: TaskKind, allow_missing_preds: bool = False) -> list[EvalEntry]:
    """Join gold and prediction records by id into evaluation entries.

    Prediction ids without a gold counterpart are always fatal. Gold ids
    without a prediction are fatal unless ``allow_missing_preds``, in which
    case they score as empty predictions.
    """
    extra = sorted(set(pred) - set(gold))
    if extra:
        raise IdMismatchError(f"prediction ids with no gold counterpart: {extra}")
    missing = sorted(set(gold) - set(pred))
    if missing and not allow_missing_preds:
        raise IdMismatchError(f"gold ids with no prediction: {missing}")

    entries = []
    for entry_id in gold:  # file order
        gold_record = gold[entry_id]
        if gold_record.text is None:
            raise CorpusSchemaError("<gold>", gold_record.line_no,
                                    f"gold record {entry_id!r} lacks text")
        pred_record = pred.get(entry_id)
        if pred_record is None:
            pred_units: tuple[OpinionUnit, ...] = ()
            failed = False
        elif pred_record.units is not None:
            pred_units = pred_record.units
            failed = False
        else:
            parsed, failed = parse_output(pred_record.raw, task)
            pred_units = tuple(parsed)
        entries.append(EvalEntry(
            id=entry_id,
            text=gold_record.text,
            task=task,
            gold=gold_record.units,
            pred=pred_units,
            pred_parse_failed=failed,
        ))
    return entries


def unit_to_json(unit: OpinionUnit) -> dict[str, Any]:
    out: dict[str, Any] = {}
    if unit.aspect is not None:
        out["aspect"] = None if unit.aspect.is_implicit else unit.aspect.span
    if unit.opinion is not None:
        out["opinion"] = unit.opinion
    if unit.category is not None:
        out["category"] = unit.category.serialize()
    if unit.sentiment is not None:
        out["sentiment"] = unit.sentiment.serialize()
    return out


def write_corpus(path: str | Path, records: list[dict[str, Any]]) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for record in records:
            handle.write(json.dumps(record, ensure_ascii=False) + "\n")


_CONFIG_KEYS = {"stopwords", "threshold_schedule", "partial_main_category_score",
                "component_weights", "degenerate_entry_policy"}


def config_from_dict(obj: dict[str, Any]) -> FtsConfig:
    """Build a config from a mapping; unknown keys are errors."""
    if not isinstance(obj, dict):
        raise ValueError("config must be an object")
    unknown = set(obj) - _CONFIG_KEYS
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    kwargs: dict[str, Any] = {}
    if "stopwords" in obj:
        kwargs["stopwords"] = frozenset(str(w).lower() for w in obj["stopwords"])
    if "threshold_schedule" in obj:
        bands = []
        for band in obj["threshold_schedule"]:
            max_len, threshold = band
            bands.append((None if max_len is None else int(max_len), float(threshold)))
        kwargs["threshold_schedule"] = tuple(bands)
    if "partial_main_category_score" in obj:
        kwargs["partial_main_category_score"] = float(obj["partial_main_category_score"])
    if "component_weights" in obj:
        kwargs["component_weights"] = {str(k): float(v)
                                       for k, v in obj["component_weights"].items()}
    if "degenerate_entry_policy" in obj:
        kwargs["degenerate_entry_policy"] = str(obj["degenerate_entry_policy"])
    return FtsConfig(**kwargs)


def load_config(path: str | Path) -> FtsConfig:
    with open(path, encoding="utf-8") as handle:
        return config_from_dict(json.load(handle))


def _round_floats(value: Any) -> Any:
    if isinstance(value, float):
        if math.isnan(value):
            return "NaN"
        if math.isinf(value):
            return "Infinity" if value > 0 else "-Infinity"
        return round(value, 6)
    if isinstance(value, dict):
        return {k: _round_floats(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_round_floats(v) for v in value]
    return value


def document_to_json(doc: dict[str, Any]) -> str:
    """Canonical report serialization: insertion-ordered keys, floats to six
    decimal places, two-space indentation. Byte-identical across runs."""
    return json.dumps(_round_floats(doc), indent=2, ensure_ascii=False) + "\n"

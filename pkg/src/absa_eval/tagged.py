"""Parsing and serialization of the XML-style tagged annotation strings.

A unit is written as adjacent tag pairs in the fixed order asp, opn, cat,
sen, restricted to the owning task's components, e.g. for triplets with
sentiment: ``<asp>pie</asp><opn>the best</opn><sen>positive</sen>``. Unit
lists are bracketed and comma-separated; the empty list serializes as a
single all-empty unit.
"""
from __future__ import annotations

import re

from .core import AspectField, CategoryLabel, OpinionUnit, SentimentLabel, TaskKind

_TAG_FOR_COMPONENT = {
    "aspect": "asp",
    "opinion": "opn",
    "category": "cat",
    "sentiment": "sen",
}

_EMPTY_LIST_RE = re.compile(r"\s*\[\s*\]\s*\Z")

_GROUP_RE_CACHE: dict[TaskKind, re.Pattern[str]] = {}


def _group_pattern(task: TaskKind) -> re.Pattern[str]:
    # One full unit: the task's tag pairs, in order, separated by at most
    # whitespace. Content is anything up to the matching close tag.
    if task not in _GROUP_RE_CACHE:
        parts = []
        for component in task.components:
            tag = _TAG_FOR_COMPONENT[component]
            parts.append(rf"<{tag}>(?P<{component}>.*?)</{tag}>")
        _GROUP_RE_CACHE[task] = re.compile(r"\s*".join(parts), re.DOTALL)
    return _GROUP_RE_CACHE[task]


def _build_unit(fields: dict[str, str], task: TaskKind) -> OpinionUnit | None:
    """Turn raw tag contents into a unit; None when the group is malformed."""
    contents = {c: fields[c].strip() for c in task.components}
    kwargs: dict[str, object] = {}
    try:
        if "aspect" in contents:
            kwargs["aspect"] = AspectField.parse(contents["aspect"])
        if "opinion" in contents:
            if not contents["opinion"]:
                return None
            kwargs["opinion"] = contents["opinion"]
        if "category" in contents:
            if not contents["category"]:
                return None
            kwargs["category"] = CategoryLabel.parse(contents["category"])
        if "sentiment" in contents:
            kwargs["sentiment"] = SentimentLabel.parse(contents["sentiment"])
    except ValueError:
        return None
    return OpinionUnit(**kwargs)


def parse_output(raw: str, task: TaskKind) -> tuple[list[OpinionUnit], bool]:
    """Scan arbitrary model output for well-formed tagged units.

    Salvage is best-effort: malformed fragments are skipped and well-formed
    groups kept, in order of appearance. A unit whose every component is the
    empty string is the "no units" sentinel and is dropped. The failed flag
    is set only when no well-formed group was found in non-empty output that
    is not a recognizable empty-list form. Never raises.
    """
    units: list[OpinionUnit] = []
    found_group = False
    for match in _group_pattern(task).finditer(raw):
        fields = match.groupdict()
        if all(not fields[c].strip() for c in task.components):
            found_group = True  # the all-empty sentinel
            continue
        unit = _build_unit(fields, task)
        if unit is None:
            continue
        found_group = True
        units.append(unit)
    if found_group:
        return units, False
    failed = bool(raw.strip()) and not _EMPTY_LIST_RE.match(raw)
    return [], failed


def serialize_unit(unit: OpinionUnit, task: TaskKind) -> str:
    """One unit as its adjacent tag pairs, without the surrounding brackets."""
    unit.require_valid_for(task)
    parts = []
    for component in task.components:
        tag = _TAG_FOR_COMPONENT[component]
        value = getattr(unit, component)
        if component == "aspect":
            content = value.serialize()
        elif component == "opinion":
            content = value
        else:
            content = value.serialize()
        parts.append(f"<{tag}>{content}</{tag}>")
    return "".join(parts)


def serialize_units(units: list[OpinionUnit], task: TaskKind) -> str:
    """Canonical bracketed, comma-separated tagged string for a unit list.

    The empty list serializes to the single all-empty sentinel unit, so
    ``parse_output(serialize_units(units))`` round-trips for any valid list.
    Raises ValueError when a unit's components do not match the task.
    """
    if not units:
        empty = "".join(f"<{_TAG_FOR_COMPONENT[c]}></{_TAG_FOR_COMPONENT[c]}>"
                        for c in task.components)
        return f"[{empty}]"
    return "[" + ", ".join(serialize_unit(u, task) for u in units) + "]"


def derive_subtask_gold(asqe_units: list[OpinionUnit],
                        target: TaskKind) -> list[OpinionUnit]:
    """Project full quadruplets down to a target task's component set.

    Order is preserved and duplicates produced by the projection are kept;
    set-style deduplication belongs to the exact-match scorer, not the data.
    """
    out = []
    for unit in asqe_units:
        unit.require_valid_for(TaskKind.ASQE)
        out.append(OpinionUnit(
            aspect=unit.aspect if "aspect" in target.components else None,
            opinion=unit.opinion if "opinion" in target.components else None,
            category=unit.category if "category" in target.components else None,
            sentiment=unit.sentiment if "sentiment" in target.components else None,
        ))
    return out

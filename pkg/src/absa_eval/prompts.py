"""Instruction prompt templates for the five tasks, in 0-shot and 4-shot form.

The full-quadruplet template is the source of truth; the other tasks are
derived from it by dropping the lines about components the task does not
include and adjusting the lines that name the task and its unit.
"""
from __future__ import annotations

from .core import AspectField, CategoryLabel, OpinionUnit, SentimentLabel, TaskKind
from .tagged import _TAG_FOR_COMPONENT, derive_subtask_gold, serialize_units

_TASK_NAMES = {
    TaskKind.OE: "opinion extraction (OE)",
    TaskKind.AOPE: "aspect-opinion pair extraction (AOPE)",
    TaskKind.AOC: "aspect-opinion categorisation (AOC)",
    TaskKind.ASTE: "aspect sentiment triplet extraction (ASTE)",
    TaskKind.ASQE: "aspect-sentiment quadruplet extraction (ASQE)",
}

_GOAL_SENTENCES = {
    TaskKind.OE: ("Given the input text, extract ALL opinion expressions about "
                  "the course, staff, or university."),
    TaskKind.AOPE: ("Given the input text, extract ALL pairs of opinion expressions "
                    "and their corresponding aspect terms about the course, staff, "
                    "or university."),
    TaskKind.AOC: ("Given the input text, extract ALL pairs of opinion expressions "
                   "and their corresponding aspect terms about the course, staff, "
                   "or university. Then classify the category for each "
                   "aspect-opinion pair."),
    TaskKind.ASTE: ("Given the input text, extract ALL pairs of opinion expressions "
                    "and their corresponding aspect terms about the course, staff, "
                    "or university. Then classify the sentiment for each "
                    "aspect-opinion pair."),
    TaskKind.ASQE: ("Given the input text, extract ALL pairs of opinion expressions "
                    "and their corresponding aspect terms about the course, staff, "
                    "or university. Then classify the category and sentiment for "
                    "each aspect-opinion pair."),
}

_COMBINATION_LINES = {
    TaskKind.AOPE: "Each aspect-opinion combination is a pair.",
    TaskKind.AOC: "Each aspect-opinion-category combination is a triplet.",
    TaskKind.ASTE: "Each aspect-opinion-sentiment combination is a triplet.",
    TaskKind.ASQE: "Each aspect-opinion-category-sentiment combination is a quadruplet.",
}

_UNIT_NOUNS = {
    TaskKind.OE: ("opinion expression", "Opinion expressions"),
    TaskKind.AOPE: ("pair", "Pairs"),
    TaskKind.AOC: ("triplet", "Triplets"),
    TaskKind.ASTE: ("triplet", "Triplets"),
    TaskKind.ASQE: ("quadruplet", "Quadruplets"),
}

_TAG_DESCRIPTORS = {
    "aspect": "<asp>aspect terms</asp>",
    "opinion": "<opn>opinion expressions</opn>",
    "category": "<cat>category</cat>",
    "sentiment": "<sen>sentiment</sen>",
}

_CATEGORY_MAPPING_LINES = [
    "category_mapping = {",
    '  "Course": ["Content", "Learning activity", "Assessment", "Workload", '
    '"Difficulty", "Course materials", "Technology & tools", "Overall"],',
    '  "Staff": ["Teaching", "Knowledge & skills", "Helpfulness", "Attitude", '
    '"Personal traits", "Overall"],',
    '  "University": ["Cost", "Opportunities", "Programme", "Campus & facilities", '
    '"Culture & diversity", "Information & Services", '
    '"Social engagement & activities", "Overall"]',
    "}",
]

# The four in-context examples, stored as full quadruplets and projected per task.
_EXAMPLES: list[tuple[str, list[OpinionUnit]]] = [
    ('"The professor was knowledgeable but the assignments were too hard."',
     [OpinionUnit(AspectField("professor"), "knowledgeable",
                  CategoryLabel("Staff", "Knowledge & skills"), SentimentLabel.POSITIVE),
      OpinionUnit(AspectField("assignments"), "too hard",
                  CategoryLabel("Course", "Assessment"), SentimentLabel.NEGATIVE)]),
    ('"It was disappointing overall."',
     [OpinionUnit(AspectField.implicit(), "disappointing",
                  CategoryLabel("Course", "Overall"), SentimentLabel.NEGATIVE)]),
    ('"She never reply to emails or answer questions"',
     [OpinionUnit(AspectField("She"), "never reply to emails or answer questions",
                  CategoryLabel("Staff", "Helpfulness"), SentimentLabel.NEGATIVE)]),
    ('"There were 10 assignments, 5 quizzes, 1 final exam."', []),
]


def _unit_placeholder(task: TaskKind) -> str:
    return "".join(f"<{_TAG_FOR_COMPONENT[c]}>...</{_TAG_FOR_COMPONENT[c]}>"
                   for c in task.components)


def emit_prompt(task: TaskKind, shots: int) -> str:
    """Render the instruction prompt for a task with 0 or 4 in-context examples."""
    if shots not in (0, 4):
        raise ValueError("shots must be 0 or 4")
    has = set(task.components)
    lines: list[str] = []

    lines.append("### Task type:")
    lines.append(_TASK_NAMES[task])
    lines.append("")
    lines.append("### Instruction:")
    lines.append(_GOAL_SENTENCES[task])
    lines.append("Opinion expressions are words/phrases expressing evaluation, "
                 "feeling, or judgment (including both explicit and implicit "
                 "opinions, not objective facts).")
    if "aspect" in has:
        lines.append("Aspect terms are opinion targets. Only use a pronoun if you "
                     "cannot find a direct aspect term in the same sentence or "
                     "adjacent context.")
    if task in _COMBINATION_LINES:
        lines.append(_COMBINATION_LINES[task])
    lines.append("")
    lines.append("**Rules:**")
    lines.append("- Extract EVERY opinion in the text, including both explicit and "
                 "implicit opinion expressions.")
    if "aspect" in has:
        lines.append("- Extract all opinion and aspect terms VERBATIM and as "
                     "CONSECUTIVE tokens.")
        lines.append("- Use 'null' for implicit aspects. Opinions cannot be null.")
        lines.append("- If an aspect is mapped to multiple opinion expressions, or "
                     "vice versa, extract each 1:1 pair separately.")
    else:
        lines.append("- Extract all opinion terms VERBATIM and as CONSECUTIVE tokens.")
    if "category" in has:
        lines.append("- Categorise each aspect-opinion pair first into one main "
                     "category (the keys) in the category_mapping below, and then "
                     "into one of its appropriate subcategories (values for the "
                     'key). The category label follows "Main category - '
                     'subcategory" format.')
        lines.extend(_CATEGORY_MAPPING_LINES)
        lines.append("")
    if "sentiment" in has:
        lines.append("- Classify the sentiment into one of 'positive', 'neutral', "
                     "'negative'.")
    singular, plural = _UNIT_NOUNS[task]
    tag_list = ", ".join(_TAG_DESCRIPTORS[c] for c in task.components)
    lines.append(f"- Use these specific tags for each component within each "
                 f"{singular}: {tag_list}")
    lines.append("")
    lines.append("**Critical formatting requirements:**")
    lines.append("- Output MUST be a valid Python list")
    lines.append(f"- {plural} MUST be separated by commas")
    lines.append("")
    lines.append("**Output format:**")
    placeholder = _unit_placeholder(task)
    lines.append(f"[{placeholder}, {placeholder}, ..., {placeholder}]")
    lines.append("")

    if shots == 4:
        lines.append("### Examples:")
        lines.append("")
        for input_text, quadruplets in _EXAMPLES:
            units = derive_subtask_gold(quadruplets, task)
            lines.append(f"Input: {input_text}")
            lines.append(f"Output: {serialize_units(units, task)}")
            lines.append("")

    lines.append("### Input:")
    lines.append("'''<review text entry>'''")
    return "\n".join(lines)

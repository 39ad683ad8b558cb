"""Core domain types: tasks, opinion units, labels, entries, and scorer configuration.

Everything here is immutable after construction and safe to share across
worker processes.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field


class TaskKind(enum.Enum):
    """The five extraction tasks, each defined by the components its units carry."""

    OE = "OE"
    AOPE = "AOPE"
    AOC = "AOC"
    ASTE = "ASTE"
    ASQE = "ASQE"

    @property
    def components(self) -> tuple[str, ...]:
        return _TASK_COMPONENTS[self]

    @classmethod
    def parse(cls, name: str) -> "TaskKind":
        try:
            return cls(name.strip().upper())
        except ValueError:
            raise ValueError(f"unknown task {name!r}; expected one of "
                             f"{', '.join(t.value for t in cls)}") from None


# Canonical component order: aspect, opinion, category, sentiment.
_TASK_COMPONENTS: dict[TaskKind, tuple[str, ...]] = {
    TaskKind.OE: ("opinion",),
    TaskKind.AOPE: ("aspect", "opinion"),
    TaskKind.AOC: ("aspect", "opinion", "category"),
    TaskKind.ASTE: ("aspect", "opinion", "sentiment"),
    TaskKind.ASQE: ("aspect", "opinion", "category", "sentiment"),
}

COMPONENT_ORDER = ("aspect", "opinion", "category", "sentiment")


@dataclass(frozen=True)
class AspectField:
    """An opinion target: either an explicit text span or implicit.

    Implicit aspects are targets absent from the text; they serialize as the
    literal token ``null``.
    """

    span: str | None = None

    def __post_init__(self) -> None:
        if self.span is not None and not self.span.strip():
            raise ValueError("explicit aspect span must be non-empty")

    @property
    def is_implicit(self) -> bool:
        return self.span is None

    @classmethod
    def implicit(cls) -> "AspectField":
        return cls(None)

    @classmethod
    def parse(cls, text: str) -> "AspectField":
        """The case-insensitive literal "null" means implicit; anything else is a span."""
        stripped = text.strip()
        if stripped.lower() == "null":
            return cls(None)
        return cls(stripped)

    def serialize(self) -> str:
        return "null" if self.span is None else self.span


@dataclass(frozen=True)
class CategoryLabel:
    """A category label with a main part and an optional sub part.

    Serialized as ``main - sub`` when the sub part is present. Parsing splits
    on the first ``-`` so sub parts may themselves contain hyphens.
    """

    main: str
    sub: str | None = None

    def __post_init__(self) -> None:
        if not self.main.strip():
            raise ValueError("category main label must be non-empty")

    @classmethod
    def parse(cls, text: str) -> "CategoryLabel":
        if "-" in text:
            main, sub = text.split("-", 1)
            return cls(main.strip(), sub.strip() or None)
        return cls(text.strip())

    def serialize(self) -> str:
        if self.sub is None:
            return self.main
        return f"{self.main} - {self.sub}"

    def _norm(self, part: str) -> str:
        return " ".join(part.lower().split())

    def main_key(self) -> str:
        return self._norm(self.main)

    def full_key(self) -> tuple[str, str | None]:
        return (self._norm(self.main), self._norm(self.sub) if self.sub is not None else None)


class SentimentLabel(enum.Enum):
    POSITIVE = "positive"
    NEUTRAL = "neutral"
    NEGATIVE = "negative"

    @classmethod
    def parse(cls, text: str) -> "SentimentLabel":
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise ValueError(f"unknown sentiment {text!r}") from None

    def serialize(self) -> str:
        return self.value


@dataclass(frozen=True)
class OpinionUnit:
    """One opinion relation: any task-dependent subset of the four components."""

    aspect: AspectField | None = None
    opinion: str | None = None
    category: CategoryLabel | None = None
    sentiment: SentimentLabel | None = None

    def populated_components(self) -> tuple[str, ...]:
        out = []
        if self.aspect is not None:
            out.append("aspect")
        if self.opinion is not None:
            out.append("opinion")
        if self.category is not None:
            out.append("category")
        if self.sentiment is not None:
            out.append("sentiment")
        return tuple(out)

    def is_valid_for(self, task: TaskKind) -> bool:
        return self.populated_components() == task.components

    def require_valid_for(self, task: TaskKind) -> None:
        if not self.is_valid_for(task):
            raise ValueError(
                f"unit components {self.populated_components()} do not match "
                f"task {task.value} components {task.components}")


@dataclass(frozen=True)
class EvalEntry:
    """One review text with its gold and predicted unit lists."""

    id: str
    text: str
    task: TaskKind
    gold: tuple[OpinionUnit, ...]
    pred: tuple[OpinionUnit, ...]
    pred_parse_failed: bool = False

    def __post_init__(self) -> None:
        if self.pred_parse_failed and self.pred:
            raise ValueError("a parse-failed entry must carry no predicted units")


# The 22 stopwords dropped before similarity scoring.
DEFAULT_STOPWORDS = frozenset({
    "a", "an", "the", "is", "are", "was", "were", "be", "to", "of", "and",
    "in", "this", "that", "have", "it", "very", "really", "extremely",
    "super", "absolutely", "definitely",
})

# Policies for entries where both gold and pred are empty. One-side-empty
# entries always score P=R=F1=0 straight from the confusion counts.
POLICY_BOTH_EMPTY_PERFECT = "both-empty-perfect"
POLICY_BOTH_EMPTY_ZERO = "both-empty-zero"
_POLICIES = (POLICY_BOTH_EMPTY_PERFECT, POLICY_BOTH_EMPTY_ZERO)


@dataclass(frozen=True)
class FtsConfig:
    """Scorer configuration: stopwords, threshold bands, weights, and policies.

    ``threshold_schedule`` is a list of ``(max_gold_len, threshold)`` bands in
    ascending order of ``max_gold_len``; the final band uses ``None`` as an
    unbounded upper limit, so every length >= 0 falls into exactly one band.
    """

    stopwords: frozenset[str] = DEFAULT_STOPWORDS
    threshold_schedule: tuple[tuple[int | None, float], ...] = ((2, 0.5), (4, 0.6), (None, 0.7))
    partial_main_category_score: float = 0.3
    component_weights: dict[str, float] = field(
        default_factory=lambda: {c: 1.0 for c in COMPONENT_ORDER})
    degenerate_entry_policy: str = POLICY_BOTH_EMPTY_PERFECT

    def __post_init__(self) -> None:
        bands = self.threshold_schedule
        if not bands or bands[-1][0] is not None:
            raise ValueError("threshold schedule must end with an unbounded (None) band")
        prev = -1
        for max_len, threshold in bands:
            if not 0.0 < threshold <= 1.0:
                raise ValueError(f"threshold {threshold} outside (0, 1]")
            if max_len is not None:
                if max_len <= prev:
                    raise ValueError("threshold bands must have strictly increasing limits")
                prev = max_len
        if any(max_len is None for max_len, _ in bands[:-1]):
            raise ValueError("only the final threshold band may be unbounded")
        if not 0.0 <= self.partial_main_category_score <= 1.0:
            raise ValueError("partial category score must lie in [0, 1]")
        if any(w < 0 for w in self.component_weights.values()):
            raise ValueError("component weights must be nonnegative")
        if not any(w > 0 for w in self.component_weights.values()):
            raise ValueError("component weights must not all be zero")
        unknown = set(self.component_weights) - set(COMPONENT_ORDER)
        if unknown:
            raise ValueError(f"unknown weight components: {sorted(unknown)}")
        if self.degenerate_entry_policy not in _POLICIES:
            raise ValueError(f"unknown degenerate entry policy "
                             f"{self.degenerate_entry_policy!r}; expected one of {_POLICIES}")


def default_config() -> FtsConfig:
    """The shipped defaults: 22 stopwords, length-banded thresholds
    (<=2 -> 0.5, 3-4 -> 0.6, >=5 -> 0.7), 0.3 partial main-category credit,
    equal component weights, and both-empty entries counted as perfect."""
    return FtsConfig()

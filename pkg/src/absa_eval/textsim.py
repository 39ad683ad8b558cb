"""Span similarity scoring: tokenization, Rouge-L, flexible similarity with a
hallucination check, threshold lookup, and boundary match-case labels.

Two token granularities are involved, mirroring how spans are compared:
stopword filtering and gold-length counting operate on whitespace tokens (so
punctuated words like "in-residence" survive as single units), while the
longest-common-subsequence runs on alphanumeric sub-tokens of the filtered
text (so "in-residence" and "in residence" still align).
"""
from __future__ import annotations

import enum
import re
import string
from dataclasses import dataclass
from typing import Iterable, NamedTuple

from .core import AspectField, FtsConfig

_ALNUM_RUN = re.compile(r"[^\W_]+", re.UNICODE)

# Everything except '*' so emphatic masked words ("such an ****") keep their tail.
_TRAILING_PUNCT = string.punctuation.replace("*", "")


def tokenize(text: str) -> list[str]:
    """Lowercase and split on every maximal run of non-alphanumeric characters."""
    return _ALNUM_RUN.findall(text.lower())


def remove_stopwords(tokens: Iterable[str], stopwords: frozenset[str]) -> list[str]:
    """Order-preserving stopword filter."""
    return [t for t in tokens if t not in stopwords]


class RougeLScore(NamedTuple):
    precision: float
    recall: float
    f1: float


def lcs_length(a: list[str], b: list[str]) -> int:
    if not a or not b:
        return 0
    # Classic DP over one rolling row.
    prev = [0] * (len(b) + 1)
    for tok_a in a:
        cur = [0] * (len(b) + 1)
        for j, tok_b in enumerate(b, start=1):
            if tok_a == tok_b:
                cur[j] = prev[j - 1] + 1
            else:
                cur[j] = max(prev[j], cur[j - 1])
        prev = cur
    return prev[len(b)]


def rouge_l(gold: list[str], pred: list[str]) -> RougeLScore:
    """LCS-based precision/recall/F1 over token sequences.

    The F1 is computed as 2*|LCS| / (|gold| + |pred|), the single-division
    form of the harmonic mean, so scores that land exactly on a threshold
    value compare exactly.
    """
    lcs = lcs_length(gold, pred)
    precision = lcs / len(pred) if pred else 0.0
    recall = lcs / len(gold) if gold else 0.0
    f1 = 2 * lcs / (len(gold) + len(pred)) if lcs else 0.0
    return RougeLScore(precision, recall, f1)


def normalize_text(text: str) -> str:
    """Lowercase and collapse whitespace runs to single spaces."""
    return " ".join(text.lower().split())


def normalize_span(text: str | None) -> str:
    """Span normalization before comparison: lowercase, collapse whitespace,
    and strip trailing punctuation (except '*')."""
    if not text:
        return ""
    return normalize_text(text).rstrip(_TRAILING_PUNCT).strip()


def threshold_for(gold_len: int, config: FtsConfig) -> float:
    """Band lookup for the match threshold; downstream acceptance is score >= threshold."""
    if gold_len < 0:
        raise ValueError("gold length must be >= 0")
    for max_len, threshold in config.threshold_schedule:
        if max_len is None or gold_len <= max_len:
            return threshold
    raise AssertionError("threshold schedule left a length uncovered")


class MatchCase(enum.Enum):
    """How a predicted span's boundary relates to the gold span."""

    EXACT = "exact"
    HALLUCINATION = "hallucination"
    OVER = "over"
    UNDER = "under"
    SHIFT = "shift"
    NO_OVERLAP = "no_overlap"


def _is_contiguous_subsequence(needle: list[str], haystack: list[str]) -> bool:
    n = len(needle)
    return any(haystack[i:i + n] == needle for i in range(len(haystack) - n + 1))


def classify_match_case(gold: list[str], pred: list[str], pred_in_input: bool) -> MatchCase:
    """Label one (gold, pred) pair of stopword-filtered token sequences.

    Exactly one case applies: hallucination when the pred text was not found
    in the input, exact on equality, over/under for contiguous containment
    one way or the other, no-overlap when the LCS is empty, shift otherwise.
    """
    if not pred_in_input:
        return MatchCase.HALLUCINATION
    if gold == pred:
        return MatchCase.EXACT
    if not gold or not pred:
        return MatchCase.NO_OVERLAP
    if _is_contiguous_subsequence(gold, pred):
        return MatchCase.OVER
    if _is_contiguous_subsequence(pred, gold):
        return MatchCase.UNDER
    if lcs_length(gold, pred) == 0:
        return MatchCase.NO_OVERLAP
    return MatchCase.SHIFT


@dataclass(frozen=True)
class _SpanComparison:
    score: float
    gold_len: int
    gold_tokens: tuple[str, ...]
    pred_tokens: tuple[str, ...]
    pred_in_input: bool


def _compare_spans(gold_text: str, pred_text: str, input_text: str,
                   config: FtsConfig) -> _SpanComparison:
    """The full scoring cascade for one explicit gold/pred span pair."""
    gold_norm = normalize_span(gold_text)
    pred_norm = normalize_span(pred_text)

    gold_ws = gold_norm.split()
    pred_ws = pred_norm.split()
    gold_filtered = remove_stopwords(gold_ws, config.stopwords)
    pred_filtered = remove_stopwords(pred_ws, config.stopwords)
    gold_len = len(gold_filtered)

    pred_in_input = pred_norm in normalize_text(input_text)

    def done(score: float) -> _SpanComparison:
        return _SpanComparison(score, gold_len, tuple(gold_filtered),
                               tuple(pred_filtered), pred_in_input)

    if not gold_norm and not pred_norm:
        return done(1.0)
    if not gold_norm or not pred_norm:
        return done(0.0)
    if not pred_in_input:
        return done(0.0)
    if not set(gold_ws) & set(pred_ws):
        return done(0.0)
    if gold_filtered == pred_filtered:
        return done(1.0)
    if not set(gold_filtered) & set(pred_filtered):
        return done(0.0)
    score = rouge_l(tokenize(" ".join(gold_filtered)),
                    tokenize(" ".join(pred_filtered))).f1
    return done(score)


def fts_score(gold_text: str, pred_text: str, input_text: str,
              config: FtsConfig) -> tuple[float, int]:
    """Flexible similarity of a predicted span against a gold span.

    Returns ``(score, gold_len)`` where ``gold_len`` is the stopword-filtered
    gold token count that drives the threshold lookup. The score is 0 when
    the predicted text does not occur in the input text (hallucination) or
    shares no tokens with the gold text, 1 when the filtered token sequences
    coincide, and the Rouge-L F1 of the filtered sequences otherwise.
    """
    cmp = _compare_spans(gold_text, pred_text, input_text, config)
    return cmp.score, cmp.gold_len


def component_text_match(gold: AspectField | str, pred: AspectField | str,
                         input_text: str, config: FtsConfig,
                         ) -> tuple[float, bool, MatchCase]:
    """Score one extraction component pair and decide whether it matches.

    Implicit aspects short-circuit: two implicit aspects are a perfect match,
    an implicit paired with an explicit span scores zero. Explicit pairs are
    matched when their similarity reaches the length-banded threshold.
    """
    if isinstance(gold, AspectField) or isinstance(pred, AspectField):
        if not (isinstance(gold, AspectField) and isinstance(pred, AspectField)):
            raise TypeError("cannot compare an aspect field against a bare span")
        if gold.is_implicit and pred.is_implicit:
            return 1.0, True, MatchCase.EXACT
        if gold.is_implicit or pred.is_implicit:
            return 0.0, False, MatchCase.NO_OVERLAP
        gold_text, pred_text = gold.span, pred.span
    else:
        gold_text, pred_text = gold, pred

    cmp = _compare_spans(gold_text, pred_text, input_text, config)
    matched = cmp.score >= threshold_for(cmp.gold_len, config)
    case = classify_match_case(list(cmp.gold_tokens), list(cmp.pred_tokens),
                               cmp.pred_in_input)
    return cmp.score, matched, case

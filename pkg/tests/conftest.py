"""Shared fixtures: the frozen golden rows for the span scorer and seeded
random corpus generators used by the property and acceptance tests.
"""
from __future__ import annotations

import random

from absa_eval.core import (AspectField, CategoryLabel, EvalEntry, OpinionUnit,
                            SentimentLabel, TaskKind)

# Golden rows for the span scorer: (component, gold, pred, fts at 2 decimals,
# filtered gold length, threshold, match verdict). The input text for each
# row just needs to contain the predicted span so the hallucination check
# passes; scores depend only on the two spans.
GOLDEN_SPAN_ROWS = [
    ("aspect", "Beginner Italian I and II", "my interest in Italian", 0.29, 4, 0.6, False),
    ("aspect", "booking Accommodation with Exeter", "Accommodation", 0.40, 4, 0.6, False),
    ("aspect", "desmos", "tools like desmos", 0.50, 1, 0.5, True),
    ("aspect", "BioE 102 class", "the class", 0.50, 3, 0.6, False),
    ("aspect", "opportunities to get involved",
     "opportunities to get involved in societies and meet likeminded people",
     0.60, 3, 0.6, True),
    ("aspect", "his lectures", "lectures", 0.67, 2, 0.5, True),
    ("aspect", "midterm and final", "the midterm", 0.67, 2, 0.5, True),
    ("aspect", "standard of teaching", "teaching", 0.67, 2, 0.5, True),
    ("aspect", "amount of careers help", "careers help", 0.80, 3, 0.6, True),
    ("aspect", "tutorials and in-residence sessions", "in-residence sessions",
     0.86, 3, 0.6, True),
    ("opinion", "made the class good / engaging", "good", 0.40, 5, 0.7, False),
    ("opinion", "great", "Has a great sense of humor", 0.40, 1, 0.5, False),
    ("opinion", "amazing place to study", "amazing", 0.50, 3, 0.6, False),
    ("opinion", "hard", "hard at the end", 0.50, 1, 0.5, True),
    ("opinion", "engaging and intuitive", "engaging", 0.67, 2, 0.5, True),
    ("opinion", "Not easy , but not that bad either", "not that bad either",
     0.67, 7, 0.7, False),
    ("opinion", "Fairly easy", "fairly easy to do well in", 0.67, 2, 0.5, True),
    ("opinion", "gets easier", "only gets easier", 0.80, 2, 0.5, True),
    ("opinion", "give a really thorough and satisfying answer",
     "really thorough and satisfying answer", 0.86, 4, 0.6, True),
    ("opinion", "Mostly common sense stuff", "common sense stuff", 0.86, 4, 0.6, True),
]


def row_input_text(gold: str, pred: str) -> str:
    return f"{gold} filler {pred}"


SENTIMENTS = (SentimentLabel.POSITIVE, SentimentLabel.NEUTRAL, SentimentLabel.NEGATIVE)


class TokenSource:
    """Hands out fresh, stopword-free alphanumeric tokens."""

    def __init__(self, prefix: str) -> None:
        self.prefix = prefix
        self.counter = 0

    def take(self, n: int) -> list[str]:
        out = [f"{self.prefix}{self.counter + i}x" for i in range(n)]
        self.counter += n
        return out


def _make_unit(task: TaskKind, aspect_tokens: list[str] | None,
               opinion_tokens: list[str], category: CategoryLabel | None,
               sentiment: SentimentLabel | None) -> OpinionUnit:
    has = set(task.components)
    return OpinionUnit(
        aspect=(AspectField.implicit() if aspect_tokens is None
                else AspectField(" ".join(aspect_tokens))) if "aspect" in has else None,
        opinion=" ".join(opinion_tokens) if "opinion" in has else None,
        category=category if "category" in has else None,
        sentiment=sentiment if "sentiment" in has else None,
    )


def _jitter_span(tokens: list[str], rng: random.Random, fresh: TokenSource) -> list[str]:
    # Drop or append one trailing token; keeps similarity above threshold.
    if len(tokens) >= 2 and rng.random() < 0.5:
        return tokens[:-1]
    return tokens + fresh.take(1)


def make_layered_entry(entry_id: str, task: TaskKind, rng: random.Random,
                       jitter: bool) -> EvalEntry:
    """One entry whose preds are exact copies, single-token boundary
    variants (when ``jitter``), or fully fresh units.

    Gold units use pairwise-disjoint span token blocks and unique category
    mains, fresh units share no span tokens or category main with any gold,
    and every span occurs verbatim in the entry text. Unit lists come out
    duplicate-free with at most one pred sourced from each gold.
    """
    fresh = TokenSource(f"f{entry_id.replace('-', '')}")
    gold_source = TokenSource(f"g{entry_id.replace('-', '')}")
    n_gold = rng.randint(0, 4)

    gold_units = []
    gold_parts = []
    for i in range(n_gold):
        aspect_tokens = None if rng.random() < 0.15 else gold_source.take(rng.randint(2, 3))
        opinion_tokens = gold_source.take(rng.randint(2, 4))
        category = CategoryLabel(f"main{entry_id}{i}", f"sub{i}")
        gold_units.append(_make_unit(task, aspect_tokens, opinion_tokens,
                                     category, rng.choice(SENTIMENTS)))
        gold_parts += (aspect_tokens or []) + opinion_tokens

    pred_units = []
    pred_parts = []
    for i, unit in enumerate(gold_units):
        roll = rng.random()
        if roll < 0.4:
            pred_units.append(unit)  # exact copy
        elif jitter and roll < 0.7:
            aspect = unit.aspect
            opinion = unit.opinion
            if "aspect" in task.components and aspect is not None and not aspect.is_implicit \
                    and rng.random() < 0.5:
                tokens = _jitter_span(aspect.span.split(), rng, fresh)
                aspect = AspectField(" ".join(tokens))
                pred_parts += tokens
            elif opinion is not None:
                tokens = _jitter_span(opinion.split(), rng, fresh)
                opinion = " ".join(tokens)
                pred_parts += tokens
            pred_units.append(OpinionUnit(aspect=aspect, opinion=opinion,
                                          category=unit.category,
                                          sentiment=unit.sentiment))
        # otherwise: gold unit left without a counterpart (a recall miss)
    for j in range(rng.randint(0, 2)):
        aspect_tokens = fresh.take(2)
        opinion_tokens = fresh.take(2)
        pred_units.append(_make_unit(task, aspect_tokens, opinion_tokens,
                                     CategoryLabel(f"fresh{entry_id}{j}", "sub"),
                                     rng.choice(SENTIMENTS)))
        pred_parts += aspect_tokens + opinion_tokens

    text = " ".join(gold_parts + pred_parts) or "empty entry text"
    return EvalEntry(entry_id, text, task, tuple(gold_units), tuple(pred_units))


def make_layered_corpus(task: TaskKind, n_entries: int, seed: int,
                        jitter: bool) -> list[EvalEntry]:
    rng = random.Random(seed)
    return [make_layered_entry(f"e{i}", task, rng, jitter) for i in range(n_entries)]


def make_messy_entry(entry_id: str, task: TaskKind, rng: random.Random) -> EvalEntry:
    """Unconstrained entry: spans drawn from one shared pool with arbitrary
    overlaps, slips, duplicates, and hallucinations."""
    pool = [f"t{k}" for k in range(12)]
    text = " ".join(pool)

    def random_span() -> str:
        start = rng.randrange(0, len(pool) - 1)
        length = rng.randint(1, 4)
        return " ".join(pool[start:start + length])

    def random_unit(hallucinate: bool) -> OpinionUnit:
        opinion = ("ghost span" if hallucinate and rng.random() < 0.5
                   else random_span())
        aspect_tokens = None if rng.random() < 0.2 else random_span()
        return _make_unit(
            task,
            None if aspect_tokens is None else aspect_tokens.split(),
            opinion.split(),
            CategoryLabel(rng.choice(["Alpha", "Beta"]), rng.choice(["one", "two", None])),
            rng.choice(SENTIMENTS),
        )

    gold = tuple(random_unit(hallucinate=False) for _ in range(rng.randint(0, 4)))
    pred = tuple(random_unit(hallucinate=True) for _ in range(rng.randint(0, 5)))
    return EvalEntry(entry_id, text, task, gold, pred)


def make_messy_corpus(task: TaskKind, n_entries: int, seed: int) -> list[EvalEntry]:
    rng = random.Random(seed)
    return [make_messy_entry(f"m{i}", task, rng) for i in range(n_entries)]

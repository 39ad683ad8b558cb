"""Evaluation toolkit for aspect-based sentiment extraction outputs.

Units are matched with flexible text similarity (stopword-filtered Rouge-L
with a hallucination check and length-banded thresholds) and paired one-to-
one by a maximum-total-similarity assignment; an exact-match baseline and
component-level diagnostics ride along.
"""

from .core import (AspectField, CategoryLabel, DEFAULT_STOPWORDS, EvalEntry,
                   FtsConfig, OpinionUnit, SentimentLabel, TaskKind,
                   default_config)
from .diagnostics import (category_match_table, correlation,
                          implicit_aspect_stats, match_case_breakdown,
                          paired_difference_stats)
from .pairing import (Pairing, SimilarityMatrix, build_similarity_matrix,
                      optimal_assignment, unit_similarity)
from .prompts import emit_prompt
from .scoring import (ConfusionCounts, CorpusReport, EntryEvalResult, PRF,
                      aggregate_macro, evaluate_entry, exact_match_entry,
                      exact_match_report)
from .simulation import generate_cases, run_simulation
from .tagged import derive_subtask_gold, parse_output, serialize_units
from .textsim import (MatchCase, RougeLScore, classify_match_case,
                      component_text_match, fts_score, remove_stopwords,
                      rouge_l, threshold_for, tokenize)

__version__ = "0.1.0"

__all__ = [
    "AspectField", "CategoryLabel", "ConfusionCounts", "CorpusReport",
    "DEFAULT_STOPWORDS", "EntryEvalResult", "EvalEntry", "FtsConfig",
    "MatchCase", "OpinionUnit", "PRF", "Pairing", "RougeLScore",
    "SentimentLabel", "SimilarityMatrix", "TaskKind", "aggregate_macro",
    "build_similarity_matrix", "category_match_table", "classify_match_case",
    "component_text_match", "correlation", "default_config",
    "derive_subtask_gold", "emit_prompt", "evaluate_entry",
    "exact_match_entry", "exact_match_report", "fts_score",
    "generate_cases", "implicit_aspect_stats", "match_case_breakdown",
    "optimal_assignment", "paired_difference_stats", "parse_output",
    "remove_stopwords", "rouge_l", "run_simulation", "serialize_units",
    "threshold_for", "tokenize", "unit_similarity",
]

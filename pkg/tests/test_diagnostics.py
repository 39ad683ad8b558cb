import math

import pytest

from absa_eval.core import (AspectField, CategoryLabel, EvalEntry, OpinionUnit,
                            TaskKind, default_config)
from absa_eval.diagnostics import (category_match_table, correlation,
                                   implicit_aspect_stats, match_case_breakdown,
                                   paired_difference_stats)
from absa_eval.scoring import evaluate_entry
from absa_eval.textsim import MatchCase
from conftest import make_layered_corpus

CONFIG = default_config()


def oe_entry(entry_id, text, gold_spans, pred_spans):
    return EvalEntry(entry_id, text, TaskKind.OE,
                     tuple(OpinionUnit(opinion=s) for s in gold_spans),
                     tuple(OpinionUnit(opinion=s) for s in pred_spans))


def test_breakdown_on_a_perfect_corpus_is_all_exact():
    entry = oe_entry("p", "the lab was great fun", ["great fun"], ["great fun"])
    breakdown = match_case_breakdown([evaluate_entry(entry, CONFIG)])
    tally = breakdown.per_component["opinion"]
    assert tally.accepted == {MatchCase.EXACT: 1}
    assert tally.rejected == {}
    doc = tally.to_dict()
    assert doc["accepted"]["cases"]["exact"] == {"count": 1, "pct": 100.0}
    assert doc["accepted"]["total"] == 1


def test_breakdown_counts_within_threshold_over_extensions():
    # every pred adds one extra in-text token, within threshold
    entries = [oe_entry(f"o{i}", "really great fun stuff here",
                        ["great fun"], ["great fun stuff"]) for i in range(3)]
    results = [evaluate_entry(e, CONFIG) for e in entries]
    tally = match_case_breakdown(results).per_component["opinion"]
    assert tally.accepted == {MatchCase.OVER: 3}
    assert tally.to_dict()["accepted"]["cases"]["over"]["pct"] == 100.0


def test_breakdown_splits_accepted_from_rejected_and_conserves_counts():
    entries = [
        oe_entry("a", "the lab was great fun all term",
                 ["great fun"], ["great fun all term"]),        # over, accepted
        oe_entry("b", "campus is an amazing place to study",
                 ["amazing place to study"], ["amazing"]),      # under, rejected
        oe_entry("c", "warm pie", ["warm pie"], ["ghost words"]),  # hallucination
    ]
    results = [evaluate_entry(e, CONFIG) for e in entries]
    tally = match_case_breakdown(results).per_component["opinion"]
    paired = sum(len(r.pair_evals) for r in results)
    assert sum(tally.accepted.values()) + sum(tally.rejected.values()) == paired
    assert tally.rejected[MatchCase.HALLUCINATION] == 1
    assert tally.rejected[MatchCase.UNDER] == 1


def test_breakdown_excludes_unmatched_units_but_reports_them():
    entries = [oe_entry("u", "great fun here", ["great fun"],
                        ["great fun", "here"])]
    results = [evaluate_entry(e, CONFIG) for e in entries]
    tally = match_case_breakdown(results).per_component["opinion"]
    assert sum(tally.accepted.values()) + sum(tally.rejected.values()) == 1
    assert tally.unpaired_pred == 1
    assert tally.unpaired_gold == 0


def test_breakdown_percentages_sum_to_hundred_per_side():
    corpus = make_layered_corpus(TaskKind.AOPE, 40, seed=3, jitter=True)
    results = [evaluate_entry(e, CONFIG) for e in corpus]
    breakdown = match_case_breakdown(results)
    for tally in breakdown.per_component.values():
        doc = tally.to_dict()
        for side in ("accepted", "rejected"):
            if doc[side]["total"]:
                total_pct = sum(c["pct"] for c in doc[side]["cases"].values())
                assert total_pct == pytest.approx(100.0, abs=0.05)


def test_accepted_exact_pairs_carry_perfect_scores():
    corpus = make_layered_corpus(TaskKind.ASQE, 40, seed=9, jitter=True)
    for result in (evaluate_entry(e, CONFIG) for e in corpus):
        for pair in result.pair_evals:
            for component in ("aspect", "opinion"):
                if pair.matched[component] and \
                        pair.cases[component] is MatchCase.EXACT:
                    assert pair.scores[component] == 1.0


def aoc_entry(entry_id, gold_cat, pred_cat):
    gold = OpinionUnit(AspectField("lab"), "great", CategoryLabel.parse(gold_cat))
    pred = OpinionUnit(AspectField("lab"), "great", CategoryLabel.parse(pred_cat))
    return EvalEntry(entry_id, "the lab was great", TaskKind.AOC, (gold,), (pred,))


def test_category_table_single_matching_pair():
    result = evaluate_entry(aoc_entry("c", "Staff - Teaching", "Staff - Teaching"),
                            CONFIG)
    table = category_match_table([result])
    assert len(table.rows) == 1
    row = table.rows[0]
    assert (row.label, row.paired, row.matched, row.match_pct) == \
        ("Staff - Teaching", 1, 1, 100.0)


def test_category_table_flags_main_only_mismatch():
    result = evaluate_entry(aoc_entry("m", "Staff - Teaching", "Staff - Helpfulness"),
                            CONFIG)
    table = category_match_table([result])
    row = table.rows[0]
    assert (row.label, row.matched, row.main_only, row.match_pct) == \
        ("Staff - Teaching", 0, 1, 0.0)


def test_category_table_empty_results():
    assert category_match_table([]).rows == ()


def test_implicit_stats_with_no_implicit_golds():
    corpus = [aoc_entry("x", "Staff - Teaching", "Staff - Teaching")]
    results = [evaluate_entry(e, CONFIG) for e in corpus]
    assert implicit_aspect_stats(results) == (0, 0, 0.0)


def test_implicit_stats_three_of_four_matched():
    def entry(entry_id, pred_aspect):
        gold = OpinionUnit(AspectField.implicit(), "great")
        pred = OpinionUnit(pred_aspect, "great")
        return EvalEntry(entry_id, "it was great", TaskKind.AOPE, (gold,), (pred,))

    entries = [entry("i1", AspectField.implicit()),
               entry("i2", AspectField.implicit()),
               entry("i3", AspectField.implicit()),
               entry("i4", AspectField("it"))]  # explicit pred: no match
    results = [evaluate_entry(e, CONFIG) for e in entries]
    assert implicit_aspect_stats(results) == (4, 3, 75.0)


def test_correlation_identity_and_reversal():
    assert correlation([1, 2, 3, 4], [1, 2, 3, 4]) == (pytest.approx(1.0),
                                                       pytest.approx(1.0))
    _, spearman = correlation([1, 2, 3, 4], [8, 6, 4, 2])
    assert spearman == pytest.approx(-1.0)


def test_correlation_hand_ranked_example():
    pearson, spearman = correlation([1, 2, 3, 4], [1, 3, 2, 4])
    assert spearman == pytest.approx(0.8, abs=1e-9)
    # direct product-moment formula as the oracle
    xs, ys = [1, 2, 3, 4], [1, 3, 2, 4]
    mx, my = 2.5, 2.5
    cov = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    r_direct = cov / math.sqrt(sum((x - mx) ** 2 for x in xs)
                               * sum((y - my) ** 2 for y in ys))
    assert pearson == pytest.approx(r_direct, abs=1e-12)


def test_correlation_agrees_with_scipy():
    scipy_stats = pytest.importorskip("scipy.stats")
    xs = [0.12, 0.5, 0.5, 0.33, 0.9, 0.71, 0.2, 0.44]
    ys = [0.3, 0.41, 0.62, 0.3, 0.88, 0.7, 0.24, 0.44]
    pearson, spearman = correlation(xs, ys)
    assert pearson == pytest.approx(scipy_stats.pearsonr(xs, ys).statistic)
    assert spearman == pytest.approx(scipy_stats.spearmanr(xs, ys).statistic)


def test_correlation_affine_and_monotone_invariance():
    xs = [0.1, 0.4, 0.2, 0.9, 0.6]
    ys = [0.2, 0.5, 0.1, 0.8, 0.9]
    base_pearson, base_spearman = correlation(xs, ys)
    scaled = [3.0 * x + 1.0 for x in xs]
    pearson, spearman = correlation(scaled, ys)
    assert pearson == pytest.approx(base_pearson)
    assert spearman == pytest.approx(base_spearman)
    cubed = [x ** 3 for x in xs]  # strictly monotone, not affine
    _, spearman = correlation(cubed, ys)
    assert spearman == pytest.approx(base_spearman)


def test_correlation_errors_and_degenerate_variance():
    with pytest.raises(ValueError):
        correlation([1.0], [1.0])
    with pytest.raises(ValueError):
        correlation([1.0, 2.0], [1.0])
    pearson, spearman = correlation([1.0, 1.0, 1.0], [1.0, 2.0, 3.0])
    assert math.isnan(pearson) and math.isnan(spearman)


def test_paired_stats_identical_inputs():
    stats = paired_difference_stats([0.3, 0.4, 0.5], [0.3, 0.4, 0.5])
    assert stats.mean_delta == 0.0
    assert stats.cohens_d == 0.0
    assert stats.t_statistic == 0.0


def test_paired_stats_constant_delta_reports_infinity():
    stats = paired_difference_stats([0.6] * 5, [0.5] * 5)
    assert stats.mean_delta == pytest.approx(0.1)
    assert stats.std_delta == 0.0
    assert math.isinf(stats.t_statistic) and stats.t_statistic > 0
    assert math.isinf(stats.cohens_d)


def test_paired_stats_direct_arithmetic_example():
    stats = paired_difference_stats([0.5, 0.7], [0.4, 0.5])
    assert stats.mean_delta == pytest.approx(0.15)
    assert stats.std_delta == pytest.approx(math.sqrt(0.005))
    assert stats.t_statistic == pytest.approx(0.15 / (math.sqrt(0.005) / math.sqrt(2)))


def test_paired_stats_errors():
    with pytest.raises(ValueError):
        paired_difference_stats([1.0, 2.0], [1.0])
    with pytest.raises(ValueError):
        paired_difference_stats([1.0], [1.0])

import json
from pathlib import Path

import pytest

from absa_eval.cli import main as cli_main
from absa_eval_bindings import evaluate, fts, simulate

FIXTURES = Path(__file__).parent / "fixtures"
GOLD_PATH = FIXTURES / "gold.asqe.jsonl"
PRED_PATH = FIXTURES / "pred.asqe.jsonl"


def load_records(path: Path) -> list[dict]:
    return [json.loads(line) for line in path.read_text().splitlines() if line]


def assert_equal_documents(a, b, path="$"):
    assert type(a) is type(b), f"{path}: {type(a)} != {type(b)}"
    if isinstance(a, dict):
        assert a.keys() == b.keys(), f"{path}: key sets differ"
        for key in a:
            assert_equal_documents(a[key], b[key], f"{path}.{key}")
    elif isinstance(a, list):
        assert len(a) == len(b), f"{path}: lengths differ"
        for i, (x, y) in enumerate(zip(a, b)):
            assert_equal_documents(x, y, f"{path}[{i}]")
    elif isinstance(a, float):
        assert a == pytest.approx(b, abs=1e-9), path
    else:
        assert a == b, path


@pytest.mark.parametrize("metric", ["fts-obp", "exact"])
def test_evaluate_matches_the_cli_report_field_for_field(tmp_path, metric):
    out = tmp_path / "report.json"
    code = cli_main(["evaluate", str(GOLD_PATH), str(PRED_PATH),
                     "--task", "ASQE", "--metric", metric, "--out", str(out)])
    assert code == 0
    cli_doc = json.loads(out.read_text())

    bound = evaluate(load_records(GOLD_PATH), load_records(PRED_PATH),
                     "ASQE", metric=metric)
    assert_equal_documents(bound, cli_doc)


def test_evaluate_exercises_the_fixture_corpus_features():
    doc = evaluate(load_records(GOLD_PATH), load_records(PRED_PATH), "ASQE")
    assert doc["entry_count"] == 4
    assert doc["parse_failures"] == 1
    assert 0.0 < doc["macro"]["f1"] < 1.0
    assert doc["diagnostics"]["implicit_aspect"]["total"] == 2


def test_evaluate_respects_config_mappings():
    strict = {"threshold_schedule": [[None, 1.0]], "stopwords": []}
    default_doc = evaluate(load_records(GOLD_PATH), load_records(PRED_PATH), "ASQE")
    strict_doc = evaluate(load_records(GOLD_PATH), load_records(PRED_PATH),
                          "ASQE", config=strict)
    assert strict_doc["macro"]["f1"] <= default_doc["macro"]["f1"]


def test_evaluate_raises_on_mismatched_ids():
    gold = load_records(GOLD_PATH)
    with pytest.raises(Exception, match="no prediction"):
        evaluate(gold, load_records(PRED_PATH)[:2], "ASQE")


def test_evaluate_raises_with_record_context():
    gold = load_records(GOLD_PATH)
    bad = [{"id": "r1", "task": "ASQE", "units": [{"opinion": "loud"}]}]
    with pytest.raises(ValueError, match="pred record 0"):
        evaluate(gold, bad, "ASQE")
    with pytest.raises(ValueError, match="unknown metric"):
        evaluate(gold[:1], [{"id": "r1", "task": "ASQE", "raw": "[]"}],
                 "ASQE", metric="fuzzy")


def test_fts_reproduces_three_golden_rows():
    score, matched, case = fts("desmos", "tools like desmos",
                               "we used tools like desmos in class")
    assert (round(score, 2), matched, case) == (0.50, True, "over")

    score, matched, case = fts(
        "opportunities to get involved",
        "opportunities to get involved in societies and meet likeminded people",
        "there are opportunities to get involved in societies and meet "
        "likeminded people here")
    assert (round(score, 2), matched, case) == (0.60, True, "over")

    score, matched, case = fts("amazing place to study", "amazing",
                               "this is an amazing place to study")
    assert (round(score, 2), matched, case) == (0.50, False, "under")


def test_simulate_returns_the_table_mapping():
    table = simulate()
    assert table["columns"][0] == "gold_len"
    assert len(table["rows"]) == 11
    totals = table["rows"][-1]
    assert totals[0] == "TOTAL"
    assert (totals[3], totals[4]) == (200, 51)

    strict = simulate(config={"threshold_schedule": [[None, 1.0]]})
    assert strict["rows"][-1][4] == 0  # nothing but exact copies passes

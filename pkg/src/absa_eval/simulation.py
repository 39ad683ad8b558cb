"""Boundary-variation simulation over a synthetic 50-token input.

Gold spans of lengths 1..10 are taken from the front of the token stream and
varied three ways: extended past the end (over by n <= 20), truncated from
the end (under by n <= len-1), and slid right while keeping length (shift by
n). Shifted windows with no remaining overlap are excluded from the default
counting; one exact copy per gold length completes the 300 generated cases.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Decimal

from .core import FtsConfig, default_config
from .textsim import fts_score, threshold_for

TOKENS = tuple(f"a{i}" for i in range(1, 51))
INPUT_TEXT = " ".join(TOKENS)

SCENARIO_EXACT = "exact"
SCENARIO_OVER = "over"
SCENARIO_UNDER = "under"
SCENARIO_SHIFT = "shift"
TABLE_SCENARIOS = (SCENARIO_OVER, SCENARIO_UNDER, SCENARIO_SHIFT)


@dataclass(frozen=True)
class SimCase:
    scenario: str
    gold_len: int
    n: int
    gold: tuple[str, ...]
    pred: tuple[str, ...]


def generate_cases(include_zero_overlap_shifts: bool = False) -> list[SimCase]:
    """All 300 synthetic gold/pred cases (10 per-length exact copies included).

    With ``include_zero_overlap_shifts`` the shift magnitude runs to 10 for
    every length instead of stopping at the last overlapping window.
    """
    cases = []
    for gold_len in range(1, 11):
        gold = TOKENS[:gold_len]
        cases.append(SimCase(SCENARIO_EXACT, gold_len, 0, gold, gold))
        for n in range(1, 21):
            cases.append(SimCase(SCENARIO_OVER, gold_len, n, gold, TOKENS[:gold_len + n]))
        for n in range(1, gold_len):
            cases.append(SimCase(SCENARIO_UNDER, gold_len, n, gold, TOKENS[:gold_len - n]))
        max_shift = 10 if include_zero_overlap_shifts else gold_len - 1
        for n in range(1, max_shift + 1):
            cases.append(SimCase(SCENARIO_SHIFT, gold_len, n, gold,
                                 TOKENS[n:n + gold_len]))
    return cases


def score_case(case: SimCase, config: FtsConfig) -> tuple[float, bool]:
    score, gold_len = fts_score(" ".join(case.gold), " ".join(case.pred),
                                INPUT_TEXT, config)
    return score, score >= threshold_for(gold_len, config)


def _ratio(accepted: int, total: int, places: str) -> str:
    if total == 0:
        return "0.00"
    quantized = (Decimal(accepted) / Decimal(total)).quantize(
        Decimal(places), rounding=ROUND_HALF_EVEN)
    return f"{quantized:.2f}"


def _range_str(accepted_ns: list[int]) -> str:
    if not accepted_ns:
        return "-"
    low, high = min(accepted_ns), max(accepted_ns)
    return str(low) if low == high else f"{low}-{high}"


@dataclass(frozen=True)
class ScenarioCell:
    n_range: str
    total: int
    accepted: int
    ratio: str


@dataclass(frozen=True)
class SimTableRow:
    gold_len: str  # "1".."10" or "TOTAL"
    threshold: str
    cells: dict[str, ScenarioCell]


CSV_COLUMNS = ["gold_len", "threshold"]
for _scenario in TABLE_SCENARIOS:
    CSV_COLUMNS += [f"{_scenario}_n_range", f"{_scenario}_N",
                    f"{_scenario}_A", f"{_scenario}_A_N"]


def run_simulation(config: FtsConfig | None = None) -> list[SimTableRow]:
    """Score every generated case and tabulate acceptances per gold length
    and scenario, with the per-scenario totals in a final row."""
    config = config or default_config()
    cases = generate_cases()
    rows = []
    totals = {s: [0, 0] for s in TABLE_SCENARIOS}  # scenario -> [N, A]
    for gold_len in range(1, 11):
        cells = {}
        for scenario in TABLE_SCENARIOS:
            subset = [c for c in cases
                      if c.gold_len == gold_len and c.scenario == scenario]
            accepted_ns = [c.n for c in subset if score_case(c, config)[1]]
            cells[scenario] = ScenarioCell(
                n_range=_range_str(accepted_ns),
                total=len(subset),
                accepted=len(accepted_ns),
                ratio=_ratio(len(accepted_ns), len(subset), "0.1"),
            )
            totals[scenario][0] += len(subset)
            totals[scenario][1] += len(accepted_ns)
        rows.append(SimTableRow(str(gold_len),
                                f"{threshold_for(gold_len, config):.1f}", cells))
    rows.append(SimTableRow("TOTAL", "-", {
        s: ScenarioCell("-", totals[s][0], totals[s][1],
                        _ratio(totals[s][1], totals[s][0], "0.01"))
        for s in TABLE_SCENARIOS
    }))
    return rows


def table_to_csv(rows: list[SimTableRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        record = [row.gold_len, row.threshold]
        for scenario in TABLE_SCENARIOS:
            cell = row.cells[scenario]
            record += [cell.n_range, cell.total, cell.accepted, cell.ratio]
        writer.writerow(record)
    return buf.getvalue()


# The published acceptance table the default configuration must reproduce:
# per gold length and scenario, (accepted n-range, N, A, A/N), and the totals.
EXPECTED_TABLE: tuple[tuple, ...] = (
    ("1", "0.5", "1-2", 20, 2, "0.10", "-", 0, 0, "0.00", "-", 0, 0, "0.00"),
    ("2", "0.5", "1-4", 20, 4, "0.20", "1", 1, 1, "1.00", "1", 1, 1, "1.00"),
    ("3", "0.6", "1-4", 20, 4, "0.20", "1", 2, 1, "0.50", "1", 2, 1, "0.50"),
    ("4", "0.6", "1-5", 20, 5, "0.20", "1-2", 3, 2, "0.70", "1", 3, 1, "0.30"),
    ("5", "0.7", "1-4", 20, 4, "0.20", "1-2", 4, 2, "0.50", "1", 4, 1, "0.20"),
    ("6", "0.7", "1-5", 20, 5, "0.20", "1-2", 5, 2, "0.40", "1", 5, 1, "0.20"),
    ("7", "0.7", "1-6", 20, 6, "0.30", "1-3", 6, 3, "0.50", "1-2", 6, 2, "0.30"),
    ("8", "0.7", "1-6", 20, 6, "0.30", "1-3", 7, 3, "0.40", "1-2", 7, 2, "0.30"),
    ("9", "0.7", "1-7", 20, 7, "0.40", "1-4", 8, 4, "0.50", "1-2", 8, 2, "0.20"),
    ("10", "0.7", "1-8", 20, 8, "0.40", "1-4", 9, 4, "0.40", "1-3", 9, 3, "0.30"),
    ("TOTAL", "-", "-", 200, 51, "0.26", "-", 45, 22, "0.49", "-", 45, 14, "0.31"),
)


def rows_as_tuples(rows: list[SimTableRow]) -> tuple[tuple, ...]:
    out = []
    for row in rows:
        record: list = [row.gold_len, row.threshold]
        for scenario in TABLE_SCENARIOS:
            cell = row.cells[scenario]
            record += [cell.n_range, cell.total, cell.accepted, cell.ratio]
        out.append(tuple(record))
    return tuple(out)


def check_against_expected(rows: list[SimTableRow]) -> list[str]:
    """Differences from the pinned table; empty when the run reproduces it."""
    produced = rows_as_tuples(rows)
    problems = []
    if len(produced) != len(EXPECTED_TABLE):
        problems.append(f"row count {len(produced)} != {len(EXPECTED_TABLE)}")
    for got, want in zip(produced, EXPECTED_TABLE):
        if got != want:
            problems.append(f"row {want[0]}: got {got}, want {want}")
    return problems

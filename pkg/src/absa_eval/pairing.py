"""Gold-pred unit similarity and the maximum-total one-to-one pairing.

The assignment solver works on exact rationals (floats lift losslessly into
``Fraction``), so optima and ties are decided exactly and the reported
pairing is bit-reproducible. Ties between equal-total assignments resolve to
the lexicographically smallest pair list by (gold index, pred index).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import FtsConfig, OpinionUnit, TaskKind
from .textsim import component_text_match, fts_score


def category_similarity(gold, pred, config: FtsConfig) -> float:
    """1 for a full label match, the partial credit for a main-only match, else 0."""
    if gold.full_key() == pred.full_key():
        return 1.0
    if gold.main_key() == pred.main_key():
        return config.partial_main_category_score
    return 0.0


def unit_similarity(gold: OpinionUnit, pred: OpinionUnit, input_text: str,
                    task: TaskKind, config: FtsConfig,
                    ) -> tuple[float, dict[str, float]]:
    """Weighted mean of per-component similarity scores for one unit pair.

    Aspect and opinion contribute their raw (unthresholded) text-similarity
    scores; category contributes 1 / partial / 0; sentiment is binary.
    """
    gold.require_valid_for(task)
    pred.require_valid_for(task)
    breakdown: dict[str, float] = {}
    for component in task.components:
        if component == "aspect":
            score, _, _ = component_text_match(gold.aspect, pred.aspect,
                                               input_text, config)
        elif component == "opinion":
            score, _ = fts_score(gold.opinion, pred.opinion, input_text, config)
        elif component == "category":
            score = category_similarity(gold.category, pred.category, config)
        else:
            score = 1.0 if gold.sentiment is pred.sentiment else 0.0
        breakdown[component] = score
    total_weight = sum(config.component_weights.get(c, 0.0) for c in task.components)
    if total_weight <= 0:
        raise ValueError(f"component weights sum to zero over task {task.value}")
    cell = sum(config.component_weights.get(c, 0.0) * breakdown[c]
               for c in task.components) / total_weight
    return cell, breakdown


@dataclass(frozen=True)
class SimilarityMatrix:
    """Gold-by-pred unit similarity with per-cell component breakdowns."""

    n: int
    p: int
    cells: tuple[tuple[float, ...], ...]
    breakdowns: tuple[tuple[dict[str, float], ...], ...]


def build_similarity_matrix(gold: list[OpinionUnit], pred: list[OpinionUnit],
                            input_text: str, task: TaskKind,
                            config: FtsConfig) -> SimilarityMatrix:
    cells = []
    breakdowns = []
    for g in gold:
        row_cells = []
        row_breakdowns = []
        for p in pred:
            cell, breakdown = unit_similarity(g, p, input_text, task, config)
            row_cells.append(cell)
            row_breakdowns.append(breakdown)
        cells.append(tuple(row_cells))
        breakdowns.append(tuple(row_breakdowns))
    return SimilarityMatrix(len(gold), len(pred), tuple(cells), tuple(breakdowns))


@dataclass(frozen=True)
class Pairing:
    """min(n, p) one-to-one pairs plus the |n-p| units left unmatched."""

    pairs: tuple[tuple[int, int], ...]
    unmatched_gold: tuple[int, ...]
    unmatched_pred: tuple[int, ...]


_BIG = Fraction(10 ** 9)


def _min_cost_assignment(cost: list[list[Fraction]]) -> list[int]:
    """Shortest-augmenting-path assignment for nr <= nc; returns row -> col."""
    nr = len(cost)
    nc = len(cost[0])
    u = [Fraction(0)] * (nr + 1)
    v = [Fraction(0)] * (nc + 1)
    col_row = [0] * (nc + 1)  # 1-based; 0 means free
    way = [0] * (nc + 1)
    for i in range(1, nr + 1):
        col_row[0] = i
        j0 = 0
        minv = [_BIG] * (nc + 1)
        used = [False] * (nc + 1)
        while True:
            used[j0] = True
            i0 = col_row[j0]
            delta = _BIG
            j1 = 0
            for j in range(1, nc + 1):
                if used[j]:
                    continue
                cur = cost[i0 - 1][j - 1] - u[i0] - v[j]
                if cur < minv[j]:
                    minv[j] = cur
                    way[j] = j0
                if minv[j] < delta:
                    delta = minv[j]
                    j1 = j
            for j in range(nc + 1):
                if used[j]:
                    u[col_row[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if col_row[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            col_row[j0] = col_row[j1]
            j0 = j1
    row_col = [-1] * nr
    for j in range(1, nc + 1):
        if col_row[j]:
            row_col[col_row[j] - 1] = j - 1
    return row_col


def _max_total(cells: list[list[Fraction]], rows: list[int], cols: list[int]) -> Fraction:
    """Maximum total similarity of a min(|rows|, |cols|)-pair matching."""
    if not rows or not cols:
        return Fraction(0)
    if len(rows) <= len(cols):
        cost = [[1 - cells[r][c] for c in cols] for r in rows]
    else:
        cost = [[1 - cells[r][c] for r in rows] for c in cols]
    assignment = _min_cost_assignment(cost)
    k = min(len(rows), len(cols))
    return k - sum(cost[i][j] for i, j in enumerate(assignment))


def optimal_assignment(matrix: SimilarityMatrix) -> Pairing:
    """Maximum-total-similarity matching of size min(n, p).

    Among equal-total matchings, returns the lexicographically smallest pair
    list ordered by (gold index, pred index), found by fixing gold rows in
    ascending order against the exact optimum of the remaining submatrix.
    """
    n, p = matrix.n, matrix.p
    if n == 0 or p == 0:
        return Pairing((), tuple(range(n)), tuple(range(p)))

    cells = [[Fraction(matrix.cells[i][j]) for j in range(p)] for i in range(n)]
    remaining_rows = list(range(n))
    remaining_cols = list(range(p))
    target = _max_total(cells, remaining_rows, remaining_cols)

    pairs: list[tuple[int, int]] = []
    unmatched_gold: list[int] = []
    for g in range(n):
        remaining_rows.remove(g)
        chosen = None
        for c in remaining_cols:
            rest = _max_total(cells, remaining_rows, [x for x in remaining_cols if x != c])
            if cells[g][c] + rest == target:
                chosen = c
                break
        if chosen is None:
            # Only legal when golds outnumber the preds still available.
            unmatched_gold.append(g)
            continue
        pairs.append((g, chosen))
        remaining_cols.remove(chosen)
        target -= cells[g][chosen]

    return Pairing(tuple(pairs), tuple(unmatched_gold), tuple(remaining_cols))

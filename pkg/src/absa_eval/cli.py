"""Command-line surface: corpus evaluation, subtask conversion, the
validation simulation, metric correlation, and prompt emission.

Exit codes: 0 success, 1 check/alignment failure, 2 missing file,
3 gold/pred id mismatch, 4 schema violation.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .core import FtsConfig, TaskKind, default_config
from .corpus_io import (CorpusSchemaError, IdMismatchError, document_to_json,
                        join_entries, load_config, read_corpus, unit_to_json,
                        write_corpus)
from .diagnostics import correlation, paired_difference_stats
from .prompts import emit_prompt
from .scoring import aggregate_macro, evaluate_entry, exact_match_report
from .simulation import check_against_expected, run_simulation, table_to_csv
from .tagged import derive_subtask_gold

CONFIG_ENV_VAR = "ABSA_EVAL_CONFIG"

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_MISSING_FILE = 2
EXIT_ID_MISMATCH = 3
EXIT_SCHEMA = 4


def _resolve_config(path: str | None) -> FtsConfig:
    if path is None:
        path = os.environ.get(CONFIG_ENV_VAR) or None
    if path is None:
        return default_config()
    return load_config(path)


def _write_output(text: str, out_path: str | None) -> None:
    if out_path is None:
        sys.stdout.write(text)
    else:
        Path(out_path).write_text(text, encoding="utf-8")


def _evaluate_one(payload: tuple) -> object:
    entry, config = payload
    return evaluate_entry(entry, config)


def _run_entries(entries, config: FtsConfig, workers: int):
    if workers == 0:
        workers = os.cpu_count() or 1
    if workers == 1 or len(entries) < 2:
        return [evaluate_entry(entry, config) for entry in entries]
    payloads = [(entry, config) for entry in entries]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        # map preserves input order, so the reduce is deterministic
        return list(pool.map(_evaluate_one, payloads))


def cmd_evaluate(args: argparse.Namespace) -> int:
    config = _resolve_config(args.config)
    task = TaskKind.parse(args.task)
    gold = read_corpus(args.gold, task, require_units=True)
    pred = read_corpus(args.pred, task)
    entries = join_entries(gold, pred, task,
                           allow_missing_preds=args.allow_missing_preds)
    if not entries:
        print(f"no entries for task {task.value} in {args.gold}", file=sys.stderr)
        return EXIT_FAILURE

    flavors: dict[str, dict] = {}
    if args.metric in ("fts-obp", "both"):
        results = _run_entries(entries, config, args.workers)
        flavors["fts-obp"] = aggregate_macro(results).to_dict()
    if args.metric in ("exact", "both"):
        flavors["exact"] = exact_match_report(entries, config).to_dict()

    if args.metric == "both":
        doc = {"task": task.value, "flavors": flavors}
    else:
        doc = flavors[args.metric]
    _write_output(document_to_json(doc), args.out)
    return EXIT_OK


def cmd_convert(args: argparse.Namespace) -> int:
    gold = read_corpus(args.gold, TaskKind.ASQE, require_units=True, strict_task=True)
    targets = [TaskKind.parse(t) for t in args.targets.split(",")]
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = Path(args.gold).stem
    for target in targets:
        records = []
        for record in gold.values():
            units = derive_subtask_gold(list(record.units), target)
            records.append({
                "id": record.id,
                "text": record.text,
                "task": target.value,
                "units": [unit_to_json(u) for u in units],
            })
        write_corpus(out_dir / f"{stem}.{target.value.lower()}.jsonl", records)
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace) -> int:
    config = _resolve_config(args.config)
    rows = run_simulation(config)
    _write_output(table_to_csv(rows), args.out)
    if args.check:
        problems = check_against_expected(rows)
        if problems:
            for problem in problems:
                print(f"check failed: {problem}", file=sys.stderr)
            return EXIT_FAILURE
    return EXIT_OK


def _macro_f1_from_report(path: str) -> float:
    with open(path, encoding="utf-8") as handle:
        doc = json.load(handle)
    try:
        return float(doc["macro"]["f1"])
    except (KeyError, TypeError):
        raise ValueError(f"{path} is not a single-metric corpus report") from None


def cmd_correlate(args: argparse.Namespace) -> int:
    if len(args.a) != len(args.b):
        print("report lists must be aligned and of equal length", file=sys.stderr)
        return EXIT_FAILURE
    xs = [_macro_f1_from_report(p) for p in args.a]
    ys = [_macro_f1_from_report(p) for p in args.b]
    try:
        pearson, spearman = correlation(xs, ys)
        stats = paired_difference_stats(xs, ys)
    except ValueError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_FAILURE
    doc = {
        "n": len(xs),
        "pearson_r": pearson,
        "spearman_rho": spearman,
        "mean_delta": stats.mean_delta,
        "std_delta": stats.std_delta,
        "t_statistic": stats.t_statistic,
        "cohens_d": stats.cohens_d,
    }
    _write_output(document_to_json(doc), args.out)
    return EXIT_OK


def cmd_prompt(args: argparse.Namespace) -> int:
    text = emit_prompt(TaskKind.parse(args.task), args.shots)
    _write_output(text + "\n", args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="absa-eval",
        description="Evaluate extraction outputs with flexible span matching "
                    "and optimal gold/pred pairing.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("evaluate", help="score a prediction corpus against gold")
    p_eval.add_argument("gold", help="gold corpus (JSONL)")
    p_eval.add_argument("pred", help="prediction corpus (JSONL)")
    p_eval.add_argument("--task", required=True,
                        help="one of OE, AOPE, AOC, ASTE, ASQE")
    p_eval.add_argument("--metric", choices=["fts-obp", "exact", "both"],
                        default="fts-obp")
    p_eval.add_argument("--config", default=None,
                        help=f"config JSON (default: ${CONFIG_ENV_VAR} or built-ins)")
    p_eval.add_argument("--out", default=None, help="report path (default stdout)")
    p_eval.add_argument("--allow-missing-preds", action="store_true",
                        help="score gold entries without predictions as empty "
                             "predictions instead of failing")
    p_eval.add_argument("--workers", type=int, default=1,
                        help="worker processes; 0 = one per CPU, 1 = in-process")
    p_eval.set_defaults(func=cmd_evaluate)

    p_conv = sub.add_parser("convert",
                            help="project a full-quadruplet gold corpus onto subtasks")
    p_conv.add_argument("gold", help="ASQE gold corpus (JSONL)")
    p_conv.add_argument("--targets", required=True,
                        help="comma-separated target tasks, e.g. oe,aope,aste")
    p_conv.add_argument("--out-dir", required=True)
    p_conv.set_defaults(func=cmd_convert)

    p_sim = sub.add_parser("simulate",
                           help="run the boundary-variation simulation table")
    p_sim.add_argument("--config", default=None)
    p_sim.add_argument("--out", default=None, help="CSV path (default stdout)")
    p_sim.add_argument("--check", action="store_true",
                       help="exit nonzero unless the table matches the pinned "
                            "expectation")
    p_sim.set_defaults(func=cmd_simulate)

    p_corr = sub.add_parser("correlate",
                            help="correlation and paired differences of two "
                                 "aligned report lists")
    p_corr.add_argument("--a", nargs="+", required=True, help="first report list")
    p_corr.add_argument("--b", nargs="+", required=True, help="second report list")
    p_corr.add_argument("--out", default=None)
    p_corr.set_defaults(func=cmd_correlate)

    p_prompt = sub.add_parser("prompt", help="emit an instruction prompt")
    p_prompt.add_argument("task", help="one of OE, AOPE, AOC, ASTE, ASQE")
    p_prompt.add_argument("--shots", type=int, choices=[0, 4], default=4)
    p_prompt.add_argument("--out", default=None)
    p_prompt.set_defaults(func=cmd_prompt)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"file not found: {exc.filename or exc}", file=sys.stderr)
        return EXIT_MISSING_FILE
    except IdMismatchError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_ID_MISMATCH
    except CorpusSchemaError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_SCHEMA
    except ValueError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_SCHEMA


if __name__ == "__main__":
    sys.exit(main())

"""Command line entry point: ``lincomb run|evaluate|rank|generate|describe``."""
from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from dataclasses import replace
from pathlib import Path

from .evaluation import CRITERIA
from .harness import data as data_mod
from .harness.experiment import ExperimentConfig, cross_validate
from .harness.report import averages_csv, emit_report, format_p, rank_table, read_results

log = logging.getLogger("lincomb")


def _write_or_print(text: str, output: str | None) -> None:
    if output:
        Path(output).parent.mkdir(parents=True, exist_ok=True)
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_run(args) -> int:
    cfg = ExperimentConfig.from_yaml(args.config)
    if args.seed is not None:
        cfg = replace(cfg, seed=args.seed)
    if args.output:
        cfg = replace(cfg, output=args.output)
    t0 = time.perf_counter()
    records = cross_validate(cfg, jobs=args.jobs)
    written = emit_report(records, cfg.output, include_timing=args.timing)
    log.info("%d records in %.1f s", len(records), time.perf_counter() - t0)
    for p in written:
        print(p)
    return 0


def cmd_evaluate(args) -> int:
    _write_or_print(averages_csv(read_results(args.results)), args.output)
    return 0


def cmd_rank(args) -> int:
    records = read_results(args.results)
    learners = []
    for r in records:
        if r["learner"] not in learners:
            learners.append(r["learner"])
    lines = []
    for learner in learners:
        t = rank_table(records, learner, args.criterion)
        lines.append(f"# learner={learner} criterion={args.criterion} datasets={len(t.datasets)}")
        lines.append(f"friedman_p {format_p(t.friedman_p)}")
        width = max(len(m) for m in t.methods)
        lines.append(" " * (width + 10) + " ".join(f"{m:>6}" for m in t.methods))
        for i, m in enumerate(t.methods):
            cells = []
            for j in range(len(t.methods)):
                p = t.wilcoxon_holm[i, j]
                cell = "-" if i == j else format_p(p) + ("*" if p == p and p < 0.05 else "")
                cells.append(f"{cell:>6}")
            lines.append(f"{m:<{width}} {t.ranks[i]:8.3f} " + " ".join(cells))
        lines.append("")
    _write_or_print("\n".join(lines), args.output)
    return 0


def cmd_generate(args) -> int:
    kwargs = {"n": args.n, "seed": args.seed if args.seed is not None else 0}
    data = data_mod.generate(args.kind, **kwargs)
    data_mod.write_csv(data, args.output)
    print(json.dumps(data.summary()))
    return 0


def cmd_describe(args) -> int:
    for path in args.data:
        print(json.dumps(data_mod.load_csv(path).summary()))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lincomb", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run a cross-validated experiment from a YAML config")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--output", help="report directory (overrides the config)")
    p.add_argument("--timing", action="store_true", help="include wall times in results.jsonl")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("evaluate", help="fold-averaged criteria per dataset/learner/combiner")
    p.add_argument("--results", required=True)
    p.add_argument("--output")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("rank", help="average ranks, Friedman and Wilcoxon-Holm for one criterion")
    p.add_argument("--results", required=True)
    p.add_argument("--criterion", required=True, choices=CRITERIA)
    p.add_argument("--output")
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("generate", help="write a synthetic dataset as CSV")
    p.add_argument("--kind", required=True, choices=sorted(data_mod.GENERATORS))
    p.add_argument("--n", type=int, default=2000)
    p.add_argument("--seed", type=int)
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("describe", help="print |S|, d, C and IR of CSV datasets")
    p.add_argument("data", nargs="+")
    p.set_defaults(func=cmd_describe)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (ValueError, RuntimeError, OSError) as exc:
        log.error("%s", exc)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""Results file, fold-averaged tables and per-criterion rank summaries.

Files written by :func:`emit_report`:

``results.jsonl``
    one JSON object per (dataset, learner, combiner, fold) with keys
    ``dataset, learner, combiner, fold``, the seven criteria
    (``macro_fdr, macro_fnr, macro_f1_loss, micro_fdr, micro_fnr,
    micro_f1_loss, kappa``) and ``params`` (tuned beta/gamma or zeta).
``ranks.csv``
    average rank per (learner, method) for every criterion.
``summary_<criterion>.csv``
    per learner: Friedman p-value, average ranks and the matrix of
    Holm-adjusted pairwise Wilcoxon p-values, ``*`` marking p < alpha.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..evaluation import CRITERIA
from .stats import average_ranks, friedman_test, holm, wilcoxon_signed_rank

ALPHA = 0.05


class ReportError(RuntimeError):
    pass


def _as_dicts(records) -> list[dict]:
    return [r if isinstance(r, dict) else r.as_dict() for r in records]


def results_jsonl(records, include_timing: bool = False) -> str:
    lines = []
    for r in records:
        d = r if isinstance(r, dict) else r.as_dict(include_timing)
        lines.append(json.dumps(d, sort_keys=True))
    return "\n".join(lines) + "\n"


def read_results(path) -> list[dict]:
    with Path(path).open() as fh:
        return [json.loads(line) for line in fh if line.strip()]


def _unique(seq) -> list:
    out = []
    for s in seq:
        if s not in out:
            out.append(s)
    return out


def fold_averages(records) -> dict:
    """``{(dataset, learner, combiner): {criterion: mean over folds}}``."""
    groups: dict = {}
    for d in _as_dicts(records):
        groups.setdefault((d["dataset"], d["learner"], d["combiner"]), []).append(d)
    out = {}
    for key, rows in groups.items():
        rows = sorted(rows, key=lambda r: r["fold"])
        out[key] = {c: float(np.mean([r[c] for r in rows])) for c in CRITERIA}
    return out


def loss_table(records, learner: str, criterion: str) -> tuple[list, list, np.ndarray]:
    """Datasets x methods matrix of fold-averaged values for one learner."""
    if criterion not in CRITERIA:
        raise ReportError(f"unknown criterion {criterion!r}; expected one of {CRITERIA}")
    dicts = [d for d in _as_dicts(records) if d["learner"] == learner]
    datasets = _unique(d["dataset"] for d in dicts)
    methods = _unique(d["combiner"] for d in dicts)
    avg = fold_averages(dicts)
    table = np.empty((len(datasets), len(methods)))
    for i, ds in enumerate(datasets):
        for j, m in enumerate(methods):
            try:
                table[i, j] = avg[(ds, learner, m)][criterion]
            except KeyError:
                raise ReportError(f"no results for dataset {ds!r}, method {m!r}") from None
    return datasets, methods, table


@dataclass
class RankTable:
    learner: str
    criterion: str
    methods: list
    datasets: list
    ranks: np.ndarray
    friedman_p: float
    wilcoxon_p: np.ndarray
    wilcoxon_holm: np.ndarray


def rank_table(records, learner: str, criterion: str) -> RankTable:
    datasets, methods, table = loss_table(records, learner, criterion)
    higher = criterion == "kappa"
    ranks = average_ranks(table, higher_is_better=higher)
    k = len(methods)
    friedman_p = friedman_test(table)[1] if len(datasets) >= 2 and k >= 2 else float("nan")
    raw = np.full((k, k), np.nan)
    pairs = [(i, j) for i in range(k) for j in range(i + 1, k)]
    for i, j in pairs:
        try:
            raw[i, j] = raw[j, i] = wilcoxon_signed_rank(table[:, i], table[:, j])[1]
        except ValueError:
            pass
    adj = np.full((k, k), np.nan)
    if pairs:
        flat = holm([raw[i, j] for i, j in pairs])
        for (i, j), p in zip(pairs, flat):
            adj[i, j] = adj[j, i] = p
    return RankTable(learner, criterion, methods, datasets, ranks, friedman_p, raw, adj)


def format_p(p: float) -> str:
    """Three decimals without the leading zero; '.000' below 1e-3, '1.00' above .999."""
    if p is None or np.isnan(p):
        return "NA"
    if p < 1e-3:
        return ".000"
    if p > 0.999:
        return "1.00"
    return f"{p:.3f}".lstrip("0")


def _csv_text(rows) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def summary_csv(records, criterion: str) -> str:
    rows = []
    for learner in _unique(d["learner"] for d in _as_dicts(records)):
        t = rank_table(records, learner, criterion)
        rows.append(["learner", "method", "avg_rank", "friedman_p"] + [f"wilcoxon_holm_vs_{m}" for m in t.methods])
        for i, m in enumerate(t.methods):
            cells = []
            for j in range(len(t.methods)):
                if i == j:
                    cells.append("-")
                    continue
                p = t.wilcoxon_holm[i, j]
                flag = "*" if not np.isnan(p) and p < ALPHA else ""
                cells.append(format_p(p) + flag)
            rows.append([learner, m, f"{t.ranks[i]:.3f}", format_p(t.friedman_p)] + cells)
    return _csv_text(rows)


def ranks_csv(records) -> str:
    rows = [["learner", "method", *CRITERIA]]
    for learner in _unique(d["learner"] for d in _as_dicts(records)):
        tables = [rank_table(records, learner, c) for c in CRITERIA]
        for i, m in enumerate(tables[0].methods):
            rows.append([learner, m] + [f"{t.ranks[i]:.3f}" for t in tables])
    return _csv_text(rows)


def averages_csv(records) -> str:
    rows = [["dataset", "learner", "combiner", *CRITERIA]]
    for (ds, learner, comb), vals in fold_averages(records).items():
        rows.append([ds, learner, comb] + [f"{vals[c]:.6f}" for c in CRITERIA])
    return _csv_text(rows)


def emit_report(records, out_dir, include_timing: bool = False) -> list[Path]:
    """Write results and summaries; identical records give byte-identical files."""
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ReportError(f"cannot create output directory {out}: {exc}") from exc
    files = {"results.jsonl": results_jsonl(records, include_timing), "ranks.csv": ranks_csv(records)}
    for c in CRITERIA:
        files[f"summary_{c}.csv"] = summary_csv(records, c)
    written = []
    for name, text in files.items():
        path = out / name
        try:
            path.write_text(text)
        except OSError as exc:
            raise ReportError(f"cannot write {path}: {exc}") from exc
        written.append(path)
    return written

"""Experiment engine: data ingestion, preprocessing, cross-validation, statistics, reports."""
from .data import DatasetError, generate, load_csv, make_banana, make_gaussians, make_spirals, write_csv
from .experiment import ExperimentConfig, RunRecord, cross_validate, run_cell
from .preprocess import Preprocessor, fit_preprocessor
from .report import RankTable, emit_report, format_p, rank_table, read_results
from .stats import average_ranks, friedman_test, holm, wilcoxon_signed_rank

__all__ = [
    "DatasetError", "ExperimentConfig", "Preprocessor", "RankTable", "RunRecord",
    "average_ranks", "cross_validate", "emit_report", "fit_preprocessor", "format_p",
    "friedman_test", "generate", "holm", "load_csv", "make_banana", "make_gaussians",
    "make_spirals", "rank_table", "read_results", "run_cell", "wilcoxon_signed_rank", "write_csv",
]

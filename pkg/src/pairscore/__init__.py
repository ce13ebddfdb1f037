"""Pairwise association scores for mixed numeric/factor data, kept in one tidy table."""

from ._kernels import BACKEND
from .dataset import Column, Dataset, factor_column, load_csv, load_schema, numeric_column
from .dispatch import (ScoreControl, apply_measure, pairwise_by, pairwise_multi,
                       pairwise_scores, resolve)
from .registry import METHODS, filter_methods
from .seriation import order_pairs_linear, pair_summary, seriate_variables
from .table import (ALL, PairwiseRow, PairwiseTable, filter_pairs, from_matrix, new_pairwise,
                    pivot_wide, read_csv, to_matrix, write_csv)
from .viz import plot_linear, plot_matrix

__version__ = "0.1.0"

__all__ = [
    "ALL", "BACKEND", "Column", "Dataset", "METHODS", "PairwiseRow", "PairwiseTable",
    "ScoreControl", "apply_measure", "factor_column", "filter_methods", "filter_pairs",
    "from_matrix", "load_csv", "load_schema", "new_pairwise", "numeric_column",
    "order_pairs_linear", "pair_summary", "pairwise_by", "pairwise_multi", "pairwise_scores",
    "pivot_wide", "plot_linear", "plot_matrix", "read_csv", "resolve", "seriate_variables",
    "to_matrix", "write_csv",
]

"""Quantile-based prediction (QBP) for biomarker data, with classical
comparators, ROC metrics, a synthetic-data generator, and CV harnesses."""
from .data import Dataset, DataError, load_csv, stratified_folds, write_csv
from .qbp import (
    FittedQbp,
    QbpConfig,
    TailOverlapWarning,
    disease_score,
    fit_qbp,
    selected_biomarkers,
    total_disease_score,
)
from .metrics import auc, auc_rank, roc_curve, selection_performance
from .simgen import DESIGN_IDS, build_design, sample_dataset
from .cv import kfold_tune, rdcv, simulate_benchmark
from .methods import METHOD_NAMES, get_method

__version__ = "0.1.0"

__all__ = [
    "DESIGN_IDS", "DataError", "Dataset", "FittedQbp", "METHOD_NAMES", "QbpConfig",
    "TailOverlapWarning", "auc", "auc_rank", "build_design", "disease_score", "fit_qbp",
    "get_method", "kfold_tune", "load_csv", "rdcv", "roc_curve", "sample_dataset",
    "selected_biomarkers", "selection_performance", "simulate_benchmark", "stratified_folds",
    "total_disease_score", "write_csv",
]

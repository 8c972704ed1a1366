"""Classical comparators, each fitted on a complete Dataset and scoring new subjects."""
from .knn import KnnModel, fit_knn, knn_score, knn_scores
from .lda import LdaModel, fit_lda
from .logistic import (
    ConvergenceWarning,
    LogisticModel,
    fit_logistic,
    fit_penalized_logistic,
    lambda_grid,
    lambda_max,
    log_likelihood,
    penalized_logistic_path,
    score_vector,
)
from .pca import PcaBasis, PclrModel, fit_pclr, pca
from .pls import PlsBasis, PlsLdaModel, fit_pls_lda, simpls

__all__ = [
    "ConvergenceWarning", "KnnModel", "LdaModel", "LogisticModel", "PcaBasis", "PclrModel",
    "PlsBasis", "PlsLdaModel", "fit_knn", "fit_lda", "fit_logistic", "fit_pclr",
    "fit_penalized_logistic", "fit_pls_lda", "knn_score", "knn_scores", "lambda_grid",
    "lambda_max", "log_likelihood", "pca", "penalized_logistic_path", "score_vector", "simpls",
]

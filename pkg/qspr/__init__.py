"""
Пакет qspr: регрессии температуры плавления и отчетные таблицы.
"""

from .regression import (
    DegeneratePredictorError,
    DimensionMismatchError,
    InsufficientDataError,
    ModelKind,
    PositivityError,
    RankDeficiencyError,
    RegressionError,
    RegressionFit,
    ResidualRow,
    ResidualTable,
    ZeroVarianceError,
    evaluate,
    fit_linear_single,
    fit_log_single,
    fit_multilinear,
    predict,
    r_squared_between,
    r_squared_of_predictions,
)
from .tables import (
    PUBLISHED_MODELS,
    REPORT_IDS,
    PredictionCheck,
    ReportTable,
    UnknownReportError,
    alkane_log_fit,
    build_report,
    check_predictions,
    compare_printed_predictions,
    fit_family,
    log_model_r_squared_variants,
    matching_variants,
    octane_automorphism_variants,
    pah_linear_fit,
    pah_multilinear_fit,
    published_r_squared_variants,
)

__all__ = [
    'DegeneratePredictorError',
    'DimensionMismatchError',
    'InsufficientDataError',
    'ModelKind',
    'PositivityError',
    'RankDeficiencyError',
    'RegressionError',
    'RegressionFit',
    'ResidualRow',
    'ResidualTable',
    'ZeroVarianceError',
    'evaluate',
    'fit_linear_single',
    'fit_log_single',
    'fit_multilinear',
    'predict',
    'r_squared_between',
    'r_squared_of_predictions',
    'PUBLISHED_MODELS',
    'REPORT_IDS',
    'PredictionCheck',
    'ReportTable',
    'UnknownReportError',
    'alkane_log_fit',
    'build_report',
    'check_predictions',
    'compare_printed_predictions',
    'fit_family',
    'log_model_r_squared_variants',
    'matching_variants',
    'octane_automorphism_variants',
    'pah_linear_fit',
    'pah_multilinear_fit',
    'published_r_squared_variants',
]

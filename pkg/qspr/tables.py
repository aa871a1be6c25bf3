"""
Отчетные таблицы: дескрипторы семейств, предсказанные температуры
плавления с остатками и корреляции для изомеров октана.

Каждая таблица строится из набора молекул (MoleculeBundle) и отдается
как ReportTable, который умеет печататься выровненным текстом, в CSV
(pandas) и в словарь для --json. Числа округляются до 3 знаков
(R^2 в корреляциях - до 4).
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import pandas as pd

from bundle import BundleError, Family, MoleculeBundle, default_bundle
from .regression import (
    ModelKind,
    RegressionError,
    RegressionFit,
    Row,
    evaluate,
    fit_linear_single,
    fit_log_single,
    fit_multilinear,
    predict,
    r_squared_between,
    r_squared_of_predictions,
)

logger = logging.getLogger(__name__)

PREDICTION_TOLERANCE = 0.002
ALKANE_R_SQUARED = 0.9847
R_SQUARED_TOLERANCE = 0.0005
OCTANE_OUTLIER = "2,2,3,3-tetramethylbutane"
UNBRANCHED_OCTANE = "octane"
# напечатанные R^2 для изомеров октана
OCTANE_GP_R_SQUARED = 0.2423
OCTANE_AUT_R_SQUARED = 0.9687
OCTANE_GP_WITHOUT_OUTLIER_R_SQUARED = 0.4537

DESCRIPTOR_SOURCES = ("published", "computed")
MODEL_CHOICES = ("log", "linear", "multilinear")
PREDICTOR_CHOICES = ("gp", "wiener", "aut")
MULTILINEAR_PREDICTORS = ("aut", "gp", "wiener")
SPLIT_CHOICES = ("train", "test", "all")

PUBLISHED_MODELS: Dict[str, RegressionFit] = {
    "alkane_log": RegressionFit.from_coefficients(ModelKind.LOG_SINGLE, (34.196, 68.575), ("gp",)),
    "pah_linear": RegressionFit.from_coefficients(ModelKind.LINEAR_SINGLE, (0.6501, 10.926), ("gp",)),
    "pah_multilinear": RegressionFit.from_coefficients(
        ModelKind.MULTILINEAR, (-46.248, 13.038, 0.446, 0.235), MULTILINEAR_PREDICTORS
    ),
}


class UnknownReportError(ValueError):
    """Идентификатор отчета не входит в REPORT_IDS."""


@dataclass(frozen=True)
class ReportTable:
    title: str
    columns: Tuple[str, ...]
    rows: Tuple[Tuple, ...]
    footer: Optional[Tuple] = None
    decimals: int = 3

    def __post_init__(self):
        width = len(self.columns)
        for row in self.rows + ((self.footer,) if self.footer else ()):
            if len(row) != width:
                raise ValueError(f"{self.title}: в строке {len(row)} ячеек, а столбцов {width}")

    def _cell(self, value) -> str:
        if value is None:
            return ""
        if isinstance(value, Fraction):
            return str(value.numerator) if value.denominator == 1 else f"{float(value):.{self.decimals}f}"
        if isinstance(value, float):
            if math.isnan(value):
                return ""
            return f"{value:.{self.decimals}f}"
        return str(value)

    def formatted_rows(self) -> List[List[str]]:
        rows = [[self._cell(v) for v in row] for row in self.rows]
        if self.footer:
            rows.append([self._cell(v) for v in self.footer])
        return rows

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.formatted_rows(), columns=list(self.columns))

    def to_csv(self) -> str:
        return self.to_frame().to_csv(index=False, lineterminator="\n")

    def to_text(self) -> str:
        body = self.formatted_rows()
        widths = [
            max([len(c)] + [len(row[i]) for row in body])
            for i, c in enumerate(self.columns)
        ]

        def line(cells: Sequence[str]) -> str:
            first = cells[0].ljust(widths[0])
            rest = [cell.rjust(w) for cell, w in zip(cells[1:], widths[1:])]
            return "  ".join([first] + rest).rstrip()

        out = [self.title, line(self.columns), "-" * (sum(widths) + 2 * (len(widths) - 1))]
        out.extend(line(row) for row in body[:len(self.rows)])
        if self.footer:
            out.append("-" * (sum(widths) + 2 * (len(widths) - 1)))
            out.append(line(body[-1]))
        return "\n".join(out) + "\n"

    def to_dict(self) -> Dict:
        """Значения округлены так же, как в тексте."""
        def value(v):
            if isinstance(v, Fraction):
                return v.numerator if v.denominator == 1 else round(float(v), self.decimals)
            if isinstance(v, float):
                return None if math.isnan(v) else round(v, self.decimals)
            return v

        return {
            "title": self.title,
            "columns": list(self.columns),
            "rows": [dict(zip(self.columns, map(value, row))) for row in self.rows],
            "footer": dict(zip(self.columns, map(value, self.footer))) if self.footer else None,
        }


def _integral(value: float):
    return int(value) if float(value).is_integer() else value


def select_split(table: pd.DataFrame, split: str) -> pd.DataFrame:
    if split not in SPLIT_CHOICES:
        raise RegressionError(f"Неизвестное разбиение {split!r}: {', '.join(SPLIT_CHOICES)}")
    if split == "all":
        return table.reset_index(drop=True)
    return table[table["split"] == split].reset_index(drop=True)


def default_split(table: pd.DataFrame, model: str) -> str:
    """Обучающая выборка, если она есть; многомерная модель - на всех данных."""
    if model != "multilinear" and (table["split"] == "train").any():
        return "train"
    return "all"


def _require_column(table: pd.DataFrame, column: str, family: Family) -> None:
    if table[column].isna().any():
        raise RegressionError(
            f"для семейства {family.value} нет опубликованных значений '{column}'; "
            f"используйте --descriptors computed"
        )


def _exclude_rows(rows: pd.DataFrame, exclude: Sequence[str], family: Family) -> pd.DataFrame:
    unknown = sorted(set(exclude) - set(rows["name"]))
    if unknown:
        raise RegressionError(f"в выборке семейства {family.value} нет молекул: {', '.join(unknown)}")
    return rows[~rows["name"].isin(list(exclude))].reset_index(drop=True)


def fit_family(
    family: Family,
    model: str,
    split: Optional[str] = None,
    x: str = "gp",
    source: str = "published",
    bundle: Optional[MoleculeBundle] = None,
    exclude: Sequence[str] = ()
) -> RegressionFit:
    """
    Подгонка модели на семействе из набора.

    Args:
        family: Семейство молекул
        model: log, linear или multilinear
        split: train, test или all (по умолчанию см. default_split)
        x: Предиктор для парных моделей: gp, wiener или aut
        source: published или computed (откуда брать дескрипторы)
        exclude: Имена молекул, не участвующих в подгонке

    Raises:
        RegressionError: неизвестная модель, предиктор или имя в exclude
    """
    if model not in MODEL_CHOICES:
        raise RegressionError(f"Неизвестная модель {model!r}: {', '.join(MODEL_CHOICES)}")
    if x not in PREDICTOR_CHOICES:
        raise RegressionError(f"Неизвестный предиктор {x!r}: {', '.join(PREDICTOR_CHOICES)}")

    bundle = bundle or default_bundle()
    table = bundle.descriptor_table(family, source)
    rows = select_split(table, split or default_split(table, model))
    rows = _exclude_rows(rows, exclude, family)
    names = list(rows["name"])

    if model == "multilinear":
        for column in MULTILINEAR_PREDICTORS:
            _require_column(rows, column, family)
        predictors = {column: list(rows[column]) for column in MULTILINEAR_PREDICTORS}
        return fit_multilinear(predictors, list(rows["mp"]), names=names)

    _require_column(rows, x, family)
    fitter = fit_log_single if model == "log" else fit_linear_single
    return fitter(list(rows[x]), list(rows["mp"]), names=names, predictor_name=x)


def alkane_log_fit(bundle: Optional[MoleculeBundle] = None, source: str = "published") -> RegressionFit:
    """MP = a ln GP + b на 26 алканах обучающей выборки."""
    return fit_family(Family.ALKANE, "log", "train", "gp", source, bundle)


def pah_linear_fit(bundle: Optional[MoleculeBundle] = None, source: str = "published") -> RegressionFit:
    """MP = a GP + b на 16 PAH обучающей выборки."""
    return fit_family(Family.PAH, "linear", "train", "gp", source, bundle)


def pah_multilinear_fit(bundle: Optional[MoleculeBundle] = None, source: str = "published") -> RegressionFit:
    """MP = c0 + c1 #Aut + c2 GP + c3 W на всех 20 PAH."""
    return fit_family(Family.PAH, "multilinear", "all", source=source, bundle=bundle)


def log_model_r_squared_variants(
    bundle: Optional[MoleculeBundle] = None,
    source: str = "published"
) -> Dict[str, float]:
    """R^2 логарифмической модели алканов на train, test и всех 31 молекулах."""
    bundle = bundle or default_bundle()
    fit = alkane_log_fit(bundle, source)
    table = bundle.descriptor_table(Family.ALKANE, source)

    variants = {"train": fit.r_squared}
    for split in ("test", "all"):
        rows = select_split(table, split)
        predicted = [predict(fit, gp) for gp in rows["gp"]]
        variants[split] = r_squared_of_predictions(list(rows["mp"]), predicted)
    return variants


def matching_variants(
    variants: Dict[str, float],
    target: float = ALKANE_R_SQUARED,
    tolerance: float = R_SQUARED_TOLERANCE
) -> List[str]:
    return [name for name, value in variants.items() if abs(value - target) <= tolerance]


def octane_automorphism_variants(
    bundle: Optional[MoleculeBundle] = None,
    source: str = "published"
) -> Dict[str, float]:
    """
    R^2(#Aut, MP) для изомеров октана на всех 14 молекулах и без н-октана.

    По всем строкам таблицы получается около 0.887; напечатанное 0.9687
    воспроизводится, только если исключить неразветвленный октан.
    """
    bundle = bundle or default_bundle()
    table = bundle.descriptor_table(Family.OCTANE_ISOMER, source)
    reduced = table[table["name"] != UNBRANCHED_OCTANE]
    return {
        f"all {len(table)}": r_squared_between(table["aut"], table["mp"]),
        f"without {UNBRANCHED_OCTANE}": r_squared_between(reduced["aut"], reduced["mp"]),
    }


def published_r_squared_variants(
    family: Family,
    model: str,
    x: str = "gp",
    source: str = "published",
    bundle: Optional[MoleculeBundle] = None
) -> Optional[Tuple[float, Dict[str, float]]]:
    """
    Напечатанный R^2 и его варианты по выборкам для моделей, у которых
    выборка в тексте не указана: логарифмическая модель алканов и
    #Aut изомеров октана. Для остальных моделей - None.
    """
    if family == Family.ALKANE and model == "log" and x == "gp":
        return ALKANE_R_SQUARED, log_model_r_squared_variants(bundle, source)
    if family == Family.OCTANE_ISOMER and model == "linear" and x == "aut":
        return OCTANE_AUT_R_SQUARED, octane_automorphism_variants(bundle, source)
    return None


@dataclass(frozen=True)
class PredictionCheck:
    name: str
    published: float
    predicted: float
    used_published_coefficients: bool
    passed: bool


def check_predictions(
    fit: RegressionFit,
    published_fit: RegressionFit,
    names: Sequence[str],
    rows: Sequence[Row],
    published: Sequence[float],
    tolerance: float = PREDICTION_TOLERANCE
) -> List[PredictionCheck]:
    """
    Сравнивает предсказания модели с напечатанными значениями.

    Если предсказание по подогнанным коэффициентам расходится больше чем
    на tolerance, строка пересчитывается по опубликованным (округленным)
    коэффициентам; такой переход пишется в лог.
    """
    if not (len(names) == len(rows) == len(published)):
        raise ValueError("длины names, rows и published не совпадают")

    checks = []
    for name, row, expected in zip(names, rows, published):
        value = predict(fit, row)
        if abs(value - expected) <= tolerance:
            checks.append(PredictionCheck(name, expected, value, False, True))
            continue
        fallback = predict(published_fit, row)
        logger.info(
            "%s: предсказание %.4f расходится с напечатанным %.3f; "
            "пересчет по опубликованным коэффициентам дает %.4f",
            name, value, expected, fallback,
        )
        checks.append(PredictionCheck(name, expected, fallback, True, abs(fallback - expected) <= tolerance))
    return checks


# таблица -> (семейство, выборка, ключ опубликованной модели)
PRINTED_PREDICTION_TABLES: Dict[str, Tuple[Family, str, str]] = {
    "table2": (Family.ALKANE, "test", "alkane_log"),
    "table3": (Family.ALKANE, "all", "alkane_log"),
    "table5": (Family.PAH, "test", "pah_linear"),
}


def compare_printed_predictions(
    table_id: str,
    bundle: Optional[MoleculeBundle] = None,
    source: str = "published",
    tolerance: float = PREDICTION_TOLERANCE
) -> List[PredictionCheck]:
    """
    Сверяет предсказания модели с напечатанным столбцом MP-hat таблицы.

    Args:
        table_id: table2, table3 или table5
        bundle: Набор молекул (по умолчанию из настроек)
        source: Откуда брать дескрипторы для подгонки
        tolerance: Допуск сравнения

    Returns:
        По одной проверке на молекулу, в порядке строк таблицы

    Raises:
        UnknownReportError: у таблицы нет напечатанных предсказаний
        BundleError: в predictions.csv нет строки для молекулы
    """
    if table_id not in PRINTED_PREDICTION_TABLES:
        raise UnknownReportError(
            f"Нет напечатанных предсказаний для {table_id!r}; доступны: {', '.join(PRINTED_PREDICTION_TABLES)}"
        )
    family, split, model_key = PRINTED_PREDICTION_TABLES[table_id]
    bundle = bundle or default_bundle()

    fit = alkane_log_fit(bundle, source) if family == Family.ALKANE else pah_linear_fit(bundle, source)
    rows = select_split(bundle.descriptor_table(family, source), split)
    names = list(rows["name"])

    printed = bundle.printed_predictions
    printed = printed[printed["table"] == table_id].set_index("name")["predicted"]
    missing = [name for name in names if name not in printed.index]
    if missing:
        raise BundleError(f"predictions.csv: для {table_id} нет строк {', '.join(missing)}")

    return check_predictions(
        fit,
        PUBLISHED_MODELS[model_key],
        names,
        list(rows["gp"]),
        [float(printed[name]) for name in names],
        tolerance,
    )


def _prediction_table(title: str, first_column: str, fit: RegressionFit, rows: pd.DataFrame) -> ReportTable:
    names = list(rows["name"])
    residuals = evaluate(fit, names, list(rows["gp"]), list(rows["mp"]))
    body = tuple(
        (r.name, _integral(gp), r.observed, r.predicted, r.residual, r.percent_residual)
        for r, gp in zip(residuals.rows, rows["gp"])
    )
    return ReportTable(
        title=title,
        columns=(first_column, "GP", "MP (K)", "MP-hat", "Residual", "% Residual"),
        rows=body,
        footer=("average", None, None, None, None, residuals.average_percent_residual),
    )


def table2(bundle: Optional[MoleculeBundle] = None, source: str = "published") -> ReportTable:
    """Предсказания логарифмической модели на 5 тестовых алканах."""
    bundle = bundle or default_bundle()
    fit = alkane_log_fit(bundle, source)
    rows = select_split(bundle.descriptor_table(Family.ALKANE, source), "test")
    return _prediction_table("Data for 5 alkane molecules in the test set", "Alkane", fit, rows)


def table3(bundle: Optional[MoleculeBundle] = None, source: str = "published") -> ReportTable:
    """Та же модель на всех 31 алкане."""
    bundle = bundle or default_bundle()
    fit = alkane_log_fit(bundle, source)
    rows = select_split(bundle.descriptor_table(Family.ALKANE, source), "all")
    return _prediction_table("Results for all 31 alkane molecules", "Alkane", fit, rows)


def table5(bundle: Optional[MoleculeBundle] = None, source: str = "published") -> ReportTable:
    """Предсказания линейной модели на 4 тестовых PAH."""
    bundle = bundle or default_bundle()
    fit = pah_linear_fit(bundle, source)
    rows = select_split(bundle.descriptor_table(Family.PAH, source), "test")
    return _prediction_table("Predicted melting points on the test set for PAHs", "Molecule", fit, rows)


def octane_correlations(bundle: Optional[MoleculeBundle] = None, source: str = "published") -> ReportTable:
    """
    R^2 между MP и GP / #Aut для изомеров октана.

    Кроме полного набора считаются варианты без 2,2,3,3-тетраметилбутана
    и (для #Aut) без н-октана. Столбец Published содержит напечатанное
    значение у того варианта, который с ним совпадает.
    """
    bundle = bundle or default_bundle()
    table = bundle.descriptor_table(Family.OCTANE_ISOMER, source)
    everything = f"all {len(table)}"
    without_outlier = table[table["name"] != OCTANE_OUTLIER]

    aut_variants = octane_automorphism_variants(bundle, source)
    matched = matching_variants(aut_variants, OCTANE_AUT_R_SQUARED)
    if not matched:
        logger.warning(
            "R^2(#Aut, MP) не совпадает с напечатанным %.4f ни на одном варианте: %s",
            OCTANE_AUT_R_SQUARED, aut_variants,
        )

    gp_all = r_squared_between(table["gp"], table["mp"])
    gp_reduced = r_squared_between(without_outlier["gp"], without_outlier["mp"])

    def printed(value: float, target: float) -> Optional[float]:
        return target if abs(value - target) <= R_SQUARED_TOLERANCE else None

    rows = [("GP", everything, gp_all, printed(gp_all, OCTANE_GP_R_SQUARED))]
    for variant, value in aut_variants.items():
        rows.append(("#Aut", variant, value, OCTANE_AUT_R_SQUARED if variant in matched else None))
    rows += [
        ("GP", f"without {OCTANE_OUTLIER}", gp_reduced,
         printed(gp_reduced, OCTANE_GP_WITHOUT_OUTLIER_R_SQUARED)),
        ("#Aut", f"without {OCTANE_OUTLIER}",
         r_squared_between(without_outlier["aut"], without_outlier["mp"]), None),
    ]
    return ReportTable(
        title="Correlation with the melting point for octane isomers",
        columns=("Predictor", "Molecules", "R2", "Published"),
        rows=tuple(rows),
        decimals=4,
    )


def _descriptor_table(
    bundle: MoleculeBundle,
    family: Family,
    title: str,
    first_column: str,
    with_wiener: bool,
    with_split: bool
) -> ReportTable:
    entries = bundle.load_family(family)
    records = bundle.descriptor_records(family)

    columns = [first_column, "#Aut"]
    if with_wiener:
        columns.append("W")
    columns += ["GP", "MP (K)"]
    if with_split:
        columns.append("Split")

    body = []
    for entry, record in zip(entries, records):
        row = [entry.name, record.aut_order]
        if with_wiener:
            row.append(record.wiener)
        row += [record.gp, entry.melting_point]
        if with_split:
            row.append(entry.split.value)
        body.append(tuple(row))

    return ReportTable(title=title, columns=tuple(columns), rows=tuple(body))


def table1(bundle: Optional[MoleculeBundle] = None) -> ReportTable:
    return _descriptor_table(
        bundle or default_bundle(), Family.ALKANE,
        "The Graovac-Pisanski index GP and the melting point MP for 31 alkane molecules",
        "Alkane", with_wiener=False, with_split=True,
    )


def table4(bundle: Optional[MoleculeBundle] = None) -> ReportTable:
    return _descriptor_table(
        bundle or default_bundle(), Family.PAH,
        "Data for the training set and the test set of PAHs",
        "Molecule", with_wiener=True, with_split=True,
    )


def table6(bundle: Optional[MoleculeBundle] = None) -> ReportTable:
    return _descriptor_table(
        bundle or default_bundle(), Family.OCTANE_ISOMER,
        "Data for octane isomers",
        "Molecule", with_wiener=False, with_split=False,
    )


DESCRIPTOR_REPORTS: Dict[str, Callable[..., ReportTable]] = {
    "table1": table1,
    "table4": table4,
    "table6": table6,
}

REGRESSION_REPORTS: Dict[str, Callable[..., ReportTable]] = {
    "table2": table2,
    "table3": table3,
    "table5": table5,
    "octane_correlations": octane_correlations,
}

REPORT_IDS = tuple(sorted(list(DESCRIPTOR_REPORTS) + list(REGRESSION_REPORTS)))


def build_report(
    table_id: str,
    bundle: Optional[MoleculeBundle] = None,
    source: str = "published"
) -> ReportTable:
    """
    Строит отчет по идентификатору.

    Raises:
        UnknownReportError: неизвестный идентификатор
    """
    if table_id in DESCRIPTOR_REPORTS:
        return DESCRIPTOR_REPORTS[table_id](bundle)
    if table_id in REGRESSION_REPORTS:
        return REGRESSION_REPORTS[table_id](bundle, source)
    raise UnknownReportError(f"Неизвестная таблица {table_id!r}; доступны: {', '.join(REPORT_IDS)}")

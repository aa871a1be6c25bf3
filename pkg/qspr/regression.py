"""
Регрессии QSPR: температура плавления по топологическим дескрипторам.

Три вида моделей:
    log_single     MP = a * ln(x) + b      коэффициенты (a, b)
    linear_single  MP = a * x + b          коэффициенты (a, b)
    multilinear    MP = c0 + c1*x1 + ...   коэффициенты (c0, c1, ...)

Логарифмическая модель линейна по параметрам, поэтому решается тем же
МНК по ln(x). Решение МНК - через QR-разложение матрицы плана (numpy).
Статистики: R^2 = 1 - SSE/SST, скорректированный R^2 и стандартная ошибка
со знаменателем n - p - 1 (p - число предикторов без свободного члена).
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

logger = logging.getLogger(__name__)

Row = Union[float, Sequence[float], Mapping[str, float]]


class RegressionError(ValueError):
    """Базовая ошибка входных данных регрессии."""


class DimensionMismatchError(RegressionError):
    """Длины x, y и имен (или столбцов предикторов) не совпадают."""


class InsufficientDataError(RegressionError):
    """Наблюдений меньше, чем нужно для оценки коэффициентов."""


class PositivityError(RegressionError):
    """Неположительное значение в логарифмической модели."""


class ZeroVarianceError(RegressionError):
    """Все значения отклика одинаковы, R^2 не определен."""


class DegeneratePredictorError(ZeroVarianceError):
    """Все значения предиктора одинаковы."""


class RankDeficiencyError(RegressionError):
    """Столбцы матрицы плана линейно зависимы."""


class ModelKind(str, Enum):
    """Вид модели; значение попадает в JSON и в логи."""
    LOG_SINGLE = "log_single"
    LINEAR_SINGLE = "linear_single"
    MULTILINEAR = "multilinear"


@dataclass(frozen=True)
class ResidualRow:
    """Одна строка таблицы остатков: residual = observed - predicted."""
    name: str
    observed: float
    predicted: float
    residual: float
    percent_residual: float


@dataclass(frozen=True)
class ResidualTable:
    """Остатки по всем наблюдениям выборки, в порядке входных данных."""
    rows: Tuple[ResidualRow, ...]

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def average_percent_residual(self) -> float:
        """Среднее арифметическое процентных остатков (строки с MP = 0 пропускаются)."""
        values = [r.percent_residual for r in self.rows if not math.isnan(r.percent_residual)]
        return float(np.mean(values)) if values else float("nan")

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [(r.name, r.observed, r.predicted, r.residual, r.percent_residual) for r in self.rows],
            columns=["name", "observed", "predicted", "residual", "percent_residual"],
        )


@dataclass(frozen=True)
class RegressionFit:
    """
    Результат подгонки (или модель с заданными коэффициентами).

    Для моделей, построенных через from_coefficients, статистики не
    определены (nan), а список остатков пуст.
    """

    model_kind: ModelKind
    coefficients: Tuple[float, ...]
    r_squared: float
    adjusted_r_squared: float
    standard_error: float
    residuals: Tuple[ResidualRow, ...] = ()
    predictor_names: Tuple[str, ...] = ()
    observations: int = 0

    @property
    def multiple_r(self) -> float:
        return math.sqrt(self.r_squared) if self.r_squared >= 0 else float("nan")

    @property
    def arity(self) -> int:
        return len(self.coefficients) - 1

    @property
    def intercept(self) -> float:
        if self.model_kind == ModelKind.MULTILINEAR:
            return self.coefficients[0]
        return self.coefficients[1]

    @property
    def slopes(self) -> Tuple[float, ...]:
        if self.model_kind == ModelKind.MULTILINEAR:
            return self.coefficients[1:]
        return self.coefficients[:1]

    @property
    def residual_table(self) -> ResidualTable:
        return ResidualTable(self.residuals)

    @classmethod
    def from_coefficients(
        cls,
        kind: Union[ModelKind, str],
        coefficients: Sequence[float],
        predictor_names: Optional[Sequence[str]] = None
    ) -> "RegressionFit":
        """Модель по готовым коэффициентам (например, опубликованным)."""
        kind = ModelKind(kind)
        coefficients = tuple(float(c) for c in coefficients)
        if kind != ModelKind.MULTILINEAR and len(coefficients) != 2:
            raise DimensionMismatchError(
                f"модели {kind.value} нужны 2 коэффициента (наклон, свободный член), получено {len(coefficients)}"
            )
        if kind == ModelKind.MULTILINEAR and len(coefficients) < 2:
            raise DimensionMismatchError("многомерной модели нужны свободный член и хотя бы один коэффициент")

        names = tuple(predictor_names) if predictor_names else tuple(
            f"x{i}" for i in range(1, len(coefficients))
        )
        if len(names) != len(coefficients) - 1:
            raise DimensionMismatchError(
                f"имен предикторов {len(names)}, а коэффициентов при них {len(coefficients) - 1}"
            )
        nan = float("nan")
        return cls(kind, coefficients, nan, nan, nan, (), names, 0)

    def to_dict(self) -> Dict:
        """
        Словарь для JSON; неопределенные статистики (NaN) заменяются на None,
        т.к. NaN не допускается стандартом JSON.
        """
        return {
            "model_kind": self.model_kind.value,
            "coefficients": list(self.coefficients),
            "predictor_names": list(self.predictor_names),
            "r_squared": _finite_or_none(self.r_squared),
            "multiple_r": _finite_or_none(self.multiple_r),
            "adjusted_r_squared": _finite_or_none(self.adjusted_r_squared),
            "standard_error": _finite_or_none(self.standard_error),
            "observations": self.observations,
        }


def _finite_or_none(value: float) -> Optional[float]:
    # NaN не является допустимым JSON
    return float(value) if math.isfinite(value) else None


def _as_vector(values: Sequence[float], label: str) -> np.ndarray:
    """Плоский float-вектор без NaN и inf."""
    vector = np.asarray(values, dtype=float).reshape(-1)
    if not np.all(np.isfinite(vector)):
        raise RegressionError(f"{label}: есть пропущенные или бесконечные значения")
    return vector


def _check_lengths(x: np.ndarray, y: np.ndarray, minimum: int = 3) -> None:
    """Парная модель: одинаковые длины и не меньше minimum наблюдений."""
    if len(x) != len(y):
        raise DimensionMismatchError(f"длины не совпадают: x={len(x)}, y={len(y)}")
    if len(y) < minimum:
        raise InsufficientDataError(f"нужно не меньше {minimum} наблюдений, получено {len(y)}")


def _row_names(names: Optional[Sequence[str]], count: int) -> List[str]:
    """Имена строк остатков; без имен строки нумеруются с 1."""
    if names is None:
        return [str(i) for i in range(1, count + 1)]
    names = [str(n) for n in names]
    if len(names) != count:
        raise DimensionMismatchError(f"имен {len(names)}, а наблюдений {count}")
    return names


def _solve(design: np.ndarray, y: np.ndarray) -> np.ndarray:
    """МНК через QR: R beta = Q^T y."""
    if np.linalg.matrix_rank(design) < design.shape[1]:
        raise RankDeficiencyError(
            f"матрица плана {design.shape[0]}x{design.shape[1]} не полного ранга"
        )
    q, r = np.linalg.qr(design)
    return np.linalg.solve(r, q.T @ y)


def _residual_rows(names: Sequence[str], observed: np.ndarray, predicted: np.ndarray) -> Tuple[ResidualRow, ...]:
    rows = []
    for name, obs, pred in zip(names, observed, predicted):
        residual = float(obs - pred)
        # при MP = 0 процентный остаток не определен
        percent = 100.0 * abs(residual) / abs(obs) if obs != 0 else float("nan")
        rows.append(ResidualRow(name, float(obs), float(pred), residual, percent))
    return tuple(rows)


def _fit(
    kind: ModelKind,
    design: np.ndarray,
    y: np.ndarray,
    coefficient_order: Sequence[int],
    predictor_names: Sequence[str],
    names: Optional[Sequence[str]]
) -> RegressionFit:
    """
    Общая часть всех моделей: МНК, R^2 и статистики остатков.

    Args:
        kind: Вид модели для RegressionFit
        design: Матрица плана n x (p + 1), столбец единиц включен
        y: Отклик длины n
        coefficient_order: Порядок столбцов плана в RegressionFit.coefficients
        predictor_names: Имена предикторов (без свободного члена)
        names: Имена наблюдений или None

    Returns:
        RegressionFit

    Raises:
        ZeroVarianceError: отклик постоянен
        RankDeficiencyError: план не полного ранга
    """
    n, columns = design.shape
    # первый столбец плана или последний - свободный член, p без него
    p = columns - 1
    row_names = _row_names(names, n)

    if float(np.ptp(y)) == 0.0:
        raise ZeroVarianceError("все значения отклика одинаковы")

    beta = _solve(design, y)
    # R^2 = 1 - SSE/SST, обрезается в [0, 1] от ошибок округления
    fitted = design @ beta
    sse = float(np.sum((y - fitted) ** 2))
    sst = float(np.sum((y - y.mean()) ** 2))
    r_squared = min(1.0, max(0.0, 1.0 - sse / sst))

    dof = n - p - 1
    # при dof <= 0 скорректированный R^2 и SE не определены (NaN, в JSON - null)
    if dof > 0:
        adjusted = 1.0 - (1.0 - r_squared) * (n - 1) / dof
        standard_error = math.sqrt(sse / dof)
    else:
        adjusted = standard_error = float("nan")

    fit = RegressionFit(
        model_kind=kind,
        coefficients=tuple(float(beta[i]) for i in coefficient_order),
        r_squared=r_squared,
        adjusted_r_squared=adjusted,
        standard_error=standard_error,
        residuals=_residual_rows(row_names, y, fitted),
        predictor_names=tuple(predictor_names),
        observations=n,
    )
    logger.debug("%s: n=%d, коэффициенты=%s, R2=%.6f", kind.value, n, fit.coefficients, r_squared)
    return fit


def _fit_single(kind: ModelKind, t: np.ndarray, y: np.ndarray, names, predictor_name: str) -> RegressionFit:
    """t - уже преобразованный предиктор (x или ln x), план [t, 1]."""
    if float(np.ptp(t)) == 0.0:
        raise DegeneratePredictorError("все значения предиктора одинаковы")
    design = np.column_stack([t, np.ones_like(t)])
    return _fit(kind, design, y, (0, 1), (predictor_name,), names)


def fit_log_single(
    x: Sequence[float],
    y: Sequence[float],
    names: Optional[Sequence[str]] = None,
    predictor_name: str = "x"
) -> RegressionFit:
    """
    MP = a * ln(x) + b по МНК.

    Raises:
        PositivityError: есть x <= 0
        DimensionMismatchError, InsufficientDataError
    """
    x = _as_vector(x, "x")
    y = _as_vector(y, "y")
    _check_lengths(x, y)
    if np.any(x <= 0):
        bad = [float(v) for v in x[x <= 0]]
        raise PositivityError(f"логарифмическая модель требует x > 0, получено: {bad}")
    return _fit_single(ModelKind.LOG_SINGLE, np.log(x), y, names, predictor_name)


def fit_linear_single(
    x: Sequence[float],
    y: Sequence[float],
    names: Optional[Sequence[str]] = None,
    predictor_name: str = "x"
) -> RegressionFit:
    """MP = a * x + b по МНК."""
    x = _as_vector(x, "x")
    y = _as_vector(y, "y")
    _check_lengths(x, y)
    return _fit_single(ModelKind.LINEAR_SINGLE, x, y, names, predictor_name)


def fit_multilinear(
    predictors: Union[Mapping[str, Sequence[float]], pd.DataFrame],
    y: Sequence[float],
    names: Optional[Sequence[str]] = None
) -> RegressionFit:
    """
    Многомерная линейная регрессия со свободным членом.

    Args:
        predictors: Столбцы предикторов по именам (порядок сохраняется)
        y: Отклик
        names: Имена наблюдений для таблицы остатков

    Returns:
        RegressionFit с коэффициентами (c0, c1, ..., cp)
    """
    try:
        frame = predictors if isinstance(predictors, pd.DataFrame) else pd.DataFrame(dict(predictors))
    except ValueError as e:
        raise DimensionMismatchError(f"столбцы предикторов разной длины: {e}")
    if frame.shape[1] == 0:
        raise DimensionMismatchError("нет ни одного предиктора")

    columns = [str(c) for c in frame.columns]
    matrix = _as_vector(frame.to_numpy(dtype=float), "предикторы").reshape(frame.shape)
    y = _as_vector(y, "y")
    if matrix.shape[0] != len(y):
        raise DimensionMismatchError(f"строк предикторов {matrix.shape[0]}, значений отклика {len(y)}")
    if len(y) < len(columns) + 1:
        raise InsufficientDataError(
            f"для {len(columns)} предикторов нужно не меньше {len(columns) + 1} наблюдений, получено {len(y)}"
        )

    design = np.column_stack([np.ones(len(y)), matrix])
    return _fit(ModelKind.MULTILINEAR, design, y, range(design.shape[1]), columns, names)


def _row_values(fit: RegressionFit, row: Row) -> List[float]:
    # число, последовательность или словарь по именам предикторов
    if isinstance(row, Mapping):
        missing = [n for n in fit.predictor_names if n not in row]
        if missing:
            raise DimensionMismatchError(f"нет значений предикторов: {', '.join(missing)}")
        values = [float(row[n]) for n in fit.predictor_names]
    elif isinstance(row, (int, float, np.number)):
        values = [float(row)]
    else:
        values = [float(v) for v in row]

    if len(values) != fit.arity:
        raise DimensionMismatchError(f"модели нужно {fit.arity} предикторов, получено {len(values)}")
    return values


def predict(fit: RegressionFit, row: Row) -> float:
    """Значение модели в одной точке."""
    values = _row_values(fit, row)
    c = fit.coefficients
    if fit.model_kind == ModelKind.LOG_SINGLE:
        if values[0] <= 0:
            raise PositivityError(f"логарифмическая модель требует x > 0, получено {values[0]}")
        return c[0] * math.log(values[0]) + c[1]
    if fit.model_kind == ModelKind.LINEAR_SINGLE:
        return c[0] * values[0] + c[1]
    return c[0] + sum(ci * v for ci, v in zip(c[1:], values))


def evaluate(
    fit: RegressionFit,
    names: Sequence[str],
    rows: Sequence[Row],
    observed: Sequence[float]
) -> ResidualTable:
    """Предсказания, остатки и процентные остатки для набора наблюдений."""
    if not (len(names) == len(rows) == len(observed)):
        raise DimensionMismatchError(
            f"длины не совпадают: имен {len(names)}, строк {len(rows)}, наблюдений {len(observed)}"
        )
    observed = _as_vector(observed, "observed")
    predicted = np.array([predict(fit, row) for row in rows], dtype=float)
    return ResidualTable(_residual_rows(list(names), observed, predicted))


def r_squared_between(x: Sequence[float], y: Sequence[float]) -> float:
    """Квадрат коэффициента корреляции Пирсона (= R^2 парной линейной регрессии)."""
    x = _as_vector(x, "x")
    y = _as_vector(y, "y")
    _check_lengths(x, y)
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(dx @ dx)
    syy = float(dy @ dy)
    if sxx == 0.0 or syy == 0.0:
        raise ZeroVarianceError("корреляция не определена: нулевая дисперсия")
    sxy = float(dx @ dy)
    return sxy * sxy / (sxx * syy)


def r_squared_of_predictions(observed: Sequence[float], predicted: Sequence[float]) -> float:
    """
    1 - SSE/SST для фиксированной модели на произвольных данных.
    Может быть отрицательным, если модель хуже среднего.
    """
    observed = _as_vector(observed, "observed")
    predicted = _as_vector(predicted, "predicted")
    if len(observed) != len(predicted):
        raise DimensionMismatchError(f"длины не совпадают: {len(observed)} и {len(predicted)}")
    sst = float(np.sum((observed - observed.mean()) ** 2))
    if sst == 0.0:
        raise ZeroVarianceError("все наблюдаемые значения одинаковы")
    return 1.0 - float(np.sum((observed - predicted) ** 2)) / sst

"""
Загрузчик CSV-таблиц набора молекул.

Файлы (заголовок обязателен, десятичная точка):
    properties.csv - name, family, split, mp
    reference.csv  - name, family, gp, wiener, aut_order, source_table
    errata.csv     - name, family, field, published, corrected, note
    predictions.csv - table, name, family, predicted (напечатанные MP-hat)

Все столбцы читаются как строки (pandas), преобразование и проверка
значений выполняются здесь же, чтобы ошибки указывали на строку файла.
"""

from pathlib import Path
from typing import List, Sequence, Union

import pandas as pd

PathLike = Union[str, Path]

PROPERTIES_COLUMNS = ("name", "family", "split", "mp")
REFERENCE_COLUMNS = ("name", "family", "gp", "wiener", "aut_order", "source_table")
ERRATA_COLUMNS = ("name", "family", "field", "published", "corrected", "note")
PREDICTIONS_COLUMNS = ("table", "name", "family", "predicted")


class TableFormatError(ValueError):
    """Ошибка формата CSV-таблицы."""


def load_table(path: PathLike, required_columns: Sequence[str]) -> pd.DataFrame:
    """
    Читает CSV как таблицу строк и проверяет наличие столбцов.

    Args:
        path: Путь к CSV-файлу
        required_columns: Обязательные столбцы

    Returns:
        DataFrame со строковыми значениями (пустые ячейки - "")
    """
    path = Path(path)
    try:
        table = pd.read_csv(path, dtype=str, keep_default_na=False, encoding='utf-8')
    except FileNotFoundError:
        raise FileNotFoundError(f"Файл не найден: {path}")
    except pd.errors.EmptyDataError:
        raise TableFormatError(f"{path}: пустой файл (нужна строка заголовка)")
    except pd.errors.ParserError as e:
        raise TableFormatError(f"{path}: не удалось разобрать CSV: {e}")

    table.columns = [str(c).strip() for c in table.columns]
    missing = [c for c in required_columns if c not in table.columns]
    if missing:
        raise TableFormatError(f"{path}: нет столбцов {', '.join(missing)}")

    return table.apply(lambda column: column.str.strip())


def load_properties(path: PathLike) -> pd.DataFrame:
    """Таблица свойств; столбец mp преобразуется в float."""
    table = load_table(path, PROPERTIES_COLUMNS)
    table["mp"] = [_to_float(value, path, row) for row, value in enumerate(table["mp"], start=2)]
    _check_unique(table, path)
    return table


def load_reference(path: PathLike) -> pd.DataFrame:
    """Опубликованные значения дескрипторов (строки, разбираются в bundle)."""
    table = load_table(path, REFERENCE_COLUMNS)
    _check_unique(table, path)
    return table


def load_errata(path: PathLike) -> pd.DataFrame:
    """Список опечаток; отсутствующий файл означает пустой список."""
    if not Path(path).exists():
        return pd.DataFrame(columns=list(ERRATA_COLUMNS))
    return load_table(path, ERRATA_COLUMNS)


def load_predictions(path: PathLike) -> pd.DataFrame:
    """
    Напечатанные предсказания моделей (столбец MP-hat отчетных таблиц).

    Args:
        path: Путь к predictions.csv

    Returns:
        DataFrame; столбец predicted преобразован в float

    Raises:
        TableFormatError: нет столбца, не число или повтор имени в таблице
    """
    table = load_table(path, PREDICTIONS_COLUMNS)
    table["predicted"] = [_to_float(value, path, row) for row, value in enumerate(table["predicted"], start=2)]

    # одно имя может встречаться в разных таблицах, но не дважды в одной
    duplicated = table[table.duplicated(subset=["table", "name"], keep=False)]
    if not duplicated.empty:
        pairs = sorted(set(f"{t}/{n}" for t, n in zip(duplicated["table"], duplicated["name"])))
        raise TableFormatError(f"{path}: повторяющиеся строки: {', '.join(pairs)}")
    return table


def _to_float(value: str, path: PathLike, row: int) -> float:
    if "," in value:
        raise TableFormatError(f"{path}:{row}: используйте десятичную точку, а не запятую: {value!r}")
    try:
        return float(value)
    except ValueError:
        raise TableFormatError(f"{path}:{row}: не число: {value!r}")


def _check_unique(table: pd.DataFrame, path: PathLike) -> None:
    duplicated = table[table.duplicated(subset=["family", "name"], keep=False)]
    if not duplicated.empty:
        pairs: List[str] = sorted(set(f"{f}/{n}" for f, n in zip(duplicated["family"], duplicated["name"])))
        raise TableFormatError(f"{path}: повторяющиеся имена в семействе: {', '.join(pairs)}")

"""
Настройки проекта.

Значения берутся из переменных окружения или из файла .env
(через python-dotenv), как в исходных скриптах пайплайна.

Переменные:
    GPINDEX_DATA_DIR    - директория с молекулами (по умолчанию data/ рядом с кодом)
    GPINDEX_WORKERS     - число потоков для расчета дескрипторов (по умолчанию 4)
    GPINDEX_LOG_LEVEL   - уровень логирования (по умолчанию WARNING)
    GPINDEX_OUTPUT_DIR  - куда run_all.py пишет отчеты (по умолчанию ./output)
"""

import logging
import os
from dataclasses import dataclass
from pathlib import Path

from dotenv import load_dotenv

load_dotenv()

PROJECT_ROOT = Path(__file__).resolve().parent

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


@dataclass(frozen=True)
class Settings:
    data_dir: Path
    workers: int
    log_level: str
    output_dir: Path


def load_settings() -> Settings:
    """Собирает настройки из окружения."""
    workers = os.getenv("GPINDEX_WORKERS", "4")
    try:
        workers_count = max(1, int(workers))
    except ValueError:
        raise ValueError(f"GPINDEX_WORKERS должен быть целым числом, получено: {workers!r}")

    return Settings(
        data_dir=Path(os.getenv("GPINDEX_DATA_DIR", str(PROJECT_ROOT / "data"))),
        workers=workers_count,
        log_level=os.getenv("GPINDEX_LOG_LEVEL", "WARNING").upper(),
        output_dir=Path(os.getenv("GPINDEX_OUTPUT_DIR", "./output")),
    )


def configure_logging(verbose: bool = False) -> None:
    """Настраивает логирование для скриптов (библиотека сама ничего не печатает)."""
    level = logging.DEBUG if verbose else getattr(logging, settings.log_level, logging.WARNING)
    logging.basicConfig(level=level, format=LOG_FORMAT)
    logging.getLogger().setLevel(level)


settings = load_settings()

"""
Пакет loader содержит модули для загрузки графов и таблиц набора молекул.
"""

from .graph_loader import (
    GraphFormatError,
    clean_line,
    format_graph_text,
    load_graph_file,
    parse_graph_text,
    write_graph_file,
)
from .table_loader import (
    TableFormatError,
    load_errata,
    load_predictions,
    load_properties,
    load_reference,
    load_table,
)

__all__ = [
    'GraphFormatError',
    'clean_line',
    'format_graph_text',
    'load_graph_file',
    'parse_graph_text',
    'write_graph_file',
    'TableFormatError',
    'load_errata',
    'load_predictions',
    'load_properties',
    'load_reference',
    'load_table',
]

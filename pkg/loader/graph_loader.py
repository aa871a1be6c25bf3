"""
Загрузчик графов из текстовых файлов со списком ребер.

Формат (UTF-8):
    # комментарий до конца строки
    8            <- первая значимая строка: число вершин n
    1 2          <- каждая следующая непустая строка: ребро "u v", 1 <= u < v <= n
    2 3

Порядок строк с ребрами не важен. Проверка графа (диапазон, петли,
повторы, связность) выполняется build_graph.
"""

from pathlib import Path
from typing import List, Optional, Tuple, Union

from molgraph import MolecularGraph, build_graph

PathLike = Union[str, Path]


class GraphFormatError(ValueError):
    """Синтаксическая ошибка в файле графа (с номером строки)."""

    def __init__(self, message: str, source: str = "<string>", line: Optional[int] = None):
        self.source = source
        self.line = line
        location = f"{source}:{line}" if line is not None else source
        super().__init__(f"{location}: {message}")


def clean_line(line: str) -> str:
    """Отрезает комментарий (#) и пробелы по краям."""
    return line.split("#", 1)[0].strip()


def parse_graph_text(
    text: str,
    source: str = "<string>",
    name: Optional[str] = None
) -> MolecularGraph:
    """
    Разбирает текст в формате списка ребер.

    Args:
        text: Содержимое файла
        source: Имя источника для сообщений об ошибках
        name: Имя графа

    Returns:
        Проверенный MolecularGraph

    Raises:
        GraphFormatError: нет заголовка, нечисловые токены, u > v
        GraphError: ошибки проверки графа из build_graph
    """
    vertex_count = None
    edges: List[Tuple[int, int]] = []

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = clean_line(raw)
        if not line:
            continue

        tokens = line.split()
        if vertex_count is None:
            if len(tokens) != 1:
                raise GraphFormatError(f"ожидалось число вершин, получено: {line!r}", source, line_no)
            vertex_count = _parse_int(tokens[0], source, line_no)
            continue

        if len(tokens) != 2:
            raise GraphFormatError(f"ожидалось ребро 'u v', получено: {line!r}", source, line_no)
        u = _parse_int(tokens[0], source, line_no)
        v = _parse_int(tokens[1], source, line_no)
        if u > v:
            raise GraphFormatError(f"концы ребра должны идти по возрастанию (u < v): {line!r}", source, line_no)
        edges.append((u, v))

    if vertex_count is None:
        raise GraphFormatError("файл пуст: нет строки с числом вершин", source)

    return build_graph(vertex_count, edges, name=name)


def _parse_int(token: str, source: str, line_no: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise GraphFormatError(f"не целое число: {token!r}", source, line_no)


def load_graph_file(path: PathLike) -> MolecularGraph:
    """
    Загружает граф из файла; имя графа - имя файла без расширения.

    Raises:
        FileNotFoundError: файл не найден
        GraphFormatError: синтаксическая ошибка (с номером строки)
        GraphError: граф не прошел проверку
    """
    path = Path(path)
    try:
        with open(path, 'r', encoding='utf-8') as f:
            content = f.read()
    except FileNotFoundError:
        raise FileNotFoundError(f"Файл не найден: {path}")
    except UnicodeDecodeError as e:
        raise GraphFormatError(f"файл не в кодировке UTF-8 ({e.reason})", str(path))

    return parse_graph_text(content, source=str(path), name=path.stem)


def format_graph_text(graph: MolecularGraph, comment: Optional[str] = None) -> str:
    """Обратное к parse_graph_text: заголовок и ребра по возрастанию."""
    lines = []
    if comment:
        lines.extend(f"# {row}" for row in comment.splitlines())
    lines.append(str(graph.vertex_count))
    lines.extend(f"{u} {v}" for u, v in graph.sorted_edges())
    return "\n".join(lines) + "\n"


def write_graph_file(path: PathLike, graph: MolecularGraph, comment: Optional[str] = None) -> Path:
    """Записывает граф в файл формата списка ребер."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        f.write(format_graph_text(graph, comment))
    return path

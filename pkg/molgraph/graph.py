"""
Молекулярный граф и матрица расстояний.

Вершины - атомы углерода (водороды опущены), ребра - связи.
Все интерфейсы используют нумерацию вершин с 1, как на рисунках
молекулярных графов; внутри numpy-массивы индексируются с 0.
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import (
    DisconnectedGraphError,
    DuplicateEdgeError,
    SelfLoopError,
    VertexRangeError,
)

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]


@dataclass(frozen=True)
class MolecularGraph:
    """
    Простой неориентированный связный граф с вершинами 1..n.

    Ребра хранятся нормализованными парами (u, v), u < v.
    Имя не участвует в сравнении: два графа равны, если совпадают
    число вершин и множество ребер.
    """

    vertex_count: int
    edges: FrozenSet[Edge]
    name: Optional[str] = field(default=None, compare=False)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @cached_property
    def adjacency(self) -> np.ndarray:
        """Булева матрица смежности n x n (индексы с 0)."""
        n = self.vertex_count
        matrix = np.zeros((n, n), dtype=bool)
        for u, v in self.edges:
            matrix[u - 1, v - 1] = True
            matrix[v - 1, u - 1] = True
        matrix.setflags(write=False)
        return matrix

    @cached_property
    def _neighbors(self) -> Tuple[Tuple[int, ...], ...]:
        # строка 0 пустая: индексация с 1
        table: List[List[int]] = [[] for _ in range(self.vertex_count + 1)]
        for u, v in self.edges:
            table[u].append(v)
            table[v].append(u)
        return tuple(tuple(sorted(row)) for row in table)

    def neighbors(self, v: int) -> Tuple[int, ...]:
        """Соседи вершины v в порядке возрастания номеров."""
        return self._neighbors[v]

    def degree(self, v: int) -> int:
        """Степень вершины v (у атома углерода не больше 4)."""
        return len(self._neighbors[v])

    def has_edge(self, u: int, v: int) -> bool:
        """Есть ли ребро {u, v}; порядок концов не важен."""
        return (min(u, v), max(u, v)) in self.edges

    def sorted_edges(self) -> List[Edge]:
        return sorted(self.edges)

    def is_tree(self) -> bool:
        # граф связен по построению, поэтому m = n - 1 достаточно
        return self.edge_count == self.vertex_count - 1

    def max_degree(self) -> int:
        return max((self.degree(v) for v in range(1, self.vertex_count + 1)), default=0)


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    """
    Матрица кратчайших расстояний (число ребер) между всеми парами вершин.

    Массив d индексируется с 0 и доступен только для чтения;
    distance(u, v) принимает номера вершин с 1.
    """

    n: int
    d: np.ndarray

    def distance(self, u: int, v: int) -> int:
        """Расстояние между вершинами u и v (номера с 1)."""
        return int(self.d[u - 1, v - 1])

    def row_sums(self) -> np.ndarray:
        """
        Транзитивность вершин: сумма расстояний от каждой вершины.

        Returns:
            Целочисленный вектор длины n, сумма всех его элементов равна 2W
        """
        return self.d.sum(axis=1)

    def as_lists(self) -> List[List[int]]:
        return self.d.tolist()


def build_graph(
    vertex_count: int,
    edges: Iterable[Sequence[int]],
    name: Optional[str] = None
) -> MolecularGraph:
    """
    Создает и проверяет молекулярный граф.

    Args:
        vertex_count: Число вершин n (n >= 1)
        edges: Пары вершин с номерами 1..n
        name: Необязательное имя молекулы

    Returns:
        Проверенный MolecularGraph

    Raises:
        VertexRangeError: n < 1 или номер вершины вне 1..n
        SelfLoopError: петля {v, v}
        DuplicateEdgeError: повтор ребра (в любом порядке концов)
        DisconnectedGraphError: граф не связен
    """
    if isinstance(vertex_count, bool) or not isinstance(vertex_count, (int, np.integer)) or vertex_count < 1:
        raise VertexRangeError(f"Число вершин должно быть целым >= 1, получено: {vertex_count!r}")
    vertex_count = int(vertex_count)

    normalized = set()
    for edge in edges:
        if len(edge) != 2:
            raise VertexRangeError(f"Ребро должно содержать две вершины: {edge!r}")
        u, v = edge
        for endpoint in (u, v):
            if isinstance(endpoint, bool) or not isinstance(endpoint, (int, np.integer)):
                raise VertexRangeError(f"Номер вершины должен быть целым: {endpoint!r}")
            if not 1 <= endpoint <= vertex_count:
                raise VertexRangeError(
                    f"Вершина {endpoint} вне диапазона 1..{vertex_count} (ребро {u} {v})"
                )
        if u == v:
            raise SelfLoopError(f"Петля в вершине {u}")
        key = (int(min(u, v)), int(max(u, v)))
        if key in normalized:
            raise DuplicateEdgeError(f"Повторное ребро {key[0]} {key[1]}")
        normalized.add(key)

    graph = MolecularGraph(vertex_count=vertex_count, edges=frozenset(normalized), name=name)

    unreachable = _unreachable_from_first(graph)
    if unreachable:
        shown = ", ".join(str(v) for v in unreachable[:10])
        raise DisconnectedGraphError(
            f"Граф не связен: из вершины 1 недостижимы {shown}"
            + (" ..." if len(unreachable) > 10 else "")
        )

    return graph


def _unreachable_from_first(graph: MolecularGraph) -> List[int]:
    """
    Обход в ширину из вершины 1.

    Returns:
        Недостижимые вершины в порядке возрастания (пусто для связного графа)
    """
    seen = {1}
    queue = deque([1])
    while queue:
        u = queue.popleft()
        for w in graph.neighbors(u):
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return [v for v in range(1, graph.vertex_count + 1) if v not in seen]


def path_graph(n: int, name: Optional[str] = None) -> MolecularGraph:
    """Путь на n вершинах: скелет неразветвленного алкана."""
    return build_graph(n, [(i, i + 1) for i in range(1, n)], name=name)


def cycle_graph(n: int, name: Optional[str] = None) -> MolecularGraph:
    """Цикл на n >= 3 вершинах (вершинно-транзитивный граф)."""
    if n < 3:
        raise VertexRangeError(f"Цикл требует не менее 3 вершин, получено: {n}")
    return build_graph(n, [(i, i % n + 1) for i in range(1, n + 1)], name=name)


def distance_matrix(g: MolecularGraph) -> DistanceMatrix:
    """
    Вычисляет все кратчайшие расстояния алгоритмом Флойда-Уоршелла, O(n^3).

    Внутренний цикл по k векторизован через numpy.
    """
    n = g.vertex_count
    # любое расстояние в связном графе меньше n
    d = np.full((n, n), n, dtype=np.int64)
    np.fill_diagonal(d, 0)
    d[g.adjacency] = 1

    # релаксация через промежуточную вершину k сразу для всей матрицы
    for k in range(n):
        np.minimum(d, d[:, k, None] + d[None, k, :], out=d)

    logger.debug("Матрица расстояний %dx%d, диаметр %d", n, n, int(d.max()))
    d.setflags(write=False)
    return DistanceMatrix(n=n, d=d)

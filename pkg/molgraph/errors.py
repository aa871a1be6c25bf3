"""
Исключения пакета molgraph.

Каждый вид некорректного графа имеет свой класс, чтобы вызывающий код
(и CLI) мог различать причины отказа.
"""


class GraphError(ValueError):
    """Базовое исключение для некорректных молекулярных графов."""


class SelfLoopError(GraphError):
    """Ребро соединяет вершину саму с собой."""


class DuplicateEdgeError(GraphError):
    """Ребро указано более одного раза."""


class VertexRangeError(GraphError):
    """Номер вершины вне диапазона 1..n (или само n некорректно)."""


class DisconnectedGraphError(GraphError):
    """Граф не связен."""


class SizeLimitError(GraphError):
    """Граф слишком велик для полного перебора перестановок."""


class NotAnAutomorphismError(GraphError):
    """Перестановка, заданная вручную, не сохраняет смежность."""


class ConsistencyError(RuntimeError):
    """Две формулы индекса Граовца-Пизанского дали разный результат."""

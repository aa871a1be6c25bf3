"""
Группа автоморфизмов молекулярного графа и орбиты вершин.

Два способа перечисления автоморфизмов:
1. automorphisms_bruteforce - перебор всех n! перестановок (n <= 10),
   эталон для проверки
2. automorphisms - поиск с возвратом, отсекающий кандидатов по
   инвариантам вершин (степень, мультимножество расстояний) и по
   согласованности расстояний с уже сопоставленными вершинами

Группа хранится явным списком перестановок: у молекулярных графов
группы маленькие (до 72 элементов у 2,2,3,3-тетраметилбутана).
"""

import logging
import re
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .errors import NotAnAutomorphismError, SizeLimitError, VertexRangeError
from .graph import DistanceMatrix, MolecularGraph, distance_matrix

logger = logging.getLogger(__name__)

BRUTEFORCE_LIMIT = 10

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


@dataclass(frozen=True)
class Permutation:
    """
    Биекция множества {1..n}; image[i - 1] = alpha(i).
    """

    image: Tuple[int, ...]

    def __post_init__(self):
        if sorted(self.image) != list(range(1, len(self.image) + 1)):
            raise VertexRangeError(f"Не перестановка 1..{len(self.image)}: {self.image}")

    @property
    def n(self) -> int:
        return len(self.image)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def from_cycles(cls, n: int, text: str) -> "Permutation":
        """
        Разбирает циклическую запись, например "(1 6)(4 7)(5 8)".

        Неподвижные точки можно не указывать; "()" или пустая строка -
        тождественная перестановка.
        """
        image = list(range(1, n + 1))
        seen = set()
        stripped = _CYCLE_RE.sub("", text).strip()
        if stripped:
            raise VertexRangeError(f"Не удалось разобрать циклы: {text!r}")
        for body in _CYCLE_RE.findall(text):
            cycle = [int(token) for token in body.replace(",", " ").split()]
            for v in cycle:
                if not 1 <= v <= n:
                    raise VertexRangeError(f"Вершина {v} вне диапазона 1..{n} в {text!r}")
                if v in seen:
                    raise VertexRangeError(f"Вершина {v} встречается дважды в {text!r}")
                seen.add(v)
            for i, v in enumerate(cycle):
                image[v - 1] = cycle[(i + 1) % len(cycle)]
        return cls(tuple(image))

    def __call__(self, v: int) -> int:
        return self.image[v - 1]

    def compose(self, other: "Permutation") -> "Permutation":
        """(self o other)(v) = self(other(v))."""
        return Permutation(tuple(self.image[w - 1] for w in other.image))

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, w in enumerate(self.image, start=1):
            inv[w - 1] = i
        return Permutation(tuple(inv))

    def is_identity(self) -> bool:
        return all(w == i for i, w in enumerate(self.image, start=1))

    def cycles(self) -> List[Tuple[int, ...]]:
        """Нетривиальные циклы, каждый начинается с наименьшей вершины."""
        seen = set()
        result = []
        for start in range(1, self.n + 1):
            if start in seen:
                continue
            cycle = [start]
            seen.add(start)
            v = self(start)
            while v != start:
                cycle.append(v)
                seen.add(v)
                v = self(v)
            if len(cycle) > 1:
                result.append(tuple(cycle))
        return result

    def cycle_notation(self) -> str:
        cycles = self.cycles()
        if not cycles:
            return "()"
        return "".join("(" + " ".join(str(v) for v in c) + ")" for c in cycles)

    def preserves_adjacency(self, g: MolecularGraph) -> bool:
        # биекция, переводящая ребра в ребра, сохраняет и не-смежность
        return all(g.has_edge(self(u), self(v)) for u, v in g.edges)

    def __str__(self) -> str:
        return self.cycle_notation()


@dataclass(frozen=True)
class AutomorphismSet:
    """Явный список автоморфизмов графа (группа Aut(G))."""

    n: int
    members: Tuple[Permutation, ...]

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[Permutation]:
        return iter(self.members)

    def __contains__(self, item: Permutation) -> bool:
        return item in set(self.members)

    @property
    def order(self) -> int:
        return len(self.members)

    def is_group(self) -> bool:
        """
        Проверяет групповые аксиомы перебором: тождество, замкнутость
        относительно композиции и обращения.
        """
        members = set(self.members)
        if Permutation.identity(self.n) not in members:
            return False
        if any(a.inverse() not in members for a in members):
            return False
        return all(a.compose(b) in members for a, b in product(members, repeat=2))


def _sorted_set(n: int, members: Iterable[Permutation]) -> AutomorphismSet:
    return AutomorphismSet(n=n, members=tuple(sorted(set(members), key=lambda p: p.image)))


@lru_cache(maxsize=None)
def _all_permutations(n: int) -> np.ndarray:
    """
    Все n! перестановок индексов 0..n-1 строками массива int8.

    Строится вставкой нового элемента во все позиции; массив кэшируется.
    """
    table = np.zeros((1, 0), dtype=np.int8)
    for k in range(n):
        table = np.concatenate(
            [np.insert(table, pos, k, axis=1) for pos in range(k + 1)],
            axis=0,
        )
    table.setflags(write=False)
    return table


def automorphisms_bruteforce(g: MolecularGraph) -> AutomorphismSet:
    """
    Перебирает все перестановки {1..n} и оставляет сохраняющие смежность.

    Проверка векторизована: кандидаты отсеиваются ребро за ребром.

    Raises:
        SizeLimitError: n > 10 (используйте automorphisms)
    """
    n = g.vertex_count
    if n > BRUTEFORCE_LIMIT:
        raise SizeLimitError(
            f"Полный перебор ограничен n <= {BRUTEFORCE_LIMIT} (получено n = {n}); "
            f"используйте automorphisms() с отсечениями"
        )

    candidates = _all_permutations(n)
    adjacency = g.adjacency
    for u, v in g.sorted_edges():
        keep = adjacency[candidates[:, u - 1], candidates[:, v - 1]]
        candidates = candidates[keep]
        if len(candidates) == 0:
            break

    members = [Permutation(tuple(int(w) + 1 for w in row)) for row in candidates]
    logger.debug("Перебор %d! перестановок для %s: найдено %d автоморфизмов", n, g.name, len(members))
    return _sorted_set(n, members)


def vertex_invariants(g: MolecularGraph, d: Optional[DistanceMatrix] = None) -> List[Tuple[int, Tuple[int, ...]]]:
    """Инвариант вершины: (степень, отсортированный список расстояний до всех вершин)."""
    if d is None:
        d = distance_matrix(g)
    rows = np.sort(d.d, axis=1)
    return [
        (g.degree(v), tuple(int(x) for x in rows[v - 1]))
        for v in range(1, g.vertex_count + 1)
    ]


def _search_order(g: MolecularGraph, invariants: Sequence) -> List[int]:
    # обход в ширину от вершины с самым редким инвариантом:
    # у каждой следующей вершины уже сопоставлен сосед
    counts: Dict = {}
    for inv in invariants:
        counts[inv] = counts.get(inv, 0) + 1
    start = min(range(1, g.vertex_count + 1), key=lambda v: (counts[invariants[v - 1]], v))

    order = [start]
    seen = {start}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for w in g.neighbors(u):
            if w not in seen:
                seen.add(w)
                order.append(w)
                queue.append(w)
    return order


def automorphisms(g: MolecularGraph, d: Optional[DistanceMatrix] = None) -> AutomorphismSet:
    """
    Находит все автоморфизмы поиском с возвратом.

    Кандидаты для образа вершины - вершины с тем же инвариантом
    (степень и мультимножество расстояний), перебираются по возрастанию
    номера. Каждое новое сопоставление v -> w проверяется на согласованность
    расстояний со всеми ранее сопоставленными вершинами (расстояние 1
    означает смежность, так что смежность проверяется тоже).

    Поиск идет по явному стеку, поэтому глубина не ограничена пределом
    рекурсии интерпретатора.

    Args:
        g: Молекулярный граф
        d: Матрица расстояний (если None, считается заново)

    Returns:
        AutomorphismSet в том же порядке, что и automorphisms_bruteforce
    """
    n = g.vertex_count
    if d is None:
        d = distance_matrix(g)
    dist = d.as_lists()
    invariants = vertex_invariants(g, d)

    # классы вершин с одинаковым инвариантом, номера по возрастанию
    classes: Dict = {}
    for w in range(1, n + 1):
        classes.setdefault(invariants[w - 1], []).append(w)
    order = _search_order(g, invariants)
    options = [classes[invariants[v - 1]] for v in order]

    image = [0] * (n + 1)
    used = [False] * (n + 1)
    position = [0] * n  # следующий кандидат на каждом уровне
    found: List[Permutation] = []
    visited = 0

    def consistent(depth: int, v: int, w: int) -> bool:
        row_v = dist[v - 1]
        row_w = dist[w - 1]
        return all(row_v[order[k] - 1] == row_w[image[order[k]] - 1] for k in range(depth))

    depth = 0
    while depth >= 0:
        if depth == n:
            found.append(Permutation(tuple(image[1:])))
            depth -= 1
            continue

        v = order[depth]
        if image[v]:
            # вернулись на уровень: освобождаем прежний образ
            used[image[v]] = False
            image[v] = 0

        level = options[depth]
        advanced = False
        while position[depth] < len(level):
            w = level[position[depth]]
            position[depth] += 1
            if used[w]:
                continue
            visited += 1
            if not consistent(depth, v, w):
                continue
            image[v] = w
            used[w] = True
            advanced = True
            break

        if advanced:
            depth += 1
        else:
            position[depth] = 0
            depth -= 1

    logger.debug(
        "Поиск с возвратом для %s (n=%d): %d узлов, |Aut| = %d",
        g.name, n, visited, len(found)
    )
    return _sorted_set(n, found)


def close_group(n: int, generators: Iterable[Permutation]) -> AutomorphismSet:
    """Замыкание набора перестановок относительно композиции (с тождеством)."""
    generators = list(generators)
    for p in generators:
        if p.n != n:
            raise VertexRangeError(f"Перестановка на {p.n} точках, ожидалось {n}")

    identity = Permutation.identity(n)
    members = {identity}
    frontier = [identity]
    while frontier:
        new_frontier = []
        for element in frontier:
            for gen in generators:
                product_ = gen.compose(element)
                if product_ not in members:
                    members.add(product_)
                    new_frontier.append(product_)
        frontier = new_frontier
    return _sorted_set(n, members)


def hand_automorphisms(g: MolecularGraph, generators: Iterable[Permutation]) -> AutomorphismSet:
    """
    Группа, заданная образующими "вручную" (без перечисления).

    Каждая образующая проверяется на сохранение смежности. Полнота группы
    не проверяется: за нее отвечает тот, кто задал образующие.
    """
    generators = list(generators)
    for p in generators:
        if p.n != g.vertex_count:
            raise VertexRangeError(f"Перестановка на {p.n} точках, в графе {g.vertex_count} вершин")
        if not p.preserves_adjacency(g):
            raise NotAnAutomorphismError(f"{p} не сохраняет смежность графа {g.name or ''}".rstrip())
    return close_group(g.vertex_count, generators)


@dataclass(frozen=True)
class OrbitPartition:
    """Разбиение вершин на орбиты естественного действия Aut(G)."""

    n: int
    orbits: Tuple[Tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.orbits)

    def __iter__(self) -> Iterator[Tuple[int, ...]]:
        return iter(self.orbits)

    def orbit_of(self, v: int) -> Tuple[int, ...]:
        for orbit in self.orbits:
            if v in orbit:
                return orbit
        raise VertexRangeError(f"Вершина {v} вне диапазона 1..{self.n}")

    def as_sets(self) -> List[set]:
        return [set(orbit) for orbit in self.orbits]


def orbit_partition(g: MolecularGraph, aut: AutomorphismSet) -> OrbitPartition:
    """
    Объединяет u и alpha(u) для всех пар (alpha, u) через систему
    непересекающихся множеств.

    Вершины в орбите по возрастанию, орбиты - по наименьшей вершине.
    """
    n = g.vertex_count
    parent = list(range(n + 1))

    def find(v: int) -> int:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for alpha in aut:
        for u in range(1, n + 1):
            ru, rv = find(u), find(alpha(u))
            if ru != rv:
                parent[max(ru, rv)] = min(ru, rv)

    groups: Dict[int, List[int]] = {}
    for v in range(1, n + 1):
        groups.setdefault(find(v), []).append(v)

    orbits = tuple(sorted((tuple(members) for members in groups.values()), key=lambda o: o[0]))
    return OrbitPartition(n=n, orbits=orbits)

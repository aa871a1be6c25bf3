"""
Топологические дескрипторы: индекс Винера и индекс Граовца-Пизанского (GP).

GP считается двумя способами:
1. по определению: n / (2|Aut|) * сумма d(u, alpha(u)) по всем u и alpha
2. через орбиты: n * сумма W(V_i) / |V_i|

descriptor_record всегда считает оба и падает, если они расходятся.
Значения GP точные (Fraction), целые печатаются без знаменателя.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Optional, Tuple, Union

import numpy as np

from .errors import ConsistencyError, VertexRangeError
from .graph import DistanceMatrix, MolecularGraph, distance_matrix
from .symmetry import AutomorphismSet, OrbitPartition, automorphisms, orbit_partition

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DescriptorRecord:
    """Результат расчета для одной молекулы."""

    name: str
    gp: Fraction
    wiener: int
    aut_order: int
    vertex_count: int
    orbits: Tuple[Tuple[int, ...], ...] = ()

    @property
    def orbit_count(self) -> int:
        return len(self.orbits)

    @property
    def gp_value(self) -> Union[int, str]:
        """GP как int, если знаменатель 1, иначе строка "p/q"."""
        return format_gp(self.gp)

    def to_dict(self) -> Dict:
        return {
            "name": self.name,
            "vertex_count": self.vertex_count,
            "gp": self.gp_value,
            "wiener": self.wiener,
            "aut_order": self.aut_order,
            "orbit_count": self.orbit_count,
            "orbits": [list(orbit) for orbit in self.orbits],
        }


def format_gp(value: Fraction) -> Union[int, str]:
    if value.denominator == 1:
        return int(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def wiener(g: MolecularGraph, d: DistanceMatrix) -> int:
    """W(G): половина суммы всех элементов матрицы расстояний."""
    return int(d.d.sum()) // 2


def wiener_subset(g: MolecularGraph, d: DistanceMatrix, s: Iterable[int]) -> int:
    """
    W(S): половина суммы d(u, v) по упорядоченным парам из S.

    Raises:
        VertexRangeError: вершина из S вне 1..n
    """
    vertices = sorted(set(s))
    for v in vertices:
        if not 1 <= v <= g.vertex_count:
            raise VertexRangeError(f"Вершина {v} вне диапазона 1..{g.vertex_count}")
    if len(vertices) < 2:
        return 0
    idx = np.array(vertices) - 1
    return int(d.d[np.ix_(idx, idx)].sum()) // 2


def gp_by_definition(g: MolecularGraph, aut: AutomorphismSet, d: DistanceMatrix) -> Fraction:
    """
    GP по определению: накопление X += M[i, alpha(i)] по всем alpha и i,
    затем GP = n / (2|Aut|) * X.
    """
    n = g.vertex_count
    rows = np.arange(n)
    total = 0
    for alpha in aut:
        cols = np.array(alpha.image) - 1
        total += int(d.d[rows, cols].sum())
    return Fraction(n * total, 2 * len(aut))


def gp_by_orbits(g: MolecularGraph, orbits: OrbitPartition, d: DistanceMatrix) -> Fraction:
    """GP через орбиты: |V(G)| * сумма W(V_i) / |V_i|."""
    total = sum(
        (Fraction(wiener_subset(g, d, orbit), len(orbit)) for orbit in orbits),
        Fraction(0),
    )
    return g.vertex_count * total


def descriptor_record(
    g: MolecularGraph,
    aut: Optional[AutomorphismSet] = None,
    name: Optional[str] = None
) -> DescriptorRecord:
    """
    Полный расчет: расстояния, автоморфизмы, орбиты, W и GP двумя способами.

    Args:
        g: Молекулярный граф
        aut: Готовая группа автоморфизмов (например, заданная вручную);
             если None - ищется поиском с возвратом
        name: Имя для записи (по умолчанию g.name)

    Raises:
        ConsistencyError: формулы GP дали разные значения
    """
    d = distance_matrix(g)
    if aut is None:
        aut = automorphisms(g, d)
    orbits = orbit_partition(g, aut)

    gp_def = gp_by_definition(g, aut, d)
    gp_orb = gp_by_orbits(g, orbits, d)
    label = name or g.name or "graph"
    if gp_def != gp_orb:
        raise ConsistencyError(
            f"{label}: GP по определению = {gp_def}, через орбиты = {gp_orb}"
        )
    logger.debug("%s: GP = %s (обе формулы совпали), |Aut| = %d", label, gp_def, len(aut))

    return DescriptorRecord(
        name=label,
        gp=gp_def,
        wiener=wiener(g, d),
        aut_order=len(aut),
        vertex_count=g.vertex_count,
        orbits=orbits.orbits,
    )

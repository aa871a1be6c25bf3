"""Общие фикстуры тестов."""

from pathlib import Path
from typing import List

import numpy as np
import pandas as pd
import pytest

from bundle import MoleculeBundle
from config import PROJECT_ROOT
from molgraph import MolecularGraph, build_graph

GOLDEN_DIR = Path(__file__).parent / "golden"
DATA_DIR = PROJECT_ROOT / "data"

# нумерация вершин рабочего примера 2-метил-3-этилпентана
WORKED_EXAMPLE_EDGES = [(1, 2), (2, 3), (3, 4), (4, 5), (2, 6), (3, 7), (7, 8)]


def random_connected_graph(rng: np.random.Generator, n: int, density: float) -> MolecularGraph:
    """Случайное дерево плюс случайные хорды, вершины перемешаны."""
    labels = rng.permutation(n) + 1
    edges = set()
    for v in range(1, n):
        u = int(rng.integers(0, v))
        edges.add((u, v))
    for u in range(n):
        for v in range(u + 1, n):
            if (u, v) not in edges and rng.random() < density:
                edges.add((u, v))
    return build_graph(n, [(int(labels[u]), int(labels[v])) for u, v in edges])


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture(scope="session")
def bundle() -> MoleculeBundle:
    return MoleculeBundle(data_directory=DATA_DIR, workers=4)


@pytest.fixture(scope="session")
def worked_example() -> MolecularGraph:
    return build_graph(8, WORKED_EXAMPLE_EDGES, name="2-methyl-3-ethyl-pentane")


@pytest.fixture(scope="session")
def small_random_graphs() -> List[MolecularGraph]:
    """500 связных графов с n <= 10 (для сверки с полным перебором)."""
    rng = np.random.default_rng(20240517)
    graphs = []
    for _ in range(500):
        n = int(rng.integers(1, 11))
        graphs.append(random_connected_graph(rng, n, float(rng.uniform(0.0, 0.4))))
    return graphs


@pytest.fixture(scope="session")
def medium_random_graphs() -> List[MolecularGraph]:
    """Связные графы с n <= 40 (для сверки расстояний)."""
    rng = np.random.default_rng(7)
    return [
        random_connected_graph(rng, int(rng.integers(1, 41)), float(rng.uniform(0.0, 0.15)))
        for _ in range(60)
    ]


@pytest.fixture(scope="session")
def golden():
    def load(name: str) -> pd.DataFrame:
        return pd.read_csv(GOLDEN_DIR / f"{name}.csv", dtype={"Alkane": str, "Molecule": str})
    return load

"""
Пакет molgraph: молекулярные графы, автоморфизмы и дескрипторы.
"""

from .graph import (
    MolecularGraph,
    DistanceMatrix,
    build_graph,
    path_graph,
    cycle_graph,
    distance_matrix,
)
from .symmetry import (
    BRUTEFORCE_LIMIT,
    Permutation,
    AutomorphismSet,
    OrbitPartition,
    automorphisms,
    automorphisms_bruteforce,
    close_group,
    hand_automorphisms,
    orbit_partition,
    vertex_invariants,
)
from .descriptors import (
    DescriptorRecord,
    descriptor_record,
    format_gp,
    gp_by_definition,
    gp_by_orbits,
    wiener,
    wiener_subset,
)
from .errors import (
    GraphError,
    SelfLoopError,
    DuplicateEdgeError,
    VertexRangeError,
    DisconnectedGraphError,
    SizeLimitError,
    NotAnAutomorphismError,
    ConsistencyError,
)

__all__ = [
    'MolecularGraph',
    'DistanceMatrix',
    'build_graph',
    'path_graph',
    'cycle_graph',
    'distance_matrix',
    'BRUTEFORCE_LIMIT',
    'Permutation',
    'AutomorphismSet',
    'OrbitPartition',
    'automorphisms',
    'automorphisms_bruteforce',
    'close_group',
    'hand_automorphisms',
    'orbit_partition',
    'vertex_invariants',
    'DescriptorRecord',
    'descriptor_record',
    'format_gp',
    'gp_by_definition',
    'gp_by_orbits',
    'wiener',
    'wiener_subset',
    'GraphError',
    'SelfLoopError',
    'DuplicateEdgeError',
    'VertexRangeError',
    'DisconnectedGraphError',
    'SizeLimitError',
    'NotAnAutomorphismError',
    'ConsistencyError',
]

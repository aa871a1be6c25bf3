"""
Пакет bundle: встроенный набор молекул и его сверка.
"""

from .molecule_bundle import (
    BundleError,
    Erratum,
    Family,
    MoleculeBundle,
    MoleculeCheck,
    MoleculeEntry,
    ReferenceValues,
    Split,
    VerificationReport,
    bundled_family,
    default_bundle,
    parse_family,
    verify_bundle,
)

__all__ = [
    'BundleError',
    'Erratum',
    'Family',
    'MoleculeBundle',
    'MoleculeCheck',
    'MoleculeEntry',
    'ReferenceValues',
    'Split',
    'VerificationReport',
    'bundled_family',
    'default_bundle',
    'parse_family',
    'verify_bundle',
]

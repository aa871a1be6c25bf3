import shutil
from fractions import Fraction

import pytest

from bundle import (
    BundleError,
    Family,
    MoleculeBundle,
    Split,
    bundled_family,
    parse_family,
    verify_bundle,
)
from molgraph import path_graph


@pytest.fixture
def bundle_copy(tmp_path, data_dir):
    """Копия набора, которую тест может портить."""
    target = tmp_path / "data"
    shutil.copytree(data_dir, target)
    return target


@pytest.mark.parametrize("family, count, train, test", [
    (Family.ALKANE, 31, 26, 5),
    (Family.PAH, 20, 16, 4),
    (Family.OCTANE_ISOMER, 14, 0, 0),
])
def test_family_sizes(bundle, family, count, train, test):
    entries = bundled_family(family, bundle)
    assert len(entries) == count
    assert sum(1 for e in entries if e.split == Split.TRAIN) == train
    assert sum(1 for e in entries if e.split == Split.TEST) == test
    assert len({e.name for e in entries}) == count


def test_test_splits(bundle):
    alkanes = {e.name for e in bundle.load_family("alkane") if e.split == Split.TEST}
    assert alkanes == {"octane", "tridecane", "octadecane", "tricosane", "octacosane"}
    pahs = [e.name for e in bundle.load_family("pah") if e.split == Split.TEST]
    assert pahs == [
        "naphtalene", "1-3-7-trimethylnaphthalene",
        "2-6-dimethylanthracene", "4-5-methylenephenanthrene",
    ]
    assert all(e.split == Split.ALL for e in bundle.load_family("octane_isomer"))


def test_alkanes_are_paths(bundle):
    for n, entry in enumerate(bundle.load_family(Family.ALKANE), start=2):
        assert entry.graph == path_graph(n)


def test_family_invariants_hold(bundle):
    for entry in bundle.load_family(Family.OCTANE_ISOMER):
        assert entry.graph.is_tree() and entry.graph.max_degree() <= 4
        assert entry.graph.vertex_count == 8
    for entry in bundle.load_family(Family.PAH):
        assert not entry.graph.is_tree()


def test_verify_full_bundle(bundle):
    report = verify_bundle(bundle=bundle)
    assert report.ok, [(c.name, c.mismatches, c.error) for c in report.failures()]
    assert report.summary_line() == "alkanes 31/31, PAHs 20/20, octane isomers 14/14"
    assert len(report.checks) == 65


def test_erratum_is_reported(bundle):
    report = bundle.verify(Family.PAH)
    corrected = report.errata_applied()
    assert [c.name for c in corrected] == ["2-7-dimethylanthracene"]
    check = corrected[0]
    assert check.passed
    assert (check.record.gp, check.record.wiener, check.record.aut_order) == (256, 413, 2)


def test_reference_values_are_verbatim(bundle):
    ref = bundle.reference_values(Family.PAH)["2-7-dimethylanthracene"]
    assert (ref.gp, ref.wiener, ref.aut_order) == (Fraction(280), 413, 2)
    octane = bundle.reference_values(Family.OCTANE_ISOMER)["octane"]
    assert (octane.gp, octane.wiener, octane.aut_order) == (64, None, 2)


@pytest.mark.parametrize("name, aut, w, gp", [
    ("anthracene", 4, 279, 245),
    ("2-6-dimethylanthracene", 2, 414, 336),
    ("4-5-methylenephenanthrene", 2, 300, 165),
    ("naphtalene", 4, 109, 95),
])
def test_pah_triples(bundle, name, aut, w, gp):
    record = next(
        r for r in bundle.descriptor_records(Family.PAH) if r.name == name
    )
    assert (record.aut_order, record.wiener, record.gp) == (aut, w, gp)


@pytest.mark.parametrize("name, aut, gp", [
    ("2,2,3,3-tetramethylbutane", 72, 56),
    ("2,2,4-trimethyl-pentane", 12, 24),
    ("octane", 2, 64),
])
def test_octane_pairs(bundle, name, aut, gp):
    record = next(
        r for r in bundle.descriptor_records(Family.OCTANE_ISOMER) if r.name == name
    )
    assert (record.aut_order, record.gp) == (aut, gp)


def test_verify_single_family(bundle):
    report = bundle.verify("pah")
    assert report.families() == [Family.PAH]
    assert report.summary_line() == "PAHs 20/20"


def test_descriptor_records_keep_bundle_order(bundle):
    names = [r.name for r in bundle.descriptor_records(Family.ALKANE)]
    assert names == [e.name for e in bundle.load_family(Family.ALKANE)]


def test_descriptor_table_sources(bundle):
    published = bundle.descriptor_table(Family.PAH, "published")
    computed = bundle.descriptor_table(Family.PAH, "computed")
    assert list(published.columns) == ["name", "split", "mp", "gp", "wiener", "aut"]
    row = published["name"] == "2-7-dimethylanthracene"
    assert published.loc[row, "gp"].item() == 280
    assert computed.loc[row, "gp"].item() == 256
    assert bundle.descriptor_table(Family.ALKANE)["wiener"].isna().all()
    with pytest.raises(BundleError):
        bundle.descriptor_table(Family.PAH, "guessed")


def test_bundle_stats(bundle):
    stats = bundle.get_bundle_stats()
    assert stats["families"]["alkane"] == {"count": 31, "train": 26, "test": 5, "all": 0}
    assert stats["families"]["octane_isomer"]["all"] == 14


def test_parse_family():
    assert parse_family("PAH") == Family.PAH
    with pytest.raises(BundleError):
        parse_family("alkyne")


def test_corrupted_edge_is_reported(bundle_copy):
    path = bundle_copy / "graphs" / "pah" / "naphtalene.graph"
    path.write_text(path.read_text(encoding="utf-8").replace("\n1 2\n", "\n1 3\n"), encoding="utf-8")

    report = MoleculeBundle(bundle_copy).verify()
    assert not report.ok
    assert [c.name for c in report.failures()] == ["naphtalene"]
    assert report.summary_line() == "alkanes 31/31, PAHs 19/20, octane isomers 14/14"


def test_unreadable_graph_is_reported_not_raised(bundle_copy):
    (bundle_copy / "graphs" / "alkane" / "octane.graph").write_text("8\n1 2\n", encoding="utf-8")
    report = MoleculeBundle(bundle_copy).verify(Family.ALKANE)
    failure = report.failures()[0]
    assert failure.name == "octane"
    assert "не связен" in failure.error


def test_family_invariant_violation(bundle_copy):
    path = bundle_copy / "graphs" / "alkane" / "butane.graph"
    path.write_text("4\n1 2\n2 3\n3 4\n1 4\n", encoding="utf-8")
    with pytest.raises(BundleError, match="дерев"):
        MoleculeBundle(bundle_copy).load_family(Family.ALKANE)


def test_missing_data_directory(tmp_path):
    with pytest.raises(FileNotFoundError):
        MoleculeBundle(tmp_path / "missing")

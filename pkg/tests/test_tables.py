import math
import shutil
from fractions import Fraction

import pandas as pd
import pytest

from bundle import Family, MoleculeBundle
from qspr import (
    PUBLISHED_MODELS,
    REPORT_IDS,
    ReportTable,
    UnknownReportError,
    alkane_log_fit,
    build_report,
    check_predictions,
    compare_printed_predictions,
    pah_linear_fit,
)
from qspr.tables import default_split, select_split


def test_report_table_rejects_ragged_rows():
    with pytest.raises(ValueError):
        ReportTable("t", ("a", "b"), (("x", 1.0), ("y",)))


def test_report_table_formatting():
    table = ReportTable(
        title="demo",
        columns=("Name", "GP", "Value"),
        rows=(("octane", Fraction(64), 1.23456), ("odd", Fraction(7, 2), float("nan"))),
        footer=("average", None, 2.0),
    )
    assert table.formatted_rows() == [
        ["octane", "64", "1.235"],
        ["odd", "3.500", ""],
        ["average", "", "2.000"],
    ]
    assert table.to_csv().splitlines() == [
        "Name,GP,Value", "octane,64,1.235", "odd,3.500,", "average,,2.000",
    ]
    text = table.to_text().splitlines()
    assert text[0] == "demo"
    assert text[1].startswith("Name")
    assert text[-1].startswith("average")

    data = table.to_dict()
    assert data["rows"][0] == {"Name": "octane", "GP": 64, "Value": 1.235}
    assert data["rows"][1]["Value"] is None
    assert data["footer"]["Value"] == 2.0


def _golden_body(frame: pd.DataFrame) -> pd.DataFrame:
    return frame[frame.iloc[:, 0] != "average"].reset_index(drop=True)


def _golden_average(frame: pd.DataFrame) -> float:
    return float(frame[frame.iloc[:, 0] == "average"]["% Residual"].iloc[0])


@pytest.mark.parametrize("table_id, golden_name, fitter, published, family, split", [
    ("table2", "table2", alkane_log_fit, "alkane_log", Family.ALKANE, "test"),
    ("table3", "table3", alkane_log_fit, "alkane_log", Family.ALKANE, "all"),
    ("table5", "table5", pah_linear_fit, "pah_linear", Family.PAH, "test"),
])
def test_predictions_match_printed_values(bundle, golden, table_id, golden_name, fitter, published, family, split):
    expected = _golden_body(golden(golden_name))
    rows = select_split(bundle.descriptor_table(family), split)
    assert list(rows["name"]) == list(expected.iloc[:, 0])
    assert list(rows["gp"]) == list(expected["GP"].astype(float))

    checks = check_predictions(
        fitter(bundle),
        PUBLISHED_MODELS[published],
        list(rows["name"]),
        list(rows["gp"]),
        list(expected["MP-hat"]),
    )
    assert all(c.passed for c in checks), [(c.name, c.predicted, c.published) for c in checks if not c.passed]


@pytest.mark.parametrize("table_id, average, tolerance", [
    ("table2", 1.918, 0.005),
    ("table3", 4.025, 0.005),
    ("table5", 10.592, 0.01),
])
def test_report_rows_and_average(bundle, golden, table_id, average, tolerance):
    report = build_report(table_id, bundle)
    expected = _golden_body(golden(table_id))
    frame = report.to_frame()
    body = frame[frame.iloc[:, 0] != "average"].reset_index(drop=True)

    assert list(report.columns) == list(expected.columns)
    assert list(body.iloc[:, 0]) == list(expected.iloc[:, 0])
    for got, want in zip(body["Residual"].astype(float), expected["Residual"]):
        assert got == pytest.approx(want, abs=0.01)
    for got, want in zip(body["% Residual"].astype(float), expected["% Residual"]):
        assert got == pytest.approx(want, abs=0.01)

    assert report.footer[-1] == pytest.approx(average, abs=tolerance)
    assert _golden_average(golden(table_id)) == pytest.approx(average)


def test_octane_correlations(bundle, golden):
    report = build_report("octane_correlations", bundle)
    assert report.columns == ("Predictor", "Molecules", "R2", "Published")
    assert len(report.rows) == 5
    values = {(p, m): r for p, m, r, _ in report.rows}
    for _, row in golden("octane_correlations").iterrows():
        assert values[(row["Predictor"], row["Molecules"])] == pytest.approx(row["R2"], abs=0.0005)

    # по всем 14 строкам #Aut дает 0.887, а напечатанное значение - без н-октана
    assert values[("#Aut", "all 14")] == pytest.approx(0.8870, abs=0.0005)
    assert values[("#Aut", "without 2,2,3,3-tetramethylbutane")] < 0.01


def test_octane_correlations_mark_matching_rows(bundle):
    published = {(p, m): printed for p, m, _, printed in build_report("octane_correlations", bundle).rows}
    assert published[("GP", "all 14")] == 0.2423
    assert published[("#Aut", "all 14")] is None
    assert published[("#Aut", "without octane")] == 0.9687
    assert published[("GP", "without 2,2,3,3-tetramethylbutane")] == 0.4537


def test_octane_correlations_csv_has_four_decimals(bundle):
    lines = build_report("octane_correlations", bundle).to_csv().splitlines()
    assert lines[0] == "Predictor,Molecules,R2,Published"
    assert lines[2] == "#Aut,all 14,0.8870,"
    assert lines[3].startswith("#Aut,without octane,0.968")
    assert lines[3].endswith(",0.9687")


@pytest.mark.parametrize("table_id, count", [("table2", 5), ("table3", 31), ("table5", 4)])
def test_printed_predictions_are_reproduced(bundle, table_id, count):
    checks = compare_printed_predictions(table_id, bundle)
    assert len(checks) == count
    assert all(c.passed for c in checks), [(c.name, c.predicted, c.published) for c in checks if not c.passed]


def test_printed_prediction_mismatch_is_reported(tmp_path, data_dir):
    copy = tmp_path / "data"
    shutil.copytree(data_dir, copy)
    path = copy / "predictions.csv"
    path.write_text(
        path.read_text(encoding="utf-8").replace("table2,tridecane,alkane,260.396", "table2,tridecane,alkane,261.396"),
        encoding="utf-8",
    )

    checks = compare_printed_predictions("table2", MoleculeBundle(copy))
    failed = [c for c in checks if not c.passed]
    assert [c.name for c in failed] == ["tridecane"]
    assert failed[0].used_published_coefficients
    assert failed[0].published == 261.396


def test_printed_predictions_only_for_prediction_tables(bundle):
    with pytest.raises(UnknownReportError):
        compare_printed_predictions("table4", bundle)


@pytest.mark.parametrize("table_id, count, columns", [
    ("table1", 31, ("Alkane", "#Aut", "GP", "MP (K)", "Split")),
    ("table4", 20, ("Molecule", "#Aut", "W", "GP", "MP (K)", "Split")),
    ("table6", 14, ("Molecule", "#Aut", "GP", "MP (K)")),
])
def test_descriptor_reports(bundle, table_id, count, columns):
    report = build_report(table_id, bundle)
    assert len(report.rows) == count
    assert report.columns == columns
    assert report.footer is None


def test_descriptor_report_uses_computed_values(bundle):
    rows = {row[0]: row for row in build_report("table4", bundle).rows}
    assert rows["2-7-dimethylanthracene"][3] == 256
    assert rows["naphtalene"][1:4] == (4, 109, 95)


def test_table1_first_and_last_rows(bundle):
    rows = build_report("table1", bundle).rows
    assert rows[0][:3] == ("ethane", 2, 1)
    assert rows[-1][0] == "dotriacontane" and rows[-1][2] == 4096


def test_computed_descriptors_change_pah_predictions(bundle):
    published = build_report("table5", bundle, source="published")
    computed = build_report("table5", bundle, source="computed")
    assert [r[0] for r in published.rows] == [r[0] for r in computed.rows]
    assert not math.isclose(published.rows[0][3], computed.rows[0][3], abs_tol=1e-9)


def test_default_split(bundle):
    assert default_split(bundle.descriptor_table(Family.ALKANE), "log") == "train"
    assert default_split(bundle.descriptor_table(Family.PAH), "multilinear") == "all"
    assert default_split(bundle.descriptor_table(Family.OCTANE_ISOMER), "linear") == "all"


def test_report_ids():
    assert REPORT_IDS == (
        "octane_correlations", "table1", "table2", "table3", "table4", "table5", "table6",
    )


def test_unknown_report(bundle):
    with pytest.raises(UnknownReportError, match="table7"):
        build_report("table7", bundle)

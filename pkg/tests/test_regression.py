import math

import numpy as np
import pytest

from bundle import Family
from qspr import (
    PUBLISHED_MODELS,
    DegeneratePredictorError,
    DimensionMismatchError,
    InsufficientDataError,
    ModelKind,
    PositivityError,
    RankDeficiencyError,
    RegressionError,
    RegressionFit,
    ZeroVarianceError,
    alkane_log_fit,
    evaluate,
    fit_family,
    fit_linear_single,
    fit_log_single,
    fit_multilinear,
    log_model_r_squared_variants,
    matching_variants,
    octane_automorphism_variants,
    pah_linear_fit,
    pah_multilinear_fit,
    predict,
    published_r_squared_variants,
    r_squared_between,
)
from qspr.tables import select_split

COEFFICIENT_TOLERANCE = 0.005


def residual_sum(fit, design, y):
    return float(np.sum((y - design @ np.asarray(fit)) ** 2))


class TestTrivialFits:

    def test_log_fit_on_exact_points(self):
        fit = fit_log_single([1, math.e, math.e ** 2], [5, 7, 9])
        assert fit.coefficients == pytest.approx((2.0, 5.0), abs=1e-12)
        assert fit.r_squared == pytest.approx(1.0)
        assert fit.model_kind == ModelKind.LOG_SINGLE

    def test_identity_line(self):
        fit = fit_linear_single([1, 2, 3, 4], [1, 2, 3, 4])
        assert fit.slopes[0] == pytest.approx(1.0)
        assert fit.intercept == pytest.approx(0.0, abs=1e-12)
        assert fit.r_squared == pytest.approx(1.0)

    def test_residual_rows(self):
        fit = fit_linear_single([1, 2, 3], [2, 1, 4], names=["a", "b", "c"])
        for row in fit.residuals:
            assert row.predicted + row.residual == pytest.approx(row.observed)
            assert row.percent_residual == pytest.approx(100 * abs(row.residual) / abs(row.observed))
        assert [r.name for r in fit.residuals] == ["a", "b", "c"]


class TestErrors:

    def test_log_rejects_nonpositive(self):
        with pytest.raises(PositivityError):
            fit_log_single([0, 1, 2], [1, 2, 3])

    def test_length_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            fit_linear_single([1, 2, 3], [1, 2])

    def test_too_few_points(self):
        with pytest.raises(InsufficientDataError):
            fit_linear_single([1, 2], [1, 2])

    def test_degenerate_predictor(self):
        with pytest.raises(DegeneratePredictorError):
            fit_linear_single([2, 2, 2], [1, 2, 3])

    def test_constant_response(self):
        with pytest.raises(ZeroVarianceError):
            fit_linear_single([1, 2, 3], [5, 5, 5])

    def test_rank_deficiency(self):
        with pytest.raises(RankDeficiencyError):
            fit_multilinear({"a": [1, 2, 3, 4, 5], "b": [2, 4, 6, 8, 10]}, [1, 3, 2, 5, 4])

    def test_multilinear_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            fit_multilinear({"a": [1, 2, 3, 4]}, [1, 2, 3])

    def test_multilinear_needs_enough_rows(self):
        with pytest.raises(InsufficientDataError):
            fit_multilinear({"a": [1, 2], "b": [3, 1]}, [1, 2])

    def test_missing_values(self):
        with pytest.raises(RegressionError):
            fit_linear_single([1, float("nan"), 3], [1, 2, 3])

    def test_r_squared_between_zero_variance(self):
        with pytest.raises(ZeroVarianceError):
            r_squared_between([1, 1, 1], [1, 2, 3])

    def test_predict_arity(self):
        with pytest.raises(DimensionMismatchError):
            predict(PUBLISHED_MODELS["pah_multilinear"], [1, 2])

    def test_predict_log_at_zero(self):
        with pytest.raises(PositivityError):
            predict(PUBLISHED_MODELS["alkane_log"], 0)


class TestPublishedModels:

    @pytest.mark.parametrize("model, x, expected", [
        ("alkane_log", 64, 210.792),
        ("alkane_log", 2744, 339.311),
        ("alkane_log", 273, 260.396),
        ("pah_linear", 0, 10.926),
        ("pah_linear", 336, 229.360),
    ])
    def test_predictions(self, model, x, expected):
        assert predict(PUBLISHED_MODELS[model], x) == pytest.approx(expected, abs=0.002)

    def test_multilinear_accepts_named_row(self):
        fit = PUBLISHED_MODELS["pah_multilinear"]
        row = {"aut": 4, "gp": 245, "wiener": 279}
        assert predict(fit, row) == pytest.approx(predict(fit, [4, 245, 279]))

    def test_from_coefficients_checks_arity(self):
        with pytest.raises(DimensionMismatchError):
            RegressionFit.from_coefficients(ModelKind.LINEAR_SINGLE, (1.0, 2.0, 3.0))
        fit = RegressionFit.from_coefficients("multilinear", (1.0, 2.0, 3.0))
        assert fit.predictor_names == ("x1", "x2")
        assert math.isnan(fit.r_squared)


class TestPublishedFits:

    def test_alkane_log_model(self, bundle):
        fit = alkane_log_fit(bundle)
        assert fit.observations == 26
        assert fit.coefficients[0] == pytest.approx(34.196, abs=COEFFICIENT_TOLERANCE)
        assert fit.coefficients[1] == pytest.approx(68.575, abs=COEFFICIENT_TOLERANCE)

    def test_alkane_r_squared_variant(self, bundle):
        variants = log_model_r_squared_variants(bundle)
        assert set(variants) == {"train", "test", "all"}
        assert matching_variants(variants), variants

    def test_pah_linear_model(self, bundle):
        fit = pah_linear_fit(bundle)
        assert fit.observations == 16
        assert fit.slopes[0] == pytest.approx(0.6501, abs=0.0005)
        assert fit.intercept == pytest.approx(10.926, abs=COEFFICIENT_TOLERANCE)
        assert fit.r_squared == pytest.approx(0.8388, abs=0.0005)

    def test_pah_multilinear_model(self, bundle):
        fit = pah_multilinear_fit(bundle)
        assert fit.observations == 20
        assert fit.predictor_names == ("aut", "gp", "wiener")
        expected = (-46.248, 13.038, 0.446, 0.235)
        for got, want in zip(fit.coefficients, expected):
            assert got == pytest.approx(want, abs=COEFFICIENT_TOLERANCE)
        assert fit.r_squared == pytest.approx(0.894, abs=0.001)
        assert fit.adjusted_r_squared == pytest.approx(0.874, abs=0.001)
        assert fit.standard_error == pytest.approx(30.665, abs=0.01)
        assert fit.multiple_r == pytest.approx(0.946, abs=0.001)

    def test_octane_automorphism_correlation(self, bundle):
        fit = fit_family(Family.OCTANE_ISOMER, "linear", x="aut", bundle=bundle)
        assert fit.observations == 14
        assert fit.r_squared == pytest.approx(0.8870, abs=0.0005)

        reduced = fit_family(Family.OCTANE_ISOMER, "linear", x="aut", bundle=bundle, exclude=["octane"])
        assert reduced.observations == 13
        assert "octane" not in reduced.residual_table.to_frame()["name"].tolist()
        assert reduced.r_squared == pytest.approx(0.9687, abs=0.0005)

    def test_octane_automorphism_variants(self, bundle):
        variants = octane_automorphism_variants(bundle)
        assert list(variants) == ["all 14", "without octane"]
        assert matching_variants(variants, 0.9687) == ["without octane"]

    def test_published_r_squared_variants(self, bundle):
        target, variants = published_r_squared_variants(Family.OCTANE_ISOMER, "linear", "aut", bundle=bundle)
        assert target == 0.9687
        assert set(variants) == {"all 14", "without octane"}
        target, variants = published_r_squared_variants(Family.ALKANE, "log", bundle=bundle)
        assert target == 0.9847
        matched = matching_variants(variants, target)
        assert "train" in matched and "test" not in matched
        assert published_r_squared_variants(Family.PAH, "linear", bundle=bundle) is None

    def test_exclude_unknown_molecule(self, bundle):
        with pytest.raises(RegressionError, match="nonane"):
            fit_family(Family.OCTANE_ISOMER, "linear", x="aut", bundle=bundle, exclude=["nonane"])

    def test_octane_gp_correlation(self, bundle):
        table = bundle.descriptor_table(Family.OCTANE_ISOMER)
        assert r_squared_between(table["gp"], table["mp"]) == pytest.approx(0.2423, abs=0.0005)
        reduced = table[table["name"] != "2,2,3,3-tetramethylbutane"]
        assert r_squared_between(reduced["gp"], reduced["mp"]) == pytest.approx(0.4537, abs=0.0005)

    def test_alkane_test_set_average(self, bundle):
        fit = alkane_log_fit(bundle)
        rows = select_split(bundle.descriptor_table(Family.ALKANE), "test")
        table = evaluate(fit, list(rows["name"]), list(rows["gp"]), list(rows["mp"]))
        assert len(table) == 5
        assert table.average_percent_residual == pytest.approx(1.918, abs=0.005)

    def test_log_model_rejects_zero_gp_rows(self, bundle):
        with pytest.raises(PositivityError):
            fit_family(Family.PAH, "log", bundle=bundle)

    def test_multilinear_needs_published_wiener(self, bundle):
        with pytest.raises(RegressionError, match="wiener"):
            fit_family(Family.OCTANE_ISOMER, "multilinear", bundle=bundle)

    def test_computed_descriptors_refit(self, bundle):
        fit = fit_family(Family.PAH, "multilinear", source="computed", bundle=bundle)
        assert fit.observations == 20
        assert 0.0 <= fit.r_squared <= 1.0


def bundled_fits(bundle):
    alkanes = select_split(bundle.descriptor_table(Family.ALKANE), "train")
    pahs = bundle.descriptor_table(Family.PAH)
    pah_train = select_split(pahs, "train")
    return [
        (alkane_log_fit(bundle), np.column_stack([np.log(alkanes["gp"]), np.ones(len(alkanes))]),
         alkanes["mp"].to_numpy()),
        (pah_linear_fit(bundle), np.column_stack([pah_train["gp"], np.ones(len(pah_train))]),
         pah_train["mp"].to_numpy()),
        (pah_multilinear_fit(bundle),
         np.column_stack([np.ones(len(pahs)), pahs["aut"], pahs["gp"], pahs["wiener"]]),
         pahs["mp"].to_numpy()),
    ]


class TestOlsProperties:

    def test_perturbation_never_improves(self, bundle):
        for fit, design, y in bundled_fits(bundle):
            base = residual_sum(fit.coefficients, design, y)
            for i in range(len(fit.coefficients)):
                for step in (1e-6, -1e-6):
                    moved = list(fit.coefficients)
                    moved[i] += step
                    assert residual_sum(moved, design, y) >= base - 1e-12 * max(1.0, base)

    def test_residual_orthogonality(self, bundle):
        for fit, design, y in bundled_fits(bundle):
            residuals = y - design @ np.asarray(fit.coefficients)
            scale = float(np.abs(design).max() * np.abs(y).max())
            for column in design.T:
                assert abs(float(residuals @ column)) <= 1e-8 * len(y) * scale

    def test_r_squared_between_matches_linear_fit(self, bundle):
        table = bundle.descriptor_table(Family.OCTANE_ISOMER)
        for column in ("gp", "aut"):
            fit = fit_linear_single(table[column], table["mp"])
            assert r_squared_between(table[column], table["mp"]) == pytest.approx(fit.r_squared, abs=1e-12)

    def test_single_column_multilinear_reduces_to_linear(self, bundle):
        rows = select_split(bundle.descriptor_table(Family.PAH), "train")
        linear = fit_linear_single(rows["gp"], rows["mp"])
        multi = fit_multilinear({"gp": rows["gp"]}, rows["mp"])
        assert multi.coefficients[0] == pytest.approx(linear.intercept, abs=1e-10)
        assert multi.coefficients[1] == pytest.approx(linear.slopes[0], abs=1e-10)

    @pytest.mark.parametrize("c, k", [(2.0, 5.0), (-0.5, 100.0)])
    def test_affine_response_equivariance(self, bundle, c, k):
        pahs = bundle.descriptor_table(Family.PAH)
        predictors = {name: pahs[name] for name in ("aut", "gp", "wiener")}
        base = fit_multilinear(predictors, pahs["mp"])
        shifted = fit_multilinear(predictors, c * pahs["mp"] + k)
        assert shifted.coefficients[0] == pytest.approx(c * base.coefficients[0] + k, rel=1e-9)
        for got, want in zip(shifted.coefficients[1:], base.coefficients[1:]):
            assert got == pytest.approx(c * want, rel=1e-9)

    def test_statsmodels_agrees(self, bundle):
        sm = pytest.importorskip("statsmodels.api")
        pahs = bundle.descriptor_table(Family.PAH)
        exog = sm.add_constant(pahs[["aut", "gp", "wiener"]].to_numpy())
        result = sm.OLS(pahs["mp"].to_numpy(), exog).fit()
        fit = pah_multilinear_fit(bundle)
        assert fit.coefficients == pytest.approx(tuple(result.params), rel=1e-8)
        assert fit.r_squared == pytest.approx(result.rsquared, rel=1e-10)
        assert fit.adjusted_r_squared == pytest.approx(result.rsquared_adj, rel=1e-10)
        assert fit.standard_error == pytest.approx(math.sqrt(result.scale), rel=1e-10)


def test_evaluate_exact_predictions_have_zero_residuals():
    fit = RegressionFit.from_coefficients(ModelKind.LINEAR_SINGLE, (2.0, 1.0))
    table = evaluate(fit, ["a", "b"], [1.0, 2.0], [3.0, 5.0])
    assert [r.residual for r in table.rows] == [0.0, 0.0]
    assert table.average_percent_residual == 0.0


def test_evaluate_length_mismatch():
    fit = PUBLISHED_MODELS["pah_linear"]
    with pytest.raises(DimensionMismatchError):
        evaluate(fit, ["a"], [1.0, 2.0], [3.0])

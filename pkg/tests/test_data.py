import numpy as np
import pytest

from diffggm import (
    CoefficientPair,
    ConstantColumn,
    CsvFormatError,
    NonFinite,
    PenaltyConfig,
    RawDataset,
    SelfEdgeViolation,
    StandardizedDataset,
    UnbalancedDesign,
    objective_value,
    read_csv,
    standardize,
    write_csv,
)
from diffggm.data import standardize_columns

from conftest import random_dataset_pair, random_standardized
from oracles import stacked_objective


def names(p):
    return tuple(f"V{i}" for i in range(p))


class TestRawDataset:
    def test_rejects_too_few_samples(self):
        with pytest.raises(ValueError, match="4 samples"):
            RawDataset(np.ones((3, 2)), names(2))

    def test_rejects_single_variable(self):
        with pytest.raises(ValueError, match="2 variables"):
            RawDataset(np.ones((5, 1)), names(1))

    def test_rejects_nan(self):
        values = np.ones((5, 2))
        values[3, 1] = np.nan
        with pytest.raises(NonFinite):
            RawDataset(values, names(2))

    def test_rejects_duplicate_names(self):
        with pytest.raises(ValueError, match="unique"):
            RawDataset(np.random.default_rng(0).standard_normal((5, 2)), ("a", "a"))


class TestStandardize:
    def test_three_point_column(self):
        # [1, 2, 3]: centered to [-1, 0, 1], then scaled by its norm sqrt(2)
        out = standardize_columns(np.array([[1.0], [2.0], [3.0]]))
        s = 1.0 / np.sqrt(2.0)
        np.testing.assert_allclose(out[:, 0], [-s, 0.0, s], atol=1e-15)

    def test_idempotent(self):
        data = random_standardized(3)
        raw1 = RawDataset(data.cond1, data.variable_names)
        raw2 = RawDataset(data.cond2, data.variable_names)
        again = standardize(raw1, raw2)
        np.testing.assert_allclose(again.cond1, data.cond1, atol=1e-12)
        np.testing.assert_allclose(again.cond2, data.cond2, atol=1e-12)

    def test_random_matrix_invariants(self):
        raw1, raw2 = random_dataset_pair(7, n=200, p=6)
        out = standardize(raw1, raw2)
        for mat in (out.cond1, out.cond2):
            np.testing.assert_allclose(mat.mean(axis=0), 0.0, atol=1e-10)
            np.testing.assert_allclose(
                np.einsum("ij,ij->j", mat, mat), 1.0, atol=1e-10
            )

    def test_unbalanced_rejected(self):
        rng = np.random.default_rng(1)
        raw1 = RawDataset(rng.standard_normal((10, 3)), names(3))
        raw2 = RawDataset(rng.standard_normal((11, 3)), names(3))
        with pytest.raises(UnbalancedDesign):
            standardize(raw1, raw2)

    def test_constant_column_rejected(self):
        rng = np.random.default_rng(2)
        values = rng.standard_normal((10, 3))
        values[:, 1] = 4.2
        raw = RawDataset(values, names(3))
        with pytest.raises(ConstantColumn) as err:
            standardize(raw, raw)
        assert err.value.name == "V1"

    def test_name_mismatch_rejected(self):
        rng = np.random.default_rng(3)
        raw1 = RawDataset(rng.standard_normal((10, 2)), ("a", "b"))
        raw2 = RawDataset(rng.standard_normal((10, 2)), ("b", "a"))
        with pytest.raises(ValueError, match="names"):
            standardize(raw1, raw2)

    def test_output_is_read_only(self):
        data = random_standardized(4)
        with pytest.raises(ValueError):
            data.cond1[0, 0] = 1.0


class TestStandardizedDatasetValidation:
    def test_rejects_uncentered(self):
        good = random_standardized(5)
        with pytest.raises(ValueError, match="centered"):
            StandardizedDataset(good.cond1 + 0.5, good.cond2, good.variable_names)

    def test_rejects_wrong_norm(self):
        good = random_standardized(5)
        with pytest.raises(ValueError, match="unit length"):
            StandardizedDataset(good.cond1 * 2.0, good.cond2, good.variable_names)


class TestCoefficientPair:
    def test_self_edge_must_be_zero(self):
        beta = np.zeros(4)
        beta[1] = 0.3
        with pytest.raises(SelfEdgeViolation):
            CoefficientPair(beta1=beta, beta2=np.zeros(4), node_index=1)

    def test_arrays_read_only(self):
        pair = CoefficientPair(np.zeros(3), np.zeros(3), 0)
        with pytest.raises(ValueError):
            pair.beta1[1] = 2.0


class TestPenaltyConfig:
    @pytest.mark.parametrize("lam1,lam2", [(-0.1, 0.0), (0.0, -0.1), (np.nan, 0.0)])
    def test_rejects_bad_penalties(self, lam1, lam2):
        with pytest.raises(ValueError):
            PenaltyConfig(lam1, lam2)

    @pytest.mark.parametrize("alpha", [0.0, 1.0, -0.2])
    def test_rejects_bad_alpha(self, alpha):
        with pytest.raises(ValueError):
            PenaltyConfig(0.1, 0.1, alpha)


class TestObjectiveValue:
    def test_zero_coefficients_give_unit_losses(self):
        data = random_standardized(11, n=50, p=5)
        beta = CoefficientPair(np.zeros(5), np.zeros(5), 2)
        value = objective_value(data, 2, beta, PenaltyConfig(0.0, 0.0))
        assert value == pytest.approx(1.0, abs=1e-12)
        # penalties do not change the value at zero
        value = objective_value(data, 2, beta, PenaltyConfig(3.0, 5.0))
        assert value == pytest.approx(1.0, abs=1e-12)

    def test_matches_materialized_block_diagonal(self, rng):
        for seed in range(5):
            data = random_standardized(seed, n=40, p=6)
            b1 = rng.normal(size=6)
            b2 = rng.normal(size=6)
            b1[3] = b2[3] = 0.0
            beta = CoefficientPair(b1, b2, 3)
            pen = PenaltyConfig(0.37, 0.11)
            ours = objective_value(data, 3, beta, pen)
            ref = stacked_objective(data, 3, b1, b2, pen.lambda1, pen.lambda2)
            assert ours == pytest.approx(ref, abs=1e-10)

    def test_convexity(self, rng):
        data = random_standardized(13, n=30, p=4)
        pen = PenaltyConfig(0.4, 0.2)

        def f(b1, b2):
            return objective_value(
                data, 0, CoefficientPair(b1, b2, 0), pen
            )

        for _ in range(25):
            a1, a2 = rng.normal(size=(2, 4))
            c1, c2 = rng.normal(size=(2, 4))
            a1[0] = a2[0] = c1[0] = c2[0] = 0.0
            t = rng.uniform()
            mid = f(t * a1 + (1 - t) * c1, t * a2 + (1 - t) * c2)
            assert mid <= t * f(a1, a2) + (1 - t) * f(c1, c2) + 1e-10

    def test_wrong_node_rejected(self):
        data = random_standardized(17, n=20, p=3)
        beta = CoefficientPair(np.zeros(3), np.zeros(3), 0)
        with pytest.raises(ValueError):
            objective_value(data, 1, beta, PenaltyConfig(0.1, 0.1))


class TestCsv:
    def test_round_trip(self, tmp_path):
        raw1, _ = random_dataset_pair(23, n=10, p=4)
        path = tmp_path / "d.csv"
        write_csv(path, raw1)
        back = read_csv(path)
        assert back.variable_names == raw1.variable_names
        np.testing.assert_array_equal(back.values, raw1.values)

    def test_write_is_deterministic(self, tmp_path):
        raw1, _ = random_dataset_pair(29, n=10, p=4)
        write_csv(tmp_path / "a.csv", raw1)
        write_csv(tmp_path / "b.csv", raw1)
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()

    def test_ragged_row_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("a,b\n1.0,2.0\n3.0\n")
        with pytest.raises(CsvFormatError, match="expected 2 fields"):
            read_csv(path)

    def test_non_numeric_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("a,b\n1.0,x\n")
        with pytest.raises(CsvFormatError):
            read_csv(path)

    def test_empty_file_rejected(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("")
        with pytest.raises(CsvFormatError):
            read_csv(path)

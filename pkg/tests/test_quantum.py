"""Entropies, divergences, distances, and the operator file format."""

import math

import numpy as np
import pytest

from mosaic_wiretap import quantum as qm


def diag(*entries) -> qm.DensityOperator:
    return qm.DensityOperator(np.diag(np.asarray(entries, dtype=complex)))


class TestValidation:
    def test_non_hermitian_rejected(self):
        with pytest.raises(ValueError):
            qm.DensityOperator(np.array([[0.5, 1e-3], [0.0, 0.5]]))

    def test_bad_trace_rejected(self):
        with pytest.raises(ValueError):
            diag(0.6, 0.6)

    def test_negative_eigenvalue_rejected(self):
        with pytest.raises(ValueError):
            diag(1.1, -0.1)

    def test_tolerated_numerical_noise(self):
        qm.DensityOperator(np.diag([0.5 + 2e-10, 0.5 - 2e-10]))
        qm.DensityOperator(np.diag([1.0 + 5e-10, -5e-10]))


class TestEntropy:
    def test_pure_state_zero(self):
        assert qm.von_neumann_entropy(diag(1.0, 0.0)) == 0.0

    def test_maximally_mixed_qubit_one(self):
        assert qm.von_neumann_entropy(qm.DensityOperator(np.eye(2) / 2)) == 1.0

    def test_quarter_three_quarters(self):
        # scalar formula: -(1/4)log2(1/4) - (3/4)log2(3/4)
        assert qm.von_neumann_entropy(diag(0.25, 0.75)) == pytest.approx(
            0.8112781244591328, abs=1e-12)

    def test_entropy_range(self):
        rng = np.random.default_rng(1)
        for d in (2, 3, 4):
            for _ in range(50):
                s = qm.von_neumann_entropy(qm.random_density(rng, d))
                assert 0.0 <= s <= math.log2(d) + 1e-12


class TestHolevo:
    def test_equal_states_zero(self):
        rho = diag(0.3, 0.7)
        ens = qm.StateEnsemble({"a": rho, "b": rho})
        assert qm.holevo([0.4, 0.6], ens) == 0.0

    def test_orthogonal_pure_states_one_bit(self):
        ens = qm.StateEnsemble({"a": diag(1.0, 0.0), "b": diag(0.0, 1.0)})
        assert qm.holevo([0.5, 0.5], ens) == pytest.approx(1.0, abs=1e-12)

    def test_point_mass_zero(self):
        rng = np.random.default_rng(2)
        ens = qm.StateEnsemble({"a": qm.random_density(rng, 3),
                                "b": qm.random_density(rng, 3)})
        assert qm.holevo([1.0, 0.0], ens) == 0.0

    def test_rejects_non_distribution(self):
        ens = qm.StateEnsemble({"a": diag(1.0, 0.0), "b": diag(0.0, 1.0)})
        with pytest.raises(ValueError):
            qm.holevo([0.7, 0.7], ens)


class TestDivergences:
    def test_self_distance_zero(self):
        rng = np.random.default_rng(3)
        rho = qm.random_density(rng, 3)
        assert abs(qm.rel_entropy(rho, rho)) <= 1e-9
        assert abs(qm.renyi2(rho, rho)) <= 1e-9

    def test_disjoint_support_infinite(self):
        assert qm.rel_entropy(diag(1.0, 0.0), diag(0.0, 1.0)) == math.inf
        assert qm.renyi2(diag(1.0, 0.0), diag(0.0, 1.0)) == math.inf

    def test_frozen_scalar_values(self):
        rho, sig = diag(0.5, 0.5), diag(0.25, 0.75)
        # 0.5*log2(2) + 0.5*log2(2/3) and log2(1 + 1/3)
        assert qm.rel_entropy(rho, sig) == pytest.approx(
            0.20751874963942196, abs=1e-12)
        assert qm.renyi2(rho, sig) == pytest.approx(
            math.log2(4.0 / 3.0), abs=1e-12)
        assert qm.renyi2_exp(rho, sig) == pytest.approx(4.0 / 3.0, abs=1e-12)

    def test_ordering_and_pinsker_on_random_pairs(self):
        rng = np.random.default_rng(4)
        for i in range(200):
            d = 2 + i % 3
            rho, sig = qm.random_density(rng, d), qm.random_density(rng, d)
            dval = qm.rel_entropy(rho, sig)
            d2val = qm.renyi2(rho, sig)
            assert dval >= 0.0 and d2val >= 0.0
            assert dval <= d2val + 1e-7
            td = qm.trace_distance(rho, sig)
            assert td * td <= 2.0 * math.log(2.0) * dval + 1e-7

    def test_ordering_and_pinsker_near_singular_states(self):
        # tiny eigenvalues push the support threshold; the inequalities
        # must survive where they stay finite
        rng = np.random.default_rng(77)
        for i in range(60):
            d = 2 + i % 3
            eps = 10.0 ** -rng.uniform(6, 12)
            a = (qm.random_density(rng, d).matrix * eps
                 + (1 - eps) * qm.pure_state(rng.standard_normal(d)).matrix)
            b = (qm.random_density(rng, d).matrix * eps
                 + (1 - eps) * qm.pure_state(rng.standard_normal(d)).matrix)
            rho = qm.DensityOperator(a / a.trace())
            sig = qm.DensityOperator(b / b.trace())
            dval = qm.rel_entropy(rho, sig)
            d2val = qm.renyi2(rho, sig)
            if not (math.isfinite(dval) and math.isfinite(d2val)):
                continue
            assert dval <= d2val + 1e-7
            td = qm.trace_distance(rho, sig)
            assert td * td <= 2.0 * math.log(2.0) * dval + 1e-7

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            qm.rel_entropy(diag(1.0), diag(0.5, 0.5))


class TestDistances:
    def test_zero_and_maximal(self):
        assert qm.trace_distance(diag(0.5, 0.5), diag(0.5, 0.5)) == 0.0
        assert qm.trace_distance(diag(1.0, 0.0), diag(0.0, 1.0)) == pytest.approx(2.0)

    def test_trace_norm_matches_distance(self):
        rng = np.random.default_rng(5)
        a, b = qm.random_density(rng, 4), qm.random_density(rng, 4)
        h = qm.HermitianOperator(a.matrix - b.matrix)
        assert qm.trace_norm(h) == pytest.approx(qm.trace_distance(a, b), abs=1e-12)


class TestTensorAndEmbed:
    def test_tensor_of_mixed_qubits(self):
        half = qm.DensityOperator(np.eye(2) / 2)
        four = qm.tensor(half, half)
        assert four.dim == 4
        assert np.allclose(four.matrix, np.eye(4) / 4)

    def test_classical_embed(self):
        rho = qm.classical_embed([1 / 3] * 3)
        assert np.allclose(rho.matrix, np.eye(3) / 3)

    def test_tensor_trace_one(self):
        rng = np.random.default_rng(6)
        a, b = qm.random_density(rng, 2), qm.random_density(rng, 3)
        assert qm.tensor(a, b).matrix.trace().real == pytest.approx(1.0, abs=1e-12)


def test_eigendecomposition_residual():
    rng = np.random.default_rng(7)
    for d in (2, 3, 4, 8, 16):
        rho = qm.random_density(rng, d).matrix
        w, u = np.linalg.eigh(rho)
        resid = np.linalg.norm(rho - (u * w) @ u.conj().T)
        assert resid <= 1e-12 * d


class TestFileFormat:
    def test_roundtrip_exact(self, tmp_path):
        rng = np.random.default_rng(8)
        rho = qm.random_density(rng, 3)
        path = tmp_path / "rho.json"
        qm.save_density(path, rho)
        back = qm.load_density(path)
        assert (back.matrix == rho.matrix).all()

    def test_seventeen_significant_digits(self):
        rho = qm.DensityOperator(np.diag([1 / 3, 2 / 3]).astype(complex))
        text = qm.format_density(rho)
        assert "0.33333333333333331" in text

    def test_shape_mismatch_rejected(self):
        with pytest.raises(ValueError):
            qm.parse_density('{"dim": 3, "matrix": {"re": [[1.0]], "im": [[0.0]]}}')

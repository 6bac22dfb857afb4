import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pi3search.statevec import (
    MarkedSet,
    NormalizationError,
    StateVector,
    basis_state,
    inner,
    random_state,
    sample_measurement,
    sample_measurements,
    subspace_probability,
)


class TestBasisState:
    def test_dim4_index0(self):
        assert np.array_equal(basis_state(4, 0).amps, [1, 0, 0, 0])

    def test_dim2_index1(self):
        assert np.array_equal(basis_state(2, 1).amps, [0, 1])

    def test_dim6_index5(self):
        assert np.array_equal(basis_state(6, 5).amps, [0, 0, 0, 0, 0, 1])

    def test_unit_norm(self):
        assert basis_state(7, 3).norm() == 1.0

    @pytest.mark.parametrize("dim,index", [(4, 4), (4, -1), (1, 2)])
    def test_index_out_of_range(self, dim, index):
        with pytest.raises(ValueError):
            basis_state(dim, index)

    def test_bad_dim(self):
        with pytest.raises(ValueError):
            basis_state(0, 0)


class TestStateVector:
    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            StateVector(np.array([]))

    def test_rejects_2d(self):
        with pytest.raises(ValueError):
            StateVector(np.eye(2))

    def test_casts_to_complex(self):
        v = StateVector(np.array([1.0, 0.0]))
        assert v.amps.dtype == np.complex128

    def test_require_unit_raises(self):
        v = StateVector(np.array([0.5, 0.5]))
        with pytest.raises(NormalizationError):
            v.require_unit()


class TestInner:
    def test_orthonormality(self):
        e0, e1 = basis_state(4, 0), basis_state(4, 1)
        assert inner(e0, e0) == 1
        assert inner(e0, e1) == 0

    def test_uniform_overlap_with_e0(self):
        # two-qubit Hadamard column evaluated by hand: every entry 1/2
        w0 = StateVector(np.full(4, 0.5))
        assert inner(w0, basis_state(4, 0)) == pytest.approx(0.5, abs=1e-12)

    def test_conjugate_linear_first_argument(self):
        a = random_state(6, 1)
        b = random_state(6, 2)
        scaled = StateVector(a.amps * np.exp(0.7j) * 1.0)
        assert inner(scaled, b) == pytest.approx(np.exp(-0.7j) * inner(a, b), abs=1e-12)

    def test_self_inner_unit(self):
        v = random_state(17, 3)
        assert abs(inner(v, v) - 1) < 1e-10

    def test_dim_mismatch(self):
        with pytest.raises(ValueError):
            inner(basis_state(2, 0), basis_state(3, 0))


class TestMarkedSet:
    def test_sorted_and_deduped(self):
        t = MarkedSet(8, (5, 1, 5, 3))
        assert t.indices == (1, 3, 5)
        assert len(t) == 3

    def test_bounds_checked(self):
        with pytest.raises(ValueError):
            MarkedSet(4, (4,))
        with pytest.raises(ValueError):
            MarkedSet(4, (-1,))

    def test_empty_is_legal(self):
        t = MarkedSet(4)
        assert t.count == 0
        assert t.epsilon_eff == 1.0

    def test_epsilon_eff(self):
        assert MarkedSet(16, tuple(range(12))).epsilon_eff == 0.25
        assert MarkedSet.full(10).epsilon_eff == 0.0

    def test_epsilon_eff_exact_product_power_of_two(self):
        for n in (16, 64, 1024):
            for k in range(0, n + 1, max(1, n // 13)):
                t = MarkedSet(n, tuple(range(k)))
                assert t.epsilon_eff * n == float(n - k)

    def test_epsilon_eff_recovers_count_general_n(self):
        # for some (k, n) no double has a bit-exact product (e.g. 58/100);
        # the ulp nudge still guarantees round-trip recovery within half an ulp
        for n in (49, 100, 300):
            for k in range(n + 1):
                t = MarkedSet(n, tuple(range(k)))
                prod = t.epsilon_eff * n
                assert round(prod) == n - k
                assert abs(prod - (n - k)) <= np.spacing(float(max(n - k, 1)))

    def test_contains(self):
        t = MarkedSet(8, (1, 4, 6))
        assert 4 in t and 0 not in t and 7 not in t

    def test_complement(self):
        t = MarkedSet(5, (0, 3))
        assert t.complement().indices == (1, 2, 4)

    def test_from_predicate(self):
        t = MarkedSet.from_predicate(8, lambda x: x % 2 == 0)
        assert t.indices == (0, 2, 4, 6)


class TestSubspaceProbability:
    def test_uniform_three_quarters(self):
        v = StateVector(np.full(4, 0.5))
        assert subspace_probability(v, MarkedSet(4, (0, 1, 2))) == pytest.approx(0.75, abs=1e-12)

    def test_empty_subspace(self):
        assert subspace_probability(basis_state(3, 0), MarkedSet(3)) == 0.0

    def test_uniform_dim16_twelve_indices(self):
        v = StateVector(np.full(16, 0.25))
        t = MarkedSet(16, tuple(range(12)))
        assert subspace_probability(v, t) == pytest.approx(0.75, abs=1e-12)
        assert t.epsilon_eff == 0.25

    def test_dim_mismatch(self):
        with pytest.raises(ValueError):
            subspace_probability(basis_state(4, 0), MarkedSet(8, (0,)))

    @given(st.integers(min_value=1, max_value=64), st.integers(min_value=0, max_value=2 ** 31))
    @settings(max_examples=30, deadline=None)
    def test_complement_sums_to_one(self, dim, seed):
        rng = np.random.default_rng(seed)
        v = random_state(dim, rng)
        t = MarkedSet(dim, rng.permutation(dim)[: int(rng.integers(0, dim + 1))])
        total = subspace_probability(v, t) + subspace_probability(v, t.complement())
        assert total == pytest.approx(1.0, abs=1e-10)

    @given(st.integers(min_value=1, max_value=64), st.integers(min_value=0, max_value=2 ** 31))
    @settings(max_examples=30, deadline=None)
    def test_parseval(self, dim, seed):
        v = random_state(dim, seed)
        assert subspace_probability(v, MarkedSet.full(dim)) == pytest.approx(1.0, abs=1e-10)


class TestSampling:
    def test_deterministic_outcome(self):
        for seed in (0, 1, 987654):
            assert sample_measurement(basis_state(8, 3), seed) == 3

    def test_same_seed_same_outcome(self):
        v = random_state(32, 5)
        assert sample_measurement(v, 42) == sample_measurement(v, 42)

    def test_uniform_frequencies(self):
        v = StateVector(np.full(2, 1 / np.sqrt(2)))
        shots = 10 ** 6
        hits = np.sum(sample_measurements(v, shots, 7) == 0)
        sigma = 0.0005  # sqrt(0.25 / 1e6)
        assert abs(hits / shots - 0.5) < 3 * sigma

    def test_rare_outcome_frequency(self):
        v = StateVector(np.array([np.sqrt(0.992), np.sqrt(0.008)]))
        shots = 10 ** 6
        fails = np.sum(sample_measurements(v, shots, 11) == 1)
        sigma = np.sqrt(0.008 * 0.992 / shots)
        assert abs(fails / shots - 0.008) < 3 * sigma

    def test_all_probable_indices_within_4_sigma(self):
        v = random_state(8, 13)
        shots = 10 ** 5
        counts = np.bincount(sample_measurements(v, shots, 17), minlength=8)
        for i, p in enumerate(v.probabilities()):
            if p < 1e-3:
                continue
            sigma = np.sqrt(p * (1 - p) / shots)
            assert abs(counts[i] / shots - p) < 4 * sigma

    def test_rejects_unnormalized(self):
        v = StateVector(np.array([1.0, 1.0]))
        with pytest.raises(NormalizationError):
            sample_measurement(v, 0)
        with pytest.raises(NormalizationError):
            sample_measurements(v, 10, 0)

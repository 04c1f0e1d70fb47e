import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from factorsearch.algorithms import (
    NoiseModel,
    assembly,
    factorized_search,
    factorized_search_with_noise,
    grover_iteration_count,
    grover_search,
    grover_success_probability,
)
from factorsearch.errors import InvalidArgumentError, RetryExhaustedError
from factorsearch.oracles import QueryCounter
from factorsearch.statevec import LabelString


def brute_force_iteration_count(N):
    """Argmax of the closed-form success probability over the first period."""
    theta = math.asin(1 / math.sqrt(N))
    period = int(math.pi / (2 * theta)) + 1
    return max(range(period), key=lambda k: math.sin((2 * k + 1) * theta) ** 2)


class TestGroverFormulas:
    @pytest.mark.parametrize("N, k", [(4, 1), (16, 3), (256, 12), (65536, 201)])
    def test_iteration_count(self, N, k):
        assert grover_iteration_count(N) == k

    @pytest.mark.parametrize("N", [4, 16, 64, 256, 1024, 4096, 65536])
    def test_iteration_count_maximizes_probability(self, N):
        assert grover_iteration_count(N) == brute_force_iteration_count(N)

    def test_success_probability_values(self):
        assert grover_success_probability(4, 1) == pytest.approx(1.0, abs=1e-15)
        assert grover_success_probability(16, 3) == pytest.approx(0.9613189697265625, abs=1e-12)
        assert grover_success_probability(16, 0) == pytest.approx(1 / 16, abs=1e-15)

    def test_rejects_small_databases(self):
        with pytest.raises(InvalidArgumentError):
            grover_iteration_count(2)


class TestGroverSearch:
    @pytest.mark.parametrize("target", "0123")
    def test_one_of_four_with_certainty(self, target):
        out = grover_search(1, target, k=1, rng=np.random.default_rng(0))
        assert out.target_probability == pytest.approx(1.0, abs=1e-12)
        assert out.success and out.queries == QueryCounter(global_quantum=1)

    def test_probability_matches_closed_form(self):
        out = grover_search(2, "21", k=3, rng=np.random.default_rng(0))
        assert abs(out.target_probability - grover_success_probability(16, 3)) < 1e-9
        assert out.queries.global_quantum == 3

    def test_zero_iterations(self):
        out = grover_search(2, "21", k=0, rng=np.random.default_rng(0))
        assert out.target_probability == pytest.approx(1 / 16)
        assert out.queries.global_quantum == 0

    def test_default_iterations_and_readout(self):
        out = grover_search(3, "123", rng=np.random.default_rng(1))
        assert out.queries.global_quantum == grover_iteration_count(64)
        assert len(out.steps) == 3 and out.steps[-1].nonzero_count == 1

    @pytest.mark.parametrize("N", [4, 16, 64, 256])
    def test_amplitude_law(self, N):
        n = int(round(math.log(N, 4)))
        for k in range(2 * grover_iteration_count(N) + 1):
            out = grover_search(n, "3" * n, k=k, rng=np.random.default_rng(k))
            assert abs(out.target_probability - grover_success_probability(N, k)) < 1e-9


class TestFactorizedSearch:
    def test_single_letter(self):
        out = factorized_search(1, "3")
        assert str(out.found) == "3" and out.queries == QueryCounter(letter_quantum=1)

    def test_four_letters_trace(self):
        out = factorized_search(4, "1023", order=(1, 2, 3, 4))
        assert str(out.found) == "1023" and out.success
        assert out.queries == QueryCounter(letter_quantum=4)
        assert [s.nonzero_count for s in out.steps] == [64, 16, 4, 1]
        assert [s.max_amplitude for s in out.steps] == pytest.approx([0.125, 0.25, 0.5, 1.0], abs=1e-12)

    def test_every_order_same_outcome(self):
        outcomes = [factorized_search(3, "210", order) for order in itertools.permutations((1, 2, 3))]
        assert {str(o.found) for o in outcomes} == {"210"}
        assert {o.queries.letter_quantum for o in outcomes} == {3}

    def test_deterministic(self):
        assert factorized_search(4, "3102").steps == factorized_search(4, "3102").steps

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_order_invariance_exhaustive(self, n):
        for index in range(4**n):
            target = LabelString.from_index(index, n)
            for order in itertools.permutations(range(1, n + 1)):
                out = factorized_search(n, target, order)
                assert out.found == target and out.queries.letter_quantum == n

    def test_step_amplitudes_double(self):
        n = 5

        def check(j, state):
            nz = state.amplitudes[state.amplitudes != 0]
            assert nz.size == 4 ** (n - j)
            assert np.max(np.abs(nz - 2.0 ** (j - n))) < 1e-10

        factorized_search(n, "01230", observer=check)

    def test_bad_order(self):
        with pytest.raises(InvalidArgumentError):
            factorized_search(3, "000", order=(1, 1, 2))


class TestNoisySearch:
    def test_zero_noise_matches_exact(self):
        for seed in range(20):
            rng = np.random.default_rng(seed)
            noisy = factorized_search_with_noise(4, "3102", NoiseModel(0.0), rng)
            exact = factorized_search(4, "3102")
            assert noisy.steps == exact.steps
            assert noisy.restarts == 0
            assert noisy.queries == QueryCounter(letter_quantum=4, classical=4)

    def test_zero_noise_bitwise_amplitudes(self):
        noisy = factorized_search_with_noise(3, "123", NoiseModel(0.0), np.random.default_rng(3), keep_amplitudes=True)
        exact = factorized_search(3, "123", keep_amplitudes=True)
        for a, b in zip(noisy.steps, exact.steps):
            assert a.amplitudes == b.amplitudes

    @settings(max_examples=100, deadline=None)
    @given(seed=st.integers(0, 2**63), target=st.integers(0, 63))
    def test_half_noise_always_terminates_correctly(self, seed, target):
        label = LabelString.from_index(target, 3)
        out = factorized_search_with_noise(3, label, NoiseModel(0.5), np.random.default_rng(seed))
        assert out.found == label and out.restarts >= 0
        assert out.queries.letter_quantum == 3 + out.restarts
        assert out.queries.classical == out.queries.letter_quantum

    def test_restart_steps_are_flagged(self):
        rng = np.random.default_rng(11)
        out = factorized_search_with_noise(4, "0000", NoiseModel(0.6), rng)
        assert out.restarts > 0
        assert sum(s.was_restart for s in out.steps) == out.restarts
        assert sum(s.measured != 0 for s in out.steps) == out.restarts

    def test_mean_queries_geometric(self):
        queries = [
            factorized_search_with_noise(6, "012301", NoiseModel(0.2), np.random.default_rng([5, t])).queries.letter_quantum
            for t in range(2000)
        ]
        assert abs(np.mean(queries) - 7.5) < 0.05 * 7.5

    def test_retry_ceiling(self):
        with pytest.raises(RetryExhaustedError):
            factorized_search_with_noise(4, "0000", NoiseModel(0.99), np.random.default_rng(0), max_retries=3)

    def test_noise_model_range(self):
        with pytest.raises(InvalidArgumentError):
            NoiseModel(1.0)


class TestAssembly:
    def test_single_letter(self):
        out = assembly("0")
        assert str(out.found) == "0" and out.queries == QueryCounter(letter_quantum=1)

    def test_four_letters_small_registers(self):
        out = assembly("3120")
        assert str(out.found) == "3120" and out.queries.letter_quantum == 4
        assert [s.register_size for s in out.steps] == [4, 4, 4, 4]

    @pytest.mark.parametrize("n", [1, 5, 16])
    def test_query_count(self, n):
        rng = np.random.default_rng(n)
        target = LabelString(tuple(int(v) for v in rng.integers(4, size=n)))
        out = assembly(target)
        assert out.found == target and out.queries.letter_quantum == n

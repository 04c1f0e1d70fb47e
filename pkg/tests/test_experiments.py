import math

import pytest

from factorsearch.errors import CapacityError, InvalidArgumentError
from factorsearch.experiments import ExperimentConfig, noise_sweep, run_comparison, sweep_grover


class TestComparison:
    def test_rows(self):
        rows = run_comparison(range(1, 9), seed=3)
        assert [r.n for r in rows] == list(range(1, 9))
        for r in rows:
            assert r.quantum_factorized_queries == r.n
            assert r.classical_sorted_queries == 2 * r.n
            assert r.ratio_sorted_over_quantum == 2
            assert r.classical_unsorted_expected == (4**r.n + 1) / 2
            assert r.sorting_cost_formula == 4**r.n * 2 * r.n

    def test_known_rows(self):
        one, four, eight = (run_comparison([n])[0] for n in (1, 4, 8))
        assert (one.quantum_factorized_queries, one.classical_sorted_queries) == (1, 2)
        assert (one.grover_queries, one.classical_unsorted_expected) == (1, 2.5)
        assert (four.quantum_factorized_queries, four.classical_sorted_queries) == (4, 8)
        assert eight.grover_queries == round(math.pi / (4 * math.asin(4**-4)) - 0.5) == 201

    def test_capacity(self):
        with pytest.raises(CapacityError):
            run_comparison([11])


class TestGroverSweep:
    def test_points(self):
        one = sweep_grover(1, 1)
        assert one[1].measured == pytest.approx(1.0, abs=1e-12) and one[1].analytic == pytest.approx(1.0)
        two = sweep_grover(2, 3)
        assert two[0].measured == pytest.approx(0.0625) and two[0].analytic == pytest.approx(0.0625)
        assert two[3].measured == pytest.approx(0.9613, abs=1e-4)

    @pytest.mark.parametrize("n", range(1, 7))
    def test_agreement(self, n):
        points = sweep_grover(n)
        assert max(abs(p.measured - p.analytic) for p in points) < 1e-9

    def test_sweep_capacity(self):
        with pytest.raises(CapacityError):
            sweep_grover(7)


class TestNoiseSweep:
    def test_zero_noise(self):
        (agg,) = noise_sweep(4, [0.0], trials=50, seed=1)
        assert agg.mean_quantum_queries == 4 and agg.mean_restarts == 0
        assert agg.success_rate == 1.0 and agg.ci95_half_width == 0

    def test_reproducible_and_order_free(self):
        a = noise_sweep(3, [0.3, 0.1], trials=200, seed=9)
        b = noise_sweep(3, [0.1, 0.3], trials=200, seed=9)
        assert a[0] == b[1] and a[1] == b[0]

    def test_expected_queries_within_ci(self):
        (agg,) = noise_sweep(4, [0.5], trials=2000, seed=2)
        assert agg.success_rate == 1.0
        assert abs(agg.mean_quantum_queries - agg.expected_quantum_queries) < 4 * agg.ci95_half_width

    def test_retry_exhaustion_is_counted(self):
        (agg,) = noise_sweep(4, [0.9], trials=20, seed=0, max_retries=2)
        assert agg.failures > 0 and agg.successes + agg.failures == 20

    def test_rejects_high_noise(self):
        with pytest.raises(InvalidArgumentError):
            noise_sweep(2, [0.95], trials=1)


def test_config_validation():
    with pytest.raises(InvalidArgumentError):
        ExperimentConfig("shor")
    with pytest.raises(InvalidArgumentError):
        ExperimentConfig("grover", seed=2**64)

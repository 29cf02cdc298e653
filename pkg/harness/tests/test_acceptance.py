"""Acceptance checks for the decode harness.

Each test pins its shot count and sampler seed so the verdicts are
deterministic for a given stim release. All circuits come from the
scheduler CLI through files only (see conftest.emit).
"""

import pytest

from qec_harness.ler import estimate_ler


@pytest.mark.criterion(
    "idle-noise d=7: m=1 has a higher logical error rate than m=27 beyond 2 sigma"
)
def test_idle_noise_rate_grows_when_ancillas_are_scarce(idle_d7_files):
    few = estimate_ler(idle_d7_files[1], shots=100_000, seed=7)
    many = estimate_ler(idle_d7_files[27], shots=100_000, seed=7)
    # Fewer ancillas stretch the schedule, so idling noise accumulates.
    assert few.rate - 2 * few.stderr > many.rate + 2 * many.stderr


@pytest.mark.criterion(
    "cnot-noise d=7: logical error rate varies by at most 3x over m in {1,7,14,27}"
)
def test_cnot_noise_rate_is_insensitive_to_ancilla_count(cnot_d7_files):
    records = [
        estimate_ler(cnot_d7_files[m], shots=100_000, seed=11)
        for m in (1, 7, 14, 27)
    ]
    rates = [r.rate for r in records]
    assert all(rate > 0 for rate in rates)
    assert max(rates) / min(rates) <= 3.0


@pytest.mark.criterion(
    "58-qubit budget: d=5 with m=20 beats d=3 with m=12 at standard noise"
)
def test_fixed_budget_prefers_higher_distance(small_files, budget_d5_file):
    d3 = estimate_ler(small_files["standard"], shots=100_000, seed=7)
    d5 = estimate_ler(budget_d5_file, shots=100_000, seed=7)
    assert d3.rate > 0
    assert d5.rate > 0
    assert d5.rate < d3.rate

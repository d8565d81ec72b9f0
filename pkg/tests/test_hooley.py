import math

import pytest

from conftest import brute_divisors
from hyplab import arith, hooley, specs
from hyplab.errors import PreconditionError, WorkCapError


def test_divisors_examples():
    assert hooley.divisors(1).divisors == [1]
    assert hooley.divisors(12).divisors == [1, 2, 3, 4, 6, 12]
    for n in (2, 30, 97, 360, 1024):
        assert hooley.divisors(n).divisors == brute_divisors(n)


def test_divisor_count_is_tau():
    for n in range(1, 1000):
        assert len(hooley.divisors(n).divisors) == arith.evaluate_point(
            specs.tau_m(2), n
        )


@pytest.mark.parametrize(
    "n,value", [(1, 1), (2, 2), (6, 2), (11, 1), (12, 3), (24, 4), (97, 1)]
)
def test_delta2_small_values(n, value):
    dv = hooley.delta_r(n, 2)
    assert dv.value == value
    assert dv.value == hooley.delta_r_grid_oracle(n, 2, 1e-4)


def test_delta_witness_recounts():
    for n in (1, 2, 12, 60, 360, 720, 1260):
        for r in (2, 3):
            dv = hooley.delta_r(n, r)
            assert len(dv.witness) == r - 1
            assert hooley.window_tuple_count(n, dv.witness) == dv.value


def test_delta12_witness_location():
    dv = hooley.delta_r(12, 2)
    # maximizing window starts just below the divisor 2, covering {2, 3, 4}
    assert dv.witness[0] == pytest.approx(math.log(2), abs=1e-9)


def test_grid_oracle_examples():
    assert hooley.delta_r_grid_oracle(1, 2, 1e-4) == 1
    assert hooley.delta_r_grid_oracle(1, 3, 1e-4) == 1
    assert hooley.delta_r_grid_oracle(12, 2, 1e-4) == 3


def test_grid_oracle_preconditions():
    with pytest.raises(PreconditionError):
        hooley.delta_r_grid_oracle(12, 2, 1e-2)
    with pytest.raises(PreconditionError):
        hooley.delta_r_grid_oracle(12, 4, 1e-4)


def test_delta_r_preconditions():
    with pytest.raises(PreconditionError):
        hooley.delta_r(12, 5)
    with pytest.raises(WorkCapError):
        hooley.delta_r(720720, 4, work_cap=100)


def test_delta_upper_and_monotonicity_bounds():
    deltas2 = dict(hooley.iter_delta_values(1, 10_000, 2))
    for n, d2 in deltas2.items():
        assert 1 <= d2 <= arith.evaluate_point(specs.tau_m(2), n), n
    for n in range(1, 2001):
        d3 = hooley.delta_r(n, 3).value
        d4 = hooley.delta_r(n, 4).value
        assert d3 >= deltas2[n]
        assert d4 >= d3


def test_dyadic_tau_sum_examples():
    assert hooley.dyadic_divisor_tau_sum(12, 1, 2) == 2
    assert hooley.dyadic_divisor_tau_sum(1, 3, 1) == 0
    got = hooley.dyadic_divisor_tau_sum(12, 2, 2)
    oracle = sum(
        len(brute_divisors(d)) for d in brute_divisors(12) if 2 < d <= 4
    )
    assert got == oracle == 5


def test_dyadic_bound_check_examples():
    lhs, rhs, holds = hooley.dyadic_tau_delta_check(12, 1, 2)
    assert (lhs, rhs, holds) == (2, 3.0, True)
    lhs, rhs, holds = hooley.dyadic_tau_delta_check(1, 2, 1)
    assert lhs == 0 and holds


def test_delta_short_sum_examples():
    assert hooley.delta_short_sum(2, 0, 1) == 1
    assert hooley.delta_short_sum(2, 10, 2) == 4  # 11 is prime, Delta(12) = 3


def test_delta_weighted_prefix_frozen():
    got = hooley.delta_weighted_prefix(2, 100)
    oracle = math.fsum(
        hooley.delta_r_grid_oracle(n, 2, 1e-4) / n for n in range(1, 101)
    )
    assert got == pytest.approx(oracle, rel=1e-12)
    assert got == pytest.approx(8.28728238460653, rel=1e-12)


def test_iter_delta_values_matches_pointwise():
    seq = dict(hooley.iter_delta_values(1, 300, 2))
    for n in (1, 2, 100, 255, 300):
        assert seq[n] == hooley.delta_r(n, 2).value


def test_delta_highly_composite_spot():
    # 720720 has 240 divisors; solver and oracle still agree
    dv = hooley.delta_r(720720, 2)
    assert dv.value == hooley.delta_r_grid_oracle(720720, 2, 1e-4)
    assert hooley.window_tuple_count(720720, dv.witness) == dv.value


def test_weighted_prefix_ratio_bounded():
    # ratio of the weighted prefix to its log-power envelope stays far below
    # one at desk scale; frozen guard from a first oracle run
    from hyplab.asymptotics import hooley_mean_exponent

    ratios = []
    for x in (1000, 10_000, 100_000):
        v = hooley.delta_weighted_prefix(2, x)
        env = math.log(x) ** (1.0 + hooley_mean_exponent(x, 2))
        ratios.append(v / env)
    assert all(0 < q < 1e-30 for q in ratios)

import math

import pytest

from arithsum.dsums import (
    DiophantineInstance,
    WeightSpec,
    _divisor_pair_bruteforce,
    alternating_weight,
    divisor_pair_sum_analytic,
    enumerate_solutions,
    reciprocal_weight,
    sum_diff_analytic,
    sum_diff_bruteforce,
    sum_squares_analytic,
    sum_squares_bruteforce,
    unit_sum_diff,
    unit_sum_squares,
    unit_weight,
    weighted_finite_analytic,
    weighted_infinite_analytic,
)
from arithsum.indicators import q_bruteforce

WEIGHTS = (unit_weight(), alternating_weight(), reciprocal_weight())


def test_enumerate_sum_kind():
    sols = enumerate_solutions(DiophantineInstance(25, 1, 1, "sum"))
    assert sols.pairs == ((3, 4), (4, 3))
    assert sols.tail_bound == 0.0
    sols = enumerate_solutions(DiophantineInstance(8, 1, 1, "sum"))
    assert sols.pairs == ((2, 2),)
    assert enumerate_solutions(DiophantineInstance(7, 1, 1, "sum")).pairs == ()


def test_enumerate_difference_kind_pell():
    sols = enumerate_solutions(DiophantineInstance(1, 2, 1, "difference"), 50)
    assert sols.pairs == ((2, 3), (12, 17))
    sols = enumerate_solutions(DiophantineInstance(1, 2, 1, "difference"), 99)
    assert sols.pairs == ((2, 3), (12, 17), (70, 99))
    assert sols.tail_bound == pytest.approx(1.0 / (3.0 * 99**3))
    with pytest.raises(ValueError):
        enumerate_solutions(DiophantineInstance(1, 2, 1, "difference"))


def test_every_enumerated_pair_satisfies_equation():
    for N in range(1, 40):
        for d in (1, 2, 3):
            for k in (1, 2, 3):
                for a, b in enumerate_solutions(DiophantineInstance(N, d, k, "sum")).pairs:
                    assert d * a * a + k * b * b == N
                for a, b in enumerate_solutions(
                    DiophantineInstance(N, d, k, "difference"), 200
                ).pairs:
                    assert k * b * b - d * a * a == N


def test_bruteforce_examples():
    assert sum_squares_bruteforce(
        DiophantineInstance(25, 1, 1, "sum"), unit_weight()
    ) == pytest.approx(1.0 / 4**4 + 1.0 / 3**4)
    assert sum_squares_bruteforce(DiophantineInstance(7, 1, 1, "sum"), unit_weight()) == 0.0
    ident = WeightSpec(lambda a: float(a), 100.0, "identity")
    assert sum_squares_bruteforce(DiophantineInstance(8, 1, 1, "sum"), ident) == pytest.approx(
        0.125
    )


def test_diff_bruteforce_examples():
    val, _ = sum_diff_bruteforce(DiophantineInstance(4, 1, 1, "difference"), unit_weight(), 100)
    assert val == 0.0
    val, _ = sum_diff_bruteforce(DiophantineInstance(3, 1, 1, "difference"), unit_weight(), 100)
    assert val == pytest.approx(1.0 / 16.0)
    val, tail = sum_diff_bruteforce(
        DiophantineInstance(1, 2, 1, "difference"), unit_weight(), 10**4
    )
    assert val == pytest.approx(1.0 / 3**4 + 1.0 / 17**4 + 1.0 / 99**4 + 1.0 / 577**4, rel=1e-12)
    assert tail < 1.0 / (3.0 * 10**12) * 1.001


def test_sum_squares_analytic_examples():
    inst = DiophantineInstance(25, 1, 1, "sum")
    ev = sum_squares_analytic(unit_weight(), inst, 1.0)
    assert ev.value == pytest.approx(0.016251929012345678, abs=1e-8)
    # boundary case N = d m^2 with no interior solutions
    inst = DiophantineInstance(4, 1, 1, "sum")
    ev = sum_squares_analytic(unit_weight(), inst, 1.0)
    assert abs(ev.value) < 1e-8
    inst = DiophantineInstance(8, 1, 1, "sum")
    ev = sum_squares_analytic(alternating_weight(), inst, 1.0)
    assert ev.value == pytest.approx(0.0625, abs=1e-8)


def test_sum_diff_analytic_examples():
    inst = DiophantineInstance(3, 1, 1, "difference")
    ev = sum_diff_analytic(unit_weight(), inst, 1.0)
    assert ev.value == pytest.approx(1.0 / 16.0, abs=1e-8)
    inst = DiophantineInstance(1, 2, 1, "difference")
    ev = sum_diff_analytic(unit_weight(), inst, 1.0)
    brute, tail = sum_diff_bruteforce(inst, unit_weight(), 10**4)
    assert abs(ev.value - brute) < 1e-6 + ev.error_estimate + tail
    zero = WeightSpec(lambda a: 0.0, 0.0, "zero")
    assert sum_diff_analytic(zero, inst, 1.0).value == 0.0


@pytest.mark.parametrize("d", [1, 2, 3])
@pytest.mark.parametrize("k", [1, 2, 3])
def test_sum_kind_vs_enumeration_grid(d, k):
    for N in range(1, 41):
        inst = DiophantineInstance(N, d, k, "sum")
        for g in WEIGHTS:
            ev = sum_squares_analytic(g, inst, 1.0)
            brute = sum_squares_bruteforce(inst, g) / (k * k)
            assert abs(ev.value - brute) < 1e-6 + ev.error_estimate, (N, d, k, g.label)


@pytest.mark.parametrize("d", [1, 2])
@pytest.mark.parametrize("k", [1, 3])
def test_difference_kind_vs_enumeration_grid(d, k):
    for N in range(1, 21):
        inst = DiophantineInstance(N, d, k, "difference")
        for g in WEIGHTS:
            ev = sum_diff_analytic(g, inst, 1.0)
            brute, tail = sum_diff_bruteforce(inst, g, 10**4)
            assert abs(ev.value - brute / (k * k)) < 1e-6 + ev.error_estimate + tail / (k * k)


def test_scaling_consistency():
    # multiplying the analytic output by k^2 reproduces the raw sum
    inst = DiophantineInstance(45, 1, 2, "sum")
    ev = sum_squares_analytic(unit_weight(), inst, 1.0)
    raw = sum_squares_bruteforce(inst, unit_weight())
    assert ev.value * 4 == pytest.approx(raw, abs=1e-7)


def test_starred_boundary_rule():
    # every N = d m^2 <= 60: the analytic value still matches enumeration
    for d in (1, 2, 3):
        m = 1
        while d * m * m <= 60:
            N = d * m * m
            inst = DiophantineInstance(N, d, 1, "sum")
            ev = sum_squares_analytic(unit_weight(), inst, 1.0)
            brute = sum_squares_bruteforce(inst, unit_weight())
            assert abs(ev.value - brute) < 1e-6 + ev.error_estimate
            m += 1


def test_unit_forms_match_block_forms():
    # two independent series organizations of the same quantity
    for (N, d, k) in [(25, 1, 1), (25, 2, 1), (45, 1, 2), (100, 3, 2), (9, 1, 1)]:
        inst = DiophantineInstance(N, d, k, "sum")
        a = unit_sum_squares(inst, 1.0)
        b = sum_squares_analytic(unit_weight(), inst, 1.0)
        assert abs(a.value - b.value) < a.error_estimate + b.error_estimate
    for (N, d, k) in [(3, 1, 1), (1, 2, 1), (7, 3, 2), (23, 1, 3)]:
        inst = DiophantineInstance(N, d, k, "difference")
        a = unit_sum_diff(inst, 1.0)
        b = sum_diff_analytic(unit_weight(), inst, 1.0)
        assert abs(a.value - b.value) < a.error_estimate + b.error_estimate


def test_unit_sum_examples():
    inst = DiophantineInstance(25, 1, 1, "sum")
    assert unit_sum_squares(inst, 1.0).value == pytest.approx(0.016251929012, abs=1e-6)
    inst = DiophantineInstance(25, 2, 1, "sum")
    want = sum_squares_bruteforce(inst, unit_weight())
    assert unit_sum_squares(inst, 1.0).value == pytest.approx(want, abs=1e-6)
    inst = DiophantineInstance(9, 1, 1, "sum")
    want = sum_squares_bruteforce(inst, unit_weight())
    assert abs(unit_sum_squares(inst, 1.0).value - want) < 1e-6 + 1e-5


def test_unit_diff_examples():
    inst = DiophantineInstance(3, 1, 1, "difference")
    assert unit_sum_diff(inst, 1.0).value == pytest.approx(1.0 / 16.0, abs=1e-5)
    inst = DiophantineInstance(4, 1, 1, "difference")
    assert abs(unit_sum_diff(inst, 1.0).value) < 1e-5
    inst = DiophantineInstance(1, 2, 1, "difference")
    brute, tail = sum_diff_bruteforce(inst, unit_weight(), 10**4)
    ev = unit_sum_diff(inst, 1.0)
    assert abs(ev.value - brute) < 1e-6 + ev.error_estimate + tail


def test_weight_bound_spot_check():
    with pytest.raises(ValueError):
        WeightSpec(lambda a: float(a), 2.0, "unbounded")
    with pytest.raises(ValueError):
        WeightSpec(lambda a: 1.0, -1.0, "negative-bound")
    WeightSpec(lambda a: math.sin(a), 1.0, "sine")  # fine


def test_kind_mismatch_errors():
    sum_inst = DiophantineInstance(5, 1, 1, "sum")
    diff_inst = DiophantineInstance(5, 1, 1, "difference")
    with pytest.raises(ValueError):
        sum_squares_analytic(unit_weight(), diff_inst)
    with pytest.raises(ValueError):
        sum_diff_analytic(unit_weight(), sum_inst)
    with pytest.raises(ValueError):
        unit_sum_squares(diff_inst)
    with pytest.raises(ValueError):
        unit_sum_diff(sum_inst)
    with pytest.raises(ValueError):
        DiophantineInstance(5, 1, 1, "product")


def test_divisor_pair_examples():
    ev = divisor_pair_sum_analytic(unit_weight(), 6, 1.0)
    assert ev.value == pytest.approx(1.0 / 7**4 + 1.0 / 5**4, abs=1e-9)
    ev = divisor_pair_sum_analytic(unit_weight(), 4, 1.0)
    assert ev.value == pytest.approx(1.0 / 5**4, abs=1e-9)
    zero = WeightSpec(lambda a: 0.0, 0.0, "zero")
    assert divisor_pair_sum_analytic(zero, 17, 1.0).value == 0.0


def test_divisor_pair_grid():
    for N in range(1, 31):
        for g in (unit_weight(), reciprocal_weight()):
            ev = divisor_pair_sum_analytic(g, N, 1.0)
            assert abs(ev.value - _divisor_pair_bruteforce(g, N)) < 1e-6


def finite_oracle(h, k, N):
    return math.fsum(h(a) * q_bruteforce(k, 1, N - a) / (N - a) ** 2 for a in range(1, N))


def test_weighted_finite_examples():
    ev = weighted_finite_analytic(unit_weight(), 1, 5, 1.0)
    assert ev.value == pytest.approx(1.0625, abs=1e-8)
    zero = WeightSpec(lambda a: 0.0, 0.0, "zero")
    assert weighted_finite_analytic(zero, 1, 9, 1.0).value == 0.0
    ev = weighted_finite_analytic(unit_weight(), 2, 3, 1.0)
    assert ev.value == pytest.approx(0.25, abs=1e-8)


def test_weighted_finite_grid():
    h = WeightSpec(lambda a: 0.5**a, 1.0, "geometric")
    for k in (1, 2):
        for N in (2, 7, 12, 20):
            ev = weighted_finite_analytic(h, k, N, 1.0)
            assert abs(ev.value - finite_oracle(h.weight, k, N)) < 1e-8


def test_weighted_infinite_examples():
    h = WeightSpec(lambda a: 0.5**a, 1.0, "geometric")
    ev = weighted_infinite_analytic(h, 1, 1, 1.0)
    oracle = math.fsum(0.5**a * q_bruteforce(1, 1, 1 + a) / (1 + a) ** 2 for a in range(1, 800))
    assert abs(ev.value - oracle) < 1e-6
    hq = WeightSpec(lambda a: float(q_bruteforce(1, 1, a)), 1.0, "squares")
    ev = weighted_infinite_analytic(hq, 1, 3, 1.0, a_horizon=600)
    oracle = math.fsum(
        q_bruteforce(1, 1, a) * q_bruteforce(1, 1, 3 + a) / (3 + a) ** 2
        for a in range(1, 10**5)
    )
    assert abs(ev.value - oracle) < 1e-5 + ev.error_estimate
    zero = WeightSpec(lambda a: 0.0, 0.0, "zero")
    assert weighted_infinite_analytic(zero, 1, 2, 1.0).value == 0.0

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from arithsum.indicators import (
    AmbiguousClassification,
    BlockTables,
    CoefficientTable,
    block_value,
    classify_unit,
    integer_root,
    q_analytic,
    q_bruteforce,
    q_classify,
    q_general_analytic,
    q_shifted_analytic,
    zero_identity_residual,
)


def test_integer_root():
    assert integer_root(0, 3) == 0
    assert integer_root(1, 7) == 1
    assert integer_root(63, 2) == 7
    assert integer_root(64, 2) == 8
    assert integer_root(2**40, 4) == 2**10
    assert integer_root(2**40 - 1, 4) == 2**10 - 1
    with pytest.raises(ValueError):
        integer_root(-1, 2)


def test_q_bruteforce_examples():
    assert q_bruteforce(1, 1, 4) == 1
    assert q_bruteforce(2, 1, 8) == 1
    assert q_bruteforce(3, 2, 5) == 0
    assert q_bruteforce(1, 1, 0) == 0
    assert q_bruteforce(1, 1, -9) == 0
    assert q_bruteforce(1, 2, 16) == 1
    assert q_bruteforce(1, 2, 4) == 0


@given(
    st.integers(min_value=1, max_value=5),
    st.integers(min_value=1, max_value=3),
    st.integers(min_value=1, max_value=2000),
)
@settings(max_examples=300, deadline=None)
def test_q_bruteforce_roundtrip(k, s, m):
    assert q_bruteforce(k, s, k * m ** (2 * s)) == 1


def test_q_analytic_examples():
    assert q_analytic(1, 1, 1.0).value == pytest.approx(1.0, abs=1e-6)
    assert abs(4 * q_analytic(1, 2, 1.0).value) < 1e-4
    assert q_analytic(2, 8, 1.0).value == pytest.approx(1.0 / 64.0, abs=1e-8)


def test_q_classify_examples():
    assert q_classify(1, 49, 1.0)[0] == 1
    assert q_classify(1, 50, 1.0)[0] == 0
    assert q_classify(5, 45, 1.0)[0] == 1
    assert q_classify(1, 49, 1.0)[1] < 1e-3
    assert q_classify(1, 50, 1.0)[1] < 1e-3


def test_classify_unit_raises_when_ambiguous():
    with pytest.raises(AmbiguousClassification):
        classify_unit(0.5)
    with pytest.raises(AmbiguousClassification):
        classify_unit(0.31)
    assert classify_unit(0.01) == (0, pytest.approx(0.01))
    assert classify_unit(1.2) == (1, pytest.approx(0.2))


def test_indicator_matches_definition_grid():
    for k in (1, 2, 3, 5):
        for N in range(1, 61):
            bit, _ = q_classify(k, N, 1.0)
            ev = q_analytic(k, N, 1.0)
            assert bit == q_bruteforce(k, 1, N)
            assert abs(N * N * ev.value - q_bruteforce(k, 1, N)) < 1e-4


def test_zero_identity_examples():
    assert zero_identity_residual(1, 0, 1.0) < 1e-6
    assert zero_identity_residual(2, -1, 1.0) < 1e-6
    assert zero_identity_residual(1, -10, 2.0) < 1e-6
    with pytest.raises(ValueError):
        zero_identity_residual(1, 3, 1.0)


def test_coefficient_table_relation():
    # U(0) - mu(0) is the constant head of the K integral at q = 0
    for k in (1, 2):
        for t in (0.7, 1.0, 1.6):
            table = CoefficientTable(k, t)
            want = math.pi**2 / (48.0 * t * t) / math.tanh(math.pi * t)
            assert table.U(0) - table.mu(0) == pytest.approx(want, rel=1e-12)


def test_q_shifted_examples():
    ev = q_shifted_analytic(1, 10, 6, 1.0)
    assert ev.value == pytest.approx(1.0 / 256.0, abs=1e-8)
    ev = q_shifted_analytic(1, 10, -10, 1.0)
    assert abs(ev.value) < 1e-6
    ev = q_shifted_analytic(1, 10, 7, 1.0)
    assert abs(ev.value) < 1e-6


@pytest.mark.parametrize("c", [-13, -5, -4, 0, 3, 6])
def test_q_shifted_consistency_with_direct(c):
    # shifted evaluation at (N, c) against the direct evaluation at N + c:
    # two independent expansions of the same quantity
    N, k = 10, 2
    ev = q_shifted_analytic(k, N, c, 1.0)
    y = N + c
    if y >= 1:
        direct = q_analytic(k, y, 1.0)
        tol = ev.error_estimate + direct.error_estimate
        assert abs(ev.value - direct.value) < tol
    else:
        assert abs(ev.value) < 1e-6


def test_block_tables_match_shifted():
    tables = BlockTables(9, 1, 1.0)
    for c in (-11, -9, -2, 0, 5, 7, 16):
        y = 9 + c
        want = q_bruteforce(1, 1, y) / (y * y) if y >= 1 else 0.0
        assert abs(block_value(tables, c) - want) < 1e-9


def test_q_general_examples():
    assert q_general_analytic(1, 2, 16, 1.0).value == pytest.approx(1.0 / 256.0, abs=1e-7)
    assert q_general_analytic(2, 2, 32, 1.0).value == pytest.approx(1.0 / 1024.0, abs=1e-7)
    assert abs(q_general_analytic(1, 2, 8, 1.0).value) < 1e-7


def test_q_general_s1_agrees_with_direct():
    for N in range(1, 51):
        a = q_general_analytic(1, 1, N, 1.0)
        b = q_analytic(1, N, 1.0)
        assert abs(a.value - b.value) < a.error_estimate + b.error_estimate


def test_t_independence_spot():
    for N in (10, 25, 36):
        evs = [q_analytic(1, N, t) for t in (0.8, 1.0, 1.5)]
        spread = max(e.value for e in evs) - min(e.value for e in evs)
        assert spread < max(e.error_estimate for e in evs) * 2.0


def test_domain_errors():
    with pytest.raises(ValueError):
        q_analytic(1, 0, 1.0)
    with pytest.raises(ValueError):
        q_analytic(1, 5, -1.0)
    with pytest.raises(ValueError):
        q_bruteforce(0, 1, 5)
    with pytest.raises(ValueError):
        q_general_analytic(1, 0, 5, 1.0)

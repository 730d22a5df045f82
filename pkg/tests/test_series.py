import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from arithsum.series import (
    TruncationError,
    TruncationPolicy,
    geometric_series_evaluator,
    indicator_series_evaluator,
    invert_series,
    lemma4_residual,
    self_consistency_residual,
    sum_series,
)


def test_sum_series_geometric():
    policy = TruncationPolicy(abs_tol=1e-15, tail_kind="exponential", tail_param=0.5)
    ev = sum_series((0.5**r for r in range(1, 10**6)), policy)
    assert ev.value == pytest.approx(1.0, abs=1e-12)
    assert ev.error_estimate >= 0.0


def test_sum_series_alternating_zeta():
    policy = TruncationPolicy(abs_tol=1e-8, tail_kind="alternating", quiet_run=2)
    ev = sum_series(((-1) ** (r - 1) / r**2 for r in range(1, 10**6)), policy)
    assert abs(ev.value - math.pi**2 / 12.0) < 1e-8 + ev.error_estimate


def test_sum_series_zero_generator():
    policy = TruncationPolicy(abs_tol=1e-10, quiet_run=5)
    ev = sum_series((0.0 for _ in range(10**6)), policy)
    assert ev.value == 0.0
    assert ev.terms_used["terms"] == policy.quiet_run


def test_sum_series_exhaustion():
    policy = TruncationPolicy(abs_tol=1e-30, max_terms=50)
    with pytest.raises(TruncationError):
        sum_series((1.0 / r for r in range(1, 10**6)), policy)


def test_sum_series_finite_stream_is_exact():
    ev = sum_series(iter([1.0, 2.0, 3.0]), TruncationPolicy(abs_tol=1e-30, max_terms=10))
    assert ev.value == 6.0
    assert ev.error_estimate == 0.0


@given(st.floats(min_value=0.05, max_value=0.9))
@settings(max_examples=50, deadline=None)
def test_sum_series_error_bound_geometric(rho):
    # the reported estimate must bound |partial - limit| for geometric tails
    policy = TruncationPolicy(abs_tol=1e-10, tail_kind="exponential", tail_param=rho)
    ev = sum_series((rho**r for r in range(1, 10**6)), policy)
    limit = rho / (1.0 - rho)
    assert abs(ev.value - limit) <= ev.error_estimate + 1e-15


def test_policy_validation():
    with pytest.raises(ValueError):
        TruncationPolicy(abs_tol=0.0)
    with pytest.raises(ValueError):
        TruncationPolicy(tail_kind="polynomial", tail_param=1.0)
    with pytest.raises(ValueError):
        TruncationPolicy(tail_kind="nosuch")
    with pytest.raises(ValueError):
        TruncationPolicy(quiet_run=0)


def test_invert_geometric():
    geo = geometric_series_evaluator()
    ev = invert_series(geo, 5, 1.0)
    assert ev.value == pytest.approx(1.0 / 32.0, abs=1e-9)
    for N in range(-5, 1):
        assert abs(invert_series(geo, N, 1.0).value) < 1e-6


def test_invert_indicator_series():
    ind = indicator_series_evaluator(1)
    assert invert_series(ind, 4, 1.0).value == pytest.approx(1.0 / 16.0, abs=1e-9)
    assert abs(invert_series(ind, 3, 1.0).value) < 1e-9


def test_invert_recovery_range():
    for F in (geometric_series_evaluator(), indicator_series_evaluator(1)):
        for N in range(-5, 31):
            want = F.coefficient(N) if N >= 1 else 0.0
            got = invert_series(F, N, 1.0).value
            assert abs(got - want) < 1e-6, (F.label, N)


def test_invert_determinism():
    ind = indicator_series_evaluator(2)
    a = invert_series(ind, 8, 1.0)
    b = invert_series(ind, 8, 1.0)
    assert a.value == b.value and a.terms_used == b.terms_used


def test_lemma4_examples():
    assert lemma4_residual(lambda n: 0.5**n, 0.0, 1.0, 200) < 1e-8
    assert lemma4_residual(lambda n: 1.0 / n**2, 1.0, 0.5, 2000) < 1e-4
    assert lemma4_residual(lambda n: 0.0, 0.3, 1.0, 50) == 0.0


def test_lemma4_domain():
    with pytest.raises(ValueError):
        lemma4_residual(lambda n: 0.0, 1.5, 1.0, 10)
    with pytest.raises(ValueError):
        lemma4_residual(lambda n: 0.0, 0.0, 0.0, 10)


def test_self_consistency_examples():
    assert self_consistency_residual(indicator_series_evaluator(1), 1.0) < 1e-8
    assert self_consistency_residual(indicator_series_evaluator(3), 2.0) < 1e-8
    assert self_consistency_residual(geometric_series_evaluator(), 1.0) < 1e-10


def test_evaluator_conjugate_symmetry():
    for F in (geometric_series_evaluator(), indicator_series_evaluator(2)):
        z = complex(3.7, 1.3)
        assert F.evaluate(z.conjugate()) == pytest.approx(
            F.evaluate(z).conjugate(), rel=1e-12
        )

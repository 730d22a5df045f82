import math

import pytest

from arithsum.indicators import AmbiguousClassification
from arithsum.sigma_rh import (
    EULER_GAMMA,
    harmonic,
    lagarias_rhs,
    rh_check,
    robin_rhs,
    sigma_analytic,
    sigma_bruteforce,
    sigma_decomposition_check,
)


def test_sigma_bruteforce_examples():
    assert sigma_bruteforce(1) == 1
    assert sigma_bruteforce(6) == 12
    assert sigma_bruteforce(28) == 56
    assert sigma_bruteforce(12) == 28
    assert sigma_bruteforce(5040) == 19344


def test_decomposition_examples():
    assert sigma_decomposition_check(1) == 0
    assert sigma_decomposition_check(4) == 0
    assert sigma_decomposition_check(6) == 0


def test_decomposition_range():
    assert all(sigma_decomposition_check(N) == 0 for N in range(1, 3001))


def test_sigma_analytic_examples():
    assert abs(sigma_analytic(6, 1.0).value - 12) < 1e-3
    assert abs(sigma_analytic(10, 1.0).value - 18) < 1e-3
    ev = sigma_analytic(49, 1.0)
    assert abs(ev.value - 57) < 1e-2


def test_sigma_analytic_rounds_exactly():
    for N in range(2, 41):
        ev = sigma_analytic(N, 1.0)
        exact = sigma_bruteforce(N)
        assert abs(ev.value - exact) < 0.25
        assert round(ev.value) == exact


def test_sigma_t_independence():
    for N in (6, 10, 30):
        evs = [sigma_analytic(N, t) for t in (0.8, 1.0, 1.25)]
        spread = max(e.value for e in evs) - min(e.value for e in evs)
        assert spread < max(e.error_estimate for e in evs) + 1e-6


def test_harmonic():
    assert harmonic(1) == 1.0
    assert harmonic(2) == 1.5
    assert harmonic(4) == pytest.approx(25.0 / 12.0, rel=1e-15)


def test_lagarias_rhs():
    assert lagarias_rhs(1) == 1.0  # H_1 = 1, log 1 = 0
    # frozen against 40-digit arithmetic
    assert lagarias_rhs(2) == pytest.approx(3.3171685434118022, rel=1e-14)
    h4 = 25.0 / 12.0
    assert lagarias_rhs(4) == pytest.approx(h4 + math.exp(h4) * math.log(h4), rel=1e-15)
    assert lagarias_rhs(4) == pytest.approx(7.977982899505052, rel=1e-14)


def test_robin_rhs():
    # frozen against 40-digit arithmetic with the declared gamma constant
    assert robin_rhs(5041) == pytest.approx(19241.087346741728, rel=1e-13)
    assert robin_rhs(10000) == pytest.approx(39545.628337460345, rel=1e-13)
    with pytest.raises(ValueError):
        robin_rhs(5040)
    assert EULER_GAMMA == pytest.approx(0.5772156649015329, abs=0)


def test_rh_check_examples():
    rec = rh_check(2, mode="exact")
    assert rec.sigma_exact == 3
    assert rec.margin == pytest.approx(3.3171685434118022 - 3.0, rel=1e-12)
    assert rec.margin > 0
    rec = rh_check(12, mode="exact")
    assert rec.sigma_exact == 28 and rec.margin > 0
    rec = rh_check(6, mode="analytic", t=1.0)
    assert abs(rec.sigma_analytic - 12) < 1e-3 and rec.margin > 0
    assert rec.robin_rhs is None
    rec = rh_check(5041, mode="exact")
    assert rec.robin_rhs == pytest.approx(19241.087346741728, rel=1e-12)


def test_rh_check_domain():
    with pytest.raises(ValueError):
        rh_check(1)
    with pytest.raises(ValueError):
        rh_check(10, mode="fancy")


def test_domain_errors():
    with pytest.raises(ValueError):
        sigma_bruteforce(0)
    with pytest.raises(ValueError):
        sigma_analytic(1, 1.0)
    with pytest.raises(ValueError):
        sigma_analytic(10, 0.0)
    with pytest.raises(ValueError):
        harmonic(0)

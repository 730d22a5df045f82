"""Named verification suites: each runs one family of identities against
its independent oracle and reports per-check residuals.

These back the ``verify`` CLI command and the acceptance tests.  Every
suite returns a list of (check label, residual, allowance) where the
allowance is the analytic tail/tolerance the residual is expected to
stay below; a residual exceeding allowance + tol is a failure.
"""

from __future__ import annotations

import cmath
import math
from math import pi

import numpy as np

from .indicators import q_shifted_analytic, zero_identity_residual
from .integrals import integral_i, integral_j, integral_k, quadrature_oracle
from .kernels import half_plane_root, kernel_g, kernel_t, kernel_v, mittag_leffler_residual
from .series import (
    geometric_series_evaluator,
    indicator_series_evaluator,
    invert_series,
    lemma4_residual,
    self_consistency_residual,
)
from .sigma_rh import sigma_decomposition_check

Check = tuple[str, float, float]


def _direct_quartic_sum(x: float, z: float, alternating: bool, n_terms: int = 200000) -> tuple[float, float]:
    """Partial sum of sum_n (+-1)^n/(z^2+(n^2+x)^2) with an integral tail
    bound; the oracle side of the lattice-kernel identities."""
    n = np.arange(1, n_terms + 1, dtype=float)
    terms = 1.0 / (z * z + (n * n + x) ** 2)
    if alternating:
        terms = terms * np.where(np.arange(1, n_terms + 1) % 2 == 0, 1.0, -1.0)
    tail = 1.0 / (3.0 * n_terms**3)  # terms < n^-4 beyond the cutoff
    return float(np.sum(terms)), tail


def suite_kernels(fast: bool = False) -> list[Check]:
    checks: list[Check] = []
    for M, t in [(3.0, 4.0), (-3.0, 4.0), (0.0, 2.0), (123.5, 0.25), (-1e6, 3.0)]:
        r = half_plane_root(M, t)
        res = max(abs(r.u * r.u - r.v * r.v - M) / max(1.0, abs(M)), abs(2 * r.u * r.v - t) / t)
        checks.append((f"half_plane_root({M},{t})", res, 1e-12))
    for x in (0.0, 1.0, 2.5, -2.5, -4.0):
        for z in (0.5, 1.0, 3.0):
            direct, tail = _direct_quartic_sum(x, z, False)
            closed = pi / 4.0 * kernel_t(x, z).value - 0.5 / (x * x + z * z)
            checks.append((f"lattice_sum_T(x={x},z={z})", abs(direct - closed), tail + 1e-10))
            direct, tail = _direct_quartic_sum(x, z, True)
            closed = pi / 2.0 * kernel_v(x, z).value - 0.5 / (x * x + z * z)
            checks.append((f"lattice_sum_V(x={x},z={z})", abs(direct - closed), 1e-10))
    worst = 0.0
    ms = range(-50, 51, 5) if fast else range(-50, 51)
    for M in ms:
        for t in (0.5, 1.0, 2.0):
            for k in (1, 2, 3):
                z = complex(M, t)
                w = cmath.sqrt(z) / math.sqrt(k)
                oracle = -2.0 * (z**-2.5 / cmath.tanh(pi * w)).imag
                worst = max(worst, abs(kernel_g(M, t, k).value - oracle))
    checks.append(("jump_kernel_vs_complex_oracle", worst, 1e-10))
    checks.append(("mittag_leffler(theta=0,x=1,n=1000)", mittag_leffler_residual(0.0, 1.0, 1000), 1e-6))
    checks.append(
        ("mittag_leffler(theta=pi,x=1,n=1000)", mittag_leffler_residual(pi, 1.0, 1000), 1e-3)
    )
    return checks


def suite_integrals(fast: bool = False) -> list[Check]:
    checks: list[Check] = []
    worst = {"I": 0.0, "K": 0.0, "J": 0.0}
    qs = range(-10, 11, 3) if fast else range(-10, 11)
    for q in qs:
        for t in (0.5, 1.0, 2.0):
            for kind, f in (("I", integral_i), ("K", integral_k), ("J", integral_j)):
                cf = f(q, t)
                oracle = quadrature_oracle(kind, q, t, 1e-12)
                worst[kind] = max(worst[kind], abs(cf.value - oracle))
    for kind in ("I", "K", "J"):
        checks.append((f"closed_form_{kind}_vs_quadrature", worst[kind], 1e-9))
    j0 = integral_j(0, 1.0).value
    checks.append(
        ("J(0,1)_arctan_identity", abs(j0 - 2.0 * math.atan(math.tanh(pi / 2.0)) / pi), 1e-14)
    )
    checks.append(("I_odd_parity", abs(integral_i(-7, 1.3).value + integral_i(7, 1.3).value), 1e-15))
    checks.append(("K_even_parity", abs(integral_k(-6, 0.7).value - integral_k(6, 0.7).value), 1e-15))
    checks.append(("J_even_parity", abs(integral_j(-5, 1.0).value - integral_j(5, 1.0).value), 1e-15))
    return checks


def suite_inversion(fast: bool = False) -> list[Check]:
    checks: list[Check] = []
    geo = geometric_series_evaluator()
    ind = indicator_series_evaluator(1)
    worst_geo = 0.0
    worst_ind = 0.0
    for N in range(-5, 31):
        got = invert_series(geo, N, 1.0).value
        want = geo.coefficient(N) if N >= 1 else 0.0
        worst_geo = max(worst_geo, abs(got - want))
        got = invert_series(ind, N, 1.0).value
        want = ind.coefficient(N) if N >= 1 else 0.0
        worst_ind = max(worst_ind, abs(got - want))
    checks.append(("inversion_geometric_recovery", worst_geo, 1e-6))
    checks.append(("inversion_indicator_recovery", worst_ind, 1e-6))
    checks.append(
        ("coefficient_identity(f=2^-n,beta=0)", lemma4_residual(lambda n: 0.5**n, 0.0, 1.0, 200), 1e-8)
    )
    if not fast:
        checks.append(
            (
                "coefficient_identity(f=1/n^2,beta=1)",
                lemma4_residual(lambda n: 1.0 / (n * n), 1.0, 0.5, 2000),
                1e-4,
            )
        )
    return checks


def suite_self_consistency(fast: bool = False) -> list[Check]:
    checks = [
        ("consistency_indicator_k1_t1", self_consistency_residual(indicator_series_evaluator(1), 1.0), 1e-8),
        ("consistency_indicator_k3_t2", self_consistency_residual(indicator_series_evaluator(3), 2.0), 1e-8),
        ("consistency_geometric_t1", self_consistency_residual(geometric_series_evaluator(), 1.0), 1e-10),
    ]
    return checks


def suite_zero_identities(fast: bool = False) -> list[Check]:
    checks: list[Check] = []
    worst = 0.0
    for k in (1, 2):
        for N in range(-20, 1):
            worst = max(worst, zero_identity_residual(k, N, 1.0))
    checks.append(("vanishing_identity_N<=0", worst, 1e-6))
    worst = 0.0
    base = 5
    for total in range(-10, 1):
        ev = q_shifted_analytic(1, base, total - base, 1.0)
        worst = max(worst, abs(ev.value))
    checks.append(("vanishing_identity_shifted", worst, 1e-6))
    return checks


def suite_decomposition(fast: bool = False) -> list[Check]:
    n_max = 2000 if fast else 10**4
    worst = max(sigma_decomposition_check(N) for N in range(1, n_max + 1))
    return [(f"divisor_pair_decomposition_N<={n_max}", float(worst), 0.0)]


SUITES = {
    "kernels": suite_kernels,
    "integrals": suite_integrals,
    "inversion": suite_inversion,
    "self-consistency": suite_self_consistency,
    "zero-identities": suite_zero_identities,
    "decomposition": suite_decomposition,
}


def run_suite(name: str, fast: bool = False) -> list[Check]:
    if name == "all":
        out: list[Check] = []
        for key in SUITES:
            out.extend((f"{key}:{label}", res, allow) for label, res, allow in SUITES[key](fast))
        return out
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)} or 'all'")
    return SUITES[name](fast)

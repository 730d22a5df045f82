"""Weighted sums over the positive solutions of d a^2 + k b^2 = N and
k b^2 - d a^2 = N.

Every analytic evaluation here is paired with an enumeration oracle.
The common identity behind all of them: with the indicator series
written at base N and shift c = -+ d a^2,

    sum over solutions of g(a)/b^4  =  k^2 * sum_a g(a) * block(N, -+ d a^2),

because the block equals q_k(N -+ d a^2)/(N -+ d a^2)^2, which is
1/(k^2 b^4) exactly at solutions and 0 elsewhere.  The sum-of-squares
family therefore terminates (shifts with d a^2 >= N contribute exactly
zero by the vanishing identity), while the difference family has a
Pell-type infinite solution set and carries a rigorous b^-4 tail bound.

The unit-weight forms are additionally evaluated through a second,
independent organization in which the a-sums are closed in the lattice
kernel T and everything is grouped by series type; agreement of the two
organizations (and of both with enumeration) is part of the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import isqrt, pi
from typing import Callable

import numpy as np

from .indicators import BlockTables, CoefficientTable, _exp_series_terms, block_value
from .integrals import (
    cosh_over_sinh2_values,
    coth,
    csch_values,
    sech,
    sech_values,
)
from .kernels import g_values, kernel_g, t_values
from .series import Evaluation, TruncationPolicy

__all__ = [
    "WeightSpec",
    "DiophantineInstance",
    "SolutionList",
    "unit_weight",
    "alternating_weight",
    "reciprocal_weight",
    "enumerate_solutions",
    "sum_squares_bruteforce",
    "sum_diff_bruteforce",
    "weighted_finite_analytic",
    "weighted_infinite_analytic",
    "sum_squares_analytic",
    "sum_diff_analytic",
    "unit_sum_squares",
    "unit_sum_diff",
    "divisor_pair_sum_analytic",
]


@dataclass(frozen=True)
class WeightSpec:
    """A bounded weight m -> g(m) with its declared bound sup |g|.

    The bound is spot-checked on a small prefix at construction; tail
    estimates downstream rely on it.
    """

    weight: Callable[[int], float]
    bound: float
    label: str

    def __post_init__(self) -> None:
        if self.bound < 0:
            raise ValueError("bound must be nonnegative")
        for m in range(1, 65):
            if abs(self.weight(m)) > self.bound * (1.0 + 1e-12):
                raise ValueError(
                    f"declared bound {self.bound} violated at m={m} by weight {self.label!r}"
                )


def unit_weight() -> WeightSpec:
    return WeightSpec(lambda a: 1.0, 1.0, "unit")


def alternating_weight() -> WeightSpec:
    return WeightSpec(lambda a: -1.0 if a % 2 else 1.0, 1.0, "alternating")


def reciprocal_weight() -> WeightSpec:
    return WeightSpec(lambda a: 1.0 / (a + 1.0), 0.5, "reciprocal")


@dataclass(frozen=True)
class DiophantineInstance:
    """Which solution set is summed over: d a^2 + k b^2 = N ("sum") or
    k b^2 - d a^2 = N ("difference")."""

    N: int
    d: int
    k: int
    kind: str

    def __post_init__(self) -> None:
        if self.N < 1 or self.d < 1 or self.k < 1:
            raise ValueError("N, d, k must be positive integers")
        if self.kind not in ("sum", "difference"):
            raise ValueError(f"kind must be 'sum' or 'difference', got {self.kind!r}")


@dataclass(frozen=True)
class SolutionList:
    """Solutions (a, b), a ascending.  For the difference kind only
    b <= truncated_at_b is scanned and tail_bound bounds the omitted
    weighted mass sum |g|/b^4."""

    pairs: tuple
    truncated_at_b: int | None
    tail_bound: float


def enumerate_solutions(
    inst: DiophantineInstance, b_horizon: int = 0, bound: float = 1.0
) -> SolutionList:
    """Exact integer scan of the instance's solution set.

    The sum kind is provably complete (a <= sqrt(N/d), b <= sqrt(N/k)).
    The difference kind scans b <= b_horizon; the infinitely many larger
    Pell-type solutions contribute at most bound * sum_{b>horizon} b^-4
    <= bound/(3 horizon^3) to any |g| <= bound weighted sum.
    """
    N, d, k = inst.N, inst.d, inst.k
    pairs = []
    if inst.kind == "sum":
        a = 1
        while d * a * a < N:
            rem = N - d * a * a
            if rem % k == 0:
                b = isqrt(rem // k)
                if b >= 1 and k * b * b == rem:
                    pairs.append((a, b))
            a += 1
        return SolutionList(tuple(pairs), None, 0.0)
    if b_horizon < 1:
        raise ValueError("difference kind requires b_horizon >= 1")
    for b in range(1, b_horizon + 1):
        rem = k * b * b - N
        if rem >= d and rem % d == 0:
            a = isqrt(rem // d)
            if a >= 1 and d * a * a == rem:
                pairs.append((a, b))
    tail = bound / (3.0 * b_horizon**3)
    return SolutionList(tuple(pairs), b_horizon, tail)


def sum_squares_bruteforce(inst: DiophantineInstance, g: WeightSpec) -> float:
    """Exact finite sum of g(a)/b^4 over the sum-kind solutions."""
    if inst.kind != "sum":
        raise ValueError("instance must be sum kind")
    sols = enumerate_solutions(inst)
    return math.fsum(g.weight(a) / b**4 for a, b in sols.pairs)


def sum_diff_bruteforce(
    inst: DiophantineInstance, g: WeightSpec, b_horizon: int
) -> tuple[float, float]:
    """(sum of g(a)/b^4 over difference-kind solutions with b <= horizon,
    rigorous bound on the omitted tail)."""
    if inst.kind != "difference":
        raise ValueError("instance must be difference kind")
    sols = enumerate_solutions(inst, b_horizon, g.bound)
    return math.fsum(g.weight(a) / b**4 for a, b in sols.pairs), sols.tail_bound


_BLOCK_TAIL_MODEL = 50.0  # empirical prefactor for the r^-3.5 block tail


def _block_tail(r_len: int) -> float:
    return _BLOCK_TAIL_MODEL * r_len**-3.5


def _aggregate_blocks(
    N: int,
    k: int,
    t: float,
    shifts: list[tuple[float, int]],
    extra_tail: float = 0.0,
) -> Evaluation:
    """sum of w * block(N, c) over (w, c), sharing one table set."""
    if not shifts:
        return Evaluation(0.0, extra_tail, {"blocks": 0}, False)
    r_needed = max(_r_len_for(N, c, t) for _, c in shifts)
    q_needed = r_needed + max(abs(c) for _, c in shifts) + 1
    tables = BlockTables(N, k, t, r_needed, q_needed)
    total = 0.0
    est = extra_tail
    for w, c in shifts:
        r_len = _r_len_for(N, c, t)
        total += w * block_value(tables, c, r_len)
        est += abs(w) * _block_tail(r_len)
    return Evaluation(total, est, {"blocks": len(shifts), "r_terms": r_needed}, True)


def _r_len_for(N: int, c: int, t: float) -> int:
    return abs(c) + N + max(1500, int(900 / t))


def weighted_finite_analytic(
    h: WeightSpec,
    k: int,
    N: int,
    t: float = 1.0,
    policy: TruncationPolicy | None = None,
) -> Evaluation:
    """Series value of sum_{a=1}^{N-1} h(a) q_k(N-a)/(N-a)^2.

    Organized with the shift index outermost: each addend is the series
    block at shift -a, which realizes the cancellation between the
    1/(N-a) groups for slowly decaying h (they are only conditionally
    convergent when split apart).  Shifts a >= N contribute exactly zero
    by the vanishing identity and are not evaluated.
    """
    if N < 1:
        raise ValueError(f"N must be a natural number, got {N}")
    shifts = [(h.weight(a), -a) for a in range(1, N)]
    return _aggregate_blocks(N, k, t, shifts)


def weighted_infinite_analytic(
    h: WeightSpec,
    k: int,
    N: int,
    t: float = 1.0,
    policy: TruncationPolicy | None = None,
    a_horizon: int = 400,
) -> Evaluation:
    """Series value of sum_{a>=1} h(a) q_k(N+a)/(N+a)^2.

    The caller guarantees sum_a |h(a)/(N+a)| < infinity.  The horizon
    tail is bounded through the sparsity of k-square arguments:
    sum_{a>A} |h| q_k(N+a)/(N+a)^2 <= bound/(3 sqrt(k) (N+A)^(3/2)).
    """
    if N < 1:
        raise ValueError(f"N must be a natural number, got {N}")
    tail = h.bound / (3.0 * math.sqrt(k) * (N + a_horizon) ** 1.5)
    shifts = [(h.weight(a), a) for a in range(1, a_horizon + 1)]
    return _aggregate_blocks(N, k, t, shifts, tail)


def sum_squares_analytic(
    g: WeightSpec,
    inst: DiophantineInstance,
    t: float = 1.0,
    policy: TruncationPolicy | None = None,
) -> Evaluation:
    """Series value of (1/k^2) sum_{d a^2 + k b^2 = N} g(a)/b^4.

    Shifts with d a^2 >= N (including the boundary case N = d m^2, whose
    block is the vanishing identity at zero) contribute exactly 0, so the
    aggregation is finite with no truncation estimate.
    """
    if inst.kind != "sum":
        raise ValueError("instance must be sum kind")
    N, d, k = inst.N, inst.d, inst.k
    shifts = []
    a = 1
    while d * a * a <= N - 1:
        shifts.append((g.weight(a), -d * a * a))
        a += 1
    return _aggregate_blocks(N, k, t, shifts)


def sum_diff_analytic(
    g: WeightSpec,
    inst: DiophantineInstance,
    t: float = 1.0,
    policy: TruncationPolicy | None = None,
    a_horizon: int = 80,
) -> Evaluation:
    """Series value of (1/k^2) sum_{k b^2 - d a^2 = N} g(a)/b^4 over the
    full (Pell-type, possibly infinite) solution set.

    The horizon tail uses b > a sqrt(d/k):
    sum_{a>A} <= bound/(3 sqrt(k) d^(3/2) A^3).
    """
    if inst.kind != "difference":
        raise ValueError("instance must be difference kind")
    N, d, k = inst.N, inst.d, inst.k
    tail = g.bound / (3.0 * math.sqrt(k) * d**1.5 * a_horizon**3)
    shifts = [(g.weight(a), d * a * a) for a in range(1, a_horizon + 1)]
    return _aggregate_blocks(N, k, t, shifts, tail)


def divisor_pair_sum_analytic(
    g: WeightSpec,
    N: int,
    t: float = 1.0,
    policy: TruncationPolicy | None = None,
) -> Evaluation:
    """Series value of sum over divisors d|N with N/d > d of
    g(N/d - d)/(N/d + d)^4, through b^2 - a^2 = 4N.

    Arguments 4N + a^2 with a >= N are never squares, so the aggregation
    stops at a = N-1 with zero omitted mass.
    """
    if N < 1:
        raise ValueError(f"N must be a natural number, got {N}")
    shifts = [(g.weight(a), a * a) for a in range(1, N)]
    return _aggregate_blocks(4 * N, 1, t, shifts)


def _divisor_pair_bruteforce(g: WeightSpec, N: int) -> float:
    """Oracle for the divisor-pair sum."""
    total = 0.0
    for d in range(1, isqrt(N) + 1):
        if N % d == 0 and N // d > d:
            total += g.weight(N // d - d) / float(N // d + d) ** 4
    return total


# ---------------------------------------------------------------------------
# Unit-weight forms, organized with closed a-sums (independent of the
# block aggregation above).
# ---------------------------------------------------------------------------


def _p_weight_grid(t: float) -> tuple[np.ndarray, np.ndarray]:
    # weights below e^-32 contribute under 1e-13 to any O(1) closed sum
    m_max = max(2, int(math.ceil(32.0 / (pi * t))))
    m = np.arange(0, m_max + 1)
    n = 2.0 * m + 1.0
    with np.errstate(under="ignore"):
        c = n * np.exp(-pi * t * n)
    c[1::2] *= -1.0
    return n, c


def _quartic_series(z: float, d: int, a_max: int = 400) -> float:
    """sum_{a>=1} 1/(z^2 + d^2 a^4), truncated at its a^-4 tail."""
    a = np.arange(1.0, a_max + 1.0)
    return float(np.sum(1.0 / (z * z + d * d * a**4))) + 1.0 / (3.0 * d * d * a_max**3)


def _unit_head_and_exp(y: np.ndarray, k: int, t: float) -> tuple[float, float]:
    """Vectorized closed head U(y) (starred: y = 0 skipped) plus the three
    exponential r-series (unstarred) over an integer argument grid."""
    cth = coth(pi * t)
    live = y != 0
    yf = y.astype(float)
    ys = np.where(live, yf, 1.0)
    sy = np.where(np.abs(y) % 2 == 1, -1.0, 1.0)  # (-1)^y
    x = pi * ys / (2.0 * t)
    csch_x = np.sign(ys) * csch_values(np.abs(x))  # odd
    chsh2 = cosh_over_sinh2_values(np.abs(x))  # even
    head_terms = (
        pi * pi / (3.0 * k * ys * math.expm1(2.0 * pi * t))
        + (1.0 - cth) / (2.0 * ys * ys)
        - sy * pi**3 * cth / (12.0 * k * t) * csch_x
        + sy * pi * pi * cth / (8.0 * t * t) * chsh2
    )
    head = float(np.sum(np.where(live, head_terms, 0.0)))
    r, w = _exp_series_terms(t)
    dmat = 4.0 * t * t * r[:, None] ** 2 + yf[None, :] ** 2
    s1 = (w[:, None] / dmat).sum(axis=0)
    s2 = (w[:, None] * r[:, None] / dmat).sum(axis=0)
    s3 = (w[:, None] * (4.0 * t * t * r[:, None] ** 2 - yf[None, :] ** 2) / dmat**2).sum(axis=0)
    exp_part = float(
        np.sum(-yf * pi * pi * cth / (3.0 * k) * s1 - 2.0 * pi * t * cth * s2 - cth * s3)
    )
    return head, exp_part


def _unit_cosh_group(N: int, d: int, k: int, t: float, plus: bool) -> tuple[float, float]:
    """The sech-weighted bilateral G sums of the unit-weight forms.

    plus=False pairs G(r-N) with (r - d a^2) [sum kind]; plus=True pairs
    G(r-N) with (r + d a^2) [difference kind].  Windowed: only arguments
    with |r -+ d a^2| <~ 27t survive the sech factor.  Returns
    (value, tail bound).
    """
    W = int(math.ceil(27.0 * t)) + 3
    # cutoff in a: the kernel magnitude at the resonance r ~ d a^2 decays
    # like (d a^2 - N)^(-7/2) on the positive side and (d a^2 + N)^(-2)
    # (worst case, at resonances) on the negative side.
    if plus:
        a_cut = max(4, isqrt((44000 + 4 * N) // d) + 1)
    else:
        a_cut = max(4, isqrt((N + 3700) // d) + 1)
    r_max = d * a_cut * a_cut + W + 1
    rr = np.arange(1, r_max + 1, dtype=float)
    gp = g_values(rr - N, t, k)
    gn = g_values(-rr - N, t, k)
    sgn_r = np.ones(r_max)
    sgn_r[::2] = -1.0
    g0 = kernel_g(-N, t, k).value
    total = 0.0
    for a in range(1, a_cut + 1):
        da2 = d * a * a
        delta = -1.0 if (d * a) % 2 else 1.0
        contrib = g0 * sech(pi * da2 / (2.0 * t))
        # window where the sech factor survives
        lo = max(1, da2 - W)
        hi = min(r_max, da2 + W)
        if lo <= hi:
            rs = np.arange(lo, hi + 1)
            sl = slice(lo - 1, hi)
            if plus:
                contrib += float(
                    np.sum(sgn_r[sl] * gn[sl] * sech_values(pi * (rs - da2) / (2.0 * t)))
                )
            else:
                contrib += float(
                    np.sum(sgn_r[sl] * gp[sl] * sech_values(pi * (rs - da2) / (2.0 * t)))
                )
        if da2 <= W:
            rs = np.arange(1, min(r_max, W - da2 + 1) + 1)
            sl = slice(0, len(rs))
            if plus:
                contrib += float(
                    np.sum(sgn_r[sl] * gp[sl] * sech_values(pi * (rs + da2) / (2.0 * t)))
                )
            else:
                contrib += float(
                    np.sum(sgn_r[sl] * gn[sl] * sech_values(pi * (rs + da2) / (2.0 * t)))
                )
        total += delta * contrib
    coeff = math.sinh(pi * t) / (8.0 * math.sqrt(k) * t)
    if plus:
        tail = abs(coeff) * 4.0 * 1.27 / (d * d * a_cut**3)
    else:
        tail = abs(coeff) * 4.0 * 5.0 / (d * a_cut) ** 3.5
    return coeff * total, tail


def _unit_p_group(N: int, d: int, k: int, t: float, plus: bool) -> tuple[float, float]:
    """The one-signed double G sums with their a-sums closed in the
    lattice kernel T:  sum_a 1/(z^2 + (r -+ d a^2)^2)
    = (pi/(4 d^2)) T(-+ r/d, z/d) - 1/(2 (r^2 + z^2))."""
    n, cm = _p_weight_grid(t)
    z = t * n
    g0 = kernel_g(-N, t, k).value
    total = g0 * float(np.sum(cm * np.array([_quartic_series(zi, d) for zi in z])))
    # The negative-side kernel resonances at r ~ d a^2 decay like
    # (r+N)^-2 against T peaks of height ~1/z^2, so the difference kind
    # must sweep r well past 10^4/t; the sum kind pairs those resonances
    # with the (r-N)^(-7/2) branch and settles by r ~ N + 3 10^3.
    if plus:
        r_max = N + max(3000, int(12000 / t))
    else:
        r_max = N + max(2500, int(1200 / t))
    rr = np.arange(1, r_max + 1, dtype=float)
    gp = g_values(rr - N, t, k)
    gn = g_values(-rr - N, t, k)
    acc_p = np.zeros(r_max)
    acc_m = np.zeros(r_max)
    for zi, ci in zip(z, cm):
        t_neg = t_values(-rr / d, zi / d)  # closes sum_a 1/((zi)^2 + (r - d a^2)^2)
        t_pos = t_values(rr / d, zi / d)
        base = -0.5 / (rr * rr + zi * zi)
        a_minus = pi / (4.0 * d * d) * t_neg + base
        a_plus = pi / (4.0 * d * d) * t_pos + base
        if plus:
            acc_p += ci * a_plus
            acc_m += ci * a_minus
        else:
            acc_p += ci * a_minus
            acc_m += ci * a_plus
    total += float(np.dot(gp, acc_p) + np.dot(gn, acc_m))
    coeff = -t * math.sinh(pi * t) / (2.0 * math.sqrt(k) * pi)
    # models calibrated against reference runs with r_max = 1.4e5
    if plus:
        tail = 5e-4 / (t * math.sqrt(d) * (r_max + 40.0 * N))
    else:
        tail = 2e-9 / t
    return coeff * total, tail


def _unit_value(inst: DiophantineInstance, t: float, a_grid_len: int = 1600) -> Evaluation:
    N, d, k = inst.N, inst.d, inst.k
    plus = inst.kind == "difference"
    a = np.arange(1, a_grid_len + 1, dtype=np.int64)
    y = N + d * a * a if plus else N - d * a * a
    head, exp_part = _unit_head_and_exp(y, k, t)
    eps = 0.0
    if not plus:
        m = isqrt(N // d)
        if m >= 1 and d * m * m == N:
            eps = CoefficientTable(k, t).U(0)
    cosh_val, cosh_tail = _unit_cosh_group(N, d, k, t, plus)
    p_val, p_tail = _unit_p_group(N, d, k, t, plus)
    head_tail = 1.0 / (2.0 * d * d * a_grid_len**3)
    value = eps + head + exp_part + cosh_val + p_val
    est = cosh_tail + p_tail + head_tail + 1e-12
    return Evaluation(value, est, {"a_terms": a_grid_len}, True)


def unit_sum_squares(
    inst: DiophantineInstance, t: float = 1.0, policy: TruncationPolicy | None = None
) -> Evaluation:
    """Unit-weight (1/k^2) sum of 1/b^4 over d a^2 + k b^2 = N, evaluated
    in the closed-a-sum organization (independent of the block path)."""
    if inst.kind != "sum":
        raise ValueError("instance must be sum kind")
    return _unit_value(inst, t)


def unit_sum_diff(
    inst: DiophantineInstance, t: float = 1.0, policy: TruncationPolicy | None = None
) -> Evaluation:
    """Unit-weight (1/k^2) sum of 1/b^4 over k b^2 - d a^2 = N, evaluated
    in the closed-a-sum organization (independent of the block path)."""
    if inst.kind != "difference":
        raise ValueError("instance must be difference kind")
    return _unit_value(inst, t)

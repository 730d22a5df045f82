"""The divisor sum sigma(N), its convergent-series representation, and
the Robin/Lagarias inequality checks.

sigma(N) decomposes over divisor pairs as

    sigma(N) = q_1(N) sqrt(N) + sum_{a=1}^{N-1} q_1(4N+a^2) sqrt(4N+a^2),

an exact integer identity (b^2 - a^2 = 4N pairs off the divisors d < N/d
as b = N/d + d, a = N/d - d).  Substituting the shifted series for
q_1(4N+a^2)/(4N+a^2)^2 and weighting by (4N+a^2)^(5/2) gives a
convergent-series representation of sigma(N) valid for every t > 0,
assembled here from the same closed heads, exponential r-series and
jump-kernel tables as the indicator blocks, with all hyperbolic weights
evaluated in guarded/log form.

The Lagarias criterion compares sigma(N) against H_N + e^(H_N) log H_N;
Robin's compares against e^gamma N log log N for N >= 5041.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import isqrt, pi

import numpy as np

from .indicators import AmbiguousClassification, BlockTables, _exp_series_terms
from .integrals import cosh_over_sinh2_values, coth, csch_values
from .series import Evaluation, TruncationPolicy

__all__ = [
    "RHRecord",
    "EULER_GAMMA",
    "sigma_bruteforce",
    "sigma_decomposition_check",
    "sigma_analytic",
    "harmonic",
    "lagarias_rhs",
    "robin_rhs",
    "rh_check",
]

# Euler's constant, fixed to 17 digits; the Robin bound only needs the value.
EULER_GAMMA = 0.5772156649015329


def sigma_bruteforce(N: int) -> int:
    """Exact divisor sum by trial division up to sqrt(N)."""
    if N < 1:
        raise ValueError(f"N must be a natural number, got {N}")
    total = 0
    for d in range(1, isqrt(N) + 1):
        if N % d == 0:
            total += d
            q = N // d
            if q != d:
                total += q
    return total


def sigma_decomposition_check(N: int) -> int:
    """|sigma(N) - q_1(N) sqrt(N) - sum_a q_1(4N+a^2) sqrt(4N+a^2)| with
    exact integer arithmetic; 0 for every N.

    Square candidates come from the correctly rounded float sqrt and are
    accepted only after an exact int64 m*m == M comparison, so the test
    itself is integer-exact (4N + a^2 < 2^53 throughout the supported
    range).
    """
    if N < 1:
        raise ValueError(f"N must be a natural number, got {N}")
    total = 0
    m = isqrt(N)
    if m * m == N:
        total += m
    if N > 1:
        a = np.arange(1, N, dtype=np.int64)
        M = 4 * N + a * a
        r = np.rint(np.sqrt(M.astype(float))).astype(np.int64)
        hit = r * r == M
        total += int(r[hit].sum())
    return abs(sigma_bruteforce(N) - total)


def _sigma_r_len(N: int, t: float) -> int:
    # must clear the last jump-kernel resonance at r ~ (N-1)^2, plus a
    # polynomial-decay margin for the J tails
    return (N - 1) * (N - 1) + max(4000, 40 * N, int(3000 / t))


def sigma_analytic(
    N: int,
    t: float = 1.0,
    policy: TruncationPolicy | None = None,
) -> Evaluation:
    """Convergent-series value of sigma(N), N >= 2, for any t > 0.

    Assembled as q_1(N) sqrt(N) plus the (4N+a^2)^(5/2)-weighted shifted
    indicator series at base 4N and shifts a^2: the closed hyperbolic
    a-sums, the three exponential r-series with their finite a-sums, and
    the jump-kernel series contracted against the J table.
    """
    if N < 2:
        raise ValueError(f"N must be at least 2, got {N}")
    if not t > 0:
        raise ValueError(f"t must be positive, got {t}")
    cth = coth(pi * t)
    a = np.arange(1, N, dtype=np.int64)
    sgn_a = np.where(a % 2 == 1, -1.0, 1.0)  # (-1)^a = (-1)^(4N+a^2)
    M = (4 * N + a * a).astype(float)
    sqrtM = np.sqrt(M)
    M32 = M * sqrtM
    M52 = M * M * sqrtM

    m = isqrt(N)
    lead = math.sqrt(N) if m * m == N else 0.0

    # closed hyperbolic heads, weighted by M^(5/2)
    x = pi * M / (2.0 * t)
    csch_x = csch_values(x)
    chsh2_x = cosh_over_sinh2_values(x)
    head = (
        pi * pi / (3.0 * math.expm1(2.0 * pi * t)) * M32
        + (1.0 - cth) / 2.0 * sqrtM
        - pi**3 * cth / (12.0 * t) * sgn_a * M52 * csch_x
        + pi * pi * cth / (8.0 * t * t) * sgn_a * M52 * chsh2_x
    )
    total = lead + float(np.sum(head))

    # exponential r-series with their finite a-sums
    M72 = M52 * M
    r, w = _exp_series_terms(t)
    dmat = 4.0 * t * t * r[:, None] ** 2 + M[None, :] ** 2
    s1 = float(np.sum(w[:, None] * M72[None, :] / dmat))
    s2 = float(np.sum((w * r)[:, None] * M52[None, :] / dmat))
    s3 = float(
        np.sum(
            w[:, None]
            * M52[None, :]
            * (4.0 * t * t * r[:, None] ** 2 - M[None, :] ** 2)
            / dmat**2
        )
    )
    total += -pi * pi * cth / 3.0 * s1 - 2.0 * pi * t * cth * s2 - cth * s3

    # jump-kernel series against the J table, shift a^2 per divisor pair
    r_len = _sigma_r_len(N, t)
    if policy is not None:
        r_len = min(r_len, policy.max_terms)
    q_max = r_len + (N - 1) ** 2 + 1
    tables = BlockTables(4 * N, 1, t, r_len, q_max)
    J = tables.J
    gp = tables.sg_pos[:r_len]
    gn = tables.sg_neg[:r_len]
    gsum = 0.0
    for i in range(len(a)):
        c = int(a[i]) * int(a[i])
        s = tables.g0 * J[c]
        s += float(np.dot(gp, J[c + 1 : c + r_len + 1]))
        head_n = min(c, r_len)
        s += float(np.dot(gn[:head_n], J[c - 1 :: -1][:head_n]))
        if r_len > head_n:
            s += float(np.dot(gn[head_n:r_len], J[1 : r_len - c + 1]))
        gsum += sgn_a[i] * M52[i] * s
    total += math.sinh(pi * t) / 4.0 * gsum

    # error model: guarded hyperbolics underflow to true zeros; the r
    # truncation sits past the last resonance with a polynomial margin
    margin = r_len - (N - 1) ** 2
    est = 1e-12 * float(np.sum(np.abs(head))) + 0.05 * N * N / margin**1.5 + 1e-9
    return Evaluation(float(total), float(est), {"a_terms": N - 1, "r_terms": r_len}, True)


def harmonic(N: int) -> float:
    """H_N = sum_{r<=N} 1/r by compensated summation."""
    if N < 1:
        raise ValueError(f"N must be a natural number, got {N}")
    return math.fsum(1.0 / r for r in range(1, N + 1))


def lagarias_rhs(N: int) -> float:
    """H_N + e^(H_N) log(H_N); sigma(N) stays below it for N > 1 iff the
    Riemann hypothesis holds."""
    h = harmonic(N)
    return h + math.exp(h) * math.log(h)


def robin_rhs(N: int) -> float:
    """e^gamma N log log N; valid comparison point only for N >= 5041."""
    if N < 5041:
        raise ValueError(f"Robin bound applies for N >= 5041, got {N}")
    return math.exp(EULER_GAMMA) * N * math.log(math.log(N))


@dataclass(frozen=True)
class RHRecord:
    """One inequality check: sigma against the Lagarias bound (and the
    Robin bound where applicable).  margin > 0 means unfalsified."""

    N: int
    sigma_analytic: float
    sigma_exact: int
    lagarias_rhs: float
    robin_rhs: float | None
    margin: float
    harmonic: float


def rh_check(
    N: int,
    t: float = 1.0,
    mode: str = "exact",
    policy: TruncationPolicy | None = None,
) -> RHRecord:
    """Check sigma(N) < H_N + e^(H_N) log H_N with sigma taken exactly
    ("exact") or from the series representation ("analytic")."""
    if N < 2:
        raise ValueError(f"N must be at least 2, got {N}")
    if mode not in ("exact", "analytic"):
        raise ValueError(f"mode must be 'exact' or 'analytic', got {mode!r}")
    exact = sigma_bruteforce(N)
    if mode == "analytic":
        ev = sigma_analytic(N, t, policy)
        value = ev.value
        if abs(value - round(value)) >= 0.25:
            raise AmbiguousClassification(
                f"sigma series value {value} too far from an integer at N={N}"
            )
    else:
        value = float(exact)
    h = harmonic(N)
    rhs = h + math.exp(h) * math.log(h)
    robin = robin_rhs(N) if N >= 5041 else None
    return RHRecord(
        N=N,
        sigma_analytic=value,
        sigma_exact=exact,
        lagarias_rhs=rhs,
        robin_rhs=robin,
        margin=rhs - value,
        harmonic=h,
    )

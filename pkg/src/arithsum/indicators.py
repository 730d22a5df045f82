"""The power-form indicators q_k(N) and q_{k,s}(N).

q_{k,s}(N) is 1 when N = k m^(2s) for some natural m and 0 otherwise;
q_k abbreviates s = 1.  Alongside the integer-exact definition this
module carries the convergent-series representation of q_k(N)/N^2
obtained by inverting the generating series sum q_k(n)/(n^2 (n+z)),
its vanishing counterpart for N <= 0, the integer-shifted variants, and
the general-s form.

The series representation at base N and shift c is assembled as

    head(N+c) + exp-series(N+c) + G-part(N, c)

where head and the three exponential r-series depend only on y = N+c,
and the G-part is the bilateral jump-kernel series

    sinh(pi t)/(4 sqrt(k)) * (-1)^c * [ G(-N) J(|c|)
        + sum_{r>=1} (-1)^r ( G(r-N) J(|r+c|) + G(-r-N) J(|r-c|) ) ].

The whole expression equals q_k(N+c)/(N+c)^2 for N+c >= 1 and 0 for
N+c <= 0, for every t > 0.  ``BlockTables`` caches the G and J grids so
drivers that aggregate many shifts of one base pay for them once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import pi

import numpy as np

from .integrals import (
    cosh_over_sinh2,
    coth,
    csch,
    integral_i,
    integral_k,
    j_values,
    sech,
)
from .kernels import g_values, kernel_g
from .series import Evaluation, TruncationPolicy

__all__ = [
    "AmbiguousClassification",
    "CoefficientTable",
    "BlockTables",
    "integer_root",
    "q_bruteforce",
    "q_analytic",
    "q_classify",
    "classify_unit",
    "zero_identity_residual",
    "q_shifted_analytic",
    "q_general_analytic",
    "block_value",
]


class AmbiguousClassification(ValueError):
    """A series value was too far from both 0 and 1 to classify."""


def integer_root(x: int, e: int) -> int:
    """Floor of the e-th root of x >= 0 by integer binary search."""
    if x < 0:
        raise ValueError("x must be nonnegative")
    if e < 1:
        raise ValueError("e must be a positive integer")
    if x < 2:
        return x
    lo, hi = 1, 1 << (x.bit_length() // e + 1)
    while lo + 1 < hi:
        mid = (lo + hi) // 2
        if mid**e <= x:
            lo = mid
        else:
            hi = mid
    return lo


def q_bruteforce(k: int, s: int, N: int) -> int:
    """1 iff N = k m^(2s) for some natural m >= 1, by exact integer
    root extraction; 0 otherwise (including all N <= 0)."""
    if k < 1 or s < 1:
        raise ValueError("k and s must be positive integers")
    if N < 1 or N % k:
        return 0
    m = integer_root(N // k, 2 * s)
    return 1 if m >= 1 and m ** (2 * s) == N // k else 0


def _sign(n: int) -> float:
    return -1.0 if n % 2 else 1.0


def _parity_face(y: int, k: int, t: float) -> float:
    """Closed rational head of the series representation at argument y != 0."""
    cth = coth(pi * t)
    gate = 1.0 + _sign(y - 1)
    return (
        -pi * pi / (6.0 * k * y)
        + gate * (pi * pi * cth / (6.0 * k * y) - cth / (2.0 * y * y))
        + 0.5 / (y * y)
    )


@dataclass(frozen=True)
class CoefficientTable:
    """The constant blocks mu(R) and U(R) of the vanishing identities.

    mu(R) belongs to the organization whose exponential content is kept
    inside the I/K integrals; U(R) to the fully expanded one, so that
    U(R) = mu-face(R) with the I/K heads absorbed.  U(0) - mu(0)
    = pi^2 coth(pi t)/(48 t^2) exactly (the head of the K integral at 0).
    """

    k: int
    t: float

    def mu(self, R: int) -> float:
        if R == 0:
            sh = math.sinh(pi * self.t)
            return (
                pi**4 / (90.0 * self.k * self.k)
                + pi * pi / 12.0
                + pi * pi / 4.0
                + pi * pi / (2.0 * sh * sh)
                - pi * pi * coth(pi * self.t) / 4.0
            )
        return _parity_face(R, self.k, self.t)

    def U(self, R: int) -> float:
        t, k = self.t, self.k
        cth = coth(pi * t)
        if R == 0:
            return self.mu(0) + pi * pi * cth / (48.0 * t * t)
        x = pi * R / (2.0 * t)
        return (
            pi * pi / (3.0 * k * R * (math.expm1(2.0 * pi * t)))
            + (1.0 - cth) / (2.0 * R * R)
            - _sign(R) * pi**3 * cth / (12.0 * k * t) * csch(x)
            + _sign(R) * pi * pi * cth / (8.0 * t * t) * cosh_over_sinh2(x)
        )


def _exp_series_terms(t: float, tol: float = 1e-18) -> tuple[np.ndarray, np.ndarray]:
    """(r, w_r) grid with w_r = (-1)^(r-1) e^(-2 pi t r), long enough that
    the omitted weight is below tol."""
    r_max = max(4, int(math.ceil(-math.log(tol) / (2.0 * pi * t))) + 2)
    r = np.arange(1, r_max + 1, dtype=float)
    with np.errstate(under="ignore"):
        w = np.exp(-2.0 * pi * t * r)
    w[1::2] *= -1.0
    return r, w


def _exp_series_part(y: int, k: int, t: float) -> float:
    """The three exponential r-series of the expanded representation,
    combined, at argument y = N + c."""
    cth = coth(pi * t)
    r, w = _exp_series_terms(t)
    d = 4.0 * t * t * r * r + float(y) * y
    s1 = float(np.sum(w / d))
    s2 = float(np.sum(w * r / d))
    s3 = float(np.sum(w * (4.0 * t * t * r * r - float(y) * y) / (d * d)))
    return -y * pi * pi * cth / (3.0 * k) * s1 - 2.0 * pi * t * cth * s2 - cth * s3


def _alternating_signs(n: int) -> np.ndarray:
    """(-1)^r for r = 1..n."""
    s = np.ones(n)
    s[::2] = -1.0
    return s


class BlockTables:
    """Jump-kernel and integral grids for one base (N, k, t).

    g_pos[r-1] = G(r - N), g_neg[r-1] = G(-r - N) for r = 1..r_len, and
    J[q] for q = 0..q_len.  Grids grow on demand and are reused across
    every shift c evaluated against the same base.
    """

    def __init__(self, N: int, k: int, t: float, r_len: int = 0, q_len: int = 0):
        if not t > 0:
            raise ValueError(f"t must be positive, got {t}")
        self.N = int(N)
        self.k = int(k)
        self.t = float(t)
        self.g0 = kernel_g(-self.N, t, k).value
        self.coeffs = CoefficientTable(self.k, self.t)
        self.g_pos = np.empty(0)
        self.g_neg = np.empty(0)
        self.J = np.empty(0)
        self.ensure(max(r_len, 8), max(q_len, 8))

    def ensure(self, r_len: int, q_len: int) -> None:
        if r_len > len(self.g_pos):
            r = np.arange(1, r_len + 1, dtype=float)
            self.g_pos = g_values(r - self.N, self.t, self.k)
            self.g_neg = g_values(-r - self.N, self.t, self.k)
            self.sgn = _alternating_signs(r_len)
            self.sg_pos = self.sgn * self.g_pos
            self.sg_neg = self.sgn * self.g_neg
        if q_len >= len(self.J):
            self.J = j_values(q_len, self.t)

    def gpart(self, c: int, r_len: int) -> float:
        """The bilateral G-series at shift c, truncated at r_len."""
        self.ensure(r_len, r_len + abs(c) + 1)
        J = self.J
        c = int(c)
        ac = abs(c)
        total = self.g0 * float(J[ac])
        # sum_r sgn_r g_pos[r] J[|r+c|]
        if c >= 0:
            total += float(np.dot(self.sg_pos[:r_len], J[c + 1 : c + r_len + 1]))
        else:
            head = min(ac, r_len)
            total += float(np.dot(self.sg_pos[:head], J[ac - 1 :: -1][:head]))
            if r_len > head:
                total += float(np.dot(self.sg_pos[head:r_len], J[1 : r_len - ac + 1]))
        # sum_r sgn_r g_neg[r] J[|r-c|]
        if c <= 0:
            total += float(np.dot(self.sg_neg[:r_len], J[ac + 1 : ac + r_len + 1]))
        else:
            head = min(ac, r_len)
            total += float(np.dot(self.sg_neg[:head], J[ac - 1 :: -1][:head]))
            if r_len > head:
                total += float(np.dot(self.sg_neg[head:r_len], J[1 : r_len - ac + 1]))
        return math.sinh(pi * self.t) / (4.0 * math.sqrt(self.k)) * _sign(c) * total


def _default_r_len(N: int, c: int, t: float) -> int:
    return abs(c) + abs(N) + max(1500, int(900 / t))


def block_value(tables: BlockTables, c: int, r_len: int | None = None) -> float:
    """Series value at shift c over ``tables``'s base: q_k(N+c)/(N+c)^2
    for N+c >= 1, and 0 for N+c <= 0."""
    if r_len is None:
        r_len = _default_r_len(tables.N, c, tables.t)
    y = tables.N + c
    return (
        tables.coeffs.U(y)
        + _exp_series_part(y, tables.k, tables.t)
        + tables.gpart(c, r_len)
    )


def q_analytic(
    k: int,
    N: int,
    t: float = 1.0,
    policy: TruncationPolicy | None = None,
) -> Evaluation:
    """Convergent-series value of q_k(N)/N^2 for N >= 1.

    Uses the organization with the parity head, the I and K integrals,
    the arctan(tanh)-weighted jump kernel at -N, and the J-weighted
    bilateral jump-kernel series.
    """
    if N < 1:
        raise ValueError(f"N must be a natural number, got {N}")
    if not t > 0:
        raise ValueError(f"t must be positive, got {t}")
    if k < 1:
        raise ValueError(f"k must be a positive integer, got {k}")
    tol = policy.abs_tol if policy is not None else 1e-12
    cth = coth(pi * t)
    face = (
        _parity_face(N, k, t)
        + _sign(N) * pi**3 * cth / (3.0 * k) * integral_i(N, t).value
        + _sign(N) * pi * pi * cth * integral_k(N, t).value
    )
    g0 = kernel_g(-N, t, k)
    face += (
        math.sinh(pi * t)
        * math.atan(math.tanh(pi * t / 2.0))
        / (2.0 * pi * t * math.sqrt(k))
        * g0.value
    )
    r_len = N + max(1500, int(900 / t))
    if policy is not None:
        r_len = min(r_len, policy.max_terms)
    r = np.arange(1, r_len + 1, dtype=float)
    gp = g_values(r - N, t, k)
    gn = g_values(-r - N, t, k)
    J = j_values(r_len, t)
    terms = _alternating_signs(r_len) * (gp + gn) * J[1:]
    coeff = math.sinh(pi * t) / (4.0 * math.sqrt(k))
    series = coeff * float(np.sum(terms))
    # Tail model: past r_len the summand decays at least like r^(-7/2) on
    # the positive side and r^(-4) through the J factor on the negative.
    tail = coeff * float(np.max(np.abs(terms[-64:]))) * r_len / 2.5
    est = tail + max(tol, 1e-15) + abs(face) * 1e-15
    return Evaluation(face + series, est, {"r_terms": r_len}, g0.overflow_guarded)


def classify_unit(value: float, residual_tol: float = 0.25) -> tuple[int, float]:
    """Round a should-be-indicator value to {0, 1}; the residual is the
    distance to the rounded target.  Raises AmbiguousClassification when
    the residual reaches ``residual_tol``."""
    bit = 1 if value >= 0.5 else 0
    residual = abs(value - bit)
    if residual >= residual_tol:
        raise AmbiguousClassification(
            f"value {value} is {residual:.3f} away from both 0 and 1"
        )
    return bit, residual


def q_classify(k: int, N: int, t: float = 1.0) -> tuple[int, float]:
    """Classify N by rounding N^2 times the series value of q_k(N)/N^2."""
    ev = q_analytic(k, N, t)
    return classify_unit(N * N * ev.value)


def zero_identity_residual(
    k: int,
    N: int,
    t: float = 1.0,
    policy: TruncationPolicy | None = None,
) -> float:
    """|series representation at a nonpositive argument|, which the
    vanishing identity says is 0.  Requires N <= 0."""
    if N > 0:
        raise ValueError(f"N must be <= 0, got {N}")
    if not t > 0:
        raise ValueError(f"t must be positive, got {t}")
    cth = coth(pi * t)
    table = CoefficientTable(k, t)
    face = table.mu(N)
    face += _sign(N) * pi**3 * cth / (3.0 * k) * integral_i(N, t).value
    face += _sign(N) * pi * pi * cth * integral_k(N, t).value
    face += (
        math.sinh(pi * t)
        * math.atan(math.tanh(pi * t / 2.0))
        / (2.0 * pi * t * math.sqrt(k))
        * kernel_g(-N, t, k).value
    )
    r_len = abs(N) + max(1500, int(900 / t))
    if policy is not None:
        r_len = min(r_len, policy.max_terms)
    r = np.arange(1, r_len + 1, dtype=float)
    gp = g_values(r - N, t, k)
    gn = g_values(-r - N, t, k)
    J = j_values(r_len, t)
    series = math.sinh(pi * t) / (4.0 * math.sqrt(k)) * float(
        np.sum(_alternating_signs(r_len) * (gp + gn) * J[1:])
    )
    return abs(face + series)


def _p_weights(t: float) -> tuple[np.ndarray, np.ndarray]:
    """(n, c_n) with n = 2m+1 and c_n = (-1)^m n e^(-pi t n)."""
    m_max = max(2, int(math.ceil(42.0 / (pi * t))))
    m = np.arange(0, m_max + 1)
    n = 2.0 * m + 1.0
    with np.errstate(under="ignore"):
        c = n * np.exp(-pi * t * n)
    c[1::2] *= -1.0
    return n, c


def _p_series(q: float, t: float, grid: tuple[np.ndarray, np.ndarray]) -> float:
    """sum_m (-1)^m (2m+1) e^(-pi t(2m+1)) / (t^2 (2m+1)^2 + q^2)."""
    n, c = grid
    return float(np.sum(c / (t * t * n * n + q * q)))


def q_shifted_analytic(
    k: int,
    N: int,
    c: int,
    t: float = 1.0,
    policy: TruncationPolicy | None = None,
) -> Evaluation:
    """Fully expanded shifted representation at base N and shift c.

    All integrals are expanded: the closed head U(N+c), the three
    exponential r-series, the sech-weighted bilateral G sums, and the
    one-signed double G sums.  Returns ~q_k(N+c)/(N+c)^2 when N+c >= 1
    and ~0 when N+c <= 0 (the vanishing branch).
    """
    if N < 1:
        raise ValueError(f"N must be a natural number, got {N}")
    if not t > 0:
        raise ValueError(f"t must be positive, got {t}")
    tol = policy.abs_tol if policy is not None else 1e-12
    y = N + c
    table = CoefficientTable(k, t)
    head = table.U(y) + _exp_series_part(y, k, t)

    grid = _p_weights(t)
    g0 = kernel_g(-N, t, k)
    sech_block = g0.value * sech(pi * c / (2.0 * t))
    p_block = g0.value * _p_series(float(c), t, grid)
    r_len = abs(c) + N + max(1200, int(700 / t))
    if policy is not None:
        r_len = min(r_len, policy.max_terms)
    guarded = g0.overflow_guarded
    for r in range(1, r_len + 1):
        gp = kernel_g(r - N, t, k)
        gn = kernel_g(-r - N, t, k)
        guarded = guarded or gp.overflow_guarded or gn.overflow_guarded
        s = _sign(r)
        sech_block += s * (
            gp.value * sech(pi * (r + c) / (2.0 * t))
            + gn.value * sech(pi * (r - c) / (2.0 * t))
        )
        p_block += gp.value * _p_series(float(r + c), t, grid) + gn.value * _p_series(
            float(r - c), t, grid
        )
    sh = math.sinh(pi * t)
    gpart = _sign(c) * sh / (8.0 * math.sqrt(k) * t) * sech_block
    gpart -= t * sh / (2.0 * math.sqrt(k) * pi) * p_block
    est = max(tol, 1e-14) + (abs(head) + abs(gpart)) * 1e-14 + 3.0 / r_len**2.5
    return Evaluation(head + gpart, est, {"r_terms": r_len}, guarded)


def _h_power_series(z: float, k: int, s: int, t: float) -> float:
    """sum_n 1/(k^2 n^(4s) ((k n^(2s) + z)^2 + t^2)), the bracket series
    of the general-power generating function."""
    total = 0.0
    n = 0
    k2 = k * k
    while True:
        n += 1
        kn = k * float(n) ** (2 * s)
        term = 1.0 / (k2 * float(n) ** (4 * s) * ((kn + z) ** 2 + t * t))
        total += term
        if kn > abs(z) + 1.0 and term < 1e-18 * max(total, 1e-300):
            break
        if n > 10**6:
            break
    return total


def q_general_analytic(
    k: int,
    s: int,
    N: int,
    t: float = 1.0,
    policy: TruncationPolicy | None = None,
) -> Evaluation:
    """Series value of q_{k,s}(N)/N^2 via the general-power generating
    series, for N >= 1, s >= 1."""
    if N < 1 or s < 1 or k < 1:
        raise ValueError("need N >= 1, s >= 1, k >= 1")
    if not t > 0:
        raise ValueError(f"t must be positive, got {t}")
    r_len = N + max(2500, int(1200 / t))
    if policy is not None:
        r_len = min(r_len, policy.max_terms)
    J = j_values(r_len, t)
    total = 0.0
    for r in range(1, r_len + 1):
        h = _h_power_series(float(r - N), k, s, t) + _h_power_series(float(-r - N), k, s, t)
        total += _sign(r) * h * J[r]
    sh = math.sinh(pi * t)
    value = t * sh / pi * total
    value += 2.0 * _h_power_series(float(-N), k, s, t) * sh * math.atan(
        math.tanh(pi * t / 2.0)
    ) / (pi * pi)
    est = (policy.abs_tol if policy is not None else 1e-9) + 20.0 / r_len**2
    return Evaluation(value, est, {"r_terms": r_len})

"""Cosine sums ``sigma(a, b)(alpha) = sum_{a<=n<=b} cos(alpha n)/n`` and the
bounds built from them.

Real summation limits select the integers ``ceil(a) <= n <= floor(b)``.
The chain that bounds ``sigma(q^gamma, q^(1/3+eps))`` from below splits the
range at ``v = p(2m+1)`` with ``m = ceil(q^gamma)`` and ``p`` the largest odd
integer not above ``q^(1/3+eps)/(2m+1)``:

* ``sigma(m+1, v)(alpha) >= -5 - 1/(2q)``,
* the tail ``|sigma(v, top)| <= (top - v)/v <= 2``,
* the doubly counted term ``cos(alpha v)/v`` is at most 1 in size,

giving the assembled floor ``-8 - 1/(2q)``.  Every constant reported here
is measured; only the chain floor and the residual ceilings derived from
it are used as pass/fail thresholds.
"""

from dataclasses import dataclass
from math import ceil, cos, floor, fsum, log, pi
from typing import NamedTuple

import numpy as np

from .errors import RangeTooShortError
from .settings import FOURIER_TERMS, MAX_TRIG_UPPER, qpow

#: eq. (1) residual ceiling: chain floor 8 + 1/(2q), plus at most 1 from
#: replacing the harmonic sum over the range by its logarithm.
EQ1_RESIDUAL_CEILING = 9.0
#: eq. (2) residual ceiling: (2/pi) times the above, plus 1 of slack for the
#: boundary terms of the harmonic sum.
EQ2_RESIDUAL_CEILING = 2 / pi * 9 + 1


def index_bounds(lower, upper):
    return ceil(lower), floor(upper)


def _n(lower, upper):
    lo, hi = index_bounds(lower, upper)
    if hi > MAX_TRIG_UPPER:
        raise ValueError(f"upper limit {upper} exceeds work bound {MAX_TRIG_UPPER}")
    return np.arange(max(lo, 1), hi + 1, dtype=float) if hi >= lo else np.zeros(0)


def sigma(lower, upper, alpha):
    """``sum cos(alpha n)/n`` over integers lower <= n <= upper, correctly rounded."""
    n = _n(lower, upper)
    return fsum((np.cos(alpha * n) / n).tolist())


def harmonic(lower, upper):
    n = _n(lower, upper)
    return fsum((1 / n).tolist())


def one_minus_cos_sum(lower, upper, alpha):
    n = _n(lower, upper)
    # 1 - cos x = 2 sin^2(x/2) keeps small-angle terms accurate
    return fsum((2 * np.sin(alpha * n / 2) ** 2 / n).tolist())


def abs_sin_sum(lower, upper, alpha):
    n = _n(lower, upper)
    return fsum((np.abs(np.sin(alpha * n)) / n).tolist())


@dataclass(frozen=True)
class TrigSumSpec:
    lower: float
    upper: float
    alpha: float

    def __post_init__(self):
        if self.lower <= 0 or self.upper <= 0:
            raise ValueError("summation limits must be positive")

    @property
    def value(self):
        return sigma(self.lower, self.upper, self.alpha)


@dataclass(frozen=True)
class SplitPoints:
    q: int
    gamma: float
    epsilon: float
    m_bar: int
    p_bar: int
    v_bar: int
    top: float  # q^(1/3 + eps)
    precondition_ok: bool

    @property
    def bottom(self):
        return qpow(self.q, self.gamma)


def precondition_holds(q, gamma, epsilon):
    return qpow(q, 1 / 3 + epsilon) >= 5 * qpow(q, gamma) + 6


def split_points(q, gamma, epsilon, strict=True):
    """Split the range [q^gamma, q^(1/3+eps)] at ``v = p(2m+1)``.

    Raises :class:`RangeTooShortError` when q^(1/3+eps) < 5 q^gamma + 6
    unless ``strict`` is false, in which case the construction is still
    carried out (when it makes sense) and flagged.
    """
    top = qpow(q, 1 / 3 + epsilon)
    ok = top >= 5 * qpow(q, gamma) + 6
    if not ok and strict:
        raise RangeTooShortError(
            f"q^(1/3+eps) = {top:.4g} < 5 q^gamma + 6 = {5 * qpow(q, gamma) + 6:.4g} "
            f"at q={q}, gamma={gamma}, eps={epsilon}"
        )
    m = ceil(qpow(q, gamma))
    f = floor(top / (2 * m + 1))
    p = f - 1 if f % 2 == 0 else f
    if p < 1:
        raise RangeTooShortError(f"no odd p >= 1 fits under q^(1/3+eps) at q={q}")
    return SplitPoints(q, gamma, epsilon, m, p, p * (2 * m + 1), top, ok)


class Eq4Check(NamedTuple):
    value: float
    bound: float
    holds: bool


def lower_bound_eq4(m, p, alpha, q):
    """``sigma(m+1, v)(alpha)`` against ``-5 - 1/(2q)`` with v = p(2m+1)."""
    if p % 2 != 1 or p < 1:
        raise ValueError(f"p must be a positive odd integer, got {p}")
    v = p * (2 * m + 1)
    value = sigma(m + 1, v, alpha)
    bound = -5 - 1 / (2 * q)
    return Eq4Check(value, bound, value >= bound)


def eq4_sweep(m_values, p_values, alphas, q):
    """Minimum margin ``value - bound`` over a grid, with its location."""
    worst = None
    for m in m_values:
        for p in p_values:
            for alpha in alphas:
                c = lower_bound_eq4(m, p, alpha, q)
                margin = c.value - c.bound
                if worst is None or margin < worst[0]:
                    worst = (margin, m, p, alpha, c)
    return worst


class Eq3Report(NamedTuple):
    value: float
    chain_bound: float
    holds: bool
    identity_residual: float
    head: float  # sigma(m+1, v)
    tail: float  # sigma(v, top)
    split: SplitPoints


def chain_floor(q):
    return -(5 + 1 / (2 * q)) - 2 - 1


def sigma_lower_bound_eq3(q, gamma, epsilon, alpha, strict=True):
    sp = split_points(q, gamma, epsilon, strict=strict)
    lower, top, v = qpow(q, gamma), sp.top, sp.v_bar
    value = sigma(lower, top, alpha)
    left = sigma(lower, v, alpha)
    tail = sigma(v, top, alpha)
    regrouped = left + tail - cos(alpha * v) / v
    bound = chain_floor(q)
    return Eq3Report(
        value,
        bound,
        value >= bound,
        abs(value - regrouped),
        sigma(sp.m_bar + 1, v, alpha),
        tail,
        sp,
    )


@dataclass(frozen=True)
class LemmaBoundReport:
    q: int
    gamma: float
    epsilon: float
    alpha: float
    lhs: float
    main_term: float
    residual: float


def _span(q, gamma, epsilon):
    return (1 / 3 - gamma + epsilon) * log(q)


def lemma_eq1(q, gamma, epsilon, alpha):
    """``sum (1 - cos(alpha n))/n`` over q^gamma <= n <= q^(1/3+eps)."""
    split_points(q, gamma, epsilon)
    lhs = one_minus_cos_sum(qpow(q, gamma), qpow(q, 1 / 3 + epsilon), alpha)
    main = _span(q, gamma, epsilon)
    return LemmaBoundReport(q, gamma, epsilon, alpha, lhs, main, lhs - main)


def lemma_eq2(q, gamma, epsilon, alpha):
    """``sum |sin(alpha n)|/n`` over q^gamma <= n <= q^(1/3+eps), |sin| taken directly."""
    split_points(q, gamma, epsilon)
    lhs = abs_sin_sum(qpow(q, gamma), qpow(q, 1 / 3 + epsilon), alpha)
    main = 2 / pi * _span(q, gamma, epsilon)
    return LemmaBoundReport(q, gamma, epsilon, alpha, lhs, main, lhs - main)


def eq2_consistency_bound(q, gamma, epsilon):
    """Bound on the |sin| sum implied by the cosine series and the chain floor.

    |sin x| = 2/pi - 4/pi sum cos(2mx)/(4m^2-1) and sum 1/(4m^2-1) = 1/2, so
    the |sin| sum is at most (2/pi) H + (2/pi) C with H the harmonic sum over
    the range and C = -chain_floor(q).
    """
    H = harmonic(qpow(q, gamma), qpow(q, 1 / 3 + epsilon))
    return 2 / pi * H + 4 / pi * 0.5 * (-chain_floor(q))


def telescoping_sum(M):
    """``sum_{m=1}^M 1/(4m^2 - 1)``; equals M/(2M+1)."""
    m = np.arange(1, M + 1, dtype=float)
    return fsum((1 / (4 * m * m - 1)).tolist())


def abs_sin_fourier(theta, M=FOURIER_TERMS):
    """Truncated cosine series of ``|sin theta|`` and its worst-case tail.

    Returns ``(approx, bound)`` with ``|approx - |sin theta|| <= bound =
    (2/pi)/(2M+1)``; the bound is attained at theta = 0.
    """
    if M < 1:
        raise ValueError("M must be >= 1")
    m = np.arange(1, M + 1, dtype=float)
    s = fsum((np.cos(2 * m * theta) / (4 * m * m - 1)).tolist())
    approx = 2 / pi - 4 / pi * s
    return approx, 2 / pi / (2 * M + 1)

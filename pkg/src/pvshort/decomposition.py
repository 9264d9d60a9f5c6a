"""Three-way split of the inverted character sum.

After Gauss-sum inversion, ``|sum_{n<=N} chi(n)|`` is at most
``sqrt(q)/(2 pi) |inner| + kernel remainder`` where

    inner = sum_{0<|a|<q/2} conj chi(a) (e(aN/q) - 1) / a.

``inner`` is cut at ``|a| = q^gamma/(2 pi)`` and ``|a| = q^(1/3+eps)`` into
``sigma1`` (small a), ``sigma2`` (middle) and ``sigma3`` (large a).  Both
cut points belong to the middle part.
"""

import json
from dataclasses import asdict, dataclass
from fractions import Fraction
from math import ceil, floor, log, pi, sqrt
from typing import NamedTuple, Tuple

import numpy as np

from . import triglemma
from .characters import EVEN, CharacterLabel, is_primitive, parity, values
from .charsums import gauss_sum, inversion_kernel, prefix_sums
from .errors import (
    HypothesisViolationError,
    ImprimitiveCharacterError,
    RangeTooShortError,
)
from .numerics import compensated_cumsum, csum
from .settings import qpow

__all__ = [
    "DecompositionReport",
    "HildebrandRecord",
    "decompose",
    "sigma1_parity_form",
    "small_angle_bounds",
    "sigma2_bound",
    "sigma3_via_partial_summation",
    "hildebrand_quantity",
    "theorem_constant",
    "theorem_ratio",
]


def theorem_constant(par):
    """Leading constant c: 2/pi^2 for even characters, 1/pi for odd ones."""
    return 2 / pi**2 if par == EVEN else 1 / pi


def sigma2_main_term(par, q, gamma, epsilon):
    span = (1 / 3 - gamma + epsilon) * log(q)
    return 4 / pi * span if par == EVEN else 2 * span


def _check(label, N, gamma, epsilon=None, enforce=True):
    if not is_primitive(label):
        raise ImprimitiveCharacterError(f"{label} is not primitive")
    if not 0 <= gamma <= 1 / 3:
        raise HypothesisViolationError(f"gamma = {gamma} outside [0, 1/3]")
    if epsilon is not None and epsilon <= 0:
        raise HypothesisViolationError(f"epsilon must be positive, got {epsilon}")
    if not 1 <= N <= label.q - 1:
        raise HypothesisViolationError(f"N = {N} outside 1..q-1 for q = {label.q}")
    ok = N <= qpow(label.q, 1 - gamma)
    if enforce and not ok:
        raise HypothesisViolationError(
            f"N = {N} exceeds q^(1-gamma) = {qpow(label.q, 1 - gamma):.6g}"
        )
    return ok


def _phase_minus_one(q, a, N):
    """``e(aN/q) - 1`` for integer arrays a, free of cancellation."""
    x = ((a * N) % q) / q
    return -2 * np.sin(np.pi * x) ** 2 + 1j * np.sin(2 * np.pi * x)


class _Terms(NamedTuple):
    a: np.ndarray  # 1..h
    pos: np.ndarray  # conj chi(a) (e(aN/q) - 1)
    neg: np.ndarray  # conj chi(-a) (e(-aN/q) - 1)


def _terms(label, N):
    q = label.q
    h = (q - 1) // 2
    a = np.arange(1, h + 1, dtype=np.int64)
    cbar = values(label, conjugate=True)
    d = _phase_minus_one(q, a, N)
    # e(-x) - 1 is the conjugate of e(x) - 1
    return _Terms(a, cbar[a] * d, cbar[q - a] * np.conj(d))


def _cuts(q, gamma, epsilon):
    return qpow(q, gamma) / (2 * pi), qpow(q, 1 / 3 + epsilon)


@dataclass(frozen=True)
class DecompositionReport:
    label: CharacterLabel
    N: int
    gamma: float
    epsilon: float
    parity: str
    sigma1: complex
    sigma2: complex
    sigma3: complex
    full_inner: complex
    direct_s: float
    reconstructed_bound: float  # sqrt(q)/(2 pi) * (|s1| + |s2| + |s3|)
    kernel_remainder: float
    per_part_bounds: Tuple[float, float, float]
    hypothesis_ok: bool = True

    @property
    def partition_residual(self):
        return abs(self.sigma1 + self.sigma2 + self.sigma3 - self.full_inner)

    def partition_ok(self, rtol=1e-9):
        return self.partition_residual <= rtol * (1 + abs(self.full_inner))

    def to_dict(self):
        d = asdict(self)
        d["label"] = str(self.label)
        for k in ("sigma1", "sigma2", "sigma3", "full_inner"):
            z = getattr(self, k)
            d[k] = [z.real, z.imag]
        d["per_part_bounds"] = list(self.per_part_bounds)
        return d

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        d["label"] = CharacterLabel.parse(d["label"])
        for k in ("sigma1", "sigma2", "sigma3", "full_inner"):
            d[k] = complex(*d[k])
        d["per_part_bounds"] = tuple(d["per_part_bounds"])
        return cls(**d)

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

    CSV_HEADER = (
        "q", "label", "N", "gamma", "epsilon", "parity", "abs_sigma1", "abs_sigma2",
        "abs_sigma3", "abs_full_inner", "direct_s", "reconstructed_bound",
        "kernel_remainder", "b1", "b2", "b3", "hypothesis_ok",
    )

    def csv_row(self):
        return [
            self.label.q, str(self.label), self.N, repr(self.gamma), repr(self.epsilon),
            self.parity, repr(abs(self.sigma1)), repr(abs(self.sigma2)),
            repr(abs(self.sigma3)), repr(abs(self.full_inner)), repr(self.direct_s),
            repr(self.reconstructed_bound), repr(self.kernel_remainder),
            *(repr(b) for b in self.per_part_bounds), str(self.hypothesis_ok).lower(),
        ]


def _sigma1_majorant(par, q, N, gamma):
    """Closed-form bound on |sigma1| from |sin x| <= |x| and 1 - cos x <= x^2/2."""
    A = qpow(q, gamma) / (2 * pi)
    K = max(0, ceil(A) - 1)  # integers 1 <= a < A
    x = 2 * pi * N / q
    if par == EVEN:
        return 2 * x * K
    return x * x * K * (K + 1) / 2


class Sigma3Bound(NamedTuple):
    value: float
    majorant: float
    paper_form: float  # log q * max |C+(x)|/x


def _sigma3(label, N, epsilon, terms):
    q = label.q
    a = terms.a
    h = len(a)
    A = floor(qpow(q, 1 / 3 + epsilon))
    if A >= h:
        return Sigma3Bound(0.0, 0.0, 0.0)
    sel = a > A
    value = abs(csum(np.concatenate([terms.pos[sel] / a[sel], -terms.neg[sel] / a[sel]])))
    xs = a[A - 1:]  # cut points A..h
    mp = np.max(np.abs(compensated_cumsum(terms.pos)[A - 1:]) / xs)
    mn = np.max(np.abs(compensated_cumsum(terms.neg)[A - 1:]) / xs)
    # Abel summation over A < a <= h, applied to each sign separately
    majorant = (mp + mn) * (2 + log(h / (A + 1)))
    return Sigma3Bound(value, float(majorant), float(log(q) * mp))


def sigma3_via_partial_summation(label, N, epsilon, gamma=0.0):
    """|sigma3| and its partial-summation majorant.

    The majorant is ``(M+ + M-)(2 + log(h/(A+1)))`` where ``A = floor(q^(1/3+eps))``,
    ``h = floor((q-1)/2)`` and ``M+-`` is the largest ``|C(x)|/x`` over
    integers A <= x <= h for the running sums ``C`` of the positive and
    negative halves.  It dominates |sigma3| by Abel summation.
    """
    _check(label, N, gamma, epsilon)
    return _sigma3(label, N, epsilon, _terms(label, N))


def decompose(label, N, gamma, epsilon, enforce_hypothesis=True):
    hyp = _check(label, N, gamma, epsilon, enforce_hypothesis)
    q = label.q
    par = parity(label)
    t = _terms(label, N)
    a = t.a
    lo, hi = _cuts(q, gamma, epsilon)
    inv_a = 1.0 / a
    pos = t.pos * inv_a
    neg = -t.neg * inv_a
    parts = []
    for sel in (a < lo, (a >= lo) & (a <= hi), a > hi):
        parts.append(csum(np.concatenate([pos[sel], neg[sel]])))
    full = csum(np.concatenate([pos, neg]))

    # exact remainder of replacing the kernel by q/(2 pi i a)
    tau = gauss_sum(label, conjugate=True).value
    r_pos = inversion_kernel(q, a) - q / (2j * pi * a)
    r_neg = inversion_kernel(q, -a) - q / (2j * pi * -a)
    remainder = abs(csum(np.concatenate([t.pos * r_pos, t.neg * r_neg])) / tau)

    s3 = _sigma3(label, N, epsilon, t)
    b = (
        _sigma1_majorant(par, q, N, gamma),
        sigma2_main_term(par, q, gamma, epsilon),
        s3.majorant,
    )
    direct = prefix_sums(label).S(N)
    return DecompositionReport(
        label, int(N), gamma, epsilon, par, *parts, full, float(direct),
        sqrt(q) / (2 * pi) * sum(abs(z) for z in parts), float(remainder), b, hyp,
    )


def sigma1_parity_form(label, N, gamma):
    """sigma1 summed over 1 <= a < q^gamma/(2 pi) only, in its parity form.

    Even: ``2i sum conj chi(a) sin(2 pi a N/q)/a``;
    odd: ``-2 sum conj chi(a) (1 - cos(2 pi a N/q))/a``.
    """
    _check(label, N, gamma)
    q = label.q
    A = qpow(q, gamma) / (2 * pi)
    a = np.arange(1, max(1, ceil(A)), dtype=np.int64)
    if not len(a):
        return 0j
    cbar = values(label, conjugate=True)[a]
    x = ((a * N) % q) / q
    if parity(label) == EVEN:
        terms = 2j * cbar * np.sin(2 * np.pi * x) / a
    else:
        terms = -2 * cbar * (2 * np.sin(np.pi * x) ** 2) / a
    return csum(terms)


def small_angle_bounds(x):
    """``(|sin x| <= |x|, 1 - cos x <= x^2/2)`` for |x| < 1."""
    if abs(x) >= 1:
        raise ValueError(f"|x| = {abs(x)} is not below 1")
    return abs(np.sin(x)) <= abs(x), 2 * np.sin(x / 2) ** 2 <= x * x / 2


class Sigma2Bound(NamedTuple):
    value: float
    main_term: float
    residual: float
    majorant: float  # 2 * trig-lemma sum over [q^gamma/(2 pi), q^(1/3+eps)]
    shift_excess: float  # that sum minus the same sum started at q^gamma


def sigma2_bound(label, N, gamma, epsilon):
    _check(label, N, gamma, epsilon)
    q = label.q
    lo, hi = _cuts(q, gamma, epsilon)
    if ceil(lo) > min(floor(hi), (q - 1) // 2):
        raise RangeTooShortError(f"middle range [{lo:.4g}, {hi:.4g}] holds no a for q={q}")
    rep = decompose(label, N, gamma, epsilon)
    alpha = 2 * pi * N / q
    if rep.parity == EVEN:
        f = triglemma.abs_sin_sum
    else:
        f = triglemma.one_minus_cos_sum
    shifted = f(max(lo, 1.0), hi, alpha)
    unshifted = f(qpow(q, gamma), hi, alpha)
    value = abs(rep.sigma2)
    main = rep.per_part_bounds[1]
    return Sigma2Bound(value, main, value - main, 2 * shifted, shifted - unshifted)


@dataclass(frozen=True)
class HildebrandRecord:
    label: CharacterLabel
    x: float
    alpha: float
    value: float
    normalized: float  # value * log q / x


def hildebrand_quantity(label, x, alpha):
    """``|sum_{n<=x} chi(n) e(alpha n)|``.

    A :class:`fractions.Fraction` alpha is reduced exactly modulo 1 before
    conversion; floats are reduced in floating point.
    """
    q = label.q
    if not 1 <= x <= q:
        raise ValueError(f"need 1 <= x <= q, got x={x}")
    n = np.arange(1, floor(x) + 1, dtype=np.int64)
    chi = values(label)[n % q]
    if isinstance(alpha, Fraction):
        frac = ((n * alpha.numerator) % alpha.denominator) / alpha.denominator
    else:
        frac = np.mod(alpha * n.astype(float), 1.0)
    value = abs(csum(chi * np.exp(2j * np.pi * frac)))
    return HildebrandRecord(label, float(x), float(alpha), value, value * log(q) / x)


def theorem_ratio(label, N, gamma, epsilon):
    """``(S(N, chi) / (sqrt(q) log q), c (1/3 - gamma + eps))``."""
    _check(label, N, gamma, epsilon)
    q = label.q
    S = float(prefix_sums(label).S(N))
    return S / (sqrt(q) * log(q)), theorem_constant(parity(label)) * (1 / 3 - gamma + epsilon)

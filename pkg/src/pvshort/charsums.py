"""Prefix character sums, Gauss sums, and the finite Fourier inversion.

The inversion

    sum_{n<=N} chi(n) = tau(conj chi)^-1 * sum_{0<|a|<q/2} conj chi(a)
                        * (e(aN/q) - 1) / (1 - e(-a/q))

holds exactly for primitive chi, so evaluating its right-hand side and
comparing with the directly accumulated prefix sum is an independent check
on both the character tables and the summation.
"""

import csv
from dataclasses import dataclass, field
from functools import lru_cache
from math import lcm, pi

import numpy as np

from .characters import CharacterLabel, angle_numerators, is_primitive, values
from .errors import ImprimitiveCharacterError
from .numerics import compensated_cumsum, csum, first_argmax

__all__ = [
    "SumProfile",
    "GaussSumResult",
    "prefix_sums",
    "gauss_sum",
    "reconstruct_via_inversion",
    "inversion_kernel",
    "kernel_approx_error",
    "write_profile_csv",
]


@dataclass(frozen=True, eq=False)
class SumProfile:
    """Signed prefix sums of one character.

    ``partials[N]`` is ``sum_{n=1}^N chi(n)`` for 0 <= N <= q-1 (index 0 is
    the empty sum).  ``max_abs``/``argmax_n`` range over 1 <= N <= q-1.
    """

    label: CharacterLabel
    partials: np.ndarray = field(repr=False)
    max_abs: float
    argmax_n: int

    def S(self, N):
        return float(abs(self.partials[N]))


@dataclass(frozen=True)
class GaussSumResult:
    label: CharacterLabel
    value: complex
    modulus_check: float  # |tau|^2 - q


def prefix_sums(label):
    vals = values(label)
    vals[0] = 0.0  # n = q contributes chi(q) = 0 and is not part of the range
    partials = compensated_cumsum(vals)
    partials.flags.writeable = False
    mags = np.abs(partials[1:])
    i = first_argmax(mags)
    return SumProfile(label, partials, float(mags.max()), i + 1)


def write_profile_csv(profile, fh):
    """Write ``N,re,im,abs`` rows for N = 1..q-1 to an open text file."""
    w = csv.writer(fh)
    w.writerow(["N", "re", "im", "abs"])
    p = profile.partials
    for N in range(1, len(p)):
        z = complex(p[N])
        w.writerow([N, repr(z.real), repr(z.imag), repr(abs(z))])


def gauss_sum(label, conjugate=False):
    """``tau(chi) = sum_{a=1}^{q-1} chi(a) e(a/q)`` (of ``conj chi`` if asked).

    Angles are combined exactly as integers over lcm(L, q) before a single
    conversion to floating point per term.
    """
    q = label.q
    k, L = angle_numerators(label)
    a = np.arange(q, dtype=np.int64)
    unit = k >= 0
    unit[0] = False
    M = lcm(L, q)
    kk = -k if conjugate else k
    ang = (kk[unit] % L) * (M // L) + a[unit] * (M // q)
    ang %= M
    terms = np.exp(2j * np.pi * (ang / M))
    tau = csum(terms)
    return GaussSumResult(label, tau, abs(tau) ** 2 - q)


def inversion_kernel(q, a):
    """``1 / (1 - e(-a/q))`` for integer arrays ``a``, without cancellation."""
    theta = 2 * np.pi * (np.asarray(a, dtype=float) / q)
    den = 2 * np.sin(theta / 2) ** 2 + 1j * np.sin(theta)
    return 1 / den


def kernel_approx_error(q, a):
    """``|1/(1 - e(-a/q)) - q/(2 pi i a)|`` for 0 < |a| < q/2."""
    if a % q == 0:
        raise ValueError(f"a = {a} is a pole of the kernel mod {q}")
    if not 0 < abs(a) < q / 2:
        raise ValueError(f"need 0 < |a| < q/2, got a={a}, q={q}")
    k = complex(inversion_kernel(q, a))
    return abs(k - q / (2j * pi * a))


def _symmetric_reps(q):
    h = (q - 1) // 2
    pos = np.arange(1, h + 1, dtype=np.int64)
    return np.concatenate([pos, -pos])


def _inversion_coefficients(label):
    """Per-a factor ``conj chi(a) / (1 - e(-a/q))`` and ``tau(conj chi)``."""
    q = label.q
    a = _symmetric_reps(q)
    cbar = values(label, conjugate=True)[a % q]
    return a, cbar * inversion_kernel(q, a), gauss_sum(label, conjugate=True).value


@lru_cache(maxsize=2)
def _phase_matrix(q):
    """``e(aN/q) - 1`` for N = 1..q-1 (rows) and the symmetric a (columns)."""
    a = _symmetric_reps(q)
    N = np.arange(1, q, dtype=np.int64)
    roots = np.exp(2j * np.pi * (np.arange(q) / q))
    m = roots[np.outer(N, a) % q] - 1
    m.flags.writeable = False
    return m


def reconstruct_via_inversion(label, N=None):
    """Right-hand side of the Gauss-sum inversion of ``sum_{n<=N} chi(n)``.

    With ``N`` an integer the sum over a is accumulated with exact rounding.
    With ``N=None`` an array over every N = 1..q-1 is returned (index N-1).
    """
    if not is_primitive(label):
        raise ImprimitiveCharacterError(f"{label} is not primitive")
    q = label.q
    a, coef, tau = _inversion_coefficients(label)
    if N is None:
        return (_phase_matrix(q) @ coef) / tau
    N = int(N)
    roots = np.exp(2j * np.pi * (((a * N) % q) / q))
    return csum(coef * (roots - 1)) / tau


def gauss_modulus_ok(result, rtol=1e-6):
    return abs(result.modulus_check) <= rtol * result.label.q

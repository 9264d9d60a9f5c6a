"""Compensated accumulation helpers."""

from math import fsum

import numpy as np

_BLOCK = 64


def csum(z):
    """Correctly rounded sum of a complex (or real) array, per component."""
    z = np.asarray(z)
    if np.iscomplexobj(z):
        return complex(fsum(z.real.tolist()), fsum(z.imag.tolist()))
    return fsum(z.tolist())


def _cumsum_real(x):
    n = len(x)
    if n == 0:
        return np.zeros(0)
    pad = (-n) % _BLOCK
    blocks = np.concatenate([x, np.zeros(pad)]).reshape(-1, _BLOCK)
    inner = np.cumsum(blocks, axis=1)
    # exact block totals, then a Neumaier running sum of the totals
    offsets = np.empty(len(blocks))
    s = c = 0.0
    for i, row in enumerate(blocks.tolist()):
        offsets[i] = s + c
        t = fsum(row)
        y = s + t
        if abs(s) >= abs(t):
            c += (s - y) + t
        else:
            c += (t - y) + s
        s = y
    return (inner + offsets[:, None]).ravel()[:n]


def compensated_cumsum(x):
    """Running sums of ``x`` with error independent of the length.

    Terms are grouped in blocks of 64: inside a block ordinary cumulative
    summation is used (at most 64 roundings), block totals are summed
    exactly with :func:`math.fsum` and carried with Neumaier compensation.
    Works on real or complex input.
    """
    x = np.asarray(x)
    if np.iscomplexobj(x):
        return _cumsum_real(x.real.astype(float)) + 1j * _cumsum_real(x.imag.astype(float))
    return _cumsum_real(x.astype(float))


def first_argmax(mags, rtol=1e-12):
    """Smallest index whose value is within ``rtol`` of the maximum.

    Partial sums that are equal in exact arithmetic (common for real
    characters) differ by rounding noise; this picks the first of them.
    """
    mags = np.asarray(mags)
    top = mags.max()
    return int(np.flatnonzero(mags >= top - rtol * max(top, 1.0))[0])

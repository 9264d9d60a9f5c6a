"""Shared numeric defaults and limits."""

#: Largest modulus accepted by :func:`pvshort.residues.factorize`.
MAX_MODULUS = 10**7

#: Cap on the summed sizes of the per-prime-power discrete-log tables.
TABLE_ENTRY_BUDGET = 2 * 10**7

DEFAULT_EPSILON = 0.05
GAMMA_STEP = 1 / 30

#: Truncation order for the |sin| cosine series.
FOURIER_TERMS = 10**4

#: Work bound for a single cosine sum.
MAX_TRIG_UPPER = 10**7


def qpow(q, x):
    """``q ** x`` snapped to the nearest integer when within 1e-9 relative.

    Summation bounds such as ``q**(1/3)`` are floored or ceiled; without
    the snap ``10**6 ** (1/3)`` evaluates to 99.99999999999997 and drops
    the integer 100 from a range that should contain it.
    """
    v = float(q) ** x
    r = round(v)
    if abs(v - r) <= 1e-9 * max(1.0, v):
        return float(r)
    return v

"""Dirichlet characters as exponent vectors over the canonical generators.

A character mod q is fixed by where it sends each component generator:
``chi(g_i) = e(k_i / d_i)`` with ``d_i`` the component order.  Values are
kept as exact fractions of a full turn (:class:`UnitAngle`); floating point
only enters when an array of complex values is requested for summation.
"""

import cmath
import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm, pi
from typing import Tuple

import numpy as np

from .errors import InternalConsistencyError, InvalidLabelError
from .residues import residue_group

log = logging.getLogger(__name__)

EVEN = "even"
ODD = "odd"


@dataclass(frozen=True, order=True)
class CharacterLabel:
    q: int
    exponents: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "exponents", tuple(int(k) for k in self.exponents))
        orders = residue_group(self.q).orders
        if len(self.exponents) != len(orders):
            raise InvalidLabelError(
                f"mod {self.q} needs {len(orders)} exponents, got {self.exponents}"
            )
        for k, d in zip(self.exponents, orders):
            if not 0 <= k < d:
                raise InvalidLabelError(f"exponent {k} outside [0, {d}) for q={self.q}")

    def __str__(self):
        return f"{self.q}:" + ",".join(map(str, self.exponents))

    @classmethod
    def parse(cls, text, q=None):
        """Parse ``"q:k1,...,kr"``; with ``q`` given, a bare ``"k1,...,kr"`` also works."""
        text = text.strip()
        if ":" in text:
            head, tail = text.split(":", 1)
            mod = int(head)
            if q is not None and int(q) != mod:
                raise InvalidLabelError(f"label modulus {mod} does not match q={q}")
        elif q is None:
            raise InvalidLabelError(f"label {text!r} has no modulus")
        else:
            mod, tail = int(q), text
        exps = tuple(int(t) for t in tail.split(",") if t.strip())
        return cls(mod, exps)

    @property
    def group(self):
        return residue_group(self.q)

    @property
    def is_principal(self):
        return not any(self.exponents)


@dataclass(frozen=True)
class UnitAngle:
    """The root of unity ``e(numerator / denominator)``, stored reduced in [0, 1)."""

    numerator: int
    denominator: int

    def __post_init__(self):
        if self.denominator <= 0:
            raise ValueError("denominator must be positive")
        f = Fraction(self.numerator % self.denominator, self.denominator)
        object.__setattr__(self, "numerator", f.numerator)
        object.__setattr__(self, "denominator", f.denominator)

    def __add__(self, other):
        f = Fraction(self.numerator, self.denominator) + Fraction(
            other.numerator, other.denominator
        )
        return UnitAngle(f.numerator, f.denominator)

    def __neg__(self):
        return UnitAngle(-self.numerator, self.denominator)

    def __complex__(self):
        n, d = self.numerator, self.denominator
        # exact on the axes
        if n == 0:
            return 1 + 0j
        if d == 2:
            return -1 + 0j
        if d == 4:
            return 1j if n == 1 else -1j
        return cmath.exp(2j * pi * n / d)

    @property
    def fraction(self):
        return Fraction(self.numerator, self.denominator)


@dataclass(frozen=True)
class CharacterProfile:
    label: CharacterLabel
    parity: str
    conductor: int
    is_primitive: bool


def group_exponent(q):
    """lcm of the component orders; every character value is an ``e(k/L)``."""
    return lcm(*residue_group(q).orders) if residue_group(q).orders else 1


def _weights(label):
    L = group_exponent(label.q)
    return [k * (L // d) for k, d in zip(label.exponents, label.group.orders)], L


def evaluate(label, n):
    """``chi(n)`` as a :class:`UnitAngle`, or ``None`` when gcd(n, q) > 1."""
    g = label.group
    n %= label.q
    if gcd(n, label.q) != 1:
        return None
    w, L = _weights(label)
    t = g.exponent_tuple(n)
    return UnitAngle(sum(a * b for a, b in zip(t, w)) % L, L)


def angle_numerators(label):
    """Numerators ``k(n)`` with ``chi(n) = e(k(n)/L)`` for n = 0..q-1.

    Returns ``(k, L)``; ``k[n] = -1`` marks non-units.
    """
    g = label.group
    q = label.q
    w, L = _weights(label)
    n = np.arange(q, dtype=np.int64)
    k = np.zeros(q, dtype=np.int64)
    for t, sl in zip(g.tables, g.slices):
        wt = np.asarray(w[sl], dtype=np.int64)
        if not len(wt):
            continue
        per_residue = (t.table @ wt) % L
        k += per_residue[n % t.modulus]
    k %= L
    k[~g.unit_mask] = -1
    return k, L


@lru_cache(maxsize=256)
def _roots(L):
    r = np.exp(2j * np.pi * (np.arange(L) / L))
    # exact on the axes, so real characters take exactly the values 0, 1, -1
    for j, z in enumerate((1, 1j, -1, complex(0, -1))):
        if j * L % 4 == 0:
            r[j * L // 4] = z
    r.flags.writeable = False
    return r


def values(label, conjugate=False):
    """Complex array of ``chi(n)`` (or its conjugate) for n = 0..q-1."""
    k, L = angle_numerators(label)
    unit = k >= 0
    if conjugate:
        k = np.where(unit, (-k) % L, -1)
    out = np.zeros(label.q, dtype=complex)
    out[unit] = _roots(L)[k[unit]]
    return out


def principal(q):
    return CharacterLabel(q, (0,) * residue_group(q).rank)


def conjugate(label):
    return CharacterLabel(
        label.q, tuple((-k) % d for k, d in zip(label.exponents, label.group.orders))
    )


def all_labels(q):
    """Every character mod q, lexicographic in the exponent tuple."""
    for exps in itertools.product(*(range(d) for d in residue_group(q).orders)):
        yield CharacterLabel(q, exps)


def parity(label):
    a = evaluate(label, label.q - 1)
    if a.numerator == 0:
        return EVEN
    if a == UnitAngle(1, 2):
        return ODD
    raise InternalConsistencyError(f"chi(-1) = e({a.fraction}) for {label}")


def _divisors(q):
    return [d for d in range(1, q + 1) if q % d == 0]


@lru_cache(maxsize=8)
def _kernel_exponents(q, f):
    """Exponent tuples of the units n = 1 (mod f)."""
    g = residue_group(q)
    n = np.arange(1, q + 1, f, dtype=np.int64) % q
    n = n[np.gcd(n, q) == 1]
    m = g.exponent_matrix(n)
    m.flags.writeable = False
    return m


def conductors(labels, chunk_entries=4_000_000):
    """Conductors of several characters sharing one modulus.

    For each divisor f of q in increasing order, a character is trivial on
    the kernel {n unit : n = 1 (mod f)} exactly when it factors through
    (Z/fZ)*; the first such f is the conductor.
    """
    labels = list(labels)
    if not labels:
        return []
    q = labels[0].q
    if any(lab.q != q for lab in labels):
        raise ValueError("labels must share a modulus")
    L = group_exponent(q)
    orders = residue_group(q).orders
    W = np.array(
        [[k * (L // d) for k, d in zip(lab.exponents, orders)] for lab in labels],
        dtype=np.int64,
    ).reshape(len(labels), len(orders))
    out = np.zeros(len(labels), dtype=np.int64)
    for f in _divisors(q):
        todo = np.flatnonzero(out == 0)
        if not len(todo):
            break
        if f == q:
            out[todo] = q
            break
        K = _kernel_exponents(q, f)
        step = max(1, chunk_entries // max(1, len(K)))
        for s in range(0, len(todo), step):
            idx = todo[s:s + step]
            trivial = ~((K @ W[idx].T) % L).any(axis=0)
            out[idx[trivial]] = f
    return [int(c) for c in out]


def conductor(label):
    return conductors([label])[0]


def is_primitive(label):
    return conductor(label) == label.q


def profile(label):
    c = conductor(label)
    return CharacterProfile(label, parity(label), c, c == label.q)


def enumerate_primitive(q):
    """Primitive characters mod q in lexicographic exponent order.

    Empty for q = 1 and q = 2: mod 2 the only character is principal with
    conductor 1, and mod 1 the lone trivial character is excluded by
    convention since it has no bearing on character sums.
    """
    q = int(q)
    if q < 3:
        log.info("no primitive characters considered mod %d", q)
        return []
    labels = list(all_labels(q))
    return [lab for lab, c in zip(labels, conductors(labels)) if c == q]

"""Exact arithmetic on the unit group (Z/qZ)*.

The modulus is factored by trial division, the unit group is split into
cyclic components (one per odd prime power, one or two for the power of
two), and each prime-power factor gets a full discrete-log table so that
the exponent tuple of any unit is a handful of array lookups.

Component order is canonical: the 2-part first (generator -1, then 5),
followed by odd primes in increasing order, each generated by its
smallest primitive root.
"""

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from math import gcd, isqrt, prod
from typing import Tuple

import numpy as np

from .errors import MemoryBudgetError, ModulusRangeError, NotCoprimeError
from .settings import MAX_MODULUS, TABLE_ENTRY_BUDGET

__all__ = [
    "Factorization",
    "Component",
    "GroupDecomposition",
    "DlogTable",
    "ResidueGroup",
    "factorize",
    "decompose",
    "build_dlog_tables",
    "exponent_tuple",
    "residue_group",
]


@dataclass(frozen=True)
class Factorization:
    q: int
    factors: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        if prod(p**e for p, e in self.factors) != self.q:
            raise ValueError(f"factors {self.factors} do not multiply to {self.q}")
        primes = [p for p, _ in self.factors]
        if primes != sorted(set(primes)) or any(e < 1 for _, e in self.factors):
            raise ValueError(f"malformed factor list {self.factors}")

    @property
    def prime_powers(self):
        return tuple(p**e for p, e in self.factors)


@dataclass(frozen=True)
class Component:
    """One cyclic factor of the unit group.

    ``modulus`` is the prime power the component lives in; for q divisible
    by 8 two components share the modulus 2**e.
    """

    modulus: int
    generator: int
    order: int


@dataclass(frozen=True)
class GroupDecomposition:
    q: int
    factorization: Factorization
    components: Tuple[Component, ...]

    @property
    def total_order(self):
        return prod(c.order for c in self.components)

    @property
    def orders(self):
        return tuple(c.order for c in self.components)


@dataclass(frozen=True, eq=False)
class DlogTable:
    """Discrete logs for one prime-power factor ``modulus`` of q.

    ``table[u]`` is the exponent vector of ``u`` over ``generators`` (one
    entry per component living in this prime power), or a row of -1 when
    ``u`` is not a unit.  For odd prime powers and for 4 there is a single
    column; for 2**e with e >= 3 the two columns are the exponents of -1
    and 5.  The map units -> exponent vectors is a bijection onto the
    box ``prod(range(order))``.
    """

    modulus: int
    generators: Tuple[int, ...]
    orders: Tuple[int, ...]
    table: np.ndarray = field(repr=False)

    def lookup(self, u):
        if gcd(u, self.modulus) != 1:
            raise NotCoprimeError(f"{u} is not a unit mod {self.modulus}")
        return tuple(int(k) for k in self.table[u % self.modulus])

    def rebuild(self, exps):
        x = 1
        for g, k in zip(self.generators, exps):
            x = x * pow(g, int(k), self.modulus) % self.modulus
        return x % self.modulus


def factorize(q):
    """Factor ``q`` by trial division.

    >>> factorize(12).factors
    ((2, 2), (3, 1))
    """
    q = int(q)
    if q <= 0:
        raise ModulusRangeError(f"modulus must be positive, got {q}")
    if q > MAX_MODULUS:
        raise ModulusRangeError(f"modulus {q} exceeds supported ceiling {MAX_MODULUS}")
    factors = []
    n = q
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            factors.append((d, e))
        d += 1 if d == 2 else 2
    if n > 1:
        factors.append((n, 1))
    return Factorization(q, tuple(factors))


def _prime_divisors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out


def smallest_primitive_root(p, e=1):
    """Smallest generator of the cyclic group (Z/p^eZ)*, p an odd prime."""
    P = p**e
    phi = P // p * (p - 1)
    rs = set(_prime_divisors(p - 1))
    if e > 1:
        rs.add(p)
    for g in range(2, P):
        if g % p and all(pow(g, phi // r, P) != 1 for r in rs):
            return g
    raise AssertionError(f"no primitive root mod {P}")


def decompose(f):
    """Split (Z/qZ)* into canonical cyclic components."""
    comps = []
    for p, e in f.factors:
        P = p**e
        if p == 2:
            if e == 2:
                comps.append(Component(4, 3, 2))
            elif e >= 3:
                comps.append(Component(P, P - 1, 2))
                comps.append(Component(P, 5, 2 ** (e - 2)))
        else:
            comps.append(Component(P, smallest_primitive_root(p, e), P // p * (p - 1)))
    return GroupDecomposition(f.q, f, tuple(comps))


def _power_sequence(g, n, mod):
    """``[g**0, ..., g**(n-1)] % mod`` as int64, built in sqrt(n) blocks."""
    b = isqrt(n) + 1
    first = np.empty(b, dtype=np.int64)
    x = 1
    for j in range(b):
        first[j] = x
        x = x * g % mod
    step = x  # g**b
    rows = -(-n // b)
    out = np.empty(rows * b, dtype=np.int64)
    row = first.copy()
    for k in range(rows):
        out[k * b:(k + 1) * b] = row
        row = row * step % mod
    return out[:n]


def build_dlog_tables(g, budget=TABLE_ENTRY_BUDGET):
    """One :class:`DlogTable` per prime-power factor of ``g.q``."""
    total = sum(g.factorization.prime_powers)
    if total > budget:
        raise MemoryBudgetError(
            f"tables for q={g.q} need {total} entries, budget is {budget}"
        )
    tables = []
    for (p, e), P in zip(g.factorization.factors, g.factorization.prime_powers):
        comps = [c for c in g.components if c.modulus == P]
        table = np.full((P, len(comps)), -1, dtype=np.int64)
        if p == 2 and e >= 3:
            half = 2 ** (e - 2)
            pw = _power_sequence(5, half, P)
            ks = np.arange(half, dtype=np.int64)
            table[pw, 0] = 0
            table[pw, 1] = ks
            table[P - pw, 0] = 1
            table[P - pw, 1] = ks
        elif comps:
            c = comps[0]
            pw = _power_sequence(c.generator, c.order, P)
            table[pw, 0] = np.arange(c.order, dtype=np.int64)
        else:
            # modulus 2: the single unit 1 has the empty exponent vector
            table = np.zeros((P, 0), dtype=np.int64)
        table.flags.writeable = False
        tables.append(
            DlogTable(P, tuple(c.generator for c in comps), tuple(c.order for c in comps), table)
        )
    return tables


class ResidueGroup:
    """Decomposition plus discrete-log tables for one modulus.

    Immutable once built; obtain instances through :func:`residue_group`
    so that tables are shared.
    """

    def __init__(self, q, budget=TABLE_ENTRY_BUDGET):
        self.q = q
        self.factorization = factorize(q)
        self.decomposition = decompose(self.factorization)
        self.tables = tuple(build_dlog_tables(self.decomposition, budget))
        self.orders = self.decomposition.orders
        slices = []
        start = 0
        for t in self.tables:
            slices.append(slice(start, start + len(t.orders)))
            start += len(t.orders)
        self.slices = tuple(slices)

    @property
    def components(self):
        return self.decomposition.components

    @property
    def rank(self):
        return len(self.orders)

    @property
    def phi(self):
        return self.decomposition.total_order

    def is_unit(self, n):
        return gcd(n % self.q, self.q) == 1

    def exponent_tuple(self, n):
        n %= self.q
        if gcd(n, self.q) != 1:
            raise NotCoprimeError(f"{n} is not coprime to {self.q}")
        out = ()
        for t in self.tables:
            out += t.lookup(n)
        return out

    def element(self, exps):
        """Unit with the given exponent tuple (inverse of exponent_tuple)."""
        x, m = 0, 1
        for t, sl in zip(self.tables, self.slices):
            r = t.rebuild(exps[sl])
            # CRT step
            x = x + m * ((r - x) * pow(m, -1, t.modulus) % t.modulus)
            m *= t.modulus
        return x % self.q

    @cached_property
    def unit_mask(self):
        """Read-only boolean array over 0..q-1 marking units."""
        mask = np.gcd(np.arange(self.q), self.q) == 1
        mask.flags.writeable = False
        return mask

    def exponent_matrix(self, residues):
        """Exponent tuples of an array of units, shape (len(residues), rank)."""
        residues = np.asarray(residues, dtype=np.int64)
        cols = [t.table[residues % t.modulus] for t in self.tables]
        if not cols:
            return np.zeros((len(residues), 0), dtype=np.int64)
        return np.concatenate(cols, axis=1)


@lru_cache(maxsize=64)
def residue_group(q):
    """Cached :class:`ResidueGroup` for modulus ``q``."""
    return ResidueGroup(int(q))


def exponent_tuple(n, g=None, tables=None):
    """Exponent tuple of the unit ``n``.

    Accepts either a :class:`GroupDecomposition` with its tables, or a
    modulus via ``g`` being an int.
    """
    if isinstance(g, int):
        return residue_group(g).exponent_tuple(n)
    q = g.q
    n %= q
    if gcd(n, q) != 1:
        raise NotCoprimeError(f"{n} is not coprime to {q}")
    out = ()
    for t in tables:
        out += t.lookup(n)
    return out

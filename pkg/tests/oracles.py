"""Slow, obviously-correct reference implementations used only by tests."""

import cmath
from math import gcd, pi


def trial_factor(n):
    out, p = {}, 2
    while n > 1:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    return sorted(out.items())


def totient(n):
    return sum(1 for k in range(1, n + 1) if gcd(k, n) == 1)


def mobius(n):
    f = trial_factor(n)
    if any(e > 1 for _, e in f):
        return 0
    return (-1) ** len(f)


def primitive_count(q):
    """Number of primitive characters mod q: sum over d | q of mu(d) phi(q/d)."""
    return sum(mobius(d) * totient(q // d) for d in range(1, q + 1) if q % d == 0)


def order_mod(g, n):
    k, x = 1, g % n
    while x != 1:
        x = x * g % n
        k += 1
    return k


def is_prime(n):
    return n >= 2 and all(n % d for d in range(2, int(n**0.5) + 1))


def legendre(a, p):
    """Euler's criterion."""
    r = pow(a, (p - 1) // 2, p)
    return 0 if r == 0 else (1 if r == 1 else -1)


def chi_direct(q, gens, orders, exps, n):
    """chi(n) by brute-force search for n = prod g_j^{t_j} mod q."""
    if gcd(n, q) != 1:
        return 0j
    import itertools

    for t in itertools.product(*(range(d) for d in orders)):
        x = 1
        for g, k in zip(gens, t):
            x = x * pow(g, k, q) % q
        if x == n % q:
            ang = sum(e * k / d for e, k, d in zip(exps, t, orders))
            return cmath.exp(2j * pi * ang)
    raise AssertionError("not generated")


def direct_sum(terms):
    s = 0j
    for t in terms:
        s += t
    return s

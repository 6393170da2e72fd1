"""Modular arithmetic helpers for odd prime moduli.

Everything in this module works with plain Python integers, so intermediate
products never overflow regardless of the modulus size.
"""

from __future__ import annotations

import math
from typing import Iterable, Optional


def pow_mod(base: int, exp: int, p: int) -> int:
    """Return base**exp mod p for exp >= 0."""
    if exp < 0:
        raise ValueError("negative exponent; use inverse_mod first")
    if p <= 1:
        raise ValueError("modulus must be at least 2")
    return pow(base, exp, p)


def inverse_mod(x: int, p: int) -> int:
    """Multiplicative inverse of x modulo the prime p."""
    x %= p
    if x == 0:
        raise ValueError("0 has no inverse")
    return pow(x, p - 2, p)


def build_factorial_table(p: int) -> list[int]:
    """Table t with t[m] = m! mod p for 0 <= m <= p-1.

    By Wilson's theorem the last entry t[p-1] equals p-1 whenever p is prime,
    which callers can use as a cheap self-check.
    """
    if p < 2:
        raise ValueError("modulus must be at least 2")
    table = [1] * p
    acc = 1
    for m in range(2, p):
        acc = acc * m % p
        table[m] = acc
    return table


def factor_into_primes(n: int, small_primes: Optional[Iterable[int]] = None) -> list[int]:
    """Distinct prime factors of n by trial division.

    ``small_primes`` may supply an ascending prime list covering sqrt(n);
    without it a simple 2-then-odd wheel is used.  After dividing out all
    candidates at most one factor above the square root can remain, and it
    is prime.
    """
    if n < 1:
        raise ValueError("n must be positive")
    factors = []
    if small_primes is not None:
        for q in small_primes:
            if q * q > n:
                break
            if n % q == 0:
                factors.append(q)
                while n % q == 0:
                    n //= q
    else:
        if n % 2 == 0:
            factors.append(2)
            while n % 2 == 0:
                n //= 2
        d = 3
        while d * d <= n:
            if n % d == 0:
                factors.append(d)
                while n % d == 0:
                    n //= d
            d += 2
    if n > 1:
        factors.append(n)
    return factors


def is_primitive_root(a: int, p: int, prime_factors: Optional[list[int]] = None) -> bool:
    """True iff a generates the full multiplicative group mod p.

    a is reduced mod p first; residue 0 is never a generator.  The test
    checks a**((p-1)/q) != 1 for every prime q dividing p-1.
    """
    a %= p
    if a == 0:
        return False
    if p == 2:
        return a == 1
    if prime_factors is None:
        prime_factors = factor_into_primes(p - 1)
    n = p - 1
    for q in prime_factors:
        if pow(a, n // q, p) == 1:
            return False
    return True


class DiscreteLogTable:
    """Baby-step table for repeated discrete logs to the same base.

    Building the table costs O(sqrt(p)) multiplications and memory; each
    lookup afterwards is another O(sqrt(p)) walk.  Useful when many targets
    share one (base, p) pair.
    """

    def __init__(self, base: int, p: int):
        self.base = base % p
        self.p = p
        self.order = p - 1
        self.m = math.isqrt(self.order) + 1
        table = {}
        x = 1
        for j in range(self.m):
            table.setdefault(x, j)
            x = x * self.base % p
        self.baby = table
        self.giant_factor = pow(self.base, -self.m, p)

    def log(self, target: int) -> int:
        p = self.p
        g = target % p
        if g == 0:
            raise ValueError("target must be a unit mod p")
        for i in range(self.m + 1):
            j = self.baby.get(g)
            if j is not None:
                t = i * self.m + j
                if t < self.order:
                    return t
            g = g * self.giant_factor % p
        raise ValueError(f"{target} is not a power of {self.base} mod {p}")


def discrete_log(base: int, target: int, p: int) -> int:
    """Smallest t >= 0 with base**t = target mod p (baby-step giant-step)."""
    return DiscreteLogTable(base, p).log(target)

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from factorcover.modmath import (
    DiscreteLogTable,
    build_factorial_table,
    discrete_log,
    factor_into_primes,
    inverse_mod,
    is_primitive_root,
    pow_mod,
)

PRIMES = [3, 5, 7, 11, 13, 101, 997, 10007]


def test_pow_mod_matches_builtin():
    for p in PRIMES:
        for base in (2, 3, p - 1):
            for e in (0, 1, 2, p - 2, p - 1, 2 * p + 3):
                assert pow_mod(base, e, p) == pow(base, e, p)


def test_inverse_mod_roundtrip():
    for p in PRIMES:
        for x in range(1, min(p, 60)):
            assert x * inverse_mod(x, p) % p == 1


def test_inverse_mod_rejects_zero():
    with pytest.raises(ValueError):
        inverse_mod(0, 11)
    with pytest.raises(ValueError):
        inverse_mod(22, 11)


def test_factorial_table_wilson():
    # (p-1)! = -1 mod p for primes; the table ends at p-1
    for p in PRIMES:
        fact = build_factorial_table(p)
        assert len(fact) == p
        assert fact[0] == 1
        assert fact[p - 1] == p - 1


def test_factorial_table_spot_value():
    fact = build_factorial_table(101)
    assert fact[10] == math.factorial(10) % 101


def test_factor_into_primes():
    assert factor_into_primes(96) == [2, 3]
    assert factor_into_primes(97) == [97]
    assert factor_into_primes(100002) == [2, 3, 7, 2381]
    assert factor_into_primes(2) == [2]


def test_factor_with_supplied_small_primes(small_primes):
    assert factor_into_primes(3241986, small_primes) == factor_into_primes(3241986)


def test_primitive_root_mod_7():
    roots = {a for a in range(2, 7) if is_primitive_root(a, 7)}
    assert roots == {3, 5}


def test_primitive_root_count():
    # the number of generators of a cyclic group of order n is phi(n)
    def phi(n):
        out = n
        for q in factor_into_primes(n):
            out -= out // q
        return out

    for p in (11, 13, 101, 997):
        count = sum(1 for a in range(2, p) if is_primitive_root(a, p))
        assert count + (1 if p == 2 else 0) == phi(p - 1)


def test_primitive_root_accepts_precomputed_factors():
    qs = factor_into_primes(996)
    assert is_primitive_root(7, 997, qs) == is_primitive_root(7, 997)


def test_discrete_log_roundtrip():
    p = 10007
    g = 5  # a primitive root mod 10007
    assert is_primitive_root(g, p)
    for t in (0, 1, 2, 77, 5002, p - 2):
        assert discrete_log(g, pow(g, t, p), p) == t


def test_discrete_log_table_matches_function():
    p = 997
    table = DiscreteLogTable(7, p)
    for m in range(1, 100):
        assert table.log(m) == discrete_log(7, m, p)


def test_discrete_log_unreachable_target():
    # 4 generates only the quadratic residues mod 11; 2 is a non-residue
    with pytest.raises(ValueError):
        discrete_log(4, 2, 11)


@settings(max_examples=80, deadline=None)
@given(t=st.integers(min_value=0, max_value=9973 - 2))
def test_discrete_log_property(t):
    p = 9973
    g = 11
    assert discrete_log(g, pow(g, t, p), p) == t

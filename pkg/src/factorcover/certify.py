"""Coverage certificates for products of factorials modulo a prime.

A residue m is *representable* mod p when some multiset of parts x_i >= 1
with sum exactly p - 1 has factorial product x_1! * x_2! * ... = m mod p.
This module decides full coverage of the nonzero residues three ways:

* ``find_certificate`` searches for a compact certificate (a, v, b) built
  on a primitive root a, from which every target has an explicit witness
  partition (``witness_partition`` constructs it).
* ``fallback_cover`` accumulates the residues 2**u * k! over a family of
  central factorial arguments k, each emitted pair staying inside the
  partition budget, until the union covers everything.
* ``brute_cover`` runs an exact shortest-cost search over all residues and
  is the ground truth for small p.

The module also checks two self-contained identities used as sanity
anchors: a multinomial congruence family and a two-power cover split.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

from .modmath import (
    DiscreteLogTable,
    build_factorial_table,
    factor_into_primes,
    is_primitive_root,
)

# Root candidates for the certificate search: odd primes in order.  The
# default pool is the first 25; escalation may shift the window or extend
# it when no candidate generates the group.
ODD_PRIME_CANDIDATES = (
    3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67,
    71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131, 137, 139,
    149, 151, 157, 163, 167, 173, 179, 181, 191, 193, 197, 199, 211, 223,
    227, 229, 233, 239, 241, 251, 257, 263, 269, 271, 277, 281, 283, 293,
    307, 311, 313,
)

EXTENSION_SIZE = 25  # extra candidates appended when none generate the group

DEFAULT_BRUTE_CEILING = 10_000


@dataclass(frozen=True)
class SearchConfig:
    """Knobs for the certificate search.

    ``budget_multiplier`` scales the per-root iteration budget
    floor(budget_multiplier * sqrt(p)); ``root_candidates`` counts how many
    odd primes are tried, starting ``root_offset`` deep into the pool.
    """

    root_candidates: int = 25
    budget_multiplier: float = 3.0
    root_offset: int = 0


@dataclass(frozen=True)
class LemmaCertificate:
    """Certificate (a, v, b): a is a primitive root mod p, b = a**v mod p,
    and v*v*a < p*(v-b).  These facts alone imply every nonzero residue is
    representable, constructively via ``witness_partition``."""

    p: int
    a: int
    v: int
    b: int

    @property
    def w(self) -> int:
        return (self.p - 1) // self.v

    @property
    def base_sum(self) -> int:
        """Sum of the undecremented parts: (v-1) copies of a, w copies of b."""
        return (self.v - 1) * self.a + self.w * self.b


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def find_certificate(
    p: int,
    cfg: SearchConfig = SearchConfig(),
    prime_factors: Optional[list[int]] = None,
) -> Optional[LemmaCertificate]:
    """Search for a certificate over the configured root pool.

    For each candidate primitive root a, v starts at floor(log p / log a)
    and jumps by 1 + floor(log(p/b) / log a) where b = a**v mod p, so the
    search only lands where b has a chance to sit below v.  Floats steer
    the jumps; the acceptance test of each (v, b) is exact integer
    arithmetic.  Returns None when every candidate exhausts its budget.
    """
    if p <= 5:
        raise ValueError("certificate search needs p > 5")
    if prime_factors is None:
        prime_factors = factor_into_primes(p - 1)
    budget = math.floor(cfg.budget_multiplier * math.sqrt(p))
    lo = cfg.root_offset
    hi = lo + cfg.root_candidates
    pool = [a for a in ODD_PRIME_CANDIDATES[lo:hi] if a < p]
    roots = [a for a in pool if is_primitive_root(a, p, prime_factors)]
    if not roots:
        extra = ODD_PRIME_CANDIDATES[hi : hi + EXTENSION_SIZE]
        roots = [a for a in extra if a < p and is_primitive_root(a, p, prime_factors)]
        if not roots:
            return None

    log_p = math.log(p)
    for a in roots:
        log_a = math.log(a)
        # powers of a mod p up to the largest possible jump
        max_jump = int(log_p / log_a) + 3
        apow = [1] * (max_jump + 2)
        for j in range(1, max_jump + 2):
            apow[j] = apow[j - 1] * a % p
        v = max(1, int(log_p / log_a))
        b = pow(a, v, p)
        used = 0
        while used < budget and v < p - 1:
            used += 1
            if v > 1 and 1 < b < p - 1 and v * v * a < p * (v - b):
                return LemmaCertificate(p=p, a=a, v=v, b=b)
            jump = 1 + int((log_p - math.log(b)) / log_a)
            if jump < 1:
                jump = 1
            if jump < len(apow):
                b = b * apow[jump] % p
            else:
                b = b * pow(a, jump, p) % p
            v += jump
    return None


def verify_certificate(cert: LemmaCertificate) -> bool:
    """Recheck a certificate from scratch with exact arithmetic."""
    p, a, v, b = cert.p, cert.a, cert.v, cert.b
    if p <= 5 or not _is_prime(p):
        return False
    if not 1 < a < p:
        return False
    if not (1 < v < p - 1 and 1 < b < p - 1):
        return False
    if not is_primitive_root(a, p):
        return False
    if pow(a, v, p) != b:
        return False
    if not v * v * a < p * (v - b):
        return False
    # the parts budget must leave room for padding with ones
    return cert.base_sum < p


@dataclass(frozen=True)
class PartitionWitness:
    """An explicit representation of ``target``: ``parts`` maps each part
    size to its multiplicity; sizes sum to p - 1 and the factorial product
    is target mod p."""

    p: int
    target: int
    parts: dict[int, int]

    def part_sum(self) -> int:
        return sum(size * count for size, count in self.parts.items())


def witness_partition(
    cert: LemmaCertificate,
    target: int,
    log_table: Optional[DiscreteLogTable] = None,
    fact: Optional[list[int]] = None,
) -> PartitionWitness:
    """Build the witness partition for one target residue.

    Starting from the base multiset ((v-1) copies of a, w copies of b),
    decrementing one copy of a to a-1 divides the factorial product by a,
    and likewise for b.  Writing the needed correction exponent t as
    mu*v + lam with 0 <= lam < v selects how many copies of each to
    decrement; padding with ones lands the sum exactly on p - 1.

    Callers verifying many targets for one certificate should pass a shared
    ``log_table`` (base a) and factorial table to amortize the setup.
    """
    p, a, v, b, w = cert.p, cert.a, cert.v, cert.b, cert.w
    target %= p
    if target == 0:
        raise ValueError("target must be a nonzero residue")
    if log_table is None:
        log_table = DiscreteLogTable(a, p)
    if fact is None:
        fact = build_factorial_table(p)
    base_product = pow(fact[a], v - 1, p) * pow(fact[b], w, p) % p
    t = log_table.log(base_product * pow(target, -1, p) % p)
    mu, lam = divmod(t, v)
    if mu > w:
        raise ArithmeticError(f"correction exponent {t} out of range for p={p}")
    parts: Counter[int] = Counter()
    if v - 1 - lam:
        parts[a] += v - 1 - lam
    if lam:
        parts[a - 1] += lam
    if w - mu:
        parts[b] += w - mu
    if mu:
        parts[b - 1] += mu
    used = cert.base_sum - lam - mu
    parts[1] += (p - 1) - used
    return PartitionWitness(p=p, target=target, parts=dict(parts))


def verify_witness(witness: PartitionWitness, fact: Optional[list[int]] = None) -> bool:
    """Check the two witness properties: sizes sum to p-1, product matches."""
    p = witness.p
    if fact is None:
        fact = build_factorial_table(p)
    if witness.part_sum() != p - 1:
        return False
    if any(size < 1 or size > p - 1 or count < 0 for size, count in witness.parts.items()):
        return False
    prod = 1
    for size, count in witness.parts.items():
        prod = prod * pow(fact[size], count, p) % p
    return prod == witness.target % p


def fallback_cover(p: int) -> Optional[list[int]]:
    """Cover the nonzero residues with power-of-two dilates of factorials.

    For s = 0, 1, 2, ... the block A(s) holds 2**u * k! mod p with
    k = (p - 2s - 1) / 2 and u running from 0 while both u stays within
    floor((p + 2s + 1) / 4) and the partition (u parts of 2, one part k,
    padding ones) fits: 2u + k <= p - 1.  Returns the list of s values
    consumed once the union covers everything, or None if even the last
    block (s = (p-3)/2, k = 1) leaves a gap.
    """
    if p < 3 or not _is_prime(p):
        raise ValueError("p must be an odd prime")
    half = (p - 1) // 2
    fact = [1] * (half + 1)
    for m in range(2, half + 1):
        fact[m] = fact[m - 1] * m % p
    seen = bytearray(p)
    remaining = p - 1
    s_used: list[int] = []
    for s in range(half):  # s = 0 .. (p-3)/2
        k = half - s
        u_max = min((p + 2 * s + 1) // 4, (p - 1 - k) // 2)
        assert 2 * u_max + k <= p - 1
        val = fact[k]
        for _ in range(u_max + 1):
            if not seen[val]:
                seen[val] = 1
                remaining -= 1
            val = val * 2 % p
        s_used.append(s)
        if remaining == 0:
            return s_used
    return None


def fallback_block(p: int, s: int) -> set[int]:
    """The residues contributed by one s value, for inspection in tests."""
    half = (p - 1) // 2
    if not 0 <= s <= half - 1:
        raise ValueError(f"s must lie in [0, {half - 1}]")
    k = half - s
    u_max = min((p + 2 * s + 1) // 4, (p - 1 - k) // 2)
    out = set()
    val = math.factorial(k) % p
    for _ in range(u_max + 1):
        out.add(val)
        val = val * 2 % p
    return out


@dataclass
class BruteCover:
    """Exact minimal part-sums for every representable residue.

    ``costs[r]`` is the least total of parts >= 2 whose factorial product
    is r mod p, or None when no total <= p - 1 works; residue 1 costs 0
    (all-ones partition).  ``covered`` says every nonzero residue is
    representable."""

    p: int
    costs: list[Optional[int]]

    @property
    def covered(self) -> bool:
        return all(c is not None for c in self.costs[1:])

    def representable(self) -> set[int]:
        return {r for r in range(1, self.p) if self.costs[r] is not None}

    @property
    def max_cost(self) -> int:
        return max((c for c in self.costs[1:] if c is not None), default=0)


def brute_cover(p: int, ceiling: int = DEFAULT_BRUTE_CEILING) -> BruteCover:
    """Ground-truth coverage by exact shortest-cost search.

    States are nonzero residues; multiplying by m! (2 <= m <= p-1) costs m.
    A residue is representable iff its minimal cost is at most p - 1, since
    padding with ones closes any remaining gap.  The search runs in the
    exponent space of a primitive root, where each multiplier becomes a
    cyclic shift of a bitmask, and processes costs in increasing order so
    the first time a residue appears its cost is minimal.
    """
    if p < 3 or not _is_prime(p):
        raise ValueError("p must be an odd prime")
    if p > ceiling:
        raise ValueError(f"p={p} exceeds the brute-force ceiling {ceiling}")
    n = p - 1
    g = _smallest_primitive_root(p)
    ind = [0] * p
    val_at = [0] * n
    val = 1
    for e in range(n):
        ind[val] = e
        val_at[e] = val
        val = val * g % p

    # one shift per distinct factorial residue, cheapest part first;
    # parts whose factorial is 1 never change the state and are useless
    shift_cost: dict[int, int] = {}
    f = 1
    for m in range(2, p):
        f = f * m % p
        s = ind[f]
        if s != 0 and s not in shift_cost:
            shift_cost[s] = m

    full = (1 << n) - 1
    reached = 1  # bit e set when residue g**e has a known cost
    layers: dict[int, int] = {0: 1}
    costs: list[Optional[int]] = [None] * p
    costs[1] = 0
    for c in range(2, p):
        acc = 0
        for s, m in shift_cost.items():
            if m > c:
                continue
            layer = layers.get(c - m)
            if layer:
                acc |= (layer << s) | (layer >> (n - s))
        acc &= full
        acc &= ~reached
        if acc:
            layers[c] = acc
            reached |= acc
            bits = acc
            while bits:
                low = bits & -bits
                costs[val_at[low.bit_length() - 1]] = c
                bits ^= low
        if reached == full:
            break
    return BruteCover(p=p, costs=costs)


def _smallest_primitive_root(p: int) -> int:
    qs = factor_into_primes(p - 1)
    g = 2
    while g < p:
        if is_primitive_root(g, p, qs):
            return g
        g += 1
    raise ArithmeticError(f"no primitive root found mod {p}")


def multinomial_identity_check(p: int) -> bool:
    """Verify two scaled multinomial congruences over the full k range.

    With parts summing to p, the multinomial coefficient over p is an
    integer; dividing by p is the same as replacing p! by (p-1)!.  The
    checks are (p-1)!/(2!(2k-1)!(p-2k-1)!) = k and
    (p-1)!/(1!1!(2k-1)!(p-2k-1)!) = 2k, both mod p, for 1 <= k <= (p-1)/2.
    """
    if p < 3 or not _is_prime(p):
        raise ValueError("p must be an odd prime")
    fact = build_factorial_table(p)
    wilson = fact[p - 1]
    for k in range(1, (p - 1) // 2 + 1):
        d = fact[2] * fact[2 * k - 1] % p * fact[p - 2 * k - 1] % p
        if wilson * pow(d, -1, p) % p != k % p:
            return False
        d = fact[2 * k - 1] * fact[p - 2 * k - 1] % p
        if wilson * pow(d, -1, p) % p != (2 * k) % p:
            return False
    return True


@dataclass(frozen=True)
class TwoPowerCover:
    """The two blocks of the power-of-two split when 2 generates Z_p*."""

    p: int
    upper: frozenset[int]  # 2**u * ((p-1)/2)!  for 1 <= u <= (p-1)/2
    lower: frozenset[int]  # 2**v * ((p-3)/2)!  for 0 <= v <= (p-3)/2

    @property
    def disjoint(self) -> bool:
        return not (self.upper & self.lower)

    @property
    def covers(self) -> bool:
        return self.upper | self.lower == set(range(1, self.p))

    @property
    def ok(self) -> bool:
        return self.disjoint and self.covers


def two_power_blocks(p: int) -> TwoPowerCover:
    """Split Z_p* into two power-of-two blocks; needs 2 to be a generator."""
    if p < 3 or not _is_prime(p):
        raise ValueError("p must be an odd prime")
    if not is_primitive_root(2, p):
        raise ValueError(f"2 is not a primitive root mod {p}")
    half_f = math.factorial((p - 1) // 2) % p
    low_f = math.factorial((p - 3) // 2) % p
    upper = frozenset(pow(2, u, p) * half_f % p for u in range(1, (p - 1) // 2 + 1))
    lower = frozenset(pow(2, v, p) * low_f % p for v in range((p - 3) // 2 + 1))
    return TwoPowerCover(p=p, upper=upper, lower=lower)


def two_power_cover_check(p: int) -> bool:
    """True when the two blocks partition Z_p* (disjoint and exhaustive)."""
    return two_power_blocks(p).ok


@dataclass(frozen=True)
class CoverCertificate:
    """Tagged union over the three certificate kinds for one prime."""

    p: int
    method: str  # "lemma" | "fallback" | "brute"
    lemma: Optional[LemmaCertificate] = None
    s_list: Optional[tuple[int, ...]] = None
    max_cost: Optional[int] = None

    def to_json(self) -> dict:
        out: dict = {"p": self.p, "method": self.method}
        if self.method == "lemma":
            out.update(a=self.lemma.a, v=self.lemma.v, b=self.lemma.b)
        elif self.method == "fallback":
            out["s_list"] = list(self.s_list)
        elif self.method == "brute":
            out["max_cost"] = self.max_cost
        return out

    def to_json_line(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))

    @staticmethod
    def from_json(obj: dict) -> "CoverCertificate":
        method = obj["method"]
        p = obj["p"]
        if method == "lemma":
            return CoverCertificate(
                p=p, method=method,
                lemma=LemmaCertificate(p=p, a=obj["a"], v=obj["v"], b=obj["b"]),
            )
        if method == "fallback":
            return CoverCertificate(p=p, method=method, s_list=tuple(obj["s_list"]))
        if method == "brute":
            return CoverCertificate(p=p, method=method, max_cost=obj["max_cost"])
        raise ValueError(f"unknown method {method!r}")


def verify_cover_certificate(cert: CoverCertificate) -> bool:
    """Recheck any certificate kind from first principles."""
    if cert.method == "lemma":
        return cert.lemma is not None and verify_certificate(cert.lemma)
    if cert.method == "fallback":
        return fallback_cover(cert.p) == list(cert.s_list or ())
    if cert.method == "brute":
        result = brute_cover(cert.p, ceiling=max(cert.p, DEFAULT_BRUTE_CEILING))
        return result.covered and result.max_cost == cert.max_cost
    return False

"""Multiplicative set growth inside Z_p*.

Starting from a seed set of semiprime residues, the set is grown one
dilation at a time: pick an even number a in a fixed search window, adjoin
(a/2) * B to B, and repeat.  The branch taken at each step depends on how
many quotient representations x * y**-1 = a/2 the current set admits:
none (disjoint doubling), the minimum over the window (near doubling), or
the set is already half of Z_p* and one product step saturates everything.

All set arithmetic runs on dense boolean masks indexed by residue, so a
dilation is a single fancy-indexing pass and an intersection count is a
popcount.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterator, Optional

import numpy as np

from .analytic import step_limit
from .modmath import factor_into_primes, is_primitive_root


@dataclass
class ResidueSet:
    """Dense subset of Z_p*: ``mask[r]`` says whether residue r belongs.

    Index 0 is never set.  ``mask`` has length p so residues index it
    directly.
    """

    p: int
    mask: np.ndarray

    @staticmethod
    def empty(p: int) -> "ResidueSet":
        return ResidueSet(p=p, mask=np.zeros(p, dtype=bool))

    @staticmethod
    def from_members(p: int, members) -> "ResidueSet":
        s = ResidueSet.empty(p)
        for r in members:
            r %= p
            if r == 0:
                raise ValueError("0 is not a unit")
            s.mask[r] = True
        return s

    @staticmethod
    def full(p: int) -> "ResidueSet":
        mask = np.ones(p, dtype=bool)
        mask[0] = False
        return ResidueSet(p=p, mask=mask)

    @property
    def cardinality(self) -> int:
        return int(self.mask.sum())

    def __len__(self) -> int:
        return self.cardinality

    def __contains__(self, r: int) -> bool:
        return bool(self.mask[r % self.p])

    def members(self) -> np.ndarray:
        return np.nonzero(self.mask)[0]

    def is_all_units(self) -> bool:
        return bool(self.mask[1:].all())

    def dilate(self, c: int) -> "ResidueSet":
        """The set c * B; same cardinality for any unit c."""
        p = self.p
        c %= p
        if c == 0:
            raise ValueError("dilation factor must be a unit")
        cinv = pow(c, -1, p)
        idx = cinv * np.arange(p, dtype=np.int64) % p
        return ResidueSet(p=p, mask=self.mask[idx])

    def union(self, other: "ResidueSet") -> "ResidueSet":
        return ResidueSet(p=self.p, mask=self.mask | other.mask)

    def copy(self) -> "ResidueSet":
        return ResidueSet(p=self.p, mask=self.mask.copy())


def _sieve_list(n: int) -> list[int]:
    if n < 2:
        return []
    flags = bytearray([1]) * (n + 1)
    flags[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(n) + 1):
        if flags[i]:
            flags[i * i :: i] = b"\x00" * len(flags[i * i :: i])
    return [i for i in range(n + 1) if flags[i]]


def init_pairs(p: int) -> tuple[ResidueSet, int]:
    """Seed set: products of two distinct primes at most sqrt(p/2).

    Every such product is below p, so the residues are automatically
    distinct and the cardinality is the number of prime pairs.  Also
    returns the sum of the primes used, the initial part-sum budget.
    The set is empty (and the caller must cope) when fewer than two
    primes fit under the threshold.
    """
    if p < 11:
        raise ValueError("need p >= 11")
    y = math.sqrt(p / 2)
    qs = [q for q in _sieve_list(int(y) + 1) if q <= y]
    s = ResidueSet.empty(p)
    for i in range(len(qs)):
        for j in range(i + 1, len(qs)):
            s.mask[qs[i] * qs[j] % p] = True
    return s, sum(qs)


def init_kfold(p: int, k: int) -> ResidueSet:
    """Seed set for the k-fold variant: products of k distinct primes at
    most p**(1/k), with every prime factor halved mod p."""
    if k < 2:
        raise ValueError("need k >= 2")
    y = p ** (1.0 / k)
    if y < 3:
        raise ValueError("p**(1/k) too small to hold a prime pair")
    qs = [q for q in _sieve_list(int(y) + 1) if q <= y]
    inv2 = pow(2, -1, p)
    s = ResidueSet.empty(p)
    from itertools import combinations

    for combo in combinations(qs, k):
        val = 1
        for q in combo:
            val = val * q % p * inv2 % p
        if val:
            s.mask[val] = True
    return s


def dyadic_interval_elements(p: int, k: int) -> list[int]:
    """The halved k-fold products whose prime factors come from pairwise
    distinct dyadic windows (p**(1/k)/2**i, p**(1/k)/2**(i-1)].  These are
    the elements whose residues are provably collision-free."""
    if k < 2:
        raise ValueError("need k >= 2")
    y = p ** (1.0 / k)
    qs = [q for q in _sieve_list(int(y) + 1) if q <= y]
    inv2 = pow(2, -1, p)

    def window(q: int) -> int:
        # i >= 1 with q in (y / 2**i, y / 2**(i-1)]
        return max(1, math.ceil(math.log2(y / q)))

    from itertools import combinations

    out = []
    for combo in combinations(qs, k):
        if len({window(q) for q in combo}) != k:
            continue
        val = 1
        for q in combo:
            val = val * q % p * inv2 % p
        out.append(val)
    return out


def rep_count(B: ResidueSet, c: int) -> int:
    """f(c): the number of pairs (x, y) in B x B with x = c * y mod p,
    i.e. the cardinality of B intersected with c * B."""
    c %= B.p
    if c == 0:
        raise ValueError("c must be a unit")
    return int((B.mask & B.dilate(c).mask).sum())


def _rep_counts_fft(B: ResidueSet, cands: np.ndarray) -> np.ndarray:
    """f(c) for many candidates at once.

    In the exponent space of a primitive root, f is the cyclic
    autocorrelation of the membership vector, so one FFT round trip gives
    every value.  Counts are small integers, far below the float resolution
    at these sizes, and the chosen candidate is always rechecked exactly by
    ``rep_count`` before use.
    """
    p = B.p
    n = p - 1
    g = _smallest_primitive_root(p)
    ind = np.zeros(p, dtype=np.int64)
    val = 1
    for e in range(n):
        ind[val] = e
        val = val * g % p
    chi = np.zeros(n)
    chi[ind[B.members()]] = 1.0
    spec = np.fft.rfft(chi)
    corr = np.fft.irfft(spec * np.conj(spec), n)
    return np.rint(corr[ind[cands]]).astype(np.int64)


def _smallest_primitive_root(p: int) -> int:
    qs = factor_into_primes(p - 1)
    g = 2
    while g < p:
        if is_primitive_root(g, p, qs):
            return g
        g += 1
    raise ArithmeticError(f"no primitive root mod {p}")


def product_set(B: ResidueSet) -> ResidueSet:
    """B * B, built by dilating B by its own elements; stops early once
    every unit is covered."""
    acc = ResidueSet.empty(B.p)
    for r in B.members():
        acc.mask |= B.dilate(int(r)).mask
        if acc.is_all_units():
            break
    return acc


def grow_step(B: ResidueSet, window: int) -> tuple[ResidueSet, str, Optional[int]]:
    """One trichotomy step.

    When B already holds at least p/2 residues the product set saturates
    (branch "i").  Otherwise scan even a in [2, window]: the smallest a
    whose half has no quotient representation doubles B disjointly
    (branch "ii"); failing that, the a whose half is least-represented
    nearly doubles it (branch "iii").  Returns the new set, the branch
    label, and the chosen a (None for branch i).
    """
    if window < 2:
        raise ValueError("window must be at least 2")
    p = B.p
    b = B.cardinality
    if 2 * b >= p:
        return product_set(B), "i", None
    cmax = min(window // 2, p - 1)
    cands = np.arange(1, cmax + 1, dtype=np.int64)
    fvals = _rep_counts_fft(B, cands)
    zero_rows = np.nonzero(fvals == 0)[0]
    if len(zero_rows) > 0:
        c = int(cands[zero_rows[0]])
        branch = "ii"
        expected = 0
    else:
        row = int(np.argmin(fvals))
        c = int(cands[row])
        branch = "iii"
        expected = int(fvals[row])
    # exact recheck of the one value the step depends on
    actual = rep_count(B, c)
    if actual != expected:
        raise ArithmeticError(
            f"representation count mismatch at p={p}, c={c}: {actual} != {expected}"
        )
    return B.union(B.dilate(c)), branch, 2 * c


def sarkozy_check(
    U: ResidueSet, V: ResidueSet, S: int, T: int
) -> tuple[float, float, bool]:
    """Instance check of the product-equidistribution inequality.

    f(n) counts pairs (x, y) in U x V with x * y = n mod p.  The window
    sum of f over n = S+1 .. S+T stays within 2 * sqrt(p*u*v) * log p of
    its expected value u*v*T/p.  Returns (lhs, rhs, lhs < rhs) with the
    window sum computed exactly; only the comparison uses floats.
    """
    p = U.p
    if V.p != p:
        raise ValueError("sets live in different moduli")
    u, v = U.cardinality, V.cardinality
    if u == 0 or v == 0:
        raise ValueError("both sets must be nonempty")
    if not 1 <= T <= p:
        raise ValueError("window length must lie in [1, p]")
    wmask = np.zeros(p, dtype=bool)
    for n in range(S + 1, S + T + 1):
        wmask[n % p] = True
    # sum f over the window = #{(x, y) : x*y mod p in window}; iterate the
    # smaller set and count partners y with x*y landing in the window,
    # i.e. y in x^-1 * W
    small, big = (U, V) if u <= v else (V, U)
    arange = np.arange(p, dtype=np.int64)
    total = 0
    for x in small.members():
        idx = int(x) * arange % p  # y belongs iff x*y is in the window
        total += int((wmask[idx] & big.mask).sum())
    expected = u * v * T / p
    lhs = abs(total - expected)
    rhs = 2.0 * math.sqrt(p * u * v) * math.log(p)
    return lhs, rhs, lhs < rhs


@dataclass(frozen=True)
class GrowthStep:
    m: int
    b_before: int
    b_after: int
    branch: str
    a: Optional[int]  # the even number chosen; None for branch i
    f_min: Optional[int]  # representation count of a/2; None for branch i
    U: int  # running part-sum budget after this step

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "b": self.b_before,
            "b_next": self.b_after,
            "branch": self.branch,
            "a": self.a,
            "f_min": self.f_min,
            "U": self.U,
        }


@dataclass
class GrowthTrace:
    p: int
    lam: float
    window: int
    b1: int
    U1: int
    steps: list[GrowthStep] = field(default_factory=list)
    full: bool = False

    @property
    def U_final(self) -> int:
        return self.steps[-1].U if self.steps else self.U1

    @property
    def budget_ok(self) -> bool:
        """Whether the final part-sum budget still fits below p."""
        return self.U_final <= self.p - 1

    def to_json_lines(self) -> Iterator[str]:
        for s in self.steps:
            rec = {"p": self.p, **s.to_json()}
            yield json.dumps(rec, sort_keys=True, separators=(",", ":"))


def T_of(p: int, lam: float) -> int:
    """The odd search window 2*floor(lam * sqrt(p) * log p) + 1."""
    return 2 * math.floor(lam * math.sqrt(p) * math.log(p)) + 1


def run_growth(p: int, lam: float) -> GrowthTrace:
    """Grow from the semiprime seed until the product step saturates.

    The abort limit is ten times the analytic step bound for the actual
    starting density (falling back to a flat 500 when the density is
    already past one half), which no genuine run approaches.
    """
    if p < 11:
        raise ValueError("need p >= 11")
    if lam <= 2:
        raise ValueError("lam must exceed 2")
    B, U1 = init_pairs(p)
    b1 = B.cardinality
    if b1 == 0:
        raise ValueError(f"seed set is empty for p={p}")
    T = T_of(p, lam)
    trace = GrowthTrace(p=p, lam=lam, window=T, b1=b1, U1=U1)
    s1 = b1 / p
    limit = 500 if s1 >= 0.5 else max(20, 10 * step_limit(s1, lam))
    U = U1
    m = 0
    while True:
        m += 1
        if m > limit:
            raise RuntimeError(
                f"growth did not converge within {limit} steps at p={p}"
            )
        b_before = B.cardinality
        B, branch, a = grow_step(B, T)
        if branch == "i":
            trace.steps.append(GrowthStep(
                m=m, b_before=b_before, b_after=B.cardinality,
                branch="i", a=None, f_min=None, U=U,
            ))
            trace.full = B.is_all_units()
            return trace
        U += a
        # |B u cB| = 2b - |B n cB| holds exactly, so the union cardinality
        # recovers the representation count of the chosen element
        f_min = 0 if branch == "ii" else 2 * b_before - B.cardinality
        trace.steps.append(GrowthStep(
            m=m, b_before=b_before, b_after=B.cardinality,
            branch=branch, a=a, f_min=f_min, U=U,
        ))
        if B.is_all_units():
            trace.full = True
            return trace

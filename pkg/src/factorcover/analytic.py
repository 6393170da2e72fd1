"""Density-doubling calculus behind the large-prime reduction.

The coverage argument grows a residue set whose density s roughly follows
s' = (beta - s) * s per round, with beta = 2 - 1/lam determined by the
window scale lam.  This module derives the constants of that recurrence,
iterates it, and searches for the integer thresholds above which the two
closing inequalities hold, reducing the problem to a finite prime range.

All logarithms are natural.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

C1 = 2 * math.e

# the closing inequalities compare a step-cost budget against x/21.4 scaled
# by 10.2; the two constants travel together, so keep them named here
SUM_SCALE = 21.4
BUDGET_SCALE = 10.2

SEARCH_CEILING = 10 ** 12
GRID_RATIO = 1.001


@dataclass(frozen=True)
class AnalyticParams:
    """Constants of the doubling recurrence for one window scale lam."""

    lam: float
    beta: float   # low-density growth factor, 2 - 1/lam
    mu: float     # exponential lower-bound rate for 1 - x on (0, 1/(2*beta))
    rho: float    # per-step escape rate, (lam - 2) / (2*lam)
    gamma: float  # tail constant folding the mu-regime losses
    c1: float = C1


def derive_params(lam: float) -> AnalyticParams:
    """Compute the recurrence constants; requires lam > 2.

    At lam <= 2 the escape rate rho is nonpositive and the doubling
    argument stalls, so such scales are rejected outright.
    """
    if lam <= 2:
        raise ValueError(f"lam must exceed 2, got {lam}")
    ratio = (4 * lam - 2) / (3 * lam - 2)
    beta = 2 - 1 / lam
    mu = (2 * (2 * lam - 1) / lam) * math.log(ratio)
    rho = (lam - 2) / (2 * lam)
    gamma = ((3 * lam - 2) / (lam - 2)) * math.log(ratio)
    return AnalyticParams(lam=lam, beta=beta, mu=mu, rho=rho, gamma=gamma)


@dataclass
class RecurrenceTrace:
    """Iterates of s' = (beta - s) * s until the density passes one half.

    ``s_values`` holds every computed term starting at s1 and including the
    first term at or above 1/2.  ``n`` is the count of terms below 1/2,
    which equals the number of map applications needed to cross.
    """

    s1: float
    lam: float
    s_values: list[float] = field(default_factory=list)

    @property
    def n(self) -> int:
        return sum(1 for s in self.s_values if s < 0.5)


def run_recurrence(s1: float, lam: float, max_steps: int = 10_000) -> RecurrenceTrace:
    if not 0 < s1 < 0.5:
        raise ValueError(f"s1 must lie in (0, 1/2), got {s1}")
    beta = derive_params(lam).beta
    values = [s1]
    while values[-1] < 0.5:
        if len(values) > max_steps:
            raise RuntimeError(f"recurrence failed to cross 1/2 within {max_steps} steps")
        values.append((beta - values[-1]) * values[-1])
    return RecurrenceTrace(s1=s1, lam=lam, s_values=values)


def step_limit(s1: float, lam: float) -> int:
    """Closed-form cap on the crossing count of ``run_recurrence``."""
    if not 0 < s1 < 0.5:
        raise ValueError(f"s1 must lie in (0, 1/2), got {s1}")
    p = derive_params(lam)
    return 1 + math.floor((1 / math.log(p.beta)) * (-math.log(2 * s1) + p.gamma))


def search_window(p: int, lam: float) -> int:
    """Odd window length 2*floor(lam*sqrt(p)*log(p)) + 1."""
    if p < 3:
        raise ValueError("p must be at least 3")
    if lam <= 0:
        raise ValueError("lam must be positive")
    return 2 * math.floor(lam * math.sqrt(p) * math.log(p)) + 1


def initial_density_floor(x: float) -> float:
    """Lower bound 1 / log(x / (2e))**2 for the starting density at scale x.

    Equivalent to the pair-count estimate x / (4 * (log(sqrt(x/2)) - 1/2)**2)
    divided by x; the two forms agree exactly.
    """
    if x <= C1:
        raise ValueError(f"x must exceed {C1:.3f}")
    return 1 / math.log(x / C1) ** 2


def master_inequality_holds(x: float, lam: float) -> bool:
    """The coarse closing inequality at scale x.

    Uses the unfloored step cap together with the window cost against the
    budget BUDGET_SCALE * x / SUM_SCALE.
    """
    p = derive_params(lam)
    if x <= C1:
        return False
    inner = math.log(x / C1)
    if inner <= 0:
        return False
    steps = 1 + (1 / math.log(p.beta)) * (-math.log(2) + 2 * math.log(inner) + p.gamma)
    cost = steps * (2 * lam * math.sqrt(x) * math.log(x) + 1)
    return cost < BUDGET_SCALE * x / SUM_SCALE


def final_inequality_holds(x: float, delta: float) -> bool:
    """The refined closing inequality ((42.8/10.2) * delta * log x)**2 < x."""
    if x <= 1:
        return False
    return ((2 * SUM_SCALE / BUDGET_SCALE) * delta * math.log(x)) ** 2 < x


def _threshold_search(holds, what: str) -> int:
    """Least integer x* with ``holds(x)`` for every x >= x*.

    Scans a multiplicative grid up to SEARCH_CEILING for the largest failing
    point, then bisects to the exact integer boundary.  The inequalities
    handled here hold in a band near zero, fail over one middle interval,
    and hold for all large x, so the largest failure is the right anchor.
    """
    x = 8.0
    last_fail = None
    while x <= SEARCH_CEILING:
        if not holds(int(x)):
            last_fail = int(x)
        x *= GRID_RATIO
    if last_fail is None:
        # never failed on the grid; treat the low end as the threshold
        return 8
    if last_fail >= SEARCH_CEILING / GRID_RATIO:
        raise RuntimeError(f"{what} still fails at the search ceiling {SEARCH_CEILING:.0e}")
    lo = last_fail  # known to fail
    hi = last_fail + 1
    step = 1
    while not holds(hi):  # expand to a holding point; the grid puts one nearby
        lo = hi
        hi += step
        step *= 2
    while lo + 1 < hi:
        mid = (lo + hi) // 2
        if holds(mid):
            hi = mid
        else:
            lo = mid
    for probe in (hi, 2 * hi, 10 * hi, 100 * hi):
        if not holds(probe):
            raise RuntimeError(f"{what}: spot re-check failed at {probe}")
    if holds(lo):
        raise RuntimeError(f"{what}: boundary inconsistent at {lo}")
    return hi


def threshold_master(lam: float) -> int:
    """Least x* above which the coarse inequality holds for scale lam."""
    derive_params(lam)
    return _threshold_search(lambda x: master_inequality_holds(x, lam), "master inequality")


def threshold_final(delta: float) -> int:
    """Least x* above which the refined inequality holds for step cost delta."""
    if delta <= 0:
        raise ValueError("delta must be positive")
    return _threshold_search(lambda x: final_inequality_holds(x, delta), "final inequality")


@dataclass(frozen=True)
class DeltaScanResult:
    best_lam: float
    delta_min: float
    table: tuple[tuple[float, int, float], ...]  # (lam, steps, delta)


def charged_steps(s1: float, lam: float) -> int:
    """Doubling rounds charged to the window budget.

    One fewer than the crossing count: the round that finally pushes the
    density past one half is folded into the saturation step and does not
    draw a fresh window.
    """
    return run_recurrence(s1, lam).n - 1


def delta_scan(lams, s1: float) -> DeltaScanResult:
    """Minimize delta(lam) = charged_steps * (lam + 0.001) over a grid."""
    rows = []
    for lam in lams:
        steps = charged_steps(s1, lam)
        rows.append((lam, steps, steps * (lam + 0.001)))
    if not rows:
        raise ValueError("empty lam grid")
    best = min(rows, key=lambda r: r[2])
    return DeltaScanResult(best_lam=best[0], delta_min=best[2], table=tuple(rows))


def default_lam_grid() -> list[float]:
    """The scan grid 2 + i/10 for i = 1..30."""
    return [2 + i / 10 for i in range(1, 31)]

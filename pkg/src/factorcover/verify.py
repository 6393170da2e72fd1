"""Range verification: certify every prime in an interval, with escalation.

Each prime is pushed through a fixed ladder of certificate attempts, from
the cheap search to the exhaustive one:

1. ``lemma``      certificate search, budget 3*sqrt(p), first 25 odd primes
2. ``lemma10``    same search with the budget raised to 10*sqrt(p)
3. ``lemma_ext``  raised budget over the next 25 odd primes as root candidates
4. ``fallback``   union of power-of-two factorial blocks
5. ``brute``      exact shortest-cost search (small p only)

The first stage that produces a certificate wins and is recorded, so runs
with different stage subsets can be diffed.  Reports stream back in prime
order, and long runs checkpoint after every block so an interrupted run
resumes without skipping or double-reporting a prime.
"""

from __future__ import annotations

import csv
import dataclasses
import hashlib
import json
import math
import os
import time
from dataclasses import dataclass
from importlib import resources
from typing import Iterable, Iterator, Optional, Sequence

from .certify import (
    DEFAULT_BRUTE_CEILING,
    CoverCertificate,
    SearchConfig,
    brute_cover,
    fallback_cover,
    find_certificate,
)
from .modmath import factor_into_primes
from .primes import sieve_upto

RANGE_CEILING = 3_242_000
STAGES = ("lemma", "lemma10", "lemma_ext", "fallback", "brute")
BLOCK_SIZE = 256


@dataclass(slots=True)
class VerificationReport:
    """Outcome for one prime: the certificate and the stage that found it,
    or neither when every enabled stage failed."""

    p: int
    stage: str
    certificate: Optional[CoverCertificate]
    elapsed_ms: float = 0.0
    error: Optional[str] = None

    @property
    def uncertified(self) -> bool:
        return self.certificate is None

    def to_json(self) -> dict:
        """Stable core record: no timing, fixed key order."""
        rec: dict = {"p": self.p, "stage": self.stage}
        if self.certificate is None:
            rec["method"] = None
            if self.error is not None:
                rec["error"] = self.error
        else:
            cert = self.certificate.to_json()
            rec["method"] = cert["method"]
            for key, value in cert.items():
                if key not in ("p", "method"):
                    rec[key] = value
        return rec

    def to_json_line(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))

    def csv_row(self) -> list:
        method = "" if self.certificate is None else self.certificate.method
        return [self.p, self.stage, method, f"{self.elapsed_ms:.3f}"]


CSV_HEADER = ["p", "stage", "method", "elapsed_ms"]


def _stage_config(stage: str, base: SearchConfig) -> SearchConfig:
    if stage == "lemma":
        return base
    if stage == "lemma10":
        return dataclasses.replace(base, budget_multiplier=10.0)
    if stage == "lemma_ext":
        return dataclasses.replace(
            base,
            budget_multiplier=10.0,
            root_offset=base.root_offset + base.root_candidates,
        )
    raise ValueError(f"not a search stage: {stage}")


def certify_prime(
    p: int,
    stages: Sequence[str] = STAGES,
    cfg: SearchConfig = SearchConfig(),
    prime_factors: Optional[list[int]] = None,
) -> VerificationReport:
    """Run the escalation ladder for one prime."""
    t0 = time.perf_counter()
    if prime_factors is None:
        prime_factors = factor_into_primes(p - 1)
    stage = "none"
    try:
        for stage in stages:
            if stage in ("lemma", "lemma10", "lemma_ext"):
                cert = find_certificate(p, _stage_config(stage, cfg), prime_factors)
                if cert is not None:
                    outcome = CoverCertificate(p=p, method="lemma", lemma=cert)
                    break
            elif stage == "fallback":
                s_list = fallback_cover(p)
                if s_list is not None:
                    outcome = CoverCertificate(
                        p=p, method="fallback", s_list=tuple(s_list)
                    )
                    break
            elif stage == "brute":
                if p > DEFAULT_BRUTE_CEILING:
                    continue
                result = brute_cover(p)
                if result.covered:
                    outcome = CoverCertificate(
                        p=p, method="brute", max_cost=result.max_cost
                    )
                    break
            else:
                raise ValueError(f"unknown stage {stage!r}")
        else:
            outcome = None
        elapsed = (time.perf_counter() - t0) * 1000.0
        return VerificationReport(
            p=p, stage=stage, certificate=outcome, elapsed_ms=elapsed
        )
    except Exception as exc:  # isolate per-prime failures, never abort a run
        elapsed = (time.perf_counter() - t0) * 1000.0
        return VerificationReport(
            p=p, stage=stage, certificate=None, elapsed_ms=elapsed,
            error=f"{type(exc).__name__}: {exc}",
        )


def _primes_between(lo: int, hi: int) -> list[int]:
    plist = sieve_upto(hi)
    return [int(p) for p in plist.primes if lo < p < hi]


def _verify_block(args: tuple) -> list[VerificationReport]:
    primes, stages, cfg, small_primes = args
    out = []
    for p in primes:
        factors = factor_into_primes(p - 1, small_primes)
        out.append(certify_prime(p, stages, cfg, factors))
    return out


def verify_range(
    lo: int,
    hi: int,
    cfg: SearchConfig = SearchConfig(),
    workers: int = 1,
    stages: Sequence[str] = STAGES,
    skip_through: int = 0,
) -> Iterator[VerificationReport]:
    """Certify every prime p with lo < p < hi, in prime order.

    ``workers`` > 1 fans blocks of primes out to a process pool; report
    order is unaffected.  ``skip_through`` drops primes <= that value
    (resume support).
    """
    if not 5 <= lo < hi <= RANGE_CEILING:
        raise ValueError(
            f"range ({lo}, {hi}) outside the supported (5, {RANGE_CEILING})"
        )
    primes = [p for p in _primes_between(lo, hi) if p > skip_through]
    small = sieve_upto(math.isqrt(hi) + 1)
    small_primes = [int(q) for q in small.primes]
    blocks = [
        (primes[i : i + BLOCK_SIZE], tuple(stages), cfg, small_primes)
        for i in range(0, len(primes), BLOCK_SIZE)
    ]
    if workers <= 1:
        for block in blocks:
            yield from _verify_block(block)
        return
    import multiprocessing

    with multiprocessing.Pool(workers) as pool:
        for reports in pool.imap(_verify_block, blocks):
            yield from reports


def emit_report(
    reports: Iterable[VerificationReport], format: str, path: str
) -> None:
    """Write reports sorted by p: JSON-lines (stable core record, no
    timing) or csv (fixed header, includes elapsed_ms)."""
    rows = sorted(reports, key=lambda r: r.p)
    try:
        if format == "jsonl":
            with open(path, "w") as fh:
                for r in rows:
                    fh.write(r.to_json_line() + "\n")
        elif format == "csv":
            with open(path, "w", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(CSV_HEADER)
                for r in rows:
                    writer.writerow(r.csv_row())
        else:
            raise ValueError(f"unknown report format {format!r}")
    except OSError as exc:
        raise OSError(f"cannot write report to {path}: {exc}") from exc


@dataclass(frozen=True)
class Checkpoint:
    last_fully_verified_prime: int
    config_hash: str
    output_offset: int

    def save(self, path: str) -> None:
        tmp = path + ".tmp"
        with open(tmp, "w") as fh:
            json.dump(dataclasses.asdict(self), fh)
        os.replace(tmp, path)

    @staticmethod
    def load(path: str) -> Optional["Checkpoint"]:
        if not os.path.exists(path):
            return None
        with open(path) as fh:
            obj = json.load(fh)
        return Checkpoint(**obj)


def run_config_hash(
    lo: int, hi: int, stages: Sequence[str], cfg: SearchConfig, format: str
) -> str:
    blob = json.dumps(
        {
            "lo": lo,
            "hi": hi,
            "stages": list(stages),
            "cfg": dataclasses.asdict(cfg),
            "format": format,
        },
        sort_keys=True,
    )
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def run_verification(
    lo: int,
    hi: int,
    out_path: str,
    cfg: SearchConfig = SearchConfig(),
    workers: int = 1,
    stages: Sequence[str] = STAGES,
    format: str = "jsonl",
    checkpoint_path: Optional[str] = None,
) -> dict:
    """Full verification run with streaming output and block checkpoints.

    Returns a summary dict: prime/uncertified counts and per-stage totals.
    Resume never skips a prime and never repeats one: the checkpoint stores
    the output byte offset at the last completed block, and the output file
    is truncated there before appending.
    """
    chash = run_config_hash(lo, hi, stages, cfg, format)
    skip_through = 0
    start_offset = 0
    if checkpoint_path:
        ck = Checkpoint.load(checkpoint_path)
        if ck is not None:
            if ck.config_hash != chash:
                raise ValueError(
                    f"checkpoint {checkpoint_path} belongs to a different "
                    f"run configuration (hash {ck.config_hash} != {chash})"
                )
            skip_through = ck.last_fully_verified_prime
            start_offset = ck.output_offset

    if start_offset and not os.path.exists(out_path):
        raise ValueError(
            f"checkpoint expects existing output {out_path}; "
            "delete the checkpoint to restart from scratch"
        )
    mode = "r+" if start_offset else "w"
    summary = {"primes": 0, "uncertified": 0, "stages": {}, "errors": 0}
    with open(out_path, mode, newline="") as fh:
        if mode == "r+":
            fh.truncate(start_offset)
            fh.seek(start_offset)
        writer = csv.writer(fh) if format == "csv" else None
        if format == "csv" and start_offset == 0:
            writer.writerow(CSV_HEADER)
        pending = 0
        last_prime = skip_through
        for report in verify_range(
            lo, hi, cfg=cfg, workers=workers, stages=stages,
            skip_through=skip_through,
        ):
            if format == "jsonl":
                fh.write(report.to_json_line() + "\n")
            else:
                writer.writerow(report.csv_row())
            summary["primes"] += 1
            if report.uncertified:
                summary["uncertified"] += 1
            if report.error:
                summary["errors"] += 1
            stage_counts = summary["stages"]
            stage_counts[report.stage] = stage_counts.get(report.stage, 0) + 1
            last_prime = report.p
            pending += 1
            if checkpoint_path and pending >= BLOCK_SIZE:
                fh.flush()
                Checkpoint(last_prime, chash, fh.tell()).save(checkpoint_path)
                pending = 0
        fh.flush()
        if checkpoint_path:
            Checkpoint(last_prime, chash, fh.tell()).save(checkpoint_path)
    return summary


def packaged_bad_list(which: str) -> list[int]:
    """The bad-prime lists shipped with the package.

    ``first_pass``: the 110 distinct primes that survive the cheap search
    (two printed entries were duplicates).  ``final``: the 25 primes that
    survive every certificate search stage.
    """
    fname = {
        "first_pass": "bad_primes_first_pass.txt",
        "final": "bad_primes_final.txt",
    }[which]
    text = resources.files("factorcover.data").joinpath(fname).read_text()
    return [int(line) for line in text.split()]


@dataclass
class BadListReproduction:
    first_run_bad: list[int]  # survivors of the base-budget search
    after_budget_bad: list[int]  # still bad at the raised budget
    final_bad: list[int]  # still bad with extended roots

    def compare(self, reference: list[int], ours: list[int]) -> dict:
        ref, got = set(reference), set(ours)
        return {
            "matched": sorted(ref & got),
            "ours_only": sorted(got - ref),
            "reference_only": sorted(ref - got),
        }


def reproduce_bad_lists(
    hi: int = RANGE_CEILING,
    cfg: SearchConfig = SearchConfig(),
    workers: int = 1,
) -> BadListReproduction:
    """Re-run the staged searches and collect the surviving bad primes.

    Stage 1 scans every prime below ``hi`` at the base budget; later stages
    only re-examine earlier survivors, so they are cheap regardless of
    range.
    """
    first: list[int] = []
    for report in verify_range(
        5, hi, cfg=cfg, workers=workers, stages=("lemma",)
    ):
        if report.uncertified:
            first.append(report.p)
    small = sieve_upto(math.isqrt(max(hi, 9)) + 1)
    small_primes = [int(q) for q in small.primes]
    after_budget = []
    for p in first:
        factors = factor_into_primes(p - 1, small_primes)
        if find_certificate(p, _stage_config("lemma10", cfg), factors) is None:
            after_budget.append(p)
    final = []
    for p in after_budget:
        factors = factor_into_primes(p - 1, small_primes)
        if find_certificate(p, _stage_config("lemma_ext", cfg), factors) is None:
            final.append(p)
    return BadListReproduction(
        first_run_bad=first, after_budget_bad=after_budget, final_bad=final
    )

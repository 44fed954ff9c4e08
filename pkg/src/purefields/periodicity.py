"""
Periodicity of integral-basis structure in m.

Shifting m by n0^n leaves the integral-basis structure unchanged, where
n0 = prod p^floor(n h / 2) over p^h || n.  Hence one representative per
residue of k modulo p^n (for every p | n) suffices to confirm a pattern
for the class m = r + n^2 k.  This module computes n0, the charpoly
divisibility conditions behind it, and runs the residue sweeps, either
in-process or as resumable line-oriented job files.
"""

from __future__ import annotations

import csv
import logging
import random
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Optional, Sequence, TextIO

from .algebra import factorize, is_squarefree
from .field import PureField, scaled_charpoly
from .orders import maximal_order
from .tables import (
    PatternReport,
    omitted_residues,
    pattern_for_residue,
    same_structure,
    validate_pattern,
)

log = logging.getLogger(__name__)

PASS, FAIL, SKIPPED = "pass", "fail", "skipped-nonsquarefree"


def compute_n0(n: int) -> int:
    if n < 2:
        raise ValueError("n must be at least 2")
    n0 = 1
    for p, h in factorize(n).items():
        n0 *= p ** (n * h // 2)
    return n0


# ------------------------------------------------------------------ divisibility

@dataclass(frozen=True)
class DivisibilityRecord:
    j: int
    value: int  # P_j(m)
    required: int  # q^(n-j)
    holds: bool


def charpoly_divisibility(field: PureField, numerators: Sequence[int], q: int) -> list[DivisibilityRecord]:
    """Conditions q^(n-j) | P_j(m) for (sum a_i theta^i)/q to be integral,
    listed from j = n-1 down to 0."""
    if q < 1:
        raise ValueError("q must be positive")
    n = field.n
    if len(numerators) != n:
        raise ValueError(f"expected {n} numerators")
    P = scaled_charpoly(n, field.m, numerators)
    out = []
    for j in range(n - 1, -1, -1):
        need = q ** (n - j)
        out.append(DivisibilityRecord(j, P[j], need, P[j] % need == 0))
    return out


def check_shift_invariance(n: int, m: int) -> Optional[bool]:
    """Same basis structure at m and m + n0^n; None when either is not square-free."""
    m2 = m + compute_n0(n) ** n
    try:
        a, b = PureField(n, m), PureField(n, m2)
    except ValueError:
        return None
    return same_structure(maximal_order(a), maximal_order(b))


# ------------------------------------------------------------------ sweeps

@dataclass(frozen=True)
class SweepRecord:
    """One line of a report: ``n=<n> r=<r> k=<k> m=<m> status=<status>``."""

    n: int
    r: int
    k: int
    m: int
    status: str

    def to_line(self) -> str:
        return f"n={self.n} r={self.r} k={self.k} m={self.m} status={self.status}"

    @classmethod
    def from_line(cls, line: str) -> "SweepRecord":
        kv = dict(re.findall(r"(\w+)=(\S+)", line))
        try:
            return cls(int(kv["n"]), int(kv["r"]), int(kv["k"]), int(kv["m"]), kv["status"])
        except KeyError as e:
            raise ValueError(f"record missing field {e}: {line!r}") from None


def valid_residues(n: int) -> list[int]:
    bad = set(omitted_residues(n))
    return [r for r in range(1, n * n + 1) if r not in bad]


def _check_residue(n: int, r: int) -> None:
    if not 1 <= r <= n * n:
        raise ValueError(f"residue {r} outside [1, {n * n}]")
    pattern_for_residue(n, r)  # raises for omitted residues


def _representative(n: int, r: int, k: int, step: int) -> Iterator[tuple[int, int, bool]]:
    """Walk k, k + step, ... yielding (k, m, square-free) until m is usable."""
    while True:
        m = r + n * n * k
        if m >= 2:
            ok = is_squarefree(m)
            yield k, m, ok
            if ok:
                return
        k += step


def _validate(n: int, r: int, k: int, m: int) -> tuple[SweepRecord, PatternReport]:
    rep = validate_pattern(pattern_for_residue(n, r), m)
    return SweepRecord(n, r, k, m, PASS if rep.passed else FAIL), rep


def residue_sweep_records(n: int, r: int, p: int, ks: Optional[Iterable[int]] = None) -> Iterator[tuple[SweepRecord, Optional[PatternReport]]]:
    """For each k-residue c mod p^n: smallest square-free m = r + n^2 k >= 2, k = c mod p^n."""
    _check_residue(n, r)
    if n % p:
        raise ValueError(f"{p} does not divide {n}")
    step = p**n
    for c in (range(step) if ks is None else ks):
        for k, m, ok in _representative(n, r, c, step):
            if ok:
                yield _validate(n, r, k, m)
            else:
                log.info("skip n=%d r=%d k=%d m=%d: not square-free", n, r, k, m)
                yield SweepRecord(n, r, k, m, SKIPPED), None


def _class_members(n: int, r: int, ks: Iterable[int]) -> Iterator[tuple[int, int]]:
    for k in ks:
        m = r + n * n * k
        if m not in (0, 1, -1) and is_squarefree(m):
            yield k, m


def _run_chunk(args) -> list[PatternReport]:
    n, r, members = args
    return [_validate(n, r, k, m)[1] for k, m in members]


def verify_period(
    n: int,
    r: int,
    mode: str = "residue-sweep",
    *,
    p: Optional[int] = None,
    bound: int = 500,
    count: int = 50,
    seed: int = 0,
    k_range: int = 10**4,
    workers: int = 1,
) -> list[PatternReport]:
    """Validate the pattern of class r on selected square-free m = r + n^2 k.

    modes:
      exhaustive     every square-free m in the class with |m| <= bound
      sampled        ``count`` random k in [-k_range, k_range] (seeded)
      residue-sweep  one representative per k mod p^n (every p | n if p is None)
    """
    _check_residue(n, r)
    nn = n * n
    if mode == "exhaustive":
        members = list(_class_members(n, r, range(-(bound + r) // nn, (bound - r) // nn + 1)))
        members = [(k, m) for k, m in members if abs(m) <= bound]
    elif mode == "sampled":
        rng = random.Random(seed)
        members, seen = [], set()
        while len(members) < count:
            k = rng.randint(-k_range, k_range)
            if k in seen:
                continue
            seen.add(k)
            members.extend(_class_members(n, r, [k]))
    elif mode == "residue-sweep":
        primes = [p] if p is not None else sorted(factorize(n))
        members = []
        for q in primes:
            if n % q:
                raise ValueError(f"{q} does not divide {n}")
            for c in range(q**n):
                for k, m, ok in _representative(n, r, c, q**n):
                    if not ok:
                        log.info("skip n=%d r=%d k=%d m=%d: not square-free", n, r, k, m)
                members.append((k, m))
    else:
        raise ValueError(f"unknown mode {mode!r}")
    if workers > 1 and len(members) > 1:
        chunks = [(n, r, members[i::workers]) for i in range(workers)]
        with ProcessPoolExecutor(workers) as ex:
            return [rep for part in ex.map(_run_chunk, chunks) for rep in part]
    return _run_chunk((n, r, members))


# ------------------------------------------------------------------ jobs

@dataclass(frozen=True)
class PeriodJob:
    """k-residues [lo, hi) mod p^n for each listed p, on one residue r."""

    node: int
    n: int
    r: int
    sweeps: tuple[tuple[int, int, int], ...]  # (p, lo, hi)

    def cells(self) -> Iterator[tuple[int, int, int]]:
        for p, lo, hi in self.sweeps:
            for c in range(lo, hi):
                yield self.r, p, c


def partition_jobs(n: int, residues: Sequence[int], nodes: int) -> list[PeriodJob]:
    """Disjoint cover of residues x (k mod p^n), balanced over nodes.

    With at least as many residues as nodes, whole residues are dealt out
    round-robin.  Otherwise each residue's k-ranges are cut into pieces.
    """
    if nodes < 1:
        raise ValueError("nodes must be at least 1")
    for r in residues:
        _check_residue(n, r)
    primes = sorted(factorize(n))
    if len(residues) >= nodes:
        return [
            PeriodJob(i % nodes, n, r, tuple((p, 0, p**n) for p in primes))
            for i, r in enumerate(residues)
        ]
    per = -(-nodes // len(residues))  # pieces per residue
    jobs = []
    for r in residues:
        for piece in range(per):
            sweeps = tuple(
                (p, p**n * piece // per, p**n * (piece + 1) // per)
                for p in primes
                if p**n * (piece + 1) // per > p**n * piece // per
            )
            if sweeps:
                jobs.append(PeriodJob(len(jobs) % nodes, n, r, sweeps))
    return jobs


def write_job(job: PeriodJob, path: Path) -> None:
    """Job file: one pending record per k-residue, grouped under sweep headers."""
    lines = [f"# job node={job.node} n={job.n} r={job.r}"]
    for p, lo, hi in job.sweeps:
        lines.append(f"# sweep p={p} step={p ** job.n}")
        for c in range(lo, hi):
            lines.append(f"n={job.n} r={job.r} k={c} m={job.r + job.n * job.n * c} status=pending")
    Path(path).write_text("\n".join(lines) + "\n")


def read_job(path: Path) -> tuple[int, list[tuple[int, SweepRecord]]]:
    """(node, [(step, pending record)])."""
    node, step, items = 0, None, []
    for raw in Path(path).read_text().splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            kv = dict(re.findall(r"(\w+)=(\S+)", line))
            if "node" in kv:
                node = int(kv["node"])
            if "step" in kv:
                step = int(kv["step"])
            continue
        if step is None:
            raise ValueError(f"{path}: record before sweep header")
        items.append((step, SweepRecord.from_line(line)))
    return node, items


def read_report(path: Path) -> list[SweepRecord]:
    p = Path(path)
    if not p.exists():
        return []
    out = []
    for raw in p.read_text().splitlines():
        if raw.strip() and not raw.startswith("#"):
            try:
                out.append(SweepRecord.from_line(raw))
            except ValueError:
                log.warning("%s: ignoring malformed line %r", path, raw)
    return out


def run_job(job_path: Path, report_path: Path) -> list[SweepRecord]:
    """Process a job file, appending to the report; already reported cells are skipped."""
    _, items = read_job(job_path)
    done = {(s.n, s.r, s.k): s for s in read_report(report_path)}
    new: list[SweepRecord] = []
    with open(report_path, "a") as fh:
        for step, pending in items:
            n, r = pending.n, pending.r
            for k, m, ok in _representative(n, r, pending.k, step):
                prior = done.get((n, r, k))
                if prior is not None:
                    continue
                rec = _validate(n, r, k, m)[0] if ok else SweepRecord(n, r, k, m, SKIPPED)
                fh.write(rec.to_line() + "\n")
                fh.flush()
                done[(n, r, k)] = rec
                new.append(rec)
    return new


def export_csv(records: Iterable[SweepRecord], out: TextIO) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["n", "r", "k", "m", "status"])
    for s in records:
        w.writerow([s.n, s.r, s.k, s.m, s.status])

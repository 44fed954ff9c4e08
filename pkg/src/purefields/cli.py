"""Command-line front end: ``purefields <subcommand> ...``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import report as R
from .cache import ResultCache, cache_key
from .periodicity import (
    FAIL,
    partition_jobs,
    read_report,
    run_job,
    valid_residues,
    write_job,
)

EXIT_OK, EXIT_MATH, EXIT_USAGE = 0, 1, 2

log = logging.getLogger("purefields")


class UsageError(Exception):
    pass


def _class_arg(text: str) -> tuple[int, Optional[int]]:
    """``r`` or ``r,mod``."""
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return int(parts[0]), None
        if len(parts) == 2:
            return int(parts[0]), int(parts[1])
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"expected r or r,mod, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text", "csv"), default="text")
    common.add_argument("--cache", help="cache file (default: $PUREFIELDS_CACHE)")
    common.add_argument("--no-cache", action="store_true", help="ignore the cache")
    common.add_argument("-v", "--verbose", action="store_true")

    ap = argparse.ArgumentParser(
        prog="purefields",
        description="Integral bases, index forms and monogenity of pure fields Q(m^(1/n)).",
    )
    sub = ap.add_subparsers(dest="command", required=True, metavar="command")

    def add(name, help_text):
        return sub.add_parser(name, help=help_text, parents=[common])

    p = add("basis", "integral basis and discriminant")
    p.add_argument("n", type=int)
    p.add_argument("m", type=int)

    p = add("pattern", "table lookup and validation against the computed basis")
    p.add_argument("n", type=int)
    p.add_argument("m", type=int)

    for name, text in (("index", "index of x2 b2 + ... + xn bn"), ("factors", "index-form factors (n = 4, 6, 8)")):
        p = add(name, text)
        p.add_argument("n", type=int)
        p.add_argument("m", type=int)
        p.add_argument("coords", type=int, nargs="+", metavar="x")

    p = add("solvable", "is I = +-1 solvable mod q on a residue class")
    p.add_argument("n", type=int)
    p.add_argument("cls", type=_class_arg, metavar="r[,mod]")
    p.add_argument("q", type=int)

    p = add("classify", "monogenity verdict")
    p.add_argument("n", type=int)
    p.add_argument("m", type=int)

    p = add("search", "smallest index in a coordinate box")
    p.add_argument("n", type=int)
    p.add_argument("m", type=int)
    p.add_argument("--bound", "-B", type=int, default=2)
    p.add_argument("--workers", type=int, default=1)

    p = add("verify-period", "validate a residue-class pattern over many m")
    p.add_argument("n", type=int)
    p.add_argument("r", type=int)
    p.add_argument("--mode", choices=("exhaustive", "sampled", "residue-sweep"), default="residue-sweep")
    p.add_argument("--p", type=int, help="prime for residue-sweep (default: every p | n)")
    p.add_argument("--bound", type=int, default=500, help="|m| bound for exhaustive mode")
    p.add_argument("--count", type=int, default=50, help="sample size")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)

    p = add("n0", "the shift modulus n0 and n0^n")
    p.add_argument("n", type=int)

    p = add("shift-check", "compare basis structure at m and m + n0^n")
    p.add_argument("n", type=int)
    p.add_argument("m", type=int)

    p = add("jobs", "write residue-sweep job files")
    p.add_argument("n", type=int)
    p.add_argument("--nodes", type=int, default=1)
    p.add_argument("--residues", help="comma separated (default: all admissible)")
    p.add_argument("--out", default="jobs", help="output directory")

    p = add("run-jobs", "process job files, appending to a report")
    p.add_argument("jobs", nargs="+", type=Path)
    p.add_argument("--report", type=Path, required=True)
    return ap


def _compute(args) -> tuple[R.Report, bool]:
    c = args.command
    if c == "basis":
        return R.basis_report(args.n, args.m)
    if c == "pattern":
        return R.pattern_report(args.n, args.m)
    if c in ("index", "factors"):
        if len(args.coords) != args.n - 1:
            raise UsageError(f"expected {args.n - 1} coordinates, got {len(args.coords)}")
        fn = R.index_report if c == "index" else R.factors_report
        return fn(args.n, args.m, args.coords)
    if c == "solvable":
        r, mod = args.cls
        return R.solvable_report(args.n, r, mod, args.q)
    if c == "classify":
        return R.classify_report(args.n, args.m)
    if c == "search":
        return R.search_report(args.n, args.m, args.bound, workers=args.workers)
    if c == "verify-period":
        kw = {"exhaustive": {"bound": args.bound}, "sampled": {"count": args.count, "seed": args.seed},
              "residue-sweep": {"p": args.p}}[args.mode]
        return R.period_report(args.n, args.r, args.mode, workers=args.workers, **kw)
    if c == "n0":
        return R.n0_report(args.n)
    if c == "shift-check":
        return R.shift_report(args.n, args.m)
    if c == "jobs":
        residues = [int(x) for x in args.residues.split(",")] if args.residues else valid_residues(args.n)
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        files = []
        for i, job in enumerate(partition_jobs(args.n, residues, args.nodes)):
            path = out / f"job-n{args.n}-{i:04d}-node{job.node}.txt"
            write_job(job, path)
            files.append(str(path))
        return {"command": "jobs", "n": args.n, "nodes": args.nodes, "files": files}, True
    if c == "run-jobs":
        for path in args.jobs:
            run_job(path, args.report)
        recs = read_report(args.report)
        fails = sum(1 for s in recs if s.status == FAIL)
        return {"command": "run-jobs", "report": str(args.report), "records": len(recs), "failures": fails}, fails == 0
    raise UsageError(f"unknown command {c}")


# jobs and run-jobs touch the file system, so they are never cached
_UNCACHED = {"jobs", "run-jobs"}
_IGNORED = {"format", "cache", "no_cache", "verbose", "workers"}


def run(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=err,
                        format="%(levelname)s: %(message)s")
    if args.format == "csv" and args.command != "verify-period":
        print("error: csv output is only available for verify-period", file=err)
        return EXIT_USAGE

    cache = None if (args.no_cache or args.command in _UNCACHED) else ResultCache.from_env(args.cache)
    key = None
    if cache is not None:
        params = {k: v for k, v in vars(args).items() if k not in _IGNORED}
        params["format"] = args.format
        key = cache_key(params)
        hit = cache.get(key)
        if hit is not None:
            code, text = hit
            out.write(text)
            return code

    try:
        rep, ok = _compute(args)
    except (ValueError, LookupError, UsageError) as e:
        # FieldError and ResidueError (invalid n or m) are ValueErrors
        print(f"error: {e}", file=err)
        return EXIT_USAGE
    except ArithmeticError as e:
        print(f"failure: {e}", file=err)
        return EXIT_MATH
    text = R.RENDERERS[args.format](rep) + "\n"
    code = EXIT_OK if ok else EXIT_MATH
    if cache is not None:
        cache.put(key, code, text)
    out.write(text)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

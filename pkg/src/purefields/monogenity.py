"""
Monogenity: modular obstructions, the classifier and small-index search.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from math import gcd
from typing import Optional

from .algebra import prime_divisors
from .field import PureField
from .orders import IndexEvaluator, element_index
from .tables import BasisPattern, instantiate, lookup_pattern, pattern_for_residue

MONOGENIC, NOT_MONOGENIC, UNKNOWN = "Monogenic", "NotMonogenic", "Unknown"

# reasons
POWER_BASIS = "power-basis"
WITNESS = "witness"
MOD_Q = "mod-q-obstruction"
DIVISIBILITY = "divisibility-obstruction"
THEOREM = "paper-theorem"
CONJECTURE = "conjecture"
UNDECIDED = "undecided"


@dataclass(frozen=True)
class ResidueClass:
    """m = residue + modulus * t, t in Z."""

    n: int
    residue: int
    modulus: int

    def __post_init__(self) -> None:
        if self.modulus < 1:
            raise ValueError("modulus must be positive")
        object.__setattr__(self, "residue", self.residue % self.modulus)
        bad = [p for p in prime_divisors(self.n) if gcd(self.residue, self.modulus) % (p * p) == 0]
        if bad:
            raise ValueError(f"class {self.residue} mod {self.modulus} only holds multiples of {bad[0]}^2")

    @property
    def pattern(self) -> BasisPattern:
        p = pattern_for_residue(self.n, self.residue)
        if self.modulus % p.modulus:
            raise ValueError(
                f"modulus {self.modulus} does not refine case {p.case_id} (mod {p.modulus})"
            )
        return p

    def __str__(self) -> str:
        return f"{self.residue} mod {self.modulus}"


@dataclass(frozen=True)
class Classification:
    n: int
    m: int
    verdict: str
    reason: str
    case_id: str
    witness: Optional[tuple[int, ...]] = None
    detail: str = ""


@dataclass(frozen=True)
class SearchReport:
    field: PureField
    bound: int
    best_index: int
    best_coords: tuple[int, ...]
    index_one: tuple[tuple[int, ...], ...] = dc_field(default=())

    @property
    def count_index_one(self) -> int:
        return len(self.index_one)


# ------------------------------------------------------------------ mod q

def _sweep(n: int, residue: int, modulus: int, q: int):
    cls = ResidueClass(n, residue, modulus)
    rows = cls.pattern.rows
    for t in range(q):
        ev = IndexEvaluator(n, cls.residue + t * modulus, rows)
        for x in itertools.product(range(q), repeat=n - 1):
            v = ev.value(x)
            if v.denominator != 1:
                raise ArithmeticError(f"non-integral index value {v}")
            if v.numerator % q in (1, q - 1):
                return True, (t,) + x
    return False, None


@lru_cache(maxsize=256)
def _sweep_cached(n: int, residue: int, modulus: int, q: int):
    return _sweep(n, residue, modulus, q)


def index_form_solvable_mod(
    n: int, cls: ResidueClass, q: int, cache: bool = True
) -> tuple[bool, Optional[tuple[int, ...]]]:
    """Is I(x) = +-1 (mod q) solvable for some m in cls?

    The index at fixed coordinates is an integer polynomial in the class
    parameter, so t and x_2..x_n range over [0, q).  The witness is
    (t, x_2, ..., x_n) with m = residue + t * modulus.
    """
    if q < 2:
        raise ValueError("q must be at least 2")
    if cls.n != n:
        raise ValueError("residue class belongs to a different degree")
    run = _sweep_cached if cache else _sweep
    return run(n, cls.residue, cls.modulus, q)


# ------------------------------------------------------------------ classifier

# (case, q) with I = +-1 unsolvable mod q on the whole case (4.2 only for m = 1 mod 16)
MOD_Q_CASES = {"6.2": 2, "6.3": 3, "6.5": 6, "6.6": 3}
QUARTIC_SPLIT_Q = 2

WITNESSES: dict[tuple[int, int], tuple[int, ...]] = {
    (4, 73): (2, 1, 1),
    (4, 89): (2, 1, 1),
    (4, -3): (1, 1, 0),
    (5, 7): (0, -2, -1, 2),
    (8, -3): (-1, -1, 0, 1, 1, 0, -1),
}

CONJ_QUARTIC = "minimal index 8 (for m = 9 mod 16 the only monogenic fields are m = 73, 89)"
CONJ_QUINTIC = "minimal index 5 (r = 1, 7, 18, 24 not monogenic except m = 7)"
CONJ_OCTIC_82 = "the minimal index is 128"
CONJ_OCTIC_5 = "minimal index of Q(5^(1/8)) is 16"


def _verified_witness(pattern: BasisPattern, m: int, coords: tuple[int, ...]) -> bool:
    basis = instantiate(pattern, m)
    return element_index(basis, coords).index == 1


def _mod_q_class(n: int, m: int, case_id: str) -> tuple[ResidueClass, int]:
    if case_id == "4.2":
        return ResidueClass(n, m, 32), QUARTIC_SPLIT_Q
    return ResidueClass(n, m, n * n), MOD_Q_CASES[case_id]


def classify(n: int, m: int) -> Classification:
    pattern = lookup_pattern(n, m)  # validates n, m
    case = pattern.case_id

    def out(verdict, reason, witness=None, detail=""):
        return Classification(n, m, verdict, reason, case, witness, detail)

    if pattern.is_power_basis:
        return out(MONOGENIC, POWER_BASIS, (1,) + (0,) * (n - 2))
    w = WITNESSES.get((n, m))
    if w is not None:
        if not _verified_witness(pattern, m, w):
            raise ArithmeticError(f"recorded witness {w} fails for n={n}, m={m}")
        return out(MONOGENIC, WITNESS, w)

    if case in MOD_Q_CASES or (case == "4.2" and m % 16 == 1):
        cls, q = _mod_q_class(n, m, case)
        solvable, _ = index_form_solvable_mod(n, cls, q)
        if solvable:
            raise ArithmeticError(f"expected obstruction mod {q} for {cls} does not hold")
        return out(NOT_MONOGENIC, MOD_Q, detail=f"q={q}, class {cls}")
    if case == "4.2":
        return out(UNKNOWN, CONJECTURE, detail=CONJ_QUARTIC)
    if case in ("4.3", "6.4", "8.4") or (case == "8.3" and m != 5):
        return out(NOT_MONOGENIC, DIVISIBILITY, detail=case)
    if case == "8.3":
        return out(UNKNOWN, CONJECTURE, detail=CONJ_OCTIC_5)
    if case == "8.2":
        return out(NOT_MONOGENIC, THEOREM, detail="cited non-monogenity theorem; conjecture: " + CONJ_OCTIC_82)
    if n == 5:
        return out(UNKNOWN, CONJECTURE, detail=CONJ_QUINTIC)
    return out(UNKNOWN, UNDECIDED)


# ------------------------------------------------------------------ search

def _canonical_points(dim: int, B: int, first: int):
    """Points of [-B, B]^dim with leading entry ``first`` whose first
    non-zero entry is positive."""
    if first > 0:
        yield from ((first,) + t for t in itertools.product(range(-B, B + 1), repeat=dim - 1))
    elif dim > 1:
        for f in range(B + 1):
            yield from ((0,) + t for t in _canonical_points(dim - 1, B, f))


def _scan(args):
    n, m, rows, B, first = args
    ev = IndexEvaluator(n, m, rows)
    best, best_x, ones = None, None, []
    for x in _canonical_points(n - 1, B, first):
        v = abs(ev.value(x))
        if v == 0:
            continue
        v = int(v)
        if best is None or v < best:
            best, best_x = v, x
        if v == 1:
            ones.append(x)
    return best, best_x, ones


def search_small_index(field: PureField, B: int, workers: int = 1) -> SearchReport:
    """Smallest |I(x)| over the box [-B, B]^(n-1), up to sign."""
    if B < 1:
        raise ValueError("bound must be at least 1")
    n, m = field.n, field.m
    rows = lookup_pattern(n, m).rows
    blocks = [(n, m, rows, B, f) for f in range(0, B + 1)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            parts = list(ex.map(_scan, blocks))
    else:
        parts = [_scan(b) for b in blocks]
    best, best_x, ones = None, None, []
    for b, bx, o in parts:
        if b is not None and (best is None or b < best or (b == best and bx < best_x)):
            best, best_x = b, bx
        ones.extend(o)
    if best is None:
        raise ArithmeticError("no primitive element in the search box")
    return SearchReport(field, B, best, best_x, tuple(sorted(ones)))

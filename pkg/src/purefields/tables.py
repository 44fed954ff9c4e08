"""
Integral-basis patterns per residue class of m, read from ``data/n<n>.txt``.

Line format (one case per line, ``#`` starts a comment)::

    case <id>; residues <r ...>; mod <M>; row <q> : <a0> ... <a_{n-1}>; ...; disc <sign> <const> m^<e>

``residues`` are representatives mod n^2.  ``mod`` is the modulus of the
case's parameter k in m = r + M k; it is coarser than n^2 where several
classes share one formula (e.g. m = 5 + 8k for n = 4).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property, lru_cache
from importlib import resources
from math import gcd, isqrt

from .algebra import prime_divisors
from .field import ElementRep, FieldError, PureField
from .orders import (
    IntegralBasis,
    _canonical_lattice,
    is_algebraic_integer,
    maximal_order,
)


class TableError(ValueError):
    """Malformed pattern table."""


class ResidueError(ValueError):
    """m (or r) does not belong to any admissible residue class."""


@dataclass(frozen=True)
class DiscFormula:
    sign: int
    const: int
    exponent: int
    const_text: str = ""

    def __call__(self, m: int) -> int:
        return self.sign * self.const * m**self.exponent

    def __str__(self) -> str:
        s = "-" if self.sign < 0 else ""
        return f"{s}{self.const_text or self.const}*m^{self.exponent}"


@dataclass(frozen=True)
class BasisPattern:
    case_id: str
    n: int
    residues: tuple[int, ...]
    modulus: int
    rows: tuple[ElementRep, ...]
    disc: DiscFormula

    @cached_property
    def lattice(self) -> tuple[int, tuple[tuple[int, ...], ...]]:
        """(denominator, HNF) of the lattice spanned by the rows."""
        d = 1
        for e in self.rows:
            d = d * e.q // gcd(d, e.q)
        gens = [[a * (d // e.q) for a in e.numerators] for e in self.rows]
        H, d = _canonical_lattice(gens, d)
        return d, tuple(map(tuple, H))

    @property
    def is_power_basis(self) -> bool:
        return all(e.q == 1 for e in self.rows)

    def parameter(self, m: int) -> int:
        """k with m = r + modulus * k and r = m mod modulus."""
        return (m - m % self.modulus) // self.modulus

    def covers(self, m: int) -> bool:
        nn = self.n * self.n
        return (m % nn or nn) in self.residues


@dataclass(frozen=True)
class PatternReport:
    case_id: str
    n: int
    m: int
    integral: tuple[bool, ...]
    disc_match: bool
    structure_match: bool
    disc: int

    @property
    def passed(self) -> bool:
        return all(self.integral) and self.disc_match and self.structure_match


# ------------------------------------------------------------------ parsing

_ROW = re.compile(r"row\s+(\d+)\s*:\s*(.*)")
_DISC = re.compile(r"disc\s+([+-])\s+([\d^*]+)\s+m\^(\d+)")


def _eval_const(text: str) -> int:
    value = 1
    for factor in text.split("*"):
        base, _, exp = factor.partition("^")
        value *= int(base) ** int(exp or 1)
    return value


def parse_line(line: str, n: int) -> BasisPattern:
    fields = [f.strip() for f in line.split(";") if f.strip()]
    case_id = residues = modulus = disc = None
    rows: list[ElementRep] = []
    for f in fields:
        key = f.split(None, 1)[0]
        if key == "case":
            case_id = f.split(None, 1)[1].strip()
        elif key == "residues":
            residues = tuple(int(t) for t in f.split()[1:])
        elif key == "mod":
            modulus = int(f.split()[1])
        elif key == "row":
            mt = _ROW.fullmatch(f)
            if not mt:
                raise TableError(f"bad row: {f!r}")
            nums = tuple(int(t) for t in mt.group(2).split())
            if len(nums) != n:
                raise TableError(f"case {case_id}: row has {len(nums)} entries, expected {n}")
            rows.append(ElementRep(nums, int(mt.group(1))))
        elif key == "disc":
            mt = _DISC.fullmatch(f)
            if not mt:
                raise TableError(f"bad disc: {f!r}")
            disc = DiscFormula(
                -1 if mt.group(1) == "-" else 1,
                _eval_const(mt.group(2)),
                int(mt.group(3)),
                mt.group(2),
            )
        else:
            raise TableError(f"unknown field {key!r}")
    if None in (case_id, residues, modulus, disc) or len(rows) != n:
        raise TableError(f"incomplete case line: {line!r}")
    if rows[0] != ElementRep((1,) + (0,) * (n - 1), 1):
        raise TableError(f"case {case_id}: first row must be 1")
    return BasisPattern(case_id, n, residues, modulus, tuple(rows), disc)


def format_pattern(p: BasisPattern) -> str:
    parts = [f"case {p.case_id}", "residues " + " ".join(map(str, p.residues)), f"mod {p.modulus}"]
    parts += [f"row {e.q} : " + " ".join(map(str, e.numerators)) for e in p.rows]
    sign = "-" if p.disc.sign < 0 else "+"
    parts.append(f"disc {sign} {p.disc.const_text or p.disc.const} m^{p.disc.exponent}")
    return "; ".join(parts)


def parse_table(text: str, n: int) -> tuple[BasisPattern, ...]:
    out = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append(parse_line(line, n))
    return tuple(out)


@lru_cache(maxsize=None)
def patterns(n: int) -> tuple[BasisPattern, ...]:
    """All patterns for degree n, parsed from the packaged table."""
    if not 3 <= n <= 9:
        raise FieldError(f"no table for n={n}")
    text = resources.files("purefields.data").joinpath(f"n{n}.txt").read_text()
    return parse_table(text, n)


def get_case(case_id: str) -> BasisPattern:
    n = int(case_id.split(".")[0])
    for p in patterns(n):
        if p.case_id == case_id:
            return p
    raise KeyError(f"unknown case {case_id}")


# ------------------------------------------------------------------ lookup

def omitted_residues(n: int) -> list[int]:
    """r in [1, n^2] with p^2 | r for some p | n: no square-free m lies there."""
    nn = n * n
    return [r for r in range(1, nn + 1) if any(r % (p * p) == 0 for p in prime_divisors(n))]


def pattern_for_residue(n: int, r: int) -> BasisPattern:
    nn = n * n
    r = r % nn or nn
    for p in patterns(n):
        if r in p.residues:
            return p
    raise ResidueError(f"inconsistent residue: r={r} (mod {nn}) shares a square factor with n={n}")


def lookup_pattern(n: int, m: int) -> BasisPattern:
    PureField(n, m)  # validates n and m
    return pattern_for_residue(n, m)


def instantiate(pattern: BasisPattern, m: int) -> IntegralBasis:
    """The pattern's basis for a concrete m, discriminant from the formula."""
    if not pattern.covers(m):
        raise ResidueError(f"m={m} is not in the classes of case {pattern.case_id}")
    field = PureField(pattern.n, m)
    d, H = pattern.lattice
    return IntegralBasis(field, pattern.rows, pattern.disc(m), H, d)


def validate_pattern(pattern: BasisPattern, m: int) -> PatternReport:
    field = PureField(pattern.n, m)
    if not pattern.covers(m):
        raise ResidueError(f"m={m} is not in the classes of case {pattern.case_id}")
    integral = tuple(is_algebraic_integer(field, e) for e in pattern.rows)
    computed = maximal_order(field)
    return PatternReport(
        case_id=pattern.case_id,
        n=pattern.n,
        m=m,
        integral=integral,
        disc_match=pattern.disc(m) == computed.disc,
        structure_match=pattern.lattice == computed.structure,
        disc=computed.disc,
    )


def same_structure(a: IntegralBasis, b: IntegralBasis) -> bool:
    """Equal denominators row by row and equal numerator residues mod q."""
    if a.structure == b.structure:
        return True
    if a.denominators != b.denominators:
        return False
    return all(
        all((x - y) % ea.q == 0 for x, y in zip(ea.numerators, eb.numerators))
        for ea, eb in zip(a.elements, b.elements)
    )


def disc_divides_power_disc(pattern: BasisPattern) -> bool:
    """n^n |m|^(n-1) / |disc| is a perfect square (the squared index of theta)."""
    n = pattern.n
    if pattern.disc.exponent != n - 1:
        return False
    q, r = divmod(n**n, pattern.disc.const)
    return r == 0 and isqrt(q) ** 2 == q

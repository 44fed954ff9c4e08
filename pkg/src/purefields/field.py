"""Pure fields Q(m^(1/n)) and elements written over the power basis."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Sequence

from .algebra import Poly, charpoly_int, is_squarefree, mult_matrix

MIN_DEGREE, MAX_DEGREE = 3, 9


class FieldError(ValueError):
    """Invalid (n, m): degree out of range, or m not square-free / a unit."""


@dataclass(frozen=True)
class PureField:
    """K = Q(theta) with theta^n = m, m square-free and m not in {0, 1, -1}."""

    n: int
    m: int

    def __post_init__(self) -> None:
        if not MIN_DEGREE <= self.n <= MAX_DEGREE:
            raise FieldError(f"degree n={self.n} outside [{MIN_DEGREE}, {MAX_DEGREE}]")
        if self.m in (0, 1, -1):
            raise FieldError(f"m={self.m} is excluded")
        if not is_squarefree(self.m):
            raise FieldError(f"m={self.m} is not square-free")

    @property
    def residue(self) -> int:
        """m mod n^2, normalised into [1, n^2]."""
        r = self.m % (self.n * self.n)
        return r or self.n * self.n

    def __str__(self) -> str:
        return f"Q({self.m}^(1/{self.n}))"


@dataclass(frozen=True)
class ElementRep:
    """(a_0 + a_1 theta + ... + a_{n-1} theta^{n-1}) / q."""

    numerators: tuple[int, ...]
    q: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "numerators", tuple(int(a) for a in self.numerators))
        if self.q < 1:
            raise ValueError("denominator must be positive")

    @property
    def degree(self) -> int:
        """Highest power of theta with non-zero coefficient (-1 for zero)."""
        for i in range(len(self.numerators) - 1, -1, -1):
            if self.numerators[i]:
                return i
        return -1

    def canonical(self) -> "ElementRep":
        g = reduce(gcd, self.numerators, self.q)
        if g == 1:
            return self
        return ElementRep(tuple(a // g for a in self.numerators), self.q // g)

    def coords(self) -> list[Fraction]:
        return [Fraction(a, self.q) for a in self.numerators]

    def __str__(self) -> str:
        terms = []
        for i, a in enumerate(self.numerators):
            if not a:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            coef = str(abs(a)) if (abs(a) != 1 or i == 0) else ""
            terms.append(("-" if a < 0 else "+", coef + mono))
        if not terms:
            return "0"
        text = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        text += "".join(f"{s}{t}" for s, t in terms[1:])
        if self.q == 1:
            return text
        if len(terms) > 1:
            text = f"({text})"
        return f"{text}/{self.q}"


def scaled_charpoly(n: int, m: int, numerators: Sequence[int]) -> list[int]:
    """Coefficients P_0..P_{n-1}, 1 of prod_j (X - a(theta_j)), a integral.

    With X = q x these are the integers in
    (q x)^n + P_{n-1} (q x)^{n-1} + ... + P_0.
    """
    return charpoly_int(mult_matrix(list(numerators), n, m))


def charpoly(field: PureField, elem: ElementRep) -> Poly:
    """Characteristic polynomial of elem over Q, exact rational coefficients."""
    n, q = field.n, elem.q
    if len(elem.numerators) != n:
        raise ValueError(f"element has {len(elem.numerators)} coordinates, field degree {n}")
    P = scaled_charpoly(n, field.m, elem.numerators)
    return Poly(Fraction(P[j], q ** (n - j)) for j in range(n + 1))

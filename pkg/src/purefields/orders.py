"""
Maximal orders, field discriminants and element indices of pure fields.

An order is stored as a lattice: the rows of a lower-triangular HNF matrix W
over the power basis, all divided by one common denominator d.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache, reduce
from math import gcd
from typing import Sequence

from .algebra import (
    NotSquareError,
    det_int,
    hnf,
    isqrt_exact,
    left_kernel_mod_p,
    mul_mod,
    poly_disc,
    prime_divisors,
    solve_lower_int,
)
from .field import ElementRep, PureField, charpoly, scaled_charpoly


def power_disc(n: int, m: int) -> int:
    """Discriminant of x^n - m: (-1)^(n(n-1)/2) n^n (-m)^(n-1)."""
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * n**n * (-m) ** (n - 1)


@dataclass(frozen=True)
class IntegralBasis:
    field: PureField
    elements: tuple[ElementRep, ...]
    disc: int
    lattice: tuple[tuple[int, ...], ...]  # HNF numerators
    denom: int

    @property
    def structure(self) -> tuple:
        """Canonical key: two bases span the same order iff keys agree."""
        return (self.denom, self.lattice)

    @property
    def index_of_theta(self) -> int:
        """[O : Z[theta]]."""
        diag = 1
        for i, row in enumerate(self.lattice):
            diag *= row[i]
        return self.denom**self.field.n // diag

    @property
    def denominators(self) -> tuple[int, ...]:
        return tuple(e.q for e in self.elements)


@dataclass(frozen=True)
class IndexReport:
    coords: tuple[int, ...]
    index: int
    disc_element: int
    primitive: bool = True


# ------------------------------------------------------------------ lattices

def _canonical_lattice(rows: Sequence[Sequence[int]], d: int) -> tuple[list[list[int]], int]:
    H = hnf(rows)
    g = reduce(gcd, (x for r in H for x in r), d)
    if g > 1:
        H = [[x // g for x in r] for r in H]
        d //= g
    return H, d


def _elements_from_lattice(H: Sequence[Sequence[int]], d: int) -> tuple[ElementRep, ...]:
    elems = [ElementRep(tuple(r), d).canonical() for r in H]
    # denominator first, then degree
    elems.sort(key=lambda e: (e.q, e.degree))
    return tuple(elems)


def trace_matrix(rows: Sequence[Sequence[int]], n: int, m: int) -> list[list[int]]:
    """Tr(u_i u_j) for integer numerator vectors (no denominator applied)."""
    T = [[0] * n for _ in range(n)]
    for i in range(n):
        u = rows[i]
        for j in range(i, n):
            v = rows[j]
            t = u[0] * v[0] + m * sum(u[k] * v[n - k] for k in range(1, n))
            T[i][j] = T[j][i] = n * t
    return T


def field_discriminant(basis: IntegralBasis) -> int:
    """D_K by two routes: the trace-form determinant and disc(theta)/index^2."""
    n, m = basis.field.n, basis.field.m
    rows = [
        [a * (basis.denom // e.q) for a in e.numerators] for e in basis.elements
    ]
    by_trace = Fraction(det_int(trace_matrix(rows, n, m)), basis.denom ** (2 * n))
    by_index = Fraction(power_disc(n, m), basis.index_of_theta**2)
    if by_trace != by_index:
        raise ArithmeticError(
            f"discriminant mismatch for {basis.field}: trace {by_trace}, index {by_index}"
        )
    if by_trace.denominator != 1:
        raise ArithmeticError(f"non-integral discriminant {by_trace}")
    return by_trace.numerator


def make_basis(
    field: PureField,
    rows: Sequence[Sequence[int]],
    denom: int,
    elements: Sequence[ElementRep] | None = None,
) -> IntegralBasis:
    """Build an IntegralBasis from lattice generators at a common denominator.

    If ``elements`` is given it fixes the element order (used for the
    printed bases, whose coordinates the witnesses refer to).
    """
    H, d = _canonical_lattice(rows, denom)
    elems = tuple(elements) if elements is not None else _elements_from_lattice(H, d)
    placeholder = IntegralBasis(field, elems, 0, tuple(map(tuple, H)), d)
    disc = field_discriminant(placeholder)
    return IntegralBasis(field, elems, disc, tuple(map(tuple, H)), d)


# ------------------------------------------------------------------ integrality

def is_algebraic_integer(field: PureField, elem: ElementRep) -> bool:
    return charpoly(field, elem).is_integral()


def _is_integral_numerators(n: int, m: int, a: Sequence[int], q: int) -> bool:
    P = scaled_charpoly(n, m, a)
    return all(P[j] % q ** (n - j) == 0 for j in range(n))


# ------------------------------------------------------------------ round 2

def _structure_constants(W, d, n, m):
    """T[i][j] = coordinates of w_i w_j in the order basis w = W / d."""
    dW = [[d * x for x in row] for row in W]
    T = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            T[i][j] = T[j][i] = solve_lower_int(dW, mul_mod(W[i], W[j], n, m))
    return T


def _mul(x, y, T, n, p=None):
    out = [0] * n
    for i, xi in enumerate(x):
        if not xi:
            continue
        Ti = T[i]
        for j, yj in enumerate(y):
            if not yj:
                continue
            c = xi * yj
            for k, t in enumerate(Ti[j]):
                if t:
                    out[k] += c * t
    if p is not None:
        out = [v % p for v in out]
    return out


def _pow_mod(x, e, T, n, p):
    result = None
    base = x
    while e:
        if e & 1:
            result = base if result is None else _mul(result, base, T, n, p)
        e >>= 1
        if e:
            base = _mul(base, base, T, n, p)
    return result


def _enlarge_round2(W, d, n, m, p):
    """One enlargement step at p; returns (W', d') or None if p-maximal."""
    T = _structure_constants(W, d, n, m)
    Tp = [[[t % p for t in T[i][j]] for j in range(n)] for i in range(n)]
    e = p
    while e < n:
        e *= p
    unit = [[int(i == k) for k in range(n)] for i in range(n)]
    frob = [_pow_mod(unit[i], e, Tp, n, p) for i in range(n)]
    radical = left_kernel_mod_p(frob, p)
    if not radical:
        return None
    V = hnf(radical + [[p * x for x in r] for r in unit])
    rows = []
    for i in range(n):
        row = []
        for v in V:
            z = [0] * n
            for k, vk in enumerate(v):
                if vk:
                    Tik = T[i][k]
                    for t in range(n):
                        z[t] += vk * Tik[t]
            row.extend(c % p for c in solve_lower_int(V, z))
        rows.append(row)
    mult = left_kernel_mod_p(rows, p)
    if not mult:
        return None
    H = hnf(mult + [[p * x for x in r] for r in unit])
    new_rows = [
        [sum(H[i][k] * W[k][j] for k in range(n)) for j in range(n)] for i in range(n)
    ]
    return _canonical_lattice(new_rows, d * p)


def _enlarge_enumerate(W, d, n, m, p):
    """Candidate enumeration: try (e_1 b_1 + ... + e_n b_n)/p, e_i in [0, p)."""
    for e in itertools.product(range(p), repeat=n):
        if not any(e):
            continue
        a = [sum(e[i] * W[i][j] for i in range(n)) for j in range(n)]
        if _is_integral_numerators(n, m, a, d * p):
            rows = [[p * x for x in r] for r in W] + [a]
            return _canonical_lattice(rows, d * p)
    return None


def _order_lattice(n, m, primes, method):
    W = [[int(i == j) for j in range(n)] for i in range(n)]
    d = 1
    step = _enlarge_round2 if method == "round2" else _enlarge_enumerate
    for p in primes:
        while True:
            nxt = step(W, d, n, m, p)
            if nxt is None:
                break
            W, d = nxt
    return W, d


def maximal_order(field: PureField, method: str = "round2", all_primes: bool = False) -> IntegralBasis:
    """Ring of integers of ``field`` as an IntegralBasis.

    Only primes dividing n can enlarge Z[theta] (x^n - m is Eisenstein at
    every p | m).  With ``all_primes`` the primes dividing m are processed
    too, which lets tests confirm that claim instead of assuming it.
    ``method`` is "round2" (radical / multiplier ring, fast) or "enumerate"
    (try every (e_1 b_1 + ... + e_n b_n)/p; p^n candidates per step).
    """
    if method not in ("round2", "enumerate"):
        raise ValueError(f"unknown method {method!r}")
    primes = set(prime_divisors(field.n))
    if all_primes:
        primes |= set(prime_divisors(field.m))
    W, d = _cached_lattice(field.n, field.m, tuple(sorted(primes)), method)
    return make_basis(field, W, d)


@lru_cache(maxsize=4096)
def _cached_lattice(n, m, primes, method):
    W, d = _order_lattice(n, m, primes, method)
    return tuple(map(tuple, W)), d


# ------------------------------------------------------------------ indices

def element_numerators(basis: IntegralBasis, coords: Sequence[int]) -> tuple[list[int], int]:
    """alpha = sum_j x_j b_j (j >= 2) as integer numerators over basis.denom."""
    n = basis.field.n
    if len(coords) != n - 1:
        raise ValueError(f"expected {n - 1} coordinates, got {len(coords)}")
    d = basis.denom
    a = [0] * n
    for x, e in zip(coords, basis.elements[1:]):
        if x:
            s = x * (d // e.q)
            for j, c in enumerate(e.numerators):
                a[j] += s * c
    return a, d


def element_index(basis: IntegralBasis, coords: Sequence[int]) -> IndexReport:
    """I(alpha) = sqrt(|D(alpha) / D_K|) for alpha = x_2 b_2 + ... + x_n b_n."""
    coords = tuple(int(x) for x in coords)
    if not any(coords):
        raise ValueError("coordinates must not all be zero")
    a, d = element_numerators(basis, coords)
    disc_alpha = poly_disc(charpoly(basis.field, ElementRep(tuple(a), d)))
    if disc_alpha == 0:
        # charpoly is a power of the minimal polynomial: alpha lies in a subfield
        return IndexReport(coords, 0, 0, primitive=False)
    if disc_alpha.denominator != 1:
        raise ArithmeticError(f"element {coords} is not integral")
    ratio = Fraction(disc_alpha) / basis.disc
    if ratio.denominator != 1:
        raise NotSquareError(f"D(alpha)/D_K = {ratio} is not an integer")
    index = isqrt_exact(abs(ratio.numerator))
    return IndexReport(coords, index, int(disc_alpha), primitive=True)


class IndexEvaluator:
    """Fast signed index form: det of (1, alpha, ..., alpha^(n-1)) in basis B.

    Works formally for any integer m (the basis numerators do not depend on
    m), which is what the residue sweeps need.  The value equals
    +-element_index whenever B is an integral basis of a genuine field.
    """

    def __init__(self, n: int, m: int, elements: Sequence[ElementRep]):
        self.n, self.m = n, m
        self.elements = tuple(elements)
        d = 1
        for e in elements:
            d = d * e.q // gcd(d, e.q)
        self.d = d
        self.rows = [[a * (d // e.q) for a in e.numerators] for e in elements]
        det_b = det_int(self.rows)
        if det_b == 0:
            raise ValueError("basis elements are linearly dependent")
        # I = det(alpha^i rows) * d^n / (det_b * d^(n(n-1)/2))
        self.scale = Fraction(d**n, det_b * d ** (n * (n - 1) // 2))

    def numerators(self, coords: Sequence[int]) -> list[int]:
        n = self.n
        a = [0] * n
        for x, row in zip(coords, self.rows[1:]):
            if x:
                for j, c in enumerate(row):
                    a[j] += x * c
        return a

    def value(self, coords: Sequence[int]) -> Fraction:
        n, m = self.n, self.m
        a = self.numerators(coords)
        mat = [[0] * n for _ in range(n)]
        mat[0][0] = 1
        cur = a
        for i in range(1, n):
            mat[i] = cur
            if i < n - 1:
                cur = mul_mod(cur, a, n, m)
        return det_int(mat) * self.scale


def index_evaluator(basis: IntegralBasis) -> IndexEvaluator:
    return IndexEvaluator(basis.field.n, basis.field.m, basis.elements)

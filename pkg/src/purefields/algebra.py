"""
Exact integer, rational and polynomial arithmetic used by every other module.

Everything here is a pure function on immutable values.  Matrices are plain
lists (or tuples) of rows of Python ints; no overflow is possible.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt
from typing import Iterable, Sequence

TRIAL_DIVISION_LIMIT = 10**6


class NotSquareError(ArithmeticError):
    """Raised by isqrt_exact when the argument is not a perfect square."""


class UncertifiedError(ValueError):
    """Square-freeness could not be decided without a factoring engine."""


class RankError(ValueError):
    """Matrix does not have the rank an operation requires."""


# ---------------------------------------------------------------- integers

_PRIMES: list[int] = []


def small_primes() -> list[int]:
    """Primes up to TRIAL_DIVISION_LIMIT, sieved on first use."""
    global _PRIMES
    if not _PRIMES:
        limit = TRIAL_DIVISION_LIMIT
        sieve = bytearray([1]) * (limit + 1)
        sieve[0:2] = b"\x00\x00"
        for i in range(2, isqrt(limit) + 1):
            if sieve[i]:
                sieve[i * i :: i] = bytearray(len(range(i * i, limit + 1, i)))
        _PRIMES = [i for i, flag in enumerate(sieve) if flag]
    return _PRIMES


def _trial_factor(a: int, limit: int) -> tuple[dict[int, int], int]:
    factors: dict[int, int] = {}
    for p in (2, 3, 5, 7):
        while a % p == 0:
            factors[p] = factors.get(p, 0) + 1
            a //= p
    if a == 1 or 121 > a:
        if a > 1:
            factors[a] = 1
        return factors, 1
    primes = small_primes() if a > 10**6 else None
    if primes is None:
        p = 11
        while p * p <= a:
            while a % p == 0:
                factors[p] = factors.get(p, 0) + 1
                a //= p
            p += 2
        if a > 1:
            factors[a] = factors.get(a, 0) + 1
        return factors, 1
    for p in primes:
        if p < 11:
            continue
        if p * p > a:
            break
        while a % p == 0:
            factors[p] = factors.get(p, 0) + 1
            a //= p
    if a > 1 and a < (limit + 1) ** 2:
        factors[a] = factors.get(a, 0) + 1
        a = 1
    return factors, a


def factorize(a: int) -> dict[int, int]:
    """Prime factorisation of |a| by trial division.

    Raises UncertifiedError if a cofactor larger than the square of the
    trial-division limit survives.
    """
    if a == 0:
        raise ValueError("cannot factor 0")
    factors, rest = _trial_factor(abs(a), TRIAL_DIVISION_LIMIT)
    if rest != 1:
        raise UncertifiedError(f"cannot fully factor {a}")
    return factors


def prime_divisors(a: int) -> list[int]:
    return sorted(factorize(a))


def is_squarefree(m: int) -> bool:
    """True iff no prime square divides m (the sign is ignored)."""
    if m == 0:
        raise ValueError("is_squarefree: m must be non-zero")
    factors, rest = _trial_factor(abs(m), TRIAL_DIVISION_LIMIT)
    if any(e > 1 for e in factors.values()):
        return False
    if rest == 1:
        return True
    # rest has no prime factor below the limit
    if isqrt(rest) ** 2 == rest:
        return False
    if rest < (TRIAL_DIVISION_LIMIT + 1) ** 3:
        # at most two prime factors, and they differ
        return True
    raise UncertifiedError(f"cannot certify square-freeness of {m}")


def isqrt_exact(a: int) -> int:
    if a < 0:
        raise NotSquareError(f"{a} is negative")
    s = isqrt(a)
    if s * s != a:
        raise NotSquareError(f"{a} is not a perfect square")
    return s


def frac_gcd(values: Iterable[Fraction]) -> Fraction:
    """gcd of rationals: gcd of numerators over lcm of denominators."""
    num, den = 0, 1
    for v in values:
        v = Fraction(v)
        num = gcd(num, v.numerator)
        den = den * v.denominator // gcd(den, v.denominator)
    return Fraction(num, den)


# ---------------------------------------------------------------- matrices

def det_int(mat: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix (fraction-free Bareiss)."""
    a = [list(r) for r in mat]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        rk = a[k]
        for i in range(k + 1, n):
            ri = a[i]
            aik = ri[k]
            for j in range(k + 1, n):
                ri[j] = (ri[j] * akk - aik * rk[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


def det_frac(mat: Sequence[Sequence[Fraction]]) -> Fraction:
    """Determinant of a square rational matrix by clearing denominators."""
    rows = []
    scale = Fraction(1)
    for r in mat:
        den = 1
        for v in r:
            d = Fraction(v).denominator
            den = den * d // gcd(den, d)
        rows.append([int(Fraction(v) * den) for v in r])
        scale /= den
    return det_int(rows) * scale


def hnf(mat: Sequence[Sequence[int]]) -> list[list[int]]:
    """Hermite normal form of the row lattice of ``mat``.

    The rows may be any generating set of a full-rank lattice in Z^c (at least
    c rows).  The result is the unique c x c basis that is lower triangular,
    has a positive diagonal, and whose below-diagonal entries in column j lie
    in [0, H[j][j]).
    """
    rows = [list(r) for r in mat if any(r)]
    if not mat:
        raise RankError("empty matrix")
    ncols = len(mat[0])
    result: list[list[int]] = [None] * ncols  # type: ignore[list-item]
    for j in range(ncols - 1, -1, -1):
        live = [r for r in rows if r[j]]
        rest = [r for r in rows if not r[j]]
        if not live:
            raise RankError("matrix is rank deficient")
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[j]))
            piv = live[0]
            pj = piv[j]
            nxt = [piv]
            for r in live[1:]:
                q = r[j] // pj
                if q:
                    r = [x - q * y for x, y in zip(r, piv)]
                if r[j]:
                    nxt.append(r)
                elif any(r):
                    rest.append(r)
            live = nxt
        piv = live[0]
        if piv[j] < 0:
            piv = [-x for x in piv]
        result[j] = piv
        rows = rest
    if any(any(r) for r in rows):
        raise RankError("leftover rows after elimination")  # cannot happen
    for i in range(ncols):
        ri = result[i]
        for j in range(i - 1, -1, -1):
            q = ri[j] // result[j][j]
            if q:
                rj = result[j]
                ri = [x - q * y for x, y in zip(ri, rj)]
        result[i] = ri
    return result


def solve_lower(tri: Sequence[Sequence[int]], v: Sequence[int]) -> list[Fraction]:
    """Row vector s with s . tri = v, for a lower-triangular ``tri``."""
    n = len(tri)
    s: list[Fraction] = [Fraction(0)] * n
    for j in range(n - 1, -1, -1):
        acc = Fraction(v[j])
        for k in range(j + 1, n):
            if tri[k][j]:
                acc -= s[k] * tri[k][j]
        s[j] = acc / tri[j][j]
    return s


def solve_lower_int(tri: Sequence[Sequence[int]], v: Sequence[int]) -> list[int]:
    """Integer solution of s . tri = v; raises ArithmeticError if none exists."""
    n = len(tri)
    s = [0] * n
    for j in range(n - 1, -1, -1):
        acc = v[j]
        for k in range(j + 1, n):
            t = tri[k][j]
            if t:
                acc -= s[k] * t
        q, r = divmod(acc, tri[j][j])
        if r:
            raise ArithmeticError("vector is not in the lattice")
        s[j] = q
    return s


def left_kernel_mod_p(mat: Sequence[Sequence[int]], p: int) -> list[list[int]]:
    """Basis of {u in F_p^r : u . mat = 0} for an r x c matrix."""
    r = len(mat)
    if r == 0:
        return []
    c = len(mat[0])
    # row-reduce [mat | I]; rows of I whose mat-part vanishes span the kernel
    aug = [[x % p for x in mat[i]] + [int(i == k) for k in range(r)] for i in range(r)]
    row = 0
    for col in range(c):
        piv = next((i for i in range(row, r) if aug[i][col]), None)
        if piv is None:
            continue
        aug[row], aug[piv] = aug[piv], aug[row]
        inv = pow(aug[row][col], -1, p)
        aug[row] = [(x * inv) % p for x in aug[row]]
        prow = aug[row]
        for i in range(r):
            if i != row and aug[i][col]:
                f = aug[i][col]
                aug[i] = [(x - f * y) % p for x, y in zip(aug[i], prow)]
        row += 1
        if row == r:
            break
    return [aug[i][c:] for i in range(row, r)]


# ---------------------------------------------------------------- polynomials

class Poly:
    """Univariate polynomial with reduced rational coefficients.

    ``coeffs[i]`` is the coefficient of x^i; trailing zeros are stripped, so
    the zero polynomial has an empty coefficient tuple.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable) -> None:
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def x_pow_minus(cls, n: int, m: int) -> "Poly":
        return cls([-m] + [0] * (n - 1) + [1])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1]

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def int_coeffs(self) -> list[int]:
        if not self.is_integral():
            raise ValueError("polynomial has non-integer coefficients")
        return [c.numerator for c in self.coeffs]

    def derivative(self) -> "Poly":
        return Poly(i * c for i, c in enumerate(self.coeffs) if i)

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other: "Poly") -> "Poly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return Poly([x + (b[i] if i < len(b) else 0) for i, x in enumerate(a)])

    def __neg__(self) -> "Poly":
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        if not self.coeffs or not other.coeffs:
            return Poly([])
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            for j, y in enumerate(other.coeffs):
                out[i + j] += x * y
        return Poly(out)

    def __pow__(self, e: int) -> "Poly":
        out = Poly([1])
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"Poly({[str(c) for c in self.coeffs]})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            body = str(a) if (a != 1 or i == 0) else ""
            if body and mono:
                body += "*"
            terms.append((sign, body + mono))
        head_sign, head = terms[0]
        out = ("-" if head_sign == "-" else "") + head
        for sign, t in terms[1:]:
            out += f" {sign} {t}"
        return out


def resultant(f: Poly, g: Poly) -> Fraction:
    """Resultant of f and g as the determinant of their Sylvester matrix."""
    m, n = f.degree, g.degree
    if m < 0 or n < 0:
        return Fraction(0)
    if m == 0:
        return f.lc**n
    if n == 0:
        return g.lc**m
    size = m + n
    fc = list(reversed(f.coeffs))
    gc = list(reversed(g.coeffs))
    rows = []
    for i in range(n):
        rows.append([Fraction(0)] * i + fc + [Fraction(0)] * (size - m - 1 - i))
    for i in range(m):
        rows.append([Fraction(0)] * i + gc + [Fraction(0)] * (size - n - 1 - i))
    return det_frac(rows)


def poly_disc(p: Poly) -> Fraction:
    """Discriminant (-1)^(d(d-1)/2) Res(p, p') / lc(p)."""
    d = p.degree
    if d < 2:
        raise ValueError("discriminant needs degree >= 2")
    sign = -1 if (d * (d - 1) // 2) % 2 else 1
    return sign * resultant(p, p.derivative()) / p.lc


# ------------------------------------------------- arithmetic in Q[x]/(x^n - m)

def mul_mod(a: Sequence[int], b: Sequence[int], n: int, m: int) -> list[int]:
    """Product of two coefficient vectors modulo x^n - m."""
    out = [0] * n
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            if not y:
                continue
            k = i + j
            if k >= n:
                out[k - n] += x * y * m
            else:
                out[k] += x * y
    return out


def mult_matrix(a: Sequence[int], n: int, m: int) -> list[list[int]]:
    """Rows are the coordinates of a * x^i, i = 0..n-1."""
    rows = []
    cur = list(a)
    for _ in range(n):
        rows.append(cur)
        # multiply by x: shift up, wrap the top coefficient times m
        cur = [cur[-1] * m] + cur[:-1]
    return rows


def charpoly_int(mat: Sequence[Sequence[int]]) -> list[int]:
    """Characteristic polynomial of an integer matrix (Faddeev-LeVerrier).

    Returns ascending coefficients c_0..c_n with c_n = 1.  All divisions are
    exact because the coefficients are integers.
    """
    n = len(mat)
    coeffs = [0] * (n + 1)
    coeffs[n] = 1
    M = [[0] * n for _ in range(n)]
    A = [list(r) for r in mat]
    c_prev = 1
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{n-k+1} I
        if k == 1:
            M = [[int(i == j) for j in range(n)] for i in range(n)]
        else:
            AM = [[sum(x * y for x, y in zip(row, col)) for col in zip(*M)] for row in A]
            for i in range(n):
                AM[i][i] += c_prev
            M = AM
        tr = sum(sum(A[i][j] * M[j][i] for j in range(n)) for i in range(n))
        c = -tr // k
        if c * k != -tr:
            raise ArithmeticError("Faddeev-LeVerrier division was not exact")
        coeffs[n - k] = c
        c_prev = c
    return coeffs

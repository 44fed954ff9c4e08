"""
Index forms: printed explicit polynomials, and numerical factor evaluation.

For n in {4, 6, 8} the index form splits into factors according to the
difference class d = (j - i) mod n of the conjugate pairs (i, j):

    d = n/2          -> f1
    d even, != n/2   -> f2
    d odd            -> f3   (for n = 4 the odd class is f2)

Each group product P_g(alpha) = prod (alpha^(i) - alpha^(j)) is a fixed
complex multiple of an integer form, so f_g(alpha) = f_g(theta) *
P_g(alpha) / P_g(theta), where f_g(theta) is a per-case integer constant
(frozen in FACTOR_AT_THETA; derive_theta_values recomputes it).
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import log10, prod
from typing import Sequence

import mpmath

from .algebra import frac_gcd
from .field import PureField
from .orders import IntegralBasis, element_numerators, index_evaluator
from .tables import get_case, instantiate, lookup_pattern


class NoExplicitForm(LookupError):
    """No explicit index form is printed for this case."""


class PrecisionError(ArithmeticError):
    """Numerical evaluation could not be certified."""


class NormalizationError(ArithmeticError):
    """|f1 f2 (f3)| disagrees with the exact index."""


# ------------------------------------------------------------------ polynomials

_TERM = re.compile(r"([+-]?)(\d*)((?:(?:m|k|x_\d)(?:\^\d+)?)*)")
_FACTOR = re.compile(r"(m|k|x_\d)(?:\^(\d+))?")


@dataclass(frozen=True)
class MultiPoly:
    """Integer polynomial in a parameter (m or k) and x_2..x_n.

    ``terms`` maps (parameter exponent, e_2, ..., e_n) to the coefficient.
    """

    n: int
    param: str
    terms: tuple[tuple[tuple[int, ...], int], ...]

    @classmethod
    def parse(cls, text: str, n: int, param: str) -> "MultiPoly":
        src = re.sub(r"\s+", "", text)
        acc: dict[tuple[int, ...], int] = {}
        pos = 0
        while pos < len(src):
            mt = _TERM.match(src, pos)
            if not mt or mt.end() == pos:
                raise ValueError(f"cannot parse polynomial at {src[pos:pos + 20]!r}")
            sign, digits, body = mt.groups()
            coef = int(digits) if digits else 1
            if sign == "-":
                coef = -coef
            exps = [0] * n
            for var, e in _FACTOR.findall(body):
                e = int(e) if e else 1
                if var in ("m", "k"):
                    if var != param:
                        raise ValueError(f"unexpected parameter {var} in {param}-form")
                    exps[0] += e
                else:
                    i = int(var[2:])
                    if not 2 <= i <= n:
                        raise ValueError(f"variable {var} out of range for n={n}")
                    exps[i - 1] += e
            key = tuple(exps)
            acc[key] = acc.get(key, 0) + coef
            pos = mt.end()
        return cls(n, param, tuple(sorted((k, c) for k, c in acc.items() if c)))

    def __call__(self, param_value: int, coords: Sequence[int]) -> int:
        total = 0
        for exps, c in self.terms:
            t = c * param_value ** exps[0]
            for x, e in zip(coords, exps[1:]):
                if e:
                    t *= x**e
            total += t
        return total

    @property
    def degree(self) -> int:
        """Total degree in the x variables."""
        degs = {sum(e[1:]) for e, _ in self.terms}
        if len(degs) != 1:
            raise ValueError("form is not homogeneous in x")
        return degs.pop()


@dataclass(frozen=True)
class ExplicitForm:
    case_id: str
    param: str  # "m", or "k" for m = r + M k
    factors: tuple[MultiPoly, ...]

    @property
    def n(self) -> int:
        return self.factors[0].n

    def parameter_value(self, m: int) -> int:
        return m if self.param == "m" else get_case(self.case_id).parameter(m)

    def factor_values(self, m: int, coords: Sequence[int]) -> tuple[int, ...]:
        t = self.parameter_value(m)
        return tuple(f(t, coords) for f in self.factors)

    def __call__(self, m: int, coords: Sequence[int]) -> int:
        return prod(self.factor_values(m, coords))


# transcribed factor by factor; k is the parameter of m = r + M k
_PRINTED: dict[str, tuple[str, list[str]]] = {
    "3.1": ("m", ["x_2^3-mx_3^3"]),
    "3.2": ("k", ["3x_2^3+3x_2^2x_3+x_2x_3^2-kx_3^3"]),
    "3.3": ("k", ["3x_2^3+6x_2^2x_3+4x_2x_3^2-kx_3^3"]),
    "4.1": ("m", [
        "x_2^2-mx_4^2",
        "x_2^4+2mx_2^2x_4^2+m^2x_4^4+4mx_3^4-8mx_2x_4x_3^2",
    ]),
    "4.2": ("k", [
        "-x_2x_4-2x_2^2+x_4^2k",
        "x_4^4k^2-2x_4^3x_2k-16x_4^2x_3x_2k+4x_4^2x_2^2k+8x_4^2x_3^2k-16x_4x_3^2x_2k"
        "+16x_4x_3^3k+8x_3^4k+2x_4^2x_2^2-2x_4^2x_3x_2+x_4^2x_3^2-2x_4x_3^2x_2"
        "+4x_2^3x_4+2x_4x_3^3+x_3^4+4x_2^4",
    ]),
    "4.3": ("k", [
        "-x_2x_4-x_2^2+2x_4^2k+x_4^2",
        "16x_4^4k^2+24x_4^4k+16x_4^3x_2k-16x_4^2x_3^2k+16x_4^2x_2^2k-32x_4x_3^2x_2k"
        "+8x_3^4k+9x_4^4+12x_4^3x_2-10x_4^2x_3^2+16x_4^2x_2^2+8x_2^3x_4"
        "-20x_4x_3^2x_2+4x_2^4+5x_3^4",
    ]),
    "5.1": ("m", [
        "-75m^4x_2x_3^2x_4^3x_5^4+45m^4x_2^2x_3x_4^2x_5^5+40m^4x_2x_3^3x_4x_5^5-40m^4x_2x_3x_4^5x_5^3"
        "-75m^2x_2^4x_3^3x_4^2x_5-40m^2x_2^3x_3^5x_4x_5+45m^2x_2^5x_3^2x_4x_5^2+40m^2x_2^5x_3x_4^3x_5"
        "+75m^3x_2^3x_3x_4^4x_5^2+75m^3x_2^2x_3^4x_4x_5^3+50m^3x_2^4x_3x_4x_5^4-200m^3x_2^3x_3^2x_4^2x_5^3"
        "+200m^3x_2^2x_3^3x_4^3x_5^2-45m^3x_2^2x_3^2x_4^5x_5-45m^3x_2x_3^5x_4^2x_5^2-50m^3x_2x_3^4x_4^4x_5"
        "-20m^5x_3^2x_4x_5^7+5m^5x_2x_3x_5^8+35m^5x_3x_4^3x_5^6-15m^5x_2x_4^2x_5^7-5m^4x_2^3x_4x_5^6"
        "+20m^4x_2x_4^7x_5^2+25m^4x_2^2x_4^4x_5^4-25m^4x_3^4x_4^2x_5^4+25m^4x_3^3x_4^4x_5^3"
        "-5m^4x_3x_4^8x_5-10m^4x_2^2x_3^2x_5^6+10m^4x_3^2x_4^6x_5^2-15mx_2^7x_3^2x_5-20mx_2^7x_3x_4^2"
        "+5mx_2^8x_4x_5+35mx_2^6x_3^3x_4+20m^2x_2^2x_3^7x_5-5m^2x_2^6x_3x_5^3+25m^2x_2^4x_3^4x_5^2"
        "-25m^2x_2^4x_3^2x_4^4+25m^2x_2^3x_3^4x_4^3-5m^2x_2x_3^8x_4-10m^2x_2^6x_4^2x_5^2"
        "+10m^2x_2^2x_3^6x_4^2-35m^3x_2^3x_4^6x_5+15m^3x_2^2x_3x_4^7-35m^3x_2x_3^6x_5^3"
        "+5m^3x_2x_3^3x_4^6+15m^3x_3^7x_4x_5^2+5m^3x_3^6x_4^3x_5-25m^3x_2^4x_4^3x_5^3"
        "-25m^3x_2^3x_3^3x_5^4+x_2^10-m^4x_4^10-m^2x_3^10+x_5^10m^6-11m^5x_4^5x_5^5"
        "+11m^4x_3^5x_5^5-11mx_2^5x_3^5+11m^2x_2^5x_4^5-2m^3x_2^5x_5^5+2m^3x_3^5x_4^5",
    ]),
    # printed under the heading I(x_2,...,x_5); the factors use x_6 as well
    "6.1": ("m", [
        "-3mx_2x_4x_6+x_2^3+mx_4^3+m^2x_6^3",
        "18m^2x_2^2x_3x_5x_6^2-18m^2x_2x_3^2x_5^2x_6-3m^3x_3^2x_6^4-2m^2x_2^3x_6^3+3m^2x_2^2x_5^4"
        "+3m^2x_3^4x_6^2+2m^2x_3^3x_5^3-3mx_2^4x_5^2-6m^3x_2x_5^2x_6^3+6m^3x_3x_5^3x_6^2"
        "-6mx_2^3x_3^2x_6+6mx_2^2x_3^3x_5+m^4x_6^6-m^3x_5^6-mx_3^6+x_2^6",
        "x_2^6+64m^2x_4^6+m^4x_6^6+27m^3x_5^6+27mx_3^6-216m^2x_3^3x_4x_5x_6-72mx_2^3x_3x_4x_5"
        "+12m^3x_2x_4x_6^4+108m^3x_4^2x_5^2x_6^2-108m^3x_4x_5^4x_6+36m^2x_2^2x_4^2x_6^2"
        "-96m^2x_2x_4^4x_6+144m^2x_2x_4^3x_5^2+144m^2x_3^2x_4^3x_6+324m^2x_3^2x_4^2x_5^2"
        "-288m^2x_3x_4^4x_5+12mx_2^4x_4x_6+108mx_2^2x_3^2x_4^2-108mx_2x_3^4x_4-18m^3x_2x_5^2x_6^3"
        "+54m^3x_3x_5^3x_6^2-18mx_2^3x_3^2x_6+54mx_2^2x_3^3x_5-72m^3x_3x_4x_5x_6^3"
        "-216m^2x_2x_3x_4x_5^3-54m^2x_2^2x_3x_5x_6^2+162m^2x_2x_3^2x_5^2x_6-16m^3x_4^3x_6^3"
        "-16mx_2^3x_4^3+9m^3x_3^2x_6^4+2m^2x_2^3x_6^3+27m^2x_2^2x_5^4+27m^2x_3^4x_6^2"
        "-54m^2x_3^3x_5^3+9mx_2^4x_5^2",
    ]),
}

EXPLICIT_CASES = tuple(_PRINTED)


@lru_cache(maxsize=None)
def _explicit(case_id: str) -> ExplicitForm:
    param, texts = _PRINTED[case_id]
    n = int(case_id.split(".")[0])
    return ExplicitForm(case_id, param, tuple(MultiPoly.parse(t, n, param) for t in texts))


def explicit_index_form(n: int, case_id: str) -> ExplicitForm:
    if not case_id.startswith(f"{n}."):
        raise ValueError(f"case {case_id} does not belong to n={n}")
    if case_id not in _PRINTED:
        raise NoExplicitForm(f"no explicit form printed for case {case_id}")
    return _explicit(case_id)


# ------------------------------------------------------------------ factors

FACTOR_DEGREES = {4: (2, 4), 6: (3, 6, 6), 8: (4, 8, 16)}

# f_g(theta) per case, signs chosen to agree with the printed factors
FACTOR_AT_THETA: dict[str, tuple[int, ...]] = {
    "4.1": (1, 1),
    "4.2": (-2, 4),
    "4.3": (-1, 4),
    "6.1": (1, 1, 1),
    "6.2": (8, 1, 1),
    "6.3": (1, 9, 1),
    "6.4": (1, 9, 1),
    "6.5": (8, 9, 1),
    "6.6": (8, 9, 1),
    "8.1": (1, 1, 1),
    "8.2": (2, 4, 16),
    "8.3": (1, 1, 16),
    "8.4": (1, 4, 16),
}


@dataclass(frozen=True)
class FactorSet:
    field: PureField
    coords: tuple[int, ...]
    values: tuple[int, ...]

    @property
    def product(self) -> int:
        return prod(self.values)


def difference_class(n: int, i: int, j: int) -> int:
    """0 -> f1, 1 -> f2, 2 -> f3 (n = 4 has no separate f3: odd maps to 1)."""
    d = (j - i) % n
    if 2 * d == n:
        return 0
    if d % 2 == 0:
        return 1
    return 2 if n != 4 else 1


def _group_products(n: int, m: int, a: Sequence[int], q: int, dps: int) -> list:
    with mpmath.workdps(dps):
        rho = mpmath.root(abs(m), n)
        if m < 0:
            rho *= mpmath.expjpi(mpmath.mpf(1) / n)
        zeta = mpmath.expjpi(mpmath.mpf(2) / n)
        conj = []
        for j in range(n):
            t = rho * zeta**j
            conj.append(mpmath.fsum(mpmath.mpf(c) * t**i for i, c in enumerate(a) if c) / q)
        k = 3 if n != 4 else 2
        out = [mpmath.mpc(1)] * k
        for i in range(n):
            for j in range(i + 1, n):
                g = difference_class(n, i, j)
                out[g] *= conj[i] - conj[j]
        return out


def _digits_bound(n: int, m: int, a: Sequence[int], q: int) -> int:
    r = abs(m) ** (1.0 / n)
    size = sum(abs(c) * r**i for i, c in enumerate(a)) / q
    return int(n * (n - 1) / 2 * log10(2 * size + 2)) + 1


def _ratios(field: PureField, a: Sequence[int], q: int) -> list[Fraction]:
    """P_g(alpha)/P_g(theta) as exact rationals, certified by precision doubling."""
    n, m = field.n, field.m
    theta = [0, 1] + [0] * (n - 2)
    dps = 2 * max(_digits_bound(n, m, a, q), 15) + 20
    for _ in range(6):
        lo = _group_products(n, m, a, q, dps)
        base = _group_products(n, m, theta, 1, dps)
        with mpmath.workdps(dps):
            vals = [x / y for x, y in zip(lo, base)]
            # denominators of the ratios divide f_g(theta) <= 16, scale by 720720
            scaled = [v * 720720 for v in vals]
            ok = all(
                abs(s.imag) < 0.25 and abs(s.real - mpmath.nint(s.real)) < 0.25 for s in scaled
            )
            if ok:
                hi = _group_products(n, m, a, q, 2 * dps)
                with mpmath.workdps(2 * dps):
                    hb = _group_products(n, m, theta, 1, 2 * dps)
                    again = [int(mpmath.nint((x / y).real * 720720)) for x, y in zip(hi, hb)]
                first = [int(mpmath.nint(s.real)) for s in scaled]
                if first == again:
                    return [Fraction(v, 720720) for v in first]
        dps *= 2
    raise PrecisionError(f"could not certify factor values for {field}")


def _case_of(field: PureField, basis: IntegralBasis | None) -> str:
    return lookup_pattern(field.n, field.m).case_id


def factor_values(field: PureField, basis: IntegralBasis, coords: Sequence[int]) -> FactorSet:
    """Values f1, f2 (, f3) of the index-form factors at alpha = sum x_j b_j."""
    n = field.n
    if n not in FACTOR_DEGREES:
        raise ValueError(f"factor structure only defined for n in (4, 6, 8), got {n}")
    coords = tuple(int(x) for x in coords)
    if not any(coords):
        raise ValueError("coordinates must not all be zero")
    case = _case_of(field, basis)
    at_theta = FACTOR_AT_THETA[case]
    a, d = element_numerators(basis, coords)
    exact = index_evaluator(basis).value(coords)
    if exact == 0:
        raise ValueError(f"alpha at {coords} is not primitive")
    ratios = _ratios(field, a, d)
    values = []
    for r, c in zip(ratios, at_theta):
        v = r * c
        if v.denominator != 1:
            raise NormalizationError(f"factor value {v} is not an integer at {coords}")
        values.append(v.numerator)
    if abs(prod(values)) != abs(exact):
        raise NormalizationError(
            f"|f1 f2 f3| = {abs(prod(values))} but index = {abs(exact)} at {coords} in {field}"
        )
    return FactorSet(field, coords, tuple(values))


def derive_theta_values(field: PureField, basis: IntegralBasis, samples: int = 40, seed: int = 0) -> tuple[int, ...]:
    """Recompute |f_g(theta)| from scratch: the smallest scaling that makes
    every sampled P_g(alpha)/P_g(theta) an integer."""
    rng = random.Random(seed)
    n = field.n
    ratios: list[list[Fraction]] = []
    points = [tuple(int(i == j) for i in range(n - 1)) for j in range(n - 1)]
    while len(points) < samples:
        x = tuple(rng.randint(-3, 3) for _ in range(n - 1))
        if any(x):
            points.append(x)
    for x in points:
        a, d = element_numerators(basis, x)
        if index_evaluator(basis).value(x) == 0:
            continue
        ratios.append(_ratios(field, a, d))
    groups = len(FACTOR_DEGREES[n])
    return tuple(
        (1 / frac_gcd([Fraction(1)] + [r[g] for r in ratios])).numerator for g in range(groups)
    )


# ------------------------------------------------------------------ identities

IDENTITIES = ("4.3-identity", "6.4-divisibility", "8.3-divisibility", "8.4-divisibility")


def check_identity(identity_id: str, m: int, coords: Sequence[int]) -> bool:
    """Evaluate one of the factor relations used in the non-monogenity proofs.

    4.3-identity      f2 - 4 f1^2 == (8k + 5)(2 x2 x4 - x3^2 + x4^2)^2
    6.4-divisibility  4m | f2 - 9 f3
    8.3-divisibility  m | f3 - 16 f2^2
    8.4-divisibility  m | f2 - 4 f1^2
    """
    case = identity_id.split("-")[0]
    pattern = get_case(case)
    if not pattern.covers(m):
        raise ValueError(f"m={m} is not in the classes of case {case}")
    coords = tuple(coords)
    if identity_id == "4.3-identity":
        form = _explicit("4.3")
        k = pattern.parameter(m)
        f1, f2 = form.factor_values(m, coords)
        x2, x3, x4 = coords
        return f2 - 4 * f1 * f1 == (8 * k + 5) * (2 * x2 * x4 - x3 * x3 + x4 * x4) ** 2
    basis = instantiate(pattern, m)
    fs = factor_values(basis.field, basis, coords).values
    if identity_id == "6.4-divisibility":
        return (fs[1] - 9 * fs[2]) % (4 * m) == 0
    if identity_id == "8.3-divisibility":
        return (fs[2] - 16 * fs[1] ** 2) % m == 0
    if identity_id == "8.4-divisibility":
        return (fs[1] - 4 * fs[0] ** 2) % m == 0
    raise KeyError(f"unknown identity {identity_id}")

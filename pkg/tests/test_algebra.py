from fractions import Fraction

import pytest
import sympy
from sympy.polys.domains import GF
from sympy.polys.matrices import DomainMatrix
from hypothesis import given, settings, strategies as st

from purefields.algebra import (
    NotSquareError,
    Poly,
    charpoly_int,
    det_int,
    factorize,
    hnf,
    is_squarefree,
    isqrt_exact,
    left_kernel_mod_p,
    mult_matrix,
    poly_disc,
    resultant,
)
from purefields.field import ElementRep, PureField, charpoly
from purefields.orders import power_disc

X, Y = sympy.symbols("x y")


# ---------------------------------------------------------------- integers

@pytest.mark.parametrize("m, expected", [(10, True), (12, False), (-3, True), (2, True), (-1, True)])
def test_is_squarefree_examples(m, expected):
    assert is_squarefree(m) is expected


def test_is_squarefree_rejects_zero():
    with pytest.raises(ValueError):
        is_squarefree(0)


def test_is_squarefree_matches_sympy():
    for m in range(1, 3000):
        expected = all(e == 1 for e in sympy.factorint(m).values())
        assert is_squarefree(m) == expected == is_squarefree(-m)


def test_is_squarefree_large_inputs():
    p, q = 1000003, 1000033
    assert is_squarefree(p * q)
    assert not is_squarefree(p * p * 7)
    assert not is_squarefree(2**3 * 3)


@given(st.integers(min_value=2, max_value=10**12))
@settings(max_examples=200, deadline=None)
def test_factorize_roundtrip(a):
    f = factorize(a)
    prod = 1
    for p, e in f.items():
        assert sympy.isprime(p)
        prod *= p**e
    assert prod == a


@pytest.mark.parametrize("a, s", [(0, 0), (144, 12), (1, 1)])
def test_isqrt_exact_examples(a, s):
    assert isqrt_exact(a) == s


def test_isqrt_exact_not_square():
    with pytest.raises(NotSquareError):
        isqrt_exact(2)


@given(st.integers(min_value=0, max_value=10**40))
def test_isqrt_exact_roundtrip(s):
    assert isqrt_exact(s * s) == s
    if s > 0:
        with pytest.raises(NotSquareError):
            isqrt_exact(s * s + 1)


# ---------------------------------------------------------------- matrices

@pytest.mark.parametrize(
    "mat, expected",
    [
        ([[1, 0, 0], [0, 1, 0], [0, 0, 1]], [[1, 0, 0], [0, 1, 0], [0, 0, 1]]),
        ([[0, 1], [1, 0]], [[1, 0], [0, 1]]),
        ([[2, 0], [3, 1]], [[2, 0], [1, 1]]),
    ],
)
def test_hnf_examples(mat, expected):
    assert hnf(mat) == expected


def test_hnf_rank_deficient():
    with pytest.raises(ValueError):
        hnf([[1, 2], [2, 4]])


square = st.integers(min_value=2, max_value=5).flatmap(
    lambda k: st.lists(st.lists(st.integers(-20, 20), min_size=k, max_size=k), min_size=k, max_size=k)
)


def _unimodular(k, rng_ops):
    U = [[int(i == j) for j in range(k)] for i in range(k)]
    for i, j, c in rng_ops:
        i, j = i % k, j % k
        if i != j:
            U[i] = [a + c * b for a, b in zip(U[i], U[j])]
        else:
            U[i] = [-a for a in U[i]]
    return U


@given(square, st.lists(st.tuples(st.integers(0, 9), st.integers(0, 9), st.integers(-3, 3)), max_size=12))
@settings(max_examples=150, deadline=None)
def test_hnf_idempotent_and_unimodular_invariant(mat, ops):
    if det_int(mat) == 0:
        return
    H = hnf(mat)
    k = len(mat)
    for i in range(k):
        assert H[i][i] > 0
        assert all(H[i][j] == 0 for j in range(i + 1, k))
        assert all(0 <= H[i][j] < H[j][j] for j in range(i))
    assert hnf(H) == H
    U = _unimodular(k, ops)
    UM = [[sum(U[i][t] * mat[t][j] for t in range(k)) for j in range(k)] for i in range(k)]
    assert hnf(UM) == H


@given(square)
@settings(max_examples=100, deadline=None)
def test_det_matches_sympy(mat):
    assert det_int(mat) == sympy.Matrix(mat).det()


@given(square, st.sampled_from([2, 3, 5, 7]))
@settings(max_examples=100, deadline=None)
def test_left_kernel_mod_p(mat, p):
    for v in left_kernel_mod_p(mat, p):
        assert any(x % p for x in v)
        for j in range(len(mat[0])):
            assert sum(v[i] * mat[i][j] for i in range(len(mat))) % p == 0
    F = GF(p)
    rank = DomainMatrix([[F(x) for x in row] for row in mat], (len(mat), len(mat[0])), F).rank()
    assert len(left_kernel_mod_p(mat, p)) == len(mat) - rank


# ---------------------------------------------------------------- polynomials

def test_poly_str():
    assert str(Poly([-3, -3, -1, 1])) == "x^3 - x^2 - 3*x - 3"
    assert str(Poly([Fraction(1, 2), 0, 1])) == "x^2 + 1/2"


@pytest.mark.parametrize("p, d", [(Poly([-2, 0, 0, 1]), -108), (Poly([-1, 0, 1]), 4), (Poly([-3, -3, -1, 1]), -300)])
def test_poly_disc_examples(p, d):
    assert poly_disc(p) == d


@pytest.mark.parametrize("n", range(3, 10))
def test_power_disc_against_resultant(n):
    for m in range(-50, 51):
        if m == 0:
            continue
        direct = sympy.discriminant(X**n - m, X)
        assert poly_disc(Poly.x_pow_minus(n, m)) == direct == power_disc(n, m)
        assert abs(direct) == n**n * abs(m) ** (n - 1)


def test_resultant_against_sympy():
    f, g = Poly([1, 2, 0, 3]), Poly([-1, 0, 5])
    assert resultant(f, g) == sympy.resultant(3 * X**3 + 2 * X + 1, 5 * X**2 - 1, X)


# ---------------------------------------------------------------- charpoly

@pytest.mark.parametrize(
    "n, m, nums, q, text",
    [
        (3, 2, (0, 1, 0), 1, "x^3 - 2"),
        (3, 10, (1, 1, 1), 3, "x^3 - x^2 - 3*x - 3"),
        (4, 5, (1, 0, 1, 0), 2, "x^4 - 2*x^3 - x^2 + 2*x + 1"),
    ],
)
def test_charpoly_examples(n, m, nums, q, text):
    assert str(charpoly(PureField(n, m), ElementRep(nums, q))) == text


def _resultant_oracle(n, m, nums, q):
    a = sum(c * Y**i for i, c in enumerate(nums))
    return sympy.Poly(sympy.resultant(Y**n - m, q * X - a, Y), X)


@given(
    st.integers(3, 6),
    st.sampled_from([2, 3, -3, 5, 6, 7, -10, 17]),
    st.lists(st.integers(-4, 4), min_size=9, max_size=9),
    st.integers(1, 4),
)
@settings(max_examples=40, deadline=None)
def test_charpoly_matches_resultant(n, m, nums, q):
    nums = tuple(nums[:n])
    cp = charpoly(PureField(n, m), ElementRep(nums, q))
    oracle = _resultant_oracle(n, m, nums, q)
    lc = oracle.LC()
    expected = [sympy.Rational(c) / lc for c in reversed(oracle.all_coeffs())]
    assert [sympy.Rational(c.numerator, c.denominator) for c in cp.coeffs] == expected


@pytest.mark.parametrize("n", range(3, 10))
def test_charpoly_of_theta(n):
    for m in (2, -3, 6, 10):
        if not is_squarefree(m):
            continue
        theta = ElementRep((0, 1) + (0,) * (n - 2))
        assert charpoly(PureField(n, m), theta) == Poly.x_pow_minus(n, m)


def test_integer_charpoly_is_monic_integral():
    for nums in [(1, 2, 3), (-4, 0, 7), (5, 5, 5)]:
        P = charpoly_int(mult_matrix(list(nums), 3, 7))
        assert P[-1] == 1 and all(isinstance(c, int) for c in P)

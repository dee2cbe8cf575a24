import math

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from semifields import fields as fd
from semifields.errors import (
    DivisionByZero,
    NotADivisor,
    NotPrime,
    ReducibleModulus,
)

idx9 = st.integers(min_value=0, max_value=8)
idx27 = st.integers(min_value=0, max_value=26)


def test_lex_smallest_moduli():
    # frozen: first irreducible monic polynomial in the coefficient scan order
    assert fd.build_field(2, 4).spec.modulus == (1, 0, 0, 1, 1)
    assert fd.build_field(3, 2).spec.modulus == (1, 0, 1)
    assert fd.build_field(3, 3).spec.modulus == (1, 0, 2, 1)
    assert fd.build_field(3, 4).spec.modulus == (1, 0, 1, 1, 1)


@pytest.mark.parametrize("p,m", [(2, 4), (3, 2), (3, 3), (5, 2)])
def test_modulus_irreducible_sympy(p, m):
    ctx = fd.build_field(p, m)
    x = sympy.symbols("x")
    poly = sympy.Poly(list(ctx.spec.modulus), x, modulus=p)
    assert sympy.factor_list(poly)[1] == [(poly, 1)]


def test_build_field_rejects_bad_input():
    with pytest.raises(NotPrime):
        fd.build_field(6, 2)
    with pytest.raises(ReducibleModulus):
        fd.build_field(3, 2, modulus=(2, 0, 1))  # t^2 - 1 = (t+1)(t-1)


def test_index_round_trip(gf27):
    for i in range(gf27.order):
        assert gf27.idx(gf27.coeffs(i)) == i
        assert fd.element_index(gf27, fd.element_from_index(gf27, i)) == i


def test_index_convention(gf27):
    # coefficient 0 is the most significant digit of the index
    assert gf27.idx((1, 0, 0)) == 9
    assert gf27.idx((0, 0, 1)) == 1
    assert fd.one(gf27) == (1, 0, 0)
    assert fd.zero(gf27) == (0, 0, 0)
    assert fd.from_int(gf27, 5) == (2, 0, 0)


@given(i=idx27, j=idx27, k=idx27)
def test_ring_axioms_gf27(gf27, i, j, k):
    x, y, z = gf27.coeffs(i), gf27.coeffs(j), gf27.coeffs(k)
    assert fd.add(gf27, x, y) == fd.add(gf27, y, x)
    assert fd.mul(gf27, x, y) == fd.mul(gf27, y, x)
    assert fd.add(gf27, fd.add(gf27, x, y), z) == fd.add(gf27, x, fd.add(gf27, y, z))
    assert fd.mul(gf27, fd.mul(gf27, x, y), z) == fd.mul(gf27, x, fd.mul(gf27, y, z))
    assert fd.mul(gf27, x, fd.add(gf27, y, z)) == fd.add(
        gf27, fd.mul(gf27, x, y), fd.mul(gf27, x, z)
    )


@given(i=st.integers(min_value=1, max_value=26))
def test_inverse_gf27(gf27, i):
    x = gf27.coeffs(i)
    assert fd.mul(gf27, x, fd.inv(gf27, x)) == fd.one(gf27)


def test_inverse_of_zero_raises(gf27):
    with pytest.raises(DivisionByZero):
        fd.inv(gf27, fd.zero(gf27))


@given(i=idx9, j=idx9)
def test_frobenius_is_additive_and_multiplicative(gf9, i, j):
    x, y = gf9.coeffs(i), gf9.coeffs(j)
    fx, fy = fd.frobenius(gf9, x, 1), fd.frobenius(gf9, y, 1)
    assert fd.frobenius(gf9, fd.add(gf9, x, y), 1) == fd.add(gf9, fx, fy)
    assert fd.frobenius(gf9, fd.mul(gf9, x, y), 1) == fd.mul(gf9, fx, fy)
    # p-th power, literally
    assert fd.frobenius(gf9, x, 1) == fd.pow_element(gf9, x, 3)


def test_generator_order(gf27, gf16):
    assert fd.multiplicative_order(gf27, gf27.generator) == 26
    assert fd.multiplicative_order(gf16, gf16.generator) == 15


def test_multiplicative_order_divides_group_order(gf27):
    for i in range(1, 27):
        assert 26 % fd.multiplicative_order(gf27, gf27.coeffs(i)) == 0


def test_trace_and_norm(gf81):
    # trace/norm down to GF(3) land in the prime field and have the right shape
    for i in range(0, 81, 7):
        x = gf81.coeffs(i)
        tr = fd.trace_to(gf81, x, 1)
        acc = fd.zero(gf81)
        for e in range(4):
            acc = fd.add(gf81, acc, fd.frobenius(gf81, x, e))
        assert tr == acc
        assert fd.frobenius(gf81, tr, 1) == tr
        nm = fd.norm_to(gf81, x, 1)
        assert fd.frobenius(gf81, nm, 1) == nm
    a, b = gf81.coeffs(17), gf81.coeffs(53)
    assert fd.norm_to(gf81, fd.mul(gf81, a, b), 1) == fd.mul(
        gf81, fd.norm_to(gf81, a, 1), fd.norm_to(gf81, b, 1)
    )


def test_trace_rejects_non_divisor(gf81):
    with pytest.raises(NotADivisor):
        fd.trace_to(gf81, fd.one(gf81), 3)


def test_square_subgroup_count(gf27):
    # dual route: explicit squaring set vs the power-subgroup membership test
    squares = {int(np.asarray(gf27.mul_vec(np.array([i]), np.array([i])))[0]) for i in range(1, 27)}
    assert len(squares) == 13
    via_test = {i for i in range(1, 27) if fd.in_power_subgroup(gf27, gf27.coeffs(i), 2)}
    assert via_test == squares


def test_product_subgroup_membership(gf27):
    # subgroup generated by orders [2, 13] is everything; [1, 13] is the squares
    assert all(
        fd.in_product_subgroup(gf27, gf27.coeffs(i), [2, 13]) for i in range(1, 27)
    )
    sub = {i for i in range(1, 27) if fd.in_product_subgroup(gf27, gf27.coeffs(i), [1, 13])}
    assert len(sub) == 13
    assert all(fd.in_power_subgroup(gf27, gf27.coeffs(i), 2) for i in sub)


def test_in_power_subgroup_gcd_reduction(gf16):
    # k-th powers depend on k only through gcd(k, q-1)
    for i in range(1, 16):
        x = gf16.coeffs(i)
        assert fd.in_power_subgroup(gf16, x, 6) == fd.in_power_subgroup(gf16, x, 3)


def test_eval_poly_vec(gf9):
    # t^2 + 2t + 1 evaluated two ways
    coeffs = [gf9.idx(fd.one(gf9)), gf9.idx(fd.from_int(gf9, 2)), gf9.idx(fd.one(gf9))]
    xs = np.arange(9, dtype=np.int64)
    got = np.asarray(fd.eval_poly_vec(gf9, coeffs, xs))
    for i in range(9):
        x = gf9.coeffs(i)
        want = fd.add(
            gf9,
            fd.add(gf9, fd.mul(gf9, x, x), fd.mul(gf9, fd.from_int(gf9, 2), x)),
            fd.one(gf9),
        )
        assert got[i] == gf9.idx(want)


@given(i=idx9, e=st.integers(min_value=0, max_value=20))
@settings(max_examples=60)
def test_pow_vec_matches_scalar(gf9, i, e):
    got = int(np.asarray(gf9.pow_vec(np.array([i]), e))[0])
    assert got == gf9.idx(fd.pow_element(gf9, gf9.coeffs(i), e))


def test_vectorized_ops_match_scalar(gf27):
    xs = np.arange(27, dtype=np.int64)
    ys = np.roll(xs, 5)
    add = np.asarray(gf27.add_vec(xs, ys))
    mul = np.asarray(gf27.mul_vec(xs, ys))
    for i in range(27):
        assert add[i] == gf27.idx(fd.add(gf27, gf27.coeffs(i), gf27.coeffs(int(ys[i]))))
        assert mul[i] == gf27.idx(fd.mul(gf27, gf27.coeffs(i), gf27.coeffs(int(ys[i]))))


def test_custom_modulus_accepted():
    ctx = fd.build_field(3, 2, modulus=(2, 1, 1))  # t^2 + t + 2, irreducible
    assert ctx.spec.modulus == (2, 1, 1)
    assert fd.multiplicative_order(ctx, ctx.generator) == 8

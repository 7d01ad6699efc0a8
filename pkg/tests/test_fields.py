import math

import mpmath
import pytest
import sympy
from hypothesis import assume, given, settings, strategies as st
from sympy.solvers.diophantine.diophantine import diop_DN

from rayclass.fields import (
    FieldTower, HypothesisError, OkElement, QuadraticField, class_number_imaginary, conjugate_int,
    fundamental_unit, half_unit, is_prime, is_squarefree, k3_pow, legendre, make_tower, mul_int,
    norm_to_q, norm_to_subfield, prime_factors, primitive_root, reduced_forms, sqrt_mod, unit_exponents,
    unit_norm,
)

squarefree_pos = st.integers(2, 400).filter(is_squarefree)


def test_mul_int_matches_symbolic_product():
    d1, d2 = sympy.symbols("d1 d2", positive=True)
    s1, s2 = sympy.sqrt(-d1), sympy.sqrt(-d2)
    basis = [1, s1, s2, sympy.sqrt(d1 * d2)]
    a = sympy.symbols("a0:4")
    b = sympy.symbols("b0:4")
    lhs = sum(x * e for x, e in zip(a, basis)) * sum(x * e for x, e in zip(b, basis))
    prod = mul_int(a, b, d1, d2)
    rhs = sum(x * e for x, e in zip(prod, basis))
    assert sympy.simplify(sympy.expand(lhs - rhs)) == 0


@given(st.tuples(*[st.integers(-20, 20)] * 4), st.tuples(*[st.integers(-20, 20)] * 4),
       st.sampled_from([(15, 26), (7, 2), (31, 2), (23, 6)]))
def test_mul_int_matches_complex_product(u, v, ds):
    d1, d2 = ds
    with mpmath.workprec(100):
        x = OkElement.from_int(u, d1, d2).complex_value(100)
        y = OkElement.from_int(v, d1, d2).complex_value(100)
        w = OkElement.from_int(mul_int(u, v, d1, d2), d1, d2).complex_value(100)
        assert abs(x * y - w) <= 1e-20 * (1 + abs(w))


@given(squarefree_pos)
def test_fundamental_unit_against_sympy(delta):
    x, y = fundamental_unit(delta)
    n = unit_norm(delta, (x, y))
    assert n in (1, -1)
    ref = diop_DN(delta, 1)[0]
    if n == 1:
        assert (x, y) == tuple(ref)
    else:
        assert (x * x + delta * y * y, 2 * x * y) == tuple(ref)


def test_fundamental_units_of_examples():
    assert fundamental_unit(390) == (79, 4)
    assert fundamental_unit(14) == (15, 4)
    assert fundamental_unit(62) == (63, 8)


@pytest.mark.parametrize("d,h", [(2, 1), (7, 1), (15, 2), (26, 6), (31, 3), (23, 3), (47, 5), (71, 7),
                                 (5, 2), (14, 4), (17, 4), (21, 4), (30, 4), (163, 1), (10, 2)])
def test_class_numbers(d, h):
    assert class_number_imaginary(d) == h


def test_reduced_forms_have_the_right_discriminant():
    for a, b, c in reduced_forms(-4 * 26):
        assert b * b - 4 * a * c == -104
        assert abs(b) <= a <= c


@given(st.integers(3, 600))
def test_prime_helpers_against_sympy(n):
    assert is_prime(n) == sympy.isprime(n)
    assert prime_factors(n) == sorted(sympy.factorint(n))


@given(st.sampled_from(list(sympy.primerange(3, 400))), st.integers(-1000, 1000))
def test_legendre_against_sympy(p, a):
    expect = 0 if a % p == 0 else sympy.legendre_symbol(a % p, p)
    assert legendre(a, p) == expect


@given(st.sampled_from(list(sympy.primerange(3, 400))))
def test_primitive_root_is_smallest_generator(p):
    assert primitive_root(p) == sympy.primitive_root(p)


def test_small_modular_constants():
    assert sqrt_mod(-1, 37) == 6
    assert primitive_root(5) == 2
    assert primitive_root(37) == 2
    with pytest.raises(HypothesisError):
        sqrt_mod(2, 5)


def test_quadratic_field_theta_is_a_root():
    for d in (-15, -26, -31, -2, -7):
        F = QuadraticField(d)
        with mpmath.workprec(200):
            t = F.theta(200)
            assert abs(t * t + F.B * t + F.C) < mpmath.ldexp(1, -190)
            assert t.imag > 0


@given(st.tuples(st.integers(-50, 50), st.integers(-50, 50)),
       st.tuples(st.integers(-50, 50), st.integers(-50, 50)),
       st.sampled_from([-15, -26, -31, -2, -7, 62]))
def test_quadratic_norm_is_multiplicative(x, y, d):
    F = QuadraticField(d)
    assert F.norm(*F.mul(x, y)) == F.norm(*x) * F.norm(*y)


def test_quadratic_field_rejects_bad_d():
    for d in (0, 1, 12, -4):
        with pytest.raises(HypothesisError):
            QuadraticField(d)


@given(st.tuples(*[st.integers(-9, 9)] * 4), st.sampled_from([(15, 26), (7, 2), (31, 2)]),
       st.sampled_from([1, 2, 3]))
def test_relative_norm_matches_numeric_product(u, ds, i):
    d1, d2 = ds
    w = OkElement.from_int(u, d1, d2)
    x, y = norm_to_subfield(w, i)
    with mpmath.workprec(80):
        num = w.complex_value(80) * w.conjugate(i).complex_value(80)
        if i == 3:
            val = x + y * mpmath.sqrt(d1 * d2)
        else:
            F = QuadraticField(-(d1 if i == 1 else d2))
            val = x * F.theta(80) + y
        assert abs(num - val) <= 1e-18 * (1 + abs(val))


@given(st.tuples(*[st.integers(-9, 9)] * 4), st.tuples(*[st.integers(-9, 9)] * 4))
def test_absolute_norm_is_multiplicative(u, v):
    a = OkElement.from_int(u, 15, 26)
    b = OkElement.from_int(v, 15, 26)
    assert norm_to_q(a * b) == norm_to_q(a) * norm_to_q(b)


def test_conjugations_are_involutions():
    u = (1, 2, 3, 4)
    for i in (1, 2, 3):
        assert conjugate_int(conjugate_int(u, i), i) == u
    with pytest.raises(ValueError):
        conjugate_int(u, 4)


def test_ok_element_integrality():
    with pytest.raises(HypothesisError):
        OkElement(1, 0, 0, 0, 15, 26)
    w = OkElement(1, 1, 0, 0, 15, 26)       # (1 + sqrt(-15)) / 2
    assert norm_to_q(w) == 16


def test_unit_index_of_the_examples():
    assert make_tower(7, 2).Q == 2
    assert make_tower(31, 2).Q == 2
    assert make_tower(15, 26).Q == 1
    eta = half_unit(7, 2, (15, 4))
    assert eta is not None
    assert (eta * eta).doubled == (-30, 0, 0, -8)


def test_tower_data_of_the_examples():
    t = make_tower(15, 26, h3=2)
    assert isinstance(t, FieldTower)
    assert (t.h1, t.h2, t.h3, t.eps0) == (2, 6, 2, (79, 4))
    assert t.class_number == 12
    assert make_tower(7, 2).class_number == 1
    assert make_tower(31, 2).class_number == 3
    assert t.split_indices(37) == (2, 1)
    assert make_tower(31, 2).split_indices(5) == (1, 2)


@pytest.mark.parametrize("d1,d2,Q", [(5, 2, None), (15, 6, None), (3, 2, None), (15, 26, 2), (4, 2, None),
                                     (15, 5, None)])
def test_make_tower_rejects(d1, d2, Q):
    with pytest.raises(HypothesisError):
        make_tower(d1, d2, Q=Q)


def _least(e, delta, m, ok):
    x, y = 1, 0
    for k in range(1, 10**5):
        x, y = (x * e[0] + delta * y * e[1]) % m, (x * e[1] + y * e[0]) % m
        if ok(x, y):
            return k
    raise AssertionError


def test_unit_exponents_of_the_examples():
    ue = unit_exponents(make_tower(15, 26), 5, 37)
    assert (ue.m0, ue.sign, ue.n0, ue.l0, ue.mu0) == (5, -1, 38, 190, 1)
    assert unit_exponents(make_tower(7, 2), 1, 37).n0 == 38
    assert unit_exponents(make_tower(31, 2), 1, 5).n0 == 6


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([(15, 26), (7, 2), (31, 2), (23, 6), (11, 2)]),
       st.sampled_from([1, 3, 5, 7, 9]), st.sampled_from([3, 5, 7, 11, 13, 17]))
def test_unit_exponents_by_brute_force(ds, N, p):
    assume(N % p)
    t = make_tower(*ds)
    ue = unit_exponents(t, N, p)
    e, delta, Np = t.eps0, t.delta, N * p
    assert ue.l0 == _least(e, delta, Np, lambda x, y: x == 1 % Np and y == 0)
    if N > 1:
        assert ue.m0 == _least(e, delta, N, lambda x, y: y == 0 and x in (1, N - 1))
    x, y = k3_pow(e, ue.l0, delta)
    scale = N * p ** ue.mu0
    assert (x - 1) % scale == 0 and y % scale == 0
    assert not ((x - 1) % (scale * p) == 0 and y % (scale * p) == 0)
    assert (ue.alpha0, ue.beta0) == ((x - 1) // scale, y // scale)


def test_check_level():
    t = make_tower(7, 2)
    for N, p in ((2, 5), (5, 5), (1, 9), (0, 5)):
        with pytest.raises(HypothesisError):
            unit_exponents(t, N, p)


def test_is_squarefree():
    assert [n for n in range(1, 20) if is_squarefree(n)] == [1, 2, 3, 5, 6, 7, 10, 11, 13, 14, 15, 17, 19]
    assert not is_squarefree(0)
    assert math.prod(prime_factors(390)) == 390

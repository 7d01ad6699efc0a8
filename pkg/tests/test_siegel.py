import cmath
import math
import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from orbit_data import LEVEL_185, LEVEL_37, parse
from rayclass.fields import HypothesisError, QuadraticField
from rayclass.siegel import (
    G12_SLACK, CmPoint, SiegelIndex, act_artin, act_matrix, artin_matrix, conjugate_index, eval_g12,
    evaluate_many, normalize, orbit, orbit_product, truncation_length,
)


def g_float(r1, r2, tau, terms=100):
    """g_r(tau) straight from the product definition in double precision."""
    q = cmath.exp(2j * math.pi * tau)
    qz = cmath.exp(2j * math.pi * (r1 * tau + r2))
    b2 = r1 * r1 - r1 + 1 / 6
    out = -cmath.exp(1j * math.pi * tau * b2) * cmath.exp(1j * math.pi * r2 * (r1 - 1)) * (1 - qz)
    qm = 1
    for _ in range(terms):
        qm *= q
        out *= (1 - qm * qz) * (1 - qm / qz)
    return out


def theta_float(d):
    F = QuadraticField(-d)
    return complex(F.theta(64))


def rel(a, b):
    return abs(a - b) / abs(b)


def test_double_precision_oracle_for_level_five():
    tau = 1j * math.sqrt(2)
    ref = g_float(0, 1 / 5, tau) ** 60
    val = complex(eval_g12(SiegelIndex(0, 1, 5), CmPoint.of(2), 1, 128))
    assert rel(val, ref) < 1e-12


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([2, 7, 15, 26, 31]), st.integers(2, 12), st.data())
def test_matches_double_precision_oracle(d, M, data):
    a1 = data.draw(st.integers(0, M - 1))
    a2 = data.draw(st.integers(0, M - 1))
    if a1 == 0 and a2 == 0:
        a2 = 1
    tau = theta_float(d)
    ref = g_float(a1 / M, a2 / M, tau) ** (12 * M)
    val = complex(eval_g12(SiegelIndex(a1, a2, M), CmPoint.of(d), 1, 128))
    assert rel(val, ref) < 1e-9


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([2, 15]), st.integers(2, 9), st.integers(-3, 3), st.integers(-3, 3), st.data())
def test_translation_and_sign_invariance_of_the_12M_power(d, M, k1, k2, data):
    a1 = data.draw(st.integers(1, M - 1))
    a2 = data.draw(st.integers(0, M - 1))
    tau = theta_float(d)
    base = g_float(a1 / M, a2 / M, tau) ** (12 * M)
    shifted = g_float(a1 / M + k1, a2 / M + k2, tau) ** (12 * M)
    negated = g_float(-a1 / M, -a2 / M, tau) ** (12 * M)
    assert rel(shifted, base) < 1e-8
    assert rel(negated, base) < 1e-8


@given(st.integers(2, 500), st.integers(-10**6, 10**6), st.integers(-10**6, 10**6), st.integers(-5, 5),
       st.integers(-5, 5))
def test_normalize_is_periodic_sign_blind_and_idempotent(M, a1, a2, k1, k2):
    if a1 % M == 0 and a2 % M == 0:
        a2 += 1
    v = SiegelIndex(a1, a2, M)
    n = normalize(v)
    assert normalize(n) == n
    assert normalize(SiegelIndex(a1 + k1 * M, a2 + k2 * M, M)) == n
    assert normalize(SiegelIndex(-a1, -a2, M)) == n
    assert 0 <= n.a1 < M and 0 <= n.a2 < M


def test_integral_index_is_rejected():
    with pytest.raises(HypothesisError):
        SiegelIndex(5, 10, 5)
    with pytest.raises(HypothesisError):
        SiegelIndex(0, 1, 1)


def test_from_fractions():
    v = SiegelIndex.from_fractions(Fraction(31, 37), Fraction(76, 185))
    assert (v.a1, v.a2, v.M) == (155, 76, 185)
    assert str(v) == "(31/37, 76/185)"
    with pytest.raises(ValueError):
        SiegelIndex.from_fractions(Fraction(1, 3), 0, 5)


mat = st.tuples(st.tuples(st.integers(-50, 50), st.integers(-50, 50)),
                st.tuples(st.integers(-50, 50), st.integers(-50, 50)))


@given(mat, mat, st.integers(1, 184), st.integers(0, 184))
def test_matrix_action_is_a_right_action(A, B, a1, a2):
    M = 185
    detA = A[0][0] * A[1][1] - A[0][1] * A[1][0]
    detB = B[0][0] * B[1][1] - B[0][1] * B[1][0]
    if math.gcd(detA * detB, M) != 1:
        return
    AB = tuple(tuple(sum(A[i][k] * B[k][j] for k in range(2)) for j in range(2)) for i in range(2))
    v = SiegelIndex(a1, a2, M)
    assert act_matrix(act_matrix(v, A), B) == act_matrix(v, AB)


@given(st.tuples(st.integers(-99, 99), st.integers(-99, 99)), st.tuples(st.integers(-99, 99), st.integers(-99, 99)),
       st.sampled_from([-15, -26, -2, -7, -31]))
def test_artin_matrix_is_multiplicative(x, y, d):
    F = QuadraticField(d)
    A, B = artin_matrix(x, F), artin_matrix(y, F)
    AB = tuple(tuple(sum(A[i][k] * B[k][j] for k in range(2)) for j in range(2)) for i in range(2))
    assert AB == artin_matrix(F.mul(x, y), F)
    assert A[0][0] * A[1][1] - A[0][1] * A[1][0] == F.norm(*x)


def test_artin_matrices_of_the_examples():
    assert artin_matrix((155, 76), QuadraticField(-15)) == ((-79, -620), (155, 76))
    assert artin_matrix((-2, 17), QuadraticField(-2)) == ((17, 4), (-2, 17))
    assert artin_matrix((0, 36), QuadraticField(-15)) == ((36, 0), (0, 36))


def _conjugation_cases(d, count, seed):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        M = rng.randint(2, 40)
        a1, a2 = rng.randrange(M), rng.randrange(M)
        if a1 or a2:
            out.append(SiegelIndex(a1, a2, M))
    return out


@pytest.mark.parametrize("d", [15, 2])   # theta = (-1 + sqrt(-15))/2 and theta = sqrt(-2)
def test_complex_conjugation_identity(d):
    cm = CmPoint.of(d)
    prec = 256
    for v in _conjugation_cases(d, 50, d):
        a = eval_g12(v, cm, 1, prec)
        b = eval_g12(conjugate_index(v, cm.field), cm, 1, prec)
        with mpmath.workprec(prec + 32):
            assert abs(mpmath.conj(a) - b) <= abs(b) * mpmath.ldexp(1, 16 - prec)


def test_seed_index_gives_a_real_value():
    for d, M in ((15, 185), (2, 37), (2, 5)):
        cm = CmPoint.of(d)
        v = SiegelIndex(0, 1, M)
        assert conjugate_index(v, cm.field) == v
        z = eval_g12(v, cm, 1, 256)
        assert abs(z.imag) <= abs(z) * mpmath.ldexp(1, 16 - 256)


def test_precision_doubling_is_consistent():
    v = SiegelIndex(7, 11, 37)
    cm = CmPoint.of(15)
    lo = eval_g12(v, cm, 2, 256)
    hi = eval_g12(v, cm, 2, 512)
    with mpmath.workprec(600):
        assert abs(lo - hi) <= abs(hi) * mpmath.ldexp(1, G12_SLACK + 1 - 256)


def test_truncation_length_grows_with_precision():
    cm = CmPoint.of(2)
    assert truncation_length(cm, 1000) > truncation_length(cm, 100) > 0
    q = 2 ** cm.log2_abs_q()
    assert q ** truncation_length(cm, 200) < 2.0 ** -200


def test_power_multiple():
    v = SiegelIndex(1, 2, 5)
    cm = CmPoint.of(7)
    a = eval_g12(v, cm, 1, 200)
    b = eval_g12(v, cm, 3, 200)
    with mpmath.workprec(240):
        assert abs(a ** 3 - b) <= abs(b) * mpmath.ldexp(1, 12 - 200)
    with pytest.raises(ValueError):
        eval_g12(v, cm, 0)


def test_cm_point_requires_imaginary_field():
    with pytest.raises(HypothesisError):
        CmPoint(3, QuadraticField(62))


# ---------------------------------------------------------------- orbits

F15, F2 = QuadraticField(-15), QuadraticField(-2)
MATS_185 = [artin_matrix((0, 36), F15), artin_matrix((155, 76), F15)]
MATS_37 = [artin_matrix((-2, 17), F2)]


def test_orbit_at_level_185_is_the_reference_set():
    got = orbit(SiegelIndex(0, 1, 185), MATS_185)
    assert len(got) == 38
    assert set(got) == {normalize(v) for v in parse(LEVEL_185, 185)}


def test_orbit_at_level_37_is_the_reference_set():
    got = orbit(SiegelIndex(0, 1, 37), MATS_37)
    assert len(got) == 19
    assert set(got) == {normalize(v) for v in parse(LEVEL_37, 37)}


def test_orbit_is_closed_under_the_generators():
    got = set(orbit(SiegelIndex(0, 1, 185), MATS_185))
    for A in MATS_185:
        assert {act_matrix(v, A) for v in got} == got


def test_orbit_at_level_5_37sq_with_reference_and_computed_matrices():
    M = 5 * 37 ** 2
    ours = artin_matrix((740, 371), F15)
    reference = ((1 - 370, 31 * 37), (740, 1 + 370))
    assert all((ours[i][j] - reference[i][j]) % 37 ** 2 == 0 for i in range(2) for j in range(2))
    a = orbit(SiegelIndex(0, 1, M), [ours])
    b = orbit(SiegelIndex(0, 1, M), [reference])
    assert len(a) == 37 and a == b


def test_act_artin_matches_matrix():
    v = SiegelIndex(3, 4, 37)
    assert act_artin(v, (-2, 17), F2) == act_matrix(v, MATS_37[0])


def test_parallel_evaluation_matches_serial():
    idx = orbit(SiegelIndex(0, 1, 37), MATS_37)[:6]
    cm = CmPoint.of(2)
    assert evaluate_many(idx, cm, 1, 128, workers=2) == evaluate_many(idx, cm, 1, 128)


def test_orbit_product_at_level_37():
    r = orbit_product(SiegelIndex(0, 1, 37), MATS_37, CmPoint.of(2), 1, 256)
    assert len(r.orbit) == 19
    assert r.imag_residual < mpmath.ldexp(1, 32 - 256)
    assert mpmath.nstr(r.value.real, 8) == "3.9908748e-460"

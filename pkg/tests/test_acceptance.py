"""End-to-end acceptance checks, one per headline result.

Each test records one PASS/FAIL line with its wall time; the lines are shown
at the end of the pytest run. Run with
`pytest tests/test_acceptance.py -v` or `python tests/test_acceptance.py`.
"""
import random
import sys
import time
from contextlib import contextmanager

import mpmath
import numpy as np
import pytest
import sympy

from orbit_data import LEVEL_185, LEVEL_37, parse
from rayclass.fields import HypothesisError, QuadraticField, is_squarefree, legendre, make_tower, unit_exponents
from rayclass.invariants import (
    certified_minimal_polynomial, galois_matrices, norm_generator, normal_basis, preset_spec,
)
from rayclass.residue import (
    degree_table, enumerate_degrees, norm_map_image, pell_count, pell_order,
)
from rayclass.siegel import CmPoint, SiegelIndex, act_matrix, conjugate_index, eval_g12, normalize


RESULTS: list[str] = []     # shown by the terminal summary hook in conftest.py


@contextmanager
def criterion(n, title, budget):
    """Print one PASS/FAIL line for criterion n, failing also when the time budget is blown."""
    t0 = time.perf_counter()
    try:
        yield
        dt = time.perf_counter() - t0
        assert dt < budget, f"took {dt:.1f}s, budget {budget}s"
    except BaseException as exc:
        dt = time.perf_counter() - t0
        RESULTS.append(f"FAIL  criterion {n}: {title}  ({dt:.2f}s)  {exc}")
        raise
    RESULTS.append(f"PASS  criterion {n}: {title}  ({dt:.2f}s)")


def close(value, target, tol):
    with mpmath.workprec(128):
        t = mpmath.mpf(target)
        return abs(mpmath.mpf(value) - t) <= tol * abs(t)


def test_criterion_1_norm_generator_level_185():
    with criterion(1, "norm generator 2.1204525e-6180 and its 38-index orbit", 180):
        spec, _ = preset_spec("6-14a")
        v = norm_generator(spec, 512, 1024)
        assert v.prec <= 1024
        assert close(v.value, "2.1204525e-6180", 5e-8)
        assert mpmath.nstr(v.value, 8) == "2.1204525e-6180"
        assert len(v.orbit) == 38
        assert set(v.orbit) == {normalize(x) for x in parse(LEVEL_185, 185)}


def test_criterion_2_norm_generator_level_37():
    with criterion(2, "norm generator 3.9908748e-460 and its 19-index orbit", 60):
        spec, _ = preset_spec("6-14b")
        v = norm_generator(spec)
        assert close(v.value, "3.9908748e-460", 5e-8)
        assert mpmath.nstr(v.value, 8) == "3.9908748e-460"
        assert len(v.orbit) == 19
        assert set(v.orbit) == {normalize(x) for x in parse(LEVEL_37, 37)}


def test_criterion_3_conjugates_and_minimal_polynomial():
    reference = ["1.9536503584e-10", "5.7741480125e12", "8.3960306665e13", "9833.1204783"]
    coeffs = (1, -89734454687500, 484799238741216491699218750, -4767089313656759262084960937500,
              931322574615478515625)
    with criterion(3, "four conjugates and the certified integer quartic", 60):
        conj, poly = certified_minimal_polynomial(preset_spec("8-8")[0])
        assert len(conj.values) == 4 and conj.distinct
        for v, t in zip(conj.values, reference):
            assert close(v.value, t, 1e-9), (mpmath.nstr(v.value, 12), t)
        assert poly.coefficients == coeffs
        assert poly.coefficients[-1] == 5 ** 30
        assert poly.max_residual < 0.25


def test_criterion_4_normal_basis():
    with criterion(4, "normal basis element 3.00000000023283 with certified Frobenius sums", 300):
        nb = normal_basis(preset_spec("9-6")[0], 512, 4096)
        assert nb.prec <= 4096
        assert mpmath.nstr(nb.beta.value, 15) == "3.00000000023283"
        checks = nb.lemma_checks
        assert checks and all(checks.values()), checks
        assert len(nb.frobenius) == 4
        assert all(f["certified"] for f in nb.frobenius)


def test_criterion_5_pell_conics():
    with criterion(5, "Pell conic order, cyclicity and norm map for p <= 97, delta <= 100", 30):
        cases = 0
        for p in sympy.primerange(3, 98):
            x, y = np.ogrid[:p, :p]
            for delta in range(2, 101):
                if not is_squarefree(delta) or delta % p == 0:
                    continue
                expected = p - legendre(delta, p)
                count = int(np.count_nonzero((x * x - delta * y * y - 1) % p == 0))
                g = pell_count(delta, p)
                assert g.order == count == expected, (delta, p)
                assert pell_order(g.generator, delta, p, g.order) == g.order, (delta, p)
                img = norm_map_image(QuadraticField(delta), p)
                assert img.surjective and img.kernel_order == expected, (delta, p)
                cases += 1
        assert cases > 1000


TOWERS = [(15, 26), (7, 2), (31, 2), (23, 6), (31, 10), (11, 2), (19, 2), (23, 26), (7, 6), (39, 2), (51, 2),
          (7, 10), (35, 2), (43, 2), (19, 6)]


def _agree(T, E):
    return all(E.to_top[k] == v for k, v in T.to_top.items()) and \
        all(E.extra[k] == v for k, v in T.extra.items() if k in E.extra)


def test_criterion_6_degree_formulas_against_enumeration():
    with criterion(6, "degree formulas equal exhaustive enumeration", 120):
        towers_per_p = {}
        for p in (5, 13, 17):
            for ds in TOWERS:
                t = make_tower(*ds)
                for N in (1, 3, 5, 7):
                    if N % p == 0:
                        continue
                    try:
                        T = degree_table(t, N, p)
                    except HypothesisError:
                        continue
                    assert _agree(T, enumerate_degrees(t, N, p)), (ds, N, p)
                    towers_per_p.setdefault(p, set()).add(ds)
        assert all(len(towers_per_p.get(p, ())) >= 5 for p in (5, 13, 17)), towers_per_p
        higher = 0
        for ds in TOWERS:
            t = make_tower(*ds)
            for N in (1, 3, 7):
                mu0 = unit_exponents(t, N, 5).mu0
                for mu in (1, 2):
                    if mu < mu0:
                        continue
                    assert _agree(degree_table(t, N, 5, mu), enumerate_degrees(t, N, 5, mu)), (ds, N, mu)
                    higher += 1
        assert higher >= 5


def test_criterion_7_higher_level_matrix_and_realness():
    with criterion(7, "matrix at level 5*37^2, certified real 37-factor product, invariant orbit", 300):
        spec, _ = preset_spec("7-9")
        _, mats, _ = galois_matrices(spec)
        (A,) = mats
        q = 37
        reference = ((1 - 10 * q, 31 * q), (20 * q, 1 + 10 * q))
        assert all((A[i][j] - reference[i][j]) % q ** 2 == 0 for i in range(2) for j in range(2))
        assert A[0][0] == reference[0][0] and A[1] == reference[1]
        v = norm_generator(spec)
        assert len(v.orbit) == 37
        assert v.imag_residual < mpmath.ldexp(1, 32 - v.prec)
        orb = set(v.orbit)
        assert {act_matrix(x, A) for x in orb} == orb
        assert {act_matrix(x, reference) for x in orb} == orb


def test_criterion_8_conjugation_and_normalization():
    with criterion(8, "conjugation identity on 50 random indices per theta shape, exact normalization", 120):
        prec = 256
        for d in (15, 2):      # theta = (-1 + sqrt(-15))/2 and theta = sqrt(-2)
            cm = CmPoint.of(d)
            rng = random.Random(d)
            done = 0
            while done < 50:
                M = rng.randint(2, 60)
                a1, a2 = rng.randrange(M), rng.randrange(M)
                if not (a1 or a2):
                    continue
                v = SiegelIndex(a1, a2, M)
                a = eval_g12(v, cm, 1, prec)
                b = eval_g12(conjugate_index(v, cm.field), cm, 1, prec)
                with mpmath.workprec(prec + 32):
                    assert abs(mpmath.conj(a) - b) <= abs(b) * mpmath.ldexp(1, 16 - prec), (d, v)
                k1, k2 = rng.randint(-9, 9), rng.randint(-9, 9)
                shifted = SiegelIndex(a1 + k1 * M, a2 + k2 * M, M)
                negated = SiegelIndex(-a1, -a2, M)
                assert normalize(shifted) == normalize(negated) == normalize(v)
                assert eval_g12(shifted, cm, 1, prec) == eval_g12(negated, cm, 1, prec) == a
                done += 1


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))

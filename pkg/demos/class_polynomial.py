"""Conjugates of a norm generator over the Hilbert class field, and their integer polynomial.

The product of (X - gamma_k) over the conjugates is rounded with interval
arithmetic; every coefficient must be within 1/4 of an integer to be accepted.
"""
import mpmath

from rayclass.fields import make_tower
from rayclass.invariants import InvariantSpec, certified_minimal_polynomial

spec = InvariantSpec(make_tower(31, 2), 1, 5, I=2)
conj, poly = certified_minimal_polynomial(spec)
print(f"Omega_C for primitive root C = {conj.generator['C']}")
for k, v in enumerate(conj.values):
    print(f"  gamma_{k} = {mpmath.nstr(v.value, 20)}")
print("pairwise distinct:", conj.distinct)
print("coefficients:", poly.coefficients)
print("constant term is 5^30:", poly.coefficients[-1] == 5 ** 30)
print(f"worst distance to an integer: {mpmath.nstr(poly.max_residual, 3)} at {poly.prec} bits")

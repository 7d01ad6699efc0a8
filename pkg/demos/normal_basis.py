"""A normal basis element of the ray class field of conductor p over the Hilbert class field.

The element is a sum of reciprocals 1/M(i, j) of large integers built from
character sums of the conjugates; nonvanishing Frobenius sums certify it.
"""
import mpmath

from rayclass.fields import make_tower
from rayclass.invariants import InvariantSpec, big_int_summary, normal_basis

spec = InvariantSpec(make_tower(31, 2), 1, 5, I=2)
nb = normal_basis(spec)
print(f"beta = {mpmath.nstr(nb.beta.value, 25)}  ({nb.prec} bits)")
print("N(i, j):")
for row in nb.N:
    print("  ", [big_int_summary(x) if abs(x) < 10 ** 12 else f"<{len(str(abs(x)))} digits>" for x in row])
print("M(i, j) digit counts:", [[len(str(x)) for x in row] for row in nb.M])
print("gcd checks:", nb.lemma_checks)
for f in nb.frobenius:
    print(f"  character {f['character']}: |T| = {mpmath.nstr(f['abs'], 6)} > {mpmath.nstr(f['error_bound'], 3)}")

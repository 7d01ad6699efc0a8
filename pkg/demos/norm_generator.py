"""Norms of a Siegel value down to the real quadratic subfield's ray class field.

The Galois orbit of the seed index (0, 1/M) is generated by Artin matrices; the
product of g^{12M} over the orbit is a real algebraic number.
"""
import mpmath

from rayclass.fields import make_tower
from rayclass.invariants import InvariantSpec, galois_matrices, norm_generator
from rayclass.siegel import act_matrix

for d1, d2, N, p in ((15, 26, 5, 37), (7, 2, 1, 37)):
    spec = InvariantSpec(make_tower(d1, d2), N, p)
    g, mats, _ = galois_matrices(spec)
    v = norm_generator(spec)
    print(f"Q(sqrt(-{d1}), sqrt(-{d2})), N={N}, p={p}, theta of Q(sqrt({spec.field.d})):")
    for m in mats:
        print("  Galois matrix", m)
    print(f"  orbit of {len(v.orbit)} indices:", " ".join(str(x) for x in v.orbit[:6]), "...")
    print(f"  product = {mpmath.nstr(v.value, 15)}  (imaginary part below {mpmath.nstr(v.imag_residual, 3)})")
    orb = set(v.orbit)
    print("  orbit closed under the generators:", all({act_matrix(x, m) for x in orb} == orb for m in mats))

# one level higher in p: the orbit has p elements and is still real
spec = InvariantSpec(make_tower(15, 26), 5, 37, mu=1)
v = norm_generator(spec)
print(f"level 5*37^2: {len(v.orbit)} factors, value {mpmath.nstr(v.value, 15)}, "
      f"imaginary residual {mpmath.nstr(v.imag_residual, 3)}")

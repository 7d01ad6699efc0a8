"""The conic x^2 - delta y^2 = 1 over F_p: point counts, a generator, and the norm map.

The F_p-points form a cyclic group of order p - (delta/p) under
(r, s) + (t, u) = (rt + delta su, ru + st).
"""
from rayclass.fields import QuadraticField, legendre
from rayclass.residue import norm_map_image, pell_count, pell_mul

for delta, p in ((62, 5), (14, 37), (390, 7), (2, 13)):
    g = pell_count(delta, p)
    print(f"delta={delta:4d} p={p:3d}: {g.order} points, p - (delta/p) = {p - legendre(delta, p)}, "
          f"generator {g.generator}")

# walk the cyclic group once for delta = 62 over F_5
g = pell_count(62, 5)
x = (1, 0)
walk = []
for _ in range(g.order):
    walk.append(x)
    x = pell_mul(x, g.generator, 62, 5)
print("powers of", g.generator, "->", walk)

# the norm from (O/p)^x onto F_p^x is onto; its kernel is the conic group
img = norm_map_image(QuadraticField(62), 5)
print(f"norm map onto F_5^x: {img.surjective}, kernel order {img.kernel_order}")
print("one preimage per class:", img.preimages)

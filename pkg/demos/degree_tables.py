"""Degrees of the intermediate class fields, from the closed form and by brute force."""
from rayclass.fields import make_tower, unit_exponents
from rayclass.residue import degree_table, enumerate_degrees

t = make_tower(15, 26)
ue = unit_exponents(t, 5, 37)
print(f"eps0 = {t.eps0[0]} + {t.eps0[1]} sqrt(390); m0={ue.m0} n0={ue.n0} l0={ue.l0} mu0={ue.mu0}")

T = degree_table(t, 5, 37)
print(f"closed form ({T.case}):")
for e in T.to_json()["entries"]:
    print(f"  [{e['from']} : {e['to']}] = {e['index']}")

# at p = 5 the unit group of O_K/p has 5^4 elements, small enough to enumerate
t = make_tower(31, 2)
T, E = degree_table(t, 1, 5), enumerate_degrees(t, 1, 5)
print(f"Q(sqrt(-31), sqrt(-2)) at p = 5, N = 1 ({T.case}):")
for k, v in T.to_top.items():
    print(f"  [{T.top} : {k}] = {v:3d}   enumerated {E.to_top[k]}")

for mu in (1, 2):
    T, E = degree_table(t, 1, 5, mu), enumerate_degrees(t, 1, 5, mu)
    same = all(E.to_top[k] == v for k, v in T.to_top.items())
    print(f"  p^{mu + 1}: {T.case}, formula agrees with enumeration: {same}")

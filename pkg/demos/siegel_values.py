"""Evaluating g_r(theta)^{12 M n} to a few hundred bits and checking its symmetries."""
import mpmath

from rayclass.siegel import CmPoint, SiegelIndex, conjugate_index, eval_g12, normalize

cm = CmPoint.of(2)                      # theta = sqrt(-2)
v = SiegelIndex(0, 1, 5)                # r = (0, 1/5)
z = eval_g12(v, cm, 1, 256)
print("g_(0,1/5)(sqrt(-2))^60 =", mpmath.nstr(z, 30))

# r and -r, and r shifted by integers, give the same 12M-th power
w = SiegelIndex(-3, 11, 5)
print(w, "normalizes to", normalize(w), "- same value:", eval_g12(w, cm, 1, 256) == eval_g12(normalize(w), cm, 1, 256))

# complex conjugation acts on the index through the field
cm15 = CmPoint.of(15)                   # theta = (-1 + sqrt(-15))/2
u = SiegelIndex(7, 11, 37)
a = eval_g12(u, cm15, 1, 256)
b = eval_g12(conjugate_index(u, cm15.field), cm15, 1, 256)
with mpmath.workprec(300):
    print(f"conj(g_{u}) vs g_{conjugate_index(u, cm15.field)}: relative gap",
          mpmath.nstr(abs(mpmath.conj(a) - b) / abs(b), 3))

# the seed index (0, 1/M) lands on a real number
s = eval_g12(SiegelIndex(0, 1, 185), cm15, 1, 256)
print("g_(0,1/185)(theta)^2220 =", mpmath.nstr(s, 20))

"""Residue rings O_K / n O_K, Pell conics over F_p and the subgroup lattices behind the degree formulas.

Residues use the integer basis {1, s1, s2, s3} (see ``fields``), which is valid for odd n.
Exhaustive enumeration over (O_K / p O_K)^x is vectorized with numpy and serves as an
independent check of every closed-form index.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

import numpy as np

from .fields import (
    FieldTower, HypothesisError, OkElement, QuadraticField, UnitExponents, check_level,
    conjugate_int, is_prime, k3_pow, legendre, mul_int, prime_factors, primitive_root,
    sqrt_mod, unit_exponents,
)


# ---------------------------------------------------------------- O_K / n O_K

@dataclass(frozen=True)
class ResidueRing:
    d1: int
    d2: int
    n: int

    def __post_init__(self):
        if self.n < 1 or self.n % 2 == 0:
            raise HypothesisError(f"modulus {self.n} must be odd and positive")

    def __call__(self, a: int = 0, b: int = 0, c: int = 0, d: int = 0) -> "ResidueElement":
        n = self.n
        return ResidueElement((a % n, b % n, c % n, d % n), self)

    @property
    def one(self) -> "ResidueElement":
        return self(1)

    def from_ok(self, w: OkElement) -> "ResidueElement":
        half = pow(2, -1, self.n) if self.n > 1 else 0
        return self(*(x * half for x in w.doubled))

    def reduce(self, x: "ResidueElement") -> "ResidueElement":
        if x.ring.n % self.n:
            raise ValueError(f"{self.n} does not divide {x.ring.n}")
        return self(*x.coords)


@dataclass(frozen=True)
class ResidueElement:
    coords: tuple[int, int, int, int]
    ring: ResidueRing = field(repr=False)

    def __mul__(self, other: "ResidueElement") -> "ResidueElement":
        r = self.ring
        return r(*mul_int(self.coords, other.coords, r.d1, r.d2))

    def __pow__(self, k: int) -> "ResidueElement":
        if k < 0:
            return self.inverse() ** (-k)
        acc, base = self.ring.one, self
        while k:
            if k & 1:
                acc = acc * base
            base = base * base
            k >>= 1
        return acc

    def __neg__(self) -> "ResidueElement":
        return self.ring(*(-x for x in self.coords))

    def __add__(self, other: "ResidueElement") -> "ResidueElement":
        return self.ring(*(x + y for x, y in zip(self.coords, other.coords)))

    def scale(self, k: int) -> "ResidueElement":
        return self.ring(*(k * x for x in self.coords))

    def norm_root(self, i: int) -> tuple[int, int]:
        """N_{K/K_i} as X + Y * s_i (integer basis), reduced mod n."""
        r = self.ring
        prod = mul_int(self.coords, conjugate_int(self.coords, i), r.d1, r.d2)
        return (prod[0] % r.n, prod[i] % r.n)

    def norm_to(self, i: int) -> tuple[int, int]:
        """N_{K/K_i} mod n: (s, t) with s*theta_i + t for i = 1, 2 and (x, y) over sqrt(d1 d2) for i = 3."""
        X, Y = self.norm_root(i)
        if i == 3:
            return (X, Y)
        r = self.ring
        F = QuadraticField(-(r.d1 if i == 1 else r.d2))
        s, t = F.from_root(X, Y)
        return (s % r.n, t % r.n)

    def norm_q(self) -> int:
        X, Y = self.norm_root(3)
        return (X * X - self.ring.d1 * self.ring.d2 * Y * Y) % self.ring.n

    def is_unit(self) -> bool:
        return math.gcd(self.norm_q(), self.ring.n) == 1

    def inverse(self) -> "ResidueElement":
        # w^-1 = conj1(w) conj2(w) conj3(w) / N(w)
        r = self.ring
        nq = self.norm_q()
        if math.gcd(nq, r.n) != 1:
            raise ZeroDivisionError(f"{self.coords} is not a unit mod {r.n}")
        c = self.ring(*conjugate_int(self.coords, 1)) * self.ring(*conjugate_int(self.coords, 2)) \
            * self.ring(*conjugate_int(self.coords, 3))
        return c.scale(pow(nq, -1, r.n))

    def order(self, bound: int | None = None) -> int:
        bound = bound or self.ring.n ** 4
        acc = self
        for k in range(1, bound + 1):
            if acc == self.ring.one:
                return k
            acc = acc * self
        raise ArithmeticError("order exceeds bound")

    def lift(self) -> OkElement:
        """An element of O_K with this residue (coordinates in [0, n))."""
        return OkElement.from_int(self.coords, self.ring.d1, self.ring.d2)

    def label(self) -> str:
        names = ("", "sqrt(-%d)" % self.ring.d1, "sqrt(-%d)" % self.ring.d2,
                 "sqrt(%d)" % (self.ring.d1 * self.ring.d2))
        terms = []
        for c, nm in zip(self.coords, names):
            if c:
                terms.append(f"{c}{'*' + nm if nm else ''}")
        return " + ".join(terms) or "0"


def crt(parts: list[ResidueElement]) -> ResidueElement:
    """Combine residues modulo pairwise coprime moduli."""
    if not parts:
        raise ValueError("nothing to combine")
    d1, d2 = parts[0].ring.d1, parts[0].ring.d2
    n, coords = 1, (0, 0, 0, 0)
    for x in parts:
        m = x.ring.n
        if math.gcd(n, m) != 1:
            raise ValueError("moduli must be coprime")
        coords = tuple(_crt2(c, n, xc, m) for c, xc in zip(coords, x.coords))
        n *= m
    return ResidueRing(d1, d2, n)(*coords)


def _crt2(a: int, n: int, b: int, m: int) -> int:
    if n == 1:
        return b % m
    if m == 1:
        return a % n
    k = ((b - a) * pow(n, -1, m)) % m
    return (a + n * k) % (n * m)


def lift_one_mod(x: ResidueElement, N: int) -> ResidueElement:
    """The residue mod N * x.ring.n that is 1 mod N and x mod x.ring.n."""
    return crt([ResidueRing(x.ring.d1, x.ring.d2, N).one, x])


# ---------------------------------------------------------------- Pell conics

def pell_mul(u: tuple[int, int], v: tuple[int, int], delta: int, p: int) -> tuple[int, int]:
    r, s = u
    t, w = v
    return ((r * t + delta * s * w) % p, (r * w + s * t) % p)


def pell_pow(u: tuple[int, int], k: int, delta: int, p: int) -> tuple[int, int]:
    acc, base = (1, 0), u
    while k:
        if k & 1:
            acc = pell_mul(acc, base, delta, p)
        base = pell_mul(base, base, delta, p)
        k >>= 1
    return acc


def pell_points(delta: int, p: int) -> np.ndarray:
    """All (x, y) in F_p^2 with x^2 - delta*y^2 = 1, lexicographically ordered."""
    x, y = np.divmod(np.arange(p * p, dtype=np.int64), p)
    mask = (x * x - (delta % p) * y * y - 1) % p == 0
    return np.stack([x[mask], y[mask]], axis=1)


@dataclass(frozen=True)
class PellGroup:
    delta: int
    p: int
    order: int
    generator: tuple[int, int]
    points: tuple[tuple[int, int], ...] = field(repr=False)

    def power(self, k: int) -> tuple[int, int]:
        return pell_pow(self.generator, k, self.delta, self.p)


def pell_order(u: tuple[int, int], delta: int, p: int, group_order: int) -> int:
    order = group_order
    for q in prime_factors(group_order):
        while order % q == 0 and pell_pow(u, order // q, delta, p) == (1, 0):
            order //= q
    return order


def pell_count(delta: int, p: int) -> PellGroup:
    """The conic x^2 - delta y^2 = 1 over F_p with its group law and a generator.

    The generator is the lexicographically first point of full order.
    """
    if not is_prime(p) or p == 2:
        raise HypothesisError(f"p = {p} is not an odd prime")
    if delta % p == 0:
        raise HypothesisError(f"p = {p} divides delta = {delta}")
    pts = [tuple(int(v) for v in row) for row in pell_points(delta, p)]
    m = len(pts)
    for u in pts:
        if pell_order(u, delta, p, m) == m:
            return PellGroup(delta, p, m, u, tuple(pts))
    raise ArithmeticError(f"conic group for delta = {delta}, p = {p} is not cyclic")


# ---------------------------------------------------------------- unit counts and norm images

def _splitting(tower_or_field, ell: int) -> tuple[int, int]:
    """(number of primes above ell, residue degree) for odd ell."""
    if isinstance(tower_or_field, QuadraticField):
        s = legendre(tower_or_field.discriminant, ell)
        return {1: (2, 1), -1: (1, 2), 0: (1, 1)}[s]
    t = tower_or_field
    syms = [legendre(t.K1.discriminant, ell), legendre(t.K2.discriminant, ell), legendre(t.K3.discriminant, ell)]
    if 0 not in syms:
        return (4, 1) if all(s == 1 for s in syms) else (2, 2)
    # ramified in two subfields; the third decides the residue degree
    s = next(x for x in syms if x != 0)
    return (2, 1) if s == 1 else (1, 2)


def unit_group_order(field_, n: int) -> int:
    """|(O / n O)^x| for a quadratic field or the tower, n odd."""
    if n < 1 or n % 2 == 0:
        raise HypothesisError(f"n = {n} must be odd and positive")
    deg = 2 if isinstance(field_, QuadraticField) else 4
    total = n ** deg
    out = Fraction(total)
    for ell in prime_factors(n):
        g, f = _splitting(field_, ell)
        out *= (1 - Fraction(1, ell ** f)) ** g
    return int(out)


def count_units(field_, n: int) -> int:
    """Brute-force |(O / n O)^x| by testing every residue for an invertible norm."""
    if isinstance(field_, QuadraticField):
        x, y = np.divmod(np.arange(n * n, dtype=np.int64), n)
        nrm = (x * x - (field_.d % n) * y * y) % n
        return int(np.count_nonzero(np.gcd(nrm, n) == 1))
    a, b, c, d = _grid(n)
    X, Y = norm_k3_arrays(a, b, c, d, field_.d1, field_.d2, n)
    nrm = (X * X - (field_.delta % n) * Y * Y) % n
    return int(np.count_nonzero(np.gcd(nrm, n) == 1))


def _grid(n: int):
    idx = np.arange(n ** 4, dtype=np.int64)
    a, r = np.divmod(idx, n ** 3)
    b, r = np.divmod(r, n * n)
    c, d = np.divmod(r, n)
    return a, b, c, d


def norm_k1_arrays(a, b, c, d, d1, d2, n):
    X = (a * a - d1 * b * b + d2 * c * c - d1 * d2 * d * d) % n
    Y = (2 * (a * b - d2 * c * d)) % n
    return X, Y


def norm_k2_arrays(a, b, c, d, d1, d2, n):
    X = (a * a + d1 * b * b - d2 * c * c - d1 * d2 * d * d) % n
    Y = (2 * (a * c - d1 * b * d)) % n
    return X, Y


def norm_k3_arrays(a, b, c, d, d1, d2, n):
    X = (a * a + d1 * b * b + d2 * c * c + d1 * d2 * d * d) % n
    Y = (2 * (a * d + b * c)) % n
    return X, Y


@dataclass(frozen=True)
class NormImage:
    p: int
    surjective: bool
    kernel_order: int
    preimages: dict[int, tuple[int, ...]]


def norm_map_image(field_, p: int) -> NormImage:
    """Image of the norm (O/p)^x -> (Z/p)^x, with the first preimage of each class."""
    if not is_prime(p) or p == 2:
        raise HypothesisError(f"p = {p} is not an odd prime")
    if isinstance(field_, QuadraticField):
        x, y = np.divmod(np.arange(p * p, dtype=np.int64), p)
        nrm = (x * x - (field_.d % p) * y * y) % p
        coords = np.stack([x, y], axis=1)
    else:
        a, b, c, d = _grid(p)
        X, Y = norm_k3_arrays(a, b, c, d, field_.d1, field_.d2, p)
        nrm = (X * X - (field_.delta % p) * Y * Y) % p
        coords = np.stack([a, b, c, d], axis=1)
    pre = {}
    for cls in range(1, p):
        hits = np.flatnonzero(nrm == cls)
        if hits.size:
            pre[cls] = tuple(int(v) for v in coords[hits[0]])
    return NormImage(p, len(pre) == p - 1, int(np.count_nonzero(nrm == 1)), pre)


# ---------------------------------------------------------------- helper elements

@dataclass(frozen=True)
class Helpers:
    """Residues mod p used to describe the subgroups (all in the integer basis)."""
    i0: int
    i0p: int
    A: int                    # A^2 = -1
    D: int                    # D^2 = -d_i0
    omega0: ResidueElement    # generator of the norm-one group of K3 mod p
    omega_i0: ResidueElement  # generator of W'^{i0',3}, lives in K_i0
    omega_i0p: ResidueElement  # generator of W'^{i0,3}, lives in K_i0'
    dinv_s: ResidueElement    # D^-1 sqrt(-d_i0)
    B: ResidueElement
    eps0p: ResidueElement     # eps0' mod p


def _pell_generator_element(ring: ResidueRing, i: int, p: int) -> ResidueElement:
    """Generator of {x + y s_i : x^2 - (s_i^2) y^2 = 1} mod p (i = 1, 2, 3)."""
    sq = {1: -ring.d1, 2: -ring.d2, 3: ring.d1 * ring.d2}[i]
    g = pell_count(sq, p).generator
    coords = [g[0], 0, 0, 0]
    coords[i] = g[1]
    return ring(*coords)


def helpers(tower: FieldTower, N: int, p: int, ue: UnitExponents | None = None) -> Helpers:
    check_level(N, p)
    ue = ue or unit_exponents(tower, N, p)
    i0, i0p = tower.split_indices(p)
    R = ResidueRing(tower.d1, tower.d2, p)
    A = sqrt_mod(-1, p)
    d_i0, d_i0p = tower.d(i0), tower.d(i0p)
    D = sqrt_mod(-d_i0, p)
    s_i0 = [0, 0, 0, 0]
    s_i0[i0] = pow(D, -1, p)
    dinv_s = R(*s_i0)
    half = (p + 1) // 2
    inv_dp = pow(d_i0p, -1, p)
    b_coords = [0, 0, 0, 0]
    b_coords[i0p] = half * A * (1 + inv_dp)
    b_coords[3] = half * A * pow(D, -1, p) * (1 - inv_dp)
    e = ue.eps0_prime
    return Helpers(
        i0, i0p, A, D,
        omega0=_pell_generator_element(R, 3, p),
        omega_i0=_pell_generator_element(R, i0, p),
        omega_i0p=_pell_generator_element(R, i0p, p),
        dinv_s=dinv_s,
        B=R(*b_coords),
        eps0p=R(e[0], 0, 0, e[1]),
    )


# ---------------------------------------------------------------- subgroup descriptions

@dataclass(frozen=True)
class SubgroupDescriptor:
    """A subgroup written as a disjoint union of translates of a cyclic base.

    elements = { prod_k factor_k^{e_k} * base^j : 0 <= e_k < count_k, 0 <= j < base_order }
    """
    label: str
    base: ResidueElement
    base_order: int
    factors: tuple[tuple[ResidueElement, int], ...] = ()

    @property
    def order(self) -> int:
        return self.base_order * math.prod(c for _, c in self.factors)

    def elements(self) -> list[ResidueElement]:
        base_pows = [self.base ** j for j in range(self.base_order)]
        out = []
        for exps in product(*(range(c) for _, c in self.factors)):
            shift = self.base.ring.one
            for (g, _), e in zip(self.factors, exps):
                shift = shift * g ** e
            out.extend(shift * b for b in base_pows)
        return out


def wtilde_lattice(tower: FieldTower, N: int, p: int, mu: int = 0) -> dict[str, SubgroupDescriptor]:
    """The subgroups W~ of (O_K/p)^x (mu = 0) or of S_mu/S_{mu+1} (mu > 0) as coset unions."""
    check_level(N, p)
    if mu > 0:
        return _lattice_higher(tower, N, p, mu)
    _require_section_six(tower, N, p)
    ue = unit_exponents(tower, N, p)
    h = helpers(tower, N, p, ue)
    i0, i0p = h.i0, h.i0p
    A = ResidueRing(tower.d1, tower.d2, p)(h.A)
    half = (p + 1) // 2
    out = {
        "W'^{1,2}": SubgroupDescriptor("W'^{1,2}", h.omega0, p + 1),
        f"W'^{{{i0},3}}": SubgroupDescriptor(f"W'^{{{i0},3}}", h.omega_i0p, p + 1),
        f"W'^{{{i0p},3}}": SubgroupDescriptor(f"W'^{{{i0p},3}}", h.omega_i0, p - 1),
        "W'": SubgroupDescriptor("W'", -A.ring.one, 2),
    }
    big = ue.n0 == p + 1
    if N == 1:
        out["W^{1,2}"] = SubgroupDescriptor("W^{1,2}", h.omega0, p + 1, ((A, 2), (h.dinv_s, 2)))
        n_eps = ue.n0 if ue.n0 % 2 else ue.n0 // 2
        out["W"] = SubgroupDescriptor("W", -A.ring.one, 2, ((h.eps0p, n_eps), (A, 2), (h.dinv_s, 2)))
        out[f"W^{{{i0},3}}"] = SubgroupDescriptor(
            f"W^{{{i0},3}}", h.omega_i0p, p + 1, ((h.eps0p, half), (A, 2), (h.dinv_s, 2)))
        out[f"W^{{{i0p},3}}"] = SubgroupDescriptor(
            f"W^{{{i0p},3}}", h.omega_i0, p - 1, ((h.eps0p, half), (A, 2), (h.B, 2)))
    else:
        out["W^{1,2}"] = SubgroupDescriptor("W^{1,2}", h.omega0, p + 1)
        n_eps = ue.n0 if ue.n0 % 2 else ue.n0 // 2
        out["W"] = SubgroupDescriptor("W", -A.ring.one, 2, ((h.eps0p, n_eps),))
        if big:
            out[f"W^{{{i0},3}}"] = SubgroupDescriptor(
                f"W^{{{i0},3}}", h.omega_i0p, p + 1, ((h.eps0p, half), (h.dinv_s, 2)))
            out[f"W^{{{i0p},3}}"] = SubgroupDescriptor(
                f"W^{{{i0p},3}}", h.omega_i0, p - 1, ((h.eps0p, half), (h.B, 2)))
        else:
            out[f"W^{{{i0},3}}"] = SubgroupDescriptor(
                f"W^{{{i0},3}}", h.omega_i0p, p + 1, ((h.eps0p, half),))
            out[f"W^{{{i0p},3}}"] = SubgroupDescriptor(
                f"W^{{{i0p},3}}", h.omega_i0, p - 1, ((h.eps0p, half),))
    # W^{i0} and W^{i0'} differ from W^{i,3} only when N != 1 and n0 = (p+1)/2
    w_i0, w_i0p = out[f"W^{{{i0},3}}"], out[f"W^{{{i0p},3}}"]
    if N != 1 and ue.n0 == half:
        w_i0 = SubgroupDescriptor(f"W^{{{i0}}}", w_i0.base, w_i0.base_order, w_i0.factors + ((h.dinv_s, 2),))
        w_i0p = SubgroupDescriptor(f"W^{{{i0p}}}", w_i0p.base, w_i0p.base_order, w_i0p.factors + ((h.B, 2),))
    out[f"W^{{{i0}}}"] = SubgroupDescriptor(f"W^{{{i0}}}", w_i0.base, w_i0.base_order, w_i0.factors)
    out[f"W^{{{i0p}}}"] = SubgroupDescriptor(f"W^{{{i0p}}}", w_i0p.base, w_i0p.base_order, w_i0p.factors)
    return out


def _lattice_higher(tower: FieldTower, N: int, p: int, mu: int) -> dict[str, SubgroupDescriptor]:
    """Subgroups of S_mu / S_{mu+1}, each element written 1 + N p^mu x mod N p^{mu+1}."""
    M = N * p ** (mu + 1)
    R = ResidueRing(tower.d1, tower.d2, M)
    step = N * p ** mu

    def gen(i):
        coords = [1, 0, 0, 0]
        coords[i] = step
        return R(*coords)

    ue = unit_exponents(tower, N, p)
    out = {
        "W^{1,2}": SubgroupDescriptor("W^{1,2}", gen(3), p),
        "W^1": SubgroupDescriptor("W^1", gen(3), p, ((gen(2), p),)),
        "W^2": SubgroupDescriptor("W^2", gen(3), p, ((gen(1), p),)),
    }
    if mu < ue.mu0:
        out["W^3"] = SubgroupDescriptor("W^3", gen(1), p, ((gen(2), p),))
    else:
        out["W^3"] = SubgroupDescriptor("W^3", gen(1), p, ((gen(2), p), (gen(3), p)))
    return out


def _require_section_six(tower: FieldTower, N: int, p: int) -> None:
    if p % 4 != 1:
        raise HypothesisError(f"p = {p} is not 1 mod 4")
    if legendre(tower.delta, p) != -1:
        raise HypothesisError(f"d1*d2 = {tower.delta} is a square mod p = {p}")


# ---------------------------------------------------------------- Galois generators

@dataclass(frozen=True)
class ArtinElement:
    """omega in O_K, given mod M = N p^{mu+1}, together with its relative norm data."""
    label: str
    omega: ResidueElement
    order: int


@dataclass(frozen=True)
class GaloisData:
    tower: FieldTower
    N: int
    p: int
    mu: int
    I: int
    M: int
    relative: tuple[ArtinElement, ...]   # generators of Gal(K~^I / K~^3)
    cyclic: ArtinElement | None          # Omega_C, generator of Gal(K~^3 / K_(N)) (mu = 0)
    C: int | None


def default_subfield(tower: FieldTower, p: int) -> int:
    """i0', the index with (-d_i / p) != 1 (the first such index)."""
    for i in (1, 2):
        if legendre(-tower.d(i), p) != 1:
            return i
    raise HypothesisError(f"p = {p} splits in both K1 and K2")


def galois_generators(tower: FieldTower, N: int, p: int, mu: int = 0, I: int | None = None) -> GaloisData:
    check_level(N, p)
    I = I or default_subfield(tower, p)
    if I not in (1, 2):
        raise HypothesisError(f"I = {I} must be 1 or 2")
    M = N * p ** (mu + 1)
    if mu > 0:
        ue = unit_exponents(tower, N, p)
        if mu < ue.mu0:
            raise HypothesisError(f"mu = {mu} < mu0 = {ue.mu0}")
        coords = [1, 0, 0, 0]
        coords[I] = N * p ** mu
        R = ResidueRing(tower.d1, tower.d2, M)
        gen = ArtinElement(f"1 + {N * p ** mu}*sqrt(-{tower.d(I)})", R(*coords), p)
        return GaloisData(tower, N, p, mu, I, M, (gen,), None, None)
    _require_section_six(tower, N, p)
    if N == 2:
        raise HypothesisError("N = 2 is excluded")
    ue = unit_exponents(tower, N, p)
    if not (ue.n0 == p + 1 or (N == 1 and ue.n0 == (p + 1) // 2)):
        raise HypothesisError(f"n0 = {ue.n0} is not admissible (need p+1, or (p+1)/2 when N = 1)")
    h = helpers(tower, N, p, ue)
    if I == h.i0p:
        gens = []
        if N != 1:
            gens.append(ArtinElement(f"D^-1 sqrt(-{tower.d(h.i0)})", lift_one_mod(h.dinv_s, N), 2))
        gens.append(ArtinElement(f"Omega_{h.i0p}", lift_one_mod(h.omega_i0p, N), (p + 1) // 2))
    else:
        gens = [ArtinElement("B", lift_one_mod(h.B, N), 2),
                ArtinElement(f"Omega_{h.i0}", lift_one_mod(h.omega_i0, N),
                             (p - 1) // 2 if N != 1 else (p - 1) // 4)]
    C = primitive_root(p)
    omega_c = find_norm_class(tower, N, p, C)
    return GaloisData(tower, N, p, 0, I, M, tuple(gens), ArtinElement("Omega_C", omega_c, p - 1), C)


def find_norm_class(tower: FieldTower, N: int, p: int, C: int) -> ResidueElement:
    """First omega (lexicographic in [0, p)^4) with N_{K/Q}(omega) = C mod p, lifted to 1 mod N."""
    R = ResidueRing(tower.d1, tower.d2, p)
    for coords in product(range(p), repeat=4):
        w = R(*coords)
        if w.norm_q() == C % p:
            return lift_one_mod(w, N)
    raise ArithmeticError(f"{C} is not a norm mod {p}")


# ---------------------------------------------------------------- degree tables

@dataclass
class DegreeTable:
    """Indices [top : X] for each intermediate field X plus the edges of the field diagram."""
    case: str
    top: str
    bottom: str
    to_top: dict[str, int]
    edges: list[tuple[str, str, int]]
    extra: dict[str, int] = field(default_factory=dict)

    def index(self, upper: str, lower: str) -> int:
        a, b = self.to_top[upper], self.to_top[lower]
        if b % a:
            raise ValueError(f"{lower} is not below {upper}")
        return b // a

    def to_json(self) -> dict:
        entries = [{"from": self.top, "to": x, "index": v} for x, v in self.to_top.items() if x != self.top]
        entries += [{"from": a, "to": b, "index": v} for a, b, v in self.edges]
        entries += [{"from": k.split("|")[0], "to": k.split("|")[1], "index": v} for k, v in self.extra.items()]
        seen, unique = set(), []
        for e in entries:
            if (e["from"], e["to"]) not in seen:
                seen.add((e["from"], e["to"]))
                unique.append(e)
        return {"case": self.case, "entries": unique}


def _nodes(i0: int, i0p: int) -> dict[str, str]:
    return {
        "12": "K~^{1,2}", "all": "K~", "i03": f"K~^{{{i0},3}}", "i0p3": f"K~^{{{i0p},3}}",
        "i0": f"K~^{{{i0}}}", "i0p": f"K~^{{{i0p}}}", "3": "K~^{3}", "0": "K~^{0}",
    }


def degree_table(tower: FieldTower, N: int, p: int, mu: int = 0) -> DegreeTable:
    """Closed-form indices for the field diagram at level N p^{mu+1} over N p^mu."""
    check_level(N, p)
    ue = unit_exponents(tower, N, p)
    if mu > 0:
        return _degree_table_higher(ue, p, mu)
    _require_section_six(tower, N, p)
    if N == 2:
        raise HypothesisError("N = 2 is excluded")
    i0, i0p = tower.split_indices(p)
    n0, Q = ue.n0, tower.Q
    full = (p + 1) ** 2 * (p - 1) ** 2
    if N != 1:
        hs = n0
        hs3 = n0
        t12 = Fraction(p + 1, n0)
        tall = 2 if n0 % 2 else 1
    else:
        hs = 2 * n0 * Q if n0 % 2 else n0 * Q
        hs3 = 2 * n0 if n0 % 2 else n0
        t12 = Fraction(2 * (p + 1), n0 * Q) if n0 % 2 else Fraction(4 * (p + 1), n0 * Q)
        tall = Fraction(4, Q)
    top, bottom = "K_(Np)", "K_(N)"
    nd = _nodes(i0, i0p)
    to_top = {top: 1, nd["12"]: _int(t12), nd["all"]: _int(tall), bottom: _int(Fraction(full, hs))}
    extra = {"K3_(Np)|K3_(N)": _int(Fraction((p + 1) * (p - 1), hs3))}
    admissible = n0 in (p + 1, (p + 1) // 2)
    case = f"mu=0,N{'=1' if N == 1 else '!=1'},n0={n0}"
    edges = []
    if admissible:
        if N != 1:
            to_top[nd["i03"]] = p + 1
            to_top[nd["i0p3"]] = p - 1
            step = 1 if n0 == p + 1 else 2
        else:
            to_top[nd["i03"]] = _int(Fraction(2 * (p + 1), Q))
            to_top[nd["i0p3"]] = _int(Fraction(2 * (p - 1), Q))
            step = 1
        to_top[nd["i0"]] = to_top[nd["i03"]] * step
        to_top[nd["i0p"]] = to_top[nd["i0p3"]] * step
        to_top[nd["0"]] = to_top[bottom] // (p - 1)
        to_top[nd["3"]] = to_top[nd["0"]] // step
        names = [top, nd["12"], nd["i03"], nd["i0p3"], nd["i0"], nd["i0p"], nd["3"], nd["0"], bottom]
        diagram = [(top, nd["12"]), (nd["12"], nd["i03"]), (nd["12"], nd["i0p3"]),
                   (nd["i03"], nd["i0"]), (nd["i0p3"], nd["i0p"]), (nd["i03"], nd["3"]),
                   (nd["i0p3"], nd["3"]), (nd["i0"], nd["0"]), (nd["i0p"], nd["0"]),
                   (nd["3"], nd["0"]), (nd["0"], bottom)]
        edges = [(a, b, to_top[b] // to_top[a]) for a, b in diagram if a in names and b in names]
        if N == 1:
            extra["K3_(p.inf)|K3_(p)"] = 4 if n0 % 2 else 2
            extra["K3_(p.inf)|K(K3)_(1)(gamma0)"] = 2 if n0 == (p + 1) // 2 else 1
    return DegreeTable(case, top, bottom, to_top, edges, extra)


def _degree_table_higher(ue: UnitExponents, p: int, mu: int) -> DegreeTable:
    low = mu < ue.mu0
    top, bottom = "K_(Np^{mu+1})", "K_(Np^mu)"
    to_top = {
        top: 1,
        "K~": 1,
        "K~^{1,2}": p if low else 1,
        "K~^{1}": p * p if low else p,
        "K~^{2}": p * p if low else p,
        "K~^{3}": p * p,
        bottom: p ** 4 if low else p ** 3,
    }
    diagram = [(top, "K~^{1,2}"), ("K~^{1,2}", "K~^{1}"), ("K~^{1,2}", "K~^{2}"),
               ("K~^{1}", bottom), ("K~^{2}", bottom), ("K~^{3}", bottom), (top, "K~^{3}")]
    if not low:
        diagram += [("K~^{1}", "K~^{3}"), ("K~^{2}", "K~^{3}")]
    edges = [(a, b, to_top[b] // to_top[a]) for a, b in diagram]
    extra = {"K3_(Np^{mu+1})|K3_(Np^mu)": p * p if low else p}
    return DegreeTable(f"mu={mu},{'mu<mu0' if low else 'mu>=mu0'}", top, bottom, to_top, edges, extra)


def _int(x) -> int:
    x = Fraction(x)
    if x.denominator != 1:
        raise ArithmeticError(f"index {x} is not an integer")
    return int(x)


# ---------------------------------------------------------------- enumeration oracle

def _closure(gens: list[ResidueElement]) -> set[tuple[int, int, int, int]]:
    if not gens:
        return set()
    one = gens[0].ring.one
    seen = {one.coords}
    frontier = [one]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x * g
                if y.coords not in seen:
                    seen.add(y.coords)
                    nxt.append(y)
        frontier = nxt
    return seen


def unit_image(tower: FieldTower, N: int, modulus: int, sub_mod: int) -> list[ResidueElement]:
    """Generators (mod ``modulus``) of {u in O_K^x : u = 1 mod sub_mod}."""
    R = ResidueRing(tower.d1, tower.d2, modulus)
    eta = tower.fundamental_unit_k()
    if sub_mod == 1:
        return [-R.one, R.from_ok(eta)]
    Rs = ResidueRing(tower.d1, tower.d2, sub_mod)
    e = Rs.from_ok(eta)
    acc, k = e, 1
    while acc != Rs.one and acc != -Rs.one:
        acc = acc * e
        k += 1
    sign = 1 if acc == Rs.one else -1
    g = R.from_ok(eta) ** k
    return [g if sign == 1 else -g]


def unit_image_k3(tower: FieldTower, N: int, modulus: int, sub_mod: int) -> list[tuple[int, int]]:
    delta = tower.delta
    if sub_mod == 1:
        return [(-1 % modulus, 0), (tower.eps0[0] % modulus, tower.eps0[1] % modulus)]
    k = 1
    while True:
        x, y = k3_pow(tower.eps0, k, delta, sub_mod)
        if y == 0 and x in (1, sub_mod - 1):
            break
        k += 1
    big = modulus * sub_mod
    x, y = k3_pow(tower.eps0, k, delta, big)
    if x % sub_mod != 1 % sub_mod:
        x, y = -x, -y
    return [(x % modulus, y % modulus)]


def _k3_closure(gens, delta, m) -> set[tuple[int, int]]:
    seen = {(1 % m, 0)}
    frontier = list(seen)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = (x[0] * g[0] + delta * x[1] * g[1]) % m, (x[0] * g[1] + x[1] * g[0]) % m
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def enumerate_degrees(tower: FieldTower, N: int, p: int, mu: int = 0) -> DegreeTable:
    """The same table as ``degree_table`` obtained by counting residues directly."""
    check_level(N, p)
    if mu > 0:
        return _enumerate_higher(tower, N, p, mu)
    i0, i0p = tower.split_indices(p)
    ue = unit_exponents(tower, N, p)
    d1, d2, delta = tower.d1, tower.d2, tower.delta
    a, b, c, d = _grid(p)
    X1, Y1 = norm_k1_arrays(a, b, c, d, d1, d2, p)
    X2, Y2 = norm_k2_arrays(a, b, c, d, d1, d2, p)
    X3, Y3 = norm_k3_arrays(a, b, c, d, d1, d2, p)
    NQ = (X3 * X3 - (delta % p) * Y3 * Y3) % p
    units = NQ != 0
    if N == 1:
        w1 = (Y1 == 0) & ((X1 == 1) | (X1 == p - 1))
        w2 = (Y2 == 0) & ((X2 == 1) | (X2 == p - 1))
        g3 = _k3_closure([(p - 1, 0), (ue.eps0_prime[0] % p, ue.eps0_prime[1] % p)], delta, p)
    else:
        w1 = (Y1 == 0) & (X1 == 1)
        w2 = (Y2 == 0) & (X2 == 1)
        g3 = _k3_closure([(ue.eps0_prime[0] % p, ue.eps0_prime[1] % p)], delta, p)
    table3 = np.zeros((p, p), dtype=bool)
    for x, y in g3:
        table3[x, y] = True
    w3 = table3[X3, Y3]
    w0 = NQ == 1
    wi = {1: w1, 2: w2}
    H = _closure(unit_image(tower, N, p, N))
    hs = len(H)
    # every kernel must contain the unit image
    for x in H:
        idx = ((x[0] * p + x[1]) * p + x[2]) * p + x[3]
        assert w1[idx] and w2[idx] and w3[idx]
    nd = _nodes(i0, i0p)
    counts = {
        "K_(Np)": hs,
        nd["12"]: int(np.count_nonzero(w1 & w2)),
        nd["all"]: int(np.count_nonzero(w1 & w2 & w3)),
        nd["i03"]: int(np.count_nonzero(wi[i0] & w3)),
        nd["i0p3"]: int(np.count_nonzero(wi[i0p] & w3)),
        nd["i0"]: int(np.count_nonzero(wi[i0])),
        nd["i0p"]: int(np.count_nonzero(wi[i0p])),
        nd["3"]: int(np.count_nonzero(w3)),
        nd["0"]: int(np.count_nonzero(w0)),
        "K_(N)": int(np.count_nonzero(units)),
    }
    to_top = {k: _int(Fraction(v, hs)) for k, v in counts.items()}
    H3 = _k3_closure(unit_image_k3(tower, N, p, N), delta, p)
    k3_units = p * p - 1
    extra = {"K3_(Np)|K3_(N)": _int(Fraction(k3_units, len(H3)))}
    if N == 1:
        extra.update(_infinity_degrees(tower, ue, p))
    return DegreeTable(f"mu=0,N{'=1' if N == 1 else '!=1'},n0={ue.n0}", "K_(Np)", "K_(N)", to_top, [], extra)


def _infinity_degrees(tower: FieldTower, ue: UnitExponents, p: int) -> dict[str, int]:
    """[(K3)_(p inf) : (K3)_(p)] from the sign pattern of the unit generating units = 1 mod p."""
    delta = tower.delta
    k = 1
    while True:
        x, y = k3_pow(tower.eps0, k, delta, p)
        if y == 0 and x in (1, p - 1):
            break
        k += 1
    sign = 1 if x == 1 else -1
    # eps0 and its conjugate 1/eps0 are both positive, so sign * eps0^k is totally of sign `sign`
    h_inf = 1 if sign == 1 else 2
    out = {"K3_(p.inf)|K3_(p)": 4 // h_inf}
    return out


def _enumerate_higher(tower: FieldTower, N: int, p: int, mu: int) -> DegreeTable:
    ue = unit_exponents(tower, N, p)
    d1, d2, delta = tower.d1, tower.d2, tower.delta
    M = N * p ** (mu + 1)
    step = N * p ** mu
    a, b, c, d = _grid(p)
    a = (1 + step * a) % M
    b, c, d = (step * b) % M, (step * c) % M, (step * d) % M
    X1, Y1 = norm_k1_arrays(a, b, c, d, d1, d2, M)
    X2, Y2 = norm_k2_arrays(a, b, c, d, d1, d2, M)
    X3, Y3 = norm_k3_arrays(a, b, c, d, d1, d2, M)
    w1 = (X1 == 1 % M) & (Y1 == 0)
    w2 = (X2 == 1 % M) & (Y2 == 0)
    if mu < ue.mu0:
        w3 = (X3 == 1 % M) & (Y3 == 0)
    else:
        gen = k3_pow(tower.eps0, ue.l0 * p ** (mu - ue.mu0), delta, M)
        allowed = _k3_closure([gen], delta, M)
        keys = set(x * M + y for x, y in allowed)
        w3 = np.isin(X3 * M + Y3, list(keys))
    # unit image: units = 1 mod N p^mu, read off in S_mu / S_{mu+1}
    gens = unit_image(tower, N, M, step)
    H = _closure(gens)
    hs = len(H)
    counts = {
        "K_(Np^{mu+1})": hs,
        "K~": int(np.count_nonzero(w1 & w2 & w3)),
        "K~^{1,2}": int(np.count_nonzero(w1 & w2)),
        "K~^{1}": int(np.count_nonzero(w1)),
        "K~^{2}": int(np.count_nonzero(w2)),
        "K~^{3}": int(np.count_nonzero(w3)),
        "K_(Np^mu)": p ** 4,
    }
    to_top = {k: _int(Fraction(v, hs)) for k, v in counts.items()}
    H3 = _k3_closure(unit_image_k3(tower, N, M, step), delta, M)
    extra = {"K3_(Np^{mu+1})|K3_(Np^mu)": _int(Fraction(p * p, len(H3)))}
    low = mu < ue.mu0
    return DegreeTable(f"mu={mu},{'mu<mu0' if low else 'mu>=mu0'}", "K_(Np^{mu+1})", "K_(Np^mu)",
                       to_top, [], extra)

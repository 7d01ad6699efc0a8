"""Quadratic fields, the biquadratic tower K = Q(sqrt(-d1), sqrt(-d2)) and exact O_K arithmetic.

Conventions
-----------
* An imaginary quadratic field Q(sqrt(-d)) is generated by theta with
  theta = (-1 + sqrt(-d))/2 when -d = 1 mod 4 and theta = sqrt(-d) otherwise.
  theta is a root of X^2 + B X + C; elements of the maximal order are s*theta + t.
* Elements of O_K are stored as (a + b sqrt(-d1) + c sqrt(-d2) + d sqrt(d1 d2)) / 2
  with a = b and c = d (mod 2).
* The "integer basis" is {1, s1, s2, s3} = {1, sqrt(-d1), sqrt(-d2), sqrt(d1 d2)};
  it spans an index-4 sublattice, so it describes O_K / n O_K for every odd n.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator

import mpmath
from mpmath import mp

from .numerics import DEFAULT_PREC


class HypothesisError(ValueError):
    """Input violates a standing hypothesis (squarefreeness, congruences, coprimality, ...)."""


def is_squarefree(n: int) -> bool:
    n = abs(n)
    if n == 0:
        return False
    k = 2
    while k * k <= n:
        if n % (k * k) == 0:
            return False
        k += 1
    return True


def prime_factors(n: int) -> list[int]:
    n = abs(n)
    out, k = [], 2
    while k * k <= n:
        if n % k == 0:
            out.append(k)
            while n % k == 0:
                n //= k
        k += 1
    if n > 1:
        out.append(n)
    return out


def is_prime(n: int) -> bool:
    return n >= 2 and prime_factors(n) == [n]


# ---------------------------------------------------------------- quadratic fields

@dataclass(frozen=True)
class QuadraticField:
    """Q(sqrt(d)) for a squarefree integer d != 0, 1.

    For d < 0 the generator is the theta described in the module docstring.
    For d > 0 the generator is sqrt(d) when d = 2, 3 mod 4 and (1 + sqrt(d))/2 otherwise;
    the fields used here all have d = 2, 3 mod 4.
    """
    d: int

    def __post_init__(self):
        if self.d in (0, 1) or not is_squarefree(self.d):
            raise HypothesisError(f"d = {self.d} is not a squarefree integer different from 0 and 1")

    @property
    def imaginary(self) -> bool:
        return self.d < 0

    @property
    def half_theta(self) -> bool:
        return self.d % 4 == 1

    @property
    def B(self) -> int:
        """theta satisfies theta^2 + B*theta + C = 0."""
        if self.half_theta:
            return 1 if self.imaginary else -1
        return 0

    @property
    def C(self) -> int:
        if self.half_theta:
            return (1 - self.d) // 4
        return -self.d

    @property
    def discriminant(self) -> int:
        return self.d if self.half_theta else 4 * self.d

    def norm(self, s: int, t: int) -> int:
        """N(s*theta + t)."""
        return t * t - self.B * s * t + self.C * s * s

    def mul(self, x: tuple[int, int], y: tuple[int, int]) -> tuple[int, int]:
        """Product of s1*theta + t1 and s2*theta + t2, as (s, t)."""
        s1, t1 = x
        s2, t2 = y
        return (s1 * t2 + s2 * t1 - self.B * s1 * s2, t1 * t2 - self.C * s1 * s2)

    def from_root(self, x: int, y: int) -> tuple[int, int]:
        """Write x + y*sqrt(d) as s*theta + t."""
        if self.half_theta:
            return (2 * y, x + y)
        return (y, x)

    def theta(self, prec: int = DEFAULT_PREC):
        with mp.workprec(prec + 16):
            r = mpmath.sqrt(mpmath.mpf(abs(self.d)))
            root = mpmath.mpc(0, r) if self.imaginary else mpmath.mpc(r)
            return (root - self.B) / 2 if self.half_theta else root

    def __str__(self) -> str:
        return f"Q(sqrt({self.d}))"


# ---------------------------------------------------------------- forms and class numbers

def reduced_forms(D: int) -> list[tuple[int, int, int]]:
    """Primitive reduced positive definite forms (a, b, c) with b^2 - 4ac = D < 0."""
    if D >= 0 or D % 4 not in (0, 1):
        raise HypothesisError(f"{D} is not a negative discriminant")
    out = []
    a = 1
    while 3 * a * a <= -D:
        for b in range(-a + 1, a + 1):
            if (b - D) % 2:
                continue
            num = b * b - D
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a:
                continue
            if b < 0 and a == c:
                continue
            if math.gcd(math.gcd(a, b), c) != 1:
                continue
            out.append((a, b, c))
        a += 1
    return out


def class_number_imaginary(d: int) -> int:
    """Class number of Q(sqrt(-d)) for squarefree d > 0."""
    if d <= 0 or not is_squarefree(d):
        raise HypothesisError(f"d = {d} must be a positive squarefree integer")
    return len(reduced_forms(QuadraticField(-d).discriminant))


# ---------------------------------------------------------------- fundamental units

def fundamental_unit(delta: int) -> tuple[int, int]:
    """Smallest x + y*sqrt(delta) > 1 with x^2 - delta*y^2 = +-1, via the continued fraction of sqrt(delta)."""
    if delta <= 1 or math.isqrt(delta) ** 2 == delta:
        raise HypothesisError(f"delta = {delta} must be a positive non-square")
    a0 = math.isqrt(delta)
    m, q, a = 0, 1, a0
    p_prev, p = 1, a0
    q_prev, qq = 0, 1
    while True:
        if p * p - delta * qq * qq in (1, -1):
            return (p, qq)
        m = q * a - m
        q = (delta - m * m) // q
        a = (a0 + m) // q
        p_prev, p = p, a * p + p_prev
        q_prev, qq = qq, a * qq + q_prev


def unit_norm(delta: int, unit: tuple[int, int]) -> int:
    x, y = unit
    return x * x - delta * y * y


# ---------------------------------------------------------------- elements of O_K

def mul_int(u: tuple[int, int, int, int], v: tuple[int, int, int, int], d1: int, d2: int) -> tuple[int, int, int, int]:
    """Product in the integer basis {1, s1, s2, s3}.

    s1^2 = -d1, s2^2 = -d2, s3^2 = d1 d2, s1 s2 = -s3, s1 s3 = d1 s2, s2 s3 = d2 s1.
    """
    a, b, c, d = u
    e, f, g, h = v
    return (
        a * e - d1 * b * f - d2 * c * g + d1 * d2 * d * h,
        a * f + b * e + d2 * (c * h + d * g),
        a * g + c * e + d1 * (b * h + d * f),
        a * h + d * e - (b * g + c * f),
    )


def conjugate_int(u: tuple[int, int, int, int], i: int) -> tuple[int, int, int, int]:
    """Apply the non-trivial automorphism fixing K_i (i = 1, 2, 3)."""
    a, b, c, d = u
    if i == 1:
        return (a, b, -c, -d)
    if i == 2:
        return (a, -b, c, -d)
    if i == 3:
        return (a, -b, -c, d)
    raise ValueError(f"subfield index must be 1, 2 or 3, got {i}")


@dataclass(frozen=True)
class OkElement:
    """(a + b s1 + c s2 + d s3) / 2 in O_K."""
    a: int
    b: int
    c: int
    d: int
    d1: int
    d2: int

    def __post_init__(self):
        if (self.a - self.b) % 2 or (self.c - self.d) % 2:
            raise HypothesisError(f"{self.doubled} / 2 is not in O_K")

    @classmethod
    def from_int(cls, u, d1: int, d2: int) -> "OkElement":
        a, b, c, d = u
        return cls(2 * a, 2 * b, 2 * c, 2 * d, d1, d2)

    @property
    def doubled(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def __mul__(self, other: "OkElement") -> "OkElement":
        w = mul_int(self.doubled, other.doubled, self.d1, self.d2)
        if any(x % 2 for x in w):
            raise ArithmeticError("product left O_K; inconsistent inputs")
        return OkElement(*(x // 2 for x in w), self.d1, self.d2)

    def __pow__(self, k: int) -> "OkElement":
        acc = OkElement(2, 0, 0, 0, self.d1, self.d2)
        base = self
        while k:
            if k & 1:
                acc = acc * base
            base = base * base
            k >>= 1
        return acc

    def conjugate(self, i: int) -> "OkElement":
        return OkElement(*conjugate_int(self.doubled, i), self.d1, self.d2)

    def complex_value(self, prec: int = DEFAULT_PREC):
        with mp.workprec(prec + 16):
            s1 = mpmath.mpc(0, mpmath.sqrt(self.d1))
            s2 = mpmath.mpc(0, mpmath.sqrt(self.d2))
            s3 = mpmath.sqrt(self.d1 * self.d2)
            return (self.a + self.b * s1 + self.c * s2 + self.d * s3) / 2


def norm_to_subfield(w: OkElement, i: int) -> tuple[int, int]:
    """N_{K/K_i}(w).

    For i = 1, 2 the result is (s, t) with N = s*theta_i + t.
    For i = 3 it is (x, y) with N = x + y*sqrt(d1 d2).
    """
    u = w.doubled
    X, Y = _norm_root_coords(u, i, w.d1, w.d2)
    # u = 2w, so the product above is 4 N(w)
    if i == 3:
        if X % 4 or Y % 4:
            raise ArithmeticError("norm is not integral")
        return (X // 4, Y // 4)
    field_ = QuadraticField(-w.d1 if i == 1 else -w.d2)
    if field_.half_theta:
        # X/4 + (Y/4)(2 theta + 1)
        s, t = Y, X + Y
        if s % 2 or t % 4:
            raise ArithmeticError("norm is not integral")
        return (s // 2, t // 4)
    if X % 4 or Y % 4:
        raise ArithmeticError("norm is not integral")
    return (Y // 4, X // 4)


def _norm_root_coords(u, i: int, d1: int, d2: int) -> tuple[int, int]:
    """u * sigma_i(u) = X + Y * (generator of K_i), using s1, s2 or s3."""
    prod = mul_int(u, conjugate_int(u, i), d1, d2)
    idx = {1: 1, 2: 2, 3: 3}[i]
    rest = [prod[k] for k in range(1, 4) if k != idx]
    if any(rest):
        raise ArithmeticError("relative norm left the subfield")
    return prod[0], prod[idx]


def norm_to_q(w: OkElement) -> int:
    x, y = norm_to_subfield(w, 3)
    return x * x - w.d1 * w.d2 * y * y


# ---------------------------------------------------------------- the tower

# Q(K) for the tabulated towers, keyed by (d1, d2).
_Q_TWO = {(n, 2) for n in (7, 11, 19, 43, 67, 163)}
_Q_ONE = (
    {(n, 2) for n in (15, 35, 91, 115, 403)}
    | {(7, n) for n in (5, 10, 13)}
    | {(11, n) for n in (6, 13, 58)}
    | {(19, n) for n in (6, 13, 37, 58)}
    | {(43, n) for n in (5, 6, 10, 22, 37, 58)}
    | {(67, n) for n in (5, 6, 10, 13, 22)}
    | {(163, n) for n in (5, 6, 10, 13, 22, 37, 58)}
)
_H3_KNOWN = {14: 1, 62: 1}


def tabulated_unit_index(d1: int, d2: int) -> int | None:
    if (d1, d2) in _Q_TWO:
        return 2
    if (d1, d2) in _Q_ONE:
        return 1
    return None


def half_unit(d1: int, d2: int, eps0: tuple[int, int]) -> OkElement | None:
    """A unit eta = b sqrt(-d1) + c sqrt(-d2) with eta^2 = -eps0, if one exists.

    Units of K whose square is real lie in K3 or in sqrt(-d1) K3, and the latter have
    the shape above, so this decides whether [O_K^x : O_K1^x O_K2^x O_K3^x] is 2.
    """
    x, y = eps0
    if y % 2:
        return None
    for b in range(1, math.isqrt(x // d1) + 1):
        rem = x - d1 * b * b
        if rem % d2:
            continue
        c2 = rem // d2
        c = math.isqrt(c2)
        if c * c != c2 or c == 0:
            continue
        for sb, sc in ((b, c), (b, -c)):
            if 2 * sb * sc == y:
                return OkElement(0, 2 * sb, 2 * sc, 0, d1, d2)
    return None


@dataclass(frozen=True)
class FieldTower:
    d1: int
    d2: int
    h1: int
    h2: int
    h3: int | None
    Q: int
    eps0: tuple[int, int]
    K1: QuadraticField = field(repr=False)
    K2: QuadraticField = field(repr=False)
    K3: QuadraticField = field(repr=False)

    @property
    def delta(self) -> int:
        return self.d1 * self.d2

    def subfield(self, i: int) -> QuadraticField:
        return {1: self.K1, 2: self.K2, 3: self.K3}[i]

    def d(self, i: int) -> int:
        return {1: self.d1, 2: self.d2}[i]

    @property
    def class_number(self) -> int | None:
        """h_K = Q h1 h2 h3 / 2."""
        if self.h3 is None:
            return None
        return self.Q * self.h1 * self.h2 * self.h3 // 2

    def eps0_element(self) -> OkElement:
        x, y = self.eps0
        return OkElement(2 * x, 0, 0, 2 * y, self.d1, self.d2)

    def fundamental_unit_k(self) -> OkElement:
        """Generator of O_K^x modulo +-1."""
        if self.Q == 2:
            eta = half_unit(self.d1, self.d2, self.eps0)
            assert eta is not None
            return eta
        return self.eps0_element()

    def split_indices(self, p: int) -> tuple[int, int]:
        """(i0, i0') with (-d_i0 / p) = 1 and (-d_i0' / p) = -1."""
        l1 = legendre(-self.d1, p)
        l2 = legendre(-self.d2, p)
        if l1 == 1 and l2 == -1:
            return 1, 2
        if l1 == -1 and l2 == 1:
            return 2, 1
        raise HypothesisError(f"p = {p} does not split in exactly one of K1, K2")

    def describe(self) -> dict:
        return {"d1": self.d1, "d2": self.d2, "h1": self.h1, "h2": self.h2, "h3": self.h3,
                "Q": self.Q, "eps0": list(self.eps0)}


def make_tower(d1: int, d2: int, h3: int | None = None, Q: int | None = None) -> FieldTower:
    """Build K = Q(sqrt(-d1), sqrt(-d2)) under the standing hypotheses.

    -d1 = 1 mod 4, -d2 = 2, 3 mod 4, gcd(d1, d2) = 1, neither K1 nor K2 is Q(i) or Q(sqrt(-3)).
    Q and h3 fall back to tabulated values when omitted; a supplied Q is checked
    against the unit group.
    """
    for name, v in (("d1", d1), ("d2", d2)):
        if not isinstance(v, int) or v <= 0 or not is_squarefree(v):
            raise HypothesisError(f"{name} = {v} must be a positive squarefree integer")
    if (-d1) % 4 != 1:
        raise HypothesisError(f"-d1 = {-d1} is not 1 mod 4")
    if (-d2) % 4 not in (2, 3):
        raise HypothesisError(f"-d2 = {-d2} is not 2 or 3 mod 4")
    if math.gcd(d1, d2) != 1:
        raise HypothesisError(f"gcd(d1, d2) = {math.gcd(d1, d2)} != 1")
    if d1 == 3 or d2 == 1:
        raise HypothesisError("K1 and K2 must differ from Q(sqrt(-3)) and Q(i)")
    delta = d1 * d2
    eps0 = fundamental_unit(delta)
    if unit_norm(delta, eps0) != 1:
        raise HypothesisError(f"fundamental unit of Q(sqrt({delta})) has norm -1")
    eta = half_unit(d1, d2, eps0)
    actual_q = 2 if eta is not None else 1
    if Q is None:
        Q = tabulated_unit_index(d1, d2) or actual_q
    if Q not in (1, 2):
        raise HypothesisError(f"Q must be 1 or 2, got {Q}")
    if Q != actual_q:
        raise HypothesisError(f"Q = {Q} is inconsistent with the unit group (expected {actual_q})")
    if h3 is None:
        h3 = _H3_KNOWN.get(delta)
    return FieldTower(d1, d2, class_number_imaginary(d1), class_number_imaginary(d2), h3, Q, eps0,
                      QuadraticField(-d1), QuadraticField(-d2), QuadraticField(delta))


def biquad_class_number(tower: FieldTower) -> int:
    if tower.h3 is None:
        raise HypothesisError("h3 is required for the class number of K")
    return tower.class_number


# ---------------------------------------------------------------- small modular helpers

def legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def sqrt_mod(a: int, p: int) -> int:
    """Smallest x in [0, p) with x^2 = a mod p."""
    a %= p
    for x in range(p):
        if x * x % p == a:
            return x
    raise HypothesisError(f"{a} is not a square mod {p}")


def primitive_root(p: int) -> int:
    """Smallest generator of (Z/p)^x."""
    if not is_prime(p) or p == 2:
        raise HypothesisError(f"{p} is not an odd prime")
    qs = prime_factors(p - 1)
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in qs):
            return g
    raise AssertionError("unreachable")


def iter_primes(lo: int, hi: int) -> Iterator[int]:
    for n in range(max(lo, 2), hi + 1):
        if is_prime(n):
            yield n


# ---------------------------------------------------------------- unit exponents

def k3_mul(u: tuple[int, int], v: tuple[int, int], delta: int, m: int | None = None) -> tuple[int, int]:
    x = u[0] * v[0] + delta * u[1] * v[1]
    y = u[0] * v[1] + u[1] * v[0]
    if m is not None:
        return (x % m, y % m)
    return (x, y)


def k3_pow(u: tuple[int, int], k: int, delta: int, m: int | None = None) -> tuple[int, int]:
    acc, base = (1, 0), (u[0] % m, u[1] % m) if m else u
    while k:
        if k & 1:
            acc = k3_mul(acc, base, delta, m)
        base = k3_mul(base, base, delta, m)
        k >>= 1
    return acc


def _congruent_one(u: tuple[int, int], m: int, sign: int = 1) -> bool:
    return (u[0] - sign) % m == 0 and u[1] % m == 0


@dataclass(frozen=True)
class UnitExponents:
    """Orders of eps0 and its twist modulo N and Np.

    m0: least m with eps0^m = +-1 mod N; eps0' = sign * eps0^m0 (eps0' = eps0 when N = 1).
    n0: least n with eps0'^n = 1 mod Np.
    l0: least l with eps0^l = 1 mod Np, and mu0 the largest mu with eps0^l0 = 1 mod N p^mu.
    eps0^l0 = 1 + N p^mu0 (alpha0 + beta0 sqrt(d1 d2)).
    """
    N: int
    p: int
    m0: int
    sign: int
    eps0_prime: tuple[int, int]
    n0: int
    l0: int
    mu0: int
    alpha0: int
    beta0: int


def check_level(N: int, p: int) -> None:
    if not is_prime(p) or p == 2:
        raise HypothesisError(f"p = {p} is not an odd prime")
    if N < 1:
        raise HypothesisError(f"N = {N} must be positive")
    if N % p == 0:
        raise HypothesisError(f"p = {p} divides N = {N}")
    if N % 2 == 0:
        raise HypothesisError(f"N = {N} must be odd")


def _least_power(u, delta, m, accept, bound) -> int:
    acc = (1, 0)
    for k in range(1, bound + 1):
        acc = k3_mul(acc, u, delta, m)
        if accept(acc):
            return k
    raise ArithmeticError(f"no power up to {bound} satisfies the congruence")


def unit_exponents(tower: FieldTower, N: int, p: int) -> UnitExponents:
    check_level(N, p)
    delta = tower.delta
    eps = tower.eps0
    Np = N * p
    # the orders below divide |(O_K3 / n)^x| < n^2
    if N == 1:
        m0, sign = 1, 1
    else:
        m0 = _least_power(eps, delta, N,
                          lambda u: _congruent_one(u, N) or _congruent_one(u, N, -1), N * N)
        sign = 1 if _congruent_one(k3_pow(eps, m0, delta, N), N) else -1
    e_prime = k3_pow(eps, m0, delta)
    e_prime = (sign * e_prime[0], sign * e_prime[1])
    n0 = _least_power(e_prime, delta, Np, lambda u: _congruent_one(u, Np), Np * Np)
    l0 = _least_power(eps, delta, Np, lambda u: _congruent_one(u, Np), Np * Np)
    x, y = k3_pow(eps, l0, delta)
    mu0 = 1
    while _congruent_one((x, y), N * p ** (mu0 + 1)):
        mu0 += 1
    scale = N * p ** mu0
    return UnitExponents(N, p, m0, sign, e_prime, n0, l0, mu0, (x - 1) // scale, y // scale)

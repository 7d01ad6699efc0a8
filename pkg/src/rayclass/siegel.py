"""Siegel functions at CM points and the index algebra acting on them.

For r = (r1, r2) = (a1/M, a2/M) and tau in the upper half plane,

    g_r(tau) = -q^{B2(r1)/2} e^{pi i r2 (r1 - 1)} (1 - q_z) prod_{m >= 1} (1 - q^m q_z)(1 - q^m / q_z)

with q = e(tau), q_z = e(r1 tau + r2) and B2(x) = x^2 - x + 1/6. Only the power g^{12M} is used.
Its prefactor is e(tau * 6 M B2(r1)) * e(6 a2 (a1 - M) / M), with both rational exponents kept exact.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Iterable, Sequence

import mpmath
from mpmath import mp

from .fields import HypothesisError, QuadraticField
from .numerics import (
    DEFAULT_PREC, ERROR_SLACK, check_prec, e_of, ensure_finite, one_minus_e, pow_int, relative_imag,
)

Matrix = tuple[tuple[int, int], tuple[int, int]]

# eval_g12 promises relative error below 2**(G12_SLACK - prec)
G12_SLACK = 4


@total_ordering
@dataclass(frozen=True)
class SiegelIndex:
    """r = (a1/M, a2/M) with the level M kept explicit."""
    a1: int
    a2: int
    M: int

    def __post_init__(self):
        if self.M < 2:
            raise HypothesisError(f"level M = {self.M} must be at least 2")
        if self.a1 % self.M == 0 and self.a2 % self.M == 0:
            raise HypothesisError(f"index ({self.a1}/{self.M}, {self.a2}/{self.M}) is integral")

    @classmethod
    def from_fractions(cls, r1, r2, M: int | None = None) -> "SiegelIndex":
        r1, r2 = Fraction(r1), Fraction(r2)
        lcm = r1.denominator * r2.denominator // math.gcd(r1.denominator, r2.denominator)
        M = M or lcm
        if M % lcm:
            raise ValueError(f"level {M} is not a multiple of the denominators of ({r1}, {r2})")
        return cls(int(r1 * M), int(r2 * M), M)

    @property
    def r(self) -> tuple[Fraction, Fraction]:
        return Fraction(self.a1, self.M), Fraction(self.a2, self.M)

    def _key(self):
        return (self.M, self.a1, self.a2)

    def __lt__(self, other: "SiegelIndex") -> bool:
        return self._key() < other._key()

    def __str__(self) -> str:
        r1, r2 = self.r
        return f"({r1}, {r2})"


def normalize(index: SiegelIndex) -> SiegelIndex:
    """Reduce mod 1 and pick the smaller of v and -v, since g^{12M} only sees r up to sign."""
    M = index.M
    v = (index.a1 % M, index.a2 % M)
    w = ((-v[0]) % M, (-v[1]) % M)
    return SiegelIndex(*min(v, w), M)


def _mat_mod(alpha: Matrix, M: int) -> Matrix:
    (a, b), (c, d) = alpha
    det = a * d - b * c
    if math.gcd(det, M) != 1:
        raise HypothesisError(f"matrix {alpha} is singular mod {M}")
    return ((a % M, b % M), (c % M, d % M))


def act_matrix(index: SiegelIndex, alpha: Matrix) -> SiegelIndex:
    """Right action r -> r * alpha on row vectors, normalized."""
    (a, b), (c, d) = _mat_mod(alpha, index.M)
    x, y = index.a1, index.a2
    return normalize(SiegelIndex(x * a + y * c, x * b + y * d, index.M))


def artin_matrix(omega: tuple[int, int], field: QuadraticField) -> Matrix:
    """Matrix of multiplication by s*theta + t, as it acts on Siegel indices."""
    s, t = omega
    return ((t - field.B * s, -field.C * s), (s, t))


def act_artin(index: SiegelIndex, omega: tuple[int, int], field: QuadraticField) -> SiegelIndex:
    return act_matrix(index, artin_matrix(omega, field))


def conjugate_index(index: SiegelIndex, field: QuadraticField) -> SiegelIndex:
    """Index whose value at theta is the complex conjugate of the input's value."""
    if field.half_theta:
        return normalize(SiegelIndex(index.a1, index.a1 - index.a2, index.M))
    return normalize(SiegelIndex(index.a1, -index.a2, index.M))


@dataclass(frozen=True)
class CmPoint:
    """theta_i of an imaginary quadratic subfield Q(sqrt(-d))."""
    label: int
    field: QuadraticField

    def __post_init__(self):
        if not self.field.imaginary:
            raise HypothesisError("CM points need an imaginary quadratic field")

    @classmethod
    def of(cls, d: int, label: int = 0) -> "CmPoint":
        return cls(label, QuadraticField(-d))

    def theta(self, prec: int = DEFAULT_PREC):
        return self.field.theta(prec)

    def log2_abs_q(self) -> float:
        """log2 |e(theta)|, strictly negative."""
        im = math.sqrt(-self.field.d) / (2 if self.field.half_theta else 1)
        return -2 * math.pi * im / math.log(2)


def truncation_length(cm: CmPoint, bits: int) -> int:
    """Number of product terms whose omitted tail is below 2**-bits."""
    return math.ceil((bits + 2) / -cm.log2_abs_q()) + 1


def _prefactor_exponent(index: SiegelIndex) -> Fraction:
    """6 M B2(r1), the coefficient of tau in the exponent of the 12M-th power prefactor."""
    a1, M = index.a1, index.M
    return Fraction(6 * a1 * a1 - 6 * a1 * M + M * M, M)


def eval_g12(index: SiegelIndex, cm: CmPoint, n: int = 1, prec: int = DEFAULT_PREC):
    """g_r(theta)^{12 M n} with relative error below 2**(G12_SLACK - prec)."""
    check_prec(prec)
    if n < 1:
        raise ValueError("exponent multiple n must be positive")
    index = normalize(index)
    M = index.M
    k = 12 * M * n
    coef = _prefactor_exponent(index) * n
    # |2 pi i theta coef| sets how much relative accuracy the exponential loses
    im = math.sqrt(-cm.field.d)
    big = int(abs(coef) * 2 * math.pi * (im + 1)) + 1
    T = truncation_length(cm, prec + k.bit_length() + 16)
    guard = k.bit_length() + T.bit_length() + big.bit_length() + ERROR_SLACK + 16
    wp = prec + guard
    with mp.workprec(wp):
        theta = cm.theta(wp)
        r1, r2 = index.r
        q = mpmath.expjpi(2 * theta)
        if index.a1 == 0:
            qz = e_of(r2, wp)
            first = one_minus_e(r2, wp)
        else:
            z = theta * (mpmath.mpf(index.a1) / M) + mpmath.mpf(index.a2) / M
            qz = mpmath.expjpi(2 * z)
            first = -mpmath.expm1(2j * mpmath.pi * z)
        qz_inv = 1 / qz
        prod = first
        qm = mpmath.mpc(1)
        for _ in range(T):
            qm *= q
            prod *= (1 - qm * qz) * (1 - qm * qz_inv)
        body = pow_int(prod, k, wp)
        root_of_unity = e_of(Fraction(6 * index.a2 * (index.a1 - M), M) * n, wp)
        pre = mpmath.expjpi(2 * theta * (mpmath.mpf(coef.numerator) / coef.denominator))
        out = pre * root_of_unity * body
    return ensure_finite(out)


def orbit(seed: SiegelIndex, matrices: Sequence[Matrix]) -> list[SiegelIndex]:
    """Closure of the normalized seed under the given matrices, sorted."""
    start = normalize(seed)
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for v in frontier:
            for a in matrices:
                w = act_matrix(v, a)
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    return sorted(seen)


@dataclass(frozen=True)
class OrbitProduct:
    value: object             # mpc
    orbit: tuple[SiegelIndex, ...]
    prec: int
    rel_err_exp2: int         # value carries relative error below 2**rel_err_exp2
    imag_residual: object     # |Im| / |value|


def _eval_task(args):
    index, cm, n, prec = args
    return eval_g12(index, cm, n, prec)


def evaluate_many(indices: Iterable[SiegelIndex], cm: CmPoint, n: int, prec: int,
                  workers: int | None = None) -> list:
    indices = list(indices)
    tasks = [(v, cm, n, prec) for v in indices]
    if workers and workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_eval_task, tasks))
    return [_eval_task(t) for t in tasks]


def orbit_product(seed: SiegelIndex, matrices: Sequence[Matrix], cm: CmPoint, n: int = 1,
                  prec: int = DEFAULT_PREC, workers: int | None = None) -> OrbitProduct:
    """Product of g^{12Mn} over the orbit of the seed, multiplied in sorted index order."""
    idx = orbit(seed, matrices)
    vals = evaluate_many(idx, cm, n, prec, workers)
    guard = len(idx).bit_length() + 4
    with mp.workprec(prec + guard):
        acc = mpmath.mpc(1)
        for v in vals:
            acc *= v
    err = G12_SLACK + len(idx).bit_length() + 1 - prec
    return OrbitProduct(acc, tuple(idx), prec, err, relative_imag(acc))

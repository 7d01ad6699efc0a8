"""Arbitrary-precision scalars and the small set of transcendental kernels used downstream.

Values are plain mpmath ``mpf``/``mpc`` objects. mpmath keeps exponents as Python
integers, so magnitudes such as 1e-300000 are representable without rescaling.
Precision is always an explicit argument; the global mpmath context is only touched
through ``mpmath.workprec`` blocks that restore it on exit.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

import mpmath
from mpmath import mp

BigReal = mpmath.mpf
BigComplex = mpmath.mpc
Number = Union[int, float, complex, Fraction, BigReal, BigComplex]

DEFAULT_PREC = 512
MIN_PREC = 64
MAX_PREC = 8192

# rel. error of e_of and pow_int is at most 2**(ERROR_SLACK - prec)
ERROR_SLACK = 8

LOG10_2 = math.log10(2)


class PrecisionExhausted(ArithmeticError):
    """A certified result could not be reached within the precision budget."""


class NonFiniteResult(ArithmeticError):
    """An evaluation produced inf or nan."""


def check_prec(prec: int) -> int:
    if not isinstance(prec, int) or prec < MIN_PREC:
        raise ValueError(f"precision must be an integer >= {MIN_PREC} bits, got {prec!r}")
    return prec


def to_mp(z: Number):
    """Convert to an mpmath number at the current working precision.

    Fractions are divided at working precision, so 1/3 carries a rounding error of
    one ulp while dyadic fractions stay exact.
    """
    if isinstance(z, Fraction):
        return mpmath.mpf(z.numerator) / z.denominator
    if isinstance(z, (mpmath.mpf, mpmath.mpc)):
        return +z
    if isinstance(z, complex):
        return mpmath.mpc(z)
    return mpmath.mpf(z)


def ensure_finite(z):
    if isinstance(z, mpmath.mpc):
        ok = mpmath.isfinite(z.real) and mpmath.isfinite(z.imag)
    else:
        ok = mpmath.isfinite(z)
    if not ok:
        raise NonFiniteResult(f"non-finite value {z!r}")
    return z


def e_of(z: Number, prec: int = DEFAULT_PREC):
    """Return exp(2*pi*i*z).

    Rational arguments are reduced modulo 1 exactly before rounding, so
    ``e_of(Fraction(1, 2))`` is exactly -1.
    """
    check_prec(prec)
    if isinstance(z, int):
        return mpmath.mpc(1)
    with mp.workprec(prec + ERROR_SLACK):
        if isinstance(z, Fraction):
            z = z - math.floor(z)
        w = to_mp(z)
        out = mpmath.mpc(mpmath.expjpi(2 * w))
    return ensure_finite(out)


def one_minus_e(z: Number, prec: int = DEFAULT_PREC):
    """Return 1 - exp(2*pi*i*z) without cancellation near z = 0."""
    check_prec(prec)
    with mp.workprec(prec + ERROR_SLACK):
        if isinstance(z, Fraction):
            z = z - math.floor(z)
        w = to_mp(z)
        out = mpmath.mpc(-mpmath.expm1(2j * mpmath.pi * w))
    return ensure_finite(out)


def pow_int(z: Number, k: int, prec: int = DEFAULT_PREC):
    """Square-and-multiply power z**k for an integer k >= 0.

    Works with ``bit_length(k) + 8`` guard bits so the result carries
    relative error below 2**(8 - prec).
    """
    check_prec(prec)
    if k < 0:
        raise ValueError("pow_int expects a non-negative exponent")
    with mp.workprec(prec + k.bit_length() + ERROR_SLACK):
        base = to_mp(z)
        acc = mpmath.mpf(1)
        while k:
            if k & 1:
                acc = acc * base
            k >>= 1
            if k:
                base = base * base
    return ensure_finite(acc)


def digits_for(rel_err_exp2: int) -> int:
    """Number of significant decimal digits justified by a 2**rel_err_exp2 bound."""
    return max(1, int(math.floor(-rel_err_exp2 * LOG10_2)) - 1)


def format_real(x, rel_err_exp2: int, digits: int | None = None) -> dict:
    """Serialize a real value as a decimal string plus its error exponent."""
    if digits is None:
        digits = min(digits_for(rel_err_exp2), 60)
    return {"value": mpmath.nstr(x, digits, min_fixed=-4, max_fixed=16),
            "rel_err_exp2": int(rel_err_exp2)}


def relative_imag(z) -> "mpmath.mpf":
    """|Im z| / |z|, the realness residual used by the certification checks."""
    z = mpmath.mpc(z)
    if z == 0:
        return mpmath.mpf(0)
    return abs(z.imag) / abs(z)


def precision_ladder(start: int = DEFAULT_PREC, stop: int = MAX_PREC):
    """Yield start, 2*start, ... up to and including stop."""
    check_prec(start)
    prec = start
    while prec <= stop:
        yield prec
        if prec == stop:
            break
        prec = min(2 * prec, stop)


def with_escalation(fn, start: int = DEFAULT_PREC, stop: int = MAX_PREC):
    """Call fn(prec) along the precision ladder until it stops raising PrecisionExhausted."""
    last = None
    for prec in precision_ladder(start, stop):
        try:
            return fn(prec)
        except PrecisionExhausted as exc:
            last = exc
    raise PrecisionExhausted(f"no certified result up to {stop} bits: {last}")

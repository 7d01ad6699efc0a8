"""Ray class invariants built from Siegel function orbit products.

The pipeline is: hypotheses and degree data from ``fields``/``residue``, Galois generators
turned into index matrices, orbit products evaluated by ``siegel``, then conjugates,
the integer minimal polynomial and the normal basis element.
"""
from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from importlib import resources

import gmpy2
import mpmath
from mpmath import mp

from . import __version__
from .fields import (
    FieldTower, HypothesisError, QuadraticField, check_level, legendre, make_tower, prime_factors,
    unit_exponents,
)
from .numerics import (
    DEFAULT_PREC, MAX_PREC, PrecisionExhausted, format_real, precision_ladder, relative_imag,
)
from .residue import default_subfield, degree_table, galois_generators
from .siegel import CmPoint, SiegelIndex, artin_matrix, eval_g12, orbit_product, G12_SLACK

SCHEMA_VERSION = "1.0"

# realness is certified when |Im| / |value| < 2**(REAL_SLACK - prec)
REAL_SLACK = 32


@dataclass(frozen=True)
class InvariantSpec:
    tower: FieldTower
    N: int
    p: int
    mu: int = 0
    I: int | None = None
    n: int = 1

    def __post_init__(self):
        check_level(self.N, self.p)
        if self.mu < 0 or self.n < 1:
            raise HypothesisError("mu must be >= 0 and n >= 1")
        if self.I is None:
            object.__setattr__(self, "I", default_subfield(self.tower, self.p))
        if self.I not in (1, 2):
            raise HypothesisError(f"I = {self.I} must be 1 or 2")

    @property
    def level(self) -> int:
        """N p^{mu+1}, the denominator of the seed index."""
        return self.N * self.p ** (self.mu + 1)

    @property
    def field(self) -> QuadraticField:
        return self.tower.subfield(self.I)

    @property
    def cm(self) -> CmPoint:
        return CmPoint(self.I, self.field)

    @property
    def seed(self) -> SiegelIndex:
        return SiegelIndex(0, 1, self.level)

    def describe(self) -> dict:
        return {"tower": self.tower.describe(), "N": self.N, "p": self.p, "mu": self.mu,
                "I": self.I, "n": self.n}


# ---------------------------------------------------------------- hypotheses

@dataclass(frozen=True)
class Assumption:
    name: str
    holds: bool
    detail: str


@dataclass(frozen=True)
class GenerationWitness:
    """Prime-power data for the generation criterion at level N p^{mu+1} in K_I."""
    primes: tuple[int, ...]
    eps_hat: tuple[int, ...]
    eps: tuple[int, ...]
    nu: tuple[int | None, ...]
    no_split: bool

    @property
    def holds(self) -> bool:
        return self.no_split and all(v is not None for v in self.nu)


def _ord(n: int, ell: int) -> int:
    k = 0
    while n and n % ell == 0:
        n //= ell
        k += 1
    return k


def generation_witness(d: int, N: int, p: int, mu: int = 0) -> GenerationWitness:
    """Search the odd primes nu_i of the generation criterion for the field Q(sqrt(-d))."""
    level = N * p ** (mu + 1)
    primes = tuple(prime_factors(level))
    exps = [_ord(level, q) for q in primes]
    symbols = [legendre(-d, q) for q in primes]
    no_split = all(s != 1 for s in symbols)
    hats = []
    for q, e, s in zip(primes, exps, symbols):
        hats.append(q ** (2 * e - 2) * (q * q - 1) if s == -1 else q ** (2 * e - 1) * (q - 1))
    eps = [math.prod(h for j, h in enumerate(hats) if j != i) for i in range(len(hats))]
    bound = (p + 1) // 2 if mu == 0 else p
    nus = []
    for h, e in zip(hats, eps):
        found = None
        for ell in prime_factors(h):
            if ell > 2 and e % ell and _ord(h, ell) > _ord(bound, ell):
                found = ell
                break
        nus.append(found)
    return GenerationWitness(primes, tuple(hats), tuple(eps), tuple(nus), no_split)


def check_assumptions(spec: InvariantSpec) -> list[Assumption]:
    t, N, p, mu = spec.tower, spec.N, spec.p, spec.mu
    ue = unit_exponents(t, N, p)
    out = [Assumption("K1, K2 not Q(i), Q(sqrt(-3))", t.d1 not in (1, 3) and t.d2 not in (1, 3),
                      f"d1 = {t.d1}, d2 = {t.d2}")]
    if mu == 0:
        out.append(Assumption("p = 1 mod 4", p % 4 == 1, f"p = {p}"))
        out.append(Assumption("(d1 d2 / p) = -1", legendre(t.delta, p) == -1, f"d1 d2 = {t.delta}"))
        out.append(Assumption("N != 2", N != 2, f"N = {N}"))
        ok = ue.n0 == p + 1 or (N == 1 and ue.n0 == (p + 1) // 2)
        out.append(Assumption("n0 = p+1, or N = 1 and n0 = (p+1)/2", ok, f"n0 = {ue.n0}"))
    else:
        out.append(Assumption("mu >= mu0", mu >= ue.mu0, f"mu = {mu}, mu0 = {ue.mu0}"))
    if legendre(-t.d(spec.I), p) == 1:
        out.append(Assumption("(-d_I / p) != 1", False, f"p splits in K_{spec.I}"))
    if N == 1 and mu == 0:
        odd = [q for q in prime_factors(p - 1) if q > 2]
        out.append(Assumption("generation criterion (odd prime dividing p-1)", bool(odd),
                              f"odd primes of p-1: {odd}" if odd else
                              "p-1 is a power of 2; generation is certified numerically by distinct conjugates"))
    else:
        w = generation_witness(t.d(spec.I), N, p, mu)
        out.append(Assumption("no prime of the level splits in K_I", w.no_split, f"primes {list(w.primes)}"))
        out.append(Assumption("generation criterion (odd primes nu_i)", w.holds,
                              f"eps_hat = {list(w.eps_hat)}, nu = {list(w.nu)}"))
    return out


def require(spec: InvariantSpec, names: tuple[str, ...] | None = None) -> None:
    """Raise HypothesisError naming the first failing structural assumption."""
    for a in check_assumptions(spec):
        if a.name.startswith("generation criterion") or a.name.startswith("no prime"):
            continue
        if names is None or a.name in names:
            if not a.holds:
                raise HypothesisError(f"assumption failed: {a.name} ({a.detail})")


# ---------------------------------------------------------------- values

@dataclass(frozen=True)
class CertifiedValue:
    value: object               # real mpf
    rel_err_exp2: int
    imag_residual: object
    prec: int
    orbit: tuple[SiegelIndex, ...] = ()

    def to_json(self, digits: int | None = None) -> dict:
        return format_real(self.value, self.rel_err_exp2, digits)


def _certify_real(z, prec: int):
    res = relative_imag(z)
    if res >= mpmath.ldexp(1, REAL_SLACK - prec):
        raise PrecisionExhausted(f"imaginary residual {mpmath.nstr(res, 3)} too large at {prec} bits")
    return res


def gamma(spec: InvariantSpec, prec: int = DEFAULT_PREC) -> CertifiedValue:
    """g_{(0, 1/M)}(theta_I)^{12 M n} with M = N p^{mu+1}; real by the conjugation rule."""
    z = eval_g12(spec.seed, spec.cm, spec.n, prec)
    res = _certify_real(z, prec)
    return CertifiedValue(z.real, G12_SLACK + 1 - prec, res, prec, (spec.seed,))


def galois_matrices(spec: InvariantSpec):
    """Index matrices of the generators of Gal(K~^I / K~^3), and of Omega_C when mu = 0."""
    g = galois_generators(spec.tower, spec.N, spec.p, spec.mu, spec.I)
    rel = [artin_matrix(a.omega.norm_to(spec.I), spec.field) for a in g.relative]
    cyc = artin_matrix(g.cyclic.omega.norm_to(spec.I), spec.field) if g.cyclic else None
    return g, rel, cyc


def _orbit_value(spec, seed, mats, prec, workers) -> CertifiedValue:
    r = orbit_product(seed, mats, spec.cm, spec.n, prec, workers)
    res = _certify_real(r.value, prec)
    return CertifiedValue(r.value.real, r.rel_err_exp2, res, prec, r.orbit)


def norm_generator(spec: InvariantSpec, prec: int = DEFAULT_PREC, max_prec: int = MAX_PREC,
                   workers: int | None = None) -> CertifiedValue:
    """The relative norm of gamma from K~^I down to K~^3, as a certified real number."""
    require(spec)
    _, mats, _ = galois_matrices(spec)
    last = None
    for wp in precision_ladder(prec, max_prec):
        try:
            return _orbit_value(spec, spec.seed, mats, wp, workers)
        except PrecisionExhausted as exc:
            last = exc
    raise PrecisionExhausted(str(last))


@dataclass(frozen=True)
class ConjugateSet:
    values: tuple[CertifiedValue, ...]
    generator: dict
    distinct: bool

    @property
    def prec(self) -> int:
        return self.values[0].prec


def _mat_pow(a, k, M):
    (p, q), (r, s) = ((1, 0), (0, 1))
    base = a
    while k:
        if k & 1:
            (p, q), (r, s) = ((p * base[0][0] + q * base[1][0]) % M, (p * base[0][1] + q * base[1][1]) % M), \
                             ((r * base[0][0] + s * base[1][0]) % M, (r * base[0][1] + s * base[1][1]) % M)
        b = base
        base = (((b[0][0] * b[0][0] + b[0][1] * b[1][0]) % M, (b[0][0] * b[0][1] + b[0][1] * b[1][1]) % M),
                ((b[1][0] * b[0][0] + b[1][1] * b[1][0]) % M, (b[1][0] * b[0][1] + b[1][1] * b[1][1]) % M))
        k >>= 1
    return ((p, q), (r, s))


def _distinct(vals: list[CertifiedValue]) -> bool:
    with mp.workprec(max(v.prec for v in vals) + 16):
        return _separated(vals)


def _separated(vals: list[CertifiedValue]) -> bool:
    for i in range(len(vals)):
        for j in range(i + 1, len(vals)):
            a, b = vals[i], vals[j]
            err = abs(a.value) * mpmath.ldexp(1, a.rel_err_exp2) + abs(b.value) * mpmath.ldexp(1, b.rel_err_exp2)
            if abs(a.value - b.value) <= err:
                return False
    return True


def hilbert_conjugates(spec: InvariantSpec, prec: int = DEFAULT_PREC, max_prec: int = MAX_PREC,
                       workers: int | None = None) -> ConjugateSet:
    """gamma_k = gamma_0^{sigma^k} for 0 <= k < p-1, sigma the Artin symbol of Omega_C."""
    if spec.mu != 0:
        raise HypothesisError("conjugates over K_(N) are only tabulated for mu = 0")
    require(spec)
    g, mats, cyc = galois_matrices(spec)
    M = spec.level
    last = None
    for wp in precision_ladder(prec, max_prec):
        try:
            vals = []
            for k in range(spec.p - 1):
                a = _mat_pow(cyc, k, M)
                seed = SiegelIndex(a[1][0] % M, a[1][1] % M, M)  # (0, 1/M) * A^k
                vals.append(_orbit_value(spec, seed, mats, wp, workers))
            break
        except PrecisionExhausted as exc:
            last = exc
    else:
        raise PrecisionExhausted(str(last))
    gen = {"C": g.C, "omega_C": list(g.cyclic.omega.coords), "modulus": g.cyclic.omega.ring.n,
           "norm_to_K_I": list(g.cyclic.omega.norm_to(spec.I)), "matrix": [list(r) for r in cyc]}
    return ConjugateSet(tuple(vals), gen, _distinct(vals))


# ---------------------------------------------------------------- minimal polynomial

@dataclass(frozen=True)
class MinimalPolynomial:
    coefficients: tuple[int, ...]   # leading coefficient first
    max_residual: float             # largest distance of a certified interval endpoint from its integer
    prec: int

    def __call__(self, x):
        acc = mpmath.mpf(0)
        for c in self.coefficients:
            acc = acc * x + c
        return acc


def minimal_polynomial(values: list[CertifiedValue]) -> MinimalPolynomial:
    """prod (X - gamma_k) with integer coefficients certified by interval arithmetic.

    Each gamma_k is widened to an interval of its relative error; a coefficient is accepted
    when its whole interval lies within 0.25 of one integer.
    """
    prec = min(v.prec for v in values)
    iv = mpmath.iv
    old = iv.prec
    iv.prec = prec + 32
    try:
        with mp.workprec(prec + 32):
            coeffs = [iv.mpf(1)]
            for v in values:
                rad = abs(v.value) * mpmath.ldexp(1, v.rel_err_exp2)
                x = iv.mpf([v.value - rad, v.value + rad])
                nxt = [iv.mpf(0)] * (len(coeffs) + 1)
                for i, c in enumerate(coeffs):
                    nxt[i] += c
                    nxt[i + 1] -= c * x
                coeffs = nxt
            out, worst = [], 0.0
            for c in coeffs:
                mid = int(mpmath.nint(c.mid))
                r = max(abs(c.a - mid), abs(c.b - mid))
                dist = float(mpmath.mpf(r.b))
                if dist >= 0.25:
                    raise PrecisionExhausted(f"coefficient near {mpmath.nstr(mpmath.mpf(c.mid.a), 12)} is only known "
                                             f"to within {mpmath.nstr(mpmath.mpf(r.b), 3)}, not within 0.25 of an integer")
                out.append(mid)
                worst = max(worst, dist)
    finally:
        iv.prec = old
    return MinimalPolynomial(tuple(out), worst, prec)


def certified_minimal_polynomial(spec: InvariantSpec, prec: int = DEFAULT_PREC, max_prec: int = MAX_PREC,
                                 workers: int | None = None) -> tuple[ConjugateSet, MinimalPolynomial]:
    if _class_number_I(spec) != 1:
        raise HypothesisError("minimal polynomials with h_I > 1 are out of scope")
    last = None
    for wp in precision_ladder(prec, max_prec):
        try:
            conj = hilbert_conjugates(spec, wp, wp, workers)
            return conj, minimal_polynomial(list(conj.values))
        except PrecisionExhausted as exc:
            last = exc
    raise PrecisionExhausted(str(last))


def _class_number_I(spec: InvariantSpec) -> int:
    return spec.tower.h1 if spec.I == 1 else spec.tower.h2


# ---------------------------------------------------------------- normal basis

@dataclass
class NormalBasisResult:
    S: list[list]                 # complex values S(i, j)
    N: list[list[int]]
    M: list[list[int]]
    beta: CertifiedValue
    frobenius: list[dict]         # per character: |T|, error bound, certified
    lemma_checks: dict
    prec: int
    conjugates: ConjugateSet = field(repr=False, default=None)


def character_sums(gammas: list, p: int, j_max: int):
    """S(i, j) = sum_k zeta^{-k i} gamma_k^j, with the j = 0 column exact."""
    m = p - 1
    zeta = [mpmath.expjpi(mpmath.mpf(2 * k) / m) for k in range(m)]
    S = [[None] * (j_max + 1) for _ in range(m)]
    for i in range(m):
        S[i][0] = mpmath.mpc(m if i == 0 else 0)
        for j in range(1, j_max + 1):
            S[i][j] = mpmath.fsum(zeta[(-k * i) % m] * gammas[k] ** j for k in range(m))
    return S, zeta


def _norm_product(gammas, zeta, i, j, m, units):
    """|(prod_s prod_u sum_k zeta^{-k i u} gamma_{k+s}^j)^2| and the magnitude scale of each factor."""
    acc = mpmath.mpc(1)
    rel = mpmath.mpf(0)
    for s in range(m):
        for u in units:
            terms = [zeta[(-k * i * u) % m] * gammas[(k + s) % m] ** j for k in range(m)]
            f = mpmath.fsum(terms)
            scale = mpmath.fsum(abs(t) for t in terms)
            acc *= f
            rel += scale / abs(f) if f != 0 else mpmath.inf
    return abs(acc * acc), 2 * rel


def normal_basis(spec: InvariantSpec, prec: int = DEFAULT_PREC, max_prec: int = MAX_PREC,
                 workers: int | None = None) -> NormalBasisResult:
    """The normal basis element beta of (K3)_(p) over (K3)_(1), with every integrality step certified."""
    if spec.N != 1 or spec.mu != 0:
        raise HypothesisError("the normal basis construction needs N = 1 and mu = 0")
    if spec.tower.h3 != 1 or _class_number_I(spec) != 1:
        raise HypothesisError("normal basis data is only assembled for h3 = 1 and h_I = 1")
    last = None
    for wp in precision_ladder(prec, max_prec):
        try:
            return _normal_basis_at(spec, wp, workers)
        except PrecisionExhausted as exc:
            last = exc
    raise PrecisionExhausted(f"normal basis not certified up to {max_prec} bits: {last}")


def _normal_basis_at(spec: InvariantSpec, prec: int, workers) -> NormalBasisResult:
    p = spec.p
    m = p - 1
    conj = hilbert_conjugates(spec, prec, prec, workers)
    if not conj.distinct:
        raise PrecisionExhausted("conjugates are not separated")
    err_g = max(v.rel_err_exp2 for v in conj.values)
    units = [u for u in range(1, m) if math.gcd(u, m) == 1] or [1]
    with mp.workprec(prec + 64):
        gammas = [v.value for v in conj.values]
        S, zeta = character_sums(gammas, p, m - 1)
        Nmat = [[0] * m for _ in range(m)]
        for i in range(m):
            for j in range(m):
                if j == 0:
                    Nmat[i][j] = (m ** (m * len(units))) ** 2 if i == 0 else 0
                    continue
                val, amp = _norm_product(gammas, zeta, i, j, m, units)
                # relative error: gamma errors scaled by j, plus rounding in each factor
                rel = amp * (j * mpmath.ldexp(1, err_g) + mpmath.ldexp(1, 8 - prec))
                bound = val * rel
                nearest = int(mpmath.nint(val))
                if bound >= 0.25 or abs(val - nearest) + bound >= 0.25:
                    raise PrecisionExhausted(f"N({i},{j}) not certified at {prec} bits")
                Nmat[i][j] = nearest
    # coprime sequence M_k = 1 + N_k prod_{l<k} M_l, row-major over (i, j)
    Mflat, running = [], gmpy2.mpz(1)
    for i in range(m):
        for j in range(m):
            Mk = 1 + gmpy2.mpz(Nmat[i][j]) * running
            Mflat.append(Mk)
            running *= Mk
    Mmat = [[Mflat[i * m + j] for j in range(m)] for i in range(m)]
    checks = lemma_checks(Nmat, Mmat)
    with mp.workprec(prec + 64):
        c = [mpmath.fsum(1 / mpmath.mpf(Mmat[i][j]) for i in range(m)) for j in range(m)]
        beta = mpmath.fsum(c[j] * gammas[0] ** j for j in range(m))
        frob = []
        for ell in range(m):
            T = mpmath.fsum(c[j] * S[ell][j] for j in range(m))
            err = mpmath.fsum(c[j] * mpmath.fsum(abs(gammas[k]) ** j for k in range(m)) *
                              (j * mpmath.ldexp(1, err_g) + mpmath.ldexp(1, 8 - prec)) for j in range(1, m))
            frob.append({"character": ell, "abs": abs(T), "error_bound": err, "certified": abs(T) > err})
        if not all(f["certified"] for f in frob):
            raise PrecisionExhausted("a Frobenius sum is not separated from zero")
        beta_err = mpmath.fsum(c[j] * abs(gammas[0]) ** j * j * mpmath.ldexp(1, err_g) for j in range(1, m))
        rel = beta_err / abs(beta) + mpmath.ldexp(1, 8 - prec)
        rel_exp = int(mpmath.floor(mpmath.log(rel, 2))) + 1
    bval = CertifiedValue(beta, rel_exp, mpmath.mpf(0), prec)
    return NormalBasisResult(S, Nmat, Mmat, bval, frob, checks, prec, conj)


def lemma_checks(Nmat, Mmat) -> dict:
    """Exact checks M >= 1 + N, gcd(M, N) = 1 and pairwise coprime M (via running products)."""
    flatN = [gmpy2.mpz(x) for row in Nmat for x in row]
    flatM = [gmpy2.mpz(x) for row in Mmat for x in row]
    ge = all(mm >= 1 + nn for mm, nn in zip(flatM, flatN))
    cop = all(gmpy2.gcd(mm, nn) == 1 for mm, nn in zip(flatM, flatN))
    # pairwise coprime iff each entry is coprime to the product of the earlier ones
    running, pair = gmpy2.mpz(1), True
    for mm in flatM:
        if gmpy2.gcd(mm, running) != 1:
            pair = False
            break
        running *= mm
    return {"M_ge_1_plus_N": ge, "gcd_M_N_is_1": cop, "M_pairwise_coprime": pair}


# ---------------------------------------------------------------- presets and report

PRESETS = {
    "6-14a": dict(d1=15, d2=26, h3=2, N=5, p=37, mu=0, I=1, tasks=("degrees", "norm-gen")),
    "6-14b": dict(d1=7, d2=2, N=1, p=37, mu=0, I=2, tasks=("degrees", "norm-gen")),
    "7-9": dict(d1=15, d2=26, h3=2, N=5, p=37, mu=1, I=1, tasks=("degrees", "norm-gen")),
    "8-8": dict(d1=31, d2=2, N=1, p=5, mu=0, I=2, tasks=("degrees", "norm-gen", "conjugates", "minpoly")),
    "9-6": dict(d1=31, d2=2, N=1, p=5, mu=0, I=2, tasks=("norm-gen", "conjugates", "normal-basis")),
}


def preset_spec(example: str) -> tuple[InvariantSpec, tuple[str, ...]]:
    if example not in PRESETS:
        raise KeyError(f"unknown example {example!r}; choose from {sorted(PRESETS)}")
    cfg = dict(PRESETS[example])
    tasks = cfg.pop("tasks")
    tower = make_tower(cfg.pop("d1"), cfg.pop("d2"), h3=cfg.pop("h3", None))
    return InvariantSpec(tower, **cfg), tasks


def big_int_summary(x) -> dict | str:
    """Integers up to 200 digits verbatim, larger ones as a digest."""
    s = str(x)
    if len(s) <= 200:
        return s
    return {"digits": len(s), "sha256": hashlib.sha256(s.encode()).hexdigest(),
            "leading": s[:20], "trailing": s[-20:]}


def _orbit_json(orbit) -> list:
    return [[str(r) for r in v.r] for v in orbit]


def _value_json(v: CertifiedValue) -> dict:
    d = v.to_json()
    d["imag_residual"] = mpmath.nstr(v.imag_residual, 3)
    return d


def report(spec: InvariantSpec | None = None, *, tasks=(), prec: int = DEFAULT_PREC,
           max_prec: int = MAX_PREC, workers: int | None = None, results: dict | None = None) -> dict:
    """Versioned JSON record of whatever was requested (an empty spec gives the skeleton)."""
    doc = {"schema_version": SCHEMA_VERSION, "package_version": __version__, "inputs": None,
           "assumptions": [], "results": {}}
    if spec is None:
        return doc
    doc["inputs"] = spec.describe()
    doc["assumptions"] = [{"name": a.name, "holds": a.holds, "detail": a.detail}
                          for a in check_assumptions(spec)]
    res = doc["results"]
    results = results if results is not None else {}
    if "degrees" in tasks:
        res["degrees"] = degree_table(spec.tower, spec.N, spec.p, spec.mu).to_json()
    if "gamma" in tasks:
        res["gamma"] = _value_json(gamma(spec, prec))
    if "norm-gen" in tasks:
        v = results.get("norm-gen") or norm_generator(spec, prec, max_prec, workers)
        results["norm-gen"] = v
        g, mats, _ = galois_matrices(spec)
        res["norm_generator"] = {
            **_value_json(v), "prec_bits": v.prec,
            "generators": [{"label": a.label, "omega": list(a.omega.coords), "modulus": a.omega.ring.n,
                            "order": a.order, "matrix": [list(r) for r in m]}
                           for a, m in zip(g.relative, mats)],
            "orbit": _orbit_json(v.orbit),
        }
    if "conjugates" in tasks or "minpoly" in tasks:
        if "minpoly" in tasks:
            conj, mp_ = certified_minimal_polynomial(spec, prec, max_prec, workers)
            res["minimal_polynomial"] = {"coefficients": [str(c) for c in mp_.coefficients],
                                         "max_residual": mp_.max_residual, "prec_bits": mp_.prec}
        else:
            conj = hilbert_conjugates(spec, prec, max_prec, workers)
        results["conjugates"] = conj
        res["conjugates"] = {"values": [_value_json(v) for v in conj.values], "generator": conj.generator,
                             "distinct": conj.distinct, "orbits": [_orbit_json(v.orbit) for v in conj.values]}
    if "normal-basis" in tasks:
        nb = normal_basis(spec, prec, max_prec, workers)
        results["normal-basis"] = nb
        res["normal_basis"] = {
            "beta": _value_json(nb.beta), "prec_bits": nb.prec,
            "N": [[big_int_summary(x) for x in row] for row in nb.N],
            "M": [[big_int_summary(x) for x in row] for row in nb.M],
            "lemma_checks": nb.lemma_checks,
            "frobenius": [{"character": f["character"], "abs": mpmath.nstr(f["abs"], 8),
                           "error_bound": mpmath.nstr(f["error_bound"], 3), "certified": bool(f["certified"])}
                          for f in nb.frobenius],
        }
    return doc


def load_schema() -> dict:
    return json.loads(resources.files("rayclass").joinpath("report.schema.json").read_text())


def validate_report(doc: dict) -> None:
    import jsonschema
    jsonschema.validate(doc, load_schema())

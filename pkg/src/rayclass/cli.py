"""Command-line front end.

Exit codes: 0 success, 1 hypothesis violation, 2 precision exhausted, 3 usage error.
Reports go to stdout (JSON with --json), diagnostics to stderr.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

import mpmath

from . import __version__
from .fields import HypothesisError, legendre, make_tower, unit_exponents
from .invariants import (
    PRESETS, SCHEMA_VERSION, InvariantSpec, big_int_summary, preset_spec, report, validate_report,
)
from .numerics import DEFAULT_PREC, MAX_PREC, PrecisionExhausted, check_prec
from .residue import pell_count
from .siegel import G12_SLACK, CmPoint, SiegelIndex, eval_g12

EXIT_OK, EXIT_HYPOTHESIS, EXIT_PRECISION, EXIT_USAGE = 0, 1, 2, 3

REPORT_TASKS = {
    "degrees": ("degrees",),
    "gamma": ("gamma",),
    "norm-gen": ("norm-gen",),
    "conjugates": ("conjugates",),
    "minpoly": ("minpoly",),
    "normal-basis": ("normal-basis",),
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _common(p: argparse.ArgumentParser, tower: bool = True) -> None:
    if tower:
        p.add_argument("--d1", type=int, help="K1 = Q(sqrt(-d1)), -d1 = 1 mod 4")
        p.add_argument("--d2", type=int, help="K2 = Q(sqrt(-d2)), -d2 = 2, 3 mod 4")
        p.add_argument("--h3", type=int, help="class number of Q(sqrt(d1 d2)) if not tabulated")
        p.add_argument("--Q", type=int, choices=(1, 2), help="unit index of K (checked)")
        p.add_argument("--N", type=int, default=1, help="odd level prime to p (default 1)")
        p.add_argument("--p", type=int, help="odd prime")
        p.add_argument("--mu", type=int, default=0)
        p.add_argument("--I", type=int, choices=(1, 2), help="subfield index (default: the non-split one)")
        p.add_argument("--n", type=int, default=1, help="exponent multiple of g^{12M}")
    p.add_argument("--prec-bits", type=int, default=DEFAULT_PREC)
    p.add_argument("--max-prec-bits", type=int, default=MAX_PREC)
    p.add_argument("--json", action="store_true", help="emit the JSON report")
    p.add_argument("--threads", type=int, default=1, help="worker processes for orbit products")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rayclass", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"rayclass {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    _common(sub.add_parser("unit", help="fundamental unit of K3 and its exponents mod N p"))
    p = sub.add_parser("pell", help="group of the Pell conic x^2 - delta y^2 = 1 over F_p")
    p.add_argument("--delta", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    _common(p, tower=False)
    for name, text in (("degrees", "degree table of the intermediate class fields"),
                       ("gamma", "the Siegel value g_(0,1/M)(theta_I)^{12Mn}"),
                       ("norm-gen", "relative norm of gamma down to K~^3"),
                       ("conjugates", "conjugates of the norm generator over K_(N)"),
                       ("minpoly", "certified integer minimal polynomial"),
                       ("normal-basis", "normal basis element of (K3)_(p) over (K3)_(1)")):
        _common(sub.add_parser(name, help=text))
    p = sub.add_parser("siegel-eval", help="g_(r1,r2)(theta)^{12Mn} at theta of Q(sqrt(-d))")
    p.add_argument("--r1", required=True, help="fraction a/M")
    p.add_argument("--r2", required=True, help="fraction a/M")
    p.add_argument("--d", type=int, required=True, help="positive squarefree d")
    p.add_argument("--level", type=int, help="M (default: common denominator)")
    p.add_argument("--pow-mult", type=int, default=1, help="n in g^{12Mn}")
    _common(p, tower=False)
    p = sub.add_parser("reproduce", help="run a preset computation")
    p.add_argument("--example", required=True, choices=sorted(PRESETS))
    _common(p, tower=False)
    return parser


def _spec_from(args) -> InvariantSpec:
    missing = [f"--{k}" for k in ("d1", "d2", "p") if getattr(args, k) is None]
    if missing:
        raise UsageError(f"missing required options: {' '.join(missing)}")
    tower = make_tower(args.d1, args.d2, h3=args.h3, Q=args.Q)
    return InvariantSpec(tower, args.N, args.p, args.mu, args.I, args.n)


def _skeleton(results: dict, inputs=None) -> dict:
    return {"schema_version": SCHEMA_VERSION, "package_version": __version__, "inputs": inputs,
            "assumptions": [], "results": results}


def _unit_doc(args) -> dict:
    if args.d1 is None or args.d2 is None:
        raise UsageError("missing required options: --d1 --d2")
    t = make_tower(args.d1, args.d2, h3=args.h3, Q=args.Q)
    exps = None
    if args.p is not None:
        ue = unit_exponents(t, args.N, args.p)
        exps = {"N": ue.N, "p": ue.p, "m0": ue.m0, "sign": ue.sign, "eps0_prime": [str(x) for x in ue.eps0_prime],
                "n0": ue.n0, "l0": ue.l0, "mu0": ue.mu0,
                "alpha0": big_int_summary(ue.alpha0), "beta0": big_int_summary(ue.beta0)}
    res = {"eps0": list(t.eps0), "Q": t.Q, "h1": t.h1, "h2": t.h2, "h3": t.h3, "exponents": exps}
    return _skeleton({"unit": res})


def _pell_doc(args) -> dict:
    g = pell_count(args.delta, args.p)
    return _skeleton({"pell": {"delta": args.delta, "p": args.p, "order": g.order, "generator": list(g.generator),
                               "expected_order": args.p - legendre(args.delta, args.p)}})


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"not a fraction: {text!r}") from exc


def _siegel_doc(args) -> dict:
    idx = SiegelIndex.from_fractions(_fraction(args.r1), _fraction(args.r2), args.level)
    cm = CmPoint.of(args.d)
    z = eval_g12(idx, cm, args.pow_mult, args.prec_bits)
    digits = min(60, int(args.prec_bits * 0.30103) - 2)
    res = {"index": [str(r) for r in idx.r], "d": args.d, "power": 12 * idx.M * args.pow_mult,
           "real": mpmath.nstr(z.real, digits, min_fixed=-4, max_fixed=16),
           "imag": mpmath.nstr(z.imag, digits, min_fixed=-4, max_fixed=16),
           "rel_err_exp2": G12_SLACK - args.prec_bits, "prec_bits": args.prec_bits}
    return _skeleton({"siegel": res})


# ---------------------------------------------------------------- human-readable rendering

def _short(v: dict, digits: int = 15) -> str:
    return mpmath.nstr(mpmath.mpf(v["value"]), digits)


def render(doc: dict) -> str:
    out = []
    if doc["inputs"]:
        i = doc["inputs"]
        t = i["tower"]
        out.append(f"K = Q(sqrt(-{t['d1']}), sqrt(-{t['d2']}))  h1={t['h1']} h2={t['h2']} h3={t['h3']} "
                   f"Q={t['Q']} eps0={t['eps0'][0]}+{t['eps0'][1]}*sqrt({t['d1'] * t['d2']})")
        out.append(f"N={i['N']} p={i['p']} mu={i['mu']} I={i['I']} n={i['n']}")
        for a in doc["assumptions"]:
            out.append(f"  [{'ok' if a['holds'] else '--'}] {a['name']}: {a['detail']}")
    r = doc["results"]
    if "unit" in r:
        u = r["unit"]
        out.append(f"eps0 = {u['eps0'][0]} + {u['eps0'][1]}*sqrt(delta)  Q = {u['Q']}  "
                   f"h1 = {u['h1']}  h2 = {u['h2']}  h3 = {u['h3']}")
        if u["exponents"]:
            e = u["exponents"]
            out.append(f"m0 = {e['m0']} (sign {e['sign']})  n0 = {e['n0']}  l0 = {e['l0']}  mu0 = {e['mu0']}")
            out.append(f"eps0^l0 = 1 + N p^mu0 ({_cell(e['alpha0'])} + {_cell(e['beta0'])}*sqrt(delta))")
    if "pell" in r:
        g = r["pell"]
        out.append(f"x^2 - {g['delta']} y^2 = 1 over F_{g['p']}: order {g['order']} "
                   f"(p - (delta/p) = {g['expected_order']}), generator {tuple(g['generator'])}")
    if "siegel" in r:
        s = r["siegel"]
        out.append(f"g_({s['index'][0]}, {s['index'][1]})(theta)^{s['power']} at Q(sqrt(-{s['d']})):")
        sign = "-" if s["imag"].startswith("-") else "+"
        out.append(f"  {s['real']} {sign} {s['imag'].lstrip('-')} i   (rel. error < 2^{s['rel_err_exp2']})")
    if "degrees" in r:
        out.append(f"degree table ({r['degrees']['case']}):")
        for e in r["degrees"]["entries"]:
            out.append(f"  [{e['from']} : {e['to']}] = {e['index']}")
    if "gamma" in r:
        out.append(f"gamma = {_short(r['gamma'])}")
    if "norm_generator" in r:
        ng = r["norm_generator"]
        for g in ng["generators"]:
            out.append(f"generator {g['label']} (order {g['order']}): matrix {g['matrix']}")
        out.append(f"orbit ({len(ng['orbit'])} indices): " + " ".join(f"({a},{b})" for a, b in ng["orbit"]))
        out.append(f"norm generator = {_short(ng)}  (imag. residual {ng['imag_residual']}, "
                   f"{ng['prec_bits']} bits)")
    if "conjugates" in r:
        c = r["conjugates"]
        out.append(f"Omega_C: C = {c['generator']['C']}, matrix {c['generator']['matrix']}")
        for k, v in enumerate(c["values"]):
            out.append(f"gamma_{k} = {_short(v)}")
        out.append(f"pairwise distinct: {c['distinct']}")
    if "minimal_polynomial" in r:
        coeffs = [int(x) for x in r["minimal_polynomial"]["coefficients"]]
        deg = len(coeffs) - 1
        terms = []
        for k, cf in enumerate(coeffs):
            e = deg - k
            if cf == 0:
                continue
            mono = "" if e == 0 else ("X" if e == 1 else f"X^{e}")
            mag = abs(cf)
            body = mono if mag == 1 and mono else (f"{mag}*{mono}" if mono else str(mag))
            terms.append(("- " if cf < 0 else "+ ") + body)
        poly = " ".join(terms)
        out.append("minimal polynomial: " + (poly[2:] if poly.startswith("+ ") else poly))
    if "normal_basis" in r:
        nb = r["normal_basis"]
        out.append(f"beta = {_short(nb['beta'], 20)}  ({nb['prec_bits']} bits)")
        out.append("N(i,j): " + "; ".join(" ".join(_cell(x) for x in row) for row in nb["N"]))
        out.append("lemma checks: " + ", ".join(f"{k}={v}" for k, v in nb["lemma_checks"].items()))
        for f in nb["frobenius"]:
            out.append(f"  character {f['character']}: |T| = {f['abs']} > {f['error_bound']}: {f['certified']}")
    return "\n".join(out)


def _cell(x) -> str:
    return x if isinstance(x, str) else f"<{x['digits']} digits>"


# ---------------------------------------------------------------- entry point

def _run(args) -> dict:
    check_prec(args.prec_bits)
    check_prec(args.max_prec_bits)
    workers = max(1, args.threads)
    cmd = args.command
    if cmd == "unit":
        return _unit_doc(args)
    if cmd == "pell":
        return _pell_doc(args)
    if cmd == "siegel-eval":
        return _siegel_doc(args)
    if cmd == "reproduce":
        spec, tasks = preset_spec(args.example)
        return report(spec, tasks=tasks, prec=args.prec_bits, max_prec=args.max_prec_bits, workers=workers)
    spec = _spec_from(args)
    return report(spec, tasks=REPORT_TASKS[cmd], prec=args.prec_bits, max_prec=args.max_prec_bits,
                  workers=workers)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        doc = _run(args)
    except HypothesisError as exc:
        print(f"hypothesis violated: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except PrecisionExhausted as exc:
        print(f"precision exhausted: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except (UsageError, ValueError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.json:
        validate_report(doc)
        json.dump(doc, sys.stdout, indent=2)
        sys.stdout.write("\n")
    else:
        print(render(doc))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

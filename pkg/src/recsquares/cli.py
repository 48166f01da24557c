"""Command-line front end.

Every subcommand prints human-readable text by default and JSON lines with
``--json``.  Exit status: 0 success, 1 a violation or failed verification,
2 a usage or domain error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import Any, Iterable

import mpmath

from . import analysis, hypergeom, representation, sequence
from .errors import DomainError, FactorizationError
from .quadratic import pell4_min

SCHEMA = 1
PRECISION_ENV = "RECSQUARES_PRECISION"


def jsonable(value: Any) -> Any:
    """Integers become decimal strings so nothing is truncated downstream."""
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return value
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (mpmath.mpf, mpmath.mpc)):
        return mpmath.nstr(value, 30)
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        return [jsonable(v) for v in value]
    if hasattr(value, "__dataclass_fields__"):
        return {f: jsonable(getattr(value, f)) for f in value.__dataclass_fields__}
    return str(value)


class Emitter:
    def __init__(self, as_json: bool, stream):
        self.as_json = as_json
        self.stream = stream

    def record(self, kind: str, payload: dict, text: str) -> None:
        if self.as_json:
            body = {"schema": SCHEMA, "kind": kind, **jsonable(payload)}
            self.stream.write(json.dumps(body, sort_keys=True) + "\n")
        else:
            self.stream.write(text + "\n")


def _params(args) -> sequence.SeqParams:
    t, u = args.t, args.u
    if t is None or u is None:
        t, u, _ = pell4_min(args.d)
    return sequence.SeqParams(args.a, args.b0, args.d, t, u, args.step)


def _seq_flags(p: argparse.ArgumentParser, b0: bool = True, step: bool = True) -> None:
    p.add_argument("--a", type=int, required=True)
    if b0:
        p.add_argument("--b0", type=int, default=1)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--t", type=int, help="unit trace (default: minimal unit)")
    p.add_argument("--u", type=int, help="unit coefficient (default: minimal unit)")
    if step:
        p.add_argument("--step", type=int, choices=(1, 2), default=2)


def _seq_record(rec: analysis.SequenceRecord) -> dict:
    return {
        "params": dict(zip(("a", "b0", "d", "t", "u", "step"), rec.params.as_tuple())),
        "N_alpha": rec.n_alpha,
        "core_class": rec.core_class,
        "hits": [{"k": h.k, "y": h.y, "root": h.root, "x": h.x} for h in rec.hits],
        "distinct_count": rec.distinct_count,
        "limit": rec.limit,
        "threshold": rec.threshold,
        "violations": list(rec.violations),
    }


def cmd_squares(args, out: Emitter) -> int:
    p = _params(args)
    rec = analysis.examine(p, args.window)
    text = "\n".join(f"k={h.k:>4}  y={h.y} = {h.root}^2" for h in rec.hits)
    text += f"\n{len(rec.hits)} hits, {rec.distinct_count} distinct squares"
    out.record("squares", _seq_record(rec), text)
    return 0


def cmd_scan(args, out: Emitter) -> int:
    ranges = analysis.ScanRanges(
        b_max=args.b_max,
        d_max=args.d_max,
        window=args.window,
        steps=tuple(args.steps),
        a_near=args.a_near,
        a_small=args.a_small,
        a_modes=tuple(args.a_modes),
        b_min=args.b_min,
        d_min=args.d_min,
    )
    found = 0
    for rec in analysis.conjecture_scan(ranges, jobs=args.jobs):
        found += bool(rec.violations)
        if rec.violations or args.all or out.as_json:
            a, b0, d, t, u, step = rec.params.as_tuple()
            text = f"a={a} b0={b0} d={d} step={step}: {rec.distinct_count} squares (limit {rec.limit}) {'; '.join(rec.violations)}"
            out.record("sequence", _seq_record(rec), text)
    if not out.as_json:
        out.stream.write(f"{found} sequences with violations\n")
    return 1 if found else 0


def cmd_decompose(args, out: Emitter) -> int:
    p = _params(args)
    dec = representation.decompose(p, args.k)
    check = representation.verify_decomposition(p, dec)
    sign = "-" if dec.sign < 0 else ""
    text = (
        f"{sign}{dec.f}^2 (x + N sqrt(N_alpha)) = (a + sqrt(N_alpha)) ({dec.r} + {dec.s} sqrt({dec.core}))^4"
        f"\npart ({dec.part}), f'={dec.fprime}, verified={check.ok}"
    )
    out.record("decomposition", {"decomposition": dec, "check": check, "ok": check.ok}, text)
    return 0 if check.ok or args.command == "decompose" else 1


def cmd_bounds(args, out: Emitter) -> int:
    p = _params(args)
    bs = hypergeom.bounds(p, args.k, Fraction(args.c), args.precision)
    flag = "" if bs.usable else "  (E or Q not above 1)"
    text = (
        f"E={mpmath.nstr(bs.E, 8)} Q={mpmath.nstr(bs.Q, 8)} ell0={mpmath.nstr(bs.ell0, 8)} "
        f"gn_sq={bs.gn_sq} proxyE={mpmath.nstr(bs.proxy_e, 8)} proxyQ={mpmath.nstr(bs.proxy_q, 8)}{flag}"
    )
    out.record("bounds", {"bounds": bs, "usable": bs.usable}, text)
    return 0


def cmd_r0(args, out: Emitter) -> int:
    bs = hypergeom.BoundSet(
        mpmath.mpf(args.E), mpmath.mpf(args.Q), Fraction(args.k0), mpmath.mpf(args.ell0),
        Fraction(args.c), Fraction(1), mpmath.mpf(0), mpmath.mpf(0), mpmath.mpf(0),
    )
    res = hypergeom.r0_and_lowerbound(bs, mpmath.mpf(args.q))
    text = f"r0={res.r0} lb_mismatch={mpmath.nstr(res.lb_mismatch, 10)} lb_match={mpmath.nstr(res.lb_match, 10)}"
    out.record("r0", {"result": res}, text)
    return 0


def _hit(p: sequence.SeqParams, k: int) -> sequence.SquareHit:
    term = sequence.element(p, k)
    if not term.integral:
        raise DomainError(f"y_{k} is not an integer")
    y = term.y2 // 2
    root = sequence.isqrt_exact(y)
    if root is None:
        raise DomainError(f"y_{k} = {y} is not a square")
    return sequence.SquareHit(k, y, root, term.x2 // 2)


def cmd_gap(args, out: Emitter) -> int:
    p = _params(args)
    verdict = analysis.gap_check(p, _hit(p, args.ki), _hit(p, args.kj), args.fi, args.fj, args.part)
    text = (
        f"part ({verdict.part}) applicable={verdict.applicable} ({verdict.reason}) "
        f"threshold={float(verdict.threshold):.6g} satisfied={verdict.satisfied}"
    )
    out.record("gap", {"verdict": verdict}, text)
    return 1 if verdict.applicable and not verdict.satisfied else 0


def cmd_threshold(args, out: Emitter) -> int:
    p = _params(args)
    th = analysis.prop41_threshold(p)
    hits = sequence.scan_squares(p, args.window)
    above = sorted({h.y for h in hits if th.exceeded_by(h.y)})
    text = f"threshold={th.value:.6g}; squares above it: {above}"
    out.record("threshold", {"threshold": th.value, "gn_sq": th.gn_sq, "above": above}, text)
    return 1 if len(above) > 1 else 0


def cmd_quartic(args, out: Emitter) -> int:
    res = analysis.quartic_solutions(args.d, args.n, args.ybound)
    text = f"{len(res.solutions)} solutions (complete up to y={res.complete_up_to}): {list(res.solutions)}"
    out.record("quartic", {"result": res}, text)
    return 0


def cmd_sieve(args, out: Emitter) -> int:
    spec = analysis.SieveSpec(args.modulus, args.u, args.sign, args.nalpha, args.b)
    rep = analysis.congruence_sieve(spec)
    if rep.survivors:
        text = f"{len(rep.survivors)} survivors; forced divisor of gcd(a^2, d): {rep.forced_gcd_divisor}"
    else:
        text = "no survivors"
    out.record("sieve", {"report": rep}, text)
    return 0


def cmd_classify(args, out: Emitter) -> int:
    cls = analysis.classify_theorem14(_params(args))
    out.record("classify", {"classification": cls}, f"case ({cls.case}), at most {cls.bound} squares")
    return 0


def cmd_lemma313(args, out: Emitter) -> int:
    rep = analysis.lemma313_scan(args.d_min, args.d_max)
    lines = [f"{rep.records} records"]
    for name in ("min_E", "min_proxy_e", "min_proxy_q"):
        lines.append(f"{name}: {getattr(rep, name)}")
    lines.append(f"E < 1 cases: {len(rep.small_E)}; violations: {len(rep.violations)}; gn mismatches: {len(rep.gn_mismatches)}")
    out.record("lemma313", {"report": rep}, "\n".join(lines))
    return 1 if rep.violations or rep.gn_mismatches else 0


def cmd_lemma22(args, out: Emitter) -> int:
    rows = hypergeom.denominator_ratio_sweep(args.r_max, args.dprime, args.precision)
    top_lo = max(rows, key=lambda r: r.ratio_lower)
    top_hi = max(rows, key=lambda r: r.ratio_upper)
    c41, c42 = hypergeom.C41, hypergeom.C42
    ok = top_lo.ratio_lower * c41.denominator < c41.numerator and top_hi.ratio_upper * c42.denominator < c42.numerator
    text = (
        f"max first ratio {mpmath.nstr(top_lo.ratio_lower, 8)} at r={top_lo.r}; "
        f"max second ratio {mpmath.nstr(top_hi.ratio_upper, 8)} at r={top_hi.r}; within constants: {ok}"
    )
    out.record("lemma22", {"max_lower": top_lo, "max_upper": top_hi, "ok": ok}, text)
    return 0 if ok else 1


def _example_rows(which: str) -> Iterable[tuple[str, sequence.SeqParams, int]]:
    if which in ("table", "all"):
        for a, b, _, _ in analysis.TABLE_D2:
            yield "table", sequence.SeqParams(a, b * b, 2, 2, 2), 80
        for d, t, u, a, b in analysis.FOUR_SQUARE_OTHER_D:
            yield "four-square", sequence.SeqParams(a, b * b, d, t, u), 40
    if which in ("step1", "all"):
        for d, t, u, a, b, _ in analysis.STEP1_EXAMPLES:
            yield "step1", sequence.SeqParams(a, b * b, d, t, u, 1), 80
    if which in ("families", "all"):
        for n in (5, 7, 9, 11):
            yield "odd-n", analysis.family_odd_n(n), 10
        for n in (9, 13, 17, 21):
            yield "prime-norm", analysis.family_prime_norm(n), 10
        for p in analysis.family_case_a(3):
            yield "case-a", p, 10


def cmd_examples(args, out: Emitter) -> int:
    bad = 0
    for label, p, window in _example_rows(args.which):
        rec = analysis.examine(p, window)
        bad += bool(rec.violations)
        roots = ", ".join(f"y_{h.k}={h.root}^2" for h in rec.hits)
        out.record("example", {"family": label, **_seq_record(rec)}, f"[{label}] {p.as_tuple()}: {roots}")
    return 1 if bad else 0


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON lines")
    common.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    common.add_argument("--precision", type=int, default=int(os.environ.get(PRECISION_ENV, "256")))
    common.add_argument("--config", help="key=value file of default flags")
    common.add_argument("--output", help="write records here instead of stdout")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="recsquares", parents=[common], description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=func)
        return p

    p = add("squares", cmd_squares, "square terms of one sequence")
    _seq_flags(p)
    p.add_argument("--window", type=int, default=40)

    p = add("scan", cmd_scan, "conjecture scan over a parameter box")
    p.add_argument("--b-max", type=int, required=True)
    p.add_argument("--d-max", type=int, required=True)
    p.add_argument("--b-min", type=int, default=1)
    p.add_argument("--d-min", type=int, default=2)
    p.add_argument("--window", type=int, default=40)
    p.add_argument("--steps", type=int, nargs="+", default=[2], choices=(1, 2))
    p.add_argument("--a-near", type=int, default=20)
    p.add_argument("--a-small", type=int, default=50)
    p.add_argument("--a-modes", type=int, nargs="+", default=[1, 2], choices=(1, 2))
    p.add_argument("--all", action="store_true", help="print every sequence, not only violations")

    for name, help_text in (("decompose", "quartic representation of a square term"), ("verify", "check that representation")):
        p = add(name, cmd_decompose, help_text)
        _seq_flags(p, step=False)
        p.set_defaults(step=2)
        p.add_argument("--k", type=int, required=True)

    p = add("bounds", cmd_bounds, "approximation parameters at one index")
    _seq_flags(p, b0=False, step=False)
    p.set_defaults(b0=1, step=2)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--c", default="0.75")

    p = add("r0", cmd_r0, "index r0 and the resulting lower bounds")
    p.add_argument("--E", required=True)
    p.add_argument("--Q", required=True)
    p.add_argument("--ell0", required=True)
    p.add_argument("--q", required=True)
    p.add_argument("--c", default="0.75")
    p.add_argument("--k0", default="0.89")

    p = add("gap", cmd_gap, "gap between two square terms")
    _seq_flags(p, step=False)
    p.set_defaults(step=2)
    p.add_argument("--ki", type=int, required=True)
    p.add_argument("--kj", type=int, required=True)
    p.add_argument("--fi", type=int, default=1)
    p.add_argument("--fj", type=int, default=1)
    p.add_argument("--part", choices=("a", "b"))

    p = add("threshold", cmd_threshold, "large-square threshold and squares above it")
    _seq_flags(p, b0=False, step=False)
    p.set_defaults(b0=1, step=2)
    p.add_argument("--window", type=int, default=40)

    p = add("quartic", cmd_quartic, "solve x^2 - d y^4 = n for bounded y")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--ybound", type=int, default=10**4)

    p = add("sieve", cmd_sieve, "congruence sieve on (a, t, d) residues")
    p.add_argument("--u", type=int, required=True)
    p.add_argument("--sign", type=int, choices=(4, -4), required=True)
    p.add_argument("--modulus", type=int, required=True)
    p.add_argument("--nalpha", choices=analysis.NALPHA_CONDITIONS, default="any")
    p.add_argument("--b", type=int, default=1)

    p = add("classify", cmd_classify, "square-count case for -N(alpha) a square")
    _seq_flags(p, step=False)
    p.set_defaults(step=2)

    p = add("lemma313", cmd_lemma313, "proxy minima over a range of d")
    p.add_argument("--d-min", type=int, default=2)
    p.add_argument("--d-max", type=int, default=1000)

    p = add("lemma22", cmd_lemma22, "denominator ratio sweep")
    p.add_argument("--r-max", type=int, default=155)
    p.add_argument("--dprime", type=int, default=-1)

    p = add("examples", cmd_examples, "reproduce tabulated examples and families")
    p.add_argument("--which", choices=("table", "step1", "families", "all"), default="all")
    return parser


def _config_flags(path: str) -> list[str]:
    flags = []
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise DomainError(f"config line without '=': {raw.strip()}")
            flag = "--" + key.strip().replace("_", "-")
            value = value.strip()
            if value.lower() in ("true", "yes", "on"):
                flags.append(flag)
            elif value.lower() not in ("false", "no", "off"):
                flags += [flag, *value.split()]
    return flags


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.config:
            # Config values go first so explicit flags, parsed later, win.
            pos = argv.index(args.command) + 1
            args = parser.parse_args(argv[:pos] + _config_flags(args.config) + argv[pos:])
    except SystemExit as exc:
        return int(exc.code or 0)
    except (DomainError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    stream = open(args.output, "w") if args.output else sys.stdout
    try:
        return args.func(args, Emitter(args.json, stream))
    except (DomainError, FactorizationError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    finally:
        if args.output:
            stream.close()


if __name__ == "__main__":
    sys.exit(main())

"""``charmoment`` command line.

Scalar answers go to stdout; ``--out`` writes JSON/CSV artifacts. Exit codes:
0 success, 1 domain or capacity error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict
from fractions import Fraction
from pathlib import Path

from . import __version__
from .arith import primes_in
from .charsum import CLASS_FILTERS, PRESETS, WeightSequence, char_sum, decomposition_sides, moment
from .errors import CapacityError, DomainError
from .parallel import set_default_threads
from .prooflab import (
    ExperimentConfig,
    burgess_scan,
    grh_scan,
    proof_trace,
    random_configs,
    scan_csv,
    theorem_report,
    trace_many,
)
from .selberg import selberg_lambdas, verify_sieve
from .squareprod import conjecture_csv, conjecture_scan, r2_structured, r_count_brute, r_count_kernel


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _ints(text: str) -> list[int]:
    """``"1,2,8"`` or ``"16:64:2"`` (start:stop:factor, geometric, inclusive)."""
    if ":" in text:
        a, b, f = (int(x) for x in text.split(":"))
        out = []
        while a <= b:
            out.append(a)
            a *= f
        return out
    return [int(x) for x in text.split(",") if x]


def _emit_rows(rows, csv_text: str, args) -> None:
    if args.format == "json":
        _emit(json.dumps([asdict(r) for r in rows], indent=2) + "\n", args.out)
    else:
        _emit(csv_text, args.out)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _weights(args, u: int, h: int) -> WeightSequence:
    return WeightSequence.from_preset(args.weights, u, h, args.seed, args.weights_file)


def _add_weight_flags(p):
    p.add_argument("--weights", choices=PRESETS, default="unit")
    p.add_argument("--weights-file", default=None, help="CSV rows n,re,im (with --weights file)")


def cmd_sieve(args) -> int:
    system = selberg_lambdas(args.z)
    if args.verify:
        report = verify_sieve(system, args.verify)
        if not report.ok:
            print("; ".join(report.failures), file=sys.stderr)
            return 1
    if args.out:
        Path(args.out).write_text(system.to_json() + "\n")
    else:
        print(system.to_json())
    return 0


def cmd_sum(args) -> int:
    S = char_sum(args.q, _weights(args, args.u, args.h), args.filter)
    print(S)
    return 0


def cmd_moment(args) -> int:
    pr = primes_in(max(3, args.q_lo), args.q_hi)
    res = moment(pr, _weights(args, args.u, args.h), args.s, args.filter)
    if args.breakdown:
        Path(args.breakdown).write_text(res.breakdown_csv())
    if args.out:
        payload = {
            "q_lo": args.q_lo,
            "q_hi": args.q_hi,
            "u": args.u,
            "h": args.h,
            "s": args.s,
            "filter": args.filter,
            "weights": args.weights,
            "seed": args.seed,
            "pi": len(res.primes),
            "M": str(res.value),
        }
        Path(args.out).write_text(json.dumps(payload, indent=2) + "\n")
    print(res.value)
    return 0


def cmd_rcount(args) -> int:
    if args.method == "brute":
        n = r_count_brute(args.u, args.h, args.t)
    elif args.method == "structured":
        if args.t != 2:
            raise DomainError("the structured method counts pairs only (t = 2)")
        n = r2_structured(args.u, args.h)
    else:
        n = r_count_kernel(args.u, args.h, args.t)
    print(n)
    return 0


def cmd_decompose_check(args) -> int:
    w = _weights(args, args.u, args.h)
    lo = max(3, args.q_lo) | 1
    bad = []
    count = 0
    for q in range(lo, args.q_hi + 1, 2):
        lhs, rhs = decomposition_sides(q, w)
        count += 1
        if lhs != rhs:
            bad.append(q)
    if bad:
        print(f"decomposition identity fails at q={bad[:10]}", file=sys.stderr)
        return 1
    print(f"ok {count}")
    return 0


def cmd_trace(args) -> int:
    if args.random:
        configs = random_configs(args.random, args.seed)
    else:
        if args.Q is None or args.u is None or args.h is None:
            raise UsageError("trace needs --Q, --u and --h (or --random N)")
        configs = [
            ExperimentConfig(
                Q=args.Q,
                u=args.u,
                h=args.h,
                s=args.s,
                epsilon=Fraction(args.epsilon),
                z=args.z,
                preset=args.weights,
                seed=args.seed,
                sharp=args.sharp,
            )
        ]
    traces = trace_many(configs) if len(configs) > 1 else [proof_trace(configs[0])]
    payload = {"traces": [t.to_dict() for t in traces]}
    text = json.dumps(payload, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    failed = [i for i, t in enumerate(traces) if not t.ok]
    print(f"{len(traces) - len(failed)}/{len(traces)} traces pass")
    return 1 if failed else 0


def cmd_scan_burgess(args) -> int:
    rows = burgess_scan(args.m_lo, args.m_hi, _ints(args.V), args.seed)
    _emit_rows(rows, scan_csv(rows), args)
    return 0 if all(r.self_check_ok for r in rows) else 1


def cmd_scan_grh(args) -> int:
    if args.m is not None:
        ms = _ints(args.m)
    else:
        ms = list(range(max(3, args.m_lo) | 1, args.m_hi + 1, 2))
    rows = grh_scan(ms, _ints(args.T))
    _emit_rows(rows, scan_csv(rows), args)
    return 0 if all(r.self_check_ok for r in rows) else 1


def cmd_scan_conjecture(args) -> int:
    rows = conjecture_scan(_ints(args.u), _ints(args.h), args.t)
    _emit_rows(rows, conjecture_csv(rows), args)
    return 0 if all(r.diagonal_ok for r in rows) else 1


def cmd_report(args) -> int:
    configs = []
    for Q in _ints(args.Q):
        us = [Q // 2] if args.u == "half" else _ints(args.u)
        for u in us:
            for h in _ints(args.h):
                for s in _ints(args.s):
                    configs.append(
                        ExperimentConfig(Q=Q, u=u, h=h, s=s, epsilon=Fraction(args.epsilon), preset=args.weights, seed=args.seed)
                    )
    meta = {"weights": args.weights, "seed": args.seed, "epsilon": args.epsilon, "u_rule": args.u}
    report = theorem_report(configs, meta=meta)
    text = report.to_json() + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    if args.plot_data:
        Path(args.plot_data).write_text(report.plot_csv())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="charmoment", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--threads", type=int, default=None, help="cap on worker threads (default: all cores)")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", default=None)
    parser.add_argument("--format", choices=("json", "csv"), default=None)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("sieve", help="Selberg weights as JSON")
    p.add_argument("--z", type=int, required=True)
    p.add_argument("--verify", type=int, default=0, metavar="QMAX", help="also check identities for q <= QMAX")
    p.set_defaults(func=cmd_sieve)

    p = sub.add_parser("sum", help="one character sum")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--u", type=int, required=True)
    p.add_argument("--h", type=int, required=True)
    p.add_argument("--filter", choices=CLASS_FILTERS, default="all")
    _add_weight_flags(p)
    p.set_defaults(func=cmd_sum)

    p = sub.add_parser("moment", help="moment over primes in [q-lo, q-hi]")
    p.add_argument("--q-lo", type=int, required=True)
    p.add_argument("--q-hi", type=int, required=True)
    p.add_argument("--u", type=int, required=True)
    p.add_argument("--h", type=int, required=True)
    p.add_argument("--s", type=int, default=1)
    p.add_argument("--filter", choices=CLASS_FILTERS, default="all")
    p.add_argument("--breakdown", default=None, metavar="CSV")
    _add_weight_flags(p)
    p.set_defaults(func=cmd_moment)

    p = sub.add_parser("rcount", help="count tuples with square product")
    p.add_argument("--u", type=int, required=True)
    p.add_argument("--h", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--method", choices=("brute", "structured", "kernel"), default="kernel")
    p.set_defaults(func=cmd_rcount)

    p = sub.add_parser("decompose-check", help="verify the 2-adic decomposition identity")
    p.add_argument("--u", type=int, required=True)
    p.add_argument("--h", type=int, required=True)
    p.add_argument("--q-lo", type=int, default=3)
    p.add_argument("--q-hi", type=int, default=201)
    _add_weight_flags(p)
    p.set_defaults(func=cmd_decompose_check)

    p = sub.add_parser("trace", help="exact trace of the sieve majorisation")
    p.add_argument("--Q", type=int)
    p.add_argument("--u", type=int)
    p.add_argument("--h", type=int)
    p.add_argument("--s", type=int, default=1)
    p.add_argument("--z", type=int, default=None)
    p.add_argument("--epsilon", default="1/4")
    p.add_argument("--sharp", choices=("plus", "minus"), default="plus")
    p.add_argument("--weights", choices=("unit", "rademacher"), default="unit")
    p.add_argument("--random", type=int, default=0, metavar="N", help="trace N seeded random configs")
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("scan-burgess", help="window sums over [A, A+V]")
    p.add_argument("--m-lo", type=int, required=True)
    p.add_argument("--m-hi", type=int, required=True)
    p.add_argument("--V", default="16,64,256")
    p.set_defaults(func=cmd_scan_burgess)

    p = sub.add_parser("scan-grh", help="initial-interval sums over [1, T]")
    p.add_argument("--m", default=None, help="comma list of moduli")
    p.add_argument("--m-lo", type=int, default=3)
    p.add_argument("--m-hi", type=int, default=1001)
    p.add_argument("--T", default="4,16,64,256")
    p.set_defaults(func=cmd_scan_grh)

    p = sub.add_parser("scan-conjecture", help="square-product counts and exponents")
    p.add_argument("--u", required=True)
    p.add_argument("--h", required=True)
    p.add_argument("--t", type=int, choices=(2, 4), default=4)
    p.set_defaults(func=cmd_scan_conjecture)

    p = sub.add_parser("report", help="moment vs bound-term ratio table")
    p.add_argument("--Q", required=True)
    p.add_argument("--u", default="half", help="comma list, or 'half' for u = Q // 2")
    p.add_argument("--h", required=True)
    p.add_argument("--s", default="1")
    p.add_argument("--epsilon", default="1/4")
    p.add_argument("--plot-data", default=None, metavar="CSV")
    _add_weight_flags(p)
    p.set_defaults(func=cmd_report)
    return parser


def _hoist_globals(argv: list[str]) -> list[str]:
    """Let global flags appear after the subcommand too."""
    globals_ = {"--threads", "--seed", "--out", "--format"}
    front, rest = [], []
    it = iter(argv)
    for tok in it:
        key = tok.split("=", 1)[0]
        if key in globals_:
            front.append(tok)
            if "=" not in tok:
                front.append(next(it, ""))
        else:
            rest.append(tok)
    return front + rest


def run(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_hoist_globals(argv))
        if args.command is None:
            raise UsageError("missing subcommand")
    except UsageError as exc:
        print(f"charmoment: usage error: {exc}", file=sys.stderr)
        return 2
    set_default_threads(args.threads)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"charmoment: usage error: {exc}", file=sys.stderr)
        return 2
    except (DomainError, CapacityError) as exc:
        print(f"charmoment: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    finally:
        set_default_threads(None)


def main() -> None:
    sys.exit(run())

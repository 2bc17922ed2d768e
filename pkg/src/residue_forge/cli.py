"""Command-line front end.

Exit codes: 0 success, 1 selftest failure, 2 invalid input, 3 resource
ceiling exceeded, 4 internal assertion.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from . import oracle
from .arithmetic import build_context, euler_phi, factorize, primes_up_to
from .errors import ResidueForgeError, TooLarge
from .modular_sqrt import batch_solve
from .quadform import (QuadraticForm, build_family, density_experiment,
                       family_disjointness_check, family_offsets, h1_estimate,
                       hq_truncated)
from .root_engine import enumerate_all, find_seed

EXIT_OK, EXIT_FAILED, EXIT_INPUT, EXIT_CEILING, EXIT_INTERNAL = 0, 1, 2, 3, 4
THREADS_ENV = "RESIDUE_FORGE_THREADS"


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _form(args) -> QuadraticForm:
    if args.ec is not None:
        return QuadraticForm.ec(args.ec)
    return QuadraticForm.parse(args.form)


def _alpha(pairs: list[str]) -> dict[int, int]:
    alpha = {}
    for item in pairs:
        q, e = item.split(":")
        alpha[int(q)] = int(e)
    return alpha


def cmd_ctx(args) -> str:
    ctx = build_context(args.p)
    if args.format == "plain":
        fac = " ".join(f"{q}^{e}" for q, e in ctx.z_factors) or "1"
        return (f"p={ctx.p} n={ctx.n} z={ctx.z} z_factors={fac} "
                f"class4={ctx.class4} class8={ctx.class8}\n")
    return _dump_json(ctx.to_dict())


def cmd_roots(args) -> str:
    ctx = build_context(args.p)
    if args.mode == "count":
        gz = euler_phi(factorize(ctx.p - 1))
        gs = euler_phi(factorize((ctx.p - 1) // 2))
        payload = {"p": ctx.p, "gz_count": gz, "gs_count": gs}
    elif args.mode == "seed":
        seed = find_seed(ctx)
        payload = {"p": ctx.p, "g": seed.g, "m_prime": seed.m_prime, "g_z": seed.g_z}
    else:
        if ctx.p > args.ceiling:
            raise TooLarge(f"--list is limited to p <= {args.ceiling}")
        payload = {"p": ctx.p, **enumerate_all(ctx).to_dict()}
    if args.format == "plain":
        return "".join(f"{k}={v}\n" for k, v in payload.items())
    return _dump_json(payload)


def cmd_sqrt(args) -> str:
    sols = batch_solve(args.c, args.p)
    if args.format == "plain":
        return "".join(f"{s.c} {'inf' if s.x is None else s.x}\n" for s in sols)
    if args.format == "csv":
        return "c,x\n" + "".join(f"{s.c},{'' if s.x is None else s.x}\n" for s in sols)
    return _dump_json([s.to_dict() for s in sols])


def cmd_hq(args) -> str:
    Q = _form(args)
    est = hq_truncated(Q, args.limit)
    if args.format == "plain":
        return (f"form={Q} h={est.value!r} limit={est.prime_limit} "
                f"factors={est.factors_counted} "
                f"last_factor_deviation={est.last_factor_deviation!r}\n")
    if args.format == "csv":
        keys = list(est.to_dict())
        return ",".join(["form"] + keys) + "\n" + ",".join(
            [f'"{Q}"'] + [repr(v) for v in est.to_dict().values()]) + "\n"
    return _dump_json({"form": [Q.a, Q.b, Q.c], **est.to_dict()})


def cmd_density(args) -> str:
    if args.xmax > 10**8:
        raise TooLarge("--xmax is limited to 1e8")
    report = density_experiment(_form(args), args.xmax, args.buckets,
                                prime_limit=args.limit, x_min=args.xmin)
    if args.format == "json":
        return _dump_json({
            "form": [report.form.a, report.form.b, report.form.c],
            "prediction_constant": report.prediction_constant.to_dict(),
            "buckets": [vars(b) for b in report.buckets],
        })
    return report.to_csv()


def cmd_family(args) -> str:
    alpha = _alpha(args.alpha)
    bs = args.b or family_offsets(args.c, alpha)
    h1 = h1_estimate(args.limit).value
    rows = []
    for b in bs:
        Q = build_family(args.c, alpha, b)
        rows.append({"b": b, "form": [Q.a, Q.b, Q.c],
                     "hq": hq_truncated(Q, args.limit).value})
    payload = {
        "c": args.c,
        "alpha": {str(q): e for q, e in sorted(alpha.items())},
        "h1": h1,
        "members": rows,
        "disjoint": family_disjointness_check(args.c, alpha, bs, args.xbound),
    }
    if args.format == "plain":
        lines = [f"b={r['b']} form={','.join(map(str, r['form']))} hq={r['hq']!r}"
                 for r in rows]
        return "\n".join(lines + [f"h1={h1!r} disjoint={payload['disjoint']}"]) + "\n"
    return _dump_json(payload)


def _selftest_prime(p: int) -> list[str]:
    failures = []
    res = enumerate_all(build_context(p))
    ref = oracle.order_table(p)
    if set(res.gz) != ref.gz_ref:
        failures.append(f"p={p}: primitive roots differ from oracle")
    if set(res.gs) != ref.gs_ref:
        failures.append(f"p={p}: semi-primitive roots differ from oracle")
    for s in batch_solve(range(1, 51), p):
        if s.x != oracle.smallest_parity_root(s.c, p):
            failures.append(f"p={p} c={s.c}: got {s.x}")
    return failures


def cmd_selftest(args) -> tuple[str, int]:
    if args.pmax > oracle.CEILING:
        raise TooLarge(f"--pmax is limited to {oracle.CEILING}")
    primes = primes_up_to(args.pmax).tolist()[1:]
    workers = worker_count()
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_selftest_prime, primes, chunksize=8))
    else:
        results = [_selftest_prime(p) for p in primes]
    failures = [f for r in results for f in r]
    lines = [f"FAIL {f}" for f in failures]
    verdict = "PASS" if not failures else "FAIL"
    lines.append(f"{verdict} {len(primes)} primes <= {args.pmax}, "
                 f"{len(failures)} mismatches")
    return "\n".join(lines) + "\n", EXIT_OK if not failures else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="residue-forge", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "plain"), default=None)
    common.add_argument("--output", "-o", help="write to this path instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ctx", parents=[common], help="decompose p - 1 = 2^n z")
    p.add_argument("p", type=int)
    p.set_defaults(func=cmd_ctx)

    p = sub.add_parser("roots", parents=[common], help="primitive and semi-primitive roots")
    p.add_argument("p", type=int)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--list", dest="mode", action="store_const", const="list")
    mode.add_argument("--count", dest="mode", action="store_const", const="count")
    mode.add_argument("--seed-only", dest="mode", action="store_const", const="seed")
    p.add_argument("--ceiling", type=int, default=10**6, help="largest p allowed for --list")
    p.set_defaults(func=cmd_roots, mode="list")

    p = sub.add_parser("sqrt", parents=[common], help="smallest x with p | x^2 + c")
    p.add_argument("p", type=int)
    p.add_argument("c", type=int, nargs="+")
    p.set_defaults(func=cmd_sqrt)

    def form_args(sp):
        g = sp.add_mutually_exclusive_group(required=True)
        g.add_argument("--form", help="coefficients a,b,c of aX^2 + bX + c")
        g.add_argument("--ec", type=int, help="shorthand for (2X + r)^2 + c, r = 1 - c mod 2")

    p = sub.add_parser("hq", parents=[common], help="truncated Euler product h_Q")
    form_args(p)
    p.add_argument("--limit", type=int, default=10**6)
    p.set_defaults(func=cmd_hq)

    p = sub.add_parser("density", parents=[common], help="prime density among Q(x)")
    form_args(p)
    p.add_argument("--xmax", type=int, required=True)
    p.add_argument("--xmin", type=int, default=1)
    p.add_argument("--buckets", type=int, default=20)
    p.add_argument("--limit", type=int, default=10**6, help="prime limit for h_Q")
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("family", parents=[common], help="forms (2PX + b)^2 + c sharing h_1")
    p.add_argument("c", type=int)
    p.add_argument("--alpha", action="append", required=True, metavar="Q:E",
                   help="exponent E for prime divisor Q of c (repeatable)")
    p.add_argument("--b", type=int, action="append", help="offset (repeatable; default all)")
    p.add_argument("--limit", type=int, default=10**6)
    p.add_argument("--xbound", type=int, default=10**4)
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("selftest", parents=[common], help="compare against brute force")
    p.add_argument("--pmax", type=int, default=2000)
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.format is None:
        args.format = "csv" if args.command == "density" else (
            "plain" if args.command == "selftest" else "json")
    try:
        result = args.func(args)
    except TooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CEILING
    except ResidueForgeError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except AssertionError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    text, code = result if isinstance(result, tuple) else (result, EXIT_OK)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())

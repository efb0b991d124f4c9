"""Command-line surface: classify, build, verify, sweep, generate, bench.

Exit codes are part of the interface:

    0  success / verification passed / Hamiltonian and laceable
    2  parse error (message carries the offending line)
    3  impossible: not Hamiltonian, or no such path exists
    4  Hamiltonian but not laceable
    5  verification failure (violations listed)
    6  undecided: oracle budget exhausted or feasibility unknown

Identical invocations with identical seeds produce byte-identical output;
`bench` is the one exception, it reports wall-clock measurements.
"""

from __future__ import annotations

import argparse
import sys
import time

from .builder import BuildTrace, build_hc, build_hp, build_hp_one_fault
from .core import (
    FaultSet,
    format_fault_file,
    parse_fault_file,
    parse_vertex,
    vertex_str,
)
from .errors import (
    ConstraintUnsatisfiable,
    HamcubeError,
    NotHamiltonian,
    ParseError,
    PreconditionViolated,
    SearchBudgetExceeded,
)
from .oracle import MAX_SEARCH_DIMENSION, SearchConstraints, oracle_find
from .routes import Route, format_certificate, parse_certificate, verify_route
from .sweep import random_disjoint_faults, run_sweep
from .traps import Feasibility, diagnose, hp_feasibility

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_IMPOSSIBLE = 3
EXIT_NOT_LACEABLE = 4
EXIT_VERIFY_FAILED = 5
EXIT_UNDECIDED = 6


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _load_faults(path: str) -> FaultSet:
    return parse_fault_file(_read(path))


def _emit(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _dot(fs: FaultSet, route: Route | None) -> str:
    lines = ["graph hamcube {", "  node [shape=point];"]
    n = fs.n
    for e in fs.edges:
        lines.append(
            f'  "{vertex_str(e.low, n)}" -- "{vertex_str(e.high, n)}" [color=red];'
        )
    if route is not None:
        for u, v in route.steps():
            lines.append(
                f'  "{vertex_str(u, n)}" -- "{vertex_str(v, n)}" [color=blue];'
            )
    lines.append("}")
    return "\n".join(lines) + "\n"


def cmd_classify(args) -> int:
    fs = _load_faults(args.faults)
    diag = diagnose(fs)
    out = diag.report()
    if args.dot:
        out += _dot(fs, None)
    _emit(out, args.out)
    if not diag.hamiltonian:
        return EXIT_IMPOSSIBLE
    if not diag.laceable:
        return EXIT_NOT_LACEABLE
    return EXIT_OK


def cmd_build_cycle(args) -> int:
    fs = _load_faults(args.faults)
    trace = BuildTrace() if args.trace else None
    try:
        route = build_hc(fs, trace)
    except NotHamiltonian as exc:
        sys.stderr.write(f"not Hamiltonian: {exc.certificate.describe(fs.n)}\n")
        return EXIT_IMPOSSIBLE
    verdict = verify_route(fs, route, closed=True, faulty_max=0)
    text = format_certificate(route, verdict.faulty_traversals)
    if args.trace and trace is not None:
        text += trace.render(fs.n)
    if args.dot:
        text += _dot(fs, route)
    _emit(text, args.out)
    return EXIT_OK


def cmd_build_path(args) -> int:
    fs = _load_faults(args.faults)
    try:
        a = parse_vertex(args.src, fs.n)
        b = parse_vertex(args.dst, fs.n)
    except ParseError as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_PARSE
    trace = BuildTrace() if args.trace else None

    feas, reason = hp_feasibility(fs, a, b)
    if feas is Feasibility.IMPOSSIBLE:
        sys.stderr.write(f"impossible: {reason}\n")
        return EXIT_IMPOSSIBLE
    if feas is Feasibility.UNKNOWN:
        if fs.n <= MAX_SEARCH_DIMENSION:
            route = oracle_find(fs, SearchConstraints(endpoints=(a, b)))
            if route is None:
                sys.stderr.write("impossible: exhaustive search found no path\n")
                return EXIT_IMPOSSIBLE
            verdict = verify_route(fs, route, endpoints=(a, b), faulty_max=0)
            text = format_certificate(route, verdict.faulty_traversals)
            if args.dot:
                text += _dot(fs, route)
            _emit(text, args.out)
            return EXIT_OK
        sys.stderr.write(f"undecided: {reason}\n")
        return EXIT_UNDECIDED

    try:
        if args.one_fault:
            route = build_hp_one_fault(fs, a, b, trace)
        else:
            route = build_hp(fs, a, b, trace)
    except PreconditionViolated as exc:
        sys.stderr.write(f"impossible: {exc}\n")
        return EXIT_IMPOSSIBLE
    verdict = verify_route(
        fs, route, endpoints=(a, b),
        faulty_exactly=1 if args.one_fault else 0,
    )
    text = format_certificate(route, verdict.faulty_traversals)
    if args.trace and trace is not None:
        text += trace.render(fs.n)
    if args.dot:
        text += _dot(fs, route)
    _emit(text, args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    fs = _load_faults(args.faults)
    route, claimed = parse_certificate(_read(args.certificate))
    endpoints = None
    if args.src is not None or args.dst is not None:
        if args.src is None or args.dst is None:
            sys.stderr.write("--from and --to must be given together\n")
            return EXIT_PARSE
        endpoints = (parse_vertex(args.src, fs.n), parse_vertex(args.dst, fs.n))
    exclude = parse_vertex(args.exclude, fs.n) if args.exclude else None
    verdict = verify_route(
        fs, route,
        closed=True if args.closed else (False if args.open_ else None),
        endpoints=endpoints,
        exclude=exclude,
        faulty_exactly=args.faulty_exactly,
        faulty_max=args.max_faulty,
    )
    if verdict.ok and claimed != verdict.faulty_traversals:
        verdict.ok = False
        verdict.violations.append(
            f"certificate claims {claimed} faulty traversals, found "
            f"{verdict.faulty_traversals}"
        )
    if verdict.ok:
        _emit(f"pass: faulty_traversals={verdict.faulty_traversals}\n", args.out)
        return EXIT_OK
    _emit("fail:\n" + "".join(f"  {v}\n" for v in verdict.violations), args.out)
    return EXIT_VERIFY_FAILED


def cmd_sweep(args) -> int:
    report = run_sweep(
        args.n,
        args.mode,
        seed=args.seed,
        samples=args.samples,
        la_checks=not args.no_la_checks,
        pair_sample=args.sample_pairs,
        jobs=args.jobs,
    )
    _emit(report.render(), args.out)
    if report.counterexamples:
        for i, c in enumerate(report.counterexamples):
            sys.stderr.write(f"counterexample {i}: {c}\n")
        return EXIT_VERIFY_FAILED
    return EXIT_OK


def cmd_gen(args) -> int:
    try:
        fs = random_disjoint_faults(
            args.n, args.size, require=args.require, seed=args.seed
        )
    except ConstraintUnsatisfiable as exc:
        sys.stderr.write(f"impossible: {exc}\n")
        return EXIT_IMPOSSIBLE
    _emit(format_fault_file(fs), args.out)
    return EXIT_OK


def cmd_bench(args) -> int:
    lines = []
    for n in args.n:
        for frac in args.sizes:
            size = int((1 << (n - 1)) * frac)
            best = None
            for rep in range(args.repeat):
                fs = random_disjoint_faults(
                    n, size, require="no-trap", seed=args.seed + rep
                )
                t0 = time.perf_counter()
                route = build_hc(fs)
                built = time.perf_counter() - t0
                t0 = time.perf_counter()
                verdict = verify_route(fs, route, closed=True, faulty_max=0)
                checked = time.perf_counter() - t0
                if not verdict.ok:
                    sys.stderr.write("benchmark certificate failed verification\n")
                    return EXIT_VERIFY_FAILED
                if best is None or built < best[0]:
                    best = (built, checked)
            lines.append(
                f"n={n} faults={size} build={best[0]:.3f}s verify={best[1]:.3f}s"
            )
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="hamcube",
        description=(
            "Hamiltonian cycles and paths in hypercubes with pairwise "
            "disjoint faulty edges"
        ),
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def add_out(p):
        p.add_argument("--out", default=None, help="write output to a file instead of stdout")

    p = sub.add_parser("classify", help="diagnose a fault file")
    p.add_argument("faults")
    p.add_argument("--dot", action="store_true", help="append a DOT rendering")
    add_out(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("build-cycle", help="construct a fault-free Hamiltonian cycle")
    p.add_argument("faults")
    p.add_argument("--trace", action="store_true", help="append the recursion trace")
    p.add_argument("--dot", action="store_true")
    add_out(p)
    p.set_defaults(func=cmd_build_cycle)

    p = sub.add_parser("build-path", help="construct a Hamiltonian path")
    p.add_argument("faults")
    p.add_argument("--from", dest="src", required=True, metavar="A")
    p.add_argument("--to", dest="dst", required=True, metavar="B")
    p.add_argument("--one-fault", action="store_true",
                   help="traverse exactly one faulty edge")
    p.add_argument("--trace", action="store_true")
    p.add_argument("--dot", action="store_true")
    add_out(p)
    p.set_defaults(func=cmd_build_path)

    p = sub.add_parser("verify", help="check a route certificate")
    p.add_argument("faults")
    p.add_argument("certificate")
    p.add_argument("--closed", action="store_true")
    p.add_argument("--open", dest="open_", action="store_true")
    p.add_argument("--from", dest="src", default=None, metavar="A")
    p.add_argument("--to", dest="dst", default=None, metavar="B")
    p.add_argument("--exclude", default=None, metavar="V")
    p.add_argument("--max-faulty", type=int, default=None)
    p.add_argument("--faulty-exactly", type=int, default=None)
    add_out(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="cross-check classification against the oracle")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mode", choices=("exhaustive", "sampled"), default="exhaustive")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--sample-pairs", type=int, default=None,
                   help="bound endpoint pairs per instance (default: all)")
    p.add_argument("--no-la-checks", action="store_true",
                   help="skip constructive path checks")
    p.add_argument("--jobs", type=int, default=1)
    add_out(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("gen", help="generate a random disjoint fault file")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--require", choices=("no-trap", "has-scdhw", "has-dtbce"),
                   default=None)
    p.add_argument("--seed", type=int, default=0)
    add_out(p)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="time cycle construction and verification")
    p.add_argument("--n", type=int, nargs="+", default=[12])
    p.add_argument("--sizes", type=float, nargs="+", default=[0.5],
                   help="fault count as a fraction of the maximum matching")
    p.add_argument("--repeat", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    add_out(p)
    p.set_defaults(func=cmd_bench)

    return ap


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        sys.stderr.write(f"parse error: {exc}\n")
        return EXIT_PARSE
    except SearchBudgetExceeded as exc:
        sys.stderr.write(f"budget exceeded: {exc}\n")
        return EXIT_UNDECIDED
    except HamcubeError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_IMPOSSIBLE


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end: every library feature behind stable subcommands.

Output formats are plain (human-readable), json (schema-stable envelope with a
command echo, tool version, and full parameters, so runs are reproducible from
the report alone), and csv for search tables. Big integers appear as decimal
strings in JSON. Exit codes: 0 success, 2 usage, 3 unparseable input, 4 value
outside the 64-bit working range, 10 violation of a proved bound or invariant.
"""
from __future__ import annotations

import argparse
import csv
import json
import random
import sys
import time

from . import __version__
from .bounds import BoundViolationError, verify_bounds
from .constructions import ConstructionSpec, default_digit_params, digit_sumset_size
from .core import (
    BACKENDS,
    DilationPair,
    IntSet,
    SetParseError,
    SpanOverflowError,
    dilated_sumset,
    dilated_sumset_size,
    parse_set_literal,
    read_set_file,
    to_literal,
)
from .residues import check_cell_dichotomy, check_class_dichotomy, partition
from .residues import reduce as reduce_set
from .search import SEARCH_CSV_HEADER, min_dilated_sumset, tightness_table

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_OVERFLOW = 4
EXIT_VIOLATION = 10


# ---------------------------------------------------------------------------
# shared plumbing


def _pair_of(args: argparse.Namespace) -> DilationPair:
    return DilationPair(args.p, args.q)


def _load_set(args: argparse.Namespace) -> IntSet:
    if getattr(args, "set", None) is not None:
        result, duplicates = parse_set_literal(args.set)
    else:
        if args.input == "-":
            lines = sys.stdin.read().splitlines()
        else:
            with open(args.input, encoding="utf-8") as fh:
                lines = fh.read().splitlines()
        result, duplicates = read_set_file(lines)
    if duplicates:
        print(f"warning: ignored {duplicates} duplicate value(s)", file=sys.stderr)
    return result


def _emit_json(command: str, parameters: dict, payload: dict) -> None:
    doc = {"command": command, "version": __version__, "parameters": parameters}
    doc.update(payload)
    print(json.dumps(doc, indent=2))


def _set_params(args: argparse.Namespace, A: IntSet) -> dict:
    src = {"literal": args.set} if args.set is not None else {"file": args.input}
    return {"p": args.p, "q": args.q, **src, "n": len(A)}


# ---------------------------------------------------------------------------
# subcommands


def _cmd_sumset(args: argparse.Namespace) -> int:
    pq = _pair_of(args)
    A = _load_set(args)
    if args.size_only:
        size = dilated_sumset_size(A, pq, backend=args.backend)
        elements = None
    else:
        result = dilated_sumset(A, pq, backend=args.backend)
        size, elements = len(result), result
    if args.format == "json":
        payload: dict = {"size": size}
        if elements is not None:
            payload["elements"] = list(elements)
        _emit_json(
            "sumset",
            {**_set_params(args, A), "backend": args.backend, "size_only": args.size_only},
            payload,
        )
    else:
        print(f"size {size}")
        if elements is not None:
            print(to_literal(elements))
    return EXIT_OK


def _cmd_verify(args: argparse.Namespace) -> int:
    pq = _pair_of(args)
    A = _load_set(args)
    report = verify_bounds(A, pq, backend=args.backend)
    doc = report.to_json_dict()
    if args.format == "json":
        _emit_json("verify", {**_set_params(args, A), "backend": args.backend}, doc)
    else:
        print(
            f"pair p={pq.p} q={pq.q}  n={report.n}  actual={report.actual}"
            f"  interval={'yes' if report.is_interval else 'no'}"
        )
        slack = doc["slack"]
        b = doc["bounds"]
        print(f"  base            {b['base']:>12}  slack {slack['base']}")
        if b["q3"] is not None:
            print(f"  q3              {b['q3']:>12}  slack {slack['q3']}")
        if b["fd"] is not None:
            print(f"  fd              {b['fd']:>12}  slack {slack['fd']}")
        for entry in b["prop"]:
            m = str(entry["m"])
            print(f"  prop[m={m}]      value {entry['value']}  slack {slack['prop'][m]}")
        print(f"  main            {b['main']:>12}  slack {slack['main']}")
        if report.is_interval:
            print(
                f"  interval_upper  {b['interval_upper']:>12}"
                f"  slack {slack['interval_upper']}"
            )
        else:
            print(f"  interval_upper  {b['interval_upper']:>12}  (not asserted)")
        print("violations:", ", ".join(report.violations) if report.violations else "none")
    return EXIT_VIOLATION if report.violations else EXIT_OK


def _cmd_reduce(args: argparse.Namespace) -> int:
    pq = _pair_of(args)
    A = _load_set(args)
    reduced, trace = reduce_set(A, pq)
    if args.format == "json":
        _emit_json("reduce", _set_params(args, A), trace.to_json_dict())
    else:
        if not trace.steps:
            print("already reduced")
        for i, step in enumerate(trace.steps, start=1):
            print(
                f"step {i}: {step.side} residue {step.residue} divisor {step.divisor}"
                f" (span {step.span_before})"
            )
        print("final:", to_literal(reduced))
    return EXIT_OK


def _cmd_partition(args: argparse.Namespace) -> int:
    pq = _pair_of(args)
    A = _load_set(args)
    part = partition(A, pq)
    if args.format == "json":
        _emit_json("partition", _set_params(args, A), part.to_json_dict())
    else:
        print(f"pair p={pq.p} q={pq.q}  n={len(A)}  classes: {part.r} mod p, {part.s} mod q")
        for pc in part.p_classes:
            print(f"  p-class {pc.residue}: {to_literal(pc.members)}  quotient {to_literal(pc.quotient)}")
        for qc in part.q_classes:
            print(f"  q-class {qc.residue}: {to_literal(qc.members)}  quotient {to_literal(qc.quotient)}")
        for row in part.cells:
            for cell in row:
                if len(cell.members):
                    print(
                        f"  cell ({cell.p_residue},{cell.q_residue}) offset {cell.offset}:"
                        f" {to_literal(cell.members)}"
                    )
    return EXIT_OK


def _cmd_lemmas(args: argparse.Namespace) -> int:
    pq = _pair_of(args)
    A = _load_set(args)
    class_report = check_class_dichotomy(A, pq)
    cell_report = check_cell_dichotomy(A, pq)
    if args.format == "json":
        _emit_json(
            "lemmas",
            _set_params(args, A),
            {"class": class_report.to_json_dict(), "cell": cell_report.to_json_dict()},
        )
    else:
        print(f"input reduced: {'yes' if class_report.reduced_input else 'no'}")
        for report in (class_report, cell_report):
            ok = sum(1 for r in report.records if r.satisfied)
            print(f"{report.kind} records: {ok}/{len(report.records)} satisfied")
            for rec in report.records:
                where = (
                    f"p={rec.p_residue}" if rec.q_residue is None
                    else f"q={rec.q_residue}" if rec.p_residue is None
                    else f"({rec.p_residue},{rec.q_residue})"
                )
                flags = (
                    "trivial" if rec.trivial
                    else "hypothesis unmet" if not rec.hypothesis_met
                    else f"fd={'yes' if rec.fd_holds else 'no'}"
                    f" ineq={'yes' if rec.inequality_holds else 'no'}"
                    f" (lhs {rec.lhs} rhs {rec.rhs})"
                )
                mark = "ok" if rec.satisfied else "FAILED"
                print(f"  [{report.kind} {rec.form} {where}] {flags} -> {mark}")
    holds = class_report.all_satisfied and cell_report.all_satisfied
    if class_report.reduced_input and not holds:
        print("error: dichotomy failed on a reduced set", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


_KIND_MAP = {"interval": "interval", "strided": "strided_block", "digit": "digit_set"}


def _cmd_construct(args: argparse.Namespace) -> int:
    kind = _KIND_MAP[args.kind]
    if kind == "interval":
        if args.n is None:
            raise ValueError("construct interval requires --n")
        params = {"n": args.n}
    elif kind == "strided_block":
        if args.q is None or args.d is None or args.n is None:
            raise ValueError("construct strided requires --q, --d and --n")
        params = {"q": args.q, "d": args.d, "n": args.n}
    else:
        if args.q is None:
            raise ValueError("construct digit requires --q")
        if (args.a is None) != (args.t is None):
            raise ValueError("construct digit requires both --a and --t, or neither")
        a, t = (args.a, args.t) if args.a is not None else default_digit_params(args.q)
        params = {"q": args.q, "a": a, "t": t}

    X, predictions = ConstructionSpec(kind, params).build()
    sidecar: dict = {"kind": kind, "params": params, "predictions": predictions}
    if args.compute:
        computed = {"size": len(X)}
        if args.q is not None:
            pq = DilationPair(1, args.q)
            if kind == "digit_set":
                computed["sumset_with_q"] = digit_sumset_size(**params)
            else:
                computed["sumset_with_q"] = dilated_sumset_size(X, pq, backend=args.backend)
        sidecar["computed"] = computed
    if args.format == "json":
        _emit_json("construct", {"kind": args.kind, **params}, {**sidecar, "elements": list(X)})
    else:
        print(to_literal(X))
        print(json.dumps(sidecar))
    return EXIT_OK


def _parse_n_range(text: str) -> range:
    lo, sep, hi = text.partition(":")
    if not sep:
        raise ValueError("--n-range must look like LOW:HIGH")
    start, stop = int(lo), int(hi)
    if start < 1 or stop < start:
        raise ValueError("--n-range must satisfy 1 <= LOW <= HIGH")
    return range(start, stop + 1)


def _print_search_plain(result) -> None:
    print(
        f"pair p={result.pair.p} q={result.pair.q}  n={result.n}"
        f"  max_elem={result.max_elem}"
        f"  reflection={'on' if result.use_reflection else 'off'}"
    )
    if result.certified:
        print(f"minimum {result.minimum}  certified via {result.certificate}")
    else:
        print(f"minimum {result.minimum}  not certified (conditional on max_elem)")
    shown = len(result.witnesses)
    suffix = " (truncated)" if result.witnesses_truncated else ""
    print(f"witnesses ({shown} shown{suffix}):")
    for w in result.witnesses:
        print(" ", to_literal(w))
    print(f"sets examined: {result.sets_examined}")


def _cmd_search(args: argparse.Namespace) -> int:
    pq = _pair_of(args)
    if (args.n is None) == (args.n_range is None):
        raise ValueError("search requires exactly one of --n or --n-range")
    kwargs = dict(
        use_reflection=args.reflection,
        jobs=args.jobs,
        prune=not args.no_prune,
        witness_cap=args.witness_cap,
    )
    if args.n is not None:
        results = [min_dilated_sumset(args.n, pq, args.max_elem, **kwargs)]
    else:
        results = list(tightness_table(pq, _parse_n_range(args.n_range), args.max_elem, **kwargs))

    if args.format == "json":
        payload = (
            results[0].to_json_dict()
            if args.n is not None
            else {"results": [r.to_json_dict() for r in results]}
        )
        _emit_json(
            "search",
            {
                "p": args.p,
                "q": args.q,
                "n": args.n,
                "n_range": args.n_range,
                "max_elem": args.max_elem,
                "reflection": args.reflection,
                "jobs": args.jobs,
                "prune": not args.no_prune,
                "witness_cap": args.witness_cap,
            },
            payload,
        )
    elif args.format == "csv":
        writer = csv.writer(sys.stdout)
        writer.writerow(SEARCH_CSV_HEADER)
        for r in results:
            writer.writerow(r.to_csv_row())
    else:
        for i, r in enumerate(results):
            if i:
                print()
            _print_search_plain(r)
    return EXIT_OK


_BENCH_SIZES = {False: (50, 1_000, 10_000), True: (20, 200, 1_000)}
_BENCH_SPANS = {False: (1_000_000, 1_000_000, 1_000_000), True: (10_000, 10_000, 100_000)}
_BENCH_HASH_LIMIT = 2_000


def _bench_workloads(seed: int, quick: bool) -> list[tuple[str, IntSet]]:
    rnd = random.Random(seed)
    sizes, spans = _BENCH_SIZES[quick], _BENCH_SPANS[quick]
    out = []
    for label, n, span in zip(("sparse", "moderate", "dense"), sizes, spans):
        values = rnd.sample(range(span + 1), n)
        out.append((f"random-{label}(n={n},span={span})", IntSet.from_values(values)))
    iv_n = 100 if quick else 2_000
    out.append((f"interval(n={iv_n})", ConstructionSpec("interval", {"n": iv_n}).build()[0]))
    sb = {"q": 8, "d": 3, "n": 40 if quick else 400}
    out.append((f"strided_block(q=8,d=3,n={sb['n']})", ConstructionSpec("strided_block", sb).build()[0]))
    dg = {"q": 7, "a": 3, "t": 2 if quick else 4}
    out.append((f"digit_set(q=7,a=3,t={dg['t']})", ConstructionSpec("digit_set", dg).build()[0]))
    return out


def _cmd_bench(args: argparse.Namespace) -> int:
    pq = _pair_of(args)
    rows = []
    for name, A in _bench_workloads(args.seed, args.quick):
        backends = ["merge", "bitset"] + (["hash"] if len(A) <= _BENCH_HASH_LIMIT else [])
        timings: dict[str, float | None] = {"merge": None, "hash": None, "bitset": None}
        sizes = set()
        for backend in backends:
            best = float("inf")
            for _ in range(args.repeat):
                t0 = time.perf_counter()
                size = dilated_sumset_size(A, pq, backend=backend)
                best = min(best, time.perf_counter() - t0)
            sizes.add(size)
            timings[backend] = round(best * 1e3, 3)
        agreed = len(sizes) == 1
        rows.append(
            {
                "workload": name,
                "n": len(A),
                "span": A.span,
                "size": sizes.pop() if agreed else sorted(sizes),
                "backends_agree": agreed,
                "timings_ms": timings,
            }
        )
    agree = all(r["backends_agree"] for r in rows)
    if args.format == "json":
        _emit_json(
            "bench",
            {"p": args.p, "q": args.q, "seed": args.seed, "repeat": args.repeat, "quick": args.quick},
            {
                "timing_note": "timings_ms values are machine-dependent and not deterministic",
                "workloads": rows,
            },
        )
    else:
        print(f"pair p={pq.p} q={pq.q}  seed={args.seed}  repeat={args.repeat}  (timings not deterministic)")
        print(f"{'workload':<38} {'n':>6} {'span':>8} {'size':>8} {'merge':>9} {'hash':>9} {'bitset':>9}")
        for r in rows:
            cells = [
                f"{r['timings_ms'][b]:>9.3f}" if r["timings_ms"][b] is not None else f"{'skip':>9}"
                for b in ("merge", "hash", "bitset")
            ]
            print(f"{r['workload']:<38} {r['n']:>6} {r['span']:>8} {r['size']:>8} {cells[0]} {cells[1]} {cells[2]}")
    if not agree:
        print("error: backends disagreed on a workload size", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser assembly


def _add_pair(sub: argparse.ArgumentParser, p_default=None, q_default=None) -> None:
    required = p_default is None
    sub.add_argument("--p", type=int, required=required, default=p_default, help="smaller dilation coefficient")
    sub.add_argument("--q", type=int, required=required, default=q_default, help="larger dilation coefficient")


def _add_input(sub: argparse.ArgumentParser) -> None:
    grp = sub.add_mutually_exclusive_group(required=True)
    grp.add_argument("--set", help="comma-separated set literal, e.g. 0,1,3,4")
    grp.add_argument("--input", help="file with one integer per line ('-' for stdin)")


def _add_format(sub: argparse.ArgumentParser, choices=("plain", "json")) -> None:
    sub.add_argument("--format", choices=choices, default="plain", help="output format")


def _add_backend(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--backend", choices=BACKENDS, default="auto", help="sumset backend")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dilatesums",
        description="Exact dilated-sumset computation, bound verification, and extremal search.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subs = parser.add_subparsers(dest="subcommand", required=True)

    s = subs.add_parser("sumset", help="compute p*A + q*A")
    _add_pair(s)
    _add_input(s)
    _add_backend(s)
    _add_format(s)
    s.add_argument("--size-only", action="store_true", help="print only the size")
    s.set_defaults(func=_cmd_sumset)

    s = subs.add_parser("verify", help="check every proved bound against a set")
    _add_pair(s)
    _add_input(s)
    _add_backend(s)
    _add_format(s)
    s.set_defaults(func=_cmd_verify)

    s = subs.add_parser("reduce", help="canonical residue reduction with trace")
    _add_pair(s)
    _add_input(s)
    _add_format(s)
    s.set_defaults(func=_cmd_reduce)

    s = subs.add_parser("partition", help="residue classes mod p, mod q, and joint cells")
    _add_pair(s)
    _add_input(s)
    _add_format(s)
    s.set_defaults(func=_cmd_partition)

    s = subs.add_parser("lemmas", help="evaluate both structure dichotomies on a set")
    _add_pair(s)
    _add_input(s)
    _add_format(s)
    s.set_defaults(func=_cmd_lemmas)

    s = subs.add_parser("construct", help="build a named extremal construction")
    s.add_argument("--kind", choices=sorted(_KIND_MAP), required=True)
    s.add_argument("--q", type=int, help="dilation coefficient (strided/digit; optional for interval --compute)")
    s.add_argument("--n", type=int, help="element count per block (interval/strided)")
    s.add_argument("--d", type=int, help="block width parameter (strided)")
    s.add_argument("--a", type=int, help="digit alphabet size (digit; default from --q)")
    s.add_argument("--t", type=int, help="number of extra digit positions (digit; default from --q)")
    s.add_argument("--compute", action="store_true", help="also compute the actual sumset size")
    _add_backend(s)
    _add_format(s)
    s.set_defaults(func=_cmd_construct)

    s = subs.add_parser("search", help="exhaustive minimum of |p*A + q*A| over canonical sets")
    _add_pair(s)
    s.add_argument("--n", type=int, help="set size")
    s.add_argument("--n-range", help="inclusive size range LOW:HIGH (tightness table)")
    s.add_argument("--max-elem", type=int, required=True, help="canonical span cap")
    s.add_argument(
        "--reflection",
        action=argparse.BooleanOptionalAction,
        default=True,
        help="deduplicate mirror-image sets",
    )
    s.add_argument("--jobs", type=int, default=1, help="parallel shard workers")
    s.add_argument("--no-prune", action="store_true", help="disable branch-and-bound pruning")
    s.add_argument("--witness-cap", type=int, default=32, help="max witnesses kept")
    _add_format(s, choices=("plain", "json", "csv"))
    s.set_defaults(func=_cmd_search)

    s = subs.add_parser("bench", help="time the sumset backends on seeded workloads")
    _add_pair(s, p_default=1, q_default=3)
    s.add_argument("--seed", type=int, default=0, help="workload RNG seed")
    s.add_argument("--repeat", type=int, default=3, help="timing repetitions (best kept)")
    s.add_argument("--quick", action="store_true", help="small workloads for smoke testing")
    _add_format(s)
    s.set_defaults(func=_cmd_bench)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SetParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"error: cannot read input: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except SpanOverflowError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_OVERFLOW
    except BoundViolationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

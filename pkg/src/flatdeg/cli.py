"""Command-line interface: ``flatdeg <command> [options]``.

Exit codes: 0 ok, 1 claim failure, 2 parse/usage error, 3 budget exceeded,
4 missing resource.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path

from . import __version__
from .analysis import Metric, alpha, bad_flat_count, exhaustive_max, verify_claim
from .anf_text import AnfSyntaxError, corpus, corpus_entry, parse_anf, print_anf
from .boolfun import TruthTable, anf_to_tt, degree, mobius, nonlinearity
from .bounds import render_tables, resolve_bounds
from .flats import BudgetExceeded, count_flats, enumerate_flats, enumerate_flats_through
from .search import SearchConfig, search

SCHEMA = "flatdeg/1"

EXIT_OK, EXIT_CLAIM, EXIT_PARSE, EXIT_BUDGET, EXIT_RESOURCE = 0, 1, 2, 3, 4


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _emit(args, record: dict, lines: list[str]) -> None:
    if args.json:
        print(json.dumps({"schema": SCHEMA, **record}, indent=2, ensure_ascii=False))
    else:
        print("\n".join(lines))


def _load_function(args) -> tuple[TruthTable, str]:
    given = [x for x in (args.tt, args.anf, args.anf_file, args.corpus) if x is not None]
    if len(given) != 1:
        raise CliError("give exactly one of --tt, --anf, --anf-file, --corpus", EXIT_PARSE)
    try:
        if args.tt is not None:
            tt = TruthTable.from_hex(args.tt, args.n)
            return tt, "tt"
        if args.corpus is not None:
            entry = corpus_entry(args.corpus)
            tt = entry.truth_table()
            label = entry.id
        else:
            if args.anf_file is not None:
                path = Path(args.anf_file)
                if not path.is_file():
                    raise CliError(f"no such file: {path}", EXIT_RESOURCE)
                lines = path.read_text(encoding="utf-8").splitlines()
                text = " ".join(ln for ln in lines if not ln.lstrip().startswith("#"))
                label = str(path)
            else:
                text, label = args.anf, "anf"
            tt = anf_to_tt(parse_anf(text, args.n))
    except KeyError as exc:
        raise CliError(str(exc), EXIT_RESOURCE) from None
    except ValueError as exc:
        raise CliError(str(exc), EXIT_PARSE) from None
    if args.n is not None and tt.n != args.n:
        raise CliError(f"function has n={tt.n}, but --n {args.n} was given", EXIT_PARSE)
    return tt, label


def _add_function_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--tt", help="truth table as hex (LSB-first bytes)")
    p.add_argument("--anf", help="ANF expression, e.g. 'x1x2 + x3'")
    p.add_argument("--anf-file", help="file holding an ANF expression ('#' lines ignored)")
    p.add_argument("--corpus", help="bundled corpus id, e.g. f_7_4")
    p.add_argument("--n", type=int, help="number of variables (inferred when omitted)")


def cmd_analyze(args) -> int:
    tt, label = _load_function(args)
    metric = Metric.parse(args.metric)
    t0 = time.perf_counter()
    res = alpha(tt, args.k, metric, threads=args.threads, budget=args.budget)
    record = {
        "command": "analyze",
        "input": label,
        "n": tt.n,
        "k": args.k,
        "metric": metric.value,
        "value": res.value,
        "witness": res.witness.to_text(),
        "flats_scanned": res.flats_scanned,
    }
    if args.threshold is not None:
        rep = bad_flat_count(tt, args.k, metric, args.threshold, threads=args.threads, budget=args.budget)
        record["bad_flats"] = {"threshold": rep.threshold, "bad": rep.bad_count, "total": rep.total}
    elapsed = time.perf_counter() - t0
    symbol = "alpha" if metric is Metric.DEGREE else "alpha'"
    lines = [
        f"{symbol}(f, {args.k}) = {res.value}",
        f"witness: {res.witness.to_text()}",
        f"flats scanned: {res.flats_scanned}",
    ]
    if "bad_flats" in record:
        b = record["bad_flats"]
        lines.append(f"bad flats (threshold {b['threshold']}): {b['bad']} / {b['total']}")
    lines.append(f"wall time: {elapsed:.3f} s")
    record["wall_time_s"] = round(elapsed, 6)
    _emit(args, record, lines)
    return EXIT_OK


def cmd_search(args) -> int:
    if args.seed is None:
        raise CliError("search requires --seed", EXIT_PARSE)
    try:
        cfg = SearchConfig(
            n=args.n,
            k=args.k,
            metric=Metric.parse(args.metric),
            threshold=args.threshold,
            steps=args.steps,
            restarts=args.restarts,
            seed=args.seed,
            flip_probs=(args.p_single, 1.0 - args.p_single),
            budget=args.budget,
        )
    except ValueError as exc:
        raise CliError(str(exc), EXIT_PARSE) from None
    out = search(cfg, workers=args.threads)
    record = {
        "command": "search",
        "config": {
            "n": cfg.n,
            "k": cfg.k,
            "metric": cfg.metric.value,
            "threshold": cfg.threshold,
            "steps": cfg.steps,
            "restarts": cfg.restarts,
            "seed": cfg.seed,
            "flip_probs": list(cfg.flip_probs),
        },
        "rng": out.rng,
        "status": out.status,
        "bad_flats": out.bad_flats,
        "total_flats": count_flats(cfg.n, cfg.k),
        "restarts_used": out.restarts_used,
        "steps_used": out.steps_used,
        "restart_best": out.restart_best,
        "tt": out.function.to_hex(),
        "anf": print_anf(mobius(out.function)),
    }
    lines = [
        f"status: {out.status}",
        f"bad flats: {out.bad_flats} / {record['total_flats']}",
        f"restarts used: {out.restarts_used}, steps used: {out.steps_used}",
        f"tt: {record['tt']}",
        f"anf: {record['anf']}",
    ]
    if args.report:
        Path(args.report).write_text(json.dumps({"schema": SCHEMA, **record}, indent=2) + "\n")
    _emit(args, record, lines)
    return EXIT_OK if out.status == "found" else EXIT_CLAIM


def cmd_bounds(args) -> int:
    try:
        res = resolve_bounds(args.n, args.k, Metric.parse(args.metric))
    except ValueError as exc:
        raise CliError(str(exc), EXIT_PARSE) from None
    name = "g" if res.metric is Metric.DEGREE else "g'"
    record = {
        "command": "bounds",
        "n": res.n,
        "k": res.k,
        "metric": res.metric.value,
        "lo": res.lo,
        "hi": res.hi,
        "cell": res.cell(),
        "provenance": [{"bound": c.name, "side": c.side, "value": c.value} for c in res.provenance],
    }
    lines = [f"{res.lo} <= {name}({res.n}, {res.k}) <= {res.hi}"]
    lines += [f"  {c.side} {c.value:>4}  {c.name}" for c in res.provenance]
    _emit(args, record, lines)
    return EXIT_OK


def cmd_table(args) -> int:
    doc = render_tables(args.max_n, args.max_k, Metric.parse(args.metric))
    if args.json:
        _emit(args, {"command": "table", "metric": doc.metric.value, "rows": doc.rows()}, [])
    elif args.format == "csv":
        sys.stdout.write(doc.to_csv())
    else:
        sys.stdout.write(doc.to_text())
    return EXIT_OK


def cmd_flats(args) -> int:
    if not 0 <= args.k <= args.n:
        raise CliError(f"need 0 <= k <= n, got n={args.n}, k={args.k}", EXIT_PARSE)
    total = count_flats(args.n, args.k)
    if args.count:
        _emit(args, {"command": "flats", "n": args.n, "k": args.k, "count": total}, [str(total)])
        return EXIT_OK
    if args.through is not None:
        it = enumerate_flats_through(args.n, args.k, args.through, budget=args.budget)
    else:
        it = enumerate_flats(args.n, args.k, budget=args.budget)
    flats = []
    for i, flat in enumerate(it):
        if args.limit is not None and i >= args.limit:
            break
        flats.append(flat.to_text())
    _emit(args, {"command": "flats", "n": args.n, "k": args.k, "count": total, "flats": flats}, flats)
    return EXIT_OK


def cmd_parse(args) -> int:
    tt, label = _load_function(args)
    anf = mobius(tt)
    record = {
        "command": "parse",
        "n": tt.n,
        "anf": print_anf(anf),
        "tt": tt.to_hex(),
        "degree": degree(tt),
        "weight": tt.weight(),
    }
    if tt.n >= 1:
        record["nonlinearity"] = nonlinearity(tt)
    lines = [f"{key}: {record[key]}" for key in ("n", "anf", "tt", "degree", "weight", "nonlinearity") if key in record]
    _emit(args, record, lines)
    return EXIT_OK


def cmd_verify_paper(args) -> int:
    try:
        entries = corpus(witness_ns=args.witness_n, directory=args.corpus_dir)
    except (FileNotFoundError, OSError) as exc:
        raise CliError(str(exc), EXIT_RESOURCE) from None
    except ValueError as exc:
        raise CliError(f"corrupt corpus resource: {exc}", EXIT_RESOURCE) from None
    if args.entry:
        wanted = set(args.entry)
        entries = [e for e in entries if e.id in wanted]
        missing = wanted - {e.id for e in entries}
        for entry_id in sorted(missing):
            if entry_id.startswith("thm22_witness_"):
                entries.append(corpus_entry(entry_id))
            else:
                raise CliError(f"no corpus entry {entry_id!r}", EXIT_RESOURCE)
    checks = []
    for entry in entries:
        checks.extend(verify_claim(entry, threads=args.threads, budget=args.budget))
    records = [c.to_record() for c in checks]
    failed = sum(not c.passed for c in checks)
    lines = [f"{c.status.upper():4}  {c.id:18} {c.claim:42} expected {c.expected:>6}  computed {c.computed:>6}" for c in checks]
    lines.append(f"{len(checks) - failed}/{len(checks)} claims pass")
    _emit(args, {"command": "verify-paper", "checks": records, "failed": failed}, lines)
    return EXIT_CLAIM if failed else EXIT_OK


def cmd_exhaust(args) -> int:
    metric = Metric.parse(args.metric)

    def progress(done: int, total: int) -> None:
        if args.progress:
            print(f"\r{done}/{total} functions", end="", file=sys.stderr, flush=True)

    value, witness = exhaustive_max(args.n, args.k, metric, override=args.override, progress=progress)
    if args.progress:
        print(file=sys.stderr)
    name = "g" if metric is Metric.DEGREE else "g'"
    record = {
        "command": "exhaust",
        "n": args.n,
        "k": args.k,
        "metric": metric.value,
        "value": value,
        "tt": witness.to_hex(),
        "anf": print_anf(mobius(witness)),
    }
    lines = [f"{name}({args.n}, {args.k}) = {value}", f"maximizer tt: {record['tt']}", f"maximizer anf: {record['anf']}"]
    _emit(args, record, lines)
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_PARSE)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="flatdeg", description="Boolean functions restricted to affine subspaces of F_2^n.")
    parser.add_argument("--version", action="version", version=f"flatdeg {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--threads", type=int, default=1, help="max parallel scan workers")
    common.add_argument("--budget", type=int, default=None, help="max flats to enumerate")
    common.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("analyze", parents=[common], help="alpha / alpha' of one function")
    _add_function_args(p)
    p.add_argument("-k", "--k", type=int, required=True)
    p.add_argument("--metric", default="degree", choices=["degree", "nonlinearity", "nl"])
    p.add_argument("--threshold", type=int, help="also count bad flats at this threshold")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("search", parents=[common], help="hill-climb for a function with no bad flats")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("-k", "--k", type=int, required=True)
    p.add_argument("--metric", default="degree", choices=["degree", "nonlinearity", "nl"])
    p.add_argument("--threshold", type=int, required=True)
    p.add_argument("--steps", type=int, default=100_000)
    p.add_argument("--restarts", type=int, default=10)
    p.add_argument("--seed", type=int)
    p.add_argument("--p-single", type=float, default=0.5, help="probability of a one-point flip")
    p.add_argument("--report", help="also write the JSON run report to this path")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("bounds", parents=[common], help="interval for g(n,k) or g'(n,k)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("-k", "--k", type=int, required=True)
    p.add_argument("--metric", default="degree", choices=["degree", "nonlinearity", "nl"])
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("table", parents=[common], help="table of g or g' values and bounds")
    p.add_argument("--max-n", type=int, default=12)
    p.add_argument("--max-k", type=int, default=6)
    p.add_argument("--metric", default="degree", choices=["degree", "nonlinearity", "nl"])
    p.add_argument("--format", default="text", choices=["text", "csv"])
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("flats", parents=[common], help="count or list k-flats")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("-k", "--k", type=int, required=True)
    p.add_argument("--through", type=int, help="only flats containing this point index")
    p.add_argument("--count", action="store_true", help="print only the number of flats")
    p.add_argument("--limit", type=int)
    p.set_defaults(func=cmd_flats)

    p = sub.add_parser("parse", parents=[common], help="normalize an ANF / truth table")
    _add_function_args(p)
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("verify-paper", parents=[common], help="check the bundled corpus claims")
    p.add_argument("--entry", action="append", help="only this corpus id (repeatable)")
    p.add_argument("--corpus-dir", help="read corpus files from this directory")
    p.add_argument("--witness-n", type=int, nargs="*", default=[3, 4, 5, 6, 7, 8, 9])
    p.set_defaults(func=cmd_verify_paper)

    p = sub.add_parser("exhaust", parents=[common], help="exact g/g' by scanning every function")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("-k", "--k", type=int, required=True)
    p.add_argument("--metric", default="degree", choices=["degree", "nonlinearity", "nl"])
    p.add_argument("--override", action="store_true", help="allow n > 4 (very long)")
    p.add_argument("--progress", action="store_true", help="progress on stderr")
    p.set_defaults(func=cmd_exhaust)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"flatdeg: {exc}", file=sys.stderr)
        return exc.code
    except BudgetExceeded as exc:
        print(f"flatdeg: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except AnfSyntaxError as exc:
        print(f"flatdeg: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ValueError as exc:
        print(f"flatdeg: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Exit codes: 0 success, 1 verification violation, 2 oracle FAIL, 3 usage or parse error.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from typing import Sequence, TextIO

from . import bench as bench_mod
from .coins import parse_seed
from .components import QueryFailed
from .instances import (
    GenerationError,
    ParseError,
    gen_cnf,
    gen_graph,
    gen_hypergraph,
    parse_cnf,
    parse_graph,
    parse_hypergraph,
    write_cnf,
    write_graph,
    write_hypergraph,
)
from .lll import InfeasibleParams, check_params, check_params_cnf
from .verify import ALGORITHMS, make_session, sweep, verify_report

EXIT_OK, EXIT_VIOLATION, EXIT_FAIL, EXIT_USAGE = 0, 1, 2, 3

KIND = {"mis": "graph", "isc": "graph", "broadcast": "graph", "color": "hypergraph", "cnf": "cnf"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive(text: str) -> float:
    value = float(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _seed(text: str) -> int:
    try:
        return parse_seed(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _add_instance_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--algo", required=True, choices=ALGORITHMS)
    src = p.add_mutually_exclusive_group()
    src.add_argument("--graph", help="graph file ('n m d' header + edge lines)")
    src.add_argument("--hypergraph", help="hypergraph file ('m N k d' header + hyperedges)")
    src.add_argument("--cnf", help="DIMACS CNF file")
    src.add_argument("--gen", help="generate instead: n,d for graphs; m,d,k,N otherwise")
    p.add_argument("--seed", type=_seed, default=None, help="session seed (decimal or 0x hex); default $LCA_SEED or 0")
    p.add_argument("--gen-seed", type=_seed, default=None, help="generator seed; defaults to --seed")


def _add_override_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--c", type=_positive, help="MIS/ISC phase-2 cap constant")
    p.add_argument("--c1", type=_positive, help="coloring phase-2 cap constant")
    p.add_argument("--c2", type=_positive, help="coloring phase-3 cap constant")
    p.add_argument("--c3", type=_positive, help="coloring retry-count constant")
    p.add_argument("--rounds-factor", type=_positive, help="multiplier in r = factor * d * log2 d")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lca", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen", help="generate a random instance")
    _add_instance_args(p)
    p.add_argument("--out", help="output file (default stdout)")

    p = sub.add_parser("query", help="answer a single query")
    _add_instance_args(p)
    _add_override_args(p)
    p.add_argument("--vertex", type=int, required=True, help="vertex / variable id (0-based)")

    p = sub.add_parser("sweep", help="query every entity and emit the full solution")
    _add_instance_args(p)
    _add_override_args(p)
    p.add_argument("--order", default="ascending", help="'ascending' or 'random:<seed>'")
    p.add_argument("--format", choices=("text", "csv", "json"), default="text")
    p.add_argument("--report", help="also write the sweep summary as JSON to this file")

    p = sub.add_parser("verify", help="check a solution (or a fresh sweep) against the instance")
    _add_instance_args(p)
    _add_override_args(p)
    p.add_argument("--solution", help="solution in 'sweep --format text' form; omitted: sweep now")
    p.add_argument("--order", default="ascending")

    p = sub.add_parser("params", help="print the (k1, k2, k3) split or INFEASIBLE")
    p.add_argument("--algo", required=True, choices=("color", "cnf"))
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--d", type=int, required=True)

    p = sub.add_parser("bench", help="per-query cost across a size ladder")
    p.add_argument("--algo", required=True, choices=ALGORITHMS)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--k", type=int, help="hyperedge / clause width (color, cnf)")
    p.add_argument("--sizes", required=True, help="'lo:hi[:factor]' or comma list")
    p.add_argument("--queries", type=int, default=200)
    p.add_argument("--seed", type=_seed, default=None)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    _add_override_args(p)
    return parser


def _default_seed(seed: int | None) -> int:
    if seed is not None:
        return seed
    return parse_seed(os.environ.get("LCA_SEED", "0"))


def _overrides(args: argparse.Namespace) -> dict:
    algo = args.algo
    if algo in ("mis", "isc", "broadcast"):
        return {"c": args.c, "rounds_factor": args.rounds_factor}
    return {"c1": args.c1, "c2": args.c2, "c3": args.c3}


def _parse_gen(spec: str, kind: str) -> list[int]:
    try:
        vals = [int(x) for x in spec.split(",")]
    except ValueError:
        raise UsageError(f"--gen expects integers, got {spec!r}") from None
    want = 2 if kind == "graph" else 4
    if len(vals) != want:
        raise UsageError(f"--gen for a {kind} needs {'n,d' if want == 2 else 'm,d,k,N'}")
    return vals


def load_instance(args: argparse.Namespace):
    kind = KIND[args.algo]
    if args.gen:
        vals = _parse_gen(args.gen, kind)
        gseed = args.gen_seed if args.gen_seed is not None else _default_seed(args.seed)
        if kind == "graph":
            return gen_graph(vals[0], vals[1], gseed)
        m, d, k, N = vals
        return (gen_hypergraph if kind == "hypergraph" else gen_cnf)(m, N, k, d, gseed)
    path = {"graph": args.graph, "hypergraph": args.hypergraph, "cnf": args.cnf}[kind]
    if path is None:
        raise UsageError(f"--algo {args.algo} needs --{kind} FILE or --gen")
    parser = {"graph": parse_graph, "hypergraph": parse_hypergraph, "cnf": parse_cnf}[kind]
    with open(path) as fh:
        return parser(fh)


def format_answer(algo: str, answer) -> str:
    if algo == "mis":
        return "IN" if answer else "OUT"
    if algo == "color":
        return answer.name
    if algo == "cnf":
        return "TRUE" if answer else "FALSE"
    return str(answer)


def _parse_answer(algo: str, token: str):
    if algo == "mis":
        return {"IN": True, "OUT": False}[token]
    if algo == "color":
        return {"RED": 0, "BLUE": 1}[token]
    if algo == "cnf":
        return {"TRUE": True, "FALSE": False}[token]
    return int(token)


def write_solution(report, out: TextIO, fmt: str) -> None:
    algo = report.algorithm
    ids = sorted(report.answers)
    if fmt == "json":
        payload = {
            "answers": {str(v): format_answer(algo, report.answers[v]) for v in ids},
            "failed": sorted(report.failed),
            "report": report.summary(),
        }
        json.dump(payload, out, indent=1)
        out.write("\n")
    elif fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["entity", "answer", "touched", "us"])
        pos = {v: i for i, v in enumerate(report.order)}
        for v in sorted(report.order):
            i = pos[v]
            ans = format_answer(algo, report.answers[v]) if v in report.answers else "FAIL"
            w.writerow([v, ans, report.touched[i], f"{1e6 * report.wall_times[i]:.1f}"])
    elif algo == "cnf":
        lits = [(v + 1) if report.answers[v] else -(v + 1) for v in ids]
        for start in range(0, len(lits), 10):
            out.write("v " + " ".join(map(str, lits[start : start + 10])) + "\n")
        out.write("v 0\n")
    else:
        for v in ids:
            out.write(f"{v} {format_answer(algo, report.answers[v])}\n")


def read_solution(algo: str, stream: TextIO) -> dict:
    answers: dict = {}
    for lineno, line in enumerate(stream, start=1):
        parts = line.split()
        if not parts:
            continue
        try:
            if parts[0] == "v":
                for lit in map(int, parts[1:]):
                    if lit:
                        answers[abs(lit) - 1] = lit > 0
                continue
            answers[int(parts[0])] = _parse_answer(algo, parts[1])
        except (ValueError, KeyError, IndexError):
            raise ParseError(f"bad solution line {line.strip()!r}", lineno) from None
    return answers


# --- commands --------------------------------------------------------------------


def cmd_gen(args) -> int:
    inst = load_instance(args)
    writer = {"graph": write_graph, "hypergraph": write_hypergraph, "cnf": write_cnf}[KIND[args.algo]]
    if args.out:
        with open(args.out, "w") as fh:
            writer(inst, fh)
    else:
        writer(inst, sys.stdout)
    return EXIT_OK


def cmd_query(args) -> int:
    inst = load_instance(args)
    session = make_session(args.algo, inst, _default_seed(args.seed), **_overrides(args))
    try:
        answer = session.query(args.vertex)
    except IndexError:
        raise UsageError(f"no entity {args.vertex}") from None
    except QueryFailed as exc:
        print(f"FAIL {session.touched}")
        print(f"lca: {exc}", file=sys.stderr)
        return EXIT_FAIL
    print(f"{format_answer(args.algo, answer)} {session.touched}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    inst = load_instance(args)
    report = sweep(args.algo, inst, _default_seed(args.seed), order=args.order, **_overrides(args))
    if report.failed and args.format == "text":
        print(f"lca: {report.fail_count} queries failed, first at {report.failed[0]}", file=sys.stderr)
        return EXIT_FAIL
    write_solution(report, sys.stdout, args.format)
    if args.report:
        with open(args.report, "w") as fh:
            json.dump(report.summary(), fh, indent=1)
    return EXIT_FAIL if report.failed else EXIT_OK


def cmd_verify(args) -> int:
    from .verify import SweepReport

    inst = load_instance(args)
    if args.solution:
        with open(args.solution) as fh:
            answers = read_solution(args.algo, fh)
        report = SweepReport(args.algo, sorted(answers), answers=answers)
    else:
        report = sweep(args.algo, inst, _default_seed(args.seed), order=args.order, **_overrides(args))
        if report.failed:
            print(f"FAIL {report.fail_count}")
            return EXIT_FAIL
    try:
        violation = verify_report(report, inst)
    except (KeyError, IndexError) as exc:
        print(json.dumps({"kind": "incomplete_solution", "witness": [str(exc)]}))
        return EXIT_VIOLATION
    if violation is not None:
        print(violation.to_record())
        return EXIT_VIOLATION
    print("OK")
    return EXIT_OK


def cmd_params(args) -> int:
    fn = check_params if args.algo == "color" else check_params_cnf
    triple = fn(args.k, args.d)
    if triple is None:
        print("INFEASIBLE")
        return EXIT_USAGE
    print(" ".join(map(str, triple)))
    return EXIT_OK


def cmd_bench(args) -> int:
    sizes = bench_mod.parse_sizes(args.sizes)
    overrides = {k: v for k, v in _overrides(args).items() if v is not None}
    rows = bench_mod.bench(
        args.algo,
        sizes,
        args.d,
        _default_seed(args.seed),
        queries=args.queries,
        k=args.k,
        jobs=args.jobs,
        **overrides,
    )
    if args.format == "json":
        json.dump(rows, sys.stdout, indent=1)
        sys.stdout.write("\n")
    else:
        w = csv.DictWriter(sys.stdout, fieldnames=bench_mod.COLUMNS, lineterminator="\n")
        w.writeheader()
        for row in rows:
            w.writerow({**row, "mean_us_per_query": f"{row['mean_us_per_query']:.1f}"})
    return EXIT_OK


COMMANDS = {
    "gen": cmd_gen,
    "query": cmd_query,
    "sweep": cmd_sweep,
    "verify": cmd_verify,
    "params": cmd_params,
    "bench": cmd_bench,
}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except BrokenPipeError:
        # downstream closed early (e.g. piped into head); not an error of ours
        sys.stderr.close()
        return EXIT_OK
    except (UsageError, ParseError, GenerationError, InfeasibleParams, ValueError, OSError) as exc:
        print(f"lca: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

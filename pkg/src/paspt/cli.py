"""Command-line front end: ``paspt gen|build|query|eval``.

Exit codes: 0 success, 1 usage or parameter error, 2 unreachable target.
Answers go to stdout, diagnostics to stderr.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path
from typing import Optional, Sequence, TextIO

from .evaluation import ExperimentConfig, gen_ba, gen_er, gen_grid, run_experiment, write_csv
from .general import build_paspt
from .graph import UNREACHABLE, ParameterError, format_edge_list, format_weight, read_graph
from .oracle import build_oracle_compact, build_oracle_const, load_oracle
from .structure import PathFailure, path_failure
from .tree import build_spt
from .twopath import Oracle2, build_oracle2, build_paspt2

EXIT_OK, EXIT_PARAM, EXIT_UNREACHABLE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse exits with 2 by default
        raise UsageError(message)


def _parser() -> argparse.ArgumentParser:
    p = _Parser(prog="paspt", description="Fault-tolerant shortest-path trees for path failures.")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="generate a random weighted graph (edge list)")
    g.add_argument("--family", choices=("er", "ba", "grid"), required=True)
    g.add_argument("--n", type=int, default=0)
    g.add_argument("--m", type=int, default=0)
    g.add_argument("--rows", type=int, default=0)
    g.add_argument("--cols", type=int, default=0)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--lo", type=int, default=100)
    g.add_argument("--hi", type=int, default=100_000)
    g.add_argument("--out", help="output file (default: stdout)")

    b = sub.add_parser("build", help="build a structure or an oracle")
    b.add_argument("graph", help="edge list or DIMACS .gr file")
    b.add_argument("--root", type=int, default=0)
    b.add_argument("--variant", choices=("general", "two_path"), default="general")
    b.add_argument("--f", type=int, default=2)
    b.add_argument("--k", type=int, default=1)
    b.add_argument("--oracle", choices=("none", "const", "compact"), default="none",
                   help="write an oracle instead of the structure")
    b.add_argument("--seed", type=int, default=0, help="sampling seed of the compact oracle")
    b.add_argument("--out", required=True)

    q = sub.add_parser("query", help="query an oracle file")
    q.add_argument("oracle")
    q.add_argument("--failure", help="deepest failed vertex and length, as v:eta")
    q.add_argument("--target", type=int)
    q.add_argument("--path", action="store_true", help="also print the path")
    q.add_argument("--batch", action="store_true",
                   help="read 'v eta t' lines from stdin, one answer per line")

    e = sub.add_parser("eval", help="run experiments from a JSON config")
    e.add_argument("config", help='JSON list of experiments, or {"experiments": [...]}')
    e.add_argument("--out", help="CSV file (default: stdout)")
    e.add_argument("--no-timing", action="store_true", help="leave timing columns empty")
    return p


def cmd_gen(a: argparse.Namespace, out: TextIO) -> int:
    if a.family == "er":
        g = gen_er(a.n, a.m, a.seed, a.lo, a.hi)
    elif a.family == "ba":
        g = gen_ba(a.n, a.m, a.seed, a.lo, a.hi)
    else:
        g = gen_grid(a.rows, a.cols, a.seed, a.lo, a.hi)
    text = format_edge_list(g)
    if a.out:
        Path(a.out).write_text(text, encoding="utf-8")
    else:
        out.write(text)
    return EXIT_OK


def cmd_build(a: argparse.Namespace, out: TextIO) -> int:
    g = read_graph(a.graph)
    if not 0 <= a.root < g.n:
        raise ParameterError(f"root {a.root} outside 0..{g.n - 1}")
    if a.variant == "two_path" and a.f != 2:
        raise ParameterError("the two_path variant handles f = 2 only")
    start = time.perf_counter()
    t = build_spt(g, a.root)
    if a.oracle == "none":
        h = build_paspt2(g, a.root, tree=t) if a.variant == "two_path" else build_paspt(g, a.root, a.f, a.k, tree=t)
        text = h.dumps()
        out.write(f"extra edges: {len(h.extra)}\nedges: {h.edge_count}\n")
    elif a.variant == "two_path":
        o = build_oracle2(g, a.root, tree=t)
        text = o.dumps()
        out.write(f"entries: {o.entries()}\n")
    elif a.oracle == "const":
        if a.k != 1:
            raise ParameterError("the constant-time oracle is exact on auxiliary graphs; use k = 1")
        o = build_oracle_const(g, a.root, a.f, tree=t)
        text = o.dumps()
        out.write(f"entries: {o.entries()}\n")
    else:
        o = build_oracle_compact(g, a.root, a.f, a.k, a.seed, tree=t)
        text = o.dumps()
        out.write(f"entries: {o.entries()}\n")
    out.write(f"build ms: {(time.perf_counter() - start) * 1000.0:.1f}\n")
    Path(a.out).write_text(text, encoding="utf-8")
    return EXIT_OK


def _failure(oracle, v: int, eta: int) -> PathFailure:
    limit = 2 if isinstance(oracle, Oracle2) else oracle.f
    if eta > limit:
        raise ParameterError(f"failure length {eta} exceeds f = {limit}")
    return path_failure(oracle.tree, v, eta)


def _answer(oracle, v: int, eta: int, t: int, with_path: bool) -> tuple[str, bool]:
    if not 0 <= t < oracle.tree.n:
        raise ParameterError(f"target {t} outside 0..{oracle.tree.n - 1}")
    ans = oracle.query(_failure(oracle, v, eta), t, with_path)
    if ans.distance == UNREACHABLE:
        return "dist inf", False
    line = f"dist {format_weight(ans.distance)}"
    if with_path and ans.path is not None:
        line += " path " + " ".join(map(str, ans.path))
    return line, True


def _parse_failure(text: str) -> tuple[int, int]:
    try:
        v, eta = text.split(":")
        return int(v), int(eta)
    except ValueError:
        raise UsageError(f"failure must look like v:eta, got {text!r}") from None


def cmd_query(a: argparse.Namespace, out: TextIO, stdin: TextIO) -> int:
    oracle = load_oracle(Path(a.oracle).read_text(encoding="utf-8"))
    if a.batch:
        for raw in stdin:
            parts = raw.split()
            if not parts:
                continue
            if len(parts) != 3:
                raise UsageError(f"batch lines need 'v eta t', got {raw.strip()!r}")
            v, eta, t = map(int, parts)
            out.write(_answer(oracle, v, eta, t, a.path)[0] + "\n")
        return EXIT_OK
    if a.failure is None or a.target is None:
        raise UsageError("query needs --failure and --target (or --batch)")
    v, eta = _parse_failure(a.failure)
    line, ok = _answer(oracle, v, eta, a.target, a.path)
    out.write(line + "\n")
    return EXIT_OK if ok else EXIT_UNREACHABLE


def load_configs(text: str) -> list[ExperimentConfig]:
    doc = json.loads(text) if text.strip() else []
    if isinstance(doc, dict):
        doc = doc.get("experiments", [])
    if not isinstance(doc, list):
        raise ParameterError("config must be a list of experiments")
    return [ExperimentConfig.from_dict(d) for d in doc]


def cmd_eval(a: argparse.Namespace, out: TextIO) -> int:
    configs = load_configs(Path(a.config).read_text(encoding="utf-8"))
    rows = [run_experiment(c) for c in configs]
    text = write_csv(rows, timing=not a.no_timing)
    if a.out:
        Path(a.out).write_text(text, encoding="utf-8")
    else:
        out.write(text)
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None, stdout: Optional[TextIO] = None,
         stdin: Optional[TextIO] = None, stderr: Optional[TextIO] = None) -> int:
    out = stdout if stdout is not None else sys.stdout
    err = stderr if stderr is not None else sys.stderr
    try:
        a = _parser().parse_args(argv)
        if a.cmd == "gen":
            return cmd_gen(a, out)
        if a.cmd == "build":
            return cmd_build(a, out)
        if a.cmd == "query":
            return cmd_query(a, out, stdin if stdin is not None else sys.stdin)
        return cmd_eval(a, out)
    except (UsageError, ParameterError, OSError, ValueError, KeyError, TypeError) as exc:
        err.write(f"paspt: error: {exc}\n")
        return EXIT_PARAM


if __name__ == "__main__":
    sys.exit(main())

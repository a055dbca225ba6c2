"""Command-line front end: ``pards solve | bench | gen | oracle``.

Exit codes for ``solve``: 0 optimal, 2 timeout (best incumbent reported),
3 infeasible, 1 usage or input error.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .config import Config, parse_rule_mask
from .formats import (GraphFormat, ParseError, parse_cnf, read_instance, result_document,
                      write_cnf, write_graph, write_pds, write_result)
from .graph import BipartiteInstance, ContractError, Graph, build_instance
from .oracle import (GuardExceeded, bipartite_view, brute_force_mds, brute_force_pds, gen_gnm,
                     random_3sat, sat_to_pds)
from .solver import SolveResult, Status, solve_mds, solve_pds

EXIT_OK, EXIT_ERROR, EXIT_TIMEOUT, EXIT_INFEASIBLE = 0, 1, 2, 3
STATUS_EXIT = {Status.OPTIMAL: EXIT_OK, Status.TIMEOUT: EXIT_TIMEOUT, Status.INFEASIBLE: EXIT_INFEASIBLE}

VARIANTS = {"full": {}, "no-multilp": {"multilp_enabled": False}}
INSTANCE_SUFFIXES = {".txt", ".edges", ".el", ".dimacs", ".col", ".pds", ".clq", ".gr"}

log = logging.getLogger("pards")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; 2 means "timeout" here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _config(args) -> Config:
    cfg = Config.load(getattr(args, "config", None))
    changes = {}
    if getattr(args, "seed", None) is not None:
        changes["seed"] = args.seed
    if getattr(args, "time_limit", None) is not None:
        changes["time_limit_seconds"] = args.time_limit
    if getattr(args, "no_multilp", False):
        changes["multilp_enabled"] = False
    if getattr(args, "rules", None) is not None:
        changes["rules"] = parse_rule_mask(args.rules)
    if getattr(args, "branching", None) is not None:
        changes["branching"] = args.branching
    return cfg.with_(**changes)


def solve_instance(inst: Graph | BipartiteInstance, mode: str, cfg: Config) -> SolveResult:
    if mode == "mds":
        if not isinstance(inst, Graph):
            raise UsageError("mode mds needs a graph file, not a PdsText instance")
        return solve_mds(inst, cfg)
    if isinstance(inst, Graph):
        h = build_instance(inst)
        h.origin = {n: inst.label(v) for n, v in h.origin.items()}
        return solve_pds(h, cfg)
    return solve_pds(inst, cfg)


def _default_mode(inst) -> str:
    return "pds" if isinstance(inst, BipartiteInstance) else "mds"


def cmd_solve(args) -> int:
    try:
        inst = read_instance(args.input, args.format)
        cfg = _config(args)
        result = solve_instance(inst, args.mode or _default_mode(inst), cfg)
    except (OSError, ParseError, UsageError, ValueError) as exc:
        print(f"pards solve: {exc}", file=sys.stderr)
        return EXIT_ERROR
    text = write_result(result, str(args.input))
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return STATUS_EXIT[result.status]


# -- bench -------------------------------------------------------------------

CSV_FIELDS = ["instance", "category", "variant", "seed", "status", "size", "solution", "s_num",
              "lp_calls", "multilp_calls", "multilp_tightened", "nodes_pruned_by_bound",
              "ldpb_fallbacks", *[f"rule_{k}" for k in range(1, 10)], "wall_time", "error"]


@dataclass
class BenchTask:
    path: str
    category: str
    variant: str
    mode: str | None
    config: Config


@dataclass
class BenchRow:
    instance: str
    category: str
    variant: str
    seed: int
    status: str
    size: int | None = None
    solution: list = field(default_factory=list)
    s_num: int = 0
    lp_calls: int = 0
    multilp_calls: int = 0
    multilp_tightened: int = 0
    nodes_pruned_by_bound: int = 0
    ldpb_fallbacks: int = 0
    rule_fires: list[int] = field(default_factory=lambda: [0] * 9)
    wall_time: float = 0.0
    error: str = ""

    def as_csv(self) -> dict:
        row = {k: getattr(self, k) for k in CSV_FIELDS if hasattr(self, k)}
        row["size"] = "" if self.size is None else self.size
        row["solution"] = " ".join(str(x) for x in self.solution)
        row["wall_time"] = f"{self.wall_time:.3f}"
        for k in range(1, 10):
            row[f"rule_{k}"] = self.rule_fires[k - 1]
        return row


def run_task(task: BenchTask) -> BenchRow:
    """One (instance, variant) run; never raises."""
    row = BenchRow(task.path, task.category, task.variant, task.config.seed, "error")
    start = time.perf_counter()
    try:
        inst = read_instance(task.path)
        result = solve_instance(inst, task.mode or _default_mode(inst), task.config)
    except Exception as exc:  # recorded in the row, the batch goes on
        row.error = f"{type(exc).__name__}: {exc}"
        row.wall_time = time.perf_counter() - start
        return row
    doc = result_document(result)
    row.status = doc["status"]
    row.size = doc["size"]
    row.solution = doc["solution"] or []
    for key in ("s_num", "lp_calls", "multilp_calls", "multilp_tightened",
                "nodes_pruned_by_bound", "ldpb_fallbacks"):
        setattr(row, key, doc[key])
    row.rule_fires = list(result.stats.rule_fires)
    row.wall_time = result.stats.wall_time
    return row


def find_instances(root: Path) -> list[Path]:
    if root.is_file():
        return [root]
    return sorted(p for p in root.rglob("*") if p.is_file() and p.suffix.lower() in INSTANCE_SUFFIXES)


def summary_minutes(seconds: float) -> str:
    """Total time in minutes with two decimals; anything below 0.01 shows as 0.01."""
    minutes = math.floor(seconds / 60 * 100) / 100
    return f"{max(minutes, 0.01):.2f}"


def summarize(rows: list[BenchRow]) -> list[str]:
    groups: dict[tuple[str, str], list[BenchRow]] = {}
    for row in rows:
        groups.setdefault((row.category, row.variant), []).append(row)
    lines = []
    for (category, variant), members in sorted(groups.items()):
        total = sum(r.wall_time for r in members)
        unsolved = sum(r.status != Status.OPTIMAL.value for r in members)
        text = f"{category}\t{variant}\t{summary_minutes(total)}"
        if unsolved:
            text += f" ({unsolved})"
        lines.append(text)
    return lines


def run_bench(tasks: list[BenchTask], jobs: int) -> list[BenchRow]:
    if jobs <= 1 or len(tasks) <= 1:
        return [run_task(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(run_task, tasks))


def cmd_bench(args) -> int:
    root = Path(args.directory)
    if not root.exists():
        print(f"pards bench: {root} does not exist", file=sys.stderr)
        return EXIT_ERROR
    paths = find_instances(root)
    if not paths:
        print(f"pards bench: no instance files under {root}", file=sys.stderr)
        return EXIT_ERROR
    try:
        base = _config(args).with_(time_limit_seconds=args.timeout)
    except ValueError as exc:
        print(f"pards bench: {exc}", file=sys.stderr)
        return EXIT_ERROR
    variants = args.variants.split(",")
    unknown = [v for v in variants if v not in VARIANTS]
    if unknown:
        print(f"pards bench: unknown variant(s) {unknown}; choose from {sorted(VARIANTS)}", file=sys.stderr)
        return EXIT_ERROR
    tasks = []
    for p in paths:
        rel = p.parent.relative_to(root) if root.is_dir() else Path(".")
        category = str(rel) if str(rel) != "." else "all"
        for v in variants:
            tasks.append(BenchTask(str(p), category, v, args.mode, base.with_(**VARIANTS[v])))
    rows = run_bench(tasks, args.jobs or os.cpu_count() or 1)

    out = open(args.csv, "w", newline="", encoding="utf-8") if args.csv else sys.stdout
    try:
        writer = csv.DictWriter(out, fieldnames=CSV_FIELDS)
        writer.writeheader()
        for row in rows:
            writer.writerow(row.as_csv())
    finally:
        if out is not sys.stdout:
            out.close()
    for line in summarize(rows):
        print(line, file=sys.stderr if not args.csv else sys.stdout)
    return EXIT_OK


# -- gen ---------------------------------------------------------------------

def cmd_gen(args) -> int:
    out_dir = Path(args.out_dir)
    try:
        if args.kind == "gnm":
            graphs = [gen_gnm(args.n, args.m, args.seed + i) for i in range(args.count)]
            out_dir.mkdir(parents=True, exist_ok=True)
            for i, g in enumerate(graphs):
                name = f"gnm_n{args.n}_m{args.m}_s{args.seed + i}.txt"
                (out_dir / name).write_text(write_graph(g, GraphFormat.EDGELIST), encoding="utf-8")
                print(out_dir / name)
        elif args.kind == "3sat":
            out_dir.mkdir(parents=True, exist_ok=True)
            for i in range(args.count):
                f = random_3sat(args.n, args.m, args.seed + i)
                name = f"3sat_n{args.n}_m{args.m}_s{args.seed + i}.cnf"
                (out_dir / name).write_text(write_cnf(f), encoding="utf-8")
                print(out_dir / name)
        else:
            src = Path(args.cnf)
            f = parse_cnf(src.read_bytes())
            inst = sat_to_pds(f)
            out_dir.mkdir(parents=True, exist_ok=True)
            pds_path = out_dir / f"{src.stem}.pds"
            pds_path.write_text(write_pds(bipartite_view(inst)), encoding="utf-8")
            graph_path = out_dir / f"{src.stem}.graph.txt"
            graph_path.write_text(write_graph(inst.graph, GraphFormat.DIMACS), encoding="utf-8")
            meta = {"source": str(src), "num_vars": f.num_vars, "num_clauses": len(f.clauses),
                    "graph": graph_path.name, "pds": pds_path.name,
                    "parts": [[v + 1 for v in p] for p in inst.parts], "target_part": inst.target + 1}
            meta_path = out_dir / f"{src.stem}.json"
            meta_path.write_text(json.dumps(meta, indent=2) + "\n", encoding="utf-8")
            print(pds_path)
            print(meta_path)
    except (ValueError, OSError, ContractError) as exc:
        print(f"pards gen: {exc}", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_OK


# -- oracle ------------------------------------------------------------------

def cmd_oracle(args) -> int:
    try:
        inst = read_instance(args.input, args.format)
        mode = args.mode or _default_mode(inst)
        if mode == "mds":
            if not isinstance(inst, Graph):
                raise UsageError("mode mds needs a graph file")
            size = len(brute_force_mds(inst))
        else:
            h = build_instance(inst) if isinstance(inst, Graph) else inst
            sol = brute_force_pds(h)
            if sol is None:
                print("infeasible")
                return EXIT_INFEASIBLE
            size = len(sol)
    except GuardExceeded as exc:
        print(f"pards oracle: instance too large for brute force ({exc})", file=sys.stderr)
        return EXIT_ERROR
    except (OSError, ParseError, UsageError, ValueError) as exc:
        print(f"pards oracle: {exc}", file=sys.stderr)
        return EXIT_ERROR
    print(size)
    return EXIT_OK


# -- parser ------------------------------------------------------------------

def _add_solver_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--mode", choices=["mds", "pds"], help="default: pds for PdsText files, else mds")
    p.add_argument("--seed", type=int)
    p.add_argument("--no-multilp", action="store_true", help="disable LP-cascade bound tightening")
    p.add_argument("--rules", help="enabled reduction rules: 9-char 0/1 mask or list like 1,2,5")
    p.add_argument("--branching", choices=["ldpb", "maxdeg"])
    p.add_argument("--config", help="JSON config file (default: $PARDS_CONFIG)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pards", description="Exact minimum dominating set / cover solver.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="solve one instance")
    p.add_argument("input")
    p.add_argument("--format", choices=[f.value for f in GraphFormat], help="default: guessed from content")
    p.add_argument("--time-limit", type=float, help="seconds")
    p.add_argument("--out", help="write the result document here instead of stdout")
    _add_solver_flags(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("bench", help="run every instance in a directory")
    p.add_argument("directory")
    p.add_argument("--timeout", type=float, default=60.0, help="seconds per run (default 60)")
    p.add_argument("--jobs", type=int, default=0, help="parallel instances (default: all cores)")
    p.add_argument("--csv", help="CSV output path (default: stdout)")
    p.add_argument("--variants", default="full,no-multilp", help="comma list of: full, no-multilp")
    _add_solver_flags(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("gen", help="generate instances")
    gen = p.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    g = gen.add_parser("gnm", help="random connected graphs")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--m", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--count", type=int, default=1)
    g.add_argument("--out-dir", default=".")
    g = gen.add_parser("3sat", help="random 3-CNF formulas")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--m", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--count", type=int, default=1)
    g.add_argument("--out-dir", default=".")
    g = gen.add_parser("sat", help="cover instance built from a 3-CNF file")
    g.add_argument("cnf")
    g.add_argument("--out-dir", default=".")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("oracle", help="brute-force optimum of a small instance")
    p.add_argument("input")
    p.add_argument("--mode", choices=["mds", "pds"])
    p.add_argument("--format", choices=[f.value for f in GraphFormat])
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())

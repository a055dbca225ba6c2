"""Text formats for graphs, cover instances and CNF formulas, plus the result document.

Files use 1-based ids (DIMACS convention); everything in memory is 0-based.

* EdgeList: one ``u v`` pair per line.  A line with a single id declares an
  isolated vertex.  Ids are any non-negative integers and are renumbered
  ``0..n-1`` in increasing order; the original ids become vertex labels.
* Dimacs: ``p edge n m`` followed by ``m`` lines ``e u v`` with ``1 <= u, v <= n``.
* PdsText: ``p pds |UB| |UD| m`` followed by ``m`` lines ``e ub ud``.
* Cnf: DIMACS CNF with exactly three literals per clause.

Lines starting with ``#``, ``%`` or ``c`` (Dimacs, PdsText, Cnf) are comments.
Duplicate edges and self-loops are dropped silently.
"""

from __future__ import annotations

import enum
import json
import logging
from pathlib import Path

from .graph import BipartiteInstance, Graph
from .oracle import CnfFormula

log = logging.getLogger(__name__)

MAX_ID = 2**31 - 1


class GraphFormat(enum.Enum):
    EDGELIST = "edgelist"
    DIMACS = "dimacs"
    PDSTEXT = "pds"

    @classmethod
    def parse(cls, name: str) -> "GraphFormat":
        aliases = {"edgelist": cls.EDGELIST, "edges": cls.EDGELIST, "el": cls.EDGELIST,
                   "dimacs": cls.DIMACS, "col": cls.DIMACS, "pds": cls.PDSTEXT, "pdstext": cls.PDSTEXT}
        try:
            return aliases[name.lower()]
        except KeyError:
            raise ValueError(f"unknown format {name!r}") from None


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")


def _decode(text: str | bytes) -> str:
    if isinstance(text, bytes):
        try:
            return text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not UTF-8 ({exc.reason} at byte {exc.start})") from None
    return text


def _lines(text: str, dimacs_comments: bool):
    """Yield ``(line_number, tokens)`` for every non-blank, non-comment line."""
    for no, raw in enumerate(text.splitlines(), 1):
        tokens = raw.split()
        if not tokens or tokens[0][0] in "#%":
            continue
        if dimacs_comments and tokens[0] == "c":
            continue
        yield no, tokens


def _int(token: str, no: int, what: str = "id") -> int:
    try:
        value = int(token)
    except ValueError:
        raise ParseError(f"expected an integer {what}, got {token!r}", no) from None
    if value < 0:
        raise ParseError(f"negative {what} {value}", no)
    if value > MAX_ID:
        raise ParseError(f"{what} {value} overflows the id range", no)
    return value


def _header(tokens: list[str], no: int, kind: str, count: int) -> list[int]:
    if len(tokens) != 2 + count or tokens[1] != kind:
        raise ParseError(f"expected header 'p {kind}' with {count} numbers", no)
    return [_int(t, no, "header value") for t in tokens[2:]]


def parse_graph(text: str | bytes, fmt: GraphFormat | str = GraphFormat.EDGELIST) -> Graph:
    if isinstance(fmt, str):
        fmt = GraphFormat.parse(fmt)
    text = _decode(text)
    if fmt is GraphFormat.EDGELIST:
        return _parse_edgelist(text)
    if fmt is GraphFormat.DIMACS:
        return _parse_dimacs(text)
    raise ParseError("PdsText describes a cover instance; use parse_pds")


def _parse_edgelist(text: str) -> Graph:
    ids: set[int] = set()
    pairs = []
    for no, tokens in _lines(text, dimacs_comments=False):
        if len(tokens) > 2:
            raise ParseError(f"expected 'u v' or a single vertex, got {len(tokens)} fields", no)
        vs = [_int(t, no) for t in tokens]
        ids.update(vs)
        if len(vs) == 2:
            pairs.append(tuple(vs))
    labels = sorted(ids)
    index = {v: i for i, v in enumerate(labels)}
    g = Graph(len(labels), labels=labels)
    for a, b in pairs:
        if a != b:
            g.add_edge(index[a], index[b])
    return g


def _parse_dimacs(text: str) -> Graph:
    g = None
    declared = seen = 0
    for no, tokens in _lines(text, dimacs_comments=True):
        if tokens[0] == "p":
            if g is not None:
                raise ParseError("second header line", no)
            if len(tokens) == 4 and tokens[1] == "col":
                tokens = ["p", "edge", *tokens[2:]]
            n, declared = _header(tokens, no, "edge", 2)
            g = Graph(n, labels=list(range(1, n + 1)))
        elif tokens[0] == "e":
            if g is None:
                raise ParseError("edge before the 'p edge' header", no)
            if len(tokens) != 3:
                raise ParseError("expected 'e u v'", no)
            a, b = (_int(t, no) for t in tokens[1:])
            for v in (a, b):
                if not 1 <= v <= g.vertex_count:
                    raise ParseError(f"vertex {v} outside 1..{g.vertex_count}", no)
            seen += 1
            if a != b:
                g.add_edge(a - 1, b - 1)
        else:
            raise ParseError(f"unexpected line type {tokens[0]!r}", no)
    if g is None:
        raise ParseError("missing 'p edge n m' header")
    if seen != declared:
        raise ParseError(f"header declares {declared} edges, found {seen}")
    return g


def parse_pds(text: str | bytes) -> BipartiteInstance:
    """Cover instance; UB index ``i`` becomes node ``i-1`` and UD index ``j`` node ``|UB|+j-1``.

    Node origins are the declared 1-based indices.  UD nodes without any
    neighbor are kept (the solver reports the instance infeasible) and logged.
    """
    text = _decode(text)
    header = None
    adj: dict[int, set[int]] = {}
    seen = 0
    for no, tokens in _lines(text, dimacs_comments=True):
        if tokens[0] == "p":
            if header is not None:
                raise ParseError("second header line", no)
            header = _header(tokens, no, "pds", 3)
            adj = {u: set() for u in range(header[0])}
        elif tokens[0] == "e":
            if header is None:
                raise ParseError("edge before the 'p pds' header", no)
            if len(tokens) != 3:
                raise ParseError("expected 'e ub ud'", no)
            n_ub, n_ud, _ = header
            a, b = (_int(t, no) for t in tokens[1:])
            if not 1 <= a <= n_ub:
                raise ParseError(f"UB index {a} outside 1..{n_ub}", no)
            if not 1 <= b <= n_ud:
                raise ParseError(f"UD index {b} outside 1..{n_ud}", no)
            adj[a - 1].add(n_ub + b - 1)
            seen += 1
        else:
            raise ParseError(f"unexpected line type {tokens[0]!r}", no)
    if header is None:
        raise ParseError("missing 'p pds' header")
    n_ub, n_ud, declared = header
    if seen != declared:
        raise ParseError(f"header declares {declared} edges, found {seen}")
    origin = {u: u + 1 for u in range(n_ub)}
    origin.update({n_ub + j: j + 1 for j in range(n_ud)})
    h = BipartiteInstance.from_adjacency(adj, range(n_ub, n_ub + n_ud), origin)
    isolated = h.uncoverable()
    if isolated:
        log.warning("%d UD node(s) have no UB neighbor; the instance is infeasible", len(isolated))
    return h


def write_graph(g: Graph, fmt: GraphFormat | str = GraphFormat.EDGELIST) -> str:
    """Serialize with 1-based ids; labels are not written."""
    if isinstance(fmt, str):
        fmt = GraphFormat.parse(fmt)
    edges = g.edges()
    if fmt is GraphFormat.DIMACS:
        lines = [f"p edge {g.vertex_count} {len(edges)}"]
        lines += [f"e {a + 1} {b + 1}" for a, b in edges]
    elif fmt is GraphFormat.EDGELIST:
        touched = {v for e in edges for v in e}
        lines = [f"{v + 1}" for v in range(g.vertex_count) if v not in touched]
        lines += [f"{a + 1} {b + 1}" for a, b in edges]
    else:
        raise ValueError("use write_pds for cover instances")
    return "\n".join(lines) + "\n"


def write_pds(h: BipartiteInstance) -> str:
    """Serialize with both sides renumbered 1.. in id order."""
    ub_index = {u: i for i, u in enumerate(h.ub, 1)}
    ud_index = {d: j for j, d in enumerate(h.ud, 1)}
    edges = sorted((ub_index[u], ud_index[d]) for u in h.adj_ub for d in h.adj_ub[u])
    lines = [f"p pds {len(ub_index)} {len(ud_index)} {len(edges)}"]
    lines += [f"e {a} {b}" for a, b in edges]
    return "\n".join(lines) + "\n"


def parse_cnf(text: str | bytes) -> CnfFormula:
    text = _decode(text)
    header = None
    clauses = []
    current: list[int] = []
    for no, tokens in _lines(text, dimacs_comments=True):
        if tokens[0] == "p":
            if header is not None:
                raise ParseError("second header line", no)
            header = _header(tokens, no, "cnf", 2)
            continue
        if header is None:
            raise ParseError("clause before the 'p cnf' header", no)
        for tok in tokens:
            try:
                lit = int(tok)
            except ValueError:
                raise ParseError(f"expected a literal, got {tok!r}", no) from None
            if lit == 0:
                if len(current) != 3:
                    raise ParseError(f"clause has {len(current)} literals, need exactly 3", no)
                clauses.append(tuple(current))
                current = []
            elif abs(lit) > header[0]:
                raise ParseError(f"literal {lit} outside 1..{header[0]}", no)
            else:
                current.append(lit)
    if header is None:
        raise ParseError("missing 'p cnf' header")
    if current:
        raise ParseError("last clause is not terminated by 0")
    if len(clauses) != header[1]:
        raise ParseError(f"header declares {header[1]} clauses, found {len(clauses)}")
    return CnfFormula(header[0], tuple(clauses))


def write_cnf(f: CnfFormula) -> str:
    lines = [f"p cnf {f.num_vars} {len(f.clauses)}"]
    lines += [" ".join(str(lit) for lit in c) + " 0" for c in f.clauses]
    return "\n".join(lines) + "\n"


def result_document(result, instance: str | None = None) -> dict:
    """Flat, stable record of a :class:`~pards.solver.SolveResult`."""
    stats = result.stats
    doc = {
        "status": result.status.value,
        "size": result.size,
        "solution": result.labels,
        "s_num": stats.s_num,
        "lp_calls": stats.lp_calls,
        "multilp_calls": stats.multilp_calls,
        "multilp_tightened": stats.multilp_tightened,
        "rule_fires": {str(k): stats.rule_fires[k - 1] for k in range(1, 10)},
        "nodes_pruned_by_bound": stats.nodes_pruned_by_bound,
        "ldpb_fallbacks": stats.ldpb_fallbacks,
        "wall_time_seconds": round(stats.wall_time, 6),
    }
    if instance is not None:
        doc = {"instance": instance, **doc}
    return doc


def write_result(result, instance: str | None = None) -> str:
    """JSON result document (UTF-8 text, one trailing newline)."""
    return json.dumps(result_document(result, instance), indent=2, default=str) + "\n"


def read_instance(path: str | Path, fmt: GraphFormat | str | None = None):
    """Load a file as a :class:`Graph` or, for PdsText, a :class:`BipartiteInstance`.

    Without ``fmt`` the format is guessed from the first header line.
    """
    data = Path(path).read_bytes()
    if fmt is None:
        fmt = sniff_format(_decode(data))
    elif isinstance(fmt, str):
        fmt = GraphFormat.parse(fmt)
    if fmt is GraphFormat.PDSTEXT:
        return parse_pds(data)
    return parse_graph(data, fmt)


def sniff_format(text: str) -> GraphFormat:
    for _, tokens in _lines(text, dimacs_comments=True):
        if tokens[0] == "p" and len(tokens) > 1:
            return GraphFormat.PDSTEXT if tokens[1] == "pds" else GraphFormat.DIMACS
        if tokens[0] == "e":
            return GraphFormat.DIMACS
        return GraphFormat.EDGELIST
    return GraphFormat.EDGELIST

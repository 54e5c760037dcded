"""
Text file formats and reports.

Every input file starts with a header token naming its type:
  graph   n m        then m lines "u v"
  rtree   n root     then n-1 lines "child parent"
  table   n          then n rows of n element indices (identity is 0)
  perm    n g        then g lines of n images
Lines starting with '#' and blank lines are ignored.
"""

import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import perm
import table_group
from errors import ParseError, ValidationError
from graph_core import Graph
from perm import GenSet, Permutation
from table_group import TableGroup
from tree_alg import RootedTree

logger = logging.getLogger(__name__)

Parsed = Union[Graph, RootedTree, TableGroup, GenSet]
HEADERS = ('graph', 'rtree', 'table', 'perm')


# ============= PARSING =============
class _Lines:
    """Content lines with their 1-based line numbers"""

    def __init__(self, text: str, path: Optional[str]):
        self.path = path
        self.items: List[Tuple[int, str]] = []
        for number, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if line and not line.startswith('#'):
                self.items.append((number, line))
        self.pos = 0

    def error(self, message: str, line: Optional[int] = None) -> ParseError:
        return ParseError(message, self.path, line)

    def next(self, what: str) -> Tuple[int, str]:
        if self.pos >= len(self.items):
            last = self.items[-1][0] if self.items else None
            raise self.error(f"unexpected end of file, expected {what}", last)
        item = self.items[self.pos]
        self.pos += 1
        return item

    def ints(self, what: str, count: Optional[int] = None) -> Tuple[int, List[int]]:
        number, line = self.next(what)
        try:
            values = [int(tok) for tok in line.split()]
        except ValueError:
            raise self.error(f"expected integers for {what}, got {line!r}", number)
        if count is not None and len(values) != count:
            raise self.error(f"expected {count} integers for {what}, got {len(values)}", number)
        return number, values

    def finish(self):
        if self.pos < len(self.items):
            number, line = self.items[self.pos]
            raise self.error(f"unexpected trailing content {line!r}", number)


def _parse_graph(lines: _Lines) -> Graph:
    number, (n, m) = lines.ints('"n m"', 2)
    if n < 1 or m < 0:
        raise lines.error(f"need n >= 1 and m >= 0, got {n} {m}", number)
    seen = set()
    for _ in range(m):
        number, (u, v) = lines.ints('edge "u v"', 2)
        if u == v:
            raise lines.error(f"self-loop at vertex {u}", number)
        if not (0 <= u < n and 0 <= v < n):
            raise lines.error(f"edge ({u}, {v}) out of range 0..{n - 1}", number)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise lines.error(f"duplicate edge ({u}, {v})", number)
        seen.add(key)
    return Graph(n, frozenset(seen))


def _parse_rtree(lines: _Lines) -> RootedTree:
    header_line, (n, root) = lines.ints('"n root"', 2)
    if n < 1 or not (0 <= root < n):
        raise lines.error(f"need n >= 1 and 0 <= root < n, got {n} {root}", header_line)
    parent: List[Optional[int]] = [None] * n
    parent[root] = root
    for _ in range(n - 1):
        number, (child, par) = lines.ints('"child parent"', 2)
        if not (0 <= child < n and 0 <= par < n):
            raise lines.error(f"vertex out of range 0..{n - 1}", number)
        if child == root or parent[child] is not None:
            raise lines.error(f"vertex {child} already has a parent", number)
        parent[child] = par
    try:
        return RootedTree(n, tuple(parent), root)
    except ValidationError as e:
        raise lines.error(str(e), header_line)


def _parse_table(lines: _Lines) -> TableGroup:
    header_line, (n,) = lines.ints('"n"', 1)
    if n < 1:
        raise lines.error(f"table order must be positive, got {n}", header_line)
    rows = []
    for i in range(n):
        number, row = lines.ints(f"row {i}", n)
        if sorted(row) != list(range(n)):
            raise lines.error(f"row {i} is not a permutation of 0..{n - 1}", number)
        rows.append(row)
    # Column, identity and associativity failures span rows; they report the header line
    try:
        return table_group.validate_table(rows)
    except ValidationError as e:
        raise lines.error(str(e), header_line)


def _parse_perm(lines: _Lines) -> GenSet:
    header_line, (n, g) = lines.ints('"n g"', 2)
    if n < 1 or g < 0:
        raise lines.error(f"need n >= 1 and g >= 0, got {n} {g}", header_line)
    gens = []
    for i in range(g):
        number, images = lines.ints(f"generator {i}", n)
        try:
            gens.append(Permutation(tuple(images)))
        except ValidationError as e:
            raise lines.error(str(e), number)
    return GenSet(n, tuple(gens))


_PARSERS = {
    'graph': _parse_graph,
    'rtree': _parse_rtree,
    'table': _parse_table,
    'perm': _parse_perm,
}


def parse_text(text: str, path: Optional[str] = None) -> Parsed:
    lines = _Lines(text, path)
    number, header = lines.next('a header line')
    parser = _PARSERS.get(header)
    if parser is None:
        raise lines.error(f"unknown header {header!r}, expected one of {', '.join(HEADERS)}", number)
    obj = parser(lines)
    lines.finish()
    return obj


def parse_input(path) -> Parsed:
    """Read a file and build the object its header names"""
    path = Path(path)
    try:
        text = path.read_text(encoding='utf-8')
    except OSError as e:
        raise ParseError(f"cannot read file: {e.strerror or e}", str(path))
    obj = parse_text(text, str(path))
    logger.debug("parsed %s as %s", path, type(obj).__name__)
    return obj


# ============= SERIALIZATION =============
def serialize(obj: Parsed) -> str:
    if isinstance(obj, Graph):
        edges = obj.sorted_edges()
        lines = ['graph', f"{obj.n} {len(edges)}"] + [f"{u} {v}" for u, v in edges]
    elif isinstance(obj, RootedTree):
        lines = ['rtree', f"{obj.n} {obj.root}"]
        lines += [f"{v} {p}" for v, p in enumerate(obj.parent) if v != obj.root]
    elif isinstance(obj, TableGroup):
        lines = ['table', str(obj.n)] + [' '.join(map(str, row)) for row in obj.rows()]
    elif isinstance(obj, GenSet):
        lines = ['perm', f"{obj.degree} {len(obj.gens)}"] + [' '.join(map(str, g.images)) for g in obj.gens]
    else:
        raise ValidationError(f"cannot serialize {type(obj).__name__}")
    return '\n'.join(lines) + '\n'


def write_atomic(path, text: str):
    """Write through a temporary sibling, then move it into place"""
    path = Path(path)
    temp_path = path.with_name(path.name + '.tmp')
    try:
        with open(temp_path, 'w', encoding='utf-8') as f:
            f.write(text)
        temp_path.replace(path)
    except Exception as e:
        if temp_path.exists():
            temp_path.unlink()
        raise e


def write_object(path, obj: Parsed):
    write_atomic(path, serialize(obj))
    logger.debug("wrote %s to %s", type(obj).__name__, path)


# ============= REDUCTION ARTIFACTS =============
def provenance_text(reduction) -> str:
    lines = [
        '# component source offset size',
        f"p {reduction.p}",
        f"n {reduction.n}",
        f"complemented {'true' if reduction.complemented else 'false'}",
    ]
    for i, c in enumerate(reduction.components):
        lines.append(f"component {i} {c.source} {c.offset} {c.size}")
    return '\n'.join(lines) + '\n'


def provenance_path(graph_path) -> Path:
    graph_path = Path(graph_path)
    return graph_path.with_name(graph_path.name + '.provenance')


def write_reduction(reduction, graph_path, table_path) -> Path:
    """Z as a graph file, Z/pZ as a table file, and a provenance file next to Z"""
    write_object(graph_path, reduction.z)
    write_object(table_path, reduction.group)
    prov = provenance_path(graph_path)
    write_atomic(prov, provenance_text(reduction))
    return prov


# ============= REPORTS =============
def witness_rows(witness) -> List[Dict[str, Any]]:
    """One entry per generator, in generator order"""
    return [
        {
            'generator': witness.generator_label(i),
            'element': int(element),
            'image': perm.cycle_notation(image),
            'images': list(image.images),
        }
        for i, (element, image) in enumerate(zip(witness.generators, witness.images))
    ]


def verdict_report(verdict) -> Dict[str, Any]:
    report: Dict[str, Any] = {'verdict': verdict.label, 'method': verdict.method.value}
    if verdict.witness is not None:
        report['witness'] = witness_rows(verdict.witness)
    report['stats'] = dict(verdict.stats)
    return report


def format_report(report: Dict[str, Any]) -> str:
    """Plain-text rendering: verdict line first, then the witness block"""
    lines = [report['verdict']]
    for row in report.get('witness', []):
        lines.append(f"  {row['generator']} -> {row['image']}")
    return '\n'.join(lines)

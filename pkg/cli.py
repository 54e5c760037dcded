"""
Command-line surface for the representability toolkit.

Verdict lines go to stdout, diagnostics to stderr.
Exit status: 0 for any decision, 2 for bad input, 3 when a search cap is hit.
"""

import argparse
import json
import logging
import sys
from typing import Any, Dict, List, Optional, Tuple, Union

import config
import decide
import formats
import graph_core
import perm
import table_group
import tree_alg
from errors import CapExceededError, InputError
from formats import parse_input
from graph_core import Graph
from perm import GenSet
from table_group import GroupKind, TableGroup
from tree_alg import RootedTree

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_INPUT = 2
EXIT_CAP = 3

GROUP_KINDS = [k.value for k in GroupKind]
GRAPH_KINDS = ['star', 'path', 'complete']

Report = Tuple[Dict[str, Any], str]


# ============= INPUT LOADING =============
def load_graph(path: str) -> Graph:
    obj = parse_input(path)
    if isinstance(obj, RootedTree):
        return obj.to_graph()
    if not isinstance(obj, Graph):
        raise InputError(f"{path}: expected a graph file, got {type(obj).__name__}")
    return obj


def load_group(path: str) -> decide.GroupInput:
    obj = parse_input(path)
    if not isinstance(obj, (TableGroup, GenSet)):
        raise InputError(f"{path}: expected a table or perm file, got {type(obj).__name__}")
    return decide.GroupInput.of(obj)


def _positive(raw: str) -> int:
    try:
        value = int(raw)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {raw!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _perm_lines(gens: GenSet) -> List[str]:
    return [f"  {perm.cycle_notation(g)}" for g in gens.gens]


# ============= COMMANDS =============
def cmd_aut(args) -> Report:
    x = load_graph(args.graph)
    gens = graph_core.automorphism_generators(x)
    size = perm.group_order(gens)
    report = {
        'order': size,
        'generators': [list(g.images) for g in gens.gens],
        'by_components': graph_core.aut_order_by_components(x),
    }
    return report, '\n'.join([f"order {size}"] + _perm_lines(gens))


def cmd_iso(args) -> Report:
    x, y = load_graph(args.first), load_graph(args.second)
    witness = graph_core.are_isomorphic(x, y)
    verdict = 'ISOMORPHIC' if witness is not None else 'NOT_ISOMORPHIC'
    report: Dict[str, Any] = {'verdict': verdict}
    lines = [verdict]
    if witness is not None:
        report['witness'] = list(witness.images)
        lines.append('  ' + ' '.join(f"{v}->{w}" for v, w in enumerate(witness.images)))
    return report, '\n'.join(lines)


def cmd_reduce(args) -> Report:
    x, y = load_graph(args.first), load_graph(args.second)
    reduction = decide.reduce_gi_to_abelian(x, y)
    if isinstance(reduction, decide.ShortCircuit):
        verdict = 'ISOMORPHIC' if reduction.isomorphic else 'NOT_ISOMORPHIC'
        return {'verdict': verdict, 'reason': reduction.reason}, f"{verdict}\n  {reduction.reason}"
    prov = formats.write_reduction(reduction, args.out, args.out_group)
    report = {
        'p': reduction.p,
        'vertices': reduction.z.n,
        'components': len(reduction.components),
        'complemented': reduction.complemented,
        'files': {'graph': args.out, 'table': args.out_group, 'provenance': str(prov)},
    }
    return report, f"p = {reduction.p}\nwrote {args.out}, {args.out_group}, {prov}"


def cmd_decide_solvable(args) -> Report:
    verdict = decide.decide_solvable_rep(load_group(args.group), load_graph(args.graph),
                                         with_witness=args.witness)
    return _verdict(verdict)


def cmd_decide_tree(args) -> Report:
    return _verdict(decide.decide_tree_rep(load_group(args.group), load_graph(args.graph)))


def cmd_decide_perm(args) -> Report:
    return _verdict(decide.decide_perm_rep(load_group(args.group), args.n))


def cmd_oracle(args) -> Report:
    return _verdict(decide.oracle_representable(load_group(args.group), load_graph(args.graph)))


def _verdict(verdict: decide.Verdict) -> Report:
    report = formats.verdict_report(verdict)
    return report, formats.format_report(report)


def cmd_root_tree(args) -> Report:
    rooting = tree_alg.root_tree(load_graph(args.graph))
    formats.write_object(args.out, rooting.tree)
    report = {
        'root': rooting.tree.root,
        'provenance': rooting.provenance.value,
        'fixed_edge': list(rooting.fixed_edge) if rooting.fixed_edge else None,
        'file': args.out,
    }
    text = f"root {rooting.tree.root} ({rooting.provenance.value})"
    if rooting.fixed_edge:
        text += f" on edge {rooting.fixed_edge[0]}-{rooting.fixed_edge[1]}"
    return report, f"{text}\nwrote {args.out}"


def cmd_gen(args) -> Report:
    obj: Union[Graph, TableGroup]
    if args.kind == 'star':
        obj = decide.star_tree(args.n)
    elif args.kind == 'path':
        obj = graph_core.path_graph(args.n)
    elif args.kind == 'complete':
        obj = graph_core.complete_graph(args.n)
    else:
        obj = table_group.make_standard(args.kind, args.n)
    formats.write_object(args.out, obj)
    return {'kind': args.kind, 'n': args.n, 'file': args.out}, f"wrote {args.out}"


# ============= PARSER =============
def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='grouprep',
        description='Decide whether a finite group has a nontrivial representation on a graph.',
    )
    parser.add_argument('--json', action='store_true', help='print the report as JSON')
    parser.add_argument('-v', '--verbose', action='store_true', help='debug logging on stderr')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('aut', help='order and generators of Aut(X)')
    p.add_argument('graph')
    p.set_defaults(handler=cmd_aut)

    p = sub.add_parser('iso', help='exact isomorphism test')
    p.add_argument('first')
    p.add_argument('second')
    p.set_defaults(handler=cmd_iso)

    reduce_sub = sub.add_parser('reduce', help='reductions').add_subparsers(dest='reduction', required=True)
    p = reduce_sub.add_parser('gi-to-abelian', help='build Z and Z/pZ from graphs X and Y')
    p.add_argument('first')
    p.add_argument('second')
    p.add_argument('--out', required=True, help='graph file for Z')
    p.add_argument('--out-group', required=True, help='table file for Z/pZ')
    p.set_defaults(handler=cmd_reduce)

    decide_sub = sub.add_parser('decide', help='representability decisions').add_subparsers(
        dest='decision', required=True)
    p = decide_sub.add_parser('solvable-rep', help='solvable group on any graph')
    p.add_argument('group')
    p.add_argument('graph')
    p.add_argument('--witness', action='store_true', help='also search for an explicit representation')
    p.set_defaults(handler=cmd_decide_solvable)
    p = decide_sub.add_parser('tree-rep', help='any group on a tree')
    p.add_argument('group')
    p.add_argument('graph')
    p.set_defaults(handler=cmd_decide_tree)
    p = decide_sub.add_parser('perm-rep', help='nontrivial homomorphism into S_n')
    p.add_argument('group')
    p.add_argument('n', type=_positive)
    p.set_defaults(handler=cmd_decide_perm)

    p = sub.add_parser('root-tree', help='root a tree at a fixed vertex or fixed edge')
    p.add_argument('graph')
    p.add_argument('--out', required=True)
    p.set_defaults(handler=cmd_root_tree)

    oracle_sub = sub.add_parser('oracle', help='brute-force ground truth').add_subparsers(
        dest='oracle', required=True)
    p = oracle_sub.add_parser('rep', help='search all of Aut(X)')
    p.add_argument('group')
    p.add_argument('graph')
    p.set_defaults(handler=cmd_oracle)

    p = sub.add_parser('gen', help='write a standard group or graph')
    p.add_argument('kind', choices=GROUP_KINDS + GRAPH_KINDS)
    p.add_argument('n', type=_positive)
    p.add_argument('--out', required=True)
    p.set_defaults(handler=cmd_gen)
    return parser


# ============= ENTRY POINT =============
def run(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_INPUT
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else config.LOG_LEVEL,
        format=config.LOG_FORMAT,
        stream=sys.stderr,
    )
    try:
        report, text = args.handler(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as e:
        print(f"error: cannot write output: {e}", file=sys.stderr)
        return EXIT_INPUT
    except CapExceededError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CAP
    except Exception as e:
        logger.exception("internal error")
        print(f"internal error: {e}", file=sys.stderr)
        return EXIT_INTERNAL
    print(json.dumps(report, indent=2, default=str) if args.json else text)
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == '__main__':
    main()

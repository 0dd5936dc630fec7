"""Command-line front end.

Exit codes follow one convention across subcommands: 0 when the queried
property holds (or the requested artifact was produced), 1 when the
property is false or counterexamples were found, 2 on usage or input
errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .dsl import ParseError, parse, serialize
from .equilibrium import DeviationBudget, NashVerdict, is_bi, is_nash
from .model import converges, is_pe, is_spe, payoff, strongly_converges
from .strategies import is_full, sum_strategies
from .termgraph import (
    GameNode,
    GraphError,
    Leaf,
    ProfileNode,
    TermGraph,
    bisimilar,
    unfold,
)
from .zeroone import (
    check_appendix_prop,
    check_prop_escal,
    check_theorem,
    is_acbes,
    is_bcaes,
    is_sacbes,
    is_sbcaes,
    payroll_note_check,
    sat_s0,
    sat_s1,
)
from . import report as report_mod

PREDICATES = {
    "conv": lambda s: converges(s).root_verdict,
    "sconv": lambda s: strongly_converges(s).root_verdict,
    "pe": lambda s: is_pe(s).root_verdict,
    "spe": is_spe,
    "bi": is_bi,
    "s0": sat_s0,
    "s1": sat_s1,
    "acbes": is_acbes,
    "sacbes": is_sacbes,
    "bcaes": is_bcaes,
    "sbcaes": is_sbcaes,
}


def _load(path: str) -> dict[str, TermGraph]:
    text = Path(path).read_text()
    return {name: graph for name, graph, _of in parse(text)}


def _block(blocks: dict[str, TermGraph], name: str) -> TermGraph:
    try:
        return blocks[name]
    except KeyError:
        raise GraphError(f"no block named {name!r} in the file") from None


def _verdict(value: bool) -> str:
    return "true" if value else "false"


def cmd_check(args) -> int:
    g = _block(_load(args.file), args.name)
    value = PREDICATES[args.pred](g)
    print(f"{args.pred} {args.name} = {_verdict(value)}")
    return 0 if value else 1


def cmd_payoff(args) -> int:
    g = _block(_load(args.file), args.name)
    outcome = payoff(g)
    if outcome.defined:
        print(f"payoff {args.name} = {outcome.payoff}")
        return 0
    print(f"payoff {args.name} = undefined (cycle: {' '.join(outcome.cycle)})")
    return 1


def cmd_bisim(args) -> int:
    blocks = _load(args.file)
    g1 = _block(blocks, args.name1)
    g2 = _block(blocks, args.name2)
    value = bisimilar(g1, g1.root, g2, g2.root)
    print(f"bisim {args.name1} {args.name2} = {_verdict(value)}")
    return 0 if value else 1


def _assign_agents(members: list[tuple[str, TermGraph]]) -> dict[str, TermGraph]:
    """Match each strategy to the agent it is full for (deterministic search)."""
    agents = sorted({a for _name, g in members for a in g.agents})
    if len(agents) != len(members):
        raise GraphError(
            f"{len(members)} strategies given for agents {tuple(agents)}"
        )
    fullness = {
        name: {a for a in agents if is_full(g, a)} for name, g in members
    }

    def backtrack(i: int, taken: dict[str, TermGraph]) -> dict[str, TermGraph] | None:
        if i == len(members):
            return dict(taken)
        name, g = members[i]
        for agent in agents:
            if agent in taken or agent not in fullness[name]:
                continue
            taken[agent] = g
            found = backtrack(i + 1, taken)
            if found is not None:
                return found
            del taken[agent]
        return None

    assignment = backtrack(0, {})
    if assignment is None:
        raise GraphError("inconsistent strategies: no agent is fully covered by each member")
    return assignment


def cmd_sum(args) -> int:
    blocks = _load(args.file)
    members = [(name, _block(blocks, name)) for name in args.names]
    family = _assign_agents(members)
    profile = sum_strategies(family)
    Path(args.out).write_text(serialize(profile, args.name))
    print(f"wrote profile {args.name} ({len(profile.nodes)} nodes) to {args.out}")
    return 0


def cmd_nash(args) -> int:
    g = _block(_load(args.file), args.name)
    verdict = is_nash(g, DeviationBudget(args.depth))
    print(f"nash {args.name} = {verdict}")
    return 1 if verdict.status == NashVerdict.REFUTED else 0


def cmd_theorem01(args) -> int:
    rep = check_theorem(args.prefix, args.period)
    print(report_mod.theorem_summary(rep))
    if args.report_dir:
        for path in report_mod.write_report(rep, args.report_dir):
            print(f"wrote {path}")
    return 0 if rep.ok else 1


def cmd_appendix(args) -> int:
    rep = check_appendix_prop(args.n)
    print(report_mod.appendix_summary(rep))
    if args.report_dir:
        for path in report_mod.write_report(rep, args.report_dir):
            print(f"wrote {path}")
    return 0 if rep.ok else 1


def cmd_escalate(args) -> int:
    checks = check_prop_escal()
    ok = True
    for description, value in checks:
        print(f"{description} = {_verdict(value)}")
        ok = ok and value
    note = payroll_note_check()
    print(f"payoffs bounded while play escalates = {_verdict(note)}")
    return 0 if ok and note else 1


def _label_text(tree) -> str:
    if tree.is_cut:
        return "..."
    label = tree.label
    if isinstance(label, Leaf):
        inside = ", ".join(f"{a}: {v}" for a, v in label.payoff.entries)
        return f"leaf({inside})"
    if isinstance(label, GameNode):
        return label.owner
    if isinstance(label, ProfileNode):
        return f"{label.owner} -> {label.choice}"
    return label.head


def cmd_unfold(args) -> int:
    g = _block(_load(args.file), args.name)
    tree = unfold(g, args.depth)
    lines = [_label_text(tree)]

    def walk(t, indent: str) -> None:
        if t.down is None:
            return
        for tag, child in (("d", t.down), ("r", t.right)):
            lines.append(f"{indent}{tag}: {_label_text(child)}")
            walk(child, indent + "  ")

    walk(tree, "  ")
    print("\n".join(lines))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="loopgames",
        description="Decide convergence and equilibrium predicates on cyclic game graphs.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="evaluate a predicate on a named block")
    p.add_argument("--pred", required=True, choices=sorted(PREDICATES))
    p.add_argument("file")
    p.add_argument("name")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("payoff", help="payoff induced by a profile, or its cycle")
    p.add_argument("file")
    p.add_argument("name")
    p.set_defaults(func=cmd_payoff)

    p = sub.add_parser("bisim", help="compare two blocks up to unfolding")
    p.add_argument("file")
    p.add_argument("name1")
    p.add_argument("name2")
    p.set_defaults(func=cmd_bisim)

    p = sub.add_parser("sum", help="combine strategies into a profile")
    p.add_argument("file")
    p.add_argument("names", nargs="+")
    p.add_argument("--out", required=True)
    p.add_argument("--name", default="sum")
    p.set_defaults(func=cmd_sum)

    p = sub.add_parser("nash", help="search for an improving unilateral deviation")
    p.add_argument("file")
    p.add_argument("name")
    p.add_argument("--depth", type=int, required=True)
    p.set_defaults(func=cmd_nash)

    p = sub.add_parser("theorem01", help="exhaustive word-by-word equilibrium comparison")
    p.add_argument("--prefix", type=int, required=True)
    p.add_argument("--period", type=int, required=True)
    p.add_argument("--report-dir")
    p.set_defaults(func=cmd_theorem01)

    p = sub.add_parser("appendix", help="finite approximation families against backward induction")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--report-dir")
    p.set_defaults(func=cmd_appendix)

    p = sub.add_parser("escalate", help="escalation witnesses and the bounded-stakes note")
    p.set_defaults(func=cmd_escalate)

    p = sub.add_parser("unfold", help="print a bounded unfolding as a tree")
    p.add_argument("file")
    p.add_argument("name")
    p.add_argument("--depth", type=int, required=True)
    p.set_defaults(func=cmd_unfold)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (GraphError, ParseError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

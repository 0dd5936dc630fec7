"""Game and strategy-profile semantics over term graphs.

A profile graph is a game graph in which every inner node additionally
records the choice its owner makes.  Following chosen edges from a node
either reaches a leaf (the induced payoff) or falls into a cycle, in which
case the payoff is undefined and the cycle is reported as a witness.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

from .termgraph import (
    CHOICES,
    DOWN,
    GameNode,
    GraphError,
    KIND_GAME,
    KIND_PROFILE,
    Node,
    Payoff,
    PredicateResult,
    ProfileNode,
    TermGraph,
    _bisim_table,
    always,
    gfp_eval,
    lfp_eval,
    relabel,
)


def _require_kind(g: TermGraph, kind: str) -> None:
    if g.kind != kind:
        raise GraphError(f"expected a {kind} graph, got a {g.kind} graph")


@dataclass(frozen=True)
class PayoffOutcome:
    """Result of following the chosen path: a payoff, or a cycle witness."""

    payoff: Payoff | None
    cycle: tuple[str, ...] = ()

    @property
    def defined(self) -> bool:
        return self.payoff is not None


def game_of(profile: TermGraph) -> TermGraph:
    """Forget the choices of a profile, leaving the underlying game."""
    _require_kind(profile, KIND_PROFILE)
    return relabel(
        profile,
        KIND_GAME,
        lambda _name, label: GameNode(label.owner) if isinstance(label, ProfileNode) else label,
    )


def payoff_outcomes(profile: TermGraph) -> dict[str, PayoffOutcome]:
    """The induced payoff from every node of a profile, memoised in one pass."""
    _require_kind(profile, KIND_PROFILE)
    out: dict[str, PayoffOutcome] = {}
    for start in profile.order:
        if start in out:
            continue
        path: list[str] = []
        index: dict[str, int] = {}
        ref = start
        while True:
            known = out.get(ref)
            if known is not None:
                result = known
                break
            if ref in index:
                result = PayoffOutcome(None, tuple(path[index[ref]:]))
                break
            index[ref] = len(path)
            path.append(ref)
            node = profile.nodes[ref]
            if node.is_leaf:
                result = PayoffOutcome(node.label.payoff)
                break
            ref = node.child(node.label.choice)
        for name in path:
            out.setdefault(name, result)
    return out


def payoff(profile: TermGraph) -> PayoffOutcome:
    """The payoff induced at the root, or the cycle that prevents one."""
    return payoff_outcomes(profile)[profile.root]


def _converge_rule(g: TermGraph, ref: str, val) -> bool:
    node = g.nodes[ref]
    if node.is_leaf:
        return True
    return val[node.child(node.label.choice)]


def converges(profile: TermGraph) -> PredicateResult:
    """Least fixpoint: the chosen path from a node reaches a leaf."""
    _require_kind(profile, KIND_PROFILE)
    return lfp_eval(profile, _converge_rule)


def strongly_converges(profile: TermGraph) -> PredicateResult:
    """Greatest fixpoint: the chosen path converges from here and everywhere below.

    Equals ``always(converges)``; the equivalence is exercised by the test
    suite rather than re-derived on every call.
    """
    _require_kind(profile, KIND_PROFILE)
    conv = converges(profile).valuation

    def rule(g: TermGraph, ref: str, val) -> bool:
        node = g.nodes[ref]
        if node.is_leaf:
            return True
        return conv[ref] and val[node.down] and val[node.right]

    return gfp_eval(profile, rule)


def is_pe(profile: TermGraph) -> PredicateResult:
    """Local equilibrium verdict at every node.

    At a leaf the verdict is true.  At an inner node the profile must
    strongly converge there, and the owner's chosen branch must pay the
    owner at least as much as the branch it passed over.  Strong
    convergence guarantees that both branch payoffs exist.
    """
    _require_kind(profile, KIND_PROFILE)
    sconv = strongly_converges(profile).valuation
    outcomes = payoff_outcomes(profile)
    val: dict[str, bool] = {}
    for ref in profile.order:
        node = profile.nodes[ref]
        if node.is_leaf:
            val[ref] = True
        elif not sconv[ref]:
            val[ref] = False
        else:
            owner = node.label.owner
            down_pay = outcomes[node.down].payoff
            right_pay = outcomes[node.right].payoff
            if node.label.choice == DOWN:
                val[ref] = down_pay[owner] >= right_pay[owner]
            else:
                val[ref] = right_pay[owner] >= down_pay[owner]
    return PredicateResult(val, val[profile.root])


def is_spe(profile: TermGraph) -> bool:
    """Subgame-perfect: the local equilibrium verdict holds at every reachable node."""
    pe = is_pe(profile)
    return always(profile, lambda _g, ref: pe.valuation[ref]).root_verdict


def is_subprofile(s1: TermGraph, s2: TermGraph) -> bool:
    """Whether ``s1`` occurs inside ``s2``: some node reachable from the root
    of ``s2`` unfolds to the same tree as the root of ``s1``."""
    _require_kind(s1, KIND_PROFILE)
    _require_kind(s2, KIND_PROFILE)
    seeds = [(s1.root, ref) for ref in s2.order]
    table = _bisim_table(s1, s2, seeds)
    return any(table[seed] for seed in seeds)


def all_profiles(game: TermGraph) -> Iterator[TermGraph]:
    """Every choice assignment over the inner nodes of a game's presentation.

    Yields 2**k profiles for k inner nodes, in deterministic order (node
    order of the presentation, down before right).  Callers are expected to
    keep k small.
    """
    _require_kind(game, KIND_GAME)
    inner = game.inner_refs()
    for assignment in itertools.product(CHOICES, repeat=len(inner)):
        choice_at = dict(zip(inner, assignment))
        nodes = {}
        for name, node in game.nodes.items():
            if node.is_leaf:
                nodes[name] = node
            else:
                label = ProfileNode(node.label.owner, choice_at[name])
                nodes[name] = Node(label, node.down, node.right)
        yield TermGraph(KIND_PROFILE, game.root, nodes)

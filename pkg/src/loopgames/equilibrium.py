"""Deviation-based equilibrium notions: convertibility, Nash, backward induction.

One agent can convert a profile into another when the two prescribe the
same play everywhere except at finitely many positions, all of which either
belong to that agent or repeat the original choice.  On cyclic presentations
this is decided on the product of the two graphs: pairs that lie on a
product cycle must be fully bisimilar, since a difference there would recur
forever.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .termgraph import (
    CHOICES,
    DOWN,
    GraphError,
    KIND_PROFILE,
    Node,
    PredicateResult,
    ProfileNode,
    TermGraph,
    _bisim_table,
    bisimilar,
    graph_height,
    is_acyclic,
)
from .model import _require_kind, game_of, payoff, payoff_outcomes


@dataclass(frozen=True)
class DeviationBudget:
    """Bounds how deep into the unfolding a deviation may rewrite choices."""

    depth: int

    def __post_init__(self):
        if self.depth < 0:
            raise GraphError("deviation depth must be >= 0")


def convertible(s: TermGraph, s2: TermGraph, agent: str) -> bool:
    """Whether ``agent`` alone can turn profile ``s`` into profile ``s2``.

    Both profiles must play the same game.  The decision walks the product
    of the two presentations, ignoring pairs that are already bisimilar:

    * every remaining pair must be an inner pair with a common owner, and
      either the owner is ``agent`` or the choices agree;
    * no remaining pair may lie on a product cycle.
    """
    _require_kind(s, KIND_PROFILE)
    _require_kind(s2, KIND_PROFILE)
    ga, gb = game_of(s), game_of(s2)
    if not bisimilar(ga, ga.root, gb, gb.root):
        raise GraphError("profiles of different games")

    start = (s.root, s2.root)
    bisim = _bisim_table(s, s2, [start], full=True)

    WHITE, GREY, BLACK = 0, 1, 2
    color: dict[tuple[str, str], int] = {}
    stack: list[tuple[tuple[str, str], bool]] = [(start, False)]
    while stack:
        pair, done = stack.pop()
        if done:
            color[pair] = BLACK
            continue
        if bisim.get(pair, False):
            continue  # difference already resolved; nothing below matters
        state = color.get(pair, WHITE)
        if state == BLACK:
            continue
        if state == GREY:
            return False  # a lasting difference on a cycle
        n1, n2 = s.nodes[pair[0]], s2.nodes[pair[1]]
        if n1.is_leaf or n2.is_leaf:
            return False  # non-bisimilar leaves (or leaf against inner)
        l1, l2 = n1.label, n2.label
        if l1.owner != l2.owner:
            return False
        if l1.owner != agent and l1.choice != l2.choice:
            return False
        color[pair] = GREY
        stack.append((pair, True))
        for kid in ((n1.down, n2.down), (n1.right, n2.right)):
            if not bisim.get(kid, False):
                if color.get(kid, WHITE) == GREY:
                    return False
                if color.get(kid, WHITE) == WHITE:
                    stack.append((kid, False))
    return True


def enumerate_deviations(s: TermGraph, agent: str, budget: DeviationBudget) -> list[TermGraph]:
    """All profiles ``agent`` can reach by rewriting choices near the root.

    The profile is unrolled into a tree down to ``budget.depth``; deeper
    positions keep pointing at the original graph.  Every assignment of
    choices to the agent-owned tree positions yields one deviation, so the
    original profile itself is always included.  Distinct assignments touch
    distinct tree positions, hence the list is duplicate-free up to
    bisimilarity.
    """
    _require_kind(s, KIND_PROFILE)
    if budget.depth == 0:
        return [s]

    used = set(s.nodes)
    counter = itertools.count()

    def fresh() -> str:
        while True:
            name = f"x{next(counter)}"
            if name not in used:
                used.add(name)
                return name

    tree_nodes: list[tuple[str, str]] = []  # (fresh name, original ref)
    children: dict[str, tuple[str, str]] = {}
    grafted: set[str] = set()

    def walk(ref: str, depth: int) -> str:
        node = s.nodes[ref]
        if depth == budget.depth or (node.is_leaf and depth > 0):
            # graft: reuse the original node (and everything below it)
            grafted.add(ref)
            return ref
        name = fresh()
        tree_nodes.append((name, ref))
        if not node.is_leaf:
            children[name] = (walk(node.down, depth + 1), walk(node.right, depth + 1))
        return name

    root = walk(s.root, 0)

    shared: dict[str, Node] = {}
    for ref in grafted:
        for name in s.reach(ref):
            shared[name] = s.nodes[name]

    editable = [
        name
        for name, ref in tree_nodes
        if not s.nodes[ref].is_leaf and s.nodes[ref].label.owner == agent
    ]

    out: list[TermGraph] = []
    for assignment in itertools.product(CHOICES, repeat=len(editable)):
        choice_at = dict(zip(editable, assignment))
        nodes = dict(shared)
        for name, ref in tree_nodes:
            node = s.nodes[ref]
            if node.is_leaf:
                nodes[name] = node
            else:
                choice = choice_at.get(name, node.label.choice)
                down, right = children[name]
                nodes[name] = Node(ProfileNode(node.label.owner, choice), down, right)
        out.append(TermGraph(KIND_PROFILE, root, nodes))
    return out


@dataclass(frozen=True)
class NashVerdict:
    """Outcome of a deviation search: settled, bounded, or refuted."""

    status: str  # "nash" | "no-improving-deviation" | "refuted"
    depth: int | None = None
    agent: str | None = None
    witness: TermGraph | None = None
    gain: tuple[Fraction, Fraction] | None = None

    NASH = "nash"
    BOUNDED = "no-improving-deviation"
    REFUTED = "refuted"

    @classmethod
    def nash(cls) -> "NashVerdict":
        return cls(cls.NASH)

    @classmethod
    def bounded(cls, depth: int) -> "NashVerdict":
        return cls(cls.BOUNDED, depth=depth)

    @classmethod
    def refuted(cls, agent: str, witness: TermGraph, gain) -> "NashVerdict":
        return cls(cls.REFUTED, agent=agent, witness=witness, gain=gain)

    def __str__(self) -> str:
        if self.status == self.NASH:
            return "nash"
        if self.status == self.BOUNDED:
            return f"no-improving-deviation(depth={self.depth})"
        before, after = self.gain
        return f"refuted(agent={self.agent}, gain={before}->{after})"


def is_nash(s: TermGraph, budget: DeviationBudget) -> NashVerdict:
    """Search for an agent that profits by unilaterally rewriting its choices.

    The root payoff of ``s`` must be defined.  A deviation with an undefined
    payoff never counts as an improvement.  On a finite profile searched at
    or beyond its height the verdict is exact; otherwise a fruitless search
    is only conclusive up to the budget.
    """
    _require_kind(s, KIND_PROFILE)
    base = payoff(s)
    if not base.defined:
        raise GraphError("payoff undefined at root")
    finite = is_acyclic(s)
    exact = finite and budget.depth >= graph_height(s)
    for agent in sorted(s.agents):
        mine = base.payoff[agent]
        for candidate in enumerate_deviations(s, agent, budget):
            other = payoff(candidate)
            if other.defined and other.payoff[agent] > mine:
                return NashVerdict.refuted(agent, candidate, (mine, other.payoff[agent]))
    return NashVerdict.nash() if exact else NashVerdict.bounded(budget.depth)


def bi_valuation(s: TermGraph) -> PredicateResult:
    """Backward-induction verdicts for every node of a finite profile.

    A node passes when both subtrees pass and the owner's chosen branch is
    at least as good for the owner as the other branch.  Coincides with the
    subgame-perfection valuation on finite profiles.
    """
    _require_kind(s, KIND_PROFILE)
    if not is_acyclic(s):
        raise GraphError("BI requires finite profile")
    outcomes = payoff_outcomes(s)
    val: dict[str, bool] = {}

    def check(ref: str) -> bool:
        if ref in val:
            return val[ref]
        node = s.nodes[ref]
        if node.is_leaf:
            verdict = True
        else:
            below = check(node.down) and check(node.right)
            owner = node.label.owner
            down_pay = outcomes[node.down].payoff[owner]
            right_pay = outcomes[node.right].payoff[owner]
            if node.label.choice == DOWN:
                verdict = below and down_pay >= right_pay
            else:
                verdict = below and right_pay >= down_pay
        val[ref] = verdict
        return verdict

    check(s.root)
    for ref in s.order:  # valuation for every node, not just those on the root path
        check(ref)
    return PredicateResult(val, val[s.root])


def is_bi(s: TermGraph) -> bool:
    """Whether a finite profile is a backward-induction equilibrium."""
    return bi_valuation(s).root_verdict

"""Single-agent strategies and their synchronised combination.

A strategy graph describes one agent's plan: at nodes the agent owns, the
label is the choice it makes; at nodes owned by someone else, the label is
that other agent's name.  A family assigning one strategy to every agent of
a common game can be combined into a strategy profile by walking all the
member graphs in lockstep.
"""

from __future__ import annotations

from typing import Mapping

from .termgraph import (
    CHOICES,
    GameNode,
    GraphError,
    KIND_GAME,
    KIND_PROFILE,
    KIND_STRATEGY,
    Leaf,
    Node,
    ProfileNode,
    StrategyNode,
    TermGraph,
    bisimilar,
    gfp_eval,
    relabel,
)
from .model import _require_kind


class InconsistentFamilyError(GraphError):
    """Raised when a strategy family cannot be combined into a profile."""


def is_full(strategy: TermGraph, agent: str) -> bool:
    """Whether the strategy decides every turn of ``agent``.

    Operationally: no reachable node carries the agent's name as its head.
    Evaluated both as a greatest fixpoint and by scanning the reachable set;
    the two must agree.
    """
    _require_kind(strategy, KIND_STRATEGY)
    if agent in CHOICES:
        raise GraphError(f"agent name {agent!r} collides with a choice tag")

    def rule(g: TermGraph, ref: str, val) -> bool:
        node = g.nodes[ref]
        if node.is_leaf:
            return True
        if node.label.head == agent:
            return False
        return val[node.down] and val[node.right]

    by_fixpoint = gfp_eval(strategy, rule).root_verdict
    by_scan = all(
        strategy.nodes[ref].is_leaf or strategy.nodes[ref].label.head != agent
        for ref in strategy.order
    )
    if by_fixpoint != by_scan:  # pragma: no cover - internal consistency guard
        raise RuntimeError("fullness fixpoint disagrees with reachability scan")
    return by_fixpoint


def st2g(strategy: TermGraph, agent: str) -> TermGraph:
    """The game a strategy is playing, read off by erasing its decisions.

    Choice heads become turns of ``agent``; agent heads stay as they are.
    """
    _require_kind(strategy, KIND_STRATEGY)

    def fn(_name, label):
        if isinstance(label, StrategyNode):
            return GameNode(agent if label.head in CHOICES else label.head)
        return label

    return relabel(strategy, KIND_GAME, fn)


def _family_failure(family: Mapping[str, TermGraph]) -> str | None:
    """The first consistency violation of a family, or None when consistent."""
    if not family:
        return "empty family"
    agents = sorted(family)
    for agent in agents:
        member = family[agent]
        _require_kind(member, KIND_STRATEGY)
        # a member may mention fewer agents (e.g. a leafless plan that is all
        # its own moves), but never one outside the family
        if not set(member.agents) <= set(agents):
            return (
                f"member for {agent} involves agents {member.agents}, "
                f"family covers {tuple(agents)}"
            )
    for agent in agents:
        if not is_full(family[agent], agent):
            return f"member for {agent} is not full for {agent}"
    games = {agent: st2g(family[agent], agent) for agent in agents}
    first = agents[0]
    for agent in agents[1:]:
        if not bisimilar(games[first], games[first].root, games[agent], games[agent].root):
            return f"projections of {first} and {agent} play different games"
    return None


def are_consistent(family: Mapping[str, TermGraph]) -> bool:
    """Whether every member is full for its agent and all play the same game."""
    return _family_failure(family) is None


def sum_strategies(family: Mapping[str, TermGraph]) -> TermGraph:
    """Combine a consistent family into the profile that plays all its plans.

    The members are walked in lockstep: at each combined position exactly
    one member shows a choice head (the owner's decision) while all others
    name that owner.  The combined graph is memoised on tuples of member
    positions, so cyclic strategies combine into a finite profile.
    """
    failure = _family_failure(family)
    if failure is not None:
        raise InconsistentFamilyError(f"inconsistent strategies: {failure}")
    agents = sorted(family)
    graphs = [family[a] for a in agents]

    names: dict[tuple[str, ...], str] = {}
    nodes: dict[str, Node] = {}

    def visit(refs: tuple[str, ...]) -> str:
        name = names.get(refs)
        if name is not None:
            return name
        name = f"q{len(names)}"
        names[refs] = name
        members = [g.nodes[ref] for g, ref in zip(graphs, refs)]
        leaves = [m for m in members if m.is_leaf]
        if leaves:
            if len(leaves) != len(members):
                raise InconsistentFamilyError(
                    "inconsistent strategies: leaf and inner positions aligned"
                )
            payoffs = {m.label.payoff for m in members}
            if len(payoffs) != 1:
                raise InconsistentFamilyError(
                    "inconsistent strategies: leaf payoffs disagree"
                )
            nodes[name] = Node(Leaf(payoffs.pop()))
            return name
        owners = [a for a, m in zip(agents, members) if m.label.head in CHOICES]
        if len(owners) != 1:
            raise InconsistentFamilyError(
                f"inconsistent strategies: {len(owners)} members claim the turn"
            )
        owner = owners[0]
        choice = family[owner].nodes[refs[agents.index(owner)]].label.head
        for agent, member in zip(agents, members):
            if agent != owner and member.label.head != owner:
                raise InconsistentFamilyError(
                    f"inconsistent strategies: member for {agent} expects "
                    f"{member.label.head!r} to move, not {owner!r}"
                )
        down = visit(tuple(g.nodes[r].down for g, r in zip(graphs, refs)))
        right = visit(tuple(g.nodes[r].right for g, r in zip(graphs, refs)))
        nodes[name] = Node(ProfileNode(owner, choice), down, right)
        return name

    root = visit(tuple(g.root for g in graphs))
    return TermGraph(KIND_PROFILE, root, nodes)


def strategy_slice(profile: TermGraph, agent: str) -> TermGraph:
    """One agent's strategy read off a profile: keep own choices, name the rest."""
    _require_kind(profile, KIND_PROFILE)
    if agent not in profile.agents:
        raise GraphError(f"unknown agent {agent!r}")

    def fn(_name, label):
        if isinstance(label, ProfileNode):
            return StrategyNode(label.choice if label.owner == agent else label.owner)
        return label

    return relabel(profile, KIND_STRATEGY, fn)


def split(profile: TermGraph) -> dict[str, TermGraph]:
    """The strategy family a profile consists of, one member per agent."""
    return {agent: strategy_slice(profile, agent) for agent in profile.agents}

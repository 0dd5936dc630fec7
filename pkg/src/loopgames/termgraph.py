"""Finitely presented cyclic term graphs and fixpoint evaluation.

A :class:`TermGraph` is a finite presentation of a possibly infinite binary
tree: every node is named, refers to its two children by name, and cycles in
the presentation denote regular infinite unfoldings.  Three vocabularies share
the representation and are told apart by the graph ``kind``:

* ``game``      -- inner nodes carry the agent whose turn it is,
* ``profile``   -- inner nodes carry the agent and the choice it makes,
* ``strategy``  -- inner nodes carry either a choice (the owning agent's own
  decision) or another agent's name (a turn the owner does not control).

Leaves carry exact rational payoffs, one per agent.  Predicates over graphs
are evaluated as least or greatest fixpoints of local rules; both directions
are provided by a single worklist engine.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator, Mapping, Union

DOWN = "d"
RIGHT = "r"
CHOICES = (DOWN, RIGHT)

KIND_GAME = "game"
KIND_PROFILE = "profile"
KIND_STRATEGY = "strategy"
KINDS = (KIND_GAME, KIND_PROFILE, KIND_STRATEGY)


class GraphError(Exception):
    """Malformed graph, unresolved reference, or invalid graph operation."""


@dataclass(frozen=True)
class Payoff:
    """Exact per-agent payoffs attached to a leaf.

    Stored as a sorted tuple of ``(agent, Fraction)`` pairs so that equal
    payoff functions compare and hash equal regardless of construction order.
    """

    entries: tuple[tuple[str, Fraction], ...]

    @classmethod
    def of(cls, mapping: Mapping[str, object] | None = None, **agents: object) -> "Payoff":
        items: dict[str, object] = dict(mapping or {})
        items.update(agents)
        if not items:
            raise GraphError("payoff needs at least one agent")
        entries = tuple(sorted((name, Fraction(value)) for name, value in items.items()))
        return cls(entries)

    @property
    def agents(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.entries)

    def __getitem__(self, agent: str) -> Fraction:
        for name, value in self.entries:
            if name == agent:
                return value
        raise KeyError(agent)

    def __str__(self) -> str:
        return "{%s}" % ", ".join(f"{name}:{value}" for name, value in self.entries)


@dataclass(frozen=True)
class Leaf:
    payoff: Payoff


@dataclass(frozen=True)
class GameNode:
    owner: str


@dataclass(frozen=True)
class ProfileNode:
    owner: str
    choice: str


@dataclass(frozen=True)
class StrategyNode:
    # head is either a choice tag (the owner's own move) or an agent name
    head: str


Label = Union[Leaf, GameNode, ProfileNode, StrategyNode]

_KIND_LABELS = {
    KIND_GAME: (Leaf, GameNode),
    KIND_PROFILE: (Leaf, ProfileNode),
    KIND_STRATEGY: (Leaf, StrategyNode),
}


@dataclass(frozen=True)
class Node:
    """One equation of a presentation: a label plus child references."""

    label: Label
    down: str | None = None
    right: str | None = None

    @property
    def is_leaf(self) -> bool:
        return isinstance(self.label, Leaf)

    def child(self, choice: str) -> str | None:
        return self.down if choice == DOWN else self.right


class TermGraph:
    """A validated presentation: ``kind``, a root name, and named nodes.

    Construction checks that every reference resolves, that every node is
    reachable from the root, that labels match the declared kind, and that
    all leaf payoffs share the graph's agent set.  Instances are treated as
    immutable; derived structure (traversal order, parent map, reachability)
    is computed once and cached.
    """

    __slots__ = ("kind", "root", "nodes", "agents", "order", "parents", "_reach")

    def __init__(self, kind: str, root: str, nodes: Mapping[str, Node]):
        if kind not in KINDS:
            raise GraphError(f"unknown graph kind {kind!r}")
        nodes = dict(nodes)
        if root not in nodes:
            raise GraphError(f"dangling reference: root {root!r}")
        allowed = _KIND_LABELS[kind]
        for name, node in nodes.items():
            if not isinstance(node.label, allowed):
                raise GraphError(
                    f"node {name!r}: label {type(node.label).__name__} not allowed in a {kind} graph"
                )
            if node.is_leaf:
                if node.down is not None or node.right is not None:
                    raise GraphError(f"leaf {name!r} must not have children")
            else:
                for ref in (node.down, node.right):
                    if ref is None:
                        raise GraphError(f"inner node {name!r} needs both children")
                    if ref not in nodes:
                        raise GraphError(f"dangling reference: {ref!r} (child of {name!r})")
                if isinstance(node.label, ProfileNode) and node.label.choice not in CHOICES:
                    raise GraphError(f"node {name!r}: choice must be one of {CHOICES}")

        order = _dfs_order(nodes, root)
        unreachable = set(nodes) - set(order)
        if unreachable:
            names = ", ".join(sorted(unreachable))
            raise GraphError(f"unreachable nodes: {names}")

        agents: set[str] = set()
        for node in nodes.values():
            label = node.label
            if isinstance(label, (GameNode, ProfileNode)):
                agents.add(label.owner)
            elif isinstance(label, StrategyNode) and label.head not in CHOICES:
                agents.add(label.head)
            elif isinstance(label, Leaf):
                agents.update(label.payoff.agents)
        for agent in agents:
            if not agent:
                raise GraphError("agent names must be non-empty")
            if agent in CHOICES:
                raise GraphError(f"agent name {agent!r} collides with a choice tag")
        for name, node in nodes.items():
            if node.is_leaf and set(node.label.payoff.agents) != agents:
                raise GraphError(
                    f"leaf {name!r}: payoff agents {node.label.payoff.agents} "
                    f"do not cover the graph agents {tuple(sorted(agents))}"
                )

        parents: dict[str, set[str]] = {name: set() for name in order}
        for name in order:
            node = nodes[name]
            if not node.is_leaf:
                parents[node.down].add(name)
                parents[node.right].add(name)

        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "root", root)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "agents", tuple(sorted(agents)))
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "parents", {n: tuple(sorted(ps)) for n, ps in parents.items()})
        object.__setattr__(self, "_reach", {})

    def __setattr__(self, name, value):  # pragma: no cover - guard only
        raise AttributeError("TermGraph is immutable")

    def node(self, ref: str) -> Node:
        try:
            return self.nodes[ref]
        except KeyError:
            raise GraphError(f"dangling reference: {ref!r}") from None

    def reach(self, ref: str) -> tuple[str, ...]:
        """Nodes reachable from ``ref`` in depth-first order, down before right."""
        cached = self._reach.get(ref)
        if cached is None:
            if ref not in self.nodes:
                raise GraphError(f"dangling reference: {ref!r}")
            cached = _dfs_order(self.nodes, ref)
            self._reach[ref] = cached
        return cached

    def inner_refs(self) -> tuple[str, ...]:
        return tuple(n for n in self.order if not self.nodes[n].is_leaf)

    def __repr__(self) -> str:
        return f"TermGraph(kind={self.kind!r}, root={self.root!r}, nodes={len(self.nodes)})"


def _dfs_order(nodes: Mapping[str, Node], start: str) -> tuple[str, ...]:
    seen: set[str] = set()
    out: list[str] = []
    stack = [start]
    while stack:
        ref = stack.pop()
        if ref in seen:
            continue
        seen.add(ref)
        out.append(ref)
        node = nodes[ref]
        if not node.is_leaf:
            # push right first so down is visited first
            stack.append(node.right)
            stack.append(node.down)
    return tuple(out)


def reachable(g: TermGraph, ref: str) -> tuple[str, ...]:
    """All nodes reachable from ``ref``, in deterministic depth-first order."""
    return g.reach(ref)


def is_acyclic(g: TermGraph) -> bool:
    """True when the presentation has no cycle, i.e. denotes a finite tree."""
    WHITE, GREY, BLACK = 0, 1, 2
    color = {n: WHITE for n in g.order}
    for start in g.order:
        if color[start] != WHITE:
            continue
        stack: list[tuple[str, bool]] = [(start, False)]
        while stack:
            ref, done = stack.pop()
            if done:
                color[ref] = BLACK
                continue
            if color[ref] == BLACK:
                continue
            if color[ref] == GREY:
                return False
            color[ref] = GREY
            stack.append((ref, True))
            node = g.nodes[ref]
            if not node.is_leaf:
                for child in (node.down, node.right):
                    if color[child] == GREY:
                        return False
                    if color[child] == WHITE:
                        stack.append((child, False))
    return True


def graph_height(g: TermGraph) -> int:
    """Length in edges of the longest root-to-leaf path of a finite graph."""
    if not is_acyclic(g):
        raise GraphError("height is undefined for a cyclic graph")
    memo: dict[str, int] = {}

    def depth(ref: str) -> int:
        if ref in memo:
            return memo[ref]
        node = g.nodes[ref]
        value = 0 if node.is_leaf else 1 + max(depth(node.down), depth(node.right))
        memo[ref] = value
        return value

    # iterative-friendly: graphs are small, recursion depth equals height
    return depth(g.root)


@dataclass(frozen=True)
class TreeNode:
    """A node of a bounded unfolding.  ``label is None`` marks a cut."""

    ref: str | None = field(compare=False)
    label: Label | None
    down: "TreeNode | None"
    right: "TreeNode | None"

    @property
    def is_cut(self) -> bool:
        return self.label is None


CUT = TreeNode(ref=None, label=None, down=None, right=None)


def unfold(g: TermGraph, depth: int) -> TreeNode:
    """The tree unfolding of ``g`` down to ``depth`` edges from the root.

    Nodes at distance <= ``depth`` are materialised; anything beyond is
    replaced by a cut marker.  An acyclic graph unfolded at or beyond its
    height therefore yields its complete tree with no cuts.
    """
    if depth < 0:
        raise GraphError("unfold depth must be >= 0")
    memo: dict[tuple[str, int], TreeNode] = {}

    def build(ref: str, budget: int) -> TreeNode:
        key = (ref, budget)
        hit = memo.get(key)
        if hit is not None:
            return hit
        node = g.nodes[ref]
        if node.is_leaf:
            out = TreeNode(ref, node.label, None, None)
        elif budget == 0:
            out = TreeNode(ref, node.label, CUT, CUT)
        else:
            out = TreeNode(ref, node.label, build(node.down, budget - 1), build(node.right, budget - 1))
        memo[key] = out
        return out

    return build(g.root, depth)


def _bisim_table(g1: TermGraph, g2: TermGraph, seeds, full: bool = False) -> dict[tuple[str, str], bool]:
    """Greatest fixpoint of the bisimulation conditions over node pairs.

    Only pairs reachable from the seed pairs are considered.  A pair is
    related when the labels are equal and both child pairs are related;
    the table starts optimistic and pairs are struck out until stable.

    With ``full`` the table also descends below label mismatches, so every
    inner-product pair reachable from the seeds gets an entry; callers that
    walk the product themselves rely on that coverage.
    """
    table: dict[tuple[str, str], bool] = {}
    succ: dict[tuple[str, str], tuple[tuple[str, str], tuple[str, str]] | None] = {}
    stack = list(seeds)
    while stack:
        pair = stack.pop()
        if pair in table:
            continue
        n1, n2 = pair
        node1, node2 = g1.nodes[n1], g2.nodes[n2]
        if node1.label != node2.label:
            table[pair] = False
            succ[pair] = None
            if full and not node1.is_leaf and not node2.is_leaf:
                stack.append((node1.down, node2.down))
                stack.append((node1.right, node2.right))
            continue
        table[pair] = True
        if node1.is_leaf:
            succ[pair] = None
        else:
            kids = ((node1.down, node2.down), (node1.right, node2.right))
            succ[pair] = kids
            stack.extend(kids)

    changed = True
    while changed:
        changed = False
        for pair, kids in succ.items():
            if table[pair] and kids is not None:
                if not (table[kids[0]] and table[kids[1]]):
                    table[pair] = False
                    changed = True
    return table


def bisimilar(g1: TermGraph, n1: str, g2: TermGraph, n2: str) -> bool:
    """Whether the trees unfolding from the two nodes are equal.

    Decided directly on the presentations: the naive greatest fixpoint over
    the product of the two reachable node sets.  Both graphs must be of the
    same kind.
    """
    if g1.kind != g2.kind:
        raise GraphError(f"incomparable kinds: {g1.kind} vs {g2.kind}")
    for g, n in ((g1, n1), (g2, n2)):
        if n not in g.nodes:
            raise GraphError(f"dangling reference: {n!r}")
    return _bisim_table(g1, g2, [(n1, n2)])[(n1, n2)]


@dataclass(frozen=True)
class PredicateResult:
    """A boolean valuation per node plus the verdict at the root."""

    valuation: dict[str, bool]
    root_verdict: bool

    def __getitem__(self, ref: str) -> bool:
        return self.valuation[ref]


Rule = Callable[[TermGraph, str, Mapping[str, bool]], bool]


def _fixpoint(g: TermGraph, rule: Rule, start: bool) -> PredicateResult:
    val = {n: start for n in g.order}
    pending = deque(g.order)
    queued = set(g.order)
    parents = g.parents
    while pending:
        ref = pending.popleft()
        queued.discard(ref)
        cur = val[ref]
        fired = rule(g, ref, val)
        new = (cur and fired) if start else (cur or fired)
        if new != cur:
            val[ref] = new
            for parent in parents[ref]:
                if parent not in queued:
                    pending.append(parent)
                    queued.add(parent)
    return PredicateResult(val, val[g.root])


def lfp_eval(g: TermGraph, rule: Rule) -> PredicateResult:
    """Least fixpoint of a monotone local rule: start all-false, fire upward."""
    return _fixpoint(g, rule, start=False)


def gfp_eval(g: TermGraph, rule: Rule) -> PredicateResult:
    """Greatest fixpoint of a monotone local rule: start all-true, strike down."""
    return _fixpoint(g, rule, start=True)


def always(g: TermGraph, local: Callable[[TermGraph, str], bool]) -> PredicateResult:
    """Holds at a node when ``local`` holds at every node reachable from it.

    Computed as the greatest fixpoint of "local here and at both children".
    Equivalent to conjoining ``local`` over the reachable set; the test suite
    checks the two formulations against each other (see
    :func:`always_by_reachability`).
    """
    base = {n: bool(local(g, n)) for n in g.order}

    def rule(gr: TermGraph, ref: str, val: Mapping[str, bool]) -> bool:
        if not base[ref]:
            return False
        node = gr.nodes[ref]
        if node.is_leaf:
            return True
        return val[node.down] and val[node.right]

    return gfp_eval(g, rule)


def always_by_reachability(g: TermGraph, local: Callable[[TermGraph, str], bool]) -> PredicateResult:
    """Reference formulation of :func:`always` via reachable-set conjunction."""
    base = {n: bool(local(g, n)) for n in g.order}
    val = {n: all(base[m] for m in g.reach(n)) for n in g.order}
    return PredicateResult(val, val[g.root])


def relabel(g: TermGraph, kind: str, fn: Callable[[str, Label], Label]) -> TermGraph:
    """A copy of ``g`` with every label rewritten and the kind switched."""
    nodes = {
        name: Node(fn(name, node.label), node.down, node.right)
        for name, node in g.nodes.items()
    }
    return TermGraph(kind, g.root, nodes)


def leaf_payoffs(g: TermGraph) -> Iterator[tuple[str, Payoff]]:
    for name in g.order:
        node = g.nodes[name]
        if node.is_leaf:
            yield name, node.label.payoff

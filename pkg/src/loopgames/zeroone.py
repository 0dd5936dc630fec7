"""The zero-one loop game and everything proved about it.

The loop game alternates two agents forever: at each turn the mover may
stop (down) or continue (right).  Stopping pays the stopper 0 and the other
agent 1, so each agent would rather the *other* one stopped.  Regular
profiles of this game are named by an eventually periodic word of choices;
the module decides the equilibrium predicates on the graph side, mirrors
them with an independent word-level oracle, and packages exhaustive
comparisons into reports.

Also here: the escalation witnesses (two strategies whose combination never
stops), a truncated dollar auction, and the two finite approximation
families obtained by cutting the loop after either agent.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .termgraph import (
    DOWN,
    RIGHT,
    GameNode,
    GraphError,
    KIND_GAME,
    KIND_PROFILE,
    KIND_STRATEGY,
    Leaf,
    Node,
    Payoff,
    ProfileNode,
    StrategyNode,
    TermGraph,
    always,
    bisimilar,
    is_acyclic,
    lfp_eval,
    relabel,
)
from .model import _require_kind, all_profiles, converges, game_of, is_spe
from .strategies import is_full, st2g, sum_strategies
from .equilibrium import is_bi

AGENT_A = "A"
AGENT_B = "B"

# stop payoffs: whoever stops gets 0 and hands 1 to the other agent
A_STOPS = Payoff.of(A=0, B=1)
B_STOPS = Payoff.of(A=1, B=0)


def make_zero_one() -> TermGraph:
    """The two-node loop game: A may stop or pass to B, B may stop or pass back."""
    return TermGraph(
        KIND_GAME,
        "a",
        {
            "a": Node(GameNode(AGENT_A), "fa", "b"),
            "b": Node(GameNode(AGENT_B), "fb", "a"),
            "fa": Node(Leaf(A_STOPS)),
            "fb": Node(Leaf(B_STOPS)),
        },
    )


@dataclass(frozen=True)
class ZeroOneWord:
    """An eventually periodic choice word: ``prefix`` then ``period`` forever.

    Position i of the infinite word belongs to agent A when i is even and
    to agent B when i is odd.
    """

    prefix: str
    period: str

    def __post_init__(self):
        if not self.period:
            raise GraphError("period must be non-empty")
        for c in self.prefix + self.period:
            if c not in (DOWN, RIGHT):
                raise GraphError(f"choice word may only contain {DOWN!r} and {RIGHT!r}")

    def at(self, i: int) -> str:
        if i < len(self.prefix):
            return self.prefix[i]
        return self.period[(i - len(self.prefix)) % len(self.period)]

    @property
    def aligned_period(self) -> str:
        """The period, doubled when odd so one loop preserves seat parity."""
        return self.period if len(self.period) % 2 == 0 else self.period * 2

    def __str__(self) -> str:
        return f"{self.prefix}|{self.period}"


def make_zero_one_profile(w: ZeroOneWord) -> TermGraph:
    """The regular profile of the loop game that plays ``w``.

    One spine node per position of prefix plus aligned period; the last
    period node loops back to the first.  An odd period is laid out twice
    so the loop re-enters on the same agent's seat, hence the spine has
    ``len(prefix) + len(period)`` nodes for even periods and
    ``len(prefix) + 2*len(period)`` for odd ones.
    """
    spine = w.prefix + w.aligned_period
    count = len(spine)
    nodes: dict[str, Node] = {
        "fa": Node(Leaf(A_STOPS)),
        "fb": Node(Leaf(B_STOPS)),
    }
    loop_start = len(w.prefix)
    for i, choice in enumerate(spine):
        owner = AGENT_A if i % 2 == 0 else AGENT_B
        stop = "fa" if owner == AGENT_A else "fb"
        nxt = f"s{i + 1}" if i + 1 < count else f"s{loop_start}"
        nodes[f"s{i}"] = Node(ProfileNode(owner, choice), stop, nxt)
    return TermGraph(KIND_PROFILE, "s0", nodes)


def _s0s1(s: TermGraph) -> tuple[dict[str, bool], dict[str, bool]]:
    """Mutual greatest fixpoint of the two alternation-shape predicates."""
    _require_kind(s, KIND_PROFILE)
    s0 = dict.fromkeys(s.order, True)
    s1 = dict.fromkeys(s.order, True)
    changed = True
    while changed:
        changed = False
        for ref in s.order:
            node = s.nodes[ref]
            if node.is_leaf:
                want0 = want1 = False
            else:
                down = s.nodes[node.down]
                stop = down.label.payoff if down.is_leaf else None
                owner = node.label.owner
                want0 = owner == AGENT_A and stop == A_STOPS and s1[node.right]
                want1 = owner == AGENT_B and stop == B_STOPS and s0[node.right]
            if s0[ref] and not want0:
                s0[ref] = False
                changed = True
            if s1[ref] and not want1:
                s1[ref] = False
                changed = True
    return s0, s1


def sat_s0(s: TermGraph) -> bool:
    """The profile starts on A's seat of the loop game shape."""
    return _s0s1(s)[0][s.root]


def sat_s1(s: TermGraph) -> bool:
    """The profile starts on B's seat of the loop game shape."""
    return _s0s1(s)[1][s.root]


def _require_zero_one(s: TermGraph) -> None:
    if not (sat_s0(s) or sat_s1(s)):
        raise GraphError("not a 0,1-profile")


def _acbes_rule(g: TermGraph, ref: str, val) -> bool:
    # A keeps continuing, B eventually stops (leaves hold vacuously)
    node = g.nodes[ref]
    if node.is_leaf:
        return True
    down = g.nodes[node.down]
    if not down.is_leaf:
        return False
    if node.label.owner == AGENT_A:
        return down.label.payoff == A_STOPS and node.label.choice == RIGHT and val[node.right]
    if node.label.owner == AGENT_B:
        return down.label.payoff == B_STOPS and (node.label.choice == DOWN or val[node.right])
    return False


def _bcaes_rule(g: TermGraph, ref: str, val) -> bool:
    # mirror image: B keeps continuing, A eventually stops
    node = g.nodes[ref]
    if node.is_leaf:
        return True
    down = g.nodes[node.down]
    if not down.is_leaf:
        return False
    if node.label.owner == AGENT_B:
        return down.label.payoff == B_STOPS and node.label.choice == RIGHT and val[node.right]
    if node.label.owner == AGENT_A:
        return down.label.payoff == A_STOPS and (node.label.choice == DOWN or val[node.right])
    return False


def is_acbes(s: TermGraph) -> bool:
    """From here on, A always continues until B stops (and B does stop)."""
    _require_zero_one(s)
    return lfp_eval(s, _acbes_rule).root_verdict


def is_sacbes(s: TermGraph) -> bool:
    """The A-continues/B-stops discipline holds at every reachable node."""
    _require_zero_one(s)
    acbes = lfp_eval(s, _acbes_rule)
    return always(s, lambda _g, ref: acbes.valuation[ref]).root_verdict


def is_bcaes(s: TermGraph) -> bool:
    """From here on, B always continues until A stops (and A does stop)."""
    _require_zero_one(s)
    return lfp_eval(s, _bcaes_rule).root_verdict


def is_sbcaes(s: TermGraph) -> bool:
    """The B-continues/A-stops discipline holds at every reachable node."""
    _require_zero_one(s)
    bcaes = lfp_eval(s, _bcaes_rule)
    return always(s, lambda _g, ref: bcaes.valuation[ref]).root_verdict


def word_sacbes(w: ZeroOneWord) -> bool:
    """Word-level oracle for :func:`is_sacbes`, independent of the graph side.

    True iff every even (A) position of the infinite word carries the
    continue choice and the repeating part stops on some odd (B) position.
    """
    k = len(w.prefix)
    loop = w.aligned_period
    prefix_ok = all(c == RIGHT for i, c in enumerate(w.prefix) if i % 2 == 0)
    loop_ok = all(c == RIGHT for i, c in enumerate(loop, start=k) if i % 2 == 0)
    b_stops = any(c == DOWN for i, c in enumerate(loop, start=k) if i % 2 == 1)
    return prefix_ok and loop_ok and b_stops


def word_sbcaes(w: ZeroOneWord) -> bool:
    """Mirror oracle for :func:`is_sbcaes`."""
    k = len(w.prefix)
    loop = w.aligned_period
    prefix_ok = all(c == RIGHT for i, c in enumerate(w.prefix) if i % 2 == 1)
    loop_ok = all(c == RIGHT for i, c in enumerate(loop, start=k) if i % 2 == 1)
    a_stops = any(c == DOWN for i, c in enumerate(loop, start=k) if i % 2 == 0)
    return prefix_ok and loop_ok and a_stops


@dataclass(frozen=True)
class WordRow:
    """Graph-side and word-side verdicts for one choice word."""

    word: ZeroOneWord
    spe: bool
    sacbes: bool
    sbcaes: bool
    oracle_sacbes: bool
    oracle_sbcaes: bool

    @property
    def agree(self) -> bool:
        return (
            self.spe == (self.sacbes or self.sbcaes)
            and self.sacbes == self.oracle_sacbes
            and self.sbcaes == self.oracle_sbcaes
        )


@dataclass(frozen=True)
class ProfileMismatch:
    """A finite-family profile on which the shape predicate and BI disagree."""

    family: str
    n: int
    word: str
    shape: bool
    bi: bool


@dataclass(frozen=True)
class FamilyRow:
    """Exhaustive results for one finite family member."""

    family: str
    n: int
    profiles: int
    mismatches: int
    bi_count: int
    bi_words: tuple[str, ...]


@dataclass
class TheoremReport:
    """An exhaustive desk-scale check: bounds, totals, and any counterexamples."""

    name: str
    bounds: dict[str, int]
    total: int
    rows: list
    counterexamples: list
    notes: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.counterexamples


def enumerate_words(max_prefix: int, max_period: int):
    """All choice words with bounded prefix and period, deterministically."""
    for plen in range(max_prefix + 1):
        for prefix in itertools.product((DOWN, RIGHT), repeat=plen):
            for qlen in range(1, max_period + 1):
                for period in itertools.product((DOWN, RIGHT), repeat=qlen):
                    yield ZeroOneWord("".join(prefix), "".join(period))


def check_theorem(max_prefix: int, max_period: int) -> TheoremReport:
    """Compare subgame-perfection with the two stop disciplines, word by word.

    For every word within the bounds, the profile's subgame-perfection is
    computed by the fixpoint engine and compared against the disjunction of
    the two discipline predicates -- once evaluated on the graph, once by
    the independent word oracle.  Any disagreement is a counterexample.
    """
    rows: list[WordRow] = []
    bad: list[WordRow] = []
    for w in enumerate_words(max_prefix, max_period):
        s = make_zero_one_profile(w)
        row = WordRow(
            word=w,
            spe=is_spe(s),
            sacbes=is_sacbes(s),
            sbcaes=is_sbcaes(s),
            oracle_sacbes=word_sacbes(w),
            oracle_sbcaes=word_sbcaes(w),
        )
        rows.append(row)
        if not row.agree:
            bad.append(row)
    return TheoremReport(
        name="theorem01",
        bounds={"max_prefix": max_prefix, "max_period": max_period},
        total=len(rows),
        rows=rows,
        counterexamples=bad,
    )


def escalation_witnesses() -> tuple[TermGraph, TermGraph, TermGraph]:
    """Two single-agent plans that each always continue, and their combination.

    Each strategy continues at its own seat and defers at the other seat;
    combined they yield the all-continue profile, which never reaches a leaf.
    """
    stA = TermGraph(
        KIND_STRATEGY,
        "a",
        {
            "a": Node(StrategyNode(RIGHT), "fa", "b"),
            "b": Node(StrategyNode(AGENT_B), "fb", "a"),
            "fa": Node(Leaf(A_STOPS)),
            "fb": Node(Leaf(B_STOPS)),
        },
    )
    stB = TermGraph(
        KIND_STRATEGY,
        "a",
        {
            "a": Node(StrategyNode(AGENT_A), "fa", "b"),
            "b": Node(StrategyNode(RIGHT), "fb", "a"),
            "fa": Node(Leaf(A_STOPS)),
            "fb": Node(Leaf(B_STOPS)),
        },
    )
    s_inf = make_zero_one_profile(ZeroOneWord("", "r"))
    return stA, stB, s_inf


def check_prop_escal() -> list[tuple[str, bool]]:
    """Evaluate the six escalation statements; all are expected to hold."""
    stA, stB, s_inf = escalation_witnesses()
    g01 = make_zero_one()
    gA = st2g(stA, AGENT_A)
    gB = st2g(stB, AGENT_B)
    prof_game = game_of(s_inf)
    combined = sum_strategies({AGENT_A: stA, AGENT_B: stB})
    return [
        ("strategy for A is full", is_full(stA, AGENT_A)),
        ("strategy for B is full", is_full(stB, AGENT_B)),
        (
            "both strategies project to the loop game",
            bisimilar(gA, gA.root, g01, g01.root)
            and bisimilar(gB, gB.root, g01, g01.root),
        ),
        (
            "the all-continue profile plays the loop game",
            bisimilar(prof_game, prof_game.root, g01, g01.root),
        ),
        (
            "the strategies combine into the all-continue profile",
            bisimilar(combined, combined.root, s_inf, s_inf.root),
        ),
        (
            "the all-continue profile never reaches a leaf",
            not converges(s_inf).root_verdict,
        ),
    ]


def payroll_note_check(game: TermGraph | None = None) -> bool:
    """Escalation despite bounded stakes.

    Takes the near-root stop payoffs (leaves within two steps of the root)
    as the stake scale, and checks that (a) no leaf anywhere in the graph
    exceeds that scale in absolute value and (b) the all-continue profile
    of the game still diverges.  On the loop game the scale is 1; on games
    whose pots grow with depth the bound check fails.
    """
    g = game if game is not None else make_zero_one()
    _require_kind(g, KIND_GAME)
    near: list[Fraction] = []
    frontier = [g.root]
    for _ in range(2):
        nxt = []
        for ref in frontier:
            node = g.nodes[ref]
            if node.is_leaf:
                continue
            for child in (node.down, node.right):
                cnode = g.nodes[child]
                if cnode.is_leaf:
                    near.extend(v for _, v in cnode.label.payoff.entries)
                else:
                    nxt.append(child)
        frontier = nxt
    if not near:
        return False
    bound = max(abs(v) for v in near)
    bounded = all(
        abs(v) <= bound
        for ref in g.order
        if g.nodes[ref].is_leaf
        for _, v in g.nodes[ref].label.payoff.entries
    )
    all_continue = relabel(
        g,
        KIND_PROFILE,
        lambda _n, lab: ProfileNode(lab.owner, RIGHT) if isinstance(lab, GameNode) else lab,
    )
    diverges = not converges(all_continue).root_verdict
    return bounded and diverges


def make_dollar_auction(rounds: int, stake, pot) -> TermGraph:
    """A finite escalation ladder: each agent may quit or raise, stakes mount.

    Stage i (0-based) has an A-turn and a B-turn.  Quitting as A at stage i
    pays (-stake*i, pot - stake*i); quitting as B pays
    (pot - stake*(i+1), -stake*i).  After ``rounds`` stages the final right
    branch is closed with a terminal leaf carrying the stage-``rounds``
    B-quit payoff (the truncation rule).
    """
    if rounds < 1:
        raise GraphError("rounds must be >= 1")
    stake = Fraction(stake)
    pot = Fraction(pot)
    nodes: dict[str, Node] = {}
    for i in range(rounds):
        nodes[f"la{i}"] = Node(Leaf(Payoff.of(A=-stake * i, B=pot - stake * i)))
        nodes[f"lb{i}"] = Node(Leaf(Payoff.of(A=pot - stake * (i + 1), B=-stake * i)))
        nxt = f"a{i + 1}" if i + 1 < rounds else "end"
        nodes[f"a{i}"] = Node(GameNode(AGENT_A), f"la{i}", f"b{i}")
        nodes[f"b{i}"] = Node(GameNode(AGENT_B), f"lb{i}", nxt)
    nodes["end"] = Node(Leaf(Payoff.of(A=pot - stake * (rounds + 1), B=-stake * rounds)))
    return TermGraph(KIND_GAME, "a0", nodes)


def make_F(n: int) -> TermGraph:
    """The loop game cut after B's n-th turn, tail replaced by A's stop leaf."""
    if n < 1:
        raise GraphError("n must be >= 1")
    nodes: dict[str, Node] = {
        "fa": Node(Leaf(A_STOPS)),
        "fb": Node(Leaf(B_STOPS)),
    }
    for i in range(1, n + 1):
        nodes[f"a{i}"] = Node(GameNode(AGENT_A), "fa", f"b{i}")
        nxt = f"a{i + 1}" if i < n else "fa"
        nodes[f"b{i}"] = Node(GameNode(AGENT_B), "fb", nxt)
    return TermGraph(KIND_GAME, "a1", nodes)


def make_K(n: int) -> TermGraph:
    """The loop game cut after A's n-th turn, tail replaced by B's stop leaf."""
    if n < 1:
        raise GraphError("n must be >= 1")
    nodes: dict[str, Node] = {
        "fa": Node(Leaf(A_STOPS)),
        "fb": Node(Leaf(B_STOPS)),
    }
    for i in range(1, n + 1):
        nxt = f"b{i}" if i < n else "fb"
        nodes[f"a{i}"] = Node(GameNode(AGENT_A), "fa", nxt)
        if i < n:
            nodes[f"b{i}"] = Node(GameNode(AGENT_B), "fb", f"a{i + 1}")
    return TermGraph(KIND_GAME, "a1", nodes)


def sat_sf(s: TermGraph) -> bool:
    """Shape predicate for profiles of the F family: B always continues.

    A's choices are free; every B turn must continue; the walk must end on
    A's stop leaf.
    """
    _require_kind(s, KIND_PROFILE)
    if not is_acyclic(s):
        raise GraphError("cyclic input")

    def sf(ref: str) -> bool:
        node = s.nodes[ref]
        if node.is_leaf:
            return node.label.payoff == A_STOPS
        if node.label.owner != AGENT_A:
            return False
        down = s.nodes[node.down]
        if not (down.is_leaf and down.label.payoff == A_STOPS):
            return False
        nxt = s.nodes[node.right]
        if nxt.is_leaf or nxt.label.owner != AGENT_B or nxt.label.choice != RIGHT:
            return False
        ndown = s.nodes[nxt.down]
        if not (ndown.is_leaf and ndown.label.payoff == B_STOPS):
            return False
        return sf(nxt.right)

    return sf(s.root)


def sat_sk(s: TermGraph) -> bool:
    """Shape predicate for profiles of the K family: A always continues.

    Every A turn must continue; B's choices are free; the walk must end on
    B's stop leaf.
    """
    _require_kind(s, KIND_PROFILE)
    if not is_acyclic(s):
        raise GraphError("cyclic input")

    def sk(ref: str) -> bool:
        node = s.nodes[ref]
        if node.is_leaf or node.label.owner != AGENT_A or node.label.choice != RIGHT:
            return False
        down = s.nodes[node.down]
        if not (down.is_leaf and down.label.payoff == A_STOPS):
            return False
        return sk_tail(node.right)

    def sk_tail(ref: str) -> bool:
        node = s.nodes[ref]
        if node.is_leaf:
            return node.label.payoff == B_STOPS
        if node.label.owner != AGENT_B:
            return False
        down = s.nodes[node.down]
        if not (down.is_leaf and down.label.payoff == B_STOPS):
            return False
        return sk(node.right)

    return sk(s.root)


def spine_choice_word(profile: TermGraph) -> str:
    """Choices of the inner nodes in presentation order (the spine, for chains)."""
    return "".join(profile.nodes[ref].label.choice for ref in profile.inner_refs())


def check_appendix_prop(n_max: int) -> TheoremReport:
    """Exhaustively compare the shape predicates with backward induction.

    For every member of both finite families up to ``n_max``, every choice
    assignment is checked: the family's shape predicate must coincide with
    the backward-induction verdict.  The report also records that the two
    families certify different choice patterns: the F side leaves the first
    agent free to stop while the K side forces it to continue, at every n.
    """
    rows: list[FamilyRow] = []
    bad: list[ProfileMismatch] = []
    total = 0
    divergence: dict[int, bool] = {}
    for n in range(1, n_max + 1):
        words: dict[str, tuple[str, ...]] = {}
        for fam, game, shape in (("F", make_F(n), sat_sf), ("K", make_K(n), sat_sk)):
            mismatches = 0
            bi_words: list[str] = []
            count = 0
            for s in all_profiles(game):
                count += 1
                expected = shape(s)
                actual = is_bi(s)
                if expected != actual:
                    mismatches += 1
                    bad.append(ProfileMismatch(fam, n, spine_choice_word(s), expected, actual))
                if actual:
                    bi_words.append(spine_choice_word(s))
            total += count
            rows.append(FamilyRow(fam, n, count, mismatches, len(bi_words), tuple(bi_words)))
            words[fam] = tuple(bi_words)
        f_allows_a_stop = any(
            any(w[i] == DOWN for i in range(0, len(w), 2)) for w in words["F"]
        )
        k_allows_a_stop = any(
            any(w[i] == DOWN for i in range(0, len(w), 2)) for w in words["K"]
        )
        divergence[n] = f_allows_a_stop and not k_allows_a_stop
    return TheoremReport(
        name="appendix",
        bounds={"n_max": n_max},
        total=total,
        rows=rows,
        counterexamples=bad,
        notes={
            "pattern_divergence_per_n": divergence,
            "pattern_divergence": all(divergence.values()) if divergence else False,
        },
    )

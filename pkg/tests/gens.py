"""Seeded random builders shared by the test modules.

Every generator takes a ``random.Random`` so each test pins its own
seed; nothing here touches the global RNG state.
"""

from fractions import Fraction

from loopgames import (
    DOWN,
    RIGHT,
    KIND_PROFILE,
    GameNode,
    Leaf,
    Node,
    Payoff,
    ProfileNode,
    TermGraph,
    relabel,
)

AGENTS = ("A", "B")


def random_payoff(rng, agents=AGENTS, fractions=False):
    def value():
        if fractions and rng.random() < 0.3:
            return Fraction(rng.randint(-9, 9), rng.randint(1, 9))
        return Fraction(rng.randint(0, 9))

    return Payoff.of({a: value() for a in agents})


def random_game(rng, max_depth=4, p_leaf=0.35, agents=AGENTS, max_inner=40, fractions=False):
    """A random finite game tree with at most ``max_inner`` decision nodes."""
    nodes = {}
    inner_count = [0]

    def build(depth):
        name = f"n{len(nodes)}"
        nodes[name] = None  # reserve the name before recursing
        if depth >= max_depth or inner_count[0] >= max_inner or rng.random() < p_leaf:
            nodes[name] = Node(Leaf(random_payoff(rng, agents, fractions)))
            return name
        inner_count[0] += 1
        owner = rng.choice(agents)
        down = build(depth + 1)
        right = build(depth + 1)
        nodes[name] = Node(GameNode(owner), down, right)
        return name

    root = build(0)
    return TermGraph("game", root, nodes)


def random_choices(rng, game):
    return {ref: rng.choice((DOWN, RIGHT)) for ref in game.inner_refs()}


def profile_from_choices(game, choices):
    def fn(name, label):
        if isinstance(label, GameNode):
            return ProfileNode(label.owner, choices[name])
        return label

    return relabel(game, KIND_PROFILE, fn)


def random_profile_of(rng, game):
    return profile_from_choices(game, random_choices(rng, game))


def random_regular_profile(rng, max_nodes=12, p_leaf=0.3, p_back=0.35, agents=AGENTS):
    """A random profile graph that may contain cycles.

    Built outward from the root, so everything is reachable; a child
    slot either closes a cycle back to an open decision node, ends in a
    leaf, or grows a fresh node.
    """
    nodes = {}
    inner = []

    def leaf_ref():
        name = f"t{len(nodes)}"
        nodes[name] = Node(Leaf(random_payoff(rng, agents)))
        return name

    def build(depth):
        if inner and rng.random() < p_back:
            return rng.choice(inner)
        if len(nodes) >= max_nodes or rng.random() < p_leaf:
            return leaf_ref()
        name = f"p{len(nodes)}"
        nodes[name] = None
        inner.append(name)
        owner = rng.choice(agents)
        choice = rng.choice((DOWN, RIGHT))
        down = build(depth + 1)
        right = build(depth + 1)
        nodes[name] = Node(ProfileNode(owner, choice), down, right)
        return name

    root = build(0)
    return TermGraph("profile", root, nodes)

"""Convertibility, deviation enumeration, Nash search, backward induction."""

import random

import pytest

from loopgames import (
    DOWN,
    RIGHT,
    DeviationBudget,
    GraphError,
    Leaf,
    NashVerdict,
    Node,
    Payoff,
    ProfileNode,
    TermGraph,
    always,
    bi_valuation,
    bisimilar,
    convertible,
    enumerate_deviations,
    game_of,
    graph_height,
    is_bi,
    is_nash,
    is_pe,
    payoff,
)
from gens import random_game, random_profile_of, random_regular_profile


class TestConvertible:
    def test_reflexive(self):
        rng = random.Random(101)
        for _ in range(15):
            p = random_regular_profile(rng)
            for agent in p.agents or ("A",):
                if agent in p.agents:
                    assert convertible(p, p, agent)

    def test_own_node_difference(self, gg_blocks):
        # s1 and s2 differ at one A-owned node only
        assert convertible(gg_blocks["s1"], gg_blocks["s2"], "A")
        assert convertible(gg_blocks["s2"], gg_blocks["s1"], "A")
        assert not convertible(gg_blocks["s1"], gg_blocks["s2"], "B")

    def test_repeated_difference_blocks_even_the_owner(self, zo_blocks):
        # b recurs below itself through the loop in both profiles, so its
        # changed choice shows up at infinitely many positions
        assert not convertible(zo_blocks["s10a"], zo_blocks["sBoxR"], "B")
        assert not convertible(zo_blocks["s10a"], zo_blocks["sBoxR"], "A")

    def test_owner_converts_a_first_occurrence(self, zo_blocks):
        # same change at b, but only at its first occurrence: below the
        # rewrite the profile rejoins the original behaviour
        s10a = zo_blocks["s10a"]
        first_pass = TermGraph("profile", "a0", {
            "a0": Node(ProfileNode("A", RIGHT), "fa", "b0"),
            "b0": Node(ProfileNode("B", RIGHT), "fb", "a1"),
            "a1": Node(ProfileNode("A", RIGHT), "fa", "b1"),
            "b1": Node(ProfileNode("B", DOWN), "fb", "a1"),
            "fa": Node(Leaf(Payoff.of(A=0, B=1))),
            "fb": Node(Leaf(Payoff.of(A=1, B=0))),
        })
        assert convertible(s10a, first_pass, "B")
        assert convertible(first_pass, s10a, "B")
        assert not convertible(s10a, first_pass, "A")

    def test_two_owners_block_both(self, zo_blocks):
        # a and b both flip, so neither agent can do it alone
        assert not convertible(zo_blocks["s10a"], zo_blocks["s01a"], "A")
        assert not convertible(zo_blocks["s10a"], zo_blocks["s01a"], "B")

    def test_difference_on_a_cycle_never_converts(self, zo_blocks):
        # rewriting the loop node means rewriting infinitely many positions,
        # which the finite derivation cannot cover
        assert not convertible(zo_blocks["sBoxR"], zo_blocks["s01a"], "A")
        assert not convertible(zo_blocks["s01a"], zo_blocks["sBoxR"], "A")

    def test_root_difference_above_a_shared_loop(self, zo_blocks):
        # sdBoxR differs from sBoxR at the root occurrence only
        assert convertible(zo_blocks["sBoxR"], zo_blocks["sdBoxR"], "A")
        assert convertible(zo_blocks["sdBoxR"], zo_blocks["sBoxR"], "A")
        assert not convertible(zo_blocks["sBoxR"], zo_blocks["sdBoxR"], "B")

    def test_different_games_rejected(self, gg_blocks, zo_blocks):
        with pytest.raises(GraphError, match="different games"):
            convertible(gg_blocks["s1"], zo_blocks["sBoxR"], "A")

    def test_shifted_root_rejected(self, zo_blocks):
        with pytest.raises(GraphError, match="different games"):
            convertible(zo_blocks["s10a"], zo_blocks["s10b"], "A")


class TestDeviations:
    def test_depth_zero_is_identity(self, gg_blocks):
        s = gg_blocks["s1"]
        assert enumerate_deviations(s, "A", DeviationBudget(0)) == [s]

    def test_count_on_a_finite_tree(self, gg_blocks):
        s = gg_blocks["s1"]
        h = graph_height(s)
        devs = enumerate_deviations(s, "A", DeviationBudget(h))
        assert len(devs) == 2 ** 5  # five A-owned positions in the tree
        assert len(enumerate_deviations(s, "B", DeviationBudget(h))) == 2 ** 3

    def test_unrolling_a_loop(self, zo_blocks):
        s = zo_blocks["sBoxR"]
        devs = enumerate_deviations(s, "A", DeviationBudget(2))
        assert len(devs) == 2  # only the root copy of a is editable
        pays = sorted(str(payoff(d).payoff) for d in devs if payoff(d).defined)
        assert pays == ["{A:0, B:1}"]

    def test_original_always_included(self, zo_blocks):
        s = zo_blocks["sdBoxR"]
        devs = enumerate_deviations(s, "A", DeviationBudget(3))
        assert any(bisimilar(d, d.root, s, s.root) for d in devs)

    def test_all_play_the_same_game(self, gg_blocks):
        s = gg_blocks["s3"]
        g = game_of(s)
        for d in enumerate_deviations(s, "B", DeviationBudget(2)):
            gd = game_of(d)
            assert bisimilar(gd, gd.root, g, g.root)

    def test_all_convertible_by_the_agent(self, zo_blocks):
        for s in (zo_blocks["s10a"], zo_blocks["sdBoxR"]):
            for agent in ("A", "B"):
                for d in enumerate_deviations(s, agent, DeviationBudget(3)):
                    assert convertible(s, d, agent)

    def test_pairwise_distinct(self, gg_blocks):
        devs = enumerate_deviations(gg_blocks["s2"], "A", DeviationBudget(2))
        for i, d1 in enumerate(devs):
            for d2 in devs[i + 1:]:
                assert not bisimilar(d1, d1.root, d2, d2.root)

    def test_negative_depth_rejected(self):
        with pytest.raises(GraphError, match=">= 0"):
            DeviationBudget(-1)


class TestNash:
    def test_spe_profiles_pass_exactly(self, gg_blocks):
        for name in ("s1", "s2"):
            v = is_nash(gg_blocks[name], DeviationBudget(5))
            assert v.status == NashVerdict.NASH
            assert str(v) == "nash"

    def test_refutation_with_witness(self, gg_blocks):
        v = is_nash(gg_blocks["s3"], DeviationBudget(5))
        assert v.status == NashVerdict.REFUTED
        assert v.agent == "A"
        assert v.gain == (2, 4)
        assert str(v) == "refuted(agent=A, gain=2->4)"
        # the witness is a genuine unilateral improvement
        assert convertible(gg_blocks["s3"], v.witness, "A")
        assert payoff(v.witness).payoff["A"] == 4

    def test_shallow_budget_is_only_bounded(self, gg_blocks):
        v = is_nash(gg_blocks["s1"], DeviationBudget(2))
        assert v.status == NashVerdict.BOUNDED
        assert str(v) == "no-improving-deviation(depth=2)"

    def test_budget_beyond_height_still_exact(self, gg_blocks):
        assert is_nash(gg_blocks["s1"], DeviationBudget(40)).status == NashVerdict.NASH

    def test_cyclic_profiles_never_exact(self, zo_blocks):
        v = is_nash(zo_blocks["sdBoxR"], DeviationBudget(6))
        assert v.status == NashVerdict.BOUNDED

    def test_divergent_deviations_never_refute(self, zo_blocks):
        # A's only change with an effect makes the play infinite, which is
        # no improvement over the defined payoff it currently gets
        v = is_nash(zo_blocks["s01a"], DeviationBudget(4))
        assert v.status == NashVerdict.BOUNDED

    def test_undefined_root_payoff_rejected(self, zo_blocks):
        with pytest.raises(GraphError, match="undefined"):
            is_nash(zo_blocks["sBoxR"], DeviationBudget(2))

    def test_random_spe_trees_are_nash(self):
        rng = random.Random(111)
        found = 0
        for _ in range(60):
            g = random_game(rng, max_depth=3)
            p = random_profile_of(rng, g)
            if not is_pe(p).root_verdict:
                continue
            if not all(is_pe(p).valuation.values()):
                continue
            found += 1
            v = is_nash(p, DeviationBudget(graph_height(p)))
            assert v.status == NashVerdict.NASH
        assert found  # the sample must actually exercise the claim


class TestBackwardInduction:
    def test_shipped_verdicts(self, gg_blocks):
        assert is_bi(gg_blocks["s1"])
        assert is_bi(gg_blocks["s2"])
        assert not is_bi(gg_blocks["s3"])

    def test_matches_subgame_perfection_nodewise(self, gg_blocks):
        # BI at a node includes its whole subtree, so it matches the
        # everywhere-below closure of the local verdict, not the local one
        for name in ("s1", "s2", "s3"):
            s = gg_blocks[name]
            pe = is_pe(s).valuation
            spe_val = always(s, lambda _g, n: pe[n]).valuation
            assert bi_valuation(s).valuation == spe_val

    def test_matches_on_random_finite_profiles(self):
        rng = random.Random(121)
        for _ in range(40):
            g = random_game(rng, max_depth=4)
            p = random_profile_of(rng, g)
            pe = is_pe(p).valuation
            spe_val = always(p, lambda _g, n: pe[n]).valuation
            assert bi_valuation(p).valuation == spe_val

    def test_rejects_cycles(self, zo_blocks):
        with pytest.raises(GraphError, match="finite"):
            bi_valuation(zo_blocks["sBoxR"])

    def test_valuation_covers_every_node(self, gg_blocks):
        s = gg_blocks["s2"]
        assert set(bi_valuation(s).valuation) == set(s.order)

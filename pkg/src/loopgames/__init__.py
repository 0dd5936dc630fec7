"""Cyclic term graphs for two-choice sequential games.

The package represents games, strategy profiles and single-agent
strategies as finitely presented graphs whose cycles stand for infinite
plays.  On top of that representation it decides convergence and
equilibrium predicates by least and greatest fixpoints, combines
strategies into profiles, searches for unilateral deviations, and ships
a small text format plus a command-line tool.
"""

from .termgraph import (
    CHOICES,
    DOWN,
    RIGHT,
    KIND_GAME,
    KIND_PROFILE,
    KIND_STRATEGY,
    GameNode,
    GraphError,
    Leaf,
    Node,
    Payoff,
    PredicateResult,
    ProfileNode,
    StrategyNode,
    TermGraph,
    TreeNode,
    always,
    always_by_reachability,
    bisimilar,
    gfp_eval,
    graph_height,
    is_acyclic,
    leaf_payoffs,
    lfp_eval,
    reachable,
    relabel,
    unfold,
)
from .model import (
    PayoffOutcome,
    all_profiles,
    converges,
    game_of,
    is_pe,
    is_spe,
    is_subprofile,
    payoff,
    payoff_outcomes,
    strongly_converges,
)
from .strategies import (
    InconsistentFamilyError,
    are_consistent,
    is_full,
    split,
    st2g,
    strategy_slice,
    sum_strategies,
)
from .equilibrium import (
    DeviationBudget,
    NashVerdict,
    bi_valuation,
    convertible,
    enumerate_deviations,
    is_bi,
    is_nash,
)
from .zeroone import (
    AGENT_A,
    AGENT_B,
    A_STOPS,
    B_STOPS,
    FamilyRow,
    ProfileMismatch,
    TheoremReport,
    WordRow,
    ZeroOneWord,
    check_appendix_prop,
    check_prop_escal,
    check_theorem,
    enumerate_words,
    escalation_witnesses,
    is_acbes,
    is_bcaes,
    is_sacbes,
    is_sbcaes,
    make_dollar_auction,
    make_F,
    make_K,
    make_zero_one,
    make_zero_one_profile,
    payroll_note_check,
    sat_s0,
    sat_s1,
    sat_sf,
    sat_sk,
    spine_choice_word,
    word_sacbes,
    word_sbcaes,
)
from .dsl import ParseError, parse, serialize
from .report import write_report

__version__ = "0.1.0"

__all__ = [
    "A_STOPS",
    "AGENT_A",
    "AGENT_B",
    "B_STOPS",
    "CHOICES",
    "DOWN",
    "DeviationBudget",
    "FamilyRow",
    "GameNode",
    "GraphError",
    "InconsistentFamilyError",
    "KIND_GAME",
    "KIND_PROFILE",
    "KIND_STRATEGY",
    "Leaf",
    "NashVerdict",
    "Node",
    "ParseError",
    "Payoff",
    "PayoffOutcome",
    "PredicateResult",
    "ProfileMismatch",
    "ProfileNode",
    "RIGHT",
    "StrategyNode",
    "TermGraph",
    "TheoremReport",
    "TreeNode",
    "WordRow",
    "ZeroOneWord",
    "all_profiles",
    "always",
    "always_by_reachability",
    "are_consistent",
    "bi_valuation",
    "bisimilar",
    "check_appendix_prop",
    "check_prop_escal",
    "check_theorem",
    "converges",
    "convertible",
    "enumerate_deviations",
    "enumerate_words",
    "escalation_witnesses",
    "game_of",
    "gfp_eval",
    "graph_height",
    "is_acbes",
    "is_acyclic",
    "is_bcaes",
    "is_bi",
    "is_full",
    "is_nash",
    "is_pe",
    "is_sacbes",
    "is_sbcaes",
    "is_spe",
    "is_subprofile",
    "leaf_payoffs",
    "lfp_eval",
    "make_F",
    "make_K",
    "make_dollar_auction",
    "make_zero_one",
    "make_zero_one_profile",
    "parse",
    "payoff",
    "payoff_outcomes",
    "payroll_note_check",
    "reachable",
    "relabel",
    "sat_s0",
    "sat_s1",
    "sat_sf",
    "sat_sk",
    "serialize",
    "spine_choice_word",
    "split",
    "st2g",
    "strategy_slice",
    "strongly_converges",
    "sum_strategies",
    "unfold",
    "word_sacbes",
    "word_sbcaes",
    "write_report",
]

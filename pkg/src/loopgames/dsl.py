"""Textual format for term graphs: blocks of named equations.

A file holds one or more blocks::

    game g01 {
      g01 = A ? stopA | g10;        # owner ? down | right
      stopA = leaf(A: 0, B: 1);
      g10 = B ? stopB | g01;        # references may point forward or back
      stopB = leaf(A: 1, B: 0);
    }

    profile looper of g01 {
      looper = A -> r ? stopA | nxt;
      nxt = B -> r ? stopB | looper;
      stopA = leaf(A: 0, B: 1);
      stopB = leaf(A: 1, B: 0);
    }

The first equation of a block is its root.  Profile blocks annotate each
owner with the move it picks (``-> d`` or ``-> r``); strategy blocks use a
bare choice tag for the owner's own turns and an agent name for the others.
Payoffs are exact rationals (``-3``, ``1/2``).  ``#`` starts a comment.

An optional ``of G`` clause asserts that the block plays the game declared
as block ``G`` in the same file: literally for game blocks, through choice
erasure for profile blocks, and through some agent's projection for
strategy blocks.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .termgraph import (
    CHOICES,
    GameNode,
    GraphError,
    KIND_GAME,
    KIND_PROFILE,
    KINDS,
    Leaf,
    Node,
    Payoff,
    ProfileNode,
    StrategyNode,
    TermGraph,
    bisimilar,
)
from .model import game_of
from .strategies import st2g


class ParseError(Exception):
    """Syntax or semantic error in a graph file, with source position."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, col {col}: {message}")
        self.message = message
        self.line = line
        self.col = col


_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_SINGLE = "{}(),:;=?|"


@dataclass(frozen=True)
class _Tok:
    kind: str  # "ident", "rat", "eof", or the punctuation itself
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if c in " \t\r":
            i += 1
            col += 1
            continue
        if c == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if text.startswith("->", i):
            toks.append(_Tok("->", "->", line, col))
            i += 2
            col += 2
            continue
        if c in _SINGLE:
            toks.append(_Tok(c, c, line, col))
            i += 1
            col += 1
            continue
        m = _IDENT_RE.match(text, i)
        if m:
            word = m.group()
            toks.append(_Tok("ident", word, line, col))
            i += len(word)
            col += len(word)
            continue
        if c == "-" or c.isdigit():
            start = i
            j = i + 1 if c == "-" else i
            k = j
            while k < n and text[k].isdigit():
                k += 1
            if k == j:
                raise ParseError("malformed number", line, col)
            if k < n and text[k] == "/":
                k += 1
                d = k
                while k < n and text[k].isdigit():
                    k += 1
                if k == d:
                    raise ParseError("malformed number", line, col)
            if k < n and (text[k].isalnum() or text[k] == "_"):
                raise ParseError("malformed number", line, col)
            word = text[start:k]
            toks.append(_Tok("rat", word, line, col))
            col += k - i
            i = k
            continue
        raise ParseError(f"unexpected character {c!r}", line, col)
    toks.append(_Tok("eof", "", line, col))
    return toks


@dataclass(frozen=True)
class _LeafT:
    entries: tuple[tuple[str, Fraction], ...]
    tok: _Tok


@dataclass(frozen=True)
class _InnerT:
    head: str
    head_tok: _Tok
    choice: str | None
    choice_tok: _Tok | None
    down: object
    right: object


@dataclass(frozen=True)
class _RefT:
    name: str
    tok: _Tok


class _Stream:
    def __init__(self, toks: list[_Tok]):
        self.toks = toks
        self.pos = 0

    def peek(self, ahead: int = 0) -> _Tok:
        return self.toks[min(self.pos + ahead, len(self.toks) - 1)]

    def next(self) -> _Tok:
        tok = self.peek()
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def expect(self, kind: str, what: str) -> _Tok:
        tok = self.peek()
        if tok.kind != kind:
            shown = tok.text or "end of input"
            raise ParseError(f"expected {what}, found {shown!r}", tok.line, tok.col)
        return self.next()


def _parse_leaf(ts: _Stream) -> _LeafT:
    head = ts.expect("ident", "'leaf'")
    ts.expect("(", "'('")
    entries: list[tuple[str, Fraction]] = []
    seen: set[str] = set()
    while True:
        agent = ts.expect("ident", "an agent name")
        if agent.text in seen:
            raise ParseError(f"duplicate agent {agent.text!r} in leaf", agent.line, agent.col)
        seen.add(agent.text)
        ts.expect(":", "':'")
        value = ts.expect("rat", "a rational")
        entries.append((agent.text, Fraction(value.text)))
        if ts.peek().kind == ",":
            ts.next()
            continue
        break
    ts.expect(")", "')'")
    return _LeafT(tuple(entries), head)


def _parse_term(ts: _Stream):
    tok = ts.peek()
    if tok.kind != "ident":
        raise ParseError(f"expected a term, found {tok.text or 'end of input'!r}", tok.line, tok.col)
    if tok.text == "leaf" and ts.peek(1).kind == "(":
        return _parse_leaf(ts)
    head = ts.next()
    choice = None
    choice_tok = None
    if ts.peek().kind == "->":
        ts.next()
        choice_tok = ts.expect("ident", "'d' or 'r'")
        if choice_tok.text not in CHOICES:
            raise ParseError("choice must be 'd' or 'r'", choice_tok.line, choice_tok.col)
        choice = choice_tok.text
    ts.expect("?", "'?'")
    down = _parse_arg(ts)
    ts.expect("|", "'|'")
    right = _parse_arg(ts)
    return _InnerT(head.text, head, choice, choice_tok, down, right)


def _parse_arg(ts: _Stream):
    tok = ts.peek()
    if tok.kind != "ident":
        raise ParseError(
            f"expected a node reference or term, found {tok.text or 'end of input'!r}",
            tok.line,
            tok.col,
        )
    nxt = ts.peek(1)
    if (tok.text == "leaf" and nxt.kind == "(") or nxt.kind in ("?", "->"):
        return _parse_term(ts)
    ts.next()
    return _RefT(tok.text, tok)


def _make_label(kind: str, term: _InnerT):
    if kind == KIND_GAME:
        if term.choice is not None:
            raise ParseError(
                "choice tag not allowed in a game block", term.choice_tok.line, term.choice_tok.col
            )
        return GameNode(term.head)
    if kind == KIND_PROFILE:
        if term.choice is None:
            raise ParseError(
                f"profile node {term.head!r} needs '-> d' or '-> r'",
                term.head_tok.line,
                term.head_tok.col,
            )
        return ProfileNode(term.head, term.choice)
    if term.choice is not None:
        raise ParseError(
            "choice tag not allowed in a strategy block", term.choice_tok.line, term.choice_tok.col
        )
    return StrategyNode(term.head)


def _elaborate(kind: str, block_name: str, name_tok: _Tok, eqs) -> TermGraph:
    declared: dict[str, _Tok] = {}
    for eq_name, tok, _term in eqs:
        if eq_name in declared:
            raise ParseError(f"duplicate equation name {eq_name!r}", tok.line, tok.col)
        declared[eq_name] = tok
    names = set(declared)
    nodes: dict[str, Node] = {}
    first_leaf_agents: list[set[str]] = []

    def fresh(base: str) -> str:
        k = 1
        while f"{base}_t{k}" in names:
            k += 1
        name = f"{base}_t{k}"
        names.add(name)
        return name

    def build(name: str, term) -> None:
        if isinstance(term, _LeafT):
            agents = {a for a, _ in term.entries}
            if first_leaf_agents and agents != first_leaf_agents[0]:
                raise ParseError(
                    f"leaf agents {tuple(sorted(agents))} differ from "
                    f"{tuple(sorted(first_leaf_agents[0]))}",
                    term.tok.line,
                    term.tok.col,
                )
            if not first_leaf_agents:
                first_leaf_agents.append(agents)
            nodes[name] = Node(Leaf(Payoff.of(dict(term.entries))))
            return
        down = resolve(term.down, name)
        right = resolve(term.right, name)
        nodes[name] = Node(_make_label(kind, term), down, right)

    def resolve(arg, base: str) -> str:
        if isinstance(arg, _RefT):
            if arg.name not in declared:
                raise ParseError(f"unresolved identifier {arg.name!r}", arg.tok.line, arg.tok.col)
            return arg.name
        name = fresh(base)
        build(name, arg)
        return name

    for eq_name, _tok, term in eqs:
        build(eq_name, term)
    try:
        return TermGraph(kind, eqs[0][0], nodes)
    except GraphError as err:
        raise ParseError(f"block {block_name!r}: {err}", name_tok.line, name_tok.col) from None


def parse(text: str) -> list[tuple[str, TermGraph, str | None]]:
    """Parse a graph file into ``(block name, graph, declared game or None)``."""
    ts = _Stream(_tokenize(text))
    raw: list[tuple[str, _Tok, str, TermGraph]] = []
    seen_blocks: set[str] = set()
    while ts.peek().kind != "eof":
        kw = ts.expect("ident", "'game', 'profile' or 'strategy'")
        if kw.text not in KINDS:
            raise ParseError(
                f"expected 'game', 'profile' or 'strategy', found {kw.text!r}", kw.line, kw.col
            )
        name_tok = ts.expect("ident", "a block name")
        if name_tok.text in seen_blocks:
            raise ParseError(
                f"duplicate block name {name_tok.text!r}", name_tok.line, name_tok.col
            )
        seen_blocks.add(name_tok.text)
        of_name = None
        if ts.peek().kind == "ident" and ts.peek().text == "of":
            ts.next()
            of_name = ts.expect("ident", "a game name").text
        ts.expect("{", "'{'")
        eqs = []
        while ts.peek().kind != "}":
            eq_name = ts.expect("ident", "an equation name")
            ts.expect("=", "'='")
            term = _parse_term(ts)
            ts.expect(";", "';'")
            eqs.append((eq_name.text, eq_name, term))
        close = ts.expect("}", "'}'")
        if not eqs:
            raise ParseError("block needs at least one equation", close.line, close.col)
        graph = _elaborate(kw.text, name_tok.text, name_tok, eqs)
        raw.append((name_tok.text, name_tok, of_name, graph))
    if not raw:
        tok = ts.peek()
        raise ParseError("expected 'game', 'profile' or 'strategy'", tok.line, tok.col)

    by_name = {name: graph for name, _tok, _of, graph in raw}
    out: list[tuple[str, TermGraph, str | None]] = []
    for name, tok, of_name, graph in raw:
        if of_name is not None:
            target = by_name.get(of_name)
            if target is None:
                raise ParseError(f"unresolved identifier {of_name!r}", tok.line, tok.col)
            if target.kind != KIND_GAME:
                raise ParseError(f"'of' must name a game block, {of_name!r} is a {target.kind}",
                                 tok.line, tok.col)
            if graph.kind == KIND_GAME:
                ok = bisimilar(graph, graph.root, target, target.root)
            elif graph.kind == KIND_PROFILE:
                projected = game_of(graph)
                ok = bisimilar(projected, projected.root, target, target.root)
            else:
                ok = any(
                    bisimilar(st2g(graph, agent), graph.root, target, target.root)
                    for agent in target.agents
                )
            if not ok:
                raise ParseError(
                    f"block {name!r} does not play the game {of_name!r}", tok.line, tok.col
                )
        out.append((name, graph, of_name))
    return out


def _bfs_order(g: TermGraph) -> list[str]:
    from collections import deque

    seen = {g.root}
    order = [g.root]
    queue = deque([g.root])
    while queue:
        ref = queue.popleft()
        node = g.nodes[ref]
        if node.is_leaf:
            continue
        for child in (node.down, node.right):
            if child not in seen:
                seen.add(child)
                order.append(child)
                queue.append(child)
    return order


def serialize(g: TermGraph, name: str) -> str:
    """Render a graph as one block, root equation first then breadth-first.

    Output is deterministic for a given graph, so serialising twice (or
    serialising a reparse) yields identical bytes.  Node names that are not
    valid identifiers are consistently replaced by position-based ones.
    """
    if not _IDENT_RE.fullmatch(name):
        raise GraphError(f"block name {name!r} is not a valid identifier")
    order = _bfs_order(g)
    if all(_IDENT_RE.fullmatch(ref) for ref in order):
        rename = {ref: ref for ref in order}
    else:
        rename = {ref: f"n{i}" for i, ref in enumerate(order)}
    lines = [f"{g.kind} {name} {{"]
    for ref in order:
        node = g.nodes[ref]
        nm = rename[ref]
        if node.is_leaf:
            inside = ", ".join(f"{a}: {v}" for a, v in node.label.payoff.entries)
            lines.append(f"  {nm} = leaf({inside});")
            continue
        down, right = rename[node.down], rename[node.right]
        label = node.label
        if isinstance(label, GameNode):
            head = label.owner
        elif isinstance(label, ProfileNode):
            head = f"{label.owner} -> {label.choice}"
        else:
            head = label.head
        lines.append(f"  {nm} = {head} ? {down} | {right};")
    lines.append("}")
    return "\n".join(lines) + "\n"

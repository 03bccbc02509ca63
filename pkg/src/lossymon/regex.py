"""Regular expression compilation to epsilon-free NFAs.

Dialect: tokens are whitespace-separated event names matching
``[A-Za-z_][A-Za-z0-9_]*``; operators ``|``, ``*``, ``+``, ``?`` and
parentheses; juxtaposition is concatenation; the empty pattern denotes the
empty string.
"""

import re

from .errors import RegexParseError

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_OPS = set("|*+?()")


def tokenize(pattern):
    """Return a list of (kind, value, position) tokens."""
    tokens = []
    i = 0
    n = len(pattern)
    while i < n:
        ch = pattern[i]
        if ch.isspace():
            i += 1
            continue
        if ch in _OPS:
            tokens.append((ch, ch, i))
            i += 1
            continue
        m = _NAME.match(pattern, i)
        if not m:
            raise RegexParseError(f"unexpected character {ch!r}", i)
        tokens.append(("name", m.group(), i))
        i = m.end()
    return tokens


class _Ast:
    pass


class _Empty(_Ast):  # the empty string
    pass


class _Sym(_Ast):
    def __init__(self, name, pos):
        self.name = name
        self.pos = pos


class _Cat(_Ast):
    def __init__(self, parts):
        self.parts = parts


class _Alt(_Ast):
    def __init__(self, branches):
        self.branches = branches


class _Star(_Ast):
    def __init__(self, inner):
        self.inner = inner


class _Plus(_Ast):
    def __init__(self, inner):
        self.inner = inner


class _Opt(_Ast):
    def __init__(self, inner):
        self.inner = inner


class _Parser:
    def __init__(self, tokens, length):
        self.tokens = tokens
        self.length = length  # for end-of-input error positions
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def pos(self):
        tok = self.peek()
        return tok[2] if tok else self.length

    def parse(self):
        node = self.alternation()
        if self.peek() is not None:
            raise RegexParseError(f"unexpected {self.peek()[1]!r}", self.pos())
        return node

    def alternation(self):
        branches = [self.concatenation()]
        while self.peek() and self.peek()[0] == "|":
            self.i += 1
            branches.append(self.concatenation())
        return branches[0] if len(branches) == 1 else _Alt(branches)

    def concatenation(self):
        parts = []
        while True:
            tok = self.peek()
            if tok is None or tok[0] in ("|", ")"):
                break
            parts.append(self.postfix())
        if not parts:
            return _Empty()
        return parts[0] if len(parts) == 1 else _Cat(parts)

    def postfix(self):
        node = self.atom()
        while self.peek() and self.peek()[0] in ("*", "+", "?"):
            op = self.peek()[0]
            self.i += 1
            node = {"*": _Star, "+": _Plus, "?": _Opt}[op](node)
        return node

    def atom(self):
        tok = self.peek()
        if tok is None:
            raise RegexParseError("unexpected end of pattern", self.pos())
        kind, value, pos = tok
        if kind == "name":
            self.i += 1
            return _Sym(value, pos)
        if kind == "(":
            self.i += 1
            node = self.alternation()
            closing = self.peek()
            if closing is None or closing[0] != ")":
                raise RegexParseError("unbalanced '('", pos)
            self.i += 1
            return node
        raise RegexParseError(f"unexpected {value!r}", pos)


def parse(pattern):
    return _Parser(tokenize(pattern), len(pattern)).parse()


class _Builder:
    """Thompson construction over symbol indices, with epsilon edges."""

    def __init__(self, sym_index):
        self.sym_index = sym_index
        self.eps = []  # state -> list of states
        self.moves = []  # state -> list of (symbol index, state)

    def new_state(self):
        self.eps.append([])
        self.moves.append([])
        return len(self.eps) - 1

    def build(self, node):
        """Return (start, accept) fragment for an AST node."""
        if isinstance(node, _Empty):
            s = self.new_state()
            return s, s
        if isinstance(node, _Sym):
            s, t = self.new_state(), self.new_state()
            self.moves[s].append((self.sym_index[node.name], t))
            return s, t
        if isinstance(node, _Cat):
            start, acc = self.build(node.parts[0])
            for part in node.parts[1:]:
                s2, a2 = self.build(part)
                self.eps[acc].append(s2)
                acc = a2
            return start, acc
        if isinstance(node, _Alt):
            s, t = self.new_state(), self.new_state()
            for branch in node.branches:
                bs, ba = self.build(branch)
                self.eps[s].append(bs)
                self.eps[ba].append(t)
            return s, t
        if isinstance(node, (_Star, _Plus, _Opt)):
            inner_s, inner_a = self.build(node.inner)
            s, t = self.new_state(), self.new_state()
            self.eps[s].append(inner_s)
            self.eps[inner_a].append(t)
            if isinstance(node, (_Star, _Opt)):
                self.eps[s].append(t)
            if isinstance(node, (_Star, _Plus)):
                self.eps[inner_a].append(inner_s)
            return s, t
        raise TypeError(node)


def compile_regex(pattern, alphabet):
    """Compile ``pattern`` to an epsilon-free NFA over ``alphabet``.

    The result has a general accept set and no error trap.  Unknown event
    tokens raise RegexParseError.
    """
    from .automata import Nfa

    alphabet = tuple(alphabet)
    sym_index = {s: i for i, s in enumerate(alphabet)}
    ast = parse(pattern)
    _check_tokens(ast, sym_index)
    builder = _Builder(sym_index)
    start, accept = builder.build(ast)

    closures = _closures(builder.eps)
    n = len(builder.eps)
    delta = []
    for q in range(n):
        row = [set() for _ in alphabet]
        for p in closures[q]:
            for sym, t in builder.moves[p]:
                row[sym].add(t)
        delta.append(tuple(frozenset(targets) for targets in row))
    accepting = frozenset(q for q in range(n) if accept in closures[q])
    nfa = Nfa(
        alphabet=alphabet,
        delta=tuple(delta),
        initial=start,
        accepting=accepting,
        error=None,
    )
    return _prune(nfa)


def _check_tokens(node, sym_index):
    if isinstance(node, _Sym):
        if node.name not in sym_index:
            raise RegexParseError(f"unknown event token {node.name!r}", node.pos)
    elif isinstance(node, _Cat):
        for part in node.parts:
            _check_tokens(part, sym_index)
    elif isinstance(node, _Alt):
        for branch in node.branches:
            _check_tokens(branch, sym_index)
    elif isinstance(node, (_Star, _Plus, _Opt)):
        _check_tokens(node.inner, sym_index)


def _closures(eps):
    closures = []
    for q in range(len(eps)):
        seen = {q}
        stack = [q]
        while stack:
            p = stack.pop()
            for t in eps[p]:
                if t not in seen:
                    seen.add(t)
                    stack.append(t)
        closures.append(seen)
    return closures


def _prune(nfa):
    """Drop states unreachable from the initial state, keeping order."""
    order = [nfa.initial]
    seen = {nfa.initial}
    i = 0
    while i < len(order):
        q = order[i]
        i += 1
        for targets in nfa.delta[q]:
            for t in sorted(targets):
                if t not in seen:
                    seen.add(t)
                    order.append(t)
    rename = {old: new for new, old in enumerate(order)}
    delta = tuple(
        tuple(
            frozenset(rename[t] for t in targets if t in seen)
            for targets in nfa.delta[old]
        )
        for old in order
    )
    return type(nfa)(
        alphabet=nfa.alphabet,
        delta=delta,
        initial=0,
        accepting=frozenset(rename[q] for q in nfa.accepting if q in seen),
        error=None,
    )

"""Finite-automata kernel: DFAs/NFAs with error trap states, subset-labelled
determinization, minimization with merge-class tracking, product
constructions, and finite-state transducers.

Automata are immutable after construction and safe to share across threads.
States are dense ids ``0..n-1``; a "label" is a sorted, duplicate-free tuple
of state ids of a reference automaton.
"""

from dataclasses import dataclass, field

from .errors import AlphabetMismatchError, StateExplosionError
from .regex import compile_regex

__all__ = [
    "Dfa",
    "Nfa",
    "Nft",
    "Gnft",
    "compile_regex",
    "determinize",
    "minimize",
    "language_partition",
    "complement",
    "intersect",
    "is_empty",
    "includes",
    "reachable_states",
    "states_reachable_via",
    "gnft_to_nft",
    "nft_pairs",
    "canonical_form",
    "isomorphic",
    "enumerate_language",
    "dfa_to_nfa",
    "label",
    "DEFAULT_SUBSET_CAP",
]

DEFAULT_SUBSET_CAP = 2**20


def label(states):
    """Canonical subset label: sorted duplicate-free tuple of state ids."""
    return tuple(sorted(set(states)))


@dataclass(eq=False)
class Dfa:
    """Total DFA.  ``error`` (if present) must be a non-accepting trap state.

    Property automata use ``accepting == all states except error``; generic
    intermediate automata (complements, products) may carry any accept set.
    ``labels`` optionally records a subset label per state over a reference
    automaton's states.
    """

    alphabet: tuple
    delta: tuple  # delta[state][symbol_index] -> state
    initial: int
    accepting: frozenset
    error: int | None = None
    labels: tuple | None = None

    def __post_init__(self):
        self.alphabet = tuple(self.alphabet)
        self.delta = tuple(tuple(row) for row in self.delta)
        self.accepting = frozenset(self.accepting)
        if self.labels is not None:
            self.labels = tuple(tuple(lbl) for lbl in self.labels)
        self._sym = {s: i for i, s in enumerate(self.alphabet)}
        for row in self.delta:
            if len(row) != len(self.alphabet):
                raise ValueError("delta is not total over states x alphabet")
        if self.error is not None:
            if any(t != self.error for t in self.delta[self.error]):
                raise ValueError("error state is not a trap")
            if self.error in self.accepting:
                raise ValueError("error state cannot be accepting")

    @property
    def n_states(self):
        return len(self.delta)

    def symbol_index(self, symbol):
        return self._sym[symbol]

    def step(self, state, symbol):
        return self.delta[state][self._sym[symbol]]

    def run(self, word, start=None):
        state = self.initial if start is None else start
        for symbol in word:
            state = self.delta[state][self._sym[symbol]]
        return state

    def accepts(self, word):
        return self.run(word) in self.accepting

    def is_property(self):
        """True when the accept set is exactly "all states except error"."""
        rest = frozenset(range(self.n_states)) - (
            frozenset() if self.error is None else {self.error}
        )
        return self.accepting == rest

    def to_json(self):
        doc = {
            "alphabet": list(self.alphabet),
            "states": self.n_states,
            "initial": self.initial,
            "error": self.error,
            "delta": [
                [q, sym, self.delta[q][i]]
                for q in range(self.n_states)
                for i, sym in enumerate(self.alphabet)
            ],
        }
        if self.labels is not None:
            doc["labels"] = [list(lbl) for lbl in self.labels]
        if not self.is_property():
            doc["accepting"] = sorted(self.accepting)
        return doc

    @classmethod
    def from_json(cls, doc):
        alphabet = tuple(doc["alphabet"])
        n = doc["states"]
        sym = {s: i for i, s in enumerate(alphabet)}
        table = [[None] * len(alphabet) for _ in range(n)]
        for q, symbol, t in doc["delta"]:
            table[q][sym[symbol]] = t
        error = doc.get("error")
        if "accepting" in doc:
            accepting = frozenset(doc["accepting"])
        else:
            accepting = frozenset(range(n)) - (
                frozenset() if error is None else {error}
            )
        labels = doc.get("labels")
        return cls(
            alphabet=alphabet,
            delta=tuple(tuple(row) for row in table),
            initial=doc["initial"],
            accepting=accepting,
            error=error,
            labels=None if labels is None else tuple(tuple(l) for l in labels),
        )


@dataclass(eq=False)
class Nfa:
    """NFA without epsilon edges.  Empty transition sets are permitted.

    ``error`` (if present) marks a trap state with a self-loop on every
    symbol; NFA properties use ``accepting == all states except error``.
    """

    alphabet: tuple
    delta: tuple  # delta[state][symbol_index] -> frozenset of states
    initial: int
    accepting: frozenset
    error: int | None = None

    def __post_init__(self):
        self.alphabet = tuple(self.alphabet)
        self.delta = tuple(
            tuple(frozenset(targets) for targets in row) for row in self.delta
        )
        self.accepting = frozenset(self.accepting)
        self._sym = {s: i for i, s in enumerate(self.alphabet)}
        for row in self.delta:
            if len(row) != len(self.alphabet):
                raise ValueError("delta rows must cover the whole alphabet")
        if self.error is not None:
            if any(targets != frozenset({self.error}) for targets in self.delta[self.error]):
                raise ValueError("error state must self-loop on every symbol")
            if self.error in self.accepting:
                raise ValueError("error state cannot be accepting")

    @property
    def n_states(self):
        return len(self.delta)

    def symbol_index(self, symbol):
        return self._sym[symbol]

    def step_set(self, states, symbol):
        i = self._sym[symbol]
        out = set()
        for q in states:
            out |= self.delta[q][i]
        return frozenset(out)

    def run_set(self, word, start=None):
        states = frozenset({self.initial if start is None else start})
        for symbol in word:
            states = self.step_set(states, symbol)
        return states

    def accepts(self, word):
        return bool(self.run_set(word) & self.accepting)


def dfa_to_nfa(dfa):
    delta = tuple(
        tuple(frozenset({t}) for t in row) for row in dfa.delta
    )
    return Nfa(
        alphabet=dfa.alphabet,
        delta=delta,
        initial=dfa.initial,
        accepting=dfa.accepting,
        error=dfa.error,
    )


def _with_error_trap(nfa):
    """Append a fresh trap error state (language unchanged)."""
    err = nfa.n_states
    delta = [list(row) for row in nfa.delta] + [
        [frozenset({err})] * len(nfa.alphabet)
    ]
    return Nfa(
        alphabet=nfa.alphabet,
        delta=tuple(tuple(row) for row in delta),
        initial=nfa.initial,
        accepting=nfa.accepting,
        error=err,
    )


def determinize(nfa, cap=DEFAULT_SUBSET_CAP):
    """Subset construction.  Returns a total DFA whose states carry subset
    labels over the (error-completed) input NFA's states.

    A reachable empty successor set is treated as the error label.  Raises
    StateExplosionError when more than ``cap`` subsets are materialized.
    """
    if nfa.error is None:
        nfa = _with_error_trap(nfa)
    err = nfa.error
    start = label({nfa.initial})
    index = {start: 0}
    order = [start]
    rows = []
    i = 0
    while i < len(order):
        current = order[i]
        i += 1
        row = []
        for sym in range(len(nfa.alphabet)):
            targets = set()
            for q in current:
                targets |= nfa.delta[q][sym]
            succ = label(targets) if targets else (err,)
            if succ not in index:
                if len(index) >= cap:
                    raise StateExplosionError(
                        f"subset construction exceeded cap of {cap} states"
                    )
                index[succ] = len(order)
                order.append(succ)
            row.append(index[succ])
        rows.append(row)
    accepting = frozenset(
        i for i, lbl in enumerate(order) if set(lbl) & nfa.accepting
    )
    error_state = index.get((err,))
    return Dfa(
        alphabet=nfa.alphabet,
        delta=tuple(tuple(row) for row in rows),
        initial=0,
        accepting=accepting,
        error=error_state,
        labels=tuple(order),
    )


def reachable_states(automaton, start=None):
    """BFS reachability in deterministic alphabet order."""
    start = automaton.initial if start is None else start
    order = [start]
    seen = {start}
    i = 0
    while i < len(order):
        q = order[i]
        i += 1
        for entry in automaton.delta[q]:
            targets = entry if isinstance(entry, frozenset) else (entry,)
            for t in sorted(targets):
                if t not in seen:
                    seen.add(t)
                    order.append(t)
    return order


def language_partition(dfa, restrict=None):
    """Partition states by language equivalence (Hopcroft refinement).

    ``restrict`` optionally limits the partition to a subset of states (the
    transition function must stay closed over it).  Returns a list of sorted
    state lists.
    """
    states = list(range(dfa.n_states)) if restrict is None else sorted(restrict)
    state_set = set(states)
    n_sym = len(dfa.alphabet)
    preimage = [[[] for _ in range(n_sym)] for _ in range(dfa.n_states)]
    for q in states:
        for a in range(n_sym):
            t = dfa.delta[q][a]
            if t not in state_set:
                raise ValueError("transition function not closed over restrict")
            preimage[t][a].append(q)

    acc = [q for q in states if q in dfa.accepting]
    rej = [q for q in states if q not in dfa.accepting]
    block_of = {}
    blocks = []
    for group in (acc, rej):
        if group:
            for q in group:
                block_of[q] = len(blocks)
            blocks.append(set(group))
    worklist = list(range(len(blocks)))
    in_worklist = set(worklist)

    while worklist:
        b = worklist.pop()
        in_worklist.discard(b)
        splitter = list(blocks[b])
        for a in range(n_sym):
            x = set()
            for t in splitter:
                x.update(preimage[t][a])
            touched = {}
            for q in x:
                touched.setdefault(block_of[q], set()).add(q)
            for bid, hit in touched.items():
                if len(hit) == len(blocks[bid]):
                    continue
                rest = blocks[bid] - hit
                blocks[bid] = hit
                new_id = len(blocks)
                blocks.append(rest)
                for q in rest:
                    block_of[q] = new_id
                if bid in in_worklist:
                    worklist.append(new_id)
                    in_worklist.add(new_id)
                else:
                    smaller = new_id if len(rest) <= len(hit) else bid
                    worklist.append(smaller)
                    in_worklist.add(smaller)
    return [sorted(block) for block in blocks]


def minimize(dfa):
    """Minimize a total DFA.  Returns ``(minimal, merge_classes)``.

    Unreachable states are pruned first; ``merge_classes`` partitions the
    reachable input states.  Output states are numbered in BFS order from the
    initial state; each output state's label is the union of its merge
    class's labels (when the input carries labels).
    """
    reach = reachable_states(dfa)
    classes = language_partition(dfa, restrict=reach)
    bfs_rank = {q: i for i, q in enumerate(reach)}
    class_of = {}
    for cid, members in enumerate(classes):
        for q in members:
            class_of[q] = cid
    ordered = sorted(range(len(classes)), key=lambda cid: min(bfs_rank[q] for q in classes[cid]))
    new_id = {cid: i for i, cid in enumerate(ordered)}

    rows = []
    labels = [] if dfa.labels is not None else None
    accepting = set()
    error = None
    for cid in ordered:
        members = classes[cid]
        rep = members[0]
        rows.append(
            tuple(new_id[class_of[dfa.delta[rep][a]]] for a in range(len(dfa.alphabet)))
        )
        if rep in dfa.accepting:
            accepting.add(new_id[cid])
        if labels is not None:
            merged = set()
            for q in members:
                merged |= set(dfa.labels[q])
            labels.append(label(merged))
        if dfa.error is not None and dfa.error in members:
            error = new_id[cid]
    minimal = Dfa(
        alphabet=dfa.alphabet,
        delta=tuple(rows),
        initial=new_id[class_of[dfa.initial]],
        accepting=frozenset(accepting),
        error=error,
        labels=None if labels is None else tuple(labels),
    )
    merge_classes = [classes[cid] for cid in ordered]
    return minimal, merge_classes


def _require_same_alphabet(a, b):
    if a.alphabet != b.alphabet:
        raise AlphabetMismatchError(
            f"alphabets differ: {a.alphabet} vs {b.alphabet}"
        )


def complement(dfa):
    """Flip the accept set.  The result is generally not a property
    automaton, so the error designation is dropped."""
    return Dfa(
        alphabet=dfa.alphabet,
        delta=dfa.delta,
        initial=dfa.initial,
        accepting=frozenset(range(dfa.n_states)) - dfa.accepting,
        error=None,
    )


def intersect(a, b):
    """Product automaton accepting the intersection, pruned to reachable
    pairs in BFS order."""
    _require_same_alphabet(a, b)
    start = (a.initial, b.initial)
    index = {start: 0}
    order = [start]
    rows = []
    i = 0
    while i < len(order):
        qa, qb = order[i]
        i += 1
        row = []
        for sym in range(len(a.alphabet)):
            pair = (a.delta[qa][sym], b.delta[qb][sym])
            if pair not in index:
                index[pair] = len(order)
                order.append(pair)
            row.append(index[pair])
        rows.append(tuple(row))
    accepting = frozenset(
        i
        for i, (qa, qb) in enumerate(order)
        if qa in a.accepting and qb in b.accepting
    )
    error = None
    if a.error is not None and b.error is not None:
        error = index.get((a.error, b.error))
    return Dfa(
        alphabet=a.alphabet,
        delta=tuple(rows),
        initial=0,
        accepting=accepting,
        error=error,
    )


def is_empty(dfa):
    return not any(q in dfa.accepting for q in reachable_states(dfa))


def includes(a, b):
    """True when L(b) is a subset of L(a)."""
    return is_empty(intersect(complement(a), b))


def states_reachable_via(automaton, from_state, lang):
    """States reachable from ``from_state`` on some word in L(lang),
    computed by product reachability with the language NFA."""
    if tuple(automaton.alphabet) != tuple(lang.alphabet):
        raise AlphabetMismatchError(
            f"alphabets differ: {automaton.alphabet} vs {lang.alphabet}"
        )
    deterministic = isinstance(automaton, Dfa)
    n_sym = len(automaton.alphabet)
    start = (from_state, lang.initial)
    seen = {start}
    stack = [start]
    found = set()
    while stack:
        q, p = stack.pop()
        if p in lang.accepting:
            found.add(q)
        for sym in range(n_sym):
            if deterministic:
                q_targets = (automaton.delta[q][sym],)
            else:
                q_targets = automaton.delta[q][sym]
            for q2 in q_targets:
                for p2 in lang.delta[p][sym]:
                    pair = (q2, p2)
                    if pair not in seen:
                        seen.add(pair)
                        stack.append(pair)
    return frozenset(found)


def enumerate_language(automaton, max_len):
    """All accepted words of length <= max_len, as symbol tuples, sorted.

    Works on Dfa and Nfa; prunes prefixes whose state set dies."""
    if isinstance(automaton, Dfa):
        automaton = dfa_to_nfa(automaton)
    out = []
    # avoid pumping through a trap error state: it accepts nothing
    dead = frozenset() if automaton.error is None else frozenset({automaton.error})
    frontier = [((), frozenset({automaton.initial}))]
    for _ in range(max_len + 1):
        next_frontier = []
        for word, states in frontier:
            if states & automaton.accepting:
                out.append(word)
            if len(word) == max_len:
                continue
            for symbol in automaton.alphabet:
                succ = automaton.step_set(states, symbol) - dead
                if succ:
                    next_frontier.append((word + (symbol,), succ))
        frontier = next_frontier
        if not frontier:
            break
    return sorted(out)


def canonical_form(dfa):
    """Hashable canonical encoding (BFS renumbering) for isomorphism checks."""
    order = reachable_states(dfa)
    rename = {q: i for i, q in enumerate(order)}
    table = tuple(
        tuple(rename[dfa.delta[q][a]] for a in range(len(dfa.alphabet)))
        for q in order
    )
    accepting = tuple(sorted(rename[q] for q in order if q in dfa.accepting))
    error = rename.get(dfa.error) if dfa.error is not None else None
    return (dfa.alphabet, table, accepting, error)


def isomorphic(a, b):
    return canonical_form(a) == canonical_form(b)


# --- transducers -----------------------------------------------------------


@dataclass(eq=False)
class Nft:
    """Nondeterministic finite-state transducer.

    ``transitions`` maps (state, input symbol) to a frozenset of
    (state, output symbol or None); None means no output for that step.
    """

    input_alphabet: tuple
    output_alphabet: tuple
    n_states: int
    transitions: dict
    initial: int
    finals: frozenset

    def __post_init__(self):
        self.input_alphabet = tuple(self.input_alphabet)
        self.output_alphabet = tuple(self.output_alphabet)
        self.finals = frozenset(self.finals)
        inputs = set(self.input_alphabet)
        outputs = set(self.output_alphabet)
        for (_q, sym), choices in self.transitions.items():
            if sym not in inputs:
                raise ValueError(f"input symbol {sym!r} not in input alphabet")
            for _t, out in choices:
                if out is not None and out not in outputs:
                    raise ValueError(f"output symbol {out!r} not in output alphabet")


def nft_pairs(nft, max_input_len):
    """Enumerate the realized relation {(x, y)} for |x| <= max_input_len.

    Only complete runs ending in a final state are counted."""
    pairs = set()
    frontier = {((), (), nft.initial)}
    for _ in range(max_input_len + 1):
        next_frontier = set()
        for x, y, q in frontier:
            if q in nft.finals:
                pairs.add((x, y))
            if len(x) == max_input_len:
                continue
            for symbol in nft.input_alphabet:
                for t, out in nft.transitions.get((q, symbol), ()):
                    y2 = y if out is None else y + (out,)
                    next_frontier.add((x + (symbol,), y2, t))
        frontier = next_frontier
        if not frontier:
            break
    return pairs


@dataclass(eq=False)
class Gnft:
    """Generalized NFT: transitions carry a regex (over the input alphabet)
    and one output symbol.  A transition with an empty-string regex and no
    output acts as a pure connector (the two states are identified).

    ``transitions`` is a list of (src, dst, pattern, output-or-None).
    No transitions may enter ``initial`` or leave ``final``.
    """

    input_alphabet: tuple
    output_alphabet: tuple
    n_states: int
    initial: int
    final: int
    transitions: list = field(default_factory=list)

    def __post_init__(self):
        for src, dst, _pattern, _out in self.transitions:
            if dst == self.initial:
                raise ValueError("no transitions may enter the initial state")
            if src == self.final:
                raise ValueError("no transitions may leave the final state")


def gnft_to_nft(gnft):
    """Expand each (regex, output) transition by embedding the regex's NFA;
    transitions into its accept states additionally emit the output and jump
    to the destination state.

    Segments are non-empty strings, so the empty string is dropped from each
    regex's language.  A transition with no output must have an empty-string
    regex and merges its endpoints (a pure connector).
    """
    parent = list(range(gnft.n_states))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    expansions = []
    for src, dst, pattern, out in gnft.transitions:
        nfa = compile_regex(pattern, gnft.input_alphabet)
        if out is None:
            if not _only_epsilon(nfa):
                raise ValueError(
                    "output-free transitions must carry an empty-string regex"
                )
            parent[find(src)] = find(dst)
            continue
        expansions.append((src, dst, nfa, out))

    transitions = {}
    fresh = gnft.n_states

    def add(q, symbol, target, out):
        key = (q, symbol)
        choices = set(transitions.get(key, ()))
        choices.add((target, out))
        transitions[key] = frozenset(choices)

    for src, dst, nfa, out in expansions:
        # the fragment's initial state is identified with src; other states
        # become fresh transducer states
        mapping = {nfa.initial: find(src)}
        for q in range(nfa.n_states):
            if q not in mapping:
                mapping[q] = fresh
                fresh += 1
        exit_state = find(dst)
        for q in range(nfa.n_states):
            for i, symbol in enumerate(gnft.input_alphabet):
                for t in nfa.delta[q][i]:
                    add(mapping[q], symbol, mapping[t], None)
                    if t in nfa.accepting:
                        add(mapping[q], symbol, exit_state, out)
    return Nft(
        input_alphabet=gnft.input_alphabet,
        output_alphabet=gnft.output_alphabet,
        n_states=fresh,
        transitions=transitions,
        initial=find(gnft.initial),
        finals=frozenset({find(gnft.final)}),
    )


def _only_epsilon(nfa):
    """True when the NFA accepts exactly the empty string."""
    if nfa.initial not in nfa.accepting:
        return False
    # if any non-empty word is accepted, one of length <= n_states is
    frontier = {frozenset({nfa.initial})}
    seen = set(frontier)
    for _ in range(nfa.n_states):
        nxt = set()
        for states in frontier:
            for i in range(len(nfa.alphabet)):
                succ = frozenset(t for q in states for t in nfa.delta[q][i])
                if not succ:
                    continue
                if succ & nfa.accepting:
                    return False
                if succ not in seen:
                    seen.add(succ)
                    nxt.add(succ)
        frontier = nxt
    return True

"""Shared test utilities: random automata, independent brute-force oracles."""

import itertools

from lossymon.automata import Dfa, Nfa, dfa_to_nfa, minimize


def all_words(alphabet, max_len):
    for k in range(max_len + 1):
        yield from itertools.product(alphabet, repeat=k)


def random_nfa_property(rng, max_core_states=3, alphabet=("a", "b")):
    """Random NFA property: random transition sets plus a trap error state."""
    core = rng.randint(1, max_core_states)
    err = core
    n = core + 1
    delta = []
    for q in range(core):
        row = []
        for _ in alphabet:
            targets = {t for t in range(n) if rng.random() < 0.4}
            row.append(frozenset(targets))
        delta.append(tuple(row))
    delta.append(tuple(frozenset({err}) for _ in alphabet))
    return Nfa(
        alphabet=tuple(alphabet),
        delta=tuple(delta),
        initial=0,
        accepting=frozenset(range(core)),
        error=err,
    )


def random_property_dfa(rng, max_core_states=3, alphabet=("a", "b")):
    """Random minimal property DFA with a reachable error state."""
    while True:
        core = rng.randint(1, max_core_states)
        err = core
        n = core + 1
        rows = []
        for q in range(core):
            rows.append(tuple(rng.randrange(n) for _ in alphabet))
        rows.append((err,) * len(alphabet))
        dfa = Dfa(
            alphabet=tuple(alphabet),
            delta=tuple(rows),
            initial=0,
            accepting=frozenset(range(core)),
            error=err,
        )
        minimal, _ = minimize(dfa)
        if minimal.error is not None and minimal.initial != minimal.error:
            return minimal


def moore_classes(dfa, states):
    """Independent language-equivalence partition by naive Moore refinement."""
    states = sorted(states)
    block = {q: (q in dfa.accepting) for q in states}
    while True:
        signature = {
            q: (block[q],) + tuple(block[dfa.delta[q][a]] for a in range(len(dfa.alphabet)))
            for q in states
        }
        groups = {}
        for q in states:
            groups.setdefault(signature[q], []).append(q)
        new_block = {}
        for i, (_sig, members) in enumerate(sorted(groups.items(), key=lambda kv: kv[1][0])):
            for q in members:
                new_block[q] = i
        if all(
            (new_block[p] == new_block[q]) == (block[p] == block[q])
            for p in states
            for q in states
        ):
            return sorted(
                sorted(members) for members in groups.values()
            )
        block = new_block


def languages_equal(a, b, alphabet, max_len):
    """Brute-force language comparison; a and b may be Dfa or Nfa."""
    for word in all_words(alphabet, max_len):
        if a.accepts(word) != b.accepts(word):
            return False
    return True


def full_powerset_dfa(nfa):
    """Determinization over every non-empty subset of the NFA's states
    (not just the reachable ones), labels attached."""
    assert nfa.error is not None
    states = []
    for r in range(1, nfa.n_states + 1):
        states.extend(itertools.combinations(range(nfa.n_states), r))
    index = {s: i for i, s in enumerate(states)}
    rows = []
    for subset in states:
        row = []
        for a in range(len(nfa.alphabet)):
            targets = set()
            for q in subset:
                targets |= nfa.delta[q][a]
            succ = tuple(sorted(targets)) if targets else (nfa.error,)
            row.append(index[succ])
        rows.append(tuple(row))
    accepting = frozenset(
        i for i, s in enumerate(states) if set(s) & nfa.accepting
    )
    return Dfa(
        alphabet=nfa.alphabet,
        delta=tuple(rows),
        initial=index[(nfa.initial,)],
        accepting=accepting,
        labels=tuple(states),
    )

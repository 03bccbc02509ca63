"""Loss models: for each alternate symbol, the set of original-symbol
segments it may stand for, given as a regular language, a single symbol, or
a direct state-set transformer.

Builtin loss types: dropped-count, silent-drop, frequency-count,
merged-objects, loop-summary, and lossless relabeling.
"""

from dataclasses import dataclass, field

from .automata import Nfa, states_reachable_via, enumerate_language
from .errors import ModelError
from .regex import compile_regex


@dataclass(eq=False)
class RegularLang:
    """Inverse language given as an epsilon-free NFA over the input
    alphabet.  Must be non-empty and must not contain the empty string."""

    nfa: Nfa


@dataclass(eq=False)
class Singleton:
    """Pass-through: the alternate symbol stands for exactly one input
    symbol."""

    symbol: str


@dataclass(eq=False)
class StateMap:
    """Direct state-set transformer: maps each property state to the set of
    states reachable across the lost segment.

    Bypasses the string-level oracle, so it carries a user-asserted flag
    that verification reports surface.  ``table`` maps state -> iterable of
    states; alternatively ``fn(property, state)`` computes the set.
    """

    table: dict | None = None
    fn: object = None
    user_asserted: bool = True

    def reach(self, prop, state):
        if self.table is not None:
            if state not in self.table:
                raise ModelError(f"state map is not total: missing state {state}")
            return frozenset(self.table[state])
        return frozenset(self.fn(prop, state))


@dataclass(eq=False)
class LossModel:
    sigma: tuple
    gamma: tuple
    inverse: dict  # gamma symbol -> RegularLang | Singleton | StateMap
    name: str = "custom"

    def __post_init__(self):
        self.sigma = tuple(self.sigma)
        self.gamma = tuple(self.gamma)
        if len(set(self.gamma)) != len(self.gamma):
            raise ModelError("duplicate symbols in the alternate alphabet")
        for symbol in self.gamma:
            if symbol not in self.inverse:
                raise ModelError(f"no inverse entry for alternate symbol {symbol!r}")
        for symbol, spec in self.inverse.items():
            if symbol not in self.gamma:
                raise ModelError(f"inverse entry {symbol!r} not in the alternate alphabet")
            if isinstance(spec, RegularLang):
                if tuple(spec.nfa.alphabet) != self.sigma:
                    raise ModelError(
                        f"inverse language for {symbol!r} is not over the input alphabet"
                    )
                words = enumerate_language(spec.nfa, spec.nfa.n_states)
                if not words:
                    raise ModelError(f"inverse language for {symbol!r} is empty")
                if () in set(words):
                    raise ModelError(
                        f"inverse language for {symbol!r} contains the empty string"
                    )
            elif isinstance(spec, Singleton):
                if spec.symbol not in self.sigma:
                    raise ModelError(
                        f"pass-through symbol {spec.symbol!r} not in the input alphabet"
                    )

    def statemap_symbols(self):
        """Alternate symbols whose inverse is a direct state map (these
        bypass the string-level oracle)."""
        return tuple(
            symbol
            for symbol in self.gamma
            if isinstance(self.inverse[symbol], StateMap)
        )


def inverse_reach(model, prop, state, symbol):
    """States the property can be in after a segment replaced by
    ``symbol``: delta(state, inverse language of symbol)."""
    if symbol not in model.inverse:
        raise ModelError(f"unknown alternate symbol {symbol!r}")
    if tuple(prop.alphabet) != model.sigma:
        raise ModelError("property alphabet differs from the loss model's")
    spec = model.inverse[symbol]
    if isinstance(spec, Singleton):
        return frozenset({prop.step(state, spec.symbol)})
    if isinstance(spec, RegularLang):
        return states_reachable_via(prop, state, spec.nfa)
    reached = spec.reach(prop, state)
    if prop.error is not None and state == prop.error and reached != {prop.error}:
        raise ModelError("state map must map the error state to itself")
    return reached


# --- builtin loss types -----------------------------------------------------


def _exact_length_nfa(sigma, k):
    """All strings of exactly length k."""
    n = k + 1
    delta = tuple(
        tuple(
            frozenset({q + 1}) if q < k else frozenset()
            for _ in sigma
        )
        for q in range(n)
    )
    return Nfa(alphabet=sigma, delta=delta, initial=0, accepting=frozenset({k}))


def _finite_language_nfa(sigma, words):
    """Alternation of one-symbol words (used by merged-objects)."""
    delta_rows = [[set() for _ in sigma], [set() for _ in sigma]]
    idx = {s: i for i, s in enumerate(sigma)}
    for word in words:
        (symbol,) = word
        delta_rows[0][idx[symbol]].add(1)
    delta = tuple(tuple(frozenset(t) for t in row) for row in delta_rows)
    return Nfa(alphabet=sigma, delta=delta, initial=0, accepting=frozenset({1}))


def lossless(sigma):
    """Identity loss: every symbol passes through unchanged."""
    sigma = tuple(sigma)
    return LossModel(
        sigma=sigma,
        gamma=sigma,
        inverse={s: Singleton(s) for s in sigma},
        name="lossless",
    )


def dropped_count(sigma, n):
    """Skipped segments are replaced by their length, capped at n."""
    sigma = tuple(sigma)
    if n < 1:
        raise ModelError("dropped_count needs n >= 1")
    counts = tuple(str(k) for k in range(1, n + 1))
    if set(counts) & set(sigma):
        raise ModelError("count symbols collide with input symbols")
    inverse = {s: Singleton(s) for s in sigma}
    for k in range(1, n + 1):
        inverse[str(k)] = RegularLang(_exact_length_nfa(sigma, k))
    return LossModel(
        sigma=sigma,
        gamma=sigma + counts,
        inverse=inverse,
        name=f"dropped_count({n})",
    )


def silent_drop(sigma, delta_set):
    """Symbols in delta_set may be dropped without trace; every observed
    symbol b arrives primed, standing for any string in Delta* b."""
    sigma = tuple(sigma)
    delta_set = frozenset(delta_set)
    if not delta_set <= set(sigma):
        raise ModelError("delta_set must be a subset of the input alphabet")
    inverse = {}
    gamma = []
    idx = {s: i for i, s in enumerate(sigma)}
    for b in sigma:
        primed = b + "'"
        gamma.append(primed)
        rows = [[set() for _ in sigma], [set() for _ in sigma]]
        for d in delta_set:
            rows[0][idx[d]].add(0)
        rows[0][idx[b]].add(1)
        nfa = Nfa(
            alphabet=sigma,
            delta=tuple(tuple(frozenset(t) for t in row) for row in rows),
            initial=0,
            accepting=frozenset({1}),
        )
        inverse[primed] = RegularLang(nfa)
    return LossModel(
        sigma=sigma,
        gamma=tuple(gamma),
        inverse=inverse,
        name=f"silent_drop({','.join(sorted(delta_set))})",
    )


def count_vector_symbol(counts):
    """Serialize a count vector as "(c1,c2,...)" in alphabet order."""
    return "(" + ",".join(str(c) for c in counts) + ")"


def _count_vectors(width, n):
    def rec(prefix, remaining, slots):
        if slots == 0:
            yield tuple(prefix)
            return
        for c in range(remaining + 1):
            yield from rec(prefix + [c], remaining - c, slots - 1)

    for total in range(1, n + 1):
        for vec in rec([], total, width):
            if sum(vec) == total:
                yield vec


def frequency_count(sigma, n, gamma_cap=4096):
    """Missed segments are summarized by per-symbol counts (up to n missed
    symbols).  The inverse of a count vector is the set of all interleavings
    with those counts; its reach is computed by dynamic programming over
    vectors rather than through an (exponentially large) regex.
    """
    sigma = tuple(sigma)
    if n < 1:
        raise ModelError("frequency_count needs n >= 1")
    vectors = list(_count_vectors(len(sigma), n))
    if len(vectors) + len(sigma) > gamma_cap:
        raise ModelError(
            f"frequency_count alphabet would have {len(vectors) + len(sigma)} "
            f"symbols, over the cap of {gamma_cap}"
        )
    inverse = {s: Singleton(s) for s in sigma}
    gamma = list(sigma)
    for vec in vectors:
        symbol = count_vector_symbol(vec)
        inverse[symbol] = StateMap(fn=_vector_reach_fn(sigma, vec), user_asserted=False)
        gamma.append(symbol)
    return LossModel(
        sigma=sigma,
        gamma=tuple(gamma),
        inverse=inverse,
        name=f"frequency_count({n})",
    )


def _vector_reach_fn(sigma, vector):
    memo = {}

    def reach(prop, state):
        key = (id(prop), state, vector)
        if key in memo:
            return memo[key]

        def rec(q, vec):
            if not any(vec):
                return frozenset({q})
            out = set()
            for i, c in enumerate(vec):
                if c:
                    smaller = vec[:i] + (c - 1,) + vec[i + 1:]
                    out |= rec(prop.step(q, sigma[i]), smaller)
            return frozenset(out)

        result = rec(state, tuple(vector))
        memo[key] = result
        return result

    return reach


def merged_objects(events, objects, parametric=None, sigma=None):
    """Parametric events lose their object identity: e(o) for any tracked
    object o collapses to the bare event e.

    ``sigma`` optionally fixes the input alphabet's order (it must be a
    permutation of the expansion).
    """
    events = tuple(events)
    if isinstance(objects, int):
        objects = tuple(str(i) for i in range(1, objects + 1))
    objects = tuple(objects)
    parametric = tuple(events if parametric is None else parametric)
    if not set(parametric) <= set(events):
        raise ModelError("parametric events must be listed in events")
    expanded = []
    for e in events:
        if e in parametric:
            expanded.extend(e + o for o in objects)
        else:
            expanded.append(e)
    if sigma is None:
        sigma = tuple(expanded)
    else:
        sigma = tuple(sigma)
        if set(sigma) != set(expanded) or len(sigma) != len(expanded):
            raise ModelError(
                "sigma must be a permutation of the expanded parametric events"
            )
    inverse = {}
    for e in events:
        if e in parametric:
            inverse[e] = RegularLang(
                _finite_language_nfa(sigma, [(e + o,) for o in objects])
            )
        else:
            inverse[e] = Singleton(e)
    return LossModel(
        sigma=sigma,
        gamma=events,
        inverse=inverse,
        name=f"merged_objects({len(objects)})",
    )


def loop_summary(prop, summary_symbol, region_map):
    """A summary symbol stands for an unmonitored program region; the map of
    possible end states per start state comes from static analysis and is
    used directly."""
    sigma = tuple(prop.alphabet)
    if summary_symbol in sigma:
        raise ModelError("summary symbol collides with an input symbol")
    table = {q: frozenset(region_map[q]) for q in range(prop.n_states)}
    if prop.error is not None and table[prop.error] != {prop.error}:
        raise ModelError("region map must send the error state to itself")
    inverse = {s: Singleton(s) for s in sigma}
    inverse[summary_symbol] = StateMap(table=table, user_asserted=True)
    return LossModel(
        sigma=sigma,
        gamma=sigma + (summary_symbol,),
        inverse=inverse,
        name=f"loop_summary({summary_symbol})",
    )


# --- JSON interface ---------------------------------------------------------


def loss_model_from_json(doc, sigma):
    """Build a loss model from its JSON description, relative to a
    property's input alphabet."""
    sigma = tuple(sigma)
    kind = doc.get("type")
    if kind == "dropped_count":
        return dropped_count(sigma, doc["n"])
    if kind == "silent_drop":
        return silent_drop(sigma, doc.get("delta", []))
    if kind == "frequency_count":
        return frequency_count(sigma, doc["n"])
    if kind == "merged_objects":
        objects = doc["objects"]
        if isinstance(objects, int):
            objects = [str(i) for i in range(1, objects + 1)]
        parametric = list(doc["parametric"])
        events = []
        for s in sigma:
            base = next(
                (e for e in parametric if any(s == e + o for o in objects)), s
            )
            if base not in events:
                events.append(base)
        return merged_objects(events, objects, parametric, sigma=sigma)
    if kind == "lossless":
        return lossless(sigma)
    if kind == "custom":
        inverse = {s: Singleton(s) for s in sigma} if doc.get("passthrough", True) else {}
        for symbol, entry in doc["gamma"].items():
            inverse[symbol] = RegularLang(compile_regex(entry["regex"], sigma))
        return LossModel(
            sigma=sigma, gamma=tuple(inverse), inverse=inverse, name="custom"
        )
    if kind == "custom_statemap":
        inverse = {s: Singleton(s) for s in sigma} if doc.get("passthrough", True) else {}
        for symbol, entry in doc["gamma"].items():
            table = {int(q): frozenset(targets) for q, targets in entry["map"].items()}
            inverse[symbol] = StateMap(table=table, user_asserted=True)
        return LossModel(
            sigma=sigma, gamma=tuple(inverse), inverse=inverse, name="custom_statemap"
        )
    raise ModelError(f"unknown loss model type {kind!r}")

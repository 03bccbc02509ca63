"""Property specification files and bundled example properties.

A property spec lists the events, the creation events, a regular expression,
and whether matching or failing the regex constitutes a violation.  Building
a property yields a minimized total DFA with a trap error state.

Verdict semantics (prefix-closure formalization):

* ``match``: an execution violates as soon as some prefix matches the
  pattern (matched once, violated forever).
* ``fail``: an execution violates once no extension can match the pattern.

Both guarantee the error state is a trap.
"""

import json
import warnings
from dataclasses import dataclass, field

from .automata import Dfa, Nfa, determinize, minimize
from .errors import SpecValidationError, TrivialPropertyWarning
from .regex import compile_regex

MATCH_IS_VIOLATION = "match"
FAIL_IS_VIOLATION = "fail"


@dataclass
class PropertySpec:
    name: str
    events: tuple
    creation_events: tuple
    pattern: str
    verdict_mode: str

    def to_json(self):
        return {
            "name": self.name,
            "events": list(self.events),
            "creation_events": list(self.creation_events),
            "regex": self.pattern,
            "verdict": self.verdict_mode,
        }


def parse_spec(doc):
    """Validate and parse a property spec (dict or JSON text)."""
    if isinstance(doc, str):
        doc = json.loads(doc)
    if not isinstance(doc, dict):
        raise SpecValidationError("$", "expected a JSON object")

    def need(key, kind, kindname):
        if key not in doc:
            raise SpecValidationError(key, "missing required field")
        if not isinstance(doc[key], kind):
            raise SpecValidationError(key, f"expected {kindname}")
        return doc[key]

    name = need("name", str, "a string")
    events = need("events", list, "a list")
    for i, e in enumerate(events):
        if not isinstance(e, str) or not e:
            raise SpecValidationError(f"events[{i}]", "expected a non-empty string")
    if len(set(events)) != len(events):
        raise SpecValidationError("events", "duplicate event names")
    creation = doc.get("creation_events", [])
    if not isinstance(creation, list):
        raise SpecValidationError("creation_events", "expected a list")
    for i, e in enumerate(creation):
        if e not in events:
            raise SpecValidationError(
                f"creation_events[{i}]", f"{e!r} is not a declared event"
            )
    pattern = need("regex", str, "a string")
    verdict = need("verdict", str, "a string")
    if verdict not in (MATCH_IS_VIOLATION, FAIL_IS_VIOLATION):
        raise SpecValidationError("verdict", "expected 'match' or 'fail'")
    return PropertySpec(
        name=name,
        events=tuple(events),
        creation_events=tuple(creation),
        pattern=pattern,
        verdict_mode=verdict,
    )


def build_property(spec):
    """Compile the spec's pattern into a minimized property DFA with a trap
    error state.  Warns (TrivialPropertyWarning) when the property can never
    be violated or violates everything."""
    nfa = compile_regex(spec.pattern, spec.events)
    det = determinize(nfa)
    if spec.verdict_mode == MATCH_IS_VIOLATION:
        prop = _match_is_violation(det)
    else:
        prop = _fail_is_violation(det)
    minimal, _classes = minimize(prop)
    if minimal.error is None:
        warnings.warn(
            f"property {spec.name!r} can never be violated", TrivialPropertyWarning
        )
    elif minimal.initial == minimal.error:
        warnings.warn(
            f"property {spec.name!r} violates every execution", TrivialPropertyWarning
        )
    return minimal


def _match_is_violation(det):
    """Redirect every transition into an accepting (matched) state to a
    fresh trap error state."""
    n = det.n_states
    err = n
    rows = [
        tuple(err if t in det.accepting else t for t in row) for row in det.delta
    ]
    rows.append((err,) * len(det.alphabet))
    initial = err if det.initial in det.accepting else det.initial
    accepting = frozenset(range(n + 1)) - {err} - det.accepting
    return Dfa(
        alphabet=det.alphabet,
        delta=tuple(rows),
        initial=initial,
        accepting=accepting,
        error=err,
    )


def _fail_is_violation(det):
    """Merge every state from which no accepting state is reachable into a
    fresh trap error state."""
    n = det.n_states
    live = set(det.accepting)
    changed = True
    while changed:
        changed = False
        for q in range(n):
            if q in live:
                continue
            if any(t in live for t in det.delta[q]):
                live.add(q)
                changed = True
    err = n
    rows = [
        tuple(t if t in live else err for t in row)
        if q in live
        else (err,) * len(det.alphabet)
        for q, row in enumerate(det.delta)
    ]
    rows.append((err,) * len(det.alphabet))
    initial = det.initial if det.initial in live else err
    accepting = frozenset(live)
    return Dfa(
        alphabet=det.alphabet,
        delta=tuple(rows),
        initial=initial,
        accepting=accepting,
        error=err,
    )


# --- bundled example properties ---------------------------------------------


@dataclass
class BundledProperty:
    """An example property shipped with the package: a ready property DFA
    plus the event metadata the trace generator needs."""

    name: str
    dfa: Dfa
    events: tuple
    creation_events: tuple
    spec: PropertySpec | None = None


def dfa_from_edges(alphabet, n_states, edges, initial, error):
    """Build a total DFA from explicit (state, symbol, target) edges;
    unspecified transitions go to the error state."""
    alphabet = tuple(alphabet)
    idx = {s: i for i, s in enumerate(alphabet)}
    rows = [[error] * len(alphabet) for _ in range(n_states)]
    for q, symbol, t in edges:
        rows[q][idx[symbol]] = t
    accepting = frozenset(range(n_states)) - {error}
    return Dfa(
        alphabet=alphabet,
        delta=tuple(tuple(row) for row in rows),
        initial=initial,
        accepting=accepting,
        error=error,
    )


def safe_iter_spec():
    """Iterator safety: after creation, updates forbid further next calls."""
    return PropertySpec(
        name="safe_iter",
        events=("c", "n", "u"),
        creation_events=("c",),
        pattern="c n* (u u*)?",
        verdict_mode=FAIL_IS_VIOLATION,
    )


def safe_iter_dfa():
    """The iterator-safety property as an explicit 4-state DFA."""
    return dfa_from_edges(
        alphabet=("c", "n", "u"),
        n_states=4,
        edges=[
            (0, "c", 1),
            (1, "n", 1),
            (1, "u", 2),
            (2, "u", 2),
            (2, "n", 3),
        ],
        initial=0,
        error=3,
    )


def safe_iter_pair_dfa():
    """Composite monitor tracking two iterators at once; the second
    iterator's events only exist after its own creation event.

    States: 0=(fresh,fresh) 1=(iterating,fresh) 2=(both iterating)
    3=(both updated) 4=(first updated, second fresh)
    5=(first updated, second iterating) 6=error.
    """
    return dfa_from_edges(
        alphabet=("c1", "c2", "n1", "n2", "u"),
        n_states=7,
        edges=[
            (0, "c1", 1),
            (1, "n1", 1),
            (1, "c2", 2),
            (1, "u", 4),
            (2, "n1", 2),
            (2, "n2", 2),
            (2, "u", 3),
            (3, "u", 3),
            (4, "c2", 5),
            (4, "u", 4),
            (5, "n2", 5),
            (5, "u", 3),
        ],
        initial=0,
        error=6,
    )


def approx_demo_nfa():
    """Small nondeterministic property used to exercise determinization
    size and state-budgeted approximation."""
    edges = {
        (0, "a"): {1, 2},
        (0, "b"): {2},
        (0, "c"): {0},
        (1, "b"): {3},
        (1, "c"): {1, 2},
        (2, "a"): {0, 1},
        (2, "b"): {3},
        (2, "c"): {1},
        (3, "a"): {3},
        (3, "b"): {3},
        (3, "c"): {3},
    }
    alphabet = ("a", "b", "c")
    delta = tuple(
        tuple(frozenset(edges.get((q, s), set())) for s in alphabet)
        for q in range(4)
    )
    return Nfa(
        alphabet=alphabet,
        delta=delta,
        initial=0,
        accepting=frozenset({0, 1, 2}),
        error=3,
    )


def loop_skip_dfa():
    """Property whose instrumentation sits inside a loop; pairs with the
    loop-summary loss model."""
    return dfa_from_edges(
        alphabet=("a", "b", "c"),
        n_states=5,
        edges=[
            (0, "a", 1),
            (1, "a", 1),
            (1, "b", 2),
            (2, "c", 1),
            (0, "b", 3),
            (3, "c", 0),
        ],
        initial=0,
        error=4,
    )


def loop_skip_region_map():
    """End states per start state when the loop body goes unmonitored.

    The rows for the loop-entry states come from static analysis of the
    summarized region; the mid-loop and error rows are identity."""
    return {0: {2, 3}, 1: {2}, 2: {2}, 3: {3}, 4: {4}}


def bundled_examples():
    spec = safe_iter_spec()
    return (
        BundledProperty(
            name="safe_iter",
            dfa=safe_iter_dfa(),
            events=("c", "n", "u"),
            creation_events=("c",),
            spec=spec,
        ),
        BundledProperty(
            name="safe_iter_pair",
            dfa=safe_iter_pair_dfa(),
            events=("c1", "c2", "n1", "n2", "u"),
            creation_events=("c1",),
        ),
        BundledProperty(
            name="approx_demo",
            dfa=minimize(determinize(approx_demo_nfa()))[0],
            events=("a", "b", "c"),
            creation_events=(),
        ),
        BundledProperty(
            name="loop_skip",
            dfa=loop_skip_dfa(),
            events=("a", "b", "c"),
            creation_events=(),
        ),
    )


def bundled(name):
    for prop in bundled_examples():
        if prop.name == name:
            return prop
    raise KeyError(name)

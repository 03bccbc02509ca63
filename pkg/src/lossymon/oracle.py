"""Brute-force ground truth: enumerate the completions of a lossy string as
the concatenation of per-symbol inverse languages, and decide by exhaustion
whether all, none, or some completions violate a property.

This is a test oracle, not a production path; enumeration caps raise hard
errors instead of truncating silently.
"""

import enum
import itertools
from dataclasses import dataclass, field

from .automata import enumerate_language
from .errors import CapExceededError, ModelError
from .lossmodel import RegularLang, Singleton, StateMap

DEFAULT_FACTOR_LEN = 6
DEFAULT_COMPLETION_CAP = 200_000


class Classification(enum.Enum):
    ALL_VIOLATE = "AllViolate"
    NONE_VIOLATE = "NoneViolate"
    MIXED = "Mixed"


def factor_language(model, symbol, max_len=DEFAULT_FACTOR_LEN):
    """Enumerate the inverse language of one alternate symbol, to words of
    length <= max_len.  State-map inverses have no string-level language and
    are rejected."""
    if symbol not in model.inverse:
        raise ModelError(f"unknown alternate symbol {symbol!r}")
    spec = model.inverse[symbol]
    if isinstance(spec, Singleton):
        return [(spec.symbol,)]
    if isinstance(spec, RegularLang):
        words = enumerate_language(spec.nfa, max_len)
        if not words:
            raise CapExceededError(
                f"inverse language of {symbol!r} has no word of length <= {max_len}"
            )
        return words
    raise ModelError(
        f"alternate symbol {symbol!r} uses a direct state map; "
        "its completions cannot be enumerated"
    )


def iter_completions(model, lossy, max_len=DEFAULT_FACTOR_LEN):
    """Lazily stream the completion set of a lossy string: every
    concatenation of per-symbol inverse-language words."""
    factors = [factor_language(model, symbol, max_len) for symbol in lossy]
    for combo in itertools.product(*factors):
        yield tuple(itertools.chain.from_iterable(combo))


def completions(model, lossy, max_len=DEFAULT_FACTOR_LEN, cap=DEFAULT_COMPLETION_CAP):
    """Materialize the completion set of a lossy string."""
    factors = [factor_language(model, symbol, max_len) for symbol in lossy]
    total = 1
    for f in factors:
        total *= len(f)
    if total > cap:
        raise CapExceededError(
            f"{total} completions exceed the cap of {cap}; "
            "raise the cap or shorten the string"
        )
    return {
        tuple(itertools.chain.from_iterable(combo))
        for combo in itertools.product(*factors)
    }


_transform_cache = {}


def _factor_transforms(prop, model, symbol, max_len):
    """Distinct state transformations induced by the factor words of one
    alternate symbol, found by enumerating the words and stepping the
    property from every state.  Words acting identically on the property
    contribute identically to any completion, so this is an exact quotient
    of the string-level enumeration."""
    key = (id(prop), id(model), symbol, max_len)
    cached = _transform_cache.get(key)
    if cached is not None and cached[0] is prop and cached[1] is model:
        return cached[2]
    transforms = sorted(
        {
            tuple(prop.run(word, start=q) for q in range(prop.n_states))
            for word in factor_language(model, symbol, max_len)
        }
    )
    _transform_cache[key] = (prop, model, transforms)
    return transforms


def completion_reach(prop, model, lossy, max_len=DEFAULT_FACTOR_LEN):
    """Set of property states reached over all completions."""
    states = {prop.initial}
    for symbol in lossy:
        transforms = _factor_transforms(prop, model, symbol, max_len)
        states = {tr[q] for q in states for tr in transforms}
    return frozenset(states)


def classify(prop, model, lossy, max_len=DEFAULT_FACTOR_LEN):
    """AllViolate / NoneViolate / Mixed over the completion set."""
    reached = completion_reach(prop, model, lossy, max_len)
    violating = prop.error in reached
    ok = bool(reached - ({prop.error} if prop.error is not None else set()))
    if violating and ok:
        return Classification.MIXED
    if violating:
        return Classification.ALL_VIOLATE
    return Classification.NONE_VIOLATE


def classify_strings(prop, model, lossy, max_len=DEFAULT_FACTOR_LEN):
    """String-level classification over the streamed completion set, with
    early exit; kept as the slow reference implementation for classify."""
    saw_violating = False
    saw_ok = False
    err = prop.error
    for completion in iter_completions(model, lossy, max_len):
        if prop.run(completion) == err:
            saw_violating = True
        else:
            saw_ok = True
        if saw_violating and saw_ok:
            return Classification.MIXED
    if saw_violating:
        return Classification.ALL_VIOLATE
    return Classification.NONE_VIOLATE


def segment_member(model, segment, symbol):
    """Is this segment one of the strings the symbol may stand for?"""
    spec = model.inverse[symbol]
    if isinstance(spec, Singleton):
        return tuple(segment) == (spec.symbol,)
    if isinstance(spec, RegularLang):
        return spec.nfa.accepts(segment)
    raise ModelError(
        f"alternate symbol {symbol!r} uses a direct state map; "
        "segment membership cannot be decided"
    )


def segmentation_images(model, trace):
    """All lossy images of a trace under every segmentation and replacement
    choice (the full set of filter outputs)."""
    trace = tuple(trace)
    n = len(trace)
    memo = {n: {()}}

    def images_from(i):
        if i in memo:
            return memo[i]
        out = set()
        for j in range(i + 1, n + 1):
            segment = trace[i:j]
            for symbol in model.gamma:
                if segment_member(model, segment, symbol):
                    out.update((symbol,) + rest for rest in images_from(j))
        memo[i] = out
        return out

    return images_from(0)


@dataclass
class OracleReport:
    property_name: str
    model_name: str
    max_y_len: int
    checked: int = 0
    counterexamples: list = field(default_factory=list)
    statemap_symbols: tuple = ()

    @property
    def ok(self):
        return not self.counterexamples

    def lines(self):
        out = [
            f"property={self.property_name} model={self.model_name} "
            f"max_y_len={self.max_y_len} checked={self.checked}"
        ]
        if self.statemap_symbols:
            out.append(
                "note: state-map symbols bypass the string oracle "
                f"(user-asserted): {', '.join(self.statemap_symbols)}"
            )
        for kind, y, expected, got in self.counterexamples:
            out.append(
                f"FAIL {kind}: y={''.join(y) or 'ε'} expected={expected} got={got}"
            )
        out.append("PASS" if self.ok else f"FAIL ({len(self.counterexamples)} counterexamples)")
        return out


def check_monitor_against_oracle(
    prop,
    model,
    monitor,
    max_y_len,
    max_len=DEFAULT_FACTOR_LEN,
    property_name="property",
):
    """Exhaustively compare monitor verdicts with the classification oracle.

    A complete monitor must reject y exactly when every completion violates;
    a sound monitor must reject y exactly when some completion violates.
    """
    from .runtime import Verdict, run

    report = OracleReport(
        property_name=property_name,
        model_name=model.name,
        max_y_len=max_y_len,
        statemap_symbols=model.statemap_symbols(),
    )
    if report.statemap_symbols:
        raise ModelError(
            "oracle verification requires string-level inverse languages; "
            f"state-map symbols present: {report.statemap_symbols}"
        )
    sound = monitor.mode == "sound"
    for k in range(max_y_len + 1):
        for lossy in itertools.product(model.gamma, repeat=k):
            verdict = run(monitor, lossy).verdict
            rejected = verdict is Verdict.FALSE
            cls = classify(prop, model, lossy, max_len)
            if sound:
                should_reject = cls is not Classification.NONE_VIOLATE
            else:
                should_reject = cls is Classification.ALL_VIOLATE
            if rejected != should_reject:
                report.counterexamples.append(
                    (
                        "sound" if sound else "complete",
                        lossy,
                        "reject" if should_reject else "accept",
                        "reject" if rejected else "accept",
                    )
                )
            report.checked += 1
    return report

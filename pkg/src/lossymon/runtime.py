"""Incremental monitor engine: feed symbols one at a time, track the
current state, and emit three-valued verdicts.

A session owns mutable state and must not be shared across threads; the
monitor it references is immutable and may be shared freely.
"""

import enum
from dataclasses import dataclass

from . import kernel
from .automata import Dfa
from .errors import UnknownSymbolError


class Verdict(enum.Enum):
    TRUE = "true"
    FALSE = "false"
    INCONCLUSIVE = "inconclusive"


class _Runnable:
    """Uniform view over a property Dfa or an AlternateMonitor: transition
    table, rejecting state, and the set of safe states (those from which the
    rejecting state is unreachable; entering one makes the verdict True)."""

    def __init__(self, monitor):
        dfa = monitor if isinstance(monitor, Dfa) else monitor.dfa
        self.dfa = dfa
        self.reject = dfa.error
        self.labels = dfa.labels
        self.safe = _safe_states(dfa)
        self._sym = {s: i for i, s in enumerate(dfa.alphabet)}
        self._table = kernel.make_table(dfa.delta)
        self._kernel_ok = len(dfa.alphabet) <= kernel.MAX_KERNEL_SYMBOLS

    def verdict(self, state):
        if state == self.reject:
            return Verdict.FALSE
        if state in self.safe:
            return Verdict.TRUE
        return Verdict.INCONCLUSIVE

    def encode(self, stream):
        try:
            return bytes(self._sym[s] for s in stream)
        except KeyError as exc:
            raise UnknownSymbolError(f"unknown symbol {exc.args[0]!r}") from None


def _safe_states(dfa):
    """States from which the rejecting state is unreachable."""
    if dfa.error is None:
        return frozenset(range(dfa.n_states))
    can_reach = {dfa.error}
    changed = True
    while changed:
        changed = False
        for q in range(dfa.n_states):
            if q in can_reach:
                continue
            if any(t in can_reach for t in dfa.delta[q]):
                can_reach.add(q)
                changed = True
    return frozenset(range(dfa.n_states)) - can_reach


_runnable_cache = {}


def _runnable(monitor):
    key = id(monitor)
    cached = _runnable_cache.get(key)
    if cached is None or cached[0] is not monitor:
        cached = (monitor, _Runnable(monitor))
        _runnable_cache[key] = cached
    return cached[1]


class MonitorSession:
    """Single-owner stepping state for one stream."""

    def __init__(self, monitor):
        self._r = _runnable(monitor)
        self.current = self._r.dfa.initial
        self.events_processed = 0
        self.verdict = self._r.verdict(self.current)
        self._poisoned = False

    @property
    def label(self):
        labels = self._r.labels
        return labels[self.current] if labels is not None else (self.current,)

    def step(self, symbol):
        if self._poisoned:
            raise UnknownSymbolError("session poisoned by a prior error")
        try:
            i = self._r._sym[symbol]
        except KeyError:
            self._poisoned = True
            raise UnknownSymbolError(f"unknown symbol {symbol!r}") from None
        self.current = self._r.dfa.delta[self.current][i]
        self.events_processed += 1
        self.verdict = self._r.verdict(self.current)
        return self.verdict


@dataclass
class RunResult:
    verdict: Verdict
    state: int
    label: tuple
    first_violation: int | None
    events: int


def run(monitor, stream):
    """Batch equivalent of folding step over the stream."""
    r = _runnable(monitor)
    stream = tuple(stream)
    reject = -1 if r.reject is None else r.reject
    if r._kernel_ok:
        final, first = kernel.run_dfa(r._table, r.dfa.initial, reject, r.encode(stream))
    else:
        # alphabets too wide for byte encoding take the pure path directly
        from . import _runcore_py

        try:
            ids = [r._sym[s] for s in stream]
        except KeyError as exc:
            raise UnknownSymbolError(f"unknown symbol {exc.args[0]!r}") from None
        final, first = _runcore_py.run_dfa(
            [list(row) for row in r.dfa.delta], r.dfa.initial, reject, ids
        )
    labels = r.labels
    return RunResult(
        verdict=r.verdict(final),
        state=final,
        label=labels[final] if labels is not None else (final,),
        first_violation=None if first < 0 else first,
        events=len(stream),
    )

"""Construction of alternate monitors over the lossy alphabet: the optimal
complete monitor, the sound variant, monitorability checks, and
state-budgeted approximations.
"""

from dataclasses import dataclass

from .automata import (
    Dfa,
    Nfa,
    determinize,
    label,
    minimize,
    reachable_states,
    DEFAULT_SUBSET_CAP,
)
from .errors import ModelError, StateExplosionError
from .lossmodel import inverse_reach

COMPLETE = "complete"
SOUND = "sound"


@dataclass(eq=False)
class AlternateMonitor:
    """A monitor over the alternate alphabet.

    ``dfa`` is the minimized form whose labels are merge-class unions;
    ``subset_dfa`` is the pre-minimization subset form used by
    approximation; ``nfa`` is the state-level alternate NFA it was
    determinized from.  Complete monitors reject exactly when the current
    label is the class of {error}; sound monitors reject when some
    completion of the observed string violates.
    """

    dfa: Dfa
    subset_dfa: Dfa
    nfa: Nfa
    mode: str
    source: str
    property_n_states: int

    @property
    def gamma(self):
        return self.dfa.alphabet

    @property
    def rejecting(self):
        return self.dfa.error

    def to_json(self):
        doc = self.dfa.to_json()
        doc["mode"] = self.mode
        doc["gamma"] = list(self.gamma)
        doc["source"] = self.source
        doc["property_states"] = self.property_n_states
        return doc

    @classmethod
    def from_json(cls, doc):
        dfa = Dfa.from_json(doc)
        return cls(
            dfa=dfa,
            subset_dfa=dfa,
            nfa=None,
            mode=doc["mode"],
            source=doc.get("source", ""),
            property_n_states=doc.get(
                "property_states",
                max((max(lbl) for lbl in dfa.labels or [(0,)]), default=0) + 1,
            ),
        )


def _check_property(prop):
    if prop.error is None:
        return
    if not prop.is_property():
        raise ModelError("expected a property automaton (accepting = all but error)")


def alternate_nfa(prop, model):
    """The state-level alternate NFA: each transition goes to every state
    reachable across a segment the symbol may stand for."""
    _check_property(prop)
    rows = []
    for q in range(prop.n_states):
        row = []
        for symbol in model.gamma:
            targets = inverse_reach(model, prop, q, symbol)
            if not targets:
                raise ModelError(
                    f"inverse of {symbol!r} reaches no state from state {q}"
                )
            row.append(frozenset(targets))
        rows.append(tuple(row))
    accepting = frozenset(range(prop.n_states)) - (
        frozenset() if prop.error is None else {prop.error}
    )
    return Nfa(
        alphabet=tuple(model.gamma),
        delta=tuple(rows),
        initial=prop.initial,
        accepting=accepting,
        error=prop.error,
    )


def synthesize_optimal(prop, model, cap=DEFAULT_SUBSET_CAP):
    """Optimal complete alternate monitor: rejects a lossy string exactly
    when every completion violates the property."""
    nfa = alternate_nfa(prop, model)
    subset = determinize(nfa, cap=cap)
    minimized, _classes = minimize(subset)
    return AlternateMonitor(
        dfa=minimized,
        subset_dfa=subset,
        nfa=nfa,
        mode=COMPLETE,
        source=model.name,
        property_n_states=prop.n_states,
    )


def monitor_from_nfa_property(nfa, cap=DEFAULT_SUBSET_CAP):
    """Wrap a nondeterministic property as a complete monitor over its own
    alphabet (the nondeterminism itself encodes the uncertainty)."""
    if nfa.error is None:
        raise ModelError("an NFA property needs a designated error trap")
    subset = determinize(nfa, cap=cap)
    minimized, _classes = minimize(subset)
    return AlternateMonitor(
        dfa=minimized,
        subset_dfa=subset,
        nfa=nfa,
        mode=COMPLETE,
        source="nfa_property",
        property_n_states=nfa.n_states,
    )


def synthesize_sound(prop, model, cap=DEFAULT_SUBSET_CAP):
    """Sound alternate monitor: rejects as soon as some completion
    violates.  Built by the subset construction with any error-containing
    successor collapsed to {error}."""
    nfa = alternate_nfa(prop, model)
    err = prop.error
    if err is None:
        # nothing ever violates; the sound monitor is the complete one
        return synthesize_optimal(prop, model, cap=cap)
    start = label({nfa.initial})
    if err in start:
        start = (err,)
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
            succ = (err,) if err in targets else label(targets)
            if succ not in index:
                if len(index) >= cap:
                    raise StateExplosionError(
                        f"subset construction exceeded cap of {cap} states"
                    )
                index[succ] = len(order)
                order.append(succ)
            row.append(index[succ])
        rows.append(tuple(row))
    accepting = frozenset(i for i, lbl in enumerate(order) if lbl != (err,))
    subset = Dfa(
        alphabet=nfa.alphabet,
        delta=tuple(rows),
        initial=0,
        accepting=accepting,
        error=index.get((err,)),
        labels=tuple(order),
    )
    minimized, _classes = minimize(subset)
    return AlternateMonitor(
        dfa=minimized,
        subset_dfa=subset,
        nfa=nfa,
        mode=SOUND,
        source=model.name,
        property_n_states=prop.n_states,
    )


def monitorable(monitor):
    """True when the rejecting state is reachable from the initial state."""
    dfa = monitor.dfa
    if dfa.error is None:
        return False
    return dfa.error in reachable_states(dfa)


def _min_superset(target, keep_sorted):
    """Minimal-cardinality kept superset of ``target``; ties broken by the
    lexicographically smallest sorted label."""
    target_set = set(target)
    for candidate in keep_sorted:
        if target_set <= set(candidate):
            return candidate
    return None


def approximate(monitor, keep):
    """Shrink a complete monitor to the given subset labels.

    Every transition whose exact successor is not kept is redirected to the
    minimal-cardinality kept superset (ties: lexicographically smallest);
    the initial state is the minimal kept superset of the exact initial
    label.  The result accepts a superset of the original language and stays
    complete.  ``keep`` must contain the full state set as a guaranteed
    redirect target and a superset of the initial label.
    """
    if monitor.mode != COMPLETE:
        raise ModelError("only complete monitors can be approximated")
    if monitor.nfa is None:
        raise ModelError("monitor lacks its alternate NFA (loaded from JSON?)")
    nfa = monitor.nfa
    full = tuple(range(monitor.property_n_states))
    keep = sorted({label(lbl) for lbl in keep}, key=lambda l: (len(l), l))
    for lbl in keep:
        if not lbl or not set(lbl) <= set(full):
            raise ModelError(f"keep label {lbl} is not a valid state subset")
    if full not in keep:
        raise ModelError("keep must contain the full state set")
    initial_label = monitor.subset_dfa.labels[monitor.subset_dfa.initial]
    initial = _min_superset(initial_label, keep)
    if initial is None:
        raise ModelError("keep contains no superset of the initial label")

    err = nfa.error
    index = {initial: 0}
    order = [initial]
    rows = []
    i = 0
    while i < len(order):
        current = order[i]
        i += 1
        row = []
        for sym in range(len(nfa.alphabet)):
            exact = set()
            for q in current:
                exact |= nfa.delta[q][sym]
            succ = _min_superset(label(exact), keep)
            if succ is None:
                raise ModelError("keep contains no superset of a successor")
            if succ not in index:
                index[succ] = len(order)
                order.append(succ)
            row.append(index[succ])
        rows.append(tuple(row))
    accepting = frozenset(
        i for i, lbl in enumerate(order) if set(lbl) & nfa.accepting
    )
    error_state = None
    if err is not None:
        error_state = index.get((err,))
    subset = Dfa(
        alphabet=nfa.alphabet,
        delta=tuple(rows),
        initial=0,
        accepting=accepting,
        error=error_state,
        labels=tuple(order),
    )
    minimized, _classes = minimize(subset)
    return AlternateMonitor(
        dfa=minimized,
        subset_dfa=subset,
        nfa=nfa,
        mode=COMPLETE,
        source=monitor.source + f" approx({len(keep)})",
        property_n_states=monitor.property_n_states,
    )


def default_keep_heuristic(monitor, budget):
    """Keep the initial label, the {error} label, and the full state set;
    then fill the budget with the smallest labels in reachability order."""
    if budget < 2:
        raise ModelError("budget must be at least 2")
    subset = monitor.subset_dfa
    full = tuple(range(monitor.property_n_states))
    initial_label = subset.labels[subset.initial]
    mandatory = [initial_label]
    err_label = None
    if subset.error is not None:
        err_label = subset.labels[subset.error]
        if err_label not in mandatory:
            mandatory.append(err_label)
    if full not in mandatory:
        mandatory.append(full)
    if budget < len(mandatory):
        raise ModelError(
            f"budget {budget} cannot cover the {len(mandatory)} mandatory labels"
        )
    keep = list(mandatory)
    rank = {}
    for i, q in enumerate(reachable_states(subset)):
        rank.setdefault(subset.labels[q], i)
    candidates = sorted(
        (lbl for lbl in rank if lbl not in set(keep)),
        key=lambda lbl: (len(lbl), rank[lbl]),
    )
    for lbl in candidates:
        if len(keep) >= budget:
            break
        keep.append(lbl)
    return keep

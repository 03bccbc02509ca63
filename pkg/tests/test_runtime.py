import random

import pytest

from lossymon.errors import UnknownSymbolError
from lossymon.injector import LossConfig, inject_dropped_count, substream
from lossymon.lossmodel import dropped_count
from lossymon.runtime import MonitorSession, Verdict, run
from lossymon.specio import safe_iter_dfa
from lossymon.synthesis import synthesize_optimal

SIGMA = ("c", "n", "u")


def test_primary_violation_index():
    prop = safe_iter_dfa()
    trace = tuple("cnnunnun")
    result = run(prop, trace)
    assert result.verdict is Verdict.FALSE
    assert result.state == prop.error
    # cross-check the index against plain stepping: the first read after an
    # update (the 5th symbol) trips the trap
    state = prop.initial
    for i, symbol in enumerate(trace, start=1):
        state = prop.step(state, symbol)
        if state == prop.error:
            break
    assert result.first_violation == i == 5


def test_alternate_worked_rows():
    monitor = synthesize_optimal(safe_iter_dfa(), dropped_count(SIGMA, 2))
    res = run(monitor, tuple("2nun2n"))
    assert res.verdict is Verdict.FALSE and res.label == (3,)
    res = run(monitor, tuple("2n2"))
    assert res.verdict is Verdict.INCONCLUSIVE and res.label == (1, 2, 3)
    res = run(monitor, tuple("c2uu"))
    assert res.verdict is Verdict.INCONCLUSIVE and res.label == (2, 3)
    res = run(monitor, tuple("cnnu1"))
    assert res.verdict is Verdict.INCONCLUSIVE and res.label == (2, 3)


def test_step_matches_run_exactly():
    rng = random.Random(8)
    prop = safe_iter_dfa()
    monitor = synthesize_optimal(prop, dropped_count(SIGMA, 2))
    for target in (prop, monitor):
        for _ in range(50):
            stream = [rng.choice(("c", "n", "u", "1", "2")) for _ in range(rng.randint(0, 12))]
            if target is prop:
                stream = [s for s in stream if s in SIGMA]
            session = MonitorSession(target)
            final_verdict = session.verdict
            for symbol in stream:
                final_verdict = session.step(symbol)
            result = run(target, stream)
            assert result.state == session.current
            assert result.verdict is final_verdict
            assert result.events == session.events_processed


def test_empty_stream():
    prop = safe_iter_dfa()
    result = run(prop, ())
    assert result.state == prop.initial
    assert result.verdict is Verdict.INCONCLUSIVE
    assert result.first_violation is None


def test_verdict_monotonicity():
    rng = random.Random(55)
    monitor = synthesize_optimal(safe_iter_dfa(), dropped_count(SIGMA, 2))
    ranks = {Verdict.INCONCLUSIVE: 0, Verdict.TRUE: 1, Verdict.FALSE: 1}
    for _ in range(100):
        session = MonitorSession(monitor)
        settled = None
        for _ in range(rng.randint(1, 15)):
            verdict = session.step(rng.choice(monitor.gamma))
            if settled is not None:
                assert verdict is settled
            elif ranks[verdict]:
                settled = verdict


def test_true_verdict_on_unmonitorable_monitor():
    from lossymon.automata import Dfa
    from lossymon.lossmodel import lossless

    never = Dfa(
        alphabet=("a",), delta=((0,),), initial=0, accepting=frozenset({0}), error=None
    )
    monitor = synthesize_optimal(never, lossless(("a",)))
    session = MonitorSession(monitor)
    assert session.verdict is Verdict.TRUE
    assert session.step("a") is Verdict.TRUE


def test_unknown_symbol_is_an_error_not_a_skip():
    prop = safe_iter_dfa()
    session = MonitorSession(prop)
    session.step("c")
    with pytest.raises(UnknownSymbolError):
        session.step("x")
    # the session is poisoned afterwards
    with pytest.raises(UnknownSymbolError):
        session.step("c")
    with pytest.raises(UnknownSymbolError):
        run(prop, ("c", "x"))


def test_events_processed_counts_every_step():
    prop = safe_iter_dfa()
    session = MonitorSession(prop)
    for i, symbol in enumerate(tuple("cnnu"), start=1):
        session.step(symbol)
        assert session.events_processed == i


def test_lockstep_superposition_with_injector():
    # at every lossy-symbol boundary the primary's state is inside the
    # alternate monitor's label
    prop = safe_iter_dfa()
    monitor = synthesize_optimal(prop, dropped_count(SIGMA, 5))
    cfg = LossConfig(rho=0.5, eta=2.0, bound_n=5, seed=21)
    for index in range(150):
        rng = substream(21, index)
        trace = ("c",) + tuple(
            ("n", "u")[int(rng.random() * 2)] for _ in range(int(rng.random() * 10))
        )
        injection = inject_dropped_count(trace, 1, cfg, rng)
        session = MonitorSession(monitor)
        for symbol, boundary in zip(injection.lossy, injection.boundaries):
            session.step(symbol)
            primary_state = prop.run(trace[:boundary])
            assert primary_state in session.label

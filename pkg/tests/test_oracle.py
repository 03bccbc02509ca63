import itertools

import pytest

from lossymon.errors import CapExceededError, ModelError
from lossymon.lossmodel import dropped_count, loop_summary, lossless, silent_drop
from lossymon.oracle import (
    Classification,
    check_monitor_against_oracle,
    classify,
    completion_reach,
    completions,
    segmentation_images,
)
from lossymon.specio import (
    approx_demo_nfa,
    loop_skip_dfa,
    loop_skip_region_map,
    safe_iter_dfa,
)
from lossymon.synthesis import synthesize_optimal, synthesize_sound

from helpers import all_words

SIGMA = ("c", "n", "u")


def test_completions_of_worked_example():
    model = dropped_count(SIGMA, 2)
    got = completions(model, tuple("c2uu"))
    assert len(got) == 9
    assert got == {
        ("c",) + mid + ("u", "u") for mid in itertools.product(SIGMA, repeat=2)
    }


def test_completions_of_empty_string():
    model = dropped_count(SIGMA, 2)
    assert completions(model, ()) == {()}


def test_all_completions_violate():
    prop = safe_iter_dfa()
    model = dropped_count(SIGMA, 2)
    got = completions(model, tuple("2nun2n"))
    assert len(got) == 81
    assert all(prop.run(x) == prop.error for x in got)


def test_classify_worked_examples():
    prop = safe_iter_dfa()
    model = dropped_count(SIGMA, 2)
    assert classify(prop, model, tuple("2nun2n")) is Classification.ALL_VIOLATE
    assert classify(prop, model, tuple("c2uu")) is Classification.MIXED
    # cnnuu is non-violating, cunuu violating: both complete c2uu
    assert prop.run(tuple("cnnuu")) != prop.error
    assert prop.run(tuple("cunuu")) == prop.error


def test_classify_lossless_mirrors_the_property():
    prop = safe_iter_dfa()
    model = lossless(SIGMA)
    for word in all_words(SIGMA, 4):
        expected = (
            Classification.ALL_VIOLATE
            if prop.run(word) == prop.error
            else Classification.NONE_VIOLATE
        )
        assert classify(prop, model, word) is expected


def test_classify_is_isomorphism_invariant():
    prop = safe_iter_dfa()
    # rename states by a fixed permutation
    perm = {0: 2, 1: 0, 2: 3, 3: 1}
    from lossymon.automata import Dfa

    rows = [None] * prop.n_states
    for q in range(prop.n_states):
        rows[perm[q]] = tuple(perm[t] for t in prop.delta[q])
    renamed = Dfa(
        alphabet=prop.alphabet,
        delta=tuple(rows),
        initial=perm[prop.initial],
        accepting=frozenset(perm[q] for q in prop.accepting),
        error=perm[prop.error],
    )
    model = dropped_count(SIGMA, 2)
    for word in all_words(model.gamma, 2):
        assert classify(prop, model, word) is classify(renamed, model, word)


def test_completion_cap_is_hard():
    model = dropped_count(SIGMA, 3)
    with pytest.raises(CapExceededError):
        completions(model, ("3",) * 4, cap=1000)


def test_classify_streams_past_the_materialization_cap():
    # classification must not materialize; this set has 27^4 completions
    prop = safe_iter_dfa()
    model = dropped_count(SIGMA, 3)
    assert classify(prop, model, ("3",) * 4) is Classification.MIXED


def test_classify_agrees_with_string_level_reference():
    from lossymon.oracle import classify_strings

    prop = safe_iter_dfa()
    for model in (
        dropped_count(SIGMA, 2),
        silent_drop(SIGMA, {"n"}),
        silent_drop(SIGMA, {"n", "u"}),
    ):
        for k in range(4):
            for y in itertools.product(model.gamma, repeat=k):
                assert classify(prop, model, y) is classify_strings(prop, model, y), y


def test_statemap_factors_are_rejected():
    prop = loop_skip_dfa()
    model = loop_summary(prop, "k", loop_skip_region_map())
    with pytest.raises(ModelError):
        completions(model, ("k",))
    monitor = synthesize_optimal(prop, model)
    with pytest.raises(ModelError):
        check_monitor_against_oracle(prop, model, monitor, 1)


def test_completion_reach_on_the_ambiguous_row():
    prop = safe_iter_dfa()
    model = dropped_count(SIGMA, 2)
    assert completion_reach(prop, model, tuple("cn2nn2")) == frozenset({1, 2, 3})


def test_factor_concatenation_matches_filter_enumeration():
    # cross-check the completion set against direct enumeration of every
    # (segmentation, replacement) choice, for all lossy strings up to
    # length 3 over a small model
    model = dropped_count(("n", "u"), 2)
    max_x = 6  # 2 symbols per factor x 3 factors
    brute = {}
    for x in all_words(("n", "u"), max_x):
        for y in segmentation_images(model, x):
            brute.setdefault(y, set()).add(x)
    for k in range(4):
        for y in itertools.product(model.gamma, repeat=k):
            expected = brute.get(y, set())
            got = {x for x in completions(model, y) if len(x) <= max_x}
            assert got == expected, y


def test_check_monitor_small_matrix():
    prop = safe_iter_dfa()
    model = dropped_count(SIGMA, 2)
    complete = synthesize_optimal(prop, model)
    sound = synthesize_sound(prop, model)
    assert check_monitor_against_oracle(prop, model, complete, 3).ok
    assert check_monitor_against_oracle(prop, model, sound, 3).ok


def test_check_monitor_flags_a_wrong_monitor():
    # the sound monitor judged by the completeness rule must produce
    # counterexamples (it rejects mixed strings)
    prop = safe_iter_dfa()
    model = dropped_count(SIGMA, 2)
    sound = synthesize_sound(prop, model)
    sound.mode = "complete"
    report = check_monitor_against_oracle(prop, model, sound, 3)
    assert not report.ok
    assert any("FAIL" in line for line in report.lines())


def test_never_rejecting_property_agrees_with_oracle():
    from lossymon.automata import Dfa

    # one accepting state looping on itself: nothing ever violates
    trivial = Dfa(
        alphabet=("a",),
        delta=((0,),),
        initial=0,
        accepting=frozenset({0}),
        error=None,
    )
    model = lossless(("a",))
    monitor = synthesize_optimal(trivial, model)
    report = check_monitor_against_oracle(trivial, model, monitor, 4)
    assert report.ok


def test_identity_loss_on_nondeterministic_demo():
    from lossymon.automata import determinize, minimize

    prop, _ = minimize(determinize(approx_demo_nfa()))
    model = lossless(prop.alphabet)
    monitor = synthesize_optimal(prop, model)
    report = check_monitor_against_oracle(prop, model, monitor, 4)
    assert report.ok
    from lossymon.runtime import Verdict, run

    assert run(monitor, tuple("bcb")).verdict is Verdict.FALSE

import random

import pytest
from hypothesis import given, strategies as st

from overtake import busy_beaver as bb
from overtake.codec import word_of_index
from overtake.errors import Refusal, StateLimitExceeded
from overtake.factory import (QuasiTrivialSpec, Registry, make_O, make_Oprime, register_family,
                              standard_registry)
from overtake.growth import lookup_function
from overtake.machine import run


def brute(machine, word="", steps=3000):
    """Plain simulator: (halted, ones, steps)."""
    tape = {i: int(c) for i, c in enumerate(word)}
    p, q = 0, 1
    for t in range(1, steps + 1):
        w, m, q = machine.entries[2 * (q - 1) + tape.get(p, 0)]
        tape[p] = w
        p += m
        if q == 0:
            return True, sum(tape.values()), t
    return False, None, steps


def test_text_round_trip_and_adapter():
    m = bb.RadoMachine(2, ((1, 1, 2), (1, -1, 2), (1, -1, 1), (1, 1, 0)))
    assert bb.RadoMachine.from_text(m.text) == m
    halted, ones, steps = brute(m)
    out = run(m.to_table(), "", 100)
    assert halted and ones == 4 and out.steps_used == steps == 6


def test_bad_machines_rejected():
    with pytest.raises(ValueError):
        bb.RadoMachine(1, ((1, 1, 0),))
    with pytest.raises(ValueError):
        bb.RadoMachine(1, ((1, 0, 0), (1, 1, 0)))


def test_enumeration_counts():
    assert len(list(bb.enumerate_rado(1, pruned=False))) == (2 * 2 * 2) ** 2 == 64
    pruned = list(bb.enumerate_rado(1))
    assert 0 < len(pruned) < 64
    two = list(bb.enumerate_rado(2, pruned=False))
    assert len(two) == len(set(two)) == 12 ** 4
    assert len(set(bb.enumerate_rado(2))) == len(list(bb.enumerate_rado(2)))


def test_state_limit():
    with pytest.raises(StateLimitExceeded):
        bb.sigma(5)
    with pytest.raises(StateLimitExceeded):
        bb.sigma(3, max_states=2)


@pytest.mark.parametrize("n,cutoff,want", [(0, 10, 0), (1, 10, 1), (2, 30, 4)])
def test_small_sigma(n, cutoff, want):
    r = bb.sigma(n, cutoff)
    assert (r.value, r.exact, r.unresolved_count) == (want, True, 0)
    assert bb.sigma(n, cutoff, pruned=False).value == want
    if n:
        halted, ones, _ = brute(r.witness)
        assert halted and ones == want


def test_sigma_brute_force_n2():
    """Unpruned oracle: every 2-state machine run plainly for 1000 steps."""
    best = max(ones for m in bb.enumerate_rado(2, pruned=False)
               for halted, ones, _ in [brute(m, steps=1000)] if halted)
    assert best == bb.sigma(2, 30).value == 4


def test_sigma_three():
    r = bb.sigma(3, 50)
    assert (r.value, r.exact) == (6, True)
    halted, ones, steps = brute(r.witness)
    assert halted and ones == 6 and steps <= 50
    assert bb.sigma(3, 100).value == 6


def test_deciders_are_sound_on_all_two_state_machines():
    for m in bb.enumerate_rado(2, pruned=False):
        tr = bb.score(m, "", cutoff=30)
        halted, ones, steps = brute(m, steps=2000)
        if tr.status == bb.CYCLES:
            assert not halted, m.text
        elif tr.status == bb.HALTS:
            assert halted and ones == tr.ones and steps == tr.steps


def test_deciders_are_sound_on_sampled_three_state_leaves():
    rng = random.Random(3)
    leaves = list(bb.enumerate_rado(3))
    for m in rng.sample(leaves, 400):
        tr = bb.score(m, "", cutoff=50)
        halted, ones, _ = brute(m, steps=3000)
        if tr.status == bb.CYCLES:
            assert not halted, m.text
        else:
            assert tr.status == bb.HALTS and halted and ones == tr.ones


def test_counter_needs_the_static_checks():
    # a binary counter on odd cells; C never reads a 1
    delta = {(1, 0): (0, 1, 2), (1, 1): (0, -1, 1), (2, 0): (1, -1, 1), (2, 1): (1, 1, 3),
             (3, 0): (1, 1, 2)}
    assert not bb.ngram_closed(delta, "", 3)
    assert bb.ngram_closed(delta, "", 1, history=2)
    assert bb.never_halts(delta, 1, "")


def test_shards_merge_to_the_same_result():
    base = bb.sigma(2, 30).to_json()
    for shards in (2, 3, 8):
        assert bb.sigma(2, 30, shards=shards).to_json() == base
    assert bb.tree_search(2, "", 30, shards=4, jobs=2).to_json() == base


def test_states_of_index():
    assert bb.states_of_index(0) == 0
    assert bb.states_of_index(30) == 0 and bb.states_of_index(31) == 1
    assert bb.states_of_index(2 ** 49 - 2) == 1 and bb.states_of_index(2 ** 49 - 1) == 2
    vals = [bb.states_of_index(2 ** i) for i in range(0, 400, 8)]
    assert all(a <= b for a, b in zip(vals, vals[1:]))
    assert vals[-1] > vals[10] > vals[0]


@given(st.integers(0, 10 ** 6), st.integers(0, 10 ** 6))
def test_states_of_index_monotone(a, b):
    lo, hi = sorted((a, b))
    assert bb.states_of_index(lo) <= bb.states_of_index(hi)


def test_states_of_index_monotone_on_a_range():
    prev = 0
    for m in range(0, 10 ** 6, 97):
        cur = bb.states_of_index(m)
        assert cur >= prev
        prev = cur


def test_b_of_index():
    assert bb.b_of_index(0).value == 0
    assert bb.b_of_index(31).value == bb.b_of_index(1000).value == 1
    assert bb.b_of_index(2 ** 49).value == 4


def test_b_prime_uncertified_equals_b():
    reg = standard_registry()
    for m in (0, 7, 31, 2 ** 49 + 5):
        assert bb.b_prime(m, reg).value == bb.b_of_index(m).value


def test_b_prime_on_registered_O_indices():
    reg = Registry()
    o, op = reg.register(make_O()), reg.register(make_Oprime())
    assert bb.b_prime(o, reg).value == bb.b_of_index(o).value == 0
    assert bb.b_prime(op, reg).value == bb.b_of_index(op).value == 1


def test_b_prime_counts_input_ones():
    reg = standard_registry()
    fam = [cm for _, cm in reg if cm.spec]
    r = bb.b_prime(fam[0].ell_index, reg)  # inputs 0..9, one state
    assert r.exact and r.value >= bb.b_of_index(fam[0].ell_index).value
    # oracle: every 1-state machine on every input word, run plainly
    best = 0
    for x in range(10):
        for m in bb.enumerate_rado(1, pruned=False):
            halted, ones, _ = brute(m, word_of_index(x), steps=200)
            if halted:
                best = max(best, ones)
    assert r.value == best


def test_b_prime_input_budget():
    reg = standard_registry()
    fam = [cm for _, cm in reg if cm.spec]
    with pytest.raises(Refusal):
        bb.b_prime(fam[4].ell_index, reg, input_budget=100)


def test_report_rows():
    reg = Registry()
    zero = lookup_function("zero")
    fam = register_family([QuasiTrivialSpec(zero, lookup_function("pow4_succ"), n)
                           for n in range(3)], reg)
    idx = [cm.ell_index for cm in fam] + [7]
    rows = bb.bprime_vs_g_report(idx, reg)
    assert [r.g for r in rows] == [1, 1, 1, 0]
    assert all(r.holds for r in rows)
    assert rows == bb.bprime_vs_g_report(idx, reg)


def test_report_records_refusals():
    rows = bb.bprime_vs_g_report([2 ** 2000], standard_registry())
    assert rows[0].refusal.startswith("state_limit")

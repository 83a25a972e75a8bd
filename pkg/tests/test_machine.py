import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from overtake.machine import (
    BUDGET_EXHAUSTED, EMPTY_TABLE, HALTED, LOOP_DETECTED, Instruction, MachineTable,
    TableError, ensure_valid, format_table, parse_table, permute, read_output, run, tabulate,
    validate,
)

words = st.text(alphabet="01", max_size=10)


@st.composite
def tables(draw, max_states=5):
    n = draw(st.integers(2, max_states))
    lines = []
    for q in range(1, n):
        for s in "01_":
            if draw(st.booleans()):
                lines.append(Instruction(q, s, draw(st.sampled_from("01_")),
                                         draw(st.sampled_from("LRS")), draw(st.integers(0, n - 1))))
    return MachineTable(n, tuple(lines))


def brute_run(table, word, budget):
    """Dictionary-tape oracle, written without the simulator's helpers."""
    tape = dict(enumerate(word))
    head, state, steps = 0, 1, 0
    if table.n_states == 0:
        return word, 0
    delta = {(i.state, i.scanned): i for i in table.lines}
    while state != 0:
        if steps == budget:
            return None, steps
        sym = tape.get(head, "_")
        ins = delta.get((state, sym))
        if ins is None:
            write, move, state = sym, "S", 0
        else:
            write, move, state = ins.write, ins.move, ins.next
        if write == "_":
            tape.pop(head, None)
        else:
            tape[head] = write
        head += {"L": -1, "R": 1, "S": 0}[move]
        steps += 1
    if head not in tape:
        return "", steps
    lo = hi = head
    while lo - 1 in tape:
        lo -= 1
    while hi + 1 in tape:
        hi += 1
    return "".join(tape[i] for i in range(lo, hi + 1)), steps


def test_empty_table_is_identity():
    for k in range(9):
        for bits in itertools.product("01", repeat=k):
            w = "".join(bits)
            out = run(EMPTY_TABLE, w, 0)
            assert (out.status, out.output, out.steps_used, out.op_time) == (HALTED, w, 0, len(w))


def test_missing_line_halts_in_one_step():
    t = MachineTable(2, (Instruction(1, "0", "1", "R", 1),))
    out = run(t, "001", 100)
    # two 0s rewritten, then s1 meets '1' with no line
    assert (out.output, out.steps_used, out.op_time) == ("111", 3, 6)


def test_budget_and_loop():
    spin = MachineTable(2, (Instruction(1, "_", "_", "S", 1),))
    assert run(spin, "", 50).status == LOOP_DETECTED
    assert run(spin, "", 50, loop_window=0).status == BUDGET_EXHAUSTED
    walker = MachineTable(2, tuple(Instruction(1, s, s, "R", 1) for s in "01_"))
    out = run(walker, "0", 40)
    assert out.status == BUDGET_EXHAUSTED and out.steps_used == 40 and out.output is None


def test_validate_messages():
    bad = MachineTable(2, (Instruction(1, "0", "1", "R", 3), Instruction(1, "0", "0", "L", 0)))
    problems = " | ".join(validate(bad))
    assert "dangling state 3" in problems
    assert "nondeterministic pair (1, '0')" in problems
    with pytest.raises(TableError):
        ensure_valid(bad)
    with pytest.raises(TableError):
        run(bad, "0", 10)


def test_read_output_block():
    tape = {-2: "1", -1: "0", 0: "1", 2: "1"}
    assert read_output(tape, 0) == "101"
    assert read_output(tape, 1) == ""
    assert read_output(tape, 2) == "1"


def test_parse_accepts_comments_and_infers_states():
    t = parse_table("# adds a one\n1 _ -> 1 S 0   # halt\n1 0 -> 0 R 1\n1 1 -> 1 R 1\n")
    assert t.n_states == 2
    assert run(t, "010", 10).output == "0101"


@given(tables(), words)
@settings(max_examples=150, deadline=None)
def test_run_matches_dictionary_oracle(t, w):
    out = run(t, w, 300, loop_window=0)
    want, steps = brute_run(t, w, 300)
    if want is None:
        assert out.status == BUDGET_EXHAUSTED
    else:
        assert (out.output, out.steps_used) == (want, steps)
        assert out.op_time - out.steps_used == len(w)


@given(tables(), st.randoms(use_true_random=False), words)
@settings(max_examples=100, deadline=None)
def test_permutation_invariance(t, rnd, w):
    perm = list(range(len(t.lines)))
    rnd.shuffle(perm)
    assert run(permute(t, perm), w, 200) == run(t, w, 200)


def test_permute_rejects_non_bijection():
    t = MachineTable(2, (Instruction(1, "0", "0", "S", 0), Instruction(1, "1", "1", "S", 0)))
    with pytest.raises(TableError):
        permute(t, [0, 0])


@given(tables())
def test_text_round_trip(t):
    assert parse_table(format_table(t)) == t


def test_tabulate_agrees_with_mapping():
    rng = random.Random(7)
    mapping = {}
    for k in range(4):
        for bits in itertools.product("01", repeat=k):
            mapping["".join(bits)] = "".join(rng.choice("01") for _ in range(rng.randrange(5)))
    t = tabulate(mapping, 3, default="1")
    for w, out in list(mapping.items()) + [("0110", "1"), ("11111", "1")]:
        r = run(t, w, 100)
        assert r.output == out
        assert r.steps_used == len(w) + max(1, len(out))


def test_tabulate_none_default_diverges():
    t = tabulate({"": "1", "0": "0"}, 1, default=None)
    assert run(t, "0", 50).output == "0"
    assert not run(t, "1", 50).halted
    assert not run(t, "01", 50).halted

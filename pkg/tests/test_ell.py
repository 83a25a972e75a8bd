import itertools

from hypothesis import given, settings, strategies as st

from overtake.codec import index_of_word, word_of_index
from overtake.ell import (
    EllMachine, compose, copy_parameter_table, emulate_ell, format_table2, identity_table, lift,
    make_constant, pairing, pairing_machine, parse_table2, run_ell, unpair, unpair_machine,
)
from overtake.machine import EMPTY_TABLE, run

from test_machine import tables


def diagonal_listing(limit):
    """Cantor order by walking anti-diagonals: (0,0), (1,0), (0,1), (2,0), ..."""
    out = []
    s = 0
    while len(out) < limit:
        for x in range(s + 1):
            out.append((s - x, x))
        s += 1
    return out[:limit]


def test_pairing_matches_diagonal_walk():
    for z, (n, x) in enumerate(diagonal_listing(2000)):
        assert pairing(n, x) == z
        assert unpair(z) == (n, x)


@given(st.integers(0, 10**30), st.integers(0, 10**30))
def test_unpair_inverts_pairing(n, x):
    assert unpair(pairing(n, x)) == (n, x)


def test_copy_parameter_outputs_label():
    t = copy_parameter_table()
    for n in range(12):
        for x in ("", "1", "0110"):
            out = run_ell(EllMachine(n, t), x, 500)
            assert out.output == word_of_index(n)


def test_two_tape_text_round_trip():
    t = copy_parameter_table()
    assert parse_table2(format_table2(t)) == t


@given(tables(), st.text(alphabet="01", max_size=6), st.integers(0, 50))
@settings(max_examples=60, deadline=None)
def test_lift_runs_like_the_base(t, w, n):
    a = run(t, w, 150)
    b = run_ell(EllMachine(n, lift(t)), w, 150)
    assert (a.status, a.output, a.steps_used) == (b.status, b.output, b.steps_used)


def test_constant_and_identity_tables():
    for k in range(10):
        t = make_constant(k)
        for x in ("", "0", "101"):
            out = run(t, x, 100)
            assert out.output == word_of_index(k)
            assert out.steps_used == len(word_of_index(k)) + 2
    for x in ("", "1", "0010"):
        out = run(identity_table(), x, 5)
        assert (out.output, out.op_time) == (x, len(x) + 1)


def test_pairing_and_unpair_machines():
    p = pairing_machine(3, depth=4)
    for k in range(5):
        for bits in itertools.product("01", repeat=k):
            x = "".join(bits)
            assert run(p, x, 500).output == word_of_index(pairing(3, index_of_word(x)))
    assert not run(p, "00000", 500).halted
    un, ux = unpair_machine("n", 6), unpair_machine("x", 6)
    for z in range(60):
        w = word_of_index(z)
        assert run(un, w, 500).output == word_of_index(unpair(z)[0])
        assert run(ux, w, 500).output == word_of_index(unpair(z)[1])


@given(tables(max_states=4), tables(max_states=4), st.text(alphabet="01", max_size=5))
@settings(max_examples=80, deadline=None)
def test_compose_is_sequential(a, b, w):
    first = run(a, w, 60, loop_window=0)
    c = compose(a, b)
    got = run(c, w, 20000, loop_window=0)
    if not first.halted:
        return  # the composite may only run longer
    second = run(b, first.output, 60, loop_window=0)
    if second.halted:
        assert got.halted and got.output == second.output


def test_compose_with_empty_first_stage():
    t = make_constant(5)
    assert compose(EMPTY_TABLE, t) is t


def test_emulation_sees_label_and_argument():
    for n in range(4):
        en = emulate_ell(unpair_machine("n", 7), n)
        ex = emulate_ell(unpair_machine("x", 7), n)
        label = run_ell(EllMachine(n, copy_parameter_table()), "", 500).output
        for x in range(6):
            w = word_of_index(x)
            assert run(en, w, 10**5).output == label == word_of_index(n)
            assert run(ex, w, 10**5).output == w

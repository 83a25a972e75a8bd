"""Labeled (two-tape) machines and their emulation by ordinary tables.

A labeled machine <n, M> runs M with the input on tape 1 and the canonical
word of ``n`` on tape 2.  :func:`emulate_ell` realizes the same behaviour with
a single tape by composing a pairing machine for ``x -> pair(n, x)`` with a
table that unpairs its input.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from math import isqrt

from .codec import index_of_word, table_index, word_of_index
from .machine import (
    BLANK, BUDGET_EXHAUSTED, DEFAULT_LOOP_WINDOW, HALT, HALTED, LOOP_DETECTED,
    SYMBOLS, MachineTable, RunOutcome, TableBuilder, TableError, Word, check_word,
    ensure_valid, read_output, tabulate,
)

_DELTA = {"L": -1, "R": 1, "S": 0}


def pairing(n: int, x: int) -> int:
    """Cantor pairing ``(n + x)(n + x + 1)/2 + x``."""
    s = n + x
    return s * (s + 1) // 2 + x


def unpair(z: int) -> tuple[int, int]:
    s = (isqrt(8 * z + 1) - 1) // 2
    x = z - s * (s + 1) // 2
    return s - x, x


# -- two-tape tables ---------------------------------------------------------

@dataclass(frozen=True)
class Instruction2:
    state: int
    scanned: tuple[str, str]
    write: tuple[str, str]
    move: tuple[str, str]
    next: int

    def __str__(self) -> str:
        return (f"{self.state} {self.scanned[0]} {self.scanned[1]} -> "
                f"{self.write[0]} {self.write[1]} {self.move[0]} {self.move[1]} {self.next}")


@dataclass(frozen=True)
class MachineTable2:
    n_states: int
    lines: tuple[Instruction2, ...] = ()

    @cached_property
    def delta(self):
        return {(i.state, i.scanned): (i.write, i.move, i.next) for i in self.lines}


def validate2(table: MachineTable2) -> list[str]:
    problems = []
    seen = set()
    top = max(table.n_states, 1)
    if table.n_states == 0 and table.lines:
        problems.append("zero-state table must be empty")
    for ins in table.lines:
        if not all(s in SYMBOLS for s in ins.scanned + ins.write):
            problems.append(f"bad symbol in line '{ins}'")
        if not all(m in _DELTA for m in ins.move):
            problems.append(f"bad move in line '{ins}'")
        if not 1 <= ins.state < top or not 0 <= ins.next < top:
            problems.append(f"dangling state in line '{ins}'")
        key = (ins.state, ins.scanned)
        if key in seen:
            problems.append(f"nondeterministic pair {key}")
        seen.add(key)
    return problems


def lift(table: MachineTable) -> MachineTable2:
    """The two-tape table that runs ``table`` on tape 1 and never touches tape 2."""
    lines = tuple(
        Instruction2(i.state, (i.scanned, t2), (i.write, t2), (i.move, "S"), i.next)
        for i in table.lines for t2 in SYMBOLS
    )
    return MachineTable2(table.n_states, lines)


def format_table2(table: MachineTable2) -> str:
    return "\n".join([f"states {table.n_states}"] + [str(i) for i in table.lines]) + "\n"


def parse_table2(text: str) -> MachineTable2:
    n_states = None
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        p = line.split()
        if p[0] == "states" and len(p) == 2:
            n_states = int(p[1])
            continue
        if len(p) != 9 or p[3] != "->":
            raise TableError(f"cannot parse line {raw!r}")
        lines.append(Instruction2(int(p[0]), (p[1], p[2]), (p[4], p[5]), (p[6], p[7]), int(p[8])))
    if n_states is None:
        used = [i.state for i in lines] + [i.next for i in lines]
        n_states = max(used) + 1 if used else 0
    table = MachineTable2(n_states, tuple(lines))
    problems = validate2(table)
    if problems:
        raise TableError("; ".join(problems))
    return table


@dataclass(frozen=True)
class EllMachine:
    """The pair <parameter, base>; a 1-tape base is lifted onto tape 1."""
    parameter: int
    base: MachineTable | MachineTable2

    @property
    def table2(self) -> MachineTable2:
        return lift(self.base) if isinstance(self.base, MachineTable) else self.base


def run_ell(m: EllMachine, input: Word, budget: int,
            loop_window: int = DEFAULT_LOOP_WINDOW) -> RunOutcome:
    check_word(input)
    table = m.table2
    problems = validate2(table)
    if problems:
        raise TableError("; ".join(problems))
    if table.n_states == 0:
        return RunOutcome(HALTED, 0, input, len(input))
    tapes = ({i: c for i, c in enumerate(input)},
             {i: c for i, c in enumerate(word_of_index(m.parameter))})
    heads = [0, 0]
    state, steps = 1, 0
    seen = set() if loop_window > 0 else None
    while state != 0:
        if steps >= budget:
            return RunOutcome(BUDGET_EXHAUSTED, steps)
        if seen is not None and len(seen) < loop_window:
            key = (state, tuple(heads), frozenset(tapes[0].items()), frozenset(tapes[1].items()))
            if key in seen:
                return RunOutcome(LOOP_DETECTED, steps)
            seen.add(key)
        scanned = (tapes[0].get(heads[0], BLANK), tapes[1].get(heads[1], BLANK))
        write, move, state = table.delta.get((state, scanned), (scanned, ("S", "S"), 0))
        for t in (0, 1):
            if write[t] == BLANK:
                tapes[t].pop(heads[t], None)
            else:
                tapes[t][heads[t]] = write[t]
            heads[t] += _DELTA[move[t]]
        steps += 1
    return RunOutcome(HALTED, steps, read_output(tapes[0], heads[0]), len(input) + steps)


def copy_parameter_table() -> MachineTable2:
    """Two-tape machine whose output is the parameter word on tape 2."""
    lines = []
    for a in "01":
        for b in SYMBOLS:  # erase tape-1 input
            lines.append(Instruction2(1, (a, b), (BLANK, b), ("R", "S"), 1))
    for b in "01":  # copy tape 2 onto tape 1
        lines.append(Instruction2(1, (BLANK, b), (b, b), ("R", "R"), 2))
        lines.append(Instruction2(2, (BLANK, b), (b, b), ("R", "R"), 2))
    lines.append(Instruction2(1, (BLANK, BLANK), (BLANK, BLANK), ("L", "S"), 3))
    lines.append(Instruction2(2, (BLANK, BLANK), (BLANK, BLANK), ("L", "S"), 3))
    for a in "01":  # walk back to the first copied symbol
        lines.append(Instruction2(3, (a, BLANK), (a, BLANK), ("L", "S"), 3))
    lines.append(Instruction2(3, (BLANK, BLANK), (BLANK, BLANK), ("R", "S"), 0))
    return MachineTable2(4, tuple(lines))


# -- 1-tape building blocks ----------------------------------------------------

def make_constant(n: int) -> MachineTable:
    """Table printing the canonical word of ``n`` on any input.

    The head steps two cells left of the input and writes the word
    right-to-left, so the running time is ``|x| + |word(n)| + 2``.
    """
    w = word_of_index(n)
    b = TableBuilder(start="off")
    b.keep("off", SYMBOLS, "L", "gap")
    b.keep("gap", [BLANK], "L" if w else "S", ("write", w) if w else HALT)
    prefix = w
    while prefix:
        last = len(prefix) == 1
        b.add(("write", prefix), BLANK, prefix[-1], "S" if last else "L",
              HALT if last else ("write", prefix[:-1]))
        prefix = prefix[:-1]
    return b.build()


def identity_table() -> MachineTable:
    """A one-line identity machine (the table behind the machine O)."""
    b = TableBuilder(start="stop")
    b.keep("stop", SYMBOLS, "S", HALT)
    return b.build()


def pairing_machine(n: int, depth: int = 4) -> MachineTable:
    """Lookup table for ``x -> pair(n, x)`` on inputs of length <= ``depth``;
    it runs forever on longer inputs."""
    mapping = {}
    for length in range(depth + 1):
        for v in range(1 << length):
            u = format(v, f"0{length}b") if length else ""
            mapping[u] = word_of_index(pairing(n, index_of_word(u)))
    return tabulate(mapping, depth, default=None)


def unpair_machine(component: str, depth: int = 8) -> MachineTable:
    """Lookup table that unpairs its input and echoes the parameter
    (``component='n'``) or the argument (``component='x'``)."""
    pick = {"n": 0, "x": 1}[component]
    mapping = {}
    for length in range(depth + 1):
        for v in range(1 << length):
            u = format(v, f"0{length}b") if length else ""
            mapping[u] = word_of_index(unpair(index_of_word(u))[pick])
    return tabulate(mapping, depth, default=None)


# -- sequential composition ----------------------------------------------------
#
# The first machine runs on an encoded tape: each of its cells occupies two
# cells, 0 -> "10", 1 -> "11", written blank -> "00", never visited -> "__".
# Visited pairs form an interval bounded by "__", which lets the normalizer
# find and erase all scratch content once the first machine halts.

_PAIR = {"0": "10", "1": "11", BLANK: "00"}


def _emit_encoder(b: TableBuilder, done) -> None:
    """Move the plain input into pair code to its right, leaving one blank gap."""
    b.add("E0", "0", BLANK, "R", ("Esrc", "0"))
    b.add("E0", "1", BLANK, "R", ("Esrc", "1"))
    b.add("E0", BLANK, BLANK, "R", done)
    for bit in "01":
        b.keep(("Esrc", bit), "01", "R", ("Esrc", bit))
        b.keep(("Esrc", bit), [BLANK], "R", ("Eenc", bit))
        b.keep(("Eenc", bit), "01", "R", ("Eenc", bit))
        b.add(("Eenc", bit), BLANK, _PAIR[bit][0], "R", ("Eput", bit))
        b.add(("Eput", bit), BLANK, _PAIR[bit][1], "L", "Eback")
    b.keep("Eback", "01", "L", "Eback")
    b.keep("Eback", [BLANK], "L", "Eback_src")
    b.keep("Eback_src", "01", "L", "Eback_src")
    b.keep("Eback_src", [BLANK], "R", "E0")


def _emit_simulation(b: TableBuilder, a: MachineTable, finish) -> None:
    """Run ``a`` on the pair-coded tape.  Only the reading states are emitted
    here; the write/move states they reference come from :func:`_emit_helpers`."""
    for q in range(1, max(a.n_states, 2)):
        b.keep(("R1", q), "1", "R", ("R2", q, "bit"))
        b.keep(("R1", q), "0", "R", ("R2", q, "blank"))
        cases = [(("R1", q), BLANK, BLANK, "first"),
                 (("R2", q, "bit"), "0", "0", "second"),
                 (("R2", q, "bit"), "1", "1", "second"),
                 (("R2", q, "blank"), "0", BLANK, "second")]
        for key, scanned, sym, where in cases:
            w, mv, nq = a.delta.get((q, sym), (sym, "S", 0))
            code = _PAIR[w]
            if where == "second":
                b.add(key, scanned, code[1], "L", ("W1", code[0], mv, nq))
            else:
                b.add(key, scanned, code[0], "R", ("W2", code[1], mv, nq))


def _emit_helpers(b: TableBuilder, finish) -> None:
    def target(q):
        return finish if q == 0 else ("R1", q)

    done = set()
    pending = True
    while pending:
        pending = False
        for key in list(b._ids):
            if key in done or not isinstance(key, tuple):
                continue
            kind = key[0]
            if kind == "W1":  # at first cell, write its code symbol then move a pair
                _, c0, mv, q = key
                for s in SYMBOLS:
                    if mv == "S":
                        b.add(key, s, c0, "S", target(q))
                    else:
                        b.add(key, s, c0, mv, ("step", mv, q))
            elif kind == "W2":  # at second cell
                _, c1, mv, q = key
                for s in SYMBOLS:
                    if mv == "S":
                        b.add(key, s, c1, "L", target(q))
                    elif mv == "R":
                        b.add(key, s, c1, "R", target(q))
                    else:
                        b.add(key, s, c1, "L", ("step2", "L", q))
            elif kind == "step":
                _, mv, q = key
                b.keep(key, SYMBOLS, mv, target(q))
            elif kind == "step2":
                _, mv, q = key
                b.keep(key, SYMBOLS, mv, ("step", mv, q))
            else:
                continue
            done.add(key)
            pending = True


def _emit_normalizer(b: TableBuilder, nxt) -> None:
    """From the first cell of the halting pair, leave the plain output block with
    the head on its first symbol (or on a blank for empty output) and go to ``nxt``."""
    b.add("FIN", BLANK, "0", "R", "FIN2")
    b.keep("FIN", "01", "S", "D0")
    b.add("FIN2", BLANK, "0", "L", "D0")
    b.keep("D0", "0", "S", "DE_left")
    b.keep("D0", "1", "S", "DB_left")
    # empty output: find the left end of the visited interval, erase it all
    b.keep("DE_left", "01", "L", "DE_left1")
    b.keep("DE_left1", SYMBOLS, "L", "DE_left")
    b.keep("DE_left", [BLANK], "R", "DE_skip")
    b.keep("DE_skip", [BLANK], "R", "DE_erase")
    b.add("DE_erase", "0", BLANK, "R", "DE_erase2")
    b.add("DE_erase", "1", BLANK, "R", "DE_erase2")
    for s in SYMBOLS:
        b.add("DE_erase2", s, BLANK, "R", "DE_erase")
    b.keep("DE_erase", [BLANK], "S", nxt)
    # non-empty output: walk to the block's left end
    b.keep("DB_left", "1", "L", "DB_left1")
    b.keep("DB_left1", SYMBOLS, "L", "DB_left")
    b.keep("DB_left", "0", "S", "DL_erase")
    b.keep("DB_left", [BLANK], "R", "DL_ret")
    # erase everything to the left of the block
    b.add("DL_erase", "0", BLANK, "R", "DL_e2")
    b.add("DL_erase", "1", BLANK, "R", "DL_e2")
    for s in SYMBOLS:
        b.add("DL_e2", s, BLANK, "L", "DL_e3")
    b.keep("DL_e3", SYMBOLS, "L", "DL_e4")
    b.keep("DL_e4", SYMBOLS, "L", "DL_erase")
    b.keep("DL_erase", [BLANK], "R", "DL_ret")
    b.keep("DL_ret", [BLANK], "R", "DL_ret")
    b.keep("DL_ret", "1", "S", "DR_right")
    # walk past the block, erase everything to its right
    b.keep("DR_right", "1", "R", "DR_r2")
    b.keep("DR_r2", SYMBOLS, "R", "DR_right")
    b.keep("DR_right", "0", "S", "DRE")
    b.keep("DR_right", [BLANK], "L", "DR_back")
    b.add("DRE", "0", BLANK, "R", "DRE2")
    b.add("DRE", "1", BLANK, "R", "DRE2")
    for s in SYMBOLS:
        b.add("DRE2", s, BLANK, "R", "DRE")
    b.keep("DRE", [BLANK], "L", "DR_back")
    b.keep("DR_back", [BLANK], "L", "DR_back")
    b.keep("DR_back", "01", "S", "DC_l")
    b.keep("DC_l", "01", "L", "DC_l")
    b.keep("DC_l", [BLANK], "R", "DC0")
    # decode the isolated block pair by pair into plain symbols after a gap
    b.add("DC0", "1", BLANK, "R", "DC_take")
    b.keep("DC0", [BLANK], "R", nxt)
    for bit in "01":
        b.add("DC_take", bit, BLANK, "R", ("DC_src", bit))
        b.keep(("DC_src", bit), "01", "R", ("DC_src", bit))
        b.keep(("DC_src", bit), [BLANK], "R", ("DC_out", bit))
        b.keep(("DC_out", bit), "01", "R", ("DC_out", bit))
        b.add(("DC_out", bit), BLANK, bit, "L", "DC_back")
    b.keep("DC_back", "01", "L", "DC_back")
    b.keep("DC_back", [BLANK], "L", "DC_back_src")
    b.keep("DC_back_src", "01", "L", "DC_back_src")
    b.keep("DC_back_src", [BLANK], "R", "DC0")


def _emit_copy(b: TableBuilder, t: MachineTable, tag) -> None:
    for ins in t.lines:
        nxt = HALT if ins.next == 0 else (tag, ins.next)
        b.add((tag, ins.state), ins.scanned, ins.write, ins.move, nxt)


def compose(first: MachineTable, second: MachineTable) -> MachineTable:
    """Table that runs ``first``, cleans the tape down to its output block, then
    runs ``second`` on that output.  Halts iff both stages halt."""
    ensure_valid(first)
    ensure_valid(second)
    if first.n_states == 0:
        return second
    b = TableBuilder(start="E0")
    nxt = HALT if second.n_states == 0 else ("B", 1)
    if second.n_states:
        b.state(nxt)
    _emit_encoder(b, ("R1", 1))
    _emit_simulation(b, first, "FIN")
    _emit_helpers(b, "FIN")
    _emit_normalizer(b, nxt)
    _emit_copy(b, second, "B")
    return b.build()


def emulate_ell(base: MachineTable, n: int, depth: int = 4) -> MachineTable:
    """1-tape table behaving like <n, base'> where base' reads ``pair(n, x)``."""
    return compose(pairing_machine(n, depth), base)


@lru_cache(maxsize=None)
def composition_index(base_index: int, n: int) -> int:
    """Index of the emulating table for <n, M_m>, with M_m read from the table numbering."""
    from .codec import table_of_index

    return table_index(emulate_ell(table_of_index(base_index), n))

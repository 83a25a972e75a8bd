"""Single-tape Turing machines over {0, 1, blank}.

Conventions: states s0..s_{n-1} with s0 the halt state, execution starts in s1
with the head on the leftmost input cell (on a blank cell for the empty input),
and the output is the maximal non-blank block under the head at halt.  A
machine with zero states is the identity.  A (state, symbol) pair with no line
behaves as ``write same, stay, go to s0``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

Word = str

BLANK = "_"
SYMBOLS = ("0", "1", BLANK)
MOVES = ("L", "R", "S")
_DELTA = {"L": -1, "R": 1, "S": 0}
_CODE = {"0": 0, "1": 1, BLANK: 2}

HALTED = "halted"
BUDGET_EXHAUSTED = "budget_exhausted"
LOOP_DETECTED = "loop_detected"

DEFAULT_LOOP_WINDOW = 1 << 16


class TableError(ValueError):
    """Raised for malformed or inconsistent machine tables."""


def check_word(w: str) -> Word:
    if any(c not in "01" for c in w):
        raise ValueError(f"not a binary word: {w!r}")
    return w


@dataclass(frozen=True)
class Instruction:
    state: int
    scanned: str
    write: str
    move: str
    next: int

    def __str__(self) -> str:
        return f"{self.state} {self.scanned} -> {self.write} {self.move} {self.next}"


@dataclass(frozen=True)
class MachineTable:
    n_states: int
    lines: tuple[Instruction, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "lines", tuple(self.lines))

    @cached_property
    def delta(self) -> dict[tuple[int, str], tuple[str, str, int]]:
        return {(i.state, i.scanned): (i.write, i.move, i.next) for i in self.lines}

    def __len__(self) -> int:
        return len(self.lines)


EMPTY_TABLE = MachineTable(0, ())


@dataclass(frozen=True)
class RunOutcome:
    status: str
    steps_used: int
    output: Word | None = None
    op_time: int | None = None

    @property
    def halted(self) -> bool:
        return self.status == HALTED


def validate(table: MachineTable) -> list[str]:
    """Return a list of violations; empty means the table is valid."""
    problems = []
    if table.n_states < 0:
        problems.append("negative state count")
    if table.n_states == 0 and table.lines:
        problems.append("zero-state table must be empty")
    seen = set()
    for ins in table.lines:
        if ins.scanned not in SYMBOLS or ins.write not in SYMBOLS:
            problems.append(f"bad symbol in line '{ins}'")
        if ins.move not in MOVES:
            problems.append(f"bad move in line '{ins}'")
        if not 1 <= ins.state < max(table.n_states, 1):
            problems.append(f"dangling state {ins.state} in line '{ins}'")
        if not 0 <= ins.next < max(table.n_states, 1):
            problems.append(f"dangling state {ins.next} in line '{ins}'")
        key = (ins.state, ins.scanned)
        if key in seen:
            problems.append(f"nondeterministic pair {key}")
        seen.add(key)
    return problems


def ensure_valid(table: MachineTable) -> MachineTable:
    problems = validate(table)
    if problems:
        raise TableError("; ".join(problems))
    return table


def read_output(tape: dict[int, str], head: int) -> Word:
    """Maximal contiguous non-blank block containing the head cell."""
    if tape.get(head, BLANK) == BLANK:
        return ""
    lo = head
    while tape.get(lo - 1, BLANK) != BLANK:
        lo -= 1
    hi = head
    while tape.get(hi + 1, BLANK) != BLANK:
        hi += 1
    return "".join(tape[i] for i in range(lo, hi + 1))


def run(table: MachineTable, input: Word, budget: int,
        loop_window: int = DEFAULT_LOOP_WINDOW) -> RunOutcome:
    """Simulate ``table`` on ``input`` for at most ``budget`` steps.

    Loop detection remembers up to ``loop_window`` configurations; a repeat
    means the machine never halts.  Pass ``loop_window=0`` to disable it.
    """
    ensure_valid(table)
    check_word(input)
    if table.n_states == 0:
        return RunOutcome(HALTED, 0, input, len(input))

    delta = {(q, _CODE[s]): (_CODE[w], _DELTA[m], n)
             for (q, s), (w, m, n) in table.delta.items()}
    pad = 16
    tape = bytearray([2] * pad) + bytearray(_CODE[c] for c in input) + bytearray([2] * pad)
    head, state, steps = pad, 1, 0
    seen: set | None = set() if loop_window > 0 else None
    while state != 0:
        if steps >= budget:
            return RunOutcome(BUDGET_EXHAUSTED, steps)
        if seen is not None and len(seen) < loop_window:
            key = (state, head, bytes(tape))
            if key in seen:
                return RunOutcome(LOOP_DETECTED, steps)
            seen.add(key)
        sym = tape[head]
        write, move, state = delta.get((state, sym), (sym, 0, 0))
        tape[head] = write
        head += move
        steps += 1
        if head < 0:
            grow = len(tape)
            tape[:0] = bytes([2]) * grow
            head += grow
        elif head >= len(tape):
            tape.extend(bytes([2]) * len(tape))
    cells = {i: SYMBOLS[c] for i, c in enumerate(tape) if c != 2}
    out = read_output(cells, head)
    return RunOutcome(HALTED, steps, out, len(input) + steps)


def permute(table: MachineTable, perm: Sequence[int]) -> MachineTable:
    """Reorder lines so that line ``i`` of the result is ``table.lines[perm[i]]``."""
    if sorted(perm) != list(range(len(table.lines))):
        raise TableError("permutation is not a bijection on line positions")
    return MachineTable(table.n_states, tuple(table.lines[p] for p in perm))


# -- text format -------------------------------------------------------------

def format_table(table: MachineTable) -> str:
    out = [f"states {table.n_states}"]
    out.extend(str(ins) for ins in table.lines)
    return "\n".join(out) + "\n"


def parse_table(text: str) -> MachineTable:
    n_states = None
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "states" and len(parts) == 2:
            n_states = int(parts[1])
            continue
        if len(parts) != 6 or parts[2] != "->":
            raise TableError(f"cannot parse line {raw!r}")
        lines.append(Instruction(int(parts[0]), parts[1], parts[3], parts[4], int(parts[5])))
    if n_states is None:
        used = [i.state for i in lines] + [i.next for i in lines]
        n_states = max(used) + 1 if used else 0
    return ensure_valid(MachineTable(n_states, tuple(lines)))


# -- construction helpers ----------------------------------------------------

HALT = "halt"


@dataclass
class TableBuilder:
    """Assemble a table from symbolic state keys.

    The first key passed to :meth:`state` (or ``start``) becomes s1; the key
    ``HALT`` is s0.
    """
    start: object = None
    _ids: dict = field(default_factory=dict)
    _lines: list = field(default_factory=list)
    _defined: set = field(default_factory=set)

    def __post_init__(self):
        if self.start is not None:
            self.state(self.start)

    def state(self, key) -> int:
        if key == HALT:
            return 0
        if key not in self._ids:
            self._ids[key] = len(self._ids) + 1
        return self._ids[key]

    def add(self, key, scanned: str, write: str, move: str, nxt) -> None:
        self._lines.append(Instruction(self.state(key), scanned, write, move, self.state(nxt)))
        self._defined.add(key)

    def defined(self, key) -> bool:
        return key in self._defined

    def keep(self, key, scanned: Iterable[str], move: str, nxt) -> None:
        """Lines that leave the scanned symbol in place."""
        for s in scanned:
            self.add(key, s, s, move, nxt)

    def build(self) -> MachineTable:
        if not self._ids:
            return EMPTY_TABLE
        return ensure_valid(MachineTable(len(self._ids) + 1, tuple(self._lines)))


def _write_leftward(b: TableBuilder, key_of_prefix, word: Word, entry_key) -> None:
    """From ``entry_key`` on a blank cell, write ``word`` right-to-left and halt
    on its first symbol.  Chains are keyed by the prefix still to be written so
    that different words share states."""
    if not word:
        b.add(entry_key, BLANK, BLANK, "S", HALT)
        return
    prefix = word
    key = entry_key
    while prefix:
        nxt = HALT if len(prefix) == 1 else key_of_prefix(prefix[:-1])
        move = "S" if len(prefix) == 1 else "L"
        b.add(key, BLANK, prefix[-1], move, nxt)
        if len(prefix) == 1:
            break
        key = nxt
        if b.defined(key):
            break  # chain already emitted for this prefix
        prefix = prefix[:-1]


def tabulate(mapping: dict[Word, Word], depth: int, default: Word | None = "") -> MachineTable:
    """Lookup-table machine for a finite word function.

    Inputs of length <= ``depth`` are answered from ``mapping`` (missing keys
    give ``default``); longer inputs give ``default``.  ``default=None`` makes
    the machine run forever on unmapped inputs instead.  The input is erased
    while it is read, so the running time is ``|x| + max(1, |output|)``.
    """
    b = TableBuilder(start=("read", ""))

    def write_key(prefix):
        return ("write", prefix)

    def finish(key, out):
        if out is None:
            b.keep(key, [BLANK], "R", ("diverge",))
        else:
            _write_leftward(b, write_key, out, key)

    for length in range(depth + 1):
        for v in range(1 << length):
            u = format(v, f"0{length}b") if length else ""
            key = ("read", u)
            for bit in "01":
                nxt = ("read", u + bit) if length < depth else ("skip",)
                b.add(key, bit, BLANK, "R", nxt)
            finish(key, mapping.get(u, default))
    b.add(("skip",), "0", BLANK, "R", ("skip",))
    b.add(("skip",), "1", BLANK, "R", ("skip",))
    finish(("skip",), default)
    if default is None:
        b.keep(("diverge",), SYMBOLS, "R", ("diverge",))
    return b.build()

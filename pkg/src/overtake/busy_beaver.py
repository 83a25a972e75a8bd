"""Small Busy Beaver values by exhaustive search, and the generalized B'.

Machines follow Rado's convention: two symbols, N working states 1..N plus a
halt state 0, and every (state, symbol) entry writes, moves one cell and
switches state (the halting entry writes and moves too).  The score is the
number of 1s on the tape at halt.

The search walks the tree of partial tables: a machine is simulated until it
needs an entry that is not yet chosen, and only then branches over the
choices.  New states are introduced in numeric order and the halting entry
always writes 1.  On the all-0 tape the very first move is fixed to R, since
a mirror image prints the same number of 1s.

A run that never needs a fresh entry is a leaf.  It is settled during the
run by an exact repeat of the whole configuration or by a translated cycle
(the same state breaking a tape record twice with the tape behind the head
unchanged up to the shift).  Leaves still running at the horizon get two
static checks: no entry that could halt is reachable in the state graph,
every such entry is refuted by bounded backward reasoning, or a closed set
of local configurations built from tape n-grams (cells optionally tagged
with their recent writers) avoids all of them.
Whatever none of these settles is unresolved and clears the ``exact`` flag.
"""
from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator

from . import config
from .codec import word_of_index
from .errors import Refusal, StateLimitExceeded
from .machine import Instruction, MachineTable, TableError, format_table, parse_table

Entry = tuple[int, int, int]  # (write, move +-1, next state; 0 = halt)
HALT_ENTRY: Entry = (1, 1, 0)
DEFAULT_HORIZON = 1000
BACKWARD_DEPTH = 40
# (n, history) pairs tried in order
NGRAM_PLANS = ((1, 0), (2, 0), (3, 0), (1, 1), (2, 1), (1, 2), (2, 2), (1, 3))
FRONTIER = 32


@dataclass(frozen=True)
class RadoMachine:
    """``entries[2*(q-1) + s]`` is the action of state q on symbol s."""
    n_states: int
    entries: tuple[Entry, ...]

    def __post_init__(self):
        if len(self.entries) != 2 * self.n_states:
            raise TableError(f"{self.n_states} states need {2 * self.n_states} entries")
        for w, m, q in self.entries:
            if w not in (0, 1) or m not in (-1, 1) or not 0 <= q <= self.n_states:
                raise TableError(f"bad entry {(w, m, q)}")

    def to_table(self) -> MachineTable:
        """Core-machine table; blank cells act as 0."""
        lines = []
        for q in range(1, self.n_states + 1):
            for s in (0, 1):
                w, m, nxt = self.entries[2 * (q - 1) + s]
                move = "R" if m > 0 else "L"
                for scanned in ((str(s), "_") if s == 0 else ("1",)):
                    lines.append(Instruction(q, scanned, str(w), move, nxt))
        return MachineTable(self.n_states + 1, tuple(lines))

    @property
    def text(self) -> str:
        return format_table(self.to_table())

    @classmethod
    def from_text(cls, text: str) -> "RadoMachine":
        t = parse_table(text)
        n = t.n_states - 1
        entries = []
        for q in range(1, n + 1):
            for s in "01":
                if (q, s) not in t.delta:
                    raise TableError(f"missing entry for state {q}, symbol {s}")
                w, m, nxt = t.delta[(q, s)]
                entries.append((int(w), 1 if m == "R" else -1, nxt))
        return cls(n, tuple(entries))


@dataclass(frozen=True)
class BBResult:
    value: int
    exact: bool
    witness: RadoMachine | None
    cutoff_used: int
    unresolved_count: int
    machines: int = 0
    input: int | None = None   # numeral on the starting tape of the witness (B' only)
    unresolved_sample: tuple[str, ...] = field(default=(), compare=False)

    def to_json(self) -> dict:
        return {
            "value": str(self.value), "exact": self.exact,
            "witness": self.witness.text if self.witness else None,
            "witness_input": None if self.input is None else str(self.input),
            "cutoff_used": self.cutoff_used, "unresolved_count": self.unresolved_count,
            "machines": self.machines,
        }


# -- simulation -------------------------------------------------------------------

HALTS, NEEDS, CYCLES, UNRESOLVED = "halts", "needs", "cycles", "unresolved"


@dataclass
class Trace:
    status: str
    steps: int
    ones: int = 0
    missing: tuple[int, int] | None = None  # entry the run needs next


def _translated(history, heads, tape, off, state, p, side) -> bool:
    """Check the new record event against earlier ones in the same state."""
    snap = bytes(tape)
    for t1, p1, snap1, off1 in history.get(state, ()):
        t2 = len(heads) - 1
        d = p - p1
        if side > 0:
            m = min(heads[t1:t2 + 1])
            seg1 = _cells(snap1, off1, m, p1)
            seg2 = _cells(snap, off, m + d, p)
        else:
            mx = max(heads[t1:t2 + 1])
            seg1 = _cells(snap1, off1, p1, mx)
            seg2 = _cells(snap, off, p, mx + d)
        if seg1 == seg2:
            return True
    history.setdefault(state, []).append((len(heads) - 1, p, snap, off))
    return False


def _cells(snap: bytes, off: int, lo: int, hi: int) -> bytes:
    out = bytearray()
    for p in range(lo, hi + 1):
        i = p + off
        out.append(snap[i] if 0 <= i < len(snap) else 0)
    return bytes(out)


def simulate(delta: dict, word: str, cutoff: int, horizon: int) -> Trace:
    """Run a (possibly partial) machine from ``word`` on an otherwise-0 tape."""
    pad = 32
    tape = bytearray(pad) + bytearray(int(c) for c in word) + bytearray(pad)
    off = pad
    p, state, t = 0, 1, 0
    lo, hi = 0, max(len(word) - 1, 0)
    seen = set()
    heads = [0]
    right: dict = {}
    left: dict = {}
    limit = max(horizon, cutoff)
    while True:
        sym = tape[p + off]
        entry = delta.get((state, sym))
        if entry is None:
            if t >= cutoff:
                return Trace(UNRESOLVED, t, missing=(state, sym))
            return Trace(NEEDS, t, missing=(state, sym))
        if t >= limit:
            if never_halts(delta, state, word):
                return Trace(CYCLES, t)
            return Trace(UNRESOLVED, t)
        key = (state, p + off, bytes(tape))
        if key in seen:
            return Trace(CYCLES, t)
        seen.add(key)
        w, m, state = entry
        tape[p + off] = w
        p += m
        t += 1
        if state == 0:
            if t > cutoff:
                return Trace(UNRESOLVED, t)
            return Trace(HALTS, t, ones=tape.count(1))
        if p + off < 0:
            tape[:0] = bytearray(len(tape))
            off += len(tape) // 2
        elif p + off >= len(tape):
            tape.extend(bytearray(len(tape)))
        heads.append(p)
        if p > hi:
            hi = p
            if _translated(right, heads, tape, off, state, p, 1):
                return Trace(CYCLES, t)
        elif p < lo:
            lo = p
            if _translated(left, heads, tape, off, state, p, -1):
                return Trace(CYCLES, t)


def _halting_entries(delta: dict, states) -> list[tuple[int, int]]:
    """Entries of ``states`` that are missing (may become halts) or halt."""
    return [(q, s) for q in states for s in (0, 1)
            if (q, s) not in delta or delta[(q, s)][2] == 0]


def never_halts(delta: dict, state: int, word: str, depth: int = BACKWARD_DEPTH) -> bool:
    """Sound static checks for a run sitting in ``state``.

    First the state graph: if no halting or missing entry is reachable from
    ``state``, the run goes on forever.  Otherwise each such entry is traced
    backwards; if every backward path dies in a contradiction within
    ``depth`` steps, no configuration ever uses it.
    """
    reach, todo = {state}, [state]
    while todo:
        q = todo.pop()
        for s in (0, 1):
            e = delta.get((q, s))
            if e is not None and e[2] and e[2] not in reach:
                reach.add(e[2])
                todo.append(e[2])
    targets = _halting_entries(delta, reach)
    if all(_refuted(delta, q, s, word, depth) for q, s in targets):
        return True
    return any(ngram_closed(delta, word, n, k) for n, k in NGRAM_PLANS)


def _matches_start(state: int, head: int, cells: dict, word: str) -> bool:
    if state != 1:
        return False
    return all(v == (int(word[p - head]) if 0 <= p - head < len(word) else 0)
               for p, v in cells.items())


def _refuted(delta: dict, q: int, s: int, word: str, depth: int) -> bool:
    preds: dict[int, list] = {}
    for (q1, s1), (w, m, q2) in delta.items():
        if q2:
            preds.setdefault(q2, []).append((q1, s1, w, m))
    stack = [(q, 0, {0: s}, 0)]
    while stack:
        state, head, cells, k = stack.pop()
        if _matches_start(state, head, cells, word):
            return False
        if k >= depth:
            return False
        for q1, s1, w, m in preds.get(state, ()):
            prev = head - m
            if cells.get(prev, w) != w:
                continue
            stack.append((q1, prev, {**cells, prev: s1}, k + 1))
    return True


def _windows(seq: tuple, n: int) -> set:
    return {seq[i:i + n + 1] for i in range(len(seq) - n)}


def ngram_closed(delta: dict, word: str, n: int, history: int = 0) -> bool:
    """Closed position set over (n+1)-grams of the two half tapes.

    A local configuration is (state, n cells left of the head read outward,
    head symbol, n cells to the right).  ``left`` and ``right`` over-approximate
    the (n+1)-grams that occur in each half tape.  Both are grown to a
    fixpoint together with the configurations; if none of those uses a
    missing or halting entry, the machine never halts from ``word``.

    With ``history`` > 0 every cell also carries the states that last wrote
    it (most recent first).  The tag is a function of the concrete run, so
    the argument applies to an exact simulation with a larger alphabet.
    """
    fresh = (0, ())
    tape = tuple((int(c), ()) for c in word) or (fresh,)
    zeros = (fresh,) * (n + 1)
    left = {zeros}
    right = _windows(tape[1:] + zeros, n)
    configs = {(1, zeros[:n], tape[0], (tape[1:] + zeros)[:n])}
    changed = True
    while changed:
        changed = False
        for state, lc, h, rc in list(configs):
            e = delta.get((state, h[0]))
            if e is None or e[2] == 0:
                return False
            w, m, q = e
            cell = (w, ((state,) + h[1])[:history])
            if m > 0:
                near, far, grow, new_gram = rc, right, left, (cell,) + lc
            else:
                near, far, grow, new_gram = lc, left, right, (cell,) + rc
            if new_gram not in grow:
                grow.add(new_gram)
                changed = True
            pushed = new_gram[:n]
            for gram in [g for g in far if g[:n] == near]:
                nxt = (q, pushed, near[0], gram[1:]) if m > 0 else (q, gram[1:], near[0], pushed)
                if nxt not in configs:
                    configs.add(nxt)
                    changed = True
    return True


# -- tree search ------------------------------------------------------------------

def _choices(n: int, delta: dict, restrict_first: bool) -> list[Entry]:
    used = max([1] + [q for q, _ in delta] + [e[2] for e in delta.values()])
    top = min(n, used + 1)
    moves = (1,) if restrict_first and not delta else (1, -1)
    return [(w, m, q) for q in range(1, top + 1) for m in moves for w in (0, 1)]


def _complete(n: int, delta: dict) -> RadoMachine:
    return RadoMachine(n, tuple(delta.get((q, s), HALT_ENTRY)
                                for q in range(1, n + 1) for s in (0, 1)))


@dataclass
class _Tally:
    value: int = -1
    witness: RadoMachine | None = None
    unresolved: int = 0
    machines: int = 0
    sample: list = field(default_factory=list)

    def offer(self, ones: int, machine: RadoMachine) -> None:
        if ones > self.value or (ones == self.value and machine.text < self.witness.text):
            self.value, self.witness = ones, machine

    def merge(self, other: "_Tally") -> None:
        if other.witness is not None:
            self.offer(other.value, other.witness)
        self.unresolved += other.unresolved
        self.machines += other.machines
        self.sample.extend(other.sample)


def _expand(n, delta, word, cutoff, horizon, restrict_first, tally):
    """Children of a tree node, or None after scoring it as a leaf."""
    tr = simulate(delta, word, cutoff, horizon)
    if tr.status == NEEDS:
        out = [{**delta, tr.missing: HALT_ENTRY}]
        if n > 0:
            out += [{**delta, tr.missing: c} for c in _choices(n, delta, restrict_first)]
        return out
    tally.machines += 1
    if tr.status == HALTS:
        tally.offer(tr.ones, _complete(n, delta))
    elif tr.status == UNRESOLVED:
        tally.unresolved += 1
        if len(tally.sample) < 8:
            tally.sample.append(_complete(n, delta).text)
    return None


def _run_nodes(n, nodes, word, cutoff, horizon, restrict_first) -> _Tally:
    tally = _Tally()
    stack = list(reversed(nodes))
    while stack:
        kids = _expand(n, stack.pop(), word, cutoff, horizon, restrict_first, tally)
        if kids:
            stack.extend(reversed(kids))
    return tally


def _frontier(n, word, cutoff, horizon, restrict_first) -> list[dict]:
    """Deterministic split of the tree, independent of the shard count."""
    nodes: list[dict] = [{}]
    i = 0
    while len(nodes) < FRONTIER and i < len(nodes):
        kids = _expand(n, nodes[i], word, cutoff, horizon, restrict_first, _Tally())
        if kids:
            nodes[i:i + 1] = kids
        else:
            i += 1
    return nodes


def _shard_job(args) -> _Tally:
    n, nodes, word, cutoff, horizon, restrict_first = args
    return _run_nodes(n, nodes, word, cutoff, horizon, restrict_first)


def _check_states(n: int, max_states: int | None) -> None:
    limit = config.setting("max_states", max_states)
    if n < 0:
        raise ValueError("state count must be natural")
    if n > limit:
        raise StateLimitExceeded(f"{n} states exceeds the configured maximum {limit}")


def _result(t: _Tally, cutoff: int, input: int | None = None) -> BBResult:
    if t.witness is None:  # nothing halted; the zero-state machine prints nothing
        t.value = 0
    return BBResult(t.value, t.unresolved == 0, t.witness, cutoff, t.unresolved,
                    t.machines, input, tuple(t.sample))


def tree_search(n: int, word: str = "", cutoff: int = 50, shards: int = 1, jobs: int = 1,
                horizon: int | None = None, max_states: int | None = None,
                input: int | None = None) -> BBResult:
    """Most 1s left by a halting n-state machine started on ``word``."""
    _check_states(n, max_states)
    horizon = max(cutoff, DEFAULT_HORIZON) if horizon is None else horizon
    if n == 0:
        return BBResult(word.count("1"), True, RadoMachine(0, ()), cutoff, 0, 1, input)
    restrict = "1" not in word
    nodes = _frontier(n, word, cutoff, horizon, restrict)
    shards = max(1, shards)
    parts = [(n, nodes[s::shards], word, cutoff, horizon, restrict) for s in range(shards)]
    if jobs > 1 and shards > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            tallies = list(pool.map(_shard_job, parts))
    else:
        tallies = [_shard_job(p) for p in parts]
    total = _Tally()
    for t in tallies:
        total.merge(t)
    total.sample.sort()
    return _result(total, cutoff, input)


def enumerate_rado(n: int, pruned: bool = True, cutoff: int = 50,
                   max_states: int | None = None) -> Iterator[RadoMachine]:
    """All n-state machines, or the tree leaves when ``pruned``.

    Unpruned order is lexicographic over entries, each entry ranging over
    write in {0,1}, move in {L,R}, next in 0..n.  Pruned leaves have their
    never-used entries filled with the halting entry.
    """
    _check_states(n, max_states)
    if not pruned:
        per_entry = [(w, m, q) for q in range(n + 1) for m in (1, -1) for w in (0, 1)]
        for entries in itertools.product(per_entry, repeat=2 * n):
            yield RadoMachine(n, entries)
        return
    if n == 0:
        yield RadoMachine(0, ())
        return
    horizon = max(cutoff, DEFAULT_HORIZON)
    stack = [{}]
    while stack:
        delta = stack.pop()
        kids = _expand(n, delta, "", cutoff, horizon, True, _Tally())
        if kids:
            stack.extend(reversed(kids))
        else:
            yield _complete(n, delta)


def score(machine: RadoMachine, word: str = "", cutoff: int = 50,
          horizon: int | None = None) -> Trace:
    delta = {(q, s): machine.entries[2 * (q - 1) + s]
             for q in range(1, machine.n_states + 1) for s in (0, 1)}
    return simulate(delta, word, cutoff, max(cutoff, DEFAULT_HORIZON) if horizon is None else horizon)


def sigma(n: int, cutoff: int = 50, pruned: bool = True, shards: int = 1, jobs: int = 1,
          horizon: int | None = None, max_states: int | None = None) -> BBResult:
    """Busy Beaver value for n states on the all-0 tape."""
    if pruned:
        return _sigma_cached(n, cutoff, shards, jobs, horizon, config.setting("max_states", max_states))
    _check_states(n, max_states)
    if n == 0:
        return BBResult(0, True, RadoMachine(0, ()), cutoff, 0, 1)
    tally = _Tally()
    for machine in enumerate_rado(n, pruned=False, max_states=max_states):
        tr = score(machine, "", cutoff, horizon)
        tally.machines += 1
        if tr.status == HALTS:
            tally.offer(tr.ones, machine)
        elif tr.status == UNRESOLVED:
            tally.unresolved += 1
    return _result(tally, cutoff)


@lru_cache(maxsize=64)
def _sigma_cached(n, cutoff, shards, jobs, horizon, max_states) -> BBResult:
    return tree_search(n, "", cutoff, shards, jobs, horizon, max_states)


# -- indices and B' --------------------------------------------------------------------

def table_word_length(n: int) -> int:
    """Bits in a (3n+1) x 4 table of numbers below 3n+1."""
    rows = 3 * n + 1
    return 4 * rows * rows.bit_length()


def states_of_index(m: int) -> int:
    """Least n whose (3n+1) x 4 tables serialize to words reaching index m."""
    if m < 0:
        raise ValueError("index must be natural")
    n = 0
    while (1 << (table_word_length(n) + 1)) - 2 < m:
        n += 1
    return n


def b_of_index(m: int, cutoff: int = 50, max_states: int | None = None, **kw) -> BBResult:
    return sigma(states_of_index(m), cutoff, max_states=max_states, **kw)


def b_prime(m: int, registry, cutoff: int = 50, max_states: int | None = None,
            input_budget: int | None = None, **kw) -> BBResult:
    """Most 1s over N(m)-state machines and starting tapes holding x <= g(m).

    For an index outside the registry g is 0, the only input is the empty
    word and the value equals :func:`b_of_index`.
    """
    from .growth import g_at_index

    n = states_of_index(m)
    _check_states(n, max_states)
    g = g_at_index(m, registry)
    budget = config.setting("input_budget", input_budget)
    if g > budget:
        raise Refusal(f"g({m}) = {g} exceeds the input budget {budget}")
    best = b_of_index(m, cutoff, max_states, **kw)
    best = BBResult(best.value, best.exact, best.witness, cutoff, best.unresolved_count,
                    best.machines, 0)
    for x in range(1, g + 1):
        r = tree_search(n, word_of_index(x), cutoff, max_states=max_states, input=x, **kw)
        unresolved = best.unresolved_count + r.unresolved_count
        top = r if r.value > best.value else best
        best = BBResult(top.value, unresolved == 0, top.witness, cutoff, unresolved,
                        best.machines + r.machines, top.input)
    return best


@dataclass(frozen=True)
class BPrimeRow:
    index: int
    g: int | None
    b_prime: int | None
    exact: bool | None
    holds: bool | None   # B'(m) >= g(m)
    refusal: str | None = None


def bprime_vs_g_report(indices, registry, cutoff: int = 50, **kw) -> list[BPrimeRow]:
    """Finite table of B'(m) against g(m); refusals become rows."""
    from .growth import g_at_index

    rows = []
    for m in indices:
        try:
            g = g_at_index(m, registry)
            r = b_prime(m, registry, cutoff, **kw)
        except Refusal as err:
            rows.append(BPrimeRow(m, None, None, None, None, f"{err.kind}: {err}"))
            continue
        rows.append(BPrimeRow(m, g, r.value, r.exact, r.value >= g))
    return rows

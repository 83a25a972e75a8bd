"""Acceptance checks, one function per criterion, shared by the CLI and tests.

Each check recomputes its expected values with an oracle that does not go
through the code under test (plain enumeration, brute force, hand formulas)
and returns a :class:`CriterionResult`.  ``quick`` skips the 3-state search
and the n = 4 family member.
"""
from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass
from typing import Callable

from . import busy_beaver as bb
from .codec import decode_word, encode_pair, ell_index, linear_law
from .errors import Refusal
from .factory import standard_registry
from .growth import (COMPILED, CROSSOVER, FIRST, STRUCTURAL, build_counterexample_family,
                     f_omega, g0, g_of_machine, lookup_function)
from .machine import EMPTY_TABLE, Instruction, MachineTable, permute, run

QUICK, FULL = "quick", "full"


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] {self.number}. {self.name} ({self.seconds:.1f}s): {self.detail}"


def _words(max_len: int):
    for k in range(max_len + 1):
        for bits in itertools.product("01", repeat=k):
            yield "".join(bits)


def _enumeration_index(target: str) -> int:
    """Position of ``target`` in the length-then-value listing, by walking it."""
    for i, w in enumerate(_words(len(target))):
        if w == target:
            return i
    raise AssertionError("unreachable")


# -- 1 ------------------------------------------------------------------------

def codec_round_trip(profile: str = FULL) -> tuple[bool, str]:
    bad = [(n, m) for n in range(256) for m in range(256)
           if decode_word(encode_pair(n, m)) != (n, m)]
    total = 0
    for w in _words(14):
        pair = decode_word(w)
        if not (isinstance(pair, tuple) and len(pair) == 2):
            bad.append(w)
        total += 1
    return not bad, f"65536 pairs, {total} words decoded, {len(bad)} failures"


# -- 2 ------------------------------------------------------------------------

def index_law(profile: str = FULL) -> tuple[bool, str]:
    problems = []
    for m in (0, 1, 2, 5):
        law = linear_law(m, range(1000))
        xm = bin(m + 1)[3:]
        if law.a != 2 ** (2 * len(xm) + 2):
            problems.append(f"m={m}: ratio {law.a}")
    spots = {(1, 1): 39, (2, 1): 55}
    for (n, m), want in spots.items():
        oracle = _enumeration_index(bin(n + 1)[3:] + "10" + "".join(c * 2 for c in bin(m + 1)[3:]))
        if not ell_index(n, m) == oracle == want:
            problems.append(f"ell_index({n},{m}) = {ell_index(n, m)}, enumeration {oracle}")
    return not problems, "; ".join(problems) or "exact on m in {0,1,2,5}, n < 1000; spots 39, 55"


# -- 3 ------------------------------------------------------------------------

def quasi_trivial(profile: str = FULL) -> tuple[bool, str]:
    ns = range(5) if profile == FULL else range(4)
    reg = standard_registry(ns)
    h = lambda n: 2 ** (n + 3)
    fam = [cm for _, cm in reg if cm.spec is not None]
    problems = []
    for cm in fam:
        n = cm.spec.n
        got = g_of_machine(cm, tier=STRUCTURAL)
        if got != h(n) + 1:
            problems.append(f"n={n}: structural {got}")
        if n <= 1:
            comp = g_of_machine(cm, tier=COMPILED)
            if comp != h(n) + 1:
                problems.append(f"n={n}: compiled {comp}")
    got = sorted(g_of_machine(cm) for cm in fam)
    return not problems, "; ".join(problems) or f"g = {got}, compiled agrees for n <= 1"


# -- 4 ------------------------------------------------------------------------

def busy_beaver_values(profile: str = FULL) -> tuple[bool, str]:
    plan = [(1, 10, 1), (2, 30, 4)] + ([(3, 50, 6)] if profile == FULL else [])
    problems, seen = [], []
    for n, cutoff, want in plan:
        r = bb.sigma(n, cutoff)
        again = bb.sigma(n, 2 * cutoff)
        seen.append(f"sigma({n})={r.value}{'' if r.exact else '?'}")
        if r.value != want or not r.exact:
            problems.append(f"sigma({n}, {cutoff}) = {r.value}, exact={r.exact}, "
                            f"unresolved={r.unresolved_count}")
        if (again.value, again.exact) != (r.value, r.exact):
            problems.append(f"sigma({n}) changed at cutoff {2 * cutoff}")
        base = r.to_json()
        for shards in (2, 4, 8):
            if bb.sigma(n, cutoff, shards=shards).to_json() != base:
                problems.append(f"sigma({n}) differs with {shards} shards")
    return not problems, "; ".join(problems) or ", ".join(seen) + "; stable under 2x cutoff and shards"


# -- 5 ------------------------------------------------------------------------

def evaluation_indices(registry, max_n: int) -> list[int]:
    """Registered indices, small uncertified indices and state-count boundaries."""
    out = set(registry.indices()) | set(range(65))
    for n in range(max_n + 1):
        top = (1 << (bb.table_word_length(n) + 1)) - 2
        out |= {top, top + 1}
    return sorted(m for m in out if bb.states_of_index(m) <= max_n)


def bprime_vs_b(profile: str = FULL) -> tuple[bool, str]:
    reg = standard_registry()
    max_n = 3 if profile == FULL else 2
    problems, count = [], 0
    for m in evaluation_indices(reg, max_n):
        n = bb.states_of_index(m)
        cutoff = (10, 10, 30, 50)[n]
        b = bb.b_of_index(m, cutoff)
        try:
            bp = bb.b_prime(m, reg, cutoff)
        except Refusal as err:
            problems.append(f"m={m}: refused ({err})")
            continue
        count += 1
        if bp.value < b.value:
            problems.append(f"m={m}: B'={bp.value} < B={b.value}")
        if not reg.is_certified(m) and bp.value != b.value:
            problems.append(f"m={m} uncertified: B'={bp.value} != B={b.value}")
    return not problems, "; ".join(problems) or f"{count} indices with N <= {max_n}"


# -- 6 ------------------------------------------------------------------------

def non_domination(profile: str = FULL) -> tuple[bool, str]:
    problems = []
    if f_omega(2) != 23:
        problems.append(f"F_omega(2) = {f_omega(2)}")
    for name in ("succ", "square"):
        _, rows = build_counterexample_family(lookup_function(name), range(4))
        for row in rows:
            if row.refusal:
                problems.append(f"{name} n={row.n}: {row.refusal.split(':')[0]}")
            elif not row.identity_holds:
                problems.append(f"{name} n={row.n}: g={row.g} != h'+1")
            elif not row.exceeds_h:
                problems.append(f"{name} n={row.n}: g={row.g} <= h(N) "
                                f"(N has {row.index.bit_length()} bits)")
    return not problems, "; ".join(problems) or "identity and g(N(n)) > h(N(n)) for n <= 3"


# -- 7 ------------------------------------------------------------------------

def _g0_oracle(m: int, crossover: bool, scan: int = 400) -> int:
    ok = [(1 if x == 0 and m == 0 else x ** m) < 2 ** x for x in range(scan)]
    if not crossover:
        return ok.index(True)
    last_bad = max((x for x in range(scan) if not ok[x]), default=-1)
    return last_bad + 1


def g0_table(profile: str = FULL) -> tuple[bool, str]:
    problems = []
    expected_first = {0: 1, **{m: 0 for m in range(1, 13)}}
    for m, want in expected_first.items():
        got = g0(m, FIRST)
        if not got == want == _g0_oracle(m, False):
            problems.append(f"first g0({m}) = {got}")
    for m, want in {2: 5, 3: 10}.items():
        got = g0(m, CROSSOVER)
        if not got == want == _g0_oracle(m, True):
            problems.append(f"crossover g0({m}) = {got}")
    for m in range(13):
        if g0(m, CROSSOVER) != _g0_oracle(m, True):
            problems.append(f"crossover g0({m}) != scan")
    return not problems, "; ".join(problems) or "first and crossover match the scan for m <= 12"


# -- 8 ------------------------------------------------------------------------

def random_table(rng: random.Random, n_states: int) -> MachineTable:
    lines = []
    for q in range(1, n_states):
        for s in "01_":
            if rng.random() < 0.85:
                lines.append(Instruction(q, s, rng.choice("01_"), rng.choice("LRS"),
                                         rng.randrange(n_states)))
    return MachineTable(n_states, tuple(lines))


def simulator_properties(profile: str = FULL) -> tuple[bool, str]:
    problems = []
    words = list(_words(12))
    for w in words:
        out = run(EMPTY_TABLE, w, 1)
        if out.output != w or out.op_time - out.steps_used != len(w):
            problems.append(f"identity on {w!r}")
            break
    rng = random.Random(2024)
    halted = 0
    for _ in range(100):
        t = random_table(rng, rng.randrange(2, 6))
        perm = list(range(len(t.lines)))
        rng.shuffle(perm)
        shuffled = permute(t, perm)
        for _ in range(20):
            w = "".join(rng.choice("01") for _ in range(rng.randrange(8)))
            a, b = run(t, w, 200), run(shuffled, w, 200)
            if a != b:
                problems.append(f"permutation changed a run on {w!r}")
            if a.halted:
                halted += 1
                if a.op_time - a.steps_used != len(w):
                    problems.append("op_time - steps != |input|")
    return not problems, "; ".join(problems[:3]) or f"{len(words)} identity words, 2000 runs ({halted} halted)"


CRITERIA: list[tuple[int, str, Callable[[str], tuple[bool, str]]]] = [
    (1, "codec round trip", codec_round_trip),
    (2, "linear index law", index_law),
    (3, "quasi-trivial g value", quasi_trivial),
    (4, "busy beaver values", busy_beaver_values),
    (5, "B' >= B", bprime_vs_b),
    (6, "non-domination family", non_domination),
    (7, "g0 table", g0_table),
    (8, "simulator properties", simulator_properties),
]


def run_criterion(number: int, profile: str = FULL) -> CriterionResult:
    _, name, check = CRITERIA[number - 1]
    t0 = time.perf_counter()
    try:
        passed, detail = check(profile)
    except Exception as err:  # a crash is a failed criterion, not a crashed suite
        passed, detail = False, f"{type(err).__name__}: {err}"
    return CriterionResult(number, name, passed, detail, time.perf_counter() - t0)


def run_acceptance(profile: str = FULL, echo: Callable[[str], None] | None = print) -> list[CriterionResult]:
    results = []
    for number, _, _ in CRITERIA:
        r = run_criterion(number, profile)
        if echo:
            echo(r.line())
        results.append(r)
    return results

"""Concrete machine families with polynomial-time certificates.

Membership in the class of polynomial-time machines is not decidable, so a
machine counts as polynomial here only if it carries a :class:`PolyCertificate`
that every run is checked against.  The :class:`Registry` maps labeled indices
to certified machines; any index missing from it is treated as uncertified.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

from .codec import ell_index, index_of_word, linear_law, word_of_index
from .ell import identity_table, make_constant, pairing
from .errors import CertificateViolation, RegistryError, TableBudgetExceeded
from .machine import MachineTable, run, tabulate

# template kinds, the first component of a family's machine code
KIND_IDENTITY = 1
KIND_ZERO = 2
KIND_QUASI = 3


def _len(v: int) -> int:
    """Length of the canonical word of ``v``."""
    return (v + 1).bit_length() - 1


@dataclass(frozen=True)
class PolyCertificate:
    """Claims op_time(x) <= c (|x| + 1)^k + c and the same bound on output length."""
    degree: int
    coefficient: int

    def bound(self, length: int) -> int:
        c = self.coefficient
        return c * (length + 1) ** self.degree + c


@dataclass(frozen=True)
class SemanticMachine:
    eval: Callable[[int], int] = field(repr=False)
    time_model: Callable[[int], int] = field(repr=False)
    name: str = ""


@dataclass(frozen=True)
class QuasiTrivialSpec:
    """Q(x) = H'(x) for x <= k_n = H(n), and 0 above the threshold."""
    threshold_source: object  # GrowthFunction
    payload: object           # GrowthFunction
    n: int
    k_n: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "k_n", self.threshold_source(self.n))

    def probes(self) -> tuple[int, ...]:
        return tuple(sorted({0, self.k_n // 2, self.k_n}))

    def check_probes(self) -> None:
        for x in self.probes():
            if self.payload(x).bit_length() <= x:
                raise ValueError(f"payload {self.payload.name}({x}) is below 2^{x}")

    def value(self, x: int) -> int:
        return self.payload(x) if x <= self.k_n else 0

    @property
    def template_code(self) -> int:
        h, hp = self.threshold_source.code, self.payload.code
        if h is None or hp is None:
            raise RegistryError("family subroutines must come from the function catalog")
        return pairing(KIND_QUASI, pairing(h, hp))


@dataclass
class CertifiedMachine:
    machine: SemanticMachine
    certificate: PolyCertificate
    kind: str
    template_code: int
    parameter: int = 0
    spec: QuasiTrivialSpec | None = None
    compiled: MachineTable | None = None
    ell_index: int | None = None
    runs: int = 0

    def _check(self, x: int, op_time: int, value: int) -> None:
        bound = self.certificate.bound(_len(x))
        if op_time > bound or _len(value) > bound:
            raise CertificateViolation(
                f"{self.machine.name} on {x}: time {op_time}, output length {_len(value)}, "
                f"bound {bound}")
        self.runs += 1

    def evaluate(self, x: int, compiled: bool = False) -> int:
        """Output numeral on input ``x``, checked against the certificate."""
        if not compiled:
            v = self.machine.eval(x)
            self._check(x, self.machine.time_model(x), v)
            return v
        if self.compiled is None:
            raise ValueError(f"{self.machine.name} has no compiled table")
        bound = self.certificate.bound(_len(x))
        out = run(self.compiled, word_of_index(x), bound + 1, loop_window=0)
        if not out.halted:
            raise CertificateViolation(f"{self.machine.name} on {x}: no halt within {bound}")
        v = index_of_word(out.output)
        self._check(x, out.op_time, v)
        return v

    def op_time(self, x: int) -> int:
        return run(self.compiled, word_of_index(x), self.certificate.bound(_len(x)) + 1,
                   loop_window=0).op_time


def make_O() -> CertifiedMachine:
    """Identity: inputs x and stops (one cycle)."""
    sem = SemanticMachine(lambda x: x, lambda x: _len(x) + 1, "O")
    return CertifiedMachine(sem, PolyCertificate(1, 2), "identity",
                            pairing(KIND_IDENTITY, 0), compiled=identity_table())


def make_Oprime() -> CertifiedMachine:
    """Constant zero: steps off the input onto a blank cell (the empty word)."""
    sem = SemanticMachine(lambda x: 0, lambda x: _len(x) + 2, "O'")
    return CertifiedMachine(sem, PolyCertificate(1, 2), "zero",
                            pairing(KIND_ZERO, 0), compiled=make_constant(0))


def make_quasi_trivial(spec: QuasiTrivialSpec) -> CertifiedMachine:
    """Semantic quasi-trivial machine with a linear certificate.

    The time model matches the lookup-table compilation exactly:
    ``2|x| + max(1, |Q(x)|)``.
    """
    spec.check_probes()
    if spec.payload.monotone:
        longest = _len(spec.payload(spec.k_n))
    else:
        longest = max(_len(spec.payload(x)) for x in range(spec.k_n + 1))
    name = f"Q[{spec.threshold_source.name},{spec.payload.name},{spec.n}]"
    sem = SemanticMachine(spec.value, lambda x: 2 * _len(x) + max(1, _len(spec.value(x))), name)
    return CertifiedMachine(sem, PolyCertificate(1, longest + 2), "quasi_trivial",
                            spec.template_code, parameter=spec.n, spec=spec)


def compile_quasi_trivial(spec: QuasiTrivialSpec, table_budget: int = 20000,
                          margin: int = 4) -> MachineTable:
    """Lookup-table machine for Q.

    Every word up to the length of ``word(k_n + margin)`` is tabulated and
    longer inputs map to 0, so the table agrees with Q on all inputs.
    """
    depth = _len(spec.k_n + margin)
    estimate = (2 << depth) + sum(_len(spec.value(x)) for x in range(spec.k_n + 1))
    if estimate > table_budget:
        raise TableBudgetExceeded(f"about {estimate} states needed, budget {table_budget}")
    mapping = {word_of_index(x): word_of_index(spec.value(x)) for x in range((2 << depth) - 1)}
    return tabulate(mapping, depth, default="")


# -- registry ----------------------------------------------------------------------

class Registry:
    """Labeled index -> certified machine.  Single writer, many readers."""

    def __init__(self):
        self._entries: dict[int, CertifiedMachine] = {}

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self):
        return iter(sorted(self._entries.items()))

    def register(self, cm: CertifiedMachine) -> int:
        i = ell_index(cm.parameter, cm.template_code)
        old = self._entries.get(i)
        if old is not None and not _same(old, cm):
            raise RegistryError(f"index {i} already holds {old.machine.name}")
        cm.ell_index = i
        self._entries[i] = cm
        return i

    def lookup(self, i: int) -> CertifiedMachine | None:
        return self._entries.get(i)

    def is_certified(self, i: int) -> bool:
        return i in self._entries

    def indices(self) -> list[int]:
        return sorted(self._entries)

    def to_json(self) -> list[dict]:
        rows = []
        for i, cm in self:
            params: dict = {}
            if cm.spec is not None:
                params = {"h": cm.spec.threshold_source.name,
                          "hprime": cm.spec.payload.name, "n": cm.spec.n}
            rows.append({
                "ell_index": str(i), "kind": cm.kind, "params": params,
                "certificate": {"k": cm.certificate.degree, "c": cm.certificate.coefficient},
            })
        return rows

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), indent=1) + "\n")

    @classmethod
    def from_json(cls, rows: list[dict]) -> "Registry":
        from .growth import lookup_function

        reg = cls()
        for row in rows:
            kind = row["kind"]
            if kind == "identity":
                cm = make_O()
            elif kind == "zero":
                cm = make_Oprime()
            elif kind == "quasi_trivial":
                p = row["params"]
                spec = QuasiTrivialSpec(lookup_function(p["h"]), lookup_function(p["hprime"]),
                                        int(p["n"]))
                cm = make_quasi_trivial(spec)
            else:
                raise RegistryError(f"unknown kind {kind!r}")
            i = reg.register(cm)
            if str(i) != row["ell_index"]:
                raise RegistryError(f"stored index {row['ell_index']} does not match {i}")
            cert = row["certificate"]
            if (cert["k"], cert["c"]) != (cm.certificate.degree, cm.certificate.coefficient):
                raise RegistryError(f"certificate mismatch at index {i}")
        return reg

    @classmethod
    def load(cls, path: str | Path) -> "Registry":
        return cls.from_json(json.loads(Path(path).read_text()))


def _same(a: CertifiedMachine, b: CertifiedMachine) -> bool:
    if a.kind != b.kind or a.template_code != b.template_code or a.parameter != b.parameter:
        return False
    if a.spec is None or b.spec is None:
        return a.spec is b.spec
    return (a.spec.threshold_source.name, a.spec.payload.name, a.spec.n) == \
        (b.spec.threshold_source.name, b.spec.payload.name, b.spec.n)


def register_family(specs: Sequence[QuasiTrivialSpec], registry: Registry,
                    compile_up_to: int = 0, table_budget: int = 20000) -> list[CertifiedMachine]:
    """Build and register one quasi-trivial family.

    Members are the labeled machines <n, m> with ``m`` the family's template
    code, so their indices lie on ``a*n + b``.  Members with ``k_n <=
    compile_up_to`` also get a compiled table.
    """
    if not specs:
        return []
    names = {(s.threshold_source.name, s.payload.name) for s in specs}
    if len(names) != 1:
        raise RegistryError("a family shares its threshold and payload functions")
    out = []
    for spec in specs:
        cm = make_quasi_trivial(spec)
        if spec.k_n <= compile_up_to:
            cm.compiled = compile_quasi_trivial(spec, table_budget)
        registry.register(cm)
        out.append(cm)
    ns = sorted(s.n for s in specs)
    law = linear_law(specs[0].template_code, range(ns[0], ns[-1] + 1))
    for cm in out:
        if cm.ell_index != law(cm.parameter):
            raise RegistryError(f"family index {cm.ell_index} off the line {law}")
    return out


def standard_registry(n_range: range = range(5)) -> Registry:
    """O, O' and the toy family H(n) = 2^(n+3), H'(x) = 4^(x+1)."""
    from .growth import lookup_function

    reg = Registry()
    reg.register(make_O())
    reg.register(make_Oprime())
    h, hp = lookup_function("pow2_plus3"), lookup_function("pow4_succ")
    register_family([QuasiTrivialSpec(h, hp, n) for n in n_range], reg, compile_up_to=16)
    return reg

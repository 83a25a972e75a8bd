"""Growth functions, the mu-defined functions g0 / g* / g, and domination checks.

Values are Python integers.  Anything whose size would pass the configured
ceiling (``OVERTAKE_CEILING_BITS``, default 2**24 bits) raises
:class:`GrowthOverflow` before it is computed.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

from . import config
from .errors import GrowthOverflow, Refusal, Unresolved
from .factory import CertifiedMachine, QuasiTrivialSpec, Registry, register_family


def _guard(bits: int, what: str, ceiling: int | None = None) -> None:
    limit = config.setting("ceiling_bits", ceiling)
    if bits > limit:
        raise GrowthOverflow(f"{what} needs about {bits} bits, ceiling is {limit}")


def pow2(e: int) -> int:
    _guard(e + 1, f"2^{e}")
    return 1 << e


@dataclass(frozen=True)
class GrowthFunction:
    eval: Callable[[int], int] = field(repr=False)
    name: str
    monotone: bool = False
    code: int | None = None  # catalog code, needed to register families built on it

    def __call__(self, n: int) -> int:
        if n < 0:
            raise ValueError("growth functions take natural arguments")
        v = self.eval(n)
        _guard(v.bit_length(), f"{self.name}({n})")
        return v


# -- catalog -------------------------------------------------------------------

_BASE: list[tuple[str, Callable[[int], int], bool]] = [
    ("zero", lambda n: 0, True),
    ("identity", lambda n: n, True),
    ("succ", lambda n: n + 1, True),
    ("square", lambda n: n * n, True),
    ("exp2", lambda n: pow2(n), True),
    ("pow2_plus3", lambda n: pow2(n + 3), True),
    ("pow4_succ", lambda n: pow2(2 * n + 2), True),
]
_CATALOG: dict[str, GrowthFunction] = {
    name: GrowthFunction(fn, name, mono, 2 * i) for i, (name, fn, mono) in enumerate(_BASE)
}


def define_function(name: str, fn: Callable[[int], int], monotone: bool = False) -> GrowthFunction:
    """Add a named function to the catalog (codes are assigned in definition order)."""
    if name in _CATALOG:
        raise ValueError(f"function {name!r} already defined")
    g = GrowthFunction(fn, name, monotone, 2 * len(_CATALOG))
    _CATALOG[name] = g
    return g


def lookup_function(name: str) -> GrowthFunction:
    """Catalog lookup; ``hprime(<name>)`` builds the derived function on the fly."""
    if name in _CATALOG:
        return _CATALOG[name]
    if name.startswith("hprime(") and name.endswith(")"):
        return derive_hprime(lookup_function(name[len("hprime("):-1]))
    raise KeyError(f"unknown function {name!r}; known: {', '.join(sorted(_CATALOG))}")


def catalog_names() -> list[str]:
    return list(_CATALOG)


# -- fast-growing hierarchy ------------------------------------------------------

def fgh(k: int, n: int, ceiling: int | None = None) -> int:
    """F_0(n) = n + 1, F_{k+1}(n) = F_k applied n + 1 times to n."""
    if k < 0 or n < 0:
        raise ValueError("fgh takes natural arguments")
    if k == 0:
        return n + 1
    if k == 1:
        return 2 * n + 1
    if k == 2:
        # F_2(n) = 2^(n+1) (n+1) - 1
        _guard(n + 1 + (n + 1).bit_length(), f"F_2({n})", ceiling)
        return ((n + 1) << (n + 1)) - 1
    x = n
    for _ in range(n + 1):
        x = fgh(k - 1, x, ceiling)
    return x


def f_omega(n: int, ceiling: int | None = None) -> int:
    return fgh(n, n, ceiling)


F_OMEGA = GrowthFunction(f_omega, "F_omega", True)


def monotonize(h: GrowthFunction) -> GrowthFunction:
    """h*(n) = n + max(h(0), ..., h(n)); strictly increasing and above h."""
    if h.monotone:
        return GrowthFunction(lambda n: n + h(n), f"mono({h.name})", True)
    best: list[int] = []

    def star(n: int) -> int:
        while len(best) <= n:
            v = h(len(best))
            best.append(v if not best else max(best[-1], v))
        return n + best[n]

    return GrowthFunction(star, f"mono({h.name})", True)


def derive_hprime(h: GrowthFunction) -> GrowthFunction:
    """h' = h* o F_omega."""
    star = monotonize(h)
    code = None if h.code is None else 2 * h.code + 1
    return GrowthFunction(lambda n: star(f_omega(n)), f"hprime({h.name})", True, code)


# -- g0 --------------------------------------------------------------------------

FIRST = "first"
CROSSOVER = "crossover"


def _below_exp(x: int, m: int) -> bool:
    """x^m < 2^x, with 0^0 = 1."""
    return pow(x, m) < (1 << x)


def g0(m: int, mode: str = FIRST) -> int:
    """Least x with x^m < 2^x (``first``) or least x from which it holds for good
    (``crossover``).

    Tail argument for ``crossover``: for m >= 1 write phi(y) = y ln 2 - m ln y;
    phi'(y) = ln 2 - m/y > 0 once y > m / ln 2, and 2m > m / ln 2.  So the first
    t >= 2m with t^m < 2^t settles every y >= t, and only y < t need a scan.
    For m = 0 the inequality 1 < 2^y holds for every y >= 1.
    """
    if m < 0:
        raise ValueError("m must be natural")
    if mode == FIRST:
        x = 0
        while not _below_exp(x, m):
            x += 1
        return x
    if mode != CROSSOVER:
        raise ValueError(f"unknown mode {mode!r}")
    t = max(2 * m, 1)
    while not _below_exp(t, m):
        t += 1
    failures = [y for y in range(t) if not _below_exp(y, m)]
    return failures[-1] + 1 if failures else 0


# -- g over certified machines ------------------------------------------------------

STRUCTURAL = "structural"
SEMANTIC = "semantic"
COMPILED = "compiled"


def _mu_search(value_at: Callable[[int], int], budget: int) -> int:
    for x in range(budget):
        if value_at(x).bit_length() <= x:  # value < 2^x
            return x
    raise Unresolved(f"no x < {budget} with output below 2^x")


def g_of_machine(cm: CertifiedMachine, search_budget: int | None = None,
                 tier: str | None = None) -> int:
    """mu_x [M(x) < 2^x] for a certified machine, comparing numeral values.

    ``tier`` picks the route: ``structural`` (quasi-trivial machines only:
    check H'(x) >= 2^x at x in {0, k/2, k} and answer k + 1), ``semantic``
    (generic search over the evaluator) or ``compiled`` (generic search over
    table runs).  The default is structural when available, else semantic.
    """
    budget = config.setting("search_budget", search_budget)
    if tier is None:
        tier = STRUCTURAL if cm.spec is not None else SEMANTIC
    if tier == STRUCTURAL:
        if cm.spec is None:
            raise ValueError("structural route needs a quasi-trivial machine")
        spec = cm.spec
        k = spec.k_n
        spec.check_probes()
        if cm.evaluate(k + 1) != 0:
            raise AssertionError("quasi-trivial machine not trivial above its threshold")
        return k + 1
    if tier == SEMANTIC:
        return _mu_search(cm.evaluate, budget)
    if tier == COMPILED:
        return _mu_search(lambda x: cm.evaluate(x, compiled=True), budget)
    raise ValueError(f"unknown tier {tier!r}")


def g_at_index(i: int, registry: Registry, **kwargs) -> int:
    """g(i): the mu-value for certified indices, 0 for every other index."""
    cm = registry.lookup(i)
    if cm is None:
        return 0
    return g_of_machine(cm, **kwargs)


def g_star(enumeration: Sequence[CertifiedMachine], m: int, **kwargs) -> int:
    """g* over a caller-supplied enumeration of certified machines."""
    if not 0 <= m < len(enumeration):
        raise IndexError(f"machine {m} outside an enumeration of {len(enumeration)}")
    return g_of_machine(enumeration[m], **kwargs)


# -- domination ------------------------------------------------------------------

@dataclass(frozen=True)
class DominationReport:
    """``witness`` is the least y in the window with f(x) >= g(x) for every
    window point x >= y (None if the last point fails)."""
    window: range
    witness: int | None
    failures: tuple[int, ...]

    @property
    def dominates(self) -> bool:
        return self.witness is not None


def dominates_on_window(f: Callable[[int], int], g: Callable[[int], int],
                        window: range) -> DominationReport:
    failures = tuple(x for x in window if f(x) < g(x))
    if not failures:
        witness = window[0] if len(window) else None
    elif failures[-1] == window[-1]:
        witness = None
    else:
        witness = failures[-1] + 1
    return DominationReport(window, witness, failures)


# -- counterexample families -------------------------------------------------------

PAYLOAD = "pow4_succ"


@dataclass
class CounterexampleRow:
    n: int
    index: int | None = None
    hprime: int | None = None
    g: int | None = None
    h_at_index: int | None = None
    identity_holds: bool | None = None   # g(N(n)) == h'(n) + 1
    exceeds_h: bool | None = None        # g(N(n)) > h(N(n))
    refusal: str | None = None

    @property
    def ok(self) -> bool:
        return bool(self.identity_holds and self.exceeds_h)


def build_counterexample_family(h: GrowthFunction, n_range: range,
                                registry: Registry | None = None):
    """Quasi-trivial family with threshold h' = h* o F_omega and payload 4^(x+1).

    Returns ``(machines, rows)``; each row records g at the family index, the
    identity g(N(n)) = h'(n) + 1 and whether g(N(n)) exceeds h(N(n)).  Values
    past the size ceiling become refusal rows.
    """
    registry = registry if registry is not None else Registry()
    hprime = derive_hprime(h)
    payload = lookup_function(PAYLOAD)
    specs, rows = [], {}
    for n in n_range:
        row = rows[n] = CounterexampleRow(n)
        try:
            specs.append(QuasiTrivialSpec(hprime, payload, n))
            row.hprime = specs[-1].k_n
        except Refusal as err:
            row.refusal = f"{err.kind}: {err}"
    machines = register_family(specs, registry) if specs else []
    for cm in machines:
        row = rows[cm.spec.n]
        row.index = cm.ell_index
        try:
            row.g = g_at_index(cm.ell_index, registry)
            row.h_at_index = h(cm.ell_index)
        except Refusal as err:
            row.refusal = f"{err.kind}: {err}"
            continue
        row.identity_holds = row.g == row.hprime + 1
        row.exceeds_h = row.g > row.h_at_index
    return machines, [rows[n] for n in n_range]


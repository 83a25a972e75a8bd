"""Canonical word enumeration and the digit-doubling code for labeled machines.

A labeled machine <n, m> is coded by the word ``x_n + "10" + double(x_m)``
and its index is the canonical index of that word.  For fixed ``m`` the
indices of <0, m>, <1, m>, ... form an arithmetic progression with ratio
``2 ** (2 * |x_m| + 2)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .machine import EMPTY_TABLE, MachineTable, TableError, Word, check_word, format_table, parse_table

SEPARATOR = "10"


class LawViolation(AssertionError):
    """The index law failed; only possible through a codec bug."""


def word_of_index(i: int) -> Word:
    """Canonical word number ``i``: 0 -> '', 1 -> '0', 2 -> '1', 3 -> '00', ..."""
    if i < 0:
        raise ValueError("index must be a natural number")
    return bin(i + 1)[3:]


def index_of_word(w: Word) -> int:
    check_word(w)
    return (1 << len(w)) - 1 + (int(w, 2) if w else 0)


def double(w: Word) -> Word:
    return "".join(c + c for c in w)


def encode_pair(n: int, m: int) -> Word:
    return word_of_index(n) + SEPARATOR + double(word_of_index(m))


def doubled_suffix_pairs(w: Word) -> int:
    """Number of equal-bit pairs tiled greedily from the right end of ``w``."""
    k = 0
    i = len(w)
    while i >= 2 and w[i - 1] == w[i - 2]:
        k += 1
        i -= 2
    return k


def decode_word(w: Word) -> tuple[int, int]:
    """Total inverse of :func:`encode_pair`; anything that is not a code maps to (0, 0)."""
    check_word(w)
    k = doubled_suffix_pairs(w)
    cut = len(w) - 2 * k
    if cut < 2 or w[cut - 2:cut] != SEPARATOR:
        return (0, 0)
    return index_of_word(w[:cut - 2]), index_of_word(w[cut::2])


def ell_index(n: int, m: int) -> int:
    return index_of_word(encode_pair(n, m))


def decode_index(i: int) -> tuple[int, int]:
    return decode_word(word_of_index(i))


@dataclass(frozen=True)
class LinearLaw:
    a: int
    b: int
    m: int

    def __call__(self, n: int) -> int:
        return self.a * n + self.b


def ratio(m: int) -> int:
    return 1 << (2 * len(word_of_index(m)) + 2)


def linear_law(m: int, probe: range = range(64)) -> LinearLaw:
    """Fit ``ell_index(n, m) = a*n + b`` from the probe range and check it exactly."""
    if len(probe) == 0:
        raise ValueError("probe range is empty")
    n0 = probe[0]
    first = ell_index(n0, m)
    a = ell_index(n0 + 1, m) - first
    b = first - a * n0
    law = LinearLaw(a, b, m)
    if a != ratio(m):
        raise LawViolation(f"ratio {a} != 2^(2|x_m|+2) = {ratio(m)}")
    for n in probe:
        if ell_index(n, m) != law(n):
            raise LawViolation(f"ell_index({n}, {m}) off the fitted line")
    return law


# -- tables as words ---------------------------------------------------------

def table_word(table: MachineTable) -> Word:
    """Binary serialization of a table: its text form, eight bits per byte."""
    return "".join(format(b, "08b") for b in format_table(table).encode("ascii"))


def table_of_word(w: Word) -> MachineTable:
    """Inverse of :func:`table_word`; junk decodes to the empty (identity) table."""
    if len(w) % 8:
        return EMPTY_TABLE
    try:
        text = bytes(int(w[i:i + 8], 2) for i in range(0, len(w), 8)).decode("ascii")
        return parse_table(text)
    except (UnicodeDecodeError, TableError, ValueError):
        return EMPTY_TABLE


def table_index(table: MachineTable) -> int:
    return index_of_word(table_word(table))


def table_of_index(m: int) -> MachineTable:
    return table_of_word(word_of_index(m))


# -- map into the table numbering ---------------------------------------------

@lru_cache(maxsize=None)
def _standard_image(n: int, m: int) -> int:
    from .ell import emulate_ell

    return table_index(emulate_ell(table_of_index(m), n))


_prefix_sums = [0]


def to_standard(i: int) -> int:
    """Strictly increasing map from labeled indices into table indices.

    ``i`` is decoded to <n, m>, the labeled machine is emulated by a 1-tape
    table, and the canonical index ``s(i)`` of that table's serialization is
    taken.  The result is the running sum of ``s(j) + 1`` over ``j <= i``, which
    keeps the map strictly increasing and never below ``s(i)`` or ``i``.  Cost
    is linear in ``i`` (sums are cached).
    """
    if i < 0:
        raise ValueError("index must be a natural number")
    while len(_prefix_sums) <= i + 1:
        j = len(_prefix_sums) - 1
        _prefix_sums.append(_prefix_sums[-1] + _standard_image(*decode_index(j)) + 1)
    return _prefix_sums[i + 1]


def standard_table(i: int) -> MachineTable:
    """The emulating 1-tape table whose serialization feeds :func:`to_standard`."""
    from .ell import emulate_ell

    n, m = decode_index(i)
    return emulate_ell(table_of_index(m), n)

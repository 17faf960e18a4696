"""Zimin formulas with reversal Z(m, n).

Z(m, 0) is the block x1# ... xm# (# = both orientations of the variable) and
Z(m, n) = Z(m, n-1) y_n Z(m, n-1).  The fragment set explodes as
(2^m)^(2^n), so the primary representation is an implicit slot template: a
sequence of slots where an X slot matches either orientation of its variable
and a y slot matches exactly its one-way variable.  Explicit enumeration
exists for cross-validation and tiny cases only.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Tuple

from .formulas import EMPTY_FORMULA, FormulaR, PatternR, Sym
from .morphisms import SearchBudget, SymbolicMorphism, _run_symbolic

ENUMERATION_GUARD = 65536

# Slots are ("x", i) for a two-way block position or ("y", j) for a one-way
# variable position; variables render as x1..xm / y1..yn.
Slot = Tuple[str, int]


def x_name(i: int) -> str:
    return f"x{i}"


def y_name(j: int) -> str:
    return f"y{j}"


@dataclass(frozen=True)
class ZiminStats:
    fragment_count: int
    fragment_length: int


def stats(m: int, n: int) -> ZiminStats:
    """Closed forms: (2^m)^(2^n) fragments, each of length (m+1)*2^n - 1."""
    if m < 0 or n < 0:
        raise ValueError("m and n must be >= 0")
    return ZiminStats((2**m) ** (2**n), (m + 1) * 2**n - 1)


def _build_slots(m: int, n: int) -> Tuple[Slot, ...]:
    block = tuple(("x", i) for i in range(1, m + 1))
    slots = block
    for j in range(1, n + 1):
        slots = slots + (("y", j),) + slots
    return slots


@dataclass(frozen=True)
class ZiminTemplate:
    """Implicit representation of Z(m, n) as a slot sequence."""

    m: int
    n: int
    slots: Tuple[Slot, ...]

    @property
    def length(self) -> int:
        return len(self.slots)

    def render(self) -> str:
        """Human form with X slots uppercase, e.g. "X1 y1 X1"."""
        return " ".join(f"X{i}" if kind == "x" else f"y{i}" for kind, i in self.slots)

    def slot_matches(self, slot: Slot, sym: Sym) -> bool:
        kind, i = slot
        if kind == "x":
            return sym.var == x_name(i)
        return sym.var == y_name(i) and not sym.mirrored

    def window_matches(self, start: int, syms: Tuple[Sym, ...]) -> bool:
        return all(self.slot_matches(self.slots[start + k], s) for k, s in enumerate(syms))


_template_cache: Dict[Tuple[int, int], ZiminTemplate] = {}


def template(m: int, n: int) -> ZiminTemplate:
    if m < 0 or n < 0:
        raise ValueError("m and n must be >= 0")
    key = (m, n)
    if key not in _template_cache:
        _template_cache[key] = ZiminTemplate(m, n, _build_slots(m, n))
    return _template_cache[key]


def is_zimin_factor(u: PatternR, m: int, n: int) -> bool:
    """True iff u is a factor of some fragment of Z(m, n).

    Checked against the slot template: some window matches u position-wise.
    Foreign variables or mirrored y symbols simply fail to match (False, not
    an error).
    """
    tpl = template(m, n)
    ln = len(u)
    if ln > tpl.length:
        return False
    syms = u.syms
    return any(tpl.window_matches(t, syms) for t in range(tpl.length - ln + 1))


def enumerate_fragments(m: int, n: int) -> FormulaR:
    """The explicit fragment set; guarded against blow-up."""
    st = stats(m, n)
    if st.fragment_count > ENUMERATION_GUARD:
        raise ValueError(
            f"Z({m},{n}) has {st.fragment_count} fragments, over the guard {ENUMERATION_GUARD}"
        )
    tpl = template(m, n)
    if not tpl.slots:
        return EMPTY_FORMULA
    x_positions = [k for k, (kind, _) in enumerate(tpl.slots) if kind == "x"]
    base = [
        Sym(x_name(i), False) if kind == "x" else Sym(y_name(i), False)
        for kind, i in tpl.slots
    ]
    fragments: List[PatternR] = []
    for bits in itertools.product((False, True), repeat=len(x_positions)):
        syms = list(base)
        for k, mirrored in zip(x_positions, bits):
            if mirrored:
                syms[k] = syms[k].toggled()
        fragments.append(PatternR(tuple(syms)))
    return FormulaR(fragments)


class TemplateTarget:
    """Division target backed by the implicit slot template.

    X slots match either orientation, so continuations branch over the
    orientation choices (unmirrored first, which keeps the candidate order
    canonical).
    """

    def __init__(self, tpl: ZiminTemplate):
        self.tpl = tpl
        self.max_fragment_len = tpl.length

    def initial_positions(self, min_len: int):
        return range(self.tpl.length - min_len + 1)

    def match(self, pos: int, offset: int, segment: Tuple[Sym, ...]) -> bool:
        start = pos + offset
        if start + len(segment) > self.tpl.length:
            return False
        return self.tpl.window_matches(start, segment)

    def available(self, pos: int, offset: int) -> int:
        return self.tpl.length - pos - offset

    def continuations(self, pos: int, offset: int, max_len: int) -> Iterable[Tuple[Sym, ...]]:
        slots = self.tpl.slots
        start = pos + offset
        limit = min(max_len, len(slots) - start)
        choices: List[Tuple[Sym, ...]] = []
        for k in range(start, start + limit):
            kind, i = slots[k]
            if kind == "x":
                choices.append((Sym(x_name(i), False), Sym(x_name(i), True)))
            else:
                choices.append((Sym(y_name(i), False),))
        prefixes: List[Tuple[Sym, ...]] = [()]
        for opts in choices:
            prefixes = [p + (s,) for p in prefixes for s in opts]
            yield from prefixes

    def contains(self, syms: Tuple[Sym, ...]) -> bool:
        tpl = self.tpl
        ln = len(syms)
        if ln > tpl.length:
            return False
        return any(tpl.window_matches(t, syms) for t in range(tpl.length - ln + 1))


def divides_zimin(
    phi: FormulaR, m: int, n: int, budget: Optional[SearchBudget] = None
) -> Optional[SymbolicMorphism]:
    """Search a division of phi into Z(m, n) against the implicit template.

    phi should be normalized (one-way variables unmirrored).  Image lengths
    are capped at the fragment length, so None at that bound is a proof of
    non-division.
    """
    return _run_symbolic(phi, TemplateTarget(template(m, n)), budget)


def sufficient_length(m: int, n: int, k: int) -> int:
    """Length from the pigeonhole argument: every word of this length over k
    letters admits an occurrence of Z(m, n) with a common fragment image.

    N(m, 0) = m and N(m, j) = k^L * (L + 1) + L with L = N(m, j-1).  Exact
    integers throughout; the bound is astronomically loose for n >= 2.
    """
    if m < 0 or n < 0:
        raise ValueError("m and n must be >= 0")
    if k < 1:
        raise ValueError("alphabet size must be >= 1")
    length = m
    for _ in range(n):
        length = k**length * (length + 1) + length
    return length

"""Symbolic patterns and formulas with reversal.

A pattern is a nonempty sequence of symbols, each a variable with or without
a mirror mark (written ``x~`` in the grammar).  A formula is a finite set of
patterns, its fragments; equality and hashing use the canonical sorted,
duplicate-free form so formulas can key memo tables.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Set, Tuple

_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_]*")

TWO_WAY = "two_way"
ONE_WAY = "one_way"


class FormulaSyntaxError(ValueError):
    """Raised on malformed formula text; carries the character position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


@dataclass(frozen=True, order=True)
class Sym:
    """One symbol: a variable, possibly marked as the mirror image."""

    var: str
    mirrored: bool = False

    def __str__(self) -> str:
        return self.var + ("~" if self.mirrored else "")

    def toggled(self) -> "Sym":
        return Sym(self.var, not self.mirrored)

    def key(self):
        return (self.var, self.mirrored)


@dataclass(frozen=True)
class PatternR:
    """A nonempty pattern with reversal (one formula fragment)."""

    syms: Tuple[Sym, ...]

    def __post_init__(self):
        if not self.syms:
            raise ValueError("patterns are nonempty; empty fragments are discarded at formula level")

    def __len__(self) -> int:
        return len(self.syms)

    def __iter__(self) -> Iterator[Sym]:
        return iter(self.syms)

    def __getitem__(self, index):
        if isinstance(index, slice):
            return self.syms[index]
        return self.syms[index]

    def key(self):
        return tuple(s.key() for s in self.syms)

    def __str__(self) -> str:
        return " ".join(str(s) for s in self.syms)

    def __repr__(self) -> str:
        return f"PatternR({str(self)!r})"


@dataclass(frozen=True, init=False)
class FormulaR:
    """A finite set of fragments, stored sorted and duplicate-free."""

    fragments: Tuple[PatternR, ...]

    def __init__(self, fragments: Iterable[PatternR] = ()):
        unique = {f.key(): f for f in fragments}
        object.__setattr__(self, "fragments", tuple(unique[k] for k in sorted(unique)))

    def __len__(self) -> int:
        return len(self.fragments)

    def __iter__(self) -> Iterator[PatternR]:
        return iter(self.fragments)

    def __bool__(self) -> bool:
        return bool(self.fragments)

    def __str__(self) -> str:
        if not self.fragments:
            return "{}"
        return " . ".join(str(f) for f in self.fragments)

    def __repr__(self) -> str:
        return f"FormulaR({str(self)!r})"


EMPTY_FORMULA = FormulaR()


def pattern(text: str) -> PatternR:
    """Parse a single fragment, e.g. ``"x y~ x"``."""
    formula = parse(text)
    if len(formula) != 1:
        raise ValueError(f"expected a single fragment, got {len(formula)}")
    return formula.fragments[0]


def formula(*fragment_texts: str) -> FormulaR:
    """Build a formula from fragment strings (test/scripting convenience)."""
    return FormulaR([pattern(t) for t in fragment_texts])


def parse(text: str) -> FormulaR:
    """Parse formula text: fragments separated by ".", symbols by whitespace.

    A symbol is an identifier optionally suffixed by "~" for the mirror
    image; "{}" denotes the empty formula.
    """
    if text.strip() == "{}":
        return EMPTY_FORMULA
    if not text.strip():
        raise FormulaSyntaxError("empty formula text (write {} for the empty formula)", 0)

    fragments: List[PatternR] = []
    syms: List[Sym] = []
    fragment_start = 0
    pos = 0
    n = len(text)

    def close_fragment(at: int):
        nonlocal syms
        if not syms:
            raise FormulaSyntaxError("empty fragment", at)
        fragments.append(PatternR(tuple(syms)))
        syms = []

    while pos < n:
        ch = text[pos]
        if ch.isspace():
            pos += 1
            continue
        if ch == ".":
            close_fragment(fragment_start)
            pos += 1
            fragment_start = pos
            continue
        match = _IDENT.match(text, pos)
        if not match:
            raise FormulaSyntaxError(f"unexpected character {ch!r}", pos)
        name = match.group()
        pos = match.end()
        mirrored = False
        if pos < n and text[pos] == "~":
            mirrored = True
            pos += 1
        syms.append(Sym(name, mirrored))
    close_fragment(fragment_start)
    return FormulaR(fragments)


def format_formula(phi: FormulaR) -> str:
    """Canonical text form; fragments come out sorted."""
    return str(phi)


def pattern_vars(p: PatternR) -> Set[str]:
    return {s.var for s in p.syms}


def formula_vars(phi: FormulaR) -> Set[str]:
    out: Set[str] = set()
    for frag in phi:
        out.update(pattern_vars(frag))
    return out


def flatten(obj):
    """Clear every mirror mark (patterns map to patterns, formulas to formulas)."""
    if isinstance(obj, PatternR):
        return PatternR(tuple(Sym(s.var, False) for s in obj.syms))
    if isinstance(obj, FormulaR):
        return FormulaR([flatten(f) for f in obj])
    raise TypeError(f"cannot flatten {obj!r}")


def d_reverse(p: PatternR) -> PatternR:
    """Reverse the symbol sequence and toggle every mirror mark (an involution)."""
    return PatternR(tuple(s.toggled() for s in reversed(p.syms)))


def d_reverse_syms(syms: Tuple[Sym, ...]) -> Tuple[Sym, ...]:
    return tuple(s.toggled() for s in reversed(syms))


def classify_vars(phi: FormulaR) -> Dict[str, str]:
    """Tag each occurring variable TWO_WAY or ONE_WAY.

    A variable is two-way when both orientations appear somewhere in the
    formula; absent variables are simply not reported.
    """
    plain: Set[str] = set()
    mirrored: Set[str] = set()
    for frag in phi:
        for s in frag:
            (mirrored if s.mirrored else plain).add(s.var)
    out: Dict[str, str] = {}
    for name in plain | mirrored:
        out[name] = TWO_WAY if (name in plain and name in mirrored) else ONE_WAY
    return out


def two_way_vars(phi: FormulaR) -> Set[str]:
    return {v for v, tag in classify_vars(phi).items() if tag == TWO_WAY}


def one_way_vars(phi: FormulaR) -> Set[str]:
    return {v for v, tag in classify_vars(phi).items() if tag == ONE_WAY}


def normalize(phi: FormulaR) -> FormulaR:
    """Flip variables that only ever appear mirrored, so every one-way
    variable appears unmirrored.  The result is equivalent to the input
    (they divide each other through the orientation swap)."""
    plain: Set[str] = set()
    mirrored: Set[str] = set()
    for frag in phi:
        for s in frag:
            (mirrored if s.mirrored else plain).add(s.var)
    flip = mirrored - plain
    if not flip:
        return phi
    new_fragments = []
    for frag in phi:
        new_fragments.append(
            PatternR(tuple(Sym(s.var, False) if s.var in flip else s for s in frag))
        )
    return FormulaR(new_fragments)


def factors_of(phi: FormulaR, length: int) -> Set[PatternR]:
    """All contiguous length-`length` subsequences of the fragments."""
    if length < 1:
        raise ValueError("factor length must be >= 1")
    out: Set[PatternR] = set()
    for frag in phi:
        for i in range(len(frag) - length + 1):
            out.add(PatternR(frag.syms[i : i + length]))
    return out


def delete_vars(phi: FormulaR, names: Iterable[str]) -> FormulaR:
    """Remove every occurrence (either orientation) of the given variables.

    Fragments are not split at deletion points; fragments left empty are
    discarded.  Freeness is not checked here; see classic.delete for the
    reduction-step variant.
    """
    drop = set(names)
    new_fragments = []
    for frag in phi:
        kept = tuple(s for s in frag if s.var not in drop)
        if kept:
            new_fragments.append(PatternR(kept))
    return FormulaR(new_fragments)


def rename_vars(phi: FormulaR, mapping: Dict[str, str]) -> FormulaR:
    """Rename variables (used by tests for invariance checks)."""
    return FormulaR(
        [PatternR(tuple(Sym(mapping.get(s.var, s.var), s.mirrored) for s in f)) for f in phi]
    )

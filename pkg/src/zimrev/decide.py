"""Top-level verdicts for formulas with reversal.

The decision logic, for a normalized formula with m two-way and n one-way
variables:

* a division into Z(m, n) proves unavoidability for any m, n;
* with m = 0 the formula has no mirror marks and the classic
  characterization decides: no division means avoidable;
* with n <= 2 a failed division at the sound bound means avoidable
  (contrapositive of the characterization for at most two one-way
  variables), upgraded to a lemma certificate when the battery fires;
* otherwise a firing lemma proves avoidability, and a failed division alone
  leaves the formula undecided: finite avoiding words are attached as
  evidence but never justify an avoidable status.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Optional, Tuple, Union

from .classic import ReductionChain, decide_classic
from .formulas import (
    ONE_WAY,
    TWO_WAY,
    FormulaR,
    PatternR,
    classify_vars,
    delete_vars,
    factors_of,
    flatten,
    normalize,
    pattern_vars,
)
from .morphisms import SearchBudget, SearchBudgetExceeded, SymbolicMorphism, occurs
from .oracle import generate_power_free, search_avoiding_word
from .words import (
    GLYPHS,
    GeneratedSpec,
    OmegaWordSpec,
    PeriodicSpec,
    ProductSpec,
    Word,
    alphabet,
    spec_to_json,
    word,
    word_to_json,
)
from .zimin import divides_zimin, stats

UNAVOIDABLE = "unavoidable"
AVOIDABLE = "avoidable"
UNKNOWN = "unknown"

WITNESS_PREFIX_LEN = 300
WITNESS_IMAGE_BOUND = 30

_WITNESS_STEPS = 2_000_000
_AVOIDER_STEPS = 150_000  # per alphabet size; a stuck tree just moves on
_EVIDENCE_LENGTH = 50

# Avoidability over k letters implies avoidability over k+1 (the same word
# works), so starting at 3 only skips alphabets a ternary success would
# subsume; binary avoider trees can be huge and are never needed.
_AVOIDER_ALPHABETS = (3, 4, 5)


@dataclass
class ZiminDivisionCert:
    m: int
    n: int
    morphism: SymbolicMorphism

    def to_json(self) -> dict:
        return {"kind": "zimin_division", "m": self.m, "n": self.n, "morphism": self.morphism.to_json()}


@dataclass
class ContrapositiveCert:
    """Avoidable because the division into Z(m, n) failed at the sound bound
    and the characterization applies (n <= 2, or m = 0 where the classic
    characterization covers every n)."""

    m: int
    n: int

    def to_json(self) -> dict:
        return {"kind": "theorem9_contrapositive", "m": self.m, "n": self.n}


@dataclass
class LemmaCert:
    name: str
    witness: OmegaWordSpec

    def to_json(self) -> dict:
        return {"kind": "lemma", "name": self.name, "witness": spec_to_json(self.witness)}


@dataclass
class EvidenceCert:
    """A finite avoiding word: evidence only, never a proof of avoidability."""

    word: Word
    alphabet_size: int
    length: int

    def to_json(self) -> dict:
        return {
            "kind": "evidence_only",
            "word": word_to_json(self.word),
            "alphabet_size": self.alphabet_size,
            "length": self.length,
        }


Certificate = Union[ZiminDivisionCert, ContrapositiveCert, LemmaCert, EvidenceCert]


@dataclass
class Verdict:
    formula: FormulaR
    status: str
    m: int
    n: int
    certificate: Optional[Certificate]
    evidence: Optional[dict] = None
    reason: Optional[str] = None

    def to_json(self) -> dict:
        out = {
            "formula": str(self.formula),
            "m": self.m,
            "n": self.n,
            "status": self.status,
            "certificate": None if self.certificate is None else self.certificate.to_json(),
        }
        if self.evidence is not None:
            out["evidence"] = self.evidence
        if self.reason is not None:
            out["reason"] = self.reason
        return out


# ---------------------------------------------------------------------------
# Corollary-style counting checks.


def check_doubled_pattern(p: PatternR) -> bool:
    """Every variable of the flattening appears at least twice."""
    counts: Dict[str, int] = {}
    for s in p:
        counts[s.var] = counts.get(s.var, 0) + 1
    return all(c >= 2 for c in counts.values())


def check_length_bound(p: PatternR) -> bool:
    """|p| >= 2^n over n distinct variables forces avoidability."""
    return len(p) >= 2 ** len(pattern_vars(p))


# ---------------------------------------------------------------------------
# Witness construction.  Generated components are built once at the default
# verification scale and cached; flat-route avoider prefixes are searched at
# the default image bound, which is what the bounded witness check uses.


@lru_cache(maxsize=None)
def _power_free_component(num_vars: int, prefix_len: int) -> Optional[GeneratedSpec]:
    half = 2 ** (num_vars - 1)
    q = half + 2
    if q > len(GLYPHS):
        return None
    alpha = Fraction(half + 1, half)
    report = generate_power_free(q, alpha, prefix_len, SearchBudget(1, _WITNESS_STEPS))
    if report.word is None:
        return None
    return GeneratedSpec(q, alpha, report.word)


@lru_cache(maxsize=None)
def _square_free_component(prefix_len: int) -> Optional[GeneratedSpec]:
    report = generate_power_free(3, Fraction(2), prefix_len, SearchBudget(1, _WITNESS_STEPS))
    if report.word is None:
        return None
    return GeneratedSpec(3, Fraction(2), report.word)


_flat_witness_cache: Dict[Tuple[FormulaR, int], Optional[ProductSpec]] = {}


def _flat_witness(flat: FormulaR, prefix_len: int) -> Optional[ProductSpec]:
    key = (flat, prefix_len)
    if key not in _flat_witness_cache:
        spec = None
        # fast path: the canonical square-free word avoids any flat whose
        # instances force a square, which covers most desk-scale flats
        square_free = _square_free_component(prefix_len)
        if square_free is not None and occurs(
            flat, square_free.prefix, SearchBudget(WITNESS_IMAGE_BOUND, _WITNESS_STEPS)
        ) is None:
            spec = ProductSpec(square_free, PeriodicSpec(word("123")))
        else:
            for k in _AVOIDER_ALPHABETS:
                report = search_avoiding_word(
                    flat, k, prefix_len, SearchBudget(WITNESS_IMAGE_BOUND, _AVOIDER_STEPS)
                )
                if report.word is not None:
                    spec = ProductSpec(
                        GeneratedSpec(k, None, report.word), PeriodicSpec(word("123"))
                    )
                    break
        _flat_witness_cache[key] = spec
    return _flat_witness_cache[key]


# ---------------------------------------------------------------------------
# The lemma battery.


def lemma_two_way_middle(phi: FormulaR) -> Optional[LemmaCert]:
    """Some two-way y has xy, yz and xz among the flattened length-2 factors;
    then (123)^omega avoids the formula."""
    classes = classify_vars(phi)
    two_ways = sorted(v for v, tag in classes.items() if tag == TWO_WAY)
    if not two_ways:
        return None
    pairs = {(p[0].var, p[1].var) for p in factors_of(flatten(phi), 2)}
    for y in two_ways:
        lefts = sorted(x for (x, b) in pairs if b == y)
        rights = sorted(z for (a, z) in pairs if a == y)
        for x in lefts:
            for z in rights:
                if (x, z) in pairs:
                    return LemmaCert("two_way_middle", PeriodicSpec(word("123")))
    return None


def lemma_all_two_way(phi: FormulaR) -> Optional[LemmaCert]:
    """Every variable two-way and some variable repeats inside one flattened
    fragment; then (12...m')^omega avoids the formula, m' = 2^(n-1)+1.

    At m' = 2 the two-letter cycle has reversible factors beyond single
    letters, so witnesses are only ever trusted through the bounded
    occurrence check, never through that structural claim."""
    classes = classify_vars(phi)
    if not classes or any(tag == ONE_WAY for tag in classes.values()):
        return None
    if not _some_var_repeats_in_fragment(phi):
        return None
    m_prime = 2 ** (len(classes) - 1) + 1
    if m_prime > len(GLYPHS):
        return None
    return LemmaCert("all_two_way", PeriodicSpec(Word(alphabet(m_prime))))


def lemma_one_way_twice(phi: FormulaR, prefix_len: int = WITNESS_PREFIX_LEN) -> Optional[LemmaCert]:
    """Every one-way variable repeats inside some fragment; then a power-free
    word over 2^(n-1)+2 letters paired with (123)^omega avoids the formula."""
    classes = classify_vars(phi)
    one_ways = [v for v, tag in classes.items() if tag == ONE_WAY]
    if not one_ways:
        return None
    for y in one_ways:
        if not _var_repeats_in_some_fragment(phi, y):
            return None
    component = _power_free_component(len(classes), prefix_len)
    if component is None:
        return None
    return LemmaCert("one_way_twice", ProductSpec(component, PeriodicSpec(word("123"))))


def lemma_flat(phi: FormulaR, prefix_len: int = WITNESS_PREFIX_LEN) -> Optional[LemmaCert]:
    """The flattening is classically avoidable; then w + (123)^omega avoids
    the formula, where w avoids the flattening."""
    flat = flatten(phi)
    if decide_classic(flat, with_reduction=False).unavoidable:
        return None
    witness = _flat_witness(flat, prefix_len)
    if witness is None:
        return None
    return LemmaCert("flat", witness)


def _some_var_repeats_in_fragment(phi: FormulaR) -> bool:
    for frag in phi:
        counts: Dict[str, int] = {}
        for s in frag:
            counts[s.var] = counts.get(s.var, 0) + 1
            if counts[s.var] >= 2:
                return True
    return False


def _var_repeats_in_some_fragment(phi: FormulaR, name: str) -> bool:
    for frag in phi:
        if sum(1 for s in frag if s.var == name) >= 2:
            return True
    return False


def _lemma_battery(phi_n: FormulaR, prefix_len: int) -> Optional[LemmaCert]:
    """Cheapest checks first; the order affects only the certificate."""
    if len(phi_n) == 1:
        frag = phi_n.fragments[0]
        if check_doubled_pattern(frag):
            witness = _flat_witness(flatten(phi_n), prefix_len)
            if witness is not None:
                return LemmaCert("doubled", witness)
        if check_length_bound(frag):
            witness = _flat_witness(flatten(phi_n), prefix_len)
            if witness is not None:
                return LemmaCert("length_bound", witness)
    for rule in (lemma_two_way_middle, lemma_all_two_way):
        cert = rule(phi_n)
        if cert is not None:
            return cert
    cert = lemma_one_way_twice(phi_n, prefix_len)
    if cert is not None:
        return cert
    return lemma_flat(phi_n, prefix_len)


def build_witness(cert: Certificate) -> OmegaWordSpec:
    """The avoiding omega-word spec of a lemma certificate (generated
    components were materialized when the certificate was built)."""
    if not isinstance(cert, LemmaCert):
        raise ValueError(f"only lemma certificates carry witnesses, got {cert!r}")
    return cert.witness


# ---------------------------------------------------------------------------
# The decision.


def _search_evidence(phi: FormulaR, length: int, max_alphabet: int) -> Optional[EvidenceCert]:
    if max_alphabet >= 3 and length == _EVIDENCE_LENGTH:
        square_free = _square_free_component(length)
        if square_free is not None and occurs(
            phi, square_free.prefix, SearchBudget(length, _WITNESS_STEPS)
        ) is None:
            return EvidenceCert(square_free.prefix, 3, length)
    for k in _AVOIDER_ALPHABETS:
        if k > max_alphabet:
            break
        report = search_avoiding_word(phi, k, length, SearchBudget(length, _AVOIDER_STEPS))
        if report.word is not None:
            return EvidenceCert(report.word, k, length)
    return None


def decide(
    phi: FormulaR,
    budget: Optional[SearchBudget] = None,
    *,
    evidence: bool = False,
    witness_prefix_len: int = WITNESS_PREFIX_LEN,
    evidence_length: int = _EVIDENCE_LENGTH,
    evidence_max_alphabet: int = 5,
) -> Verdict:
    """Decide avoidability of a formula with reversal.

    The formula is normalized internally.  The division search always runs at
    the sound image bound (the Z(m, n) fragment length); the caller's budget
    contributes the step limit.  Pass ``evidence=True`` to attach a finite
    avoiding word to avoidable verdicts; undecided verdicts always try.
    """
    budget = budget or SearchBudget()
    phi_n = normalize(phi)
    classes = classify_vars(phi_n)
    m = sum(1 for tag in classes.values() if tag == TWO_WAY)
    n = sum(1 for tag in classes.values() if tag == ONE_WAY)
    sound = SearchBudget(
        max_image_len=max(1, stats(m, n).fragment_length), max_steps=budget.max_steps
    )
    try:
        division = divides_zimin(phi_n, m, n, sound)
    except SearchBudgetExceeded:
        return Verdict(
            phi, UNKNOWN, m, n, None,
            reason="division search exceeded the step budget at the sound image bound",
        )
    if division is not None:
        return Verdict(phi, UNAVOIDABLE, m, n, ZiminDivisionCert(m, n, division))

    if m == 0 or n <= 2:
        cert: Optional[Certificate] = None
        if m > 0:
            cert = _lemma_battery(phi_n, witness_prefix_len)
        if cert is None:
            cert = ContrapositiveCert(m, n)
        verdict = Verdict(phi, AVOIDABLE, m, n, cert)
        if evidence:
            found = _search_evidence(phi_n, evidence_length, evidence_max_alphabet)
            if found is not None:
                verdict.evidence = found.to_json()
        return verdict

    cert = _lemma_battery(phi_n, witness_prefix_len)
    if cert is not None:
        return Verdict(phi, AVOIDABLE, m, n, cert)
    found = _search_evidence(phi_n, evidence_length, evidence_max_alphabet)
    return Verdict(
        phi,
        UNKNOWN,
        m,
        n,
        found,
        reason="no division at the sound bound and no lemma fires; "
        "a finite avoiding word is not a proof of avoidability",
    )


# ---------------------------------------------------------------------------
# Conjecture bookkeeping: deleting all two-way variables from an unavoidable
# formula should leave an unavoidable formula.  The probe only reports; it
# never feeds back into decide.


@dataclass
class Conjecture2Report:
    formula: FormulaR
    residual: FormulaR
    residual_status: str
    residual_reduction: Optional[ReductionChain]
    phi_status: Optional[str] = None

    def to_json(self) -> dict:
        out = {
            "formula": str(self.formula),
            "residual": str(self.residual),
            "residual_status": self.residual_status,
            "residual_reduction": None
            if self.residual_reduction is None
            else self.residual_reduction.to_json(),
        }
        if self.phi_status is not None:
            out["phi_status"] = self.phi_status
        return out


def conjecture2_probe(phi: FormulaR, phi_status: Optional[str] = None) -> Conjecture2Report:
    phi_n = normalize(phi)
    two_ways = {v for v, tag in classify_vars(phi_n).items() if tag == TWO_WAY}
    residual = delete_vars(phi_n, two_ways)
    decision = decide_classic(residual)
    return Conjecture2Report(phi, residual, decision.status, decision.reduction, phi_status)

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zimrev.decide import (
    AVOIDABLE,
    UNAVOIDABLE,
    ContrapositiveCert,
    LemmaCert,
    ZiminDivisionCert,
    build_witness,
    check_doubled_pattern,
    check_length_bound,
    conjecture2_probe,
    decide,
    lemma_all_two_way,
    lemma_flat,
    lemma_one_way_twice,
    lemma_two_way_middle,
)
from zimrev.formulas import EMPTY_FORMULA, FormulaR, PatternR, Sym, parse, pattern, rename_vars
from zimrev.morphisms import SearchBudget
from zimrev.oracle import WITNESS_OK, verify_witness_prefix
from zimrev.words import GeneratedSpec, PeriodicSpec, ProductSpec, word
from zimrev.zimin import is_zimin_factor
from zimrev.morphisms import apply_symbolic


def sharp_formula(slot_text: str) -> FormulaR:
    """Expand '#'-marked slots into all orientation choices, e.g. 'x# y1 x#'."""
    slots = slot_text.split()
    sharp_positions = [i for i, s in enumerate(slots) if s.endswith("#")]
    base = [Sym(s.rstrip("#")) for s in slots]
    fragments = []
    for bits in itertools.product((False, True), repeat=len(sharp_positions)):
        syms = list(base)
        for i, mirrored in zip(sharp_positions, bits):
            if mirrored:
                syms[i] = syms[i].toggled()
        fragments.append(PatternR(tuple(syms)))
    return FormulaR(fragments)


class TestDecide:
    def test_xyxr_unavoidable(self):
        v = decide(parse("x y x~"))
        assert v.status == UNAVOIDABLE
        assert isinstance(v.certificate, ZiminDivisionCert)
        assert (v.m, v.n) == (1, 1)
        h = v.certificate.morphism
        for frag in parse("x y x~"):
            assert is_zimin_factor(apply_symbolic(h, frag), 1, 1)

    def test_xxr_avoidable(self):
        v = decide(parse("x x~"))
        assert v.status == AVOIDABLE
        assert (v.m, v.n) == (1, 0)

    def test_classic_case_goes_through_zimin_word(self):
        v = decide(parse("x y x"))
        assert v.status == UNAVOIDABLE
        assert (v.m, v.n) == (0, 2)

    def test_square_avoidable_m0(self):
        v = decide(parse("x x"))
        assert v.status == AVOIDABLE
        assert isinstance(v.certificate, ContrapositiveCert)

    def test_empty_formula_unavoidable(self):
        assert decide(EMPTY_FORMULA).status == UNAVOIDABLE

    def test_section5_formula_divides_z13(self):
        phi = sharp_formula("x# y1 x# y2 x# y3 x# y1 x# y2 x#")
        v = decide(phi)
        assert v.status == UNAVOIDABLE
        assert isinstance(v.certificate, ZiminDivisionCert)
        assert (v.certificate.m, v.certificate.n) == (1, 3)

    def test_avoidable_with_two_one_way_gets_contrapositive_or_lemma(self):
        v = decide(parse("x y x y x"))  # length 5 over 2 one-way vars
        assert v.status == AVOIDABLE

    def test_evidence_attachment(self):
        v = decide(parse("x x"), evidence=True)
        assert v.status == AVOIDABLE
        assert v.evidence is not None
        avoider = word(v.evidence["word"])
        from zimrev.morphisms import occurs

        assert occurs(parse("x x"), avoider, SearchBudget(len(avoider), 10**6)) is None

    def test_verdict_json_shape(self):
        data = decide(parse("x y x~")).to_json()
        assert data["status"] == "unavoidable"
        assert data["certificate"]["kind"] == "zimin_division"
        assert set(data) >= {"formula", "m", "n", "status", "certificate"}

    def test_multi_fragment_classic_formulas(self):
        # x y . y x reduces (delete x, then y) and divides y1 y2 y1
        assert decide(parse("x y . y x")).status == UNAVOIDABLE
        # adding the square x x makes the adjacency graph one component
        assert decide(parse("x y . y x . x x")).status == AVOIDABLE

    def test_multi_fragment_with_reversal(self):
        # both fragments embed into the two-way Zimin formula at m=1, n=1
        assert decide(parse("x y x~ . y x")).status == UNAVOIDABLE
        # a doubled one-way variable in one fragment blocks the division
        assert decide(parse("y x y . x~")).status == AVOIDABLE

    def test_mirror_free_formulas_match_classic_decision(self):
        from zimrev.classic import decide_classic

        for text in ["x", "x x", "x y x", "x y x y", "x y y x", "x y . y x", "x y z x z"]:
            phi = parse(text)
            expected = UNAVOIDABLE if decide_classic(phi).unavoidable else AVOIDABLE
            assert decide(phi).status == expected, text


class TestCorollaryChecks:
    def test_doubled(self):
        assert check_doubled_pattern(pattern("x y~ x y"))
        assert not check_doubled_pattern(pattern("x y x"))
        assert check_doubled_pattern(pattern("x x~"))

    def test_length_bound(self):
        assert check_length_bound(pattern("x x~"))
        assert not check_length_bound(pattern("x y x"))
        assert check_length_bound(pattern("x y x~ y"))


class TestLemmas:
    def test_two_way_middle_fires(self):
        cert = lemma_two_way_middle(parse("x y~ . y z . x z"))
        assert cert is not None and cert.name == "two_way_middle"
        assert cert.witness == PeriodicSpec(word("123"))

    def test_two_way_middle_needs_all_three_factors(self):
        assert lemma_two_way_middle(parse("x y~ . y z")) is None

    def test_two_way_middle_needs_two_way_middle_var(self):
        assert lemma_two_way_middle(parse("x y . y z . x z")) is None

    def test_all_two_way_fires_on_xxr(self):
        cert = lemma_all_two_way(parse("x x~"))
        assert cert is not None and cert.name == "all_two_way"
        assert cert.witness == PeriodicSpec(word("12"))

    def test_all_two_way_fires_n2(self):
        cert = lemma_all_two_way(parse("x y~ y x~"))
        assert cert is not None
        assert cert.witness == PeriodicSpec(word("123"))

    def test_all_two_way_requires_no_one_way(self):
        assert lemma_all_two_way(parse("x y x~")) is None

    def test_all_two_way_requires_repeat(self):
        assert lemma_all_two_way(parse("x x~ . y y~")) is not None
        assert lemma_all_two_way(parse("x . x~")) is None

    def test_one_way_twice_fires(self):
        cert = lemma_one_way_twice(parse("y x y . x~"))
        assert cert is not None and cert.name == "one_way_twice"
        assert isinstance(cert.witness, ProductSpec)
        left = cert.witness.left
        assert isinstance(left, GeneratedSpec)
        assert left.alphabet_size == 4  # 2^(2-1) + 2

    def test_one_way_twice_needs_every_one_way_doubled(self):
        assert lemma_one_way_twice(parse("x y x~")) is None

    def test_one_way_twice_trivial_double(self):
        assert lemma_one_way_twice(parse("y y . x x~")) is not None

    def test_flat_fires_when_flattening_avoidable(self):
        cert = lemma_flat(parse("x y x~ y"))
        assert cert is not None and cert.name == "flat"

    def test_flat_does_not_fire_when_flattening_unavoidable(self):
        assert lemma_flat(parse("x y x~")) is None

    def test_flat_fires_on_xxr(self):
        assert lemma_flat(parse("x x~")) is not None


class TestWitnesses:
    def test_build_witness_only_for_lemmas(self):
        cert = lemma_two_way_middle(parse("x y~ . y z . x z"))
        assert build_witness(cert) == cert.witness
        with pytest.raises(ValueError):
            build_witness(ContrapositiveCert(1, 1))

    def test_lemma_witnesses_pass_bounded_check(self):
        cases = [
            ("x y~ . y z . x z", lemma_two_way_middle),
            ("x x~", lemma_all_two_way),
            ("y x y . x~", lemma_one_way_twice),
            ("x y x~ y", lemma_flat),
        ]
        for text, rule in cases:
            phi = parse(text)
            cert = rule(phi)
            assert cert is not None, text
            report = verify_witness_prefix(cert.witness, phi, prefix_len=120, image_bound=12)
            assert report.mode == WITNESS_OK, (text, report.detail)

    def test_decide_certificates_never_contradict_division(self):
        # an unavoidable verdict and a verified lemma witness must not coexist
        for text in ["x y x~", "x x~", "x y~ x", "x x", "x y x y"]:
            v = decide(parse(text))
            if v.status == UNAVOIDABLE:
                assert not isinstance(v.certificate, LemmaCert)


class TestConjecture2Probe:
    def test_section5_example(self):
        phi = sharp_formula("x# y1 x# y2 x# y3 x# y1 x# y2 x#")
        report = conjecture2_probe(phi, "unavoidable")
        assert str(report.residual) == "y1 y2 y3 y1 y2"
        assert report.residual_status == UNAVOIDABLE
        assert [sorted(s.deleted) for s in report.residual_reduction.steps] == [["y1"], ["y2"], ["y3"]]

    def test_single_residual_variable(self):
        report = conjecture2_probe(parse("x y x~"))
        assert str(report.residual) == "y"
        assert report.residual_status == UNAVOIDABLE

    def test_empty_residual_unavoidable_vacuously(self):
        report = conjecture2_probe(parse("x x~"))
        assert report.residual == EMPTY_FORMULA
        assert report.residual_status == UNAVOIDABLE


# ---------------------------------------------------------------------------
# Properties

vars_st = st.sampled_from(["x", "y"])
syms_st = st.builds(Sym, vars_st, st.booleans())
patterns_st = st.lists(syms_st, min_size=1, max_size=4).map(lambda s: PatternR(tuple(s)))
formulas_st = st.lists(patterns_st, min_size=1, max_size=2).map(FormulaR)


@settings(max_examples=40)
@given(formulas_st)
def test_decide_invariant_under_renaming(phi):
    renamed = rename_vars(phi, {"x": "u", "y": "v"})
    assert decide(phi).status == decide(renamed).status


@settings(max_examples=40)
@given(formulas_st)
def test_decide_invariant_under_normalization_input(phi):
    from zimrev.formulas import normalize

    assert decide(phi).status == decide(normalize(phi)).status

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ontoforge.tripleparse import (
    CandidateTriple,
    format_triples,
    normalize_label,
    parse_triples,
    similarity,
)


def refs(report):
    return [(t.line_number, t.subject, t.relation, t.object) for t in report.triples]


def test_paper_angle_bracket_notation():
    report = parse_triples("<covid19, is, pandemic>")
    assert refs(report) == [(1, "covid19", "is", "pandemic")]


def test_numbered_list_two_triples_in_order():
    text = "1. (Comirnaty, manufacturer, Pfizer-BioNTech)\n2. (ZF2001, manufacturer, Novavax)"
    report = parse_triples(text)
    assert refs(report) == [
        (1, "Comirnaty", "manufacturer", "Pfizer-BioNTech"),
        (2, "ZF2001", "manufacturer", "Novavax"),
    ]


def test_preamble_line_skipped_with_reason():
    report = parse_triples("Sure! Here are the facts:\n1. (a, b, c)")
    assert refs(report) == [(2, "a", "b", "c")]
    assert report.skipped_lines == [(1, "no-triple-pattern")]


def test_comma_rule_keeps_extra_fields_in_object():
    report = parse_triples("(a, b, c, d)")
    assert refs(report) == [(1, "a", "b", "c, d")]


def test_dashed_and_bare_forms():
    report = parse_triples("- (a, b, c)\n(d, e, f)\n3. <g, h, i>")
    assert [t.subject for t in report.triples] == ["a", "d", "g"]


def test_blank_lines_ignored_entirely():
    report = parse_triples("\n\n1. (a, b, c)\n\n")
    assert len(report.triples) == 1
    assert report.skipped_lines == []


def test_two_field_line_skipped():
    report = parse_triples("(a, b)")
    assert report.triples == []
    assert report.skipped_lines == [(1, "not-three-fields")]


def test_punctuation_only_fields_skipped():
    report = parse_triples("(., ;, !)")
    assert report.triples == []
    assert report.skipped_lines == [(1, "empty-field")]


def test_sentinel_line_recorded():
    report = parse_triples("NONE")
    assert report.triples == []
    assert report.skipped_lines == [(1, "sentinel")]
    assert report.format_detected == "sentinel"


def test_format_detected_tags():
    assert parse_triples("1. (a, b, c)").format_detected == "numbered"
    assert parse_triples("(a, b, c)").format_detected == "bare"
    assert parse_triples("- (a, b, c)").format_detected == "dashed"
    assert parse_triples("1. (a, b, c)\n(d, e, f)").format_detected == "mixed"
    assert parse_triples("").format_detected == "none"


def test_candidate_metadata():
    report = parse_triples("1. (a, b, c)", transcript_id="abc", source="provided_text")
    triple = report.triples[0]
    assert triple.transcript_id == "abc"
    assert triple.source == "provided_text"
    assert triple.ref == ("abc", 1)


def test_status_transitions_enforced():
    c = CandidateTriple(subject="a", relation="b", object="c")
    accepted = c.decide("accepted")
    assert accepted.status == "accepted"
    with pytest.raises(ValueError):
        accepted.decide("rejected")
    with pytest.raises(ValueError):
        c.decide("edited")  # edit without replacement
    with pytest.raises(ValueError):
        c.decide("accepted", ("x", "y", "z"))


def test_edited_effective_fields():
    c = CandidateTriple(subject="a", relation="b", object="c")
    edited = c.decide("edited", ("a", "b", "d"))
    assert edited.effective_fields() == ("a", "b", "d")


# --- normalize_label ------------------------------------------------------


def test_normalize_examples():
    assert normalize_label("  Fever. ") == "fever"
    assert normalize_label("Loss of Taste") == "loss of taste"
    assert normalize_label("") == ""


@given(st.text(max_size=60))
def test_normalize_idempotent(text):
    once = normalize_label(text)
    assert normalize_label(once) == once


# --- similarity -----------------------------------------------------------


def test_similarity_paper_redundancy_pair_is_exactly_point_six():
    a = "Reduction in tourism spending"
    b = "Decrease in tourism spending"
    assert similarity(a, b) == 0.6


def test_similarity_identity_and_disjoint():
    assert similarity("fever", "fever") == 1.0
    assert similarity("fever", "cough") == 0.0


@given(st.text(max_size=40), st.text(max_size=40))
def test_similarity_bounds_and_symmetry(a, b):
    value = similarity(a, b)
    assert 0.0 <= value <= 1.0
    assert value == similarity(b, a)


@given(st.text(min_size=1, max_size=40).filter(lambda s: normalize_label(s)))
def test_similarity_reflexive_one(label):
    assert similarity(label, label) == 1.0


# --- totality and accounting ------------------------------------------------


@given(st.text(max_size=300))
def test_parse_never_raises_and_accounts_for_lines(text):
    report = parse_triples(text)
    non_blank = [n for n, line in enumerate(text.splitlines(), start=1) if line.strip()]
    covered = sorted(
        [t.line_number for t in report.triples] + [n for n, _ in report.skipped_lines]
    )
    assert covered == non_blank


# --- format/parser round trip -------------------------------------------------

_field = st.text(
    alphabet=st.characters(codec="utf-8", exclude_categories=("Cs", "Cc")), min_size=1, max_size=20
).filter(lambda s: ", " not in s and normalize_label(s))


@given(st.lists(st.tuples(_field, _field, _field), min_size=1, max_size=10))
def test_roundtrip_comma_free_triples(fields):
    triples = [CandidateTriple(subject=s, relation=r, object=o) for s, r, o in fields]
    text = format_triples(triples)
    report = parse_triples(text)
    assert [t.normalized() for t in report.triples] == [t.normalized() for t in triples]


def test_bulk_fuzz_sample():
    rng = random.Random(7)
    corpus = "abc(),.<>- \n\t123é中"
    for _ in range(2000):
        text = "".join(rng.choice(corpus) for _ in range(rng.randrange(0, 120)))
        report = parse_triples(text)
        non_blank = sum(1 for line in text.splitlines() if line.strip())
        assert len(report.triples) + len(report.skipped_lines) == non_blank

"""Judgment over candidate triples: schema conformance, near-duplicate
clustering, fact-check verdicts, and session metrics.

Violations and warnings annotate candidates for the curator; they never
auto-reject, because schema-deviating output can still be factually correct.
"""

import string
from dataclasses import dataclass, field

from ontoforge.kernels import normalize_label, pair_links, similarity
from ontoforge.ontology import label_key, relation_of
from ontoforge.tripleparse import FACTCHECK_SENTINEL

VIOLATION_KINDS = ("unknown_relation", "domain_mismatch", "range_mismatch")
VERDICTS = ("contradicted", "unconfirmed", "confirmed")
NEGATION_CUES = ("not", "no", "without", "never")

DEFAULT_DUPLICATE_THRESHOLD = 0.5
FACTCHECK_MATCH_THRESHOLD = 0.5


class IncompleteCurationError(ValueError):
    """A candidate is still undecided where a final status is required."""


class UnparseableFactCheckError(ValueError):
    """A fact-check response neither flagged triples nor carried the sentinel."""


@dataclass
class Violation:
    transcript_id: str
    line_number: int
    kind: str
    relation: str
    expected: str | None = None
    found: str | None = None

    def __post_init__(self):
        if self.kind not in VIOLATION_KINDS:
            raise ValueError(f"unknown violation kind {self.kind!r}")
        if self.kind != "unknown_relation" and not (self.expected and self.found):
            raise ValueError(f"{self.kind} requires expected and found concepts")

    @property
    def ref(self):
        return (self.transcript_id, self.line_number)

    def to_dict(self):
        return {
            "transcript_id": self.transcript_id,
            "line_number": self.line_number,
            "kind": self.kind,
            "relation": self.relation,
            "expected": self.expected,
            "found": self.found,
        }


@dataclass
class FactCheckVerdict:
    kg_triple: tuple[str, str, str]
    verdict: str
    evidence: str | None = None

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f"unknown verdict {self.verdict!r}")
        if self.verdict in ("contradicted", "confirmed") and not self.evidence:
            raise ValueError(f"{self.verdict} verdicts carry evidence")
        if self.verdict == "unconfirmed" and self.evidence is not None:
            raise ValueError("unconfirmed verdicts carry no evidence")

    def to_dict(self):
        return {"kg_triple": list(self.kg_triple), "verdict": self.verdict, "evidence": self.evidence}


@dataclass
class NegationWarning:
    transcript_id: str
    line_number: int
    cue: str
    sentence: str

    def to_dict(self):
        return {
            "transcript_id": self.transcript_id,
            "line_number": self.line_number,
            "cue": self.cue,
            "sentence": self.sentence,
        }


@dataclass
class SessionMetrics:
    mode: str
    generated_count: int
    correct_count: int
    gold_count: int | None = None
    extracted_count: int | None = None
    precision: float | None = None
    recall: float | None = None

    def __post_init__(self):
        if self.correct_count > self.generated_count:
            raise ValueError("correct_count cannot exceed generated_count")
        if (
            self.extracted_count is not None
            and self.gold_count is not None
            and self.extracted_count > self.gold_count
        ):
            raise ValueError("extracted_count cannot exceed gold_count")

    def to_dict(self):
        return {
            "mode": self.mode,
            "generated_count": self.generated_count,
            "correct_count": self.correct_count,
            "gold_count": self.gold_count,
            "extracted_count": self.extracted_count,
            "precision": self.precision,
            "recall": self.recall,
        }


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)
    clusters: list = field(default_factory=list)
    verdicts: list = field(default_factory=list)
    negation_warnings: list = field(default_factory=list)
    metrics: SessionMetrics | None = None

    def to_dict(self):
        return {
            "violations": [v.to_dict() for v in self.violations],
            "clusters": [
                {"id": i, "members": [list(ref) for ref in members]}
                for i, members in enumerate(self.clusters)
            ],
            "verdicts": [v.to_dict() for v in self.verdicts],
            "negation_warnings": [w.to_dict() for w in self.negation_warnings],
            "metrics": self.metrics.to_dict() if self.metrics else None,
        }


def check_conformance(candidates, ontology, kg):
    """Schema violations for each candidate; never drops or rejects anything.

    Subject/object typing comes from the KG's entity records; untyped labels
    cannot violate domain or range constraints.
    """
    violations = []
    for candidate in candidates:
        relation = relation_of(ontology, candidate.relation)
        if relation is None:
            violations.append(
                Violation(
                    transcript_id=candidate.transcript_id,
                    line_number=candidate.line_number,
                    kind="unknown_relation",
                    relation=candidate.relation,
                )
            )
            continue
        subject_entity = kg.entity_for(candidate.subject) if kg is not None else None
        if subject_entity is not None and subject_entity.concept is not None:
            if label_key(subject_entity.concept) != label_key(relation.domain):
                violations.append(
                    Violation(
                        transcript_id=candidate.transcript_id,
                        line_number=candidate.line_number,
                        kind="domain_mismatch",
                        relation=relation.name,
                        expected=relation.domain,
                        found=subject_entity.concept,
                    )
                )
        if not candidate.object_is_literal and kg is not None:
            object_entity = kg.entity_for(candidate.object)
            if object_entity is not None and object_entity.concept is not None:
                if label_key(object_entity.concept) != label_key(relation.range):
                    violations.append(
                        Violation(
                            transcript_id=candidate.transcript_id,
                            line_number=candidate.line_number,
                            kind="range_mismatch",
                            relation=relation.name,
                            expected=relation.range,
                            found=object_entity.concept,
                        )
                    )
    return violations


def find_duplicates(candidates, threshold=DEFAULT_DUPLICATE_THRESHOLD):
    """Near-duplicate clusters among candidates.

    Two candidates link when their relations match after normalization and
    both subject and object Jaccard similarities reach the threshold.
    Clusters are the connected components of the link graph; only clusters of
    two or more are returned, as lists of (transcript_id, line_number) refs
    in input order, ordered by their first member.
    """
    candidates = list(candidates)
    n = len(candidates)
    relations = [normalize_label(c.relation) for c in candidates]
    subjects = [normalize_label(c.subject) for c in candidates]
    objects = [normalize_label(c.object) for c in candidates]
    links = pair_links(relations, subjects, objects, threshold)

    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in links:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)

    components = {}
    for i in range(n):
        components.setdefault(find(i), []).append(i)
    clusters = []
    for root in sorted(components):
        members = components[root]
        if len(members) < 2:
            continue
        clusters.append([candidates[i].ref for i in sorted(members)])
    return clusters


def _matches(candidate, triple):
    return (
        normalize_label(candidate.relation) == normalize_label(triple.relation)
        and similarity(candidate.subject, triple.subject) >= FACTCHECK_MATCH_THRESHOLD
        and similarity(candidate.object, triple.object) >= FACTCHECK_MATCH_THRESHOLD
    )


def _evidence_line(candidate):
    return f"({candidate.subject}, {candidate.relation}, {candidate.object})"


def fact_check(kg_triples, flagged, regenerated=None):
    """Verdicts for KG triples given a parsed fact-check response.

    A triple the model flagged as wrong is contradicted; one the model
    re-derived (when a regeneration pass is supplied) is confirmed; anything
    else is unconfirmed — including wrong facts the model failed to flag,
    which must surface for review rather than be silently trusted.
    """
    sentinel_seen = any(reason == "sentinel" for _, reason in flagged.skipped_lines)
    if not flagged.triples and not sentinel_seen:
        raise UnparseableFactCheckError(
            f"fact-check response contained no triples and no {FACTCHECK_SENTINEL!r} sentinel"
        )
    verdicts = []
    for triple in kg_triples:
        flagged_match = next((c for c in flagged.triples if _matches(c, triple)), None)
        key = (triple.subject, triple.relation, triple.object)
        if flagged_match is not None:
            verdicts.append(
                FactCheckVerdict(key, "contradicted", evidence=_evidence_line(flagged_match))
            )
            continue
        regen_match = None
        if regenerated is not None:
            regen_match = next((c for c in regenerated.triples if _matches(c, triple)), None)
        if regen_match is not None:
            verdicts.append(
                FactCheckVerdict(key, "confirmed", evidence=_evidence_line(regen_match))
            )
        else:
            verdicts.append(FactCheckVerdict(key, "unconfirmed"))
    return verdicts


_SENTENCE_ENDERS = ".!?"


def split_sentences(text):
    sentences = []
    current = []
    for ch in text:
        current.append(ch)
        if ch in _SENTENCE_ENDERS:
            sentence = "".join(current).strip()
            if sentence:
                sentences.append(sentence)
            current = []
    tail = "".join(current).strip()
    if tail:
        sentences.append(tail)
    return sentences


def negation_warnings(candidates, source_text):
    """Flag extraction candidates whose matched sentence has a negation cue.

    Heuristic lexical check, not a correctness judgment: the cue list is
    small and matching is token-exact within the sentence containing the
    candidate's object (falling back to its subject).
    """
    warnings = []
    sentences = split_sentences(source_text)
    normalized = [(" ".join(s.split()).lower(), s) for s in sentences]
    for candidate in candidates:
        span = None
        for value in (candidate.object, candidate.subject):
            needle = normalize_label(value)
            if not needle:
                continue
            for norm, original in normalized:
                if needle in norm:
                    span = (norm, original)
                    break
            if span:
                break
        if span is None:
            continue
        tokens = {tok.strip(string.punctuation) for tok in span[0].split()}
        for cue in NEGATION_CUES:
            if cue in tokens:
                warnings.append(
                    NegationWarning(
                        transcript_id=candidate.transcript_id,
                        line_number=candidate.line_number,
                        cue=cue,
                        sentence=span[1],
                    )
                )
                break
    return warnings


def compute_metrics(mode, candidates, gold_count=None):
    """Session metrics from finally-curated candidates.

    correct_count is defined by curation decisions (accepted + edited), not
    by the model. Extraction sessions additionally report recall against the
    human-supplied gold count.
    """
    candidates = list(candidates)
    for candidate in candidates:
        if candidate.status == "candidate":
            raise IncompleteCurationError(
                f"candidate {candidate.ref} is still undecided; curation must finish first"
            )
    generated = len(candidates)
    correct = sum(1 for c in candidates if c.status in ("accepted", "edited"))
    precision = correct / generated if generated > 0 else None
    extracted = None
    recall = None
    if mode == "extraction":
        extracted = correct
        if gold_count:
            recall = extracted / gold_count
    return SessionMetrics(
        mode=mode,
        generated_count=generated,
        correct_count=correct,
        gold_count=gold_count,
        extracted_count=extracted,
        precision=precision,
        recall=recall,
    )

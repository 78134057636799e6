"""Knowledge graph (ABox) store: typed entities, accepted triples, gap analysis.

On-disk interchange is line-record JSON (.kgl), one record per line:

    {"kind": "entity", "label": "long COVID", "concept": "Disease", "external_id": "Q100732653"}
    {"kind": "triple", "s": "long COVID", "r": "hasSymptom", "o": "fatigue", "literal": false}

Line records diff cleanly under version control. The namespace is not stored
in the file; it comes from the session ontology.
"""

import json
from dataclasses import dataclass, field

from ontoforge.kernels import normalize_label
from ontoforge.ontology import DEFAULT_NAMESPACE, concept_of, label_key, relation_of


class KgFormatError(ValueError):
    """Raised for malformed .kgl input, with the offending line number."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class MergeInputError(ValueError):
    """Raised when a non-accepted candidate is passed to merge_accepted."""


@dataclass
class Entity:
    label: str
    concept: str | None = None
    external_id: str | None = None

    def __post_init__(self):
        if not normalize_label(self.label):
            raise ValueError(f"entity label empty after normalization: {self.label!r}")

    @property
    def key(self):
        return normalize_label(self.label)


@dataclass(frozen=True)
class Triple:
    subject: str
    relation: str
    object: str
    object_is_literal: bool = False

    def __post_init__(self):
        for name, value in (
            ("subject", self.subject),
            ("relation", self.relation),
            ("object", self.object),
        ):
            if not normalize_label(value):
                raise ValueError(f"triple {name} empty after normalization: {value!r}")

    @property
    def key(self):
        return (
            normalize_label(self.subject),
            normalize_label(self.relation),
            normalize_label(self.object),
            self.object_is_literal,
        )


@dataclass(frozen=True)
class GapSlot:
    entity: str
    relation: str


@dataclass
class MergeReport:
    added: int = 0
    skipped_duplicates: int = 0
    range_suggestions: list[tuple[str, str]] = field(default_factory=list)


class KnowledgeGraph:
    """Entities keyed by normalized label plus ordered, duplicate-free triples.

    Single logical writer; concurrent readers are safe between mutations.
    """

    def __init__(self, namespace=DEFAULT_NAMESPACE):
        self.namespace = namespace
        self.entities = {}
        self.triples = []
        self._triple_keys = set()
        self.warnings = []

    def __len__(self):
        return len(self.triples)

    def entity_for(self, label):
        return self.entities.get(normalize_label(label))

    def add_entity(self, entity):
        """Register an entity; re-adding the same label fills missing fields."""
        existing = self.entities.get(entity.key)
        if existing is None:
            self.entities[entity.key] = entity
            return entity
        if existing.concept is None and entity.concept is not None:
            existing.concept = entity.concept
        if existing.external_id is None and entity.external_id is not None:
            existing.external_id = entity.external_id
        return existing

    def add_triple(self, triple):
        """Append a triple unless an identical one (under normalization) exists.

        The subject entity is auto-created (untyped) when absent so the
        subject-in-entities invariant always holds. Returns True when added.
        """
        if triple.key in self._triple_keys:
            return False
        if normalize_label(triple.subject) not in self.entities:
            self.add_entity(Entity(label=triple.subject))
        self.triples.append(triple)
        self._triple_keys.add(triple.key)
        return True

    def has_slot(self, entity_label, relation_name):
        """True when any triple (entity, relation, *) exists."""
        ekey = normalize_label(entity_label)
        rkey = normalize_label(relation_name)
        return any(
            normalize_label(t.subject) == ekey and normalize_label(t.relation) == rkey
            for t in self.triples
        )

    def copy(self):
        clone = KnowledgeGraph(namespace=self.namespace)
        for entity in self.entities.values():
            clone.add_entity(Entity(entity.label, entity.concept, entity.external_id))
        for triple in self.triples:
            clone.add_triple(triple)
        return clone


def load_kg(source, ontology=None):
    """Parse .kgl text into a KnowledgeGraph.

    Exact duplicate records are collapsed, each with a warning on
    kg.warnings. Entities typed with a concept the ontology does not declare
    are an error; untyped entities are fine.
    """
    kg = KnowledgeGraph(namespace=ontology.namespace if ontology else DEFAULT_NAMESPACE)
    for line_no, raw in enumerate(source.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise KgFormatError(f"invalid JSON: {exc.msg}", line_no) from None
        if not isinstance(record, dict):
            raise KgFormatError("record must be a JSON object", line_no)
        kind = record.get("kind")
        if kind == "entity":
            label = record.get("label")
            if not isinstance(label, str) or not normalize_label(label):
                raise KgFormatError("entity requires a non-empty label", line_no)
            concept = record.get("concept")
            if concept is not None:
                if ontology is None or concept_of(ontology, concept) is None:
                    raise KgFormatError(f"entity typed with unknown concept {concept!r}", line_no)
            entity = Entity(label=label, concept=concept, external_id=record.get("external_id"))
            if entity.key in kg.entities:
                kg.warnings.append(f"line {line_no}: duplicate entity {label!r}")
            kg.add_entity(entity)
        elif kind == "triple":
            try:
                triple = Triple(
                    subject=record.get("s", ""),
                    relation=record.get("r", ""),
                    object=record.get("o", ""),
                    object_is_literal=bool(record.get("literal", False)),
                )
            except ValueError as exc:
                raise KgFormatError(str(exc), line_no) from None
            if not kg.add_triple(triple):
                kg.warnings.append(f"line {line_no}: duplicate triple {triple.key[:3]}")
        else:
            raise KgFormatError(f"unknown record kind {kind!r}", line_no)
    return kg


def save_kg(kg):
    """Serialize a KnowledgeGraph back to .kgl text (load_kg inverse)."""
    lines = []
    for entity in kg.entities.values():
        record = {"kind": "entity", "label": entity.label}
        if entity.concept is not None:
            record["concept"] = entity.concept
        if entity.external_id is not None:
            record["external_id"] = entity.external_id
        lines.append(json.dumps(record, ensure_ascii=False))
    for triple in kg.triples:
        lines.append(
            json.dumps(
                {
                    "kind": "triple",
                    "s": triple.subject,
                    "r": triple.relation,
                    "o": triple.object,
                    "literal": triple.object_is_literal,
                },
                ensure_ascii=False,
            )
        )
    return "\n".join(lines) + ("\n" if lines else "")


def find_gaps(kg, ontology):
    """Missing-link slots: typed entities paired with every domain-matching
    relation for which the KG holds no (entity, relation, *) triple.

    Ordered by entity declaration order, then relation declaration order.
    Untyped entities yield no slots.
    """
    filled = {
        (normalize_label(t.subject), normalize_label(t.relation)) for t in kg.triples
    }
    slots = []
    for entity in kg.entities.values():
        if entity.concept is None:
            continue
        ckey = label_key(entity.concept)
        for relation in ontology.relations:
            if label_key(relation.domain) != ckey:
                continue
            if (entity.key, normalize_label(relation.name)) in filled:
                continue
            slots.append(GapSlot(entity=entity.label, relation=relation.name))
    return slots


def merge_accepted(kg, candidates, ontology=None):
    """Merge curator-approved candidates into a new KnowledgeGraph.

    Every candidate must be accepted or edited (an edit is an acceptance with
    a replacement); anything else is a MergeInputError. Subject entities are
    auto-created and typed by the relation's domain when the relation is
    declared. Object typing is never asserted: range suggestions go in the
    report instead, because generated output can deviate from the schema.
    """
    for candidate in candidates:
        if candidate.status not in ("accepted", "edited"):
            raise MergeInputError(
                f"candidate {candidate.ref} has status {candidate.status!r}; "
                "only accepted/edited candidates can be merged"
            )

    merged = kg.copy()
    report = MergeReport()
    suggested = set()
    for candidate in candidates:
        subject, relation_name, obj = candidate.effective_fields()
        triple = Triple(
            subject=subject,
            relation=relation_name,
            object=obj,
            object_is_literal=candidate.object_is_literal,
        )
        relation = relation_of(ontology, relation_name) if ontology is not None else None
        if merged.entity_for(subject) is None:
            merged.add_entity(
                Entity(label=subject, concept=relation.domain if relation else None)
            )
        if merged.add_triple(triple):
            report.added += 1
        else:
            report.skipped_duplicates += 1
            continue
        if relation is not None and not triple.object_is_literal:
            suggestion = (normalize_label(obj), label_key(relation.range))
            if suggestion not in suggested:
                suggested.add(suggestion)
                report.range_suggestions.append((obj, relation.range))
    return merged, report

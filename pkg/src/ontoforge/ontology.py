"""Ontology (TBox) parsing and lookup.

The compact ontology format is line-oriented:

    # comment
    namespace http://example.org/kg/
    concept Disease
    relation hasSymptom domain=Disease range=Symptom
    relation treatedBy domain=Disease range=Drug id=P2176

A `namespace` line is optional and defaults to DEFAULT_NAMESPACE. Values with
spaces can be quoted ("Anatomical Location"). Ontology values are immutable
after parsing and safe for concurrent reads.
"""

import re
import shlex
from dataclasses import dataclass, field

DEFAULT_NAMESPACE = "http://example.org/kg/"

_IRI_RE = re.compile(r"^[A-Za-z][A-Za-z0-9+.\-]*:\S+$")


class OntologyError(ValueError):
    """Raised for syntax errors, duplicate names, and dangling references."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def label_key(name):
    """Comparison key for ontology labels: trimmed, whitespace-collapsed, lowercased."""
    return " ".join(name.split()).lower()


@dataclass(frozen=True)
class ConceptDef:
    name: str
    description: str | None = None

    def __post_init__(self):
        if not self.name.strip():
            raise OntologyError("concept name must be non-empty")
        if "\n" in self.name or "\r" in self.name:
            raise OntologyError(f"concept name contains a newline: {self.name!r}")


@dataclass(frozen=True)
class RelationDef:
    name: str
    domain: str
    range: str
    external_id: str | None = None

    def __post_init__(self):
        for label, value in (("name", self.name), ("domain", self.domain), ("range", self.range)):
            if not value.strip():
                raise OntologyError(f"relation {label} must be non-empty")


@dataclass(frozen=True)
class Ontology:
    concepts: tuple[ConceptDef, ...]
    relations: tuple[RelationDef, ...]
    namespace: str = DEFAULT_NAMESPACE
    _concept_index: dict = field(init=False, repr=False, compare=False)
    _relation_index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "concepts", tuple(self.concepts))
        object.__setattr__(self, "relations", tuple(self.relations))
        if not _IRI_RE.match(self.namespace) or not self.namespace.endswith(("/", "#")):
            raise OntologyError(
                f"namespace must be an absolute IRI ending in '/' or '#': {self.namespace!r}"
            )
        concept_index = {}
        for concept in self.concepts:
            key = label_key(concept.name)
            if key in concept_index:
                raise OntologyError(f"duplicate concept name: {concept.name!r}")
            concept_index[key] = concept
        relation_index = {}
        for relation in self.relations:
            key = label_key(relation.name)
            if key in relation_index:
                raise OntologyError(f"duplicate relation name: {relation.name!r}")
            relation_index[key] = relation
            for side in ("domain", "range"):
                ref = getattr(relation, side)
                if label_key(ref) not in concept_index:
                    raise OntologyError(
                        f"relation {relation.name!r} has dangling {side} reference: {ref!r}"
                    )
        object.__setattr__(self, "_concept_index", concept_index)
        object.__setattr__(self, "_relation_index", relation_index)


def concept_of(ontology, name):
    """Case-insensitive, whitespace-normalized concept lookup. None when absent."""
    return ontology._concept_index.get(label_key(name))


def relation_of(ontology, name):
    """Case-insensitive, whitespace-normalized relation lookup. None when absent."""
    return ontology._relation_index.get(label_key(name))


def _split_decl(body, line_no):
    """Split a declaration body into leading name tokens and key=value pairs."""
    try:
        tokens = shlex.split(body, comments=False, posix=True)
    except ValueError as exc:
        raise OntologyError(f"unbalanced quoting: {exc}", line_no) from None
    name_tokens = []
    kwargs = {}
    for tok in tokens:
        if "=" in tok and not name_tokens and not kwargs:
            raise OntologyError("missing name before key=value arguments", line_no)
        if "=" in tok:
            key, _, value = tok.partition("=")
            if key in kwargs:
                raise OntologyError(f"duplicate argument {key!r}", line_no)
            kwargs[key] = value
        elif kwargs:
            raise OntologyError(f"unexpected token {tok!r} after key=value arguments", line_no)
        else:
            name_tokens.append(tok)
    return " ".join(name_tokens), kwargs


def parse_ontology(source):
    """Parse the compact ontology format into an Ontology.

    Declaration order matches source order. Raises OntologyError with the
    offending line number for syntax errors, duplicate names, and dangling
    domain/range references.
    """
    concepts = []
    relations = []
    concept_lines = {}
    relation_lines = {}
    namespace = DEFAULT_NAMESPACE

    for line_no, raw in enumerate(source.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        keyword, _, body = line.partition(" ")
        body = body.strip()
        if keyword == "namespace":
            if not body:
                raise OntologyError("namespace requires an IRI", line_no)
            namespace = body
        elif keyword == "concept":
            name, kwargs = _split_decl(body, line_no)
            if not name:
                raise OntologyError("concept requires a name", line_no)
            unknown = set(kwargs) - {"desc"}
            if unknown:
                raise OntologyError(f"unknown concept argument(s): {sorted(unknown)}", line_no)
            key = label_key(name)
            if key in concept_lines:
                raise OntologyError(
                    f"duplicate concept name {name!r} (first declared on line {concept_lines[key]})",
                    line_no,
                )
            concept_lines[key] = line_no
            concepts.append(ConceptDef(name=name, description=kwargs.get("desc")))
        elif keyword == "relation":
            name, kwargs = _split_decl(body, line_no)
            if not name:
                raise OntologyError("relation requires a name", line_no)
            unknown = set(kwargs) - {"domain", "range", "id"}
            if unknown:
                raise OntologyError(f"unknown relation argument(s): {sorted(unknown)}", line_no)
            for required in ("domain", "range"):
                if not kwargs.get(required):
                    raise OntologyError(f"relation {name!r} requires {required}=<Concept>", line_no)
            key = label_key(name)
            if key in relation_lines:
                raise OntologyError(
                    f"duplicate relation name {name!r} (first declared on line {relation_lines[key]})",
                    line_no,
                )
            relation_lines[key] = line_no
            for side in ("domain", "range"):
                if label_key(kwargs[side]) not in concept_lines:
                    raise OntologyError(
                        f"relation {name!r} has dangling {side} reference: {kwargs[side]!r}",
                        line_no,
                    )
            relations.append(
                RelationDef(
                    name=name,
                    domain=kwargs["domain"],
                    range=kwargs["range"],
                    external_id=kwargs.get("id"),
                )
            )
        else:
            raise OntologyError(f"unknown declaration {keyword!r}", line_no)

    return Ontology(concepts=tuple(concepts), relations=tuple(relations), namespace=namespace)


def _quote(value):
    return shlex.quote(value) if any(ch.isspace() for ch in value) else value


def serialize_ontology(ontology):
    """Pretty-print an Ontology back into the compact format (parse inverse)."""
    lines = [f"namespace {ontology.namespace}"]
    for concept in ontology.concepts:
        line = f"concept {_quote(concept.name)}"
        if concept.description is not None:
            line += f" desc={shlex.quote(concept.description)}"
        lines.append(line)
    for relation in ontology.relations:
        line = (
            f"relation {_quote(relation.name)}"
            f" domain={_quote(relation.domain)} range={_quote(relation.range)}"
        )
        if relation.external_id is not None:
            line += f" id={_quote(relation.external_id)}"
        lines.append(line)
    return "\n".join(lines) + "\n"

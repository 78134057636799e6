"""Deterministic RDF output: IRI minting, N-Triples, and Turtle.

Output is bit-exact across runs and platforms: minting order is fixed by
declaration order, N-Triples lines are byte-sorted, and Turtle blocks are
term-sorted. RDF semantics are order-free, so sorting is safe and keeps
golden files stable.
"""

import re
from dataclasses import dataclass
from urllib.parse import quote

RDF_TYPE_IRI = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type"
RDF_PREFIX = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"

_IRI_RE = re.compile(r"^[A-Za-z][A-Za-z0-9+.\-]*:\S+$")
_PN_LOCAL_RE = re.compile(r"^[A-Za-z0-9_][A-Za-z0-9_\-]*$")


@dataclass(frozen=True)
class IriPolicy:
    namespace: str
    collision_suffix_start: int = 2

    def __post_init__(self):
        if not _IRI_RE.match(self.namespace) or not self.namespace.endswith(("/", "#")):
            raise ValueError(
                f"namespace must be an absolute IRI ending in '/' or '#': {self.namespace!r}"
            )


def _slug(label):
    collapsed = "_".join(label.split())
    return quote(collapsed, safe="")


def mint_iri(label, policy, minted):
    """Mint (or re-yield) the IRI for a label, updating the minted map.

    Identical labels always map to their existing IRI. When a different label
    slugs to an already-taken IRI, numeric suffixes are appended in
    first-seen order starting at policy.collision_suffix_start.
    """
    key = label.strip()
    if not key:
        raise ValueError("cannot mint an IRI for an empty label")
    existing = minted.get(key)
    if existing is not None:
        return existing
    taken = set(minted.values())
    iri = policy.namespace + _slug(key)
    if iri in taken:
        n = policy.collision_suffix_start
        while f"{iri}_{n}" in taken:
            n += 1
        iri = f"{iri}_{n}"
    minted[key] = iri
    return iri


def _escape_literal(value):
    return (
        value.replace("\\", "\\\\")
        .replace('"', '\\"')
        .replace("\n", "\\n")
        .replace("\r", "\\r")
        .replace("\t", "\\t")
    )


def term_triples(kg, policy, minted=None):
    """The KG as RDF terms: (subject IRI, predicate IRI, object term) where an
    object term is ("iri", value) or ("literal", value).

    Typed-entity membership becomes one rdf:type triple per typed entity.
    Both serializers render exactly this set, so they agree semantically.
    Returns (triples, minted map).
    """
    if minted is None:
        minted = {}
    terms = []
    for entity in kg.entities.values():
        eiri = mint_iri(entity.label, policy, minted)
        if entity.concept is not None:
            ciri = mint_iri(entity.concept, policy, minted)
            terms.append((eiri, RDF_TYPE_IRI, ("iri", ciri)))
    for triple in kg.triples:
        subject_entity = kg.entity_for(triple.subject)
        subject_label = subject_entity.label if subject_entity else triple.subject
        siri = mint_iri(subject_label, policy, minted)
        piri = mint_iri(triple.relation, policy, minted)
        if triple.object_is_literal:
            obj = ("literal", triple.object)
        else:
            object_entity = kg.entity_for(triple.object)
            object_label = object_entity.label if object_entity else triple.object
            obj = ("iri", mint_iri(object_label, policy, minted))
        terms.append((siri, piri, obj))
    return terms, minted


def _ntriples_object(obj):
    kind, value = obj
    if kind == "iri":
        return f"<{value}>"
    return f'"{_escape_literal(value)}"'


def emit_ntriples(kg, policy):
    """Bit-exact N-Triples: one triple per LF-terminated line, byte-sorted."""
    terms, _ = term_triples(kg, policy)
    lines = sorted(
        f"<{s}> <{p}> {_ntriples_object(o)} .".encode("utf-8") for s, p, o in terms
    )
    if not lines:
        return b""
    return b"\n".join(lines) + b"\n"


def _turtle_term(iri, namespace):
    if iri == RDF_TYPE_IRI:
        return "a"
    if iri.startswith(namespace):
        local = iri[len(namespace):]
        if _PN_LOCAL_RE.match(local):
            return f"kg:{local}"
    if iri.startswith(RDF_PREFIX):
        local = iri[len(RDF_PREFIX):]
        if _PN_LOCAL_RE.match(local):
            return f"rdf:{local}"
    return f"<{iri}>"


def _turtle_object(obj, namespace):
    kind, value = obj
    if kind == "iri":
        return _turtle_term(value, namespace)
    return f'"{_escape_literal(value)}"'


def emit_turtle(kg, policy):
    """Readable Turtle, semantically equal to emit_ntriples for the same KG.

    Subjects are grouped into blocks with ';' predicate continuation and ','
    object lists; all term orders are sorted for determinism.
    """
    terms, _ = term_triples(kg, policy)
    header = [
        f"@prefix kg: <{policy.namespace}> .",
        f"@prefix rdf: <{RDF_PREFIX}> .",
    ]
    by_subject = {}
    for s, p, o in terms:
        by_subject.setdefault(s, {}).setdefault(p, set()).add(o)

    blocks = []
    for s in sorted(by_subject, key=lambda iri: _turtle_term(iri, policy.namespace)):
        predicate_lines = []
        predicates = by_subject[s]
        for p in sorted(predicates, key=lambda iri: (iri != RDF_TYPE_IRI, iri)):
            objects = sorted(
                _turtle_object(o, policy.namespace) for o in predicates[p]
            )
            predicate_lines.append(f"{_turtle_term(p, policy.namespace)} {', '.join(objects)}")
        subject_term = _turtle_term(s, policy.namespace)
        body = " ;\n    ".join(predicate_lines)
        blocks.append(f"{subject_term} {body} .")
    text = "\n".join(header) + "\n"
    if blocks:
        text += "\n" + "\n\n".join(blocks) + "\n"
    return text.encode("utf-8")

"""Prompt generation for the five pipeline modes.

Each mode has a text template with {{slot}} placeholders under
data/templates/, overridable via template_dir. Every generated prompt ends
up containing OUTPUT_FORMAT_BLOCK verbatim so the parser and the instruction
stay in agreement. Generation is pure: identical inputs produce byte-identical
prompt text.
"""

import math
from dataclasses import dataclass, field
from pathlib import Path

from ontoforge.datafiles import data_path
from ontoforge.kernels import normalize_label
from ontoforge.ontology import Ontology, label_key, relation_of
from ontoforge.tripleparse import format_triples

MODES = ("completion", "extraction", "construction", "gapfill", "factcheck")

DEFAULT_PROMPT_BUDGET = 3000
DEFAULT_MAX_TRIPLES = 15

OUTPUT_FORMAT_BLOCK = (
    "Write each fact on its own line, numbered from 1, in exactly this form:\n"
    "1. (subject, relation, object)\n"
    "Do not write any explanation or any other text."
)


class PromptGenError(ValueError):
    """Raised for violated prompt-generation preconditions."""


class OversizeOntologyError(PromptGenError):
    """A single relation's rendering alone exceeds the token budget."""


class GroundingError(PromptGenError):
    """An extraction demonstrator is not grounded in the source text."""


@dataclass(frozen=True)
class PromptRequest:
    mode: str
    prompt_text: str
    slots: dict = field(default_factory=dict)
    demonstrators: tuple = ()
    token_estimate: int = 0

    def __post_init__(self):
        if self.mode not in MODES:
            raise PromptGenError(f"unknown mode {self.mode!r}")
        if not self.prompt_text:
            raise PromptGenError("prompt_text must be non-empty")
        if self.token_estimate != estimate_tokens(self.prompt_text):
            raise PromptGenError("token_estimate does not match prompt_text")
        if self.mode == "extraction":
            if not str(self.slots.get("source_text", "")).strip():
                raise PromptGenError("extraction prompts require a source_text slot")
            if not self.demonstrators:
                raise PromptGenError("extraction prompts require at least one demonstrator")


def estimate_tokens(text):
    """Token-count heuristic: ceil(UTF-8 bytes / 4). Avoids a tokenizer dependency."""
    return math.ceil(len(text.encode("utf-8")) / 4)


def load_template(mode, template_dir=None):
    base = data_path("templates") if template_dir is None else Path(template_dir)
    return (base / f"{mode}.txt").read_text(encoding="utf-8")


def render_template(template, **slots):
    """Substitute {{name}} placeholders; the format block is always present."""
    text = template
    for name, value in slots.items():
        text = text.replace("{{" + name + "}}", str(value))
    text = text.replace("{{format_block}}", OUTPUT_FORMAT_BLOCK)
    if OUTPUT_FORMAT_BLOCK not in text:
        text = text.rstrip("\n") + "\n\n" + OUTPUT_FORMAT_BLOCK + "\n"
    return text


def _request(mode, text, slots, demonstrators=()):
    return PromptRequest(
        mode=mode,
        prompt_text=text,
        slots=slots,
        demonstrators=tuple(demonstrators),
        token_estimate=estimate_tokens(text),
    )


def gen_completion_prompt(subject, relation, max_triples, template_dir=None):
    """Prompt asking for up to max_triples facts known from pre-training."""
    if max_triples < 1:
        raise PromptGenError("max_triples must be positive")
    template = load_template("completion", template_dir)
    text = render_template(
        template,
        subject=subject,
        relation=relation.name,
        range=relation.range,
        max_triples=max_triples,
    )
    slots = {
        "subject": subject,
        "relation": relation.name,
        "range": relation.range,
        "max_triples": max_triples,
    }
    return _request("completion", text, slots)


def grounded_in(text, value):
    """Normalized substring check used for demonstrator grounding."""
    hay = " ".join(text.split()).lower()
    needle = normalize_label(value)
    return bool(needle) and needle in hay


def gen_extraction_prompt(source_text, entity, relation, demonstrators, template_dir=None):
    """Prompt restricting extraction to the given text, with same-text examples.

    Each demonstrator's subject and object must occur in source_text (the
    relation is schema vocabulary and is exempt). Ungrounded examples teach
    the model to ignore the text, so they are rejected here.
    """
    if not source_text.strip():
        raise PromptGenError("source_text must be non-empty")
    demonstrators = tuple(demonstrators)
    if not demonstrators:
        raise PromptGenError("extraction requires at least one demonstrator")
    for demo in demonstrators:
        for fieldname in ("subject", "object"):
            value = getattr(demo, fieldname)
            if not grounded_in(source_text, value):
                raise GroundingError(
                    f"demonstrator {fieldname} {value!r} does not occur in the source text"
                )
    template = load_template("extraction", template_dir)
    text = render_template(
        template,
        source_text=source_text,
        entity=entity,
        relation=relation.name,
        demonstrators=format_triples(demonstrators),
    )
    slots = {
        "entity": entity,
        "relation": relation.name,
        "source_text": source_text,
    }
    return _request("extraction", text, slots, demonstrators)


def render_ontology(ontology):
    """Deterministic schema rendering embedded in construction prompts."""
    lines = []
    if ontology.concepts:
        lines.append("Concepts: " + "; ".join(c.name for c in ontology.concepts))
    if ontology.relations:
        lines.append("Relations:")
        for r in ontology.relations:
            lines.append(f"- {r.name} (domain: {r.domain}, range: {r.range})")
    return "\n".join(lines)


def _concepts_for(ontology, relations):
    wanted = set()
    for relation in relations:
        wanted.add(relation.domain)
        wanted.add(relation.range)
    keys = {label_key(name) for name in wanted}
    concepts = tuple(c for c in ontology.concepts if label_key(c.name) in keys)
    return Ontology(concepts=concepts, relations=tuple(relations), namespace=ontology.namespace)


def chunk_ontology(ontology, budget):
    """Partition relations (declaration order preserved) into sub-ontologies
    whose schema renderings each fit the token budget.

    Each chunk carries exactly the concepts its relations reference. A single
    relation that cannot fit on its own is an OversizeOntologyError.
    """
    if budget < 1:
        raise OversizeOntologyError(f"budget must be positive, got {budget}")
    if not ontology.relations:
        return []

    chunks = []
    current = []
    for relation in ontology.relations:
        trial = _concepts_for(ontology, current + [relation])
        if estimate_tokens(render_ontology(trial)) <= budget:
            current.append(relation)
            continue
        if not current:
            raise OversizeOntologyError(
                f"relation {relation.name!r} alone exceeds the budget of {budget} tokens"
            )
        chunks.append(_concepts_for(ontology, current))
        current = [relation]
        solo = _concepts_for(ontology, current)
        if estimate_tokens(render_ontology(solo)) > budget:
            raise OversizeOntologyError(
                f"relation {relation.name!r} alone exceeds the budget of {budget} tokens"
            )
    chunks.append(_concepts_for(ontology, current))
    return chunks


def gen_construction_prompt(ontology, topic, budget=DEFAULT_PROMPT_BUDGET, template_dir=None):
    """Construction prompts, one per ontology chunk, each within budget."""
    if not ontology.relations:
        raise PromptGenError("construction requires an ontology with at least one relation")
    if not topic.strip():
        raise PromptGenError("topic must be non-empty")
    template = load_template("construction", template_dir)
    overhead = estimate_tokens(render_template(template, schema="", topic=topic))
    chunk_budget = budget - overhead
    if chunk_budget < 1:
        raise OversizeOntologyError(
            f"budget {budget} leaves no room after the template overhead of {overhead} tokens"
        )
    prompts = []
    chunks = chunk_ontology(ontology, chunk_budget)
    for index, chunk in enumerate(chunks):
        text = render_template(template, schema=render_ontology(chunk), topic=topic)
        slots = {
            "topic": topic,
            "chunk_index": index,
            "chunk_count": len(chunks),
            "relations": [r.name for r in chunk.relations],
        }
        prompts.append(_request("construction", text, slots))
    return prompts


def gen_gapfill_prompt(slot, ontology, max_triples=DEFAULT_MAX_TRIPLES, template_dir=None):
    """Prompt asking for objects of (slot.entity, slot.relation, ?)."""
    if max_triples < 1:
        raise PromptGenError("max_triples must be positive")
    relation = relation_of(ontology, slot.relation)
    if relation is None:
        raise PromptGenError(f"gap slot relation {slot.relation!r} is not declared in the ontology")
    template = load_template("gapfill", template_dir)
    text = render_template(
        template,
        entity=slot.entity,
        relation=relation.name,
        range=relation.range,
        max_triples=max_triples,
    )
    slots = {
        "entity": slot.entity,
        "relation": relation.name,
        "range": relation.range,
        "max_triples": max_triples,
    }
    return _request("gapfill", text, slots)


def gen_factcheck_prompt(triples, template_dir=None):
    """Prompt listing KG facts and asking for only the incorrect ones back."""
    triples = tuple(triples)
    if not triples:
        raise PromptGenError("factcheck requires at least one triple")
    template = load_template("factcheck", template_dir)
    text = render_template(template, triples=format_triples(triples))
    return _request("factcheck", text, {"triple_count": len(triples)})

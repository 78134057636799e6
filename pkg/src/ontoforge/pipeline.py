"""End-to-end orchestration: run the five modes, persist sessions, export RDF.

Session directory layout:

    sessions/<session_id>/
        session.json        # inputs, transcript ids, candidates, parse skips
        transcripts/<request_id>.json
        report.json         # violations, clusters, verdicts, warnings, metrics
        decisions.jsonl     # append-only curation log (written by review/export)

All session files are written atomically (write-temp-then-rename), so a
crashed run never leaves a half-written session behind.
"""

import configparser
import hashlib
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from ontoforge import kgstore, modelclient, promptgen, rdfout, validate
from ontoforge.kgstore import KnowledgeGraph, merge_accepted, save_kg
from ontoforge.modelclient import ModelTranscript, make_backend, utc_now_iso
from ontoforge.tripleparse import CandidateTriple, parse_triples
from ontoforge.validate import (
    IncompleteCurationError,
    ValidationReport,
    compute_metrics,
)

DEFAULT_SESSIONS_DIR = "sessions"


class PipelineError(ValueError):
    """Raised for violated pipeline preconditions."""


class UnknownCandidateError(LookupError):
    """A decision referenced a candidate that does not exist."""


@dataclass
class SessionState:
    session_id: str
    mode: str
    ontology_path: str | None = None
    kg_path: str | None = None
    corpus_path: str | None = None
    gold_count: int | None = None
    transcripts: list = field(default_factory=list)
    candidates: list = field(default_factory=list)
    parse_skips: list = field(default_factory=list)
    report: ValidationReport | None = None
    metrics: object = None

    def candidate_index(self):
        return {c.ref: i for i, c in enumerate(self.candidates)}

    def find_candidate(self, transcript_id, line_number):
        for candidate in self.candidates:
            if candidate.transcript_id == transcript_id and candidate.line_number == line_number:
                return candidate
        return None


def _session_id_for(mode, request_ids):
    digest = hashlib.sha256("\n".join([mode, *request_ids]).encode("utf-8")).hexdigest()
    return f"{mode}-{digest[:12]}"


def _candidate_to_dict(candidate):
    return {
        "subject": candidate.subject,
        "relation": candidate.relation,
        "object": candidate.object,
        "object_is_literal": candidate.object_is_literal,
        "source": candidate.source,
        "transcript_id": candidate.transcript_id,
        "line_number": candidate.line_number,
        "status": candidate.status,
        "edited_value": list(candidate.edited_value) if candidate.edited_value else None,
    }


def _candidate_from_dict(data):
    edited = data.get("edited_value")
    return CandidateTriple(
        subject=data["subject"],
        relation=data["relation"],
        object=data["object"],
        object_is_literal=data.get("object_is_literal", False),
        source=data.get("source", "model_pretrained"),
        transcript_id=data.get("transcript_id", ""),
        line_number=data.get("line_number", 1),
        status=data.get("status", "candidate"),
        edited_value=tuple(edited) if edited else None,
    )


def write_atomic(path, data):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    if isinstance(data, bytes):
        tmp.write_bytes(data)
    else:
        tmp.write_text(data, encoding="utf-8")
    tmp.replace(path)


def save_session(session, sessions_dir):
    """Persist a session under sessions_dir/<session_id>/; returns the dir."""
    session_dir = Path(sessions_dir) / session.session_id
    payload = {
        "session_id": session.session_id,
        "mode": session.mode,
        "ontology_path": session.ontology_path,
        "kg_path": session.kg_path,
        "corpus_path": session.corpus_path,
        "gold_count": session.gold_count,
        "transcript_ids": [t.request_id for t in session.transcripts],
        "candidates": [_candidate_to_dict(c) for c in session.candidates],
        "parse_skips": session.parse_skips,
    }
    write_atomic(session_dir / "session.json", json.dumps(payload, ensure_ascii=False, indent=2) + "\n")
    for transcript in session.transcripts:
        # Transcripts are immutable and named by request id; never rewrite.
        path = session_dir / "transcripts" / f"{transcript.request_id}.json"
        if not path.exists():
            write_atomic(path, json.dumps(transcript.to_dict(), ensure_ascii=False, indent=2) + "\n")
    if session.report is not None:
        report = session.report.to_dict()
        if session.metrics is not None:
            report["metrics"] = session.metrics.to_dict()
        write_atomic(session_dir / "report.json", json.dumps(report, ensure_ascii=False, indent=2) + "\n")
    return session_dir


def load_session(session_dir):
    session_dir = Path(session_dir)
    payload = json.loads((session_dir / "session.json").read_text(encoding="utf-8"))
    transcripts = []
    for rid in payload.get("transcript_ids", []):
        tpath = session_dir / "transcripts" / f"{rid}.json"
        transcripts.append(ModelTranscript.from_dict(json.loads(tpath.read_text(encoding="utf-8"))))
    session = SessionState(
        session_id=payload["session_id"],
        mode=payload["mode"],
        ontology_path=payload.get("ontology_path"),
        kg_path=payload.get("kg_path"),
        corpus_path=payload.get("corpus_path"),
        gold_count=payload.get("gold_count"),
        transcripts=transcripts,
        candidates=[_candidate_from_dict(c) for c in payload.get("candidates", [])],
        parse_skips=[tuple(s) for s in payload.get("parse_skips", [])],
    )
    known = {t.request_id for t in session.transcripts}
    for candidate in session.candidates:
        if candidate.transcript_id not in known:
            raise PipelineError(
                f"session {session.session_id} is corrupt: candidate {candidate.ref} "
                "references a transcript that is not stored"
            )
    return session


def pristine_candidates(session):
    """Copies of the session's candidates with curation state wound back."""
    return [
        CandidateTriple(
            subject=c.subject,
            relation=c.relation,
            object=c.object,
            object_is_literal=c.object_is_literal,
            source=c.source,
            transcript_id=c.transcript_id,
            line_number=c.line_number,
        )
        for c in session.candidates
    ]


def decide_candidate(session, transcript_id, line_number, action, replacement=None, log_path=None):
    """Apply one curation decision; append it to the decision log when given.

    Raises UnknownCandidateError for a bad ref and ValueError when the
    candidate was already decided (the event log never rewrites history).
    """
    index = session.candidate_index().get((transcript_id, line_number))
    if index is None:
        raise UnknownCandidateError(f"no candidate at ({transcript_id}, {line_number})")
    status = {"accept": "accepted", "reject": "rejected", "edit": "edited"}.get(action)
    if status is None:
        raise PipelineError(f"unknown decision action {action!r}")
    session.candidates[index] = session.candidates[index].decide(status, replacement)
    if log_path is not None:
        record = {
            "transcript_id": transcript_id,
            "line_number": line_number,
            "action": action,
            "replacement": list(replacement) if replacement else None,
            "decided_at": utc_now_iso(),
        }
        log_path = Path(log_path)
        log_path.parent.mkdir(parents=True, exist_ok=True)
        with open(log_path, "a", encoding="utf-8") as handle:
            handle.write(json.dumps(record, ensure_ascii=False) + "\n")
    return session.candidates[index]


def replay_decisions(session, log_path):
    """Re-apply a decision log over a session (event-sourcing replay)."""
    log_path = Path(log_path)
    if not log_path.is_file():
        return session
    for line in log_path.read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        record = json.loads(line)
        replacement = record.get("replacement")
        decide_candidate(
            session,
            record["transcript_id"],
            record["line_number"],
            record["action"],
            tuple(replacement) if replacement else None,
        )
    return session


def load_labels(path):
    """Label file: one {transcript_id, line_number, decision} JSON per line."""
    labels = []
    for line_no, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        record = json.loads(line)
        decision = record.get("decision")
        if decision not in ("accept", "reject"):
            raise PipelineError(f"label line {line_no}: decision must be accept or reject")
        labels.append((record["transcript_id"], record["line_number"], decision))
    return labels


def apply_labels(session, labels, log_path=None):
    for transcript_id, line_number, decision in labels:
        candidate = session.find_candidate(transcript_id, line_number)
        if candidate is None:
            raise UnknownCandidateError(f"label refers to unknown candidate ({transcript_id}, {line_number})")
        if candidate.status != "candidate":
            expected = {"accept": "accepted", "reject": "rejected"}[decision]
            if candidate.status == expected:
                continue
            raise PipelineError(
                f"label {decision!r} conflicts with existing status {candidate.status!r} "
                f"for ({transcript_id}, {line_number})"
            )
        decide_candidate(session, transcript_id, line_number, decision, log_path=log_path)
    return session


def _execute_prompts(prompts, config, record_dir=None):
    """Run prompts against the backend, preserving prompt order.

    Returns (transcripts, first_error); on error the transcripts collected so
    far (in order, up to the first failure) are still returned so the caller
    can persist a partial session before raising.
    """
    backend = make_backend(config)

    def run_one(request):
        if record_dir is not None:
            return modelclient.record(request, config, record_dir)
        return backend.complete(request)

    results = [None] * len(prompts)
    errors = [None] * len(prompts)
    if not prompts:
        return [], None
    with ThreadPoolExecutor(max_workers=config.max_parallel) as executor:
        futures = [executor.submit(run_one, p) for p in prompts]
        for i, future in enumerate(futures):
            try:
                results[i] = future.result()
            except Exception as exc:
                errors[i] = exc

    transcripts = []
    for i, transcript in enumerate(results):
        if errors[i] is not None:
            return transcripts, errors[i]
        transcripts.append(transcript)
    return transcripts, None


def _parse_transcripts(session, transcripts, source):
    for transcript in transcripts:
        session.transcripts.append(transcript)
        report = parse_triples(transcript.response_text, transcript.request_id, source)
        session.candidates.extend(report.triples)
        for line_number, reason in report.skipped_lines:
            session.parse_skips.append((transcript.request_id, line_number, reason))


def _finish_session(session, sessions_dir):
    if sessions_dir is not None:
        save_session(session, sessions_dir)
    return session


def run_construct(
    ontology,
    topic,
    config,
    kg=None,
    budget=promptgen.DEFAULT_PROMPT_BUDGET,
    threshold=validate.DEFAULT_DUPLICATE_THRESHOLD,
    sessions_dir=None,
    template_dir=None,
    record_dir=None,
    ontology_path=None,
    kg_path=None,
):
    """Ontology-driven construction: chunked prompts, parse, conformance, dedup."""
    prompts = promptgen.gen_construction_prompt(ontology, topic, budget, template_dir)
    request_ids = [
        modelclient.request_id_for(p.mode, p.prompt_text, config.model_name) for p in prompts
    ]
    session = SessionState(
        session_id=_session_id_for("construction", request_ids),
        mode="construction",
        ontology_path=ontology_path,
        kg_path=kg_path,
    )
    transcripts, error = _execute_prompts(prompts, config, record_dir)
    _parse_transcripts(session, transcripts, "model_pretrained")
    if error is not None:
        _finish_session(session, sessions_dir)
        raise error
    check_kg = kg if kg is not None else KnowledgeGraph(namespace=ontology.namespace)
    session.report = ValidationReport(
        violations=validate.check_conformance(session.candidates, ontology, check_kg),
        clusters=validate.find_duplicates(session.candidates, threshold),
    )
    return _finish_session(session, sessions_dir)


def run_complete(
    kg,
    ontology,
    config,
    max_slots=None,
    max_triples=promptgen.DEFAULT_MAX_TRIPLES,
    threshold=validate.DEFAULT_DUPLICATE_THRESHOLD,
    sessions_dir=None,
    template_dir=None,
    record_dir=None,
    ontology_path=None,
    kg_path=None,
):
    """Gap-driven completion: find missing links, prompt for each slot."""
    slots = kgstore.find_gaps(kg, ontology)
    if max_slots is not None:
        slots = slots[: max(0, max_slots)]
    prompts = [
        promptgen.gen_gapfill_prompt(slot, ontology, max_triples, template_dir) for slot in slots
    ]
    request_ids = [
        modelclient.request_id_for(p.mode, p.prompt_text, config.model_name) for p in prompts
    ]
    session = SessionState(
        session_id=_session_id_for("completion", request_ids),
        mode="completion",
        ontology_path=ontology_path,
        kg_path=kg_path,
    )
    transcripts, error = _execute_prompts(prompts, config, record_dir)
    _parse_transcripts(session, transcripts, "model_pretrained")
    if error is not None:
        _finish_session(session, sessions_dir)
        raise error
    session.report = ValidationReport(
        violations=validate.check_conformance(session.candidates, ontology, kg),
        clusters=validate.find_duplicates(session.candidates, threshold),
    )
    return _finish_session(session, sessions_dir)


def _corpus_documents(corpus_path):
    corpus_path = Path(corpus_path)
    if corpus_path.is_dir():
        docs = [
            (p.name, p.read_text(encoding="utf-8")) for p in sorted(corpus_path.glob("*.txt"))
        ]
    elif corpus_path.is_file():
        docs = [(corpus_path.name, corpus_path.read_text(encoding="utf-8"))]
    else:
        raise PipelineError(f"corpus path {corpus_path} does not exist")
    docs = [(name, text) for name, text in docs if text.strip()]
    if not docs:
        raise PipelineError(f"corpus {corpus_path} contains no non-empty documents")
    return docs


def run_extract(
    corpus_path,
    entity,
    relation,
    demonstrators,
    config,
    gold_count=None,
    threshold=validate.DEFAULT_DUPLICATE_THRESHOLD,
    sessions_dir=None,
    template_dir=None,
    record_dir=None,
):
    """Text-grounded extraction: one prompt per corpus document."""
    docs = _corpus_documents(corpus_path)
    prompts = [
        promptgen.gen_extraction_prompt(text, entity, relation, demonstrators, template_dir)
        for _, text in docs
    ]
    request_ids = [
        modelclient.request_id_for(p.mode, p.prompt_text, config.model_name) for p in prompts
    ]
    session = SessionState(
        session_id=_session_id_for("extraction", request_ids),
        mode="extraction",
        corpus_path=str(corpus_path),
        gold_count=gold_count,
    )
    transcripts, error = _execute_prompts(prompts, config, record_dir)
    warnings = []
    for index, transcript in enumerate(transcripts):
        before = len(session.candidates)
        _parse_transcripts(session, [transcript], "provided_text")
        doc_text = docs[index][1]
        warnings.extend(validate.negation_warnings(session.candidates[before:], doc_text))
    if error is not None:
        _finish_session(session, sessions_dir)
        raise error
    session.report = ValidationReport(
        clusters=validate.find_duplicates(session.candidates, threshold),
        negation_warnings=warnings,
    )
    return _finish_session(session, sessions_dir)


def run_factcheck(
    kg,
    config,
    threshold=validate.DEFAULT_DUPLICATE_THRESHOLD,
    sessions_dir=None,
    template_dir=None,
    record_dir=None,
    kg_path=None,
):
    """Fact-check the KG's triples and attach verdicts to the report."""
    if not kg.triples:
        raise PipelineError("fact-check requires a non-empty knowledge graph")
    prompt = promptgen.gen_factcheck_prompt(kg.triples, template_dir)
    request_ids = [modelclient.request_id_for(prompt.mode, prompt.prompt_text, config.model_name)]
    session = SessionState(
        session_id=_session_id_for("factcheck", request_ids),
        mode="factcheck",
        kg_path=kg_path,
    )
    transcripts, error = _execute_prompts([prompt], config, record_dir)
    _parse_transcripts(session, transcripts, "existing_kg")
    if error is not None:
        _finish_session(session, sessions_dir)
        raise error
    flagged = parse_triples(transcripts[0].response_text, transcripts[0].request_id, "existing_kg")
    session.report = ValidationReport(
        verdicts=validate.fact_check(kg.triples, flagged),
    )
    return _finish_session(session, sessions_dir)


def export_session(
    session,
    out_dir,
    labels_path=None,
    ontology=None,
    base_kg=None,
    session_dir=None,
):
    """Merge accepted candidates and write .kgl/.nt/.ttl outputs.

    Errors with IncompleteCurationError when any candidate is undecided.
    Returns (merged KG, metrics, {suffix: path}).
    """
    log_path = Path(session_dir) / "decisions.jsonl" if session_dir else None
    if labels_path is not None:
        apply_labels(session, load_labels(labels_path), log_path=log_path)
    undecided = [c.ref for c in session.candidates if c.status == "candidate"]
    if undecided:
        raise IncompleteCurationError(
            f"{len(undecided)} candidate(s) still undecided, first: {undecided[0]}"
        )
    metrics = compute_metrics(session.mode, session.candidates, session.gold_count)
    accepted = [c for c in session.candidates if c.status in ("accepted", "edited")]
    if base_kg is None:
        namespace = ontology.namespace if ontology else kgstore.DEFAULT_NAMESPACE
        base_kg = KnowledgeGraph(namespace=namespace)
    merged, merge_report = merge_accepted(base_kg, accepted, ontology)

    out_dir = Path(out_dir)
    policy = rdfout.IriPolicy(namespace=merged.namespace)
    paths = {
        "kgl": out_dir / "kg.kgl",
        "nt": out_dir / "kg.nt",
        "ttl": out_dir / "kg.ttl",
    }
    write_atomic(paths["kgl"], save_kg(merged))
    write_atomic(paths["nt"], rdfout.emit_ntriples(merged, policy))
    write_atomic(paths["ttl"], rdfout.emit_turtle(merged, policy))

    session.metrics = metrics
    if session.report is None:
        session.report = ValidationReport()
    session.report.metrics = metrics
    if session_dir is not None:
        save_session(session, Path(session_dir).parent)
    return merged, metrics, paths, merge_report


def load_config(path):
    """INI configuration with [backend], [prompts], [validate] sections."""
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise PipelineError(f"config file {path} not found or unreadable")
    config = {}
    for section in ("backend", "prompts", "validate"):
        if parser.has_section(section):
            config[section] = dict(parser.items(section))
    return config

"""Embedded HTTP review service: the human-in-the-loop curation backend.

Serves candidate triples with their annotations, accepts curation decisions,
and reports live metrics. Decisions append to the session's decisions.jsonl
immediately, so replaying that log over the pristine session reproduces the
candidate statuses exactly. Loopback, single curator, no authentication.

API (JSON bodies):
    GET  /api/session
    GET  /api/candidates?status=&violations=
    POST /api/candidates/{transcript_id}/{line}/decision
    GET  /api/metrics
    POST /api/clusters/{cluster_id}/keep-first
    POST /api/export
Static UI assets are served under / when a directory is configured.
"""

import json
import threading
from dataclasses import dataclass
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlparse

from ontoforge import pipeline
from ontoforge.modelclient import utc_now_iso
from ontoforge.validate import IncompleteCurationError

DEFAULT_BIND = ("127.0.0.1", 7341)

_CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".json": "application/json",
    ".svg": "image/svg+xml",
    ".map": "application/json",
}


@dataclass
class Decision:
    transcript_id: str
    line_number: int
    action: str
    replacement: tuple | None = None
    decided_at: str = ""

    def __post_init__(self):
        if self.action not in ("accept", "reject", "edit"):
            raise ValueError(f"unknown action {self.action!r}")
        if self.action == "edit" and not self.replacement:
            raise ValueError("edit decisions require a replacement triple")
        if self.action != "edit" and self.replacement:
            raise ValueError(f"{self.action} decisions must not carry a replacement")
        if not self.decided_at:
            self.decided_at = utc_now_iso()


class ConflictError(ValueError):
    """The decision lost a race or targets an already-decided candidate."""


class ReviewService:
    """Session curation state with a single-writer decision log."""

    def __init__(self, session, session_dir=None, ontology=None, export_dir=None, base_kg=None):
        self.session = session
        self.session_dir = Path(session_dir) if session_dir else None
        self.ontology = ontology
        self.export_dir = Path(export_dir) if export_dir else None
        self.base_kg = base_kg
        self._lock = threading.Lock()
        self._annotations = self._index_annotations()

    @property
    def log_path(self):
        if self.session_dir is None:
            return None
        return self.session_dir / "decisions.jsonl"

    def _index_annotations(self):
        report = self.session.report
        violations = {}
        clusters = {}
        negations = {}
        if report is not None:
            for violation in report.violations:
                violations.setdefault(violation.ref, []).append(violation.to_dict())
            for cluster_id, members in enumerate(report.clusters):
                for ref in members:
                    clusters[tuple(ref)] = cluster_id
            for warning in report.negation_warnings:
                negations[(warning.transcript_id, warning.line_number)] = warning.to_dict()
        return {"violations": violations, "clusters": clusters, "negations": negations}

    def _model_line(self, candidate):
        for transcript in self.session.transcripts:
            if transcript.request_id == candidate.transcript_id:
                lines = transcript.response_text.splitlines()
                if 1 <= candidate.line_number <= len(lines):
                    return lines[candidate.line_number - 1]
        return None

    def candidate_view(self, candidate):
        ref = candidate.ref
        negation = self._annotations["negations"].get(ref)
        return {
            "transcript_id": candidate.transcript_id,
            "line_number": candidate.line_number,
            "subject": candidate.subject,
            "relation": candidate.relation,
            "object": candidate.object,
            "object_is_literal": candidate.object_is_literal,
            "source": candidate.source,
            "status": candidate.status,
            "edited_value": list(candidate.edited_value) if candidate.edited_value else None,
            "violations": self._annotations["violations"].get(ref, []),
            "cluster_id": self._annotations["clusters"].get(ref),
            "negation_warning": negation,
            "provenance": {
                "model_line": self._model_line(candidate),
                "source_sentence": negation["sentence"] if negation else None,
            },
        }

    def session_view(self):
        statuses = {}
        for candidate in self.session.candidates:
            statuses[candidate.status] = statuses.get(candidate.status, 0) + 1
        return {
            "session_id": self.session.session_id,
            "mode": self.session.mode,
            "gold_count": self.session.gold_count,
            "candidate_count": len(self.session.candidates),
            "status_counts": statuses,
            "cluster_count": len(self.session.report.clusters) if self.session.report else 0,
            "relations": [r.name for r in self.ontology.relations] if self.ontology else [],
        }

    def candidates_view(self, status=None, violations=None):
        views = []
        for candidate in self.session.candidates:
            view = self.candidate_view(candidate)
            if status and view["status"] != status:
                continue
            if violations and not any(v["kind"] == violations for v in view["violations"]):
                continue
            views.append(view)
        return views

    def metrics_view(self):
        """Partial metrics: counts over decisions made so far plus remaining."""
        candidates = self.session.candidates
        generated = len(candidates)
        decided = [c for c in candidates if c.status != "candidate"]
        correct = sum(1 for c in decided if c.status in ("accepted", "edited"))
        remaining = generated - len(decided)
        precision = correct / generated if generated and decided else None
        extracted = correct if self.session.mode == "extraction" else None
        recall = None
        if self.session.mode == "extraction" and self.session.gold_count and decided:
            recall = correct / self.session.gold_count
        return {
            "mode": self.session.mode,
            "generated_count": generated,
            "correct_count": correct,
            "remaining_count": remaining,
            "gold_count": self.session.gold_count,
            "extracted_count": extracted,
            "precision": precision,
            "recall": recall,
        }

    def decide(self, transcript_id, line_number, action, replacement=None):
        decision = Decision(
            transcript_id=transcript_id,
            line_number=line_number,
            action=action,
            replacement=tuple(replacement) if replacement else None,
        )
        with self._lock:
            try:
                candidate = pipeline.decide_candidate(
                    self.session,
                    decision.transcript_id,
                    decision.line_number,
                    decision.action,
                    decision.replacement,
                    log_path=self.log_path,
                )
            except ValueError as exc:
                raise ConflictError(str(exc)) from None
            if self.session_dir is not None:
                pipeline.save_session(self.session, self.session_dir.parent)
        return self.candidate_view(candidate)

    def keep_first(self, cluster_id):
        """Reject every undecided non-first member of a duplicate cluster."""
        report = self.session.report
        if report is None or cluster_id >= len(report.clusters) or cluster_id < 0:
            raise pipeline.UnknownCandidateError(f"no duplicate cluster {cluster_id}")
        members = [tuple(ref) for ref in report.clusters[cluster_id]]
        with self._lock:
            rejected = []
            for ref in members[1:]:
                candidate = self.session.find_candidate(*ref)
                if candidate is None or candidate.status != "candidate":
                    continue
                pipeline.decide_candidate(
                    self.session, ref[0], ref[1], "reject", log_path=self.log_path
                )
                rejected.append(list(ref))
            if not rejected:
                raise ConflictError(f"cluster {cluster_id} already resolved")
            if self.session_dir is not None:
                pipeline.save_session(self.session, self.session_dir.parent)
        return {"cluster_id": cluster_id, "kept": list(members[0]), "rejected": rejected}

    def export(self, out_dir=None):
        target = Path(out_dir) if out_dir else (self.export_dir or (self.session_dir / "export"))
        with self._lock:
            merged, metrics, paths, _ = pipeline.export_session(
                self.session,
                target,
                ontology=self.ontology,
                base_kg=self.base_kg,
                session_dir=self.session_dir,
            )
        return {
            "triples": len(merged.triples),
            "metrics": metrics.to_dict(),
            "paths": {k: str(v) for k, v in paths.items()},
        }


def _make_handler(service, static_dir):
    class Handler(BaseHTTPRequestHandler):
        protocol_version = "HTTP/1.1"

        def log_message(self, *args):
            pass

        def _send_json(self, payload, status=200):
            body = json.dumps(payload, ensure_ascii=False).encode("utf-8")
            self.send_response(status)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)

        def _read_body(self):
            length = int(self.headers.get("Content-Length") or 0)
            if length == 0:
                return {}
            raw = self.rfile.read(length)
            try:
                return json.loads(raw.decode("utf-8"))
            except json.JSONDecodeError:
                return None

        def _serve_static(self, path):
            if static_dir is None:
                self._send_json({"error": "no UI assets configured; use the /api endpoints"}, 404)
                return
            rel = path.lstrip("/") or "index.html"
            target = (Path(static_dir) / rel).resolve()
            root = Path(static_dir).resolve()
            if root not in target.parents and target != root:
                self._send_json({"error": "not found"}, 404)
                return
            if target.is_dir():
                target = target / "index.html"
            if not target.is_file():
                self._send_json({"error": "not found"}, 404)
                return
            body = target.read_bytes()
            self.send_response(200)
            self.send_header(
                "Content-Type", _CONTENT_TYPES.get(target.suffix, "application/octet-stream")
            )
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)

        def do_GET(self):
            parsed = urlparse(self.path)
            query = {k: v[0] for k, v in parse_qs(parsed.query).items()}
            if parsed.path == "/api/session":
                self._send_json(service.session_view())
            elif parsed.path == "/api/candidates":
                self._send_json(
                    service.candidates_view(
                        status=query.get("status"), violations=query.get("violations")
                    )
                )
            elif parsed.path == "/api/metrics":
                self._send_json(service.metrics_view())
            elif parsed.path.startswith("/api/"):
                self._send_json({"error": "not found"}, 404)
            else:
                self._serve_static(parsed.path)

        def do_POST(self):
            parsed = urlparse(self.path)
            parts = [p for p in parsed.path.split("/") if p]
            body = self._read_body()
            if body is None:
                self._send_json({"error": "invalid JSON body"}, 400)
                return
            try:
                if (
                    len(parts) == 5
                    and parts[0] == "api"
                    and parts[1] == "candidates"
                    and parts[4] == "decision"
                ):
                    try:
                        line_number = int(parts[3])
                    except ValueError:
                        self._send_json({"error": "line number must be an integer"}, 404)
                        return
                    view = service.decide(
                        parts[2],
                        line_number,
                        body.get("action", ""),
                        body.get("replacement"),
                    )
                    self._send_json(view)
                elif (
                    len(parts) == 4
                    and parts[0] == "api"
                    and parts[1] == "clusters"
                    and parts[3] == "keep-first"
                ):
                    try:
                        cluster_id = int(parts[2])
                    except ValueError:
                        self._send_json({"error": "cluster id must be an integer"}, 404)
                        return
                    self._send_json(service.keep_first(cluster_id))
                elif parsed.path == "/api/export":
                    self._send_json(service.export(body.get("out_dir")))
                else:
                    self._send_json({"error": "not found"}, 404)
            except pipeline.UnknownCandidateError as exc:
                self._send_json({"error": str(exc)}, 404)
            except ConflictError as exc:
                self._send_json({"error": str(exc), "conflict": True}, 409)
            except IncompleteCurationError as exc:
                self._send_json({"error": str(exc)}, 409)
            except ValueError as exc:
                self._send_json({"error": str(exc)}, 400)

    return Handler


class ServiceHandle:
    def __init__(self, httpd, thread):
        self.httpd = httpd
        self.thread = thread

    @property
    def address(self):
        return self.httpd.server_address

    @property
    def url(self):
        host, port = self.httpd.server_address[:2]
        return f"http://{host}:{port}"

    def shutdown(self):
        self.httpd.shutdown()
        self.httpd.server_close()
        self.thread.join(timeout=5)


def serve(
    session,
    bind=DEFAULT_BIND,
    session_dir=None,
    ontology=None,
    static_dir=None,
    export_dir=None,
    base_kg=None,
):
    """Start the review service on a background thread; returns a handle.

    Raises OSError on bind failure. Sessions without candidates are refused:
    there is nothing to curate.
    """
    if not session.candidates:
        raise pipeline.PipelineError("session has no candidates to review")
    service = ReviewService(
        session,
        session_dir=session_dir,
        ontology=ontology,
        export_dir=export_dir,
        base_kg=base_kg,
    )
    handler = _make_handler(service, static_dir)
    httpd = ThreadingHTTPServer(bind, handler)
    thread = threading.Thread(
        target=lambda: httpd.serve_forever(poll_interval=0.05),
        name="ontoforge-review",
        daemon=True,
    )
    thread.start()
    handle = ServiceHandle(httpd, thread)
    handle.service = service
    return handle

"""Parse raw model responses into candidate triples.

Chat models drift from the instructed `N. (s, r, o)` format, so the parser
accepts numbered, dashed, and bare lines with either parentheses or angle
brackets. Parsing never raises: unusable lines become per-line skips with a
reason, so one bad line cannot discard an otherwise good response.
"""

import re
from dataclasses import dataclass, field, replace

from ontoforge.kernels import normalize_label, similarity

__all__ = [
    "CandidateTriple",
    "ParseReport",
    "parse_triples",
    "normalize_label",
    "similarity",
    "format_triples",
    "FACTCHECK_SENTINEL",
]

FACTCHECK_SENTINEL = "NONE"

SOURCES = ("model_pretrained", "provided_text", "existing_kg")
STATUSES = ("candidate", "accepted", "rejected", "edited")

# Optional "12." / "12)" / "-" prefix, then (…) or <…> spanning the rest.
_LINE_RE = re.compile(
    r"""^(?:(?P<num>\d+)[.)]\s*|-\s+)?
        (?:\((?P<paren>.*)\)|<(?P<angle>.*)>)
        \s*[.;,]?$""",
    re.VERBOSE,
)


@dataclass
class CandidateTriple:
    subject: str
    relation: str
    object: str
    object_is_literal: bool = False
    source: str = "model_pretrained"
    transcript_id: str = ""
    line_number: int = 1
    status: str = "candidate"
    edited_value: tuple[str, str, str] | None = None

    def __post_init__(self):
        if self.source not in SOURCES:
            raise ValueError(f"unknown source {self.source!r}")
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")
        if self.line_number < 1:
            raise ValueError("line_number must be positive")

    @property
    def ref(self):
        return (self.transcript_id, self.line_number)

    def normalized(self):
        return (
            normalize_label(self.subject),
            normalize_label(self.relation),
            normalize_label(self.object),
        )

    def decide(self, status, edited_value=None):
        """Return a copy in a final status; only candidate -> final is legal."""
        if self.status != "candidate":
            raise ValueError(
                f"candidate {self.ref} already decided ({self.status}); "
                "status transitions are candidate -> accepted/rejected/edited only"
            )
        if status not in ("accepted", "rejected", "edited"):
            raise ValueError(f"not a final status: {status!r}")
        if status == "edited" and edited_value is None:
            raise ValueError("edited status requires a replacement triple")
        if status != "edited" and edited_value is not None:
            raise ValueError(f"{status} decision must not carry a replacement")
        return replace(self, status=status, edited_value=edited_value)

    def effective_fields(self):
        """(subject, relation, object) with any curator edit applied."""
        if self.status == "edited" and self.edited_value is not None:
            return tuple(self.edited_value)
        return (self.subject, self.relation, self.object)


@dataclass
class ParseReport:
    triples: list[CandidateTriple] = field(default_factory=list)
    skipped_lines: list[tuple[int, str]] = field(default_factory=list)
    format_detected: str = "none"

    def to_records(self):
        """Line-record dicts for audit logs: one per parsed or skipped line."""
        records = []
        for t in self.triples:
            records.append(
                {
                    "kind": "triple",
                    "line_number": t.line_number,
                    "s": t.subject,
                    "r": t.relation,
                    "o": t.object,
                }
            )
        for line_number, reason in self.skipped_lines:
            records.append({"kind": "skipped", "line_number": line_number, "reason": reason})
        records.sort(key=lambda r: r["line_number"])
        return records


def _split_fields(interior):
    """Split a triple interior on the first two ', ' separators.

    The subject and relation cannot contain ', '; everything after the second
    separator belongs to the object, so drug names such as "1,25-(OH)2D3" or
    objects with embedded clauses survive: "(a, b, c, d)" -> (a, b, "c, d").
    """
    parts = interior.split(", ", 2)
    if len(parts) != 3:
        return None
    subject, relation, obj = (p.strip() for p in parts)
    if not subject or not relation or not obj:
        return None
    return subject, relation, obj


def parse_triples(response_text, transcript_id="", source="model_pretrained"):
    """Parse model response text into a ParseReport.

    Total function: any str input yields a report; failures are per-line
    skips, never exceptions. Blank lines are ignored outright; every
    non-blank line lands either in triples or in skipped_lines.
    """
    triples = []
    skipped = []
    formats_seen = set()

    for line_number, raw in enumerate(response_text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line == FACTCHECK_SENTINEL:
            skipped.append((line_number, "sentinel"))
            formats_seen.add("sentinel")
            continue
        match = _LINE_RE.match(line)
        if not match:
            skipped.append((line_number, "no-triple-pattern"))
            continue
        interior = match.group("paren")
        if interior is None:
            interior = match.group("angle")
        fields = _split_fields(interior)
        if fields is None:
            skipped.append((line_number, "not-three-fields"))
            continue
        subject, relation, obj = fields
        if not all(normalize_label(f) for f in fields):
            skipped.append((line_number, "empty-field"))
            continue
        if match.group("num"):
            formats_seen.add("numbered")
        elif line.startswith("-"):
            formats_seen.add("dashed")
        else:
            formats_seen.add("bare")
        triples.append(
            CandidateTriple(
                subject=subject,
                relation=relation,
                object=obj,
                source=source,
                transcript_id=transcript_id,
                line_number=line_number,
            )
        )

    if not formats_seen:
        detected = "none"
    elif len(formats_seen) == 1:
        detected = next(iter(formats_seen))
    else:
        detected = "mixed"
    return ParseReport(triples=triples, skipped_lines=skipped, format_detected=detected)


def format_triples(triples):
    """Render triples in the instructed output format, one `N. (s, r, o)` per line."""
    lines = []
    for i, triple in enumerate(triples, start=1):
        if isinstance(triple, CandidateTriple):
            s, r, o = triple.effective_fields()
        else:
            s, r, o = triple.subject, triple.relation, triple.object
        lines.append(f"{i}. ({s}, {r}, {o})")
    return "\n".join(lines)

"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 input-format error, 3 backend error,
4 incomplete curation.
"""

import argparse
import json
import sys
from pathlib import Path

from ontoforge import pipeline, review
from ontoforge.kgstore import KgFormatError, MergeInputError, load_kg
from ontoforge.modelclient import BackendConfig, ModelClientError
from ontoforge.ontology import OntologyError, parse_ontology, relation_of
from ontoforge.promptgen import DEFAULT_MAX_TRIPLES, DEFAULT_PROMPT_BUDGET, PromptGenError
from ontoforge.tripleparse import parse_triples
from ontoforge.validate import DEFAULT_DUPLICATE_THRESHOLD, IncompleteCurationError

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_BACKEND = 3
EXIT_CURATION = 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _add_backend_flags(parser):
    parser.add_argument("--backend", choices=["http", "replay", "scripted"])
    parser.add_argument("--fixtures", help="fixture directory for the replay backend")
    parser.add_argument("--endpoint", help="chat-completion endpoint URL (http backend)")
    parser.add_argument("--model", help="model name (http backend)")
    parser.add_argument("--max-retries", type=int)
    parser.add_argument("--timeout", type=float)
    parser.add_argument("--max-parallel", type=int)
    parser.add_argument("--config", help="INI config file ([backend]/[prompts]/[validate])")


def _add_session_flags(parser):
    parser.add_argument("--sessions", default=pipeline.DEFAULT_SESSIONS_DIR)
    parser.add_argument("--template-dir")
    parser.add_argument("--threshold", type=float)
    parser.add_argument("--budget", type=int)


def build_parser():
    parser = _Parser(prog="ontoforge", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="generate a KG from an ontology and a topic")
    p.add_argument("--ontology", required=True)
    p.add_argument("--topic", default="")
    p.add_argument("--kg", help="optional existing KG used for typing checks")
    _add_backend_flags(p)
    _add_session_flags(p)

    p = sub.add_parser("complete", help="fill missing links of an existing KG")
    p.add_argument("--ontology", required=True)
    p.add_argument("--kg", required=True)
    p.add_argument("--max-slots", type=int)
    p.add_argument("--max-triples", type=int)
    _add_backend_flags(p)
    _add_session_flags(p)

    p = sub.add_parser("extract", help="extract triples from corpus text")
    p.add_argument("--corpus", required=True)
    p.add_argument("--ontology", required=True, help="ontology declaring the target relation")
    p.add_argument("--entity", required=True)
    p.add_argument("--relation", required=True)
    p.add_argument(
        "--demonstrator",
        action="append",
        default=[],
        help='example triple from the corpus text, e.g. "(COVID-19, has symptom, fever)"',
    )
    p.add_argument("--gold", type=int, help="number of facts present in the text (for recall)")
    _add_backend_flags(p)
    _add_session_flags(p)

    p = sub.add_parser("factcheck", help="ask the model which KG facts are wrong")
    p.add_argument("--ontology", required=True)
    p.add_argument("--kg", required=True)
    _add_backend_flags(p)
    _add_session_flags(p)

    p = sub.add_parser("export", help="apply decisions and write .kgl/.nt/.ttl")
    p.add_argument("--session", required=True, help="session directory")
    p.add_argument("--labels", help="label file (accept/reject line records)")
    p.add_argument("--out", help="output directory (default <session>/export)")
    p.add_argument("--ontology")
    p.add_argument("--kg")

    p = sub.add_parser("review", help="serve the curation UI/API for a session")
    p.add_argument("--session", required=True, help="session directory")
    p.add_argument("--bind", default="127.0.0.1:7341")
    p.add_argument("--static", help="directory of built UI assets to serve under /")
    p.add_argument("--ontology")
    p.add_argument("--kg")
    p.add_argument("--out", help="export directory for POST /api/export")

    p = sub.add_parser("record-fixtures", help="run a mode against HTTP and record fixtures")
    p.add_argument("--mode", required=True, choices=["construct", "complete", "extract", "factcheck"])
    p.add_argument("--ontology")
    p.add_argument("--kg")
    p.add_argument("--corpus")
    p.add_argument("--topic", default="")
    p.add_argument("--entity")
    p.add_argument("--relation")
    p.add_argument("--demonstrator", action="append", default=[])
    p.add_argument("--gold", type=int)
    p.add_argument("--max-slots", type=int)
    p.add_argument("--max-triples", type=int)
    _add_backend_flags(p)
    _add_session_flags(p)
    return parser


def _load_file_config(args):
    path = getattr(args, "config", None)
    if not path:
        return {}
    return pipeline.load_config(path)


def _pick(args, name, file_config, section, key, default=None, convert=None):
    value = getattr(args, name, None)
    if value is None:
        raw = file_config.get(section, {}).get(key)
        if raw is not None:
            value = convert(raw) if convert else raw
    return default if value is None else value


def _backend_config(args, file_config):
    kind = _pick(args, "backend", file_config, "backend", "kind", default="replay")
    return BackendConfig(
        kind=kind,
        endpoint_url=_pick(args, "endpoint", file_config, "backend", "endpoint_url"),
        model_name=_pick(
            args, "model", file_config, "backend", "model_name", default="gpt-3.5-turbo"
        ),
        api_key_env_var=_pick(
            args, "_no_flag", file_config, "backend", "api_key_env_var", default="ONTOFORGE_API_KEY"
        ),
        fixture_dir=_pick(args, "fixtures", file_config, "backend", "fixture_dir"),
        max_retries=_pick(args, "max_retries", file_config, "backend", "max_retries", 3, int),
        request_timeout=_pick(args, "timeout", file_config, "backend", "request_timeout", 30.0, float),
        max_parallel=_pick(args, "max_parallel", file_config, "backend", "max_parallel", 4, int),
        temperature=_pick(args, "_no_flag", file_config, "backend", "temperature", 0.0, float),
    )


def _read_ontology(path):
    return parse_ontology(Path(path).read_text(encoding="utf-8"))


def _read_kg(path, ontology=None):
    return load_kg(Path(path).read_text(encoding="utf-8"), ontology)


def _parse_demonstrators(raw_list):
    from ontoforge.kgstore import Triple

    demos = []
    for raw in raw_list:
        report = parse_triples(raw)
        if len(report.triples) != 1:
            raise PromptGenError(f"could not parse demonstrator {raw!r} as a single (s, r, o) triple")
        c = report.triples[0]
        demos.append(Triple(subject=c.subject, relation=c.relation, object=c.object))
    return demos


def _print_session_summary(session, sessions_dir):
    report = session.report
    print(f"session {session.session_id} [{session.mode}]")
    print(f"  transcripts: {len(session.transcripts)}")
    print(f"  candidates:  {len(session.candidates)}")
    if report is not None:
        print(f"  violations:  {len(report.violations)}")
        print(f"  duplicate clusters: {len(report.clusters)}")
        if report.negation_warnings:
            print(f"  negation warnings: {len(report.negation_warnings)}")
        if report.verdicts:
            counts = {}
            for verdict in report.verdicts:
                counts[verdict.verdict] = counts.get(verdict.verdict, 0) + 1
            print(f"  verdicts: {counts}")
    print(f"  saved under {Path(sessions_dir) / session.session_id}")


def _cmd_construct(args):
    file_config = _load_file_config(args)
    config = _backend_config(args, file_config)
    ontology = _read_ontology(args.ontology)
    kg = _read_kg(args.kg, ontology) if args.kg else None
    topic = args.topic.strip() or Path(args.ontology).stem
    session = pipeline.run_construct(
        ontology,
        topic,
        config,
        kg=kg,
        budget=_pick(args, "budget", file_config, "prompts", "budget", DEFAULT_PROMPT_BUDGET, int),
        threshold=_pick(
            args, "threshold", file_config, "validate", "threshold", DEFAULT_DUPLICATE_THRESHOLD, float
        ),
        sessions_dir=args.sessions,
        template_dir=_pick(args, "template_dir", file_config, "prompts", "template_dir"),
        ontology_path=args.ontology,
        kg_path=args.kg,
    )
    _print_session_summary(session, args.sessions)
    return EXIT_OK


def _cmd_complete(args):
    file_config = _load_file_config(args)
    config = _backend_config(args, file_config)
    ontology = _read_ontology(args.ontology)
    kg = _read_kg(args.kg, ontology)
    session = pipeline.run_complete(
        kg,
        ontology,
        config,
        max_slots=args.max_slots,
        max_triples=_pick(
            args, "max_triples", file_config, "prompts", "max_triples", DEFAULT_MAX_TRIPLES, int
        ),
        threshold=_pick(
            args, "threshold", file_config, "validate", "threshold", DEFAULT_DUPLICATE_THRESHOLD, float
        ),
        sessions_dir=args.sessions,
        template_dir=_pick(args, "template_dir", file_config, "prompts", "template_dir"),
        ontology_path=args.ontology,
        kg_path=args.kg,
    )
    _print_session_summary(session, args.sessions)
    return EXIT_OK


def _cmd_extract(args):
    file_config = _load_file_config(args)
    config = _backend_config(args, file_config)
    ontology = _read_ontology(args.ontology)
    relation = relation_of(ontology, args.relation)
    if relation is None:
        raise OntologyError(f"relation {args.relation!r} not declared in {args.ontology}")
    demonstrators = _parse_demonstrators(args.demonstrator)
    session = pipeline.run_extract(
        args.corpus,
        args.entity,
        relation,
        demonstrators,
        config,
        gold_count=args.gold,
        threshold=_pick(
            args, "threshold", file_config, "validate", "threshold", DEFAULT_DUPLICATE_THRESHOLD, float
        ),
        sessions_dir=args.sessions,
        template_dir=_pick(args, "template_dir", file_config, "prompts", "template_dir"),
    )
    _print_session_summary(session, args.sessions)
    return EXIT_OK


def _cmd_factcheck(args):
    file_config = _load_file_config(args)
    config = _backend_config(args, file_config)
    ontology = _read_ontology(args.ontology)
    kg = _read_kg(args.kg, ontology)
    session = pipeline.run_factcheck(
        kg,
        config,
        sessions_dir=args.sessions,
        template_dir=_pick(args, "template_dir", file_config, "prompts", "template_dir"),
        kg_path=args.kg,
    )
    _print_session_summary(session, args.sessions)
    return EXIT_OK


def _session_inputs(args, session):
    ontology = None
    base_kg = None
    ontology_path = args.ontology or session.ontology_path
    kg_path = args.kg or session.kg_path
    if ontology_path and Path(ontology_path).is_file():
        ontology = _read_ontology(ontology_path)
    if kg_path and Path(kg_path).is_file():
        base_kg = _read_kg(kg_path, ontology)
    return ontology, base_kg


def _cmd_export(args):
    session_dir = Path(args.session)
    session = pipeline.load_session(session_dir)
    session = pipeline.replay_decisions(session, session_dir / "decisions.jsonl")
    ontology, base_kg = _session_inputs(args, session)
    out_dir = Path(args.out) if args.out else session_dir / "export"
    merged, metrics, paths, merge_report = pipeline.export_session(
        session,
        out_dir,
        labels_path=args.labels,
        ontology=ontology,
        base_kg=base_kg,
        session_dir=session_dir,
    )
    print(f"exported {len(merged.triples)} triples to {out_dir}")
    print(f"  added: {merge_report.added}, skipped duplicates: {merge_report.skipped_duplicates}")
    print("  metrics: " + json.dumps(metrics.to_dict()))
    return EXIT_OK


def _cmd_review(args):
    session_dir = Path(args.session)
    session = pipeline.load_session(session_dir)
    session = pipeline.replay_decisions(session, session_dir / "decisions.jsonl")
    ontology, base_kg = _session_inputs(args, session)
    host, _, port = args.bind.partition(":")
    static_dir = args.static
    if static_dir is None:
        bundled = Path(__file__).parent.parent.parent / "frontend" / "dist"
        static_dir = str(bundled) if bundled.is_dir() else None
    handle = review.serve(
        session,
        bind=(host or "127.0.0.1", int(port or 7341)),
        session_dir=session_dir,
        ontology=ontology,
        static_dir=static_dir,
        export_dir=args.out,
        base_kg=base_kg,
    )
    print(f"review service listening on {handle.url} (Ctrl-C to stop)")
    try:
        handle.thread.join()
    except KeyboardInterrupt:
        handle.shutdown()
    return EXIT_OK


def _cmd_record_fixtures(args):
    if args.backend is None:
        args.backend = "http"
    if not args.fixtures:
        raise UsageError("record-fixtures requires --fixtures DIR for the recorded files")
    file_config = _load_file_config(args)
    config = _backend_config(args, file_config)
    record_dir = args.fixtures
    template_dir = _pick(args, "template_dir", file_config, "prompts", "template_dir")
    if args.mode == "construct":
        ontology = _read_ontology(args.ontology)
        topic = args.topic.strip() or Path(args.ontology).stem
        session = pipeline.run_construct(
            ontology, topic, config,
            budget=_pick(args, "budget", file_config, "prompts", "budget", DEFAULT_PROMPT_BUDGET, int),
            sessions_dir=args.sessions,
            template_dir=template_dir, record_dir=record_dir, ontology_path=args.ontology,
        )
    elif args.mode == "complete":
        ontology = _read_ontology(args.ontology)
        kg = _read_kg(args.kg, ontology)
        session = pipeline.run_complete(
            kg, ontology, config, max_slots=args.max_slots,
            max_triples=args.max_triples or DEFAULT_MAX_TRIPLES,
            sessions_dir=args.sessions, template_dir=template_dir, record_dir=record_dir,
            ontology_path=args.ontology, kg_path=args.kg,
        )
    elif args.mode == "extract":
        ontology = _read_ontology(args.ontology)
        relation = relation_of(ontology, args.relation or "")
        if relation is None:
            raise OntologyError(f"relation {args.relation!r} not declared in {args.ontology}")
        session = pipeline.run_extract(
            args.corpus, args.entity, relation, _parse_demonstrators(args.demonstrator),
            config, gold_count=args.gold, sessions_dir=args.sessions,
            template_dir=template_dir, record_dir=record_dir,
        )
    else:
        ontology = _read_ontology(args.ontology)
        kg = _read_kg(args.kg, ontology)
        session = pipeline.run_factcheck(
            kg, config, sessions_dir=args.sessions,
            template_dir=template_dir, record_dir=record_dir, kg_path=args.kg,
        )
    print(f"recorded {len(session.transcripts)} fixture(s) under {record_dir}")
    return EXIT_OK


_COMMANDS = {
    "construct": _cmd_construct,
    "complete": _cmd_complete,
    "extract": _cmd_extract,
    "factcheck": _cmd_factcheck,
    "export": _cmd_export,
    "review": _cmd_review,
    "record-fixtures": _cmd_record_fixtures,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except IncompleteCurationError as exc:
        print(f"incomplete curation: {exc}", file=sys.stderr)
        return EXIT_CURATION
    except ModelClientError as exc:
        print(f"backend error: {exc}", file=sys.stderr)
        return EXIT_BACKEND
    except (
        OntologyError,
        KgFormatError,
        PromptGenError,
        MergeInputError,
        pipeline.PipelineError,
        pipeline.UnknownCandidateError,
        FileNotFoundError,
        json.JSONDecodeError,
    ) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

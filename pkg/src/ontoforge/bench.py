"""Replay the bundled completion/extraction/construction/fact-check scenarios.

Each scenario runs fully offline against the recorded fixtures under
data/bench/fixtures and applies the bundled curation label files, so the
per-request generated/correct counts are reproducible on any machine.
"""

import json
from dataclasses import dataclass

from ontoforge import pipeline, promptgen
from ontoforge.datafiles import data_path
from ontoforge.kgstore import Triple, load_kg
from ontoforge.modelclient import BackendConfig
from ontoforge.ontology import parse_ontology, relation_of

FIXTURES_DIR = data_path("bench", "fixtures")


def replay_config():
    return BackendConfig(kind="replay", fixture_dir=str(FIXTURES_DIR))


def _read(relpath):
    return data_path(*relpath.split("/")).read_text(encoding="utf-8")


@dataclass
class BenchResult:
    row_id: str
    title: str
    session: object
    metrics: object


def load_table2_rows():
    return json.loads(_read("bench/table2.json"))["rows"]


def load_table3_rows():
    return json.loads(_read("bench/table3.json"))["rows"]


def load_scenarios():
    return json.loads(_read("bench/scenarios.json"))


def run_table2_row(row, sessions_dir=None):
    """One completion request: gap-driven prompt, replay, labels, metrics."""
    ontology = parse_ontology(_read(row["ontology"]))
    kg = load_kg(_read(row["kg"]), ontology)
    session = pipeline.run_complete(
        kg,
        ontology,
        replay_config(),
        max_triples=row["max_triples"],
        sessions_dir=sessions_dir,
    )
    pipeline.apply_labels(session, pipeline.load_labels(data_path(*row["labels"].split("/"))))
    metrics = pipeline.compute_metrics(session.mode, session.candidates)
    session.metrics = metrics
    return BenchResult(row["id"], row["title"], session, metrics)


def run_table3_row(row, sessions_dir=None):
    """One extraction request: text-grounded prompt, replay, labels, recall."""
    ontology = parse_ontology(_read(row["ontology"]))
    relation = relation_of(ontology, row["relation"])
    demo = Triple(
        subject=row["demonstrator"][0],
        relation=row["demonstrator"][1],
        object=row["demonstrator"][2],
    )
    session = pipeline.run_extract(
        data_path(*row["corpus"].split("/")),
        row["entity"],
        relation,
        [demo],
        replay_config(),
        gold_count=row["gold"],
        sessions_dir=sessions_dir,
    )
    pipeline.apply_labels(session, pipeline.load_labels(data_path(*row["labels"].split("/"))))
    metrics = pipeline.compute_metrics("extraction", session.candidates, row["gold"])
    session.metrics = metrics
    return BenchResult(row["id"], row["title"], session, metrics)


def run_construct_scenario(sessions_dir=None, budget=promptgen.DEFAULT_PROMPT_BUDGET):
    scenario = load_scenarios()["construct"]
    ontology = parse_ontology(_read(scenario["ontology"]))
    kg = load_kg(_read(scenario["kg"]), ontology)
    session = pipeline.run_construct(
        ontology,
        scenario["topic"],
        replay_config(),
        kg=kg,
        budget=budget,
        sessions_dir=sessions_dir,
    )
    return scenario, session, ontology, kg


def run_factcheck_scenario(sessions_dir=None):
    scenario = load_scenarios()["factcheck"]
    ontology = parse_ontology(_read(scenario["ontology"]))
    kg = load_kg(_read(scenario["kg"]), ontology)
    session = pipeline.run_factcheck(kg, replay_config(), sessions_dir=sessions_dir)
    return scenario, session, ontology, kg

#!/usr/bin/env python3
"""Serve a bundled review session for frontend integration tests.

Usage: python3 serve_session.py vaccine|tourism

Builds the session from the recorded replay fixtures, starts the review
service on an ephemeral loopback port, prints one JSON line with the URL and
the bundled label file path, then blocks until killed.
"""

import json
import sys
import tempfile
from pathlib import Path

from ontoforge import bench, pipeline, review
from ontoforge.datafiles import data_path
from ontoforge.kgstore import load_kg
from ontoforge.ontology import parse_ontology

ROW_IDS = {"vaccine": "r1_01", "tourism": "r1_09"}


def main():
    scenario = sys.argv[1]
    rows = {row["id"]: row for row in bench.load_table2_rows()}
    row = rows[ROW_IDS[scenario]]
    tmp = Path(tempfile.mkdtemp(prefix="ontoforge-ui-test-"))
    ontology = parse_ontology(data_path(*row["ontology"].split("/")).read_text(encoding="utf-8"))
    kg = load_kg(data_path(*row["kg"].split("/")).read_text(encoding="utf-8"), ontology)
    session = pipeline.run_complete(
        kg,
        ontology,
        bench.replay_config(),
        max_triples=row["max_triples"],
        sessions_dir=tmp,
    )
    dist = Path(__file__).resolve().parents[2] / "dist"
    handle = review.serve(
        session,
        bind=("127.0.0.1", 0),
        session_dir=tmp / session.session_id,
        ontology=ontology,
        base_kg=kg,
        static_dir=str(dist) if dist.is_dir() else None,
        export_dir=tmp / "export",
    )
    print(
        json.dumps(
            {
                "url": handle.url,
                "labels": str(data_path(*row["labels"].split("/"))),
                "session_id": session.session_id,
            }
        ),
        flush=True,
    )
    handle.thread.join()


if __name__ == "__main__":
    main()

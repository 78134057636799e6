import json
import threading

import pytest
import requests

from ontoforge import bench, pipeline, review
from ontoforge.datafiles import data_path
from ontoforge.kgstore import load_kg
from ontoforge.ontology import parse_ontology


@pytest.fixture()
def vaccine_service(tmp_path):
    row = bench.load_table2_rows()[0]
    ontology = parse_ontology(data_path(*row["ontology"].split("/")).read_text())
    kg = load_kg(data_path(*row["kg"].split("/")).read_text(), ontology)
    session = pipeline.run_complete(
        kg, ontology, bench.replay_config(), max_triples=row["max_triples"],
        sessions_dir=tmp_path,
    )
    handle = review.serve(
        session,
        bind=("127.0.0.1", 0),
        session_dir=tmp_path / session.session_id,
        ontology=ontology,
        base_kg=kg,
        export_dir=tmp_path / "export",
    )
    yield handle, session, row, tmp_path
    handle.shutdown()


@pytest.fixture()
def tourism_handle(tmp_path):
    row = bench.load_table2_rows()[8]
    ontology = parse_ontology(data_path(*row["ontology"].split("/")).read_text())
    kg = load_kg(data_path(*row["kg"].split("/")).read_text(), ontology)
    session = pipeline.run_complete(
        kg, ontology, bench.replay_config(), max_triples=row["max_triples"],
        sessions_dir=tmp_path,
    )
    handle = review.serve(
        session, bind=("127.0.0.1", 0), session_dir=tmp_path / session.session_id
    )
    yield handle, session
    handle.shutdown()


def test_session_endpoint_reports_counts_and_relations(vaccine_service):
    handle, session, row, _ = vaccine_service
    data = requests.get(f"{handle.url}/api/session").json()
    assert data["candidate_count"] == 20
    assert data["mode"] == "completion"
    assert data["relations"] == ["manufacturer"]


def test_candidates_listing_with_annotations(vaccine_service):
    handle, _, _, _ = vaccine_service
    rows = requests.get(f"{handle.url}/api/candidates?status=candidate").json()
    assert len(rows) == 20
    sample = rows[0]
    assert {"subject", "relation", "object", "violations", "cluster_id", "provenance"} <= set(sample)
    assert sample["provenance"]["model_line"].startswith("1. (")


def test_decision_read_your_write(vaccine_service):
    handle, session, _, _ = vaccine_service
    target = session.candidates[2]
    url = f"{handle.url}/api/candidates/{target.transcript_id}/{target.line_number}/decision"
    response = requests.post(url, json={"action": "accept"})
    assert response.status_code == 200
    assert response.json()["status"] == "accepted"
    listed = requests.get(f"{handle.url}/api/candidates?status=accepted").json()
    assert [(r["transcript_id"], r["line_number"]) for r in listed] == [
        (target.transcript_id, target.line_number)
    ]


def test_decision_unknown_line_404(vaccine_service):
    handle, session, _, _ = vaccine_service
    tid = session.candidates[0].transcript_id
    response = requests.post(
        f"{handle.url}/api/candidates/{tid}/999/decision", json={"action": "accept"}
    )
    assert response.status_code == 404
    assert "error" in response.json()


def test_second_decision_conflicts(vaccine_service):
    handle, session, _, _ = vaccine_service
    target = session.candidates[0]
    url = f"{handle.url}/api/candidates/{target.transcript_id}/{target.line_number}/decision"
    assert requests.post(url, json={"action": "accept"}).status_code == 200
    conflict = requests.post(url, json={"action": "reject"})
    assert conflict.status_code == 409
    assert conflict.json().get("conflict") is True


def test_concurrent_decisions_same_candidate_single_winner(vaccine_service):
    handle, session, _, _ = vaccine_service
    target = session.candidates[5]
    url = f"{handle.url}/api/candidates/{target.transcript_id}/{target.line_number}/decision"
    statuses = []
    lock = threading.Lock()

    def post(action):
        code = requests.post(url, json={"action": action}).status_code
        with lock:
            statuses.append(code)

    threads = [threading.Thread(target=post, args=(a,)) for a in ("accept", "reject")]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert sorted(statuses) == [200, 409]


def test_concurrent_decisions_distinct_candidates_both_persist(vaccine_service):
    handle, session, _, tmp_path = vaccine_service
    a, b = session.candidates[7], session.candidates[8]
    codes = []
    lock = threading.Lock()

    def post(candidate):
        url = (
            f"{handle.url}/api/candidates/{candidate.transcript_id}"
            f"/{candidate.line_number}/decision"
        )
        code = requests.post(url, json={"action": "accept"}).status_code
        with lock:
            codes.append(code)

    threads = [threading.Thread(target=post, args=(c,)) for c in (a, b)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert codes == [200, 200]
    log = tmp_path / session.session_id / "decisions.jsonl"
    records = [json.loads(line) for line in log.read_text().splitlines()]
    assert len(records) == 2


def test_edit_decision_requires_replacement(vaccine_service):
    handle, session, _, _ = vaccine_service
    target = session.candidates[9]
    url = f"{handle.url}/api/candidates/{target.transcript_id}/{target.line_number}/decision"
    bad = requests.post(url, json={"action": "edit"})
    assert bad.status_code == 400
    good = requests.post(url, json={"action": "edit", "replacement": ["s", "r", "o"]})
    assert good.status_code == 200
    assert good.json()["edited_value"] == ["s", "r", "o"]


def test_metrics_progression_to_vaccine_precision(vaccine_service):
    handle, session, row, _ = vaccine_service
    metrics = requests.get(f"{handle.url}/api/metrics").json()
    assert metrics["remaining_count"] == 20
    assert metrics["precision"] is None

    labels = pipeline.load_labels(data_path(*row["labels"].split("/")))
    for tid, line, decision in labels:
        url = f"{handle.url}/api/candidates/{tid}/{line}/decision"
        assert requests.post(url, json={"action": decision}).status_code == 200

    metrics = requests.get(f"{handle.url}/api/metrics").json()
    assert metrics["remaining_count"] == 0
    assert metrics["generated_count"] == 20
    assert metrics["correct_count"] == 19
    assert metrics["precision"] == 0.95


def test_export_endpoint_blocks_until_curation_done(vaccine_service):
    handle, session, row, tmp_path = vaccine_service
    blocked = requests.post(f"{handle.url}/api/export", json={})
    assert blocked.status_code == 409

    labels = pipeline.load_labels(data_path(*row["labels"].split("/")))
    for tid, line, decision in labels:
        requests.post(
            f"{handle.url}/api/candidates/{tid}/{line}/decision", json={"action": decision}
        )
    done = requests.post(f"{handle.url}/api/export", json={})
    assert done.status_code == 200
    payload = done.json()
    assert payload["triples"] == 19
    assert payload["metrics"]["precision"] == 0.95
    assert (tmp_path / "export" / "kg.nt").is_file()


def test_event_sourcing_replay_matches_service_state(vaccine_service):
    handle, session, row, tmp_path = vaccine_service
    labels = pipeline.load_labels(data_path(*row["labels"].split("/")))
    for tid, line, decision in labels[:7]:
        requests.post(
            f"{handle.url}/api/candidates/{tid}/{line}/decision", json={"action": decision}
        )
    log = tmp_path / session.session_id / "decisions.jsonl"
    pristine = pipeline.load_session(tmp_path / session.session_id)
    pristine.candidates = pipeline.pristine_candidates(pristine)
    pipeline.replay_decisions(pristine, log)
    assert [c.status for c in pristine.candidates] == [c.status for c in session.candidates]


def test_cluster_panel_keep_first(tourism_handle):
    handle, session = tourism_handle
    clusters = {
        view["cluster_id"]
        for view in requests.get(f"{handle.url}/api/candidates").json()
        if view["cluster_id"] is not None
    }
    assert len(clusters) == 3
    target = sorted(clusters)[0]
    result = requests.post(f"{handle.url}/api/clusters/{target}/keep-first", json={})
    assert result.status_code == 200
    payload = result.json()
    assert len(payload["rejected"]) == 1
    kept_line = payload["kept"][1]
    rejected_line = payload["rejected"][0][1]
    assert kept_line < rejected_line

    again = requests.post(f"{handle.url}/api/clusters/{target}/keep-first", json={})
    assert again.status_code == 409


def test_keep_first_unknown_cluster_404(tourism_handle):
    handle, _ = tourism_handle
    assert requests.post(f"{handle.url}/api/clusters/99/keep-first", json={}).status_code == 404


def test_serve_refuses_empty_session():
    session = pipeline.SessionState(session_id="empty", mode="completion")
    with pytest.raises(pipeline.PipelineError):
        review.serve(session, bind=("127.0.0.1", 0))


def test_serve_bind_failure_raises(vaccine_service):
    handle, session, _, _ = vaccine_service
    with pytest.raises(OSError):
        review.serve(session, bind=handle.address[:2])


def test_static_404_without_assets(vaccine_service):
    handle, _, _, _ = vaccine_service
    response = requests.get(f"{handle.url}/")
    assert response.status_code == 404

import json
from pathlib import Path

import pytest

from ontoforge import bench, cli
from ontoforge.datafiles import data_path

FIXTURES = str(data_path("bench", "fixtures"))
DISEASE_ONTO = str(data_path("ontology", "disease.onto"))


def run_cli(*argv):
    return cli.main(list(argv))


def construct_args(tmp_path, **extra):
    scenario = bench.load_scenarios()["construct"]
    args = [
        "construct",
        "--ontology", DISEASE_ONTO,
        "--topic", scenario["topic"],
        "--kg", str(data_path(*scenario["kg"].split("/"))),
        "--backend", "replay",
        "--fixtures", FIXTURES,
        "--sessions", str(tmp_path / "sessions"),
    ]
    for key, value in extra.items():
        args += [f"--{key}", str(value)]
    return args


def only_session_dir(tmp_path):
    dirs = list((tmp_path / "sessions").iterdir())
    assert len(dirs) == 1
    return dirs[0]


def test_construct_then_export_flow(tmp_path, capsys):
    assert run_cli(*construct_args(tmp_path)) == 0
    out = capsys.readouterr().out
    assert "candidates:  18" in out
    assert "violations:  2" in out

    session_dir = only_session_dir(tmp_path)
    scenario = bench.load_scenarios()["construct"]
    code = run_cli(
        "export",
        "--session", str(session_dir),
        "--labels", str(data_path(*scenario["labels"].split("/"))),
        "--out", str(tmp_path / "out"),
    )
    assert code == 0
    out = capsys.readouterr().out
    assert "exported 18 triples" in out
    assert (tmp_path / "out" / "kg.nt").is_file()


def test_complete_row_via_cli(tmp_path, capsys):
    row = bench.load_table2_rows()[0]
    code = run_cli(
        "complete",
        "--ontology", str(data_path(*row["ontology"].split("/"))),
        "--kg", str(data_path(*row["kg"].split("/"))),
        "--backend", "replay",
        "--fixtures", FIXTURES,
        "--max-triples", str(row["max_triples"]),
        "--sessions", str(tmp_path / "sessions"),
    )
    assert code == 0
    assert "candidates:  20" in capsys.readouterr().out


def test_extract_row_via_cli(tmp_path, capsys):
    row = bench.load_table3_rows()[0]
    demo = row["demonstrator"]
    code = run_cli(
        "extract",
        "--ontology", str(data_path(*row["ontology"].split("/"))),
        "--corpus", str(data_path(*row["corpus"].split("/"))),
        "--entity", row["entity"],
        "--relation", row["relation"],
        "--demonstrator", f"({demo[0]}, {demo[1]}, {demo[2]})",
        "--gold", str(row["gold"]),
        "--backend", "replay",
        "--fixtures", FIXTURES,
        "--sessions", str(tmp_path / "sessions"),
    )
    assert code == 0
    assert "candidates:  11" in capsys.readouterr().out


def test_factcheck_via_cli(tmp_path, capsys):
    scenario = bench.load_scenarios()["factcheck"]
    code = run_cli(
        "factcheck",
        "--ontology", str(data_path(*scenario["ontology"].split("/"))),
        "--kg", str(data_path(*scenario["kg"].split("/"))),
        "--backend", "replay",
        "--fixtures", FIXTURES,
        "--sessions", str(tmp_path / "sessions"),
    )
    assert code == 0
    out = capsys.readouterr().out
    assert "contradicted" in out


def test_usage_error_exit_code_1(capsys):
    assert run_cli("construct") == 1  # missing required --ontology
    assert "usage error" in capsys.readouterr().err


def test_input_error_exit_code_2(tmp_path, capsys):
    code = run_cli(
        "construct",
        "--ontology", str(tmp_path / "missing.onto"),
        "--backend", "replay",
        "--fixtures", FIXTURES,
        "--sessions", str(tmp_path / "sessions"),
    )
    assert code == 2
    assert "input error" in capsys.readouterr().err


def test_backend_error_exit_code_3(tmp_path, capsys):
    code = run_cli(
        "construct",
        "--ontology", DISEASE_ONTO,
        "--topic", "a topic that was never recorded",
        "--backend", "replay",
        "--fixtures", str(tmp_path / "empty-fixtures"),
        "--sessions", str(tmp_path / "sessions"),
    )
    assert code == 3
    assert "backend error" in capsys.readouterr().err


def test_incomplete_curation_exit_code_4(tmp_path, capsys):
    assert run_cli(*construct_args(tmp_path)) == 0
    capsys.readouterr()
    session_dir = only_session_dir(tmp_path)
    code = run_cli("export", "--session", str(session_dir), "--out", str(tmp_path / "out"))
    assert code == 4
    assert "incomplete curation" in capsys.readouterr().err


def test_malformed_ontology_exit_code_2(tmp_path, capsys):
    bad = tmp_path / "bad.onto"
    bad.write_text("relation r domain=A range=B\n")
    code = run_cli(
        "construct",
        "--ontology", str(bad),
        "--backend", "replay",
        "--fixtures", FIXTURES,
        "--sessions", str(tmp_path / "sessions"),
    )
    assert code == 2


def test_config_file_supplies_backend(tmp_path, capsys):
    config = tmp_path / "ontoforge.ini"
    config.write_text(f"[backend]\nkind = replay\nfixture_dir = {FIXTURES}\n")
    scenario = bench.load_scenarios()["construct"]
    code = run_cli(
        "construct",
        "--ontology", DISEASE_ONTO,
        "--topic", scenario["topic"],
        "--config", str(config),
        "--sessions", str(tmp_path / "sessions"),
    )
    assert code == 0
    assert "candidates:  18" in capsys.readouterr().out


def test_flags_override_config(tmp_path, capsys):
    config = tmp_path / "ontoforge.ini"
    config.write_text(f"[backend]\nkind = replay\nfixture_dir = {tmp_path / 'wrong'}\n")
    scenario = bench.load_scenarios()["construct"]
    code = run_cli(
        "construct",
        "--ontology", DISEASE_ONTO,
        "--topic", scenario["topic"],
        "--config", str(config),
        "--fixtures", FIXTURES,
        "--sessions", str(tmp_path / "sessions"),
    )
    assert code == 0


def test_topic_defaults_to_ontology_stem(tmp_path, capsys):
    # The default topic is the ontology file stem; no fixture is recorded for
    # it, so replay reports a backend error rather than a usage error.
    code = run_cli(
        "construct",
        "--ontology", DISEASE_ONTO,
        "--backend", "replay",
        "--fixtures", FIXTURES,
        "--sessions", str(tmp_path / "sessions"),
    )
    assert code == 3

import pytest

from ontoforge.datafiles import data_path
from ontoforge.ontology import parse_ontology


@pytest.fixture(scope="session")
def disease_ontology():
    return parse_ontology(data_path("ontology", "disease.onto").read_text(encoding="utf-8"))

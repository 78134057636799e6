"""Access to files bundled under ontoforge/data."""

from pathlib import Path

DATA_DIR = Path(__file__).parent / "data"


def data_path(*parts):
    return DATA_DIR.joinpath(*parts)

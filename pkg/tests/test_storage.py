import pytest

from laurentnet.core.errors import ParseError
from laurentnet.core.lattice import identity_lattice
from laurentnet.storage.artifacts import (
    construction_document,
    dumps,
    lattice_model,
    read_json,
    read_lattice,
    setup_output_dir,
    write_json,
)


def test_lattice_artifact_round_trip(tmp_path, worked_construction):
    path = write_json(tmp_path / "nested" / "lattice.json", lattice_model(worked_construction.lattice))
    loaded = read_lattice(path)
    assert loaded.generator == worked_construction.lattice.generator
    assert loaded.d == 2


def test_construction_document_is_readable_as_lattice(tmp_path, worked_construction):
    path = write_json(tmp_path / "construct.json", construction_document(worked_construction))
    document = read_json(path)
    assert document["roots"]["d"] == 2
    assert document["audit"]["tail_degree"] == -1
    assert read_lattice(path).known_dual == worked_construction.lattice.known_dual


def test_exact_lattice_round_trip(tmp_path, ctx3):
    lattice = identity_lattice(ctx3, 3)
    path = write_json(tmp_path / "identity.json", lattice_model(lattice))
    assert read_lattice(path).generator == lattice.generator


def test_json_is_sorted():
    assert dumps({"b": 1, "a": 2}) == '{\n  "a": 2,\n  "b": 1\n}\n'


def test_invalid_artifacts(tmp_path):
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    with pytest.raises(ParseError):
        read_json(broken)
    other = tmp_path / "other.json"
    other.write_text('{"b": 2}')
    with pytest.raises(ParseError):
        read_lattice(other)


def test_setup_output_dir(tmp_path):
    directory = setup_output_dir(str(tmp_path / "a" / "b"))
    assert directory.is_dir()

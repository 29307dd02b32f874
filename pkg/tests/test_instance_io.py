import json

import pytest

from errors import InvalidInstance, NotClosed
from example_library import build_example
from instance_io import digest, dump_json, load_instance, parse_instance, validate_instance


def test_load_round_trip(tmp_path):
    path = tmp_path / "hopf.json"
    path.write_text(dump_json(build_example("hopf")))
    instance = load_instance(path)
    assert instance.name == "hopf"
    assert instance.twist.n == 1
    assert instance.nerve.counts() == [4, 6, 4]
    assert instance.degrees == [0, 1, 2, 3]
    assert instance.digest == digest(json.loads(path.read_text()))


def test_digest_ignores_key_order():
    assert digest({"a": 1, "b": [1, 2]}) == digest({"b": [1, 2], "a": 1})
    assert digest({"a": 1}) != digest({"a": 2})


def test_schema_errors_name_the_location():
    data = build_example("hopf")
    data["twist"]["n"] = -1
    with pytest.raises(InvalidInstance, match="twist/n"):
        validate_instance(data)
    with pytest.raises(InvalidInstance):
        validate_instance({"nerve": {"facets": []}, "twist": {"n": 1}})


def test_support_outside_nerve():
    data = build_example("hopf")
    data["twist"]["support"] = [{"simplex": [0, 1, 7], "value": [1]}]
    with pytest.raises(InvalidInstance):
        parse_instance(data)


def test_open_twist_is_reported():
    data = {
        "nerve": {"facets": [[0, 1, 2, 3]]},
        "twist": {"n": 1, "support": [{"simplex": [0, 1, 2], "value": [1]}]},
    }
    with pytest.raises(NotClosed):
        parse_instance(data)


def test_invalid_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    with pytest.raises(InvalidInstance):
        load_instance(path)


def test_explicit_setup_and_groupoid(rng):
    data = build_example("t3")
    data["setup"] = {"s": [{"pair": [0, 1], "value": [0, "1/2"]},
                           {"pair": [0, 2], "value": [0, 0]},
                           {"pair": [1, 2], "value": [0, "-1/2"]}]}
    data["groupoid"] = {"group": [2], "set": ["a", "b"], "action": {"0": {"a": "b", "b": "a"}},
                        "covers": ["trivial"], "modulus": 2}
    instance = parse_instance(data)
    setup = instance.setup(rng)
    assert len(setup.samples) == 3
    assert setup.euler(0, 0, 1, 1) == (0, 0)
    ((groupoid, covers),) = instance.groupoid_cases()
    assert len(covers) == 1
    assert groupoid.objects == ("a", "b")

import pytest

from errors import UnknownExample
from example_library import EXAMPLES, build_example, torus_triangles, validated_torus_facets
from instance_io import parse_instance, validate_instance


def test_torus_triangulation():
    triangles = torus_triangles()
    assert len(triangles) == 14
    assert [0, 1, 3] in triangles
    assert len(validated_torus_facets()) == 14


@pytest.mark.parametrize("name", sorted(EXAMPLES))
def test_every_example_is_a_valid_instance(name):
    data = build_example(name)
    validate_instance(data)
    instance = parse_instance(data)
    assert instance.has_setup
    assert instance.name.startswith(name)


def test_parameters_are_recorded():
    assert build_example("lens", k=7)["twist"]["support"][0]["value"] == [7]
    assert build_example("s2-rank2", euler=(2, 3))["parameters"] == {"euler": [2, 3]}
    assert build_example("s2-rank2", euler=(0, 0))["twist"]["support"] == []
    assert build_example("torus-nerve")["compute"]["degrees"] == [0, 1, 2]


def test_unknown_example():
    with pytest.raises(UnknownExample) as excinfo:
        build_example("klein-bottle")
    assert "hopf" in str(excinfo.value)

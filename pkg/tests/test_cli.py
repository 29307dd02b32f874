import json

import pytest
from click.testing import CliRunner

from cli import cli, run_compute
from config import Settings
from errors import DegreeOutOfRange
from example_library import build_example
from instance_io import dump_json, parse_instance


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def write_instance(tmp_path):
    def write(data, name="instance.json"):
        path = tmp_path / name
        path.write_text(dump_json(data))
        return str(path)
    return write


@pytest.fixture
def quick_config(tmp_path):
    path = tmp_path / "quick.yaml"
    path.write_text("samples: 16\nrandom_triples: 1\n")
    return str(path)


def _groups(result):
    report = json.loads(result.stdout)
    return {(r["degree"], r["coefficients"]): r["group"] for r in report["results"]}


def test_example_then_compute(runner, tmp_path):
    result = runner.invoke(cli, ["example", "hopf"])
    assert result.exit_code == 0
    path = tmp_path / "hopf.json"
    path.write_text(result.stdout)

    result = runner.invoke(cli, ["compute", str(path), "--format", "json"])
    assert result.exit_code == 0, result.output
    groups = _groups(result)
    assert groups[(2, "Z")] == {"rank": 0, "torsion": [], "coefficients": "Z"}
    assert groups[(3, "Z")] == {"rank": 1, "torsion": [], "coefficients": "Z"}

    report = json.loads(result.stdout)
    assert report["schema"] == "dimred-report/1"
    assert len(report["provenance"]["input_sha256"]) == 64


def test_compute_lens_torsion(runner, write_instance):
    path = write_instance(build_example("lens", k=3))
    result = runner.invoke(cli, ["compute", path, "--degree", "2", "--coeff", "Z", "--coeff", "QZ",
                                 "--format", "json"])
    assert result.exit_code == 0, result.output
    groups = _groups(result)
    assert groups[(2, "Z")]["torsion"] == [3]
    assert groups[(2, "QZ")] == {"rank": 0, "torsion": [], "coefficients": "Q/Z"}


def test_compute_text_table(runner, write_instance):
    path = write_instance(build_example("nilmanifold", k=2))
    result = runner.invoke(cli, ["compute", path, "--degree", "2"])
    assert result.exit_code == 0, result.output
    assert "nilmanifold-2" in result.stdout
    assert "Z^2 + Z/2" in result.stdout


def test_structural_checks_pass(runner, write_instance):
    path = write_instance(build_example("lens", k=2))
    result = runner.invoke(cli, ["verify", path, "--checks", "d2,steenrod,les,tu", "--format", "json"])
    assert result.exit_code == 0, result.output
    report = json.loads(result.stdout)
    assert report["passed"]
    assert [c["check"] for c in report["checks"]] == ["d2", "steenrod", "les", "tu"]


def test_formula_checks_pass(runner, write_instance, quick_config):
    path = write_instance(build_example("s2-rank2", euler=(2, 1)))
    result = runner.invoke(cli, ["--config", quick_config, "verify", path,
                                 "--checks", "surjectivity,lift", "--seed", "3", "--format", "json"])
    assert result.exit_code == 0, result.output
    report = json.loads(result.stdout)
    assert report["passed"]
    assert report["provenance"]["seed"] == 3
    names = {r["name"] for c in report["checks"] for r in c["reports"]}
    assert {"setup", "triple_cocycle", "m_data", "tu_closure", "tudimred_identities",
            "lift_independence"} <= names


def test_broken_antisymmetry_fails_verification(runner, write_instance, quick_config):
    data = build_example("hopf")
    data["setup"] = {"s": [
        {"pair": [0, 1], "value": [0]}, {"pair": [1, 0], "value": ["1/2"]},
        {"pair": [0, 2], "value": [0]},
        {"pair": [1, 2], "value": [1]}, {"pair": [0, 3], "value": [0]},
        {"pair": [1, 3], "value": [0]}, {"pair": [2, 3], "value": [0]},
    ]}
    path = write_instance(data)
    result = runner.invoke(cli, ["--config", quick_config, "verify", path,
                                 "--checks", "surjectivity", "--format", "json"])
    assert result.exit_code == 1
    report = json.loads(result.stdout)
    assert not report["passed"]
    failures = report["checks"][0]["reports"][0]["failures"]
    assert any(f.get("error") == "NonInteger" for f in failures)


def test_formula_checks_need_a_setup(runner, write_instance):
    data = build_example("hopf")
    del data["setup"]
    result = runner.invoke(cli, ["verify", write_instance(data), "--checks", "lift"])
    assert result.exit_code == 2
    assert "InapplicableCheck" in result.stderr


def test_open_twist_exit_code(runner, write_instance):
    data = {"nerve": {"facets": [[0, 1, 2, 3]]},
            "twist": {"n": 1, "support": [{"simplex": [0, 1, 2], "value": [1]}]}}
    result = runner.invoke(cli, ["compute", write_instance(data)])
    assert result.exit_code == 3
    assert "NotClosed" in result.stderr


def test_invalid_instance_exit_code(runner, write_instance):
    result = runner.invoke(cli, ["compute", write_instance({"nerve": {"facets": []}})])
    assert result.exit_code == 2


def test_unknown_example_and_check(runner, write_instance):
    assert runner.invoke(cli, ["example", "klein-bottle"]).exit_code == 2
    path = write_instance(build_example("t3"))
    assert runner.invoke(cli, ["verify", path, "--checks", "bogus"]).exit_code == 2


def test_text_verify_report(runner, write_instance):
    path = write_instance(build_example("t3"))
    result = runner.invoke(cli, ["verify", path, "--checks", "d2,steenrod"])
    assert result.exit_code == 0, result.output
    assert "VERIFICATION: t3" in result.stdout
    assert "All checks passed" in result.stdout


@pytest.mark.parametrize("name, params, degree, expected", [
    ("hopf", {}, 3, {"rank": 1, "torsion": [], "coefficients": "Z"}),
    ("lens", {"k": 2}, 2, {"rank": 0, "torsion": [2], "coefficients": "Z"}),
    ("s2-rank2", {"euler": (2, 0)}, 3, {"rank": 1, "torsion": [2], "coefficients": "Z"}),
    ("t3", {}, 3, {"rank": 1, "torsion": [], "coefficients": "Z"}),
    ("nilmanifold", {"k": 3}, 2, {"rank": 2, "torsion": [3], "coefficients": "Z"}),
])
def test_golden_groups(runner, write_instance, name, params, degree, expected):
    path = write_instance(build_example(name, **params))
    result = runner.invoke(cli, ["compute", path, "--degree", str(degree), "--format", "json"])
    assert result.exit_code == 0, result.output
    assert _groups(result)[(degree, "Z")] == expected


def test_reports_are_reproducible(runner, write_instance, quick_config):
    path = write_instance(build_example("hopf"))
    args = ["--config", quick_config, "verify", path, "--checks", "d2,lift", "--seed", "5",
            "--format", "json"]
    assert runner.invoke(cli, args).stdout == runner.invoke(cli, args).stdout


def test_hopf_differential_and_sequences(runner, write_instance):
    path = write_instance(build_example("hopf"))
    result = runner.invoke(cli, ["verify", path, "--checks", "d2,les", "--format", "json"])
    assert result.exit_code == 0, result.output
    assert json.loads(result.stdout)["passed"]


def test_lift_on_torus_nerve(runner, write_instance, quick_config):
    path = write_instance(build_example("torus-nerve", euler=(1, 2)))
    result = runner.invoke(cli, ["--config", quick_config, "verify", path, "--checks", "lift",
                                 "--seed", "11", "--format", "json"])
    assert result.exit_code == 0, result.output
    (check,) = json.loads(result.stdout)["checks"]
    assert check["reports"][0]["notes"] == {"result": "all components zero"}


def test_empty_degree_list_is_an_input_error(runner, write_instance):
    data = build_example("hopf")
    data["compute"]["degrees"] = []
    result = runner.invoke(cli, ["compute", write_instance(data)])
    assert result.exit_code == 2
    assert "InvalidInstance" in result.stderr


def test_negative_degree_is_an_input_error(runner, write_instance):
    path = write_instance(build_example("hopf"))
    result = runner.invoke(cli, ["compute", path, "--degree", "-1"])
    assert result.exit_code == 2
    assert "DegreeOutOfRange" in result.stderr
    assert "[-1]" in result.stderr


def test_run_compute_rejects_empty_degrees():
    instance = parse_instance(build_example("t3"))
    with pytest.raises(DegreeOutOfRange):
        run_compute(instance, [], ["Z"], Settings())


@pytest.mark.parametrize("content", ["colour: blue\n", "seed: [1\n", "samples: many\n"])
def test_bad_config_file_is_an_input_error(runner, write_instance, tmp_path, content):
    config = tmp_path / "bad.yaml"
    config.write_text(content)
    path = write_instance(build_example("t3"))
    result = runner.invoke(cli, ["--config", str(config), "compute", path])
    assert result.exit_code == 2
    assert "ConfigError" in result.stderr


def test_missing_config_file_is_an_input_error(runner, write_instance, tmp_path):
    path = write_instance(build_example("t3"))
    result = runner.invoke(cli, ["--config", str(tmp_path / "nope.yaml"), "compute", path])
    assert result.exit_code == 2
    assert "not found" in result.stderr

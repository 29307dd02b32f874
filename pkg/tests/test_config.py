import io
import json
import logging

import pytest

from config import Settings, load_settings
from errors import ConfigError
from log_setup import configure_logging


def test_defaults():
    settings = load_settings(environ={})
    assert settings == Settings()
    assert settings.seed == 0
    assert settings.log_level == "WARNING"


def test_yaml_then_environment(tmp_path):
    path = tmp_path / "dimred.yaml"
    path.write_text("seed: 9\nsamples: 50\nlog_format: json\n")
    settings = load_settings(path, environ={"DIMRED_SAMPLES": "12"})
    assert settings.seed == 9
    assert settings.samples == 12
    assert settings.log_format == "json"


def test_config_path_from_environment(tmp_path):
    path = tmp_path / "dimred.yaml"
    path.write_text("cell_budget: 100\n")
    assert load_settings(environ={"DIMRED_CONFIG": str(path)}).cell_budget == 100


def test_bad_config(tmp_path):
    path = tmp_path / "dimred.yaml"
    path.write_text("colour: blue\n")
    with pytest.raises(ConfigError, match="colour"):
        load_settings(path, environ={})
    with pytest.raises(ConfigError, match="not found"):
        load_settings(tmp_path / "missing.yaml", environ={})
    path.write_text("seed: [1\n")
    with pytest.raises(ConfigError, match="not valid YAML"):
        load_settings(path, environ={})
    path.write_text("- seed\n")
    with pytest.raises(ConfigError, match="mapping"):
        load_settings(path, environ={})


def test_bad_setting_values():
    with pytest.raises(ConfigError, match="samples"):
        load_settings(environ={"DIMRED_SAMPLES": "many"})
    with pytest.raises(ConfigError):
        load_settings(environ={"DIMRED_SEED": "1.5"})


def test_replace_skips_unset_values():
    settings = Settings().replace(seed=None, log_level="DEBUG")
    assert settings.seed == 0
    assert settings.log_level == "DEBUG"


def test_json_log_lines():
    stream = io.StringIO()
    configure_logging("INFO", "json", stream)
    logging.getLogger("dimred.test").info("assembled", extra={"columns": 3})
    record = json.loads(stream.getvalue().splitlines()[-1])
    assert record["message"] == "assembled"
    assert record["columns"] == 3
    with pytest.raises(ValueError):
        configure_logging("INFO", "xml")

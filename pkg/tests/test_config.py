import json

import pytest

from harmsync.config import DEFAULT_CONFIG, load_config
from harmsync.exceptions import ConfigError


def test_defaults_without_file():
    config = load_config(None)
    assert config == DEFAULT_CONFIG
    assert config is not DEFAULT_CONFIG


def test_yaml_overrides(tmp_path):
    path = tmp_path / "harmsync.yaml"
    path.write_text("REPORT_FORMAT: md\nSIM_T_END: 500.0\n", encoding="utf-8")
    config = load_config(str(path))
    assert config["REPORT_FORMAT"] == "md"
    assert config["SIM_T_END"] == 500.0
    assert config["FLOAT_DIGITS"] == DEFAULT_CONFIG["FLOAT_DIGITS"]


def test_unknown_keys_are_dropped(tmp_path, caplog):
    path = tmp_path / "harmsync.json"
    path.write_text(json.dumps({"VERIFY_SAMPLES": 5, "MEMORY_LIMIT": 10}), encoding="utf-8")
    config = load_config(str(path))
    assert config["VERIFY_SAMPLES"] == 5
    assert "MEMORY_LIMIT" not in config
    assert "MEMORY_LIMIT" in caplog.text


@pytest.mark.parametrize("name, content", [
    ("bad.json", "{not json"),
    ("bad.toml", "REPORT_FORMAT = 'md'"),
    ("list.yaml", "- 1\n- 2\n"),
    ("format.json", '{"REPORT_FORMAT": "xml"}'),
])
def test_invalid_config_files(tmp_path, name, content):
    path = tmp_path / name
    path.write_text(content, encoding="utf-8")
    with pytest.raises(ConfigError):
        load_config(str(path))


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        load_config(str(tmp_path / "absent.json"))

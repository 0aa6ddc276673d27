import json
import logging

import pytest
from pydantic import ValidationError

from foldmatch.config import LoggingSettings, Settings
from foldmatch.logs import JsonFormatter, configure_logging


def test_yaml_overrides(tmp_path):
    path = tmp_path / "settings.yaml"
    path.write_text("sweep:\n  max_rank: 4\n  kinds: [C]\nrender:\n  format: tikz\n", encoding="utf-8")
    loaded = Settings.load(path)
    assert loaded.sweep.max_rank == 4
    assert loaded.sweep.kinds == ["C"]
    assert loaded.render.format == "tikz"
    assert loaded.oracle.closure_budget == 5000


def test_thread_count_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("FOLDMATCH_THREADS", "4")
    path = tmp_path / "settings.yaml"
    path.write_text("sweep:\n  max_rank: 3\n", encoding="utf-8")
    assert Settings.load(path).sweep.threads == 4


def test_nested_environment_variables(tmp_path, monkeypatch):
    monkeypatch.setenv("ORACLE__CLOSURE_BUDGET", "10")
    path = tmp_path / "empty.yaml"
    path.write_text("", encoding="utf-8")
    assert Settings.load(path).oracle.closure_budget == 10


@pytest.mark.parametrize(
    "text",
    [
        "sweep:\n  max_rank: 1\n",
        "sweep:\n  kinds: [D]\n",
        "render:\n  format: svg\n",
        "render:\n  scale: 0\n",
    ],
)
def test_invalid_values_rejected(tmp_path, text):
    path = tmp_path / "settings.yaml"
    path.write_text(text, encoding="utf-8")
    with pytest.raises(ValidationError):
        Settings.load(path)


def test_json_formatter_keeps_extra_fields():
    record = logging.makeLogRecord({"name": "foldmatch.oracle", "msg": "explored", "levelname": "DEBUG", "kind": "B"})
    payload = json.loads(JsonFormatter().format(record))
    assert payload["message"] == "explored"
    assert payload["kind"] == "B"
    assert payload["logger"] == "foldmatch.oracle"


def test_configure_logging_sets_level():
    configure_logging(LoggingSettings(format="json", level="info"))
    root = logging.getLogger("foldmatch")
    assert root.level == logging.INFO
    assert isinstance(root.handlers[0].formatter, JsonFormatter)
    configure_logging(LoggingSettings())

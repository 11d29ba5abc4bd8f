import csv
import json

import pytest

from src.errors import ParameterError
from src.export_manager import ExportManager, flatten
from src.settings import DEFAULT_SETTINGS_PATH, Settings, settings_from
from src.theme_manager import ThemeManager

REPORT = {
    "command": {"name": "code analyze", "support": [2, 3]},
    "inputs": {},
    "result": {"rate": "8/15", "degree": 3, "verified": True, "rows": [{"n": 15}, {"n": 7}]},
}


def test_defaults_file_matches_dataclass():
    assert settings_from(DEFAULT_SETTINGS_PATH, environ={}) == Settings()


def test_environment_overrides(tmp_path):
    path = tmp_path / "settings.json"
    path.write_text(json.dumps({"limits": {"max_syndromes": 1024}, "behavior": {"log_level": "DEBUG"}}))
    settings = settings_from(path, environ={"PERMADD_MAX_GROUP_ORDER": "64"})
    assert settings.max_syndromes == 1024
    assert settings.log_level == "DEBUG"
    assert settings.max_group_order == 64


def test_bad_values_fall_back(tmp_path):
    path = tmp_path / "settings.json"
    path.write_text("{not json")
    settings = settings_from(path, environ={"PERMADD_MAX_SYNDROMES": "lots"})
    assert settings == Settings()


def test_settings_file_from_environment(tmp_path):
    path = tmp_path / "other.json"
    path.write_text(json.dumps({"limits": {"max_field_degree": 8}}))
    assert settings_from(environ={"PERMADD_SETTINGS": str(path)}).max_field_degree == 8
    assert settings_from(tmp_path / "missing.json", environ={}) == Settings()


def test_flatten():
    leaves = dict(flatten(REPORT["result"]))
    assert leaves["rows[1].n"] == 7
    assert leaves["rate"] == "8/15"


def test_unstamped_exports_are_reproducible(tmp_path):
    manager = ExportManager(stamp=False)
    a = manager.export(tmp_path / "a.md", REPORT).read_text()
    b = manager.export(tmp_path / "b.md", REPORT).read_text()
    assert a == b
    data = json.loads(manager.export(tmp_path / "r.json", REPORT).read_text())
    assert data["metadata"] == {"tool": "permadd", "version": "1.0"}


def test_csv_export(tmp_path):
    path = ExportManager().export(tmp_path / "r.csv", REPORT)
    with open(path, newline="", encoding="utf-8") as f:
        rows = list(csv.reader(f))
    assert rows[0] == ["Category", "Metric", "Value"]
    assert ["result", "degree", "3"] in rows
    assert ["command", "support", "[2, 3]"] in rows


def test_html_export_escapes(tmp_path):
    report = {**REPORT, "command": {"name": "<gen>"}}
    html = ExportManager().export(tmp_path / "r.html", report).read_text()
    assert "&lt;gen&gt;" in html


def test_unknown_format(tmp_path):
    with pytest.raises(ParameterError):
        ExportManager().export(tmp_path / "r.pdf", REPORT)


def test_theme_paint():
    assert ThemeManager.paint("x", "accent", "plain") == "x"
    painted = ThemeManager.paint("x", "error", "terminal")
    assert painted.startswith("\x1b[") and "x" in painted
    assert ThemeManager.colors("nope") == ThemeManager.colors("terminal")
    summary = ThemeManager.render_report(REPORT, "plain")
    assert "verified: yes" in summary

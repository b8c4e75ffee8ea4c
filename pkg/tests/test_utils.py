"""
Tests for utility helpers used for log and manifest path resolution.
"""

from pathlib import Path

from utils import get_project_root, resolve_input_path, resolve_log_path


def test_project_root_holds_the_config():
    """The project root is where config.yaml and the bundled manifests live."""
    root = get_project_root()
    assert (root / "config.yaml").exists()
    assert (root / "quintic.json").exists()


def test_resolve_log_path_creates_parent(tmp_path):
    """resolve_log_path should create the parent directory when missing."""
    log_path = resolve_log_path(tmp_path / "logs" / "engine.log")

    assert log_path == tmp_path / "logs" / "engine.log"
    assert log_path.parent.is_dir()
    assert not log_path.exists()


def test_resolve_log_path_relative_is_anchored(monkeypatch, tmp_path):
    """Relative log paths are placed under the project root."""
    monkeypatch.setattr("utils._PROJECT_ROOT", tmp_path)

    log_path = resolve_log_path("logs/engine.log")

    assert log_path == tmp_path / "logs" / "engine.log"
    assert (tmp_path / "logs").is_dir()


def test_resolve_input_path_prefers_cwd(monkeypatch, tmp_path):
    """A file in the current directory wins over the project root."""
    (tmp_path / "curve.json").write_text("{}", encoding="utf-8")
    monkeypatch.chdir(tmp_path)

    assert resolve_input_path("curve.json") == Path("curve.json")


def test_resolve_input_path_falls_back_to_project_root(monkeypatch, tmp_path):
    """Bundled manifests resolve from any working directory."""
    monkeypatch.chdir(tmp_path)

    resolved = resolve_input_path("quintic.json")

    assert resolved == get_project_root() / "quintic.json"
    assert resolved.exists()


def test_resolve_input_path_missing_is_unchanged(monkeypatch, tmp_path):
    """Missing paths come back untouched so the loader reports them."""
    monkeypatch.chdir(tmp_path)

    assert resolve_input_path("absent.json") == Path("absent.json")

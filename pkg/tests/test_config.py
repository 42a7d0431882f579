import pytest
from dynaconf import ValidationError

from exactlab.config import load_settings


def test_packaged_defaults(tmp_path):
    settings = load_settings(tmp_path / "absent.toml")
    assert settings.MULT_BOUND == 2
    assert settings.DEFAULT_PRESET == "xquot:2,2"
    assert settings.AXIOM_CAP == 4096


def test_local_file_and_environment_override_defaults(tmp_path, monkeypatch):
    local = tmp_path / "exactlab.toml"
    local.write_text("[default]\nMULT_BOUND = 1\nENUM_CAP = 512\n", encoding="utf-8")
    monkeypatch.setenv("EXACTLAB_ENUM_CAP", "99")
    settings = load_settings(local)
    assert settings.MULT_BOUND == 1
    assert settings.ENUM_CAP == 99
    assert settings.LATTICE_LIMIT == 20000


def test_environment_tables_are_switched(tmp_path, monkeypatch):
    local = tmp_path / "exactlab.toml"
    local.write_text("[default]\nEXT_BOUND = 4\n\n[quick]\nEXT_BOUND = 2\n", encoding="utf-8")
    assert load_settings(local).EXT_BOUND == 4
    monkeypatch.setenv("EXACTLAB_ENV", "quick")
    assert load_settings(local).EXT_BOUND == 2


def test_out_of_range_limits_are_rejected(tmp_path):
    local = tmp_path / "exactlab.toml"
    local.write_text("[default]\nMULT_BOUND = -1\n", encoding="utf-8")
    with pytest.raises(ValidationError):
        broken = load_settings(local)
        broken.validators.validate()

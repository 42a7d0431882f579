import json
import logging

import pytest
from conftest import X2_SPEC

from exactlab.config import load_settings
from exactlab.errors import InconclusiveError
from exactlab.main import (
    EXIT_INCONCLUSIVE,
    EXIT_OK,
    EXIT_SPEC_ERROR,
    build_parser,
    main,
    run_config_from_args,
)
from exactlab.workbench import Workbench


def run(tmp_path, *argv):
    return main([*argv, "--out", str(tmp_path), "--log-level", "WARNING"])


def test_validate_default_preset(tmp_path, capsys):
    assert run(tmp_path, "validate") == EXIT_OK
    out = capsys.readouterr().out
    assert "9 objects at bound 2" in out


def test_validate_spec_file(tmp_path, x2_spec_file, capsys):
    assert run(tmp_path, "validate", "--spec", str(x2_spec_file), "--bound", "1") == EXIT_OK
    assert "2 seeds valid" in capsys.readouterr().out


def test_preset_and_spec_are_exclusive(x2_spec_file):
    with pytest.raises(SystemExit):
        build_parser().parse_args(["validate", "--preset", "xquot:2,2", "--spec", str(x2_spec_file)])


def test_flags_override_settings():
    args = build_parser().parse_args(["subcats", "--bound", "1", "--cap", "99", "--emit", "dot"])
    config = run_config_from_args(args)
    assert config.preset == "xquot:2,2"
    assert config.mult_bound == 1
    assert config.enum_cap == 99
    assert config.emit == ["dot"]


@pytest.mark.parametrize(
    "argv",
    [
        ["validate", "--preset", "xquot:4,2"],
        ["validate", "--bound", "-1"],
        ["axioms", "--structure", "bogus"],
        ["axioms", "--N", "nobody"],
        ["validate", "--spec", "missing.yaml"],
    ],
)
def test_bad_input_exits_with_spec_error(tmp_path, argv):
    assert run(tmp_path, *argv) == EXIT_SPEC_ERROR


def test_configuration_check_is_logged(tmp_path, capsys, caplog):
    caplog.set_level(logging.INFO, logger="exactlab.utils.config_validator")
    assert run(tmp_path, "validate", "--bound", "-1") == EXIT_SPEC_ERROR
    captured = capsys.readouterr()
    assert "run configuration" not in captured.out
    assert "mult_bound must be >= 0" in captured.err
    messages = [(r.levelno, r.getMessage()) for r in caplog.records]
    assert (logging.INFO, "Checking run configuration for 'validate'") in messages
    assert any(level == logging.ERROR and "mult_bound" in text for level, text in messages)


def test_malformed_spec_reports_the_line(tmp_path, capsys):
    path = tmp_path / "bad.yaml"
    path.write_text(X2_SPEC.replace("[1, 0, 1, 1]", "[1, 0, 1]"), encoding="utf-8")
    assert run(tmp_path, "validate", "--spec", str(path)) == EXIT_SPEC_ERROR
    assert "line 9" in capsys.readouterr().err


def test_non_prime_spec_reports_the_line(tmp_path, capsys):
    path = tmp_path / "p4.yaml"
    path.write_text(X2_SPEC.replace("p: 2", "p: 4"), encoding="utf-8")
    assert run(tmp_path, "validate", "--spec", str(path)) == EXIT_SPEC_ERROR
    assert "line 2" in capsys.readouterr().err


def test_axioms_report(tmp_path):
    assert run(tmp_path, "axioms", "--emit", "json", "--emit", "md") == EXIT_OK
    report = json.loads((tmp_path / "axioms.json").read_text(encoding="utf-8"))
    assert report["status"] == "pass"
    assert report["header"]["universe_size"] == 9
    assert report["header"]["config"]["structure"] == "abelian"
    assert {v["name"] for v in report["verdicts"]} >= {"Ex0", "Ex1", "Ex2", "Ex2op"}
    assert "**pass**" in (tmp_path / "axioms.md").read_text(encoding="utf-8")


def test_induced_structure_that_is_not_extension_closed(tmp_path, capsys):
    assert run(tmp_path, "axioms", "--structure", "induced:M1") == EXIT_SPEC_ERROR
    assert "not extension-closed" in capsys.readouterr().err


def test_frobenius_report(tmp_path):
    assert run(tmp_path, "frobenius", "--bound", "1") == EXIT_OK
    report = json.loads((tmp_path / "frobenius.json").read_text(encoding="utf-8"))
    assert report["frobenius"] is True
    assert report["projectives"] == report["injectives"] == ["0", "M2"]
    assert report["stable_classes"] == [["0", "M2"], ["M1", "M1+M2"]]


def test_thick_correspondence_report(tmp_path):
    assert run(tmp_path, "correspondence", "--kind", "thick", "--emit", "json", "--emit", "dot") == EXIT_OK
    report = json.loads((tmp_path / "correspondence.json").read_text(encoding="utf-8"))
    section = report["correspondence"]
    assert section["pairs"] == [[0, 0], [1, 1]]
    assert report["n"] == ["0", "M2", "M2^2"]
    assert (tmp_path / "correspondence_thick_ambient.dot").exists()
    assert (tmp_path / "correspondence_thick_quotient.dot").exists()


def test_stable_lattice_dot(tmp_path):
    assert run(tmp_path, "subcats", "--side", "stable", "--emit", "dot") == EXIT_OK
    dot = (tmp_path / "subcats_thick_quotient.dot").read_text(encoding="utf-8")
    assert dot.startswith('digraph "thick_quotient"')
    assert dot.count("[label=") == 2
    assert dot.count("->") == 1
    assert 'n0 [label="{0}"]' in dot


def test_gorenstein_report(tmp_path):
    assert run(tmp_path, "gorenstein", "--preset", "rsz:2,2", "--bound", "1") == EXIT_OK
    report = json.loads((tmp_path / "gorenstein.json").read_text(encoding="utf-8"))
    assert report["members"] == ["0", "R"]
    by_module = {m["module"]: m for m in report["modules"]}
    assert by_module["k"]["totally_reflexive"] is False
    assert by_module["k"]["ext_m"]["1"] > 0


def test_reports_are_deterministic(tmp_path):
    argv = ["subcats", "--kind", "complete", "--emit", "json", "--emit", "md"]
    assert run(tmp_path, *argv) == EXIT_OK
    first = {p.name: p.read_bytes() for p in tmp_path.iterdir()}
    assert run(tmp_path, *argv) == EXIT_OK
    second = {p.name: p.read_bytes() for p in tmp_path.iterdir()}
    assert first == second


def test_inconclusive_run_exits_with_three(tmp_path, mocker):
    mocker.patch.object(Workbench, "run", side_effect=InconclusiveError("too many classes", 4))
    assert run(tmp_path, "axioms") == EXIT_INCONCLUSIVE


def test_invalid_settings_exit_with_spec_error(tmp_path, mocker, capsys):
    local = tmp_path / "exactlab.toml"
    local.write_text("[default]\nMULT_BOUND = -1\n", encoding="utf-8")
    mocker.patch("exactlab.main.settings", load_settings(local))
    assert run(tmp_path, "validate") == EXIT_SPEC_ERROR
    assert "MULT_BOUND" in capsys.readouterr().err

import sys
from pathlib import Path

import pytest

PROJECT_ROOT = Path(__file__).resolve().parents[1]
if str(PROJECT_ROOT) not in sys.path:
    sys.path.insert(0, str(PROJECT_ROOT))

import main  # noqa: E402
from main import EXIT_FAIL, EXIT_PASS, EXIT_USAGE, run  # noqa: E402
from report_module import PASS, Report  # noqa: E402


def test_structure_command(capsys):
    assert run(["--quiet", "structure", "sd16"]) == EXIT_PASS
    assert "PASS" in capsys.readouterr().out


@pytest.mark.parametrize(
    "argv",
    [
        ["brauer", "badname", "x"],
        ["--field-degree", "9", "structure", "sd16"],
        ["structure", "sd12"],
        ["lemma31", "m11"],
        ["scott", "s3", "klein"],
        ["bogus"],
        [],
    ],
)
def test_usage_errors_exit_two(argv):
    assert run(argv) == EXIT_USAGE


def test_group_file_with_bad_line(tmp_path):
    path = tmp_path / "broken.txt"
    path.write_text("degree 3\n(0 1 2\n", encoding="utf-8")
    assert run(["brauer", str(path), "sylow"]) == EXIT_USAGE


def test_brauer_command_writes_json(tmp_path):
    out = tmp_path / "gl23.json"
    assert run(["--quiet", "--json", str(out), "brauer", "gl23", "sylow"]) == EXIT_PASS
    report = Report.load(str(out))
    assert report.verdict == PASS
    assert report.subgroup_results


def test_json_is_reproducible(tmp_path):
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    assert run(["--quiet", "--seed", "3", "--json", str(first), "thm1", "sd16xc3"]) == EXIT_PASS
    assert run(["--quiet", "--seed", "3", "--json", str(second), "thm1", "sd16xc3"]) == EXIT_PASS
    assert Report.load(str(first)).canonical_json() == Report.load(str(second)).canonical_json()


def test_thm1_gl23_passes_without_implication(tmp_path):
    out = tmp_path / "thm1.json"
    assert run(["--quiet", "--json", str(out), "thm1", "gl23"]) == EXIT_PASS
    assert Report.load(str(out)).conclusion_implied is False


def test_lemma_and_fusion_commands():
    assert run(["--quiet", "lemma31", "gl23"]) == EXIT_PASS
    assert run(["--quiet", "fusion-eq", "gl23", "gl23"]) == EXIT_PASS
    assert run(["--quiet", "fusion-eq", "sd16", "gl23"]) == EXIT_FAIL


def test_ik1_single_subgroup():
    assert run(["--quiet", "ik1", "gl23", "sylow", "klein"]) == EXIT_PASS


@pytest.mark.slow
def test_thm2_command(monkeypatch, tmp_path):
    monkeypatch.setattr("report_module.REPORT_DIR", str(tmp_path))
    monkeypatch.setenv("BRAUER_FORGE_THREADS", "4")
    assert run(["--quiet", "thm2", "gl23", "gl23"]) == EXIT_PASS


def test_brauer_accepts_p_for_any_catalog_sylow():
    assert run(["--quiet", "brauer", "s3", "P"]) == EXIT_PASS


def test_engine_crash_exits_two(monkeypatch, capsys):
    def broken(args):
        raise ValueError("cannot reshape array")

    monkeypatch.setattr(main, "dispatch", broken)
    assert run(["--quiet", "brauer", "gl23", "sylow"]) == EXIT_USAGE
    assert "internal error" in capsys.readouterr().err

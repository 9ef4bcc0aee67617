import sys
from pathlib import Path

import pytest

PROJECT_ROOT = Path(__file__).resolve().parents[1]
if str(PROJECT_ROOT) not in sys.path:
    sys.path.insert(0, str(PROJECT_ROOT))

from catalog_module import catalog  # noqa: E402
from fusion_module import fusion_system  # noqa: E402
from harness_module import (  # noqa: E402
    CASE_INVOLUTION,
    CASE_KLEIN_OR_C4,
    CASE_LARGE,
    HYPOTHESIS,
    check_brauer_indecomposability,
    check_fusion_equal,
    check_ik1_consequence,
    check_lemma31,
    check_normalizer_scott,
    check_scott_module,
    check_theorem1,
    check_theorem2,
    proof_case,
    run_parallel,
)
from linalg_module import field_spec  # noqa: E402
from nilpotent_module import PreconditionError  # noqa: E402
from report_module import DECOMPOSABLE, FAIL, INDECOMPOSABLE, PASS, ZERO, Report  # noqa: E402
from summary_module import render_report, subgroup_frame, verdict_counts  # noqa: E402


def test_run_parallel_keeps_order(monkeypatch):
    monkeypatch.setenv("BRAUER_FORGE_THREADS", "4")
    assert run_parallel(list(range(20)), lambda i: i * i) == [i * i for i in range(20)]


def test_scott_module_report():
    gl = catalog("gl23")
    report = check_scott_module(gl.group, gl.sylow)
    assert report.verdict == PASS
    assert {h.name for h in report.hypotheses} == {
        "unique_summand_with_orbit_sum",
        "trivial_top",
        "fixed_line_in_summand",
        "indecomposable",
    }


def test_brauer_indecomposability_of_sd16():
    sd = catalog("sd16")
    report = check_brauer_indecomposability(sd.group, sd.sylow)
    assert report.verdict == PASS
    assert len(report.subgroup_results) == 10
    assert all(r.verdict == INDECOMPOSABLE and r.brauer_dim == 1 for r in report.subgroup_results)
    assert all(r.fully_normalized for r in report.subgroup_results)


def test_brauer_indecomposability_over_gf4():
    gl = catalog("gl23")
    report = check_brauer_indecomposability(gl.group, gl.sylow, fld=field_spec(2))
    assert report.verdict == PASS
    assert all(r.verdict in (INDECOMPOSABLE, ZERO) for r in report.subgroup_results)


def test_brauer_rejects_odd_subgroup():
    s3 = catalog("s3")
    with pytest.raises(PreconditionError):
        check_brauer_indecomposability(s3.group, s3.group.whole)


def test_theorem1_sd16_times_c3():
    cg = catalog("sd16xc3")
    report = check_theorem1(cg.group, cg.sylow)
    assert report.conclusion_implied is True
    assert report.verdict == PASS
    assert any(h.name.startswith("find_HQ[") for h in report.hypotheses)
    assert any(h.name.startswith("conclusion:") for h in report.hypotheses)


def test_theorem1_gl23_conclusion_holds():
    gl = catalog("gl23")
    report = check_theorem1(gl.group, gl.sylow)
    hypotheses = [h for h in report.hypotheses if h.name.startswith(HYPOTHESIS)]
    assert hypotheses
    assert report.conclusion_implied is False
    assert report.verdict == PASS
    assert all(r.verdict != DECOMPOSABLE for r in report.subgroup_results)


def test_theorem1_needs_semidihedral_p():
    a4 = catalog("a4")
    with pytest.raises(PreconditionError):
        check_theorem1(a4.group, a4.sylow)


def test_proof_case_split():
    sd = catalog("sd16")
    assert proof_case(sd.tags["P"]) == CASE_LARGE
    assert proof_case(sd.tags["klein"]) == CASE_KLEIN_OR_C4
    assert proof_case(sd.tags["c4a"]) == CASE_KLEIN_OR_C4
    assert proof_case(sd.tags["z"]) == CASE_INVOLUTION


def test_lemma_on_large_centralizers():
    for name in ("gl23", "sd16", "sd32"):
        report = check_lemma31(catalog(name))
        assert report.verdict == PASS, name


def test_ik1_consequence_on_gl23():
    gl = catalog("gl23")
    report = check_ik1_consequence(gl.group, gl.sylow)
    assert report.verdict == PASS
    assert all(h.name.startswith("ik1_isomorphic[") for h in report.hypotheses)


def test_normalizer_scott_for_order_eight():
    gl = catalog("gl23")
    F = fusion_system(gl.group.whole, gl.sylow)
    Q = next(S for S in F.subgroups if S.order == 8)
    report = check_normalizer_scott(gl.group, gl.sylow, Q, F=F)
    assert report.verdict == PASS


def test_fusion_equal_reports():
    assert check_fusion_equal(catalog("gl23"), catalog("gl23")).verdict == PASS
    report = check_fusion_equal(catalog("sd16"), catalog("gl23"))
    assert report.verdict == FAIL
    assert [h.name for h in report.failures()] == ["fusion_equal"]


def test_reports_are_deterministic_across_threads(monkeypatch):
    gl = catalog("gl23")
    monkeypatch.setenv("BRAUER_FORGE_THREADS", "1")
    first = check_brauer_indecomposability(gl.group, gl.sylow, seed=5)
    monkeypatch.setenv("BRAUER_FORGE_THREADS", "4")
    second = check_brauer_indecomposability(gl.group, gl.sylow, seed=5)
    assert first.canonical_json() == second.canonical_json()


def test_report_json_round_trip(tmp_path):
    sd = catalog("sd16")
    report = check_brauer_indecomposability(sd.group, sd.sylow)
    path = report.to_json(str(tmp_path / "sd16.json"))
    loaded = Report.load(path)
    assert loaded.canonical_json() == report.canonical_json()


def test_summary_tables():
    sd = catalog("sd16")
    report = check_brauer_indecomposability(sd.group, sd.sylow)
    frame = subgroup_frame(report)
    assert len(frame) == 10
    assert verdict_counts(report)[INDECOMPOSABLE] == 10
    text = render_report(report)
    assert report.instance in text and PASS in text


@pytest.mark.slow
def test_theorem2_gl23_with_itself(monkeypatch, tmp_path):
    monkeypatch.setattr("report_module.REPORT_DIR", str(tmp_path))
    gl = catalog("gl23")
    report = check_theorem2(gl, gl)
    assert report.conclusion_implied is True
    assert report.verdict == PASS
    assert {r.case for r in report.subgroup_results} >= {CASE_LARGE, CASE_KLEIN_OR_C4, CASE_INVOLUTION}
    assert not list(tmp_path.iterdir())


@pytest.mark.slow
def test_ik1_on_flagship_product():
    product = catalog("gl23xgl23")
    report = check_ik1_consequence(product.group, product.tags["delta"])
    assert report.verdict == PASS


@pytest.mark.slow
def test_theorem2_records_hq_witnesses(monkeypatch, tmp_path):
    monkeypatch.setattr("report_module.REPORT_DIR", str(tmp_path))
    gl = catalog("gl23")
    report = check_theorem2(gl, gl)
    witnesses = [h for h in report.hypotheses if h.name.startswith("find_HQ[")]
    assert witnesses
    assert all(h.verdict == PASS for h in witnesses), [h.name for h in witnesses if h.verdict != PASS]
    assert any("path=S3Lift" in h.witness for h in witnesses)


def test_theorem2_sd16_with_itself_checks_every_hq(monkeypatch, tmp_path):
    monkeypatch.setattr("report_module.REPORT_DIR", str(tmp_path))
    sd = catalog("sd16")
    report = check_theorem2(sd, sd)
    witnesses = [h for h in report.hypotheses if h.name.startswith("find_HQ[")]
    assert witnesses
    assert all(h.verdict == PASS for h in witnesses)
    assert report.verdict == PASS

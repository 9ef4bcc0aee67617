from typing import Dict, List

import pandas as pd

from report_module import FAIL, SKIPPED, Report

SUBGROUP_COLUMNS = ["label", "order", "tag", "case", "fully_normalized", "brauer_dim", "verdict"]
HYPOTHESIS_COLUMNS = ["name", "verdict", "witness", "reason"]


def subgroup_frame(report: Report) -> pd.DataFrame:
    rows = [
        {
            "label": r.label,
            "order": r.order,
            "tag": r.tag,
            "case": r.case,
            "fully_normalized": r.fully_normalized,
            "brauer_dim": r.brauer_dim,
            "verdict": r.verdict,
        }
        for r in report.subgroup_results
    ]
    df = pd.DataFrame(rows, columns=SUBGROUP_COLUMNS)
    if not df.empty and not df["case"].astype(bool).any():
        df = df.drop(columns=["case"])
    return df


def hypothesis_frame(report: Report) -> pd.DataFrame:
    rows = [{"name": h.name, "verdict": h.verdict, "witness": h.witness, "reason": h.reason} for h in report.hypotheses]
    return pd.DataFrame(rows, columns=HYPOTHESIS_COLUMNS)


def verdict_counts(report: Report) -> Dict[str, int]:
    df = subgroup_frame(report)
    if df.empty:
        return {}
    return {str(k): int(v) for k, v in df["verdict"].value_counts().sort_index().items()}


def render_report(report: Report) -> str:
    lines: List[str] = [f"{report.instance}: {report.verdict.upper()} (seed {report.seed})"]
    if report.conclusion_implied is not None:
        lines.append(f"Hypotheses imply conclusion: {'yes' if report.conclusion_implied else 'no'}")

    checks = hypothesis_frame(report)
    if not checks.empty:
        shown = checks.drop(columns=["reason"]) if not checks["reason"].astype(bool).any() else checks
        lines.append("")
        lines.append(shown.to_string(index=False))
        failed = checks[checks["verdict"].isin([FAIL, SKIPPED])]
        if not failed.empty:
            lines.append(f"Failed or skipped checks: {', '.join(failed['name'])}")

    subgroups = subgroup_frame(report)
    if not subgroups.empty:
        lines.append("")
        lines.append(subgroups.to_string(index=False))
        counts = verdict_counts(report)
        lines.append("Verdicts: " + ", ".join(f"{k} ({v})" for k, v in counts.items()))

    for note in report.notes:
        lines.append(f"Note: {note}")
    if report.timings:
        total = sum(report.timings.values())
        slowest = max(report.timings, key=report.timings.get)
        lines.append(f"Time: {total:.2f}s, slowest phase {slowest} ({report.timings[slowest]:.2f}s)")
    return "\n".join(lines)


__all__ = ["subgroup_frame", "hypothesis_frame", "verdict_counts", "render_report"]

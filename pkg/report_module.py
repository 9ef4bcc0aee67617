from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional

from config import DEFAULT_SEED, ENGINE_VERSION, REPORT_DIR
from logger import log_error, log_info

PASS = "pass"
FAIL = "fail"
SKIPPED = "skipped"
INCOMPLETE = "incomplete"

INDECOMPOSABLE = "indecomposable"
ZERO = "zero"
DECOMPOSABLE = "decomposable"


@dataclass
class HypothesisCheck:
    name: str
    verdict: str
    witness: str = ""
    reason: str = ""


@dataclass
class SubgroupResult:
    label: str
    order: int
    tag: str
    fully_normalized: bool
    brauer_dim: Optional[int]
    verdict: str
    case: str = ""
    certificate: Dict[str, Any] = field(default_factory=dict)


@dataclass
class Report:
    instance: str
    hypotheses: List[HypothesisCheck] = field(default_factory=list)
    subgroup_results: List[SubgroupResult] = field(default_factory=list)
    verdict: str = PASS
    seed: int = DEFAULT_SEED
    timings: Dict[str, float] = field(default_factory=dict)
    engine_version: str = ENGINE_VERSION
    conclusion_implied: Optional[bool] = None
    notes: List[str] = field(default_factory=list)

    def check(self, name: str, ok: bool, witness: str = "", reason: str = "") -> bool:
        self.hypotheses.append(HypothesisCheck(name=name, verdict=PASS if ok else FAIL, witness=witness, reason=reason))
        return ok

    def skip(self, name: str, reason: str) -> None:
        self.hypotheses.append(HypothesisCheck(name=name, verdict=SKIPPED, reason=reason))

    def failures(self) -> List[HypothesisCheck]:
        return [h for h in self.hypotheses if h.verdict == FAIL]

    def settle(self, include_hypotheses: bool = True) -> str:
        """Derive the overall verdict from subgroup results (and optionally hypotheses)."""
        failed = any(r.verdict == DECOMPOSABLE for r in self.subgroup_results)
        skipped = any(r.verdict == SKIPPED for r in self.subgroup_results)
        if include_hypotheses:
            failed = failed or any(h.verdict == FAIL for h in self.hypotheses)
            skipped = skipped or any(h.verdict == SKIPPED for h in self.hypotheses)
        if failed:
            self.verdict = FAIL
        elif skipped:
            self.verdict = INCOMPLETE
        else:
            self.verdict = PASS
        return self.verdict

    def absorb(self, other: "Report", prefix: str = "") -> None:
        for h in other.hypotheses:
            self.hypotheses.append(HypothesisCheck(prefix + h.name, h.verdict, h.witness, h.reason))
        self.subgroup_results.extend(other.subgroup_results)
        self.notes.extend(other.notes)
        for key, value in other.timings.items():
            self.timings[prefix + key] = value

    def to_dict(self, include_timings: bool = True) -> Dict[str, Any]:
        payload = asdict(self)
        if not include_timings:
            payload.pop("timings")
        return payload

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> "Report":
        data = dict(payload)
        data["hypotheses"] = [HypothesisCheck(**h) for h in data.get("hypotheses", [])]
        data["subgroup_results"] = [SubgroupResult(**r) for r in data.get("subgroup_results", [])]
        data.setdefault("timings", {})
        return cls(**data)

    def canonical_json(self) -> str:
        """Timing-free serialization; identical input and seed give identical bytes."""
        return json.dumps(self.to_dict(include_timings=False), sort_keys=True, separators=(",", ":"), ensure_ascii=False)

    def to_json(self, path: str) -> str:
        try:
            os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
            with open(path, "w", encoding="utf-8") as handle:
                json.dump(self.to_dict(), handle, indent=2, sort_keys=True, ensure_ascii=False)
            log_info("Wrote report %s to %s", self.instance, path)
        except OSError as exc:
            log_error("Failed to write report %s: %s", path, exc)
            raise
        return path

    @classmethod
    def load(cls, path: str) -> "Report":
        with open(path, "r", encoding="utf-8") as handle:
            return cls.from_dict(json.load(handle))


def dump_bundle(name: str, payload: Dict[str, Any]) -> str:
    """Write a counterexample bundle next to the reports and return its path."""
    path = os.path.join(REPORT_DIR, f"counterexample_{name}.json")
    try:
        os.makedirs(REPORT_DIR, exist_ok=True)
        with open(path, "w", encoding="utf-8") as handle:
            json.dump(payload, handle, indent=2, sort_keys=True, ensure_ascii=False)
        log_error("Counterexample bundle written to %s", path)
    except OSError as exc:
        log_error("Failed to write counterexample bundle: %s", exc)
        raise
    return path


__all__ = [
    "HypothesisCheck",
    "SubgroupResult",
    "Report",
    "dump_bundle",
    "PASS",
    "FAIL",
    "SKIPPED",
    "INCOMPLETE",
    "INDECOMPOSABLE",
    "ZERO",
    "DECOMPOSABLE",
]

from __future__ import annotations

import json
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, Dict, List, Optional, Sequence, TypeVar

import numpy as np

from catalog_module import CatalogGroup, product_with_delta
from config import DEFAULT_SEED, BrauerForgeError, ResourceLimitError, worker_count
from fusion_module import (
    FusionSystem,
    check_fusion_tables,
    class_count,
    fully_normalized_representative,
    fully_normalized_representatives,
    fusion_equal,
    fusion_system,
    is_fully_normalized,
    is_saturated,
    pull_back,
)
from linalg_module import GF2, FieldSpec
from logger import log_error, log_info, log_warning
from modrep_module import (
    Representation,
    brauer_quotient,
    decompose,
    end_algebra,
    is_indecomposable,
    modules_isomorphic,
    restrict,
)
from nilpotent_module import PreconditionError, SearchError, find_HQ, is_two_nilpotent, quotient_order
from perm_module import (
    GroupLike,
    Identification,
    Subgroup,
    as_subgroup,
    centralizer,
    identify,
    join,
    normalizer,
    subgroups_all,
    two_part,
)
from report_module import (
    DECOMPOSABLE,
    FAIL,
    INCOMPLETE,
    INDECOMPOSABLE,
    PASS,
    SKIPPED,
    ZERO,
    Report,
    SubgroupResult,
    dump_bundle,
)
from scott_module import ScottModule, fixed_line_in_image, scott, scott_has_trivial_top
from semidihedral_module import SEMIDIHEDRAL, ClassificationError, classify_subgroup

# checks named with this prefix record a theorem's hypotheses; they never fail a report
HYPOTHESIS = "hypothesis:"

CASE_LARGE = "Case 1: |Q| >= 8"
CASE_KLEIN_OR_C4 = "Case 2: Q = C2xC2 or C4"
CASE_INVOLUTION = "Case 3: Q = C2"
CASE_TRIVIAL = "trivial"

T = TypeVar("T")
R = TypeVar("R")


class CounterexampleError(BrauerForgeError):
    """A verdict contradicting a proven statement; the bundle path points at the dumped data."""

    def __init__(self, message: str, report: Report, path: str) -> None:
        super().__init__(message)
        self.report = report
        self.path = path


def run_parallel(items: Sequence[T], fn: Callable[[T], R]) -> List[R]:
    """Apply fn to every item; results come back in input order whatever the thread count."""
    workers = min(worker_count(), max(len(items), 1))
    if workers == 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _plain(payload: Dict[str, Any]) -> Dict[str, Any]:
    return json.loads(json.dumps(payload, default=lambda o: o.item() if hasattr(o, "item") else str(o)))


def subgroup_tag(Q: Subgroup) -> str:
    try:
        return classify_subgroup(Q).name
    except ClassificationError:
        return f"order{Q.order}"


def _label(F: FusionSystem, Q: Subgroup) -> str:
    return f"Q{F.index_of(Q)}"


def _subgroup_at(F: FusionSystem, label: str) -> Subgroup:
    return F.subgroups[int(label[1:])]


def _settle(report: Report) -> str:
    """Conclusion verdict, tightened by every non-hypothesis assertion."""
    verdict = report.settle(include_hypotheses=False)
    asserted = [h for h in report.hypotheses if not h.name.startswith(HYPOTHESIS)]
    if verdict != FAIL:
        if any(h.verdict == FAIL for h in asserted):
            verdict = FAIL
        elif any(h.verdict == SKIPPED for h in asserted):
            verdict = INCOMPLETE
    report.verdict = verdict
    return verdict


def _brauer_result(
    M: Representation,
    G: Subgroup,
    F: FusionSystem,
    Q: Subgroup,
    case_of: Optional[Callable[[Subgroup], str]],
) -> SubgroupResult:
    label = _label(F, Q)
    cert: Dict[str, Any] = {"generators": Q.describe()}
    dim: Optional[int] = None
    try:
        N = normalizer(G, Q)
        QC = join(Q, centralizer(G, Q))
        BrQ, _ = brauer_quotient(M, Q, N)
        dim = BrQ.dimension
        cert["order_N"] = N.order
        cert["order_QC"] = QC.order
        if dim == 0:
            verdict = ZERO
        else:
            ok, local = is_indecomposable(restrict(BrQ, QC))
            cert.update(local)
            verdict = INDECOMPOSABLE if ok else DECOMPOSABLE
    except ResourceLimitError as exc:
        log_warning("Brauer check at %s skipped: %s", label, exc)
        verdict = SKIPPED
        cert["reason"] = str(exc)
    log_info("Br_%s: |Q|=%s dim=%s verdict=%s", label, Q.order, dim, verdict)
    return SubgroupResult(
        label=label,
        order=Q.order,
        tag=subgroup_tag(Q),
        fully_normalized=is_fully_normalized(F, Q),
        brauer_dim=dim,
        verdict=verdict,
        case=case_of(Q) if case_of else "",
        certificate=_plain(cert),
    )


def _conjugation_spot_check(report: Report, S: ScottModule, F: FusionSystem, seed: int) -> None:
    moved = [Q for cls in F.classes() for Q in cls if not is_fully_normalized(F, Q)]
    if not moved:
        report.notes.append("every subgroup of P is fully normalized; conjugation spot check vacuous")
        return
    rng = np.random.default_rng(seed)
    Q = moved[int(rng.integers(len(moved)))]
    rep = fully_normalized_representative(F, Q)
    try:
        moved_dim = brauer_quotient(S.rep, Q)[0].dimension
        rep_dim = brauer_quotient(S.rep, rep)[0].dimension
    except ResourceLimitError as exc:
        report.skip("conjugation_invariance", str(exc))
        return
    report.check(
        "conjugation_invariance",
        moved_dim == rep_dim,
        witness=f"dim Br at {_label(F, Q)} = {moved_dim}, at {_label(F, rep)} = {rep_dim}",
    )


def check_scott_module(
    G: GroupLike, H: Subgroup, fld: FieldSpec = GF2, seed: int = DEFAULT_SEED, instance: str = ""
) -> Report:
    G = as_subgroup(G)
    report = Report(instance=instance or f"scott |G|={G.order} |H|={H.order}", seed=seed)
    started = time.perf_counter()
    S = scott(G, H, fld, seed)
    report.check(
        "unique_summand_with_orbit_sum",
        True,
        witness=f"dim {S.dimension} of {S.permutation_module.dimension}",
    )
    report.check("trivial_top", scott_has_trivial_top(S))
    line = fixed_line_in_image(S)
    report.check("fixed_line_in_summand", line.dim == 1, witness=f"dim {line.dim}")
    ok, cert = is_indecomposable(S.rep)
    report.check("indecomposable", ok, witness=f"dim End={cert.get('dim_end')}, dim J={cert.get('dim_radical')}")
    report.timings["scott"] = time.perf_counter() - started
    _settle(report)
    return report


def check_brauer_indecomposability(
    G: GroupLike,
    P: Subgroup,
    fld: FieldSpec = GF2,
    seed: int = DEFAULT_SEED,
    instance: str = "",
    case_of: Optional[Callable[[Subgroup], str]] = None,
    F: Optional[FusionSystem] = None,
    S: Optional[ScottModule] = None,
) -> Report:
    """Br_Q(Sc(G, P)) restricted to QC_G(Q) is indecomposable or zero, Q over fully normalized classes."""
    G = as_subgroup(G)
    report = Report(instance=instance or f"brauer |G|={G.order} |P|={P.order}", seed=seed)
    if two_part(P.order) != P.order or not P.is_subgroup_of(G):
        raise PreconditionError("P must be a 2-subgroup of G")
    started = time.perf_counter()
    try:
        S = S if S is not None else scott(G, P, fld, seed)
    except ResourceLimitError as exc:
        log_warning("Scott module skipped: %s", exc)
        report.skip("scott_module", str(exc))
        _settle(report)
        return report
    report.check(
        "scott_module",
        True,
        witness=f"dim {S.dimension} inside the {S.permutation_module.dimension}-dim permutation module",
    )
    report.timings["scott"] = time.perf_counter() - started

    started = time.perf_counter()
    F = F if F is not None else fusion_system(G, P)
    reps = fully_normalized_representatives(F)
    report.timings["fusion"] = time.perf_counter() - started

    started = time.perf_counter()
    report.subgroup_results = run_parallel(reps, lambda Q: _brauer_result(S.rep, G, F, Q, case_of))
    report.timings["brauer"] = time.perf_counter() - started
    _conjugation_spot_check(report, S, F, seed)
    _settle(report)
    log_info("Brauer indecomposability for %s: %s", report.instance, report.verdict)
    return report


def _require_semidihedral(P: Subgroup) -> None:
    try:
        kind = classify_subgroup(P).tag
    except ClassificationError as exc:
        raise PreconditionError(str(exc)) from exc
    if kind != SEMIDIHEDRAL:
        raise PreconditionError(f"P of order {P.order} is not semidihedral")


def _hq_check(report: Report, G: Subgroup, P: Subgroup, F: FusionSystem, Q: Subgroup) -> None:
    name = f"find_HQ[{_label(F, Q)}]"
    try:
        w = find_HQ(G, P, Q)
    except PreconditionError as exc:
        report.notes.append(f"{name} not applicable: {exc}")
        return
    except SearchError as exc:
        log_error("find_HQ failed at %s: %s", _label(F, Q), exc)
        report.check(name, False, reason=str(exc))
        return
    report.check(
        name,
        w.valid,
        witness=f"|H_Q|={w.H_Q.order} index={w.index} path={w.construction_path} |N/QC|={w.quotient_order}",
    )


def check_theorem1(G: GroupLike, P: Subgroup, fld: FieldSpec = GF2, seed: int = DEFAULT_SEED, instance: str = "") -> Report:
    """Saturation and 2-nilpotent centralizers imply Brauer indecomposability of Sc(G, P)."""
    G = as_subgroup(G)
    _require_semidihedral(P)
    report = Report(instance=instance or f"thm1 |G|={G.order} |P|={P.order}", seed=seed)

    started = time.perf_counter()
    F = fusion_system(G, P)
    saturated, witnesses = is_saturated(F)
    report.check(HYPOTHESIS + "fusion_saturated", saturated, witness="; ".join(witnesses[:3]))
    reps = [Q for Q in fully_normalized_representatives(F) if Q.order > 1]
    centralizers_ok = run_parallel(reps, lambda Q: is_two_nilpotent(centralizer(G, Q)))
    for Q, ok in zip(reps, centralizers_ok):
        report.check(
            HYPOTHESIS + f"C_G(Q)_2-nilpotent[{_label(F, Q)}]",
            ok,
            witness=f"{subgroup_tag(Q)}, |C_G(Q)|={centralizer(G, Q).order}",
        )
    report.conclusion_implied = all(h.verdict == PASS for h in report.hypotheses)
    if not report.conclusion_implied:
        report.notes.append("hypotheses fail: conclusion not implied, checked anyway")
    report.timings["hypotheses"] = time.perf_counter() - started

    started = time.perf_counter()
    for Q in reps:
        _hq_check(report, G, P, F, Q)
    report.timings["find_HQ"] = time.perf_counter() - started

    conclusion = check_brauer_indecomposability(G, P, fld, seed, instance=report.instance, F=F)
    report.absorb(conclusion, prefix="conclusion:")
    _settle(report)
    log_info("Theorem-1 run %s: %s (implied=%s)", report.instance, report.verdict, report.conclusion_implied)
    return report


def proof_case(Q: Subgroup) -> str:
    """Case split of the product argument: large subgroups, Klein/C4, single involutions."""
    if Q.order == 1:
        return CASE_TRIVIAL
    if Q.order >= 8:
        return CASE_LARGE
    if Q.order == 4:
        return CASE_KLEIN_OR_C4
    return CASE_INVOLUTION


def _default_identification(left: CatalogGroup, right: CatalogGroup) -> Identification:
    return identify(left.sylow, left.sd_generators, right.sylow, right.sd_generators)


def _semidihedral_facts(report: Report, cg: CatalogGroup, F: FusionSystem) -> None:
    G = cg.group.whole
    P = cg.sylow
    involutions = class_count(F, 2)
    fours = class_count(F, 4)
    report.check("involution_classes_1_or_2", involutions in (1, 2), witness=f"{involutions} F-classes of involutions")
    report.check("c4_classes_1_or_2", fours in (1, 2), witness=f"{fours} F-classes of cyclic subgroups of order 4")
    klein = fully_normalized_representative(F, cg.tags["klein"])
    C = centralizer(G, klein)
    report.check(
        "klein_sylow_in_centralizer",
        two_part(C.order) == klein.order,
        witness=f"|C_G(Q)|={C.order} for the fully normalized Klein four",
    )
    xy = cg.tags["c4b"]
    report.check("xy_self_centralizing", centralizer(P, xy) == xy, witness=f"|C_P(<xy>)|={centralizer(P, xy).order}")
    y = cg.tags["y"]
    report.check(
        "centralizer_of_y_is_klein",
        centralizer(P, y) == cg.tags["klein"],
        witness=f"|C_P(<y>)|={centralizer(P, y).order}",
    )


def _case_assertions(report: Report, H: Subgroup, F: FusionSystem) -> None:
    for result in report.subgroup_results:
        if result.case not in (CASE_LARGE, CASE_KLEIN_OR_C4):
            continue
        Q = _subgroup_at(F, result.label)
        ok = is_two_nilpotent(centralizer(H, Q))
        result.certificate["centralizer_2_nilpotent"] = ok
        report.check(f"case_centralizer_2-nilpotent[{result.label}]", ok, witness=result.case)


def _bundle(report: Report, product: CatalogGroup, F: FusionSystem, S: ScottModule, seed: int) -> str:
    H = product.group.whole
    bad = [r for r in report.subgroup_results if r.verdict == DECOMPOSABLE]
    payload: Dict[str, Any] = {
        "instance": report.instance,
        "seed": seed,
        "generators": [list(p.images) for p in product.group.generators],
        "delta_generators": [list(product.group.elements[g].images) for g in product.tags["delta"].generators],
        "failures": [],
    }
    for result in bad:
        Q = _subgroup_at(F, result.label)
        BrQ, _ = brauer_quotient(S.rep, Q)
        module = restrict(BrQ, join(Q, centralizer(H, Q)))
        summands = decompose(module, seed=seed)
        payload["failures"].append({
            "label": result.label,
            "subgroup": Q.describe(),
            "brauer_generators": [m.tolist() for m in BrQ.matrices],
            "end_basis": end_algebra(module).matrices.tolist(),
            "idempotents": [s.idempotent.tolist() for s in summands],
        })
    return dump_bundle(report.instance.replace(" ", "_"), payload)


def check_theorem2(
    left: CatalogGroup,
    right: CatalogGroup,
    identification: Optional[Identification] = None,
    fld: FieldSpec = GF2,
    seed: int = DEFAULT_SEED,
) -> Report:
    """Equal fusion over a semidihedral P makes Sc(G x G', ΔP) Brauer indecomposable."""
    if not (left.is_semidihedral and right.is_semidihedral):
        raise PreconditionError("both groups need a semidihedral Sylow 2-subgroup")
    if left.sylow.order != two_part(left.order) or right.sylow.order != two_part(right.order):
        raise PreconditionError("P must be Sylow in both groups")
    ident = identification if identification is not None else _default_identification(left, right)
    report = Report(instance=f"thm2 {left.name} {right.name}", seed=seed)

    started = time.perf_counter()
    F_left = fusion_system(left.group.whole, left.sylow)
    F_right = pull_back(fusion_system(right.group.whole, right.sylow), ident)
    same = fusion_equal(F_left, F_right)
    report.check(HYPOTHESIS + "fusion_equal", same, witness=f"{F_left.map_count()} vs {F_right.map_count()} maps")
    report.conclusion_implied = same
    _semidihedral_facts(report, left, F_left)
    report.timings["hypotheses"] = time.perf_counter() - started

    product = product_with_delta(left, right, ident)
    H = product.group.whole
    delta = product.tags["delta"]
    S = scott(H, delta, fld, seed)
    F = fusion_system(H, delta)

    started = time.perf_counter()
    for Q in fully_normalized_representatives(F):
        if Q.order > 1:
            _hq_check(report, H, delta, F, Q)
    report.timings["find_HQ"] = time.perf_counter() - started

    conclusion = check_brauer_indecomposability(
        H, delta, fld, seed, instance=report.instance, case_of=proof_case, F=F, S=S
    )
    _case_assertions(conclusion, H, F)
    report.absorb(conclusion, prefix="conclusion:")
    _settle(report)
    if any(r.verdict == DECOMPOSABLE for r in report.subgroup_results):
        path = _bundle(report, product, F, S, seed)
        log_error("Theorem-2 instance %s produced a decomposable Brauer quotient", report.instance)
        raise CounterexampleError(f"decomposable Brauer quotient in {report.instance}", report, path)
    log_info("Theorem-2 run %s: %s", report.instance, report.verdict)
    return report


def _ik1_check(report: Report, S: ScottModule, G: Subgroup, P: Subgroup, F: FusionSystem, Q: Subgroup, seed: int) -> None:
    name = f"ik1_isomorphic[{_label(F, Q)}]"
    try:
        N = normalizer(G, Q)
        left, _ = brauer_quotient(S.rep, Q, N)
        right = scott(N, normalizer(P, Q), S.rep.fld, seed).rep
        outcome = modules_isomorphic(left, right, seed)
    except ResourceLimitError as exc:
        report.skip(name, str(exc))
        return
    witness = f"dim Br_Q(Sc(G,P))={left.dimension}, dim Sc(N_G(Q),N_P(Q))={right.dimension}"
    if outcome is None:
        report.skip(name, "unknown: isomorphism search inconclusive; " + witness)
    else:
        report.check(name, outcome, witness=witness)


def check_ik1_consequence(
    G: GroupLike,
    P: Subgroup,
    Q: Optional[Subgroup] = None,
    fld: FieldSpec = GF2,
    seed: int = DEFAULT_SEED,
    instance: str = "",
) -> Report:
    """Br_Q(Sc(G, P)) is isomorphic to Sc(N_G(Q), N_P(Q)); every fully normalized Q when Q is None."""
    G = as_subgroup(G)
    report = Report(instance=instance or f"ik1 |G|={G.order} |P|={P.order}", seed=seed)
    started = time.perf_counter()
    F = fusion_system(G, P)
    if Q is not None and not is_fully_normalized(F, Q):
        raise PreconditionError(f"{Q.describe()} is not fully normalized in F_P(G)")
    targets = [Q] if Q is not None else fully_normalized_representatives(F)
    S = scott(G, P, fld, seed)
    for target in targets:
        _ik1_check(report, S, G, P, F, target, seed)
    report.timings["ik1"] = time.perf_counter() - started
    _settle(report)
    return report


def check_fusion_equal(
    left: CatalogGroup, right: CatalogGroup, identification: Optional[Identification] = None
) -> Report:
    """Both fusion systems well formed and saturated, and equal after transport along the identification."""
    if not (left.is_semidihedral and right.is_semidihedral):
        raise PreconditionError("both groups need a semidihedral Sylow 2-subgroup")
    ident = identification if identification is not None else _default_identification(left, right)
    report = Report(instance=f"fusion-eq {left.name} {right.name}")
    started = time.perf_counter()
    F_left = fusion_system(left.group.whole, left.sylow)
    F_right = fusion_system(right.group.whole, right.sylow)
    for side, F in (("left", F_left), ("right", F_right)):
        problems = check_fusion_tables(F)
        report.check(f"tables_well_formed[{side}]", not problems, witness="; ".join(problems[:3]))
        saturated, witnesses = is_saturated(F)
        report.check(f"saturated[{side}]", saturated, witness="; ".join(witnesses[:3]))
    pulled = pull_back(F_right, ident)
    report.check("fusion_equal", fusion_equal(F_left, pulled), witness=f"{F_left.map_count()} maps on the left")
    report.timings["fusion"] = time.perf_counter() - started
    _settle(report)
    return report


def check_lemma31(cg: CatalogGroup, instance: str = "") -> Report:
    """Every Q <= P with |Q| >= 8 has 2-nilpotent C_G(Q) and holds some x^i outside {1, z}."""
    if not cg.is_semidihedral or cg.sylow.order != two_part(cg.order):
        raise PreconditionError(f"{cg.name} has no semidihedral Sylow 2-subgroup")
    report = Report(instance=instance or f"lemma31 {cg.name}")
    started = time.perf_counter()
    G = cg.group.whole
    parent = cg.group
    x, _ = cg.sd_generators
    n = cg.sd_n
    z = parent.power(x, 2 ** (n - 2))
    powers = [parent.power(x, i) for i in range(2 ** (n - 1))]
    large = [Q for Q in subgroups_all(cg.sylow) if Q.order >= 8]

    def inspect(Q: Subgroup) -> Dict[str, Any]:
        C = centralizer(G, Q)
        return {
            "order_C": C.order,
            "nilpotent": is_two_nilpotent(C),
            "power": next((p for p in powers if p in Q and p not in (0, z)), None),
        }

    for i, (Q, facts) in enumerate(zip(large, run_parallel(large, inspect))):
        label = f"{subgroup_tag(Q)}#{i}"
        report.check(f"centralizer_2-nilpotent[{label}]", facts["nilpotent"], witness=f"|C_G(Q)|={facts['order_C']}")
        report.check(
            f"contains_x_power[{label}]",
            facts["power"] is not None,
            witness=str(parent.elements[facts["power"]]) if facts["power"] is not None else "",
        )
    report.timings["lemma31"] = time.perf_counter() - started
    _settle(report)
    log_info("Lemma check on %s: %s subgroups of order >= 8, verdict %s", cg.name, len(large), report.verdict)
    return report


def check_normalizer_scott(
    G: GroupLike,
    P: Subgroup,
    Q: Subgroup,
    fld: FieldSpec = GF2,
    seed: int = DEFAULT_SEED,
    F: Optional[FusionSystem] = None,
) -> Report:
    """Res to QC_G(Q) of Sc(N_G(Q), N_P(Q)) is indecomposable for fully normalized Q."""
    G = as_subgroup(G)
    F = F if F is not None else fusion_system(G, P)
    if not is_fully_normalized(F, Q):
        raise PreconditionError(f"{Q.describe()} is not fully normalized in F_P(G)")
    C = centralizer(G, Q)
    if not is_two_nilpotent(C):
        raise PreconditionError(f"C_G(Q) of order {C.order} is not 2-nilpotent")
    report = Report(instance=f"normalizer-scott |G|={G.order} {_label(F, Q)}", seed=seed)
    N = normalizer(G, Q)
    S = scott(N, normalizer(P, Q), fld, seed)
    ok, cert = is_indecomposable(restrict(S.rep, join(Q, C)))
    report.check(
        f"restricted_scott_indecomposable[{_label(F, Q)}]",
        ok,
        witness=f"dim {S.dimension}, |N/QC|={quotient_order(G, Q)}, End/J dim {cert.get('dim_top')}",
    )
    _settle(report)
    return report


__all__ = [
    "CounterexampleError",
    "HYPOTHESIS",
    "CASE_LARGE",
    "CASE_KLEIN_OR_C4",
    "CASE_INVOLUTION",
    "CASE_TRIVIAL",
    "run_parallel",
    "subgroup_tag",
    "proof_case",
    "check_scott_module",
    "check_brauer_indecomposability",
    "check_theorem1",
    "check_theorem2",
    "check_ik1_consequence",
    "check_fusion_equal",
    "check_lemma31",
    "check_normalizer_scott",
]

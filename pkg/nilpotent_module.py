from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional

from config import BrauerForgeError
from logger import log_debug, log_error, log_info
from perm_module import (
    GroupLike,
    Subgroup,
    as_subgroup,
    centralizer,
    is_normal,
    join,
    normalizer,
    o_odd,
    quotient_group,
    two_part,
)

AUT_TWO_GROUP = "AutTwoGroup"
S3_LIFT = "S3Lift"
BRUTE_FORCE = "BruteForce"


class PreconditionError(BrauerForgeError):
    pass


class SearchError(BrauerForgeError):
    pass


@dataclass(frozen=True, eq=False)
class HQWitness:
    """H_Q with N_P(Q) <= H_Q <= N_G(Q), N_P(Q) Sylow in H_Q and |N_G(Q):H_Q| a power of 2."""

    H_Q: Subgroup
    sylow_check: bool
    index: int
    construction_path: str
    quotient_order: int
    checks: Dict[str, bool] = field(default_factory=dict)

    @property
    def exponent(self) -> int:
        return self.index.bit_length() - 1

    @property
    def valid(self) -> bool:
        return all(self.checks.values())


def is_two_nilpotent(G: GroupLike) -> bool:
    """G has a normal 2-complement."""
    G = as_subgroup(G)
    return G.order // o_odd(G).order == two_part(G.order)


def s3_lift(Gq: GroupLike, Qbar: Subgroup, t: int) -> Subgroup:
    """A subgroup H = <t, c> of Gq isomorphic to S_3 with c of order 3."""
    Gq = as_subgroup(Gq)
    parent = Gq.parent
    if Gq.order != 6 * Qbar.order or two_part(Qbar.order) != Qbar.order or not is_normal(Gq, Qbar):
        raise PreconditionError("s3_lift needs a normal 2-subgroup of index 6")
    if t not in Gq or t in Qbar or parent.element_order(t) != 2:
        raise PreconditionError("t must be an involution outside the normal 2-subgroup")
    for c in Gq.elements:
        if parent.element_order(c) != 3:
            continue
        if parent.mul(parent.mul(t, c), t) != parent.inv(c):
            continue
        H = parent.subgroup((t, c))
        if H.order == 6:
            log_debug("s3_lift: paired involution %s with %s", t, c)
            return H
    log_error("No S_3 through involution %s in a group of order %s", t, Gq.order)
    raise SearchError("no subgroup isomorphic to S_3 contains t")


def _verify(H: Subgroup, N: Subgroup, NP: Subgroup) -> Dict[str, bool]:
    index = N.order // H.order if H.order else 0
    return {
        "contains_N_P(Q)": NP.is_subgroup_of(H),
        "inside_N_G(Q)": H.is_subgroup_of(N),
        "N_P(Q)_sylow": two_part(H.order) == NP.order,
        "index_power_of_2": index > 0 and two_part(index) == index,
    }


def _witness(H: Subgroup, N: Subgroup, NP: Subgroup, path: str, quotient_order: int) -> Optional[HQWitness]:
    checks = _verify(H, N, NP)
    if not all(checks.values()):
        log_debug("Candidate H_Q via %s rejected: %s", path, checks)
        return None
    return HQWitness(
        H_Q=H,
        sylow_check=checks["N_P(Q)_sylow"],
        index=N.order // H.order,
        construction_path=path,
        quotient_order=quotient_order,
        checks=checks,
    )


def _aut_two_group_path(N: Subgroup, NP: Subgroup) -> Subgroup:
    return join(o_odd(N), NP)


def _s3_path(N: Subgroup, NP: Subgroup, Q: Subgroup, QC: Subgroup) -> Optional[Subgroup]:
    K = o_odd(QC)
    L = join(K, Q)
    pi = quotient_group(N, L)
    qc_bar = pi.image_of(QC)
    for u in NP.elements:
        t = pi.image(u)
        if t in qc_bar or pi.group.element_order(t) != 2:
            continue
        H = s3_lift(pi.group.whole, qc_bar, t)
        return pi.preimage(H)
    return None


def _brute_force_path(N: Subgroup, NP: Subgroup) -> List[Subgroup]:
    parent = N.parent
    candidates = [N]
    for g in N.elements:
        if parent.element_order(g) % 2:
            candidates.append(NP.extended((g,)))
    return candidates


def quotient_order(G: GroupLike, Q: Subgroup) -> int:
    """|N_G(Q) : Q C_G(Q)|."""
    G = as_subgroup(G)
    return normalizer(G, Q).order // join(Q, centralizer(G, Q)).order


def find_HQ(G: GroupLike, P: Subgroup, Q: Subgroup) -> HQWitness:
    G = as_subgroup(G)
    C = centralizer(G, Q)
    if not is_two_nilpotent(C):
        raise PreconditionError(f"C_G(Q) of order {C.order} is not 2-nilpotent")
    N = normalizer(G, Q)
    NP = normalizer(P, Q)
    QC = join(Q, C)
    ratio = N.order // QC.order

    witness: Optional[HQWitness] = None
    if two_part(ratio) == ratio:
        witness = _witness(_aut_two_group_path(N, NP), N, NP, AUT_TWO_GROUP, ratio)
    elif ratio == 6 and not quotient_group(N, QC).group.whole.is_abelian():
        H = _s3_path(N, NP, Q, QC)
        if H is not None:
            witness = _witness(H, N, NP, S3_LIFT, ratio)
    if witness is None:
        for H in _brute_force_path(N, NP):
            witness = _witness(H, N, NP, BRUTE_FORCE, ratio)
            if witness is not None:
                break
    if witness is None:
        log_error("No H_Q for |Q|=%s in |G|=%s (|N/QC|=%s)", Q.order, G.order, ratio)
        raise SearchError(f"no H_Q found for {Q.describe()}")
    log_info("H_Q for |Q|=%s: |H_Q|=%s, index %s via %s", Q.order, witness.H_Q.order, witness.index, witness.construction_path)
    return witness


__all__ = [
    "HQWitness",
    "PreconditionError",
    "SearchError",
    "AUT_TWO_GROUP",
    "S3_LIFT",
    "BRUTE_FORCE",
    "is_two_nilpotent",
    "s3_lift",
    "find_HQ",
    "quotient_order",
]

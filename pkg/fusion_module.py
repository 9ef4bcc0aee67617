from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Set, Tuple

import numpy as np

from config import BrauerForgeError
from logger import log_debug, log_info, log_warning
from perm_module import (
    GroupLike,
    Identification,
    Subgroup,
    as_subgroup,
    normalizer,
    subgroups_all,
    two_part,
)

# images of Q.elements, in order, as parent element handles
MapTable = Tuple[int, ...]


class FusionError(BrauerForgeError):
    pass


@dataclass(eq=False)
class FusionSystem:
    """F_P(G) with every isomorphism between subgroups of P stored as an explicit table."""

    ambient: Subgroup
    P: Subgroup
    subgroups: List[Subgroup]
    isos: Dict[Tuple[int, int], Tuple[MapTable, ...]]
    _index: Dict[FrozenSet[int], int] = field(default_factory=dict, repr=False)
    _np_order: Dict[int, int] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        self._index = {S.members: i for i, S in enumerate(self.subgroups)}

    def index_of(self, Q: Subgroup) -> int:
        try:
            return self._index[Q.members]
        except KeyError:
            raise FusionError(f"{Q.describe()} is not a subgroup of P") from None

    def isomorphisms(self, Q: Subgroup, R: Subgroup) -> Tuple[MapTable, ...]:
        return self.isos.get((self.index_of(Q), self.index_of(R)), ())

    def automorphisms(self, Q: Subgroup) -> Tuple[MapTable, ...]:
        return self.isomorphisms(Q, Q)

    def hom(self, Q: Subgroup, R: Subgroup) -> FrozenSet[MapTable]:
        """Hom_F(Q, R): isomorphisms of Q onto the subgroups of R."""
        i = self.index_of(Q)
        out: Set[MapTable] = set()
        for (a, b), tables in self.isos.items():
            if a == i and self.subgroups[b].is_subgroup_of(R):
                out.update(tables)
        return frozenset(out)

    def conjugates(self, Q: Subgroup) -> List[Subgroup]:
        i = self.index_of(Q)
        return [self.subgroups[b] for (a, b), tables in sorted(self.isos.items()) if a == i and tables]

    def classes(self) -> List[List[Subgroup]]:
        seen: Set[int] = set()
        out = []
        for i, S in enumerate(self.subgroups):
            if i in seen:
                continue
            members = self.conjugates(S)
            seen.update(self.index_of(T) for T in members)
            out.append(members)
        return out

    def normalizer_order(self, Q: Subgroup) -> int:
        i = self.index_of(Q)
        if i not in self._np_order:
            self._np_order[i] = normalizer(self.P, Q).order
        return self._np_order[i]

    def aut_P(self, Q: Subgroup) -> FrozenSet[MapTable]:
        """Maps induced on Q by conjugation with N_P(Q)."""
        parent = Q.parent
        return frozenset(tuple(parent.conj(u, q) for q in Q.elements) for u in normalizer(self.P, Q).elements)

    def without_map(self, Q: Subgroup, R: Subgroup, table: MapTable) -> "FusionSystem":
        key = (self.index_of(Q), self.index_of(R))
        isos = dict(self.isos)
        isos[key] = tuple(t for t in isos.get(key, ()) if t != table)
        return FusionSystem(self.ambient, self.P, list(self.subgroups), isos)

    def map_count(self) -> int:
        return sum(len(t) for t in self.isos.values())


def fusion_system(G: GroupLike, P: Subgroup) -> FusionSystem:
    """Scan g in G and record every conjugation map between subgroups of P."""
    started = time.perf_counter()
    G = as_subgroup(G)
    if two_part(P.order) != P.order:
        raise FusionError(f"|P| = {P.order} is not a power of 2")
    parent = G.parent
    subs = subgroups_all(P)
    index = {S.members: i for i, S in enumerate(subs)}
    p_elements = list(P.elements)
    p_pos = {e: k for k, e in enumerate(p_elements)}
    positions = [np.array([p_pos[e] for e in S.elements], dtype=np.int64) for S in subs]
    table = parent.table
    p_rows = table[p_elements]
    found: Dict[Tuple[int, int], Set[MapTable]] = {}
    seen_actions: Set[bytes] = set()
    for g in G.elements:
        g_row = table[g]
        g_inv = table[parent.inv(g)]
        conj_rows = g_row[p_rows[:, g_inv]]
        key = conj_rows.tobytes()
        if key in seen_actions:
            continue
        seen_actions.add(key)
        images = np.array([parent.find(row) for row in conj_rows], dtype=np.int64)
        inside = np.array([img in P for img in images], dtype=bool)
        for i, pos in enumerate(positions):
            if not inside[pos].all():
                continue
            mapped = images[pos]
            j = index.get(frozenset(int(e) for e in mapped))
            if j is None:
                continue
            found.setdefault((i, j), set()).add(tuple(int(e) for e in mapped))
    isos = {k: tuple(sorted(v)) for k, v in sorted(found.items())}
    F = FusionSystem(ambient=G, P=P, subgroups=subs, isos=isos)
    log_info(
        "Fusion system over |P|=%s in |G|=%s: %s subgroups, %s maps, %s distinct actions (%.2fs)",
        P.order, G.order, len(subs), F.map_count(), len(seen_actions), time.perf_counter() - started,
    )
    return F


def is_fully_normalized(F: FusionSystem, Q: Subgroup) -> bool:
    order = F.normalizer_order(Q)
    return all(order >= F.normalizer_order(R) for R in F.conjugates(Q))


def fully_normalized_representative(F: FusionSystem, Q: Subgroup) -> Subgroup:
    """Among the F-conjugates of Q with largest |N_P|, the one with the smallest element list."""
    members = F.conjugates(Q) or [Q]
    best = max(F.normalizer_order(R) for R in members)
    return min((R for R in members if F.normalizer_order(R) == best), key=lambda R: R.elements)


def fully_normalized_representatives(F: FusionSystem) -> List[Subgroup]:
    reps = [fully_normalized_representative(F, cls[0]) for cls in F.classes()]
    return sorted(reps, key=Subgroup.sort_key)


def _compose(outer: MapTable, outer_source: Subgroup, inner: MapTable) -> MapTable:
    pos = {e: k for k, e in enumerate(outer_source.elements)}
    return tuple(outer[pos[x]] for x in inner)


def _invert(table: MapTable, source: Subgroup, target: Subgroup) -> MapTable:
    back = dict(zip(table, source.elements))
    return tuple(back[t] for t in target.elements)


def _is_fully_automized(F: FusionSystem, Q: Subgroup) -> bool:
    aut_f = set(F.automorphisms(Q))
    aut_p = F.aut_P(Q)
    return aut_p <= aut_f and len(aut_p) == two_part(len(aut_f))


def _is_receptive(F: FusionSystem, Q: Subgroup) -> Optional[str]:
    """None when every F-isomorphism onto Q extends to N_phi; otherwise a witness."""
    parent = Q.parent
    aut_p = F.aut_P(Q)
    for R in F.conjugates(Q):
        r_pos = {e: k for k, e in enumerate(R.elements)}
        n_pr = normalizer(F.P, R)
        for phi in F.isomorphisms(R, Q):
            phi_inv = _invert(phi, R, Q)
            members = []
            for x in n_pr.elements:
                c_x = tuple(parent.conj(x, r) for r in R.elements)
                conjugated = tuple(phi[r_pos[c_x[r_pos[phi_inv[k]]]]] for k in range(len(Q.elements)))
                if conjugated in aut_p:
                    members.append(x)
            n_phi = Subgroup.from_elements(parent, members)
            restrict_pos = [n_phi.elements.index(r) for r in R.elements]
            extended = any(
                tuple(psi[p] for p in restrict_pos) == phi for psi in F.hom(n_phi, F.P)
            )
            if not extended:
                return f"map {R.describe()} -> {Q.describe()} does not extend to N_phi of order {n_phi.order}"
    return None


def is_saturated(F: FusionSystem) -> Tuple[bool, List[str]]:
    """Every F-class needs a member that is fully automized and receptive."""
    witnesses: List[str] = []
    for cls in F.classes():
        reasons = []
        ok = False
        for Q in sorted(cls, key=lambda S: (-F.normalizer_order(S), S.elements)):
            if not _is_fully_automized(F, Q):
                reasons.append(f"{Q.describe()} not fully automized")
                continue
            problem = _is_receptive(F, Q)
            if problem is None:
                ok = True
                break
            reasons.append(problem)
        if not ok:
            witnesses.append(f"class of {cls[0].describe()}: " + "; ".join(reasons[:3]))
    if witnesses:
        log_warning("Fusion system over |P|=%s is not saturated: %s failing classes", F.P.order, len(witnesses))
    return not witnesses, witnesses


def check_fusion_tables(F: FusionSystem) -> List[str]:
    """Identity present, injective, multiplicative and closed under composition."""
    problems: List[str] = []
    parent = F.P.parent
    for i, Q in enumerate(F.subgroups):
        if Q.elements not in F.isos.get((i, i), ()):
            problems.append(f"identity missing on {Q.describe()}")
    for (i, j), tables in F.isos.items():
        Q = F.subgroups[i]
        pos = {e: k for k, e in enumerate(Q.elements)}
        for t in tables:
            if len(set(t)) != len(t):
                problems.append(f"non-injective map on {Q.describe()}")
                continue
            for a in Q.elements:
                for b in Q.elements:
                    if t[pos[parent.mul(a, b)]] != parent.mul(t[pos[a]], t[pos[b]]):
                        problems.append(f"non-multiplicative map on {Q.describe()}")
                        break
                else:
                    continue
                break
    for (i, j), first in F.isos.items():
        for (j2, k), second in F.isos.items():
            if j2 != j:
                continue
            target = set(F.isos.get((i, k), ()))
            for s in second:
                for f in first:
                    if _compose(s, F.subgroups[j], f) not in target:
                        problems.append(f"composition {i}->{j}->{k} missing")
                        break
    return problems


def pull_back(F: FusionSystem, ident: Identification) -> FusionSystem:
    """Transport F (over ident.target) to a fusion system over ident.source."""
    if ident.target != F.P:
        raise FusionError("identification does not land on the fusion system's P")
    P0 = ident.source
    subs0 = subgroups_all(P0)
    index0 = {S.members: i for i, S in enumerate(subs0)}
    inv = ident.inverse()
    to0 = [index0[frozenset(inv(e) for e in S.elements)] for S in F.subgroups]
    isos0: Dict[Tuple[int, int], Tuple[MapTable, ...]] = {}
    for (i, j), tables in F.isos.items():
        source = F.subgroups[i]
        pos = {e: k for k, e in enumerate(source.elements)}
        T0 = subs0[to0[i]]
        moved = {tuple(inv(t[pos[ident(u)]]) for u in T0.elements) for t in tables}
        isos0[(to0[i], to0[j])] = tuple(sorted(moved))
    log_debug("Pulled back %s maps onto |P|=%s", F.map_count(), P0.order)
    return FusionSystem(ambient=F.ambient, P=P0, subgroups=subs0, isos=dict(sorted(isos0.items())))


def fusion_equal(F1: FusionSystem, F2: FusionSystem) -> bool:
    if F1.P != F2.P:
        raise FusionError("fusion systems over different P cannot be compared")
    keys = {k for k, v in F1.isos.items() if v} | {k for k, v in F2.isos.items() if v}
    return all(set(F1.isos.get(k, ())) == set(F2.isos.get(k, ())) for k in keys)


def class_count(F: FusionSystem, order: int, cyclic: bool = True) -> int:
    """Number of F-classes of (cyclic) subgroups of the given order."""
    count = 0
    for cls in F.classes():
        Q = cls[0]
        if Q.order != order:
            continue
        if cyclic and not any(Q.parent.element_order(e) == order for e in Q.elements):
            continue
        count += 1
    return count


__all__ = [
    "FusionSystem",
    "FusionError",
    "MapTable",
    "fusion_system",
    "is_fully_normalized",
    "fully_normalized_representative",
    "fully_normalized_representatives",
    "is_saturated",
    "check_fusion_tables",
    "pull_back",
    "fusion_equal",
    "class_count",
]

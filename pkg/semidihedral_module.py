from __future__ import annotations

import re
import time
from dataclasses import dataclass
from typing import Optional, Tuple

from config import BrauerForgeError
from logger import log_info
from perm_module import (
    Group,
    Perm,
    Subgroup,
    are_conjugate,
    center,
    centralizer,
    group_from_generators,
    join,
    maximal_subgroups,
    normalizer,
    subgroups_all,
)
from report_module import Report

TRIVIAL = "Trivial"
CYCLIC = "Cyclic"
KLEIN = "Klein"
DIHEDRAL = "Dihedral"
QUATERNION = "Quaternion"
SEMIDIHEDRAL = "Semidihedral"

MIN_N = 4
MAX_N = 8

Q_SPEC_TAGS = ("z", "klein", "y", "c4a", "c4b", "P")


class ClassificationError(BrauerForgeError):
    def __init__(self, subgroup: Subgroup, reason: str) -> None:
        super().__init__(f"cannot classify {subgroup.describe()}: {reason}")
        self.subgroup = subgroup


@dataclass(frozen=True)
class SemidihedralPresentation:
    n: int
    group: Group
    x: Perm
    y: Perm
    z: Perm

    @property
    def P(self) -> Subgroup:
        return self.group.whole

    @property
    def xi(self) -> int:
        return self.group.index(self.x)

    @property
    def yi(self) -> int:
        return self.group.index(self.y)

    @property
    def zi(self) -> int:
        return self.group.index(self.z)

    def element(self, i: int, e: int = 0) -> int:
        """Handle of x^i y^e."""
        g = self.group
        out = g.power(self.xi, i)
        return g.mul(out, self.yi) if e % 2 else out


@dataclass(frozen=True)
class SubgroupClass:
    tag: str
    order: int

    @property
    def name(self) -> str:
        if self.tag == TRIVIAL:
            return "1"
        if self.tag == KLEIN:
            return "C2xC2"
        prefix = {CYCLIC: "C", DIHEDRAL: "D", QUATERNION: "Q", SEMIDIHEDRAL: "SD"}[self.tag]
        return f"{prefix}{self.order}"


def make_semidihedral(n: int) -> SemidihedralPresentation:
    """SD_{2^n} acting on the 2^{n-1} cosets of <y>: x is i -> i+1, y is i -> i*(2^{n-2}-1)."""
    if not MIN_N <= n <= MAX_N:
        raise ValueError(f"n must lie in {MIN_N}..{MAX_N}, got {n}")
    points = 2 ** (n - 1)
    r = 2 ** (n - 2) - 1
    x = Perm(tuple((i + 1) % points for i in range(points)))
    y = Perm(tuple((i * r) % points for i in range(points)))
    group = group_from_generators([x, y], name=f"sd{2 ** n}")
    z_index = group.power(group.index(x), 2 ** (n - 2))
    pres = SemidihedralPresentation(n=n, group=group, x=x, y=y, z=group.elements[z_index])
    _verify_presentation(pres)
    return pres


def _verify_presentation(pres: SemidihedralPresentation) -> None:
    g = pres.group
    xi, yi = pres.xi, pres.yi
    n = pres.n
    r = 2 ** (n - 2) - 1
    if g.power(xi, 2 ** (n - 1)) != 0 or g.mul(yi, yi) != 0:
        raise AssertionError("x^{2^{n-1}} = y^2 = 1 fails")
    if g.mul(g.mul(g.inv(yi), xi), yi) != g.power(xi, r):
        raise AssertionError("y^-1 x y = x^{2^{n-2}-1} fails")
    if g.order != 2 ** n:
        raise AssertionError(f"|SD| = {g.order}, expected {2 ** n}")
    if center(g.whole) != g.subgroup((pres.zi,)):
        raise AssertionError("Z(SD) != <z>")


def classify_subgroup(Q: Subgroup) -> SubgroupClass:
    """Isomorphism type of a subgroup of a semidihedral (or any small dihedral-type) 2-group."""
    parent = Q.parent
    order = Q.order
    if order == 1:
        return SubgroupClass(TRIVIAL, 1)
    orders = {e: parent.element_order(e) for e in Q.elements}
    if Q.is_abelian():
        if max(orders.values()) == order:
            return SubgroupClass(CYCLIC, order)
        if order == 4 and max(orders.values()) == 2:
            return SubgroupClass(KLEIN, order)
        raise ClassificationError(Q, "abelian but neither cyclic nor Klein four")
    involutions = [e for e, o in orders.items() if o == 2]
    if len(involutions) == 1:
        return SubgroupClass(QUATERNION, order)
    half = [e for e, o in orders.items() if o == order // 2]
    if not half:
        raise ClassificationError(Q, "no cyclic subgroup of index 2")
    x = half[0]
    cyclic = parent.subgroup((x,))
    outside = [e for e in Q.elements if e not in cyclic]
    if all(orders[e] == 2 for e in outside):
        return SubgroupClass(DIHEDRAL, order)
    if order >= 16:
        target = parent.power(x, order // 4 - 1)
        for y in outside:
            if orders[y] == 2 and parent.mul(parent.mul(y, x), y) == target:
                return SubgroupClass(SEMIDIHEDRAL, order)
    raise ClassificationError(Q, "no dihedral or semidihedral relation found")


def semidihedral_generators(S: Subgroup) -> Optional[Tuple[int, int]]:
    """First (x, y) in S with x^{2^{n-1}} = y^2 = 1, y x y = x^{2^{n-2}-1}, <x, y> = S."""
    order = S.order
    if order < 16 or order & (order - 1):
        return None
    parent = S.parent
    half = order // 2
    exponent = order // 4 - 1
    xs = [e for e in S.elements if parent.element_order(e) == half]
    ys = [e for e in S.elements if parent.element_order(e) == 2]
    for x in xs:
        target = parent.power(x, exponent)
        for y in ys:
            if parent.mul(parent.mul(y, x), y) == target and parent.subgroup((x, y)) == S:
                return x, y
    return None


def tagged_subgroup(parent: Group, x: int, y: int, n: int, tag: str) -> Subgroup:
    """Named representatives: z, klein=Z(P)x<y>, y, c4a=<x^{2^{n-3}}>, c4b=<xy>, P."""
    z = parent.power(x, 2 ** (n - 2))
    if tag == "z":
        return parent.subgroup((z,))
    if tag == "klein":
        return parent.subgroup((z, y))
    if tag == "y":
        return parent.subgroup((y,))
    if tag == "c4a":
        return parent.subgroup((parent.power(x, 2 ** (n - 3)),))
    if tag == "c4b":
        return parent.subgroup((parent.mul(x, y),))
    if tag == "P":
        return parent.subgroup((x, y))
    raise ValueError(f"unknown subgroup tag {tag!r}; expected one of {', '.join(Q_SPEC_TAGS)}")


_TOKEN = re.compile(r"([xy])(?:\^(-?\d+))?")


def evaluate_word(parent: Group, x: int, y: int, word: str) -> int:
    """Evaluate a word such as 'x^2y' or 'xy^-1'; 'xy' means x∘y."""
    word = word.replace(" ", "").replace("*", "")
    if word in ("", "1", "e"):
        return 0
    pos = 0
    out = 0
    for match in _TOKEN.finditer(word):
        if match.start() != pos:
            raise ValueError(f"cannot parse word {word!r} at position {pos}")
        base = x if match.group(1) == "x" else y
        exponent = int(match.group(2)) if match.group(2) else 1
        out = parent.mul(out, parent.power(base, exponent))
        pos = match.end()
    if pos != len(word):
        raise ValueError(f"cannot parse word {word!r} at position {pos}")
    return out


def parse_q_spec(parent: Group, x: int, y: int, n: int, spec: str) -> Subgroup:
    spec = spec.strip()
    if spec in Q_SPEC_TAGS:
        return tagged_subgroup(parent, x, y, n, spec)
    gens = tuple(evaluate_word(parent, x, y, w) for w in spec.split(",") if w.strip())
    return parent.subgroup(gens)


def structure_report(n: int) -> Report:
    """Check the quoted structural facts about SD_{2^n} by exhaustive enumeration."""
    started = time.perf_counter()
    pres = make_semidihedral(n)
    g = pres.group
    P = pres.P
    report = Report(instance=f"structure sd{2 ** n}")
    subgroups = subgroups_all(P)
    classes = {S: classify_subgroup(S) for S in subgroups}

    maximal = maximal_subgroups(P, subgroups)
    tags = sorted(classes[M].tag for M in maximal)
    report.check(
        "three_maximal_subgroups",
        len(maximal) == 3 and set(tags) == {CYCLIC, DIHEDRAL, QUATERNION},
        witness=", ".join(classes[M].name for M in maximal),
    )

    kleins = [S for S in subgroups if classes[S].tag == KLEIN]
    one_class = bool(kleins) and all(are_conjugate(P, kleins[0], K) is not None for K in kleins)
    report.check("klein_fours_one_class", one_class, witness=f"{len(kleins)} Klein four subgroups")
    report.check(
        "klein_self_centralizing",
        all(centralizer(P, K) == K for K in kleins),
        witness="C_P(Q) = Q for every Klein four Q",
    )

    xy = g.subgroup((g.mul(pres.xi, pres.yi),))
    report.check("xy_self_centralizing", centralizer(P, xy) == xy, witness=f"|C_P(<xy>)| = {centralizer(P, xy).order}")

    Z = center(P)
    report.check("center_is_z", Z == g.subgroup((pres.zi,)) and Z.order == 2, witness=f"|Z(P)| = {Z.order}")

    parity_ok = all(
        (g.element_order(pres.element(i, 1)) == 2) == (i % 2 == 0) for i in range(2 ** (n - 1))
    )
    report.check("order_xiy_parity", parity_ok, witness="order(x^i y) = 2 iff i even")

    proper = [S for S in subgroups if S.order < P.order]
    report.check(
        "only_whole_group_semidihedral",
        classes[P].tag == SEMIDIHEDRAL and all(classes[S].tag != SEMIDIHEDRAL for S in proper),
        witness=f"{len(subgroups)} subgroups classified",
    )

    outer_ok = True
    for S in subgroups:
        if classes[S].tag == KLEIN or (classes[S].tag == QUATERNION and S.order == 8):
            C = centralizer(P, S)
            N = normalizer(P, S)
            outer_ok &= C == center(S) and N.order == 2 * join(S, C).order
    report.check("klein_q8_outer_c2", outer_ok, witness="C_P(Q) = Z(Q) and N_P(Q)/QC_P(Q) = C2 for Q Klein or Q8")

    report.timings["structure"] = time.perf_counter() - started
    report.settle()
    log_info("Structure report sd%s: %s", 2 ** n, report.verdict)
    return report


__all__ = [
    "SemidihedralPresentation",
    "SubgroupClass",
    "ClassificationError",
    "make_semidihedral",
    "classify_subgroup",
    "semidihedral_generators",
    "tagged_subgroup",
    "evaluate_word",
    "parse_q_spec",
    "structure_report",
]

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from config import BrauerForgeError
from logger import log_error, log_info
from perm_module import (
    Embedding,
    Group,
    Identification,
    Perm,
    Subgroup,
    delta_subgroup,
    direct_product,
    group_from_generators,
    join,
    load_group_file,
    sylow2,
    two_part,
)
from semidihedral_module import (
    Q_SPEC_TAGS,
    ClassificationError,
    classify_subgroup,
    make_semidihedral,
    parse_q_spec,
    semidihedral_generators,
    tagged_subgroup,
)


class CatalogError(BrauerForgeError):
    pass


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    recipe: str
    expected_order: int
    expected_sylow: str
    build: Callable[[], "CatalogGroup"] = field(repr=False, compare=False)


@dataclass(eq=False)
class CatalogGroup:
    """A constructed group with its Sylow 2-subgroup and named subgroups."""

    name: str
    group: Group
    sylow: Subgroup
    sylow_type: str
    tags: Dict[str, Subgroup] = field(default_factory=dict)
    sd_generators: Optional[Tuple[int, int]] = None
    sd_n: int = 0
    factors: Tuple["CatalogGroup", ...] = ()
    embeddings: Tuple[Embedding, ...] = ()

    @property
    def order(self) -> int:
        return self.group.order

    @property
    def is_semidihedral(self) -> bool:
        return self.sd_generators is not None

    def subgroup(self, spec: str) -> Subgroup:
        """Resolve a tag ('sylow', 'delta', 'G', '1', a Q-spec tag) or a word list in x, y."""
        spec = spec.strip()
        if spec in self.tags:
            return self.tags[spec]
        if spec in ("G", "whole"):
            return self.group.whole
        if spec in ("1", "trivial"):
            return self.group.trivial()
        if self.sd_generators is None:
            raise CatalogError(f"{self.name} has no subgroup named {spec!r}")
        x, y = self.sd_generators
        try:
            return parse_q_spec(self.group, x, y, self.sd_n, spec)
        except ValueError as exc:
            raise CatalogError(f"bad subgroup spec {spec!r} for {self.name}: {exc}") from exc


def _tag_semidihedral(cg: CatalogGroup, x: int, y: int, n: int) -> None:
    cg.sd_generators = (x, y)
    cg.sd_n = n
    for tag in Q_SPEC_TAGS:
        cg.tags[tag] = tagged_subgroup(cg.group, x, y, n, tag)


def _finish(name: str, group: Group, sylow: Optional[Subgroup] = None) -> CatalogGroup:
    S = sylow if sylow is not None else sylow2(group.whole)
    try:
        sylow_type = classify_subgroup(S).name
    except ClassificationError:
        sylow_type = f"order{S.order}"
    cg = CatalogGroup(name=name, group=group, sylow=S, sylow_type=sylow_type)
    cg.tags["sylow"] = S
    gens = semidihedral_generators(S)
    if gens is not None:
        _tag_semidihedral(cg, gens[0], gens[1], S.order.bit_length() - 1)
    cg.tags.setdefault("P", S)
    return cg


# vectors of (F_3)^d, lexicographic, zero excluded
def _f3_vectors(d: int) -> List[Tuple[int, ...]]:
    return [v for v in itertools.product(range(3), repeat=d) if any(v)]


def _projective_points(d: int) -> List[Tuple[int, ...]]:
    """Normalized representatives: first nonzero coordinate equals 1."""
    return [v for v in _f3_vectors(d) if v[next(i for i, c in enumerate(v) if c)] == 1]


def _normalize(v: Tuple[int, ...]) -> Tuple[int, ...]:
    lead = next(c for c in v if c)
    # 1 and 2 are their own inverses mod 3
    return tuple((c * lead) % 3 for c in v)


def _matrix_perm(matrix: List[List[int]], points: List[Tuple[int, ...]], projective: bool = False) -> Perm:
    M = np.array(matrix, dtype=np.int64)
    pos = {p: i for i, p in enumerate(points)}
    images = []
    for p in points:
        image = tuple(int(c) for c in (M @ np.array(p, dtype=np.int64)) % 3)
        images.append(pos[_normalize(image) if projective else image])
    return Perm(tuple(images))


def _build_sd(n: int) -> CatalogGroup:
    pres = make_semidihedral(n)
    cg = CatalogGroup(name=f"sd{2 ** n}", group=pres.group, sylow=pres.P, sylow_type=f"SD{2 ** n}")
    cg.tags["sylow"] = pres.P
    _tag_semidihedral(cg, pres.xi, pres.yi, n)
    return cg


def _build_s3() -> CatalogGroup:
    return _finish("s3", group_from_generators([Perm.from_cycles(3, [(0, 1, 2)]), Perm.from_cycles(3, [(0, 1)])], name="s3"))


def _build_a4() -> CatalogGroup:
    gens = [Perm.from_cycles(4, [(0, 1, 2)]), Perm.from_cycles(4, [(0, 1), (2, 3)])]
    return _finish("a4", group_from_generators(gens, name="a4"))


def _build_c2xc2() -> CatalogGroup:
    gens = [Perm.from_cycles(4, [(0, 1)]), Perm.from_cycles(4, [(2, 3)])]
    return _finish("c2xc2", group_from_generators(gens, name="c2xc2"))


def _build_q8() -> CatalogGroup:
    points = _f3_vectors(2)
    gens = [_matrix_perm([[0, 2], [1, 0]], points), _matrix_perm([[1, 1], [1, 2]], points)]
    return _finish("q8", group_from_generators(gens, name="q8"))


def _gl23_group() -> Group:
    points = _f3_vectors(2)
    gens = [_matrix_perm([[1, 1], [0, 1]], points), _matrix_perm([[0, 1], [1, 0]], points)]
    return group_from_generators(gens, name="gl23")


def _build_gl23() -> CatalogGroup:
    return _finish("gl23", _gl23_group())


def _build_m11() -> CatalogGroup:
    gens = [
        Perm.from_cycles(11, [tuple(range(11))]),
        Perm.from_cycles(11, [(2, 6, 10, 7), (3, 9, 4, 5)]),
    ]
    return _finish("m11", group_from_generators(gens, name="m11"))


def _build_psl33() -> CatalogGroup:
    points = _projective_points(3)
    transvection = [[1, 1, 0], [0, 1, 0], [0, 0, 1]]
    cycle = [[0, 0, 1], [1, 0, 0], [0, 1, 0]]
    gens = [_matrix_perm(transvection, points, projective=True), _matrix_perm(cycle, points, projective=True)]
    return _finish("psl33", group_from_generators(gens, name="psl33"))


def _build_sd16xc3() -> CatalogGroup:
    sd = catalog("sd16")
    c3 = group_from_generators([Perm.from_cycles(3, [(0, 1, 2)])], name="c3")
    group, e1, e2 = direct_product(sd.group, c3, name="sd16xc3")
    cg = _finish("sd16xc3", group, sylow=e1.image(sd.sylow))
    cg.embeddings = (e1, e2)
    return cg


def _build_c2xs3() -> CatalogGroup:
    c2 = group_from_generators([Perm.from_cycles(2, [(0, 1)])], name="c2")
    group, e1, e2 = direct_product(c2, catalog("s3").group, name="c2xs3")
    cg = _finish("c2xs3", group)
    cg.embeddings = (e1, e2)
    cg.tags["c2"] = e1.image(c2.whole)
    cg.tags["s3"] = e2.image(catalog("s3").group.whole)
    return cg


def _build_d12() -> CatalogGroup:
    rotation = Perm(tuple((i + 1) % 6 for i in range(6)))
    reflection = Perm(tuple((-i) % 6 for i in range(6)))
    group = group_from_generators([rotation, reflection], name="d12")
    cg = _finish("d12", group)
    cg.tags["rotations"] = group.subgroup((group.index(rotation),))
    return cg


def product_with_delta(
    left: CatalogGroup, right: CatalogGroup, identification: Optional[Identification] = None
) -> CatalogGroup:
    """G x G' with ΔP tagged, ΔP = {(u, φ(u))} for u in the left Sylow."""
    if not (left.is_semidihedral and right.is_semidihedral):
        raise CatalogError("both factors need a semidihedral Sylow 2-subgroup")
    name = f"{left.name}x{right.name}"
    group, e1, e2 = direct_product(left.group, right.group, name=name)
    sylow = join(e1.image(left.sylow), e2.image(right.sylow))
    delta = delta_subgroup(e1, e2, left.sylow, identification)
    x, y = left.sd_generators
    phi = identification if identification is not None else (lambda u: u)
    X = group.mul(e1(x), e2(phi(x)))
    Y = group.mul(e1(y), e2(phi(y)))
    cg = CatalogGroup(
        name=name,
        group=group,
        sylow=sylow,
        sylow_type=f"{left.sylow_type}x{right.sylow_type}",
        factors=(left, right),
        embeddings=(e1, e2),
    )
    _tag_semidihedral(cg, X, Y, left.sd_n)
    cg.tags["sylow"] = sylow
    cg.tags["delta"] = delta
    return cg


def _build_gl23xgl23() -> CatalogGroup:
    gl = catalog("gl23")
    return product_with_delta(gl, gl)


CATALOG: Dict[str, CatalogEntry] = {
    entry.name: entry
    for entry in (
        CatalogEntry("sd16", "x: i -> i+1, y: i -> 3i on Z/8", 16, "SD16", lambda: _build_sd(4)),
        CatalogEntry("sd32", "x: i -> i+1, y: i -> 7i on Z/16", 32, "SD32", lambda: _build_sd(5)),
        CatalogEntry("sd64", "x: i -> i+1, y: i -> 15i on Z/32", 64, "SD64", lambda: _build_sd(6)),
        CatalogEntry("s3", "(0 1 2), (0 1)", 6, "C2", _build_s3),
        CatalogEntry("a4", "(0 1 2), (0 1)(2 3)", 12, "C2xC2", _build_a4),
        CatalogEntry("c2xc2", "(0 1), (2 3)", 4, "C2xC2", _build_c2xc2),
        CatalogEntry("q8", "[[0,2],[1,0]], [[1,1],[1,2]] on (F_3)^2 - 0", 8, "Q8", _build_q8),
        CatalogEntry("gl23", "[[1,1],[0,1]], [[0,1],[1,0]] on (F_3)^2 - 0", 48, "SD16", _build_gl23),
        CatalogEntry("m11", "(0..10), (2 6 10 7)(3 9 4 5)", 7920, "SD16", _build_m11),
        CatalogEntry("psl33", "transvection and 3-cycle matrix on PG(2,3)", 5616, "SD16", _build_psl33),
        CatalogEntry("gl23xgl23", "gl23 x gl23 with ΔSD16", 2304, "SD16xSD16", _build_gl23xgl23),
        CatalogEntry("sd16xc3", "sd16 x C3", 48, "SD16", _build_sd16xc3),
        CatalogEntry("c2xs3", "C2 x s3", 12, "C2xC2", _build_c2xs3),
        CatalogEntry("d12", "rotation and reflection of a hexagon", 12, "C2xC2", _build_d12),
    )
}


@lru_cache(maxsize=None)
def catalog(name: str) -> CatalogGroup:
    entry = CATALOG.get(name)
    if entry is None:
        log_error("Unknown catalog group %r", name)
        raise CatalogError(f"unknown group {name!r}; known: {', '.join(sorted(CATALOG))}")
    cg = entry.build()
    if cg.order != entry.expected_order:
        raise CatalogError(f"{name}: built order {cg.order}, expected {entry.expected_order}")
    if cg.sylow_type != entry.expected_sylow or cg.sylow.order != two_part(cg.order):
        raise CatalogError(f"{name}: Sylow 2-subgroup is {cg.sylow_type}, expected {entry.expected_sylow}")
    if entry.expected_sylow.startswith("SD") and "x" not in entry.expected_sylow and not cg.is_semidihedral:
        raise CatalogError(f"{name}: no semidihedral presentation found on the Sylow 2-subgroup")
    log_info("Catalog %s: order %s, Sylow %s", name, cg.order, cg.sylow_type)
    return cg


def load_source(source: str) -> CatalogGroup:
    """A catalog name, or the path of a group file."""
    if source in CATALOG:
        return catalog(source)
    if os.path.isfile(source):
        return _finish(os.path.basename(source), load_group_file(source))
    raise CatalogError(f"{source!r} is neither a catalog group nor a readable group file")


__all__ = [
    "CATALOG",
    "CatalogEntry",
    "CatalogError",
    "CatalogGroup",
    "catalog",
    "load_source",
    "product_with_delta",
]

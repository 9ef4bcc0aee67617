from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from config import MAX_GROUP_ORDER, MAX_SUBGROUP_ENUM_ORDER, BrauerForgeError, ResourceLimitError
from logger import log_debug, log_error, log_info


class DegreeMismatchError(BrauerForgeError):
    pass


class IdentificationError(BrauerForgeError):
    pass


class GroupParseError(BrauerForgeError):
    def __init__(self, line_no: int, line: str, reason: str) -> None:
        super().__init__(f"line {line_no}: {reason}: {line!r}")
        self.line_no = line_no
        self.line = line
        self.reason = reason


@dataclass(frozen=True)
class Perm:
    """A permutation of {0..d-1}; images[i] is the image of point i."""

    images: Tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.images) != list(range(len(self.images))):
            raise ValueError(f"not a bijection on 0..{len(self.images) - 1}: {self.images}")

    @property
    def degree(self) -> int:
        return len(self.images)

    @classmethod
    def identity(cls, degree: int) -> "Perm":
        return cls(tuple(range(degree)))

    @classmethod
    def from_cycles(cls, degree: int, cycles: Iterable[Sequence[int]]) -> "Perm":
        images = list(range(degree))
        seen = set()
        for cycle in cycles:
            for point in cycle:
                if not 0 <= point < degree:
                    raise ValueError(f"point {point} outside 0..{degree - 1}")
                if point in seen:
                    raise ValueError(f"point {point} repeated in cycle notation")
                seen.add(point)
            for pos, point in enumerate(cycle):
                images[point] = cycle[(pos + 1) % len(cycle)]
        return cls(tuple(images))

    def __call__(self, point: int) -> int:
        return self.images[point]

    def __mul__(self, other: "Perm") -> "Perm":
        return compose(self, other)

    def inverse(self) -> "Perm":
        inv = [0] * self.degree
        for i, j in enumerate(self.images):
            inv[j] = i
        return Perm(tuple(inv))

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def order(self) -> int:
        result = 1
        for cycle in self.cycles():
            length = len(cycle)
            result = result * length // np.gcd(result, length)
        return int(result)

    def cycles(self) -> List[Tuple[int, ...]]:
        seen = set()
        out: List[Tuple[int, ...]] = []
        for start in range(self.degree):
            if start in seen:
                continue
            cycle = [start]
            seen.add(start)
            nxt = self.images[start]
            while nxt != start:
                cycle.append(nxt)
                seen.add(nxt)
                nxt = self.images[nxt]
            if len(cycle) > 1:
                out.append(tuple(cycle))
        return out

    def __str__(self) -> str:
        cycles = self.cycles()
        if not cycles:
            return "()"
        return "".join("(" + " ".join(str(p) for p in c) + ")" for c in cycles)


def compose(p: Perm, q: Perm) -> Perm:
    """p∘q: apply q first, then p."""
    if p.degree != q.degree:
        raise DegreeMismatchError(f"cannot compose degree {p.degree} with degree {q.degree}")
    return Perm(tuple(p.images[i] for i in q.images))


def _key(row: np.ndarray) -> bytes:
    return np.asarray(row, dtype=np.int32).tobytes()


class Group:
    """A permutation group with every element enumerated in lexicographic order.

    Element handles are integer positions in ``elements``; the identity is
    always position 0 since it is the lexicographically smallest permutation.
    """

    def __init__(self, generators: Sequence[Perm], name: str = "") -> None:
        if not generators:
            raise ValueError("at least one generator is required")
        degree = generators[0].degree
        for gen in generators:
            if gen.degree != degree:
                raise DegreeMismatchError("generators have different degrees")
        self.name = name
        self.degree = degree
        self.generators: Tuple[Perm, ...] = tuple(generators)

        found = {tuple(range(degree))}
        queue = deque(found)
        gen_images = [g.images for g in generators]
        while queue:
            current = queue.popleft()
            for g in gen_images:
                product = tuple(g[i] for i in current)
                if product not in found:
                    found.add(product)
                    if len(found) > MAX_GROUP_ORDER:
                        log_error("Group %s exceeds %s elements", name or "<anon>", MAX_GROUP_ORDER)
                        raise ResourceLimitError(f"group closure exceeds {MAX_GROUP_ORDER} elements")
                    queue.append(product)

        ordered = sorted(found)
        self.elements: Tuple[Perm, ...] = tuple(Perm(images) for images in ordered)
        self._table = np.array(ordered, dtype=np.int32).reshape(len(ordered), degree)
        self._table.setflags(write=False)
        self._index: Dict[bytes, int] = {_key(row): pos for pos, row in enumerate(self._table)}
        inverse = np.empty_like(self._table)
        np.put_along_axis(inverse, self._table, np.arange(degree, dtype=np.int32)[None, :].repeat(len(ordered), 0), axis=1)
        self._inverse = np.array([self._index[_key(row)] for row in inverse], dtype=np.int64)
        self.generator_indices: Tuple[int, ...] = tuple(self.index(g) for g in generators)
        self.whole = Subgroup.generated(self, self.generator_indices)
        log_debug("Built group %s of order %s on %s points", name or "<anon>", self.order, degree)

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def table(self) -> np.ndarray:
        return self._table

    def __repr__(self) -> str:
        return f"Group({self.name or 'anon'}, order={self.order}, degree={self.degree})"

    def find(self, images: Union[Sequence[int], np.ndarray]) -> Optional[int]:
        return self._index.get(_key(np.asarray(images)))

    def index(self, perm: Union[Perm, Sequence[int], np.ndarray]) -> int:
        images = perm.images if isinstance(perm, Perm) else perm
        pos = self.find(images)
        if pos is None:
            raise ValueError(f"permutation {images} is not an element of {self!r}")
        return pos

    def mul(self, a: int, b: int) -> int:
        return self._index[_key(self._table[a][self._table[b]])]

    def inv(self, a: int) -> int:
        return int(self._inverse[a])

    def conj(self, g: int, s: int) -> int:
        """g s g^-1."""
        return self.mul(self.mul(g, s), self.inv(g))

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        result, base = 0, a
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def element_order(self, a: int) -> int:
        return self.elements[a].order()

    def subgroup(self, generators: Iterable[int]) -> "Subgroup":
        return Subgroup.generated(self, tuple(generators))

    def subgroup_from_elements(self, elements: Iterable[int]) -> "Subgroup":
        return Subgroup.from_elements(self, elements)

    def trivial(self) -> "Subgroup":
        return Subgroup.generated(self, ())


class Subgroup:
    """A subgroup of a parent Group, stored as sorted parent element handles.

    Carries a Schreier tree over its own generators, so every member has a
    word: member = g[w0] ∘ g[w1] ∘ ... ∘ g[wk].
    """

    def __init__(self, parent: Group, generators: Tuple[int, ...], tree: Dict[int, Tuple[int, int]]) -> None:
        self.parent = parent
        self.generators = generators
        self._tree = tree
        self.elements: Tuple[int, ...] = tuple(sorted(tree))
        self._members: FrozenSet[int] = frozenset(tree)
        order = len(self.elements)
        if parent.order % order:
            raise AssertionError(f"Lagrange violated: {order} does not divide {parent.order}")

    @classmethod
    def generated(cls, parent: Group, generators: Tuple[int, ...]) -> "Subgroup":
        gens = tuple(g for g in dict.fromkeys(generators) if g != 0)
        tree = _close(parent, gens, {0: (-1, -1)}, 0)
        return cls(parent, gens, tree)

    @classmethod
    def from_elements(cls, parent: Group, elements: Iterable[int]) -> "Subgroup":
        wanted = sorted(set(elements) | {0})
        gens: List[int] = []
        tree: Dict[int, Tuple[int, int]] = {0: (-1, -1)}
        for e in wanted:
            if e not in tree:
                gens.append(e)
                tree = _close(parent, tuple(gens), tree, len(gens) - 1)
        if len(tree) != len(wanted):
            raise ValueError("element set is not closed under composition")
        return cls(parent, tuple(gens), tree)

    def extended(self, extra: Iterable[int]) -> "Subgroup":
        gens = list(self.generators)
        tree = self._tree
        for e in extra:
            if e not in tree:
                gens.append(e)
                tree = _close(self.parent, tuple(gens), tree, len(gens) - 1)
        if len(gens) == len(self.generators):
            return self
        return Subgroup(self.parent, tuple(gens), tree)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[int]:
        return iter(self.elements)

    def __contains__(self, element: object) -> bool:
        return element in self._members

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.parent is other.parent and self._members == other._members

    def __hash__(self) -> int:
        return hash((id(self.parent), self._members))

    def __repr__(self) -> str:
        return f"Subgroup(order={self.order}, gens={self.generators})"

    @property
    def members(self) -> FrozenSet[int]:
        return self._members

    def sort_key(self) -> Tuple[int, Tuple[int, ...]]:
        return (self.order, self.elements)

    def is_subgroup_of(self, other: "Subgroup") -> bool:
        return self._members <= other.members

    def word(self, element: int) -> List[int]:
        """Generator positions w with element = g[w0] ∘ g[w1] ∘ ... (identity -> [])."""
        if element not in self._members:
            raise ValueError(f"element {element} not in subgroup")
        out: List[int] = []
        while element != 0:
            prev, gen_pos = self._tree[element]
            out.append(gen_pos)
            element = prev
        return out

    def perms(self) -> List[Perm]:
        return [self.parent.elements[e] for e in self.elements]

    def is_abelian(self) -> bool:
        mul = self.parent.mul
        return all(mul(a, b) == mul(b, a) for a in self.generators for b in self.generators)

    def describe(self) -> str:
        gens = ", ".join(str(self.parent.elements[g]) for g in self.generators) or "()"
        return f"<{gens}> (order {self.order})"


def _close(parent: Group, gens: Tuple[int, ...], tree: Dict[int, Tuple[int, int]], first_new: int) -> Dict[int, Tuple[int, int]]:
    """Extend a Schreier tree closed under gens[:first_new] to one closed under all gens."""
    tree = dict(tree)
    if not gens:
        return tree
    table = parent.table
    index = parent._index
    gen_rows = table[list(gens)]
    queue = deque((e, first_new) for e in tree)
    while queue:
        element, start = queue.popleft()
        products = gen_rows[start:][:, table[element]]
        for offset, row in enumerate(products):
            target = index[_key(row)]
            if target not in tree:
                tree[target] = (element, start + offset)
                queue.append((target, 0))
    return tree


GroupLike = Union[Group, Subgroup]


def as_subgroup(G: GroupLike) -> Subgroup:
    return G.whole if isinstance(G, Group) else G


def group_from_generators(gens: Sequence[Perm], name: str = "") -> Group:
    if not gens:
        raise ValueError("group_from_generators needs at least one generator")
    group = Group(gens, name=name)
    log_info("Group %s: order %s, degree %s", name or "<anon>", group.order, group.degree)
    return group


def join(*subgroups: Subgroup) -> Subgroup:
    parent = subgroups[0].parent
    gens: List[int] = []
    for s in subgroups:
        gens.extend(s.generators)
    return Subgroup.generated(parent, tuple(gens))


def intersection(a: Subgroup, b: Subgroup) -> Subgroup:
    return Subgroup.from_elements(a.parent, a.members & b.members)


def centralizer(G: GroupLike, S: Subgroup) -> Subgroup:
    """{g in G : gs = sg for all s in S}, by element scan."""
    G = as_subgroup(G)
    table = G.parent.table
    rows = table[list(G.elements)]
    mask = np.ones(len(rows), dtype=bool)
    for s in S.generators:
        s_row = table[s]
        mask &= (rows[:, s_row] == s_row[rows]).all(axis=1)
    found = [e for e, keep in zip(G.elements, mask) if keep]
    return Subgroup.from_elements(G.parent, found)


def _conjugates(parent: Group, candidates: Sequence[int], s: int) -> np.ndarray:
    """Rows g s g^-1 for every g in candidates."""
    table = parent.table
    rows = table[list(candidates)]
    out = np.empty_like(rows)
    np.put_along_axis(out, rows, rows[:, table[s]], axis=1)
    return out


def normalizer(G: GroupLike, S: Subgroup) -> Subgroup:
    """{g in G : g S g^-1 = S}, by element scan."""
    G = as_subgroup(G)
    parent = G.parent
    keys = {_key(parent.table[e]) for e in S.elements}
    mask = np.ones(G.order, dtype=bool)
    for s in S.generators:
        conj = _conjugates(parent, G.elements, s)
        mask &= np.fromiter((_key(row) in keys for row in conj), dtype=bool, count=len(conj))
    found = [e for e, keep in zip(G.elements, mask) if keep]
    return Subgroup.from_elements(parent, found)


def center(G: GroupLike) -> Subgroup:
    G = as_subgroup(G)
    return centralizer(G, G)


def is_normal(G: GroupLike, N: Subgroup) -> bool:
    G = as_subgroup(G)
    keys = {_key(G.parent.table[e]) for e in N.elements}
    for s in N.generators:
        conj = _conjugates(G.parent, G.generators or (0,), s)
        if not all(_key(row) in keys for row in conj):
            return False
    return True


def conjugacy_class(G: GroupLike, s: int) -> List[int]:
    G = as_subgroup(G)
    parent = G.parent
    conj = _conjugates(parent, G.elements, s)
    return sorted({parent.find(row) for row in conj})


def conjugate_subgroup(g: int, S: Subgroup) -> Subgroup:
    parent = S.parent
    return Subgroup.generated(parent, tuple(parent.conj(g, s) for s in S.generators))


def two_part(n: int) -> int:
    return n & -n


def sylow2(G: GroupLike) -> Subgroup:
    """First Sylow 2-subgroup in canonical search order."""
    G = as_subgroup(G)
    parent = G.parent
    target = two_part(G.order)
    S = parent.trivial()
    while S.order < target:
        N = normalizer(G, S)
        step = None
        for g in N.elements:
            if g not in S and parent.mul(g, g) in S:
                step = g
                break
        if step is None:
            raise AssertionError("no 2-element in N(S)/S: Sylow growth failed")
        S = S.extended((step,))
    return S


def normal_closure(G: GroupLike, elements: Iterable[int], stop_if_even: bool = False) -> Optional[Subgroup]:
    """Smallest normal subgroup of G containing elements (None if stop_if_even trips)."""
    G = as_subgroup(G)
    N = G.parent.trivial()
    pending = list(elements)
    while pending:
        e = pending.pop()
        if e in N:
            continue
        for c in conjugacy_class(G, e):
            if c not in N:
                N = N.extended((c,))
                if stop_if_even and N.order % 2 == 0:
                    return None
    return N


def o_odd(G: GroupLike) -> Subgroup:
    """O_{2'}(G): join of the normal closures of odd-order classes that stay odd."""
    G = as_subgroup(G)
    parent = G.parent
    result = parent.trivial()
    if G.order % 2 == 0 and two_part(G.order) == G.order:
        return result
    visited = set()
    for e in G.elements:
        if e in visited or e in result or parent.element_order(e) % 2 == 0:
            continue
        cls = conjugacy_class(G, e)
        visited.update(cls)
        closure = normal_closure(G, [e], stop_if_even=True)
        if closure is None:
            continue
        result = join(result, closure)
    if result.order % 2 == 0 or not is_normal(G, result):
        raise AssertionError("O_2'(G) computation produced a non-normal or even subgroup")
    return result


@dataclass(frozen=True)
class GSet:
    """G acting on the left cosets of H; point 0 is the coset H itself."""

    group: Subgroup
    stabilizer: Subgroup
    representatives: Tuple[int, ...]
    point_of: Dict[int, int] = field(repr=False, compare=False)

    @property
    def degree(self) -> int:
        return len(self.representatives)

    def action_of(self, g: int) -> Perm:
        parent = self.group.parent
        return Perm(tuple(self.point_of[parent.mul(g, r)] for r in self.representatives))

    def generator_images(self) -> List[Perm]:
        return [self.action_of(g) for g in self.group.generators]

    def fixed_points(self, Q: Subgroup) -> List[int]:
        images = [self.action_of(q) for q in Q.generators]
        return [pt for pt in range(self.degree) if all(p(pt) == pt for p in images)]


def coset_action(G: GroupLike, H: Subgroup) -> GSet:
    G = as_subgroup(G)
    if not H.is_subgroup_of(G):
        raise ValueError("coset_action needs H <= G")
    parent = G.parent
    table = parent.table
    h_rows = table[list(H.elements)]
    point_of: Dict[int, int] = {}
    reps: List[int] = []
    for e in G.elements:
        if e in point_of:
            continue
        point = len(reps)
        reps.append(e)
        for row in table[e][h_rows]:
            point_of[parent._index[_key(row)]] = point
    if len(reps) * H.order != G.order:
        raise AssertionError("coset count does not match the index")
    return GSet(group=G, stabilizer=H, representatives=tuple(reps), point_of=point_of)


@dataclass(frozen=True)
class QuotientMap:
    """G/N realized as a permutation group on the cosets of N."""

    source: Subgroup
    kernel: Subgroup
    gset: GSet
    group: Group

    def image(self, g: int) -> int:
        return self.group.index(self.gset.action_of(g))

    def image_of(self, S: Subgroup) -> Subgroup:
        return Subgroup.generated(self.group, tuple(self.image(s) for s in S.generators))

    def preimage(self, T: Subgroup) -> Subgroup:
        members = T.members
        return Subgroup.from_elements(self.source.parent, [g for g in self.source.elements if self.image(g) in members])


def quotient_group(G: GroupLike, N: Subgroup) -> QuotientMap:
    G = as_subgroup(G)
    if not is_normal(G, N):
        raise ValueError("quotient_group needs a normal subgroup")
    gset = coset_action(G, N)
    images = gset.generator_images() or [Perm.identity(gset.degree)]
    quotient = Group(images, name="quotient")
    return QuotientMap(source=G, kernel=N, gset=gset, group=quotient)


def subgroups_all(G: GroupLike) -> List[Subgroup]:
    """Every subgroup of G (no conjugacy reduction), ordered by (order, elements)."""
    G = as_subgroup(G)
    if G.order > MAX_SUBGROUP_ENUM_ORDER:
        raise ResourceLimitError(f"subgroup enumeration limited to order {MAX_SUBGROUP_ENUM_ORDER}")
    parent = G.parent
    found: Dict[FrozenSet[int], Subgroup] = {}
    cyclic: List[int] = []
    for e in G.elements:
        c = Subgroup.generated(parent, (e,))
        if c.members not in found:
            found[c.members] = c
            cyclic.append(e)
    frontier = list(found.values())
    while frontier:
        fresh: List[Subgroup] = []
        for S in frontier:
            for e in cyclic:
                if e in S:
                    continue
                bigger = S.extended((e,))
                if bigger.members not in found:
                    found[bigger.members] = bigger
                    fresh.append(bigger)
        frontier = fresh
    return sorted(found.values(), key=Subgroup.sort_key)


def maximal_subgroups(G: GroupLike, pool: Optional[Sequence[Subgroup]] = None) -> List[Subgroup]:
    G = as_subgroup(G)
    candidates = [S for S in (pool if pool is not None else subgroups_all(G)) if S.is_subgroup_of(G) and S.order < G.order]
    return [S for S in candidates if not any(S.order < T.order and S.is_subgroup_of(T) for T in candidates)]


def frattini_2group(Q: Subgroup) -> Subgroup:
    """Φ(Q) for a 2-group: the subgroup generated by squares."""
    parent = Q.parent
    return Subgroup.generated(parent, tuple(sorted({parent.mul(g, g) for g in Q.elements})))


def maximal_subgroups_2group(Q: Subgroup) -> List[Subgroup]:
    """Index-2 subgroups of a 2-group, as kernels of the nonzero maps Q/Φ(Q) -> C2."""
    if Q.order == 1:
        return []
    if two_part(Q.order) != Q.order:
        raise ValueError(f"order {Q.order} is not a power of 2")
    parent = Q.parent
    phi = frattini_2group(Q)
    basis: List[int] = []
    span = phi
    for g in Q.elements:
        if g not in span:
            basis.append(g)
            span = span.extended((g,))
    out = []
    for mask in range(1, 2 ** len(basis)):
        ones = [i for i in range(len(basis)) if mask >> i & 1]
        gens = [b for i, b in enumerate(basis) if not mask >> i & 1]
        gens += [parent.mul(basis[ones[0]], basis[j]) for j in ones[1:]]
        out.append(phi.extended(gens))
    return sorted(out, key=Subgroup.sort_key)


def are_conjugate(G: GroupLike, A: Subgroup, B: Subgroup) -> Optional[int]:
    """First g in G (canonical order) with g A g^-1 = B, or None."""
    G = as_subgroup(G)
    if A.order != B.order:
        return None
    parent = G.parent
    keys = {_key(parent.table[e]) for e in B.elements}
    mask = np.ones(G.order, dtype=bool)
    for a in A.generators:
        conj = _conjugates(parent, G.elements, a)
        mask &= np.fromiter((_key(row) in keys for row in conj), dtype=bool, count=len(conj))
    hits = np.flatnonzero(mask)
    return int(G.elements[hits[0]]) if len(hits) else None


@dataclass(frozen=True)
class Embedding:
    """Inclusion of a factor group into a direct product."""

    source: Group
    target: Group
    offset: int

    def pair_rows(self, row: np.ndarray) -> np.ndarray:
        full = np.arange(self.target.degree, dtype=np.int32)
        full[self.offset:self.offset + self.source.degree] = row + self.offset
        return full

    def __call__(self, g: int) -> int:
        return self.target.index(self.pair_rows(self.source.table[g]))

    def image(self, S: Subgroup) -> Subgroup:
        return Subgroup.generated(self.target, tuple(self(s) for s in S.generators))


def direct_product(G: Group, H: Group, name: str = "") -> Tuple[Group, Embedding, Embedding]:
    d1, d2 = G.degree, H.degree
    gens: List[Perm] = []
    for g in G.generators:
        gens.append(Perm(g.images + tuple(range(d1, d1 + d2))))
    for h in H.generators:
        gens.append(Perm(tuple(range(d1)) + tuple(i + d1 for i in h.images)))
    product = group_from_generators(gens, name=name or f"{G.name}x{H.name}")
    return product, Embedding(G, product, 0), Embedding(H, product, d1)


@dataclass(frozen=True)
class Identification:
    """An isomorphism between a subgroup of one group and a subgroup of another."""

    source: Subgroup
    target: Subgroup
    mapping: Dict[int, int] = field(repr=False, compare=False)

    def __call__(self, u: int) -> int:
        return self.mapping[u]

    def image(self, S: Subgroup) -> Subgroup:
        return Subgroup.generated(self.target.parent, tuple(self.mapping[s] for s in S.generators))

    def inverse(self) -> "Identification":
        return Identification(self.target, self.source, {v: k for k, v in self.mapping.items()})


def identify(source: Subgroup, source_gens: Sequence[int], target: Subgroup, target_gens: Sequence[int]) -> Identification:
    """Extend source_gens[i] -> target_gens[i] to an isomorphism, or raise."""
    if len(source_gens) != len(target_gens):
        raise IdentificationError("generator lists differ in length")
    G, H = source.parent, target.parent
    mapping = {0: 0}
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for a, b in zip(source_gens, target_gens):
            left = G.mul(a, u)
            right = H.mul(b, mapping[u])
            if left in mapping:
                if mapping[left] != right:
                    raise IdentificationError("generator assignment does not extend to a homomorphism")
                continue
            mapping[left] = right
            queue.append(left)
    if set(mapping) != set(source.members) or set(mapping.values()) != set(target.members):
        raise IdentificationError("generator assignment is not a bijection between the subgroups")
    return Identification(source, target, mapping)


def identity_identification(P: Subgroup) -> Identification:
    return Identification(P, P, {u: u for u in P.elements})


def delta_subgroup(embed_l: Embedding, embed_r: Embedding, P: Subgroup, identification: Optional[Identification] = None) -> Subgroup:
    """ΔP = {(u, φ(u))} inside the product; φ defaults to the identity."""
    phi: Callable[[int], int] = identification if identification is not None else (lambda u: u)
    product = embed_l.target
    table_l = embed_l.source.table
    table_r = embed_r.source.table
    gens = []
    for u in P.generators:
        row = embed_l.pair_rows(table_l[u])
        row[embed_r.offset:] = table_r[phi(u)] + embed_r.offset
        gens.append(product.index(row))
    delta = Subgroup.generated(product, tuple(gens))
    if delta.order != P.order:
        raise IdentificationError("identification is not a homomorphism: |ΔP| != |P|")
    return delta


_CYCLE = re.compile(r"\(([^()]*)\)")


def parse_group_text(text: str, name: str = "") -> Group:
    """Read 'degree d' then one generator per line in 0-based cycle notation."""
    degree: Optional[int] = None
    gens: List[Perm] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if degree is None:
            parts = line.split()
            if len(parts) != 2 or parts[0] != "degree" or not parts[1].isdigit():
                raise GroupParseError(line_no, raw, "expected 'degree <d>'")
            degree = int(parts[1])
            continue
        body = _CYCLE.sub("", line).strip()
        if body:
            raise GroupParseError(line_no, raw, "unexpected text outside cycles")
        try:
            cycles = [tuple(int(tok) for tok in m.group(1).split()) for m in _CYCLE.finditer(line)]
            gens.append(Perm.from_cycles(degree, cycles))
        except ValueError as exc:
            raise GroupParseError(line_no, raw, str(exc)) from exc
    if degree is None:
        raise GroupParseError(0, "", "missing 'degree' line")
    if not gens:
        gens.append(Perm.identity(degree))
    return group_from_generators(gens, name=name)


def load_group_file(path: str) -> Group:
    with open(path, "r", encoding="utf-8") as handle:
        text = handle.read()
    return parse_group_text(text, name=path)


__all__ = [
    "Perm",
    "Group",
    "Subgroup",
    "GSet",
    "QuotientMap",
    "Embedding",
    "Identification",
    "compose",
    "group_from_generators",
    "centralizer",
    "normalizer",
    "center",
    "sylow2",
    "o_odd",
    "coset_action",
    "quotient_group",
    "subgroups_all",
    "maximal_subgroups",
    "maximal_subgroups_2group",
    "frattini_2group",
    "are_conjugate",
    "join",
    "intersection",
    "is_normal",
    "conjugacy_class",
    "conjugate_subgroup",
    "normal_closure",
    "two_part",
    "as_subgroup",
    "identity_identification",
    "direct_product",
    "delta_subgroup",
    "identify",
    "parse_group_text",
    "load_group_file",
]

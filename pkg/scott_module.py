from __future__ import annotations

from dataclasses import dataclass
from typing import List

import numpy as np

from config import DEFAULT_SEED, BrauerForgeError
from linalg_module import GF2, FieldSpec, Subspace, multiply
from logger import log_error, log_info
from modrep_module import Representation, Summand, coinvariants_dimension, decompose, fixed_points, perm_module
from perm_module import GroupLike, Subgroup, as_subgroup, coset_action


class ScottUniquenessError(BrauerForgeError):
    pass


@dataclass(frozen=True, eq=False)
class ScottModule:
    """Sc(G, H): the summand of k[G/H] containing the orbit sum."""

    summand: Summand
    group: Subgroup
    subgroup: Subgroup
    permutation_module: Representation

    @property
    def rep(self) -> Representation:
        return self.summand.rep

    @property
    def dimension(self) -> int:
        return self.summand.dimension


def scott(G: GroupLike, H: Subgroup, fld: FieldSpec = GF2, seed: int = DEFAULT_SEED) -> ScottModule:
    G = as_subgroup(G)
    gset = coset_action(G, H)
    M = perm_module(gset, fld, name=f"k[{G.parent.name or 'G'}/H{H.order}]")
    summands = decompose(M, seed=seed)
    ones = np.ones(M.dimension, dtype=np.uint8)
    hits: List[Summand] = [s for s in summands if s.image().contains_vector(ones)]
    if len(hits) != 1:
        log_error("Scott summand of k[G/H] (|G|=%s, |H|=%s) is not unique: %s candidates", G.order, H.order, len(hits))
        raise ScottUniquenessError(f"{len(hits)} summands contain the orbit sum")
    chosen = hits[0]
    fixed = fixed_points(chosen.rep, G)
    if not fixed.dim:
        raise ScottUniquenessError("Scott summand has no G-fixed vector")
    log_info("Sc(|G|=%s, |H|=%s): dim %s of %s", G.order, H.order, chosen.dimension, M.dimension)
    return ScottModule(summand=chosen, group=G, subgroup=H, permutation_module=M)


def scott_has_trivial_top(S: ScottModule) -> bool:
    return module_has_trivial_top(S.rep)


def module_has_trivial_top(M: Representation) -> bool:
    """A surjection M -> k exists iff the coinvariants are nonzero."""
    return coinvariants_dimension(M) > 0


def fixed_line_in_image(S: ScottModule) -> Subspace:
    """(k[G/H])^G intersected with the Scott summand's image."""
    return fixed_points(S.permutation_module, S.group).intersection(S.summand.image())


def orbit_sum_coordinates(S: ScottModule) -> np.ndarray:
    ones = np.ones(S.permutation_module.dimension, dtype=np.uint8).reshape(-1, 1)
    return multiply(S.summand.projection, ones, S.rep.fld)[:, 0]


__all__ = [
    "ScottModule",
    "ScottUniquenessError",
    "scott",
    "scott_has_trivial_top",
    "module_has_trivial_top",
    "fixed_line_in_image",
    "orbit_sum_coordinates",
]

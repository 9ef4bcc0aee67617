import sys
from pathlib import Path

import numpy as np
import pytest

PROJECT_ROOT = Path(__file__).resolve().parents[1]
if str(PROJECT_ROOT) not in sys.path:
    sys.path.insert(0, str(PROJECT_ROOT))

from catalog_module import catalog  # noqa: E402
from linalg_module import GF2, as_matrix, identity, multiply  # noqa: E402
from modrep_module import (  # noqa: E402
    FIELD_EXTENSION,
    AlgebraBasis,
    Representation,
    brauer_quotient,
    coinvariants_dimension,
    decompose,
    direct_sum,
    end_algebra,
    fixed_points,
    hom_space,
    is_indecomposable,
    local_status,
    modules_isomorphic,
    perm_module,
    radical,
    regular_module,
    restrict,
    trivial_module,
)
from perm_module import Perm, coset_action, group_from_generators, subgroups_all  # noqa: E402


def _perm_module(name, H=None):
    cg = catalog(name)
    G = cg.group.whole
    H = H if H is not None else cg.group.trivial()
    return perm_module(coset_action(G, H))


@pytest.fixture(scope="module")
def c2():
    return group_from_generators([Perm.from_cycles(2, [(0, 1)])], name="c2").whole


@pytest.fixture(scope="module")
def c3_field_extension():
    c3 = group_from_generators([Perm.from_cycles(3, [(0, 1, 2)])], name="c3").whole
    companion = as_matrix([[0, 1], [1, 1]])
    return Representation(c3, GF2, 2, (companion,), name="GF(4) as kC3")


def test_regular_kc2_is_indecomposable(c2):
    M = regular_module(c2)
    E = end_algebra(M)
    assert E.dim == 2
    assert radical(E).dim == 1
    ok, cert = is_indecomposable(M)
    assert ok
    assert cert["dim_top"] == 1


def test_upper_triangular_radical():
    e11 = as_matrix([[1, 0], [0, 0]])
    e12 = as_matrix([[0, 1], [0, 0]])
    e22 = as_matrix([[0, 0], [0, 1]])
    A = AlgebraBasis.from_matrices(np.array([e11, e12, e22]), GF2, size=2)
    assert A.is_closed()
    J = radical(A)
    assert J.dim == 1
    assert J.contains(e12)


def test_k_plus_k_is_decomposable(c2):
    k = trivial_module(c2)
    M = direct_sum(k, k)
    ok, _ = is_indecomposable(M)
    assert not ok
    assert [s.dimension for s in decompose(M)] == [1, 1]


def test_zero_module_is_not_indecomposable(c2):
    M = Representation(c2, GF2, 0, (np.zeros((0, 0), dtype=np.uint8),))
    ok, cert = is_indecomposable(M)
    assert not ok and cert["reason"] == "zero module"


def test_field_extension_is_not_absolutely_indecomposable(c3_field_extension):
    M = c3_field_extension
    status, cert = local_status(end_algebra(M))
    assert status == FIELD_EXTENSION
    assert cert["dim_top"] == 2
    ok, cert = is_indecomposable(M)
    assert not ok
    assert "extended" in cert
    summands = decompose(M)
    assert [s.dimension for s in summands] == [2]
    assert summands[0].certificate["absolutely_indecomposable"] is False
    assert "extended" in summands[0].certificate


def test_s3_on_three_points_splits_as_one_plus_two():
    M = _perm_module("s3", catalog("s3").group.subgroup((catalog("s3").group.generator_indices[1],)))
    summands = decompose(M)
    assert [s.dimension for s in summands] == [1, 2]
    k = trivial_module(M.group)
    assert modules_isomorphic(summands[0].rep, k) is True


def test_decomposition_soundness_regular_s3():
    M = _perm_module("s3")
    summands = decompose(M, seed=3)
    assert sum(s.dimension for s in summands) == M.dimension == 6
    total = np.zeros((6, 6), dtype=np.uint8)
    for i, s in enumerate(summands):
        s.check()
        total ^= s.idempotent
        for j, t in enumerate(summands):
            if i != j:
                assert not multiply(s.idempotent, t.idempotent).any()
        ok, cert = is_indecomposable(s.rep)
        assert ok and cert["dim_top"] == 1
        assert s.certificate["absolutely_indecomposable"] is True
        assert [u.dimension for u in decompose(s.rep)] == [s.dimension]
    assert np.array_equal(total, identity(6))


def test_decomposition_is_deterministic():
    M = _perm_module("a4", catalog("a4").sylow)
    first = decompose(M, seed=11)
    second = decompose(M, seed=11)
    assert [s.dimension for s in first] == [s.dimension for s in second]
    for a, b in zip(first, second):
        assert np.array_equal(a.idempotent, b.idempotent)
    other_seed = decompose(M, seed=12)
    assert [s.dimension for s in other_seed] == [s.dimension for s in first]


def test_hom_space_and_fixed_points():
    cg = catalog("gl23")
    M = _perm_module("gl23", cg.sylow)
    k = trivial_module(M.group)
    assert hom_space(k, M).shape[0] == 1
    assert fixed_points(M, M.group).dim == 1
    assert coinvariants_dimension(M) == 1
    assert end_algebra(M).dim == hom_space(M, M).shape[0]


def test_representation_validates():
    M = _perm_module("a4")
    assert M.validate(np.random.default_rng(0), samples=20)
    R = restrict(M, catalog("a4").sylow)
    assert R.group.order == 4 and R.dimension == 12


def test_modules_isomorphic_distinguishes(c2):
    assert modules_isomorphic(regular_module(c2), direct_sum(trivial_module(c2), trivial_module(c2))) is False
    assert modules_isomorphic(regular_module(c2), regular_module(c2)) is True


def _broue_triples():
    triples = []
    gl = catalog("gl23")
    for H in (gl.sylow, gl.tags["klein"]):
        for Q in subgroups_all(gl.sylow):
            triples.append(("gl23", H, Q))
    a4 = catalog("a4")
    for Q in subgroups_all(a4.sylow):
        triples.append(("a4", a4.group.trivial(), Q))
    return triples


def test_broue_fixed_point_dimension():
    triples = _broue_triples()
    assert len(triples) >= 20
    for name, H, Q in triples:
        G = catalog(name).group.whole
        gset = coset_action(G, H)
        M = perm_module(gset)
        BrQ, _ = brauer_quotient(M, Q)
        assert BrQ.dimension == len(gset.fixed_points(Q)), (name, H.order, Q.order)


def test_brauer_quotient_at_trivial_subgroup_is_whole_module():
    M = _perm_module("s3")
    BrQ, _ = brauer_quotient(M, M.group.parent.trivial())
    assert BrQ.dimension == M.dimension


def test_brauer_quotient_is_additive():
    gl = catalog("gl23")
    G = gl.group.whole
    M = perm_module(coset_action(G, gl.tags["klein"]))
    N = perm_module(coset_action(G, gl.sylow))
    S = direct_sum(M, N)
    for Q in subgroups_all(gl.sylow):
        left, _ = brauer_quotient(S, Q)
        parts = brauer_quotient(M, Q)[0].dimension + brauer_quotient(N, Q)[0].dimension
        assert left.dimension == parts, Q.order


@pytest.mark.parametrize("name,tag", [("gl23", "klein"), ("gl23", "sylow"), ("a4", "sylow")])
def test_brauer_quotient_is_downward_closed(name, tag):
    cg = catalog(name)
    M = perm_module(coset_action(cg.group.whole, cg.tags[tag]))
    subs = subgroups_all(cg.sylow)
    nonzero = {Q.members for Q in subs if brauer_quotient(M, Q)[0].dimension}
    for Q in subs:
        if Q.members not in nonzero:
            continue
        for R in subs:
            if R.is_subgroup_of(Q):
                assert R.members in nonzero, (Q.order, R.order)

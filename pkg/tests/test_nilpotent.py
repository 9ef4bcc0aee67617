import sys
from pathlib import Path

import pytest

PROJECT_ROOT = Path(__file__).resolve().parents[1]
if str(PROJECT_ROOT) not in sys.path:
    sys.path.insert(0, str(PROJECT_ROOT))

from catalog_module import catalog  # noqa: E402
from nilpotent_module import (  # noqa: E402
    AUT_TWO_GROUP,
    S3_LIFT,
    PreconditionError,
    find_HQ,
    is_two_nilpotent,
    quotient_order,
    s3_lift,
)
from perm_module import Perm, center, subgroups_all  # noqa: E402
from semidihedral_module import QUATERNION, classify_subgroup  # noqa: E402


@pytest.fixture(scope="module")
def gl23():
    return catalog("gl23")


def _quaternion(cg):
    return next(Q for Q in subgroups_all(cg.sylow) if Q.order == 8 and classify_subgroup(Q).tag == QUATERNION)


def test_is_two_nilpotent():
    assert is_two_nilpotent(catalog("s3").group.whole)
    assert is_two_nilpotent(catalog("sd16").group.whole)
    assert is_two_nilpotent(catalog("sd16xc3").group.whole)
    assert not is_two_nilpotent(catalog("a4").group.whole)
    assert not is_two_nilpotent(catalog("gl23").group.whole)


def test_s3_lift_in_s3():
    s3 = catalog("s3")
    t = s3.group.generator_indices[1]
    H = s3_lift(s3.group.whole, s3.group.trivial(), t)
    assert H.order == 6 and t in H


def test_s3_lift_in_c2_times_s3():
    cg = catalog("c2xs3")
    s3 = catalog("s3").group
    t = cg.embeddings[1](s3.generator_indices[1])
    H = s3_lift(cg.group.whole, cg.tags["c2"], t)
    assert H.order == 6 and t in H
    assert H == cg.tags["s3"]


def test_s3_lift_in_d12():
    cg = catalog("d12")
    G = cg.group
    core = center(G.whole)
    assert core.order == 2
    t = G.index(Perm(tuple((-i) % 6 for i in range(6))))
    H = s3_lift(G.whole, core, t)
    assert H.order == 6 and t in H


def test_s3_lift_rejects_t_inside_core():
    cg = catalog("d12")
    core = center(cg.group.whole)
    z = next(g for g in core.elements if g != 0)
    with pytest.raises(PreconditionError):
        s3_lift(cg.group.whole, core, z)


def test_find_hq_quaternion_takes_s3_lift(gl23):
    Q = _quaternion(gl23)
    assert quotient_order(gl23.group.whole, Q) == 6
    witness = find_HQ(gl23.group.whole, gl23.sylow, Q)
    assert witness.construction_path == S3_LIFT
    assert witness.valid and witness.sylow_check
    assert witness.H_Q.order == 48 and witness.exponent == 0


def test_find_hq_klein_quotient(gl23):
    Q = gl23.tags["klein"]
    order = quotient_order(gl23.group.whole, Q)
    assert 6 % order == 0 and order % 2 == 0
    witness = find_HQ(gl23.group.whole, gl23.sylow, Q)
    assert witness.valid
    assert witness.index & (witness.index - 1) == 0


def test_find_hq_whole_sylow(gl23):
    witness = find_HQ(gl23.group.whole, gl23.sylow, gl23.sylow)
    assert witness.construction_path == AUT_TWO_GROUP
    assert witness.H_Q == gl23.sylow
    assert witness.quotient_order == 1


def test_find_hq_needs_two_nilpotent_centralizer(gl23):
    with pytest.raises(PreconditionError):
        find_HQ(gl23.group.whole, gl23.sylow, center(gl23.sylow))


def test_find_hq_in_sd16_times_c3():
    cg = catalog("sd16xc3")
    for Q in subgroups_all(cg.sylow):
        witness = find_HQ(cg.group.whole, cg.sylow, Q)
        assert witness.valid, witness.checks

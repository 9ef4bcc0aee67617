import sys
from pathlib import Path

import pytest

PROJECT_ROOT = Path(__file__).resolve().parents[1]
if str(PROJECT_ROOT) not in sys.path:
    sys.path.insert(0, str(PROJECT_ROOT))

from catalog_module import catalog  # noqa: E402
from fusion_module import (  # noqa: E402
    FusionError,
    check_fusion_tables,
    class_count,
    fully_normalized_representatives,
    fusion_equal,
    fusion_system,
    is_fully_normalized,
    is_saturated,
    pull_back,
)
from modrep_module import end_algebra  # noqa: E402
from perm_module import identify  # noqa: E402
from scott_module import (  # noqa: E402
    fixed_line_in_image,
    orbit_sum_coordinates,
    scott,
    scott_has_trivial_top,
)
from semidihedral_module import QUATERNION, classify_subgroup  # noqa: E402


@pytest.fixture(scope="module")
def gl_fusion():
    gl = catalog("gl23")
    return fusion_system(gl.group.whole, gl.sylow)


@pytest.fixture(scope="module")
def sd_fusion():
    sd = catalog("sd16")
    return fusion_system(sd.group.whole, sd.sylow)


def test_scott_of_sylow_in_gl23_is_trivial():
    gl = catalog("gl23")
    S = scott(gl.group.whole, gl.sylow)
    assert S.dimension == 1
    assert S.permutation_module.dimension == 3
    assert scott_has_trivial_top(S)


def test_scott_of_s3_over_trivial_is_projective_cover():
    s3 = catalog("s3")
    S = scott(s3.group.whole, s3.group.trivial())
    assert S.dimension == 2
    assert fixed_line_in_image(S).dim == 1
    assert orbit_sum_coordinates(S).any()


def test_scott_of_p_over_p():
    sd = catalog("sd16")
    S = scott(sd.group.whole, sd.sylow)
    assert S.dimension == 1


def test_scott_depends_only_on_module_not_seed():
    a4 = catalog("a4")
    dims = {scott(a4.group.whole, a4.tags["sylow"], seed=s).dimension for s in (0, 1, 2)}
    assert dims == {1}


@pytest.mark.slow
def test_flagship_scott_module():
    product = catalog("gl23xgl23")
    S = scott(product.group.whole, product.tags["delta"])
    assert S.permutation_module.dimension == 144
    assert S.dimension == 48
    assert end_algebra(S.rep).dim == 8


def test_gl23_fusion_is_saturated(gl_fusion):
    ok, witnesses = is_saturated(gl_fusion)
    assert ok, witnesses
    assert check_fusion_tables(gl_fusion) == []


def test_sd16_fusion_is_saturated(sd_fusion):
    ok, _ = is_saturated(sd_fusion)
    assert ok
    assert len(fully_normalized_representatives(sd_fusion)) == 10
    assert is_fully_normalized(sd_fusion, catalog("sd16").sylow)


def test_class_counts(gl_fusion, sd_fusion):
    assert class_count(gl_fusion, 2) == 2
    assert class_count(gl_fusion, 4) == 1
    assert class_count(sd_fusion, 2) == 2
    assert class_count(sd_fusion, 4) == 2


def test_fusion_equal_is_reflexive(gl_fusion, sd_fusion):
    assert fusion_equal(gl_fusion, gl_fusion)
    assert fusion_equal(sd_fusion, sd_fusion)


def test_fusion_of_p_differs_from_gl23(gl_fusion, sd_fusion):
    gl = catalog("gl23")
    sd = catalog("sd16")
    ident = identify(gl.sylow, gl.sd_generators, sd.sylow, sd.sd_generators)
    pulled = pull_back(sd_fusion, ident)
    assert pulled.P == gl.sylow
    assert not fusion_equal(gl_fusion, pulled)
    with pytest.raises(FusionError):
        fusion_equal(gl_fusion, sd_fusion)


def test_corrupted_fusion_table_is_unsaturated(gl_fusion):
    q8 = next(Q for Q in gl_fusion.subgroups if Q.order == 8 and classify_subgroup(Q).tag == QUATERNION)
    inner = gl_fusion.aut_P(q8)
    outer = next(t for t in gl_fusion.automorphisms(q8) if t not in inner)
    corrupted = gl_fusion.without_map(q8, q8, outer)
    ok, witnesses = is_saturated(corrupted)
    assert not ok
    assert witnesses
    assert check_fusion_tables(corrupted)

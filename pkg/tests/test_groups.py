import sys
from pathlib import Path

import numpy as np
import pytest

PROJECT_ROOT = Path(__file__).resolve().parents[1]
if str(PROJECT_ROOT) not in sys.path:
    sys.path.insert(0, str(PROJECT_ROOT))

from catalog_module import CATALOG, CatalogError, catalog, load_source  # noqa: E402
from perm_module import (  # noqa: E402
    GroupParseError,
    Perm,
    are_conjugate,
    center,
    centralizer,
    compose,
    conjugate_subgroup,
    coset_action,
    delta_subgroup,
    direct_product,
    identify,
    is_normal,
    maximal_subgroups_2group,
    normalizer,
    o_odd,
    parse_group_text,
    quotient_group,
    subgroups_all,
    sylow2,
)
from report_module import PASS  # noqa: E402
from semidihedral_module import (  # noqa: E402
    CYCLIC,
    KLEIN,
    SEMIDIHEDRAL,
    classify_subgroup,
    evaluate_word,
    make_semidihedral,
    semidihedral_generators,
    structure_report,
)


@pytest.fixture(scope="module")
def sd16():
    return make_semidihedral(4)


@pytest.fixture(scope="module")
def gl23():
    return catalog("gl23")


def test_perm_from_cycles_and_order():
    p = Perm.from_cycles(5, [(0, 1, 2), (3, 4)])
    assert p(0) == 1 and p(2) == 0 and p(3) == 4
    assert p.order() == 6
    assert Perm.identity(4).is_identity()


def test_identity_is_handle_zero(gl23):
    G = gl23.group
    assert G.elements[0].is_identity()
    g = G.generator_indices[0]
    assert G.mul(g, G.inv(g)) == 0


def test_sd16_has_fifteen_subgroups(sd16):
    subs = subgroups_all(sd16.P)
    assert len(subs) == 15
    assert [S.order for S in subs].count(4) == 5
    assert [S.order for S in subs].count(8) == 3


def test_maximal_subgroups_of_sd16(sd16):
    maximal = maximal_subgroups_2group(sd16.P)
    assert len(maximal) == 3
    assert all(M.order == 8 for M in maximal)


def test_center_and_normalizer(sd16):
    P = sd16.P
    Z = center(P)
    assert Z.order == 2 and sd16.zi in Z
    y = sd16.group.subgroup((sd16.yi,))
    assert normalizer(P, y).order == 4


def test_o_odd_values():
    assert o_odd(catalog("s3").group.whole).order == 3
    assert o_odd(catalog("a4").group.whole).order == 1
    assert o_odd(catalog("sd16").group.whole).order == 1
    assert o_odd(catalog("sd16xc3").group.whole).order == 3


def test_sylow_orders():
    assert sylow2(catalog("gl23").group.whole).order == 16
    assert catalog("c2xs3").sylow.order == 4
    assert catalog("psl33").sylow.order == 16


def test_coset_action_degree(gl23):
    gset = coset_action(gl23.group.whole, gl23.sylow)
    assert gset.degree == 3
    assert gset.fixed_points(gl23.sylow) == [0]


def test_quotient_group_of_s3():
    s3 = catalog("s3").group
    C3 = o_odd(s3.whole)
    assert is_normal(s3.whole, C3)
    pi = quotient_group(s3.whole, C3)
    assert pi.group.order == 2
    assert pi.preimage(pi.group.trivial()) == C3


def test_delta_subgroup_is_diagonal(gl23):
    product, e1, e2 = direct_product(gl23.group, gl23.group)
    delta = delta_subgroup(e1, e2, gl23.sylow)
    assert product.order == 48 * 48
    assert delta.order == 16
    assert coset_action(product.whole, delta).degree == 144


def test_identify_semidihedral_sylows():
    gl = catalog("gl23")
    sd = catalog("sd16")
    ident = identify(gl.sylow, gl.sd_generators, sd.sylow, sd.sd_generators)
    assert ident.image(gl.sylow) == sd.sylow
    assert ident.inverse()(ident(gl.sd_generators[0])) == gl.sd_generators[0]


def test_parse_group_text_roundtrip():
    G = parse_group_text("degree 3\n(0 1 2)\n(0 1)  # transposition\n", name="s3")
    assert G.order == 6


def test_parse_group_text_names_bad_line():
    with pytest.raises(GroupParseError) as excinfo:
        parse_group_text("degree 3\n(0 1 2)\n(0 1) junk\n")
    assert excinfo.value.line_no == 3


def test_load_source_reads_group_file(tmp_path):
    path = tmp_path / "d8.txt"
    path.write_text("degree 4\n(0 1 2 3)\n(0 2)\n", encoding="utf-8")
    cg = load_source(str(path))
    assert cg.order == 8
    assert cg.sylow.order == 8
    assert not cg.is_semidihedral


@pytest.mark.parametrize("n", [4, 5, 6])
def test_structure_report_passes(n):
    report = structure_report(n)
    assert report.verdict == PASS
    names = {h.name for h in report.hypotheses}
    assert {"three_maximal_subgroups", "klein_fours_one_class", "xy_self_centralizing"} <= names


def test_make_semidihedral_rejects_small_n():
    with pytest.raises(ValueError):
        make_semidihedral(3)


def test_order_of_xiy_parity(sd16):
    g = sd16.group
    for i in range(8):
        assert (g.element_order(sd16.element(i, 1)) == 2) == (i % 2 == 0)


def test_classify_tagged_subgroups(sd16):
    cg = catalog("sd16")
    assert classify_subgroup(cg.tags["klein"]).tag == KLEIN
    assert classify_subgroup(cg.tags["c4a"]).tag == CYCLIC
    assert classify_subgroup(cg.tags["c4b"]).order == 4
    assert classify_subgroup(cg.tags["P"]).tag == SEMIDIHEDRAL
    assert centralizer(cg.sylow, cg.tags["c4b"]) == cg.tags["c4b"]


def test_evaluate_word(sd16):
    g = sd16.group
    assert evaluate_word(g, sd16.xi, sd16.yi, "x^2") == g.power(sd16.xi, 2)
    assert evaluate_word(g, sd16.xi, sd16.yi, "xy") == g.mul(sd16.xi, sd16.yi)
    assert evaluate_word(g, sd16.xi, sd16.yi, "x^8") == 0
    with pytest.raises(ValueError):
        evaluate_word(g, sd16.xi, sd16.yi, "xq")


def test_gl23_sylow_is_semidihedral(gl23):
    assert gl23.order == 48
    assert gl23.sylow_type == "SD16"
    assert semidihedral_generators(gl23.sylow) is not None


@pytest.mark.parametrize(
    "name,order",
    [("sd16", 16), ("sd32", 32), ("s3", 6), ("a4", 12), ("c2xc2", 4), ("q8", 8), ("d12", 12), ("c2xs3", 12)],
)
def test_catalog_orders(name, order):
    assert catalog(name).order == order == CATALOG[name].expected_order


@pytest.mark.slow
def test_catalog_m11_order():
    assert catalog("m11").order == 7920
    assert catalog("m11").sylow_type == "SD16"


def test_catalog_unknown_name():
    with pytest.raises(CatalogError):
        catalog("badname")


def test_catalog_subgroup_specs(gl23):
    assert gl23.subgroup("z") == center(gl23.sylow)
    assert gl23.subgroup("1").order == 1
    assert gl23.subgroup("x^4").order == 2
    with pytest.raises(CatalogError):
        catalog("s3").subgroup("klein")


def test_compose_applies_right_factor_first():
    p = Perm.from_cycles(3, [(0, 1)])
    q = Perm.from_cycles(3, [(1, 2)])
    assert compose(p, q) == Perm.from_cycles(3, [(0, 1, 2)])
    assert compose(q, p) == Perm.from_cycles(3, [(0, 2, 1)])
    assert compose(p, p.inverse()).is_identity()


def test_klein_fours_are_conjugate_in_sd16():
    cg = catalog("sd16")
    kleins = [S for S in subgroups_all(cg.sylow) if S.order == 4 and classify_subgroup(S).tag == KLEIN]
    assert len(kleins) == 2
    g = are_conjugate(cg.sylow, kleins[0], kleins[1])
    assert g is not None


@pytest.mark.parametrize("name", ["s3", "a4", "c2xc2", "q8", "d12", "sd16", "gl23"])
def test_every_catalog_group_names_its_sylow_p(name):
    cg = catalog(name)
    assert cg.subgroup("P") == cg.sylow


def test_are_conjugate_is_an_equivalence(gl23):
    G = gl23.group.whole
    subs = subgroups_all(gl23.sylow)
    rng = np.random.default_rng(9)
    sample = [subs[i] for i in sorted(rng.choice(len(subs), size=9, replace=False))]
    related = {}
    for A in sample:
        for B in sample:
            g = are_conjugate(G, A, B)
            related[A.members, B.members] = g is not None
            if g is not None:
                assert conjugate_subgroup(g, A) == B
    for A in sample:
        assert related[A.members, A.members]
        for B in sample:
            assert related[A.members, B.members] == related[B.members, A.members]
            for C in sample:
                if related[A.members, B.members] and related[B.members, C.members]:
                    assert related[A.members, C.members]


def test_delta_classes_match_sylow_classes(gl23):
    product, e1, e2 = direct_product(gl23.group, gl23.group)
    H = product.whole
    G = gl23.group.whole
    subs = subgroups_all(gl23.sylow)
    deltas = [delta_subgroup(e1, e2, Q) for Q in subs]
    for i, A in enumerate(subs):
        assert deltas[i].order == A.order
        for j in range(i + 1, len(subs)):
            B = subs[j]
            if A.order != B.order:
                continue
            in_g = are_conjugate(G, A, B) is not None
            in_product = are_conjugate(H, deltas[i], deltas[j]) is not None
            assert in_g == in_product, (A.order, i, j)

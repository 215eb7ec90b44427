import json

import pytest
from hypothesis import given, settings, strategies as st

from fusionkit import catalog, structure
from fusionkit.groups import PreconditionError
from fusionkit.saturation import decode_element, encode_element

from conftest import entry, system

FAST = [n for n in catalog.CATALOG_NAMES if not n.startswith(("exotic3", "product"))]


@pytest.mark.parametrize("name", catalog.CATALOG_NAMES)
def test_expected_invariants(name):
    e = entry(name)
    F = e.fusion
    exp = e.expected
    assert F.S.order == exp["order"]
    if "aut_S" in exp:
        assert F.aut_order(F.S) == exp["aut_S"]
    if "aut_V" in exp:
        assert F.aut_order(F.canonical(F.meta["V"])) == exp["aut_V"]
    if "aut_W" in exp:
        assert F.aut_order(F.canonical(F.meta["W"])) == exp["aut_W"]


@pytest.mark.parametrize("name", FAST)
def test_system_json_roundtrip(name):
    F = system(name)
    doc = json.loads(json.dumps(catalog.system_to_json(F), sort_keys=True))
    back = catalog.system_from_json(doc)
    assert back.S.order == F.S.order
    assert sorted(len(C.members) for C in back.classes()) == sorted(len(C.members) for C in F.classes())
    for P in F.subgroups():
        Q = back.group.subgroup(decode_element(back.group, encode_element(F.group, a)) for a in P.gens)
        assert back.aut_order(back.canonical(Q)) == F.aut_order(P)


def test_negative_control_roundtrip_from_package_data():
    from importlib import resources
    text = resources.files("fusionkit").joinpath("data").joinpath("negative_control_d16.json").read_text()
    F = catalog.system_from_json(json.loads(text))
    ref = catalog.build_negative_control()
    assert F.S.order == 16
    assert F.aut_order(F.S) == ref.aut_order(ref.S) == 16


@pytest.mark.parametrize("bad", ["nosuch", "so3", "so3:l=x", "so2:p=4,l=2", "sullivan:p=5,n=3,l=2",
                                 "sullivan:p=2,n=1,l=2", "product:so3:l=2", "so2:p"])
def test_bad_names(bad):
    with pytest.raises(PreconditionError):
        catalog.build(bad)


def test_product_entry():
    F = system("product:so3:l=3&so2:p=2,l=3")
    assert F.S.order == 128
    assert structure.rank_of(F) == 2


def test_exotic_entry():
    e = entry("exotic3:l=2")
    F = e.fusion
    assert F.S.order == 243
    assert len(catalog.gamma_group(2)) == e.expected["gamma_order"] == 48
    assert structure.rank_of(F) == 2


def test_builders_for_levels():
    assert catalog.builder_for("so3")(2).fusion.S.order == 8
    assert catalog.builder_for("so2:p=5")(1).fusion.S.order == 5
    assert catalog.builder_for("sullivan:p=7,n=3")(1).fusion.aut_order(
        catalog.builder_for("sullivan:p=7,n=3")(1).fusion.S) == 3
    with pytest.raises(PreconditionError):
        catalog.builder_for("nosuch")


def test_generating_subset_keeps_the_group(so3):
    V = so3.canonical(so3.meta["V"])
    homs = so3.aut_group(V)
    sub = catalog.generating_subset(homs)
    assert len(sub) <= 2
    from fusionkit.fusion import generate_fusion
    assert generate_fusion(V, sub, p=2).aut_order(V) == 6


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([(3, 2), (5, 2), (5, 4), (7, 2), (7, 3), (7, 6), (13, 4), (13, 12)]), st.integers(1, 4))
def test_hensel_root_has_exact_order(pn, level):
    p, n = pn
    z = catalog.hensel_root_of_unity(p, n, level)
    mod = p ** level
    assert pow(z, n, mod) == 1
    assert all(pow(z, d, mod) != 1 for d in range(1, n))
    # compatible across levels
    assert catalog.hensel_root_of_unity(p, n, level + 1) % mod == z

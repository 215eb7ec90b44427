import json

import pytest
from hypothesis import given, settings, strategies as st

from fusionkit import catalog
from fusionkit.fusion import generate_fusion, group_fusion
from fusionkit.groups import GroupHom, PreconditionError, cyclic_group, direct_product, sylow_subgroup
from fusionkit.saturation import (
    check_sat1,
    check_saturation,
    check_saturation_alt,
    decode_element,
    decode_hom,
    decode_subgroup,
    encode_element,
    encode_hom,
    encode_subgroup,
    replay_witness,
    stability_check,
)

from conftest import system


def _klein():
    G = direct_product(cyclic_group(2), cyclic_group(2))
    a, b = G.whole.gens
    return G, a, b


@pytest.mark.parametrize("label, p", [("sym4", 2), ("sym4", 3), ("gl2_3", 2), ("d12", 2), ("d12", 3),
                                      ("sl2_3", 2), ("sl2_3", 3)])
def test_group_fusion_systems_are_saturated(label, p):
    G = catalog.oracle_group(label)
    F = group_fusion(G, sylow_subgroup(G, p), p=p)
    assert check_saturation(F).passed
    assert check_saturation_alt(F).passed


def test_klein_four_with_order_three_automorphism_is_saturated():
    # the 2-fusion of Alt4
    G, a, b = _klein()
    F = generate_fusion(G.whole, [GroupHom(G.whole, G.whole, [b, G.mul(a, b)])], p=2)
    assert F.aut_order(F.S) == 3
    assert check_saturation(F).passed


def test_klein_four_with_swap_is_not_saturated():
    G, a, b = _klein()
    F = generate_fusion(G.whole, [GroupHom(G.whole, G.whole, [b, a])], p=2)
    rep = check_saturation(F)
    bad = rep.failing()
    assert bad.tag == "I"
    assert bad.witness["aut_F"] == 2 and bad.witness["aut_S"] == 1
    assert replay_witness(F, bad.to_json())
    assert not check_saturation_alt(F).passed


def test_negative_control_fails_at_axiom_i():
    F = catalog.build_negative_control()
    bad = check_saturation(F).failing()
    assert bad.tag == "I"
    assert (bad.witness["aut_F"], bad.witness["aut_S"]) == (16, 8)
    assert replay_witness(F, bad.to_json())


def test_replay_rejects_a_false_witness(so3):
    fake = {"tag": "I", "pass": False,
            "witness": {"subgroup": encode_subgroup(so3.S), "clause": "Out_S(P) is not a Sylow subgroup"}}
    assert not replay_witness(so3, fake)
    with pytest.raises(PreconditionError):
        replay_witness(so3, {"tag": "??", "witness": {}})


@pytest.mark.parametrize("name", ["so2:p=2,l=2", "so2:p=5,l=2", "so3:l=3", "su2:l=3", "sullivan:p=5,n=4,l=2"])
def test_catalog_entries_saturated(name):
    F = system(name)
    std, alt = check_saturation(F), check_saturation_alt(F)
    assert std.passed and alt.passed
    assert [a.tag for a in std.axioms] == ["I", "II", "III-stability"]
    assert [a.tag for a in alt.axioms][:2] == ["I'", "II'"]


def test_report_json_is_byte_stable(so3):
    a = check_saturation(so3).dumps(timing=False)
    b = check_saturation(so3).dumps(timing=False)
    assert a == b
    assert json.loads(a)["verdict"] == "pass"


def test_sat1_on_sym4(sym4_fusion):
    F = sym4_fusion
    reps = [c[0] for c in F.element_classes_of_order_p()]
    assert check_sat1(F, reps).passed
    # one representative is missing: clause (i) fails with a replayable witness
    rep = check_sat1(F, reps[:1])
    bad = rep.failing()
    assert bad.tag == "Sat1-i"
    assert replay_witness(F, bad.to_json())


def test_sat1_rejects_elements_of_wrong_order(su2):
    t3 = su2.group.names["t3"]
    with pytest.raises(PreconditionError):
        check_sat1(su2, [t3])


def test_stability_so3():
    rep = stability_check(catalog.builder_for("so3"), 2, "so3", [["t1", "x"]])
    assert rep.stable
    assert rep.to_json(timing=False)["millis"] == 0


@settings(max_examples=30, deadline=None)
@given(data=st.data())
def test_encoding_roundtrip(data, su2):
    G = su2.group
    a = data.draw(st.integers(0, G.order - 1))
    assert decode_element(G, encode_element(G, a)) == a
    P = data.draw(st.sampled_from(su2.subgroups()))
    assert decode_subgroup(G, json.loads(json.dumps(encode_subgroup(P)))).elements == P.elements
    f = data.draw(st.sampled_from(su2.hom_set(P, su2.S)))
    g = decode_hom(G, json.loads(json.dumps(encode_hom(f))))
    assert tuple(g.images) == tuple(f.images) and g.domain.elements == P.elements

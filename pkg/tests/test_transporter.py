import json

import pytest
from hypothesis import given, settings, strategies as st

from fusionkit import catalog, structure, transporter as tr
from fusionkit.fusion import group_fusion, inner_fusion
from fusionkit.groups import PreconditionError, sylow_subgroup

from conftest import system


@pytest.fixture(scope="module")
def s4():
    return tr.load_fixture("sigma4")


@pytest.fixture(scope="module")
def bo():
    return tr.load_fixture("binary_octahedral")


def _center_involution(T):
    G = T.group
    return G.subgroup([next(a for a in T.S.elements if G.orders[a] == 2
                            and all(G.mul(a, b) == G.mul(b, a) for b in T.S.elements))])


@pytest.mark.parametrize("name", sorted(tr.FIXTURES))
def test_shipped_fixtures_match_rebuild(name):
    assert tr.load_fixture(name).dumps() == tr.build_fixture(name).dumps()


def test_fixture_shapes(s4, bo):
    assert (len(s4.objects), len(s4.morphisms)) == (4, 88)
    assert (len(bo.objects), len(bo.morphisms)) == (6, 272)
    assert bo.group.order == 48 and bo.S.order == 16


@pytest.mark.parametrize("fixture", ["s4", "bo"])
def test_fixtures_validate(fixture, request):
    T = request.getfixturevalue(fixture)
    rep = tr.validate_transporter(T)
    assert rep.passed, rep.failing()
    assert [a.tag for a in rep.axioms][:2] == ["category", "functors"]


def test_fusion_of_fixture_is_group_fusion(s4):
    G = s4.group
    assert G.order == 24
    assert structure.same_system(s4.F, group_fusion(G, sylow_subgroup(G, 2), p=2))


def test_json_roundtrip(s4):
    back = tr.TransporterData.from_json(json.loads(s4.dumps()))
    assert back.dumps() == s4.dumps()
    assert back.sizes() == s4.sizes()


def test_corrupted_fixture_fails(s4):
    rep = tr.validate_transporter(tr.corrupt_fixture(s4))
    failing = {a.tag for a in rep.axioms if not a.passed}
    assert "A2" in failing


def test_quotient_halves_every_morphism_set(bo):
    A = _center_involution(bo)
    q = tr.quotient_transporter(bo, A)
    assert tr.validate_transporter(q).passed
    assert all(q.sizes()[key] * 2 == n for key, n in bo.sizes().items())


def test_quotient_requires_f_normal(so3):
    x = so3.group.names["x"]
    with pytest.raises(PreconditionError):
        tr.quotient_fusion(so3, so3.group.subgroup([x]))


def test_quotient_fusion_of_su2(su2):
    A = su2.group.subgroup([su2.group.names["t1"]])
    Fq = tr.quotient_fusion(su2, A)
    assert Fq.S.order == 8
    assert tr.fusion_isomorphism(Fq, system("so3:l=2")).found
    assert not tr.fusion_isomorphism(Fq, inner_fusion(Fq.S, p=2)).found


def test_isomorphism_certificates(su2, so3, bo):
    assert tr.fusion_isomorphism(bo.F, su2).found
    assert not tr.fusion_isomorphism(so3, su2).found
    with pytest.raises(PreconditionError):
        tr.fusion_isomorphism(so3, so3, cap=8)


def test_extensions(bo):
    A = _center_involution(bo)
    ext = tr.extension_from_quotient(bo, A)
    rep = tr.validate_extension(ext)
    assert rep.passed, rep.failing()
    assert tr.validate_extension(tr.trivial_extension(bo)).passed
    bad = tr.validate_extension(tr.corrupt_extension(ext))
    assert not bad.passed


def test_transporter_category_of_sl2_3():
    G = catalog.oracle_group("sl2_3")
    S = sylow_subgroup(G, 2)
    F = group_fusion(G, S, p=2)
    T = tr.transporter_category(G, S, tr.centric_objects(F), p=2)
    assert tr.validate_transporter(T).passed
    assert structure.same_system(T.F, F)


@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_composition_is_associative(data, s4):
    T = s4
    a = data.draw(st.integers(0, len(T.morphisms) - 1))
    srcs = [k for k, m in enumerate(T.morphisms) if m.target == T.morphisms[a].source]
    b = data.draw(st.sampled_from(srcs))
    cands = [k for k, m in enumerate(T.morphisms) if m.target == T.morphisms[b].source]
    c = data.draw(st.sampled_from(cands))
    assert T.comp[(T.comp[(a, b)], c)] == T.comp[(a, T.comp[(b, c)])]
    # rho is a functor
    ab = T.comp[(a, b)]
    P = T.objects[T.morphisms[b].source]
    fa, fb = T.rho_hom(a), T.rho_hom(b)
    assert tuple(fa(fb(x)) for x in P.gens) == T.morphisms[ab].rho

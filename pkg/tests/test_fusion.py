import pytest
from hypothesis import given, settings, strategies as st

from fusionkit import catalog
from fusionkit.fusion import direct_hom_images, generate_fusion, group_fusion, inner_fusion
from fusionkit.groups import GroupHom, PreconditionError, automorphisms, sylow_subgroup
from fusionkit.transporter import fusion_isomorphism

from conftest import system

ORACLE_CASES = [("sym4", 2), ("gl2_3", 2), ("d12", 2), ("sl2_3", 2)]


@pytest.fixture(scope="module", params=ORACLE_CASES, ids=lambda c: f"{c[0]}-p{c[1]}")
def oracle(request):
    label, p = request.param
    G = catalog.oracle_group(label)
    S = sylow_subgroup(G, p)
    return G, S, group_fusion(G, S, p=p)


def test_hom_sets_match_brute_force(oracle):
    G, S, F = oracle
    subs = F.subgroups()
    for P in subs:
        for Q in subs:
            assert set(F.hom_images(P, Q)) == direct_hom_images(G, S, P, Q)


def test_classes_partition_subgroups(oracle):
    _, _, F = oracle
    seen = set()
    for C in F.classes():
        for key in C.members:
            assert key not in seen
            seen.add(key)
    assert seen == {P.elements for P in F.subgroups()}


def test_element_classes_partition(oracle):
    _, S, F = oracle
    flat = sorted(a for c in F.element_classes() for a in c)
    assert flat == sorted(S.elements)
    for c in F.element_classes():
        assert len({F.group.element_order(a) for a in c}) == 1


def test_sym4_involution_classes(sym4_fusion):
    # transpositions and double transpositions stay apart
    sizes = sorted(len(c) for c in sym4_fusion.element_classes_of_order_p())
    assert sizes == [2, 3]


def test_inner_fusion_orders():
    F = inner_fusion(catalog.oracle_group("d8").whole, p=2)
    assert F.aut_order(F.S) == 4  # Inn(D8)
    for P in F.subgroups():
        if P.order == 4 and P.exponent() == 2:
            assert F.aut_order(P) == 2


def test_generator_validation():
    G = catalog.oracle_group("sym4")
    S = sylow_subgroup(G, 2)
    outside = next(a for a in range(G.order) if a not in S.elements)
    P = G.subgroup([outside])
    with pytest.raises(PreconditionError):
        generate_fusion(S, [GroupHom.identity(P)])


def test_so3_level2_matches_sym4(sym4_fusion):
    cert = fusion_isomorphism(system("so3:l=2"), sym4_fusion)
    assert cert.found


def test_contains_and_aut_orders(so3):
    V = so3.canonical(so3.meta["V"])
    assert so3.aut_order(V) == 6
    for f in so3.aut_group(V):
        assert so3.contains(f)
    # an automorphism of V outside Aut_F(V) does not exist: Aut(V) has order 6
    assert len(automorphisms(V)) == 6
    assert so3.aut_order(so3.S) == 8


@settings(max_examples=25, deadline=None)
@given(data=st.data())
def test_hom_sets_closed_under_composition(data, so3):
    subs = so3.subgroups()
    P = data.draw(st.sampled_from(subs))
    homs = so3.hom_set(P, so3.S)
    f = data.draw(st.sampled_from(homs))
    Q = f.image()
    g = data.draw(st.sampled_from(so3.hom_set(Q, so3.S)))
    h = GroupHom(P, so3.S, [g(f(x)) for x in P.gens])
    assert so3.contains(h)
    # inverses of isomorphisms onto images are morphisms too
    assert so3.contains(GroupHom(Q, so3.S, [f.inverse()(y) for y in Q.gens]))


@settings(max_examples=25, deadline=None)
@given(data=st.data())
def test_fully_normalized_reps(data, su2):
    P = data.draw(st.sampled_from(su2.subgroups()))
    R = su2.fully_normalized_rep(P)
    assert su2.is_fully_normalized(R)
    assert R.elements in su2.fusion_class(P).members
    assert su2.normalizer_order(R) >= su2.normalizer_order(P)

import pytest
from hypothesis import given, settings, strategies as st

from fusionkit import catalog, structure
from fusionkit.fusion import generate_fusion, group_fusion, inner_fusion
from fusionkit.groups import GroupHom, PreconditionError, normalizer, opk_prime_core, sylow_subgroup

from conftest import system


@pytest.fixture(scope="module")
def sym4():
    G = catalog.oracle_group("sym4")
    S = sylow_subgroup(G, 2)
    return G, S, group_fusion(G, S, p=2)


def _normal_four(G, S):
    # O_2(Sym4): the double transpositions together with 1
    return next(P for P in structure.strongly_closed_subgroups(group_fusion(G, S, p=2))
                if P.order == 4)


def test_sym4_centric_radical(sym4):
    G, S, F = sym4
    cr = structure.classify_subgroups(F).centric_radical()
    # D8 itself and the normal Klein four (automizer Sym3)
    assert sorted((c.order, c.aut_order) for c in cr) == [(4, 6), (8, 4)]


def test_sym4_strongly_closed_and_normal_subgroups(sym4):
    G, S, F = sym4
    sc = structure.strongly_closed_subgroups(F)
    assert sorted(A.order for A in sc) == [1, 4, 8]
    V = _normal_four(G, S)
    assert normalizer(V).order == 24
    assert sorted(A.order for A in structure.f_normal_subgroups(F)) == [1, 4]
    assert structure.f_center(F).order == 1


def test_hyperfocal_agrees_with_group_theory():
    for label in ("sym4", "gl2_3", "d12"):
        G = catalog.oracle_group(label)
        S = sylow_subgroup(G, 2)
        F = group_fusion(G, S, p=2)
        H = structure.hyperfocal(F)
        # hyperfocal subgroup theorem: S cap O^p(G)
        want = S.elements & opk_prime_core(G, 2).elements
        assert H.elements == want, label


def test_centers(so3, su2):
    assert structure.f_center(so3).order == 1
    assert structure.f_center(su2).order == 2
    assert structure.is_f_central(su2, structure.f_center(su2))


def test_normal_subsystems_in_sym4(sym4):
    G, S, F = sym4
    V = _normal_four(G, S)
    # F_V(V) and F_V(Alt4) both come from normal subgroups of Sym4
    assert structure.is_normal_subsystem(inner_fusion(V, p=2), F).passed
    three = next(g for g in range(G.order) if G.element_order(g) == 3)
    FA = generate_fusion(V, [GroupHom.conjugation(three, V, V)], p=2)
    assert FA.aut_order(FA.S) == 3
    assert structure.is_normal_subsystem(FA, F).passed
    assert structure.same_system(FA, structure.p_power_index_subsystem(F, structure.hyperfocal(F)))
    # the restriction of F to V has automizer Sym3 and is not saturated
    rep = structure.is_normal_subsystem(structure.restriction_subsystem(F, V), F)
    assert rep.first_failure().tag == "N3"


def test_non_strongly_closed_subsystem_fails_n1(sym4):
    G, S, F = sym4
    W = next(P for P in F.subgroups() if P.order == 4 and P.exponent() == 2
             and P.elements != _normal_four(G, S).elements)
    rep = structure.is_normal_subsystem(inner_fusion(W, p=2), F, stop_early=True)
    assert rep.first_failure().tag == "N1"


def test_centralizer_subsystem_of_center(su2):
    Z = structure.f_center(su2)
    C = structure.centralizer_subsystem(su2, Z)
    assert structure.same_system(C, su2)


def test_normalizer_subsystem_contains_inner(so3):
    V = so3.canonical(so3.meta["V"])
    N = structure.normalizer_subsystem(so3, V)
    assert structure.is_subsystem(N, so3)
    assert N.aut_order(N.canonical(V)) == 6


def test_same_system_detects_difference(so3):
    assert structure.same_system(so3, system("so3:l=3"))
    assert not structure.same_system(so3, inner_fusion(so3.S, p=2))


@pytest.mark.parametrize("name, shape, order", [
    ("so3:l=3", "so3", 16), ("su2:l=3", "su2", 16), ("sullivan:p=5,n=4,l=2", "so2", 25)])
def test_rank_one_component(name, shape, order):
    S0, comp, got = structure.irreducible_component_rank1(system(name))
    assert got == shape
    assert S0.order == order


def test_rank_one_only():
    with pytest.raises(PreconditionError):
        structure.irreducible_component_rank1(system("exotic3:l=2"))


def test_radical_and_centric_flags(so3):
    for info in structure.classify_subgroups(so3).classes:
        P = info.rep
        assert info.centric == structure.is_centric(so3, P)
        assert info.radical == structure.is_radical(so3, P)
        if info.centric:
            assert info.quasicentric


@settings(max_examples=20, deadline=None)
@given(name=st.sampled_from(["so2:p=3,l=2", "sullivan:p=5,n=4,l=2", "so3:l=3", "su2:l=3"]))
def test_p_power_index_subsystem_is_normal(name):
    F = system(name)
    R = structure.hyperfocal(F)
    F0 = structure.p_power_index_subsystem(F, R)
    assert F0.S.elements == R.elements
    assert structure.is_normal_subsystem(F0, F).passed


@settings(max_examples=25, deadline=None)
@given(data=st.data())
def test_strongly_closed_are_unions_of_classes(data, so3):
    A = data.draw(st.sampled_from(so3.subgroups()))
    union = all(set(so3.element_class_of(a)) <= A.elements for a in A.elements)
    assert structure.is_strongly_closed(so3, A) == union
    if structure.is_f_normal(so3, A):
        assert structure.is_strongly_closed(so3, A)

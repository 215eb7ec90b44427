import pytest
from hypothesis import given, settings, strategies as st

from fusionkit.groups import (
    BudgetExceeded,
    GroupHom,
    automorphisms,
    center,
    centralizer,
    cyclic_group,
    dihedral_group,
    direct_product,
    enumerate_subgroups,
    find_isomorphism,
    injective_homs,
    is_normal,
    normalizer,
    opk_prime_core,
    p_part,
    special_linear_group,
    sylow_subgroup,
    symmetric_group,
)

SYM4 = symmetric_group(4)
D8 = dihedral_group(8)


def test_orders_of_standard_groups():
    assert SYM4.order == 24
    assert D8.order == 8
    assert special_linear_group(2, 3).order == 24
    assert direct_product(cyclic_group(2), cyclic_group(3)).order == 6


# subgroup counts are the classical tallies for these small groups
@pytest.mark.parametrize("G, count", [
    (cyclic_group(8), 4),
    (dihedral_group(8), 10),
    (symmetric_group(4), 30),
    (direct_product(cyclic_group(2), cyclic_group(2)), 5),
])
def test_subgroup_counts(G, count):
    assert len(enumerate_subgroups(G)) == count


def test_quaternion_subgroups_and_automorphisms():
    Q8 = sylow_subgroup(special_linear_group(2, 3), 2)
    assert Q8.order == 8 and not Q8.is_abelian()
    assert len(enumerate_subgroups(Q8)) == 6
    assert len(automorphisms(Q8)) == 24


@pytest.mark.parametrize("G, n", [(D8, 8), (cyclic_group(8), 4), (direct_product(cyclic_group(2), cyclic_group(2)), 6)])
def test_automorphism_group_orders(G, n):
    assert len(automorphisms(G.whole)) == n


def test_budget_is_enforced():
    with pytest.raises(BudgetExceeded):
        enumerate_subgroups(SYM4, budget=10)


def test_sylow_and_core():
    P = sylow_subgroup(SYM4, 2)
    assert P.order == 8
    assert sylow_subgroup(SYM4, 3).order == 3
    # O^{2'}(Sym4) is generated by the 3-cycles, i.e. Alt4
    assert opk_prime_core(SYM4, 2).order == 12
    assert p_part(24, 2) == 8 and p_part(24, 3) == 3


def test_normalizer_centralizer_center():
    P = sylow_subgroup(SYM4, 2)
    assert normalizer(P).order == 8
    assert center(P).order == 2
    assert centralizer(center(P)).order == 8
    assert is_normal(opk_prime_core(SYM4, 2), SYM4.whole)


def test_find_isomorphism_between_copies():
    G1 = dihedral_group(8)
    P = sylow_subgroup(SYM4, 2)
    f = find_isomorphism(G1.whole, P)
    assert f is not None and f.is_homomorphism() and f.is_injective()
    assert find_isomorphism(cyclic_group(8).whole, P) is None


def test_quotient_group():
    N = center(D8.whole)
    Q, proj = D8.quotient(N)
    assert Q.order == 4
    assert all(proj[D8.mul(a, b)] == Q.mul(proj[a], proj[b]) for a in range(8) for b in range(8))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 23), st.integers(0, 23))
def test_group_axioms_in_sym4(a, b):
    G = SYM4
    assert G.mul(a, G.inv(a)) == G.identity
    assert G.element_order(a) in (1, 2, 3, 4)
    assert G.inv(G.mul(a, b)) == G.mul(G.inv(b), G.inv(a))
    assert G.conj(b, G.conj(G.inv(b), a)) == a or G.conj(G.inv(b), G.conj(b, a)) == a


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(0, 23), min_size=1, max_size=3))
def test_generated_subgroup_order_divides(gens):
    H = SYM4.subgroup(gens)
    assert SYM4.order % H.order == 0
    assert SYM4.subgroup(H.gens).elements == H.elements


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(enumerate_subgroups(D8)))
def test_injective_homs_into_itself_are_automorphisms(P):
    homs = injective_homs(P, P)
    assert len(homs) == len(automorphisms(P))
    for f in homs:
        assert f.is_homomorphism() and f.image().elements == P.elements
        assert f.compose(f.inverse()).is_identity()


def test_lagrange_on_all_subgroups():
    for H in enumerate_subgroups(SYM4):
        assert SYM4.order % H.order == 0

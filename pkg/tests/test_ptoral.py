import json

import pytest
from hypothesis import given, settings, strategies as st

from fusionkit.catalog import dihedral_spec, exotic_spec, quaternion_spec
from fusionkit.groups import PreconditionError, dihedral_group, find_isomorphism
from fusionkit.ptoral import TruncationSpec, level_inclusion, make_truncation, validate_spec


@pytest.mark.parametrize("level", [1, 2, 3])
def test_dihedral_truncation_is_dihedral(level):
    G = make_truncation(dihedral_spec(level))
    assert G.order == 2 ** (level + 1)
    assert G.torus.order == 2 ** level
    assert find_isomorphism(G.whole, dihedral_group(2 ** (level + 1)).whole) is not None


@pytest.mark.parametrize("level", [2, 3])
def test_quaternion_truncation(level):
    G = make_truncation(quaternion_spec(level))
    # generalized quaternion: a unique involution
    invol = [a for a in range(G.order) if G.element_order(a) == 2]
    assert len(invol) == 1
    assert find_isomorphism(G.whole, dihedral_group(G.order).whole) is None


def test_exotic_truncation_order():
    G = make_truncation(exotic_spec(2))
    assert G.order == 3 * 9 * 9
    assert G.rank_at_level(G.torus) == 2
    assert G.rank_at_level(G.whole) == 2


def test_rank_at_level_of_small_pieces():
    G = make_truncation(dihedral_spec(3))
    assert G.rank_at_level(G.trivial) == 0
    assert G.rank_at_level(G.subgroup([G.element_at((0,), (1,))])) == 0


@pytest.mark.parametrize("bad", [
    TruncationSpec(4, 1, 2),
    TruncationSpec(2, 1, 0),
    TruncationSpec(2, 1, 2, (3,), (((1,),),)),
    TruncationSpec(2, 1, 2, (2,), ()),
    TruncationSpec(3, 1, 2, (3,), (((2,),),)),
    TruncationSpec(2, 1, 2, (2,), (((-1,),),), {((0,), (1,)): (1,)}),
])
def test_validate_spec_rejects(bad):
    with pytest.raises(PreconditionError):
        validate_spec(bad)


def test_validate_spec_rejects_broken_cocycle():
    # c(x, x) must be fixed by the action; 1 is not fixed by -1 mod 4 after the identity check
    spec = TruncationSpec(2, 1, 2, (2,), (((-1,),),), {((1,), (1,)): (1,)})
    with pytest.raises(PreconditionError):
        validate_spec(spec)


@pytest.mark.parametrize("spec", [dihedral_spec(3), quaternion_spec(3), exotic_spec(2), TruncationSpec(5, 1, 2)])
def test_spec_json_roundtrip(spec):
    doc = json.loads(spec.dumps())
    back = TruncationSpec.from_json(doc)
    # entries come back reduced mod p^l, so compare the canonical form
    assert back.dumps() == spec.dumps()
    assert make_truncation(back).table == make_truncation(spec).table
    assert make_truncation(back).order == make_truncation(spec).order


@settings(max_examples=15, deadline=None)
@given(st.integers(1, 3), st.booleans())
def test_level_inclusion_is_injective_homomorphism(level, quaternion):
    spec_of = quaternion_spec if quaternion and level > 1 else dihedral_spec
    small = make_truncation(spec_of(level))
    big = make_truncation(spec_of(level + 1))
    inc = level_inclusion(small, big)
    assert len(set(inc)) == small.order
    a, b = 1 % small.order, (small.order - 1)
    assert inc[small.mul(a, b)] == big.mul(inc[a], inc[b])
    # the torus lands in the torus
    assert {inc[t] for t in small.torus.elements} <= big.torus.elements


def test_level_inclusion_requires_consecutive_levels():
    with pytest.raises(PreconditionError):
        level_inclusion(make_truncation(dihedral_spec(1)), make_truncation(dihedral_spec(3)))


def test_lookup_and_names():
    G = make_truncation(dihedral_spec(2), {"x": ((0,), (1,))})
    x = G.lookup("x")
    assert G.element_order(x) == 2 and G.name_of(x) == "x"
    assert G.lookup("0") == 0
    with pytest.raises(PreconditionError):
        G.lookup("nope")
    with pytest.raises(PreconditionError):
        G.lookup(str(G.order))

import numpy as np
import pytest
from hypothesis import given, strategies as st

from orbifolder.config import Caps
from orbifolder.errors import CapExceededError, ValidationError
from orbifolder.groups import (
    FiniteGroup,
    GroupHom,
    commuting_tuples,
    compose_homs,
    coset_index,
    cyclic_group,
    dihedral_group,
    direct_product,
    generated_subgroup,
    group_from_cayley,
    group_from_permutations,
    group_from_spec,
    hom_from_spec,
    identity_hom,
    quaternion_group,
    subgroup_as_group,
    symmetric_group,
    trivial_hom,
)

import oracles


def preset_pool():
    return [
        cyclic_group(2),
        cyclic_group(4),
        symmetric_group(3),
        dihedral_group(4),
        quaternion_group(),
        direct_product(cyclic_group(2), cyclic_group(2)),
        symmetric_group(4),
    ]


PRESETS = preset_pool()


@pytest.mark.parametrize(
    "group,order,nclasses,abelian",
    [
        (cyclic_group(2), 2, 2, True),
        (cyclic_group(4), 4, 4, True),
        (symmetric_group(3), 6, 3, False),
        (dihedral_group(4), 8, 5, False),
        (quaternion_group(), 8, 5, False),
        (symmetric_group(4), 24, 5, False),
        (direct_product(cyclic_group(2), cyclic_group(2)), 4, 4, True),
    ],
)
def test_preset_shapes(group, order, nclasses, abelian):
    assert group.order == order
    assert len(group.conjugacy_classes()) == nclasses
    assert group.is_abelian is abelian
    assert group.mul(0, 1 % order) == 1 % order  # identity at index 0


def test_every_preset_validates():
    for g in PRESETS:
        assert g.inv(0) == 0
        for a in g.elements():
            assert g.mul(a, g.inv(a)) == 0


def test_broken_table_rejected():
    with pytest.raises(ValidationError):
        FiniteGroup(2, "bad", table=[[0, 1], [1, 1]])
    # row permutations but no associativity: a 5-element quasigroup
    t = [
        [0, 1, 2, 3, 4],
        [1, 0, 3, 4, 2],
        [2, 4, 0, 1, 3],
        [3, 2, 4, 0, 1],
        [4, 3, 1, 2, 0],
    ]
    with pytest.raises(ValidationError):
        FiniteGroup(5, "loop", table=t)


def test_cayley_identity_relocated():
    # C3 written with the identity at index 2
    t = [[1, 2, 0], [2, 0, 1], [0, 1, 2]]
    g = group_from_cayley(t)
    assert g.mul(0, 1) == 1 and g.mul(1, 0) == 1
    assert g.order == 3 and g.is_abelian


def test_large_exhaustive_associativity_bound():
    # order > 512 constructs with sampled checks only; this stays quick
    g = cyclic_group(600)
    assert g.mul(599, 1) == 0


def test_perm_group_closure():
    g = group_from_permutations(3, [[1, 0, 2], [1, 2, 0]])
    assert g.order == 6
    assert len(g.conjugacy_classes()) == 3
    with pytest.raises(CapExceededError):
        group_from_permutations(11, [list(range(11))])
    with pytest.raises(ValidationError):
        group_from_permutations(3, [[0, 0, 2]])


def test_symmetric_degree_guard():
    with pytest.raises(CapExceededError):
        symmetric_group(9)


@given(st.sampled_from(PRESETS), st.data())
def test_orbit_stabilizer(group, data):
    g = data.draw(st.integers(0, group.order - 1))
    cls = group.conjugacy_classes()[group.class_index(g)]
    assert len(group.centralizer(g)) * cls.size == group.order


@given(st.sampled_from(PRESETS), st.data())
def test_centralizer_matches_naive(group, data):
    g = data.draw(st.integers(0, group.order - 1))
    assert list(group.centralizer(g)) == oracles.naive_centralizer(group, g)


def test_conjugacy_classes_match_naive():
    for group in PRESETS:
        mine = [list(c.members) for c in group.conjugacy_classes()]
        assert mine == oracles.naive_conjugacy_classes(group)


@pytest.mark.parametrize(
    "group,arity,count",
    [
        (cyclic_group(2), 3, 8),
        (symmetric_group(3), 2, 18),
        (symmetric_group(3), 3, 48),
    ],
)
def test_commuting_tuple_counts(group, arity, count):
    ts = commuting_tuples(group, arity)
    assert len(ts) == count
    assert list(ts.tuples) == sorted(ts.tuples)


def test_commuting_tuples_match_naive_filter():
    for group in [cyclic_group(4), symmetric_group(3), dihedral_group(4),
                  direct_product(cyclic_group(2), cyclic_group(2))]:
        if group.order > 12:
            continue
        for arity in (1, 2, 3):
            mine = list(commuting_tuples(group, arity).tuples)
            assert mine == oracles.naive_commuting_tuples(group, arity)


def test_commuting_tuples_burnside_identity():
    for group in PRESETS:
        if group.order > 24:
            continue
        pairs = commuting_tuples(group, 2)
        triples = commuting_tuples(group, 3)
        orbits = oracles.naive_tuple_orbits(group, pairs.tuples)
        assert len(triples) == group.order * orbits


def test_commuting_tuples_cap():
    with pytest.raises(CapExceededError):
        commuting_tuples(symmetric_group(4), 3, Caps(cap_objects=100))


def test_commuting_tuples_thread_independent():
    group = symmetric_group(4)
    seq = commuting_tuples(group, 3, Caps(threads=1))
    par = commuting_tuples(group, 3, Caps(threads=4))
    assert seq.tuples == par.tuples


@given(st.sampled_from(PRESETS), st.sets(st.integers(0, 23), max_size=3))
def test_generated_subgroup_lagrange(group, gens):
    gens = {g % group.order for g in gens}
    sub = generated_subgroup(group, gens)
    assert group.order % len(sub) == 0
    assert coset_index(group, sub) == group.order // len(sub)


def test_coset_index_rejects_non_subgroup():
    g = symmetric_group(3)
    with pytest.raises(ValidationError):
        coset_index(g, [0, 3])  # identity plus a 3-cycle is not closed
    with pytest.raises(ValidationError):
        coset_index(g, [1, 2])  # missing identity


def test_subgroup_as_group_reindexes():
    g = symmetric_group(3)
    sub = generated_subgroup(g, [3])  # a 3-cycle
    h = subgroup_as_group(g, sub)
    assert h.order == 3 and h.is_abelian


def test_hom_validation():
    c4, c2 = cyclic_group(4), cyclic_group(2)
    q = GroupHom(c4, c2, (0, 1, 0, 1))
    assert q.is_surjective and q.kernel() == (0, 2)
    with pytest.raises(ValidationError):
        GroupHom(c4, c2, (0, 1, 1, 0))
    with pytest.raises(ValidationError):
        GroupHom(c4, c2, (1, 0, 1, 0))


def test_hom_from_generator_images():
    spec = {
        "source": {"type": "preset", "name": "S3"},
        "target": {"type": "preset", "name": "C2"},
        "images": {"1": 1, "3": 0},
    }
    parity = hom_from_spec(spec)
    assert parity.is_surjective
    assert len(parity.kernel()) == 3
    # transposition images that cannot extend
    bad = dict(spec, images={"1": 1, "3": 1})
    with pytest.raises(ValidationError):
        hom_from_spec(bad)
    # images that do not generate
    nogen = dict(spec, images={"1": 1})
    with pytest.raises(ValidationError):
        hom_from_spec(nogen)


def test_hom_from_full_list():
    spec = {
        "source": {"type": "preset", "name": "C4"},
        "target": {"type": "preset", "name": "C2"},
        "images": [0, 1, 0, 1],
    }
    h = hom_from_spec(spec)
    assert h(3) == 1


def test_compose_and_trivial():
    c4, c2 = cyclic_group(4), cyclic_group(2)
    q = GroupHom(c4, c2, (0, 1, 0, 1))
    t = trivial_hom(c2)
    comp = compose_homs(t, q)
    assert comp.mapping == (0, 0, 0, 0)
    assert identity_hom(c4).mapping == (0, 1, 2, 3)


def test_group_spec_forms():
    assert group_from_spec({"type": "preset", "name": "S3"}).order == 6
    assert group_from_spec('{"type":"preset","name":"Z4"}').order == 4
    prod = group_from_spec(
        {"type": "product", "factors": [
            {"type": "preset", "name": "C2"}, {"type": "preset", "name": "C2"}]}
    )
    assert prod.order == 4 and prod.is_abelian
    cay = group_from_spec({"type": "cayley", "table": [[0, 1], [1, 0]]})
    assert cay.order == 2
    perm = group_from_spec(
        {"type": "perm", "degree": 3, "generators": [[1, 0, 2], [0, 2, 1]]}
    )
    assert perm.order == 6


def test_group_spec_errors():
    with pytest.raises(ValidationError):
        group_from_spec({"type": "preset", "name": "E8"})
    with pytest.raises(ValidationError):
        group_from_spec({"type": "nonsense"})
    with pytest.raises(ValidationError):
        group_from_spec("{not json")
    with pytest.raises(ValidationError):
        group_from_spec({"type": "product", "factors": []})


def test_direct_product_structure():
    a, b = symmetric_group(3), cyclic_group(2)
    p = direct_product(a, b)
    assert p.order == 12
    # componentwise multiplication under the pairing (x, y) -> x*|b| + y
    x = 3 * b.order + 1
    y = 1 * b.order + 1
    assert p.mul(x, y) == a.mul(3, 1) * b.order + b.mul(1, 1)


def test_words_reconstruct_elements():
    for group in PRESETS:
        words = group.words_over(group.generators())
        assert len(words) == group.order
        for g, w in words.items():
            acc = 0
            for s in w:
                acc = group.mul(s, acc)
            assert acc == g

"""Finite abelian groups, characters, regular representations."""

import itertools

import numpy as np
import pytest

from rouxschemes.exact import conj, exact_str, is_zero
from rouxschemes.groups import (
    AbelianGroup,
    FactorTooSmall,
    ParseError,
    abelian_groups_of_order,
    group_from_spec,
)


def test_z4_is_cyclic_of_order_four():
    g = group_from_spec("Z4")
    assert g.order == 4
    assert sorted(g.element_order(x) for x in g.elements) == [1, 2, 4, 4]


def test_z2xz2_all_involutions():
    g = group_from_spec("Z2xZ2")
    assert g.order == 4
    assert all(g.op(x, x) == g.identity for x in g.elements)


def test_z2xz3_is_z6():
    g = group_from_spec("Z2xZ3")
    assert g.exponent == 6
    assert g.is_isomorphic_to(group_from_spec("Z6"))
    assert g.order_multiset() == group_from_spec("Z6").order_multiset()


def test_spec_parsing_errors():
    with pytest.raises(ParseError):
        group_from_spec("Z4x")
    with pytest.raises(FactorTooSmall):
        group_from_spec("Z1")
    with pytest.raises(ParseError):
        group_from_spec("S3")


def test_trivial_group():
    g = AbelianGroup(())
    assert g.order == 1 and g.spec_string() == "1"
    assert g.elements == [()]


def test_character_table_z2():
    t = group_from_spec("Z2").character_table()
    assert [[exact_str(x) for x in row] for row in t.data] == [
        ["1", "1"],
        ["1", "-1"],
    ]


def test_character_table_z4_values():
    t = group_from_spec("Z4").character_table()
    values = {exact_str(x) for row in t.data for x in row}
    assert values == {"1", "i", "-1", "-i"}


@pytest.mark.parametrize("spec", ["Z2", "Z3", "Z4", "Z2xZ2", "Z8", "Z2xZ4",
                                  "Z2xZ2xZ2", "Z12", "Z16", "Z2xZ6"])
def test_character_orthogonality(spec):
    g = group_from_spec(spec)
    t = g.character_table()
    r = g.order
    for a in range(r):
        for b in range(r):
            s = sum(
                (t.data[a][k] * conj(t.data[b][k]) for k in range(r)),
                t.data[0][0] * 0,
            )
            assert is_zero(s - (r if a == b else 0))


def test_regular_permutation_identity():
    g = group_from_spec("Z4")
    assert np.array_equal(g.regular_permutation(g.identity), np.eye(4, dtype=np.int64))


def test_regular_permutation_generator_order():
    g = group_from_spec("Z4")
    p = g.regular_permutation((1,))
    p2 = p @ p
    p4 = p2 @ p2
    assert np.array_equal(p4, np.eye(4, dtype=np.int64))
    assert not np.array_equal(p2, np.eye(4, dtype=np.int64))


@pytest.mark.parametrize("spec", ["Z2", "Z4", "Z2xZ2", "Z6", "Z8", "Z2xZ4"])
def test_regular_representation_is_homomorphism(spec):
    g = group_from_spec(spec)
    for a, b in itertools.product(g.elements, repeat=2):
        pa = g.regular_permutation(a)
        pb = g.regular_permutation(b)
        assert np.array_equal(pa @ pb, g.regular_permutation(g.op(a, b)))


def test_abelian_groups_of_order():
    assert len(abelian_groups_of_order(8)) == 3
    assert len(abelian_groups_of_order(4)) == 2
    specs = {g.spec_string() for g in abelian_groups_of_order(4)}
    assert "Z4" in specs

"""Finite fields, cyclotomic schemes, and the bundled corpus."""

import itertools

import numpy as np
import pytest

from rouxschemes import (
    Indivisible,
    NotPrime,
    TooLarge,
    amorphic_pseudocyclic_check,
    bundled_examples,
    cyclotomic_scheme,
    eigen_compute,
    field_build,
    group_from_spec,
    group_scheme,
    sl23_scheme,
    valencies,
    validate_scheme,
)
from rouxschemes.exact import exact_str
from rouxschemes.roux import LatinSquareType
from rouxschemes.schemes import SchemeTable

SL23_ROWS = {
    ("1", "1", "3", "3"),
    ("1", "1", "-1", "-1"),
    ("1", "-1", "1+2*z3", "-1-2*z3"),
    ("1", "-1", "-1-2*z3", "1+2*z3"),
}


def test_prime_field():
    f = field_build(3, 1)
    assert f.q == 3
    assert f.add(1, 2) == 0 and f.mul(2, 2) == 1


def test_f9_primitive_element_order():
    f = field_build(3, 2)
    g = f.primitive_element
    seen = {g}
    x = g
    for _ in range(7):
        x = f.mul(x, g)
        seen.add(x)
    assert len(seen) == 8 and 1 in seen


def test_f8():
    f = field_build(2, 3)
    assert f.q == 8
    # additive group has exponent 2
    assert all(f.add(a, a) == 0 for a in range(8))


def test_field_errors():
    with pytest.raises(NotPrime):
        field_build(6, 2)
    with pytest.raises(TooLarge):
        field_build(2, 21)


def test_frobenius_is_additive():
    f = field_build(3, 2)
    for a in range(9):
        for b in range(9):
            assert f.power(f.add(a, b), 3) == f.add(f.power(a, 3), f.power(b, 3))


def test_cyclotomic_f9_four_classes():
    t = cyclotomic_scheme(3, 2, 4)
    res = validate_scheme(t)
    assert res.ok
    assert valencies(res.tensor) == [1, 2, 2, 2, 2]
    out = amorphic_pseudocyclic_check(t)
    assert isinstance(out, LatinSquareType) and out.ls == 1


def test_cyclotomic_full_index_is_group_scheme():
    t = cyclotomic_scheme(3, 1, 2)
    assert t == group_scheme(group_from_spec("Z3"))


def test_cyclotomic_indivisible():
    with pytest.raises(Indivisible):
        cyclotomic_scheme(3, 2, 5)


def test_cyclotomic_pseudocyclic_valency():
    t = cyclotomic_scheme(13, 1, 4)
    res = validate_scheme(t)
    assert valencies(res.tensor) == [1, 3, 3, 3, 3]


def test_f9_fusions_are_schemes():
    # amorphic: every merge of the four classes into two groups still
    # satisfies the axioms
    t = cyclotomic_scheme(3, 2, 4)
    classes = [1, 2, 3, 4]
    fused_count = 0
    for size in (1, 2):
        for part in itertools.combinations(classes, size):
            rest = [c for c in classes if c not in part]
            if not rest:
                continue
            relabel = {0: 0}
            relabel.update({c: 1 for c in part})
            relabel.update({c: 2 for c in rest})
            tb = np.vectorize(relabel.get)(t.table)
            assert validate_scheme(SchemeTable(tb)).ok
            fused_count += 1
    assert fused_count == 4 + 6


def test_sl23_eigenmatrix():
    e = eigen_compute(sl23_scheme())
    rows = {tuple(exact_str(x) for x in row) for row in e.P.data}
    assert rows == SL23_ROWS


def test_corpus_members_validate(corpus):
    assert set(corpus) == {"sl23_8", "f9_cyc4", "hex_fission_63"}
    for name, t in corpus.items():
        assert validate_scheme(t).ok


def test_corpus_matches_generators(corpus):
    assert corpus["sl23_8"] == sl23_scheme()
    assert corpus["f9_cyc4"] == cyclotomic_scheme(3, 2, 4)
    assert corpus["hex_fission_63"].n == 63

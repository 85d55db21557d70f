"""Scheme validation, intersection numbers, thin radical, local restriction."""

import random

import numpy as np
import pytest

from rouxschemes import (
    group_from_spec,
    group_scheme,
    local_restrict,
    orbital_scheme,
    scheme_isomorphic,
    thin_radical,
    valencies,
    validate_scheme,
)
from rouxschemes.schemes import NotTransitive, SchemeTable


def cyclic_table(n):
    return SchemeTable([[(y - x) % n for y in range(n)] for x in range(n)])


def test_cyclic_three_is_valid():
    res = validate_scheme(cyclic_table(3))
    assert res.ok
    assert valencies(res.tensor) == [1, 1, 1]


def test_hex63_valencies(hex63):
    res = validate_scheme(hex63)
    assert res.ok
    assert valencies(res.tensor) == [1, 6, 16, 24, 16]


def test_lift_valencies(x256):
    res = validate_scheme(x256)
    assert res.ok
    assert valencies(res.tensor) == [1, 1, 1, 1, 63, 63, 63, 63]


def test_flipped_entry_is_invalid():
    # move the pair (1,3)/(3,1) into the transpose-paired classes 1/4 so the
    # first three axioms still hold and regularity is what breaks
    tb = np.array(cyclic_table(5).table)
    tb[1, 3], tb[3, 1] = 1, 4
    res = validate_scheme(SchemeTable(tb))
    assert not res.ok
    assert res.axiom == 4
    assert res.i is not None and res.x is not None


def test_tensor_identity_row():
    res = validate_scheme(cyclic_table(7))
    p = res.tensor
    d = cyclic_table(7).d
    for j in range(d + 1):
        for k in range(d + 1):
            assert p[0][j][k] == (1 if j == k else 0)


@pytest.mark.parametrize("name", ["sl23_8", "f9_cyc4", "hex_fission_63"])
def test_bose_mesner_products(corpus, name):
    # A_i A_j = sum_k p[i][j][k] A_k, checked with exact integer matrices
    t = corpus[name]
    if t.n > 64:
        pytest.skip("kept to small corpus members")
    res = validate_scheme(t)
    adj = [t.adjacency(i) for i in range(t.d + 1)]
    for i in range(t.d + 1):
        for j in range(t.d + 1):
            prod = adj[i] @ adj[j]
            expect = sum(res.tensor[i][j][k] * adj[k] for k in range(t.d + 1))
            assert np.array_equal(prod, expect)


@pytest.mark.parametrize("name", ["sl23_8", "f9_cyc4", "hex_fission_63"])
def test_valency_sum_identity(corpus, name):
    # sum_k p[i][j][k] k_k = k_i k_j
    res = validate_scheme(corpus[name])
    p = res.tensor
    kvec = valencies(res.tensor)
    d = len(kvec) - 1
    for i in range(d + 1):
        for j in range(d + 1):
            assert sum(p[i][j][k] * kvec[k] for k in range(d + 1)) == kvec[i] * kvec[j]


def test_thin_radical_of_group_scheme():
    g = group_from_spec("Z3")
    rad = thin_radical(group_scheme(g))
    assert rad.order == 3
    assert rad.group.is_isomorphic_to(g)


def test_thin_radical_trivial_on_hex63(hex63):
    assert thin_radical(hex63).order == 1


def test_thin_radical_of_lift_is_z4(x256):
    rad = thin_radical(x256)
    assert rad.order == 4
    assert rad.group.is_isomorphic_to(group_from_spec("Z4"))


def test_thin_relations_permute_adjacency(x256):
    # for thin t: A_t A_i has a single nonzero structure coefficient
    res = validate_scheme(x256)
    p = res.tensor
    kvec = valencies(res.tensor)
    thin = [i for i, k in enumerate(kvec) if k == 1]
    for t in thin:
        for i in range(len(kvec)):
            support = [k for k in range(len(kvec)) if p[t][i][k] > 0]
            assert len(support) == 1


def test_orbital_of_cycle_is_group_scheme():
    n = 5
    cycle = [(i + 1) % n for i in range(n)]
    t = orbital_scheme(n, [cycle])
    assert t == group_scheme(group_from_spec("Z5"))


def test_orbital_transpose_symmetry(sl23):
    # recounting orbitals of transposed pairs lands on the transpose class
    res = validate_scheme(sl23)
    tb = sl23.table
    tensor = res.tensor
    trans = [next(k for k in range(sl23.d + 1) if tensor[j][k][0] > 0)
             for j in range(sl23.d + 1)]
    for x in range(sl23.n):
        for y in range(sl23.n):
            assert tb[y][x] == trans[tb[x][y]]


def test_orbital_not_transitive():
    with pytest.raises(NotTransitive):
        orbital_scheme(4, [[1, 0, 2, 3]])


def test_local_restrict_thin_relation_is_point():
    t = group_scheme(group_from_spec("Z4"))
    local, present = local_restrict(t, 0, 1)
    assert local.n == 1 and present == [0]


def test_local_restrict_thick_relation(x256):
    local, present = local_restrict(x256, 0, 4)
    assert local.n == 63
    res = validate_scheme(local)
    assert res.ok
    assert sum(valencies(res.tensor)) == 63


def test_local_restrict_size_matches_valency(x256):
    res = validate_scheme(x256)
    kvec = valencies(res.tensor)
    rng = random.Random(3)
    for _ in range(3):
        z = rng.randrange(x256.n)
        i = rng.randrange(4, 8)
        local, _ = local_restrict(x256, z, i)
        assert local.n == kvec[i]


def test_isomorphic_to_relabeled_self(f9):
    rng = random.Random(17)
    perm = list(range(f9.n))
    rng.shuffle(perm)
    tb = np.empty_like(f9.table)
    for x in range(f9.n):
        for y in range(f9.n):
            tb[perm[x], perm[y]] = f9.table[x, y]
    out = scheme_isomorphic(f9, SchemeTable(tb))
    assert out.isomorphic


def test_hex63_isomorphic_to_conjugate(hex63):
    # swapping the two conjugate classes gives the conjugate scheme
    res = validate_scheme(hex63)
    tensor = res.tensor
    swap = {0: 0, 1: 1, 2: 4, 3: 3, 4: 2}
    tb = np.vectorize(swap.get)(hex63.table)
    conj_scheme = SchemeTable(tb)
    assert validate_scheme(conj_scheme).ok
    out = scheme_isomorphic(hex63, conj_scheme)
    assert out.isomorphic


def test_isomorphism_is_reflexive_and_symmetric(corpus):
    for t in corpus.values():
        assert scheme_isomorphic(t, t).isomorphic
    a, b = corpus["sl23_8"], corpus["f9_cyc4"]
    assert not scheme_isomorphic(a, b).isomorphic
    assert not scheme_isomorphic(b, a).isomorphic


def test_json_roundtrip(sl23):
    assert SchemeTable.from_json(sl23.to_json()) == sl23


def test_json_rejects_nonzero_diagonal():
    with pytest.raises(ValueError):
        SchemeTable.from_json('{"n": 2, "d": 1, "table": [[1, 1], [1, 0]]}')

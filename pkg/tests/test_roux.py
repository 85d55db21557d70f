"""Roux matrices: verify, build, lift, decompose, characters, frames."""

import itertools
import json

import mpmath
import numpy as np
import pytest

from rouxschemes import (
    PrecisionTooLow,
    RouxMatrix,
    amorphic_pseudocyclic_check,
    build_roux_matrix,
    char_evaluate,
    compat_check,
    decompose,
    drackn_params,
    eigen_compute,
    etf_export,
    find_labelings,
    group_from_spec,
    group_scheme,
    lift_scheme,
    scheme_isomorphic,
    thin_radical,
    valencies,
    validate_scheme,
    verify_roux,
)
from rouxschemes.groups import AbelianGroup
from rouxschemes.roux import ClassCountMismatch, IncompatiblePair, LatinSquareType, No
from rouxschemes.exact import ExactMatrix, exact_str, is_zero


def test_trivial_two_point_roux():
    b = RouxMatrix(AbelianGroup(()), [[0, 1], [1, 0]])
    chk = verify_roux(b)
    assert chk.ok
    assert chk.params == {(): 0}


def test_hoggar_roux_parameters(hoggar_roux):
    chk = verify_roux(hoggar_roux)
    assert chk.ok
    assert chk.param_list(hoggar_roux.group) == [24, 16, 6, 16]


def test_perturbed_roux_fails(hoggar_roux):
    g = hoggar_roux.group
    e = np.array(hoggar_roux.entries)
    # swap the entry pair (1,2)/(2,1) to a different inverse-closed pair so
    # the structural invariants hold but the group-ring identity breaks
    old = e[1, 2]
    new = 1 if old != 1 else 2
    e[1, 2] = new
    e[2, 1] = g.index[g.inv(g.elements[new - 1])] + 1
    chk = verify_roux(RouxMatrix(g, e))
    assert not chk.ok


def test_structural_invariants_enforced():
    g = group_from_spec("Z4")
    with pytest.raises(ValueError):
        RouxMatrix(g, [[1, 2], [3, 0]])  # nonzero diagonal
    with pytest.raises(ValueError):
        RouxMatrix(g, [[0, 2], [2, 0]])  # transpose not the inverse


def test_f9_all_labelings_compatible(f9):
    g = group_from_spec("Z2xZ2")
    labs = find_labelings(f9, g)
    assert len(labs) == 24
    for lab in labs:
        assert compat_check(f9, g, lab).ok


def test_hex63_labeling_families(hex63):
    z4 = group_from_spec("Z4")
    labs = find_labelings(hex63, z4)
    assert len(labs) == 4
    kvec = valencies(validate_scheme(hex63).tensor)
    families = sorted(
        tuple(kvec[lab[g]] for g in z4.elements) for lab in labs
    )
    assert families == [
        (6, 16, 24, 16),
        (6, 16, 24, 16),
        (24, 16, 6, 16),
        (24, 16, 6, 16),
    ]


def test_symmetric_scheme_incompatible_with_z4(f9):
    # all classes of the cyclotomic scheme are symmetric; Z4 has elements of
    # order 4, so the transpose condition cannot be met
    assert find_labelings(f9, group_from_spec("Z4")) == []


def test_class_count_mismatch(f9):
    t = group_scheme(group_from_spec("Z3"))
    z2 = group_from_spec("Z2")
    assert find_labelings(t, z2) == []
    with pytest.raises(ClassCountMismatch):
        compat_check(f9, z2, {h: i + 1 for i, h in enumerate(z2.elements)})


def test_border_carries_identity(hoggar_roux):
    e = hoggar_roux.entries
    assert (e[0, 1:] == 1).all() and (e[1:, 0] == 1).all()


def test_f9_build(f9):
    g = group_from_spec("Z2xZ2")
    b = build_roux_matrix(f9, g, find_labelings(f9, g)[0])
    assert b.dim == 10
    chk = verify_roux(b)
    assert chk.ok and chk.param_list(g) == [2, 2, 2, 2]


def test_incompatible_pair_raises(hex63):
    z4 = group_from_spec("Z4")
    # identity -> class 2 breaks the transpose condition (class 2 is not
    # symmetric), which build reports as an incompatible pair
    bad = {g: c for g, c in zip(z4.elements, [2, 1, 3, 4])}
    with pytest.raises(IncompatiblePair):
        build_roux_matrix(hex63, z4, bad)


def test_lift_thin_blocks(l40):
    g = group_from_spec("Z2xZ2")
    for k, elem in enumerate(g.elements):
        pk = g.regular_permutation(elem)
        assert np.array_equal(
            l40.adjacency(k), np.kron(np.eye(10, dtype=np.int64), pk)
        )


def test_lift_f9_shape(l40):
    assert l40.n == 40 and l40.d == 7
    assert validate_scheme(l40).ok
    rad = thin_radical(l40)
    assert rad.group.is_isomorphic_to(group_from_spec("Z2xZ2"))


def test_lift_symmetric_thick_class(l40):
    res = validate_scheme(l40)
    kvec = valencies(res.tensor)
    tb = l40.table
    sym_thick = [
        i for i, k in enumerate(kvec)
        if k > 1 and np.array_equal((tb == i), (tb == i).T)
    ]
    assert len(sym_thick) >= 1


def test_decompose_lift_roundtrip(l40, f9):
    out = decompose(l40)
    assert out.ok
    assert out.group.is_isomorphic_to(group_from_spec("Z2xZ2"))
    assert scheme_isomorphic(out.local, f9).isomorphic


def test_decompose_base_vertex_free_when_triply_regular(x256):
    # every neighbourhood of the 256-point scheme carries the local scheme,
    # and the recovered data is the same up to isomorphism
    locals_found = [decompose(x256, base_vertex=v).local for v in (0, 77, 201)]
    for other in locals_found[1:]:
        assert scheme_isomorphic(locals_found[0], other).isomorphic


def test_decompose_off_border_vertex_may_fail(l40):
    # the 40-point lift is not triply regular: the decomposition hypothesis
    # asks only for SOME vertex whose neighbourhood induces a scheme, and
    # here vertex 13 is not one of them while vertex 0 is
    assert decompose(l40, base_vertex=0).ok
    assert not decompose(l40, base_vertex=13).ok


def test_decompose_lift_256(x256, hex63):
    out = decompose(x256)
    assert out.ok
    assert out.group.is_isomorphic_to(group_from_spec("Z4"))
    assert out.local.n == 63
    assert scheme_isomorphic(out.local, hex63).isomorphic


def test_group_scheme_not_decomposable():
    out = decompose(group_scheme(group_from_spec("Z4")))
    assert not out.ok


def test_char_trivial_is_all_ones_off_diagonal(hoggar_roux):
    m = char_evaluate(hoggar_roux, hoggar_roux.group.identity)
    for i in range(m.rows):
        for j in range(m.cols):
            assert is_zero(m.data[i][j] - (0 if i == j else 1))


def test_char_quadratic_identity(hoggar_roux):
    g = hoggar_roux.group
    n = hoggar_roux.dim
    chk = verify_roux(hoggar_roux)
    for alpha in g.elements:
        m = char_evaluate(hoggar_roux, alpha)
        chat = sum(
            (g.character_value(alpha, h) * chk.params[h] for h in g.elements),
            g.character_value(alpha, g.identity) * 0,
        )
        sq = m * m
        for i in range(n):
            for j in range(n):
                want = chat * m.data[i][j] + ((n - 1) if i == j else 0)
                assert is_zero(sq.data[i][j] - want)


def test_char_faithful_eigenvalues(hoggar_roux):
    # (M - 21 I)(M + 3 I) = 0 pins the two eigenvalues of the faithful sheet
    m = char_evaluate(hoggar_roux, (1,))
    n = m.rows
    left = ExactMatrix(
        [[m.data[i][j] - (21 if i == j else 0) for j in range(n)] for i in range(n)]
    )
    right = ExactMatrix(
        [[m.data[i][j] + (3 if i == j else 0) for j in range(n)] for i in range(n)]
    )
    prod = left * right
    assert all(is_zero(x) for row in prod.data for x in row)


def test_etf_hoggar_faithful(hoggar_roux):
    rows = etf_export(hoggar_roux, (1,), precision=128)
    assert len(rows) == 8 and len(rows[0]) == 64
    with mpmath.workprec(256):
        tol = mpmath.mpf(2) ** -64
        beta = mpmath.mpf(64) / 8
        for i in range(8):
            for j in range(8):
                entry = mpmath.fsum(
                    [rows[i][k] * mpmath.conj(rows[j][k]) for k in range(64)]
                )
                want = beta if i == j else 0
                assert abs(entry - want) < tol
        coh = [
            abs(mpmath.fsum([mpmath.conj(rows[d][a]) * rows[d][b] for d in range(8)]))
            for a in range(64) for b in range(a + 1, 64)
        ]
        third = mpmath.mpf(1) / 3
        assert all(abs(c - third) < tol for c in coh)


def test_etf_trivial():
    b = RouxMatrix(AbelianGroup(()), [[0, 1], [1, 0]])
    rows = etf_export(b, ())
    assert len(rows) == 1 and len(rows[0]) == 2


def test_etf_precision_floor(hoggar_roux):
    with pytest.raises(PrecisionTooLow):
        etf_export(hoggar_roux, (1,), precision=8)


def test_amorphic_check_f9(f9):
    out = amorphic_pseudocyclic_check(f9)
    assert isinstance(out, LatinSquareType)
    assert out.ls == 1


def test_amorphic_check_rejects_hex63(hex63):
    assert isinstance(amorphic_pseudocyclic_check(hex63), No)


def test_drackn_params():
    assert drackn_params(9, 4) == (10, 4, 2)
    assert drackn_params(5, 4) == (6, 4, 1)
    from rouxschemes import Indivisible
    with pytest.raises(Indivisible):
        drackn_params(9, 3)
    with pytest.raises(Indivisible):
        drackn_params(8, 4)


def test_roux_json_roundtrip(tmp_path, hoggar_roux):
    text = hoggar_roux.to_json()
    obj = json.loads(text)
    assert obj["dim"] == 64 and obj["group"] == "Z4"
    back = RouxMatrix.from_json(text)
    assert np.array_equal(back.entries, hoggar_roux.entries)
    path = tmp_path / "b.json"
    hoggar_roux.to_file(path)
    again = RouxMatrix.from_file(path)
    assert np.array_equal(again.entries, hoggar_roux.entries)

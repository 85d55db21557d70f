"""Exact eigenmatrices, Krein parameters, closed-form roux spectra, detection."""

import pytest

from rouxschemes import (
    EigenData,
    IrrationalEigenvalue,
    eigen_compute,
    group_from_spec,
    group_scheme,
    krein_params,
    roux_detect,
    roux_eigen_closed,
    validate_scheme,
)
from rouxschemes.exact import exact_str, is_zero
from rouxschemes.spectra import NotRoux

EIGEN63_ROWS = {
    ("1", "6", "16", "24", "16"),
    ("1", "3", "-2", "0", "-2"),
    ("1", "-1", "2", "-4", "2"),
    ("1", "-3", "-2+6i", "6", "-2-6i"),
    ("1", "-3", "-2-6i", "6", "-2+6i"),
}

EIGEN256_ROWS = {
    ("1", "1", "1", "1", "63", "63", "63", "63"),
    ("1", "i", "-1", "-i", "21", "21i", "-21", "-21i"),
    ("1", "-1", "1", "-1", "-9", "9", "-9", "9"),
    ("1", "-i", "-1", "i", "21", "-21i", "-21", "21i"),
    ("1", "1", "1", "1", "-1", "-1", "-1", "-1"),
    ("1", "i", "-1", "-i", "-3", "-3i", "3", "3i"),
    ("1", "-1", "1", "-1", "7", "-7", "7", "-7"),
    ("1", "-i", "-1", "i", "-3", "3i", "3", "-3i"),
}


def str_rows(p):
    return {tuple(exact_str(x) for x in row) for row in p.data}


def test_z2_eigenmatrix():
    e = eigen_compute(group_scheme(group_from_spec("Z2")))
    assert [[exact_str(x) for x in row] for row in e.P.data] == [
        ["1", "1"],
        ["1", "-1"],
    ]


def test_hex63_eigenmatrix(hex63):
    e = eigen_compute(hex63)
    assert str_rows(e.P) == EIGEN63_ROWS
    assert [exact_str(x) for x in e.Q.data[0]] == ["1", "21", "27", "7", "7"]
    assert sorted(e.mult) == [1, 7, 7, 21, 27]


def test_lift_eigenmatrix(eigen256):
    assert str_rows(eigen256.P) == EIGEN256_ROWS


@pytest.mark.parametrize("name", ["sl23_8", "f9_cyc4", "hex_fission_63"])
def test_pq_product(corpus, name):
    t = corpus[name]
    e = eigen_compute(t)
    prod = e.P * e.Q
    for i in range(e.d + 1):
        for j in range(e.d + 1):
            assert is_zero(prod.data[i][j] - (t.n if i == j else 0))


@pytest.mark.parametrize("name", ["sl23_8", "f9_cyc4", "hex_fission_63"])
def test_mult_sum(corpus, name):
    t = corpus[name]
    e = eigen_compute(t)
    assert all(m > 0 for m in e.mult)
    assert sum(e.mult) == t.n


def test_eigen_report_roundtrip(hex63):
    e = eigen_compute(hex63)
    back = EigenData.from_report(e.to_report())
    assert str_rows(back.P) == str_rows(e.P)
    assert back.mult == e.mult and back.valencies == e.valencies


def test_krein_identity_row(hex63):
    k = krein_params(eigen_compute(hex63))
    d = 4
    for j in range(d + 1):
        for kk in range(d + 1):
            v = k.value(0, j, kk)
            assert is_zero(v - (1 if j == kk else 0))


@pytest.mark.parametrize("name", ["sl23_8", "f9_cyc4", "hex_fission_63"])
def test_krein_real_nonnegative(corpus, name):
    # the constructor certifies realness/nonnegativity; vanishing set is exact
    e = eigen_compute(corpus[name])
    k = krein_params(e)
    for (i, j, kk) in k.vanishing:
        assert is_zero(k.value(i, j, kk))


def test_krein_vanishing_nonempty_on_lift(params256):
    assert len(params256.krein.vanishing) > 0


def int_pairs(pairs):
    return [frozenset({int(a), int(b)}) for a, b in pairs]


def test_closed_form_pseudocyclic():
    # all c_g equal: trivial character gets {n, -1}; the other thick pairs
    # are +-sqrt(n), accepted because 9 is a perfect square
    g = group_from_spec("Z2xZ2")
    sp = roux_eigen_closed(g, {h: 2 for h in g.elements}, 9)
    assert set(int_pairs(sp.thick_pairs)) == {
        frozenset({9, -1}),
        frozenset({3, -3}),
    }


def test_closed_form_irrational_discriminant():
    # c sums to scheme order - 1 but the nontrivial discriminant 1 + 32 = 33
    # is not a perfect square
    g = group_from_spec("Z2xZ2")
    c = {h: (1 if h == g.identity else 2) for h in g.elements}
    with pytest.raises(IrrationalEigenvalue):
        roux_eigen_closed(g, c, 8)


def test_closed_form_hoggar_parameters():
    z4 = group_from_spec("Z4")
    sp = roux_eigen_closed(z4, {g: c for g, c in zip(z4.elements, (24, 16, 6, 16))}, 63)
    assert int_pairs(sp.thick_pairs) == [
        frozenset({63, -1}),
        frozenset({21, -3}),
        frozenset({7, -9}),
        frozenset({21, -3}),
    ]
    assert int_pairs(sp.mult_pairs) == [
        frozenset({1, 63}),
        frozenset({8, 56}),
        frozenset({36, 28}),
        frozenset({8, 56}),
    ]
    assert sum(sp.eigen.mult) == 256
    assert str_rows(sp.eigen.P) == EIGEN256_ROWS


def test_closed_form_multiplicities_are_positive_integers(l40):
    g = group_from_spec("Z2xZ2")
    sp = roux_eigen_closed(g, {h: 2 for h in g.elements}, 9)
    assert all(isinstance(m, int) and m > 0 for m in sp.eigen.mult)
    assert sum(sp.eigen.mult) == 4 * 10


def test_closed_form_matches_computed_on_lift(l40):
    g = group_from_spec("Z2xZ2")
    sp = roux_eigen_closed(g, {h: 2 for h in g.elements}, 9)
    e = eigen_compute(l40)
    assert str_rows(sp.eigen.P) == str_rows(e.P)
    assert sorted(sp.eigen.mult) == sorted(e.mult)


def test_detect_on_lift(eigen256):
    out = roux_detect(eigen256.P, eigen256.valencies)
    assert out.ok
    assert out.group.is_isomorphic_to(group_from_spec("Z4"))
    pairs = int_pairs(zip(out.d_plus, out.d_minus))
    assert sorted(pairs, key=sorted) == sorted(
        [
            frozenset({63, -1}),
            frozenset({21, -3}),
            frozenset({-9, 7}),
            frozenset({21, -3}),
        ],
        key=sorted,
    )
    assert out.real_thick


def test_detect_rejects_group_scheme():
    t = group_scheme(group_from_spec("Z4"))
    e = eigen_compute(t)
    out = roux_detect(e.P, e.valencies)
    assert not out.ok
    assert isinstance(out, NotRoux)


def test_detect_on_f9_lift(l40):
    e = eigen_compute(l40)
    out = roux_detect(e.P, e.valencies)
    assert out.ok
    assert out.group.is_isomorphic_to(group_from_spec("Z2xZ2"))

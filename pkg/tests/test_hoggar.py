"""Gram enumeration, clique search, and the uniqueness pipeline."""

import itertools
import random
from collections import deque
from fractions import Fraction

import numpy as np
import pytest

from rouxschemes import (
    group_from_spec,
    run_pipeline,
    thin_radical,
    valencies,
    validate_scheme,
)
from rouxschemes.exact import GaussianRational, conj, is_zero, to_complex
from rouxschemes.hoggar import (
    BETA,
    PATTERN,
    CompatGraph,
    ExtensionVector,
    GramInconsistent,
    StageMismatch,
    _maximum_cliques,
    assemble_scheme,
    build_compat_graph,
    enumerate_candidates,
    equivalence_classes,
    find_cliques56,
    inner_product,
    unit_extensions,
)


def test_stage_counts(pipeline):
    counts = pipeline.report.counts
    assert counts["assignments"] == 1728
    assert counts["psd_candidates"] == 16
    assert counts["permutation_classes"] == 10
    assert counts["conjugation_classes"] == 6
    assert counts["unit_extensions"] == [106] * 10
    assert counts["maximum_cliques"] == [2] * 10
    assert counts["clique_size"] == 56
    assert counts["assembled_schemes"] == 20
    assert counts["isomorphism_classes"] == 1
    assert counts["roux_c"] == [24, 16, 6, 16]
    assert sorted(counts["d_pairs"]) == [(7, -9), (21, -3), (21, -3), (63, -1)]


def test_verified_stages_in_order(pipeline):
    assert list(pipeline.report.verified) == [
        "candidate count",
        "class count",
        "extension counts",
        "clique counts",
        "eigenmatrix of every assembled scheme",
        "single isomorphism class",
        "embedding idempotent",
        "lift eigenmatrix",
        "roux structure",
        "triple regularity",
        "triple solver cross-checks",
        "parameter-only local eigenmatrix",
    ]


def test_pipeline_certificates(pipeline):
    assert len(pipeline.report.certificates) == 19
    assert all(sorted(c) == list(range(63)) for c in pipeline.report.certificates)


def test_pipeline_schemes(pipeline, corpus):
    rep = pipeline.report
    assert rep.scheme63.n == 63 and rep.scheme256.n == 256
    assert rep.scheme63.to_json() == corpus["hex_fission_63"].to_json()
    rad = thin_radical(rep.scheme256)
    assert rad.group.is_isomorphic_to(group_from_spec("Z4"))


def test_pipeline_report_is_reproducible(pipeline):
    again = run_pipeline(threads=2)
    assert again.to_report() == pipeline.report.to_report()
    assert again.scheme63.to_json() == pipeline.report.scheme63.to_json()


def test_candidates_are_hermitian_with_unit_diagonal():
    cands = enumerate_candidates()
    assert len(cands) == 16
    for cand in cands[:4]:
        e = cand.entries
        for i in range(7):
            assert is_zero(e[i][i] - 1)
            for j in range(7):
                assert is_zero(conj(e[j][i]) - e[i][j])


def test_class_representatives_stable():
    cands = enumerate_candidates()
    reps = equivalence_classes(cands)
    assert len(reps) == 10
    assert equivalence_classes(list(reversed(cands))) == reps


def test_extension_membership():
    rep = equivalence_classes(enumerate_candidates())[0]
    z = unit_extensions(rep)
    assert len(z) == 106
    for vec in (z[0], z[57], z[105]):
        assert is_zero(inner_product(rep, vec, vec) - 1)
    # z is exhaustive: an admissible vector lies in z iff its norm is 1,
    # checked here on every single-coordinate mutation of one member
    pool = set(z)
    for pos in range(7):
        for val in BETA:
            cand = list(z[0].v)
            cand[pos] = val
            vec = ExtensionVector(tuple(cand))
            unit = is_zero(inner_product(rep, vec, vec) - 1)
            assert (vec in pool) == unit


def test_inner_products_match_float_oracle():
    rep = equivalence_classes(enumerate_candidates())[0]
    z = unit_extensions(rep)
    ginv = np.array([[to_complex(x) for x in row] for row in rep.inverse])
    rng = random.Random(99)
    for _ in range(25):
        a, b = rng.choice(z), rng.choice(z)
        av = np.array([to_complex(x) for x in a.v])
        bv = np.array([to_complex(x) for x in b.v])
        exact = to_complex(inner_product(rep, a, b))
        numeric = np.conj(av) @ ginv @ bv
        assert abs(exact - numeric) < 1e-9


def test_compat_graph_cross_check():
    rep = equivalence_classes(enumerate_candidates())[0]
    z = unit_extensions(rep)
    g1 = build_compat_graph(rep, z)
    g2 = build_compat_graph(rep, z, cross_check=True)
    assert g1.bits == g2.bits
    # the graph is loopless and symmetric
    for i in range(g1.n):
        assert not (g1.bits[i] >> i) & 1
        for j in range(g1.n):
            assert ((g1.bits[i] >> j) & 1) == ((g1.bits[j] >> i) & 1)


def test_maximum_cliques_against_bruteforce():
    rng = random.Random(4242)
    for n in (8, 10, 12):
        for _ in range(4):
            bits = [0] * n
            for i in range(n):
                for j in range(i + 1, n):
                    if rng.random() < 0.55:
                        bits[i] |= 1 << j
                        bits[j] |= 1 << i
            best, masks = _maximum_cliques(bits, n)
            brute_best = 0
            brute = []
            for r in range(1, n + 1):
                for comb in itertools.combinations(range(n), r):
                    if all(
                        (bits[a] >> b) & 1
                        for a, b in itertools.combinations(comb, 2)
                    ):
                        mask = sum(1 << v for v in comb)
                        if r > brute_best:
                            brute_best, brute = r, [mask]
                        elif r == brute_best:
                            brute.append(mask)
            assert best == brute_best
            assert masks == sorted(brute)


def test_find_cliques56_requires_clique_number_56():
    one = GaussianRational(1)
    verts = tuple(ExtensionVector((one,) * 7) for _ in range(3))
    triangle = CompatGraph(verts, (0b110, 0b101, 0b011))
    assert find_cliques56(triangle) == []
    empty = CompatGraph((), ())
    assert find_cliques56(empty) == []


def test_assemble_rejects_wrong_clique_size():
    rep = equivalence_classes(enumerate_candidates())[0]
    z = unit_extensions(rep)
    with pytest.raises(ValueError):
        assemble_scheme(rep, z[:3])


def test_hex63_class1_is_distance_regular(hex63):
    # the symmetric valency-6 class generates a distance-regular graph
    # with intersection array {6, 4, 4; 1, 1, 3}
    adj = [set(np.nonzero(hex63.table[x] == 1)[0]) for x in range(63)]
    want_b = [6, 4, 4]
    want_c = [1, 1, 3]
    for start in range(63):
        dist = {start: 0}
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if y not in dist:
                    dist[y] = dist[x] + 1
                    queue.append(y)
        assert max(dist.values()) == 3 and len(dist) == 63
        for x, dx in dist.items():
            back = sum(1 for y in adj[x] if dist[y] == dx - 1)
            forward = sum(1 for y in adj[x] if dist[y] == dx + 1)
            if dx > 0:
                assert back == want_c[dx - 1]
            if dx < 3:
                assert forward == want_b[dx]


def test_assembled_scheme_valencies(pipeline):
    res = validate_scheme(pipeline.report.scheme63)
    assert valencies(res.tensor) == [1, 6, 16, 24, 16]


def test_stage_mismatch_carries_context():
    err = StageMismatch("unit extensions", 106, 99)
    assert err.stage == "unit extensions"
    assert err.expected == 106 and err.got == 99
    assert "unit extensions" in str(err)


def test_admissible_value_set():
    b1, b2, b3, b4 = BETA
    assert is_zero(conj(b3) - b4)
    assert b1 == GaussianRational(Fraction(-1, 2))
    assert b2 == GaussianRational(Fraction(1, 4))
    moduli = sorted(x.re * x.re + x.im * x.im for x in BETA)
    assert moduli == [
        Fraction(1, 16),
        Fraction(5, 32),
        Fraction(5, 32),
        Fraction(1, 4),
    ]


def test_pattern_free_slot_count():
    assert PATTERN.assignments == 1728
    assert len(PATTERN.free) == 9

"""Triple intersection numbers: counting, linear systems, regularity."""

import random

import numpy as np
import pytest

from rouxschemes import (
    TripleSolver,
    eigen_compute,
    group_from_spec,
    group_scheme,
    krein_params,
    local_params_from_triples,
    local_restrict,
    tensor_from_eigen,
    triple_bruteforce,
    triple_regular_check,
    triple_solve,
    validate_scheme,
)
from rouxschemes.exact import conj, exact_str, is_zero
from rouxschemes.schemes import transpose_from_tensor
from rouxschemes.triple import Unique, triple_realizable


def transpose_map(t):
    res = validate_scheme(t)
    return res.tensor, transpose_from_tensor(res.tensor)


@pytest.mark.parametrize("name", ["sl23_8", "f9_cyc4"])
def test_boundary_identities(corpus, name):
    t = corpus[name]
    tensor, tra = transpose_map(t)
    rng = random.Random(name)
    for _ in range(6):
        u, v, w = (rng.randrange(t.n) for _ in range(3))
        trip = triple_bruteforce(t, u, v, w)
        for j in range(t.d + 1):
            for k in range(t.d + 1):
                want = 1 if (tra[j] == trip.W and tra[k] == trip.V) else 0
                assert trip.value(0, j, k) == want


@pytest.mark.parametrize("name", ["sl23_8", "f9_cyc4", "hex_fission_63"])
def test_sum_families(corpus, name):
    # the three marginal families of a counted tensor match the pair numbers
    t = corpus[name]
    tensor, _ = transpose_map(t)
    rng = random.Random(len(name))
    for _ in range(4):
        u, v, w = (rng.randrange(t.n) for _ in range(3))
        trip = triple_bruteforce(t, u, v, w)
        trip.verify(tensor)


def test_bruteforce_counts_z3():
    t = group_scheme(group_from_spec("Z3"))
    trip = triple_bruteforce(t, 0, 1, 2)
    assert trip.values.sum() == 3  # one x per column of the table
    reg = triple_regular_check(t)
    assert reg.ok


def test_solver_matches_bruteforce_on_group_scheme():
    t = group_scheme(group_from_spec("Z4"))
    e = eigen_compute(t)
    res = validate_scheme(t)
    k = krein_params(e)
    rng = random.Random(8)
    for _ in range(6):
        u, v, w = (rng.randrange(t.n) for _ in range(3))
        brute = triple_bruteforce(t, u, v, w)
        out = triple_solve(e, res.tensor, k, brute.U, brute.V, brute.W)
        assert isinstance(out, Unique)
        assert np.array_equal(out.tensor.values, brute.values)


def test_solver_matches_bruteforce_on_lift(x256, params256):
    solver = TripleSolver(params256.eigen, params256.tensor, params256.krein)
    tb = x256.table
    rng = random.Random(63)
    for _ in range(8):
        u, v, w = (rng.randrange(256) for _ in range(3))
        brute = triple_bruteforce(x256, u, v, w)
        out = solver.solve(int(tb[v, w]), int(tb[u, w]), int(tb[u, v]))
        assert isinstance(out, Unique)
        assert np.array_equal(out.tensor.values, brute.values)


def test_degenerate_triple_collapses(params256):
    # W = 0 forces u = v, so [i j k] = delta_ij [pair count of (j, k)]
    solver = TripleSolver(params256.eigen, params256.tensor, params256.krein)
    tensor = params256.tensor
    tra = transpose_from_tensor(tensor)
    U = 4
    out = solver.solve(U, U, 0)
    assert isinstance(out, Unique)
    vals = out.tensor.values
    for i in range(8):
        for j in range(8):
            for k in range(8):
                want = tensor[j, tra[k], U] if i == j else 0
                assert vals[i, j, k] == want


def test_unrealizable_triple_rejected(params256):
    # thin classes 1,2,3 pairwise compose deterministically: U is forced by
    # (V, W), so most assignments are unrealizable
    assert not triple_realizable(params256.tensor, 1, 1, 1)
    solver = TripleSolver(params256.eigen, params256.tensor, params256.krein)
    with pytest.raises(ValueError):
        solver.solve(1, 1, 1)


def test_realizable_set_of_lift_parameters(triple256):
    assert len(triple256["realizable"]) == 128
    interior = [key for key in triple256["realizable"]
                if all(int(c) > 0 for c in key.split(","))]
    assert len(interior) == 106
    assert triple256["classes"] == 7
    assert triple256["unknowns"] == 343
    assert all(triple256["status"][key] == "unique"
               for key in triple256["realizable"])


def test_full_rank_system(params256):
    solver = TripleSolver(params256.eigen, params256.tensor, params256.krein)
    sys = solver.system(4, 4, 4)
    assert sys.d == 7
    assert len(sys.matrix[0]) == 343
    assert len(sys.matrix) >= 343
    assert len(sys.matrix) == len(sys.rhs)


def test_regularity_of_lift(x256):
    assert triple_regular_check(x256).ok


def test_regularity_witness_on_l40(l40):
    default = triple_regular_check(l40)
    assert default.ok  # representative scan fixes u = 0 and sees no defect
    full = triple_regular_check(l40, full=True)
    assert not full.ok
    u1, v1, w1 = full.first
    u2, v2, w2 = full.second
    tb = l40.table
    assert (tb[v1, w1], tb[u1, w1], tb[u1, v1]) == (
        tb[v2, w2], tb[u2, w2], tb[u2, v2]
    )
    t1 = triple_bruteforce(l40, u1, v1, w1)
    t2 = triple_bruteforce(l40, u2, v2, w2)
    assert not np.array_equal(t1.values, t2.values)


def test_vanishing_krein_kills_triple_sums(x256, params256):
    # for q[i][j][k] = 0 the weighted triple sum vanishes at every triple
    e = params256.eigen
    q = e.Q.data
    vanish = sorted(params256.krein.vanishing)[:6]
    rng = random.Random(2)
    triples = [tuple(rng.randrange(256) for _ in range(3)) for _ in range(3)]
    for (u, v, w) in triples:
        trip = triple_bruteforce(x256, u, v, w)
        for (i, j, k) in vanish:
            total = None
            for r in range(8):
                for s in range(8):
                    for t in range(8):
                        cnt = trip.value(r, s, t)
                        if cnt == 0:
                            continue
                        term = q[r][i] * q[s][j] * conj(q[t][k]) * cnt
                        total = term if total is None else total + term
            assert total is None or is_zero(total)


def test_local_params_match_restriction(x256, params256):
    solver = TripleSolver(params256.eigen, params256.tensor, params256.krein)
    s = 4
    tables = {}
    for c in range(8):
        if params256.tensor[s, s, c] > 0:
            sol = solver.solve(c, s, s)
            assert isinstance(sol, Unique)
            tables[(c, s, s)] = sol.tensor
    local_tensor, local_eigen = local_params_from_triples(tables, s, params256.tensor)
    restricted, _ = local_restrict(x256, 0, s)
    res = validate_scheme(restricted)
    assert np.array_equal(np.asarray(local_tensor), np.asarray(res.tensor))
    rows = {tuple(exact_str(x) for x in row) for row in local_eigen.P.data}
    direct = {tuple(exact_str(x) for x in row)
              for row in eigen_compute(restricted).P.data}
    assert rows == direct

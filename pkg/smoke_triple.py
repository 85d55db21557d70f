import random
import time

import numpy as np

from rouxschemes.constructions import build_corpus
from rouxschemes.exact import is_zero as ex_is_zero
from rouxschemes.groups import AbelianGroup, group_from_spec
from rouxschemes.roux import build_roux_matrix, find_labelings, lift_scheme
from rouxschemes.schemes import group_scheme, local_restrict, validate_scheme
from rouxschemes.spectra import eigen_compute, eigen_from_tensor, krein_params
from rouxschemes.triple import (
    Infeasible,
    TripleSolver,
    TriplyRegular,
    Unique,
    Underdetermined,
    Witness,
    local_params_from_triples,
    tensor_from_eigen,
    triple_bruteforce,
    triple_realizable,
    triple_regular_check,
    triple_report,
    triple_solve,
)

random.seed(7)

corpus = build_corpus()
sl8 = corpus["sl23_8"]
f9 = corpus["f9_cyc4"]
z3 = group_scheme(AbelianGroup((3,)))

# 40-point lift of f9 by Z2xZ2
g22 = group_from_spec("Z2xZ2")
labs = find_labelings(f9, g22)
b40 = build_roux_matrix(f9, g22, labs[0])
l40 = lift_scheme(b40)

# 1. brute-force counts satisfy sums + boundary on random triples
for name, t in (("z3", z3), ("sl8", sl8), ("f9", f9), ("l40", l40)):
    res = validate_scheme(t)
    assert res.ok
    for _ in range(25):
        u, v, w = (random.randrange(t.n) for _ in range(3))
        tt = triple_bruteforce(t, u, v, w)
        tt.verify(res.tensor)  # raises on any defect
    print(f"brute-force identities ok on {name}")

# 2. realizable set == set of (U,V,W) occurring among all triples (small schemes)
for name, t in (("z3", z3), ("sl8", sl8), ("f9", f9)):
    res = validate_scheme(t)
    occur = set()
    for u in range(t.n):
        for v in range(t.n):
            for w in range(t.n):
                tb = t.table
                occur.add((int(tb[v, w]), int(tb[u, w]), int(tb[u, v])))
    d1 = t.d + 1
    pred = {
        (U, V, W)
        for U in range(d1)
        for V in range(d1)
        for W in range(d1)
        if triple_realizable(res.tensor, U, V, W)
    }
    assert occur == pred, (name, occur ^ pred)
    print(f"realizable set matches occurrence on {name}: {len(pred)} triples")

# 3. tensor_from_eigen round-trips the intersection tensor
for name, t in (("z3", z3), ("sl8", sl8), ("f9", f9), ("l40", l40)):
    res = validate_scheme(t)
    e = eigen_from_tensor(res.tensor)
    assert np.array_equal(tensor_from_eigen(e), res.tensor)
    print(f"tensor_from_eigen round-trip ok on {name}")

# 4. solver vs brute force on every realizable triple of small schemes
for name, t in (("z3", z3), ("sl8", sl8), ("f9", f9)):
    res = validate_scheme(t)
    e = eigen_from_tensor(res.tensor)
    kr = krein_params(e)
    solver = TripleSolver(e, res.tensor, kr)
    print(f"{name}: order {solver.order}, width {solver.width}, "
          f"rows {len(solver._rows)}, vanishing {len(kr.vanishing)}, "
          f"full rank: {solver._solver.full_column_rank if solver._solver else None}")
    # representative triple per realizable key
    reps = {}
    tb = t.table
    for u in range(t.n):
        for v in range(t.n):
            for w in range(t.n):
                key = (int(tb[v, w]), int(tb[u, w]), int(tb[u, v]))
                reps.setdefault(key, (u, v, w))
    n_unique = n_under = 0
    for key, (u, v, w) in sorted(reps.items()):
        out = solver.solve(*key)
        if isinstance(out, Unique):
            n_unique += 1
            bt = triple_bruteforce(t, u, v, w)
            assert np.array_equal(out.tensor.values, bt.values), (name, key)
            out.tensor.verify(res.tensor)
        elif isinstance(out, Underdetermined):
            n_under += 1
            # brute-force counts must still satisfy the assembled system
        else:
            raise AssertionError(f"{name} {key}: unexpected {out}")
    print(f"{name}: {n_unique} unique (all match brute force), {n_under} underdetermined")

# 5. the un-realified system is satisfied by brute-force interior counts
for name, t in (("sl8", sl8), ("f9", f9)):
    res = validate_scheme(t)
    e = eigen_from_tensor(res.tensor)
    kr = krein_params(e)
    solver = TripleSolver(e, res.tensor, kr)
    d = t.d
    for _ in range(10):
        u, v, w = (random.randrange(t.n) for _ in range(3))
        bt = triple_bruteforce(t, u, v, w)
        if bt.U == 0 or bt.V == 0 or bt.W == 0:
            continue
        sys_ = solver.system(bt.U, bt.V, bt.W)
        x = [int(bt.values[i, j, k])
             for i in range(1, d + 1) for j in range(1, d + 1) for k in range(1, d + 1)]
        for row, rhs in zip(sys_.matrix, sys_.rhs):
            acc = 0
            for c, xi in zip(row, x):
                if xi:
                    acc = acc + c * xi
            diff = acc - rhs
            assert ex_is_zero(diff), (name, bt.U, bt.V, bt.W)
    print(f"system rows hold on brute-force counts for {name}")

# 6. degenerate triples collapse to the closed forms
for name, t in (("sl8", sl8), ("f9", f9)):
    res = validate_scheme(t)
    e = eigen_from_tensor(res.tensor)
    kr = krein_params(e)
    solver = TripleSolver(e, res.tensor, kr)
    for _ in range(8):
        u = random.randrange(t.n)
        v = random.randrange(t.n)
        for (a, b, c) in ((u, u, v), (u, v, u), (v, u, u)):
            bt = triple_bruteforce(t, a, b, c)
            out = solver.solve(bt.U, bt.V, bt.W)
            assert isinstance(out, Unique)
            assert np.array_equal(out.tensor.values, bt.values), (name, (bt.U, bt.V, bt.W))
    print(f"degenerate closed forms match brute force on {name}")

# 7. triple regularity
out = triple_regular_check(z3)
assert isinstance(out, TriplyRegular)
assert all(int(a.max()) <= 1 for a in out.tables.values())
print(f"z3 group scheme: TriplyRegular with {len(out.tables)} keys, counts 0/1")

t0 = time.time()
out = triple_regular_check(z3, full=True)
assert isinstance(out, TriplyRegular)
for name, t in (("sl8", sl8), ("f9", f9), ("l40", l40)):
    r1 = triple_regular_check(t)
    r2 = triple_regular_check(t, full=True)
    print(f"{name}: base-vertex scan {type(r1).__name__}, full scan {type(r2).__name__} "
          f"({time.time() - t0:.2f}s)")
    if isinstance(r2, Witness):
        b1 = triple_bruteforce(t, *r2.first)
        b2 = triple_bruteforce(t, *r2.second)
        assert (b1.U, b1.V, b1.W) == (b2.U, b2.V, b2.W)
        assert not np.array_equal(b1.values, b2.values)
        print(f"  witness checks out: {r2.first} vs {r2.second}")

# 8. local parameters from brute-force tables on the 40-point lift
res40 = validate_scheme(l40)
tens40 = res40.tensor
# symmetric thick class of valency 9
tra40 = [int(np.nonzero(tens40[i, :, 0])[0][0]) for i in range(l40.d + 1)]
kv40 = [int(tens40[i, i == 0 and 0 or tra40[i], 0]) for i in range(l40.d + 1)]
s_thick = next(i for i in range(1, l40.d + 1) if kv40[i] == 9 and tra40[i] == i)
z = 0
nbrs = [x for x in range(l40.n) if l40.table[z, x] == s_thick]
tables = {}
for c in range(l40.d + 1):
    found = None
    for x in nbrs:
        for y in nbrs:
            if l40.table[x, y] == c:
                found = (x, y)
                break
        if found:
            break
    if found:
        tables[(c, s_thick, s_thick)] = triple_bruteforce(l40, z, found[0], found[1])
loc_tensor, loc_eigen = local_params_from_triples(tables, s_thick, tens40)
restr, _ = local_restrict(l40, z, s_thick)
res_loc = validate_scheme(restr)
assert np.array_equal(loc_tensor, res_loc.tensor)
e_direct = eigen_compute(restr)
assert sorted(loc_eigen.mult) == sorted(e_direct.mult)
assert sum(loc_eigen.valencies) == 9
print(f"local params at s={s_thick} on l40 match local_restrict "
      f"(classes {loc_tensor.shape[0] - 1}, mult {sorted(loc_eigen.mult)})")

# 9. local params via solved tables where the system is unique
e40 = eigen_from_tensor(tens40)
kr40 = krein_params(e40)
solver40 = TripleSolver(e40, tens40, kr40)
print(f"l40 solver: rows {len(solver40._rows)}, vanishing {len(kr40.vanishing)}, "
      f"full rank: {solver40._solver.full_column_rank if solver40._solver else None}")
solved = {}
all_unique = True
for c in range(l40.d + 1):
    if not triple_realizable(tens40, c, s_thick, s_thick):
        continue
    out = solver40.solve(c, s_thick, s_thick)
    if isinstance(out, Unique):
        solved[(c, s_thick, s_thick)] = out.tensor
    else:
        all_unique = False
        print(f"  ({c},{s_thick},{s_thick}): {type(out).__name__}"
              + (f" rank {out.rank}" if isinstance(out, Underdetermined) else ""))
if all_unique:
    lt2, le2 = local_params_from_triples(solved, s_thick, tens40)
    assert np.array_equal(lt2, loc_tensor)
    print("solved tables reproduce the same local parameters")

# 10. report (small scheme)
rep = triple_report(eigen_from_tensor(validate_scheme(z3).tensor),
                    validate_scheme(z3).tensor,
                    krein_params(eigen_from_tensor(validate_scheme(z3).tensor)),
                    threads=2)
assert set(rep) == {"classes", "unknowns", "realizable", "status", "solutions"}
assert all(v == "unique" for v in rep["status"].values())
print(f"z3 report: {len(rep['realizable'])} realizable, all unique")

# 11. triple_solve one-shot wrapper
res9 = validate_scheme(f9)
e9 = eigen_from_tensor(res9.tensor)
kr9 = krein_params(e9)
keys = [k for k in rep["realizable"]]
out = triple_solve(e9, res9.tensor, kr9, 1, 1, 1)
print(f"one-shot triple_solve on f9 (1,1,1): {type(out).__name__}")
try:
    triple_solve(e9, res9.tensor, kr9, 1, 2, 0)
    raise AssertionError("unrealizable accepted")
except ValueError as exc:
    print(f"unrealizable rejected: {exc}")

print("TRIPLE SMOKE OK")

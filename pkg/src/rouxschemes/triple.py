"""Triple intersection numbers: counting, linear systems, local parameters.

For a vertex triple (u, v, w) the triple intersection numbers [i j k] count
the vertices x lying in relation i to u, j to v and k to w simultaneously.
Unlike the ordinary intersection numbers they are not scheme parameters:
they may depend on the chosen representative triple and not only on the
pair relations (U, V, W) between u, v and w.  Two exact facts nevertheless
tie them to the parameters:

* summing [i j k] over any one index gives an ordinary intersection number,
  and every count with an index 0 has a closed 0/1 value, and
* every vanishing Krein parameter q_{ij}^k = 0 imposes one linear relation
  with coefficients taken from the second eigenmatrix.

Together these give a linear system in the d^3 interior unknowns whose
coefficient matrix depends only on the parameters; the triple (U, V, W)
enters through the right-hand side alone.  When the system has full rank
the counts are forced, and a forced solution with a negative or fractional
entry rules out every scheme with those parameters.  This is the engine
that pins down the 63-point neighbourhood schemes inside any scheme with
the 256-point parameter set.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .exact import (
    Cyclotomic,
    GaussianRational,
    InconsistentSystem,
    ModularSolver,
    as_rational,
    conj,
    euler_phi,
    solve_exact,
)
from .schemes import transpose_from_tensor, validate_scheme
from .spectra import VerificationFailed, eigen_from_tensor, simplify_scalar


class LocalNotClosed(ValueError):
    """Triple counts around a base relation fail to define a scheme."""


# ---------------------------------------------------------------------------
# triple tensors


@dataclass(frozen=True)
class TripleTensor:
    """Counts [i j k] relative to a vertex triple with pair classes (U, V, W).

    The convention for the pair classes: (v, w) lies in relation U, (u, w)
    in relation V, and (u, v) in relation W.
    """

    values: np.ndarray
    U: int
    V: int
    W: int

    def __post_init__(self):
        v = np.ascontiguousarray(np.asarray(self.values, dtype=np.int64))
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def value(self, i, j, k):
        return int(self.values[i, j, k])

    def __eq__(self, other):
        if not isinstance(other, TripleTensor):
            return NotImplemented
        return (self.U, self.V, self.W) == (other.U, other.V, other.W) and np.array_equal(
            self.values, other.values
        )

    def verify(self, tensor):
        """Re-check the sum and boundary identities; raises VerificationFailed."""
        tensor = np.asarray(tensor, dtype=np.int64)
        tra = transpose_from_tensor(tensor)
        s = tensor.shape[0]
        if self.values.shape != (s, s, s):
            raise VerificationFailed("triple tensor shape does not match the scheme")
        vals = self.values
        for a in range(s):
            for b in range(s):
                if int(vals[:, a, b].sum()) != int(tensor[a, tra[b], self.U]):
                    raise VerificationFailed(f"sum over the first index fails at j={a}, k={b}")
                if int(vals[a, :, b].sum()) != int(tensor[a, tra[b], self.V]):
                    raise VerificationFailed(f"sum over the second index fails at i={a}, k={b}")
                if int(vals[a, b, :].sum()) != int(tensor[a, tra[b], self.W]):
                    raise VerificationFailed(f"sum over the third index fails at i={a}, j={b}")
                for i, j, k in ((0, a, b), (a, 0, b), (a, b, 0)):
                    want = _boundary(i, j, k, self.U, self.V, self.W, tra)
                    if int(vals[i, j, k]) != want:
                        raise VerificationFailed(
                            f"boundary value [{i} {j} {k}] = {int(vals[i, j, k])}, expected {want}"
                        )


def _boundary(i, j, k, U, V, W, tra):
    """Closed value of [i j k] when at least one index is 0."""
    if i == 0:
        return 1 if (tra[j] == W and tra[k] == V) else 0
    if j == 0:
        return 1 if (i == W and tra[k] == U) else 0
    if k == 0:
        return 1 if (i == V and j == U) else 0
    raise ValueError("not a boundary index")


def triple_bruteforce(t, u, v, w):
    """Triple counts at (u, v, w) by direct enumeration over the vertex set.

    The scheme table is assumed valid; only the vertex indices are checked.
    """
    n = t.n
    for z in (u, v, w):
        if not 0 <= z < n:
            raise ValueError("vertex out of range")
    s = t.d + 1
    tb = t.table
    code = (tb[u].astype(np.int64) * s + tb[v]) * s + tb[w]
    values = np.bincount(code, minlength=s * s * s).reshape(s, s, s)
    return TripleTensor(values=values, U=int(tb[v, w]), V=int(tb[u, w]), W=int(tb[u, v]))


def tensor_from_eigen(e):
    """Intersection tensor forced by exact eigen data.

    p_{ij}^k = (1/n) sum_l P_li P_lj Q_kl.  A parameter set that fails to
    produce nonnegative integers here does not come from any scheme.
    """
    d1 = e.P.rows
    scale = Fraction(1, e.n)
    out = np.zeros((d1, d1, d1), dtype=np.int64)
    for i in range(d1):
        for j in range(d1):
            prods = [e.P[ell, i] * e.P[ell, j] for ell in range(d1)]
            for k in range(d1):
                acc = 0
                for ell in range(d1):
                    acc = acc + prods[ell] * e.Q[k, ell]
                val = as_rational(simplify_scalar(acc * scale))
                if val is None or val.denominator != 1 or val < 0:
                    raise ValueError(
                        f"p[{i}][{j}][{k}] is not a nonnegative integer for these parameters"
                    )
                out[i, j, k] = int(val)
    return out


def triple_realizable(tensor, U, V, W):
    """Whether some vertex triple realizes the pair classes (U, V, W)."""
    tensor = np.asarray(tensor, dtype=np.int64)
    tra = transpose_from_tensor(tensor)
    return bool(tensor[tra[W], V, U] > 0)


# ---------------------------------------------------------------------------
# linear systems from vanishing Krein parameters


@dataclass(frozen=True)
class Unique:
    """The system forces a single nonnegative-integer triple tensor."""

    tensor: TripleTensor

    @property
    def ok(self):
        return True


@dataclass(frozen=True)
class Underdetermined:
    """Consistent system with rank below d^3: counts not forced."""

    rank: int

    @property
    def ok(self):
        return False


@dataclass(frozen=True)
class Infeasible:
    """The forced solution is negative, fractional, or contradictory."""

    reason: str = ""

    @property
    def ok(self):
        return False

    def __str__(self):
        return f"infeasible: {self.reason}"


@dataclass(frozen=True)
class TripleSystem:
    """The assembled linear system for one pair-class triple (U, V, W).

    Unknowns are the interior counts [i j k] with i, j, k in 1..d; the
    unknown (i, j, k) sits at column ((i-1)*d + (j-1))*d + (k-1).  Rows are
    the three sum families with boundary values substituted, followed by
    one row per vanishing Krein index; Krein rows carry exact (generally
    complex) coefficients from the second eigenmatrix.
    """

    matrix: list
    rhs: list
    d: int


def _scalar_order(x):
    if isinstance(x, Cyclotomic):
        return x.order
    if isinstance(x, GaussianRational):
        return 4 if x.im else 1
    return 1


def _scalar_coords(x, order, width):
    """Coordinates of x on the reduced power basis of the order-th roots."""
    if isinstance(x, GaussianRational):
        if not x.im:
            x = x.re
        elif order == 4:
            return [x.re, x.im]
        else:
            x = Cyclotomic.from_gaussian(x, order)
    if isinstance(x, Cyclotomic):
        coords = x.promote(order).canonical()
        return [Fraction(c) for c in coords]
    val = x if isinstance(x, Fraction) else Fraction(x)
    return [val] + [Fraction(0)] * (width - 1)


class TripleSolver:
    """Shared solver for the triple systems of one parameter set.

    The coefficient matrix is the same for every (U, V, W) -- only the
    right-hand side changes -- so the matrix is realified, scaled to
    integers and factorized modulo word-sized primes once, after which each
    triple costs one certified modular solve.
    """

    def __init__(self, eigen, tensor, krein):
        self.eigen = eigen
        self.tensor = np.asarray(tensor, dtype=np.int64)
        self.krein = krein
        self.d = eigen.d
        self.transpose = transpose_from_tensor(self.tensor)
        d = self.d
        q = eigen.Q
        self.order = 1
        for i in range(d + 1):
            for j in range(d + 1):
                self.order = math.lcm(self.order, _scalar_order(q[i, j]))
        self.width = euler_phi(self.order)
        self._vanishing = sorted(krein.vanishing)
        self._kraw = {}
        rows = []
        recipes = []
        for j in range(1, d + 1):
            for k in range(1, d + 1):
                row = [0] * d**3
                for ell in range(1, d + 1):
                    row[self._col(ell, j, k)] = 1
                rows.append(row)
                recipes.append(("A", j, k))
        for i in range(1, d + 1):
            for k in range(1, d + 1):
                row = [0] * d**3
                for ell in range(1, d + 1):
                    row[self._col(i, ell, k)] = 1
                rows.append(row)
                recipes.append(("B", i, k))
        for i in range(1, d + 1):
            for j in range(1, d + 1):
                row = [0] * d**3
                for ell in range(1, d + 1):
                    row[self._col(i, j, ell)] = 1
                rows.append(row)
                recipes.append(("C", i, j))
        checks = []
        for a, b, c in self._vanishing:
            coeffs = self._krein_coeffs(a, b, c)
            coord_lists = [_scalar_coords(x, self.order, self.width) for x in coeffs]
            for m in range(self.width):
                raw = [cl[m] for cl in coord_lists]
                if not any(raw):
                    checks.append(("K", a, b, c, m, 1))
                    continue
                den = math.lcm(*(v.denominator for v in raw))
                rows.append([int(v * den) for v in raw])
                recipes.append(("K", a, b, c, m, den))
        self._rows = rows
        self._recipes = recipes
        self._checks = checks
        self._solver = None
        if rows:
            try:
                self._solver = ModularSolver(rows)
            except ValueError:
                self._solver = None

    def _col(self, i, j, k):
        d = self.d
        return ((i - 1) * d + (j - 1)) * d + (k - 1)

    def _krein_coeffs(self, a, b, c):
        """Interior coefficients Q_ra Q_sb conj(Q_tc) in column order."""
        cached = self._kraw.get((a, b, c))
        if cached is not None:
            return cached
        d = self.d
        q = self.eigen.Q
        qa = [q[r, a] for r in range(d + 1)]
        qb = [q[s, b] for s in range(d + 1)]
        qc = [conj(q[t, c]) for t in range(d + 1)]
        out = []
        for r in range(1, d + 1):
            for s in range(1, d + 1):
                pair = qa[r] * qb[s]
                for t in range(1, d + 1):
                    out.append(simplify_scalar(pair * qc[t]))
        self._kraw[(a, b, c)] = out
        return out

    def _krein_rhs(self, a, b, c, U, V, W):
        """Exact right-hand side of the Krein row: minus the boundary part."""
        tra = self.transpose
        q = self.eigen.Q
        acc = 0
        for r, s, t in {(0, tra[W], tra[V]), (W, 0, tra[U]), (V, U, 0)}:
            acc = acc - q[r, a] * q[s, b] * conj(q[t, c])
        return simplify_scalar(acc)

    def _rhs(self, U, V, W):
        tra = self.transpose
        p = self.tensor
        cache = {}

        def kcoords(a, b, c):
            got = cache.get((a, b, c))
            if got is None:
                got = _scalar_coords(self._krein_rhs(a, b, c, U, V, W), self.order, self.width)
                cache[(a, b, c)] = got
            return got

        out = []
        for rec in self._recipes:
            if rec[0] == "A":
                _, j, k = rec
                out.append(int(p[j, tra[k], U]) - _boundary(0, j, k, U, V, W, tra))
            elif rec[0] == "B":
                _, i, k = rec
                out.append(int(p[i, tra[k], V]) - _boundary(i, 0, k, U, V, W, tra))
            elif rec[0] == "C":
                _, i, j = rec
                out.append(int(p[i, tra[j], W]) - _boundary(i, j, 0, U, V, W, tra))
            else:
                _, a, b, c, m, den = rec
                out.append(kcoords(a, b, c)[m] * den)
        violated = None
        for _, a, b, c, m, _ in self._checks:
            if kcoords(a, b, c)[m]:
                violated = (a, b, c)
                break
        return out, violated

    def system(self, U, V, W):
        """The un-realified system for (U, V, W), for inspection and tests."""
        self._require_realizable(U, V, W)
        d = self.d
        tra = self.transpose
        p = self.tensor
        matrix = []
        rhs = []
        for pos, rec in enumerate(self._recipes):
            if rec[0] == "A":
                _, j, k = rec
                rhs.append(int(p[j, tra[k], U]) - _boundary(0, j, k, U, V, W, tra))
            elif rec[0] == "B":
                _, i, k = rec
                rhs.append(int(p[i, tra[k], V]) - _boundary(i, 0, k, U, V, W, tra))
            elif rec[0] == "C":
                _, i, j = rec
                rhs.append(int(p[i, tra[j], W]) - _boundary(i, j, 0, U, V, W, tra))
            else:
                continue
            matrix.append(list(self._rows[pos]))
        for a, b, c in self._vanishing:
            matrix.append(list(self._krein_coeffs(a, b, c)))
            rhs.append(self._krein_rhs(a, b, c, U, V, W))
        return TripleSystem(matrix=matrix, rhs=rhs, d=d)

    def _require_realizable(self, U, V, W):
        d1 = self.d + 1
        for x in (U, V, W):
            if not 0 <= x < d1:
                raise ValueError("relation index out of range")
        if self.tensor[self.transpose[W], V, U] <= 0:
            raise ValueError(f"({U}, {V}, {W}) is not realizable for these parameters")

    def solve(self, U, V, W):
        """Unique, Underdetermined or Infeasible for the triple (U, V, W)."""
        self._require_realizable(U, V, W)
        if U == 0 or V == 0 or W == 0:
            return self._degenerate(U, V, W)
        rhs, violated = self._rhs(U, V, W)
        if violated is not None:
            a, b, c = violated
            return Infeasible(
                f"the Krein relation at ({a}, {b}, {c}) forces a nonzero boundary combination"
            )
        if self._solver is not None and self._solver.full_column_rank:
            x = self._solver.solve(rhs)
            if x is not None:
                return self._finish(x, U, V, W)
        return self._generic(rhs, U, V, W)

    def _generic(self, rhs, U, V, W):
        try:
            res = solve_exact(self._rows, rhs)
        except InconsistentSystem:
            return Infeasible("the sum and Krein equations are inconsistent")
        if res.status != "unique":
            return Underdetermined(rank=res.rank)
        return self._finish(res.solution, U, V, W)

    def _degenerate(self, U, V, W):
        """Closed forms when two of the three vertices coincide."""
        d1 = self.d + 1
        tra = self.transpose
        p = self.tensor
        values = np.zeros((d1, d1, d1), dtype=np.int64)
        if W == 0:
            for i in range(d1):
                values[i, i, :] = p[i, :, V][tra]
        elif V == 0:
            for i in range(d1):
                values[i, :, i] = p[:, tra[i], tra[W]]
        else:
            for j in range(d1):
                values[:, j, j] = p[:, tra[j], W]
        return Unique(TripleTensor(values=values, U=U, V=V, W=W))

    def _finish(self, solution, U, V, W):
        d = self.d
        ints = []
        for idx, x in enumerate(solution):
            val = x if isinstance(x, Fraction) else Fraction(x)
            if val.denominator != 1 or val < 0:
                i = idx // (d * d) + 1
                j = (idx // d) % d + 1
                k = idx % d + 1
                return Infeasible(f"forced count [{i} {j} {k}] = {val}")
            ints.append(int(val))
        tra = self.transpose
        values = np.zeros((d + 1, d + 1, d + 1), dtype=np.int64)
        values[1:, 1:, 1:] = np.array(ints, dtype=np.int64).reshape(d, d, d)
        for a in range(d + 1):
            for b in range(d + 1):
                values[0, a, b] = _boundary(0, a, b, U, V, W, tra)
                values[a, 0, b] = _boundary(a, 0, b, U, V, W, tra)
                values[a, b, 0] = _boundary(a, b, 0, U, V, W, tra)
        return Unique(TripleTensor(values=values, U=U, V=V, W=W))


def triple_solve(eigen, tensor, krein, U, V, W):
    """Solve for the triple counts at pair classes (U, V, W) from parameters.

    One-shot convenience around TripleSolver; use the class directly when
    solving many triples of the same parameter set.
    """
    return TripleSolver(eigen, tensor, krein).solve(U, V, W)


# ---------------------------------------------------------------------------
# triple regularity


@dataclass(frozen=True)
class TriplyRegular:
    """Counts depend only on the pair classes; tables keyed by (U, V, W)."""

    tables: dict

    @property
    def ok(self):
        return True


@dataclass(frozen=True)
class Witness:
    """Two vertex triples with equal pair classes but different counts."""

    first: tuple
    second: tuple

    @property
    def ok(self):
        return False


def triple_regular_check(t, full=False, validated=None):
    """Certify triple regularity or exhibit a counterexample pair.

    The default scans every triple through the base vertex 0; with
    full=True all n^3 triples are compared (n <= 300).
    """
    res = validate_scheme(t) if validated is None else validated
    if not res.ok:
        raise ValueError(f"not a valid commutative scheme: {res}")
    n = t.n
    if full and n > 300:
        raise ValueError("full triple scan is limited to 300 vertices")
    s = t.d + 1
    s3 = s * s * s
    tb = t.table.astype(np.int64)
    offs = (np.arange(n, dtype=np.int64) * s3)[:, None]
    ref = {}
    seen = {}
    for u in range(n) if full else (0,):
        base_u = tb[u] * (s * s)
        for v in range(n):
            flat = np.bincount(
                (offs + (base_u + tb[v] * s)[None, :] + tb).ravel(), minlength=n * s3
            )
            counts = flat.reshape(n, s, s, s)
            kv = int(tb[u, v])
            row_u = tb[u]
            row_v = tb[v]
            for w in range(n):
                key = (int(row_v[w]), int(row_u[w]), kv)
                prev = ref.get(key)
                if prev is None:
                    ref[key] = counts[w].copy()
                    seen[key] = (u, v, w)
                elif not np.array_equal(prev, counts[w]):
                    return Witness(first=seen[key], second=(u, v, w))
    tables = {}
    for key in sorted(ref):
        arr = ref[key]
        arr.setflags(write=False)
        tables[key] = arr
    return TriplyRegular(tables=tables)


# ---------------------------------------------------------------------------
# local parameters from solved triples


def local_params_from_triples(tables, s, tensor):
    """Neighbourhood scheme parameters read off solved triple tensors.

    tables maps (U, V, W) to TripleTensor; the entries with V = W = s
    describe counts around a base pair in the symmetric relation s, and
    [s a b'] is the local intersection number p_ab^c of the scheme induced
    on a point's relation-s neighbourhood.  Returns the local tensor
    together with its exact eigen data.
    """
    tensor = np.asarray(tensor, dtype=np.int64)
    tra = transpose_from_tensor(tensor)
    if tra[s] != s:
        raise LocalNotClosed("base relation is not symmetric")
    d1 = tensor.shape[0]
    cands = [c for c in range(d1) if tensor[s, s, c] > 0]
    missing = [c for c in cands if (c, s, s) not in tables]
    if missing:
        raise ValueError(f"missing solution tables for pair classes {missing}")
    pos = {c: a for a, c in enumerate(cands)}
    r = len(cands)
    local = np.zeros((r, r, r), dtype=np.int64)
    for c in cands:
        tt = tables[(c, s, s)]
        for a in cands:
            for b in cands:
                local[pos[a], pos[b], pos[c]] = tt.value(s, a, tra[b])
        for b in cands:
            if int(local[:, pos[b], pos[c]].sum()) != int(tensor[s, tra[b], s]):
                raise LocalNotClosed("counts leak outside the neighbourhood classes")
        for a in cands:
            if int(local[pos[a], :, pos[c]].sum()) != int(tensor[s, tra[a], s]):
                raise LocalNotClosed("counts leak outside the neighbourhood classes")
    try:
        eigen = eigen_from_tensor(local)
    except (ValueError, ArithmeticError) as exc:
        raise LocalNotClosed(f"local counts do not define a scheme: {exc}") from None
    return local, eigen


# ---------------------------------------------------------------------------
# reports


def triple_report(eigen, tensor, krein, threads=1):
    """Solve every realizable (U, V, W) and collect a JSON-ready report."""
    solver = TripleSolver(eigen, tensor, krein)
    d1 = solver.d + 1
    tra = solver.transpose
    p = solver.tensor
    triples = [
        (U, V, W)
        for U in range(d1)
        for V in range(d1)
        for W in range(d1)
        if p[tra[W], V, U] > 0
    ]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda tr: solver.solve(*tr), triples))
    else:
        results = [solver.solve(*tr) for tr in triples]
    report = {
        "classes": solver.d,
        "unknowns": solver.d**3,
        "realizable": [f"{U},{V},{W}" for U, V, W in triples],
        "status": {},
        "solutions": {},
    }
    for (U, V, W), res in zip(triples, results):
        key = f"{U},{V},{W}"
        if isinstance(res, Unique):
            report["status"][key] = "unique"
            report["solutions"][key] = res.tensor.values.tolist()
        elif isinstance(res, Underdetermined):
            report["status"][key] = f"underdetermined rank {res.rank}"
        else:
            report["status"][key] = str(res)
    return report

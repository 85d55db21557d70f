"""Relation tables of commutative association schemes.

A scheme on n points with d non-identity classes is stored as an n x n
table of relation indices 0..d, relation 0 being the identity.  Validation
checks the five defining axioms in order and either returns the exact
intersection tensor p[i][j][k] or a concrete witness for the first axiom
that fails.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .groups import AbelianGroup, abelian_type_from_orders, find_group_isomorphism


class NonGroupClosure(ValueError):
    pass


class NotTransitive(ValueError):
    pass


class NotCommutative(ValueError):
    pass


class LocalNotScheme(ValueError):
    pass


class SchemeTable:
    """Immutable n x n relation table."""

    def __init__(self, table):
        tb = np.asarray(table, dtype=np.int64)
        if tb.ndim != 2 or tb.shape[0] != tb.shape[1]:
            raise ValueError("table must be square")
        tb = tb.copy()
        tb.setflags(write=False)
        self.table = tb
        self.n = int(tb.shape[0])
        self.d = int(tb.max())

    def adjacency(self, i):
        """0/1 integer adjacency matrix of relation i."""
        return (self.table == i).astype(np.int64)

    def __eq__(self, other):
        return isinstance(other, SchemeTable) and np.array_equal(
            self.table, other.table
        )

    __hash__ = None

    def __repr__(self):
        return f"SchemeTable(n={self.n}, d={self.d})"

    # -- wire format -------------------------------------------------------

    def to_json(self):
        payload = {
            "n": self.n,
            "d": self.d,
            "table": [[int(x) for x in row] for row in self.table],
        }
        return json.dumps(payload)

    @classmethod
    def from_json(cls, text):
        obj = json.loads(text)
        for key in ("n", "d", "table"):
            if key not in obj:
                raise ValueError(f"scheme file missing field {key!r}")
        t = cls(obj["table"])
        if t.n != obj["n"] or t.d != obj["d"]:
            raise ValueError("scheme file header disagrees with table")
        tb = t.table
        diag_ok = (np.diag(tb) == 0).all() and (tb == 0).sum() == t.n
        if not diag_ok:
            raise ValueError("relation 0 must be exactly the identity relation")
        return t

    def to_file(self, path):
        with open(path, "w") as fh:
            fh.write(self.to_json())
            fh.write("\n")

    @classmethod
    def from_file(cls, path):
        with open(path) as fh:
            return cls.from_json(fh.read())


@dataclass
class Invalid:
    axiom: int
    i: int | None = None
    j: int | None = None
    k: int | None = None
    x: int | None = None
    y: int | None = None
    note: str = ""

    @property
    def ok(self):
        return False

    def __str__(self):
        where = ", ".join(
            f"{name}={val}"
            for name, val in zip("ijkxy", (self.i, self.j, self.k, self.x, self.y))
            if val is not None
        )
        return f"axiom ({self.axiom}) fails [{where}] {self.note}".strip()


@dataclass
class Valid:
    tensor: np.ndarray
    transpose: list[int] = field(default_factory=list)

    @property
    def ok(self):
        return True


def _int_matmul(a, b):
    # float64 matmul is exact here: entries are counts bounded by n <= 2^20,
    # far inside the 2^53 integer window, and BLAS is much faster than the
    # int64 kernel
    return np.rint(a.astype(np.float64) @ b.astype(np.float64)).astype(np.int64)


def validate_scheme(t):
    """Check the five scheme axioms; Valid(tensor) or Invalid(witness)."""
    tb = t.table
    n = t.n
    d = t.d

    bad = np.nonzero(np.diag(tb) != 0)[0]
    if bad.size:
        x = int(bad[0])
        return Invalid(1, x=x, y=x, note="diagonal entry not 0")
    off_zero = (tb == 0) & ~np.eye(n, dtype=bool)
    if off_zero.any():
        x, y = map(int, np.argwhere(off_zero)[0])
        return Invalid(1, x=x, y=y, note="class 0 off the diagonal")

    if tb.min() < 0:
        x, y = map(int, np.argwhere(tb < 0)[0])
        return Invalid(2, x=x, y=y, note="negative relation index")
    counts = np.bincount(tb.ravel(), minlength=d + 1)
    empty = np.nonzero(counts == 0)[0]
    if empty.size:
        return Invalid(2, i=int(empty[0]), note="empty relation class")

    tt = tb.T
    transpose = [0] * (d + 1)
    for jcls in range(d + 1):
        mask = tb == jcls
        vals = tt[mask]
        v0 = int(vals[0])
        diff = np.nonzero(vals != v0)[0]
        if diff.size:
            pos = np.argwhere(mask)[int(diff[0])]
            return Invalid(3, i=jcls, x=int(pos[0]), y=int(pos[1]),
                           note="transpose is not a single class")
        transpose[jcls] = v0
    for jcls in range(d + 1):
        if transpose[transpose[jcls]] != jcls:
            return Invalid(3, i=jcls, note="transpose map is not an involution")

    adj = [(tb == i) for i in range(d + 1)]
    flat_idx = [np.flatnonzero(tb.ravel() == k) for k in range(d + 1)]
    p = np.zeros((d + 1, d + 1, d + 1), dtype=np.int64)
    for i in range(d + 1):
        ai = adj[i].astype(np.float64)
        for j in range(d + 1):
            m = np.rint(ai @ adj[j].astype(np.float64)).astype(np.int64)
            flat = m.ravel()
            for k in range(d + 1):
                vals = flat[flat_idx[k]]
                v0 = int(vals[0])
                diff = np.nonzero(vals != v0)[0]
                if diff.size:
                    bad_flat = int(flat_idx[k][int(diff[0])])
                    return Invalid(4, i=i, j=j, k=k,
                                   x=bad_flat // n, y=bad_flat % n,
                                   note="p_ij^k not constant")
                p[i, j, k] = v0
    mism = np.nonzero(p != p.transpose(1, 0, 2))
    if mism[0].size:
        i, j, k = (int(v[0]) for v in mism)
        return Invalid(5, i=i, j=j, k=k, note="p_ij^k != p_ji^k")
    return Valid(p, transpose)


def intersection_tensor(t):
    res = validate_scheme(t)
    if not res.ok:
        raise ValueError(f"not an association scheme: {res}")
    return res.tensor


def valencies(tensor, transpose=None):
    """k_i = p[i][i'][0] for each relation i."""
    d1 = tensor.shape[0]
    if transpose is None:
        transpose = transpose_from_tensor(tensor)
    return [int(tensor[i, transpose[i], 0]) for i in range(d1)]


def transpose_from_tensor(tensor):
    """Recover i' from the tensor: p[i][j][0] > 0 iff j = i'."""
    d1 = tensor.shape[0]
    out = []
    for i in range(d1):
        nz = np.nonzero(tensor[i, :, 0])[0]
        if nz.size != 1:
            raise ValueError("tensor does not define a transpose map")
        out.append(int(nz[0]))
    return out


@dataclass
class ThinRadical:
    indices: list[int]           # scheme classes of valency 1, sorted
    mult: list[list[int]]        # composition table over positions in indices
    group: AbelianGroup          # canonical invariant-factor form
    embedding: list[int]         # group element index -> scheme class index

    @property
    def order(self):
        return len(self.indices)


def thin_radical(t, validated=None):
    """The group of valency-1 relations, identified as an abstract group."""
    res = validated or validate_scheme(t)
    if not res.ok:
        raise ValueError(f"not an association scheme: {res}")
    p = res.tensor
    ks = valencies(p, res.transpose)
    thin = [i for i, k in enumerate(ks) if k == 1]
    pos = {c: a for a, c in enumerate(thin)}
    r = len(thin)
    mult = [[0] * r for _ in range(r)]
    for a, s in enumerate(thin):
        for b, u in enumerate(thin):
            nz = np.nonzero(p[s, u])[0]
            if nz.size != 1 or p[s, u, nz[0]] != 1 or int(nz[0]) not in pos:
                raise NonGroupClosure(
                    f"thin classes {s}, {u} do not compose to a thin class"
                )
            mult[a][b] = pos[int(nz[0])]
    group = abelian_type_from_orders(
        [_order_in_table(mult, 0, a) for a in range(r)]
    )
    if group is None:
        raise NonGroupClosure("thin radical is not an abelian group")
    im = find_group_isomorphism(group, mult, identity=0)
    if im is None:
        raise NonGroupClosure("no isomorphism onto the thin radical")
    embedding = [thin[im[a]] for a in range(r)]
    return ThinRadical(thin, mult, group, embedding)


def _order_in_table(mult, identity, x):
    k = 1
    cur = x
    while cur != identity:
        cur = mult[cur][x]
        k += 1
        if k > len(mult):
            raise NonGroupClosure("element of infinite order in table")
    return k


def local_restrict(t, z, i):
    """Restrict the scheme to R_i(z); returns (SchemeTable, class map).

    class_map[local class] = original class.  Raises LocalNotScheme if the
    restriction fails the axioms.
    """
    tb = t.table
    if not (0 <= z < t.n):
        raise ValueError("base vertex out of range")
    if not (0 <= i <= t.d):
        raise ValueError("relation index out of range")
    verts = np.nonzero(tb[z] == i)[0]
    if verts.size == 0:
        raise ValueError(f"relation {i} is empty at vertex {z}")
    sub = tb[np.ix_(verts, verts)]
    present = sorted(int(c) for c in np.unique(sub))
    if present[0] != 0:
        raise LocalNotScheme("restriction has no diagonal class")
    relabel = {c: a for a, c in enumerate(present)}
    local = np.vectorize(relabel.get)(sub)
    lt = SchemeTable(local)
    res = validate_scheme(lt)
    if not res.ok:
        raise LocalNotScheme(f"restriction fails: {res}")
    return lt, present


def orbital_scheme(n, generators):
    """Scheme of orbitals of the permutation group named by the generators.

    Orbits of pairs are computed by breadth-first search directly on pairs,
    so the group itself is never materialized.  Non-diagonal classes are
    numbered by their smallest pair in row-major order.
    """
    gens = []
    for g in generators:
        g = list(g)
        if sorted(g) != list(range(n)):
            raise ValueError("generator is not a permutation of 0..n-1")
        gens.append(g)
    if n * n > 10**6:
        raise ValueError("pair space exceeds the 10^6 search cap")

    # transitivity on points
    seen = {0}
    frontier = [0]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = g[x]
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    if len(seen) != n:
        raise NotTransitive(f"point orbit of 0 has size {len(seen)} < {n}")

    table = np.full((n, n), -1, dtype=np.int64)
    label = 0
    for x in range(n):
        for y in range(n):
            if table[x, y] != -1:
                continue
            if x == y:
                cls = 0
            else:
                label += 1
                cls = label
            stack = [(x, y)]
            table[x, y] = cls
            while stack:
                u, v = stack.pop()
                for g in gens:
                    uu, vv = g[u], g[v]
                    if table[uu, vv] == -1:
                        table[uu, vv] = cls
                        stack.append((uu, vv))
    t = SchemeTable(table)
    res = validate_scheme(t)
    if not res.ok:
        if res.axiom == 5:
            raise NotCommutative(f"orbital scheme is not commutative: {res}")
        raise ValueError(f"orbital closure failed validation: {res}")
    return t


def group_scheme(group):
    """The translation scheme of an abelian group: table[x][y] = y - x."""
    n = group.order
    table = np.zeros((n, n), dtype=np.int64)
    for i, a in enumerate(group.elements):
        for j, b in enumerate(group.elements):
            table[i, j] = group.index[group.op(group.inv(a), b)]
    return SchemeTable(table)

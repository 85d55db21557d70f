"""Roux matrices and the association schemes they generate.

A roux matrix of dimension N over a finite abelian group G is an N x N
array with Zero on the diagonal, group elements elsewhere, and
entry(j, i) = entry(i, j)^-1, whose square in the group ring satisfies

    B^2 = (N - 1) I + sum_g c_g gB

for nonnegative integers c_g, the roux parameters.  This module verifies
that identity exactly, builds roux matrices from association schemes that
carry a compatible labeling, lifts a roux matrix to a scheme on N|G|
points, decomposes such schemes back into their local data, and exports
the equiangular tight frames obtained by evaluating B at characters of G.
"""

import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np

from .constructions import Indivisible
from .exact import Cyclotomic, ExactMatrix, GaussianRational
from .groups import AbelianGroup, group_from_spec
from .schemes import (
    LocalNotScheme,
    NonGroupClosure,
    SchemeTable,
    local_restrict,
    thin_radical,
    valencies,
    validate_scheme,
)
from .spectra import NotRoux, VerificationFailed, simplify_scalar


class ClassCountMismatch(ValueError):
    """Scheme does not have exactly |G| nondiagonal classes."""


class IncompatiblePair(ValueError):
    """Scheme, group, and labeling do not satisfy the counting identity."""


class PrecisionTooLow(ArithmeticError):
    """Requested floating precision cannot certify the frame."""


# ---------------------------------------------------------------------------
# the matrix type


class RouxMatrix:
    """Square matrix over {Zero} union G.

    Entries are stored as integer codes: 0 for Zero, k >= 1 for the
    (k-1)-th group element in canonical order.  The constructor enforces
    the structural invariants (Zero exactly on the diagonal, transposition
    inverts every entry); whether B actually satisfies the roux identity
    is the job of verify_roux.
    """

    def __init__(self, group, entries):
        e = np.asarray(entries, dtype=np.int64)
        if e.ndim != 2 or e.shape[0] != e.shape[1]:
            raise ValueError("entries must be square")
        n = int(e.shape[0])
        r = group.order
        if np.any(np.diag(e) != 0):
            raise ValueError("diagonal entries must be Zero")
        off = ~np.eye(n, dtype=bool)
        if n > 1 and (e[off].min() < 1 or e[off].max() > r):
            raise ValueError("off-diagonal entries must code group elements")
        inv_code = np.zeros(r + 1, dtype=np.int64)
        for k in range(r):
            inv_code[k + 1] = group.index[group.inv(group.elements[k])] + 1
        if not np.array_equal(e.T, inv_code[e]):
            raise ValueError("transposition must invert every entry")
        e = e.copy()
        e.setflags(write=False)
        self.group = group
        self.entries = e
        self.dim = n

    def element(self, i, j):
        """Group element at (i, j), or None for Zero."""
        code = int(self.entries[i, j])
        return None if code == 0 else self.group.elements[code - 1]

    def __eq__(self, other):
        return (
            isinstance(other, RouxMatrix)
            and self.group == other.group
            and np.array_equal(self.entries, other.entries)
        )

    __hash__ = None

    def __repr__(self):
        return f"RouxMatrix(dim={self.dim}, group={self.group.spec_string()})"

    # -- wire format -------------------------------------------------------

    def to_json(self):
        payload = {
            "dim": self.dim,
            "group": self.group.spec_string(),
            "entries": [[int(x) for x in row] for row in self.entries],
        }
        return json.dumps(payload)

    @classmethod
    def from_json(cls, text):
        obj = json.loads(text)
        for key in ("dim", "group", "entries"):
            if key not in obj:
                raise ValueError(f"roux file missing field {key!r}")
        b = cls(group_from_spec(obj["group"]), obj["entries"])
        if b.dim != obj["dim"]:
            raise ValueError("roux file header disagrees with entries")
        return b

    def to_file(self, path):
        with open(path, "w") as fh:
            fh.write(self.to_json())
            fh.write("\n")

    @classmethod
    def from_file(cls, path):
        with open(path) as fh:
            return cls.from_json(fh.read())


@dataclass
class Roux:
    """Verified roux parameters c: G -> nonnegative integer."""

    params: dict

    @property
    def ok(self):
        return True

    def param_list(self, group):
        return [self.params[g] for g in group.elements]


def verify_roux(b):
    """Check B^2 = (N-1)I + sum c_g gB in the group ring, exactly.

    Returns Roux(params) or NotRoux with the first violating entry as
    witness.  The entire computation is integer counting: entry (i, j) of
    B^2 is the multiset {entry(i,v) entry(v,j)}, which must consist of
    N - 1 copies of the identity on the diagonal and c_g copies of
    g entry(i,j) elsewhere.
    """
    g = b.group
    r = g.order
    n = b.dim
    e = b.entries
    comp = np.zeros((r + 1, r + 1), dtype=np.int64)
    for a in range(r):
        for c in range(r):
            comp[a + 1, c + 1] = g.index[g.op(g.elements[a], g.elements[c])] + 1
    params = None
    for i in range(n):
        row = e[i]
        for j in range(n):
            counts = np.bincount(comp[row, e[:, j]], minlength=r + 1)
            if i == j:
                if counts[1] != n - 1:
                    return NotRoux(
                        f"diagonal entry ({i},{i}) of B^2 is not (N-1) identity",
                        witness=(i, i),
                    )
                continue
            shift = comp[1:, e[i, j]]
            found = [int(counts[shift[k]]) for k in range(r)]
            if params is None:
                if sum(found) != n - 2:
                    return NotRoux(
                        f"coefficients at ({i},{j}) sum to {sum(found)}, "
                        f"not N - 2 = {n - 2}",
                        witness=(i, j),
                    )
                bad = next(
                    (
                        k
                        for k in range(r)
                        if found[k] != found[g.index[g.inv(g.elements[k])]]
                    ),
                    None,
                )
                if bad is not None:
                    return NotRoux(
                        f"coefficient of element {g.elements[bad]} differs "
                        "from its inverse",
                        witness=(i, j),
                    )
                params = found
            elif found != params:
                return NotRoux(
                    f"group-ring coefficients at ({i},{j}) are {found}, "
                    f"elsewhere {params}",
                    witness=(i, j),
                )
    if params is None:
        if n >= 2:
            params = [0] * r
        else:
            return NotRoux("no off-diagonal entries to carry the identity")
    return Roux({g.elements[k]: params[k] for k in range(r)})


# ---------------------------------------------------------------------------
# construction from a compatible (scheme, group, labeling) triple


@dataclass
class Compatible:
    @property
    def ok(self):
        return True


@dataclass
class Fails:
    h: tuple
    m: tuple
    lhs: int
    rhs: int

    @property
    def ok(self):
        return False

    def __str__(self):
        return (
            f"counting identity fails at h={self.h}, m={self.m}: "
            f"{self.lhs} != {self.rhs}"
        )


def compat_check(y, group, labeling, validated=None):
    """Check sum_g p(g^-1, gh; m) = k(h^-1 m) - [h = 1] for all h, m in G.

    labeling maps each group element to a nondiagonal class index of y.
    Raises ClassCountMismatch when y does not have |G| nondiagonal
    classes; the identity itself failing is a value, not an error.
    """
    res = validated or validate_scheme(y)
    if not res.ok:
        raise ValueError(f"not an association scheme: {res}")
    if y.d != group.order:
        raise ClassCountMismatch(
            f"{y.d} nondiagonal classes, |G| = {group.order}"
        )
    if set(labeling) != set(group.elements) or sorted(
        labeling.values()
    ) != list(range(1, y.d + 1)):
        raise ValueError("labeling is not a bijection from G to the classes")
    p = res.tensor
    ks = valencies(p, res.transpose)
    one = group.identity
    for h in group.elements:
        for m in group.elements:
            lhs = sum(
                int(p[labeling[group.inv(g)], labeling[group.op(g, h)], labeling[m]])
                for g in group.elements
            )
            rhs = ks[labeling[group.op(group.inv(h), m)]] - (1 if h == one else 0)
            if lhs != rhs:
                return Fails(h, m, lhs, rhs)
    return Compatible()


def _labeling_defect(group, labeling, d, transpose):
    """Structural reason a labeling is unusable, or None."""
    if set(labeling) != set(group.elements):
        return "labeling keys are not the group elements"
    vals = sorted(labeling.values())
    if vals != list(range(1, d + 1)):
        return "labeling values are not the nondiagonal classes"
    for g in group.elements:
        if transpose[labeling[g]] != labeling[group.inv(g)]:
            return (
                f"transpose of class {labeling[g]} is not the class of "
                f"{group.inv(g)}"
            )
    return None


def find_labelings(y, group):
    """All bijections G -> nondiagonal classes passing both conditions.

    Filters the transpose condition first, then the counting identity, and
    returns labelings in lexicographic order of their class assignments.
    An empty list means the pair admits no roux construction.
    """
    res = validate_scheme(y)
    if not res.ok:
        raise ValueError(f"not an association scheme: {res}")
    if y.d != group.order:
        return []
    out = []
    for perm in itertools.permutations(range(1, y.d + 1)):
        labeling = dict(zip(group.elements, perm))
        if _labeling_defect(group, labeling, y.d, res.transpose):
            continue
        if compat_check(y, group, labeling, validated=res).ok:
            out.append(labeling)
    return out


def build_roux_matrix(y, group, labeling):
    """Border the labeled adjacency matrices into a roux matrix.

    The identity element's matrix receives the all-ones border (row and
    column 0); every other element contributes its class on the interior
    block.  Dimension is |y| + 1.  Raises IncompatiblePair unless the
    triple passes compat_check and the transpose condition.
    """
    res = validate_scheme(y)
    if not res.ok:
        raise ValueError(f"not an association scheme: {res}")
    if y.d != group.order:
        raise ClassCountMismatch(
            f"{y.d} nondiagonal classes, |G| = {group.order}"
        )
    defect = _labeling_defect(group, labeling, y.d, res.transpose)
    if defect:
        raise IncompatiblePair(defect)
    chk = compat_check(y, group, labeling, validated=res)
    if not chk.ok:
        raise IncompatiblePair(str(chk))
    n = y.n
    entries = np.zeros((n + 1, n + 1), dtype=np.int64)
    entries[0, 1:] = 1
    entries[1:, 0] = 1
    code = np.zeros(y.d + 1, dtype=np.int64)
    for g in group.elements:
        code[labeling[g]] = group.index[g] + 1
    entries[1:, 1:] = code[y.table]
    return RouxMatrix(group, entries)


# ---------------------------------------------------------------------------
# lifting and decomposing


def lift_scheme(b):
    """Scheme on dim * |G| points from the regular representation of G.

    Point (i, h) is indexed i|G| + h; classes 0..r-1 are the thin
    relations in group-element order, classes r..2r-1 the thick ones.
    """
    chk = verify_roux(b)
    if not chk.ok:
        raise ValueError(str(chk))
    g = b.group
    r = g.order
    n = b.dim
    # w[a][b] = index of (g_a)^-1 g_b; the diagonal block of the lift
    w = np.zeros((r, r), dtype=np.int64)
    for a in range(r):
        for c in range(r):
            w[a, c] = g.index[g.op(g.inv(g.elements[a]), g.elements[c])]
    thick = np.zeros((r, r, r), dtype=np.int64)
    for k in range(r):
        ginv = g.inv(g.elements[k])
        for a in range(r):
            for c in range(r):
                thick[k, a, c] = r + g.index[
                    g.op(g.op(g.inv(g.elements[a]), g.elements[c]), ginv)
                ]
    table = np.zeros((n * r, n * r), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            code = int(b.entries[i, j])
            block = w if code == 0 else thick[code - 1]
            table[i * r : (i + 1) * r, j * r : (j + 1) * r] = block
    out = SchemeTable(table)
    res = validate_scheme(out)
    if not res.ok:
        raise VerificationFailed(f"lift fails the scheme axioms: {res}")
    return out


@dataclass
class Decomposition:
    """Local data recovering a scheme as lift(build_roux_matrix(...))."""

    local: SchemeTable
    group: AbelianGroup
    labeling: dict
    base_vertex: int
    thick_class: int

    @property
    def ok(self):
        return True


@dataclass
class NotDecomposable:
    reason: str

    @property
    def ok(self):
        return False

    def __str__(self):
        return f"not decomposable: {self.reason}"


def decompose(x, base_vertex=0):
    """Split a scheme into (local scheme, thin radical, labeling).

    Requires the thin radical to act regularly on the thick classes with
    at least one symmetric thick class; takes the lexicographically first
    symmetric thick class and the given base vertex, restricts to its
    neighbourhood, and certifies entry by entry that the lift of the
    rebuilt roux matrix reproduces x under (vertex, translate)
    coordinates.  Failure is returned as a value, never raised.
    """
    res = validate_scheme(x)
    if not res.ok:
        raise ValueError(f"not an association scheme: {res}")
    try:
        radical = thin_radical(x, validated=res)
    except NonGroupClosure as exc:
        return NotDecomposable(str(exc))
    group = radical.group
    r = group.order
    thin_set = set(radical.indices)
    thick = [c for c in range(1, x.d + 1) if c not in thin_set]
    if not thick:
        return NotDecomposable("no thick relations")
    if len(thick) != r:
        return NotDecomposable(
            f"{len(thick)} thick classes against a thin radical of order {r}"
        )
    p = res.tensor
    thick_set = set(thick)
    act = {}
    for s in thick:
        for a in range(r):
            t = radical.embedding[a]
            nz = np.nonzero(p[s, t])[0]
            if (
                nz.size != 1
                or p[s, t, nz[0]] != 1
                or int(nz[0]) not in thick_set
            ):
                return NotDecomposable(
                    "thin radical does not act on the thick classes"
                )
            act[s, a] = int(nz[0])
    sym = [s for s in thick if res.transpose[s] == s]
    if not sym:
        return NotDecomposable("no symmetric thick relation")
    s1 = sym[0]
    orbit = [act[s1, a] for a in range(r)]
    if len(set(orbit)) != r:
        return NotDecomposable(
            "thin radical does not act regularly on the thick classes"
        )
    try:
        local, class_map = local_restrict(x, base_vertex, s1)
    except LocalNotScheme as exc:
        return NotDecomposable(str(exc))
    if sorted(class_map[1:]) != sorted(thick):
        return NotDecomposable(
            "neighbourhood relations are not exactly the thick classes"
        )
    to_local = {orig: lc for lc, orig in enumerate(class_map)}
    # the block carried by element g is the restriction of S_{g^-1}
    labeling = {
        g: to_local[orbit[group.index[group.inv(g)]]] for g in group.elements
    }
    try:
        b = build_roux_matrix(local, group, labeling)
    except (ClassCountMismatch, IncompatiblePair) as exc:
        return NotDecomposable(str(exc))
    lifted = lift_scheme(b)
    # certify through the bijection (x, g) -> image of x under the thin
    # permutation of g, with vertex 0 of the lift at the base vertex
    perms = np.zeros((r, x.n), dtype=np.int64)
    for a in range(r):
        rows, cols = np.nonzero(x.table == radical.embedding[a])
        perms[a, rows] = cols
    omega = np.concatenate(
        ([base_vertex], np.nonzero(x.table[base_vertex] == s1)[0])
    )
    phi = np.zeros(lifted.n, dtype=np.int64)
    for i, v in enumerate(omega):
        phi[i * r : (i + 1) * r] = perms[:, v]
    class_to_x = np.zeros(2 * r, dtype=np.int64)
    for a in range(r):
        class_to_x[a] = radical.embedding[a]
        class_to_x[r + a] = orbit[a]
    if not np.array_equal(x.table[np.ix_(phi, phi)], class_to_x[lifted.table]):
        return NotDecomposable("local data does not reproduce the scheme")
    return Decomposition(local, group, labeling, base_vertex, s1)


# ---------------------------------------------------------------------------
# characters, frames


def _char_matrix(b, alpha):
    g = b.group
    values = [0] + [
        simplify_scalar(g.character_value(alpha, h)) for h in g.elements
    ]
    return ExactMatrix(
        [[values[int(c)] for c in row] for row in b.entries]
    )


def char_evaluate(b, alpha):
    """Evaluate a character entrywise: B_alpha with Zero -> 0.

    B_alpha is hermitian and satisfies the exact quadratic
    B_alpha^2 = (N-1)I + chat B_alpha with chat = sum_g c_g alpha(g),
    inherited from the group-ring identity; verify_roux must pass.
    """
    b.group.check(alpha)
    chk = verify_roux(b)
    if not chk.ok:
        raise ValueError(str(chk))
    return _char_matrix(b, alpha)


def _mp_scalar(x):
    """Exact scalar to an mpmath complex at the current precision."""
    if isinstance(x, Cyclotomic):
        acc = mpmath.mpc(0)
        for k, c in enumerate(x.canonical()):
            if c:
                term = mpmath.expjpi(mpmath.mpf(2 * k) / x.order)
                acc += mpmath.mpf(c.numerator) / c.denominator * term
        return acc
    if isinstance(x, GaussianRational):
        return mpmath.mpc(
            mpmath.mpf(x.re.numerator) / x.re.denominator,
            mpmath.mpf(x.im.numerator) / x.im.denominator,
        )
    f = Fraction(x) if not isinstance(x, Fraction) else x
    return mpmath.mpc(mpmath.mpf(f.numerator) / f.denominator)


def etf_export(b, alpha, precision=128):
    """Unit-norm tight frame carried by B at the character alpha.

    Returns d rows of dim columns (mpmath complex numbers): the Gram
    matrix I - B_alpha / theta_minus is a scaled rank-d projector, and a
    pivoted Cholesky factorization at elevated precision recovers frame
    vectors whose Gram reproduces it within 2^(-precision/2).  Raises
    PrecisionTooLow when the certificates cannot be met.
    """
    if precision < 16:
        raise PrecisionTooLow("precision below 16 bits")
    g = b.group
    g.check(alpha)
    chk = verify_roux(b)
    if not chk.ok:
        raise ValueError(str(chk))
    n = b.dim
    with mpmath.workprec(precision + 64):
        tol = mpmath.mpf(2) ** -(precision // 2)
        chat = _mp_scalar(
            sum(chk.params[h] * g.character_value(alpha, h) for h in g.elements)
        )
        if abs(chat.imag) > tol:
            raise PrecisionTooLow("character sum is not certifiably real")
        chat = chat.real
        s = mpmath.sqrt(chat * chat + 4 * (n - 1))
        theta_minus = (chat - s) / 2
        d_float = n * (-theta_minus) / s
        d = int(mpmath.nint(d_float))
        if d < 1 or abs(d_float - d) > tol:
            raise PrecisionTooLow(
                f"projector rank {mpmath.nstr(d_float, 12)} is not an integer"
            )
        bmat = _char_matrix(b, alpha)
        gram = [
            [
                mpmath.mpc(1)
                if i == j
                else -_mp_scalar(bmat[i, j]) / theta_minus
                for j in range(n)
            ]
            for i in range(n)
        ]
        rows = []
        residual = [mpmath.mpf(1)] * n
        for _ in range(d):
            pivot = max(range(n), key=lambda j: residual[j])
            if residual[pivot] <= tol:
                raise PrecisionTooLow("Gram matrix rank falls short of d")
            scale = mpmath.sqrt(residual[pivot])
            new = []
            for j in range(n):
                v = gram[pivot][j]
                for row in rows:
                    v -= mpmath.conj(row[pivot]) * row[j]
                new.append(v / scale)
            rows.append(new)
            for j in range(n):
                residual[j] -= abs(new[j]) ** 2
        if max(residual) > tol:
            raise PrecisionTooLow("Gram matrix rank exceeds d")
        beta = mpmath.mpf(n) / d
        for a in range(d):
            for c in range(d):
                want = beta if a == c else 0
                got = mpmath.fsum(
                    (rows[a][j] * mpmath.conj(rows[c][j]) for j in range(n)),
                    absolute=False,
                )
                if abs(got - want) > tol:
                    raise PrecisionTooLow("frame operator deviates from beta I")
        return rows


def etf_to_json(rows):
    """Frame rows as a plain JSON array of [re, im] pairs."""
    dps = max(17, int(mpmath.mp.prec * 0.30103) + 2)

    def fmt(x):
        return mpmath.nstr(x, dps)

    body = ",\n".join(
        "[" + ", ".join(f"[{fmt(v.real)}, {fmt(v.imag)}]" for v in row) + "]"
        for row in rows
    )
    return "[\n" + body + "\n]"


# ---------------------------------------------------------------------------
# parameter shortcuts


@dataclass
class LatinSquareType:
    ls: int


@dataclass
class NegativeLatinSquareType:
    ls: int


@dataclass
class No:
    reason: str = ""


def amorphic_pseudocyclic_check(y, validated=None):
    """Match the intersection numbers against the two amorphic patterns.

    A symmetric scheme with r classes of constant valency k = ls(r ls -+ 2)
    is (negative) Latin square type when p(i,i;i) = ls^2 - 1 +- ls(r - 3),
    p(i,i;j) = ls(ls -+ 1), and p(i,j;k) = ls^2 for distinct nondiagonal
    i, j, k.  Every such scheme is compatible with any elementary abelian
    2-group of order r under every labeling.
    """
    res = validated or validate_scheme(y)
    if not res.ok:
        raise ValueError(f"not an association scheme: {res}")
    r = y.d
    p = res.tensor
    ks = valencies(p, res.transpose)
    if r == 0:
        return No("no nondiagonal classes")
    k = ks[1]
    if any(ks[i] != k for i in range(1, r + 1)):
        return No("valencies are not constant")
    if any(res.transpose[i] != i for i in range(1, r + 1)):
        return No("scheme is not symmetric")
    for sign, kind in ((1, LatinSquareType), (-1, NegativeLatinSquareType)):
        disc = 1 + r * k
        s = math.isqrt(disc)
        if s * s != disc or (s + sign) % r:
            continue
        ls = (s + sign) // r
        if ls < 1 or k != ls * (r * ls - 2 * sign):
            continue
        lam = ls * ls - 1 + sign * ls * (r - 3)
        mu = ls * (ls - sign)
        good = True
        for i in range(1, r + 1):
            if p[i, i, i] != lam:
                good = False
                break
            for j in range(1, r + 1):
                if j != i and p[i, i, j] != mu:
                    good = False
                    break
                for kk in range(1, r + 1):
                    if i != j and i != kk and j != kk and p[i, j, kk] != ls * ls:
                        good = False
                        break
                if not good:
                    break
            if not good:
                break
        if good:
            return kind(ls)
    return No("intersection numbers match neither pattern")


def drackn_params(n, r):
    """Parameter triple (n+1, r, (n-1)/r) of the induced antipodal cover."""
    if r < 1 or r & (r - 1):
        raise Indivisible(f"r = {r} is not a power of 2")
    if (n - 1) % r:
        raise Indivisible(f"r = {r} does not divide n - 1 = {n - 1}")
    return (n + 1, r, (n - 1) // r)

"""Eigenmatrices, multiplicities, Krein parameters, and roux spectra.

Everything here is exact.  Candidate eigenvalues come from the factored
characteristic polynomial of a generic integer combination of intersection
matrices; the factorization route is never trusted, because every returned
eigenmatrix is certified through the primitive-idempotent identities in the
regular representation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .exact import (
    Cyclotomic,
    ExactMatrix,
    GaussianRational,
    as_rational,
    conj,
    euler_phi,
    exact_str,
    is_zero,
    mat_inverse,
    null_space,
    parse_exact,
    sqrt_in_cyclotomic,
    to_complex,
)
from .groups import abelian_type_from_orders, find_group_isomorphism
from .schemes import transpose_from_tensor, valencies, validate_scheme


class FieldTooLarge(ArithmeticError):
    """Eigenvalues fall outside the supported cyclotomic fields."""


class VerificationFailed(ArithmeticError):
    """A candidate value failed its exact certification."""


class IrrationalEigenvalue(ArithmeticError):
    """A closed-form discriminant is not a perfect square."""


class NegativeKrein(ArithmeticError):
    """A Krein parameter is negative or non-real: infeasible input."""


# ---------------------------------------------------------------------------
# eigen data


@dataclass
class EigenData:
    """First/second eigenmatrix pair with multiplicities and valencies.

    P rows are indexed by primitive idempotents (row 0 is the valency row),
    columns by relations (column 0 is the identity relation).  Q = n P^-1,
    and mult[j] = Q[0][j].
    """

    P: ExactMatrix
    Q: ExactMatrix
    mult: list
    valencies: list
    n: int

    @property
    def d(self):
        return self.P.rows - 1

    def to_report(self):
        return {
            "P": [[exact_str(x) for x in row] for row in self.P.data],
            "Q": [[exact_str(x) for x in row] for row in self.Q.data],
            "mult": list(self.mult),
            "valencies": list(self.valencies),
        }

    @classmethod
    def from_report(cls, obj):
        p = ExactMatrix([[parse_exact(s) for s in row] for row in obj["P"]])
        q = ExactMatrix([[parse_exact(s) for s in row] for row in obj["Q"]])
        mult = [int(m) for m in obj["mult"]]
        kvec = [int(k) for k in obj["valencies"]]
        n = sum(mult)
        out = cls(P=p, Q=q, mult=mult, valencies=kvec, n=n)
        out.verify()
        return out

    def verify(self):
        """Re-check the defining identities; raises VerificationFailed."""
        d1 = self.P.rows
        if self.P.cols != d1 or self.Q.rows != d1 or self.Q.cols != d1:
            raise VerificationFailed("eigenmatrices are not square of equal size")
        if sum(self.mult) != self.n or sum(self.valencies) != self.n:
            raise VerificationFailed("multiplicities and valencies must sum to n")
        if not self.P * self.Q == ExactMatrix.identity(d1) * self.n:
            raise VerificationFailed("P Q != n I")
        for i in range(d1):
            if not is_zero(self.P[0, i] - self.valencies[i]):
                raise VerificationFailed("first row of P is not the valency row")
            if not is_zero(self.P[i, 0] - 1):
                raise VerificationFailed("first column of P is not all ones")
            if not is_zero(self.Q[0, i] - self.mult[i]):
                raise VerificationFailed("first row of Q disagrees with mult")


def eigen_compute(table):
    """Exact EigenData of a valid commutative scheme."""
    res = validate_scheme(table)
    if not res.ok:
        raise ValueError(f"not a valid commutative scheme: {res}")
    return eigen_from_tensor(res.tensor)


def eigen_from_tensor(tensor):
    """Exact EigenData from an intersection tensor p[i][j][k]."""
    tensor = np.asarray(tensor, dtype=np.int64)
    d1 = tensor.shape[0]
    tra = transpose_from_tensor(tensor)
    kvec = [int(k) for k in valencies(tensor, tra)]
    n = sum(kvec)
    if d1 == 1:
        one = ExactMatrix([[1]])
        return EigenData(P=one, Q=one.copy(), mult=[1], valencies=[1], n=1)
    rows = _eigenvector_rows(tensor)
    rows = _order_rows(rows, kvec)
    p = ExactMatrix(rows)
    q = (mat_inverse(p) * n).map(simplify_scalar)
    if not p * q == ExactMatrix.identity(d1) * n:
        raise VerificationFailed("P Q != n I")
    mult = []
    for j in range(d1):
        mj = as_rational(q[0, j])
        if mj is None or mj.denominator != 1 or mj <= 0:
            raise VerificationFailed(f"multiplicity {j} is not a positive integer")
        mult.append(int(mj))
    if sum(mult) != n:
        raise VerificationFailed("multiplicities do not sum to n")
    _certify_idempotents(tensor, p, q, n)
    return EigenData(P=p, Q=q, mult=mult, valencies=kvec, n=n)


_MIX_WEIGHTS = (1, 2, 3, 5, 7, 11, 13, 17, 23, 29)


def _eigenvector_rows(tensor):
    """Left-eigenvector rows of the intersection matrices, unordered.

    Row j of P satisfies sum_k p_{i l}^k P_{jk} = P_{ji} P_{jl}, i.e. it is
    a simultaneous eigenvector of the matrices C_i = p[i] (acting on the
    right).  A generic integer combination of the C_i separates the d+1
    one-dimensional joint eigenspaces.
    """
    d1 = tensor.shape[0]
    for t in _MIX_WEIGHTS:
        mix = np.zeros((d1, d1), dtype=object)
        w = 1
        for i in range(1, d1):
            mix = mix + w * tensor[i].astype(object)
            w *= t
        m = ExactMatrix([[int(v) for v in row] for row in mix.tolist()])
        rows = _rows_from_matrix(m)
        if rows is not None:
            return rows
    raise VerificationFailed("no mixing weight separated the eigenvalues")


def _rows_from_matrix(m):
    import sympy

    d1 = m.rows
    coeffs = m.charpoly()
    ints = []
    for c in coeffs:
        f = Fraction(c)
        if f.denominator != 1:
            raise VerificationFailed("characteristic polynomial is not integral")
        ints.append(int(f))
    poly = sympy.Poly(list(reversed(ints)), sympy.Symbol("x"), domain="ZZ")
    factors = poly.factor_list()[1]
    if any(e > 1 for _, e in factors):
        return None
    lams = []
    for fac, _ in factors:
        cs = [int(c) for c in fac.all_coeffs()]
        if len(cs) == 2:
            a, b = cs
            lams.append(Fraction(-b, a))
        elif len(cs) == 3:
            a, b, c = cs
            root = sqrt_in_cyclotomic(b * b - 4 * a * c)
            half = Fraction(1, 2 * a)
            lams.append((root - b) * half)
            lams.append((-root - b) * half)
        else:
            lams.extend(_roots_via_extension(cs))
    if len(lams) != d1:
        return None
    return _rows_from_eigenvalues(m, lams)


def _rows_from_eigenvalues(m, lams):
    d1 = m.rows
    rows = []
    for lam in lams:
        shifted = ExactMatrix(
            [
                [m[i, j] - lam if i == j else m[i, j] for j in range(d1)]
                for i in range(d1)
            ]
        )
        basis = null_space(shifted)
        if len(basis) != 1:
            return None
        w = basis[0]
        if is_zero(w[0]):
            return None
        inv = _invert(w[0])
        rows.append([simplify_scalar(v * inv) for v in w])
    return rows


_EXTENSION_ORDERS = tuple(range(3, 25))


def _roots_via_extension(coeffs_desc):
    """Roots of an irreducible integer polynomial inside Q(zeta_m), m <= 24.

    The polynomial is factored over candidate cyclotomic fields; it either
    splits completely (Galois orbits over an abelian extension all have the
    same size) or the field is wrong.  Roots are read off the power-basis
    coordinates of sympy's field elements and re-certified downstream by an
    exact kernel computation.
    """
    import sympy

    x = sympy.Symbol("x")
    deg = len(coeffs_desc) - 1
    for order in _EXTENSION_ORDERS:
        if euler_phi(order) % deg:
            continue
        theta = sympy.exp(2 * sympy.pi * sympy.I / sympy.Integer(order))
        try:
            dom = sympy.QQ.algebraic_field(theta)
            factors = sympy.Poly(coeffs_desc, x, domain=dom).factor_list()[1]
        except (sympy.polys.polyerrors.PolynomialError, NotImplementedError):
            continue
        if any(f.degree() != 1 for f, _ in factors):
            continue
        roots = []
        for fac, _ in factors:
            a1, a0 = fac.rep.to_list()
            root = dom.exquo(-a0, a1)
            out = [Fraction(0)] * order
            for k, c in enumerate(reversed(root.to_list())):
                out[k] += Fraction(int(c.numerator), int(c.denominator))
            roots.append(Cyclotomic(order, out))
        if len(roots) == deg:
            return roots
    raise FieldTooLarge(
        f"degree-{deg} eigenvalue does not lie in a supported cyclotomic field"
    )


def _invert(x):
    if isinstance(x, int):
        return Fraction(1, x)
    if isinstance(x, Fraction):
        return Fraction(1) / x
    return x.inverse()


def simplify_scalar(x):
    """Smallest exact representation of x: Fraction, Gaussian, or compact."""
    if isinstance(x, Cyclotomic):
        r = x.to_rational()
        if r is not None:
            return r
        g = x.to_gaussian()
        if g is not None:
            return g
        return x.compact()
    if isinstance(x, GaussianRational) and x.im == 0:
        return x.re
    return x


def _order_rows(rows, kvec):
    """Valency row first, then a fixed descending order on the rest."""
    val_rows = [
        i
        for i, r in enumerate(rows)
        if all(is_zero(x - k) for x, k in zip(r, kvec))
    ]
    if len(val_rows) != 1:
        raise VerificationFailed("valency row not uniquely identified")
    first = rows[val_rows[0]]
    rest = [r for i, r in enumerate(rows) if i != val_rows[0]]
    common = 1
    for r in rest:
        for x in r:
            common = math.lcm(common, _min_order(x))
    rest.sort(key=lambda r: [_scalar_key(x, common) for x in r])
    return [first] + rest


def _min_order(x):
    if isinstance(x, Cyclotomic):
        return x.order
    if isinstance(x, GaussianRational):
        return 4
    return 1


def _to_cyclotomic(x, order):
    if isinstance(x, Cyclotomic):
        return x.promote(order)
    if isinstance(x, GaussianRational):
        return Cyclotomic.from_gaussian(x, order if order % 4 == 0 else order * 4)
    return Cyclotomic.from_rational(x, order)


def _scalar_key(x, order=None):
    """Sort key: descending real, then descending imaginary, exact tiebreak."""
    z = to_complex(x)
    canon = _to_cyclotomic(x, order or _min_order(x)).canonical()
    return (-z.real, -z.imag, canon)


def _certify_idempotents(tensor, p, q, n):
    """Exact check that E_j = (1/n) sum_i Q_ij B_i are the spectral idempotents."""
    d1 = p.rows
    regs = [ExactMatrix(tensor[i].T.tolist()) for i in range(d1)]
    scale = Fraction(1, n)
    es = []
    for j in range(d1):
        acc = ExactMatrix.zeros(d1)
        for i in range(d1):
            acc = acc + regs[i] * q[i, j]
        es.append(acc * scale)
    zero = ExactMatrix.zeros(d1)
    total = zero
    for e in es:
        total = total + e
    if not total == ExactMatrix.identity(d1):
        raise VerificationFailed("idempotents do not sum to the identity")
    for j in range(d1):
        for k in range(j, d1):
            want = es[j] if j == k else zero
            if not es[j] * es[k] == want:
                raise VerificationFailed(f"E_{j} E_{k} is not {'E_' + str(j) if j == k else '0'}")
    for i in range(d1):
        acc = zero
        for j in range(d1):
            acc = acc + es[j] * p[j, i]
        if not acc == regs[i]:
            raise VerificationFailed(f"sum_j P_ji E_j does not recover relation {i}")


# ---------------------------------------------------------------------------
# Krein parameters


@dataclass
class KreinTensor:
    """Dual intersection numbers q[i][j][k] with their exact vanishing set."""

    values: list
    vanishing: frozenset

    def value(self, i, j, k):
        return self.values[i][j][k]


def krein_params(e):
    """Krein parameters of exact eigen data, certified real and nonnegative."""
    d1 = e.P.rows
    n = e.n
    scale = Fraction(1, n)
    values = []
    vanish = set()
    for i in range(d1):
        plane = []
        for j in range(d1):
            line = []
            for k in range(d1):
                acc = 0
                for ell in range(d1):
                    acc = acc + e.P[k, ell] * e.Q[ell, i] * e.Q[ell, j]
                qv = acc * scale
                if not is_zero(qv - conj(qv)):
                    raise NegativeKrein(f"q[{i}][{j}][{k}] is not real")
                if is_zero(qv):
                    qv = 0
                    vanish.add((i, j, k))
                elif _certified_sign(qv) < 0:
                    raise NegativeKrein(f"q[{i}][{j}][{k}] = {exact_str(qv)} < 0")
                line.append(qv)
            plane.append(line)
        values.append(plane)
    return KreinTensor(values=values, vanishing=frozenset(vanish))


def _certified_sign(x):
    """Sign of a real scalar: exact for rationals, margin-certified otherwise."""
    r = as_rational(x)
    if r is not None:
        return (r > 0) - (r < 0)
    if is_zero(x):
        return 0
    import mpmath

    cyc = x if isinstance(x, Cyclotomic) else _to_cyclotomic(x, _min_order(x))
    bound = sum(abs(c) for c in cyc.coeffs)
    with mpmath.workprec(250):
        acc = mpmath.mpf(0)
        for k, c in enumerate(cyc.coeffs):
            if c:
                acc += mpmath.mpf(c.numerator) / c.denominator * mpmath.cos(
                    2 * mpmath.pi * k / cyc.order
                )
        margin = mpmath.mpf(max(1, bound)) * mpmath.mpf(2) ** -200
        if acc > margin:
            return 1
        if acc < -margin:
            return -1
    raise ArithmeticError("sign not certified at working precision")


# ---------------------------------------------------------------------------
# closed-form roux spectra


@dataclass
class RouxSpectrum:
    """Closed-form spectrum of a roux scheme over (group, c, scheme order).

    P/Q rows: one per (character, branch) pair, all '+' branches first, in
    canonical character order.  Columns: thin classes in group-element order,
    then thick classes in the same order.
    """

    eigen: EigenData
    group: object
    c: tuple
    scheme_order: int
    thick_pairs: list  # per character: (n mu_+, n mu_-)
    mult_pairs: list  # per character: (m_+, m_-)


def roux_eigen_closed(group, c, scheme_order):
    """Eigenmatrices of the rank-2r roux scheme with parameters c over group."""
    r = group.order
    n = scheme_order
    cvec = _normalize_c(group, c, n)
    chat = []
    for a in group.elements:
        acc = 0
        for gi, g in enumerate(group.elements):
            if cvec[gi]:
                acc = acc + group.character_value(a, g).conjugate() * cvec[gi]
        ra = as_rational(acc)
        if ra is None:
            raise IrrationalEigenvalue(f"c-hat at character {a} is irrational")
        if ra.denominator != 1:
            raise VerificationFailed(f"c-hat at character {a} is not an integer")
        chat.append(int(ra))
    mu_pairs = []
    mult_pairs = []
    for a, ch in zip(group.elements, chat):
        disc = ch * ch + 4 * n
        s = math.isqrt(disc)
        if s * s != disc:
            raise IrrationalEigenvalue(
                f"character {a}: discriminant {disc} is not a perfect square"
            )
        mus = (Fraction(ch + s, 2 * n), Fraction(ch - s, 2 * n))
        ms = []
        for mu in mus:
            den = 2 + ch * mu
            if den <= 0:
                raise VerificationFailed(f"character {a}: nonpositive multiplicity denominator")
            m = Fraction(n + 1) / den
            if m.denominator != 1 or m <= 0:
                raise VerificationFailed(
                    f"character {a}: multiplicity {m} is not a positive integer"
                )
            ms.append(int(m))
        mu_pairs.append(mus)
        mult_pairs.append(tuple(ms))
    big_n = r * (n + 1)
    prows = []
    qcols = []
    mult = []
    for eps in (0, 1):
        for ai, a in enumerate(group.elements):
            mu = mu_pairs[ai][eps]
            m = mult_pairs[ai][eps]
            chars = [group.character_value(a, g) for g in group.elements]
            prows.append(
                [x.conjugate() for x in chars]
                + [x.conjugate() * (mu * n) for x in chars]
            )
            qcols.append([x * m for x in chars] + [x * (m * mu) for x in chars])
            mult.append(m)
    p = ExactMatrix(prows)
    q = ExactMatrix(qcols).transpose()
    if sum(mult) != big_n:
        raise VerificationFailed("multiplicities do not sum to r(n+1)")
    if not p * q == ExactMatrix.identity(2 * r) * big_n:
        raise VerificationFailed("closed-form P Q != N I")
    eigen = EigenData(
        P=p, Q=q, mult=mult, valencies=[1] * r + [n] * r, n=big_n
    )
    thick_pairs = [(mp * n, mm * n) for mp, mm in mu_pairs]
    return RouxSpectrum(
        eigen=eigen,
        group=group,
        c=tuple(cvec),
        scheme_order=n,
        thick_pairs=thick_pairs,
        mult_pairs=mult_pairs,
    )


def _normalize_c(group, c, n):
    if isinstance(c, dict):
        cvec = [c[g] for g in group.elements]
    else:
        cvec = list(c)
    if len(cvec) != group.order:
        raise ValueError("c must assign one value per group element")
    if any(not isinstance(v, int) or v < 0 for v in cvec):
        raise ValueError("c values must be nonnegative integers")
    if sum(cvec) != n - 1:
        raise ValueError(f"sum of c values must be {n - 1}")
    for gi, g in enumerate(group.elements):
        if cvec[gi] != cvec[group.index[group.inv(g)]]:
            raise ValueError("c must be inversion-symmetric")
    return cvec


# ---------------------------------------------------------------------------
# roux detection from an eigenmatrix


@dataclass
class RouxStructure:
    """Witness that an eigenmatrix has the two-block roux shape."""

    group: object
    char_table: ExactMatrix
    thin_cols: list  # column of P for each group element, canonical order
    thick_cols: list
    row_perm: list  # input rows reordered: '+' rows per character, then '-'
    col_perm: list
    d_plus: list  # per character
    d_minus: list
    real_thick: list  # input column indices of entirely real thick columns

    @property
    def ok(self):
        return True


@dataclass
class NotRoux:
    reason: str
    witness: tuple | None = None

    @property
    def ok(self):
        return False

    def __str__(self):
        return f"not roux: {self.reason}"


def roux_detect(p, kvec):
    """Recognize P = [[T, D+T], [T, D-T]] up to simultaneous permutation.

    T must be the character table of the thin radical read off from the
    valency-one columns; returns the witnessing permutation and the diagonal
    blocks, or NotRoux with the first violated condition.
    """
    d1 = p.rows
    if p.cols != d1:
        return NotRoux("eigenmatrix is not square")
    if len(kvec) != d1:
        return NotRoux("valency vector length mismatch")
    if d1 % 2:
        return NotRoux("odd number of classes")
    r = d1 // 2
    thin = [j for j in range(d1) if kvec[j] == 1]
    thick = [j for j in range(d1) if kvec[j] != 1]
    if len(thin) != r:
        return NotRoux(f"expected {r} valency-one classes, found {len(thin)}")
    nset = {kvec[j] for j in thick}
    if len(nset) != 1:
        return NotRoux("thick classes have unequal valencies")
    # multiplication table of thin columns under entrywise product
    cols = {j: [p[i, j] for i in range(d1)] for j in range(d1)}
    table = []
    for u in thin:
        row = []
        for v in thin:
            prod = [a * b for a, b in zip(cols[u], cols[v])]
            w = next(
                (
                    x
                    for x in range(r)
                    if all(is_zero(a - b) for a, b in zip(prod, cols[thin[x]]))
                ),
                None,
            )
            if w is None:
                return NotRoux(
                    f"thin columns {u} * {v} leave the thin column set"
                )
            row.append(w)
        table.append(row)
    ident = thin.index(0) if 0 in thin else None
    if ident is None or any(table[ident][u] != u for u in range(r)):
        return NotRoux("identity column is not the thin identity")
    orders = [_detect_order(table, ident, x) for x in range(r)]
    group = abelian_type_from_orders(orders)
    if group is None:
        return NotRoux("thin column products do not form an abelian group")
    emb = find_group_isomorphism(group, table, identity=ident)
    if emb is None:
        return NotRoux("thin column products do not match the group type")
    # rows pair up by equal thin restriction
    buckets = []
    for i in range(d1):
        pat = [p[i, t] for t in thin]
        hit = next(
            (
                b
                for b in buckets
                if all(is_zero(a - c) for a, c in zip(pat, b[0]))
            ),
            None,
        )
        if hit is None:
            buckets.append((pat, [i]))
        else:
            hit[1].append(i)
    if len(buckets) != r or any(len(b[1]) != 2 for b in buckets):
        return NotRoux("thin restrictions do not pair the rows")
    # identify each bucket pattern with a character of the group
    tmat = group.character_table()
    char_of_bucket = []
    for pat, _ in buckets:
        match = None
        for a in range(r):
            if all(
                is_zero(tmat[a, gi] - pat[emb[gi]]) for gi in range(r)
            ):
                match = a
                break
        if match is None:
            return NotRoux("a thin row pattern is not a group character")
        char_of_bucket.append(match)
    if len(set(char_of_bucket)) != r:
        return NotRoux("thin row patterns repeat a character")
    # thick block: one column per group element, scaled by a shared D vector
    structure = None
    for c0 in thick:
        dvec = cols[c0]
        thick_of_slot = {}
        good = True
        for cc in thick:
            slot = next(
                (
                    t
                    for t in range(r)
                    if all(
                        is_zero(p[i, cc] - dvec[i] * p[i, thin[t]])
                        for i in range(d1)
                    )
                ),
                None,
            )
            if slot is None or slot in thick_of_slot:
                good = False
                break
            thick_of_slot[slot] = cc
        if good and len(thick_of_slot) == r:
            structure = (dvec, thick_of_slot)
            break
    if structure is None:
        return NotRoux("thick columns are not thin columns times a shared diagonal")
    dvec, thick_of_slot = structure
    real_thick = [
        cc
        for cc in thick
        if all(is_zero(p[i, cc] - conj(p[i, cc])) for i in range(d1))
    ]
    if not real_thick:
        return NotRoux("no entirely real thick column")
    # assemble the witness in canonical character order
    bucket_of_char = {c: b for b, c in enumerate(char_of_bucket)}
    row_plus = []
    row_minus = []
    d_plus = []
    d_minus = []
    for a in range(r):
        i1, i2 = buckets[bucket_of_char[a]][1]
        v1, v2 = dvec[i1], dvec[i2]
        if _pair_larger(v2, v1):
            i1, i2 = i2, i1
            v1, v2 = v2, v1
        row_plus.append(i1)
        row_minus.append(i2)
        d_plus.append(v1)
        d_minus.append(v2)
    thin_cols = [thin[emb[gi]] for gi in range(r)]
    thick_cols = [thick_of_slot[emb[gi]] for gi in range(r)]
    row_perm = row_plus + row_minus
    col_perm = thin_cols + thick_cols
    # definitive certification of the block identity
    for ri, i in enumerate(row_perm):
        a = ri % r
        dv = d_plus[a] if ri < r else d_minus[a]
        for gi in range(r):
            if not is_zero(p[i, thin_cols[gi]] - tmat[a, gi]):
                return NotRoux("thin block certification failed")
            if not is_zero(p[i, thick_cols[gi]] - dv * tmat[a, gi]):
                return NotRoux("thick block certification failed")
    return RouxStructure(
        group=group,
        char_table=tmat,
        thin_cols=thin_cols,
        thick_cols=thick_cols,
        row_perm=row_perm,
        col_perm=col_perm,
        d_plus=d_plus,
        d_minus=d_minus,
        real_thick=real_thick,
    )


def _detect_order(table, ident, x):
    k = 1
    cur = x
    while cur != ident:
        cur = table[cur][x]
        k += 1
        if k > len(table):
            raise ArithmeticError("not a group table")
    return k


def _pair_larger(a, b):
    """True when a sorts strictly before b under the descending key."""
    za, zb = to_complex(a), to_complex(b)
    if (za.real, za.imag) != (zb.real, zb.imag):
        return (-za.real, -za.imag) < (-zb.real, -zb.imag)
    common = math.lcm(_min_order(a), _min_order(b))
    return _to_cyclotomic(a, common).canonical() < _to_cyclotomic(b, common).canonical()

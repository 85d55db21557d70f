"""Exact dense linear algebra over the scalar types in exact.numbers.

Entries may be ints, Fractions, GaussianRationals, or Cyclotomics; the
scalar classes handle mixed-type promotion.  All division is exact and no
floating point is used anywhere in this module.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .numbers import Rational, as_rational, conj, is_zero


class SingularMatrix(ArithmeticError):
    pass


class NotHermitian(ValueError):
    pass


class InconsistentSystem(ArithmeticError):
    pass


class ExactMatrix:
    """Immutable-by-convention dense matrix with exact entries."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, data):
        data = [list(row) for row in data]
        if not data or not data[0]:
            raise ValueError("matrix must be nonempty")
        w = len(data[0])
        if any(len(r) != w for r in data):
            raise ValueError("ragged rows")
        self.data = data
        self.rows = len(data)
        self.cols = w

    @classmethod
    def identity(cls, n):
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows, cols=None):
        cols = rows if cols is None else cols
        return cls([[0] * cols for _ in range(rows)])

    def __getitem__(self, idx):
        i, j = idx
        return self.data[i][j]

    def row(self, i):
        return list(self.data[i])

    def column(self, j):
        return [r[j] for r in self.data]

    def copy(self):
        return ExactMatrix(self.data)

    def map(self, fn):
        return ExactMatrix([[fn(x) for x in row] for row in self.data])

    def __add__(self, other):
        self._shape_match(other)
        return ExactMatrix(
            [
                [a + b for a, b in zip(ra, rb)]
                for ra, rb in zip(self.data, other.data)
            ]
        )

    def __sub__(self, other):
        self._shape_match(other)
        return ExactMatrix(
            [
                [a - b for a, b in zip(ra, rb)]
                for ra, rb in zip(self.data, other.data)
            ]
        )

    def _shape_match(self, other):
        if self.rows != other.rows or self.cols != other.cols:
            raise ValueError("shape mismatch")

    def __mul__(self, other):
        if isinstance(other, ExactMatrix):
            if self.cols != other.rows:
                raise ValueError("shape mismatch")
            bt = list(zip(*other.data))
            out = []
            for ra in self.data:
                out.append(
                    [
                        sum((a * b for a, b in zip(ra, col) if not is_zero(a)), 0)
                        for col in bt
                    ]
                )
            return ExactMatrix(out)
        return self.map(lambda x: x * other)

    def __rmul__(self, other):
        return self.map(lambda x: other * x)

    def __neg__(self):
        return self.map(lambda x: -x)

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        if self.rows != other.rows or self.cols != other.cols:
            return False
        for ra, rb in zip(self.data, other.data):
            for a, b in zip(ra, rb):
                if not is_zero(a - b):
                    return False
        return True

    __hash__ = None

    def transpose(self):
        return ExactMatrix([list(c) for c in zip(*self.data)])

    def conj_transpose(self):
        return ExactMatrix([[conj(x) for x in c] for c in zip(*self.data)])

    def is_hermitian(self):
        if self.rows != self.cols:
            return False
        for i in range(self.rows):
            for j in range(i, self.cols):
                if not is_zero(self.data[i][j] - conj(self.data[j][i])):
                    return False
        return True

    def trace(self):
        return sum((self.data[i][i] for i in range(self.rows)), 0)

    def det(self):
        """Determinant by exact fraction-full Gaussian elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of non-square matrix")
        n = self.rows
        a = [row[:] for row in self.data]
        det = 1
        sign = 1
        for k in range(n):
            piv = next((i for i in range(k, n) if not is_zero(a[i][k])), None)
            if piv is None:
                return 0 * det
            if piv != k:
                a[k], a[piv] = a[piv], a[k]
                sign = -sign
            pv = a[k][k]
            det = det * pv
            inv = _inv_scalar(pv)
            for i in range(k + 1, n):
                f = a[i][k] * inv
                if is_zero(f):
                    continue
                a[i][k] = 0
                for j in range(k + 1, n):
                    a[i][j] = a[i][j] - f * a[k][j]
        return det * sign

    def charpoly(self):
        """Coefficients of det(xI - M), ascending, by Faddeev-LeVerrier."""
        if self.rows != self.cols:
            raise ValueError("charpoly of non-square matrix")
        n = self.rows
        coeffs = [0] * (n + 1)
        coeffs[n] = 1
        mk = ExactMatrix.zeros(n)
        ck = 1
        for k in range(1, n + 1):
            mk = self * (mk + ck * ExactMatrix.identity(n))
            ck = -_div_by_int(mk.trace(), k)
            coeffs[n - k] = ck
        return coeffs

    def __repr__(self):
        return f"ExactMatrix({self.rows}x{self.cols})"

    def pretty(self):
        from .numbers import exact_str

        w = [[exact_str(x) for x in row] for row in self.data]
        widths = [max(len(w[i][j]) for i in range(self.rows)) for j in range(self.cols)]
        return "\n".join(
            "  ".join(s.rjust(widths[j]) for j, s in enumerate(row)) for row in w
        )


def _inv_scalar(x):
    if isinstance(x, int):
        return Fraction(1, x)
    if isinstance(x, Fraction):
        return 1 / x
    return x.inverse()


def _div_by_int(x, k):
    if isinstance(x, int):
        q = Fraction(x, k)
        return q
    return x * Fraction(1, k)


def mat_inverse(m):
    """Exact inverse via Gauss-Jordan; raises SingularMatrix."""
    if m.rows != m.cols:
        raise ValueError("inverse of non-square matrix")
    n = m.rows
    a = [row[:] + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(m.data)]
    for k in range(n):
        piv = next((i for i in range(k, n) if not is_zero(a[i][k])), None)
        if piv is None:
            raise SingularMatrix(f"singular at column {k}")
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
        inv = _inv_scalar(a[k][k])
        a[k] = [x * inv for x in a[k]]
        for i in range(n):
            if i == k:
                continue
            f = a[i][k]
            if is_zero(f):
                continue
            a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    return ExactMatrix([row[n:] for row in a])


def null_space(m):
    """Basis of the right kernel of m, from the reduced row echelon form."""
    rows = [row[:] for row in m.data]
    nr, nc = m.rows, m.cols
    pivcols = []
    r = 0
    for c in range(nc):
        piv = next((i for i in range(r, nr) if not is_zero(rows[i][c])), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = _inv_scalar(rows[r][c])
        rows[r] = [x * inv for x in rows[r]]
        for i in range(nr):
            if i != r and not is_zero(rows[i][c]):
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivcols.append(c)
        r += 1
        if r == nr:
            break
    basis = []
    for fc in (c for c in range(nc) if c not in pivcols):
        v = [0] * nc
        v[fc] = 1
        for k, pc in enumerate(pivcols):
            v[pc] = -rows[k][fc]
        basis.append(v)
    return basis


@dataclass
class LdlResult:
    status: str  # "PD" | "PSD" | "Indefinite"
    pivots: list

    @property
    def is_pd(self):
        return self.status == "PD"

    @property
    def is_psd(self):
        return self.status in ("PD", "PSD")


def ldl_hermitian(m):
    """Exact LDL* with symmetric diagonal pivoting for a Hermitian matrix.

    Returns LdlResult(status, pivots) where pivots are the rational pivot
    values in elimination order (zeros appended for null rows of a PSD
    matrix).  Status is PD iff n positive pivots complete, PSD iff the
    elimination terminates with only nonnegative pivots, else Indefinite.
    """
    if not m.is_hermitian():
        raise NotHermitian("input is not Hermitian")
    n = m.rows
    a = [row[:] for row in m.data]
    active = list(range(n))
    pivots = []
    while active:
        diag = {}
        for i in active:
            v = as_rational(a[i][i])
            if v is None:
                raise NotHermitian(f"non-real diagonal entry at {i}")
            diag[i] = v
        neg = next((i for i in active if diag[i] < 0), None)
        if neg is not None:
            return LdlResult("Indefinite", pivots)
        pivot = next((i for i in active if diag[i] > 0), None)
        if pivot is None:
            # all remaining diagonal entries are zero: PSD iff the whole
            # remaining block vanishes
            for i in active:
                for j in active:
                    if not is_zero(a[i][j]):
                        return LdlResult("Indefinite", pivots)
            pivots.extend([Fraction(0)] * len(active))
            return LdlResult("PSD", pivots)
        pv = diag[pivot]
        pivots.append(pv)
        active.remove(pivot)
        inv = 1 / pv
        col = {i: a[i][pivot] for i in active}
        for i in active:
            ci = col[i]
            if is_zero(ci):
                continue
            f = ci * inv
            for j in active:
                a[i][j] = a[i][j] - f * conj(col[j])
    return LdlResult("PD", pivots)


@dataclass
class SolveResult:
    status: str  # "unique" | "rank_deficient"
    solution: list | None
    rank: int


def solve_exact(a, b, allow_modular=True):
    """Solve a x = b exactly.

    Returns SolveResult with a unique solution, or rank information when the
    system is consistent but underdetermined.  Raises InconsistentSystem when
    no solution exists.  Large all-rational systems are routed through a
    modular fast path whose output is verified by exact substitution.
    """
    if isinstance(a, ExactMatrix):
        rows = a.data
    else:
        rows = [list(r) for r in a]
    rhs = list(b)
    if len(rhs) != len(rows):
        raise ValueError("rhs length mismatch")
    ncols = len(rows[0])
    if allow_modular and ncols >= 64 and _all_rational(rows) and _all_rational([rhs]):
        from .modular import solve_rational_system

        res = solve_rational_system(rows, rhs)
        if res is not None:
            return res
    return _solve_generic(rows, rhs)


def _all_rational(rows):
    for r in rows:
        for x in r:
            if as_rational(x) is None:
                return False
    return True


def _solve_generic(rows, rhs):
    m = len(rows)
    n = len(rows[0])
    a = [list(r) + [v] for r, v in zip(rows, rhs)]
    pivcols = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if not is_zero(a[i][c])), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = _inv_scalar(a[r][c])
        a[r] = [x * inv for x in a[r]]
        for i in range(m):
            if i != r and not is_zero(a[i][c]):
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivcols.append(c)
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if not is_zero(a[i][n]):
            raise InconsistentSystem(f"row {i} reduces to 0 = {a[i][n]}")
    if r < n:
        return SolveResult("rank_deficient", None, r)
    x = [0] * n
    for k, c in enumerate(pivcols):
        x[c] = a[k][n]
    return SolveResult("unique", x, n)

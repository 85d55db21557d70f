"""Fast exact solving of large rational linear systems.

Strategy: eliminate modulo a few word-sized primes (vectorized with numpy
int64), combine residues by CRT, lift to rationals by rational
reconstruction, and then verify the candidate by exact substitution into
the original system.  The modular part is only a candidate generator; the
returned solution is always certified exactly.  Full column rank is
certified by a nonzero minor modulo a prime, which is sound (a minor that
is nonzero mod p is nonzero over Q).  Anything that cannot be certified
here is left to the caller's plain exact elimination.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

# primes just below 2^25 so that p^2 * 8000 stays inside int64
_PRIMES = (33554393, 33554383, 33554371, 33554347, 33554341, 33554293)
_MAX_DIM = 8000
_MAX_ENTRY = 1 << 40


def _to_int_rows(rows, rhs):
    """Scale each equation to integer coefficients; returns (A, b) ints."""
    a_out = []
    b_out = []
    for row, r in zip(rows, rhs):
        vals = [x if isinstance(x, Fraction) else Fraction(x) for x in row]
        rv = r if isinstance(r, Fraction) else Fraction(r)
        den = math.lcm(rv.denominator, *(v.denominator for v in vals)) if vals else 1
        a_out.append([int(v * den) for v in vals])
        b_out.append(int(rv * den))
    return a_out, b_out


def _echelon_mod_p(a, p):
    """Row echelon mod p; returns (rank, pivot_row_original_indices)."""
    a = a % p
    m, n = a.shape
    order = np.arange(m)
    r = 0
    piv_rows = []
    for c in range(n):
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        t = r + int(nz[0])
        if t != r:
            a[[r, t]] = a[[t, r]]
            order[[r, t]] = order[[t, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r] = (a[r] * inv) % p
        col = a[:, c].copy()
        col[r] = 0
        mask = col != 0
        if mask.any():
            a[mask] = (a[mask] - np.outer(col[mask], a[r])) % p
        piv_rows.append(int(order[r]))
        r += 1
        if r == m:
            break
    return r, piv_rows


def _inverse_mod_p(s, p):
    n = s.shape[0]
    a = np.concatenate([s % p, np.eye(n, dtype=np.int64)], axis=1)
    for c in range(n):
        nz = np.nonzero(a[c:, c])[0]
        if nz.size == 0:
            return None
        r = c + int(nz[0])
        if r != c:
            a[[c, r]] = a[[r, c]]
        inv = pow(int(a[c, c]), p - 2, p)
        a[c] = (a[c] * inv) % p
        col = a[:, c].copy()
        col[c] = 0
        mask = col != 0
        if mask.any():
            a[mask] = (a[mask] - np.outer(col[mask], a[c])) % p
    return a[:, n:]


def _crt_pair(r1, m1, r2, m2):
    g, x, _ = _xgcd(m1, m2)
    assert g == 1
    lift = (r2 - r1) * x % m2
    return r1 + m1 * lift, m1 * m2


def _xgcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def _rational_reconstruct(r, m):
    """Lift r mod m to a fraction with |num|, den <= sqrt(m/2), or None."""
    bound = math.isqrt(m // 2)
    u0, u1 = m, r % m
    v0, v1 = 0, 1
    while u1 > bound:
        q = u0 // u1
        u0, u1 = u1, u0 - q * u1
        v0, v1 = v1, v0 - q * v1
    if v1 == 0:
        return None
    num, den = u1, v1
    if den < 0:
        num, den = -num, -den
    if den == 0 or num > bound or den > bound or math.gcd(num, den) != 1:
        if den and math.gcd(abs(num), den) == 1 and abs(num) <= bound and den <= bound:
            return Fraction(num, den)
        return None
    return Fraction(num, den)


class ModularSolver:
    """Repeated exact solves against a fixed full-column-rank integer matrix.

    Built once (mod-p inverses of a pivot square submatrix), then solve()
    produces certified exact solutions for many right-hand sides.
    """

    def __init__(self, rows):
        a_int, _ = _to_int_rows(rows, [0] * len(rows))
        self.m = len(a_int)
        self.n = len(a_int[0])
        if self.n > _MAX_DIM:
            raise ValueError("system too large for the modular path")
        if any(abs(x) > _MAX_ENTRY for row in a_int for x in row):
            raise ValueError("entries too large for the modular path")
        self.a_obj = np.array(a_int, dtype=object)
        a64 = np.array(a_int, dtype=np.int64)
        rank, piv_rows = _echelon_mod_p(a64.copy(), _PRIMES[0])
        self.rank_lower_bound = rank
        self.full_column_rank = rank == self.n
        self.pivot_rows = piv_rows
        self.inverses = []
        if self.full_column_rank:
            s = a64[piv_rows]
            for p in _PRIMES:
                inv = _inverse_mod_p(s.copy(), p)
                if inv is not None:
                    self.inverses.append((p, inv))
            self.s_obj = self.a_obj[piv_rows]

    def solve(self, rhs, min_primes=3):
        """Certified exact solution of A x = rhs, or None.

        None means the fast path could not both reconstruct and verify; it
        never silently returns an unverified value.
        """
        if not self.full_column_rank or len(self.inverses) < min_primes:
            return None
        b_frac = [x if isinstance(x, Fraction) else Fraction(x) for x in rhs]
        den = math.lcm(*(x.denominator for x in b_frac)) if b_frac else 1
        b_int = [int(x * den) for x in b_frac]
        b_piv = [b_int[i] for i in self.pivot_rows]
        used = []
        residues = None
        modulus = None
        for p, inv in self.inverses:
            bp = np.array([x % p for x in b_piv], dtype=np.int64)
            xp = (inv @ bp) % p
            used.append((p, xp))
            if residues is None:
                residues = [int(v) for v in xp]
                modulus = p
            else:
                residues = [
                    _crt_pair(r, modulus, int(v), p)[0] for r, v in zip(residues, xp)
                ]
                modulus *= p
            if len(used) < min_primes:
                continue
            candidate = []
            ok = True
            for r in residues:
                f = _rational_reconstruct(r % modulus, modulus)
                if f is None:
                    ok = False
                    break
                candidate.append(f)
            if not ok:
                continue
            solution = [c / den for c in candidate]
            if self._verify(solution, b_frac):
                return solution
        return None

    def _verify(self, x, b):
        lcm = math.lcm(*(v.denominator for v in x)) if x else 1
        lcm = math.lcm(lcm, *(v.denominator for v in b)) if b else lcm
        xi = np.array([int(v * lcm) for v in x], dtype=object)
        bi = [int(v * lcm) for v in b]
        prod = self.a_obj @ xi
        return all(int(p) == q for p, q in zip(prod, bi))


def solve_rational_system(rows, rhs):
    """One-shot certified solve; returns a SolveResult or None (fallback)."""
    from .matrix import SolveResult

    try:
        solver = ModularSolver(rows)
    except ValueError:
        return None
    if not solver.full_column_rank:
        return None
    x = solver.solve(rhs)
    if x is None:
        return None
    return SolveResult("unique", x, solver.n)

"""Finite fields, cyclotomic schemes, and the bundled example corpus."""

from __future__ import annotations

import importlib.resources
import itertools
import math
from functools import cached_property

from .schemes import SchemeTable, orbital_scheme


class NotPrime(ValueError):
    pass


class TooLarge(ValueError):
    pass


class Indivisible(ValueError):
    pass


_SIZE_CAP = 1 << 20


def _is_prime(p):
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1 if d == 2 else 2
    return True


class FiniteField:
    """F_{p^n} with elements encoded as ints 0..p^n-1.

    Element code c stands for the polynomial whose base-p digits are its
    coefficients, most significant digit = highest power, so numeric order
    on codes is lexicographic order on coefficient tuples.  The modulus is
    the lexicographically least irreducible monic polynomial of degree n.
    """

    def __init__(self, p, n):
        if not _is_prime(p):
            raise NotPrime(f"{p} is not prime")
        if n < 1:
            raise ValueError("extension degree must be >= 1")
        if p**n > _SIZE_CAP:
            raise TooLarge(f"{p}^{n} exceeds the 2^20 element cap")
        self.p = p
        self.n = n
        self.q = p**n
        self.modulus = self._least_irreducible()

    # -- polynomial helpers (ascending coefficient lists mod p) -------------

    def _decode(self, code):
        p = self.p
        out = []
        for _ in range(self.n):
            out.append(code % p)
            code //= p
        return out  # ascending: out[k] = coeff of x^k

    def _encode(self, coeffs):
        out = 0
        for c in reversed(coeffs[: self.n]):
            out = out * self.p + (c % self.p)
        return out

    def _poly_mulmod(self, a, b, mod):
        p = self.p
        res = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    res[i + j] = (res[i + j] + x * y) % p
        dm = len(mod) - 1
        for k in range(len(res) - 1, dm - 1, -1):
            c = res[k]
            if c:
                res[k] = 0
                for j in range(dm):
                    res[k - dm + j] = (res[k - dm + j] - c * mod[j]) % p
        return res[:dm] + [0] * (dm - len(res[:dm]))

    def _least_irreducible(self):
        if self.n == 1:
            return [0, 1]
        monics_by_deg = {1: [[a, 1] for a in range(self.p)]}
        for deg in range(2, self.n // 2 + 1):
            monics_by_deg[deg] = [
                list(t) + [1]
                for t in itertools.product(range(self.p), repeat=deg)
            ]
        for tail in itertools.product(range(self.p), repeat=self.n):
            # tail is (a_{n-1}, ..., a_0): lexicographic order
            cand = list(reversed(tail)) + [1]
            if self._irreducible(cand, monics_by_deg):
                return cand
        raise ArithmeticError("no irreducible polynomial found")

    def _irreducible(self, cand, monics_by_deg):
        deg = len(cand) - 1
        for low in range(1, deg // 2 + 1):
            for div in monics_by_deg[low]:
                if self._divides(div, cand):
                    return False
        return True

    def _divides(self, div, num):
        p = self.p
        work = list(num)
        dd = len(div) - 1
        for k in range(len(work) - 1, dd - 1, -1):
            c = work[k]
            if c:
                work[k] = 0
                for j in range(dd):
                    work[k - dd + j] = (work[k - dd + j] - c * div[j]) % p
        return not any(work[:dd])

    # -- field operations on codes ------------------------------------------

    def add(self, a, b):
        pa, pb = self._decode(a), self._decode(b)
        return self._encode([(x + y) % self.p for x, y in zip(pa, pb)])

    def neg(self, a):
        return self._encode([(-x) % self.p for x in self._decode(a)])

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        return self._encode(
            self._poly_mulmod(self._decode(a), self._decode(b), self.modulus)
        )

    def power(self, a, e):
        out = 1
        base = a
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out

    @cached_property
    def primitive_element(self):
        m = self.q - 1
        prime_factors = set()
        t = m
        d = 2
        while d * d <= t:
            while t % d == 0:
                prime_factors.add(d)
                t //= d
            d += 1 if d == 2 else 2
        if t > 1:
            prime_factors.add(t)
        for g in range(2, self.q):
            if all(self.power(g, m // f) != 1 for f in prime_factors):
                return g
        raise ArithmeticError("no primitive element found")

    @cached_property
    def dlog(self):
        """dlog[x] = k with g^k = x for the canonical primitive element."""
        g = self.primitive_element
        out = [None] * self.q
        cur = 1
        for k in range(self.q - 1):
            out[cur] = k
            cur = self.mul(cur, g)
        return out

    def modulus_string(self):
        terms = []
        for k in range(self.n, -1, -1):
            c = self.modulus[k] if k < len(self.modulus) else 0
            if k == self.n:
                c = 1
            if not c:
                continue
            if k == 0:
                terms.append(str(c))
            elif k == 1:
                terms.append("x" if c == 1 else f"{c}x")
            else:
                terms.append(f"x^{k}" if c == 1 else f"{c}x^{k}")
        return "+".join(terms)


def field_build(p, n):
    return FiniteField(p, n)


def cyclotomic_scheme(p, n, r):
    """Cyclotomic scheme on F_{p^n}: classes are index-r power-coset differences."""
    f = field_build(p, n)
    q = f.q
    if (q - 1) % r:
        raise Indivisible(f"{r} does not divide {q - 1}")
    dlog = f.dlog
    import numpy as np

    table = np.zeros((q, q), dtype=np.int64)
    # difference class depends only on y - x
    cls = [0] * q
    for delta in range(1, q):
        cls[delta] = 1 + (dlog[delta] % r)
    for x in range(q):
        for y in range(q):
            if x != y:
                table[x, y] = cls[f.sub(y, x)]
    return SchemeTable(table)


def sl23_scheme():
    """Orbitals of SL(2,3) = <[[0,-1],[1,0]], [[1,1],[0,1]]> on F_3^2 \\ {0}."""
    vectors = [(a, b) for a in range(3) for b in range(3) if (a, b) != (0, 0)]
    index = {v: i for i, v in enumerate(vectors)}

    def perm_of(m):
        out = []
        for (a, b) in vectors:
            img = ((m[0][0] * a + m[0][1] * b) % 3, (m[1][0] * a + m[1][1] * b) % 3)
            out.append(index[img])
        return out

    s = perm_of([[0, -1], [1, 0]])
    t = perm_of([[1, 1], [0, 1]])
    return orbital_scheme(8, [s, t])


_CORPUS = ("sl23_8", "f9_cyc4", "hex_fission_63")


def bundled_examples():
    """Load the shipped corpus from package data."""
    out = {}
    root = importlib.resources.files("rouxschemes").joinpath("data")
    for name in _CORPUS:
        res = root.joinpath(f"{name}.json")
        out[name] = SchemeTable.from_json(res.read_text())
    return out


def build_corpus():
    """Recompute the generatable corpus entries from first principles."""
    return {
        "sl23_8": sl23_scheme(),
        "f9_cyc4": cyclotomic_scheme(3, 2, 4),
    }

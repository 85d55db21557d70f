"""Finite abelian groups presented as direct products of cyclic factors.

Elements are residue tuples ordered lexicographically; characters are
indexed by the same tuples, so the character table is symmetric under the
self-duality (a, g) -> (g, a).  Group spec strings follow the grammar
Z<k>("x"Z<k>)*, e.g. "Z4" or "Z2xZ2".
"""

from __future__ import annotations

import itertools
import math
import re
from functools import lru_cache, reduce

import numpy as np

from .exact import Cyclotomic, ExactMatrix


class ParseError(ValueError):
    pass


class FactorTooSmall(ParseError):
    pass


class ElementNotInGroup(ValueError):
    pass


_SPEC_RE = re.compile(r"^Z(\d+)(?:xZ(\d+))*$")


class AbelianGroup:
    """Direct product of cyclic groups Z_f1 x ... x Z_ft."""

    def __init__(self, factors):
        factors = tuple(int(f) for f in factors)
        for f in factors:
            if f < 2:
                raise FactorTooSmall(f"cyclic factor {f} < 2")
        # an empty factor list is the trivial group (spec string "1")
        self.factors = factors
        self.order = math.prod(factors)
        self.exponent = reduce(math.lcm, factors, 1)
        self.elements = [
            tuple(t) for t in itertools.product(*(range(f) for f in factors))
        ]
        self.index = {g: i for i, g in enumerate(self.elements)}

    # -- structure ---------------------------------------------------------

    @property
    def identity(self):
        return (0,) * len(self.factors)

    def check(self, g):
        if g not in self.index:
            raise ElementNotInGroup(f"{g} not in {self.spec_string()}")
        return g

    def op(self, a, b):
        return tuple((x + y) % f for x, y, f in zip(a, b, self.factors))

    def inv(self, a):
        return tuple((-x) % f for x, f in zip(a, self.factors))

    def element_order(self, a):
        return reduce(
            math.lcm, (f // math.gcd(f, x) for x, f in zip(a, self.factors)), 1
        )

    def order_multiset(self):
        return sorted(self.element_order(g) for g in self.elements)

    def invariant_factors(self):
        """Canonical invariant factor chain d1 | d2 | ... | dk."""
        if not self.factors:
            return ()
        primary = {}
        for f in self.factors:
            for p, e in _factorize(f).items():
                primary.setdefault(p, []).append(p**e)
        for p in primary:
            primary[p].sort(reverse=True)
        depth = max(len(v) for v in primary.values())
        chain = []
        for k in range(depth):
            d = 1
            for p, powers in primary.items():
                if k < len(powers):
                    d *= powers[k]
            chain.append(d)
        chain.reverse()
        return tuple(chain)

    def is_isomorphic_to(self, other):
        return self.invariant_factors() == other.invariant_factors()

    def spec_string(self):
        if not self.factors:
            return "1"
        return "x".join(f"Z{f}" for f in self.factors)

    def __repr__(self):
        return f"AbelianGroup({self.spec_string()})"

    def __eq__(self, other):
        return isinstance(other, AbelianGroup) and self.factors == other.factors

    def __hash__(self):
        return hash(self.factors)

    # -- characters -----------------------------------------------------------

    def character_value(self, a, g):
        """Value of the character indexed by tuple a at element g."""
        m = self.exponent
        e = sum(ai * gi * (m // f) for ai, gi, f in zip(a, g, self.factors)) % m
        return Cyclotomic.root_of_unity(m, e)

    def character_table(self):
        """r x r ExactMatrix T with T[a][g] = alpha_a(g); T conj(T)^T = rI."""
        return ExactMatrix(
            [
                [self.character_value(a, g) for g in self.elements]
                for a in self.elements
            ]
        )

    def regular_permutation(self, k):
        """0/1 matrix P_k with P[g][h] = 1 iff g*k = h (right translation)."""
        self.check(k)
        r = self.order
        out = np.zeros((r, r), dtype=np.int64)
        for i, g in enumerate(self.elements):
            out[i, self.index[self.op(g, k)]] = 1
        return out


def _factorize(n):
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def group_from_spec(spec):
    """Parse Z<k>("x"Z<k>)* into an AbelianGroup; "1" is the trivial group."""
    s = spec.strip()
    if s == "1":
        return AbelianGroup(())
    if not _SPEC_RE.match(s):
        raise ParseError(f"bad group spec {spec!r}")
    return AbelianGroup(int(p) for p in s.replace("Z", "").split("x"))


def _partitions(n):
    if n == 0:
        yield ()
        return
    for first in range(n, 0, -1):
        for rest in _partitions(n - first):
            if not rest or rest[0] <= first:
                yield (first,) + rest


@lru_cache(maxsize=None)
def abelian_groups_of_order(n):
    """All abelian groups of order n, one per isomorphism type."""
    fac = _factorize(n)
    per_prime = []
    for p, e in fac.items():
        per_prime.append([tuple(p**k for k in part) for part in _partitions(e)])
    out = []
    for combo in itertools.product(*per_prime):
        factors = tuple(sorted(f for block in combo for f in block))
        g = AbelianGroup(factors)
        out.append(AbelianGroup(g.invariant_factors()))
    return out


def abelian_type_from_orders(order_multiset):
    """Identify an abelian group from its multiset of element orders.

    The multiset of element orders determines a finite abelian group up to
    isomorphism; returns the matching AbelianGroup or None.
    """
    n = len(order_multiset)
    want = sorted(order_multiset)
    for g in abelian_groups_of_order(n):
        if g.order_multiset() == want:
            return g
    return None


def find_group_isomorphism(group, mult, identity=0):
    """Isomorphism from an AbelianGroup onto a concrete multiplication table.

    mult is an r x r table over indices 0..r-1 with the given identity
    index.  Returns a list im with im[i] = image index of group.elements[i],
    or None.  Backtracking over images, pruned by element orders.
    """
    r = group.order
    if len(mult) != r:
        return None
    orders = [_table_order(mult, identity, x) for x in range(r)]
    want = [group.element_order(g) for g in group.elements]
    if sorted(orders) != sorted(want):
        return None
    im = [None] * r
    im[group.index[group.identity]] = identity
    used = {identity}

    def place(pos):
        if pos == r:
            return True
        g = group.elements[pos]
        if im[pos] is not None:
            return place(pos + 1)
        for cand in range(r):
            if cand in used or orders[cand] != want[pos]:
                continue
            im[pos] = cand
            used.add(cand)
            if _partial_hom_ok(group, mult, im, pos) and place(pos + 1):
                return True
            im[pos] = None
            used.discard(cand)
        return False

    if place(0):
        return im
    return None


def _partial_hom_ok(group, mult, im, pos):
    for q in range(pos + 1):
        if im[q] is None:
            continue
        prod = group.op(group.elements[pos], group.elements[q])
        k = group.index[prod]
        if im[k] is not None and mult[im[pos]][im[q]] != im[k]:
            return False
    return True


def _table_order(mult, identity, x):
    k = 1
    cur = x
    while cur != identity:
        cur = mult[cur][x]
        k += 1
        if k > len(mult):
            raise ValueError("not a group table")
    return k

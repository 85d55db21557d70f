"""Isomorphism testing for scheme tables.

An isomorphism is a pair (relation bijection, vertex bijection).  Candidate
relation bijections are filtered through the intersection tensors; vertex
bijections are found by color refinement with individualization and
backtracking (individualize the lowest vertex of the smallest non-singleton
cell, try every vertex of the matching cell on the other side).  Every
candidate found by the search is verified entry by entry before being
returned, so a positive answer is a certificate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .schemes import validate_scheme, valencies


@dataclass
class Iso:
    relation_map: list[int]
    vertex_map: list[int]

    @property
    def isomorphic(self):
        return True


@dataclass
class NonIso:
    reason: str

    @property
    def isomorphic(self):
        return False


def scheme_isomorphic(ta, tb):
    """Decide isomorphism of two validated scheme tables."""
    if ta.n != tb.n or ta.d != tb.d:
        return NonIso(f"size mismatch: ({ta.n},{ta.d}) vs ({tb.n},{tb.d})")
    ra = validate_scheme(ta)
    rb = validate_scheme(tb)
    if not ra.ok or not rb.ok:
        raise ValueError("isomorphism testing needs valid schemes")
    ka = valencies(ra.tensor, ra.transpose)
    kb = valencies(rb.tensor, rb.transpose)
    if sorted(ka) != sorted(kb):
        return NonIso(f"valency multisets differ: {sorted(ka)} vs {sorted(kb)}")
    sigmas = _relation_bijections(ra, rb, ka, kb)
    if not sigmas:
        return NonIso("no relation bijection matches the intersection tensors")
    for sigma in sigmas:
        phi = _vertex_search(ta.table, tb.table, sigma)
        if phi is not None:
            return Iso(sigma, phi)
    return NonIso("search exhausted over all tensor-compatible relation maps")


def _relation_bijections(ra, rb, ka, kb):
    """All class bijections (fixing 0) that carry tensor A onto tensor B."""
    import itertools

    d1 = ra.tensor.shape[0]
    pa, pb = ra.tensor, rb.tensor
    tra, trb = ra.transpose, rb.transpose
    out = []
    for perm in itertools.permutations(range(1, d1)):
        sigma = [0] + list(perm)
        if any(ka[i] != kb[sigma[i]] for i in range(d1)):
            continue
        if any(sigma[tra[i]] != trb[sigma[i]] for i in range(d1)):
            continue
        s = np.asarray(sigma)
        if np.array_equal(pb[np.ix_(s, s, s)], pa):
            out.append(sigma)
    return out


def _vertex_search(tba, tbb, sigma):
    smap = np.asarray(sigma, dtype=np.int64)
    ta = smap[tba]
    tb = tbb
    n = ta.shape[0]
    d1 = int(tb.max()) + 1
    masks_a = [(ta == r) for r in range(d1)]
    masks_b = [(tb == r) for r in range(d1)]
    col_a = np.zeros(n, dtype=np.int64)
    col_b = np.zeros(n, dtype=np.int64)
    state = _refine(ta, tb, masks_a, masks_b, col_a, col_b)
    if state is None:
        return None
    return _search(ta, tb, masks_a, masks_b, *state)


def _refine(ta, tb, masks_a, masks_b, col_a, col_b):
    """Joint color refinement; returns stabilized (col_a, col_b) or None."""
    n = ta.shape[0]
    while True:
        ncol = int(max(col_a.max(), col_b.max())) + 1
        onehot_a = np.zeros((n, ncol))
        onehot_a[np.arange(n), col_a] = 1.0
        onehot_b = np.zeros((n, ncol))
        onehot_b[np.arange(n), col_b] = 1.0
        sig_a = [col_a.reshape(-1, 1)]
        sig_b = [col_b.reshape(-1, 1)]
        for ma, mb in zip(masks_a, masks_b):
            sig_a.append(np.rint(ma @ onehot_a).astype(np.int64))
            sig_b.append(np.rint(mb @ onehot_b).astype(np.int64))
        sa = np.concatenate(sig_a, axis=1)
        sb = np.concatenate(sig_b, axis=1)
        both = np.concatenate([sa, sb], axis=0)
        _, inverse = np.unique(both, axis=0, return_inverse=True)
        new_a = inverse[:n]
        new_b = inverse[n:]
        ca = np.bincount(new_a, minlength=int(inverse.max()) + 1)
        cb = np.bincount(new_b, minlength=int(inverse.max()) + 1)
        if not np.array_equal(ca, cb):
            return None
        if int(new_a.max()) + 1 == ncol:
            return new_a, new_b
        col_a, col_b = new_a, new_b


def _search(ta, tb, masks_a, masks_b, col_a, col_b):
    n = ta.shape[0]
    ncol = int(col_a.max()) + 1
    sizes = np.bincount(col_a, minlength=ncol)
    nons = [c for c in range(ncol) if sizes[c] > 1]
    if not nons:
        phi = np.zeros(n, dtype=np.int64)
        pos_b = {int(c): int(v) for v, c in enumerate(col_b)}
        for v in range(n):
            phi[v] = pos_b[int(col_a[v])]
        if _verify(ta, tb, phi):
            return [int(x) for x in phi]
        return None
    cell = min(nons, key=lambda c: (sizes[c], c))
    x = int(np.nonzero(col_a == cell)[0][0])
    fresh = ncol
    for y in np.nonzero(col_b == cell)[0]:
        na = col_a.copy()
        nb = col_b.copy()
        na[x] = fresh
        nb[int(y)] = fresh
        state = _refine(ta, tb, masks_a, masks_b, na, nb)
        if state is None:
            continue
        got = _search(ta, tb, masks_a, masks_b, *state)
        if got is not None:
            return got
    return None


def _verify(ta, tb, phi):
    return np.array_equal(tb[np.ix_(phi, phi)], ta)

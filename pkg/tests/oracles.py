"""Brute-force reference implementations used only by the tests.

Rings are modelled as sets of integer matrices mod q multiplied with numpy,
independently of the structure-constant presentation in the package.  Modules
are explicit frozensets of element-index tuples.
"""

from __future__ import annotations

import itertools
from functools import cached_property

import numpy as np


def _ut2(c):
    a, x = c
    return [[a, x], [0, a]]


def _blockpair(c):
    a, x, b, y = c
    return [[a, x, 0, 0], [0, a, 0, 0], [0, 0, b, y], [0, 0, 0, b]]


def _mat2(c):
    a, b, cc, d = c
    return [[a, b], [cc, d]]


def _t2(c):
    a, x, b = c
    return [[a, x], [0, b]]


def _field(c):
    return [[c[0]]]


EMBED = {"ut2": (2, _ut2), "blockpair": (4, _blockpair), "mat2": (4, _mat2), "t2": (3, _t2), "field": (1, _field)}


class MatrixRing:
    """A finite ring of ``q``-ary matrices; element ``i`` has coordinates ``coords[i]``."""

    def __init__(self, name: str, q: int):
        d, embed = EMBED[name]
        self.name, self.q, self.d = name, q, d
        self.coords = list(itertools.product(range(q), repeat=d))
        self.mats = np.array([embed(c) for c in self.coords], dtype=np.int64) % q
        self.size = len(self.coords)
        keys = {m.tobytes(): i for i, m in enumerate(self.mats)}
        prod = np.einsum("aij,bjk->abik", self.mats, self.mats) % q
        self.mul = np.array([[keys[prod[a, b].tobytes()] for b in range(self.size)] for a in range(self.size)])
        sums = (self.mats[:, None] + self.mats[None]) % q
        self.add = np.array([[keys[sums[a, b].tobytes()] for b in range(self.size)] for a in range(self.size)])
        self.neg = [int(np.flatnonzero(self.add[a] == self.zero)[0]) for a in range(self.size)]
        self.index = {c: i for i, c in enumerate(self.coords)}

    @property
    def zero(self) -> int:
        return 0

    @cached_property
    def one(self) -> int:
        eye = np.eye(self.mats.shape[1], dtype=np.int64)
        return next(i for i, m in enumerate(self.mats) if np.array_equal(m, eye))

    @cached_property
    def units(self) -> frozenset:
        return frozenset(a for a in range(self.size) if any(self.mul[a, b] == self.one and self.mul[b, a] == self.one for b in range(self.size)))

    def two_sided_ideal(self, x: int) -> frozenset:
        gens = {int(t) for t in np.unique(self.mul[self.mul[:, x]])}
        return additive_closure(self, gens)

    def ideal_power_is_zero(self, I: frozenset) -> bool:
        P = I
        for _ in range(self.size):
            if P == {self.zero}:
                return True
            P = additive_closure(self, {int(self.mul[a, b]) for a in P for b in I})
        return P == {self.zero}

    @cached_property
    def radical(self) -> frozenset:
        """Largest nilpotent two-sided ideal: the ``x`` whose ideal ``RxR`` is nilpotent."""
        return frozenset(x for x in range(self.size) if self.ideal_power_is_zero(self.two_sided_ideal(x)))


def additive_closure(R: MatrixRing, gens) -> frozenset:
    S = {R.zero}
    frontier = set(gens)
    while frontier:
        new = {int(R.add[a, b]) for a in S | frontier for b in frontier} | frontier
        new -= S
        S |= frontier
        frontier = new - S
    return frozenset(S)


# ----------------------------------------------------------------------
# modules as element sets


def vec_add(R: MatrixRing, v, w):
    return tuple(int(R.add[a, b]) for a, b in zip(v, w))


def vec_rmul(R: MatrixRing, v, r):
    return tuple(int(R.mul[a, r]) for a in v)


def vec_lmul(R: MatrixRing, r, v):
    return tuple(int(R.mul[r, a]) for a in v)


def all_vectors(R: MatrixRing, n: int):
    return list(itertools.product(range(R.size), repeat=n))


def cyclic_set(R: MatrixRing, x, side: str = "right") -> frozenset:
    if side == "right":
        return frozenset(vec_rmul(R, x, r) for r in range(R.size))
    return frozenset(vec_lmul(R, r, x) for r in range(R.size))


def module_sum(R: MatrixRing, A: frozenset, B: frozenset) -> frozenset:
    return frozenset(vec_add(R, a, b) for a in A for b in B)


def all_submodules(R: MatrixRing, n: int, side: str = "right") -> list[frozenset]:
    zero = frozenset({(R.zero,) * n})
    cyclics = {cyclic_set(R, x, side) for x in all_vectors(R, n)}
    seen = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for M in frontier:
            for Z in cyclics:
                if Z <= M:
                    continue
                S = module_sum(R, M, Z)
                if S not in seen:
                    seen.add(S)
                    nxt.append(S)
        frontier = nxt
    return sorted(seen, key=lambda s: (len(s), sorted(s)))


def zero_set(R: MatrixRing, n: int) -> frozenset:
    return frozenset({(R.zero,) * n})


def is_essential(R, n, C, lattice) -> bool:
    z = zero_set(R, n)
    return all(len(C & M) > 1 for M in lattice if M != z)


def is_essential_in(R, n, C, M, lattice) -> bool:
    z = zero_set(R, n)
    return all(len(C & X) > 1 for X in lattice if X != z and X <= M)


def is_complement_of(R, n, D, C, lattice) -> bool:
    z = zero_set(R, n)
    if C & D != z:
        return False
    return not any(D < X and C & X == z for X in lattice)


def is_closed_extension_form(R, n, C, lattice) -> bool:
    """No proper essential extension inside ``R^n``."""
    return not any(C < M and is_essential_in(R, n, C, M, lattice) for M in lattice)


def is_closed_complement_form(R, n, C, lattice) -> bool:
    """``C`` is a complement of some submodule."""
    return any(is_complement_of(R, n, C, K, lattice) for K in lattice)


def summand_by_search(R, n, C, lattice):
    z = zero_set(R, n)
    total = R.size**n
    for D in lattice:
        if C & D == z and len(C) * len(D) == total:
            return D
    return None


def min_generators(R, n, C, side: str = "right") -> int:
    elems = sorted(C)
    for k in range(0, n + 2):
        for gens in itertools.combinations(elems, k):
            M = zero_set(R, n)
            for g in gens:
                M = module_sum(R, M, cyclic_set(R, g, side))
            if M == C:
                return k
    raise AssertionError("no generating set found")


def is_free(R, n, C) -> bool:
    k = min_generators(R, n, C)
    return len(C) == R.size**k


def left_dual(R, n, C) -> frozenset:
    zero = R.zero
    out = []
    for v in all_vectors(R, n):
        ok = True
        for c in C:
            s = zero
            for a, b in zip(v, c):
                s = int(R.add[s, R.mul[a, b]])
            if s != zero:
                ok = False
                break
        if ok:
            out.append(v)
    return frozenset(out)


def weight(R, v) -> int:
    return sum(1 for a in v if a != R.zero)


def min_distance(R, C):
    ws = [weight(R, v) for v in C if weight(R, v)]
    return min(ws) if ws else None


# ----------------------------------------------------------------------
# scalar helpers


def det_mod(M, p: int) -> int:
    """Leibniz determinant modulo ``p``; larger matrices use a rounded float determinant."""
    M = [list(map(int, r)) for r in M]
    n = len(M)
    if n > 5:
        return int(round(np.linalg.det(np.array(M, dtype=float)))) % p
    total = 0
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = 1
        for i in range(n):
            term *= M[i][perm[i]]
        total += -term if inv % 2 else term
    return total % p


def block_matrix(R: MatrixRing, A_idx) -> np.ndarray:
    """Embed a ring matrix (element indices) as one big matrix over F_q."""
    rows = [np.hstack([R.mats[a] for a in row]) for row in A_idx]
    return np.vstack(rows) % R.q


def all_subspaces(p: int, N: int) -> list[frozenset]:
    vecs = list(itertools.product(range(p), repeat=N))
    zero = (0,) * N

    def span(gens):
        S = {zero}
        for g in gens:
            S = {tuple((a + c * b) % p for a, b in zip(s, g)) for s in S for c in range(p)}
        return frozenset(S)

    seen = {frozenset({zero})}
    frontier = [frozenset({zero})]
    while frontier:
        nxt = []
        for S in frontier:
            for v in vecs:
                if v in S:
                    continue
                T = span(list(S) + [v]) if len(S) < 64 else None
                if T is not None and T not in seen:
                    seen.add(T)
                    nxt.append(T)
        frontier = nxt
    return sorted(seen, key=lambda s: (len(s), sorted(s)))


def additive_closure_vec(R: MatrixRing, gens, n: int) -> frozenset:
    S = {(R.zero,) * n}
    for g in gens:
        if g in S:
            continue
        grown = set(S)
        frontier = set(S)
        while frontier:
            new = {vec_add(R, s, g) for s in frontier} - grown
            grown |= new
            frontier = new
        S = grown
    return frozenset(S)


def monomial_image(R: MatrixRing, S, sigma, u, side: str) -> frozenset:
    out = set()
    for v in S:
        if side == "left":
            out.add(tuple(int(R.mul[u[i], v[sigma[i]]]) for i in range(len(sigma))))
        else:
            out.add(tuple(int(R.mul[v[sigma[i]], u[i]]) for i in range(len(sigma))))
    return frozenset(out)


def equivalence_kind(R: MatrixRing, A, B, n: int, side: str) -> str:
    """Strongest relation between two tuple sets by exhaustive search."""
    if A == B:
        return "set-equal"
    if len(A) != len(B):
        return "none"
    perms = list(itertools.permutations(range(n)))
    one = (R.one,) * n
    if any(monomial_image(R, A, s, one, side) == B for s in perms):
        return "permutation"
    units = sorted(R.units)
    for s in perms:
        for u in itertools.product(units, repeat=n):
            if monomial_image(R, A, s, u, side) == B:
                return "monomial"
    return "none"

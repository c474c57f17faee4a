"""One-sided submodules of R^n stored as action-closed F_p-subspaces.

A vector of ``R^n`` is flattened to ``F_p^(n*d)`` block by block.  A right
submodule is a subspace closed under ``v -> v * e_k`` (componentwise) for
every algebra basis element ``e_k``; a left submodule under ``v -> e_k * v``.
All lattice operations are exact linear algebra on canonical RREF bases.

The module-theoretic predicates (essential, complement, closed) scan
nonzero vectors ``x`` of ``R^n`` and reduce to cyclic submodules ``xR``.
Only one vector per line ``{λx : λ in F_p^*}`` is scanned since
``(λx)R = xR``.  Scans refuse to run above the budget unless sampling is
requested, in which case only negative verdicts are conclusive.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, NamedTuple, Sequence

import numpy as np

from .algebra import AlgebraSpec
from .budget import Budget, default_budget
from .errors import AlgebraMismatch, BudgetExceeded, DegenerateInput, NotLocalError
from .field import DTYPE

SIDES = ("right", "left")


class Check(NamedTuple):
    """Outcome of a predicate; ``witness`` accompanies every negative verdict."""

    holds: bool
    witness: np.ndarray | None = None
    sampled: bool = False


class Summand(NamedTuple):
    holds: bool
    complement: Submodule | None


def as_vectors(alg: AlgebraSpec, vecs, n: int | None = None) -> np.ndarray:
    """Coerce vectors of ring elements (literals, coordinates or flat rows) to shape ``(k, n*d)``."""
    if isinstance(vecs, np.ndarray) and vecs.dtype != object:
        arr = vecs.astype(DTYPE)
        if arr.ndim == 3:
            return arr.reshape(arr.shape[0], -1) % alg.p
        if arr.ndim == 2:
            if n is not None and arr.shape[1] == n * alg.d:
                return arr % alg.p
            if arr.shape[1] == alg.d and n in (None, 1):
                return arr.reshape(arr.shape[0], -1) % alg.p
            raise AlgebraMismatch(f"cannot interpret vectors of shape {arr.shape} for n={n}")
        if arr.ndim == 1 and n is not None and arr.shape[0] == n * alg.d:
            return arr.reshape(1, -1) % alg.p
        raise AlgebraMismatch(f"cannot interpret vectors of shape {arr.shape}")
    rows = []
    for v in vecs:
        if isinstance(v, np.ndarray) and v.dtype != object and v.ndim == 1 and n and v.shape[0] == n * alg.d:
            rows.append(v % alg.p)
            continue
        rows.append(np.concatenate([alg._coords(x) for x in v]) if len(v) else np.zeros(0, dtype=DTYPE))
    if not rows:
        if n is None:
            raise DegenerateInput("cannot infer the length of an empty generator list")
        return np.zeros((0, n * alg.d), dtype=DTYPE)
    lengths = {r.shape[0] for r in rows}
    if len(lengths) != 1:
        raise AlgebraMismatch("generators have different lengths")
    out = np.vstack(rows).astype(DTYPE)
    if n is not None and out.shape[1] != n * alg.d:
        raise AlgebraMismatch(f"generators have length {out.shape[1] // alg.d}, expected {n}")
    return out


def act(alg: AlgebraSpec, V: np.ndarray, M: np.ndarray, n: int) -> np.ndarray:
    """Apply the ``d x d`` matrix ``M`` to every coordinate block of the rows of ``V``."""
    shape = V.shape
    return (V.reshape(-1, n, alg.d) @ M).reshape(shape) % alg.p


def unit_vector(alg: AlgebraSpec, n: int, j: int) -> np.ndarray:
    v = np.zeros(n * alg.d, dtype=DTYPE)
    v[j * alg.d : (j + 1) * alg.d] = alg.unity
    return v


@dataclass(frozen=True, eq=False)
class Submodule:
    """A side-tagged submodule of ``R^n`` given by its canonical F_p-basis."""

    algebra: AlgebraSpec
    n: int
    side: str
    basis: np.ndarray

    def __post_init__(self) -> None:
        if self.n < 1:
            raise DegenerateInput("ambient length n must be at least 1")
        if self.side not in SIDES:
            raise ValueError(f"side must be 'left' or 'right', got {self.side!r}")
        F = self.algebra.F
        B = F.row_basis(np.asarray(self.basis, dtype=DTYPE).reshape(-1, self.N))
        for M in self.algebra.action_mats(self.side):
            moved = act(self.algebra, B, M, self.n)
            if B.shape[0] and F.rank(np.vstack([B, moved])) != B.shape[0]:
                raise AssertionError(f"basis is not closed under the {self.side} action")
            if not B.shape[0] and np.any(moved):  # pragma: no cover
                raise AssertionError("zero module moved")
        B.setflags(write=False)
        object.__setattr__(self, "basis", B)

    # ------------------------------------------------------------------

    @property
    def N(self) -> int:
        return self.n * self.algebra.d

    @property
    def dim(self) -> int:
        return int(self.basis.shape[0])

    @property
    def cardinality(self) -> int:
        return self.algebra.p**self.dim

    @property
    def is_zero(self) -> bool:
        return self.dim == 0

    @property
    def is_full(self) -> bool:
        return self.dim == self.N

    @cached_property
    def key(self) -> bytes:
        return self.side.encode() + bytes([self.n]) + self.basis.tobytes()

    def vectors(self) -> np.ndarray:
        """Basis as ring vectors, shape ``(dim, n, d)``."""
        return self.basis.reshape(-1, self.n, self.algebra.d)

    def __repr__(self) -> str:
        return f"Submodule({self.side}, n={self.n}, dim_Fp={self.dim}, |M|={self.cardinality})"

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Submodule)
            and self.algebra == other.algebra
            and self.n == other.n
            and self.side == other.side
            and np.array_equal(self.basis, other.basis)
        )

    def __hash__(self) -> int:
        return hash(self.key)

    def _compatible(self, other: Submodule, same_side: bool = True) -> None:
        if self.algebra != other.algebra or self.n != other.n:
            raise AlgebraMismatch("submodules live in different ambient modules")
        if same_side and self.side != other.side:
            raise AlgebraMismatch(f"cannot combine a {self.side} and a {other.side} submodule")

    def contains(self, v) -> bool:
        v = as_vectors(self.algebra, [v] if not isinstance(v, np.ndarray) else v, self.n)
        return self.algebra.F.rank(np.vstack([self.basis, v])) == self.dim

    __contains__ = contains

    def intersect(self, other: Submodule) -> Submodule:
        self._compatible(other)
        return Submodule(self.algebra, self.n, self.side, self.algebra.F.intersect(self.basis, other.basis))

    def sum(self, other: Submodule) -> Submodule:
        self._compatible(other)
        return Submodule(self.algebra, self.n, self.side, np.vstack([self.basis, other.basis]))

    __and__ = intersect
    __add__ = sum

    def le(self, other: Submodule) -> bool:
        """Containment ``self ⊆ other``."""
        self._compatible(other)
        return self.algebra.F.rank(np.vstack([other.basis, self.basis])) == other.dim

    def elements(self, chunk: int = 1 << 16) -> Iterator[np.ndarray]:
        return self.algebra.F.span_elements(self.basis, chunk=chunk)

    @classmethod
    def zero(cls, alg: AlgebraSpec, n: int, side: str = "right") -> Submodule:
        return cls(alg, n, side, np.zeros((0, n * alg.d), dtype=DTYPE))

    @classmethod
    def full(cls, alg: AlgebraSpec, n: int, side: str = "right") -> Submodule:
        return cls(alg, n, side, np.eye(n * alg.d, dtype=DTYPE))


def close_under_action(alg: AlgebraSpec, V: np.ndarray, n: int, side: str) -> np.ndarray:
    F = alg.F
    B = F.row_basis(V)
    mats = alg.action_mats(side)
    while B.shape[0]:
        nb = F.row_basis(np.vstack([B] + [act(alg, B, M, n) for M in mats]))
        if nb.shape[0] == B.shape[0]:
            break
        B = nb
    return B


def from_generators(alg: AlgebraSpec, gens, side: str = "right", n: int | None = None) -> Submodule:
    """Smallest ``side``-submodule containing ``gens``."""
    V = as_vectors(alg, gens, n)
    n = V.shape[1] // alg.d if n is None else n
    if n == 0:
        raise DegenerateInput("ambient length n must be at least 1")
    return Submodule(alg, n, side, close_under_action(alg, V, n, side))


def cyclic(alg: AlgebraSpec, x, side: str = "right", n: int | None = None) -> Submodule:
    """``xR`` (right) or ``Rx`` (left)."""
    V = as_vectors(alg, [x] if not isinstance(x, np.ndarray) else x, n)
    n = V.shape[1] // alg.d if n is None else n
    mats = alg.action_mats(side)
    return Submodule(alg, n, side, np.vstack([act(alg, V, M, n) for M in mats]))


def _cyclic_gens(alg: AlgebraSpec, X: np.ndarray, n: int, side: str) -> np.ndarray:
    """Spanning sets of the cyclic modules of a batch: shape ``(B, d, N)``."""
    mats = alg.action_mats(side)
    Xb = X.reshape(X.shape[0], n, alg.d)
    return (np.einsum("bni,kij->bknj", Xb, mats) % alg.p).reshape(X.shape[0], alg.d, -1)


# ----------------------------------------------------------------------
# radical, generators, freeness


def times_radical(C: Submodule) -> Submodule:
    """``CJ(R)`` for right modules, ``J(R)C`` for left modules."""
    alg = C.algebra
    J = alg.jacobson_radical().basis
    if C.is_zero or J.shape[0] == 0:
        return Submodule.zero(alg, C.n, C.side)
    mats = alg.right_mat(J) if C.side == "right" else alg.left_mat(J)
    prods = np.vstack([act(alg, C.basis, M, C.n) for M in mats])
    out = from_generators(alg, prods, C.side, C.n)
    if out == C:
        # Nakayama: MJ = M forces M = 0
        raise AssertionError("C J(R) = C for a nonzero module")
    return out


def minimal_generators(C: Submodule, prefer=None, allow_nonlocal: bool = False) -> np.ndarray:
    """Lift a basis of ``C / CJ(R)`` to generators of ``C``; rows of shape ``(k, n*d)``.

    Over a local ring the result is a minimal generating set.  Candidates from
    ``prefer`` (which must lie in ``C``) are tried before the basis of ``C``.
    """
    alg = C.algebra
    if not alg.is_local and not allow_nonlocal:
        raise NotLocalError(f"minimal generators need a local ring; {alg.name} is not local")
    F = alg.F
    cands = [C.basis]
    if prefer is not None:
        P = as_vectors(alg, prefer, C.n)
        if P.shape[0] and F.rank(np.vstack([C.basis, P])) != C.dim:
            raise AlgebraMismatch("preferred generators do not lie in the module")
        cands.insert(0, P)
    M = times_radical(C)
    gens = []
    for v in np.vstack(cands):
        if M.dim == C.dim:
            break
        if not np.any(v) or M.contains(v.reshape(1, -1)):
            continue
        gens.append(v)
        M = M + cyclic(alg, v.reshape(1, -1), C.side, C.n)
    if not gens:
        return np.zeros((0, C.N), dtype=DTYPE)
    return np.vstack(gens)


def is_free(C: Submodule) -> tuple[bool, int | None]:
    """Freeness over a local ring: ``|C| = |R|^k`` with ``k`` minimal generators."""
    alg = C.algebra
    if not alg.is_local:
        raise NotLocalError(f"freeness by cardinality is inconclusive over the non-local ring {alg.name}")
    k = minimal_generators(C).shape[0]
    if C.dim == k * alg.d:
        return True, k
    return False, None


def cardinality_rules_out_free(C: Submodule) -> bool:
    """True when ``|C|`` is not a power of ``|R|`` (so ``C`` cannot be free over any ring)."""
    return C.dim % C.algebra.d != 0


def pi_image(C: Submodule) -> np.ndarray:
    """Canonical F_p-basis of ``π(C) ⊆ F_p^n``."""
    alg = C.algebra
    f = alg.residue_functional
    if C.is_zero:
        return np.zeros((0, C.n), dtype=DTYPE)
    return alg.F.row_basis(C.vectors() @ f % alg.p)


# ----------------------------------------------------------------------
# x-scans


def _scan(alg: AlgebraSpec, n: int, budget: Budget, sample: bool, seed: int, chunk: int = 1 << 13):
    """Yield ``(X, sampled)`` chunks of nonzero vectors, one per F_p-line, in increasing index order."""
    F = alg.F
    N = n * alg.d
    total = alg.p**N
    if total <= budget.scan:
        for start in range(1, total, chunk):
            X = F.decode(np.arange(start, min(total, start + chunk)), N)
            lead = X[np.arange(X.shape[0]), np.argmax(X != 0, axis=1)]
            yield X[lead == 1], False
        return
    if not sample:
        raise BudgetExceeded(f"|R^n| = {total} exceeds the scan budget {budget.scan}; enable sampling to proceed")
    rng = np.random.default_rng(seed)
    left = budget.samples
    while left > 0:
        k = min(chunk, left)
        X = rng.integers(0, alg.p, size=(k, N), dtype=DTYPE)
        X = X[np.any(X, axis=1)]
        left -= k
        yield X, True


def _batch_rank_proj(alg: AlgebraSpec, G: np.ndarray, P: np.ndarray) -> np.ndarray:
    if P.shape[1] == 0:
        return np.zeros(G.shape[0], dtype=DTYPE)
    return alg.F.batch_rank(np.einsum("bkn,nm->bkm", G, P) % alg.p)


def is_essential(
    C: Submodule, budget: Budget | None = None, sample: bool = False, seed: int = 0
) -> Check:
    """Does ``C`` meet every nonzero cyclic submodule ``xR`` of ``R^n``?"""
    alg, budget = C.algebra, budget or default_budget()
    if C.is_full:
        return Check(True)
    P = alg.F.quotient_map(C.basis, C.N)
    sampled = False
    for X, sampled in _scan(alg, C.n, budget, sample, seed):
        G = _cyclic_gens(alg, X, C.n, C.side)
        r_all = alg.F.batch_rank(G)
        r_mod = _batch_rank_proj(alg, G, P)
        bad = np.flatnonzero(r_all == r_mod)
        if bad.size:
            return Check(False, X[bad[0]], sampled)
    return Check(True, None, sampled)


def is_complement_of(
    D: Submodule, C: Submodule, budget: Budget | None = None, sample: bool = False, seed: int = 0
) -> Check:
    """Is ``D`` maximal among submodules meeting ``C`` trivially?"""
    C._compatible(D)
    alg, budget = C.algebra, budget or default_budget()
    meet = C & D
    if not meet.is_zero:
        return Check(False, meet.basis[0])
    CD = C + D
    if CD.is_full:
        return Check(True)
    F = alg.F
    P_D = F.quotient_map(D.basis, C.N)
    P_CD = F.quotient_map(CD.basis, C.N)
    sampled = False
    for X, sampled in _scan(alg, C.n, budget, sample, seed):
        outside = np.any(X @ P_D % alg.p, axis=1)
        X = X[outside]
        if not X.shape[0]:
            continue
        G = _cyclic_gens(alg, X, C.n, C.side)
        # dim C ∩ (D + xR) = rank(xR mod D) - rank(xR mod C+D) when C ∩ D = 0
        bad = np.flatnonzero(_batch_rank_proj(alg, G, P_D) == _batch_rank_proj(alg, G, P_CD))
        if bad.size:
            return Check(False, X[bad[0]], sampled)
    return Check(True, None, sampled)


def socle(M: Submodule) -> Submodule:
    """``Soc(M) = {m in M : mJ = 0}`` (right) or ``{m : Jm = 0}`` (left)."""
    alg = M.algebra
    J = alg.jacobson_radical().basis
    if J.shape[0] == 0 or M.is_zero:
        return M
    F = alg.F
    mats = alg.right_mat(J) if M.side == "right" else alg.left_mat(J)
    big = np.hstack([np.kron(np.eye(M.n, dtype=DTYPE), A) for A in mats])
    killed = F.left_kernel(big)
    return Submodule(alg, M.n, M.side, F.intersect(M.basis, killed) if killed.shape[0] else killed)


def is_essential_in(C: Submodule, M: Submodule) -> bool:
    """``C ≤_e M`` for ``C ⊆ M``; over a finite ring this is ``Soc(M) ⊆ C``."""
    return socle(M).le(C)


def is_closed(C: Submodule, budget: Budget | None = None, sample: bool = False, seed: int = 0) -> Check:
    """Does ``C`` have no proper essential extension ``C ⊊ M ⊆ R^n``?

    Any proper essential extension contains one of the form ``C + xR``, so it
    suffices to test those; the witness is such an ``x``.
    """
    alg, budget = C.algebra, budget or default_budget()
    if C.is_full:
        return Check(True)
    P = alg.F.quotient_map(C.basis, C.N)
    seen: set[bytes] = set()
    sampled = False
    for X, sampled in _scan(alg, C.n, budget, sample, seed):
        X = X[np.any(X @ P % alg.p, axis=1)]
        for x in X:
            M = C + cyclic(alg, x.reshape(1, -1), C.side, C.n)
            if M.key in seen:
                continue
            seen.add(M.key)
            if is_essential_in(C, M):
                return Check(False, x, sampled)
    return Check(True, None, sampled)


def is_direct_summand(C: Submodule) -> Summand:
    """Find ``D`` with ``C ⊕ D = R^n`` or prove none exists.

    ``C`` is a summand iff some module map ``φ: R^n -> C`` fixes ``C``
    pointwise.  ``φ`` is determined by the images ``c_j = φ(ε_j) ∈ C`` of the
    standard basis, and ``φ(b) = b`` for the basis of ``C`` is linear in the
    ``c_j``, so existence is a single linear solve.  The complement is
    ``ker φ``, generated by ``ε_j - c_j``.
    """
    alg, F = C.algebra, C.algebra.F
    n, d, k, N = C.n, alg.d, C.dim, C.N
    if C.is_full:
        return Summand(True, Submodule.zero(alg, n, C.side))
    if C.is_zero:
        return Summand(True, Submodule.full(alg, n, C.side))
    B = C.basis
    blocks = B.reshape(k, n, d)
    mul_mat = alg.right_mat if C.side == "right" else alg.left_mat
    columns = []
    for b in blocks:
        mats = mul_mat(b)  # (n, d, d): action of each coordinate of b
        columns.append(np.vstack([act(alg, B, mats[j], n) for j in range(n)]))
    big = np.hstack(columns)  # (n*k, k*N)
    target = B.reshape(-1)
    lam = F.solve(big.T, target)
    if lam is None:
        return Summand(False, None)
    images = F.dot(lam.reshape(n, k), B)
    gens = np.vstack([(unit_vector(alg, n, j) - images[j]) % alg.p for j in range(n)])
    D = from_generators(alg, gens, C.side, n)
    if not ((C & D).is_zero and C.dim + D.dim == N):
        raise AssertionError("projection complement failed")
    return Summand(True, D)

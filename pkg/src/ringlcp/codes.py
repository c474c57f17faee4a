"""Ring matrices, linear codes, duals and weights.

Storage convention: a code is always the right span of the rows of its
generator matrix.  The column-image form ``{M α^T : α in R^n}`` used for
idempotent descriptions is the right span of the columns of ``M``, which is
what :func:`column_image` builds.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .algebra import AlgebraSpec, RingElem, format_element
from .budget import Budget, default_budget
from .errors import AlgebraMismatch, BudgetExceeded, NotIdempotent, NotLocalError
from .field import DTYPE
from .rmodule import Submodule, as_vectors, from_generators, minimal_generators


@dataclass(frozen=True, eq=False)
class RingMatrix:
    """A ``k x n`` matrix over ``R``; ``entries`` has shape ``(k, n, d)``."""

    algebra: AlgebraSpec
    entries: np.ndarray

    def __post_init__(self) -> None:
        E = np.asarray(self.entries, dtype=DTYPE)
        if E.ndim != 3 or E.shape[2] != self.algebra.d:
            raise AlgebraMismatch(f"ring matrix entries must have shape (k, n, {self.algebra.d}), got {E.shape}")
        E = E % self.algebra.p
        E.setflags(write=False)
        object.__setattr__(self, "entries", E)

    @classmethod
    def from_rows(cls, alg: AlgebraSpec, rows, n: int | None = None) -> RingMatrix:
        V = as_vectors(alg, rows, n)
        width = V.shape[1] // alg.d
        return cls(alg, V.reshape(V.shape[0], width, alg.d))

    @classmethod
    def identity(cls, alg: AlgebraSpec, n: int) -> RingMatrix:
        E = np.zeros((n, n, alg.d), dtype=DTYPE)
        E[np.arange(n), np.arange(n)] = alg.unity
        return cls(alg, E)

    @classmethod
    def zeros(cls, alg: AlgebraSpec, k: int, n: int) -> RingMatrix:
        return cls(alg, np.zeros((k, n, alg.d), dtype=DTYPE))

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape[0], self.entries.shape[1]

    @property
    def rows(self) -> np.ndarray:
        """Flattened rows, shape ``(k, n*d)``."""
        return self.entries.reshape(self.shape[0], self.shape[1] * self.algebra.d)

    def _check(self, other: RingMatrix) -> None:
        if self.algebra != other.algebra:
            raise AlgebraMismatch("matrices over different rings")

    def __matmul__(self, other: RingMatrix) -> RingMatrix:
        self._check(other)
        if self.shape[1] != other.shape[0]:
            raise AlgebraMismatch(f"cannot multiply {self.shape} by {other.shape}")
        prod = np.einsum("ila,ljb,abk->ijk", self.entries, other.entries, self.algebra.c)
        return RingMatrix(self.algebra, prod % self.algebra.p)

    def __add__(self, other: RingMatrix) -> RingMatrix:
        self._check(other)
        if self.shape != other.shape:
            raise AlgebraMismatch(f"shape mismatch {self.shape} vs {other.shape}")
        return RingMatrix(self.algebra, self.entries + other.entries)

    def __sub__(self, other: RingMatrix) -> RingMatrix:
        self._check(other)
        if self.shape != other.shape:
            raise AlgebraMismatch(f"shape mismatch {self.shape} vs {other.shape}")
        return RingMatrix(self.algebra, self.entries - other.entries)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, RingMatrix)
            and self.algebra == other.algebra
            and np.array_equal(self.entries, other.entries)
        )

    __hash__ = None  # type: ignore[assignment]

    @property
    def T(self) -> RingMatrix:
        """Entrywise transpose (no ring involution is applied)."""
        return RingMatrix(self.algebra, self.entries.transpose(1, 0, 2))

    def transpose(self) -> RingMatrix:
        return self.T

    def stack(self, other: RingMatrix) -> RingMatrix:
        self._check(other)
        if self.shape[1] != other.shape[1]:
            raise AlgebraMismatch("stacked matrices need the same number of columns")
        return RingMatrix(self.algebra, np.concatenate([self.entries, other.entries]))

    def is_square(self) -> bool:
        return self.shape[0] == self.shape[1]

    def is_idempotent(self) -> bool:
        return self.is_square() and self @ self == self

    def pi(self) -> np.ndarray:
        """Entrywise residue map, a ``k x n`` matrix over F_p."""
        return self.entries @ self.algebra.residue_functional % self.algebra.p

    def to_literals(self) -> list[list[str]]:
        return [[format_element(self.algebra, x) for x in row] for row in self.entries]

    def __repr__(self) -> str:
        return f"RingMatrix({self.to_literals()})"


def stack(A: RingMatrix, B: RingMatrix) -> RingMatrix:
    return A.stack(B)


def column_image(M: RingMatrix) -> Submodule:
    """``{M α^T : α in R^n}`` as a right submodule (right span of the columns of ``M``)."""
    return from_generators(M.algebra, M.T.rows, "right", M.shape[0])


def left_row_span(M: RingMatrix) -> Submodule:
    """``{β M : β in R^k}``, the left span of the rows of ``M``."""
    return from_generators(M.algebra, M.rows, "left", M.shape[1])


@dataclass(frozen=True, eq=False)
class LinearCode:
    """A right submodule together with the generator rows it was built from."""

    module: Submodule
    gen: RingMatrix

    def __post_init__(self) -> None:
        if self.module.side != "right":
            raise AlgebraMismatch("a linear code is a right submodule")
        if from_generators(self.algebra, self.gen.rows, "right", self.n) != self.module:
            raise AssertionError("generator rows do not generate the module")

    @classmethod
    def from_generators(cls, alg: AlgebraSpec, gens, n: int | None = None) -> LinearCode:
        G = RingMatrix.from_rows(alg, gens, n)
        n = G.shape[1] if n is None else n
        return cls(from_generators(alg, G.rows, "right", n), G)

    @classmethod
    def from_module(cls, M: Submodule) -> LinearCode:
        if M.side != "right":
            raise AlgebraMismatch("a linear code is a right submodule")
        return cls(M, RingMatrix(M.algebra, M.vectors()))

    @property
    def algebra(self) -> AlgebraSpec:
        return self.module.algebra

    @property
    def n(self) -> int:
        return self.module.n

    @property
    def cardinality(self) -> int:
        return self.module.cardinality

    @cached_property
    def dual(self) -> Submodule:
        return dual(self)

    @cached_property
    def weight_distribution(self) -> list[int]:
        return weight_distribution(self.module)

    @cached_property
    def min_distance(self) -> int | None:
        return min_distance(self.module)

    def __repr__(self) -> str:
        return f"LinearCode(n={self.n}, |C|={self.cardinality}, G={self.gen.to_literals()})"


def _module(C) -> Submodule:
    return C.module if isinstance(C, LinearCode) else C


# ----------------------------------------------------------------------
# inner product and annihilators


def _flat_vector(alg: AlgebraSpec, v) -> np.ndarray:
    if isinstance(v, np.ndarray) and v.dtype != object:
        flat = v.reshape(1, -1)
        if flat.shape[1] % alg.d:
            raise AlgebraMismatch(f"vector of {flat.shape[1]} coordinates is not a vector over {alg.name}")
        return as_vectors(alg, flat, flat.shape[1] // alg.d)
    return as_vectors(alg, [v])


def inner_product(alg: AlgebraSpec, x, y) -> RingElem:
    """``[x, y] = Σ x_i y_i`` with the order of the factors kept."""
    X, Y = (_flat_vector(alg, v) for v in (x, y))
    if X.shape != Y.shape:
        raise AlgebraMismatch("inner product of vectors of different lengths")
    n = X.shape[1] // alg.d
    terms = alg.mul(X.reshape(n, alg.d), Y.reshape(n, alg.d))
    return alg.element(terms.sum(axis=0) % alg.p)


def _annihilator(M: Submodule, side: str) -> Submodule:
    alg, n = M.algebra, M.n
    if M.is_zero:
        return Submodule.full(alg, n, side)
    # left annihilator: Σ_j v_j b_j = Σ_j v_j @ right_mat(b_j); right annihilator mirrors it
    mul_mat = alg.right_mat if side == "left" else alg.left_mat
    blocks = [mul_mat(b).reshape(n * alg.d, alg.d) for b in M.vectors()]
    kern = alg.F.left_kernel(np.hstack(blocks))
    return Submodule(alg, n, side, kern)


def left_annihilator(M) -> Submodule:
    """``Ann_l(M) = {v : [v, c] = 0 for all c in M}``, a left submodule."""
    return _annihilator(_module(M), "left")


def right_annihilator(M) -> Submodule:
    """``Ann_r(M) = {w : [l, w] = 0 for all l in M}``, a right submodule."""
    return _annihilator(_module(M), "right")


def dual(C) -> Submodule:
    """The dual code, computed as the left annihilator."""
    M = _module(C)
    if M.side != "right":
        raise AlgebraMismatch("the dual is defined for right codes")
    return left_annihilator(M)


def parity_generators(C) -> tuple[RingMatrix, bool]:
    """Rows generating the dual as a left module, and whether they are minimal.

    Over a local ring the rows lift a basis of ``C^⊥ / J C^⊥`` and are
    minimal; otherwise they only generate.
    """
    D = dual(C)
    alg = D.algebra
    minimal = alg.is_local
    rows = minimal_generators(D, allow_nonlocal=True)
    return RingMatrix(alg, rows.reshape(rows.shape[0], D.n, alg.d)), minimal


# ----------------------------------------------------------------------
# invertibility


def invertible_over_R(A: RingMatrix) -> bool:
    """π-criterion: ``π(A)`` invertible over the residue field (local rings)."""
    if not A.is_square():
        raise AlgebraMismatch(f"invertibility needs a square matrix, got {A.shape}")
    if not A.algebra.is_local:
        raise NotLocalError(f"the residue criterion needs a local ring; {A.algebra.name} is not local")
    if A.shape[0] == 0:
        return True
    return A.algebra.F.is_invertible(A.pi())


def _operator(alg: AlgebraSpec, E: np.ndarray) -> np.ndarray:
    """Matrices of ``X -> A X`` on column vectors, for a stack ``E`` of shape ``(B, n, n, d)``."""
    B, n = E.shape[0], E.shape[1]
    L = alg.left_mat(E)  # (B, n, n, d, d); block (i, j) acts as x_j -> A_ij x_j
    return L.transpose(0, 2, 3, 1, 4).reshape(B, n * alg.d, n * alg.d)


def unit_in_matrix_ring(A: RingMatrix) -> bool:
    """Exact unit test in ``M_n(R)``: left multiplication by ``A`` is a bijection."""
    if not A.is_square():
        raise AlgebraMismatch(f"invertibility needs a square matrix, got {A.shape}")
    if A.shape[0] == 0:
        return True
    return bool(unit_in_matrix_ring_batch(A.algebra, A.entries[None])[0])


def unit_in_matrix_ring_batch(alg: AlgebraSpec, E: np.ndarray) -> np.ndarray:
    E = np.asarray(E, dtype=DTYPE)
    N = E.shape[1] * alg.d
    out = np.empty(E.shape[0], dtype=bool)
    step = max(1, (1 << 22) // max(1, N * N))
    for s in range(0, E.shape[0], step):
        out[s : s + step] = alg.F.batch_rank(_operator(alg, E[s : s + step])) == N
    return out


def matrix_inverse(A: RingMatrix) -> RingMatrix | None:
    """Two-sided inverse in ``M_n(R)`` by solving ``A X = I`` column by column."""
    if not unit_in_matrix_ring(A):
        return None
    alg, n = A.algebra, A.shape[0]
    op = _operator(alg, A.entries[None])[0]
    cols = []
    for j in range(n):
        target = np.zeros(n * alg.d, dtype=DTYPE)
        target[j * alg.d : (j + 1) * alg.d] = alg.unity
        cols.append(alg.F.solve(op.T, target).reshape(n, alg.d))
    X = RingMatrix(alg, np.stack(cols, axis=1))
    I = RingMatrix.identity(alg, n)
    if not (A @ X == I and X @ A == I):
        raise AssertionError("matrix inverse failed to verify")
    return X


# ----------------------------------------------------------------------
# weights


def weight_distribution(C, budget: Budget | None = None) -> list[int]:
    """Counts of codewords by Hamming weight over the alphabet ``R``, indexed ``0..n``."""
    M, budget = _module(C), budget or default_budget()
    if M.cardinality > budget.distance:
        raise BudgetExceeded(f"|C| = {M.cardinality} exceeds the distance budget {budget.distance}")
    d = M.algebra.d
    hist = np.zeros(M.n + 1, dtype=np.int64)
    for words in M.elements():
        w = np.any(words.reshape(-1, M.n, d) != 0, axis=2).sum(axis=1)
        hist += np.bincount(w, minlength=M.n + 1)
    return [int(h) for h in hist]


def min_distance(C, budget: Budget | None = None) -> int | None:
    """Minimum nonzero Hamming weight, or ``None`` for the zero code."""
    M, budget = _module(C), budget or default_budget()
    if M.is_zero:
        return None
    if M.cardinality > budget.distance:
        raise BudgetExceeded(f"|C| = {M.cardinality} exceeds the distance budget {budget.distance}")
    d, best = M.algebra.d, M.n
    for words in M.elements():
        w = np.any(words.reshape(-1, M.n, d) != 0, axis=2).sum(axis=1)
        w = w[w > 0]
        if w.size:
            best = min(best, int(w.min()))
        if best == 1:
            break
    return best


@dataclass(frozen=True)
class LcpSecurity:
    d_C: int | None
    d_Dperp: int | None

    def as_dict(self) -> dict:
        return {"d_C": self.d_C, "d_Dperp": self.d_Dperp}


# ----------------------------------------------------------------------
# idempotents


@dataclass(frozen=True, eq=False)
class IdempotentCodes:
    """``C_e = {e^T α^T}`` and ``L_e = {β (1 - e^T)}`` for an idempotent ``e``.

    ``dual_matches`` records whether ``C_e^⊥ = L_e``.  Over a non-commutative
    ring that identity needs ``e^T`` itself to be idempotent, which is
    reported separately as ``transpose_idempotent``.
    """

    e: RingMatrix
    code: LinearCode
    left: Submodule
    dual_matches: bool
    transpose_idempotent: bool


def idempotent_codes(e: RingMatrix) -> IdempotentCodes:
    if not e.is_idempotent():
        raise NotIdempotent("e is not an idempotent square matrix")
    alg, n = e.algebra, e.shape[0]
    C = LinearCode(column_image(e.T), e)
    L = left_row_span(RingMatrix.identity(alg, n) - e.T)
    return IdempotentCodes(e, C, L, dual(C) == L, e.T.is_idempotent())

"""Exact dense linear algebra over finite fields.

Field elements are canonical integers in ``range(q)``.  For a prime field
the integer is the residue itself; for ``F_{p^m}`` it encodes the
coefficient vector ``(c_0, ..., c_{m-1})`` of the reduced polynomial as
``sum(c_i * p**i)``.  Matrices are plain ``numpy`` integer arrays holding
such canonical values; every operation returns canonical values again.

Pivoting is deterministic (first nonzero entry in column order) and there
is no tolerance anywhere: arithmetic is exact.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .budget import FIELD_ORDER_CAP
from .errors import FieldError

DTYPE = np.int64


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def _poly_mod(a: list[int], m: list[int], p: int) -> list[int]:
    """Remainder of ``a`` modulo the monic polynomial ``m`` (low-to-high coefficients)."""
    a = [c % p for c in a]
    dm = len(m) - 1
    while len(a) - 1 >= dm and any(a):
        while a and a[-1] == 0:
            a.pop()
        if len(a) - 1 < dm:
            break
        lead, shift = a[-1], len(a) - 1 - dm
        for i, c in enumerate(m):
            a[shift + i] = (a[shift + i] - lead * c) % p
        a.pop()
    while a and a[-1] == 0:
        a.pop()
    return a


def is_irreducible(modulus: list[int], p: int) -> bool:
    """Exhaustive factor search: no monic factor of degree ``1..m//2`` divides."""
    m = len(modulus) - 1
    for deg in range(1, m // 2 + 1):
        for low in itertools.product(range(p), repeat=deg):
            if not _poly_mod(list(modulus), list(low) + [1], p):
                return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Characteristic, degree and (for ``m > 1``) the defining modulus.

    ``modulus`` lists the coefficients of a monic degree-``m`` polynomial from
    the constant term upwards, e.g. ``(1, 1, 1)`` for ``x^2 + x + 1``.
    """

    p: int
    m: int = 1
    modulus: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if not isinstance(self.p, (int, np.integer)) or not is_prime(int(self.p)):
            raise FieldError(f"characteristic must be prime, got {self.p!r}")
        if self.m < 1:
            raise FieldError(f"extension degree must be >= 1, got {self.m}")
        if self.p**self.m > FIELD_ORDER_CAP:
            raise FieldError(f"field order {self.p}^{self.m} exceeds cap {FIELD_ORDER_CAP}")
        if self.m == 1:
            if self.modulus:
                raise FieldError("prime fields take no modulus")
            return
        mod = tuple(int(c) % self.p for c in self.modulus)
        object.__setattr__(self, "modulus", mod)
        if len(mod) != self.m + 1 or mod[-1] != 1:
            raise FieldError(f"modulus must be monic of degree {self.m}: {self.modulus!r}")
        if not is_irreducible(list(mod), self.p):
            raise FieldError(f"modulus {self.modulus!r} is reducible over F_{self.p}")

    @property
    def q(self) -> int:
        return self.p**self.m


class GF:
    """Finite field ``F_q`` with vectorised element arithmetic and matrix routines."""

    def __init__(self, spec: FieldSpec | int):
        if not isinstance(spec, FieldSpec):
            spec = FieldSpec(int(spec))
        self.spec = spec
        self.p = spec.p
        self.m = spec.m
        self.q = spec.q
        if self.m == 1:
            inv = np.zeros(self.p, dtype=DTYPE)
            for a in range(1, self.p):
                inv[a] = pow(a, self.p - 2, self.p)
            self._inv = inv
        else:
            self._build_extension_tables()

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.m})" if self.m > 1 else f"GF({self.p})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GF) and other.spec == self.spec

    def __hash__(self) -> int:
        return hash(self.spec)

    # ------------------------------------------------------------------
    # element arithmetic

    def _build_extension_tables(self) -> None:
        p, m, q = self.p, self.m, self.q
        powers = p ** np.arange(m, dtype=DTYPE)
        digits = (np.arange(q, dtype=DTYPE)[:, None] // powers[None, :]) % p
        self._powers, self._digits = powers, digits
        modulus = list(self.spec.modulus)

        def polymul(a: int, b: int) -> int:
            prod = np.convolve(digits[a], digits[b]) % p
            red = _poly_mod(list(prod), modulus, p)
            return int(sum(c * p**i for i, c in enumerate(red)))

        for g in range(2, q):
            exp = np.zeros(q - 1, dtype=DTYPE)
            x = 1
            for k in range(q - 1):
                exp[k] = x
                x = polymul(x, g)
            if len(set(exp.tolist())) == q - 1:
                break
        else:  # pragma: no cover - a finite field always has a primitive element
            raise FieldError("no primitive element found")
        log = np.zeros(q, dtype=DTYPE)
        log[exp] = np.arange(q - 1, dtype=DTYPE)
        self._exp, self._log = exp, log

    def asarray(self, a) -> np.ndarray:
        arr = np.asarray(a, dtype=DTYPE)
        if self.m == 1:
            return arr % self.p
        if arr.size and (arr.min() < 0 or arr.max() >= self.q):
            raise FieldError(f"entries must be encoded elements of {self!r}")
        return arr

    def _encode(self, digits: np.ndarray) -> np.ndarray:
        return (digits % self.p) @ self._powers

    def add(self, a, b):
        if self.m == 1:
            return (np.asarray(a) + np.asarray(b)) % self.p
        a, b = np.asarray(a), np.asarray(b)
        return self._encode(self._digits[a] + self._digits[b])

    def neg(self, a):
        if self.m == 1:
            return (-np.asarray(a)) % self.p
        return self._encode(-self._digits[np.asarray(a)])

    def sub(self, a, b):
        if self.m == 1:
            return (np.asarray(a) - np.asarray(b)) % self.p
        a, b = np.asarray(a), np.asarray(b)
        return self._encode(self._digits[a] - self._digits[b])

    def mul(self, a, b):
        if self.m == 1:
            return (np.asarray(a) * np.asarray(b)) % self.p
        a, b = np.broadcast_arrays(np.asarray(a), np.asarray(b))
        out = self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]
        return np.where((a == 0) | (b == 0), 0, out)

    def inv(self, a):
        a = np.asarray(a)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero")
        if self.m == 1:
            return self._inv[a]
        return self._exp[(-self._log[a]) % (self.q - 1)]

    def dot(self, A, B) -> np.ndarray:
        """Matrix product ``A @ B`` over the field."""
        A, B = np.asarray(A, dtype=DTYPE), np.asarray(B, dtype=DTYPE)
        if self.m == 1:
            return (A @ B) % self.p
        prods = self.mul(A[..., :, :, None], B[..., None, :, :])
        digits = self._digits[prods].sum(axis=-3)
        return self._encode(digits)

    # ------------------------------------------------------------------
    # matrix routines

    def _check2d(self, M) -> np.ndarray:
        M = self.asarray(M)
        if M.ndim != 2:
            raise FieldError(f"expected a 2-d matrix, got shape {M.shape}")
        return M

    def rref(self, M) -> tuple[np.ndarray, int, list[int]]:
        """Reduced row-echelon form, rank and pivot columns.

        The returned matrix has the shape of ``M`` with zero rows last.
        """
        A = self._check2d(M).copy()
        rows, cols = A.shape
        pivots: list[int] = []
        r = 0
        for c in range(cols):
            if r == rows:
                break
            nz = np.flatnonzero(A[r:, c])
            if nz.size == 0:
                continue
            i = r + int(nz[0])
            if i != r:
                A[[r, i]] = A[[i, r]]
            if A[r, c] != 1:
                A[r] = self.mul(A[r], self.inv(A[r, c]))
            others = np.flatnonzero(A[:, c])
            others = others[others != r]
            if others.size:
                A[others] = self.sub(A[others], self.mul(A[others, c][:, None], A[r][None, :]))
            pivots.append(c)
            r += 1
        return A, r, pivots

    def row_basis(self, M) -> np.ndarray:
        """Canonical basis (nonzero RREF rows) of the row space of ``M``."""
        M = self._check2d(M)
        if M.shape[0] == 0:
            return M.copy()
        R, r, _ = self.rref(M)
        return R[:r]

    def rank(self, M) -> int:
        M = self._check2d(M)
        if M.shape[0] == 0 or M.shape[1] == 0:
            return 0
        return self.rref(M)[1]

    def kernel(self, M) -> np.ndarray:
        """Basis rows ``v`` of the right null space, ``M @ v = 0``."""
        M = self._check2d(M)
        cols = M.shape[1]
        if M.shape[0] == 0:
            return np.eye(cols, dtype=DTYPE)
        R, r, pivots = self.rref(M)
        pivset = set(pivots)
        free = [c for c in range(cols) if c not in pivset]
        K = np.zeros((len(free), cols), dtype=DTYPE)
        for k, f in enumerate(free):
            K[k, f] = 1
            for i, pc in enumerate(pivots):
                K[k, pc] = self.neg(R[i, f])
        return K

    def left_kernel(self, M) -> np.ndarray:
        """Basis rows ``v`` with ``v @ M = 0``."""
        return self.kernel(self._check2d(M).T)

    def intersect(self, A, B) -> np.ndarray:
        """Canonical basis of ``rowspace(A) ∩ rowspace(B)``."""
        A, B = self._check2d(A), self._check2d(B)
        if A.shape[1] != B.shape[1]:
            raise FieldError(f"column mismatch {A.shape[1]} vs {B.shape[1]}")
        cols = A.shape[1]
        if A.shape[0] == 0 or B.shape[0] == 0:
            return np.zeros((0, cols), dtype=DTYPE)
        K = self.left_kernel(np.vstack([A, B]))
        if K.shape[0] == 0:
            return np.zeros((0, cols), dtype=DTYPE)
        return self.row_basis(self.dot(K[:, : A.shape[0]], A))

    def same_rowspace(self, A, B) -> bool:
        A, B = self.row_basis(A), self.row_basis(B)
        return A.shape == B.shape and bool(np.array_equal(A, B))

    def contains(self, basis, v) -> bool:
        """Is ``v`` in the row space of ``basis``?"""
        basis = self._check2d(basis)
        v = self.asarray(v).reshape(1, -1)
        return self.rank(np.vstack([basis, v])) == self.rank(basis)

    def is_invertible(self, M) -> bool:
        M = self._check2d(M)
        if M.shape[0] != M.shape[1]:
            raise FieldError(f"is_invertible needs a square matrix, got {M.shape}")
        return self.rank(M) == M.shape[0]

    def det(self, M) -> int:
        M = self._check2d(M)
        n = M.shape[0]
        if M.shape[1] != n:
            raise FieldError(f"det needs a square matrix, got {M.shape}")
        A = M.copy()
        d = 1
        for c in range(n):
            nz = np.flatnonzero(A[c:, c])
            if nz.size == 0:
                return 0
            i = c + int(nz[0])
            if i != c:
                A[[c, i]] = A[[i, c]]
                d = int(self.neg(d))
            piv = A[c, c]
            d = int(self.mul(d, piv))
            if c + 1 < n:
                f = self.mul(A[c + 1 :, c], self.inv(piv))
                A[c + 1 :] = self.sub(A[c + 1 :], self.mul(f[:, None], A[c][None, :]))
        return d

    def solve(self, M, b) -> np.ndarray | None:
        """Some ``x`` with ``M @ x = b``, or ``None`` when the system is inconsistent."""
        M = self._check2d(M)
        b = self.asarray(b).reshape(-1)
        if b.shape[0] != M.shape[0]:
            raise FieldError(f"rhs length {b.shape[0]} does not match {M.shape[0]} rows")
        cols = M.shape[1]
        if M.shape[0] == 0:
            return np.zeros(cols, dtype=DTYPE)
        R, r, pivots = self.rref(np.hstack([M, b[:, None]]))
        if pivots and pivots[-1] == cols:
            return None
        x = np.zeros(cols, dtype=DTYPE)
        for i, pc in enumerate(pivots):
            x[pc] = R[i, cols]
        return x

    def quotient_map(self, basis, ncols: int) -> np.ndarray:
        """Matrix ``P`` (``ncols x (ncols - rank)``) whose kernel ``{v : v P = 0}`` is ``rowspace(basis)``."""
        basis = self.asarray(basis).reshape(-1, ncols)
        I = np.eye(ncols, dtype=DTYPE)
        if basis.shape[0] == 0:
            return I
        R, r, pivots = self.rref(basis)
        E = np.zeros((ncols, ncols), dtype=DTYPE)
        E[pivots] = R[:r]
        pivset = set(pivots)
        nonpiv = [c for c in range(ncols) if c not in pivset]
        return self.sub(I, E)[:, nonpiv]

    def batch_rank(self, stack) -> np.ndarray:
        """Ranks of a stack of matrices of shape ``(B, rows, cols)``, eliminated in lockstep."""
        A = self.asarray(stack).copy()
        if A.ndim != 3:
            raise FieldError(f"batch_rank expects a 3-d stack, got shape {A.shape}")
        nb, rows, cols = A.shape
        rank = np.zeros(nb, dtype=DTYPE)
        if nb == 0 or rows == 0:
            return rank
        rowidx = np.arange(rows)
        for c in range(cols):
            cand = (A[:, :, c] != 0) & (rowidx[None, :] >= rank[:, None])
            has = cand.any(axis=1)
            if not has.any():
                continue
            b = np.flatnonzero(has)
            piv = np.argmax(cand[b], axis=1)
            tgt = rank[b]
            prow, trow = A[b, piv].copy(), A[b, tgt].copy()
            A[b, tgt], A[b, piv] = prow, trow
            A[b, tgt] = self.mul(A[b, tgt], self.inv(A[b, tgt, c])[:, None])
            factors = A[b, :, c].copy()
            factors[np.arange(b.size), tgt] = 0
            A[b] = self.sub(A[b], self.mul(factors[:, :, None], A[b, tgt][:, None, :]))
            rank[b] += 1
        return rank

    # ------------------------------------------------------------------
    # enumeration helpers

    def decode(self, idx, length: int) -> np.ndarray:
        """Vectors whose little-endian base-``q`` digits are ``idx``."""
        idx = np.asarray(idx, dtype=DTYPE)
        powers = self.q ** np.arange(length, dtype=DTYPE)
        return (idx[:, None] // powers[None, :]) % self.q

    def encode(self, vecs) -> np.ndarray:
        vecs = np.asarray(vecs, dtype=DTYPE)
        powers = self.q ** np.arange(vecs.shape[-1], dtype=DTYPE)
        return vecs @ powers

    def span_elements(self, basis, chunk: int = 1 << 16):
        """Yield all elements of ``rowspace(basis)`` in chunks, in coefficient order."""
        basis = self.asarray(basis)
        k = basis.shape[0]
        total = self.q**k
        for start in range(0, total, chunk):
            coeffs = self.decode(np.arange(start, min(total, start + chunk)), k)
            if k == 0:
                yield np.zeros((coeffs.shape[0], basis.shape[1]), dtype=DTYPE)
            else:
                yield self.dot(coeffs, basis)


_FIELDS: dict[FieldSpec, GF] = {}


def gf(spec: FieldSpec | int) -> GF:
    """Shared :class:`GF` instance for a spec (tables are built once)."""
    if not isinstance(spec, FieldSpec):
        spec = FieldSpec(int(spec))
    if spec not in _FIELDS:
        _FIELDS[spec] = GF(spec)
    return _FIELDS[spec]

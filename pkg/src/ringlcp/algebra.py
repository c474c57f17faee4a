"""Finite rings presented as F_p-algebras by structure constants.

A ring ``R`` of dimension ``d`` over ``F_p`` is stored as the tensor
``c[i, j, k]`` with ``e_i * e_j = sum_k c[i, j, k] e_k`` plus the
coordinates of ``1_R``.  Elements are coordinate row vectors, so left and
right multiplication by a fixed element are ``d x d`` matrices acting on
the right of a row vector:

    x * b == x @ right_mat(b)        a * x == x @ left_mat(a)

Multiplication is never assumed to be commutative.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .budget import RING_CAP
from .errors import (
    AlgebraError,
    AlgebraMismatch,
    BudgetExceeded,
    DegenerateInput,
    NotLocalError,
    UnsupportedError,
)
from .field import DTYPE, GF, FieldSpec, gf


@dataclass(frozen=True)
class IdealSubspace:
    """An F_p-subspace of R (canonical RREF basis) with its verified sidedness."""

    basis: np.ndarray
    left: bool
    right: bool

    @property
    def dim(self) -> int:
        return int(self.basis.shape[0])

    @property
    def two_sided(self) -> bool:
        return self.left and self.right


@dataclass(frozen=True)
class FrobeniusCertificate:
    """Necessary conditions for R to be Frobenius.

    ``Soc(R_R)`` cyclic with the dimension of ``R/J`` forces
    ``Soc(R_R) ≅ (R/J)_R``; the same is checked on the left.  Self-injectivity
    itself is not verified.
    """

    dim_residue: int
    dim_socle_right: int
    dim_socle_left: int
    socle_right_cyclic: bool
    socle_left_cyclic: bool

    @property
    def passes(self) -> bool:
        return (
            self.dim_socle_right == self.dim_residue
            and self.dim_socle_left == self.dim_residue
            and self.socle_right_cyclic
            and self.socle_left_cyclic
        )

    def as_dict(self) -> dict:
        return {
            "kind": "necessary-conditions-only",
            "dim_residue": self.dim_residue,
            "dim_socle_right": self.dim_socle_right,
            "dim_socle_left": self.dim_socle_left,
            "socle_right_cyclic": self.socle_right_cyclic,
            "socle_left_cyclic": self.socle_left_cyclic,
            "passes": self.passes,
        }


class AlgebraSpec:
    """A finite unital associative F_p-algebra.

    Construction verifies associativity on every triple of basis elements
    and the unity laws; failures name the offending basis elements.
    """

    def __init__(
        self,
        field: FieldSpec | int,
        structure_constants,
        unity,
        name: str = "",
        basis_names: Sequence[str] | None = None,
        ring_cap: int = RING_CAP,
    ):
        F = gf(field)
        if F.m != 1:
            raise UnsupportedError("algebras over extension fields are not supported; present them over F_p")
        self.F: GF = F
        self.p = F.p
        c = np.asarray(structure_constants, dtype=DTYPE)
        if c.ndim != 3 or not (c.shape[0] == c.shape[1] == c.shape[2]) or c.shape[0] == 0:
            raise AlgebraError(f"structure constants must have shape (d, d, d), got {c.shape}")
        self.d = int(c.shape[0])
        self.c = c % self.p
        u = np.asarray(unity, dtype=DTYPE).reshape(-1) % self.p
        if u.shape != (self.d,):
            raise AlgebraError(f"unity must have {self.d} coordinates, got {u.shape[0]}")
        self.unity = u
        self.name = name or f"algebra(d={self.d}, p={self.p})"
        if basis_names is None:
            basis_names = [f"b{i}" for i in range(self.d)]
        if len(basis_names) != self.d:
            raise AlgebraError("one basis name per basis element is required")
        self.basis_names = tuple(basis_names)
        self.ring_cap = ring_cap
        self._validate()
        self.c.setflags(write=False)
        self.unity.setflags(write=False)

    # ------------------------------------------------------------------
    # construction checks

    def _validate(self) -> None:
        c, p, names = self.c, self.p, self.basis_names
        lhs = np.einsum("ijm,mkl->ijkl", c, c) % p
        rhs = np.einsum("jkm,iml->ijkl", c, c) % p
        bad = np.argwhere(np.any(lhs != rhs, axis=-1))
        if bad.size:
            i, j, k = (int(t) for t in bad[0])
            raise AlgebraError(
                f"not associative: ({names[i]}*{names[j]})*{names[k]} != {names[i]}*({names[j]}*{names[k]})"
            )
        eye = np.eye(self.d, dtype=DTYPE)
        left = np.einsum("i,ikl->kl", self.unity, c) % p
        right = np.einsum("i,kil->kl", self.unity, c) % p
        for side, prod in (("1*x", left), ("x*1", right)):
            bad = np.flatnonzero(np.any(prod != eye, axis=1))
            if bad.size:
                raise AlgebraError(f"unity law {side} = x fails for x = {names[int(bad[0])]}")

    def __repr__(self) -> str:
        return f"AlgebraSpec({self.name!r}, d={self.d}, p={self.p})"

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        return (
            isinstance(other, AlgebraSpec)
            and self.p == other.p
            and self.d == other.d
            and np.array_equal(self.c, other.c)
            and np.array_equal(self.unity, other.unity)
        )

    def __hash__(self) -> int:
        return hash((self.p, self.d, self.c.tobytes(), self.unity.tobytes()))

    # ------------------------------------------------------------------
    # basic data

    @property
    def q(self) -> int:
        return self.p

    @property
    def order(self) -> int:
        return self.p**self.d

    @cached_property
    def commutative(self) -> bool:
        return bool(np.array_equal(self.c, self.c.transpose(1, 0, 2)))

    @cached_property
    def right_basis_mats(self) -> np.ndarray:
        """``R[k]`` is right multiplication by ``e_k``: ``x * e_k == x @ R[k]``."""
        return np.ascontiguousarray(self.c.transpose(1, 0, 2))

    @cached_property
    def left_basis_mats(self) -> np.ndarray:
        """``L[k]`` is left multiplication by ``e_k``: ``e_k * x == x @ L[k]``."""
        return self.c

    def action_mats(self, side: str) -> np.ndarray:
        if side == "right":
            return self.right_basis_mats
        if side == "left":
            return self.left_basis_mats
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")

    def zero(self) -> np.ndarray:
        return np.zeros(self.d, dtype=DTYPE)

    def one(self) -> np.ndarray:
        return self.unity.copy()

    # ------------------------------------------------------------------
    # arithmetic on coordinate arrays (broadcasting over leading axes)

    def _coords(self, x) -> np.ndarray:
        if isinstance(x, RingElem):
            if x.algebra != self:
                raise AlgebraMismatch("element belongs to a different algebra")
            return np.asarray(x.coords, dtype=DTYPE)
        if isinstance(x, str):
            return self.parse(x)
        arr = np.asarray(x, dtype=DTYPE)
        if arr.ndim == 0:
            return (int(arr) * self.unity) % self.p
        if arr.shape[-1] != self.d:
            raise AlgebraMismatch(f"expected {self.d} coordinates, got shape {arr.shape}")
        return arr % self.p

    def mul(self, a, b) -> np.ndarray:
        a, b = self._coords(a), self._coords(b)
        return np.einsum("...i,...j,ijk->...k", a, b, self.c) % self.p

    def add(self, a, b) -> np.ndarray:
        return (self._coords(a) + self._coords(b)) % self.p

    def sub(self, a, b) -> np.ndarray:
        return (self._coords(a) - self._coords(b)) % self.p

    def neg(self, a) -> np.ndarray:
        return (-self._coords(a)) % self.p

    def right_mat(self, b) -> np.ndarray:
        """Matrix of ``x -> x * b``."""
        return np.einsum("...j,ijk->...ik", self._coords(b), self.c) % self.p

    def left_mat(self, a) -> np.ndarray:
        """Matrix of ``x -> a * x``."""
        return np.einsum("...i,ijk->...jk", self._coords(a), self.c) % self.p

    def element(self, x) -> RingElem:
        return RingElem(self, tuple(int(t) for t in self._coords(x)))

    def encode(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=DTYPE)
        return x @ (self.p ** np.arange(self.d, dtype=DTYPE))

    def _check_cap(self) -> None:
        if self.order > self.ring_cap:
            raise BudgetExceeded(f"|R| = {self.order} exceeds the enumeration cap {self.ring_cap}")

    def elements(self) -> np.ndarray:
        """All ``|R|`` elements; row ``i`` is the element with :meth:`encode` value ``i``."""
        self._check_cap()
        return self.F.decode(np.arange(self.order), self.d)

    # ------------------------------------------------------------------
    # literals

    def parse(self, text: str) -> np.ndarray:
        return parse_element(self, text)

    def format(self, x) -> str:
        return format_element(self, x)

    # ------------------------------------------------------------------
    # units

    @cached_property
    def units_mask(self) -> np.ndarray:
        """Boolean array indexed by :meth:`encode`: is the element a unit?"""
        E = self.elements()
        out = np.zeros(self.order, dtype=bool)
        chunk = max(1, (1 << 20) // (self.d * self.d))
        for s in range(0, self.order, chunk):
            ranks = self.F.batch_rank(self.left_mat(E[s : s + chunk]))
            out[s : s + chunk] = ranks == self.d
        out.setflags(write=False)
        return out

    @cached_property
    def unit_elements(self) -> np.ndarray:
        """All units, ordered by :meth:`encode`."""
        return self.elements()[self.units_mask]

    def is_unit(self, x) -> bool:
        return self.F.rank(self.left_mat(self._coords(x))) == self.d

    def try_inverse(self, x) -> RingElem | None:
        x = self._coords(x)
        # x * y = 1 is linear in y: y @ left_mat(x) = 1
        y = self.F.solve(self.left_mat(x).T, self.unity)
        if y is None:
            return None
        y = y % self.p
        if not (np.array_equal(self.mul(x, y), self.unity) and np.array_equal(self.mul(y, x), self.unity)):
            return None
        return self.element(y)

    # ------------------------------------------------------------------
    # ideals

    def ideal(self, gens) -> IdealSubspace:
        """Two-sided ideal generated by ``gens``."""
        F = self.F
        B = F.row_basis(np.asarray(gens, dtype=DTYPE).reshape(-1, self.d))
        while True:
            prods = [B]
            for mats in (self.right_basis_mats, self.left_basis_mats):
                prods.extend(F.dot(B, M) for M in mats)
            nb = F.row_basis(np.vstack(prods))
            if nb.shape[0] == B.shape[0]:
                return IdealSubspace(nb, True, True)
            B = nb

    def subspace_sidedness(self, basis) -> IdealSubspace:
        F = self.F
        B = F.row_basis(np.asarray(basis, dtype=DTYPE).reshape(-1, self.d))
        r = B.shape[0]
        right = all(F.rank(np.vstack([B, F.dot(B, M)])) == r for M in self.right_basis_mats)
        left = all(F.rank(np.vstack([B, F.dot(B, M)])) == r for M in self.left_basis_mats)
        return IdealSubspace(B, left, right)

    def ideal_product(self, I: IdealSubspace, K: IdealSubspace) -> IdealSubspace:
        if I.dim == 0 or K.dim == 0:
            return IdealSubspace(np.zeros((0, self.d), dtype=DTYPE), True, True)
        prods = self.mul(I.basis[:, None, :], K.basis[None, :, :]).reshape(-1, self.d)
        return IdealSubspace(self.F.row_basis(prods), True, True)

    @cached_property
    def _radical(self) -> IdealSubspace:
        self._check_cap()
        F, p, d = self.F, self.p, self.d
        E = self.elements()
        mask = self.units_mask
        one = self.unity
        basis = np.zeros((0, d), dtype=DTYPE)
        for idx in range(1, self.order):
            x = E[idx]
            # scalar multiples share membership; only test vectors with leading coordinate 1
            if x[np.flatnonzero(x)[0]] != 1:
                continue
            if basis.shape[0] and F.contains(basis, x):
                continue
            rx = (E @ self.right_mat(x)) % p
            if np.all(mask[self.encode((one - rx) % p)]):
                basis = F.row_basis(np.vstack([basis, x]))
        J = self.subspace_sidedness(basis)
        if not J.two_sided:
            raise AssertionError("quasi-regular set is not a two-sided ideal")
        return J

    def jacobson_radical(self, check: bool = True) -> IdealSubspace:
        """``J(R) = {x : 1 - r x is a unit for every r}``, by exhaustive search."""
        J = self._radical
        if check:
            self.nilpotency_index()
            if J.dim and J.dim < self.d:
                Q = self.quotient_algebra(J)
                if Q._radical.dim != 0:
                    raise AssertionError("R/J(R) has nonzero radical")
        return J

    def radical_power(self, k: int) -> IdealSubspace:
        J = self._radical
        P = IdealSubspace(np.eye(self.d, dtype=DTYPE), True, True)
        for _ in range(k):
            P = self.ideal_product(P, J)
        return P

    def nilpotency_index(self) -> int:
        """Smallest ``t >= 1`` with ``J^t = 0``."""
        J = self._radical
        P, t = J, 1
        while P.dim:
            nxt = self.ideal_product(P, J)
            if nxt.dim == P.dim:
                raise AssertionError("radical is not nilpotent")
            P, t = nxt, t + 1
        return t

    def radical_annihilator_witness(self) -> RingElem:
        """Nonzero ``m`` in ``J^(t-1)`` with ``a * m = 0`` for every ``a`` in ``J``."""
        J = self._radical
        if J.dim == 0:
            raise DegenerateInput("the Jacobson radical is zero; no witness exists")
        t = self.nilpotency_index()
        top = self.radical_power(t - 1)
        m = top.basis[0]
        if np.any(self.mul(J.basis, m)):
            raise AssertionError("radical annihilator witness failed")
        return self.element(m)

    # ------------------------------------------------------------------
    # locality and the residue map

    @cached_property
    def is_local(self) -> bool:
        """Non-units form an additive group, i.e. coincide with ``J(R)``."""
        n_units = int(self.units_mask.sum())
        return self.order - n_units == self.p ** self._radical.dim

    @property
    def residue_dim(self) -> int:
        return self.d - self._radical.dim

    @cached_property
    def residue_functional(self) -> np.ndarray:
        """Vector ``f`` with ``pi(x) = x @ f``: kills ``J(R)`` and sends 1 to 1."""
        if not self.is_local:
            raise NotLocalError(f"{self.name} is not local; the residue map to a field is undefined")
        if self.residue_dim != 1:
            raise UnsupportedError(
                f"residue field of {self.name} is F_{self.p}^{self.residue_dim}; only prime residue fields are supported"
            )
        J = self._radical.basis
        M = np.vstack([J, self.unity])
        rhs = np.zeros(M.shape[0], dtype=DTYPE)
        rhs[-1] = 1
        f = self.F.solve(M, rhs)
        assert f is not None
        f.setflags(write=False)
        return f

    @property
    def has_residue_map(self) -> bool:
        return self.is_local and self.residue_dim == 1

    def residue(self, x) -> np.ndarray:
        """``pi`` applied to elements (any leading shape) -> field values."""
        return (self._coords(x) @ self.residue_functional) % self.p

    # ------------------------------------------------------------------
    # socle and Frobenius certificate

    def _annihilator_of_radical(self, side: str) -> np.ndarray:
        J = self._radical.basis
        if J.shape[0] == 0:
            return np.eye(self.d, dtype=DTYPE)
        # right socle: x * j = 0 ; left socle: j * x = 0
        mats = self.right_mat(J) if side == "right" else self.left_mat(J)
        return self.F.row_basis(self.F.left_kernel(np.hstack(list(mats))))

    def socle_right(self) -> IdealSubspace:
        return self.subspace_sidedness(self._annihilator_of_radical("right"))

    def socle_left(self) -> IdealSubspace:
        return self.subspace_sidedness(self._annihilator_of_radical("left"))

    def _is_cyclic(self, S: np.ndarray, side: str) -> bool:
        k = S.shape[0]
        if k == 0:
            return True
        mats = self.action_mats(side)
        for chunk in self.F.span_elements(S, chunk=4096):
            gens = np.einsum("bi,kij->bkj", chunk, mats) % self.p
            if np.any(self.F.batch_rank(gens) == k):
                return True
        return False

    def frobenius_certificate(self) -> FrobeniusCertificate:
        sr = self._annihilator_of_radical("right")
        sl = self._annihilator_of_radical("left")
        return FrobeniusCertificate(
            dim_residue=self.residue_dim,
            dim_socle_right=int(sr.shape[0]),
            dim_socle_left=int(sl.shape[0]),
            socle_right_cyclic=self._is_cyclic(sr, "right"),
            socle_left_cyclic=self._is_cyclic(sl, "left"),
        )

    # ------------------------------------------------------------------
    # quotients

    def quotient_algebra(self, I: IdealSubspace | np.ndarray) -> AlgebraSpec:
        """``R/I`` on the coset basis of the non-pivot standard vectors of ``I``."""
        if not isinstance(I, IdealSubspace):
            I = self.subspace_sidedness(I)
        if not I.two_sided:
            raise AlgebraError("quotient needs a two-sided ideal")
        if I.dim == self.d:
            raise DegenerateInput("quotient by the whole ring is the zero ring")
        F = self.F
        R, r, pivots = F.rref(I.basis) if I.dim else (I.basis, 0, [])
        keep = [k for k in range(self.d) if k not in set(pivots)]

        def reduce(v: np.ndarray) -> np.ndarray:
            v = np.asarray(v, dtype=DTYPE) % self.p
            if r:
                v = (v - v[..., pivots] @ R[:r]) % self.p
            return v[..., keep]

        sub = self.c[np.ix_(keep, keep)]
        c = reduce(sub)
        return AlgebraSpec(
            self.p,
            c,
            reduce(self.unity),
            name=f"{self.name}/I",
            basis_names=[f"[{self.basis_names[k]}]" for k in keep],
            ring_cap=self.ring_cap,
        )


@dataclass(frozen=True)
class RingElem:
    """An element of an :class:`AlgebraSpec`, with operator sugar."""

    algebra: AlgebraSpec
    coords: tuple[int, ...]

    def _other(self, other) -> np.ndarray:
        return self.algebra._coords(other)

    def __add__(self, other):
        return self.algebra.element(self.algebra.add(self.coords, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return self.algebra.element(self.algebra.sub(self.coords, self._other(other)))

    def __rsub__(self, other):
        return self.algebra.element(self.algebra.sub(self._other(other), self.coords))

    def __neg__(self):
        return self.algebra.element(self.algebra.neg(self.coords))

    def __mul__(self, other):
        return self.algebra.element(self.algebra.mul(self.coords, self._other(other)))

    def __rmul__(self, other):
        return self.algebra.element(self.algebra.mul(self._other(other), self.coords))

    def __eq__(self, other) -> bool:
        if isinstance(other, RingElem):
            return self.algebra == other.algebra and self.coords == other.coords
        try:
            return self.coords == tuple(int(t) for t in self._other(other))
        except (AlgebraMismatch, ValueError):
            return False

    def __hash__(self) -> int:
        return hash(self.coords)

    def __bool__(self) -> bool:
        return any(self.coords)

    def __repr__(self) -> str:
        return self.algebra.format(self.coords)

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.coords, dtype=DTYPE)

    def is_unit(self) -> bool:
        return self.algebra.is_unit(self.coords)

    def inverse(self) -> RingElem | None:
        return self.algebra.try_inverse(self.coords)


# ----------------------------------------------------------------------
# literals

_TERM = re.compile(r"^(\d*)\s*\*?\s*([A-Za-z_][A-Za-z0-9_]*)?$")


def parse_element(alg: AlgebraSpec, text) -> np.ndarray:
    """Parse ``"[a0,...,a_{d-1}]"`` or a sum of ``coef*name`` terms like ``"2u+1"``.

    A bare integer ``c`` means ``c * 1_R``.
    """
    if isinstance(text, (int, np.integer)):
        return (int(text) * alg.unity) % alg.p
    if not isinstance(text, str):
        return alg._coords(text)
    s = text.replace(" ", "")
    if not s:
        raise AlgebraError("empty ring element literal")
    if s.startswith("["):
        if not s.endswith("]"):
            raise AlgebraError(f"unterminated coordinate literal {text!r}")
        body = s[1:-1]
        parts = [t for t in body.split(",") if t != ""]
        if len(parts) != alg.d:
            raise AlgebraError(f"literal {text!r} needs {alg.d} coordinates")
        return np.array([int(t) for t in parts], dtype=DTYPE) % alg.p
    out = np.zeros(alg.d, dtype=DTYPE)
    for sign, term in re.findall(r"([+-]?)([^+-]+)", s):
        m = _TERM.match(term)
        if not m or (not m.group(1) and not m.group(2)):
            raise AlgebraError(f"cannot parse term {term!r} in {text!r}")
        coef = int(m.group(1)) if m.group(1) else 1
        if sign == "-":
            coef = -coef
        name = m.group(2)
        if name is None:
            out += coef * alg.unity
        else:
            if name not in alg.basis_names:
                raise AlgebraError(f"unknown basis element {name!r} in {text!r}; known: {', '.join(alg.basis_names)}")
            out[alg.basis_names.index(name)] += coef
    if re.sub(r"([+-]?)([^+-]+)", "", s):
        raise AlgebraError(f"cannot parse {text!r}")
    return out % alg.p


def format_element(alg: AlgebraSpec, x) -> str:
    x = np.asarray(x, dtype=DTYPE) % alg.p
    terms = []
    for c, name in zip(x.tolist(), alg.basis_names):
        if c == 0:
            continue
        if name == "1":
            terms.append(str(c))
        else:
            terms.append(name if c == 1 else f"{c}{name}")
    return "+".join(terms) if terms else "0"


# ----------------------------------------------------------------------
# presets


def _tensor(d: int, table: Iterable[tuple[int, int, int]]) -> np.ndarray:
    c = np.zeros((d, d, d), dtype=DTYPE)
    for i, j, k in table:
        c[i, j, k] = 1
    return c


def field_algebra(q: int) -> AlgebraSpec:
    """``F_q`` itself (``q`` prime)."""
    return AlgebraSpec(q, _tensor(1, [(0, 0, 0)]), [1], name=f"field({q})", basis_names=["1"])


def ut2(q: int) -> AlgebraSpec:
    """Matrices ``[[a, x], [0, a]]`` over ``F_q``, i.e. ``F_q[u]/(u^2)`` on the basis ``{1, u}``."""
    c = _tensor(2, [(0, 0, 0), (0, 1, 1), (1, 0, 1)])
    return AlgebraSpec(q, c, [1, 0], name=f"ut2({q})", basis_names=["1", "u"])


def blockpair(q: int) -> AlgebraSpec:
    """Block-diagonal pairs of ``ut2`` blocks on the basis ``{e1, n1, e2, n2}``."""
    c = _tensor(
        4,
        [
            (0, 0, 0), (0, 1, 1), (1, 0, 1),
            (2, 2, 2), (2, 3, 3), (3, 2, 3),
        ],
    )
    return AlgebraSpec(q, c, [1, 0, 1, 0], name=f"blockpair({q})", basis_names=["e1", "n1", "e2", "n2"])


def mat2(q: int) -> AlgebraSpec:
    """Full 2x2 matrices on the matrix units ``E11, E12, E21, E22``."""
    units = [(0, 0), (0, 1), (1, 0), (1, 1)]
    table = []
    for a, (i, j) in enumerate(units):
        for b, (k, l) in enumerate(units):
            if j == k:
                table.append((a, b, units.index((i, l))))
    return AlgebraSpec(q, _tensor(4, table), [1, 0, 0, 1], name=f"mat2({q})", basis_names=["E11", "E12", "E21", "E22"])


def t2(q: int) -> AlgebraSpec:
    """Upper triangular 2x2 matrices ``[[a, x], [0, b]]``; not Frobenius."""
    c = _tensor(3, [(0, 0, 0), (0, 1, 1), (1, 2, 1), (2, 2, 2)])
    return AlgebraSpec(q, c, [1, 0, 1], name=f"t2({q})", basis_names=["E11", "E12", "E22"])


PRESETS = {
    "field": field_algebra,
    "ut2": ut2,
    "blockpair": blockpair,
    "mat2": mat2,
    "t2": t2,
}

_PRESET_RE = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*(?:\(\s*(\d+)\s*\)|[:\-](\d+))\s*$")

_PRESET_CACHE: dict[tuple[str, int], AlgebraSpec] = {}


def preset(name: str, q: int | None = None) -> AlgebraSpec:
    """Look up a preset by name and prime ``q``; ``name`` may also be ``"ut2(3)"`` or ``"ut2:3"``."""
    if q is None:
        m = _PRESET_RE.match(name)
        if not m:
            raise AlgebraError(f"cannot parse preset reference {name!r}; use e.g. 'ut2(3)'")
        name, q = m.group(1), int(m.group(2) or m.group(3))
    if name not in PRESETS:
        raise AlgebraError(f"unknown preset {name!r}; known: {', '.join(PRESETS)}")
    key = (name, int(q))
    if key not in _PRESET_CACHE:
        _PRESET_CACHE[key] = PRESETS[name](int(q))
    return _PRESET_CACHE[key]

"""Equivalence of codes as sets of n-tuples.

A monomial map sends ``v`` to ``w`` with ``w_i = u_i * v_{σ(i)}`` (or
``v_{σ(i)} * u_i`` when scaling on the right) for units ``u_i``.  Left
scaling preserves right submodules and right scaling preserves left ones,
so by default each module is scaled on the side opposite to its own.

For a fixed permutation the admissible scalar vectors form an F_p-subspace
of ``R^n`` (the constraints are linear in ``u``); the search then looks for
a vector of units inside that subspace, coordinate by coordinate.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .algebra import AlgebraSpec, format_element
from .budget import Budget, default_budget
from .errors import AlgebraMismatch, BudgetExceeded
from .codes import weight_distribution
from .field import DTYPE
from .rmodule import Submodule

KINDS = ("set-equal", "permutation", "monomial", "none-within-budget")


@dataclass(frozen=True)
class EquivalenceResult:
    kind: str
    permutation: tuple[int, ...] | None = None
    scalars: tuple[str, ...] | None = None
    scale_side: str | None = None
    checked_basis_size: int = 0
    exhausted: bool = True
    notes: tuple[str, ...] = field(default=())

    @property
    def found(self) -> bool:
        return self.kind != "none-within-budget"

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "permutation": list(self.permutation) if self.permutation is not None else None,
            "scalars": list(self.scalars) if self.scalars is not None else None,
            "scale_side": self.scale_side,
            "checked_basis_size": self.checked_basis_size,
            "exhausted": self.exhausted,
        }


def _compatible(A: Submodule, B: Submodule) -> None:
    if A.algebra != B.algebra or A.n != B.n:
        raise AlgebraMismatch("codes live in different ambient modules")


def same_tuple_set(A: Submodule, B: Submodule) -> bool:
    """Equality of the underlying sets, ignoring which side each module is over."""
    _compatible(A, B)
    return bool(np.array_equal(A.basis, B.basis))


def _blocks(alg: AlgebraSpec, n: int, j: int) -> slice:
    return slice(j * alg.d, (j + 1) * alg.d)


def permute(alg: AlgebraSpec, V: np.ndarray, sigma) -> np.ndarray:
    """Rows ``w`` with ``w_i = v_{σ(i)}``."""
    n = len(sigma)
    return V.reshape(V.shape[0], n, alg.d)[:, list(sigma)].reshape(V.shape[0], n * alg.d)


def apply_monomial(alg: AlgebraSpec, V: np.ndarray, sigma, scalars: np.ndarray, side: str) -> np.ndarray:
    W = permute(alg, V, sigma).reshape(V.shape[0], len(sigma), alg.d)
    if side == "left":
        W = alg.mul(scalars[None], W)
    else:
        W = alg.mul(W, scalars[None])
    return W.reshape(V.shape[0], len(sigma) * alg.d)


def _projection_dims(A: Submodule) -> list[int]:
    F, d = A.algebra.F, A.algebra.d
    return [F.rank(A.basis[:, j * d : (j + 1) * d]) if A.dim else 0 for j in range(A.n)]


def _projections(A: Submodule) -> list[bytes]:
    F, d = A.algebra.F, A.algebra.d
    return [F.row_basis(A.basis[:, j * d : (j + 1) * d]).tobytes() for j in range(A.n)]


def _weights_or_none(A: Submodule, budget: Budget) -> list[int] | None:
    try:
        return weight_distribution(A, budget)
    except BudgetExceeded:
        return None


def _invariants_differ(A: Submodule, B: Submodule, budget: Budget) -> str | None:
    if A.dim != B.dim:
        return "cardinalities differ"
    if sorted(_projection_dims(A)) != sorted(_projection_dims(B)):
        return "coordinate projection profiles differ"
    wa, wb = _weights_or_none(A, budget), _weights_or_none(B, budget)
    if wa is not None and wb is not None and wa != wb:
        return "weight distributions differ"
    return None


def _contained(A_rows: np.ndarray, B: Submodule) -> bool:
    if not A_rows.shape[0]:
        return True
    return B.algebra.F.rank(np.vstack([B.basis, A_rows])) == B.dim


def _scalar_subspace(A: Submodule, B: Submodule, sigma, side: str) -> np.ndarray:
    """Basis of ``{u in R^n : u-scaled σ(A) ⊆ B}`` as rows of length ``n*d``."""
    alg, n, d, F = A.algebra, A.n, A.algebra.d, A.algebra.F
    P = F.quotient_map(B.basis, n * d)
    W = permute(alg, A.basis, sigma).reshape(A.dim, n, d)
    mats = alg.left_basis_mats if side == "left" else alg.right_basis_mats
    # u_i * w_i = Σ_k u_ik (e_k * w_i) = Σ_k u_ik (w_i @ L_k) for left scaling
    rows = []
    for a in W:
        # T[(i,k), (i,:)] = image of unit coordinate u_ik
        T = np.zeros((n * d, n * d), dtype=DTYPE)
        for i in range(n):
            T[i * d : (i + 1) * d, i * d : (i + 1) * d] = a[i] @ mats
        rows.append(F.dot(T, P))
    if not rows or P.shape[1] == 0:
        return np.eye(n * d, dtype=DTYPE)
    return F.kernel(np.hstack(rows).T)


class _NodeBudget:
    def __init__(self, limit: int):
        self.left = limit

    def spend(self) -> None:
        self.left -= 1
        if self.left < 0:
            raise BudgetExceeded("equivalence search exceeded its node budget")


def _unit_point(alg: AlgebraSpec, n: int, K: np.ndarray, nodes: _NodeBudget) -> np.ndarray | None:
    """Least vector (coordinatewise encode order) of units in ``span(K)``."""
    F, d, p = alg.F, alg.d, alg.p
    units = alg.units_mask

    def search(x0: np.ndarray, K: np.ndarray, i: int) -> np.ndarray | None:
        if i == n:
            return x0
        blk = _blocks(alg, n, i)
        cols = list(range(blk.start, blk.stop))
        rest = [c for c in range(n * d) if c not in cols]
        order = cols + rest
        if K.shape[0]:
            R, r, piv = F.rref(K[:, order])
            R = R[:r][:, np.argsort(order)]
            head = [t for t, pc in enumerate(piv) if pc < d]
            H = R[head]
            K_rest = R[[t for t, pc in enumerate(piv) if pc >= d]]
        else:
            H = np.zeros((0, n * d), dtype=DTYPE)
            K_rest = K
        hb = H[:, blk]
        cand = x0[blk][None] + F.dot(F.decode(np.arange(p ** H.shape[0]), H.shape[0]), hb) if H.shape[0] else x0[blk][None]
        cand = cand % p
        vals = alg.encode(cand)
        for t in np.argsort(vals, kind="stable"):
            if not units[vals[t]]:
                continue
            nodes.spend()
            coeff = F.decode(np.array([t]), H.shape[0])[0] if H.shape[0] else np.zeros(0, dtype=DTYPE)
            x1 = (x0 + (coeff @ H if H.shape[0] else 0)) % p
            got = search(x1, K_rest, i + 1)
            if got is not None:
                return got
        return None

    return search(np.zeros(n * d, dtype=DTYPE), K, 0)


def _finish(A: Submodule, B: Submodule, kind: str, sigma, u: np.ndarray | None, side: str | None, budget: Budget) -> EquivalenceResult:
    alg = A.algebra
    img = permute(alg, A.basis, sigma) if u is None else apply_monomial(alg, A.basis, sigma, u.reshape(A.n, alg.d), side)
    if not (_contained(img, B) and A.dim == B.dim):
        raise AssertionError("equivalence certificate failed to verify")
    wa, wb = _weights_or_none(A, budget), _weights_or_none(B, budget)
    if wa is not None and wb is not None and wa != wb:
        raise AssertionError("equivalence changed the weight distribution")
    scalars = None if u is None else tuple(format_element(alg, x) for x in u.reshape(A.n, alg.d))
    return EquivalenceResult(kind, tuple(int(s) for s in sigma), scalars, side, A.dim)


def _candidate_perms(A: Submodule, B: Submodule, exact: bool):
    n = A.n
    pa = _projections(A) if exact else _projection_dims(A)
    pb = _projections(B) if exact else _projection_dims(B)
    for sigma in itertools.permutations(range(n)):
        if all(pa[sigma[i]] == pb[i] for i in range(n)):
            yield sigma


def permutation_equivalent(A: Submodule, B: Submodule, budget: Budget | None = None) -> EquivalenceResult:
    """Lexicographically least ``σ`` with ``σ(A) = B``."""
    _compatible(A, B)
    budget = budget or default_budget()
    if A.n > budget.permutation_n:
        raise BudgetExceeded(f"permutation search is capped at n = {budget.permutation_n}")
    why = _invariants_differ(A, B, budget)
    if why:
        return EquivalenceResult("none-within-budget", checked_basis_size=A.dim, notes=(why,))
    for sigma in _candidate_perms(A, B, exact=True):
        if _contained(permute(A.algebra, A.basis, sigma), B):
            return _finish(A, B, "permutation", sigma, None, None, budget)
    return EquivalenceResult("none-within-budget", checked_basis_size=A.dim)


def default_scale_side(A: Submodule) -> str:
    return "left" if A.side == "right" else "right"


def monomial_equivalent(
    A: Submodule, B: Submodule, budget: Budget | None = None, scale_side: str | None = None
) -> EquivalenceResult:
    """Lexicographically least ``(σ, u)`` with ``u``-scaled ``σ(A) = B``."""
    _compatible(A, B)
    budget = budget or default_budget()
    side = scale_side or default_scale_side(A)
    if A.n > budget.monomial_n:
        raise BudgetExceeded(f"monomial search is capped at n = {budget.monomial_n}")
    why = _invariants_differ(A, B, budget)
    if why:
        return EquivalenceResult("none-within-budget", scale_side=side, checked_basis_size=A.dim, notes=(why,))
    nodes = _NodeBudget(budget.scan)
    try:
        for sigma in _candidate_perms(A, B, exact=False):
            K = _scalar_subspace(A, B, sigma, side)
            u = _unit_point(A.algebra, A.n, K, nodes)
            if u is not None:
                return _finish(A, B, "monomial", sigma, u, side, budget)
    except BudgetExceeded:
        return EquivalenceResult("none-within-budget", scale_side=side, checked_basis_size=A.dim, exhausted=False)
    return EquivalenceResult("none-within-budget", scale_side=side, checked_basis_size=A.dim)


def equivalent(A: Submodule, B: Submodule, budget: Budget | None = None, scale_side: str | None = None) -> EquivalenceResult:
    """Strongest equivalence found: set equality, then permutation, then monomial."""
    _compatible(A, B)
    budget = budget or default_budget()
    if same_tuple_set(A, B):
        return EquivalenceResult("set-equal", tuple(range(A.n)), None, None, A.dim)
    exhausted = True
    if A.n <= budget.permutation_n:
        res = permutation_equivalent(A, B, budget)
        if res.found or res.notes:
            return res
    else:
        exhausted = False
    side = scale_side or default_scale_side(A)
    if A.n <= budget.monomial_n:
        res = monomial_equivalent(A, B, budget, side)
        if res.found:
            return res
        exhausted = exhausted and res.exhausted
    else:
        exhausted = False
    return EquivalenceResult("none-within-budget", scale_side=side, checked_basis_size=A.dim, exhausted=exhausted)

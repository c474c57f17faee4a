"""LCP criteria, the agreement engine, and the projection idempotent.

Every criterion returns a :class:`Verdict`.  A criterion whose hypotheses
fail answers ``not-applicable`` instead of guessing, and every ``no`` carries
a witness that can be checked by hand.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .algebra import format_element
from .budget import Budget, default_budget
from .codes import (
    LcpSecurity,
    LinearCode,
    RingMatrix,
    column_image,
    dual,
    invertible_over_R,
    left_row_span,
    min_distance,
    parity_generators,
)
from .equiv import EquivalenceResult, equivalent
from .errors import AlgebraMismatch, BudgetExceeded, NotLcpError
from .field import DTYPE
from .rmodule import (
    Check,
    Submodule,
    is_complement_of,
    is_direct_summand,
    is_essential,
    is_closed,
    is_free,
    minimal_generators,
    pi_image,
)

YES, NO, NA, OVER = "yes", "no", "not-applicable", "budget-exceeded"

CRITERIA = (
    "definition",
    "pi_reduction",
    "parity_product",
    "generator_stack",
    "structural_4_8",
    "injective_hull_4_5",
)


def literals(alg, v) -> list[str]:
    v = np.asarray(v, dtype=DTYPE).reshape(-1, alg.d)
    return [format_element(alg, x) for x in v]


@dataclass
class Verdict:
    criterion: str
    verdict: str
    preconditions: dict = field(default_factory=dict)
    witness: dict | None = None
    details: dict | None = None
    timing_ms: float | None = None

    @property
    def conclusive(self) -> bool:
        return self.verdict in (YES, NO) and self.preconditions.get("exhaustive", True)

    def to_dict(self) -> dict:
        out = {
            "criterion": self.criterion,
            "verdict": self.verdict,
            "preconditions": self.preconditions,
            "witness": self.witness,
        }
        if self.details is not None:
            out["details"] = self.details
        out["timing_ms"] = self.timing_ms
        return out


def _modules(C, D) -> tuple[Submodule, Submodule]:
    C = C.module if isinstance(C, LinearCode) else C
    D = D.module if isinstance(D, LinearCode) else D
    if C.algebra != D.algebra or C.n != D.n:
        raise AlgebraMismatch("codes live over different rings or lengths")
    if C.side != "right" or D.side != "right":
        raise AlgebraMismatch("LCP criteria take right codes")
    return C, D


def _code(M) -> LinearCode:
    return M if isinstance(M, LinearCode) else LinearCode.from_module(M)


# ----------------------------------------------------------------------
# definitional


def is_lcp_definition(C, D) -> tuple[bool, dict | None]:
    """``C ∩ D = 0`` and ``C + D = R^n``; the witness explains a failure."""
    C, D = _modules(C, D)
    alg = C.algebra
    meet = C & D
    if not meet.is_zero:
        return False, {"in_intersection": literals(alg, meet.basis[0])}
    S = C + D
    if not S.is_full:
        P = alg.F.quotient_map(S.basis, S.N)
        k = int(np.flatnonzero(np.any(P, axis=1))[0])
        v = np.zeros(S.N, dtype=DTYPE)
        v[k] = 1
        return False, {"outside_sum": literals(alg, v), "sum_dim_Fp": S.dim, "ambient_dim_Fp": S.N}
    return True, None


def _definition(C: Submodule, D: Submodule, **_) -> Verdict:
    ok, wit = is_lcp_definition(C, D)
    return Verdict("definition", YES if ok else NO, {}, wit)


# ----------------------------------------------------------------------
# residue criteria (local rings, free codes)


def _local_free_gate(C: Submodule, D: Submodule, need_cardinality: bool) -> tuple[dict, bool]:
    alg = C.algebra
    pre = {"local": alg.is_local, "residue_field_prime": alg.is_local and alg.has_residue_map}
    if pre["residue_field_prime"]:
        pre["C_free"] = is_free(C)[0]
        pre["D_free"] = is_free(D)[0]
    else:
        pre["C_free"] = pre["D_free"] = None
    if need_cardinality:
        pre["cardinality_product"] = C.dim + D.dim == C.N
    return pre, all(v is True for v in pre.values())


def lcp_by_pi(C, D) -> Verdict:
    """``π(C) ⊕ π(D) = F_p^n`` for free codes over a local ring."""
    C, D = _modules(C, D)
    pre, ok = _local_free_gate(C, D, need_cardinality=False)
    if not ok:
        return Verdict("pi_reduction", NA, pre)
    F = C.algebra.F
    pc, pd = pi_image(C), pi_image(D)
    meet = F.intersect(pc, pd)
    rank = F.rank(np.vstack([pc, pd])) if pc.shape[0] + pd.shape[0] else 0
    details = {"pi_rank": rank, "n": C.n}
    if meet.shape[0]:
        return Verdict("pi_reduction", NO, pre, {"pi_intersection": [int(x) for x in meet[0]], "pi_rank": rank}, details)
    if rank < C.n:
        return Verdict("pi_reduction", NO, pre, {"pi_rank": rank}, details)
    return Verdict("pi_reduction", YES, pre, None, details)


def _min_gens(M: Submodule, prefer=None) -> RingMatrix:
    rows = minimal_generators(M, prefer=prefer)
    return RingMatrix(M.algebra, rows.reshape(rows.shape[0], M.n, M.algebra.d))


def _prefer(C):
    return C.gen.rows if isinstance(C, LinearCode) else None


def lcp_by_parity_product(C, D) -> Verdict:
    """``H_2 G_1^T`` or ``H_1 G_2^T`` invertible over ``R``."""
    pC, pD = _prefer(C), _prefer(D)
    C, D = _modules(C, D)
    pre, ok = _local_free_gate(C, D, need_cardinality=True)
    if not ok:
        return Verdict("parity_product", NA, pre)
    G1, G2 = _min_gens(C, pC), _min_gens(D, pD)
    H1, H2 = parity_generators(C)[0], parity_generators(D)[0]
    out = {}
    for name, H, G in (("H2G1T", H2, G1), ("H1G2T", H1, G2)):
        Mx = H @ G.T
        out[name] = {"shape": list(Mx.shape), "invertible": Mx.is_square() and invertible_over_R(Mx)}
        if Mx.is_square() and Mx.shape[0]:
            out[name]["pi_det"] = C.algebra.F.det(Mx.pi())
    yes = out["H2G1T"]["invertible"] or out["H1G2T"]["invertible"]
    wit = None if yes else {"products": out}
    return Verdict("parity_product", YES if yes else NO, pre, wit, {"products": out})


def lcp_by_generator_stack(C, D) -> Verdict:
    """``(G_1; G_2)`` invertible over ``R``, cross-checked with ``(H_1; H_2)``."""
    pC, pD = _prefer(C), _prefer(D)
    C, D = _modules(C, D)
    pre, ok = _local_free_gate(C, D, need_cardinality=True)
    if not ok:
        return Verdict("generator_stack", NA, pre)
    F = C.algebra.F
    G = _min_gens(C, pC).stack(_min_gens(D, pD))
    H = parity_generators(C)[0].stack(parity_generators(D)[0])
    info = {}
    for name, S in (("G_stack", G), ("H_stack", H)):
        if not S.is_square():
            info[name] = {"shape": list(S.shape), "invertible": False, "reason": "stack is not square"}
            continue
        info[name] = {
            "shape": list(S.shape),
            "invertible": invertible_over_R(S),
            "pi_rank": F.rank(S.pi()) if S.shape[0] else 0,
            "pi_det": F.det(S.pi()) if S.shape[0] else 1,
        }
    g, h = info["G_stack"]["invertible"], info["H_stack"]["invertible"]
    details = dict(info, forms_agree=g == h)
    if g != h:
        # a disagreement between the two forms is a defect, surfaced through consistency
        return Verdict("generator_stack", YES if g else NO, pre, {"stacks": info}, details)
    return Verdict("generator_stack", YES if g else NO, pre, None if g else {"stacks": info}, details)


# ----------------------------------------------------------------------
# module-theoretic criteria


def _slot(fn, *args, **kw) -> dict:
    try:
        chk: Check = fn(*args, **kw)
    except BudgetExceeded as exc:
        return {"verdict": OVER, "reason": str(exc)}
    out = {"verdict": YES if chk.holds else NO, "exhaustive": not chk.sampled}
    if chk.witness is not None:
        out["witness"] = literals(args[0].algebra, chk.witness)
    return out


def lcp_structural(C, D, budget: Budget | None = None, sample: bool = False, seed: int = 0) -> Verdict:
    """Predicates (2)-(5) on ``S = C + D``; the verdict is "(4) and (5)".

    "D is a complement of C" makes ``C ⊕ D`` essential in ``R^n``, and an
    essential submodule that is also closed is everything, so (4) and (5)
    together are equivalent to the pair being LCP with no cardinality
    hypothesis.  Slots (2) and (3) are reported alongside.
    """
    C, D = _modules(C, D)
    budget = budget or default_budget()
    kw = {"budget": budget, "sample": sample, "seed": seed}
    S = C + D
    zero = Submodule.zero(C.algebra, C.n)
    meet = C & D
    pre = {
        "intersection_zero": meet.is_zero,
        "cardinality_product": C.dim + D.dim == C.N,
    }
    slots = {
        "essential_sum": _slot(is_essential, S, **kw),
        "zero_complement_of_sum": _slot(is_complement_of, zero, S, **kw),
        "D_complement_of_C": _slot(is_complement_of, D, C, **kw),
        "sum_closed": _slot(is_closed, S, **kw),
    }
    pre["exhaustive"] = all(s.get("exhaustive", True) for s in slots.values())
    key = [slots["D_complement_of_C"]["verdict"], slots["sum_closed"]["verdict"]]
    if NO in key:
        verdict = NO
    elif OVER in key:
        verdict = OVER
    else:
        verdict = YES
    if slots["essential_sum"]["verdict"] in (YES, NO) and slots["zero_complement_of_sum"]["verdict"] in (YES, NO):
        if slots["essential_sum"]["verdict"] != slots["zero_complement_of_sum"]["verdict"]:
            raise AssertionError("essential(S) and complement_of(0, S) disagree")
    agree = None
    if pre["intersection_zero"] and pre["cardinality_product"]:
        vals = {s["verdict"] for s in slots.values()}
        agree = vals == {YES}
    details = {"slots": slots, "five_way_agreement": agree}
    wit = None
    if verdict == NO:
        wit = {k: slots[k].get("witness") for k in ("D_complement_of_C", "sum_closed") if slots[k]["verdict"] == NO}
    return Verdict("structural_4_8", verdict, pre, wit, details)


def lcp_by_injective_hull(C, D, budget: Budget | None = None, sample: bool = False, seed: int = 0) -> Verdict:
    """Both codes direct summands (injective inside ``R^n``) and ``C ⊕ D`` essential.

    Summands of ``R^n`` are injective only when ``R`` is self-injective, so
    the test runs only if the Frobenius certificate passes.
    """
    C, D = _modules(C, D)
    budget = budget or default_budget()
    cert = C.algebra.frobenius_certificate()
    pre = {"frobenius_necessary": cert.passes}
    if not cert.passes:
        return Verdict("injective_hull_4_5", NA, pre)
    meet = C & D
    pre["intersection_zero"] = meet.is_zero
    sc, sd = is_direct_summand(C), is_direct_summand(D)
    ess = _slot(is_essential, C + D, budget=budget, sample=sample, seed=seed)
    pre["exhaustive"] = ess.get("exhaustive", True)
    details = {"C_summand": sc.holds, "D_summand": sd.holds, "essential_sum": ess["verdict"]}
    if not meet.is_zero:
        return Verdict("injective_hull_4_5", NO, pre, {"in_intersection": literals(C.algebra, meet.basis[0])}, details)
    if not (sc.holds and sd.holds):
        wit = {"not_summand": [k for k, s in (("C", sc), ("D", sd)) if not s.holds]}
        return Verdict("injective_hull_4_5", NO, pre, wit, details)
    if ess["verdict"] == OVER:
        return Verdict("injective_hull_4_5", OVER, pre, None, details)
    if ess["verdict"] == NO:
        return Verdict("injective_hull_4_5", NO, pre, {"essential_sum": ess.get("witness")}, details)
    return Verdict("injective_hull_4_5", YES, pre, None, details)


# ----------------------------------------------------------------------
# report


@dataclass
class LcpReport:
    ring: str
    n: int
    verdicts: list[Verdict]
    consistent: bool
    security: LcpSecurity | None = None

    @property
    def verdict(self) -> str:
        return next(v.verdict for v in self.verdicts if v.criterion == "definition")

    def get(self, criterion: str) -> Verdict:
        return next(v for v in self.verdicts if v.criterion == criterion)

    def to_dict(self) -> dict:
        return {
            "ring": self.ring,
            "n": self.n,
            "verdict": self.verdict,
            "consistent": self.consistent,
            "criteria": [v.to_dict() for v in self.verdicts],
            "security": self.security.as_dict() if self.security else None,
        }


_RUNNERS = {
    "definition": lambda C, D, **kw: _definition(C, D),
    "pi_reduction": lambda C, D, **kw: lcp_by_pi(C, D),
    "parity_product": lambda C, D, **kw: lcp_by_parity_product(C, D),
    "generator_stack": lambda C, D, **kw: lcp_by_generator_stack(C, D),
    "structural_4_8": lambda C, D, **kw: lcp_structural(C, D, **kw),
    "injective_hull_4_5": lambda C, D, **kw: lcp_by_injective_hull(C, D, **kw),
}


def check_lcp(
    C,
    D,
    methods=None,
    budget: Budget | None = None,
    sample: bool = False,
    seed: int = 0,
    workers: int = 1,
    timing: bool = False,
    security: bool = False,
) -> LcpReport:
    """Run the selected criteria and check that every conclusive verdict agrees."""
    Cm, Dm = _modules(C, D)
    methods = list(CRITERIA if methods in (None, "all") else methods)
    unknown = [m for m in methods if m not in CRITERIA]
    if unknown:
        raise ValueError(f"unknown criteria {unknown}; choose from {list(CRITERIA)}")
    if "definition" not in methods:
        methods.insert(0, "definition")
    methods = [m for m in CRITERIA if m in methods]
    kw = {"budget": budget or default_budget(), "sample": sample, "seed": seed}
    # warm shared caches so worker threads only read them
    alg = Cm.algebra
    alg.jacobson_radical()
    _ = alg.units_mask, alg.frobenius_certificate()
    if alg.is_local and alg.has_residue_map:
        _ = alg.residue_functional

    def run(name: str) -> Verdict:
        t0 = time.perf_counter()
        v = _RUNNERS[name](C, D, **kw)
        if timing:
            v.timing_ms = round((time.perf_counter() - t0) * 1000, 3)
        return v

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            verdicts = list(pool.map(run, methods))
    else:
        verdicts = [run(m) for m in methods]
    conclusive = {v.verdict for v in verdicts if v.conclusive}
    consistent = len(conclusive) <= 1
    stack = next((v for v in verdicts if v.criterion == "generator_stack"), None)
    if stack is not None and stack.details and stack.details.get("forms_agree") is False:
        consistent = False
    sec = None
    if security and verdicts[0].verdict == YES:
        sec = security_parameter(Cm, Dm, kw["budget"])
    return LcpReport(Cm.algebra.name, Cm.n, verdicts, consistent, sec)


def is_lcp(C, D) -> bool:
    return is_lcp_definition(C, D)[0]


# ----------------------------------------------------------------------
# idempotent and duality


@dataclass(frozen=True, eq=False)
class Projection:
    """Projection of ``R^n`` onto ``C`` along ``D``.

    ``P`` acts on column vectors and has the ``C``-components ``c_j`` of the
    standard basis as its columns; ``e = P^T`` has them as rows, so
    ``C = {e^T α^T}``.  ``P^2 = P`` always; ``e^2 = e`` is a separate fact.
    """

    e: RingMatrix
    P: RingMatrix
    P_idempotent: bool
    e_idempotent: bool
    image_is_C: bool
    complement_is_D: bool


def projection_idempotent(C, D) -> Projection:
    Cm, Dm = _modules(C, D)
    ok, wit = is_lcp_definition(Cm, Dm)
    if not ok:
        raise NotLcpError(f"(C, D) is not an LCP pair: {wit}")
    alg, n, F = Cm.algebra, Cm.n, Cm.algebra.F
    stack = np.vstack([Cm.basis, Dm.basis])
    rows = []
    for j in range(n):
        eps = np.zeros(Cm.N, dtype=DTYPE)
        eps[j * alg.d : (j + 1) * alg.d] = alg.unity
        coeff = F.solve(stack.T, eps)
        rows.append(F.dot(coeff[None, : Cm.dim], Cm.basis)[0] if Cm.dim else np.zeros(Cm.N, dtype=DTYPE))
    e = RingMatrix(alg, np.stack(rows).reshape(n, n, alg.d))
    P = e.T
    I = RingMatrix.identity(alg, n)
    res = Projection(
        e=e,
        P=P,
        P_idempotent=P @ P == P,
        e_idempotent=e @ e == e,
        image_is_C=column_image(P) == Cm,
        complement_is_D=column_image(I - P) == Dm,
    )
    if not (res.P_idempotent and res.image_is_C and res.complement_is_D):
        raise AssertionError("projection failed to verify")
    return res


def security_parameter(C, D, budget: Budget | None = None) -> LcpSecurity:
    """``(d(C), d(D^⊥))``."""
    Cm, Dm = _modules(C, D)
    return LcpSecurity(min_distance(Cm, budget), min_distance(dual(Dm), budget))


@dataclass
class PipelineReport:
    projection: Projection
    dual_by_annihilator: Submodule
    dual_by_formula: Submodule
    dual_formula_holds: bool
    Cperp_vs_D: EquivalenceResult
    Dperp_vs_C: EquivalenceResult
    security: LcpSecurity
    d_Cperp: int | None
    d_D: int | None

    def to_dict(self) -> dict:
        return {
            "e": self.projection.e.to_literals(),
            "e_idempotent": self.projection.e_idempotent,
            "P_idempotent": self.projection.P_idempotent,
            "dual_formula_holds": self.dual_formula_holds,
            "Cperp_vs_D": self.Cperp_vs_D.to_dict(),
            "Dperp_vs_C": self.Dperp_vs_C.to_dict(),
            "security": self.security.as_dict(),
            "d_Cperp": self.d_Cperp,
            "d_D": self.d_D,
        }


def theorem_5_3_pipeline(C, D, budget: Budget | None = None) -> PipelineReport:
    """Build the projection idempotent, compute ``C^⊥`` two ways, and compare duals with the partners."""
    Cm, Dm = _modules(C, D)
    budget = budget or default_budget()
    proj = projection_idempotent(Cm, Dm)
    by_ann = dual(Cm)
    I = RingMatrix.identity(Cm.algebra, Cm.n)
    by_formula = left_row_span(I - proj.e.T)
    holds = by_ann == by_formula
    c_vs_d = equivalent(by_ann, Dm, budget)
    Dperp = dual(Dm)
    d_vs_c = equivalent(Dperp, Cm, budget)
    sec = LcpSecurity(min_distance(Cm, budget), min_distance(Dperp, budget))
    d_cperp, d_d = min_distance(by_ann, budget), min_distance(Dm, budget)
    if d_vs_c.found and sec.d_C != sec.d_Dperp:
        raise AssertionError("equivalent codes with different minimum distances")
    if c_vs_d.found and d_cperp != d_d:
        raise AssertionError("equivalent codes with different minimum distances")
    return PipelineReport(proj, by_ann, by_formula, holds, c_vs_d, d_vs_c, sec, d_cperp, d_d)

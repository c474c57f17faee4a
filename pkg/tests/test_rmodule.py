import itertools

import numpy as np
import pytest

import oracles as O
from helpers import coords, to_module, to_set
from ringlcp.algebra import preset
from ringlcp.budget import Budget
from ringlcp.errors import BudgetExceeded, DegenerateInput, NotLocalError
from ringlcp.rmodule import (
    Submodule,
    cyclic,
    from_generators,
    is_closed,
    is_complement_of,
    is_direct_summand,
    is_essential,
    is_essential_in,
    is_free,
    minimal_generators,
    pi_image,
    socle,
    times_radical,
)

CASES = [("ut2", 2, 1, "right"), ("ut2", 2, 2, "right"), ("ut2", 3, 1, "right"), ("blockpair", 2, 1, "right"),
         ("mat2", 2, 1, "right"), ("mat2", 2, 1, "left"), ("t2", 2, 1, "right"), ("t2", 2, 1, "left"),
         ("field", 2, 3, "right")]


@pytest.fixture(scope="module")
def lattice(oracle_ring):
    cache = {}

    def get(name, q, n, side):
        key = (name, q, n, side)
        if key not in cache:
            R, alg = oracle_ring(name, q), preset(name, q)
            sets = O.all_submodules(R, n, side)
            mods = [to_module(S, R, alg, n, side) for S in sets]
            cache[key] = (R, alg, sets, mods)
        return cache[key]

    return get


class TestConstruction:
    def test_zero_generators(self):
        M = from_generators(preset("ut2(3)"), [["0"]])
        assert M.is_zero and M.cardinality == 1

    def test_u_generates_three_elements(self):
        M = from_generators(preset("ut2(3)"), [["u"]])
        assert M.cardinality == 3

    def test_idempotent_code(self):
        for q in (2, 3):
            M = from_generators(preset("blockpair", q), [["e1"]])
            assert M.cardinality == q**2

    def test_cyclic(self):
        A = preset("ut2(3)")
        assert cyclic(A, ["0", "0"]).is_zero
        assert cyclic(A, ["u", "0"]).dim == 1
        assert cyclic(A, ["1"]).is_full

    def test_empty_ambient_rejected(self):
        with pytest.raises(DegenerateInput):
            Submodule.zero(preset("ut2(2)"), 0)

    def test_non_closed_basis_rejected(self):
        with pytest.raises(AssertionError):
            Submodule(preset("ut2(2)"), 1, "right", np.array([[1, 0]]))

    @pytest.mark.parametrize("case", CASES)
    def test_cyclic_matches_oracle(self, case, lattice):
        name, q, n, side = case
        R, alg, _, _ = lattice(*case)
        for x in O.all_vectors(R, n)[:: max(1, R.size**n // 40)]:
            M = cyclic(alg, coords(R, x).reshape(1, -1), side, n)
            assert to_set(M, R) == O.cyclic_set(R, x, side)

    @pytest.mark.parametrize("case", CASES[:5])
    def test_meet_join_order_match_oracle(self, case, lattice):
        R, alg, sets, mods = lattice(*case)
        for (A, a), (B, b) in itertools.product(zip(sets, mods), repeat=2):
            assert to_set(a & b, R) == A & B
            assert to_set(a + b, R) == O.module_sum(R, A, B)
            assert a.le(b) == (A <= B)

    def test_modular_law(self, lattice):
        _, _, _, mods = lattice("ut2", 2, 2, "right")
        for A, B, C in itertools.product(mods, repeat=3):
            if A.le(C):
                assert A + (B & C) == (A + B) & C


class TestRadicalAndGenerators:
    def test_zero_module(self):
        Z = Submodule.zero(preset("ut2(3)"), 2)
        assert times_radical(Z).is_zero
        assert minimal_generators(Z).shape[0] == 0
        assert is_free(Z) == (True, 0)

    def test_whole_ring(self):
        A = preset("ut2(3)")
        R1 = Submodule.full(A, 1)
        assert times_radical(R1).basis.tolist() == [[0, 1]]
        g = minimal_generators(R1)
        assert g.shape[0] == 1 and A.is_unit(g[0])

    def test_free_rank_two_pair(self):
        for q in (2, 3):
            A = preset("ut2", q)
            C = from_generators(A, [["1", "0", "1", "0"], ["0", "1", "0", "1"]])
            assert minimal_generators(C).shape[0] == 2
            assert is_free(C) == (True, 2)

    def test_u_module_not_free(self):
        assert is_free(from_generators(preset("ut2(3)"), [["u"]])) == (False, None)

    def test_non_local_freeness_is_unsupported(self):
        with pytest.raises(NotLocalError):
            is_free(from_generators(preset("blockpair(3)"), [["e1"]]))

    @pytest.mark.parametrize("case", [("ut2", 2, 1, "right"), ("ut2", 2, 2, "right"), ("ut2", 3, 1, "right")])
    def test_freeness_and_generator_count_match_oracle(self, case, lattice):
        R, alg, sets, mods = lattice(*case)
        n = case[2]
        for S, M in zip(sets, mods):
            k = O.min_generators(R, n, S)
            assert minimal_generators(M).shape[0] == k
            assert is_free(M)[0] == O.is_free(R, n, S)

    @pytest.mark.parametrize("case", CASES)
    def test_nakayama_and_radical_product(self, case, lattice):
        R, alg, sets, mods = lattice(*case)
        for S, M in zip(sets, mods):
            MJ = times_radical(M) if not M.is_zero else M
            if case[3] == "right":
                expect = O.additive_closure_vec(R, {O.vec_rmul(R, v, j) for v in S for j in R.radical}, case[2])
            else:
                expect = O.additive_closure_vec(R, {O.vec_lmul(R, j, v) for v in S for j in R.radical}, case[2])
            assert to_set(MJ, R) == expect
            if not M.is_zero:
                assert MJ != M


class TestPiImage:
    def test_zero(self):
        assert pi_image(Submodule.zero(preset("ut2(3)"), 2)).shape[0] == 0

    def test_free_pair(self):
        C = from_generators(preset("ut2(3)"), [["1", "0", "1", "0"], ["0", "1", "0", "1"]])
        assert pi_image(C).tolist() == [[1, 0, 1, 0], [0, 1, 0, 1]]

    def test_radical_module(self):
        assert pi_image(from_generators(preset("ut2(2)"), [["u"]])).shape[0] == 0

    @pytest.mark.parametrize("case", [("ut2", 2, 1), ("ut2", 2, 2), ("ut2", 3, 2)])
    def test_trivial_meet_has_trivial_residue_meet(self, case, lattice):
        R, alg, sets, mods = lattice(*case, "right")
        for C, D in itertools.product(mods, repeat=2):
            if (C & D).is_zero:
                assert _residue_meet(C, D) == 0

    @pytest.mark.parametrize("case", [("ut2", 2, 1), ("ut2", 2, 2), ("ut2", 3, 2)])
    def test_residues_detect_meets_of_free_codes(self, case, lattice):
        R, alg, sets, mods = lattice(*case, "right")
        free = [M for M in mods if is_free(M)[0]]
        for C, D in itertools.product(free, repeat=2):
            assert (C & D).is_zero == (_residue_meet(C, D) == 0)

    def test_residues_miss_meets_inside_the_radical(self):
        U = from_generators(preset("ut2(2)"), [["u"]])
        assert not (U & U).is_zero and _residue_meet(U, U) == 0


def _residue_meet(C, D) -> int:
    pc, pd = pi_image(C), pi_image(D)
    if not (pc.shape[0] and pd.shape[0]):
        return 0
    return C.algebra.F.intersect(pc, pd).shape[0]


class TestEssential:
    def test_full_is_essential(self):
        assert is_essential(Submodule.full(preset("ut2(3)"), 2)).holds

    def test_zero_not_essential(self):
        A = preset("ut2(3)")
        chk = is_essential(Submodule.zero(A, 1))
        assert not chk.holds and chk.witness is not None and np.any(chk.witness)

    def test_u_module_essential(self):
        for q in (2, 3):
            assert is_essential(from_generators(preset("ut2", q), [["u"]])).holds

    @pytest.mark.parametrize("case", CASES)
    def test_matches_oracle(self, case, lattice):
        R, alg, sets, mods = lattice(*case)
        n = case[2]
        for S, M in zip(sets, mods):
            chk = is_essential(M)
            assert chk.holds == O.is_essential(R, n, S, sets)
            if not chk.holds:
                W = cyclic(alg, chk.witness.reshape(1, -1), case[3], n)
                assert (W & M).is_zero and not W.is_zero

    @pytest.mark.parametrize("case", CASES)
    def test_essential_in_matches_oracle(self, case, lattice):
        R, alg, sets, mods = lattice(*case)
        for (S, C), (T, M) in itertools.product(zip(sets, mods), repeat=2):
            if S <= T:
                assert is_essential_in(C, M) == O.is_essential_in(R, case[2], S, T, sets)

    def test_socle_of_whole_ring(self):
        A = preset("blockpair(3)")
        assert socle(Submodule.full(A, 1)).dim == 2


class TestComplementClosedSummand:
    def test_trivial_complement(self):
        A = preset("ut2(3)")
        assert is_complement_of(Submodule.zero(A, 2), Submodule.full(A, 2)).holds

    def test_full_closed_and_summand(self):
        A = preset("ut2(3)")
        assert is_closed(Submodule.full(A, 2)).holds
        s = is_direct_summand(Submodule.full(A, 2))
        assert s.holds and s.complement.is_zero

    def test_idempotent_summand(self):
        A = preset("blockpair(3)")
        s = is_direct_summand(from_generators(A, [["e1"]]))
        assert s.holds and s.complement == from_generators(A, [["e2"]])

    def test_u_module_not_summand(self):
        for q in (2, 3):
            assert not is_direct_summand(from_generators(preset("ut2", q), [["u"]])).holds

    @pytest.mark.parametrize("case", CASES)
    def test_complement_matches_oracle(self, case, lattice):
        R, alg, sets, mods = lattice(*case)
        for (S, C), (T, D) in itertools.product(zip(sets, mods), repeat=2):
            assert is_complement_of(D, C).holds == O.is_complement_of(R, case[2], T, S, sets)

    @pytest.mark.parametrize("case", CASES)
    def test_closed_matches_both_oracles(self, case, lattice):
        R, alg, sets, mods = lattice(*case)
        for S, C in zip(sets, mods):
            expect = O.is_closed_extension_form(R, case[2], S, sets)
            assert expect == O.is_closed_complement_form(R, case[2], S, sets)
            chk = is_closed(C)
            assert chk.holds == expect
            if not chk.holds:
                M = C + cyclic(alg, chk.witness.reshape(1, -1), case[3], case[2])
                assert M != C and O.is_essential_in(R, case[2], S, to_set(M, R), sets)

    @pytest.mark.parametrize("case", CASES)
    def test_summand_matches_search(self, case, lattice):
        R, alg, sets, mods = lattice(*case)
        for S, C in zip(sets, mods):
            found = O.summand_by_search(R, case[2], S, sets)
            s = is_direct_summand(C)
            assert s.holds == (found is not None)
            if s.holds:
                assert (C & s.complement).is_zero and (C + s.complement).is_full

    def test_summands_over_full_matrix_ring(self):
        A = preset("mat2(2)")
        for side in ("right", "left"):
            s = is_direct_summand(from_generators(A, [["E11"]], side))
            assert s.holds and s.complement == from_generators(A, [["E22"]], side)


class TestBudget:
    def test_scan_over_budget_raises(self):
        A = preset("ut2(3)")
        C = from_generators(A, [["u", "0", "0"]])
        with pytest.raises(BudgetExceeded):
            is_essential(C, Budget(scan=100))

    def test_sampled_false_verdict_has_witness(self):
        A = preset("ut2(3)")
        C = from_generators(A, [["u", "0", "0"]])
        chk = is_essential(C, Budget(scan=100, samples=500), sample=True, seed=1)
        assert not chk.holds and chk.sampled
        assert (cyclic(A, chk.witness.reshape(1, -1), "right", 3) & C).is_zero

    def test_sampling_is_seeded(self):
        A = preset("ut2(3)")
        C = from_generators(A, [["u", "0", "0"]])
        b = Budget(scan=100, samples=500)
        w1 = is_essential(C, b, sample=True, seed=4).witness
        w2 = is_essential(C, b, sample=True, seed=4).witness
        assert np.array_equal(w1, w2)

import itertools

import numpy as np
import pytest

import oracles as O
from helpers import to_module, to_set
from ringlcp.algebra import preset
from ringlcp.budget import Budget
from ringlcp.codes import dual, weight_distribution
from ringlcp.equiv import apply_monomial, equivalent, monomial_equivalent, permutation_equivalent, permute
from ringlcp.errors import AlgebraMismatch, BudgetExceeded
from ringlcp.rmodule import Submodule, from_generators


def _units_from_literals(alg, scalars):
    return np.array([alg.parse(s) for s in scalars])


def _image(A, res):
    alg = A.algebra
    if res.scalars is None:
        V = permute(alg, A.basis, res.permutation)
    else:
        V = apply_monomial(alg, A.basis, res.permutation, _units_from_literals(alg, res.scalars), res.scale_side)
    return Submodule(alg, A.n, A.side, V) if V.shape[0] else Submodule.zero(alg, A.n, A.side)


class TestExamples:
    def test_identical(self):
        A = from_generators(preset("ut2(3)"), [["1", "u"]])
        res = equivalent(A, A)
        assert res.kind == "set-equal" and res.permutation == (0, 1)

    @pytest.mark.parametrize("name,q", [("ut2", 3), ("mat2", 2), ("field", 5)])
    def test_swap(self, name, q):
        alg = preset(name, q)
        A = from_generators(alg, [["1", "0"]])
        B = from_generators(alg, [["0", "1"]])
        res = equivalent(A, B)
        assert res.kind == "permutation" and res.permutation == (1, 0)

    def test_scaled_coordinate(self):
        alg = preset("ut2(3)")
        A = from_generators(alg, [["1", "1"]])
        B = from_generators(alg, [["1", "1+u"]])
        assert not permutation_equivalent(A, B).found
        res = equivalent(A, B)
        assert res.kind == "monomial"
        assert _image(A, res) == B
        u = _units_from_literals(alg, res.scalars)
        assert all(alg.is_unit(x) for x in u)

    def test_different_weights_rejected_early(self):
        alg = preset("ut2(3)")
        A = from_generators(alg, [["1", "1", "0"], ["0", "0", "1"]])
        B = from_generators(alg, [["1", "1", "1"], ["0", "1", "2"]])
        assert weight_distribution(A) != weight_distribution(B)
        res = equivalent(A, B)
        assert res.kind == "none-within-budget" and res.exhausted
        assert "weight distributions differ" in monomial_equivalent(A, B).notes

    def test_dual_of_example_code_against_partner(self):
        alg = preset("ut2(3)")
        C = from_generators(alg, [["1", "2", "0"], ["0", "1", "2"]])
        D = from_generators(alg, [["1", "2", "1"]])
        res = equivalent(dual(C), D)
        assert res.kind == "monomial" and res.scale_side == "right"
        assert res.to_dict()["scalars"] == ["1", "2", "1"]

    def test_mismatched_ambient(self):
        alg = preset("ut2(3)")
        with pytest.raises(AlgebraMismatch):
            equivalent(Submodule.zero(alg, 2), Submodule.zero(alg, 3))

    def test_budget_caps(self):
        alg = preset("field(2)")
        A = Submodule.zero(alg, 4)
        B = from_generators(alg, [["1", "1", "1", "1"]])
        with pytest.raises(BudgetExceeded):
            permutation_equivalent(A, B, Budget(permutation_n=3))
        with pytest.raises(BudgetExceeded):
            monomial_equivalent(A, B, Budget(monomial_n=3))
        res = equivalent(A, B, Budget(permutation_n=3, monomial_n=3))
        assert not res.found and not res.exhausted

    def test_result_dict_order(self):
        alg = preset("ut2(3)")
        A = from_generators(alg, [["1", "0"]])
        keys = list(equivalent(A, A).to_dict())
        assert keys == ["kind", "permutation", "scalars", "scale_side", "checked_basis_size", "exhausted"]


CASES = [("ut2", 2, 2, "right"), ("ut2", 3, 2, "right"), ("t2", 2, 2, "right"), ("t2", 2, 2, "left"),
         ("mat2", 2, 2, "right"), ("mat2", 2, 2, "left")]


@pytest.mark.parametrize("case", CASES)
def test_kind_matches_exhaustive_search(case, oracle_ring):
    name, q, n, side = case
    R, alg = oracle_ring(name, q), preset(name, q)
    sets = O.all_submodules(R, n, side)
    mods = [to_module(S, R, alg, n, side) for S in sets]
    scale = "left" if side == "right" else "right"
    pairs = [(i, j) for i, j in itertools.product(range(len(sets)), repeat=2) if len(sets[i]) == len(sets[j])]
    if len(pairs) > 300:
        rng = np.random.default_rng(2)
        pairs = [pairs[k] for k in sorted(rng.choice(len(pairs), 300, replace=False))]
    kinds = set()
    for i, j in pairs:
        want = O.equivalence_kind(R, sets[i], sets[j], n, scale)
        res = equivalent(mods[i], mods[j])
        got = res.kind if res.found else "none"
        assert res.exhausted
        assert got == want, (i, j)
        if res.found:
            assert to_set(_image(mods[i], res), R) == sets[j]
        kinds.add(got)
    assert {"set-equal", "permutation", "none"} <= kinds


def test_monomial_maps_preserve_weights():
    alg = preset("mat2(2)")
    rng = np.random.default_rng(4)
    units = alg.unit_elements
    for _ in range(20):
        gens = rng.integers(0, 2, size=(2, 3, alg.d))
        A = from_generators(alg, gens.reshape(2, -1), "right", 3)
        sigma = tuple(rng.permutation(3))
        u = units[rng.integers(0, len(units), size=3)]
        B = Submodule(alg, 3, "right", apply_monomial(alg, A.basis, sigma, u, "left"))
        assert weight_distribution(A) == weight_distribution(B)
        res = equivalent(A, B)
        assert res.found and _image(A, res) == B

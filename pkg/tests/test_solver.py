import json
import random

import pytest
from hypothesis import given, strategies as st

from ordcomplete.completion import Cut, embed, enumerate_cuts
from ordcomplete.fixtures import antichain, chain, random_problem
from ordcomplete.poset import GroundMap
from ordcomplete.pullback import EquationProblem, problem_from_json
from ordcomplete.solver import (
    build_context,
    check_chain,
    global_solvability,
    lower_aggregate,
    oracle_solve,
    solve,
    solve_all,
    upper_aggregate,
)

from conftest import FIXTURES
from oracles import all_cuts, solve_by_scan, tsharp

seeds = st.integers(0, 2**32 - 1)


def load(name):
    return problem_from_json(json.loads((FIXTURES / f"{name}.json").read_text()))


@pytest.fixture
def worked():
    return build_context(load("worked_problem"))


class TestWorkedExample:
    def test_solvable(self, worked):
        out = solve(worked, "2")
        assert out.solvable
        assert out.solution.labels == ("u1", "u2")
        assert out.solution_classes() == [["u1"], ["u2"]]
        assert worked.tsharp(out.solution).labels == ("1", "2")
        assert oracle_solve(worked, "2") == out.solution

    def test_unsolvable(self, worked):
        out = solve(worked, "3")
        assert not out.solvable and out.solution is None
        assert out.lower_aggregate.labels == ("1", "2")
        assert out.upper_aggregate.labels == ("1", "2", "3", "4")
        assert out.chain.strict_gap
        assert oracle_solve(worked, "3") is None

    def test_top(self, worked):
        out = solve(worked, "4")
        assert out.solution == worked.XT_completion.top

    def test_xt_has_three_cuts(self, worked):
        # X_T is a 3-chain, which has a minimum, so the empty set is not a cut
        assert [c.labels for c in worked.XT_completion] == [("u1",), ("u1", "u2"), ("u1", "u2", "u3")]

    def test_chain_collapses_on_attained_target(self, worked):
        F = worked.tsharp(worked.XT_completion.cuts[1])
        r = check_chain(worked, F)
        assert r.lower_y == r.tsharp_of_sup == r.tsharp_of_inf == r.upper_y == F

    def test_json(self, worked):
        doc = solve(worked, "2").to_json()
        assert doc["solvable"] is True
        assert doc["solution"] == [["u1"], ["u2"]]
        assert doc["lower_aggregate"] == ["1", "2"]
        assert set(doc) >= {"solvable", "solution", "lower_aggregate", "upper_aggregate", "chain"}

    def test_global(self, worked):
        r = global_solvability(worked)
        assert not r.principal_attained and not r.all_attained
        assert r.unattained_principal == ("3",)
        assert r.order_isomorphism is None

    def test_lower_aggregate_own_witness(self, worked):
        for A in worked.XT_completion:
            agg, wit = lower_aggregate(worked, worked.tsharp(A))
            assert A in wit and worked.tsharp(A) <= agg


class TestContext:
    def test_injective_into_chain(self):
        Y = chain(5, prefix="y")
        P = EquationProblem(GroundMap(("a", "b", "c"), Y, [0, 2, 4]), "y0")
        C = build_context(P)
        image = Y.labels_of(0b10101)
        sub = chain(3)
        assert len(C.XT_completion) == len(enumerate_cuts(sub)) == len(image)
        covers = set(C.XT_completion.as_poset().cover_pairs())
        assert covers == {(("a",), ("a", "b")), (("a", "b"), ("a", "b", "c"))}

    def test_antichain_classes(self):
        for n in range(2, 6):
            Y = antichain(n, prefix="y")
            P = EquationProblem(GroundMap(tuple(f"u{i}" for i in range(n)), Y, list(range(n))), "y0")
            assert len(build_context(P).XT_completion) == n + 2

    def test_singleton(self):
        P = EquationProblem(GroundMap(("u",), chain(2), [1]), "c1")
        assert len(build_context(P).XT_completion) == 1

    @given(seeds)
    def test_principal_compatibility(self, seed):
        C = build_context(random_problem(random.Random(seed)))
        Q = C.quotient
        for U in Q.order.elements:
            assert C.tsharp(embed(Q.order, U)) == embed(C.problem.Y, Q.injection(U))


class TestAgainstOracle:
    @given(seeds)
    def test_every_target(self, seed):
        P = random_problem(random.Random(seed))
        C = build_context(P)
        T = dict(P.T.pairs())
        Q = C.quotient
        for F in C.Y_completion:
            out = solve(C, F)
            scanned = solve_by_scan(P.X, P.Y, T, F.labels)
            assert len(scanned) <= 1
            assert out.solvable == bool(scanned)
            assert out.solvable == (oracle_solve(C, F) is not None)
            if out.solvable:
                members = frozenset(frozenset(Q.members(r)) for r in out.solution.labels)
                assert members == scanned[0]
                assert out.upper_witnesses
                assert oracle_solve(C, F) == out.solution

    @given(seeds)
    def test_tsharp_matches_oracle(self, seed):
        P = random_problem(random.Random(seed))
        C = build_context(P)
        T_eq = dict(C.quotient.injection.pairs())
        for A in C.XT_completion:
            assert frozenset(C.tsharp(A).labels) == tsharp(P.Y, T_eq, A.labels)

    @given(seeds)
    def test_lower_witnesses(self, seed):
        C = build_context(random_problem(random.Random(seed)))
        bottom_image = C.tsharp(C.XT_completion.bottom)
        for F in C.Y_completion:
            _, lw = lower_aggregate(C, F)
            assert bool(lw) == (bottom_image <= F)
            if C.quotient.order.minimum() is None:
                # the empty cut exists and maps to the bottom of Y^#
                assert lw

    def test_empty_lower_witnesses_with_minimum(self):
        # X_T = {u} has a minimum; its only cut maps to <2], which is not inside <1]
        P = EquationProblem(GroundMap(("u",), chain(2), [1]), "c0")
        C = build_context(P)
        agg, lw = lower_aggregate(C)
        assert lw == [] and agg == C.Y_completion.bottom
        out = solve(C)
        assert not out.solvable

    def test_empty_upper_witnesses(self):
        P = EquationProblem(GroundMap(("u",), chain(2), [0]), "c1")
        C = build_context(P)
        agg, uw = upper_aggregate(C)
        assert uw == [] and agg == C.Y_completion.top
        assert not solve(C).solvable

    def test_bottom_target_without_minima(self):
        Y = antichain(3, prefix="y")
        P = EquationProblem(GroundMap(("u", "v"), Y, [0, 1]), Cut.of(Y, []))
        C = build_context(P)
        agg, _ = lower_aggregate(C)
        assert agg == C.tsharp(C.XT_completion.bottom)
        assert oracle_solve(C) == C.XT_completion.bottom

    def test_solve_all_order(self, worked):
        outs = solve_all(worked)
        assert [o.F for o in outs] == list(worked.Y_completion)
        assert [o.solvable for o in outs] == [True, True, False, True]


class TestGlobal:
    def test_bijective(self):
        C = build_context(load("bijective_problem"))
        r = global_solvability(C)
        assert r.principal_attained and r.all_attained and r.order_isomorphism is True
        assert r.to_json()["unattained_cuts"] == []

    def test_chain_missing_middle(self):
        Y = chain(3, prefix="y")
        C = build_context(EquationProblem(GroundMap(("a", "b"), Y, [0, 2]), "y0"))
        r = global_solvability(C)
        assert not r.principal_attained and not r.all_attained
        assert r.unattained_principal == ("y1",)

    @given(seeds)
    def test_equivalence(self, seed):
        P = random_problem(random.Random(seed))
        C = build_context(P)
        r = global_solvability(C)
        T_eq = dict(C.quotient.injection.pairs())
        attained = {tsharp(P.Y, T_eq, A.labels) for A in C.XT_completion}
        principal = all(frozenset(embed(P.Y, y).labels) in attained for y in P.Y)
        everything = all(c in attained for c in all_cuts(P.Y))
        assert r.principal_attained == principal
        assert r.all_attained == everything
        assert principal == everything
        if everything:
            assert r.order_isomorphism is True

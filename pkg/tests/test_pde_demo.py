import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ordcomplete.errors import InputError, SizeCapExceeded, StencilUnderflow
from ordcomplete.pde_demo import (
    CandidateSpace,
    DifferenceOperator,
    Grid,
    GridFunction,
    apply_operator,
    build_grid_problem,
    classify_solution,
    derivative,
    grid_problem_from_json,
    parse_expr,
)
from ordcomplete.solver import build_context, oracle_solve, solve

from conftest import FIXTURES
from oracles import solve_by_scan


def op(form, m=0, stencil="central"):
    return DifferenceOperator(m, stencil, parse_expr(form))


def run(gp):
    out = solve(build_context(gp.problem))
    return out, classify_solution(out, gp)


class TestOperator:
    def test_identity(self):
        g = Grid(0, 1, 3)
        U = GridFunction.of([2, -1, "1/3"])
        assert apply_operator(op("u"), g, U) == U

    def test_cube_fixes_signs(self):
        g = Grid(0, 1, 3)
        assert apply_operator(op(["pow", "u", 3]), g, GridFunction.of([-1, 0, 1])).to_json() == ["-1", "0", "1"]

    def test_forward_difference(self):
        U = [Fraction(0), Fraction(1, 2), Fraction(1)]
        assert derivative(U, Fraction(1, 2), 1, "forward") == (1, 1, 1)
        g = Grid(0, 1, 3)
        assert apply_operator(op("d1", 1, "forward"), g, GridFunction.of([0, 0.5, 1])).to_json() == ["1", "1", "1"]

    def test_second_difference(self):
        U = [Fraction(v) for v in (0, 1, 4, 9)]
        assert derivative(U, Fraction(1), 2, "central") == (2, 2, 2, 2)

    def test_odd_central_averages(self):
        U = [Fraction(v) for v in (0, 1, 4, 9)]
        # interior: (U[i+1] - U[i-1]) / 2
        assert derivative(U, Fraction(1), 1, "central") == (1, 2, 4, 5)

    def test_x_and_nonsmooth(self):
        g = Grid(-1, 1, 3)
        form = ["max", ["abs", "x"], ["min", "u", ["neg", "u"]]]
        assert apply_operator(op(form), g, GridFunction.of([3, 3, 3])).to_json() == ["1", "0", "1"]

    def test_underflow(self):
        with pytest.raises(StencilUnderflow):
            apply_operator(op("d3", 3), Grid(0, 1, 3), GridFunction.of([0, 0, 0]))

    def test_slot_above_order(self):
        with pytest.raises(InputError):
            op("d2", 1)

    @pytest.mark.parametrize("bad", [["pow", "u", "u"], ["nope", "u"], ["abs", "u", "u"], [], {"a": 1}, "zz"])
    def test_parse_errors(self, bad):
        with pytest.raises(InputError):
            parse_expr(bad)

    def test_grid(self):
        assert Grid(0, 1, 5).nodes == tuple(Fraction(i, 4) for i in range(5))
        with pytest.raises(InputError):
            Grid(0, 1, 2)


class TestProblem:
    def test_identity_binary(self):
        g = Grid(0, 1, 3)
        gp = build_grid_problem(op("u"), g, CandidateSpace.full([0, 1], 3), GridFunction.of([0, 1, 0]))
        assert len(gp.problem.X) == 8
        assert gp.problem.Y.size == 8
        out, cls = run(gp)
        assert cls.kind == "classical" and cls.candidates == ("U(0,1,0)",)

    def test_unattained_rhs_adds_element(self):
        g = Grid(0, 1, 3)
        gp = build_grid_problem(op("u"), g, CandidateSpace.full([0, 1], 3), GridFunction.of([0, "1/2", 0]))
        assert gp.problem.Y.size == 9 and not gp.rhs_attained

    def test_pointwise_order_is_a_poset(self):
        g = Grid(0, 1, 3)
        gp = build_grid_problem(op(["mul", "u", "u"]), g, CandidateSpace.full([-1, 0, 2], 3), GridFunction.of([1, 1, 1]))
        Y = gp.problem.Y
        for a in Y:
            for b in Y:
                assert Y.leq(a, b) == (gp.images_by_label[a] <= gp.images_by_label[b])

    def test_cap(self):
        with pytest.raises(SizeCapExceeded):
            CandidateSpace.full(range(10), 4, cap=1000)

    def test_listed_validation(self):
        with pytest.raises(InputError):
            CandidateSpace.listed([0, 1], [[0, 2, 0]], 3)
        with pytest.raises(InputError):
            CandidateSpace.listed([0, 1], [[0, 1]], 3)

    def test_cube_gap(self):
        # 27 classes is too many for the subset scan; scan the cuts instead
        gp = grid_problem_from_json(json.loads((FIXTURES / "pde_cube_gap.json").read_text()))
        C = build_context(gp.problem)
        out = solve(C)
        assert not gp.rhs_attained
        assert oracle_solve(C) is None
        assert not out.solvable and classify_solution(out, gp).kind == "unsolvable"

    def test_generalized_fixture(self):
        gp = grid_problem_from_json(json.loads((FIXTURES / "pde_generalized.json").read_text()))
        P = gp.problem
        out, cls = run(gp)
        scanned = solve_by_scan(P.X, P.Y, dict(P.T.pairs()), P.F.labels)
        assert len(scanned) == 1
        assert frozenset(frozenset(c) for c in out.solution_classes()) == scanned[0]
        assert cls.kind == "generalized"
        assert cls.below == ("U(0,0,0)", "U(0,1,0)", "U(1,0,0)")
        assert cls.above == ("U(1,1,1)", "U(2,1,0)")

    @pytest.mark.parametrize("name", ["pde_identity_attained", "pde_cube_gap", "pde_generalized", "pde_gradient"])
    def test_oracle_agrees(self, name):
        gp = grid_problem_from_json(json.loads((FIXTURES / f"{name}.json").read_text()))
        C = build_context(gp.problem)
        assert oracle_solve(C) == solve(C).solution


@st.composite
def m0_problems(draw):
    n = draw(st.integers(3, 4))
    alphabet = draw(st.sets(st.integers(-2, 2), min_size=1, max_size=3))
    form = draw(st.sampled_from(["u", ["pow", "u", 3], ["abs", "u"], ["add", "u", "x"], ["max", "u", 0], ["mul", "u", "u"]]))
    levels = sorted(alphabet)
    star = [draw(st.sampled_from(levels)) for _ in range(n)]
    return n, levels, form, star


class TestProperties:
    @given(m0_problems())
    def test_classical_recovery(self, case):
        n, levels, form, star = case
        g = Grid(0, 1, n)
        D = op(form)
        f = apply_operator(D, g, GridFunction.of(star))
        gp = build_grid_problem(D, g, CandidateSpace.full(levels, n), f)
        out, cls = run(gp)
        assert out.solvable and cls.kind == "classical"
        for c in cls.candidates:
            assert apply_operator(D, g, gp.candidates_by_label[c]) == f
        assert any(gp.candidates_by_label[c] == GridFunction.of(star) for c in cls.candidates)

    @given(st.sets(st.integers(-2, 2), min_size=1, max_size=3), st.sampled_from(["u", ["pow", "u", 3], ["max", "u", 0], ["add", "u", "x"]]))
    def test_monotone_operator(self, alphabet, form):
        g = Grid(0, 1, 3)
        D = op(form)
        S = CandidateSpace.full(alphabet, 3)
        for U in S.candidates:
            for V in S.candidates:
                if U <= V:
                    assert apply_operator(D, g, U) <= apply_operator(D, g, V)

    def test_deterministic(self):
        rng = random.Random(5)
        doc = {"grid": {"n": 3}, "operator": {"form": ["abs", "u"]}, "alphabet": [-1, 0, 1], "rhs": [rng.choice([0, 1]) for _ in range(3)]}
        a = json.dumps(run(grid_problem_from_json(doc))[0].to_json())
        b = json.dumps(run(grid_problem_from_json(json.loads(json.dumps(doc))))[0].to_json())
        assert a == b

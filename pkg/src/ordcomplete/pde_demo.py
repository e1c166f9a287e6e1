"""Discretized nonlinear operators solved by order completion.

A one-dimensional grid, a finite space of candidate grid functions and a
pointwise expression F(x, U, D^1 U, ..., D^m U) with derivatives replaced
by finite-difference quotients. The resulting map from candidates to grid
functions is solved against a right-hand side f with the pull-back solver,
under the pointwise order on grid functions.

Arithmetic is exact (``fractions.Fraction``) so the pointwise order is
decided without tolerances.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Mapping, Sequence

from .completion import density_decomposition
from .config import default_caps
from .errors import InputError, SizeCapExceeded, StencilUnderflow
from .poset import FinitePoset, GroundMap
from .pullback import EquationProblem
from .solver import SolveOutcome

STENCILS = ("central", "forward", "backward")


def to_fraction(v) -> Fraction:
    if isinstance(v, bool):
        raise InputError(f"{v!r} is not a number")
    if isinstance(v, (int, Fraction)):
        return Fraction(v)
    if isinstance(v, float):
        return Fraction(str(v))
    if isinstance(v, str):
        try:
            return Fraction(v)
        except ValueError:
            raise InputError(f"{v!r} is not a rational number") from None
    raise InputError(f"{v!r} is not a number")


def format_value(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


@dataclass(frozen=True)
class Grid:
    """n equally spaced nodes from lo to hi inclusive."""

    lo: Fraction
    hi: Fraction
    n: int

    def __post_init__(self):
        object.__setattr__(self, "lo", to_fraction(self.lo))
        object.__setattr__(self, "hi", to_fraction(self.hi))
        if self.n < 3:
            raise InputError("a grid needs at least 3 nodes")
        if not self.lo < self.hi:
            raise InputError("grid needs lo < hi")

    @property
    def spacing(self) -> Fraction:
        return (self.hi - self.lo) / (self.n - 1)

    @property
    def nodes(self) -> tuple[Fraction, ...]:
        h = self.spacing
        return tuple(self.lo + i * h for i in range(self.n))


@dataclass(frozen=True)
class GridFunction:
    values: tuple[Fraction, ...]

    @classmethod
    def of(cls, values: Sequence) -> "GridFunction":
        return cls(tuple(to_fraction(v) for v in values))

    def __len__(self):
        return len(self.values)

    def __le__(self, other: "GridFunction") -> bool:
        return all(a <= b for a, b in zip(self.values, other.values))

    def label(self) -> str:
        return "(" + ",".join(format_value(v) for v in self.values) + ")"

    def to_json(self) -> list[str]:
        return [format_value(v) for v in self.values]


# Expression trees are nested tuples: ("const", q), ("x",), ("d", k) for the
# k-th derivative slot (k = 0 is U itself) or (op, *children).
_NARY = {"add", "mul", "min", "max"}
_UNARY = {"neg", "abs"}


def parse_expr(obj):
    """Parse the JSON form: numbers, "x", "u", "d<k>", or [op, args...]."""
    if isinstance(obj, (int, float)) and not isinstance(obj, bool):
        return ("const", to_fraction(obj))
    if isinstance(obj, str):
        if obj == "x":
            return ("x",)
        if obj == "u":
            return ("d", 0)
        if obj.startswith("d") and obj[1:].isdigit():
            return ("d", int(obj[1:]))
        return ("const", to_fraction(obj))
    if isinstance(obj, list) and obj and isinstance(obj[0], str):
        op, args = obj[0], [parse_expr(a) for a in obj[1:]]
        if op in _NARY and args:
            return (op, *args)
        if op in _UNARY and len(args) == 1:
            return (op, *args)
        if op == "sub" and len(args) in (1, 2):
            return ("sub", *args) if len(args) == 2 else ("neg", args[0])
        if op == "pow" and len(args) == 2:
            exponent = args[1]
            if exponent[0] != "const" or exponent[1].denominator != 1:
                raise InputError("pow needs a constant integer exponent")
            return ("pow", args[0], exponent)
        raise InputError(f"bad arity or unknown operation {op!r}")
    raise InputError(f"cannot parse expression {obj!r}")


def max_derivative(expr) -> int:
    if expr[0] == "d":
        return expr[1]
    if expr[0] in ("const", "x"):
        return 0
    return max(max_derivative(e) for e in expr[1:])


def evaluate(expr, x: Fraction, slots: Sequence[Fraction]) -> Fraction:
    tag = expr[0]
    if tag == "const":
        return expr[1]
    if tag == "x":
        return x
    if tag == "d":
        return slots[expr[1]]
    vals = [evaluate(e, x, slots) for e in expr[1:]]
    if tag == "add":
        return sum(vals, Fraction(0))
    if tag == "mul":
        out = Fraction(1)
        for v in vals:
            out *= v
        return out
    if tag == "sub":
        return vals[0] - vals[1]
    if tag == "neg":
        return -vals[0]
    if tag == "abs":
        return abs(vals[0])
    if tag == "min":
        return min(vals)
    if tag == "max":
        return max(vals)
    if tag == "pow":
        base, e = vals
        if base == 0 and e < 0:
            raise InputError("zero raised to a negative power")
        return base ** int(e)
    raise InputError(f"unknown expression node {tag!r}")


@dataclass(frozen=True)
class DifferenceOperator:
    """F(x, U, D^1 U, ..., D^m U) with a named interior stencil."""

    m: int
    stencil: str
    form: tuple

    def __post_init__(self):
        if self.m < 0:
            raise InputError("derivative order must be >= 0")
        if self.stencil not in STENCILS:
            raise InputError(f"stencil must be one of {STENCILS}")
        if max_derivative(self.form) > self.m:
            raise InputError(f"expression uses a derivative above order {self.m}")

    @classmethod
    def from_json(cls, doc: Mapping) -> "DifferenceOperator":
        try:
            return cls(int(doc.get("m", 0)), doc.get("stencil", "central"), parse_expr(doc["form"]))
        except KeyError:
            raise InputError("operator needs a 'form'") from None


def _forward(U: Sequence[Fraction], i: int, k: int) -> Fraction:
    return sum((-1) ** (k - j) * comb(k, j) * U[i + j] for j in range(k + 1))


def _window(scheme: str, i: int, k: int, n: int):
    """Start indices of the forward differences averaged by ``scheme`` at node i, or None."""
    if scheme == "forward":
        starts = (i,)
    elif scheme == "backward":
        starts = (i - k,)
    elif k % 2 == 0:
        starts = (i - k // 2,)
    else:
        starts = (i - (k - 1) // 2, i - (k + 1) // 2)
    if all(0 <= s and s + k < n for s in starts):
        return starts
    return None


def derivative(U: Sequence[Fraction], h: Fraction, k: int, stencil: str) -> tuple[Fraction, ...]:
    """k-th difference quotient at every node.

    Nodes where the interior scheme does not fit fall back to a forward
    stencil, and failing that to a backward one.
    """
    n = len(U)
    if k == 0:
        return tuple(U)
    if n < k + 1:
        raise StencilUnderflow(f"{n} nodes cannot carry a derivative of order {k}")
    out = []
    for i in range(n):
        for scheme in (stencil, "forward", "backward"):
            starts = _window(scheme, i, k, n)
            if starts is not None:
                break
        total = sum((_forward(U, s, k) for s in starts), Fraction(0))
        out.append(total / (len(starts) * h**k))
    return tuple(out)


def apply_operator(D: DifferenceOperator, g: Grid, U: GridFunction) -> GridFunction:
    if len(U) != g.n:
        raise InputError(f"grid function has {len(U)} values for {g.n} nodes")
    if g.n < D.m + 1:
        raise StencilUnderflow(f"{g.n} nodes cannot carry a derivative of order {D.m}")
    h = g.spacing
    slots = [derivative(U.values, h, k, D.stencil) for k in range(D.m + 1)]
    return GridFunction(tuple(evaluate(D.form, x, [s[i] for s in slots]) for i, x in enumerate(g.nodes)))


@dataclass(frozen=True)
class CandidateSpace:
    alphabet: tuple[Fraction, ...]
    candidates: tuple[GridFunction, ...]

    @classmethod
    def full(cls, alphabet: Sequence, n: int, cap: int | None = None) -> "CandidateSpace":
        levels = tuple(sorted({to_fraction(a) for a in alphabet}))
        cap = default_caps().elements if cap is None else cap
        if len(levels) ** n > cap:
            raise SizeCapExceeded(f"{len(levels)}^{n} candidates exceeds cap {cap}")
        return cls(levels, tuple(GridFunction(v) for v in itertools.product(levels, repeat=n)))

    @classmethod
    def listed(cls, alphabet: Sequence, rows: Sequence[Sequence], n: int, cap: int | None = None) -> "CandidateSpace":
        levels = tuple(sorted({to_fraction(a) for a in alphabet}))
        cap = default_caps().elements if cap is None else cap
        if len(rows) > cap:
            raise SizeCapExceeded(f"{len(rows)} candidates exceeds cap {cap}")
        funcs = []
        for row in rows:
            U = GridFunction.of(row)
            if len(U) != n:
                raise InputError(f"candidate {row!r} does not have {n} values")
            if any(v not in levels for v in U.values):
                raise InputError(f"candidate {row!r} uses a value outside the alphabet")
            funcs.append(U)
        if len(set(funcs)) != len(funcs):
            raise InputError("candidate list has duplicates")
        return cls(levels, tuple(funcs))


def candidate_label(U: GridFunction) -> str:
    return "U" + U.label()


@dataclass(frozen=True)
class GridProblem:
    grid: Grid
    operator: DifferenceOperator
    space: CandidateSpace
    rhs: GridFunction
    problem: EquationProblem
    candidates_by_label: Mapping[str, GridFunction]
    images_by_label: Mapping[str, GridFunction]

    @property
    def rhs_attained(self) -> bool:
        return self.rhs.label() in set(self.problem.T(x) for x in self.problem.X)


def build_grid_problem(D: DifferenceOperator, g: Grid, S: CandidateSpace, f: GridFunction, *, cap: int | None = None) -> GridProblem:
    """X = candidates, Y = attained images plus f under the pointwise order, F = <f]."""
    cap = default_caps().elements if cap is None else cap
    if len(S.candidates) > cap:
        raise SizeCapExceeded(f"{len(S.candidates)} candidates exceeds cap {cap}")
    if len(f) != g.n:
        raise InputError(f"right-hand side has {len(f)} values for {g.n} nodes")
    images = {}
    assignment = {}
    cands = {}
    for U in S.candidates:
        V = apply_operator(D, g, U)
        images.setdefault(V.label(), V)
        assignment[candidate_label(U)] = V.label()
        cands[candidate_label(U)] = U
    images.setdefault(f.label(), f)
    y_labels = list(images)
    Y = FinitePoset.from_predicate(y_labels, lambda a, b: images[a] <= images[b], cap=cap)
    T = GroundMap.from_pairs(tuple(cands), Y, assignment)
    return GridProblem(g, D, S, f, EquationProblem(T, f.label()), cands, images)


@dataclass(frozen=True)
class Classification:
    kind: str
    candidates: tuple[str, ...]
    below: tuple[str, ...] = ()
    above: tuple[str, ...] = ()

    def to_json(self) -> dict:
        doc = {"kind": self.kind, "candidates": list(self.candidates)}
        if self.kind == "generalized":
            doc["below"] = list(self.below)
            doc["above"] = list(self.above)
        return doc


def classify_solution(outcome: SolveOutcome, gp: GridProblem) -> Classification:
    """classical (principal cut, an actual candidate), generalized, or unsolvable.

    Classical solutions list every candidate in the solving class. A
    generalized solution is described by the classes whose principal cuts
    lie below it and above it.
    """
    if not outcome.solvable:
        return Classification("unsolvable", ())
    Q = outcome.quotient
    A = outcome.solution
    XT = Q.order
    for i, d in enumerate(XT.down):
        if d == A.mask:
            return Classification("classical", Q.members(XT.elements[i]))
    below, above = density_decomposition(outcome.xt_completion, A)
    return Classification("generalized", tuple(A.labels), tuple(below), tuple(above))


def grid_problem_from_json(doc: Mapping, *, cap: int | None = None) -> GridProblem:
    try:
        gdoc = doc["grid"]
        g = Grid(gdoc.get("lo", 0), gdoc.get("hi", 1), int(gdoc["n"]))
        D = DifferenceOperator.from_json(doc["operator"])
        alphabet = doc["alphabet"]
        f = GridFunction.of(doc["rhs"])
    except (KeyError, TypeError, AttributeError) as exc:
        raise InputError(f"malformed grid problem: {exc}") from None
    if "candidates" in doc:
        S = CandidateSpace.listed(alphabet, doc["candidates"], g.n, cap=cap)
    else:
        S = CandidateSpace.full(alphabet, g.n, cap=cap)
    return build_grid_problem(D, g, S, f, cap=cap)


def problem_summary(gp: GridProblem) -> dict:
    return {
        "candidates": len(gp.space.candidates),
        "attained_images": len({gp.problem.T(x) for x in gp.problem.X}),
        "rhs": gp.rhs.label(),
        "rhs_attained": gp.rhs_attained,
        "nodes": [format_value(x) for x in gp.grid.nodes],
    }


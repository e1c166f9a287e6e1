"""Solving T^#(A) = F in the completion of the pull-back quotient.

For a target cut F of Y the solver forms the lower witnesses (cuts U with
T^#(U) inside F) and the upper witnesses (cuts V with T^#(V) containing F).
The equation is solvable iff the sup of the lower images equals the inf of
the upper images in Y^#, and then the solution is both the sup of the lower
witnesses and the inf of the upper witnesses in X_T^#.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .completion import CompletionLattice, Cut, embed, enumerate_cuts, inf_cuts, sup_cuts
from .errors import InternalInconsistency
from .extension import ExtendedMap, cut_map
from .poset import is_oie, label_key
from .pullback import EquationProblem, QuotientSpace, normalize_target, quotient_by_kernel


class SolverContext:
    """Quotient, both completions and T^#, built once per problem."""

    __slots__ = ("problem", "quotient", "XT_completion", "Y_completion", "Tsharp", "images", "_by_image")

    def __init__(self, problem, quotient, XT_completion, Y_completion, Tsharp):
        self.problem = problem
        self.quotient = quotient
        self.XT_completion = XT_completion
        self.Y_completion = Y_completion
        self.Tsharp = Tsharp
        self.images = tuple(Tsharp.image_closure_mask(c.mask) for c in XT_completion.cuts)
        self._by_image = {}
        for i, m in enumerate(self.images):
            if m in self._by_image:
                raise InternalInconsistency("T^# is not injective on X_T^#")
            self._by_image[m] = i

    def tsharp(self, A: Cut) -> Cut:
        return Cut._trusted(self.problem.Y, self.images[self.XT_completion.index(A)])

    def target(self, F=None) -> Cut:
        return self.problem.F if F is None else normalize_target(self.problem.Y, F)


def build_context(P: EquationProblem, *, cap_elements: int | None = None, cap_cuts: int | None = None) -> SolverContext:
    Q = quotient_by_kernel(P)
    T_eq = Q.injection
    LX = enumerate_cuts(Q.order, cap_elements=cap_elements, cap_cuts=cap_cuts)
    LY = enumerate_cuts(P.Y, cap_elements=cap_elements, cap_cuts=cap_cuts)
    C = SolverContext(P, Q, LX, LY, ExtendedMap(T_eq, LX, LY))
    for U in Q.order.elements:
        if C.tsharp(embed(Q.order, U)) != embed(P.Y, T_eq(U)):
            raise InternalInconsistency(f"T^#(<{U!r}]) differs from <T(U)]")
    return C


def lower_aggregate(C: SolverContext, F=None) -> tuple[Cut, list[Cut]]:
    """sup in Y^# of T^#(U) over cuts U with T^#(U) inside F, plus those U."""
    F = C.target(F)
    cuts = C.XT_completion.cuts
    witnesses = [cuts[i] for i, m in enumerate(C.images) if m & ~F.mask == 0]
    images = [Cut._trusted(F.poset, C.images[C.XT_completion.index(U)]) for U in witnesses]
    return sup_cuts(C.Y_completion, images), witnesses


def upper_aggregate(C: SolverContext, F=None) -> tuple[Cut, list[Cut]]:
    """inf in Y^# of T^#(V) over cuts V with F inside T^#(V); empty family gives Y."""
    F = C.target(F)
    cuts = C.XT_completion.cuts
    witnesses = [cuts[i] for i, m in enumerate(C.images) if F.mask & ~m == 0]
    images = [Cut._trusted(F.poset, C.images[C.XT_completion.index(V)]) for V in witnesses]
    return inf_cuts(C.Y_completion, images), witnesses


@dataclass(frozen=True)
class ChainReport:
    """The four nested terms around F, lowest first."""

    lower_y: Cut
    tsharp_of_sup: Cut
    tsharp_of_inf: Cut
    upper_y: Cut
    F: Cut

    @property
    def strict_gap(self) -> bool:
        return self.lower_y != self.upper_y

    def to_json(self) -> dict:
        return {
            "sup_lower_images": list(self.lower_y.labels),
            "tsharp_of_sup_lower": list(self.tsharp_of_sup.labels),
            "tsharp_of_inf_upper": list(self.tsharp_of_inf.labels),
            "inf_upper_images": list(self.upper_y.labels),
            "F": list(self.F.labels),
            "strict_gap": self.strict_gap,
        }


def _chain(C: SolverContext, F: Cut, lower, lw, upper, uw) -> ChainReport:
    t_sup = C.tsharp(sup_cuts(C.XT_completion, lw))
    t_inf = C.tsharp(inf_cuts(C.XT_completion, uw))
    steps = [
        ("sup of lower images", lower, "T^#(sup lower witnesses)", t_sup),
        ("T^#(sup lower witnesses)", t_sup, "T^#(inf upper witnesses)", t_inf),
        ("T^#(inf upper witnesses)", t_inf, "inf of upper images", upper),
        ("sup of lower images", lower, "F", F),
        ("F", F, "inf of upper images", upper),
    ]
    for a_name, a, b_name, b in steps:
        if not a <= b:
            raise InternalInconsistency(f"{a_name} {a!r} is not inside {b_name} {b!r}")
    return ChainReport(lower, t_sup, t_inf, upper, F)


def check_chain(C: SolverContext, F=None) -> ChainReport:
    F = C.target(F)
    lower, lw = lower_aggregate(C, F)
    upper, uw = upper_aggregate(C, F)
    return _chain(C, F, lower, lw, upper, uw)


@dataclass(frozen=True)
class SolveOutcome:
    solvable: bool
    solution: Cut | None
    lower_witnesses: tuple[Cut, ...]
    upper_witnesses: tuple[Cut, ...]
    lower_aggregate: Cut
    upper_aggregate: Cut
    chain: ChainReport
    quotient: QuotientSpace = field(repr=False, compare=False)
    xt_completion: CompletionLattice = field(repr=False, compare=False)

    @property
    def F(self) -> Cut:
        return self.chain.F

    def solution_classes(self) -> list[list] | None:
        if self.solution is None:
            return None
        return [list(self.quotient.members(rep)) for rep in self.solution.labels]

    def to_json(self) -> dict:
        return {
            "solvable": self.solvable,
            "F": list(self.F.labels),
            "solution": self.solution_classes(),
            "lower_aggregate": list(self.lower_aggregate.labels),
            "upper_aggregate": list(self.upper_aggregate.labels),
            "witness_counts": {"lower": len(self.lower_witnesses), "upper": len(self.upper_witnesses)},
            "chain": self.chain.to_json(),
        }


def solve(C: SolverContext, F=None) -> SolveOutcome:
    F = C.target(F)
    lower, lw = lower_aggregate(C, F)
    upper, uw = upper_aggregate(C, F)
    chain = _chain(C, F, lower, lw, upper, uw)
    solvable = lower == upper
    solution = None
    if solvable:
        from_below = sup_cuts(C.XT_completion, lw)
        from_above = inf_cuts(C.XT_completion, uw)
        if from_below != from_above:
            raise InternalInconsistency(f"sup of lower witnesses {from_below!r} != inf of upper witnesses {from_above!r}")
        if C.tsharp(from_below) != F:
            raise InternalInconsistency(f"T^#({from_below!r}) does not equal F")
        matches = sum(1 for m in C.images if m == F.mask)
        if matches != 1:
            raise InternalInconsistency(f"{matches} cuts map onto F, expected exactly one")
        solution = from_below
    return SolveOutcome(solvable, solution, tuple(lw), tuple(uw), lower, upper, chain, C.quotient, C.XT_completion)


def oracle_solve(C: SolverContext, F=None) -> Cut | None:
    """Brute force: try every cut of X_T and recompute T^# from scratch."""
    F = C.target(F)
    Y = C.problem.Y
    T_eq = C.quotient.injection
    found = None
    for A in C.XT_completion.cuts:
        image = 0
        for i in range(T_eq.domain_poset.size):
            if A.mask >> i & 1:
                image |= 1 << T_eq.images[i]
        if Y.lower_mask(Y.upper_mask(image)) == F.mask:
            if found is not None:
                raise InternalInconsistency("two distinct cuts solve the equation")
            found = A
    return found


@dataclass(frozen=True)
class GlobalReport:
    principal_attained: bool
    all_attained: bool
    unattained_principal: tuple
    unattained_cuts: tuple[tuple, ...]
    order_isomorphism: bool | None

    def to_json(self) -> dict:
        return {
            "principal_cuts_attained": self.principal_attained,
            "all_cuts_attained": self.all_attained,
            "unattained_principal": list(self.unattained_principal),
            "unattained_cuts": [list(c) for c in self.unattained_cuts],
            "order_isomorphism": self.order_isomorphism,
        }


def global_solvability(C: SolverContext) -> GlobalReport:
    """Is every principal cut of Y hit by T^#, and is every cut hit? The two must agree."""
    Y = C.problem.Y
    attained = set(C.images)
    missing_principal = tuple(
        sorted((y for i, y in enumerate(Y.elements) if Y.down[i] not in attained), key=label_key)
    )
    missing_cuts = tuple(c.labels for c in C.Y_completion.cuts if c.mask not in attained)
    principal_ok = not missing_principal
    all_ok = not missing_cuts
    if principal_ok != all_ok:
        raise InternalInconsistency("principal-cut surjectivity and full surjectivity disagree")
    oi = None
    if all_ok:
        phi = cut_map(C.Tsharp)
        oi = is_oie(phi) and phi.is_surjective()
        if not oi:
            raise InternalInconsistency("T^# is surjective but not an order isomorphism")
    return GlobalReport(principal_ok, all_ok, missing_principal, missing_cuts, oi)


def solve_all(C: SolverContext) -> list[SolveOutcome]:
    """solve for every cut F of Y, in the canonical cut order."""
    return [solve(C, F) for F in C.Y_completion.cuts]


"""Kernel quotients and pull-back orders.

Given T : X -> Y with Y a poset, X is partitioned by "same image", the
quotient X_T carries the order pulled back along the induced injection
T_~ : X_T -> Y, and T_~ becomes an order embedding. The generalized form
replaces X_T by any set Z mapped onto X_T by a surjection lambda.
"""

from __future__ import annotations

from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .completion import Cut, embed
from .errors import InputError, InternalInconsistency, NotSurjective, PosetMismatch, UnknownElement
from .poset import (
    FinitePoset,
    GroundMap,
    Subset,
    check_axioms,
    domain_from_json,
    is_increasing,
    is_oie,
    label_key,
    poset_from_json,
    poset_to_json,
)


def normalize_target(Y: FinitePoset, F) -> Cut:
    """An element f of Y becomes the principal cut <f]; cuts and subsets pass through checked."""
    if isinstance(F, Cut):
        if F.poset != Y:
            raise PosetMismatch("target cut belongs to a different poset")
        return F
    if isinstance(F, Subset):
        if F.poset != Y:
            raise PosetMismatch("target subset belongs to a different poset")
        return Cut(F)
    try:
        if F in Y:
            return embed(Y, F)
    except TypeError:
        pass
    return Cut.of(Y, F)


class EquationProblem:
    """The data of T(A) = F: a finite set X, a poset Y, T : X -> Y and F in Y^#."""

    __slots__ = ("X", "Y", "T", "F")

    def __init__(self, T: GroundMap, F):
        if isinstance(T.domain, FinitePoset):
            T = GroundMap(T.domain.elements, T.codomain, T.images)
        if not T.domain:
            raise InputError("X must be nonempty")
        self.X = T.domain
        self.Y = T.codomain
        self.T = T
        self.F = normalize_target(self.Y, F)

    @classmethod
    def create(cls, X: Sequence, Y: FinitePoset, assignment, F) -> "EquationProblem":
        return cls(GroundMap.from_pairs(tuple(X), Y, assignment), F)

    def with_target(self, F) -> "EquationProblem":
        return EquationProblem(self.T, F)

    def __repr__(self):
        return f"EquationProblem(X={list(self.X)!r}, T={self.T.pairs()!r}, F={list(self.F.labels)!r})"


class QuotientSpace:
    """X / ~_T with canonical representatives and the pull-back order."""

    def __init__(self, problem: EquationProblem, classes: Sequence[frozenset], images: Sequence[int]):
        self.problem = problem
        self.classes = tuple(classes)
        self.representatives = tuple(min(c, key=label_key) for c in self.classes)
        self.images = tuple(images)
        self._class_of = {x: i for i, c in enumerate(self.classes) for x in c}

    def __len__(self):
        return len(self.classes)

    def class_index(self, x) -> int:
        try:
            return self._class_of[x]
        except KeyError:
            raise UnknownElement(f"{x!r} is not an element of X") from None

    def members(self, rep) -> tuple:
        """Sorted members of the class whose representative is ``rep``."""
        i = self.order.index(rep)
        return tuple(sorted(self.classes[i], key=label_key))

    @cached_property
    def order(self) -> FinitePoset:
        return pullback_order(self)

    @cached_property
    def injection(self) -> GroundMap:
        return induced_injection(self)


def quotient_by_kernel(P: EquationProblem) -> QuotientSpace:
    groups: dict[int, list] = {}
    for x, j in zip(P.X, P.T.images):
        groups.setdefault(j, []).append(x)
    keyed = sorted(groups.items(), key=lambda kv: label_key(min(kv[1], key=label_key)))
    return QuotientSpace(P, [frozenset(members) for _, members in keyed], [j for j, _ in keyed])


def induced_injection(Q: QuotientSpace) -> GroundMap:
    """T_~ : X_T -> Y, sending each class to the shared image of its members."""
    T = Q.problem.T
    for c, j in zip(Q.classes, Q.images):
        for x in c:
            if T.images[T._dindex[x]] != j:
                raise InternalInconsistency(f"class of {x!r} is not T-constant")
    if len(set(Q.images)) != len(Q.images):
        raise InternalInconsistency("induced map is not injective")
    return GroundMap(Q.order, Q.problem.Y, Q.images)


def pullback_order(Q: QuotientSpace) -> FinitePoset:
    """U <= V iff T_~(U) <= T_~(V) in Y."""
    Y = Q.problem.Y
    n = len(Q.classes)
    down = [0] * n
    for j, yj in enumerate(Q.images):
        for i, yi in enumerate(Q.images):
            if Y.leq_idx(yi, yj):
                down[j] |= 1 << i
    p = FinitePoset(Q.representatives, down)
    check_axioms(p)
    if not is_oie(GroundMap(p, Y, Q.images)):
        raise InternalInconsistency("T_~ is not an order embedding under the pull-back order")
    return p


def generalized_pullback_order(Z: Sequence, T_lam: GroundMap) -> FinitePoset:
    """z <= z' iff z = z' or T_lam(z) is strictly below T_lam(z')."""
    Z = tuple(Z)
    if Z != tuple(T_lam.domain_labels):
        raise InputError("Z does not match the domain of T_lambda")
    Y = T_lam.codomain
    n = len(Z)
    down = [0] * n
    for j, yj in enumerate(T_lam.images):
        down[j] |= 1 << j
        for i, yi in enumerate(T_lam.images):
            if yi != yj and Y.leq_idx(yi, yj):
                down[j] |= 1 << i
    p = FinitePoset(Z, down)
    check_axioms(p)
    return p


class FactoredProblem:
    """T_lambda = T_~ o lambda on a set Z, ordered by the strict-comparison rule."""

    __slots__ = ("problem", "quotient", "Z", "lam", "T_lam", "order_Z")

    def __init__(self, problem, quotient, Z, lam, T_lam, order_Z):
        self.problem = problem
        self.quotient = quotient
        self.Z = Z
        self.lam = lam
        self.T_lam = T_lam
        self.order_Z = order_Z

    def as_problem(self, F=None) -> EquationProblem:
        """The equation T_lambda(A) = F over Z, ready for the solver pipeline."""
        T = GroundMap(self.Z, self.T_lam.codomain, self.T_lam.images)
        return EquationProblem(T, self.problem.F if F is None else F)


def factor_problem(P: EquationProblem, Z: Sequence, lam: Mapping | Iterable[tuple], Q: QuotientSpace | None = None) -> FactoredProblem:
    """Compose T_lambda = T_~ o lambda and build the order on Z.

    ``lam`` sends each z to a class of X_T, named by its representative or
    by any member of X.
    """
    Q = quotient_by_kernel(P) if Q is None else Q
    Z = tuple(Z)
    XT = Q.order
    items = lam.items() if isinstance(lam, Mapping) else lam
    named = {}
    for z, cls_name in items:
        named[z] = Q.representatives[Q.class_index(cls_name)]
    lam_map = GroundMap.from_pairs(Z, XT, named)
    if not lam_map.is_surjective():
        hit = set(lam_map.images)
        missed = [r for i, r in enumerate(XT.elements) if i not in hit]
        raise NotSurjective(f"lambda misses class {missed[0]!r}")
    T_eq = Q.injection
    T_images = [T_eq.images[i] for i in lam_map.images]
    provisional = GroundMap(Z, P.Y, T_images)
    order_Z = generalized_pullback_order(Z, provisional)
    lam_map = GroundMap(order_Z, XT, lam_map.images)
    T_lam = GroundMap(order_Z, P.Y, T_images)
    if not is_oie(T_eq):
        raise InternalInconsistency("T_~ is not an OIE")
    if not is_increasing(T_lam):
        raise InternalInconsistency("T_lambda is not increasing on Z")
    if not is_increasing(lam_map):
        raise InternalInconsistency("lambda is not increasing")
    return FactoredProblem(P, Q, Z, lam_map, T_lam, order_Z)


def target_to_json(F: Cut) -> dict:
    return {"cut": list(F.labels)}


def problem_to_json(P: EquationProblem, F_element=None) -> dict:
    F = {"element": F_element} if F_element is not None else target_to_json(P.F)
    return {
        "X": list(P.X),
        "Y": poset_to_json(P.Y),
        "T": [list(pair) for pair in P.T.pairs()],
        "F": F,
    }


def target_from_json(Y: FinitePoset, doc) -> Cut:
    if not isinstance(doc, Mapping) or len(doc) != 1:
        raise InputError("F must be {'element': y} or {'cut': [...]}")
    if "element" in doc:
        return embed(Y, doc["element"])
    if "cut" in doc:
        return Cut.of(Y, doc["cut"])
    raise InputError("F must be {'element': y} or {'cut': [...]}")


def problem_from_json(doc, *, cap: int | None = None) -> EquationProblem:
    if not isinstance(doc, Mapping):
        raise InputError("problem document must be a JSON object")
    try:
        X = domain_from_json(doc["X"], cap=cap)
        Y = poset_from_json(doc["Y"], cap=cap)
        pairs = [tuple(pair) for pair in doc["T"]]
        F = target_from_json(Y, doc["F"])
    except KeyError as exc:
        raise InputError(f"problem document is missing {exc}") from None
    except TypeError as exc:
        raise InputError(f"malformed problem document: {exc}") from None
    if isinstance(X, FinitePoset):
        X = X.elements
    return EquationProblem(GroundMap.from_pairs(X, Y, pairs), F)


def factored_from_json(doc, P: EquationProblem | None = None, *, cap: int | None = None) -> FactoredProblem:
    P = problem_from_json(doc, cap=cap) if P is None else P
    try:
        Z = list(doc["Z"])
        lam = [tuple(pair) for pair in doc["lambda"]]
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed factored problem: {exc}") from None
    return factor_problem(P, Z, lam)

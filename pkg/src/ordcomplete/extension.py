"""Extending maps between posets to maps between their completions."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .completion import CompletionLattice, Cut, _check_member, embed, enumerate_cuts
from .config import DEFAULT_CAP_POWERSET_BITS
from .errors import (
    EmptySubset,
    InputError,
    NotCompleteLattice,
    NotIncreasing,
    PosetMismatch,
    SizeCapExceeded,
)
from .poset import GroundMap, Subset, infimum, is_complete_lattice, is_increasing, is_oie, supremum

NA = "n/a"


class ExtendedMap:
    """phi^# for a map phi : X -> Y between posets."""

    __slots__ = ("ground", "domain_completion", "codomain_completion")

    def __init__(self, ground: GroundMap, domain_completion: CompletionLattice, codomain_completion: CompletionLattice):
        if ground.domain != domain_completion.base:
            raise PosetMismatch("map domain differs from the domain completion's base")
        if ground.codomain != codomain_completion.base:
            raise PosetMismatch("map codomain differs from the codomain completion's base")
        self.ground = ground
        self.domain_completion = domain_completion
        self.codomain_completion = codomain_completion

    @classmethod
    def of(cls, ground: GroundMap, **caps) -> "ExtendedMap":
        return cls(ground, enumerate_cuts(ground.domain_poset, **caps), enumerate_cuts(ground.codomain, **caps))

    @property
    def X(self):
        return self.domain_completion.base

    @property
    def Y(self):
        return self.codomain_completion.base

    def image_closure_mask(self, mask: int) -> int:
        return self.Y.closure_mask(self.ground.image_mask(mask))


def extend_on_subset(E: ExtendedMap, A: Subset) -> Cut:
    """(phi(A))^{ul} in Y^#."""
    _check_member(E.X, A)
    return Cut._trusted(E.Y, E.image_closure_mask(A.mask))


def extend_on_cut(E: ExtendedMap, A: Cut) -> Cut:
    if A not in E.domain_completion:
        raise PosetMismatch(f"{A!r} is not a cut of the map's domain")
    return Cut._trusted(E.Y, E.image_closure_mask(A.mask))


def cut_map(E: ExtendedMap) -> GroundMap:
    """phi^# restricted to X^#, as a GroundMap between the completion posets."""
    dom = E.domain_completion
    cod = E.codomain_completion
    images = [cod.index_of_mask(E.image_closure_mask(c.mask)) for c in dom.cuts]
    return GroundMap(dom.as_poset(), cod.as_poset(), images)


@dataclass(frozen=True)
class ExtensionReport:
    subset_monotone: bool
    diagram_commutes: Union[bool, str]
    oie_preserved: Union[bool, str]

    def to_json(self) -> dict:
        return {
            "subset_monotone": self.subset_monotone,
            "diagram_commutes": self.diagram_commutes,
            "oie_preserved": self.oie_preserved,
        }


def check_extension_properties(E: ExtendedMap, *, max_bits: int = DEFAULT_CAP_POWERSET_BITS) -> ExtensionReport:
    """Exhaustively check the three extension properties.

    Monotonicity on P(X) is checked on every pair A, A + {x}; since subset
    inclusion is generated by such steps this covers every pair A <= B.
    The diagram and OIE clauses are "n/a" when phi is not increasing or
    not an OIE respectively.
    """
    n = E.X.size
    if n > max_bits:
        raise SizeCapExceeded(f"P(X) has 2^{n} members, cap is 2^{max_bits}")
    images = [E.image_closure_mask(m) for m in range(1 << n)]
    monotone = True
    for m in range(1 << n):
        im = images[m]
        for i in range(n):
            bigger = m | (1 << i)
            if bigger != m and im & ~images[bigger]:
                monotone = False
                break
        if not monotone:
            break

    if is_increasing(E.ground):
        commutes = all(
            extend_on_cut(E, embed(E.X, x)) == embed(E.Y, E.ground(x)) for x in E.X.elements
        )
    else:
        commutes = NA

    if is_oie(E.ground):
        oie = is_oie(cut_map(E))
    else:
        oie = NA
    return ExtensionReport(monotone, commutes, oie)


@dataclass(frozen=True)
class Sandwich:
    """mu(inf E) <= inf mu(E) <= sup mu(E) <= mu(sup E)."""

    lhs: object
    inf_image: object
    sup_image: object
    rhs: object
    holds: bool


def monotone_sandwich(mu: GroundMap, E: Subset) -> Sandwich:
    M = mu.domain_poset
    N = mu.codomain
    if E.poset != M:
        raise PosetMismatch("E is not a subset of the map's domain")
    if not len(E):
        raise EmptySubset("E must be nonempty")
    if not is_increasing(mu):
        raise NotIncreasing("mu is not increasing")
    for name, p in (("domain", M), ("codomain", N)):
        if not is_complete_lattice(p):
            raise NotCompleteLattice(f"{name} is not a complete lattice")
    image = Subset(N, mu.image_mask(E.mask))
    lhs = mu(infimum(M, E))
    rhs = mu(supremum(M, E))
    lo = infimum(N, image)
    hi = supremum(N, image)
    if lo is None or hi is None:
        raise InputError("complete lattice lacks an infimum or supremum")
    holds = N.leq(lhs, lo) and N.leq(lo, hi) and N.leq(hi, rhs)
    return Sandwich(lhs, lo, hi, rhs, holds)


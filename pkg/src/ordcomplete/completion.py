"""Cuts and the Dedekind-MacNeille completion of a finite poset."""

from __future__ import annotations

from typing import Iterable, Sequence

from .config import default_caps
from .errors import InternalInconsistency, NotACut, PosetMismatch, SizeCapExceeded
from .poset import FinitePoset, Subset, _dot_id, label_key, popcount, poset_to_json


class Cut:
    """A subset A of a poset with A^{ul} = A."""

    __slots__ = ("carrier",)

    def __init__(self, carrier: Subset):
        p = carrier.poset
        if p.closure_mask(carrier.mask) != carrier.mask:
            raise NotACut(f"{list(carrier.labels)!r} is not a cut")
        self.carrier = carrier

    @classmethod
    def _trusted(cls, poset: FinitePoset, mask: int) -> "Cut":
        c = object.__new__(cls)
        c.carrier = Subset(poset, mask)
        return c

    @classmethod
    def of(cls, poset: FinitePoset, labels: Iterable) -> "Cut":
        return cls(Subset.of(poset, labels))

    @property
    def poset(self) -> FinitePoset:
        return self.carrier.poset

    @property
    def mask(self) -> int:
        return self.carrier.mask

    @property
    def labels(self) -> tuple:
        return self.carrier.labels

    def __len__(self):
        return len(self.carrier)

    def __contains__(self, label):
        return label in self.carrier

    def __eq__(self, other):
        if not isinstance(other, Cut):
            return NotImplemented
        return self.carrier == other.carrier

    def __hash__(self):
        return hash(self.carrier)

    def __le__(self, other: "Cut") -> bool:
        return self.carrier <= other.carrier

    def __repr__(self):
        return f"Cut({list(self.labels)!r})"


def _cut_sort_key(p: FinitePoset, mask: int):
    return (popcount(mask), tuple(label_key(x) for x in p.labels_of(mask)))


def _check_member(p: FinitePoset, A) -> None:
    if A.poset is not p and A.poset != p:
        raise PosetMismatch("argument is bound to a different poset")


def cut_closure(p: FinitePoset, A: Subset) -> Cut:
    """A^{ul}: the least cut containing A."""
    _check_member(p, A)
    return Cut._trusted(p, p.closure_mask(A.mask))


def is_cut(p: FinitePoset, A: Subset) -> bool:
    _check_member(p, A)
    return p.closure_mask(A.mask) == A.mask


def embed(p: FinitePoset, x) -> Cut:
    """The principal cut <x] = {x}^{ul}."""
    return Cut._trusted(p, p.down[p.index(x)])


class CompletionLattice:
    """All cuts of ``base`` in canonical order, ordered by inclusion."""

    __slots__ = ("base", "cuts", "_pos")

    def __init__(self, base: FinitePoset, masks: Sequence[int]):
        self.base = base
        ordered = sorted(set(masks), key=lambda m: _cut_sort_key(base, m))
        self.cuts = tuple(Cut._trusted(base, m) for m in ordered)
        self._pos = {m: i for i, m in enumerate(ordered)}

    def __len__(self):
        return len(self.cuts)

    def __iter__(self):
        return iter(self.cuts)

    def __contains__(self, cut) -> bool:
        return isinstance(cut, Cut) and cut.poset == self.base and cut.mask in self._pos

    def index(self, cut: Cut) -> int:
        _check_member(self.base, cut)
        try:
            return self._pos[cut.mask]
        except KeyError:
            raise NotACut(f"{cut!r} is not in the lattice") from None

    def index_of_mask(self, mask: int) -> int:
        return self._pos[mask]

    @property
    def bottom(self) -> Cut:
        return self.cuts[0]

    @property
    def top(self) -> Cut:
        return self.cuts[-1]

    def leq(self, i: int, j: int) -> bool:
        a, b = self.cuts[i].mask, self.cuts[j].mask
        return a & ~b == 0

    def covers(self) -> list[tuple[int, int]]:
        n = len(self.cuts)
        masks = [c.mask for c in self.cuts]
        out = []
        for i in range(n):
            above = [j for j in range(n) if j != i and masks[i] & ~masks[j] == 0]
            for j in above:
                if not any(k != j and masks[k] & ~masks[j] == 0 for k in above):
                    out.append((i, j))
        return out

    def as_poset(self) -> FinitePoset:
        """The completion as a FinitePoset whose labels are carrier tuples."""
        labels = [c.labels for c in self.cuts]
        masks = [c.mask for c in self.cuts]
        down = []
        for b in masks:
            d = 0
            for j, a in enumerate(masks):
                if a & ~b == 0:
                    d |= 1 << j
            down.append(d)
        return FinitePoset(labels, down)

    def extremal_report(self) -> dict:
        """Which of the empty set and the whole ground set are cuts."""
        return {"empty_is_cut": 0 in self._pos, "full_is_cut": self.base.full_mask in self._pos}

    def __repr__(self):
        return f"CompletionLattice({[list(c.labels) for c in self.cuts]!r})"


def enumerate_cuts(p: FinitePoset, *, cap_elements: int | None = None, cap_cuts: int | None = None) -> CompletionLattice:
    """All cuts of ``p``.

    Cuts are the closed sets of A -> A^{ul}, which are exactly the
    intersections of principal cuts <x] (the whole set being the empty
    intersection). The family is built by closing the generators under
    intersection, so the cost tracks the number of cuts rather than 2^|X|.
    """
    caps = default_caps()
    cap_elements = caps.elements if cap_elements is None else cap_elements
    cap_cuts = caps.cuts if cap_cuts is None else cap_cuts
    if p.size > cap_elements:
        raise SizeCapExceeded(f"{p.size} elements exceeds cap {cap_elements}")
    generators = sorted(set(p.down))
    found = {p.full_mask}
    stack = [p.full_mask]
    while stack:
        c = stack.pop()
        for g in generators:
            m = c & g
            if m not in found:
                found.add(m)
                if len(found) > cap_cuts:
                    raise SizeCapExceeded(f"more than {cap_cuts} cuts")
                stack.append(m)
    return CompletionLattice(p, found)


def _family_masks(L: CompletionLattice, family: Iterable[Cut]) -> list[int]:
    masks = []
    for c in family:
        _check_member(L.base, c)
        masks.append(c.mask)
    return masks


def sup_cuts(L: CompletionLattice, family: Iterable[Cut]) -> Cut:
    """(union of the family)^{ul}; the empty family gives the bottom cut."""
    u = 0
    for m in _family_masks(L, family):
        u |= m
    return Cut._trusted(L.base, L.base.closure_mask(u))


def inf_cuts(L: CompletionLattice, family: Iterable[Cut]) -> Cut:
    """Intersection of the family; the empty family gives the whole set."""
    i = L.base.full_mask
    for m in _family_masks(L, family):
        i &= m
    return Cut._trusted(L.base, i)


def density_decomposition(L: CompletionLattice, A: Cut) -> tuple[list, list]:
    """Elements x with <x] inside A, and those with A inside <x]."""
    _check_member(L.base, A)
    p = L.base
    below, above = [], []
    for i, d in enumerate(p.down):
        if d & ~A.mask == 0:
            below.append(p.elements[i])
        if A.mask & ~d == 0:
            above.append(p.elements[i])
    return sorted(below, key=label_key), sorted(above, key=label_key)


def generated_cut(L: CompletionLattice, A: Subset) -> Cut:
    """A^{ul}, computed as a closure and as the sup of principal cuts; both must agree."""
    _check_member(L.base, A)
    direct = cut_closure(L.base, A)
    via_sup = sup_cuts(L, [embed(L.base, x) for x in A.labels])
    if direct != via_sup:
        raise InternalInconsistency(f"closure {direct!r} differs from sup of principal cuts {via_sup!r}")
    return direct


def lattice_to_json(L: CompletionLattice) -> dict:
    return {
        "base": poset_to_json(L.base),
        "cuts": [list(c.labels) for c in L.cuts],
        "covers": [list(pair) for pair in L.covers()],
        **L.extremal_report(),
    }


def lattice_to_dot(L: CompletionLattice, name: str = "completion") -> str:
    lines = [f"digraph {_dot_id(name)} {{", "  rankdir=BT;"]
    for i, c in enumerate(L.cuts):
        text = "{" + ",".join(label_key(x) for x in c.labels) + "}"
        lines.append(f"  c{i} [label={_dot_id(text)}];")
    for i, j in L.covers():
        lines.append(f"  c{i} -> c{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"


"""Finite posets, subsets and the upper/lower bound operators.

Relations are stored as Python ints used as bit sets: ``down[i]`` has bit
``j`` set iff ``elements[j] <= elements[i]`` and ``up[i]`` is the transpose.
All objects are immutable once built.
"""

from __future__ import annotations

from typing import Hashable, Iterable, Iterator, Mapping, Sequence

from .config import default_caps
from .errors import (
    CycleError,
    DuplicateLabelError,
    InputError,
    PosetMismatch,
    SizeCapExceeded,
    UnknownElement,
)

Label = Hashable


def label_key(label) -> str:
    """Sort key giving the canonical label-lexicographic order."""
    return str(label)


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


class FinitePoset:
    """A finite set of labels with a validated partial order.

    Build instances with :func:`validate_poset` (generator pairs) or
    :meth:`from_predicate`; the constructor trusts its input.
    """

    __slots__ = ("elements", "down", "up", "_index", "_hash")

    def __init__(self, elements: Sequence[Label], down: Sequence[int]):
        self.elements = tuple(elements)
        self.down = tuple(down)
        n = len(self.elements)
        up = [0] * n
        for i, d in enumerate(self.down):
            for j in iter_bits(d):
                up[j] |= 1 << i
        self.up = tuple(up)
        self._index = {x: i for i, x in enumerate(self.elements)}
        self._hash = hash((self.elements, self.down))

    @classmethod
    def from_predicate(cls, elements: Sequence[Label], leq, *, cap: int | None = None) -> "FinitePoset":
        """Build from a ``leq(a, b)`` predicate and check the poset axioms."""
        elements = tuple(elements)
        _check_labels(elements, cap)
        n = len(elements)
        down = [0] * n
        for i, b in enumerate(elements):
            for j, a in enumerate(elements):
                if leq(a, b):
                    down[i] |= 1 << j
        p = cls(elements, down)
        check_axioms(p)
        return p

    @property
    def size(self) -> int:
        return len(self.elements)

    @property
    def full_mask(self) -> int:
        return (1 << len(self.elements)) - 1

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, label) -> bool:
        return label in self._index

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, FinitePoset):
            return NotImplemented
        return self._hash == other._hash and self.elements == other.elements and self.down == other.down

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"FinitePoset({list(self.elements)!r}, covers={self.cover_pairs()!r})"

    def index(self, label) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise UnknownElement(f"{label!r} is not an element of the poset") from None

    def leq(self, a, b) -> bool:
        return bool(self.down[self.index(b)] >> self.index(a) & 1)

    def leq_idx(self, i: int, j: int) -> bool:
        return bool(self.down[j] >> i & 1)

    def mask_of(self, labels: Iterable[Label]) -> int:
        m = 0
        for x in labels:
            m |= 1 << self.index(x)
        return m

    def labels_of(self, mask: int) -> tuple:
        return tuple(sorted((self.elements[i] for i in iter_bits(mask)), key=label_key))

    def upper_mask(self, mask: int) -> int:
        """Bit set of common upper bounds; the empty set maps to everything."""
        out = self.full_mask
        up = self.up
        for i in iter_bits(mask):
            out &= up[i]
            if not out:
                break
        return out

    def lower_mask(self, mask: int) -> int:
        out = self.full_mask
        down = self.down
        for i in iter_bits(mask):
            out &= down[i]
            if not out:
                break
        return out

    def closure_mask(self, mask: int) -> int:
        return self.lower_mask(self.upper_mask(mask))

    def relation_pairs(self) -> list[tuple]:
        """All (a, b) with a <= b, reflexive pairs included."""
        return [(self.elements[j], b) for i, b in enumerate(self.elements) for j in iter_bits(self.down[i])]

    def covers(self) -> list[tuple[int, int]]:
        """Index pairs (i, j) with i < j and nothing strictly between."""
        strict_up = [u & ~(1 << i) for i, u in enumerate(self.up)]
        out = []
        for i, su in enumerate(strict_up):
            above = 0
            for k in iter_bits(su):
                above |= strict_up[k]
            for j in iter_bits(su & ~above):
                out.append((i, j))
        return out

    def cover_pairs(self) -> list[tuple]:
        pairs = [(self.elements[i], self.elements[j]) for i, j in self.covers()]
        return sorted(pairs, key=lambda p: (label_key(p[0]), label_key(p[1])))

    def minimum(self):
        """The least element, or None."""
        for i, u in enumerate(self.up):
            if u == self.full_mask:
                return self.elements[i]
        return None

    def maximum(self):
        for i, d in enumerate(self.down):
            if d == self.full_mask:
                return self.elements[i]
        return None


def _check_labels(elements: Sequence[Label], cap: int | None) -> None:
    seen = set()
    for x in elements:
        if x in seen:
            raise DuplicateLabelError(f"duplicate element label {x!r}")
        seen.add(x)
    cap = default_caps().elements if cap is None else cap
    if len(elements) > cap:
        raise SizeCapExceeded(f"{len(elements)} elements exceeds cap {cap}")


def check_axioms(p: FinitePoset) -> None:
    """Raise unless the stored relation is reflexive, antisymmetric and transitive."""
    for i, d in enumerate(p.down):
        if not d >> i & 1:
            raise InputError(f"relation is not reflexive at {p.elements[i]!r}")
        for j in iter_bits(d):
            if j != i and p.down[j] >> i & 1:
                raise CycleError(f"{p.elements[i]!r} and {p.elements[j]!r} are mutually below each other")
            if p.down[j] & ~d:
                raise InputError(f"relation is not transitive below {p.elements[i]!r}")


def validate_poset(elements: Sequence[Label], relation_pairs: Iterable[tuple] = (), *, cap: int | None = None) -> FinitePoset:
    """Close generator pairs reflexively and transitively, then check antisymmetry.

    >>> validate_poset("abc", [("a", "b"), ("b", "c")]).leq("a", "c")
    True
    """
    elements = tuple(elements)
    _check_labels(elements, cap)
    index = {x: i for i, x in enumerate(elements)}
    n = len(elements)
    reach = [1 << i for i in range(n)]  # reach[i]: bits of j with i <= j
    for a, b in relation_pairs:
        if a not in index:
            raise UnknownElement(f"relation references undeclared element {a!r}")
        if b not in index:
            raise UnknownElement(f"relation references undeclared element {b!r}")
        reach[index[a]] |= 1 << index[b]
    for k in range(n):
        rk = reach[k]
        bit = 1 << k
        for i in range(n):
            if reach[i] & bit:
                reach[i] |= rk
    for i in range(n):
        for j in iter_bits(reach[i] & ~(1 << i)):
            if reach[j] >> i & 1:
                raise CycleError(f"{elements[i]!r} <= {elements[j]!r} <= {elements[i]!r}")
    down = [0] * n
    for i in range(n):
        for j in iter_bits(reach[i]):
            down[j] |= 1 << i
    return FinitePoset(elements, down)


class Subset:
    """A set of elements of one specific poset."""

    __slots__ = ("poset", "mask")

    def __init__(self, poset: FinitePoset, mask: int = 0):
        if mask < 0 or mask >> poset.size:
            raise InputError("subset mask references indices outside the poset")
        self.poset = poset
        self.mask = mask

    @classmethod
    def of(cls, poset: FinitePoset, labels: Iterable[Label] = ()) -> "Subset":
        return cls(poset, poset.mask_of(labels))

    @property
    def labels(self) -> tuple:
        return self.poset.labels_of(self.mask)

    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(iter_bits(self.mask))

    def __len__(self):
        return popcount(self.mask)

    def __iter__(self):
        return iter(self.labels)

    def __contains__(self, label):
        return label in self.poset and bool(self.mask >> self.poset.index(label) & 1)

    def __eq__(self, other):
        if not isinstance(other, Subset):
            return NotImplemented
        return self.mask == other.mask and self.poset == other.poset

    def __hash__(self):
        return hash((self.poset, self.mask))

    def __le__(self, other: "Subset") -> bool:
        _same_poset(self.poset, other)
        return self.mask & ~other.mask == 0

    def issubset(self, other: "Subset") -> bool:
        return self <= other

    def __repr__(self):
        return f"Subset({list(self.labels)!r})"


def _same_poset(p: FinitePoset, A: Subset) -> None:
    if A.poset is not p and A.poset != p:
        raise PosetMismatch("subset is bound to a different poset")


def principal_down(p: FinitePoset, a) -> Subset:
    return Subset(p, p.down[p.index(a)])


def principal_up(p: FinitePoset, a) -> Subset:
    return Subset(p, p.up[p.index(a)])


def upper_bounds(p: FinitePoset, A: Subset) -> Subset:
    """A^u, the common upper bounds of A. The empty set has every element."""
    _same_poset(p, A)
    return Subset(p, p.upper_mask(A.mask))


def lower_bounds(p: FinitePoset, A: Subset) -> Subset:
    _same_poset(p, A)
    return Subset(p, p.lower_mask(A.mask))


def supremum(p: FinitePoset, A: Subset):
    """Least upper bound of A in p, or None if it does not exist."""
    _same_poset(p, A)
    ub = p.upper_mask(A.mask)
    for i in iter_bits(ub):
        if p.up[i] & ub == ub:
            return p.elements[i]
    return None


def infimum(p: FinitePoset, A: Subset):
    _same_poset(p, A)
    lb = p.lower_mask(A.mask)
    for i in iter_bits(lb):
        if p.down[i] & lb == lb:
            return p.elements[i]
    return None


def is_complete_lattice(p: FinitePoset) -> bool:
    # Finite and nonempty with all binary joins and meets suffices.
    if p.size == 0:
        return False
    n = p.size
    for i in range(n):
        for j in range(i + 1, n):
            pair = Subset(p, (1 << i) | (1 << j))
            if supremum(p, pair) is None or infimum(p, pair) is None:
                return False
    return True


class GroundMap:
    """A total map from a finite set or poset into a poset.

    ``domain`` is either a :class:`FinitePoset` or a tuple of labels.
    ``images[i]`` is the codomain index of the image of domain element i.
    """

    __slots__ = ("domain", "codomain", "images", "_dindex")

    def __init__(self, domain, codomain: FinitePoset, images: Sequence[int]):
        if not isinstance(domain, FinitePoset):
            domain = tuple(domain)
            _check_labels(domain, None)
        self.domain = domain
        self.codomain = codomain
        self.images = tuple(images)
        labels = self.domain_labels
        if len(self.images) != len(labels):
            raise InputError("map must assign exactly one image per domain element")
        for j in self.images:
            if not 0 <= j < codomain.size:
                raise InputError("image index outside the codomain")
        self._dindex = domain._index if isinstance(domain, FinitePoset) else {x: i for i, x in enumerate(labels)}

    @classmethod
    def from_pairs(cls, domain, codomain: FinitePoset, pairs: Mapping | Iterable[tuple]) -> "GroundMap":
        labels = domain.elements if isinstance(domain, FinitePoset) else tuple(domain)
        items = list(pairs.items()) if isinstance(pairs, Mapping) else list(pairs)
        where = {x: i for i, x in enumerate(labels)}
        images: list[int | None] = [None] * len(labels)
        for x, y in items:
            if x not in where:
                raise UnknownElement(f"map assigns undeclared domain element {x!r}")
            j = codomain.index(y)
            if images[where[x]] is not None and images[where[x]] != j:
                raise InputError(f"domain element {x!r} is assigned two images")
            images[where[x]] = j
        missing = [x for x, j in zip(labels, images) if j is None]
        if missing:
            raise InputError(f"map is not total: no image for {missing[0]!r}")
        return cls(domain, codomain, images)

    @property
    def domain_labels(self) -> tuple:
        return self.domain.elements if isinstance(self.domain, FinitePoset) else self.domain

    @property
    def domain_poset(self) -> FinitePoset:
        if not isinstance(self.domain, FinitePoset):
            raise TypeError("map domain carries no order")
        return self.domain

    def __call__(self, x):
        try:
            i = self._dindex[x]
        except KeyError:
            raise UnknownElement(f"{x!r} is not in the map's domain") from None
        return self.codomain.elements[self.images[i]]

    def image_mask(self, mask: int) -> int:
        out = 0
        for i in iter_bits(mask):
            out |= 1 << self.images[i]
        return out

    def is_injective(self) -> bool:
        return len(set(self.images)) == len(self.images)

    def is_surjective(self) -> bool:
        return len(set(self.images)) == self.codomain.size

    def pairs(self) -> list[tuple]:
        return [(x, self.codomain.elements[j]) for x, j in zip(self.domain_labels, self.images)]

    def __repr__(self):
        return f"GroundMap({self.pairs()!r})"


def is_increasing(f: GroundMap) -> bool:
    """x <= y implies f(x) <= f(y)."""
    dom = f.domain_poset
    cod = f.codomain
    for i, d in enumerate(dom.down):
        below_fi = cod.down[f.images[i]]
        for j in iter_bits(d):
            if not below_fi >> f.images[j] & 1:
                return False
    return True


def is_oie(f: GroundMap) -> bool:
    """Order isomorphic embedding: injective and x <= y iff f(x) <= f(y)."""
    dom = f.domain_poset
    if not f.is_injective():
        return False
    cod = f.codomain
    n = dom.size
    for i in range(n):
        for j in range(n):
            if dom.leq_idx(i, j) != cod.leq_idx(f.images[i], f.images[j]):
                return False
    return True


def to_dot(p: FinitePoset, name: str = "poset") -> str:
    """Hasse diagram in DOT, nodes and edges in label-lexicographic order."""
    lines = [f"digraph {_dot_id(name)} {{", "  rankdir=BT;"]
    for x in sorted(p.elements, key=label_key):
        lines.append(f"  {_dot_id(label_key(x))};")
    for a, b in p.cover_pairs():
        lines.append(f"  {_dot_id(label_key(a))} -> {_dot_id(label_key(b))};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _dot_id(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def poset_to_json(p: FinitePoset) -> dict:
    return {"elements": list(p.elements), "leq": [list(pair) for pair in p.cover_pairs()]}


def poset_from_json(doc, *, cap: int | None = None) -> FinitePoset:
    if not isinstance(doc, Mapping) or "elements" not in doc:
        raise InputError("poset document needs an 'elements' list")
    elements = doc["elements"]
    pairs = doc.get("leq", [])
    if not isinstance(elements, list) or not isinstance(pairs, list):
        raise InputError("'elements' and 'leq' must be lists")
    for pair in pairs:
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise InputError(f"relation pair {pair!r} is not a 2-element list")
    return validate_poset(elements, [tuple(pair) for pair in pairs], cap=cap)


def domain_from_json(doc, *, cap: int | None = None):
    """A map domain is either a poset document or a plain list of labels."""
    if isinstance(doc, list):
        _check_labels(doc, cap)
        return tuple(doc)
    return poset_from_json(doc, cap=cap)


def map_from_json(doc, *, cap: int | None = None) -> GroundMap:
    try:
        domain = domain_from_json(doc["domain"], cap=cap)
        codomain = poset_from_json(doc["codomain"], cap=cap)
        pairs = [tuple(pair) for pair in doc["pairs"]]
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed map document: {exc}") from None
    return GroundMap.from_pairs(domain, codomain, pairs)

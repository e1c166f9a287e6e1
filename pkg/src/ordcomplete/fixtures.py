"""Seeded random posets, maps and problems for property tests and the CLI."""

from __future__ import annotations

import random

from .completion import enumerate_cuts
from .poset import FinitePoset, GroundMap, iter_bits, validate_poset
from .pullback import EquationProblem, problem_to_json


def random_poset(rng: random.Random, n: int, density: float | None = None, prefix: str = "x") -> FinitePoset:
    """Random DAG on a shuffled linear extension, then transitive closure."""
    if density is None:
        density = rng.random()
    labels = [f"{prefix}{i}" for i in range(n)]
    order = labels[:]
    rng.shuffle(order)
    pairs = [(order[i], order[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < density]
    return validate_poset(labels, pairs)


def chain(n: int, prefix: str = "c") -> FinitePoset:
    labels = [f"{prefix}{i}" for i in range(n)]
    return validate_poset(labels, zip(labels, labels[1:]))


def antichain(n: int, prefix: str = "a") -> FinitePoset:
    return validate_poset([f"{prefix}{i}" for i in range(n)])


def random_lattice(rng: random.Random, n: int) -> FinitePoset:
    """The completion of a random n-element poset, as a poset of cuts."""
    return enumerate_cuts(random_poset(rng, n)).as_poset()


def random_map(rng: random.Random, domain, codomain: FinitePoset) -> GroundMap:
    labels = domain.elements if isinstance(domain, FinitePoset) else tuple(domain)
    return GroundMap(domain, codomain, [rng.randrange(codomain.size) for _ in labels])


def random_increasing_map(rng: random.Random, X: FinitePoset, Y: FinitePoset, tries: int = 20) -> GroundMap:
    """Assign images along a linear extension of X, each above the images of
    everything already placed below it.

    Later attempts lean towards minimal admissible images, which keeps the
    most room above them. A constant map is the last resort.
    """
    topo = sorted(range(X.size), key=lambda i: bin(X.down[i]).count("1"))
    for attempt in range(tries):
        images = [None] * X.size
        for i in topo:
            allowed = Y.full_mask
            for j in iter_bits(X.down[i] & ~(1 << i)):
                allowed &= Y.up[images[j]]
            if not allowed:
                break
            choices = list(iter_bits(allowed))
            if rng.random() < attempt / tries:
                choices = [c for c in choices if Y.down[c] & allowed == 1 << c]
            images[i] = rng.choice(choices)
        else:
            return GroundMap(X, Y, images)
    return GroundMap(X, Y, [rng.randrange(Y.size)] * X.size)


def random_oie(rng: random.Random, Y: FinitePoset, k: int | None = None) -> GroundMap:
    """Inclusion of a random induced subposet of Y; always an OIE."""
    k = rng.randint(1, Y.size) if k is None else k
    picked = sorted(rng.sample(range(Y.size), k))
    labels = [Y.elements[i] for i in picked]
    down = []
    for i in picked:
        d = 0
        for pos, j in enumerate(picked):
            if Y.down[i] >> j & 1:
                d |= 1 << pos
        down.append(d)
    return GroundMap(FinitePoset(labels, down), Y, picked)


def random_problem(rng: random.Random, max_x: int = 6, max_y: int = 8) -> EquationProblem:
    Y = random_poset(rng, rng.randint(1, max_y), prefix="y")
    X = tuple(f"u{i}" for i in range(rng.randint(1, max_x)))
    T = random_map(rng, X, Y)
    return EquationProblem(T, rng.choice(Y.elements))


def problem_documents(seed: int, count: int, max_x: int = 6, max_y: int = 8) -> list[dict]:
    rng = random.Random(seed)
    docs = []
    for _ in range(count):
        P = random_problem(rng, max_x, max_y)
        docs.append(problem_to_json(P))
    return docs

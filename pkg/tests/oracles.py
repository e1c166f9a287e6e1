"""Brute-force oracles that work on plain label sets.

Nothing here touches the bit-set machinery of the library beyond reading
the order relation through ``FinitePoset.leq``.
"""

from itertools import chain, combinations


def powerset(xs):
    xs = list(xs)
    return [frozenset(c) for c in chain.from_iterable(combinations(xs, r) for r in range(len(xs) + 1))]


def ub(p, A):
    return frozenset(y for y in p.elements if all(p.leq(a, y) for a in A))


def lb(p, A):
    return frozenset(y for y in p.elements if all(p.leq(y, a) for a in A))


def closure(p, A):
    return lb(p, ub(p, A))


def all_cuts(p):
    """Every subset A of X with A^{ul} = A, by scanning all 2^|X| subsets."""
    return sorted({A for A in powerset(p.elements) if closure(p, A) == A}, key=lambda s: (len(s), sorted(map(str, s))))


def least_upper_cut(cuts, family):
    """Least element (under inclusion) among the cuts containing every member."""
    uppers = [c for c in cuts if all(f <= c for f in family)]
    least = [c for c in uppers if all(c <= d for d in uppers)]
    assert len(least) == 1
    return least[0]


def greatest_lower_cut(cuts, family):
    lowers = [c for c in cuts if all(c <= f for f in family)]
    greatest = [c for c in lowers if all(d <= c for d in lowers)]
    assert len(greatest) == 1
    return greatest[0]


def poset_sup(p, A):
    ups = ub(p, A)
    least = [u for u in ups if all(p.leq(u, v) for v in ups)]
    return least[0] if least else None


def poset_inf(p, A):
    lows = lb(p, A)
    greatest = [u for u in lows if all(p.leq(v, u) for v in lows)]
    return greatest[0] if greatest else None


def tsharp(Y, T, A):
    """(T(A))^{ul} in Y for a label-level map dict T."""
    return closure(Y, frozenset(T[a] for a in A))


def brute_quotient(X, T):
    """Classes of X under same-image, as frozensets."""
    groups = {}
    for x in X:
        groups.setdefault(T[x], set()).add(x)
    return [frozenset(g) for g in groups.values()]


def solve_by_scan(X, Y, T, F):
    """Every cut A of the pull-back quotient with T^#(A) = F, computed from scratch.

    Returns the list of solutions, each as a frozenset of classes.
    """
    classes = brute_quotient(X, T)
    image = {c: T[next(iter(c))] for c in classes}
    cuts = []
    for A in powerset(classes):
        up = frozenset(v for v in classes if all(Y.leq(image[a], image[v]) for a in A))
        low = frozenset(u for u in classes if all(Y.leq(image[u], image[v]) for v in up))
        if low == A:
            cuts.append(A)
    return [A for A in cuts if closure(Y, frozenset(image[a] for a in A)) == frozenset(F)]

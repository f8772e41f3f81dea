"""Independent brute-force oracles used to freeze expected values.

Everything here is written against the bare ``mul``/``inv`` interface with
naive loops, deliberately avoiding the library's enumeration strategies,
groupoid machinery, and counting formulas, so the two code paths share as
little as possible.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from orbifolder.groups import FiniteGroup, subgroup_as_group


def naive_centralizer(group: FiniteGroup, g: int) -> list[int]:
    return [x for x in group.elements() if group.mul(x, g) == group.mul(g, x)]


def naive_commuting_tuples(group: FiniteGroup, arity: int) -> list[tuple[int, ...]]:
    """Filter the full cartesian power for pairwise commutation."""
    out = []
    for t in itertools.product(group.elements(), repeat=arity):
        if all(
            group.mul(t[i], t[j]) == group.mul(t[j], t[i])
            for i in range(arity)
            for j in range(i + 1, arity)
        ):
            out.append(t)
    return out


def naive_conjugacy_classes(group: FiniteGroup) -> list[list[int]]:
    seen = set()
    classes = []
    for g in group.elements():
        if g in seen:
            continue
        members = sorted({group.mul(group.mul(a, g), group.inv(a)) for a in group.elements()})
        seen.update(members)
        classes.append(members)
    return classes


def naive_tuple_orbits(group: FiniteGroup, tuples) -> int:
    """Orbit count of simultaneous conjugation on the given tuples."""
    pool = set(tuples)
    orbits = 0
    while pool:
        t = min(pool)
        orbit = {
            tuple(group.mul(group.mul(a, x), group.inv(a)) for x in t)
            for a in group.elements()
        }
        pool -= orbit
        orbits += 1
    return orbits


def double_simple_count(group: FiniteGroup) -> int:
    """Simple-count oracle: sum over classes of the centralizer's class count."""
    total = 0
    for cls in naive_conjugacy_classes(group):
        rep = cls[0]
        cent = subgroup_as_group(group, naive_centralizer(group, rep))
        total += len(naive_conjugacy_classes(cent))
    return total


def naive_lift_count(hom, manifold_tuples, decoration) -> Fraction:
    """Closed value by raw enumeration of (lift, witness) pairs.

    ``manifold_tuples`` is the full list of admissible holonomy tuples in
    the source group; the decoration lives in the target group.
    """
    H, J = hom.source, hom.target
    hits = 0
    for x in manifold_tuples:
        lam = tuple(hom(c) for c in x)
        for v in J.elements():
            if all(J.conj(v, l) == q for l, q in zip(lam, decoration)):
                hits += 1
    return Fraction(hits, H.order)

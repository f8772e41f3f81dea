"""Principal-bundle groupoids presented by holonomy tuples.

A bundle over the circle is a group element; over the rank-n torus a
pairwise-commuting n-tuple; over the genus-g surface a 2g-tuple whose
product of commutators is the identity.  Isomorphisms are simultaneous
conjugation, so each bundle set is an action groupoid of the structure
group on itself.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .config import Caps, DEFAULT_CAPS
from .errors import CapExceededError, ValidationError
from .groups import FiniteGroup, GroupHom, commuting_tuples, diagonal_hom, direct_product, identity_hom
from .groupoids import (
    FiniteGroupoid,
    GroupoidFunctor,
    identity_functor,
    product_functor,
    product_groupoid,
)

__all__ = [
    "ManifoldTag",
    "BundleGroupoid",
    "Span",
    "bundle_groupoid",
    "induced_functor",
    "pants_span",
    "cylinder_span",
    "restriction_span",
]


@dataclass(frozen=True)
class ManifoldTag:
    """Shape selector: circle, torus of rank n, or closed surface of genus g."""

    kind: str
    param: int = 1

    def __post_init__(self):
        if self.kind == "circle":
            if self.param != 1:
                raise ValidationError("circle takes no parameter")
        elif self.kind == "torus":
            if self.param < 1:
                raise ValidationError(f"torus rank must be >= 1, got {self.param}")
        elif self.kind == "surface":
            if self.param < 0:
                raise ValidationError(f"genus must be >= 0, got {self.param}")
        else:
            raise ValidationError(f"unknown manifold kind {self.kind!r}")

    @classmethod
    def parse(cls, text: str) -> "ManifoldTag":
        """Parse "circle", "torus:n", "surface:g"."""
        parts = str(text).strip().split(":")
        kind = parts[0]
        if kind == "circle":
            if len(parts) > 1:
                raise ValidationError("circle takes no parameter")
            return cls("circle", 1)
        if kind in ("torus", "surface"):
            if len(parts) != 2:
                raise ValidationError(f"{kind} needs a parameter, e.g. {kind}:2")
            try:
                return cls(kind, int(parts[1]))
            except ValueError as exc:
                raise ValidationError(f"bad {kind} parameter {parts[1]!r}") from exc
        raise ValidationError(f"unknown manifold {text!r}")

    @property
    def tuple_length(self) -> int:
        if self.kind == "surface":
            return 2 * self.param
        return self.param

    def __str__(self) -> str:
        if self.kind == "circle":
            return "circle"
        return f"{self.kind}:{self.param}"


@dataclass(frozen=True, eq=False)
class BundleGroupoid:
    manifold: ManifoldTag
    group: FiniteGroup
    groupoid: FiniteGroupoid

    @property
    def objects(self):
        return self.groupoid.objects


def _surface_tuples(group: FiniteGroup, genus: int, caps: Caps) -> list[tuple[int, ...]]:
    """2g-tuples (a1,b1,...,ag,bg) with product of commutators trivial.

    The first 2g-1 slots run free; admissible values for the final b_g are
    read from a per-a commutator lookup, which avoids the last |G| scan.
    """
    if genus == 0:
        return [()]
    n = group.order
    # comm_val[a][b] = a b a^-1 b^-1; lookup inverts it per first argument
    comm_val = [
        [group.mul(group.conj(a, b), group.inv(b)) for b in range(n)]
        for a in range(n)
    ]
    comm_lookup: list[dict[int, list[int]]] = []
    for a in range(n):
        by_value: dict[int, list[int]] = {}
        for b in range(n):
            by_value.setdefault(comm_val[a][b], []).append(b)
        comm_lookup.append(by_value)

    out: list[tuple[int, ...]] = []

    def extend(prefix: tuple[int, ...], acc: int, pairs_left: int) -> None:
        if pairs_left == 1:
            need = group.inv(acc)
            for a in range(n):
                for b in comm_lookup[a].get(need, ()):
                    out.append(prefix + (a, b))
                    if len(out) > caps.cap_objects:
                        raise CapExceededError(
                            f"surface bundle count exceeds cap {caps.cap_objects}"
                        )
            return
        for a in range(n):
            row = comm_val[a]
            for b in range(n):
                extend(prefix + (a, b), group.mul(acc, row[b]), pairs_left - 1)

    extend((), 0, genus)
    return out


def bundle_groupoid(
    group: FiniteGroup, manifold: ManifoldTag, caps: Caps = DEFAULT_CAPS
) -> BundleGroupoid:
    """Holonomy tuples up to simultaneous conjugation."""
    if manifold.kind == "circle":
        payloads = [(g,) for g in group.elements()]
    elif manifold.kind == "torus":
        if manifold.param > caps.max_torus_rank:
            raise CapExceededError(
                f"torus rank {manifold.param} exceeds cap {caps.max_torus_rank}"
            )
        payloads = list(commuting_tuples(group, manifold.param, caps).tuples)
    else:
        if manifold.param > caps.max_genus:
            raise CapExceededError(
                f"genus {manifold.param} exceeds cap {caps.max_genus}"
            )
        if group.order > caps.max_surface_group_order:
            raise CapExceededError(
                f"surface enumeration capped at group order "
                f"{caps.max_surface_group_order}, got {group.order}"
            )
        payloads = _surface_tuples(group, manifold.param, caps)

    def act(a: int, tup):
        return tuple(group.conj(a, x) for x in tup)

    gpd = FiniteGroupoid(
        group, payloads, act, name=f"Bun_{group.name}({manifold})", caps=caps
    )
    return BundleGroupoid(manifold, group, gpd)


def induced_functor(
    hom: GroupHom,
    manifold: ManifoldTag,
    caps: Caps = DEFAULT_CAPS,
    source: Optional[BundleGroupoid] = None,
    target: Optional[BundleGroupoid] = None,
) -> GroupoidFunctor:
    """Apply a group hom coordinatewise to holonomy tuples."""
    src = source if source is not None else bundle_groupoid(hom.source, manifold, caps)
    tgt = target if target is not None else bundle_groupoid(hom.target, manifold, caps)
    object_map = []
    for tup in src.groupoid.objects:
        image = tuple(hom(x) for x in tup)
        object_map.append(tgt.groupoid.index_of(image))
    return GroupoidFunctor(src.groupoid, tgt.groupoid, tuple(object_map), hom)


@dataclass(frozen=True, eq=False)
class Span:
    """A pair of functors out of a common apex groupoid."""

    left: GroupoidFunctor
    right: GroupoidFunctor

    def __post_init__(self):
        if self.left.source is not self.right.source:
            raise ValidationError("span legs must share their apex")

    @property
    def apex(self) -> FiniteGroupoid:
        return self.left.source


def pants_span(group: FiniteGroup, caps: Caps = DEFAULT_CAPS) -> Span:
    """Restriction span of the two-in one-out gluing of circles.

    Apex: all pairs under diagonal conjugation.  Left leg lands in the
    product of two circle groupoids; right leg multiplies the pair.
    """
    circle = bundle_groupoid(group, ManifoldTag("circle"), caps).groupoid
    pairs = [(a, b) for a in group.elements() for b in group.elements()]

    def act(g: int, pair):
        return (group.conj(g, pair[0]), group.conj(g, pair[1]))

    apex = FiniteGroupoid(
        group, pairs, act, name=f"pants//{group.name}", caps=caps
    )
    two_circles = product_groupoid(circle, circle, caps)
    prod_group = two_circles.group
    left_map = tuple(
        two_circles.index_of(((a,), (b,))) for a, b in pairs
    )
    left = GroupoidFunctor(apex, two_circles, left_map, diagonal_hom(group, prod_group))
    right_map = tuple(circle.index_of((group.mul(a, b),)) for a, b in pairs)
    right = GroupoidFunctor(apex, circle, right_map, identity_hom(group))
    return Span(left, right)


def cylinder_span(group: FiniteGroup, caps: Caps = DEFAULT_CAPS) -> Span:
    """Identity span on the circle groupoid."""
    circle = bundle_groupoid(group, ManifoldTag("circle"), caps).groupoid
    ident = identity_functor(circle)
    return Span(ident, ident)


def _product_span(a: Span, b: Span, caps: Caps) -> Span:
    apex = product_groupoid(a.apex, b.apex, caps)
    left_target = product_groupoid(a.left.target, b.left.target, caps)
    right_target = product_groupoid(a.right.target, b.right.target, caps)
    return Span(
        product_functor(a.left, b.left, apex, left_target),
        product_functor(a.right, b.right, apex, right_target),
    )


def restriction_span(shape, group: FiniteGroup, caps: Caps = DEFAULT_CAPS) -> Span:
    """Span for a one-dimensional gluing description.

    ``shape`` is "cylinder", "pants", or ["disjoint", s1, s2].
    """
    if isinstance(shape, str):
        if shape == "cylinder":
            return cylinder_span(group, caps)
        if shape == "pants":
            return pants_span(group, caps)
        raise ValidationError(f"unsupported bordism shape {shape!r}")
    if (
        isinstance(shape, Sequence)
        and len(shape) == 3
        and shape[0] == "disjoint"
    ):
        return _product_span(
            restriction_span(shape[1], group, caps),
            restriction_span(shape[2], group, caps),
            caps,
        )
    raise ValidationError(f"unsupported bordism shape {shape!r}")

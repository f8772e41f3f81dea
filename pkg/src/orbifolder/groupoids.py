"""Action groupoids over finite groups, with exact rational counting.

Objects are an indexed finite set with opaque hashable payloads; morphisms
x -> g.x are labelled by acting-group elements.  Connected components are
found by union-find over generator moves only, so no |G| x |X| scan is
needed; each object also carries a transport element back to its
component representative for later vector transport.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Hashable, Optional, Sequence

from .config import Caps, DEFAULT_CAPS
from .errors import CapExceededError, InvarianceViolationError, ValidationError
from .groups import (
    FiniteGroup,
    GroupHom,
    cyclic_group,
    direct_product,
    identity_hom,
    projection_homs,
    trivial_hom,
)

__all__ = [
    "FiniteGroupoid",
    "Component",
    "GroupoidFunctor",
    "homotopy_fiber",
    "homotopy_pullback",
    "groupoid_integral",
    "product_groupoid",
    "product_functor",
    "point_groupoid",
    "terminal_functor",
    "identity_functor",
]

_COMPAT_EXHAUSTIVE_BUDGET = 200_000
_COMPAT_SAMPLES = 256


@dataclass(frozen=True)
class Component:
    """One orbit: representative is the minimal object index."""

    rep: int
    members: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.members)


class FiniteGroupoid:
    """Finite group action presented on an indexed object set."""

    def __init__(
        self,
        group: FiniteGroup,
        objects: Sequence[Hashable],
        act: Callable[[int, Hashable], Hashable],
        *,
        name: str = "",
        caps: Caps = DEFAULT_CAPS,
        validate: bool = True,
    ):
        self.group = group
        self.objects = tuple(objects)
        if len(self.objects) > caps.cap_objects:
            raise CapExceededError(
                f"groupoid object count {len(self.objects)} exceeds cap"
            )
        self._index = {obj: i for i, obj in enumerate(self.objects)}
        if len(self._index) != len(self.objects):
            raise ValidationError("duplicate objects in groupoid")
        self._act_fn = act
        self.name = name or f"({len(self.objects)} objects)//{group.name}"
        self.caps = caps
        self._moves: dict[int, list[int]] = {}
        self._components: Optional[tuple[Component, ...]] = None
        self._comp_of: Optional[list[int]] = None
        self._transport: Optional[list[int]] = None
        self._aut_cache: dict[int, tuple[int, ...]] = {}
        if validate:
            self._validate(full=caps.full_validation)

    # -- structure -------------------------------------------------------

    def index_of(self, payload: Hashable) -> int:
        try:
            return self._index[payload]
        except KeyError:
            raise ValidationError(f"object {payload!r} not in groupoid") from None

    def act(self, g: int, i: int) -> int:
        moved = self._act_fn(g, self.objects[i])
        j = self._index.get(moved)
        if j is None:
            raise ValidationError(
                f"action left the object set: {g} moved object {i} out"
            )
        return j

    def _move_row(self, g: int) -> list[int]:
        row = self._moves.get(g)
        if row is None:
            row = [self.act(g, i) for i in range(len(self.objects))]
            self._moves[g] = row
        return row

    def _validate(self, full: bool) -> None:
        n = len(self.objects)
        for i in range(n):
            if self.act(0, i) != i:
                raise ValidationError("identity does not act trivially")
        order = self.group.order
        if full or order * order * n <= _COMPAT_EXHAUSTIVE_BUDGET:
            gs = range(order)
            for g in gs:
                for h in gs:
                    gh = self.group.mul(g, h)
                    for i in range(n):
                        if self.act(g, self.act(h, i)) != self.act(gh, i):
                            raise ValidationError(
                                f"action not compatible at ({g},{h},{i})"
                            )
        else:
            rng = random.Random(self.caps.validation_seed)
            for _ in range(_COMPAT_SAMPLES):
                g = rng.randrange(order)
                h = rng.randrange(order)
                i = rng.randrange(n)
                if self.act(g, self.act(h, i)) != self.act(self.group.mul(g, h), i):
                    raise ValidationError(f"action not compatible at ({g},{h},{i})")

    # -- components -------------------------------------------------------

    def _compute_components(self) -> None:
        n = len(self.objects)
        gens = self.group.generators()
        rows = [self._move_row(s) for s in gens]
        inv_rows = [self._move_row(self.group.inv(s)) for s in gens]
        comp_of = [-1] * n
        transport = [0] * n
        comps: list[Component] = []
        for start in range(n):
            if comp_of[start] >= 0:
                continue
            cid = len(comps)
            comp_of[start] = cid
            transport[start] = 0
            frontier = [start]
            members = [start]
            while frontier:
                nxt = []
                for i in frontier:
                    ti = transport[i]
                    for s, row, irow in zip(gens, rows, inv_rows):
                        for elt, j in ((s, row[i]), (self.group.inv(s), irow[i])):
                            if comp_of[j] < 0:
                                comp_of[j] = cid
                                transport[j] = self.group.mul(elt, ti)
                                nxt.append(j)
                                members.append(j)
                frontier = nxt
            comps.append(Component(rep=start, members=tuple(sorted(members))))
        self._components = tuple(comps)
        self._comp_of = comp_of
        self._transport = transport

    def pi0(self) -> tuple[Component, ...]:
        if self._components is None:
            self._compute_components()
        return self._components

    def component_index(self, i: int) -> int:
        self.pi0()
        return self._comp_of[i]

    def transport_to(self, i: int) -> int:
        """Group element t with act(t, rep) == i for i's component rep."""
        self.pi0()
        return self._transport[i]

    def aut_group(self, i: int) -> tuple[int, ...]:
        cached = self._aut_cache.get(i)
        if cached is None:
            obj = self.objects[i]
            cached = tuple(
                g for g in self.group.elements() if self._act_fn(g, obj) == obj
            )
            self._aut_cache[i] = cached
        return cached

    def cardinality(self) -> Fraction:
        """Sum of 1/|Aut| over components; cross-checked against |X|/|G|."""
        by_components = sum(
            (Fraction(1, len(self.aut_group(c.rep))) for c in self.pi0()),
            Fraction(0),
        )
        by_quotient = Fraction(len(self.objects), self.group.order)
        if by_components != by_quotient:
            raise ValidationError(
                f"cardinality formulas disagree: {by_components} vs {by_quotient}"
            )
        return by_components

    def __repr__(self) -> str:
        return f"FiniteGroupoid({self.name})"


@dataclass(frozen=True, eq=False)
class GroupoidFunctor:
    """Object map plus a translation homomorphism of acting groups."""

    source: FiniteGroupoid
    target: FiniteGroupoid
    object_map: tuple[int, ...]
    translation: GroupHom

    def __post_init__(self):
        if len(self.object_map) != len(self.source.objects):
            raise ValidationError("object map length mismatch")
        if self.translation.source is not self.source.group or (
            self.translation.target is not self.target.group
        ):
            if not (
                self.translation.source.same_structure(self.source.group)
                and self.translation.target.same_structure(self.target.group)
            ):
                raise ValidationError("translation hom does not match the groupoids")
        for j in self.object_map:
            if not 0 <= j < len(self.target.objects):
                raise ValidationError("object map image out of range")
        for s in self.source.group.generators():
            ts = self.translation(s)
            for i in range(len(self.source.objects)):
                if self.object_map[self.source.act(s, i)] != self.target.act(
                    ts, self.object_map[i]
                ):
                    raise ValidationError(
                        f"functor axiom fails at generator {s}, object {i}"
                    )

    def __call__(self, i: int) -> int:
        return self.object_map[i]


def identity_functor(groupoid: FiniteGroupoid) -> GroupoidFunctor:
    return GroupoidFunctor(
        groupoid,
        groupoid,
        tuple(range(len(groupoid.objects))),
        identity_hom(groupoid.group),
    )


def point_groupoid(group: Optional[FiniteGroup] = None) -> FiniteGroupoid:
    """One object; defaults to the trivial group (the terminal groupoid)."""
    g = group if group is not None else cyclic_group(1)
    return FiniteGroupoid(g, [()], lambda a, x: x, name=f"point//{g.name}")


def terminal_functor(groupoid: FiniteGroupoid, point: Optional[FiniteGroupoid] = None) -> GroupoidFunctor:
    pt = point if point is not None else point_groupoid()
    return GroupoidFunctor(
        groupoid,
        pt,
        (0,) * len(groupoid.objects),
        trivial_hom(groupoid.group, pt.group),
    )


def homotopy_fiber(
    functor: GroupoidFunctor, target_index: int, caps: Caps = DEFAULT_CAPS
) -> tuple[FiniteGroupoid, GroupoidFunctor]:
    """Objects (x, u) with u.F(x) = d; returns the fiber and its projection.

    The witness u is a target-group element recording how F(x) reaches d;
    a acts by (x, u) -> (a.x, u * tau(a)^-1).
    """
    src, tgt = functor.source, functor.target
    if not 0 <= target_index < len(tgt.objects):
        raise ValidationError(f"target object index {target_index} out of range")
    tg = tgt.group
    payloads = []
    for i, xp in enumerate(src.objects):
        fi = functor.object_map[i]
        for u in tg.elements():
            if tgt.act(u, fi) == target_index:
                payloads.append((xp, u))
    tau = functor.translation

    def act(a: int, pair):
        xp, u = pair
        return (src._act_fn(a, xp), tg.mul(u, tg.inv(tau(a))))

    fiber = FiniteGroupoid(
        src.group,
        payloads,
        act,
        name=f"hfib({functor.translation.name} @ {target_index})",
        caps=caps,
    )
    proj = GroupoidFunctor(
        fiber,
        src,
        tuple(src.index_of(xp) for xp, _ in payloads),
        identity_hom(src.group),
    )
    return fiber, proj


def homotopy_pullback(
    f: GroupoidFunctor, g: GroupoidFunctor, caps: Caps = DEFAULT_CAPS
) -> tuple[FiniteGroupoid, GroupoidFunctor, GroupoidFunctor]:
    """Objects (x, y, u) with u.F(x) = G(y), over the product acting group."""
    if f.target is not g.target and not (
        f.target.group.same_structure(g.target.group)
        and f.target.objects == g.target.objects
    ):
        raise ValidationError("pullback requires a common target")
    srcf, srcg, tgt = f.source, g.source, f.target
    tg = tgt.group
    prod = direct_product(srcf.group, srcg.group, caps)
    payloads = []
    for i, xp in enumerate(srcf.objects):
        fi = f.object_map[i]
        for j, yp in enumerate(srcg.objects):
            gj = g.object_map[j]
            for u in tg.elements():
                if tgt.act(u, fi) == gj:
                    payloads.append((xp, yp, u))
    ob = srcg.group.order
    tauf, taug = f.translation, g.translation

    def act(p: int, triple):
        a, b = divmod(p, ob)
        xp, yp, u = triple
        nu = tg.mul(taug(b), tg.mul(u, tg.inv(tauf(a))))
        return (srcf._act_fn(a, xp), srcg._act_fn(b, yp), nu)

    apex = FiniteGroupoid(
        prod, payloads, act, name=f"hpb({f.translation.name},{g.translation.name})",
        caps=caps,
    )
    p1h, p2h = projection_homs(prod, srcf.group, srcg.group)
    proj1 = GroupoidFunctor(
        apex, srcf, tuple(srcf.index_of(t[0]) for t in payloads), p1h
    )
    proj2 = GroupoidFunctor(
        apex, srcg, tuple(srcg.index_of(t[1]) for t in payloads), p2h
    )
    return apex, proj1, proj2


def groupoid_integral(
    groupoid: FiniteGroupoid,
    f: Callable[[Hashable], Fraction],
    *,
    seed: Optional[int] = None,
) -> Fraction:
    """Sum of f(rep)/|Aut(rep)| over components.

    f must be constant on components; each component is spot-checked at
    one random translate of its representative.
    """
    rng = random.Random(groupoid.caps.validation_seed if seed is None else seed)
    total = Fraction(0)
    for comp in groupoid.pi0():
        value = Fraction(f(groupoid.objects[comp.rep]))
        g = rng.randrange(groupoid.group.order)
        translate = groupoid.act(g, comp.rep)
        other = Fraction(f(groupoid.objects[translate]))
        if other != value:
            raise InvarianceViolationError(
                f"integrand not constant on component of object {comp.rep}: "
                f"{value} vs {other}"
            )
        total += value / len(groupoid.aut_group(comp.rep))
    return total


def product_groupoid(
    a: FiniteGroupoid, b: FiniteGroupoid, caps: Caps = DEFAULT_CAPS
) -> FiniteGroupoid:
    """Product action: (G x H) acting coordinatewise on pairs of payloads."""
    prod = direct_product(a.group, b.group, caps)
    payloads = [(pa, pb) for pa in a.objects for pb in b.objects]
    ob = b.group.order

    def act(p: int, pair):
        g, h = divmod(p, ob)
        return (a._act_fn(g, pair[0]), b._act_fn(h, pair[1]))

    return FiniteGroupoid(
        prod, payloads, act, name=f"{a.name} x {b.name}", caps=caps
    )


def product_functor(
    f: GroupoidFunctor,
    g: GroupoidFunctor,
    source: FiniteGroupoid,
    target: FiniteGroupoid,
) -> GroupoidFunctor:
    """The product of two functors between prebuilt product groupoids."""
    nb = len(g.source.objects)
    tb = len(g.target.objects)
    object_map = []
    for idx in range(len(source.objects)):
        i, j = divmod(idx, nb)
        object_map.append(f.object_map[i] * tb + g.object_map[j])
    ob_g = g.translation.target.order
    sb = g.translation.source.order
    mapping = []
    for p in range(source.group.order):
        x, y = divmod(p, sb)
        mapping.append(f.translation(x) * ob_g + g.translation(y))
    hom = GroupHom(source.group, target.group, tuple(mapping))
    return GroupoidFunctor(source, target, tuple(object_map), hom)

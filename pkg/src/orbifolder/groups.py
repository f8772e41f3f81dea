"""Finite groups on dense element indices, with the identity at index 0.

Every group exposes the same index-level interface: ``mul(a, b)``,
``inv(a)``, centralizers, conjugacy classes, generator words.  Small
groups carry an explicit multiplication table (numpy, validated); large
permutation-backed groups compose their stored permutations on demand so
the interface does not change with size.
"""

from __future__ import annotations

import itertools
import json
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Optional, Sequence

import numpy as np

from .config import Caps, DEFAULT_CAPS
from .errors import CapExceededError, ValidationError

__all__ = [
    "FiniteGroup",
    "ConjugacyClass",
    "CommutingTupleSet",
    "GroupHom",
    "commuting_tuples",
    "generated_subgroup",
    "coset_index",
    "subgroup_as_group",
    "cyclic_group",
    "dihedral_group",
    "symmetric_group",
    "quaternion_group",
    "direct_product",
    "group_from_cayley",
    "group_from_permutations",
    "group_from_spec",
    "hom_from_spec",
    "identity_hom",
    "trivial_hom",
    "compose_homs",
    "diagonal_hom",
    "projection_homs",
    "inclusion_hom",
]

_ASSOC_EXHAUSTIVE_MAX = 512
_ASSOC_SAMPLES = 4096


class FiniteGroup:
    """Group on indices ``0..order-1``; index 0 is the identity."""

    def __init__(
        self,
        order: int,
        name: str,
        *,
        table=None,
        mul_fn: Optional[Callable[[int, int], int]] = None,
        inv_fn: Optional[Callable[[int], int]] = None,
        validate: bool = True,
    ):
        if order < 1:
            raise ValidationError(f"group order must be positive, got {order}")
        self.order = int(order)
        self.name = str(name)
        self.identity = 0
        if table is None and mul_fn is None:
            raise ValidationError("need a multiplication table or rule")
        if table is not None:
            arr = np.asarray(table, dtype=np.int64)
            if arr.shape != (self.order, self.order):
                raise ValidationError(
                    f"table shape {arr.shape} does not match order {self.order}"
                )
            arr = arr.copy()
            arr.setflags(write=False)
            self._table = arr
            self._mul_fn = None
        else:
            self._table = None
            self._mul_fn = mul_fn
        self._inv_fn = inv_fn
        if validate:
            self._validate_structure()
        self._inv = self._build_inverses()
        self._cent_cache: dict[int, tuple[int, ...]] = {}
        self._cent_sets: dict[int, frozenset] = {}
        self._classes: Optional[tuple[ConjugacyClass, ...]] = None
        self._class_of: Optional[list[int]] = None
        self._gens: Optional[tuple[int, ...]] = None
        self._word_cache: dict[tuple[int, ...], dict[int, tuple[int, ...]]] = {}
        self._abelian: Optional[bool] = None

    # -- core operations ------------------------------------------------

    def mul(self, a: int, b: int) -> int:
        if self._table is not None:
            return int(self._table[a, b])
        return self._mul_fn(a, b)

    def inv(self, a: int) -> int:
        return int(self._inv[a])

    def conj(self, a: int, x: int) -> int:
        """a * x * a^-1."""
        return self.mul(self.mul(a, x), self.inv(a))

    def elements(self) -> range:
        return range(self.order)

    @property
    def is_abelian(self) -> bool:
        if self._abelian is None:
            gens = self.generators()
            self._abelian = all(
                self.mul(a, b) == self.mul(b, a) for a in gens for b in gens
            )
        return self._abelian

    def same_structure(self, other: "FiniteGroup") -> bool:
        """Index-for-index identical multiplication (not isomorphism)."""
        if self is other:
            return True
        if self.order != other.order:
            return False
        if self._table is not None and other._table is not None:
            return bool(np.array_equal(self._table, other._table))
        return all(
            self.mul(a, b) == other.mul(a, b)
            for a in range(self.order)
            for b in range(self.order)
        )

    # -- validation ------------------------------------------------------

    def _validate_structure(self) -> None:
        n = self.order
        idx = np.arange(n)
        if self._table is not None:
            t = self._table
            if t.min() < 0 or t.max() >= n:
                raise ValidationError("table entries out of range")
            if not np.array_equal(np.sort(t, axis=1), np.tile(idx, (n, 1))):
                raise ValidationError("a table row is not a permutation")
            if not np.array_equal(np.sort(t, axis=0), np.tile(idx[:, None], (1, n))):
                raise ValidationError("a table column is not a permutation")
            if not (np.array_equal(t[0], idx) and np.array_equal(t[:, 0], idx)):
                raise ValidationError("index 0 is not a two-sided identity")
            if n <= _ASSOC_EXHAUSTIVE_MAX:
                for a in range(n):
                    if not np.array_equal(t[t[a]], t[a][t]):
                        raise ValidationError(f"associativity fails at element {a}")
            else:
                rng = np.random.default_rng(DEFAULT_CAPS.validation_seed)
                for a, b, c in rng.integers(0, n, size=(_ASSOC_SAMPLES, 3)):
                    if t[t[a, b], c] != t[a, t[b, c]]:
                        raise ValidationError("associativity fails (sampled)")
        else:
            for x in range(n):
                if self._mul_fn(0, x) != x or self._mul_fn(x, 0) != x:
                    raise ValidationError("index 0 is not a two-sided identity")
            rng = np.random.default_rng(DEFAULT_CAPS.validation_seed)
            for a, b, c in rng.integers(0, n, size=(_ASSOC_SAMPLES, 3)):
                a, b, c = int(a), int(b), int(c)
                if self._mul_fn(self._mul_fn(a, b), c) != self._mul_fn(
                    a, self._mul_fn(b, c)
                ):
                    raise ValidationError("associativity fails (sampled)")

    def _build_inverses(self) -> np.ndarray:
        n = self.order
        if self._table is not None:
            inv = np.argmax(self._table == 0, axis=1)
            if not np.all(self._table[inv, np.arange(n)] == 0):
                raise ValidationError("an element has no two-sided inverse")
            inv.setflags(write=False)
            return inv
        if self._inv_fn is not None:
            inv = np.array([self._inv_fn(a) for a in range(n)], dtype=np.int64)
        else:
            inv = np.full(n, -1, dtype=np.int64)
            for a in range(n):
                for b in range(n):
                    if self._mul_fn(a, b) == 0:
                        inv[a] = b
                        break
        for a in range(n):
            b = int(inv[a])
            if b < 0 or self.mul(a, b) != 0 or self.mul(b, a) != 0:
                raise ValidationError(f"element {a} has no two-sided inverse")
        inv.setflags(write=False)
        return inv

    # -- conjugation machinery --------------------------------------------

    def centralizer(self, g: int) -> tuple[int, ...]:
        cached = self._cent_cache.get(g)
        if cached is not None:
            return cached
        if self._table is not None:
            t = self._table
            cent = tuple(int(x) for x in np.nonzero(t[:, g] == t[g, :])[0])
        else:
            cent = tuple(
                x for x in range(self.order) if self.mul(x, g) == self.mul(g, x)
            )
        self._cent_cache[g] = cent
        self._cent_sets[g] = frozenset(cent)
        return cent

    def centralizer_set(self, g: int) -> frozenset:
        if g not in self._cent_sets:
            self.centralizer(g)
        return self._cent_sets[g]

    def conjugacy_classes(self) -> tuple["ConjugacyClass", ...]:
        if self._classes is not None:
            return self._classes
        n = self.order
        seen = bytearray(n)
        classes = []
        class_of = [0] * n
        for g in range(n):
            if seen[g]:
                continue
            if self._table is not None:
                members = np.unique(self._table[self._table[:, g], self._inv])
                members = tuple(int(m) for m in members)
            else:
                members = tuple(sorted({self.conj(a, g) for a in range(n)}))
            for m in members:
                seen[m] = 1
                class_of[m] = len(classes)
            classes.append(ConjugacyClass(rep=g, members=members))
        self._classes = tuple(classes)
        self._class_of = class_of
        return self._classes

    def class_index(self, g: int) -> int:
        self.conjugacy_classes()
        return self._class_of[g]

    # -- generators and words ---------------------------------------------

    def generators(self) -> tuple[int, ...]:
        """A small generating set, chosen greedily by element index."""
        if self._gens is not None:
            return self._gens
        gens: list[int] = []
        closure = {0}
        for g in range(1, self.order):
            if g in closure:
                continue
            gens.append(g)
            closure = set(generated_subgroup(self, gens))
            if len(closure) == self.order:
                break
        self._gens = tuple(gens)
        return self._gens

    def words_over(self, gens: Sequence[int]) -> dict[int, tuple[int, ...]]:
        """BFS words: ``words[g] = (a1,...,am)`` with ``g = am * ... * a1``."""
        key = tuple(gens)
        cached = self._word_cache.get(key)
        if cached is not None:
            return cached
        words: dict[int, tuple[int, ...]] = {0: ()}
        frontier = [0]
        while frontier:
            nxt = []
            for x in frontier:
                wx = words[x]
                for s in key:
                    y = self.mul(s, x)
                    if y not in words:
                        words[y] = wx + (s,)
                        nxt.append(y)
            frontier = nxt
        self._word_cache[key] = words
        return words

    def word(self, g: int) -> tuple[int, ...]:
        words = self.words_over(self.generators())
        return words[g]

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name}, order={self.order})"


@dataclass(frozen=True)
class ConjugacyClass:
    rep: int
    members: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.members)


# -- subgroup machinery ----------------------------------------------------


def generated_subgroup(group: FiniteGroup, gens: Iterable[int]) -> tuple[int, ...]:
    """Closure of ``gens`` under multiplication (inverses come for free)."""
    gens = [int(g) for g in gens]
    for g in gens:
        if not 0 <= g < group.order:
            raise ValidationError(f"generator index {g} out of range")
    members = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = group.mul(x, s)
                if y not in members:
                    members.add(y)
                    nxt.append(y)
        frontier = nxt
    return tuple(sorted(members))


def coset_index(group: FiniteGroup, subgroup: Iterable[int]) -> int:
    """|G| / |H| after verifying that ``subgroup`` really is one."""
    sub = sorted(set(int(x) for x in subgroup))
    if not sub or sub[0] != 0:
        raise ValidationError("subgroup must contain the identity")
    inside = set(sub)
    for a in sub:
        if group.inv(a) not in inside:
            raise ValidationError(f"subgroup not closed under inversion at {a}")
        for b in sub:
            if group.mul(a, b) not in inside:
                raise ValidationError(
                    f"subgroup not closed under multiplication at ({a},{b})"
                )
    if group.order % len(sub) != 0:
        raise ValidationError("subgroup size does not divide the group order")
    return group.order // len(sub)


def subgroup_as_group(
    group: FiniteGroup, elements: Iterable[int], name: Optional[str] = None
) -> FiniteGroup:
    """Re-index a verified subgroup as a standalone group."""
    sub = sorted(set(int(x) for x in elements))
    coset_index(group, sub)  # runs the subgroup checks
    pos = {g: i for i, g in enumerate(sub)}
    table = [[pos[group.mul(a, b)] for b in sub] for a in sub]
    return FiniteGroup(
        len(sub), name or f"{group.name}-sub{len(sub)}", table=table
    )


# -- commuting tuples -------------------------------------------------------


@dataclass(frozen=True)
class CommutingTupleSet:
    group: FiniteGroup
    arity: int
    tuples: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.tuples)


def commuting_tuples(
    group: FiniteGroup, arity: int, caps: Caps = DEFAULT_CAPS
) -> CommutingTupleSet:
    """All pairwise-commuting ``arity``-tuples, lexicographically sorted.

    Enumeration walks centralizer chains: candidates for the next slot are
    the intersection of the centralizers of the prefix.  The optional
    thread split is over the first coordinate only, and chunks are
    concatenated in coordinate order, so results do not depend on the
    thread count.
    """
    if arity < 1:
        raise ValidationError(f"tuple arity must be >= 1, got {arity}")
    cap = caps.cap_objects
    if group.order > cap:
        raise CapExceededError(
            f"commuting {arity}-tuples of {group.name} exceed cap {cap}"
        )

    def subtree(g1: int) -> list[tuple[int, ...]]:
        out: list[tuple[int, ...]] = []

        def extend(prefix: tuple[int, ...], cent: tuple[int, ...]) -> None:
            if len(prefix) == arity:
                out.append(prefix)
                if len(out) > cap:
                    raise CapExceededError(
                        f"commuting {arity}-tuples of {group.name} exceed cap {cap}"
                    )
                return
            for h in cent:
                hs = group.centralizer_set(h)
                extend(prefix + (h,), tuple(x for x in cent if x in hs))

        extend((g1,), group.centralizer(g1))
        return out

    if arity == 1:
        return CommutingTupleSet(group, 1, tuple((g,) for g in group.elements()))

    for g in group.elements():  # warm the cache outside the thread pool
        group.centralizer(g)
    if caps.threads > 1:
        with ThreadPoolExecutor(max_workers=caps.threads) as pool:
            chunks = list(pool.map(subtree, range(group.order)))
    else:
        chunks = [subtree(g1) for g1 in range(group.order)]
    total = sum(len(c) for c in chunks)
    if total > cap:
        raise CapExceededError(
            f"commuting {arity}-tuples of {group.name} exceed cap {cap}"
        )
    flat = tuple(t for chunk in chunks for t in chunk)
    return CommutingTupleSet(group, arity, flat)


# -- presets ----------------------------------------------------------------


def cyclic_group(k: int) -> FiniteGroup:
    if k < 1:
        raise ValidationError(f"cyclic order must be >= 1, got {k}")
    table = [[(a + b) % k for b in range(k)] for a in range(k)]
    return FiniteGroup(k, f"C{k}", table=table)


def dihedral_group(k: int) -> FiniteGroup:
    """Symmetries of the k-gon, order 2k; index j*k+i encodes r^i s^j."""
    if k < 1:
        raise ValidationError(f"dihedral parameter must be >= 1, got {k}")
    n = 2 * k

    def mul(a: int, b: int) -> int:
        i1, j1 = a % k, a // k
        i2, j2 = b % k, b // k
        i = (i1 + (i2 if j1 == 0 else -i2)) % k
        return ((j1 + j2) % 2) * k + i

    table = [[mul(a, b) for b in range(n)] for a in range(n)]
    return FiniteGroup(n, f"D{k}", table=table)


def _compose(p: tuple[int, ...], q: tuple[int, ...]) -> tuple[int, ...]:
    # (p*q)[i] = p[q[i]]: q is applied first
    return tuple(p[q[i]] for i in range(len(p)))


def _perm_backed(
    perms: list[tuple[int, ...]], name: str, caps: Caps
) -> FiniteGroup:
    perms = sorted(perms)
    order = len(perms)
    index = {p: i for i, p in enumerate(perms)}
    if order <= caps.dense_table_max_order:
        table = [
            [index[_compose(p, q)] for q in perms] for p in perms
        ]
        g = FiniteGroup(order, name, table=table)
    else:
        deg = len(perms[0])

        def mul_fn(a: int, b: int) -> int:
            return index[_compose(perms[a], perms[b])]

        def inv_fn(a: int) -> int:
            p = perms[a]
            q = [0] * deg
            for i, pi in enumerate(p):
                q[pi] = i
            return index[tuple(q)]

        g = FiniteGroup(order, name, mul_fn=mul_fn, inv_fn=inv_fn)
    g._perms = perms  # kept for introspection
    return g


def symmetric_group(n: int, caps: Caps = DEFAULT_CAPS) -> FiniteGroup:
    if not 1 <= n <= caps.max_symmetric_degree:
        raise CapExceededError(
            f"symmetric degree {n} outside 1..{caps.max_symmetric_degree}"
        )
    perms = list(itertools.permutations(range(n)))
    return _perm_backed(perms, f"S{n}", caps)


def quaternion_group() -> FiniteGroup:
    """Unit quaternions {±1, ±i, ±j, ±k}; index = 2*axis + sign."""
    basis = {  # (axis, axis) -> (sign, axis) for 1,i,j,k numbered 0..3
        (1, 1): (1, 0), (2, 2): (1, 0), (3, 3): (1, 0),
        (1, 2): (0, 3), (2, 3): (0, 1), (3, 1): (0, 2),
        (2, 1): (1, 3), (3, 2): (1, 1), (1, 3): (1, 2),
    }

    def mul(a: int, b: int) -> int:
        sa, xa = a % 2, a // 2
        sb, xb = b % 2, b // 2
        if xa == 0:
            s, x = 0, xb
        elif xb == 0:
            s, x = 0, xa
        else:
            s, x = basis[(xa, xb)]
        return 2 * x + (sa ^ sb ^ s)

    table = [[mul(a, b) for b in range(8)] for a in range(8)]
    return FiniteGroup(8, "Q8", table=table)


def direct_product(
    a: FiniteGroup, b: FiniteGroup, caps: Caps = DEFAULT_CAPS
) -> FiniteGroup:
    """Product group; index (x, y) -> x * |b| + y, so (0,0) stays at 0."""
    order = a.order * b.order
    name = f"{a.name}x{b.name}"
    ob = b.order
    if order <= caps.dense_table_max_order and a._table is not None and b._table is not None:
        ta, tb = a._table, b._table
        big = ta[:, None, :, None] * ob + tb[None, :, None, :]
        table = big.reshape(order, order)
        return FiniteGroup(order, name, table=table)

    def mul_fn(x: int, y: int) -> int:
        x1, x2 = divmod(x, ob)
        y1, y2 = divmod(y, ob)
        return a.mul(x1, y1) * ob + b.mul(x2, y2)

    def inv_fn(x: int) -> int:
        x1, x2 = divmod(x, ob)
        return a.inv(x1) * ob + b.inv(x2)

    return FiniteGroup(order, name, mul_fn=mul_fn, inv_fn=inv_fn)


def group_from_cayley(table: Sequence[Sequence[int]], caps: Caps = DEFAULT_CAPS) -> FiniteGroup:
    """Explicit table input; the identity is relocated to index 0."""
    arr = np.asarray(table, dtype=np.int64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValidationError("cayley table must be square")
    n = arr.shape[0]
    if n > caps.cap_objects:
        raise CapExceededError(f"cayley table order {n} exceeds cap")
    idx = np.arange(n)
    e = -1
    for cand in range(n):
        if np.array_equal(arr[cand], idx) and np.array_equal(arr[:, cand], idx):
            e = cand
            break
    if e < 0:
        raise ValidationError("cayley table has no two-sided identity")
    if e != 0:
        sigma = idx.copy()
        sigma[0], sigma[e] = e, 0
        arr = sigma[arr[sigma][:, sigma]]
    return FiniteGroup(n, f"cayley{n}", table=arr)


def group_from_permutations(
    degree: int,
    generators: Sequence[Sequence[int]],
    caps: Caps = DEFAULT_CAPS,
    name: Optional[str] = None,
) -> FiniteGroup:
    """Closure of one-line permutations of ``range(degree)``."""
    if not 1 <= degree <= caps.max_perm_degree:
        raise CapExceededError(
            f"permutation degree {degree} outside 1..{caps.max_perm_degree}"
        )
    gens = []
    for g in generators:
        p = tuple(int(x) for x in g)
        if sorted(p) != list(range(degree)):
            raise ValidationError(f"{p} is not a permutation of range({degree})")
        gens.append(p)
    ident = tuple(range(degree))
    members = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for s in gens:
                q = _compose(p, s)
                if q not in members:
                    members.add(q)
                    nxt.append(q)
                    if len(members) > caps.cap_objects:
                        raise CapExceededError("permutation closure exceeds cap")
        frontier = nxt
    return _perm_backed(list(members), name or f"perm{degree}", caps)


# -- JSON specs ---------------------------------------------------------------

_PRESET_CYCLIC = re.compile(r"^[CZ](\d+)$")
_PRESET_DIHEDRAL = re.compile(r"^D(\d+)$")
_PRESET_SYMMETRIC = re.compile(r"^S(\d+)$")


def _preset_by_name(name: str, caps: Caps) -> FiniteGroup:
    if name in ("1", "triv", "trivial"):
        return cyclic_group(1)
    if name == "Q8":
        return quaternion_group()
    m = _PRESET_CYCLIC.match(name)
    if m:
        return cyclic_group(int(m.group(1)))
    m = _PRESET_DIHEDRAL.match(name)
    if m:
        return dihedral_group(int(m.group(1)))
    m = _PRESET_SYMMETRIC.match(name)
    if m:
        return symmetric_group(int(m.group(1)), caps)
    raise ValidationError(f"unknown preset group name: {name!r}")


def group_from_spec(spec, caps: Caps = DEFAULT_CAPS) -> FiniteGroup:
    """Build a group from a JSON spec (dict or JSON text).

    Forms: ``{"type":"preset","name":"S3"}``,
    ``{"type":"product","factors":[...]}``,
    ``{"type":"cayley","table":[[...]]}``,
    ``{"type":"perm","degree":n,"generators":[[...]]}``.
    """
    if isinstance(spec, str):
        try:
            spec = json.loads(spec)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"group spec is not valid JSON: {exc}") from exc
    if not isinstance(spec, Mapping):
        raise ValidationError("group spec must be a JSON object")
    kind = spec.get("type")
    if kind == "preset":
        if "name" not in spec:
            raise ValidationError("preset spec needs a 'name'")
        return _preset_by_name(str(spec["name"]), caps)
    if kind == "product":
        factors = spec.get("factors")
        if not isinstance(factors, Sequence) or not factors:
            raise ValidationError("product spec needs a non-empty 'factors' list")
        groups = [group_from_spec(f, caps) for f in factors]
        out = groups[0]
        for g in groups[1:]:
            out = direct_product(out, g, caps)
        return out
    if kind == "cayley":
        if "table" not in spec:
            raise ValidationError("cayley spec needs a 'table'")
        return group_from_cayley(spec["table"], caps)
    if kind == "perm":
        if "degree" not in spec or "generators" not in spec:
            raise ValidationError("perm spec needs 'degree' and 'generators'")
        return group_from_permutations(int(spec["degree"]), spec["generators"], caps)
    raise ValidationError(f"unknown group spec type: {kind!r}")


# -- homomorphisms -------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GroupHom:
    """Map table between element indices, verified multiplicative."""

    source: FiniteGroup
    target: FiniteGroup
    mapping: tuple[int, ...]

    def __post_init__(self):
        if len(self.mapping) != self.source.order:
            raise ValidationError("hom mapping length must equal the source order")
        for v in self.mapping:
            if not 0 <= v < self.target.order:
                raise ValidationError(f"hom image {v} out of range")
        if self.mapping[0] != 0:
            raise ValidationError("hom must send identity to identity")
        m = self.mapping
        for x in range(self.source.order):
            for y in range(self.source.order):
                if m[self.source.mul(x, y)] != self.target.mul(m[x], m[y]):
                    raise ValidationError(
                        f"map is not multiplicative at ({x},{y})"
                    )

    def __call__(self, x: int) -> int:
        return self.mapping[x]

    def image(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.mapping)))

    def kernel(self) -> tuple[int, ...]:
        return tuple(x for x in range(self.source.order) if self.mapping[x] == 0)

    @property
    def is_surjective(self) -> bool:
        return len(set(self.mapping)) == self.target.order

    @property
    def name(self) -> str:
        return f"{self.source.name}->{self.target.name}"


def identity_hom(group: FiniteGroup) -> GroupHom:
    return GroupHom(group, group, tuple(range(group.order)))


def trivial_hom(group: FiniteGroup, target: Optional[FiniteGroup] = None) -> GroupHom:
    tgt = target if target is not None else cyclic_group(1)
    return GroupHom(group, tgt, (0,) * group.order)


def compose_homs(outer: GroupHom, inner: GroupHom) -> GroupHom:
    if not inner.target.same_structure(outer.source):
        raise ValidationError(
            "cannot compose: inner target and outer source differ"
        )
    return GroupHom(
        inner.source, outer.target, tuple(outer.mapping[v] for v in inner.mapping)
    )


def diagonal_hom(group: FiniteGroup, prod: FiniteGroup) -> GroupHom:
    """g -> (g, g) into a product built by ``direct_product(group, group)``."""
    if prod.order != group.order ** 2:
        raise ValidationError("product group has the wrong order for a diagonal")
    return GroupHom(group, prod, tuple(g * group.order + g for g in group.elements()))


def projection_homs(
    prod: FiniteGroup, left: FiniteGroup, right: FiniteGroup
) -> tuple[GroupHom, GroupHom]:
    if prod.order != left.order * right.order:
        raise ValidationError("product group order mismatch")
    ob = right.order
    p1 = GroupHom(prod, left, tuple(x // ob for x in prod.elements()))
    p2 = GroupHom(prod, right, tuple(x % ob for x in prod.elements()))
    return p1, p2


def inclusion_hom(sub: FiniteGroup, group: FiniteGroup, images: Sequence[int]) -> GroupHom:
    """Convenience wrapper; ``images`` lists where each sub index lands."""
    return GroupHom(sub, group, tuple(int(x) for x in images))


def _complete_from_generators(
    source: FiniteGroup, target: FiniteGroup, seeds: dict[int, int]
) -> tuple[int, ...]:
    gens = sorted(seeds)
    if tuple(generated_subgroup(source, gens)) != tuple(range(source.order)):
        raise ValidationError(
            "hom images must cover a generating set of the source"
        )
    mapping: dict[int, int] = {0: 0}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = source.mul(x, g)
                v = target.mul(mapping[x], seeds[g])
                prior = mapping.get(y)
                if prior is None:
                    mapping[y] = v
                    nxt.append(y)
                elif prior != v:
                    raise ValidationError(
                        "generator images do not extend to a homomorphism"
                    )
        frontier = nxt
    for g, img in seeds.items():
        if mapping[g] != img:
            raise ValidationError(
                "generator images do not extend to a homomorphism"
            )
    return tuple(mapping[x] for x in range(source.order))


def hom_from_spec(spec, caps: Caps = DEFAULT_CAPS) -> GroupHom:
    """Build a homomorphism from ``{"source":..,"target":..,"images":..}``.

    ``images`` is either a full list (one target index per source index)
    or a dict from generating source indices to target indices, which is
    completed multiplicatively and then re-verified in full.
    """
    if isinstance(spec, str):
        try:
            spec = json.loads(spec)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"hom spec is not valid JSON: {exc}") from exc
    if not isinstance(spec, Mapping):
        raise ValidationError("hom spec must be a JSON object")
    for key in ("source", "target", "images"):
        if key not in spec:
            raise ValidationError(f"hom spec needs '{key}'")
    source = group_from_spec(spec["source"], caps)
    target = group_from_spec(spec["target"], caps)
    images = spec["images"]
    if isinstance(images, Mapping):
        seeds = {}
        for k, v in images.items():
            g = int(k)
            if not 0 <= g < source.order:
                raise ValidationError(f"image key {g} out of source range")
            seeds[g] = int(v)
        if len(seeds) == source.order:
            mapping = tuple(seeds[x] for x in range(source.order))
        else:
            mapping = _complete_from_generators(source, target, seeds)
    elif isinstance(images, Sequence):
        mapping = tuple(int(v) for v in images)
    else:
        raise ValidationError("hom images must be a list or an index dict")
    return GroupHom(source, target, mapping)

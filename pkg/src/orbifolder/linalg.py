"""Exact rational linear algebra over action-groupoid representations.

A representation assigns a finite-dimensional rational vector space to
every object and an invertible matrix to every morphism; matrices for
arbitrary group elements are composed from generator matrices along BFS
words.  Invariants are computed per component through the stabilizer
averaging projector, whose idempotency is asserted rather than assumed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Optional, Sequence

from .config import Caps, DEFAULT_CAPS
from .errors import ValidationError
from .groupoids import FiniteGroupoid, GroupoidFunctor, homotopy_fiber, point_groupoid
from .groups import FiniteGroup

__all__ = [
    "RationalMatrix",
    "GroupoidRep",
    "Section",
    "trivial_line",
    "zero_rep",
    "regular_rep",
    "invariants_dim",
    "invariants_by_component",
    "section_basis",
    "pull",
    "push_limit",
    "rep_to_json",
    "rep_from_json",
    "format_rational",
    "parse_rational",
]

_WORD_CHECKS = 50
_WORD_OBJECTS = 5
_WORD_LENGTH = 6


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_rational(text) -> Fraction:
    try:
        return Fraction(str(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"bad rational literal {text!r}") from exc


@dataclass(frozen=True)
class RationalMatrix:
    rows: int
    cols: int
    entries: tuple[tuple[Fraction, ...], ...]

    @staticmethod
    def from_rows(rows: Sequence[Sequence]) -> "RationalMatrix":
        ent = tuple(tuple(Fraction(x) for x in r) for r in rows)
        nr = len(ent)
        nc = len(ent[0]) if ent else 0
        if any(len(r) != nc for r in ent):
            raise ValidationError("ragged matrix rows")
        return RationalMatrix(nr, nc, ent)

    @staticmethod
    def identity(n: int) -> "RationalMatrix":
        return RationalMatrix(
            n, n,
            tuple(
                tuple(Fraction(1 if i == j else 0) for j in range(n))
                for i in range(n)
            ),
        )

    @staticmethod
    def zeros(rows: int, cols: int) -> "RationalMatrix":
        z = Fraction(0)
        return RationalMatrix(rows, cols, tuple((z,) * cols for _ in range(rows)))

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.cols != other.rows:
            raise ValidationError(
                f"matmul shape mismatch: {self.rows}x{self.cols} @ {other.rows}x{other.cols}"
            )
        if self.cols == 0:
            return RationalMatrix.zeros(self.rows, other.cols)
        ocols = list(zip(*other.entries))
        out = tuple(
            tuple(sum(a * b for a, b in zip(row, col)) for col in ocols)
            for row in self.entries
        )
        return RationalMatrix(self.rows, other.cols, out)

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValidationError("matrix addition shape mismatch")
        return RationalMatrix(
            self.rows,
            self.cols,
            tuple(
                tuple(a + b for a, b in zip(r1, r2))
                for r1, r2 in zip(self.entries, other.entries)
            ),
        )

    def scale(self, factor) -> "RationalMatrix":
        f = Fraction(factor)
        return RationalMatrix(
            self.rows, self.cols,
            tuple(tuple(f * x for x in row) for row in self.entries),
        )

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(row[j] for row in self.entries)

    def is_identity(self) -> bool:
        return self.rows == self.cols and all(
            x == (1 if i == j else 0)
            for i, row in enumerate(self.entries)
            for j, x in enumerate(row)
        )

    def rank(self) -> int:
        """Fraction-free elimination on a denominator-cleared integer copy."""
        if not self.rows or not self.cols:
            return 0
        m = []
        for row in self.entries:
            lcm = 1
            for x in row:
                d = x.denominator
                lcm = lcm * d // _gcd(lcm, d)
            m.append([int(x * lcm) for x in row])
        nr, nc = self.rows, self.cols
        prev = 1
        r = 0
        for c in range(nc):
            pivot = next((i for i in range(r, nr) if m[i][c] != 0), None)
            if pivot is None:
                continue
            m[r], m[pivot] = m[pivot], m[r]
            for i in range(r + 1, nr):
                for k in range(c + 1, nc):
                    m[i][k] = (m[r][c] * m[i][k] - m[i][c] * m[r][k]) // prev
                m[i][c] = 0
            prev = m[r][c]
            r += 1
            if r == nr:
                break
        return r

    def pivot_columns(self) -> tuple[int, ...]:
        _, pivots = _reduced_echelon([list(r) for r in self.entries], self.cols)
        return tuple(pivots)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def _reduced_echelon(rows: list[list[Fraction]], ncols: int):
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def solve_columns(basis: RationalMatrix, targets: RationalMatrix) -> RationalMatrix:
    """Solve basis @ X = targets exactly; basis has independent columns."""
    if basis.rows != targets.rows:
        raise ValidationError("solve shape mismatch")
    k = basis.cols
    aug = [
        list(brow) + list(trow)
        for brow, trow in zip(basis.entries, targets.entries)
    ]
    if not aug:
        return RationalMatrix.zeros(k, targets.cols)
    reduced, pivots = _reduced_echelon(aug, basis.cols + targets.cols)
    if [p for p in pivots if p < k] != list(range(k)):
        raise ValidationError("basis columns are not independent")
    if any(p >= k for p in pivots):
        raise ValidationError("inconsistent linear system in transport")
    coeff = [reduced[i][k:] for i in range(k)]
    return RationalMatrix(k, targets.cols, tuple(tuple(r) for r in coeff))


class GroupoidRep:
    """Fiberwise rational representation of an action groupoid."""

    def __init__(
        self,
        base: FiniteGroupoid,
        fiber_dims: Sequence[int],
        gen_matrix: Callable[[int, int], RationalMatrix],
        *,
        gens: Optional[Sequence[int]] = None,
        name: str = "",
        validate: bool = True,
        caps: Optional[Caps] = None,
    ):
        self.base = base
        self.fiber_dims = tuple(int(d) for d in fiber_dims)
        if len(self.fiber_dims) != len(base.objects):
            raise ValidationError("fiber_dims length must match object count")
        if any(d < 0 for d in self.fiber_dims):
            raise ValidationError("fiber dimensions must be non-negative")
        self.caps = caps if caps is not None else base.caps
        self.gens = tuple(gens) if gens is not None else base.group.generators()
        self._words = base.group.words_over(self.gens)
        if len(self._words) != base.group.order:
            raise ValidationError("rep generators do not generate the acting group")
        self._provider = gen_matrix
        self._cache: dict[tuple[int, int], RationalMatrix] = {}
        self.name = name or f"rep over {base.name}"
        for comp in base.pi0():
            d = self.fiber_dims[comp.rep]
            for m in comp.members:
                if self.fiber_dims[m] != d:
                    raise ValidationError(
                        "fiber dimension not constant on a component"
                    )
        if validate:
            self._validate()

    def _gen_mat(self, s: int, i: int) -> RationalMatrix:
        key = (s, i)
        m = self._cache.get(key)
        if m is None:
            m = self._provider(s, i)
            want = (self.fiber_dims[self.base.act(s, i)], self.fiber_dims[i])
            if (m.rows, m.cols) != want:
                raise ValidationError(
                    f"generator matrix at ({s},{i}) has shape "
                    f"{(m.rows, m.cols)}, expected {want}"
                )
            self._cache[key] = m
        return m

    def matrix(self, g: int, i: int) -> RationalMatrix:
        """Matrix of the morphism i -> g.i, composed along a word for g."""
        key = (g, i)
        m = self._cache.get(key)
        if m is not None:
            return m
        out = RationalMatrix.identity(self.fiber_dims[i])
        cur = i
        for s in self._words[g]:
            out = self._gen_mat(s, cur) @ out
            cur = self.base.act(s, cur)
        self._cache[key] = out
        return out

    def _validate(self) -> None:
        base, group = self.base, self.base.group
        n = len(base.objects)
        if n == 0:
            return
        # generator matrices must be two-sided invertible along the action
        for s in self.gens:
            sinv = group.inv(s)
            for i in range(n):
                j = base.act(s, i)
                if not (self.matrix(sinv, j) @ self._gen_mat(s, i)).is_identity():
                    raise ValidationError(
                        f"generator matrix at ({s},{i}) is not invertible "
                        "along the action"
                    )
        if self.caps.full_validation:
            for g in group.elements():
                for h in group.elements():
                    gh = group.mul(g, h)
                    for i in range(n):
                        lhs = self.matrix(g, base.act(h, i)) @ self.matrix(h, i)
                        if lhs != self.matrix(gh, i):
                            raise ValidationError(
                                f"rep not functorial at ({g},{h},{i})"
                            )
            return
        rng = random.Random(self.caps.validation_seed)
        objects = [rng.randrange(n) for _ in range(min(_WORD_OBJECTS, n))]
        for _ in range(_WORD_CHECKS):
            word = [rng.choice(self.gens) for _ in range(rng.randrange(1, _WORD_LENGTH))]
            g = 0
            for s in word:
                g = group.mul(s, g)
            closing = group.inv(g)  # word * closing word == identity
            for i in objects:
                m = RationalMatrix.identity(self.fiber_dims[i])
                cur = i
                for s in word:
                    m = self._gen_mat(s, cur) @ m
                    cur = self.base.act(s, cur)
                m = self.matrix(closing, cur) @ m
                if not m.is_identity():
                    raise ValidationError(
                        "rep fails a random identity-word check"
                    )


def trivial_line(base: FiniteGroupoid, name: str = "") -> GroupoidRep:
    one = RationalMatrix.identity(1)
    return GroupoidRep(
        base, (1,) * len(base.objects), lambda s, i: one,
        name=name or f"line over {base.name}",
    )


def zero_rep(base: FiniteGroupoid) -> GroupoidRep:
    zero = RationalMatrix.identity(0)
    return GroupoidRep(base, (0,) * len(base.objects), lambda s, i: zero)


def regular_rep(group: FiniteGroup) -> GroupoidRep:
    """Left translation of G on itself over the one-object groupoid."""
    base = point_groupoid(group)
    n = group.order

    def provider(s: int, i: int) -> RationalMatrix:
        rows = [[Fraction(0)] * n for _ in range(n)]
        for h in range(n):
            rows[group.mul(s, h)][h] = Fraction(1)
        return RationalMatrix.from_rows(rows)

    return GroupoidRep(base, (n,), provider, name=f"regular({group.name})")


def _component_projector(rep: GroupoidRep, comp_rep: int) -> RationalMatrix:
    auts = rep.base.aut_group(comp_rep)
    d = rep.fiber_dims[comp_rep]
    acc = RationalMatrix.zeros(d, d)
    for a in auts:
        acc = acc + rep.matrix(a, comp_rep)
    p = acc.scale(Fraction(1, len(auts)))
    if (p @ p) != p:
        raise ValidationError("averaging projector is not idempotent")
    return p


def invariants_by_component(rep: GroupoidRep) -> list[tuple[int, int]]:
    """(component index, invariant dimension) pairs, in component order."""
    out = []
    for ci, comp in enumerate(rep.base.pi0()):
        out.append((ci, _component_projector(rep, comp.rep).rank()))
    return out


def invariants_dim(rep: GroupoidRep) -> int:
    return sum(d for _, d in invariants_by_component(rep))


@dataclass(frozen=True)
class Section:
    """A parallel choice of fiber vector, one per component representative."""

    rep: GroupoidRep
    vectors: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        comps = self.rep.base.pi0()
        if len(self.vectors) != len(comps):
            raise ValidationError("section needs one vector per component")
        for vec, comp in zip(self.vectors, comps):
            if len(vec) != self.rep.fiber_dims[comp.rep]:
                raise ValidationError("section vector has the wrong dimension")
            p = _component_projector(self.rep, comp.rep)
            col = RationalMatrix(len(vec), 1, tuple((x,) for x in vec))
            if (p @ col) != col:
                raise ValidationError(
                    "section vector is not stabilizer-invariant"
                )


def section_basis(rep: GroupoidRep) -> list[Section]:
    """One section per projector-image basis vector, zero elsewhere."""
    comps = rep.base.pi0()
    projectors = [_component_projector(rep, c.rep) for c in comps]
    sections = []
    for ci, (comp, p) in enumerate(zip(comps, projectors)):
        for j in p.pivot_columns():
            vectors = []
            for other_ci, other in enumerate(comps):
                d = rep.fiber_dims[other.rep]
                if other_ci == ci:
                    vectors.append(p.column(j))
                else:
                    vectors.append((Fraction(0),) * d)
            sections.append(Section(rep, tuple(vectors)))
    return sections


def pull(rep: GroupoidRep, functor: GroupoidFunctor) -> GroupoidRep:
    """Restrict along a functor: fibers and matrices transport backwards."""
    if functor.target is not rep.base:
        if functor.target.objects != rep.base.objects or not (
            functor.target.group.same_structure(rep.base.group)
        ):
            raise ValidationError("pull requires the rep to live on the functor target")
    src = functor.source
    dims = tuple(rep.fiber_dims[functor(i)] for i in range(len(src.objects)))
    tau = functor.translation

    def provider(s: int, i: int) -> RationalMatrix:
        return rep.matrix(tau(s), functor(i))

    return GroupoidRep(
        src, dims, provider, name=f"pull({rep.name})",
    )


class _FiberData:
    """Per-target-object limit data for a pushforward."""

    __slots__ = ("fiber", "pulled", "bases", "dim", "offsets")

    def __init__(self, rep: GroupoidRep, functor: GroupoidFunctor, xi: int, caps: Caps):
        fiber, proj = homotopy_fiber(functor, xi, caps)
        self.fiber = fiber
        self.pulled = pull(rep, proj)
        self.bases: list[RationalMatrix] = []
        self.offsets: list[int] = []
        total = 0
        for comp in fiber.pi0():
            p = _component_projector(self.pulled, comp.rep)
            cols = p.pivot_columns()
            basis = RationalMatrix(
                p.rows, len(cols), tuple(
                    tuple(row[c] for c in cols) for row in p.entries
                ),
            )
            self.offsets.append(total)
            self.bases.append(basis)
            total += len(cols)
        self.dim = total


def push_limit(
    rep: GroupoidRep, functor: GroupoidFunctor, caps: Optional[Caps] = None
) -> GroupoidRep:
    """Fiberwise limit along a functor: invariants over each homotopy fiber.

    The fiber over a target object collects (source object, witness)
    pairs; a target morphism relabels witnesses, and vectors follow via
    the source rep's transport to component representatives.
    """
    if functor.source is not rep.base:
        if functor.source.objects != rep.base.objects or not (
            functor.source.group.same_structure(rep.base.group)
        ):
            raise ValidationError("push requires the rep to live on the functor source")
    caps = caps if caps is not None else rep.caps
    target = functor.target
    data: dict[int, _FiberData] = {}

    def fiber_data(xi: int) -> _FiberData:
        d = data.get(xi)
        if d is None:
            d = _FiberData(rep, functor, xi, caps)
            data[xi] = d
        return d

    dims = tuple(fiber_data(xi).dim for xi in range(len(target.objects)))
    tg = target.group

    def provider(s: int, xi: int) -> RationalMatrix:
        src_d = fiber_data(xi)
        xi2 = target.act(s, xi)
        dst_d = fiber_data(xi2)
        out_cols: list[tuple[Fraction, ...]] = []
        fiber, fiber2 = src_d.fiber, dst_d.fiber
        for ci, comp in enumerate(fiber.pi0()):
            basis = src_d.bases[ci]
            xp, u = fiber.objects[comp.rep]
            moved = fiber2.index_of((xp, tg.mul(s, u)))
            ci2 = fiber2.component_index(moved)
            t = fiber2.transport_to(moved)
            back = fiber2.group.inv(t)
            trans = dst_d.pulled.matrix(back, moved)
            images = trans @ basis
            coeffs = solve_columns(dst_d.bases[ci2], images)
            for j in range(basis.cols):
                col = [Fraction(0)] * dst_d.dim
                off = dst_d.offsets[ci2]
                for k in range(coeffs.rows):
                    col[off + k] = coeffs.entries[k][j]
                out_cols.append(tuple(col))
        rows = tuple(
            tuple(out_cols[c][r] for c in range(len(out_cols)))
            for r in range(dst_d.dim)
        )
        return RationalMatrix(dst_d.dim, src_d.dim, rows)

    return GroupoidRep(
        target, dims, provider, name=f"push({rep.name})", caps=caps,
    )


# -- serialization -------------------------------------------------------------


def rep_to_json(rep: GroupoidRep, base_ref: Mapping) -> dict:
    """Serialize with sparse generator matrices and "p/q" rationals."""
    matrices = []
    for s in rep.gens:
        for i in range(len(rep.base.objects)):
            m = rep._gen_mat(s, i)
            entries = [
                [r, c, format_rational(x)]
                for r, row in enumerate(m.entries)
                for c, x in enumerate(row)
                if x != 0
            ]
            matrices.append({"gen": s, "object": i, "entries": entries})
    return {
        "base": dict(base_ref),
        "fiber_dims": list(rep.fiber_dims),
        "generators": list(rep.gens),
        "matrices": matrices,
    }


def rep_from_json(doc: Mapping, caps: Caps = DEFAULT_CAPS) -> GroupoidRep:
    from .bundles import ManifoldTag, bundle_groupoid
    from .groups import group_from_spec

    for key in ("base", "fiber_dims", "generators", "matrices"):
        if key not in doc:
            raise ValidationError(f"rep document needs '{key}'")
    base_ref = doc["base"]
    if "group" not in base_ref or "manifold" not in base_ref:
        raise ValidationError("rep base needs 'group' and 'manifold'")
    group = group_from_spec(base_ref["group"], caps)
    manifold = ManifoldTag.parse(base_ref["manifold"])
    base = bundle_groupoid(group, manifold, caps).groupoid
    dims = [int(d) for d in doc["fiber_dims"]]
    if len(dims) != len(base.objects):
        raise ValidationError(
            f"fiber_dims has {len(dims)} entries for {len(base.objects)} objects"
        )
    gens = tuple(int(g) for g in doc["generators"])
    table: dict[tuple[int, int], RationalMatrix] = {}
    for rec in doc["matrices"]:
        s, i = int(rec["gen"]), int(rec["object"])
        if s not in gens:
            raise ValidationError(f"matrix given for unlisted generator {s}")
        if not 0 <= i < len(base.objects):
            raise ValidationError(f"matrix object index {i} out of range")
        nrows = dims[base.act(s, i)]
        ncols = dims[i]
        grid = [[Fraction(0)] * ncols for _ in range(nrows)]
        for r, c, val in rec["entries"]:
            if not (0 <= int(r) < nrows and 0 <= int(c) < ncols):
                raise ValidationError("sparse entry out of matrix bounds")
            grid[int(r)][int(c)] = parse_rational(val)
        table[(s, i)] = RationalMatrix.from_rows(grid) if nrows else RationalMatrix.zeros(nrows, ncols)
    for s in gens:
        for i in range(len(base.objects)):
            if (s, i) not in table:
                raise ValidationError(
                    f"missing matrix for generator {s} at object {i}"
                )

    return GroupoidRep(
        base, dims, lambda s, i: table[(s, i)], gens=gens, caps=caps,
    )

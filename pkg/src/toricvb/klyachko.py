"""Toric vector bundles as filtration data.

A bundle on the toric variety of a fan is a vector space k^r with one
decreasing filtration per ray, finitely many jumps each.  The discrete
invariant is a multiset of r classes of integral linear functions per
maximal cone; compatibility of the two is an exact rank condition checked
on a finite critical grid.  The splitting construction realizes the
compatibility witness explicitly.
"""

import itertools
from dataclasses import dataclass

from toricvb.errors import InferenceError, Report
from toricvb.fan import class_eval, class_reduce, class_restrict
from toricvb.linalg import (
    Subspace,
    complement_within,
    intersect,
    solve_integer,
    subspace_sum,
)


@dataclass(frozen=True)
class Filtration:
    """Decreasing filtration of k^r attached to one ray.

    entries lists (jump, space) with dims strictly decreasing from r and
    jumps strictly increasing; the space at index i is the first listed
    entry whose jump is >= i, and zero when i exceeds every jump.
    """

    ray: int
    entries: tuple

    @property
    def jumps(self):
        return tuple(j for j, _ in self.entries)

    def value_at(self, i):
        for jump, space in self.entries:
            if jump >= i:
                return space
        first = self.entries[0][1]
        return Subspace.zero(first.field, first.ambient_dim)


def eval_filtration(f, i):
    return f.value_at(i)


@dataclass(frozen=True)
class KlyachkoData:
    """A toric vector bundle: field, rank, fan, and one filtration per ray
    (filtrations[k] belongs to ray k)."""

    field: object
    rank: int
    fan: object
    filtrations: tuple

    def filtration(self, ray_index):
        return self.filtrations[ray_index]


@dataclass(frozen=True)
class MultisetPsi:
    """Per maximal cone, a size-r multiset of classes of linear functions,
    stored as canonical representatives sorted by canonical lift."""

    fan: object
    rank: int
    multisets: tuple

    @classmethod
    def from_lifts(cls, fan, lifts_per_cone):
        """Build from arbitrary integer lifts, one list per maximal cone."""
        if len(lifts_per_cone) != len(fan.max_cones):
            raise ValueError("one multiset per maximal cone is required")
        sizes = {len(ms) for ms in lifts_per_cone}
        if len(sizes) != 1:
            raise ValueError(f"multiset sizes differ: {sorted(sizes)}")
        multisets = []
        for k, lifts in enumerate(lifts_per_cone):
            cone = fan.max_cone(k)
            classes = sorted((class_reduce(u, cone) for u in lifts),
                             key=lambda x: x.sort_key())
            multisets.append(tuple(classes))
        return cls(fan, sizes.pop(), tuple(multisets))

    def multiset(self, cone_index):
        return self.multisets[cone_index]


@dataclass(frozen=True)
class Splitting:
    """Decomposition k^r = (+) E_[u] adapted to every ray filtration of a
    cone; parts maps each class to its (nonzero) summand."""

    cone: object
    parts: tuple

    def part(self, cls):
        for c, space in self.parts:
            if c == cls:
                return space
        raise KeyError(cls)


def validate_filtrations(d):
    """Check the Filtration invariants for every ray; first violation wins."""
    if len(d.filtrations) != len(d.fan.rays):
        return Report(False, "need exactly one filtration per ray")
    for k, f in enumerate(d.filtrations):
        if f.ray != k:
            return Report(False, f"filtration at position {k} is labeled for ray {f.ray}")
        if not f.entries:
            return Report(False, f"ray {k}: empty filtration")
        dims = [s.dim for _, s in f.entries]
        jumps = list(f.jumps)
        spaces = [s for _, s in f.entries]
        for s in spaces:
            if s.field != d.field or s.ambient_dim != d.rank:
                return Report(False, f"ray {k}: subspace over wrong field or ambient")
        if dims[0] != d.rank:
            return Report(False, f"ray {k}: first entry has dim {dims[0]}, expected {d.rank}")
        if any(dims[i] <= dims[i + 1] for i in range(len(dims) - 1)):
            return Report(False, f"ray {k}: dims {dims} are not strictly decreasing")
        if any(jumps[i] >= jumps[i + 1] for i in range(len(jumps) - 1)):
            return Report(False, f"ray {k}: jumps {jumps} are not strictly increasing")
        for i in range(len(spaces) - 1):
            if not spaces[i].contains(spaces[i + 1]):
                return Report(False, f"ray {k}: entry {i + 1} is not nested in entry {i}")
    return Report(True, "OK")


def intersection_dimension(d, cone, iv):
    """dim of the intersection of E^rho(i_rho) over the rays of the cone."""
    for r in cone.rays:
        if r not in iv:
            raise ValueError(f"missing assignment for ray {r}")
    space = Subspace.full(d.field, d.rank)
    for r in cone.rays:
        space = intersect(space, d.filtration(r).value_at(iv[r]))
        if space.is_zero():
            break
    return space.dim


def counting_function(ms, iv):
    """Number of classes (with multiplicity) evaluating >= iv on every ray."""
    count = 0
    for cls in ms:
        for r, bound in iv.items():
            if class_eval(cls, r) < bound:
                break
        else:
            count += 1
    return count


def _critical_grid(d, cone, ms):
    """Per ray, the sorted union of filtration jumps and multiset values."""
    grid = []
    for r in cone.rays:
        vals = set(d.filtration(r).jumps)
        vals.update(class_eval(cls, r) for cls in ms)
        grid.append(sorted(vals))
    return grid


def check_compatibility(d, psi):
    """Exact rank test: on every maximal cone, intersection dimensions of
    the filtrations must match the counting function of the multiset on the
    complete critical grid.  Witness is (cone index, first bad tuple)."""
    if psi.fan != d.fan:
        raise ValueError("data and multisets live on different fans")
    if psi.rank != d.rank:
        raise ValueError(f"rank mismatch: data {d.rank}, multisets {psi.rank}")
    for k in range(len(d.fan.max_cones)):
        cone = d.fan.max_cone(k)
        ms = psi.multiset(k)
        grid = _critical_grid(d, cone, ms)
        for tup in itertools.product(*grid):
            iv = dict(zip(cone.rays, tup))
            have = intersection_dimension(d, cone, iv)
            want = counting_function(ms, iv)
            if have != want:
                return Report(False,
                              f"cone {k}: at {tup} the filtrations give dim {have} "
                              f"but the multiset counts {want}",
                              witness=(k, tup))
    return Report(True, "OK")


def validate_psi(psi):
    """Size and face-compatibility checks.

    For every pair of maximal cones the restrictions of their multisets to
    the common face (the shared rays) must agree as multisets of classes.
    """
    r = psi.rank
    for k, ms in enumerate(psi.multisets):
        if len(ms) != r:
            return Report(False, f"cone {k}: multiset has {len(ms)} elements, expected {r}")
    ncones = len(psi.fan.max_cones)
    for k in range(ncones):
        for k2 in range(k + 1, ncones):
            common = sorted(set(psi.fan.max_cones[k]) & set(psi.fan.max_cones[k2]))
            if not common:
                continue
            face = psi.fan.cone(common)
            left = sorted(class_restrict(c, face).canonical for c in psi.multiset(k))
            right = sorted(class_restrict(c, face).canonical for c in psi.multiset(k2))
            if left != right:
                return Report(False,
                              f"cones {k} and {k2} disagree on their common face "
                              f"{tuple(common)}: {left} vs {right}",
                              witness=(k, k2, tuple(common)))
    return Report(True, "OK")


def infer_multiset(d, cone):
    """Multiset of classes of the restriction to the chart of a maximal cone.

    Multiplicities are multidimensional finite differences of intersection
    dimensions over the jump grid; each positive multiplicity is matched to
    an integral linear function via lattice normal forms.  Raises
    InferenceError when the data is not a bundle on this chart.
    """
    rays = cone.rays
    s = len(rays)
    jump_lists = [d.filtration(r).jumps for r in rays]
    ray_mat = cone.fan.ray_matrix(rays)

    def idim(tup):
        return intersection_dimension(d, cone, dict(zip(rays, tup)))

    classes = []
    total = 0
    for a in itertools.product(*jump_lists):
        m = 0
        for bump in itertools.product((0, 1), repeat=s):
            sign = -1 if sum(bump) % 2 else 1
            m += sign * idim(tuple(x + b for x, b in zip(a, bump)))
        if m == 0:
            continue
        if m < 0:
            raise InferenceError(
                f"not a toric vector bundle on U_sigma (rays {rays}): "
                f"multiplicity {m} at {a}", witness=a)
        lift = solve_integer(ray_mat, a)
        if lift is None:
            raise InferenceError(
                f"not a toric vector bundle on U_sigma (rays {rays}): "
                f"values {a} admit no integral linear function", witness=a)
        classes.extend([class_reduce(lift, cone)] * m)
        total += m
    if total != d.rank:
        raise InferenceError(
            f"not a toric vector bundle on U_sigma (rays {rays}): "
            f"multiplicities sum to {total}, expected {d.rank}", witness=None)
    classes.sort(key=lambda x: x.sort_key())
    grid = _critical_grid(d, cone, classes)
    for tup in itertools.product(*grid):
        iv = dict(zip(rays, tup))
        if intersection_dimension(d, cone, iv) != counting_function(classes, iv):
            raise InferenceError(
                f"not a toric vector bundle on U_sigma (rays {rays}): "
                f"grid mismatch at {tup}", witness=tup)
    return tuple(classes)


def psi_of(d):
    """Infer the multiset on every maximal cone and validate the result."""
    lifts = []
    for k in range(len(d.fan.max_cones)):
        ms = infer_multiset(d, d.fan.max_cone(k))
        lifts.append([c.lift for c in ms])
    psi = MultisetPsi.from_lifts(d.fan, lifts)
    rep = validate_psi(psi)
    if not rep.ok:
        raise InferenceError(f"data is not a toric vector bundle on the whole fan: "
                             f"{rep.message}", witness=rep.witness)
    return psi


def _class_leq(a, b, rays):
    """a <= b iff a - b is nonnegative on the cone, i.e. a(v) >= b(v) on rays."""
    return all(class_eval(a, r) >= class_eval(b, r) for r in rays)


def split_cone(d, cone, ms):
    """Splitting k^r = (+) E_[u] adapted to all ray filtrations of the cone.

    Distinct classes are processed along a linear extension of the order
    "[u] <= [u'] iff [u] - [u'] is nonnegative on the cone", minimal ones
    first, ties broken by canonical representative; each summand is the
    deterministic complement of the previously placed ones inside the
    intersection of filtration spaces at the class's ray values.
    """
    rays = cone.rays
    distinct = []
    mult = {}
    for cls in ms:
        if cls in mult:
            mult[cls] += 1
        else:
            mult[cls] = 1
            distinct.append(cls)

    remaining = sorted(distinct, key=lambda x: x.sort_key())
    order = []
    while remaining:
        for cls in remaining:
            if not any(_class_leq(other, cls, rays) for other in remaining
                       if other != cls):
                order.append(cls)
                remaining.remove(cls)
                break
        else:
            raise ValueError("cycle in the class order; equal classes were not merged")

    placed = Subspace.zero(d.field, d.rank)
    parts = []
    for cls in order:
        cap = Subspace.full(d.field, d.rank)
        for r in rays:
            cap = intersect(cap, d.filtration(r).value_at(class_eval(cls, r)))
        below = Subspace.zero(d.field, d.rank)
        for prev, space in parts:
            if _class_leq(prev, cls, rays) and prev != cls:
                below = subspace_sum(below, space)
        part = complement_within(below, cap)
        if part.dim != mult[cls]:
            raise ValueError(
                f"incompatible data: class {cls.canonical} received dim {part.dim}, "
                f"expected multiplicity {mult[cls]}")
        parts.append((cls, part))
        placed = subspace_sum(placed, part)
    if placed.dim != d.rank:
        raise ValueError("incompatible data: summands do not span")
    parts.sort(key=lambda t: t[0].sort_key())
    return Splitting(cone, tuple(parts))


def is_morphism(phi, src, dst):
    """True iff phi maps every E^rho(i) of src into the same-index space of
    dst; checked at the source's jump values, which suffices because
    filtrations are constant between jumps."""
    if src.fan != dst.fan:
        raise ValueError("source and target live on different fans")
    if src.field != dst.field:
        raise ValueError("source and target are over different fields")
    if phi.rows != dst.rank or phi.cols != src.rank:
        raise ValueError(f"map must be {dst.rank} x {src.rank}, got {phi.rows} x {phi.cols}")
    for k in range(len(src.fan.rays)):
        sf = src.filtration(k)
        df = dst.filtration(k)
        for jump in sf.jumps:
            image = sf.value_at(jump).apply(phi)
            if not df.value_at(jump).contains(image):
                return False
    return True

"""The framed moduli of toric vector bundles with fixed multiset data.

A point is a collection of partial flags, one per ray, with dimension sets
read off from the multisets; membership in the moduli is a finite list of
rank conditions on intersections of flag subspaces.  Over a prime field
the moduli can be enumerated outright and analyzed under the PGL action.

The enumeration keeps subspaces as flat int tuples and answers rank
conditions through the mod-p kernels with memoized intersection
dimensions; the public check_membership path uses exact Subspace
arithmetic, and the two are held together by tests.
"""

import itertools
import os
from dataclasses import dataclass
from functools import lru_cache

from toricvb import kernels
from toricvb.errors import BudgetError
from toricvb.fan import class_eval
from toricvb.klyachko import Filtration, KlyachkoData, counting_function
from toricvb.linalg import Field, Mat, Subspace, intersect


def enumeration_budget():
    """Search budget (membership checks) for enumerations; configurable
    through TORICVB_ENUM_BUDGET."""
    return int(os.environ.get("TORICVB_ENUM_BUDGET", 10**8))


@dataclass(frozen=True)
class FlagShape:
    """Per ray, the dimension set J and the jump function of the induced
    filtration: per_ray[k] lists (dim, jump) pairs with dims strictly
    decreasing from the rank and jumps strictly increasing."""

    rank: int
    per_ray: tuple

    def dims(self, ray):
        return tuple(j for j, _ in self.per_ray[ray])

    def proper_dims(self, ray):
        return tuple(j for j, _ in self.per_ray[ray] if j < self.rank)

    def jump_of(self, ray, dim):
        for j, jump in self.per_ray[ray]:
            if j == dim:
                return jump
        raise KeyError(f"dimension {dim} is not in J of ray {ray}")


@dataclass(frozen=True)
class FlagCollection:
    """A candidate moduli point: per ray, the nested proper subspaces of
    the flag, dims strictly decreasing (the full space is implicit)."""

    field: Field
    rank: int
    chains: tuple

    def chain(self, ray):
        return self.chains[ray]


@dataclass(frozen=True)
class RankCondition:
    """Required dimension of an intersection of flag subspaces: for each
    (ray, dim) pair intersect the dim-dimensional flag member at that ray;
    the result must have dimension required_dim.  Single-ray conditions
    hold automatically for flags of the right shape and are marked
    trivial."""

    cone: object
    pairs: tuple
    required_dim: int
    trivial: bool


@dataclass(frozen=True)
class PointSet:
    """All flag collections over a prime field satisfying the conditions."""

    psi: object
    field: Field
    points: tuple

    @property
    def count(self):
        return len(self.points)


@dataclass(frozen=True)
class OrbitReport:
    orbit_count: int
    free: bool
    orbit_sizes: tuple
    group_order: int


def flag_shape(psi):
    """Dimension sets and jump functions read off the multisets.

    For each ray, the values of any containing cone's multiset on the ray
    generator determine dim E(i) = #{values >= i}; J collects the distinct
    nonzero counts and the jump of j is the largest i attaining count j.
    Independence of the chosen cone is guaranteed by validate_psi.
    """
    per_ray = []
    for ray in range(len(psi.fan.rays)):
        containing = next((k for k, c in enumerate(psi.fan.max_cones) if ray in c), None)
        if containing is None:
            raise ValueError(f"ray {ray} lies in no maximal cone")
        values = sorted(class_eval(cls, ray) for cls in psi.multiset(containing))
        pairs = []
        for v in sorted(set(values)):
            count = sum(1 for w in values if w >= v)
            pairs.append((count, v))
        pairs.sort(key=lambda t: -t[0])
        per_ray.append(tuple(pairs))
    return FlagShape(psi.rank, tuple(per_ray))


def check_flag_shape(flags, shape):
    """Raise ValueError unless the flags have exactly the shape's proper
    dimensions, nested, over a consistent field and ambient dimension."""
    if flags.rank != shape.rank:
        raise ValueError(f"rank mismatch: flags {flags.rank}, shape {shape.rank}")
    if len(flags.chains) != len(shape.per_ray):
        raise ValueError(f"expected {len(shape.per_ray)} flags, got {len(flags.chains)}")
    for ray, chain in enumerate(flags.chains):
        want = shape.proper_dims(ray)
        got = tuple(s.dim for s in chain)
        if got != want:
            raise ValueError(f"ray {ray}: flag dims {got}, expected {want}")
        for s in chain:
            if s.field != flags.field or s.ambient_dim != flags.rank:
                raise ValueError(f"ray {ray}: subspace over wrong field or ambient")
        for a, b in zip(chain, chain[1:]):
            if not a.contains(b):
                raise ValueError(f"ray {ray}: flag subspaces are not nested")


def generate_conditions(psi):
    """All rank conditions: for every maximal cone, every nonempty subset
    of its rays, and every choice of dims, the count of multiset classes
    clearing the jump thresholds.  Conditions repeated across cones must
    agree and are emitted once, in canonical order."""
    shape = flag_shape(psi)
    seen = {}
    for k, cone_rays in enumerate(psi.fan.max_cones):
        ms = psi.multiset(k)
        rays = sorted(cone_rays)
        for size in range(1, len(rays) + 1):
            for subset in itertools.combinations(rays, size):
                dim_choices = [shape.dims(r) for r in subset]
                for dims in itertools.product(*dim_choices):
                    iv = {r: shape.jump_of(r, j) for r, j in zip(subset, dims)}
                    req = counting_function(ms, iv)
                    key = (subset, dims)
                    if key in seen and seen[key] != req:
                        raise ValueError(
                            f"inconsistent condition {key}: required dim "
                            f"{seen[key]} vs {req}; the multisets are not "
                            f"face-compatible")
                    seen[key] = req
    out = []
    for (subset, dims) in sorted(seen):
        out.append(RankCondition(
            cone=psi.fan.cone(subset),
            pairs=tuple(zip(subset, dims)),
            required_dim=seen[(subset, dims)],
            trivial=len(subset) == 1,
        ))
    return tuple(out)


def _flag_member(flags, ray, dim):
    if dim == flags.rank:
        return Subspace.full(flags.field, flags.rank)
    for s in flags.chain(ray):
        if s.dim == dim:
            return s
    raise ValueError(f"ray {ray} has no flag member of dimension {dim}")


def check_membership(flags, psi):
    """Evaluate every generated condition on the flags.

    Returns (ok, violations); raises ValueError when the flags do not have
    the shape derived from the multisets.
    """
    shape = flag_shape(psi)
    check_flag_shape(flags, shape)
    violations = []
    for cond in generate_conditions(psi):
        space = Subspace.full(flags.field, flags.rank)
        for ray, dim in cond.pairs:
            space = intersect(space, _flag_member(flags, ray, dim))
        if space.dim != cond.required_dim:
            violations.append(cond)
    return (not violations, tuple(violations))


def flags_to_klyachko(flags, shape, fan, field):
    """Filtration data whose flags are the given ones: at each ray the
    space at index i is the largest flag member whose jump is >= i."""
    check_flag_shape(flags, shape)
    filtrations = []
    for ray in range(len(fan.rays)):
        entries = []
        for dim, jump in shape.per_ray[ray]:
            entries.append((jump, _flag_member(flags, ray, dim)))
        filtrations.append(Filtration(ray=ray, entries=tuple(entries)))
    return KlyachkoData(field=field, rank=shape.rank, fan=fan,
                        filtrations=tuple(filtrations))


# ---------------------------------------------------------------------------
# finite-field enumeration


@lru_cache(maxsize=None)
def _subspaces(r, d, p):
    """All canonical RREF bases of d-dimensional subspaces of F_p^r, each a
    tuple of row tuples, sorted."""
    if d == 0:
        return ((),)
    out = []
    for pivots in itertools.combinations(range(r), d):
        pivot_set = set(pivots)
        free = [(i, c) for i in range(d) for c in range(r)
                if c > pivots[i] and c not in pivot_set]
        for fill in itertools.product(range(p), repeat=len(free)):
            rows = [[0] * r for _ in range(d)]
            for i, c in zip(range(d), pivots):
                rows[i][c] = 1
            for (i, c), v in zip(free, fill):
                rows[i][c] = v
            out.append(tuple(tuple(row) for row in rows))
    out.sort()
    return tuple(out)


def _canon_rows(rows, r, p):
    flat = [x for row in rows for x in row]
    out, rank = kernels.rref_mod_p(flat, len(rows), r, p)
    return tuple(tuple(out[i * r:(i + 1) * r]) for i in range(rank))


def _ann_flat(rows, r, p):
    """Flat RREF basis of the annihilator of the row span, under the dot
    pairing on F_p^r."""
    d = len(rows)
    if d == 0:
        ident = Mat.identity(Field(p), r)
        return tuple(x for row in ident.entries for x in row)
    flat = [x for row in rows for x in row]
    red, rank = kernels.rref_mod_p(flat, d, r, p)
    pivots = []
    for i in range(rank):
        for j in range(r):
            if red[i * r + j]:
                pivots.append(j)
                break
    pivot_set = set(pivots)
    vecs = []
    for f in range(r):
        if f in pivot_set:
            continue
        v = [0] * r
        v[f] = 1
        for i, c in enumerate(pivots):
            v[c] = (-red[i * r + f]) % p
        vecs.append(v)
    if not vecs:
        return ()
    flat = [x for v in vecs for x in v]
    out, nrows = kernels.rref_mod_p(flat, len(vecs), r, p)
    return tuple(out)


@lru_cache(maxsize=None)
def _chains(r, dims, p):
    """All nested chains of subspaces of F_p^r with the given (strictly
    decreasing) dims, as tuples of canonical bases, sorted."""
    if not dims:
        return ((),)

    def inside(rows, rem):
        # chains of the remaining dims inside the span of `rows`
        if not rem:
            return [()]
        d = len(rows)
        out = []
        for coeff in _subspaces(d, rem[0], p):
            sub = []
            for crow in coeff:
                vec = [0] * r
                for c, brow in zip(crow, rows):
                    if c:
                        for j in range(r):
                            vec[j] = (vec[j] + c * brow[j]) % p
                sub.append(tuple(vec))
            canon = _canon_rows(sub, r, p)
            for tail in inside(canon, rem[1:]):
                out.append((canon,) + tail)
        return out

    chains = []
    for top in _subspaces(r, dims[0], p):
        for tail in inside(top, dims[1:]):
            chains.append((top,) + tail)
    chains.sort()
    return tuple(chains)


class _FlagSpace:
    """Search space of flag collections over F_p for a fixed multiset
    collection, with memoized intersection dimensions for the compiled
    rank conditions."""

    def __init__(self, psi, p):
        self.psi = psi
        self.p = p
        self.rank = psi.rank
        self.shape = flag_shape(psi)
        nrays = len(psi.fan.rays)
        self.candidates = [_chains(self.rank, self.shape.proper_dims(ray), p)
                           for ray in range(nrays)]
        # position of each proper dim within a ray's chain
        self._pos = [
            {d: i for i, d in enumerate(self.shape.proper_dims(ray))}
            for ray in range(nrays)
        ]
        self._ann = {}
        for cand in self.candidates:
            for chain in cand:
                for rows in chain:
                    if rows not in self._ann:
                        self._ann[rows] = _ann_flat(rows, self.rank, p)
        self.conditions = []
        for cond in generate_conditions(psi):
            effective = tuple((ray, self._pos[ray][dim])
                              for ray, dim in cond.pairs if dim < self.rank)
            if len(effective) <= 1:
                continue  # holds automatically for flags of this shape
            self.conditions.append((effective, cond.required_dim))
        self._memo = {}

    def total(self):
        n = 1
        for cand in self.candidates:
            n *= len(cand)
        return n

    def inter_dim(self, bases):
        """Dimension of the intersection of the given subspaces (canonical
        row-tuple bases), memoized."""
        key = tuple(sorted(bases))
        dim = self._memo.get(key)
        if dim is None:
            flat = []
            for rows in bases:
                ann = self._ann.get(rows)
                if ann is None:
                    ann = _ann_flat(rows, self.rank, self.p)
                    self._ann[rows] = ann
                flat.extend(ann)
            nrows = len(flat) // self.rank
            dim = self.rank - kernels.rank_mod_p(flat, nrows, self.rank, self.p)
            self._memo[key] = dim
        return dim

    def is_member(self, selection):
        """selection is one chain per ray, drawn from self.candidates."""
        for effective, required in self.conditions:
            bases = tuple(selection[ray][pos] for ray, pos in effective)
            if self.inter_dim(bases) != required:
                return False
        return True

    def iter_selections(self):
        return itertools.product(*self.candidates)

    def to_collection(self, selection):
        field = Field(self.p)
        chains = []
        for chain in selection:
            chains.append(tuple(
                Subspace._from_rref(field, self.rank, Mat(field, self.rank, rows))
                for rows in chain))
        return FlagCollection(field=field, rank=self.rank, chains=tuple(chains))


def enumerate_points(psi, p):
    """All flag collections over F_p satisfying the rank conditions, in
    canonical order; raises BudgetError when the search space is too big."""
    space = _FlagSpace(psi, p)
    total = space.total()
    budget = enumeration_budget()
    if total > budget:
        raise BudgetError(f"search space of {total} flag collections exceeds "
                          f"the budget of {budget}")
    points = [space.to_collection(sel) for sel in space.iter_selections()
              if space.is_member(sel)]
    return PointSet(psi=psi, field=Field(p), points=tuple(points))


@lru_cache(maxsize=None)
def pgl_matrices(r, p):
    """All elements of PGL_r(F_p), one flat matrix per class, normalized so
    the first nonzero entry in row-major order is 1."""
    out = []
    for flat in itertools.product(range(p), repeat=r * r):
        first = next((x for x in flat if x), 0)
        if first != 1:
            continue
        if kernels.rank_mod_p(flat, r, r, p) == r:
            out.append(flat)
    return tuple(out)


def pgl_order(r, p):
    n = 1
    for k in range(r):
        n *= p**r - p**k
    return n // (p - 1)


def orbit_analysis(pts):
    """Partition of the point set into orbits under the diagonal action of
    PGL_r(F_p) on flags; the action is free iff every orbit has the order
    of the group."""
    if pts.field.is_rational:
        raise ValueError("orbit analysis requires a prime field point set")
    p = pts.field.p
    r = pts.psi.rank
    group = pgl_matrices(r, p)
    budget = enumeration_budget()
    if len(group) * max(1, len(pts.points)) > budget:
        raise BudgetError(f"orbit computation of size {len(group)} x "
                          f"{len(pts.points)} exceeds the budget of {budget}")

    def key_of(collection):
        return tuple(tuple(s.basis.entries for s in chain)
                     for chain in collection.chains)

    index = {key_of(pt): i for i, pt in enumerate(pts.points)}
    transform_memo = {}

    def transformed(g_idx, rows):
        memo_key = (g_idx, rows)
        got = transform_memo.get(memo_key)
        if got is None:
            g = group[g_idx]
            d = len(rows)
            flat = [x for row in rows for x in row]
            # image of the row span under v -> g v is spanned by rows @ g^T
            gt = tuple(g[j * r + i] for i in range(r) for j in range(r))
            prod = kernels.matmul_mod_p(flat, d, r, gt, r, r, p)
            out, rank = kernels.rref_mod_p(prod, d, r, p)
            got = tuple(tuple(out[i * r:(i + 1) * r]) for i in range(rank))
            transform_memo[memo_key] = got
        return got

    visited = [False] * len(pts.points)
    sizes = []
    for start in range(len(pts.points)):
        if visited[start]:
            continue
        skey = key_of(pts.points[start])
        orbit = set()
        for g_idx in range(len(group)):
            image = tuple(tuple(transformed(g_idx, rows) for rows in chain)
                          for chain in skey)
            target = index.get(image)
            if target is None:
                raise ValueError("the point set is not closed under the "
                                 "group action; it was not an exact "
                                 "enumeration")
            orbit.add(target)
        for i in orbit:
            visited[i] = True
        sizes.append(len(orbit))
    free = all(s == len(group) for s in sizes)
    return OrbitReport(orbit_count=len(sizes), free=free,
                       orbit_sizes=tuple(sizes), group_order=len(group))


def apply_frame_change(flags, phi):
    """The flag collection with every subspace mapped through the
    invertible matrix phi."""
    if phi.rows != phi.cols or phi.rows != flags.rank:
        raise ValueError(f"frame change must be {flags.rank} x {flags.rank}")
    _, rank = phi.rref()
    if rank != phi.rows:
        raise ValueError("frame change matrix is singular")
    chains = tuple(tuple(s.apply(phi) for s in chain) for chain in flags.chains)
    return FlagCollection(field=flags.field, rank=flags.rank, chains=chains)

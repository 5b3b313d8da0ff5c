"""Lattices, simplicial rational fans, and integral linear functions on cones.

A cone is referenced by its set of ray indices; the zero cone (empty set)
is allowed.  Classes of linear functions modulo a cone's perpendicular
lattice carry a canonical representative so that equality is bit-exact.
"""

from dataclasses import dataclass, field as dfield
from functools import lru_cache
from math import gcd

from toricvb.errors import Report
from toricvb.linalg import (
    IntMat,
    Mat,
    QQ,
    integer_kernel,
    reduce_mod_lattice,
    solve_columns,
)


@dataclass(frozen=True)
class Fan:
    """Simplicial rational fan: primitive ray generators plus maximal cones
    given as ray-index tuples.  Input order of rays and cones is preserved."""

    lattice_rank: int
    rays: tuple
    max_cones: tuple

    def __post_init__(self):
        object.__setattr__(self, "rays", tuple(tuple(int(x) for x in r) for r in self.rays))
        object.__setattr__(self, "max_cones",
                           tuple(tuple(int(i) for i in c) for c in self.max_cones))
        for r in self.rays:
            if len(r) != self.lattice_rank:
                raise ValueError("ray length differs from lattice rank")
        for c in self.max_cones:
            if len(set(c)) != len(c):
                raise ValueError(f"repeated ray index in cone {c}")
            for i in c:
                if not 0 <= i < len(self.rays):
                    raise ValueError(f"ray index {i} out of range")

    def cone(self, ray_indices):
        return ConeRef(self, tuple(sorted(ray_indices)))

    def max_cone(self, k):
        return self.cone(self.max_cones[k])

    def ray_matrix(self, ray_indices):
        """Integer matrix whose rows are the generators of the given rays."""
        return IntMat.from_rows([self.rays[i] for i in ray_indices],
                                cols=self.lattice_rank)


@dataclass(frozen=True)
class ConeRef:
    """A cone of the fan, as a sorted tuple of ray indices (possibly empty)."""

    fan: Fan
    rays: tuple

    def __post_init__(self):
        rays = tuple(sorted(self.rays))
        object.__setattr__(self, "rays", rays)
        rayset = set(rays)
        if rays and not any(rayset <= set(c) for c in self.fan.max_cones):
            raise ValueError(f"rays {rays} are not contained in any maximal cone")

    @property
    def dim(self):
        return len(self.rays)


@dataclass(frozen=True)
class LinearClass:
    """An integral linear function on a cone: a lift u in Z^n together with
    the canonical representative of u modulo the cone's perpendicular
    lattice.  Two classes on the same cone are equal iff canonicals agree."""

    cone: ConeRef
    lift: tuple = dfield(compare=False)
    canonical: tuple = ()

    def sort_key(self):
        return self.canonical


def _is_primitive(v):
    g = 0
    for x in v:
        g = gcd(g, x)
    return g == 1


def validate_fan(f):
    """Necessary-condition validation: primitivity, distinctness,
    simpliciality, cone incomparability, and the face condition that a ray
    of one maximal cone lying inside another must be one of its rays.
    Convex separation between cones is not checked.
    """
    for k, v in enumerate(f.rays):
        if not any(v):
            return Report(False, f"ray {k} is the zero vector", witness=k)
        if not _is_primitive(v):
            return Report(False, f"ray {k} = {v} is not primitive", witness=k)
    seen = {}
    for k, v in enumerate(f.rays):
        if v in seen:
            return Report(False, f"rays {seen[v]} and {k} coincide: {v}", witness=(seen[v], k))
        seen[v] = k
    for k, c in enumerate(f.max_cones):
        mat = Mat.from_rows(QQ, [f.rays[i] for i in c], cols=f.lattice_rank)
        _, rank = mat.rref()
        if rank != len(c):
            return Report(False,
                          f"cone {k} = {c} is not simplicial: "
                          f"{len(c)} rays of rank {rank}", witness=k)
    for k, c in enumerate(f.max_cones):
        for k2, c2 in enumerate(f.max_cones):
            if k != k2 and set(c) <= set(c2):
                return Report(False,
                              f"cone {k} = {c} is contained in cone {k2} = {c2}",
                              witness=(k, k2))
    for k, c in enumerate(f.max_cones):
        cols = [f.rays[i] for i in c]
        for k2, c2 in enumerate(f.max_cones):
            if k2 == k:
                continue
            for i in c2:
                if i in c:
                    continue
                coeffs = solve_columns(cols, f.rays[i])
                if coeffs is not None and all(x >= 0 for x in coeffs):
                    return Report(False,
                                  f"ray {i} = {f.rays[i]} of cone {k2} lies inside "
                                  f"cone {k} = {c} but is not one of its rays",
                                  witness=(i, k))
    return Report(True, "OK")


@lru_cache(maxsize=None)
def perp_lattice(c):
    """HNF basis of the sublattice of functionals vanishing on the cone."""
    return integer_kernel(c.fan.ray_matrix(c.rays))


@lru_cache(maxsize=None)
def span_lattice(c):
    """HNF basis of the saturated lattice spanned by the cone's rays
    (the integer points of the cone's linear span)."""
    return integer_kernel(perp_lattice(c))


def class_reduce(u, c):
    """Canonical class of the integral linear function u on the cone c."""
    u = tuple(int(x) for x in u)
    if len(u) != c.fan.lattice_rank:
        raise ValueError("lift length differs from lattice rank")
    return LinearClass(c, u, reduce_mod_lattice(u, perp_lattice(c)))


def class_restrict(x, t):
    """Restriction of a class to a face t of its cone."""
    if not set(t.rays) <= set(x.cone.rays):
        raise ValueError(f"{t.rays} is not a face of {x.cone.rays}")
    if t.fan is not x.cone.fan and t.fan != x.cone.fan:
        raise ValueError("face belongs to a different fan")
    return class_reduce(x.lift, t)


def class_eval(x, ray_index):
    """Pairing of the class with the primitive generator of one of its rays."""
    if ray_index not in x.cone.rays:
        raise ValueError(f"ray {ray_index} is not a ray of cone {x.cone.rays}")
    v = x.cone.fan.rays[ray_index]
    return sum(a * b for a, b in zip(x.lift, v))

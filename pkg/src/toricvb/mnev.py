"""Universality instances: point-line incidence patterns as moduli.

For d points and d' lines in the projective plane with a prescribed
incidence set I, a two-dimensional-cone fan on Z^(d+d') and rank-three
multisets are built so that the framed moduli is exactly the locus of
distinct points and distinct lines realizing I.  The equivalence is
verified exhaustively over small prime fields.
"""

import itertools
from dataclasses import dataclass

from toricvb.errors import BudgetError, Report
from toricvb.fan import Fan
from toricvb.klyachko import MultisetPsi
from toricvb.linalg import Field
from toricvb.moduli import (
    FlagCollection,
    _FlagSpace,
    _subspaces,
    enumerate_points,
    enumeration_budget,
)


@dataclass(frozen=True)
class IncidencePattern:
    """d points, dprime lines, and the set of (point, line) incidences,
    1-based on both sides."""

    d: int
    dprime: int
    incidences: frozenset

    def __post_init__(self):
        object.__setattr__(self, "incidences", frozenset(
            (int(i), int(j)) for i, j in self.incidences))
        if self.d < 1 or self.dprime < 1:
            raise ValueError("need at least one point and one line")
        for i, j in self.incidences:
            if not (1 <= i <= self.d and 1 <= j <= self.dprime):
                raise ValueError(f"incidence ({i}, {j}) out of range")


@dataclass(frozen=True)
class Configuration:
    """d one-dimensional and dprime two-dimensional subspaces of k^3."""

    field: Field
    points: tuple
    lines: tuple

    def __post_init__(self):
        for x in self.points:
            if x.dim != 1 or x.ambient_dim != 3:
                raise ValueError("points must be lines through the origin of k^3")
        for l in self.lines:
            if l.dim != 2 or l.ambient_dim != 3:
                raise ValueError("lines must be planes through the origin of k^3")


def build_universality_instance(pat):
    """Fan on Z^(d+d') with maximal cones <e_i, e_j> and the rank-three
    multisets realizing the incidence pattern; 0 stands for the zero
    function and starred vectors for coordinate functionals:

        {0, e_i*, e_j*}           both indices are points,
        {0, e_j*, e_i* + e_j*}    point i on line j-d,
        {e_i*, e_j*, e_j*}        point i off line j-d,
        {e_i*, e_j*, e_i* + e_j*} both indices are lines.
    """
    n = pat.d + pat.dprime
    rays = [tuple(1 if k == i else 0 for k in range(n)) for i in range(n)]
    max_cones = [(i, j) for i in range(n) for j in range(i + 1, n)]
    fan = Fan(lattice_rank=n, rays=tuple(rays), max_cones=tuple(max_cones))

    def e(i):
        return tuple(1 if k == i else 0 for k in range(n))

    def esum(i, j):
        return tuple((1 if k == i else 0) + (1 if k == j else 0) for k in range(n))

    zero = (0,) * n
    lifts = []
    for i, j in max_cones:
        if j < pat.d:
            lifts.append([zero, e(i), e(j)])
        elif i < pat.d:
            if (i + 1, j - pat.d + 1) in pat.incidences:
                lifts.append([zero, e(j), esum(i, j)])
            else:
                lifts.append([e(i), e(j), e(j)])
        else:
            lifts.append([e(i), e(j), esum(i, j)])
    return fan, MultisetPsi.from_lifts(fan, lifts)


def incidence_pattern_of(cfg):
    """Pattern read off a configuration, plus distinctness flags."""
    inc = set()
    for i, x in enumerate(cfg.points):
        for j, l in enumerate(cfg.lines):
            if l.contains(x):
                inc.add((i + 1, j + 1))
    pat = IncidencePattern(d=len(cfg.points), dprime=len(cfg.lines),
                           incidences=frozenset(inc))
    distinct_points = len(set(cfg.points)) == len(cfg.points)
    distinct_lines = len(set(cfg.lines)) == len(cfg.lines)
    return pat, distinct_points, distinct_lines


def flags_of_config(cfg, shape):
    """The flag collection of a configuration: point rays carry the flag
    with the point as one-dimensional member, line rays the flag with the
    line as two-dimensional member."""
    d, dprime = len(cfg.points), len(cfg.lines)
    if len(shape.per_ray) != d + dprime or shape.rank != 3:
        raise ValueError("shape does not match the configuration")
    chains = []
    for ray in range(d + dprime):
        want = shape.proper_dims(ray)
        if ray < d:
            if want != (1,):
                raise ValueError(f"ray {ray} expects flag dims {want}, not a point")
            chains.append((cfg.points[ray],))
        else:
            if want != (2,):
                raise ValueError(f"ray {ray} expects flag dims {want}, not a line")
            chains.append((cfg.lines[ray - d],))
    return FlagCollection(field=cfg.field, rank=3, chains=tuple(chains))


def config_of_flags(flags, d, dprime):
    """Inverse transcription of flags_of_config."""
    points = tuple(flags.chain(i)[0] for i in range(d))
    lines = tuple(flags.chain(d + j)[0] for j in range(dprime))
    return Configuration(field=flags.field, points=points, lines=lines)


def verify_equivalence(pat, p):
    """Exhaustive check over F_p that moduli membership of the flags of a
    configuration is equivalent to: distinct points, distinct lines, and
    incidences exactly the pattern; also cross-checks the moduli point
    count against the count of qualifying configurations."""
    fan, psi = build_universality_instance(pat)
    space = _FlagSpace(psi, p)
    point_list = _subspaces(3, 1, p)
    line_list = _subspaces(3, 2, p)
    total = len(point_list) ** pat.d * len(line_list) ** pat.dprime
    budget = enumeration_budget()
    if total > budget:
        raise BudgetError(f"{total} configurations exceed the budget of {budget}")

    # chains coincide with single subspaces here, in the same sorted order
    point_chains = space.candidates[0]
    line_chains = space.candidates[pat.d]
    assert point_chains == tuple((s,) for s in point_list)
    assert line_chains == tuple((s,) for s in line_list)

    incident = {}
    for a, x in enumerate(point_list):
        for b, l in enumerate(line_list):
            incident[(a, b)] = space.inter_dim((x, l)) == 1

    matching = 0
    for pts in itertools.product(range(len(point_list)), repeat=pat.d):
        for lns in itertools.product(range(len(line_list)), repeat=pat.dprime):
            selection = tuple(point_chains[a] for a in pts) + \
                tuple(line_chains[b] for b in lns)
            member = space.is_member(selection)
            distinct = len(set(pts)) == pat.d and len(set(lns)) == pat.dprime
            inc = frozenset((i + 1, j + 1)
                            for i, a in enumerate(pts)
                            for j, b in enumerate(lns) if incident[(a, b)])
            expected = distinct and inc == pat.incidences
            if member != expected:
                return Report(
                    False,
                    f"configuration points {pts} lines {lns}: membership "
                    f"{member} but geometric verdict {expected}",
                    witness=(pts, lns))
            if expected:
                matching += 1

    moduli_count = enumerate_points(psi, p).count
    if moduli_count != matching:
        return Report(False,
                      f"moduli has {moduli_count} points but {matching} "
                      f"configurations qualify", witness=(moduli_count, matching))
    return Report(True, f"OK: {matching} configurations match the moduli "
                        f"points over F_{p}")

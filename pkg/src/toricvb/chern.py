"""Equivariant Chern classes as integral piecewise polynomials on a fan.

The i-th class of a multiset collection has, on each maximal cone, the
i-th elementary symmetric polynomial of the multiset's linear functions.
Pieces are well-defined modulo polynomials vanishing on the cone's span;
equality and continuity are decided exactly by substituting a lattice
basis of the span.
"""

from dataclasses import dataclass

from toricvb.errors import Report
from toricvb.fan import span_lattice


def _term_key(exps):
    return (sum(exps), exps)


@dataclass(frozen=True)
class Poly:
    """Sparse multivariate polynomial with integer coefficients.

    terms is a tuple of (exponent tuple, coefficient), zero coefficients
    dropped, sorted in descending graded lexicographic order.
    """

    nvars: int
    terms: tuple

    @classmethod
    def from_dict(cls, nvars, d):
        terms = tuple(sorted(((e, c) for e, c in d.items() if c),
                             key=lambda t: _term_key(t[0]), reverse=True))
        return cls(nvars, terms)

    @classmethod
    def zero(cls, nvars):
        return cls(nvars, ())

    @classmethod
    def constant(cls, nvars, c):
        if c == 0:
            return cls.zero(nvars)
        return cls(nvars, (((0,) * nvars, int(c)),))

    @classmethod
    def linear_form(cls, coeffs):
        """The degree-one polynomial sum_i coeffs[i] * x_i."""
        n = len(coeffs)
        d = {}
        for i, c in enumerate(coeffs):
            if c:
                e = [0] * n
                e[i] = 1
                d[tuple(e)] = int(c)
        return cls.from_dict(n, d)

    def is_zero(self):
        return not self.terms

    def _dict(self):
        return dict(self.terms)

    def __add__(self, other):
        d = self._dict()
        for e, c in other.terms:
            d[e] = d.get(e, 0) + c
        return Poly.from_dict(self.nvars, d)

    def __neg__(self):
        return Poly(self.nvars, tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        d = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = tuple(a + b for a, b in zip(e1, e2))
                d[e] = d.get(e, 0) + c1 * c2
        return Poly.from_dict(self.nvars, d)

    def compose_linear(self, vectors):
        """Substitute x_i = sum_l t_l * vectors[l][i]; result in len(vectors)
        variables.  With no vectors this evaluates at the origin."""
        m = len(vectors)
        forms = []
        for i in range(self.nvars):
            forms.append(Poly.linear_form([vectors[l][i] for l in range(m)]))
        out = Poly.zero(m)
        for e, c in self.terms:
            term = Poly.constant(m, c)
            for i, k in enumerate(e):
                for _ in range(k):
                    term = term * forms[i]
            out = out + term
        return out

    def render(self, names=None):
        """Human-readable form, leading term first; 0 for the zero polynomial."""
        if not self.terms:
            return "0"
        if names is None:
            names = [f"x{i + 1}" for i in range(self.nvars)]
        parts = []
        for e, c in self.terms:
            factors = []
            for i, k in enumerate(e):
                if k == 1:
                    factors.append(names[i])
                elif k > 1:
                    factors.append(f"{names[i]}^{k}")
            mono = "*".join(factors)
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text


@dataclass(frozen=True)
class PiecewisePoly:
    """One polynomial lift per maximal cone of a fan; pieces[k] belongs to
    fan.max_cones[k] and is well-defined modulo the span of that cone."""

    fan: object
    pieces: tuple


def elem_sym_piece(ms, i):
    """i-th elementary symmetric polynomial of the multiset's linear
    functions, using the stored canonical lifts; e_0 = 1."""
    if not 0 <= i <= len(ms):
        raise ValueError(f"index {i} out of range for a multiset of {len(ms)}")
    if not ms:
        return Poly.constant(0, 1) if i == 0 else Poly.zero(0)
    n = ms[0].cone.fan.lattice_rank
    sym = [Poly.constant(n, 1)] + [Poly.zero(n)] * i
    for cls in ms:
        form = Poly.linear_form(cls.canonical)
        for k in range(min(i, len(sym) - 1), 0, -1):
            sym[k] = sym[k] + sym[k - 1] * form
    return sym[i]


def chern_of_psi(psi):
    """Total class as the sequence c_0 = 1, c_1, ..., c_r of piecewise
    polynomials; the piece of c_i on a cone is e_i of its multiset."""
    out = []
    for i in range(psi.rank + 1):
        pieces = tuple(elem_sym_piece(psi.multiset(k), i)
                       for k in range(len(psi.fan.max_cones)))
        out.append(PiecewisePoly(psi.fan, pieces))
    return tuple(out)


def vanishes_on_span(p, cone):
    """True iff p vanishes identically on the linear span of the cone,
    decided by exact substitution of a lattice basis of the span."""
    basis = span_lattice(cone).entries
    return p.compose_linear(list(basis)).is_zero()


def pp_equal(f, g):
    """Equality of piecewise polynomials: on every maximal cone the
    difference of pieces vanishes on the cone's span."""
    if f.fan != g.fan:
        raise ValueError("piecewise polynomials live on different fans")
    for k in range(len(f.fan.max_cones)):
        if not vanishes_on_span(f.pieces[k] - g.pieces[k], f.fan.max_cone(k)):
            return False
    return True


def validate_continuity(f):
    """Check that pieces agree on common faces: for every pair of maximal
    cones sharing rays, the difference vanishes on the span of the shared
    face."""
    ncones = len(f.fan.max_cones)
    for k in range(ncones):
        for k2 in range(k + 1, ncones):
            common = sorted(set(f.fan.max_cones[k]) & set(f.fan.max_cones[k2]))
            if not common:
                continue
            face = f.fan.cone(common)
            if not vanishes_on_span(f.pieces[k] - f.pieces[k2], face):
                return Report(False,
                              f"pieces of cones {k} and {k2} differ on their "
                              f"common face {tuple(common)}",
                              witness=(k, k2))
    return Report(True, "OK")

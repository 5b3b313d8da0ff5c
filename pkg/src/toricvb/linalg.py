"""Exact linear algebra over Q and prime fields, plus integer lattice forms.

Subspaces are stored as reduced row echelon bases, so equality of subspaces
is equality of stored representations.  Integer lattices are canonicalized
by row-style Hermite normal form with positive pivots.  Rational entries
live in fractions.Fraction (always lowest terms, positive denominator);
F_p entries are ints in [0, p).
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from toricvb import kernels


def _is_prime(p):
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class Field:
    """Q when p is None, otherwise the prime field F_p with 2 <= p < 2^31."""

    p: int | None = None

    def __post_init__(self):
        if self.p is not None and not (2 <= self.p < 2**31 and _is_prime(self.p)):
            raise ValueError(f"modulus {self.p} is not a prime below 2^31")

    @property
    def is_rational(self):
        return self.p is None

    def element(self, x):
        if self.p is None:
            return Fraction(x)
        return int(x) % self.p

    def parse(self, s):
        """Parse an element from its file representation ("3/4", "-2", "5")."""
        if self.p is None:
            return Fraction(s)
        return int(s) % self.p

    def format(self, x):
        return str(x)

    def __str__(self):
        return "Q" if self.p is None else f"F_{self.p}"


QQ = Field()


def GF(p):
    return Field(p)


@dataclass(frozen=True)
class Mat:
    """Immutable dense matrix over a Field; entries is a tuple of row tuples."""

    field: Field
    cols: int
    entries: tuple

    @property
    def rows(self):
        return len(self.entries)

    @classmethod
    def from_rows(cls, field, rows, cols=None):
        rows = [tuple(field.element(x) for x in row) for row in rows]
        if cols is None:
            if not rows:
                raise ValueError("cols is required for an empty matrix")
            cols = len(rows[0])
        for row in rows:
            if len(row) != cols:
                raise ValueError("ragged rows")
        return cls(field, cols, tuple(rows))

    @classmethod
    def identity(cls, field, n):
        one, zero = field.element(1), field.element(0)
        return cls(field, n, tuple(
            tuple(one if i == j else zero for j in range(n)) for i in range(n)))

    @classmethod
    def zeros(cls, field, rows, cols):
        zero = field.element(0)
        return cls(field, cols, tuple(tuple(zero for _ in range(cols)) for _ in range(rows)))

    def stack(self, other):
        if other.field != self.field or other.cols != self.cols:
            raise ValueError("field or width mismatch in stack")
        return Mat(self.field, self.cols, self.entries + other.entries)

    def transpose(self):
        ent = tuple(tuple(self.entries[i][j] for i in range(self.rows))
                    for j in range(self.cols))
        return Mat(self.field, self.rows, ent)

    def matmul(self, other):
        if other.field != self.field or self.cols != other.rows:
            raise ValueError("field or shape mismatch in matmul")
        if self.field.is_rational:
            bt = other.transpose().entries
            ent = tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in bt)
                        for row in self.entries)
            return Mat(self.field, other.cols, ent)
        flat_a = [x for row in self.entries for x in row]
        flat_b = [x for row in other.entries for x in row]
        flat = kernels.matmul_mod_p(flat_a, self.rows, self.cols,
                                    flat_b, other.rows, other.cols, self.field.p)
        c = other.cols
        ent = tuple(tuple(flat[i * c:(i + 1) * c]) for i in range(self.rows))
        return Mat(self.field, c, ent)

    def rref(self):
        """Unique reduced row echelon form with zero rows removed, and rank."""
        if self.field.is_rational:
            red, rank = _rref_rational(self.entries, self.cols)
        else:
            flat = [x for row in self.entries for x in row]
            out, rank = kernels.rref_mod_p(flat, self.rows, self.cols, self.field.p)
            red = tuple(tuple(out[i * self.cols:(i + 1) * self.cols]) for i in range(rank))
        return Mat(self.field, self.cols, red), rank

    def nullspace(self):
        """RREF basis of the right kernel {x : self @ x = 0}."""
        red, rank = self.rref()
        pivots = []
        for row in red.entries:
            for j, x in enumerate(row):
                if x:
                    pivots.append(j)
                    break
        pivot_set = set(pivots)
        zero, one = self.field.element(0), self.field.element(1)
        vecs = []
        for f in range(self.cols):
            if f in pivot_set:
                continue
            v = [zero] * self.cols
            v[f] = one
            for i, c in enumerate(pivots):
                v[c] = -red.entries[i][f] if self.field.is_rational \
                    else (-red.entries[i][f]) % self.field.p
            vecs.append(tuple(v))
        if not vecs:
            return Mat(self.field, self.cols, ())
        basis, _ = Mat(self.field, self.cols, tuple(vecs)).rref()
        return basis


def _rref_rational(entries, cols):
    a = [list(row) for row in entries]
    rows = len(a)
    rank = 0
    for col in range(cols):
        piv = -1
        for i in range(rank, rows):
            if a[i][col]:
                piv = i
                break
        if piv < 0:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        lead = a[rank]
        inv = 1 / lead[col]
        if inv != 1:
            for j in range(col, cols):
                lead[j] *= inv
        for i in range(rows):
            if i != rank and a[i][col]:
                f = a[i][col]
                row = a[i]
                for j in range(col, cols):
                    row[j] -= f * lead[j]
        rank += 1
        if rank == rows:
            break
    return tuple(tuple(a[i]) for i in range(rank)), rank


def rref(m):
    return m.rref()


@dataclass(frozen=True)
class Subspace:
    """Subspace of field^ambient_dim, spanned by the rows of a canonical
    RREF basis; two subspaces are equal as sets iff their bases coincide."""

    field: Field
    ambient_dim: int
    basis: Mat

    @property
    def dim(self):
        return self.basis.rows

    @classmethod
    def from_rows(cls, field, ambient_dim, rows):
        basis, _ = Mat.from_rows(field, rows, cols=ambient_dim).rref()
        return cls(field, ambient_dim, basis)

    @classmethod
    def zero(cls, field, ambient_dim):
        return cls(field, ambient_dim, Mat(field, ambient_dim, ()))

    @classmethod
    def full(cls, field, ambient_dim):
        return cls(field, ambient_dim, Mat.identity(field, ambient_dim))

    @classmethod
    def _from_rref(cls, field, ambient_dim, basis):
        # trusted constructor: basis must already be a canonical RREF
        return cls(field, ambient_dim, basis)

    def is_zero(self):
        return self.dim == 0

    def reduce_vector(self, vec):
        """Remainder of vec after reduction against the RREF basis rows."""
        v = list(vec)
        for row in self.basis.entries:
            c = next(j for j, x in enumerate(row) if x)
            f = v[c]
            if f:
                for j in range(c, self.ambient_dim):
                    if self.field.is_rational:
                        v[j] -= f * row[j]
                    else:
                        v[j] = (v[j] - f * row[j]) % self.field.p
        return tuple(v)

    def contains_vector(self, vec):
        return not any(self.reduce_vector(vec))

    def contains(self, other):
        if other.field != self.field or other.ambient_dim != self.ambient_dim:
            raise ValueError("ambient or field mismatch")
        return all(self.contains_vector(row) for row in other.basis.entries)

    def annihilator(self):
        """Subspace of functionals vanishing on this one (dot pairing)."""
        return Subspace._from_rref(self.field, self.ambient_dim, self.basis.nullspace())

    def apply(self, phi):
        """Image under the linear map given by matrix phi (vectors as columns)."""
        if phi.cols != self.ambient_dim:
            raise ValueError("matrix width must equal ambient dimension")
        if self.dim == 0:
            return Subspace.zero(self.field, phi.rows)
        image = self.basis.matmul(phi.transpose())
        return Subspace.from_rows(self.field, phi.rows,
                                  image.entries)


def _check_pair(a, b):
    if a.field != b.field or a.ambient_dim != b.ambient_dim:
        raise ValueError("ambient or field mismatch")


def intersect(a, b):
    """Canonical subspace a intersect b, via double annihilators."""
    _check_pair(a, b)
    stacked = a.annihilator().basis.stack(b.annihilator().basis)
    return Subspace._from_rref(a.field, a.ambient_dim, stacked.nullspace())


def subspace_sum(a, b):
    """Canonical subspace a + b."""
    _check_pair(a, b)
    basis, _ = a.basis.stack(b.basis).rref()
    return Subspace._from_rref(a.field, a.ambient_dim, basis)


def complement_within(w, u):
    """Deterministic complement c with w (+) c = u.

    Scans the RREF basis vectors of u in order and appends each one not in
    the span of w plus the vectors already appended.
    """
    _check_pair(w, u)
    if not u.contains(w):
        raise ValueError("first subspace is not contained in the second")
    picked = []
    working = w
    for row in u.basis.entries:
        if not working.contains_vector(row):
            picked.append(row)
            working = subspace_sum(working, Subspace.from_rows(u.field, u.ambient_dim, [row]))
    if not picked:
        return Subspace.zero(u.field, u.ambient_dim)
    return Subspace.from_rows(u.field, u.ambient_dim, picked)


def solve_columns(columns, rhs, field=QQ):
    """Coefficients c with sum_i c_i * columns[i] = rhs, or None.

    Free coefficients are set to zero; returns None when inconsistent.
    """
    n = len(rhs)
    s = len(columns)
    for col in columns:
        if len(col) != n:
            raise ValueError("column length mismatch")
    aug = Mat.from_rows(field, [[columns[j][i] for j in range(s)] + [rhs[i]]
                                for i in range(n)], cols=s + 1)
    red, _ = aug.rref()
    coeffs = [field.element(0)] * s
    for row in red.entries:
        piv = next(j for j, x in enumerate(row) if x)
        if piv == s:
            return None
        coeffs[piv] = row[s]
    return tuple(coeffs)


# ---------------------------------------------------------------------------
# integer matrices and lattice normal forms


@dataclass(frozen=True)
class IntMat:
    """Immutable integer matrix; entries is a tuple of row tuples."""

    cols: int
    entries: tuple

    @property
    def rows(self):
        return len(self.entries)

    @classmethod
    def from_rows(cls, rows, cols=None):
        rows = [tuple(int(x) for x in row) for row in rows]
        if cols is None:
            if not rows:
                raise ValueError("cols is required for an empty matrix")
            cols = len(rows[0])
        for row in rows:
            if len(row) != cols:
                raise ValueError("ragged rows")
        return cls(cols, tuple(rows))


def primitive_vector(v):
    """v divided by the gcd of its entries; direction is preserved."""
    if not any(v):
        raise ValueError("zero vector has no primitive form")
    g = 0
    for x in v:
        g = gcd(g, x)
    return tuple(x // g for x in v)


def _hnf_rows(rows, cols, with_transform=False):
    """Row-style Hermite normal form with positive pivots.

    Returns (nonzero rows of H, U) where U is unimodular with U @ A = H
    (H including its zero rows).  Entries above each pivot are reduced
    into [0, pivot).
    """
    a = [list(r) for r in rows]
    m = len(a)
    u = [[1 if i == j else 0 for j in range(m)] for i in range(m)] if with_transform else None
    top = 0
    for col in range(cols):
        # clear below position `top` in this column by gcd row operations
        while True:
            piv = -1
            best = None
            for i in range(top, m):
                x = abs(a[i][col])
                if x and (best is None or x < best):
                    best, piv = x, i
            if piv < 0:
                break
            a[top], a[piv] = a[piv], a[top]
            if u is not None:
                u[top], u[piv] = u[piv], u[top]
            done = True
            for i in range(top + 1, m):
                if a[i][col]:
                    q = a[i][col] // a[top][col]
                    for j in range(cols):
                        a[i][j] -= q * a[top][j]
                    if u is not None:
                        for j in range(m):
                            u[i][j] -= q * u[top][j]
                    if a[i][col]:
                        done = False
            if done:
                break
        if piv < 0:
            continue
        if a[top][col] < 0:
            a[top] = [-x for x in a[top]]
            if u is not None:
                u[top] = [-x for x in u[top]]
        d = a[top][col]
        for i in range(top):
            q = a[i][col] // d
            if q:
                for j in range(cols):
                    a[i][j] -= q * a[top][j]
                if u is not None:
                    for j in range(m):
                        u[i][j] -= q * u[top][j]
        top += 1
        if top == m:
            break
    h = tuple(tuple(r) for r in a[:top])
    if with_transform:
        return h, tuple(tuple(r) for r in u)
    return h


def hermite_normal_form(a):
    """Canonical HNF of the row lattice of a, zero rows removed."""
    return IntMat(a.cols, _hnf_rows(a.entries, a.cols))


def integer_kernel(a):
    """HNF basis of {u in Z^cols : a @ u = 0}; empty when trivial."""
    n = a.cols
    bt = tuple(tuple(a.entries[i][j] for i in range(a.rows)) for j in range(n))
    h, u = _hnf_rows(bt, a.rows, with_transform=True)
    kernel_rows = u[len(h):]
    if not kernel_rows:
        return IntMat(n, ())
    return IntMat(n, _hnf_rows(kernel_rows, n))


def reduce_mod_lattice(v, lattice):
    """Canonical coset representative of v modulo the row lattice.

    lattice must be in HNF; the representative has its entry at each pivot
    column in [0, pivot).
    """
    v = list(v)
    for row in lattice.entries:
        c = next(j for j, x in enumerate(row) if x)
        q = v[c] // row[c]
        if q:
            for j in range(c, lattice.cols):
                v[j] -= q * row[j]
    return tuple(v)


def solve_integer(a, rhs):
    """Some u in Z^cols with a @ u = rhs, or None when no integral solution."""
    n = a.cols
    bt = tuple(tuple(a.entries[i][j] for i in range(a.rows)) for j in range(n))
    h, u = _hnf_rows(bt, a.rows, with_transform=True)
    residual = list(rhs)
    z = []
    for row in h:
        c = next(j for j, x in enumerate(row) if x)
        if residual[c] % row[c]:
            return None
        q = residual[c] // row[c]
        z.append(q)
        for j in range(len(residual)):
            residual[j] -= q * row[j]
    if any(residual):
        return None
    out = [0] * n
    for coeff, urow in zip(z, u):
        if coeff:
            for j in range(n):
                out[j] += coeff * urow[j]
    return tuple(out)

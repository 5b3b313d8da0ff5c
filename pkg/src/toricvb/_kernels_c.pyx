# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled mod-p dense matrix kernels; see toricvb._kernels_py for the
reference semantics.  Entries fit in int64 throughout because p < 2^31."""

from libc.stdlib cimport free, malloc


cdef long long _inv_mod(long long a, long long p):
    # extended Euclid; a is nonzero mod p, p prime
    cdef long long t = 0, newt = 1, r = p, newr = a % p, q, tmp
    while newr != 0:
        q = r / newr
        tmp = t - q * newt
        t = newt
        newt = tmp
        tmp = r - q * newr
        r = newr
        newr = tmp
    if t < 0:
        t += p
    return t


cdef long long* _load(object flat, Py_ssize_t n, long long p) except NULL:
    cdef long long* a = <long long*> malloc(n * sizeof(long long) if n else sizeof(long long))
    if a == NULL:
        raise MemoryError()
    cdef Py_ssize_t k
    cdef long long v
    for k in range(n):
        v = flat[k]
        v %= p
        if v < 0:
            v += p
        a[k] = v
    return a


def rref_mod_p(flat, Py_ssize_t rows, Py_ssize_t cols, long long p):
    """Reduced row echelon form over F_p; returns (flat_rref, rank)."""
    cdef long long* a = _load(flat, rows * cols, p)
    cdef Py_ssize_t rank = 0, col, i, j, piv
    cdef long long inv, f
    try:
        for col in range(cols):
            piv = -1
            for i in range(rank, rows):
                if a[i * cols + col]:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != rank:
                for j in range(cols):
                    f = a[rank * cols + j]
                    a[rank * cols + j] = a[piv * cols + j]
                    a[piv * cols + j] = f
            inv = _inv_mod(a[rank * cols + col], p)
            if inv != 1:
                for j in range(col, cols):
                    a[rank * cols + j] = a[rank * cols + j] * inv % p
            for i in range(rows):
                if i != rank and a[i * cols + col]:
                    f = a[i * cols + col]
                    for j in range(col, cols):
                        a[i * cols + j] = (a[i * cols + j] - f * a[rank * cols + j]) % p
                        if a[i * cols + j] < 0:
                            a[i * cols + j] += p
            rank += 1
            if rank == rows:
                break
        out = tuple(a[k] for k in range(rank * cols))
        return out, rank
    finally:
        free(a)


def rank_mod_p(flat, Py_ssize_t rows, Py_ssize_t cols, long long p):
    """Rank over F_p (forward elimination only)."""
    cdef long long* a = _load(flat, rows * cols, p)
    cdef Py_ssize_t rank = 0, col, i, j, piv
    cdef long long inv, f
    try:
        for col in range(cols):
            piv = -1
            for i in range(rank, rows):
                if a[i * cols + col]:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != rank:
                for j in range(col, cols):
                    f = a[rank * cols + j]
                    a[rank * cols + j] = a[piv * cols + j]
                    a[piv * cols + j] = f
            inv = _inv_mod(a[rank * cols + col], p)
            for i in range(rank + 1, rows):
                if a[i * cols + col]:
                    f = a[i * cols + col] * inv % p
                    for j in range(col, cols):
                        a[i * cols + j] = (a[i * cols + j] - f * a[rank * cols + j]) % p
                        if a[i * cols + j] < 0:
                            a[i * cols + j] += p
            rank += 1
            if rank == rows:
                break
        return rank
    finally:
        free(a)


def matmul_mod_p(a, Py_ssize_t ar, Py_ssize_t ac, b, Py_ssize_t br, Py_ssize_t bc, long long p):
    """Matrix product over F_p, flat row-major inputs and output."""
    if ac != br:
        raise ValueError("inner dimensions do not match")
    cdef long long* ca = _load(a, ar * ac, p)
    cdef long long* cb
    cdef long long* co
    cdef Py_ssize_t i, j, k
    cdef long long aik, s
    try:
        cb = _load(b, br * bc, p)
    except:
        free(ca)
        raise
    co = <long long*> malloc((ar * bc if ar * bc else 1) * sizeof(long long))
    if co == NULL:
        free(ca)
        free(cb)
        raise MemoryError()
    try:
        for i in range(ar):
            for j in range(bc):
                s = 0
                for k in range(ac):
                    aik = ca[i * ac + k]
                    if aik:
                        s = (s + aik * cb[k * bc + j]) % p
                co[i * bc + j] = s
        return tuple(co[k] for k in range(ar * bc))
    finally:
        free(ca)
        free(cb)
        free(co)

"""Pure-Python mod-p dense matrix kernels.

Reference implementation of the hot primitives used by the finite-field
enumeration; toricvb._kernels_c is the compiled twin with identical
semantics.  Matrices are flat row-major sequences of ints; all results
have entries reduced into [0, p).
"""


def rref_mod_p(flat, rows, cols, p):
    """Reduced row echelon form of a rows x cols matrix over F_p.

    Returns (flat_rref, rank): the nonzero rows of the RREF (pivots equal
    to 1, pivot columns elsewhere zero, pivot columns strictly increasing)
    as a flat row-major tuple, and the rank.
    """
    a = [[flat[i * cols + j] % p for j in range(cols)] for i in range(rows)]
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
        inv = pow(lead[col], -1, p)
        if inv != 1:
            for j in range(col, cols):
                lead[j] = lead[j] * inv % p
        for i in range(rows):
            if i != rank and a[i][col]:
                f = a[i][col]
                row = a[i]
                for j in range(col, cols):
                    row[j] = (row[j] - f * lead[j]) % p
        rank += 1
        if rank == rows:
            break
    out = []
    for i in range(rank):
        out.extend(a[i])
    return tuple(out), rank


def rank_mod_p(flat, rows, cols, p):
    """Rank of a rows x cols matrix over F_p (forward elimination only)."""
    a = [[flat[i * cols + j] % p for j in range(cols)] for i in range(rows)]
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
        inv = pow(lead[col], -1, p)
        for i in range(rank + 1, rows):
            if a[i][col]:
                f = a[i][col] * inv % p
                row = a[i]
                for j in range(col, cols):
                    row[j] = (row[j] - f * lead[j]) % p
        rank += 1
        if rank == rows:
            break
    return rank


def matmul_mod_p(a, ar, ac, b, br, bc, p):
    """Product of an ar x ac by a br x bc matrix over F_p, flat row-major."""
    if ac != br:
        raise ValueError("inner dimensions do not match")
    out = [0] * (ar * bc)
    for i in range(ar):
        base = i * ac
        for k in range(ac):
            aik = a[base + k] % p
            if aik:
                boff = k * bc
                ooff = i * bc
                for j in range(bc):
                    out[ooff + j] = (out[ooff + j] + aik * b[boff + j]) % p
    return tuple(out)

"""Dense linear algebra over F_q on encoded scalars (small matrices only)."""


def identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def zeros(m, n):
    return [[0] * n for _ in range(m)]


def matmul(field, A, B):
    if not A:
        return []
    n = len(B[0]) if B else 0
    add, mul = field.add, field.mul
    out = zeros(len(A), n)
    for i, row in enumerate(A):
        acc = out[i]
        for k, a in enumerate(row):
            if a:
                for j, b in enumerate(B[k]):
                    if b:
                        acc[j] = add(acc[j], mul(a, b))
    return out


def matvec(field, A, v):
    return [x[0] for x in matmul(field, A, [[c] for c in v])] if A else []


def matpow(field, A, k):
    result = identity(len(A))
    base = A
    while k:
        if k & 1:
            result = matmul(field, result, base)
        k >>= 1
        if k:
            base = matmul(field, base, base)
    return result


def is_zero_matrix(A):
    return all(not x for row in A for x in row)


def rref(field, A):
    """Reduced row echelon form; returns (rows, pivot_columns)."""
    M = [list(r) for r in A]
    if not M:
        return [], []
    ncols = len(M[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(M)) if M[i][c]), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        inv = field.inv(M[r][c])
        M[r] = [field.mul(inv, x) for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [field.sub(x, field.mul(f, y)) for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M[:r], pivots


def rank(field, A):
    return len(rref(field, A)[1])


def nullspace(field, A, ncols=None):
    """Basis (list of vectors) of {v : A v = 0}."""
    if ncols is None:
        ncols = len(A[0]) if A else 0
    rows, pivots = rref(field, A) if A else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for row, pc in zip(rows, pivots):
            v[pc] = field.neg(row[f])
        basis.append(v)
    return basis


def span_basis(field, vectors, n):
    """Row-reduced basis of the span of the given vectors of length n."""
    if not vectors:
        return []
    return rref(field, [list(v) for v in vectors])[0]


def transpose(A, ncols=None):
    if not A:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*A)]

"""Reference computations that share no code with the library's algebra.

Field arithmetic is redone with dense polynomials mod the modulus, Groebner
bases come from sympy, and Cartier modules with monomial relations are
handled by explicit F_p matrices.
"""

import itertools
import random

import sympy


# finite fields

def poly_mulmod(a, b, modulus, p):
    """Product of coefficient lists (lowest degree first) reduced mod a monic modulus."""
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    e = len(modulus) - 1
    for k in range(len(out) - 1, e - 1, -1):
        c = out[k]
        if c:
            for j, m in enumerate(modulus):
                out[k - e + j] = (out[k - e + j] - c * m) % p
    out = out[:e] + [0] * max(0, e - len(out))
    return out


def encode(coeffs, p):
    return sum(c * p ** k for k, c in enumerate(coeffs))


def decode(a, p, e):
    return [(a // p ** k) % p for k in range(e)]


def oracle_mul(spec, a, b):
    e = spec.e
    return encode(poly_mulmod(decode(a, spec.p, e), decode(b, spec.p, e), list(spec.modulus), spec.p), spec.p)


def oracle_add(spec, a, b):
    return encode([(x + y) % spec.p for x, y in zip(decode(a, spec.p, spec.e), decode(b, spec.p, spec.e))], spec.p)


# Groebner bases via sympy

_SYMPY_ORDER = {"grevlex": "grevlex", "deglex": "grlex", "lex": "lex"}


def sympy_reduced_basis(ring, polys):
    """Reduced Groebner basis over a prime field as a set of frozen term dicts."""
    assert ring.field.e == 1
    p = ring.field.p
    syms = sympy.symbols(list(ring.variables))
    if ring.nvars == 1:
        syms = (syms,) if not isinstance(syms, (tuple, list)) else syms
    exprs = []
    for f in polys:
        expr = sum(c * sympy.prod([s ** k for s, k in zip(syms, a)]) for a, c in f.terms.items())
        exprs.append(sympy.sympify(expr))
    exprs = [e for e in exprs if e != 0]
    if not exprs:
        return set()
    G = sympy.groebner(exprs, *syms, modulus=p, order=_SYMPY_ORDER[ring.order])
    out = set()
    for g in G.exprs:
        P = sympy.Poly(g, *syms, modulus=p)
        terms = {tuple(m): int(c) % p for m, c in P.terms()}
        lead = max(terms, key=ring.monomial_key)
        inv = pow(terms[lead], -1, p)
        out.add(frozenset((m, c * inv % p) for m, c in terms.items() if c))
    return out


# Cartier modules with monomial relations

class MonomialCartier:
    """sum_i R/J_i with J_i monomial ideals, kappa given by a table; all maps as F_p matrices.

    ``ideals[i]`` lists generator exponents of J_i; ``table`` maps (i, d) to a
    dict {(pos, exps): coeff}.  Coefficients are encoded F_q elements.
    """

    def __init__(self, spec, nvars, ideals, table):
        self.spec = spec
        self.p, self.e, self.q = spec.p, spec.e, spec.p ** spec.e
        self.n = nvars
        self.ideals = [list(J) for J in ideals]
        self.table = table
        self.rank = len(ideals)
        self.basis = self._basis()
        self.index = {b: k for k, b in enumerate(self.basis)}

    def _in_ideal(self, pos, a):
        return any(all(x >= y for x, y in zip(a, m)) for m in self.ideals[pos])

    def _basis(self):
        out = []
        for i, J in enumerate(self.ideals):
            bound = []
            for k in range(self.n):
                pure = [m[k] for m in J if m[k] > 0 and sum(m) == m[k]]
                assert pure, "monomial module must be finite"
                bound.append(min(pure))
            for a in itertools.product(*[range(b) for b in bound]):
                if not self._in_ideal(i, a):
                    out.append((i, a))
        return out

    def reduce(self, v):
        return {(pos, a): c for (pos, a), c in v.items() if c and not self._in_ideal(pos, a)}

    def _add(self, x, y):
        return oracle_add(self.spec, x, y) if self.e > 1 else (x + y) % self.p

    def _mul(self, x, y):
        return oracle_mul(self.spec, x, y) if self.e > 1 else (x * y) % self.p

    def kappa_mono(self, pos, a):
        b = tuple(x // self.q for x in a)
        d = tuple(x % self.q for x in a)
        out = {}
        for (p2, a2), c in self.table.get((pos, d), {}).items():
            key = (p2, tuple(x + y for x, y in zip(a2, b)))
            out[key] = self._add(out.get(key, 0), c)
        return self.reduce(out)

    def kappa(self, v):
        out = {}
        for (pos, a), c in v.items():
            for key, c2 in self.kappa_mono(pos, a).items():
                out[key] = self._add(out.get(key, 0), self._mul(c, c2))
        return {k: c for k, c in out.items() if c}

    def well_defined(self):
        for i, J in enumerate(self.ideals):
            for m in J:
                for d in itertools.product(range(self.q), repeat=self.n):
                    if self.kappa_mono(i, tuple(x + y for x, y in zip(m, d))):
                        return False
        return True

    # F_p-linear structure: basis elements t^j * x^a e_i

    @property
    def fp_dim(self):
        return len(self.basis) * self.e

    def fp_vector(self, v):
        out = [0] * self.fp_dim
        for key, c in v.items():
            k = self.index[key]
            for j, digit in enumerate(decode(c, self.p, self.e)):
                out[k * self.e + j] = digit
        return out

    def _matrix(self, fn):
        cols = []
        for key in self.basis:
            for j in range(self.e):
                cols.append(self.fp_vector(fn(key, self.p ** j)))
        D = self.fp_dim
        return [[cols[c][r] for c in range(D)] for r in range(D)]

    def kappa_matrix(self):
        return self._matrix(lambda key, c: {k: self._mul(c, v) for k, v in self.kappa_mono(*key).items()})

    def action_matrices(self):
        mats = []
        for k in range(self.n):
            def shift(key, c, k=k):
                pos, a = key
                b = list(a)
                b[k] += 1
                return self.reduce({(pos, tuple(b)): c})
            mats.append(self._matrix(shift))
        if self.e > 1:
            mats.append(self._matrix(lambda key, c: {key: self._mul(c, self.p)}))
        return mats


def matmul(A, B, p):
    n, m, k = len(A), len(B), len(B[0]) if B else 0
    return [[sum(A[i][t] * B[t][j] for t in range(m)) % p for j in range(k)] for i in range(n)]


def identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matpow(A, e, p):
    R = identity(len(A))
    for _ in range(e):
        R = matmul(R, A, p)
    return R


def fp_rank(A, p):
    A = [row[:] for row in A]
    r = 0
    cols = len(A[0]) if A else 0
    for c in range(cols):
        piv = next((i for i in range(r, len(A)) if A[i][c] % p), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = pow(A[r][c], -1, p)
        A[r] = [x * inv % p for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [(x - f * y) % p for x, y in zip(A[i], A[r])]
        r += 1
    return r


def is_zero(A):
    return all(not x for row in A for x in row)


def nilpotence_oracle(mod):
    """(nilpotent, order, stabilization exponent) from powers of the F_p matrix of kappa."""
    p = mod.p
    D = mod.fp_dim
    K = mod.kappa_matrix()
    if D == 0:
        return True, 0, 0
    nilpotent = is_zero(matpow(K, D, p))
    ranks = [fp_rank(matpow(K, e, p), p) for e in range(D + 2)]
    order = next(e for e in range(D + 1) if ranks[e] == 0) if nilpotent else None
    estar = next(e for e in range(1, D + 2) if ranks[e] == ranks[e + 1] or ranks[e] == 0)
    return nilpotent, order, estar


def all_subspaces(D, p):
    """Every subspace of F_p^D, as a frozenset of its vectors (one per reduced echelon form)."""
    for k in range(D + 1):
        for pivots in itertools.combinations(range(D), k):
            free = [(r, c) for r in range(k) for c in range(D) if c > pivots[r] and c not in pivots]
            for vals in itertools.product(range(p), repeat=len(free)):
                rows = [[0] * D for _ in range(k)]
                for r, c in enumerate(pivots):
                    rows[r][c] = 1
                for (r, c), v in zip(free, vals):
                    rows[r][c] = v
                span = set()
                for coeffs in itertools.product(range(p), repeat=k):
                    span.add(tuple(sum(a * row[i] for a, row in zip(coeffs, rows)) % p for i in range(D)))
                yield frozenset(span)


def brute_nilpotent_part(mod, e):
    """Largest subspace stable under the R-action with kappa^e = 0 on it (dimension <= 4)."""
    p = mod.p
    D = mod.fp_dim
    Ke = matpow(mod.kappa_matrix(), e, p)
    mats = mod.action_matrices()

    def apply(A, v):
        return tuple(sum(A[i][j] * v[j] for j in range(D)) % p for i in range(D))

    best = frozenset([tuple([0] * D)])
    for S in all_subspaces(D, p):
        if len(S) <= len(best):
            continue
        if any(any(apply(Ke, v)) for v in S):
            continue
        if all(apply(A, v) in S for A in mats for v in S):
            best = S
    return best


def random_monomial_cartier(rng, spec, max_fp_dim=6, attempts=200):
    """A random valid MonomialCartier of F_p-dimension <= max_fp_dim.

    Table entries are proposed one at a time in random order and kept only if
    the table stays well defined.
    """
    q = spec.p ** spec.e
    for _ in range(attempts):
        n = rng.choice([1, 1, 2])
        rank = rng.choice([1, 1, 2])
        ideals = []
        for _ in range(rank):
            if n == 1:
                ideals.append([(rng.randint(1, 4),)])
            else:
                J = [(rng.randint(1, 3), 0), (0, rng.randint(1, 2))]
                if rng.random() < 0.3:
                    J.append((1, 1))
                ideals.append(J)
        probe = MonomialCartier(spec, n, ideals, {})
        if 0 < probe.fp_dim <= max_fp_dim:
            break
    keys = [(i, d) for i in range(rank) for d in itertools.product(range(q), repeat=n)]
    rng.shuffle(keys)
    table = {}
    for key in keys:
        if rng.random() < 0.3:
            continue
        for _ in range(3):
            v = {}
            for _ in range(rng.choice([1, 1, 2])):
                v[rng.choice(probe.basis)] = rng.randrange(1, q)
            table[key] = v
            if MonomialCartier(spec, n, ideals, table).well_defined():
                break
            del table[key]
    return MonomialCartier(spec, n, ideals, table)


def seeded(seed):
    return random.Random(seed)

"""Seeded random generators for Cartier modules used by the property suites."""

import random
from itertools import product

from .cartier import CartierModule, cartier_quotient, stable_closure
from .errors import InconsistentKappaError
from .semialg.field import FieldSpec
from .semialg.groebner import vec_mul_poly
from .semialg.modules import ModulePresentation, unit_vector
from .semialg.poly import Polynomial, PolynomialRing


def make_ring(p, e=1, variables=("x",), order="grevlex"):
    return PolynomialRing(FieldSpec(p, e), list(variables), order)


def random_poly(rng, ring, max_degree, terms=3, allow_zero=True):
    q = ring.q
    out = {}
    for _ in range(rng.randint(0 if allow_zero else 1, terms)):
        a = tuple(rng.randint(0, max_degree) for _ in range(ring.nvars))
        if sum(a) > max_degree:
            continue
        out[a] = rng.randrange(1, q)
    if not out and not allow_zero:
        out[ring.zero_exps] = rng.randrange(1, q)
    return Polynomial(ring, out)


def random_vector(rng, ring, rank, max_degree, terms=3):
    v = {}
    for i in range(rank):
        f = random_poly(rng, ring, max_degree, terms)
        for a, c in f.terms.items():
            v[(i, a)] = c
    return v


def random_table(rng, ring, rank, max_degree, density=0.5, terms=2):
    table = {}
    for i in range(rank):
        for d in ring.digits:
            if rng.random() < density:
                v = random_vector(rng, ring, rank, max_degree, terms)
                if v:
                    table[(i, d)] = v
    return table


def random_free(rng, ring, rank, max_degree, density=0.5):
    return CartierModule(ModulePresentation.free(ring, rank), random_table(rng, ring, rank, max_degree, density), check=False)


def twisted(M0, relations, multiplier):
    """F/U with kappa = kappa_0(u * -) where u * U is inside U^[q]; always well defined.

    ``M0`` is a free Cartier module, ``relations`` generate U, and ``multiplier``
    is u as a term dict.
    """
    ring = M0.ring
    field = ring.field
    table = {}
    for i in range(M0.rank):
        for d in ring.digits:
            w = M0.kappa_free(vec_mul_poly(field, multiplier, {(i, d): 1}))
            if w:
                table[(i, d)] = w
    return CartierModule(ModulePresentation(ring, M0.rank, relations), table, check=True)


def monomial_quotient(rng, ring, rank, max_degree, exponents=None, max_exponent=2, density=0.5):
    """Finite module F/IF, I = (x_1^a_1, ..., x_n^a_n), with a twisted random operator.

    The twist u = prod x_k^(a_k (q-1)) * r satisfies x_k^a_k u in I^[q], so
    kappa_0(u -) descends to F/IF.
    """
    q = ring.q
    a = list(exponents) if exponents else [rng.randint(1, max_exponent) for _ in range(ring.nvars)]
    rels = []
    for i in range(rank):
        for k, ak in enumerate(a):
            m = [0] * ring.nvars
            m[k] = ak
            rels.append({(i, tuple(m)): 1})
    base = Polynomial(ring, {tuple(t * (q - 1) for t in a): 1})
    u = (base * random_poly(rng, ring, 1, 2, allow_zero=False)).terms
    M0 = random_free(rng, ring, rank, max_degree + max(a) * (q - 1), density)
    return twisted(M0, rels, u)


def rejection_table(rng, presentation, max_degree, density=0.4, attempts=50):
    """Random table accepted by the well-definedness check (zero table as a fallback)."""
    ring = presentation.ring
    for _ in range(attempts):
        table = random_table(rng, ring, presentation.rank, max_degree, density, terms=1)
        try:
            return CartierModule(presentation, table, check=True)
        except InconsistentKappaError:
            continue
    return CartierModule.zero_map(presentation)


def torsion_module(rng, ring, f, N, rank=None, max_degree=2):
    """A module killed by f^N: F/(f^N)F with kappa_0(f^(N(q-1)) r -), optionally cut by a stable closure."""
    q = ring.q
    field = ring.field
    rank = rank or rng.randint(1, 2)
    f = ring(f)
    fN = (f ** N).terms
    rels = [vec_mul_poly(field, fN, unit_vector(ring, i)) for i in range(rank)]
    r = random_poly(rng, ring, 2, 2, allow_zero=False)
    u = ((f ** (N * (q - 1))) * r).terms
    M0 = random_free(rng, ring, rank, max_degree + N * (q - 1) * max(1, f.total_degree), 0.6)
    M = twisted(M0, rels, u)
    if rng.random() < 0.4:
        sub = stable_closure(M, [random_vector(rng, ring, rank, 2, 1)])
        M = cartier_quotient(M, sub.submodule)
    return M


def univariate_corpus(seed=0, count=20, fields=((2, 1), (3, 1))):
    """Mixed small univariate modules: free, twisted finite quotients and f-power torsion."""
    rng = random.Random(seed)
    out = []
    for k in range(count):
        p, e = fields[k % len(fields)]
        ring = make_ring(p, e)
        kind = k % 3
        if kind == 0:
            out.append(random_free(rng, ring, rng.randint(1, 2), 3, 0.4))
        elif kind == 1:
            out.append(monomial_quotient(rng, ring, rng.randint(1, 2), 2))
        else:
            f = random_poly(rng, ring, 2, 2, allow_zero=False)
            while f.is_constant():
                f = random_poly(rng, ring, 2, 2, allow_zero=False)
            out.append(torsion_module(rng, ring, f, rng.randint(1, 3)))
    return out


def all_digits(q, n):
    return list(product(range(q), repeat=n))


__all__ = [
    "make_ring", "monomial_quotient", "random_free", "random_poly", "random_table", "random_vector",
    "rejection_table", "torsion_module", "twisted", "univariate_corpus",
]

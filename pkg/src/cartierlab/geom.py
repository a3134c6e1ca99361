"""Geometric operations on Cartier modules over F_q[x_1..x_n].

Dualizing module, contraction along the last variable, Koszul shriek
pullback along regular sequences and closed points, crystalline support,
restriction to basic opens, and the Kashiwara checks.
"""

from dataclasses import dataclass, field
from itertools import combinations, product

from .cartier import (
    DEFAULT_CHAIN_CAP,
    CartierModule,
    CartierMorphism,
    CartierSubmodule,
    cartier_quotient,
    descending_chain,
    image_chain,
    kappa_image,
    nil_isomorphism,
)
from .errors import ContractionError, SupportError
from .semialg.groebner import vec_add, vec_mul_poly
from .semialg.modules import (
    DEFAULT_POWER_CAP,
    Containment,
    ModuleMap,
    ModulePresentation,
    Submodule,
    annihilator,
    same_support,
    support_contained,
    unit_vector,
)
from .semialg.poly import Polynomial, PolynomialRing


def dualizing_cartier(ring, field=None):
    """omega = R dx_1 ^ ... ^ dx_n with the Cartier operator.

    ``ring`` is a PolynomialRing, or an integer n together with ``field``
    (variables x1..xn).  kappa(x^d dx) is dx for d = (q-1, ..., q-1) and 0 for
    every other digit; semilinearity gives x^a dx -> x^((a+1)/q - 1) dx, zero
    for non-integral exponents.
    """
    if isinstance(ring, int):
        if ring < 1:
            raise ValueError("n must be at least 1")
        if field is None:
            raise ValueError("a field is needed when n is given")
        ring = PolynomialRing(field, [f"x{k + 1}" for k in range(ring)])
    top = tuple([ring.q - 1] * ring.nvars)
    return CartierModule(ModulePresentation.free(ring, 1), {(0, top): [ring.one()]}, check=False)


# complexes

class CartierComplex:
    """Cochain complex of Cartier modules; ``differentials[k]`` maps terms[k] -> terms[k+1]."""

    def __init__(self, terms, differentials, check=True):
        self.terms = dict(sorted(terms.items()))
        self.differentials = dict(sorted(differentials.items()))
        for k, d in self.differentials.items():
            if d.source is not self.terms[k] or d.target is not self.terms.get(k + 1):
                raise ValueError(f"differential {k} does not connect terms {k} and {k + 1}")
        self._cohomology = {}
        if check:
            self.check()

    def check(self):
        for k, d in self.differentials.items():
            d.check_equivariant()
            nxt = self.differentials.get(k + 1)
            if nxt is None:
                continue
            for u in d.underlying.images:
                if not nxt.target.presentation.is_zero(nxt.underlying.apply_free(u)):
                    raise ValueError(f"d{k + 1} o d{k} is not zero")

    @property
    def degrees(self):
        return list(self.terms)

    def cycles(self, k):
        if k in self.differentials:
            return self.differentials[k].underlying.kernel_submodule
        return Submodule.whole(self.terms[k].presentation)

    def boundaries(self, k):
        if k - 1 in self.differentials:
            return self.differentials[k - 1].underlying.image()
        return Submodule(self.terms[k].presentation, [])

    def cohomology(self, k):
        """H^k as a Cartier module (kernel with restricted kappa, modulo the image)."""
        if k not in self.terms:
            return None
        return self._cohomology[k] if k in self._cohomology else self._compute(k)

    def _compute(self, k):
        term = self.terms[k]
        Z = CartierSubmodule(term, self.cycles(k), check=False)
        B = self.boundaries(k)
        lifted = []
        for b in B.gens:
            c = Z.submodule.lift(b)
            if c is None:
                raise ValueError("image not contained in kernel")
            lifted.append(c)
        zmod = Z.module
        H = cartier_quotient(zmod, Submodule(zmod.presentation, lifted))
        self._cohomology[k] = H
        return H


@dataclass
class DegreeSummary:
    degree: int
    dimension: int | None
    zero: bool
    nilpotent: bool
    order: int | None


def summarize_cohomology(H, degree, cap=DEFAULT_CHAIN_CAP):
    P = H.presentation
    zero = P.is_zero_module()
    if zero:
        return DegreeSummary(degree, 0, True, True, 0)
    v = image_chain(H, cap)
    return DegreeSummary(degree, P.dimension(), False, v.nilpotent, v.order)


@dataclass
class ShriekResult:
    complex: CartierComplex
    generators: tuple

    def cohomology(self, k):
        return self.complex.cohomology(k)

    def summary(self, cap=DEFAULT_CHAIN_CAP):
        return [summarize_cohomology(self.cohomology(k), k, cap) for k in self.complex.degrees]

    def nonzero_degrees(self):
        return [k for k in self.complex.degrees if not self.cohomology(k).presentation.is_zero_module()]


def _koszul_sign(i, S):
    return -1 if sum(1 for j in S if j < i) % 2 else 1


def shriek_regular_sequence(M, gs):
    """Hom-Koszul complex of M on g_1..g_t with its twisted Cartier structure.

    Degree k is the direct sum of copies M e_S over subsets |S| = k (in
    lexicographic order).  The differential is
    d(m e_S) = sum_{i not in S} (-1)^#{j in S, j < i} g_i m e_{S+i}, and on the
    S-component the operator is m -> kappa((prod_{i in S} g_i)^(q-1) m).
    Regularity of the sequence is not verified.
    """
    ring = M.ring
    field = ring.field
    gs = tuple(ring(g) for g in gs)
    t = len(gs)
    q = ring.q
    r = M.rank
    P = M.presentation
    subsets = {k: list(combinations(range(t), k)) for k in range(t + 1)}
    index = {k: {S: b for b, S in enumerate(subsets[k])} for k in subsets}

    def shift(v, block):
        return {(pos + block * r, a): c for (pos, a), c in v.items()}

    terms = {}
    for k in range(t + 1):
        blocks = subsets[k]
        rels = []
        for b in range(len(blocks)):
            rels.extend(shift(rel, b) for rel in P.relations)
        pres = ModulePresentation(ring, r * len(blocks), rels)
        table = {}
        for b, S in enumerate(blocks):
            twist = ring.one()
            for i in S:
                twist = twist * gs[i]
            twist = (twist ** (q - 1)).terms
            for i in range(r):
                gi = unit_vector(ring, i)
                for d in ring.digits:
                    w = M.kappa_free(vec_mul_poly(field, twist, vec_mul_poly(field, {d: 1}, gi)))
                    if w:
                        table[(b * r + i, d)] = shift(w, b)
        terms[k] = CartierModule(pres, table, check=False)

    diffs = {}
    for k in range(t):
        images = []
        for S in subsets[k]:
            for i in range(r):
                img = {}
                for j in range(t):
                    if j in S:
                        continue
                    T = tuple(sorted(S + (j,)))
                    coeff = gs[j] if _koszul_sign(j, S) > 0 else -gs[j]
                    img = vec_add(field, img, shift(vec_mul_poly(field, coeff.terms, unit_vector(ring, i)), index[k + 1][T]))
                images.append(img)
        phi = ModuleMap(terms[k].presentation, terms[k + 1].presentation, images, check=False)
        diffs[k] = CartierMorphism(terms[k], terms[k + 1], phi, check=False)
    return ShriekResult(CartierComplex(terms, diffs, check=False), gs)


def stalk_closed_point(M, point):
    """i_x^! M for the closed point cut out by ``point`` (n polynomials, or one irreducible in one variable)."""
    return shriek_regular_sequence(M, point)


# support

@dataclass
class SupportReport:
    ideal: list
    stabilization_exponent: int
    description: str

    @property
    def empty(self):
        return len(self.ideal) == 1 and self.ideal[0].is_constant() and not self.ideal[0].is_zero()


def _describe(ideal):
    if any(f.is_constant() and f for f in ideal):
        return "empty"
    if not ideal:
        return "whole space"
    return "V(" + ", ".join(str(f) for f in ideal) + ")"


def crystalline_support(M, cap=DEFAULT_CHAIN_CAP):
    """Annihilator of the stabilized image kappa^e(M), e >> 0."""
    v = image_chain(M, cap)
    ideal = annihilator(v.stabilized_image)
    return SupportReport(ideal, v.stabilization_exponent, _describe(ideal))


def support_of_stable_submodule(M, sub, cap=DEFAULT_CHAIN_CAP):
    v = descending_chain(M, sub, cap)
    ideal = annihilator(v.stabilized_image)
    return SupportReport(ideal, v.stabilization_exponent, _describe(ideal))


# localization

def _fresh_name(ring, base="y"):
    name = base
    k = 1
    taken = set(ring.variables) | ({"t"} if ring.field.e > 1 else set())
    while name in taken:
        name = f"{base}{k}"
        k += 1
    return name


def restrict_basic_open(M, g, var=None):
    """M restricted to D(g), presented over F_q[x_1..x_n, y]/(y g - 1).

    Uses kappa(v/s) = kappa(v s^(q-1))/s with s = g^(d_y): the table entry for
    x^d y^(d_y) g_i is y^(d_y) * kappa(g^(d_y (q-1)) x^d g_i).
    """
    ring = M.ring
    g = ring(g)
    if g.is_zero():
        raise ValueError("cannot localize at g = 0")
    name = var or _fresh_name(ring)
    new_ring = PolynomialRing(ring.field, ring.variables + (name,), ring.order)
    q = ring.q
    field = ring.field
    r = M.rank

    def embed(v):
        return {(pos, a + (0,)): c for (pos, a), c in v.items()}

    ypoly = new_ring.gen(name)
    g_new = Polynomial(new_ring, {a + (0,): c for a, c in g.terms.items()})
    unit_rel = (ypoly * g_new - 1).terms
    rels = [embed(rel) for rel in M.presentation.relations]
    rels += [vec_mul_poly(field, unit_rel, unit_vector(new_ring, i)) for i in range(r)]
    pres = ModulePresentation(new_ring, r, rels)
    table = {}
    for dy in range(q):
        s = (g ** (dy * (q - 1))).terms
        for i in range(r):
            for d in ring.digits:
                w = M.kappa_free(vec_mul_poly(field, s, {(i, d): 1}))
                if not w:
                    continue
                table[(i, d + (dy,))] = {(pos, a + (dy,)): c for (pos, a), c in w.items()}
    return CartierModule(pres, table, check=True)


# contraction along the last variable

@dataclass
class ContractionWitness:
    """Output of the contraction argument along the distinguished variable X.

    ``N`` is the Cartier module over the base ring on the free basis X^k g_i,
    k <= ell0; it equals M_{<= ell0} when M is free and surjects onto it otherwise.
    """

    C: int
    ell0: int
    q: int
    N: CartierModule
    log: list
    steps: dict = field(repr=False)
    step_bound_ok: bool = True
    step_failures: list = field(default_factory=list)


def _x_degree(v, k):
    return max((a[k] for (_, a) in v), default=-1)


def pushforward_contract(M, extra=5, step_cap=256):
    """Verify the degree contraction of kappa along the last variable X and build N = M_{<= ell0}."""
    ring = M.ring
    if ring.nvars < 1:
        raise ValueError("need at least one variable")
    q = ring.q
    field = ring.field
    X = ring.nvars - 1
    base_digits = list(product(range(q), repeat=ring.nvars - 1))
    C = 0
    for v in M._table.values():
        C = max(C, _x_degree(v, X))
    ell0 = (C * q) // (q - 1)
    top = ell0 + extra
    r = M.rank

    def mono(dbase, k):
        return tuple(dbase) + (k,)

    def images(i, k):
        for db in base_digits:
            w = M.kappa_free({(i, mono(db, k)): 1})
            if w:
                yield w

    deg = []
    for k in range(top + 1):
        deg.append(max((_x_degree(w, X) for i in range(r) for w in images(i, k)), default=-1))
    prefix = []
    best = -1
    for k in range(top + 1):
        best = max(best, deg[k])
        prefix.append(best)

    log = [{"ell": ell0, "max_degree": prefix[ell0], "bound": ell0, "ok": prefix[ell0] <= ell0}]
    for ell in range(ell0 + 1, top + 1):
        log.append({"ell": ell, "max_degree": prefix[ell], "bound": ell - 1, "ok": prefix[ell] <= ell - 1})
    bad = [entry for entry in log if not entry["ok"]]
    if bad:
        raise ContractionError(f"contraction bound violated at ell={bad[0]['ell']}")

    steps = {}
    failures = []
    for i in range(r):
        for k in range(top + 1):
            front = [{(i, mono((0,) * (ring.nvars - 1), k)): 1}]
            s = 0
            while any(_x_degree(v, X) > ell0 for v in front):
                if s >= step_cap:
                    raise ContractionError(f"class X^{k} g{i} did not reach N within {step_cap} steps")
                nxt = []
                seen = set()
                for v in front:
                    for db in base_digits:
                        w = M.kappa_free(vec_mul_poly(field, {mono(db, 0): 1}, v))
                        key = frozenset(w.items())
                        if w and key not in seen:
                            seen.add(key)
                            nxt.append(w)
                front = nxt
                s += 1
            steps[(i, k)] = s
            bound = _ceil_log(k + 1, q) + C + 2
            if s > bound:
                failures.append({"generator": i, "k": k, "steps": s, "bound": bound})

    N = _contracted_module(M, ell0)
    return ContractionWitness(C, ell0, q, N, log, steps, not failures, failures)


def _ceil_log(x, q):
    k, p = 0, 1
    while p < x:
        p *= q
        k += 1
    return k


def _contracted_module(M, ell0):
    ring = M.ring
    X = ring.nvars - 1
    base = PolynomialRing(ring.field, ring.variables[:-1], ring.order)
    width = ell0 + 1
    rank = M.rank * width
    table = {}
    for i in range(M.rank):
        for k in range(width):
            for db in base.digits:
                w = M.kappa_free({(i, tuple(db) + (k,)): 1})
                out = {}
                for (pos, a), c in w.items():
                    out[(pos * width + a[X], a[:X])] = c
                if out:
                    table[(i * width + k, tuple(db))] = out
    return CartierModule(ModulePresentation.free(base, rank), table, check=False)


def pushforward_to_point(M, extra=5):
    """Contract every variable in turn (free modules only); returns the list of witnesses."""
    if M.presentation.relations:
        raise ValueError("iterated contraction is only available for free modules")
    witnesses = []
    cur = M
    while cur.ring.nvars:
        w = pushforward_contract(cur, extra)
        witnesses.append(w)
        cur = w.N
    return witnesses


# Kashiwara

@dataclass
class KashiwaraReport:
    inclusion_nil_isomorphism: bool
    cokernel_order: int | None
    h1_nilpotent: bool
    h1_order: int | None
    torsion: CartierSubmodule = field(repr=False)

    @property
    def passed(self):
        return self.inclusion_nil_isomorphism and self.h1_nilpotent


def torsion_submodule(M, f):
    """M[f] = {m : f m = 0} with the restricted operator (kappa-stable: f kappa(m) = kappa(f^q m))."""
    f = M.ring(f)
    P = M.presentation
    field = M.ring.field
    mult = ModuleMap(P, P, [vec_mul_poly(field, f.terms, g) for g in P.gens()], check=False)
    return CartierSubmodule(M, mult.kernel_submodule, check=False)


def verify_kashiwara(M, f, N, cap=DEFAULT_CHAIN_CAP):
    ring = M.ring
    f = ring(f)
    P = M.presentation
    field = ring.field
    fN = (f ** N).terms
    for g in P.gens():
        if not P.is_zero(vec_mul_poly(field, fN, g)):
            raise SupportError("not supported on V(f)")
    T = torsion_submodule(M, f)
    iso = nil_isomorphism(T.inclusion, cap)
    H1 = shriek_regular_sequence(M, [f]).cohomology(1)
    hv = image_chain(H1, cap)
    return KashiwaraReport(iso.is_nil_isomorphism, iso.cokernel.order, hv.nilpotent, hv.order, T)


# closed points of the affine line

def _dense_mod(field, a, m):
    a = list(a)
    inv = field.inv(m[-1])
    dm = len(m) - 1
    while True:
        while a and a[-1] == 0:
            a.pop()
        if len(a) - 1 < dm:
            return a
        c = field.mul(a[-1], inv)
        shift = len(a) - 1 - dm
        for k, mk in enumerate(m):
            a[shift + k] = field.sub(a[shift + k], field.mul(c, mk))


def monic_irreducibles(ring, max_degree):
    """Monic irreducible polynomials of degree <= max_degree in a univariate ring.

    Sorted by degree, then by coefficient vector from the constant term up.
    """
    if ring.nvars != 1:
        raise ValueError("closed points are enumerated only for univariate rings")
    field = ring.field
    q = field.q
    found = []
    for deg in range(1, max_degree + 1):
        for low in product(range(q), repeat=deg):
            coeffs = list(low) + [1]
            if any(not _dense_mod(field, coeffs, f) for f in found if 2 * (len(f) - 1) <= deg):
                continue
            found.append(coeffs)
    return [Polynomial(ring, {(k,): c for k, c in enumerate(f) if c}) for f in found]


@dataclass
class PointwiseReport:
    points: list
    support: SupportReport
    contained: bool
    details: dict = field(repr=False, default_factory=dict)


def pointwise_nilpotence(M, degree_bound, cap=DEFAULT_CHAIN_CAP, power_cap=DEFAULT_POWER_CAP):
    """Closed points of degree <= degree_bound whose stalk has non-nilpotent cohomology."""
    ring = M.ring
    points = []
    details = {}
    for f in monic_irreducibles(ring, degree_bound):
        stalk = stalk_closed_point(M, [f])
        summ = stalk.summary(cap)
        details[str(f)] = summ
        if any(not s.nilpotent for s in summ):
            points.append(f)
    support = crystalline_support(M, cap)
    contained = True
    for f in points:
        verdict, _ = support_contained(ring, [f], support.ideal, power_cap)
        if verdict is not Containment.CONTAINED:
            contained = False
    return PointwiseReport(points, support, contained, details)


def kappa_image_support_invariant(M, cap=DEFAULT_CHAIN_CAP, power_cap=DEFAULT_POWER_CAP):
    """Compare Supp_crys of M and of its kappa-image submodule in both directions."""
    s1 = crystalline_support(M, cap)
    s2 = support_of_stable_submodule(M, kappa_image(M), cap)
    return same_support(M.ring, s1.ideal, s2.ideal, power_cap), s1, s2


__all__ = [
    "CartierComplex", "ContractionWitness", "KashiwaraReport", "PointwiseReport", "ShriekResult",
    "SupportReport", "crystalline_support", "dualizing_cartier",
    "kappa_image_support_invariant", "monic_irreducibles", "pointwise_nilpotence",
    "pushforward_contract", "pushforward_to_point", "restrict_basic_open",
    "shriek_regular_sequence", "stalk_closed_point", "summarize_cohomology", "torsion_submodule",
    "verify_kashiwara",
]

"""Finitely presented modules over F_q[x_1..x_n].

A :class:`ModulePresentation` is F/<relations> with F free of rank r.  Module
elements are handled internally as vectors ``{(i, exps): coeff}`` in F; the
public helpers accept lists of polynomials (or strings) and return tuples of
:class:`Polynomial`.
"""

import enum
from functools import cached_property

from ..errors import InvalidMapError, RingMismatchError
from .groebner import (
    TaggedBasis,
    groebner_basis,
    leading_term,
    normal_form,
    syzygies,
    vec_add,
    vec_mul_poly,
    vec_shift_positions,
)
from .poly import Polynomial

DEFAULT_POWER_CAP = 64


def unit_vector(ring, i):
    return {(i, ring.zero_exps): 1}


def to_vector(ring, rank, element):
    """Convert a list of polynomials / strings / ints (or a vector dict) to a vector."""
    if isinstance(element, dict):
        for (pos, a) in element:
            if not 0 <= pos < rank or len(a) != ring.nvars:
                raise ValueError("vector does not fit the free module")
        return dict(element)
    element = list(element)
    if len(element) != rank:
        raise ValueError(f"expected {rank} coordinates, got {len(element)}")
    v = {}
    for i, f in enumerate(element):
        f = ring(f)
        for a, c in f.terms.items():
            v[(i, a)] = c
    return v


def to_polys(ring, rank, v):
    comps = [dict() for _ in range(rank)]
    for (pos, a), c in v.items():
        comps[pos][a] = c
    return tuple(Polynomial(ring, t) for t in comps)


def poly_vector(f):
    """A polynomial as a rank-one vector."""
    return {(0, a): c for a, c in f.terms.items()}


def vector_poly(ring, v):
    return Polynomial(ring, {a: c for (pos, a), c in v.items()})


class ModulePresentation:
    """The module F/<relations>, F = R^rank.  Immutable; Groebner data cached per value."""

    def __init__(self, ring, rank, relations=()):
        if rank < 0:
            raise ValueError("rank must be non-negative")
        self.ring = ring
        self.rank = rank
        rels = []
        for r in relations:
            v = to_vector(ring, rank, r)
            if v:
                rels.append(v)
        self.relations = tuple(rels)

    @classmethod
    def free(cls, ring, rank):
        return cls(ring, rank, ())

    @cached_property
    def gb(self):
        return groebner_basis(self.relations, self.ring)

    def element(self, coords):
        return to_vector(self.ring, self.rank, coords)

    def normal_form(self, v):
        return normal_form(v, self.gb, self.ring)

    def is_zero(self, v):
        return not self.normal_form(v)

    def equal(self, u, v):
        return self.is_zero(vec_add(self.ring.field, u, {t: self.ring.field.neg(c) for t, c in v.items()}))

    def polys(self, v):
        return to_polys(self.ring, self.rank, v)

    def gens(self):
        return [unit_vector(self.ring, i) for i in range(self.rank)]

    def is_zero_module(self):
        return all(self.is_zero(g) for g in self.gens())

    def with_relations(self, extra):
        return ModulePresentation(self.ring, self.rank, list(self.relations) + list(extra))

    def submodule(self, gens):
        return Submodule(self, gens)

    # finite-dimensional structure

    @cached_property
    def _staircase(self):
        """Per position, the leading exponents of the relation basis."""
        lead = {i: [] for i in range(self.rank)}
        for g in self.gb:
            pos, a = leading_term(g, self.ring)
            lead[pos].append(a)
        return lead

    def is_finite(self):
        n = self.ring.nvars
        for i in range(self.rank):
            leads = self._staircase[i]
            if any(not any(a) for a in leads):
                continue
            for k in range(n):
                if not any(a[k] > 0 and sum(a) == a[k] for a in leads):
                    return False
        return True

    @cached_property
    def standard_monomials(self):
        """F_q-basis (position, exps) of the module, or None if infinite-dimensional."""
        if not self.is_finite():
            return None
        n = self.ring.nvars
        out = []
        for i in range(self.rank):
            leads = self._staircase[i]
            if any(not any(a) for a in leads):
                continue
            bounds = []
            for k in range(n):
                bounds.append(min(a[k] for a in leads if a[k] > 0 and sum(a) == a[k]))
            stack = [self.ring.zero_exps]
            seen = set(stack)
            while stack:
                a = stack.pop()
                out.append((i, a))
                for k in range(n):
                    b = list(a)
                    b[k] += 1
                    b = tuple(b)
                    if b[k] >= bounds[k] or b in seen:
                        continue
                    if any(all(x >= y for x, y in zip(b, c)) for c in leads):
                        continue
                    seen.add(b)
                    stack.append(b)
        out.sort(key=self.ring.term_key, reverse=True)
        return tuple(out)

    def dimension(self):
        """Dimension over F_q, or None when infinite."""
        basis = self.standard_monomials
        return None if basis is None else len(basis)

    def coordinates(self, v):
        """Coordinates (list of encoded scalars) of v in the standard monomial basis."""
        basis = self.standard_monomials
        if basis is None:
            raise ValueError("module is not finite-dimensional")
        nf = self.normal_form(v)
        return [nf.get(t, 0) for t in basis]

    def __repr__(self):
        return f"ModulePresentation(rank={self.rank}, relations={len(self.relations)})"


class Submodule:
    """Submodule of a presented module M generated by vectors of the ambient free module."""

    def __init__(self, ambient, gens):
        self.ambient = ambient
        ring = ambient.ring
        gens = [to_vector(ring, ambient.rank, g) for g in gens]
        self.gens = tuple(g for g in (ambient.normal_form(g) for g in gens) if g)

    @classmethod
    def whole(cls, ambient):
        return cls(ambient, ambient.gens())

    @cached_property
    def gb(self):
        """Reduced Groebner basis of gens + relations (a canonical form of the submodule)."""
        return groebner_basis(list(self.gens) + list(self.ambient.relations), self.ambient.ring)

    def contains(self, v):
        return not normal_form(v, self.gb, self.ambient.ring)

    def is_zero(self):
        return not self.gens

    def issubset(self, other):
        return all(other.contains(g) for g in self.gens)

    def __eq__(self, other):
        if not isinstance(other, Submodule):
            return NotImplemented
        return self.ambient.ring == other.ambient.ring and self.gb == other.gb

    __hash__ = None

    def pruned(self):
        """Same submodule, generated by the basis elements that are nonzero in M."""
        return Submodule(self.ambient, [g for g in self.gb if not self.ambient.is_zero(g)])

    def __add__(self, other):
        return Submodule(self.ambient, list(self.gens) + list(other.gens))

    @cached_property
    def _tagged(self):
        a = self.ambient
        return TaggedBasis(self.gens, a.relations, a.ring, a.rank)

    def lift(self, v):
        """Vector c over the generators with v = sum c_j gens[j] in M, or None if v is not in here."""
        return self._tagged.lift(v)

    @cached_property
    def presentation(self):
        """The submodule as a module in its own right: R^k / syzygies of its generators."""
        a = self.ambient
        syz = syzygies(self.gens, a.relations, a.ring, a.rank)
        return ModulePresentation(a.ring, len(self.gens), syz)

    @cached_property
    def inclusion(self):
        return ModuleMap(self.presentation, self.ambient, self.gens, check=False)

    def dimension(self):
        return self.presentation.dimension()

    def __repr__(self):
        return f"Submodule({len(self.gens)} generators of {self.ambient!r})"


class ModuleMap:
    """R-linear map given by the images of the source generators (vectors of the target's free module)."""

    def __init__(self, source, target, images, check=True):
        if source.ring != target.ring:
            raise RingMismatchError("source and target over different rings")
        images = [target.normal_form(to_vector(target.ring, target.rank, u)) for u in images]
        if len(images) != source.rank:
            raise InvalidMapError(f"need {source.rank} images, got {len(images)}")
        self.source = source
        self.target = target
        self.images = tuple(images)
        if check:
            for k, rel in enumerate(source.relations):
                if not target.is_zero(self.apply_free(rel)):
                    raise InvalidMapError(f"relation {k} of the source does not map to zero")

    @classmethod
    def from_polys(cls, source, target, matrix, check=True):
        return cls(source, target, [to_vector(target.ring, target.rank, row) for row in matrix], check)

    def apply_free(self, v):
        """Image of a source free-module vector, unreduced."""
        field = self.source.ring.field
        out = {}
        comps = {}
        for (pos, a), c in v.items():
            comps.setdefault(pos, {})[a] = c
        for pos, f in comps.items():
            out = vec_add(field, out, vec_mul_poly(field, f, self.images[pos]))
        return out

    def apply(self, v):
        return self.target.normal_form(self.apply_free(v))

    def compose(self, other):
        """self o other."""
        return ModuleMap(other.source, self.target, [self.apply_free(u) for u in other.images], check=False)

    def is_zero(self):
        return all(not u for u in self.images)

    def image(self):
        return Submodule(self.target, self.images)

    @cached_property
    def kernel_submodule(self):
        """Kernel as a submodule of the source."""
        t = self.target
        syz = syzygies(self.images, t.relations, t.ring, t.rank)
        return Submodule(self.source, syz)

    def kernel(self):
        k = self.kernel_submodule
        return k.presentation, k.inclusion

    def cokernel(self):
        t = self.target
        coker = t.with_relations(self.images)
        proj = ModuleMap(t, coker, t.gens(), check=False)
        return coker, proj

    def __repr__(self):
        return f"ModuleMap({self.source!r} -> {self.target!r})"


def map_kernel_cokernel(phi):
    """((kernel, inclusion), (cokernel, projection)) of a module map."""
    return phi.kernel(), phi.cokernel()


def direct_sum(modules):
    ring = modules[0].ring
    rels = []
    offset = 0
    for m in modules:
        if m.ring != ring:
            raise RingMismatchError("direct sum of modules over different rings")
        rels.extend(vec_shift_positions(r, offset) for r in m.relations)
        offset += m.rank
    return ModulePresentation(ring, offset, rels)


# ideals

def ideal_basis(ring, gens):
    """Reduced Groebner basis of an ideal, as polynomials."""
    vecs = [poly_vector(ring(g)) for g in gens]
    return [vector_poly(ring, v) for v in groebner_basis(vecs, ring)]


def ideal_contains(ring, basis, f):
    vecs = [poly_vector(g) for g in basis]
    return not normal_form(poly_vector(ring(f)), vecs, ring)


def _annihilator_of(ambient, vectors):
    """Ideal {f : f*v in relations for all v} for vectors of the ambient free module."""
    ring = ambient.ring
    k = len(vectors)
    if k == 0:
        return [ring.one()]
    summed = direct_sum([ambient] * k)
    u = {}
    for j, v in enumerate(vectors):
        u.update(vec_shift_positions(v, j * ambient.rank))
    syz = syzygies([u], summed.relations, ring, summed.rank)
    return [vector_poly(ring, v) for v in groebner_basis(syz, ring)]


def annihilator(module):
    """Generators (reduced Groebner basis) of Ann(M); Supp(M) = V(Ann M)."""
    if isinstance(module, Submodule):
        return _annihilator_of(module.ambient, list(module.gens))
    return _annihilator_of(module, module.gens())


def ideal_quotient(ring, ideal, f):
    """(ideal : f) as a reduced basis."""
    rel = ModulePresentation(ring, 1, [[g] for g in ideal])
    return _annihilator_of(rel, [poly_vector(ring(f))])


class Containment(enum.Enum):
    CONTAINED = "contained"
    UNDECIDED = "undecided at cap"


def support_contained(ring, A, B, power_cap=DEFAULT_POWER_CAP):
    """Decide V(A) subset V(B), i.e. every b in B has b^k in <A> for some k <= power_cap.

    Returns ``(Containment, witnesses)`` where witnesses maps each generator of
    B (as text) to the exponent found, or None for the first generator that
    failed within the cap.
    """
    basis = [poly_vector(ring(a)) for a in A]
    gb = groebner_basis(basis, ring)
    field = ring.field
    witnesses = {}
    for b in B:
        b = ring(b)
        bv = poly_vector(b)
        cur = normal_form(bv, gb, ring)
        k = 1
        while cur and k < power_cap:
            cur = normal_form(vec_mul_poly(field, b.terms, cur), gb, ring)
            k += 1
        if cur:
            witnesses[str(b)] = None
            return Containment.UNDECIDED, witnesses
        witnesses[str(b)] = k
    return Containment.CONTAINED, witnesses


def same_support(ring, A, B, power_cap=DEFAULT_POWER_CAP):
    """True iff V(A) = V(B) is certified in both directions within the cap."""
    c1, _ = support_contained(ring, A, B, power_cap)
    c2, _ = support_contained(ring, B, A, power_cap)
    return c1 is Containment.CONTAINED and c2 is Containment.CONTAINED

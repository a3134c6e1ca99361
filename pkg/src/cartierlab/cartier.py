"""Cartier modules: presented modules with a q^-1-linear operator kappa.

The operator is stored as a table ``(generator i, digit d) -> kappa(x^d g_i)``
with d in {0..q-1}^n.  Every other value follows from semilinearity: writing
a coordinate f = sum_d f_d^q x^d, kappa(f g_i) = sum_d f_d kappa(x^d g_i).
Scalars of F_q are fixed by the q-power Frobenius, so no roots are needed.
"""

from dataclasses import dataclass, field
from functools import cached_property

from .errors import (
    CapExceededError,
    InconsistentKappaError,
    NotEquivariantError,
    NotFiniteError,
    RingMismatchError,
    UndecidedError,
)
from .semialg import linalg
from .semialg.groebner import vec_mul_poly, vec_shift_positions, vec_sub
from .semialg.modules import (
    ModuleMap,
    ModulePresentation,
    Submodule,
    direct_sum,
    to_vector,
    unit_vector,
)
from .semialg.poly import format_monomial, format_terms

DEFAULT_CHAIN_CAP = 256
DEFAULT_CLOSURE_CAP = 1024


class CartierModule:
    """A module presentation together with a validated kappa table."""

    def __init__(self, presentation, table=None, check=True):
        self.presentation = presentation
        ring = presentation.ring
        q, n = ring.q, ring.nvars
        entries = {}
        for (i, d), value in (table or {}).items():
            d = tuple(d)
            if not 0 <= i < presentation.rank:
                raise ValueError(f"generator index {i} out of range")
            if len(d) != n:
                raise ValueError(f"digit {list(d)} has the wrong length")
            if any(not 0 <= x < q for x in d):
                raise ValueError(f"digit out of range [0, q-1]: {list(d)}")
            v = presentation.normal_form(to_vector(ring, presentation.rank, value))
            if v:
                entries[(i, d)] = v
        self._table = entries
        if check:
            self.check_well_defined()

    @classmethod
    def zero_map(cls, presentation):
        return cls(presentation, {}, check=False)

    @property
    def ring(self):
        return self.presentation.ring

    @property
    def rank(self):
        return self.presentation.rank

    @property
    def q(self):
        return self.ring.q

    @property
    def table(self):
        """Nonzero table entries as {(i, d): tuple of polynomials}."""
        return {k: self.presentation.polys(v) for k, v in sorted(self._table.items())}

    def table_value(self, i, d):
        return self._table.get((i, tuple(d)), {})

    def kappa_free(self, v):
        """kappa on a vector of the ambient free module, via the stored representatives."""
        ring = self.ring
        field = ring.field
        q = ring.q
        add, mul = field.add, field.mul
        out = {}
        for (i, a), c in v.items():
            d = tuple(x % q for x in a)
            val = self._table.get((i, d))
            if not val:
                continue
            b = tuple(x // q for x in a)
            for (pos, e), c2 in val.items():
                m = (pos, tuple(x + y for x, y in zip(b, e)))
                s = add(out.get(m, 0), mul(c, c2))
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return out

    def kappa(self, v):
        return self.presentation.normal_form(self.kappa_free(v))

    def kappa_power(self, v, e):
        for _ in range(e):
            v = self.kappa(v)
        return v

    def check_well_defined(self):
        """Reject tables with kappa(x^d * rel) nonzero for some relation and digit."""
        P = self.presentation
        field = self.ring.field
        for k, rel in enumerate(P.relations):
            for d in self.ring.digits:
                w = self.kappa_free(vec_mul_poly(field, {d: 1}, rel))
                if not P.is_zero(w):
                    rel_txt = format_generators(self.ring, rel)
                    mono = format_monomial(self.ring, d) or "1"
                    img = format_generators(self.ring, P.normal_form(w))
                    raise InconsistentKappaError(
                        f"inconsistent kappa table: relation {rel_txt}, digit {list(d)}: "
                        f"kappa({mono} * ({rel_txt})) = {img} is nonzero",
                        relation=k, digit=d)

    def element(self, coords):
        return to_vector(self.ring, self.rank, coords)

    def is_zero_module(self):
        return self.presentation.is_zero_module()

    def __repr__(self):
        return f"CartierModule(rank={self.rank}, relations={len(self.presentation.relations)}, q={self.q})"


def format_vector(ring, rank, v):
    comps = [dict() for _ in range(rank)]
    for (pos, a), c in v.items():
        comps[pos][a] = c
    return ", ".join(format_terms(ring, t) for t in comps)


def format_generators(ring, v):
    """A vector as a combination of generators, e.g. ``x^2*g0 + (y+1)*g1``."""
    comps = {}
    for (pos, a), c in v.items():
        comps.setdefault(pos, {})[a] = c
    parts = []
    for pos in sorted(comps):
        f = comps[pos]
        txt = format_terms(ring, f)
        if txt == "1":
            parts.append(f"g{pos}")
        elif len(f) == 1 and not txt.startswith("-"):
            parts.append(f"{txt}*g{pos}")
        else:
            parts.append(f"({txt})*g{pos}")
    return " + ".join(parts) or "0"


def _as_vector(M, m):
    if isinstance(m, dict):
        return to_vector(M.ring, M.rank, m)
    m = list(m)
    for f in m:
        if hasattr(f, "ring") and f.ring != M.ring:
            raise RingMismatchError("element is not over the module's ring")
    return to_vector(M.ring, M.rank, m)


def kappa_apply(M, m):
    """kappa(m) in normal form, as a tuple of polynomials."""
    return M.presentation.polys(M.kappa(_as_vector(M, m)))


def kappa_image(M, generators=None):
    """The submodule kappa(N) for N generated by ``generators`` (default: all of M)."""
    P = M.presentation
    if generators is None:
        gens = P.gens()
    elif isinstance(generators, Submodule):
        gens = list(generators.gens)
    else:
        gens = [_as_vector(M, g) for g in generators]
    field = M.ring.field
    images = []
    for h in gens:
        for d in M.ring.digits:
            w = M.kappa_free(vec_mul_poly(field, {d: 1}, h))
            if w:
                images.append(w)
    return Submodule(P, images).pruned()


@dataclass(frozen=True)
class NilpotenceVerdict:
    nilpotent: bool
    order: int | None
    stabilization_exponent: int
    stabilized_image: Submodule
    chain: tuple = field(repr=False, default=())


def descending_chain(M, start, cap=DEFAULT_CHAIN_CAP):
    """Image chain N_0 = start, N_{e+1} = kappa(N_e) for a kappa-stable submodule ``start``.

    The stabilization exponent is the first e >= 1 with N_e = N_{e+1}
    (0 for the zero module); for nilpotent input it equals the order.
    """
    if cap < 1:
        raise ValueError("cap must be at least 1")
    chain = [start]
    if start.is_zero():
        return NilpotenceVerdict(True, 0, 0, start, tuple(chain))
    N = kappa_image(M, start)
    chain.append(N)
    e = 1
    while True:
        if N.is_zero():
            return NilpotenceVerdict(True, e, e, N, tuple(chain))
        nxt = kappa_image(M, N)
        if nxt == N:
            return NilpotenceVerdict(False, None, e, N, tuple(chain))
        if e + 1 > cap:
            raise CapExceededError(f"stabilization cap exceeded ({cap})")
        chain.append(nxt)
        N = nxt
        e += 1


def image_chain(M, cap=DEFAULT_CHAIN_CAP):
    return descending_chain(M, Submodule.whole(M.presentation), cap)


def is_nilpotent(M, cap=DEFAULT_CHAIN_CAP):
    """Nilpotence of kappa on M: true iff the stabilized image chain is zero."""
    return image_chain(M, cap)


def elementwise_order(M, m, cap=DEFAULT_CHAIN_CAP):
    """Smallest e <= cap with kappa^e(m) = 0, or None.

    This is the weak elementwise notion; it does not decide local nilpotence.
    """
    v = M.presentation.normal_form(_as_vector(M, m))
    for e in range(cap + 1):
        if not v:
            return e
        v = M.kappa(v)
    return None


def _closure_submodule(M, gens, cap):
    U = Submodule(M.presentation, gens).pruned()
    for _ in range(cap):
        bigger = (U + kappa_image(M, U)).pruned()
        if bigger == U:
            return U
        U = bigger
    raise CapExceededError(f"stabilization cap exceeded ({cap})")


def element_locally_nilpotent(M, m, cap=DEFAULT_CHAIN_CAP, closure_cap=DEFAULT_CLOSURE_CAP):
    """Smallest e with kappa^e(R*m) = 0, or None if no such e exists.

    Decided through the kappa-stable closure U of R*m: kappa^e(U) is the sum
    of kappa^(e+i)(R*m), so U is nilpotent of order e exactly when R*m is.
    Raises UndecidedError if a chain hits its cap.
    """
    v = _as_vector(M, m)
    if M.presentation.is_zero(v):
        return 0
    try:
        U = _closure_submodule(M, [v], closure_cap)
        verdict = descending_chain(M, U, cap)
    except CapExceededError as exc:
        raise UndecidedError("undecided at cap") from exc
    return verdict.order if verdict.nilpotent else None


class CartierSubmodule:
    """A kappa-stable submodule N of a Cartier module, with N as a Cartier module of its own."""

    def __init__(self, parent, submodule, check=True):
        if submodule.ambient is not parent.presentation and submodule.ambient.gb != parent.presentation.gb:
            raise ValueError("submodule is not inside the given Cartier module")
        self.parent = parent
        self.submodule = submodule
        if check:
            field = parent.ring.field
            for h in submodule.gens:
                for d in parent.ring.digits:
                    if not submodule.contains(parent.kappa_free(vec_mul_poly(field, {d: 1}, h))):
                        raise ValueError("submodule is not kappa-stable")

    @cached_property
    def module(self):
        sub = self.submodule
        P = sub.presentation
        field = self.parent.ring.field
        table = {}
        for j, h in enumerate(sub.gens):
            for d in self.parent.ring.digits:
                w = self.parent.kappa_free(vec_mul_poly(field, {d: 1}, h))
                if not w:
                    continue
                c = sub.lift(w)
                if c is None:
                    raise ValueError("submodule is not kappa-stable")
                if c:
                    table[(j, d)] = c
        return CartierModule(P, table, check=False)

    @cached_property
    def inclusion(self):
        return CartierMorphism(self.module, self.parent, self.submodule.gens, check=False)

    def is_zero(self):
        return self.submodule.is_zero()

    def dimension(self):
        return self.submodule.dimension()

    def contains(self, m):
        return self.submodule.contains(_as_vector(self.parent, m))

    def __repr__(self):
        return f"CartierSubmodule({len(self.submodule.gens)} generators)"


def cartier_quotient(M, sub):
    """M/N with the induced operator; ``sub`` a kappa-stable Submodule (or CartierSubmodule)."""
    if isinstance(sub, CartierSubmodule):
        sub = sub.submodule
    P = M.presentation.with_relations(sub.gens)
    table = {k: v for k, v in M._table.items()}
    return CartierModule(P, table, check=False)


def cartier_direct_sum(modules):
    P = direct_sum([m.presentation for m in modules])
    table = {}
    offset = 0
    for m in modules:
        for (i, d), v in m._table.items():
            table[(i + offset, d)] = vec_shift_positions(v, offset)
        offset += m.rank
    return CartierModule(P, table, check=False)


class CartierMorphism:
    """A module map commuting with kappa; equivariance is checked on generators and digits."""

    def __init__(self, source, target, images, check=True):
        if isinstance(images, ModuleMap):
            underlying = images
        else:
            underlying = ModuleMap(source.presentation, target.presentation, images, check=check)
        self.source = source
        self.target = target
        self.underlying = underlying
        if check:
            self.check_equivariant()

    def check_equivariant(self):
        field = self.source.ring.field
        phi = self.underlying
        for i in range(self.source.rank):
            gi = unit_vector(self.source.ring, i)
            for d in self.source.ring.digits:
                lhs = phi.apply_free(self.source.kappa_free(vec_mul_poly(field, {d: 1}, gi)))
                rhs = self.target.kappa_free(vec_mul_poly(field, {d: 1}, phi.images[i]))
                if not self.target.presentation.is_zero(vec_sub(field, lhs, rhs)):
                    raise NotEquivariantError(
                        f"map does not commute with kappa on generator g{i}, digit {list(d)}")

    @classmethod
    def identity(cls, M):
        return cls(M, M, M.presentation.gens(), check=False)

    def apply(self, v):
        return self.underlying.apply(v)

    def compose(self, other):
        """self o other."""
        return CartierMorphism(other.source, self.target, self.underlying.compose(other.underlying), check=False)

    def kernel(self):
        return CartierSubmodule(self.source, self.underlying.kernel_submodule, check=False)

    def image(self):
        return CartierSubmodule(self.target, self.underlying.image(), check=False)

    def cokernel(self):
        C = cartier_quotient(self.target, self.underlying.image())
        proj = CartierMorphism(self.target, C, self.target.presentation.gens(), check=False)
        return C, proj

    def __repr__(self):
        return f"CartierMorphism({self.source!r} -> {self.target!r})"


def stable_closure(M, gens, cap=DEFAULT_CLOSURE_CAP):
    """Smallest kappa-stable submodule containing R*gens (ascending chain U + kappa(U))."""
    vecs = [_as_vector(M, g) for g in gens]
    U = _closure_submodule(M, vecs, cap)
    return CartierSubmodule(M, U, check=False)


def cartier_submodule(M, gens, check=True):
    """The submodule generated by ``gens``, which must already be kappa-stable."""
    return CartierSubmodule(M, Submodule(M.presentation, [_as_vector(M, g) for g in gens]), check=check)


# finite-dimensional linear algebra

def _require_finite(M):
    basis = M.presentation.standard_monomials
    if basis is None:
        raise NotFiniteError("nilpotent part requires finite F_p-dimension")
    return basis


def kappa_matrix(M):
    """(basis, matrix) of kappa on a finite-dimensional M; column j is kappa(basis[j]).

    kappa is F_q-linear because scalars are fixed by the q-power Frobenius.
    """
    basis = _require_finite(M)
    P = M.presentation
    cols = [P.coordinates(M.kappa_free({b: 1})) for b in basis]
    return basis, linalg.transpose(cols, len(basis)) if cols else []


def multiplication_matrix(M, var):
    basis = _require_finite(M)
    P = M.presentation
    ring = M.ring
    k = var if isinstance(var, int) else ring.variables.index(var)
    cols = []
    for pos, a in basis:
        b = list(a)
        b[k] += 1
        cols.append(P.coordinates({(pos, tuple(b)): 1}))
    return linalg.transpose(cols, len(basis)) if cols else []


def _largest_stable_kernel(field, A, mults, dim):
    """Largest subspace inside ker A stable under every matrix in ``mults``."""
    rows = linalg.span_basis(field, A, dim)
    while True:
        stacked = list(rows)
        for X in mults:
            stacked.extend(linalg.matmul(field, rows, X))
        new = linalg.span_basis(field, stacked, dim)
        if len(new) == len(rows):
            return linalg.nullspace(field, rows, dim)
        rows = new


def _subspace_submodule(M, basis, vectors):
    gens = []
    for coords in vectors:
        v = {b: c for b, c in zip(basis, coords) if c}
        if v:
            gens.append(v)
    return CartierSubmodule(M, Submodule(M.presentation, gens), check=False)


def nilpotent_part(M, e="all"):
    """M_e = {m : kappa^e(R*m) = 0}, or M_nil = union of all M_e when e == 'all'.

    Only for modules of finite dimension over F_q; computed by linear algebra
    as the largest R-stable subspace of ker(kappa^e).
    """
    basis, K = kappa_matrix(M)
    field = M.ring.field
    D = len(basis)
    mults = [multiplication_matrix(M, k) for k in range(M.ring.nvars)]

    def part(exp):
        if D == 0:
            return []
        A = linalg.matpow(field, K, exp)
        return _largest_stable_kernel(field, A, mults, D)

    if e == "all":
        prev = None
        for exp in range(D + 2):
            cur = part(exp)
            if prev is not None and len(cur) == len(prev):
                return _subspace_submodule(M, basis, cur)
            prev = cur
        return _subspace_submodule(M, basis, prev)
    e = int(e)
    if e < 0:
        raise ValueError("e must be non-negative")
    return _subspace_submodule(M, basis, part(e))


def nilpotent_filtration(M):
    """Dimensions of M_0, M_1, ... up to stabilization (finite-dimensional M)."""
    _require_finite(M)
    dims = []
    exp = 0
    while True:
        d = nilpotent_part(M, exp).dimension()
        if dims and d == dims[-1]:
            return dims
        dims.append(d)
        exp += 1


# crystals

@dataclass(frozen=True)
class NilIsoVerdict:
    is_nil_isomorphism: bool
    kernel: NilpotenceVerdict
    cokernel: NilpotenceVerdict


def nil_isomorphism(phi, cap=DEFAULT_CHAIN_CAP):
    """A morphism is a nil-isomorphism iff its kernel and cokernel are nilpotent."""
    K = phi.underlying.kernel_submodule
    kv = descending_chain(phi.source, K, cap)
    C, _ = phi.cokernel()
    cv = image_chain(C, cap)
    return NilIsoVerdict(kv.nilpotent and cv.nilpotent, kv, cv)


@dataclass(frozen=True)
class CrysZeroVerdict:
    zero: bool
    image: NilpotenceVerdict


def is_zero_in_crys(phi, cap=DEFAULT_CHAIN_CAP):
    """phi vanishes in the category of crystals iff its image is nilpotent."""
    v = descending_chain(phi.target, phi.underlying.image(), cap)
    return CrysZeroVerdict(v.nilpotent, v)


def kappa_image_inclusion(M):
    """The inclusion kappa(M) -> M as a Cartier morphism (always a nil-isomorphism)."""
    sub = CartierSubmodule(M, kappa_image(M), check=False)
    return sub.inclusion


def free_cartier_module(ring, rank, table):
    """Free module of the given rank; ``table`` maps (i, d) to lists of polynomials."""
    return CartierModule(ModulePresentation.free(ring, rank), table)


__all__ = [
    "CartierModule", "CartierMorphism", "CartierSubmodule", "CrysZeroVerdict", "NilIsoVerdict",
    "NilpotenceVerdict", "cartier_direct_sum", "cartier_quotient", "cartier_submodule",
    "descending_chain", "element_locally_nilpotent", "elementwise_order", "free_cartier_module",
    "image_chain", "is_nilpotent", "is_zero_in_crys", "kappa_apply", "kappa_image",
    "kappa_image_inclusion", "kappa_matrix", "multiplication_matrix", "nil_isomorphism",
    "nilpotent_filtration", "nilpotent_part", "stable_closure",
]

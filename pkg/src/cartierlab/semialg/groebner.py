"""Buchberger's algorithm for submodules of free modules over F_q[x_1..x_n].

Vectors are dicts ``{(position, exps): coeff}`` with encoded coefficients.
Ideals are the rank-one case (every term at position 0).  Terms are
compared with the ring's position-over-term key, so lower positions always
dominate; this is what makes the tag trick in :func:`syzygies` an
elimination order.
"""

from ..errors import RingMismatchError


def vec_add(field, u, v):
    out = dict(u)
    add = field.add
    for t, c in v.items():
        s = add(out.get(t, 0), c)
        if s:
            out[t] = s
        else:
            out.pop(t, None)
    return out


def vec_sub(field, u, v):
    return vec_add(field, u, vec_scale(field, v, field.neg(1)))


def vec_scale(field, v, c):
    if not c:
        return {}
    mul = field.mul
    return {t: mul(c, d) for t, d in v.items()}


def vec_mul_poly(field, f, v):
    """Product of the polynomial term dict ``f`` with the vector ``v``."""
    out = {}
    add, mul = field.add, field.mul
    for a, c in f.items():
        for (pos, b), d in v.items():
            m = (pos, tuple(x + y for x, y in zip(a, b)))
            s = add(out.get(m, 0), mul(c, d))
            if s:
                out[m] = s
            else:
                out.pop(m, None)
    return out


def vec_shift_positions(v, offset):
    return {(pos + offset, a): c for (pos, a), c in v.items()}


def leading_term(v, ring):
    return max(v, key=ring.term_key)


def _divides(b, a):
    return all(x >= y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _monic(field, v, lt):
    inv = field.inv(v[lt])
    return vec_scale(field, v, inv) if inv != 1 else dict(v)


class _Index:
    """Reducers grouped by leading position."""

    def __init__(self):
        self.by_pos = {}

    def add(self, lt, vec):
        self.by_pos.setdefault(lt[0], []).append((lt[1], vec))

    def find(self, term):
        pos, a = term
        for b, w in self.by_pos.get(pos, ()):
            if _divides(b, a):
                return b, w
        return None


def _reduce(v, index, ring, full=True):
    field = ring.field
    sub, mul = field.sub, field.mul
    key = ring.term_key
    v = dict(v)
    out = {}
    while v:
        t = max(v, key=key)
        c = v[t]
        red = index.find(t)
        if red is None:
            if not full:
                out.update(v)
                return out
            out[t] = c
            del v[t]
            continue
        b, w = red
        shift = tuple(x - y for x, y in zip(t[1], b))
        for (p2, e2), c2 in w.items():
            m = (p2, tuple(x + y for x, y in zip(e2, shift)))
            s = sub(v.get(m, 0), mul(c, c2))
            if s:
                v[m] = s
            else:
                v.pop(m, None)
    return out


def normal_form(v, basis, ring):
    """Fully reduced remainder of ``v`` modulo a (monic) Groebner basis."""
    index = _Index()
    for g in basis:
        index.add(leading_term(g, ring), g)
    return _reduce(v, index, ring)


def s_vector(f, g, ring):
    """S-vector of two vectors with the same leading position, or None."""
    field = ring.field
    tf, tg = leading_term(f, ring), leading_term(g, ring)
    if tf[0] != tg[0]:
        return None
    m = _lcm(tf[1], tg[1])
    sf = {tuple(x - y for x, y in zip(m, tf[1])): field.inv(f[tf])}
    sg = {tuple(x - y for x, y in zip(m, tg[1])): field.inv(g[tg])}
    return vec_sub(field, vec_mul_poly(field, sf, f), vec_mul_poly(field, sg, g))


def _single_position(v):
    return len({pos for pos, _ in v}) == 1


def groebner_basis(gens, ring):
    """Reduced Groebner basis (monic, sorted by descending leading term).

    Uses Buchberger's algorithm with the chain criterion; the coprime
    criterion is applied only to vectors supported in a single position,
    where it is valid.
    """
    field = ring.field
    G, lts, single = [], [], []
    index = _Index()
    pending = set()

    def insert(h):
        lt = leading_term(h, ring)
        h = _monic(field, h, lt)
        k = len(G)
        G.append(h)
        lts.append(lt)
        single.append(_single_position(h))
        index.add(lt, h)
        for i in range(k):
            if lts[i][0] == lt[0]:
                pending.add((i, k))

    for g in gens:
        h = _reduce(g, index, ring)
        if h:
            insert(h)

    while pending:
        i, j = min(pending, key=lambda ij: (sum(_lcm(lts[ij[0]][1], lts[ij[1]][1])), ij))
        pending.discard((i, j))
        a, b = lts[i][1], lts[j][1]
        m = _lcm(a, b)
        if single[i] and single[j] and all(x == 0 or y == 0 for x, y in zip(a, b)):
            continue
        skip = False
        for k in range(len(G)):
            if k in (i, j) or lts[k][0] != lts[i][0]:
                continue
            if (min(i, k), max(i, k)) in pending or (min(j, k), max(j, k)) in pending:
                continue
            if _divides(lts[k][1], m):
                skip = True
                break
        if skip:
            continue
        s = s_vector(G[i], G[j], ring)
        h = _reduce(s, index, ring)
        if h:
            insert(h)

    return _interreduce(G, lts, ring)


def _interreduce(G, lts, ring):
    field = ring.field
    keep = []
    for i, lt in enumerate(lts):
        redundant = False
        for j, lt2 in enumerate(lts):
            if i == j or lt2[0] != lt[0] or not _divides(lt2[1], lt[1]):
                continue
            if lt2 != lt or j < i:
                redundant = True
                break
        if not redundant:
            keep.append(i)
    out = []
    for i in keep:
        index = _Index()
        for j in keep:
            if j != i:
                index.add(lts[j], G[j])
        h = _reduce(G[i], index, ring)
        lt = leading_term(h, ring)
        out.append(_monic(field, h, lt))
    out.sort(key=lambda v: ring.term_key(leading_term(v, ring)), reverse=True)
    return out


def is_groebner(basis, ring):
    """Buchberger criterion: every S-vector reduces to zero (no shortcuts)."""
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            s = s_vector(basis[i], basis[j], ring)
            if s is not None and normal_form(s, basis, ring):
                return False
    return True


def syzygies(vectors, relations, ring, rank):
    """Generators of {c : sum c_j * vectors[j] lies in <relations>}.

    Computed by one Groebner basis of the tagged vectors (v_j, e_j) and
    (rel, 0) in a free module of rank ``rank + len(vectors)``; the basis
    elements whose leading position is a tag have vanishing first part.
    """
    ext = []
    zero = ring.zero_exps
    for j, v in enumerate(vectors):
        w = dict(v)
        w[(rank + j, zero)] = 1
        ext.append(w)
    ext.extend(relations)
    out = []
    for g in groebner_basis(ext, ring):
        if leading_term(g, ring)[0] >= rank:
            out.append(vec_shift_positions(g, -rank))
    return out


class TaggedBasis:
    """Groebner basis of (h_j, e_j), (rel, 0) used to express elements in the h_j."""

    def __init__(self, gens, relations, ring, rank):
        zero = ring.zero_exps
        ext = []
        for j, v in enumerate(gens):
            w = dict(v)
            w[(rank + j, zero)] = 1
            ext.append(w)
        ext.extend(relations)
        self.ring = ring
        self.rank = rank
        self.ngens = len(gens)
        self.basis = groebner_basis(ext, ring)
        self._index = _Index()
        for g in self.basis:
            self._index.add(leading_term(g, ring), g)

    def lift(self, v):
        """Coefficient vector c (positions 0..ngens-1) with v = sum c_j h_j mod relations, or None."""
        r = _reduce(v, self._index, self.ring)
        if any(pos < self.rank for pos, _ in r):
            return None
        neg = self.ring.field.neg
        return {(pos - self.rank, a): neg(c) for (pos, a), c in r.items()}


def check_rings(*rings):
    first = rings[0]
    for r in rings[1:]:
        if r != first:
            raise RingMismatchError("mixed rings")
    return first

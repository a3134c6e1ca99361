"""Sparse multivariate polynomials over F_q.

A polynomial is a dict mapping exponent tuples to nonzero encoded field
elements.  The :class:`PolynomialRing` carries the field, the ordered
variable names and the monomial order used for leading terms and printing.
"""

import re
from dataclasses import dataclass
from functools import cached_property
from itertools import product

from ..errors import RingMismatchError
from .field import FieldElement, FieldSpec

ORDERS = ("grevlex", "deglex", "lex")


def _grevlex_key(a):
    return (sum(a), tuple(-x for x in reversed(a)))


def _deglex_key(a):
    return (sum(a), a)


def _lex_key(a):
    return a


_KEYS = {"grevlex": _grevlex_key, "deglex": _deglex_key, "lex": _lex_key}


class PolynomialSyntaxError(ValueError):
    def __init__(self, message, column):
        super().__init__(f"{message} (column {column})")
        self.column = column
        self.reason = message


class PolynomialRing:
    """F_q[x_1..x_n] with a fixed variable list and monomial order."""

    def __init__(self, field, variables, order="grevlex"):
        if not isinstance(field, FieldSpec):
            raise TypeError("field must be a FieldSpec")
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise ValueError("duplicate variable names")
        for v in variables:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", v):
                raise ValueError(f"invalid variable name {v!r}")
            if v == "t" and field.e > 1:
                raise ValueError("'t' is reserved for the field generator when e > 1")
        if order not in ORDERS:
            raise ValueError(f"unknown monomial order {order!r}")
        self.field = field
        self.variables = variables
        self.order = order
        self.nvars = len(variables)
        self._mkey = _KEYS[order]
        self._key_cache = {}

    def __eq__(self, other):
        return isinstance(other, PolynomialRing) and (
            self.field, self.variables, self.order) == (other.field, other.variables, other.order)

    def __hash__(self):
        return hash((self.field, self.variables, self.order))

    def __repr__(self):
        return f"PolynomialRing(F_{self.field.q}, {list(self.variables)}, {self.order})"

    @property
    def q(self):
        return self.field.q

    def monomial_key(self, a):
        k = self._key_cache.get(a)
        if k is None:
            k = self._key_cache[a] = self._mkey(a)
        return k

    def term_key(self, term):
        """Position-over-term key; lower positions dominate."""
        pos, a = term
        return (-pos, self.monomial_key(a))

    @cached_property
    def digits(self):
        """All digit vectors in {0..q-1}^n in lexicographic order."""
        return tuple(product(range(self.q), repeat=self.nvars))

    @cached_property
    def zero_exps(self):
        return (0,) * self.nvars

    def check_same(self, other):
        if other != self:
            raise RingMismatchError("polynomials live in different rings")

    # constructors

    def zero(self):
        return Polynomial(self, {})

    def one(self):
        return Polynomial(self, {self.zero_exps: 1})

    def constant(self, c):
        if isinstance(c, FieldElement):
            if c.field != self.field:
                raise RingMismatchError("constant from a different field")
            c = c.value
        else:
            c = self.field.from_int(c)
        return Polynomial(self, {self.zero_exps: c} if c else {})

    def gen(self, name_or_index):
        i = name_or_index if isinstance(name_or_index, int) else self.variables.index(name_or_index)
        a = [0] * self.nvars
        a[i] = 1
        return Polynomial(self, {tuple(a): 1})

    def gens(self):
        return [self.gen(i) for i in range(self.nvars)]

    def monomial(self, exps, coeff=1):
        c = self.field.from_int(coeff) if isinstance(coeff, int) else coeff.value
        return Polynomial(self, {tuple(exps): c} if c else {})

    def __call__(self, value):
        if isinstance(value, Polynomial):
            self.check_same(value.ring)
            return value
        if isinstance(value, str):
            return self.parse(value)
        if isinstance(value, (int, FieldElement)):
            return self.constant(value)
        raise TypeError(f"cannot convert {value!r} to a polynomial")

    def parse(self, text):
        return _Parser(self, text).parse()


class Polynomial:
    """Immutable sparse polynomial; ``terms`` maps exponent tuples to encoded coefficients."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = {a: c for a, c in terms.items() if c}

    def _other(self, other):
        if isinstance(other, Polynomial):
            self.ring.check_same(other.ring)
            return other
        if isinstance(other, (int, FieldElement)):
            return self.ring.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return Polynomial(self.ring, poly_add(self.ring.field, self.terms, other.terms))

    __radd__ = __add__

    def __neg__(self):
        neg = self.ring.field.neg
        return Polynomial(self.ring, {a: neg(c) for a, c in self.terms.items()})

    def __sub__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return Polynomial(self.ring, poly_mul(self.ring.field, self.terms, other.terms))

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative exponent")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, (int, FieldElement)):
            other = self.ring.constant(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return all(not any(a) for a in self.terms)

    def coefficient(self, exps):
        return FieldElement(self.ring.field, self.terms.get(tuple(exps), 0))

    @property
    def total_degree(self):
        return max((sum(a) for a in self.terms), default=-1)

    def degree_in(self, var):
        i = var if isinstance(var, int) else self.ring.variables.index(var)
        return max((a[i] for a in self.terms), default=-1)

    def sorted_terms(self):
        """Terms in descending monomial order."""
        key = self.ring.monomial_key
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)

    def leading_monomial(self):
        if not self.terms:
            return None
        return max(self.terms, key=self.ring.monomial_key)

    def frobenius(self, k=1):
        """The q^k-th power, computed termwise (coefficients are fixed by Frobenius)."""
        qk = self.ring.q ** k
        return Polynomial(self.ring, {tuple(x * qk for x in a): c for a, c in self.terms.items()})

    def digit_decompose(self):
        return digit_decompose(self)

    def __str__(self):
        return format_terms(self.ring, self.terms)

    def __repr__(self):
        return f"Polynomial({self})"


def poly_add(field, f, g):
    out = dict(f)
    add = field.add
    for a, c in g.items():
        s = add(out.get(a, 0), c)
        if s:
            out[a] = s
        else:
            out.pop(a, None)
    return out


def poly_mul(field, f, g):
    out = {}
    add, mul = field.add, field.mul
    for a, c in f.items():
        for b, d in g.items():
            m = tuple(x + y for x, y in zip(a, b))
            s = add(out.get(m, 0), mul(c, d))
            if s:
                out[m] = s
            else:
                out.pop(m, None)
    return out


def format_monomial(ring, a):
    parts = []
    for name, k in zip(ring.variables, a):
        if k == 1:
            parts.append(name)
        elif k > 1:
            parts.append(f"{name}^{k}")
    return "*".join(parts)


def format_coefficient(field, c, bare):
    s = field.format(c)
    if bare:
        return s
    if s == "1":
        return ""
    if "+" in s:
        return f"({s})"
    return s


def format_terms(ring, terms):
    if not terms:
        return "0"
    key = ring.monomial_key
    out = []
    for a, c in sorted(terms.items(), key=lambda t: key(t[0]), reverse=True):
        mono = format_monomial(ring, a)
        if not mono:
            s = format_coefficient(ring.field, c, True)
            out.append(f"({s})" if "+" in s and len(terms) > 1 else s)
        else:
            coef = format_coefficient(ring.field, c, False)
            out.append(f"{coef}*{mono}" if coef else mono)
    return " + ".join(out)


@dataclass(frozen=True)
class DigitDecomposition:
    """f = sum over digits d of cofactor[d]^q * x^d, with d in {0..q-1}^n."""

    q: int
    cofactors: dict

    def reconstruct(self):
        polys = list(self.cofactors.values())
        if not polys:
            raise ValueError("empty decomposition has no ring")
        ring = polys[0].ring
        total = {}
        for d, f in self.cofactors.items():
            part = {tuple(self.q * b + x for b, x in zip(a, d)): c for a, c in f.terms.items()}
            total = poly_add(ring.field, total, part)
        return Polynomial(ring, total)


def digit_split(terms, q):
    """Raw digit decomposition of a term dict: {digit: {exps: coeff}}."""
    out = {}
    for a, c in terms.items():
        d = tuple(x % q for x in a)
        b = tuple(x // q for x in a)
        out.setdefault(d, {})[b] = c
    return out


def digit_decompose(f):
    ring = f.ring
    return DigitDecomposition(ring.q, {d: Polynomial(ring, t) for d, t in digit_split(f.terms, ring.q).items()})


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


class _Parser:
    def __init__(self, ring, text):
        self.ring = ring
        self.text = text
        self.tokens = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m is None:
                break
            col = m.start(m.lastindex) + 1
            if m.group(1):
                self.tokens.append(("num", int(m.group(1)), col))
            elif m.group(2):
                self.tokens.append(("id", m.group(2), col))
            else:
                ch = m.group(3)
                if ch not in "+-*^()":
                    raise PolynomialSyntaxError(f"unexpected character {ch!r}", col)
                self.tokens.append((ch, ch, col))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else ("end", None, len(self.text) + 1)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def parse(self):
        if not self.tokens:
            raise PolynomialSyntaxError("empty polynomial", 1)
        value = self.expr()
        kind, _, col = self.peek()
        if kind != "end":
            raise PolynomialSyntaxError(f"unexpected token {self.peek()[1]!r}", col)
        return value

    def expr(self):
        sign = 1
        if self.peek()[0] in ("+", "-"):
            sign = -1 if self.take()[0] == "-" else 1
        value = self.term()
        if sign < 0:
            value = -value
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.factor()
        while self.peek()[0] == "*":
            self.take()
            value = value * self.factor()
        return value

    def factor(self):
        base = self.atom()
        if self.peek()[0] == "^":
            self.take()
            kind, val, col = self.take()
            if kind != "num":
                raise PolynomialSyntaxError("exponent must be a non-negative integer", col)
            base = base ** val
        return base

    def atom(self):
        kind, val, col = self.take()
        ring = self.ring
        if kind == "num":
            return ring.constant(val)
        if kind == "id":
            if val in ring.variables:
                return ring.gen(val)
            if val == "t" and ring.field.e > 1:
                return ring.constant(FieldElement(ring.field, ring.field.generator))
            raise PolynomialSyntaxError(f"unknown variable {val!r}", col)
        if kind == "(":
            value = self.expr()
            kind2, _, col2 = self.take()
            if kind2 != ")":
                raise PolynomialSyntaxError("expected ')'", col2)
            return value
        if kind == "end":
            raise PolynomialSyntaxError("unexpected end of input", col)
        raise PolynomialSyntaxError(f"unexpected token {val!r}", col)

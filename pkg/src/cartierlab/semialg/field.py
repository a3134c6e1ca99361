"""Finite fields F_q = F_p[t]/(modulus).

Elements are encoded as integers ``sum(c_k * p**k)`` where ``c_k`` is the
coefficient of ``t**k``.  The integer encoding is what polynomials store
internally; :class:`FieldElement` wraps it for user-facing arithmetic.
"""

from functools import cached_property
from itertools import product

MAX_DEGREE = 8


def is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    k = 3
    while k * k <= n:
        if n % k == 0:
            return False
        k += 2
    return True


# Dense coefficient lists over F_p, lowest degree first, no trailing zeros.

def _trim(c):
    while c and c[-1] == 0:
        c.pop()
    return c


def _fp_mod(a, m, p):
    a = list(a)
    inv_lead = pow(m[-1], p - 2, p)
    dm = len(m) - 1
    while len(_trim(a)) - 1 >= dm:
        shift = len(a) - 1 - dm
        c = a[-1] * inv_lead % p
        for k, mk in enumerate(m):
            a[shift + k] = (a[shift + k] - c * mk) % p
    return a


def _fp_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _trim(out)


def is_irreducible(coeffs, p):
    """Brute-force irreducibility test over F_p for a monic dense polynomial.

    Trial division by every monic polynomial of degree 1..deg/2.
    """
    f = _trim(list(c % p for c in coeffs))
    deg = len(f) - 1
    if deg < 1:
        return False
    if deg == 1:
        return True
    for d in range(1, deg // 2 + 1):
        for low in product(range(p), repeat=d):
            g = list(low) + [1]
            if not _fp_mod(f, g, p):
                return False
    return True


def default_modulus(p, e):
    """First monic irreducible of degree e in the order of integer encodings.

    For e == 1 this is ``t``; F_4 gets ``t^2 + t + 1``.
    """
    for code in range(p ** e):
        low = [(code // p ** k) % p for k in range(e)]
        f = low + [1]
        if is_irreducible(f, p):
            return tuple(f)
    raise ValueError(f"no irreducible polynomial of degree {e} over F_{p}")


class FieldSpec:
    """The finite field F_q with q = p**e, given by an irreducible modulus.

    ``modulus`` is a dense coefficient sequence (lowest degree first) of a
    monic polynomial of degree e over F_p; if omitted a built-in default is
    used.  Construction validates primality and irreducibility.
    """

    def __init__(self, p, e=1, modulus=None):
        p, e = int(p), int(e)
        if not is_prime(p):
            raise ValueError(f"p={p} is not prime")
        if e < 1:
            raise ValueError("e must be positive")
        if e > MAX_DEGREE:
            raise ValueError(f"extension degree e={e} exceeds {MAX_DEGREE}")
        if modulus is None:
            modulus = default_modulus(p, e)
        modulus = tuple(int(c) % p for c in modulus)
        m = _trim(list(modulus))
        if len(m) - 1 != e or m[-1] != 1:
            raise ValueError(f"modulus must be monic of degree {e}")
        if not is_irreducible(m, p):
            raise ValueError("modulus is not irreducible over F_%d" % p)
        self.p = p
        self.e = e
        self.q = p ** e
        self.modulus = tuple(m)
        if e > 1:
            self._build_tables()

    def _build_tables(self):
        p, q, m = self.p, self.q, list(self.modulus)
        # find a primitive element by brute force
        for g in range(2, q):
            exp = [1]
            cur = [1]
            gc = self.to_coeffs(g)
            ok = True
            for _ in range(q - 2):
                cur = _fp_mod(_fp_mul(cur, gc, p), m, p)
                code = self._encode(cur)
                if code == 1:
                    ok = False
                    break
                exp.append(code)
            if ok:
                break
        log = [0] * q
        for k, v in enumerate(exp):
            log[v] = k
        self._exp = exp
        self._log = log

    def _encode(self, coeffs):
        return sum(c * self.p ** k for k, c in enumerate(coeffs))

    def to_coeffs(self, a):
        """Coefficient vector (length e) of the encoded element ``a``."""
        return [(a // self.p ** k) % self.p for k in range(self.e)]

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and (self.p, self.e, self.modulus) == (
            other.p, other.e, other.modulus)

    def __hash__(self):
        return hash((self.p, self.e, self.modulus))

    def __repr__(self):
        if self.e == 1:
            return f"FieldSpec(p={self.p})"
        return f"FieldSpec(p={self.p}, e={self.e}, modulus={self.modulus})"

    # raw integer arithmetic

    def add(self, a, b):
        if self.e == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        return self._digitwise(a, b, 1)

    def sub(self, a, b):
        if self.e == 1:
            return (a - b) % self.p
        if self.p == 2:
            return a ^ b
        return self._digitwise(a, b, -1)

    def _digitwise(self, a, b, sign):
        p = self.p
        out, w = 0, 1
        while a or b:
            out += ((a % p + sign * (b % p)) % p) * w
            a //= p
            b //= p
            w *= p
        return out

    def neg(self, a):
        return self.sub(0, a)

    def mul(self, a, b):
        if self.e == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("division by zero")
        if self.e == 1:
            return pow(a, self.p - 2, self.p)
        return self._exp[(-self._log[a]) % (self.q - 1)]

    def pow(self, a, k):
        if k < 0:
            return self.pow(self.inv(a), -k)
        if self.e == 1:
            return pow(a, k, self.p)
        if a == 0:
            return 1 if k == 0 else 0
        return self._exp[(self._log[a] * k) % (self.q - 1)]

    def from_int(self, n):
        return int(n) % self.p

    @cached_property
    def generator(self):
        """Encoded class of ``t`` (equal to 0 when e == 1, where t is unused)."""
        return self.p if self.e > 1 else 0

    def elements(self):
        return range(self.q)

    def __call__(self, value):
        """Wrap an integer (reduced mod p) or an encoded element."""
        if isinstance(value, FieldElement):
            return value
        return FieldElement(self, self.from_int(value))

    def element(self, coeffs):
        """Element with the given coefficient vector in the basis 1, t, ..., t^(e-1)."""
        coeffs = list(coeffs)
        if len(coeffs) > self.e:
            coeffs = _fp_mod([c % self.p for c in coeffs], list(self.modulus), self.p)
        return FieldElement(self, self._encode([c % self.p for c in coeffs]))

    def format(self, a):
        """Text form: an integer for prime fields, a polynomial in t otherwise."""
        if self.e == 1:
            return str(a)
        coeffs = self.to_coeffs(a)
        parts = []
        for k in range(self.e - 1, -1, -1):
            c = coeffs[k]
            if not c:
                continue
            if k == 0:
                parts.append(str(c))
            else:
                mono = "t" if k == 1 else f"t^{k}"
                parts.append(mono if c == 1 else f"{c}*{mono}")
        return "+".join(parts) if parts else "0"


class FieldElement:
    __slots__ = ("field", "value")

    def __init__(self, field, value):
        self.field = field
        self.value = value

    @property
    def coefficients(self):
        return self.field.to_coeffs(self.value)

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise ValueError("elements of different fields")
            return other.value
        if isinstance(other, int):
            return self.field.from_int(other)
        return NotImplemented

    def __add__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.add(self.value, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.sub(self.value, b))

    def __rsub__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.sub(b, self.value))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def __mul__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.mul(self.value, b))

    __rmul__ = __mul__

    def inverse(self):
        return FieldElement(self.field, self.field.inv(self.value))

    def __truediv__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.mul(self.value, self.field.inv(b)))

    def __pow__(self, k):
        return FieldElement(self.field, self.field.pow(self.value, k))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.value == other.value
        if isinstance(other, int):
            return self.value == self.field.from_int(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.value))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"FieldElement({self.field.format(self.value)})"

    def __str__(self):
        return self.field.format(self.value)


def field_arithmetic(spec, a, b, op):
    """Dispatch ``op`` in {'add', 'mul', 'inv', 'pow'}; ``b`` is an int for pow."""
    a = spec(a) if not isinstance(a, FieldElement) else a
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "inv":
        return a.inverse()
    if op == "pow":
        return a ** int(b)
    raise ValueError(f"unknown field operation {op!r}")

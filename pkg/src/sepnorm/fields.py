"""Exact arithmetic in F_p and F_p(t).

A :class:`FieldDescriptor` carries the arithmetic on *raw* values so that the
series code can store bare coefficients:

* prime field: an ``int`` in ``[0, p)``;
* rational function field: a pair ``(num, den)`` of coefficient tuples over
  F_p (lowest degree first), gcd-reduced, ``den`` monic; zero is
  ``((), (1,))``.

:class:`FieldElem` is the user-facing wrapper around a raw value.
"""

from dataclasses import dataclass
from math import comb

from . import kernels
from ._expr import ParseError, parse_expression

PRIME = "Fp"
RATIONAL = "Fp(t)"


class DomainError(ValueError):
    """An operation was requested outside its domain."""


def is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


# -- dense F_p[t] helpers (tuples, lowest degree first) ----------------------


def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return tuple(a)


def padd(a, b, p):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = (out[i] + c) % p
    return _trim(out)


def psub(a, b, p):
    n = max(len(a), len(b))
    out = [0] * n
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = (out[i] - c) % p
    return _trim(out)


def pscale(a, c, p):
    c %= p
    if c == 0:
        return ()
    return tuple([x * c % p for x in a])


def pmul(a, b, p):
    if not a or not b:
        return ()
    if len(a) == 1:
        return pscale(b, a[0], p)
    if len(b) == 1:
        return pscale(a, b[0], p)
    return tuple(kernels.poly_mul(list(a), list(b), p))


def pdivmod(a, b, p):
    q, r = kernels.poly_divmod(list(a), list(b), p)
    return tuple(q), tuple(r)


def pgcd(a, b, p):
    return tuple(kernels.poly_gcd(list(a), list(b), p))


def ppow(a, e, p):
    result = (1,)
    base = a
    while e:
        if e & 1:
            result = pmul(result, base, p)
        e >>= 1
        if e:
            base = pmul(base, base, p)
    return result


def pderiv(a, p):
    return _trim([(i * c) % p for i, c in enumerate(a)][1:])


def ptaylor(a, p):
    """Coefficients of ``a(t + h)`` as a polynomial in ``h``.

    Entry ``k`` is the ``k``-th divided-power (Hasse) derivative of ``a``,
    ``sum_m C(m, k) a_m t^(m-k)``; valid in every characteristic.
    """
    out = []
    for k in range(len(a)):
        out.append(_trim([comb(m, k) * a[m] % p for m in range(k, len(a))]))
    return out


def _monic(n, d, p):
    inv = pow(d[-1], p - 2, p)
    if inv == 1:
        return n, d
    return pscale(n, inv, p), pscale(d, inv, p)


# -- field descriptor --------------------------------------------------------


@dataclass(frozen=True)
class FieldDescriptor:
    """F_p (``kind="Fp"``) or F_p(t) (``kind="Fp(t)"``)."""

    characteristic: int
    kind: str = PRIME
    generator: str = "t"

    def __post_init__(self):
        if not is_prime(self.characteristic):
            raise DomainError(f"characteristic {self.characteristic} is not prime")
        if self.kind not in (PRIME, RATIONAL):
            raise DomainError(f"unknown field kind {self.kind!r}")

    @property
    def p(self):
        return self.characteristic

    @property
    def is_prime_field(self):
        return self.kind == PRIME

    @property
    def p_basis(self):
        return () if self.is_prime_field else (self.gen(),)

    def __str__(self):
        if self.is_prime_field:
            return f"F_{self.p}"
        return f"F_{self.p}({self.generator})"

    # raw constants

    @property
    def zero(self):
        return 0 if self.is_prime_field else ((), (1,))

    @property
    def one(self):
        return 1 if self.is_prime_field else ((1,), (1,))

    def raw_int(self, n):
        n %= self.p
        if self.is_prime_field:
            return n
        return ((n,) if n else (), (1,))

    def raw_poly(self, coeffs):
        if self.is_prime_field:
            raise DomainError("polynomials in t need the rational function field")
        return (_trim(c % self.p for c in coeffs), (1,))

    def raw_fraction(self, num, den):
        if self.is_prime_field:
            raise DomainError("fractions in t need the rational function field")
        p = self.p
        num = _trim(c % p for c in num)
        den = _trim(c % p for c in den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        return self._canon(num, den)

    def _canon(self, n, d):
        p = self.p
        if not n:
            return ((), (1,))
        if len(d) > 1:
            g = pgcd(n, d, p)
            if len(g) > 1:
                n = pdivmod(n, g, p)[0]
                d = pdivmod(d, g, p)[0]
        return _monic(n, d, p)

    # raw arithmetic

    def is_zero(self, a):
        return a == 0 if self.is_prime_field else not a[0]

    def is_one(self, a):
        return a == self.one

    def add(self, a, b):
        p = self.p
        if self.is_prime_field:
            return (a + b) % p
        (na, da), (nb, db) = a, b
        if not na:
            return b
        if not nb:
            return a
        if da == db:
            if len(da) == 1:
                return (padd(na, nb, p), da)
            return self._canon(padd(na, nb, p), da)
        if len(da) == 1:
            return (padd(pmul(na, db, p), nb, p), db)
        if len(db) == 1:
            return (padd(na, pmul(nb, da, p), p), da)
        # both fractions are reduced, so only factors of gcd(da, db) can cancel
        g = pgcd(da, db, p)
        if len(g) == 1:
            return _monic(padd(pmul(na, db, p), pmul(nb, da, p), p), pmul(da, db, p), p)
        da_g = pdivmod(da, g, p)[0]
        db_g = pdivmod(db, g, p)[0]
        n = padd(pmul(na, db_g, p), pmul(nb, da_g, p), p)
        if not n:
            return ((), (1,))
        d = pmul(da, db_g, p)
        h = pgcd(n, g, p)
        if len(h) > 1:
            n = pdivmod(n, h, p)[0]
            d = pdivmod(d, h, p)[0]
        return _monic(n, d, p)

    def neg(self, a):
        p = self.p
        if self.is_prime_field:
            return -a % p
        return (pscale(a[0], p - 1, p), a[1])

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        p = self.p
        if self.is_prime_field:
            return a * b % p
        (na, da), (nb, db) = a, b
        if not na or not nb:
            return ((), (1,))
        if len(da) == 1 and len(db) == 1:
            return (pmul(na, nb, p), (1,))
        if len(db) > 1:
            g = pgcd(na, db, p)
            if len(g) > 1:
                na = pdivmod(na, g, p)[0]
                db = pdivmod(db, g, p)[0]
        if len(da) > 1:
            g = pgcd(nb, da, p)
            if len(g) > 1:
                nb = pdivmod(nb, g, p)[0]
                da = pdivmod(da, g, p)[0]
        return _monic(pmul(na, nb, p), pmul(da, db, p), p)

    def scale_int(self, a, k):
        k %= self.p
        if self.is_prime_field:
            return a * k % self.p
        if k == 0:
            return ((), (1,))
        return (pscale(a[0], k, self.p), a[1])

    def inv(self, a):
        p = self.p
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of zero")
        if self.is_prime_field:
            return pow(a, p - 2, p)
        n, d = a
        return _monic(d, n, p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def power(self, a, e):
        if e < 0:
            a = self.inv(a)
            e = -e
        if self.is_prime_field:
            return pow(a, e, self.p)
        n, d = a
        if not n:
            return ((), (1,)) if e else self.one
        return (ppow(n, e, self.p), ppow(d, e, self.p))

    def frobenius(self, a):
        """``a^p``, computed coefficientwise (t -> t^p)."""
        if self.is_prime_field:
            return a
        p = self.p
        return (_spread(a[0], p), _spread(a[1], p))

    def root(self, a):
        """Raw p-th root of ``a`` or ``None`` when ``a`` is not in k^p."""
        if self.is_prime_field:
            return a
        p = self.p
        n, d = a
        rn = _squeeze(n, p)
        rd = _squeeze(d, p)
        if rn is None or rd is None:
            return None
        return (rn, rd)

    def derivative(self, a):
        """Formal d/dt (zero on F_p)."""
        if self.is_prime_field:
            return 0
        p = self.p
        n, d = a
        if len(d) == 1:
            return (pderiv(n, p), d)
        num = psub(pmul(pderiv(n, p), d, p), pmul(n, pderiv(d, p), p), p)
        return self._canon(num, pmul(d, d, p))

    def is_polynomial(self, a):
        return self.is_prime_field or a[1] == (1,)

    def tdegree(self, a):
        """Degree in t of a polynomial raw value (0 for constants and F_p)."""
        if self.is_prime_field:
            return 0
        return max(len(a[0]) - 1, 0)

    # wrapping, parsing and formatting

    def __call__(self, value):
        if isinstance(value, FieldElem):
            if value.field != self:
                raise DomainError(f"element of {value.field} used in {self}")
            return value
        if isinstance(value, int):
            return FieldElem(self, self.raw_int(value))
        if isinstance(value, str):
            return self.parse(value)
        raise TypeError(f"cannot convert {type(value).__name__} to {self}")

    def wrap(self, raw):
        return FieldElem(self, raw)

    def gen(self):
        if self.is_prime_field:
            raise DomainError("F_p has no generator")
        return FieldElem(self, ((0, 1), (1,)))

    def parse(self, text):
        """Parse ``"num/den"``; whitespace is ignored."""
        depth = 0
        split = None
        for i, ch in enumerate(text):
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            elif ch == "/" and depth == 0:
                if split is not None:
                    raise ParseError("more than one '/' in field element", i)
                split = i
        alg = _FieldAlgebra(self)
        if split is None:
            return self.wrap(parse_expression(text, alg))
        num = parse_expression(text[:split], alg)
        den = parse_expression(text[split + 1 :], alg)
        if self.is_zero(den):
            raise ParseError("zero denominator", split + 1)
        return self.wrap(self.div(num, den))

    def format(self, a):
        if self.is_prime_field:
            return str(a)
        n, d = a
        if not n:
            return "0"
        num = _format_poly(n, self.generator)
        if d == (1,):
            return num
        den = _format_poly(d, self.generator)
        if _nterms(n) > 1:
            num = f"({num})"
        if _nterms(d) > 1:
            den = f"({den})"
        return f"{num}/{den}"

    def needs_parens(self, a):
        """True when the formatted value must be parenthesised inside a product."""
        if self.is_prime_field:
            return False
        n, d = a
        return d != (1,) or _nterms(n) > 1


def _spread(a, p):
    if not a:
        return a
    out = [0] * ((len(a) - 1) * p + 1)
    for i, c in enumerate(a):
        out[i * p] = c
    return tuple(out)


def _squeeze(a, p):
    for i, c in enumerate(a):
        if c and i % p:
            return None
    return tuple(a[::p])


def _nterms(a):
    return sum(1 for c in a if c)


def _format_poly(a, g):
    parts = []
    for i, c in enumerate(a):
        if not c:
            continue
        if i == 0:
            parts.append(str(c))
            continue
        mono = g if i == 1 else f"{g}^{i}"
        parts.append(mono if c == 1 else f"{c}*{mono}")
    return "+".join(parts)


class _FieldAlgebra:
    def __init__(self, field):
        self.f = field

    def const(self, n):
        return self.f.raw_int(n)

    def name(self, s):
        if self.f.is_prime_field or s != self.f.generator:
            raise KeyError(s)
        return self.f.gen().raw

    def add(self, a, b):
        return self.f.add(a, b)

    def sub(self, a, b):
        return self.f.sub(a, b)

    def mul(self, a, b):
        return self.f.mul(a, b)

    def div(self, a, b):
        return self.f.div(a, b)

    def pow(self, a, e):
        return self.f.power(a, e)

    def neg(self, a):
        return self.f.neg(a)


class FieldElem:
    """Immutable element of F_p or F_p(t)."""

    __slots__ = ("field", "raw")

    def __init__(self, field, raw):
        self.field = field
        self.raw = raw

    def _coerce(self, other):
        if isinstance(other, FieldElem):
            if other.field != self.field:
                raise DomainError(f"mixing {self.field} and {other.field}")
            return other.raw
        if isinstance(other, int):
            return self.field.raw_int(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElem(self.field, self.field.add(self.raw, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElem(self.field, self.field.sub(self.raw, o))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElem(self.field, self.field.sub(o, self.raw))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElem(self.field, self.field.mul(self.raw, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElem(self.field, self.field.div(self.raw, o))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElem(self.field, self.field.div(o, self.raw))

    def __neg__(self):
        return FieldElem(self.field, self.field.neg(self.raw))

    def __pow__(self, e):
        return FieldElem(self.field, self.field.power(self.raw, e))

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self.raw == o

    def __hash__(self):
        return hash((self.field, self.raw))

    def __bool__(self):
        return not self.field.is_zero(self.raw)

    def is_zero(self):
        return self.field.is_zero(self.raw)

    def inverse(self):
        return FieldElem(self.field, self.field.inv(self.raw))

    def pth_root(self):
        return pth_root(self)

    def derivative(self):
        return FieldElem(self.field, self.field.derivative(self.raw))

    @property
    def numerator(self):
        if self.field.is_prime_field:
            return (self.raw,) if self.raw else ()
        return self.raw[0]

    @property
    def denominator(self):
        return (1,) if self.field.is_prime_field else self.raw[1]

    def __str__(self):
        return self.field.format(self.raw)

    def __repr__(self):
        return f"FieldElem({self.field}, {self})"


def pth_root(c):
    """Return ``r`` with ``r**p == c`` or ``None`` when ``c`` is not a p-th power."""
    r = c.field.root(c.raw)
    return None if r is None else FieldElem(c.field, r)


def pbasis_decompose(c, e):
    """Write ``c = sum_q d_q^(p^e) * t^q`` over ``0 <= q < p^e``.

    Returns ``{q: d_q}`` with zero entries omitted.  Only meaningful for
    F_p(t); F_p raises :class:`DomainError`.
    """
    field = c.field
    if field.is_prime_field:
        raise DomainError("p-basis decomposition is only defined for F_p(t)")
    if e < 1:
        raise DomainError("exponent e must be positive")
    p = field.p
    big = p**e
    n, d = c.raw
    # n/d = n*d^(big-1) / d^big and d^big = d(t^big) over F_p
    m = pmul(n, ppow(d, big - 1, p), p)
    out = {}
    for q in range(min(big, len(m))):
        part = _trim(m[q::big])
        if part:
            out[q] = FieldElem(field, field._canon(part, d))
    return out

"""Sparse multivariate power series over F_p or F_p(t), truncated by total degree.

A series in a ring of precision ``N`` stores only terms of total degree
``< N``; every stored term is a true term of the represented series.  A term
present below the precision is therefore a proof of non-vanishing, while an
empty truncation is inconclusive.

Terms are kept in a dict mapping exponent tuples to *raw* field values (see
:mod:`sepnorm.fields`).  Over F_p products go through the packed-key kernel
in :mod:`sepnorm.kernels`.
"""

from dataclasses import dataclass, field as dc_field

from . import kernels
from ._expr import parse_expression
from .fields import DomainError, FieldDescriptor, FieldElem

DEFAULT_PRECISION = 24


class NotAUnit(ArithmeticError):
    pass


class InvalidSubstitution(ValueError):
    pass


class PrecisionExceeded(IndexError):
    pass


def graded_key(exp):
    """Sort key: total degree ascending, then lexicographic with X_1 heaviest."""
    return (sum(exp), tuple(-e for e in exp))


@dataclass(frozen=True)
class SeriesRing:
    field: FieldDescriptor
    nvars: int
    precision: int = DEFAULT_PRECISION
    names: tuple = dc_field(default=None, compare=False)

    def __post_init__(self):
        if self.nvars < 1:
            raise DomainError("a series ring needs at least one variable")
        if self.precision < 1:
            raise DomainError("precision must be at least 1")
        names = self.names
        if names is None:
            names = tuple(f"X{i + 1}" for i in range(self.nvars))
        names = tuple(names)
        if len(names) != self.nvars or len(set(names)) != self.nvars:
            raise DomainError("variable names must be unique, one per variable")
        if not self.field.is_prime_field and self.field.generator in names:
            raise DomainError("variable name clashes with the field generator")
        object.__setattr__(self, "names", names)

    def with_precision(self, precision):
        return SeriesRing(self.field, self.nvars, precision, self.names)

    def compatible(self, other):
        return self.field == other.field and self.nvars == other.nvars

    def zero(self):
        return TruncatedSeries(self, {})

    def one(self):
        return self.constant(1)

    def constant(self, c):
        raw = self.field(c).raw
        if self.field.is_zero(raw):
            return self.zero()
        return TruncatedSeries(self, {(0,) * self.nvars: raw})

    def gen(self, i):
        exp = [0] * self.nvars
        exp[i] = 1
        return TruncatedSeries(self, {tuple(exp): self.field.one}) if self.precision > 1 else self.zero()

    def gens(self):
        return tuple(self.gen(i) for i in range(self.nvars))

    def monomial(self, exp, c=1):
        exp = tuple(exp)
        raw = self.field(c).raw
        if sum(exp) >= self.precision or self.field.is_zero(raw):
            return self.zero()
        return TruncatedSeries(self, {exp: raw})

    def from_terms(self, terms):
        """Build a series from ``{exponent tuple: FieldElem | int}``; high terms are dropped."""
        out = {}
        for exp, c in terms.items():
            exp = tuple(exp)
            if len(exp) != self.nvars or any(e < 0 for e in exp):
                raise DomainError(f"bad exponent vector {exp}")
            if sum(exp) >= self.precision:
                continue
            raw = self.field(c).raw
            if not self.field.is_zero(raw):
                out[exp] = raw
        return TruncatedSeries(self, out)

    def parse(self, text):
        return parse_expression(text, _SeriesAlgebra(self))

    def index(self, name):
        return self.names.index(name)


def _check(f, g):
    if not f.ring.compatible(g.ring):
        raise DomainError(f"ring mismatch: {f.ring} vs {g.ring}")
    if f.ring.precision <= g.ring.precision:
        return f.ring
    return g.ring


def _truncate(terms, precision):
    return {e: c for e, c in terms.items() if sum(e) < precision}


# -- multiplication ----------------------------------------------------------

_SMALL = 48


def mul_terms(field, a, b, nvars, bound, weights=None):
    """Product of two raw term dicts keeping terms of weighted degree < bound.

    ``weights`` defaults to all ones (total degree).  ``bound=None`` keeps
    everything.
    """
    if not a or not b:
        return {}
    if weights is None:
        deg = sum
    else:
        def deg(e):
            return sum(w * x for w, x in zip(weights, e))
    if bound is None:
        bound = max(map(deg, a)) + max(map(deg, b)) + 1
    if field.is_prime_field and len(a) * len(b) > _SMALL:
        return _mul_packed(field.p, a, b, nvars, bound, deg)
    add = field.add
    mul = field.mul
    is_zero = field.is_zero
    bl = sorted(((deg(e), e, c) for e, c in b.items()), key=lambda t: t[0])
    acc = {}
    for ea, ca in a.items():
        room = bound - deg(ea)
        for db, eb, cb in bl:
            if db >= room:
                break
            e = tuple(x + y for x, y in zip(ea, eb))
            prod = mul(ca, cb)
            old = acc.get(e)
            acc[e] = prod if old is None else add(old, prod)
    return {e: c for e, c in acc.items() if not is_zero(c)}


def _mul_packed(p, a, b, nvars, bound, deg):
    ma = [0] * nvars
    for e in a:
        for i, x in enumerate(e):
            if x > ma[i]:
                ma[i] = x
    mb = [0] * nvars
    for e in b:
        for i, x in enumerate(e):
            if x > mb[i]:
                mb[i] = x
    strides = []
    s = 1
    for i in range(nvars - 1, -1, -1):
        strides.append(s)
        s *= ma[i] + mb[i] + 1
    strides.reverse()
    kernel = kernels.series_mul_modp if s < kernels.KEY_LIMIT else kernels.series_mul_modp_bigkeys

    def pack(e):
        k = 0
        for x, st in zip(e, strides):
            k += x * st
        return k

    akeys = [pack(e) for e in a]
    adeg = [deg(e) for e in a]
    bl = sorted(b.items(), key=lambda t: deg(t[0]))
    bkeys = [pack(e) for e, _ in bl]
    bdeg = [deg(e) for e, _ in bl]
    keys, coefs = kernel(akeys, list(a.values()), adeg, bkeys, [c for _, c in bl], bdeg, bound, p)
    out = {}
    for k, c in zip(keys, coefs):
        exp = []
        for st in strides:
            q, k = divmod(k, st)
            exp.append(q)
        out[tuple(exp)] = c
    return out


def add_terms(field, a, b):
    out = dict(a)
    add = field.add
    for e, c in b.items():
        old = out.get(e)
        if old is None:
            out[e] = c
        else:
            s = add(old, c)
            if field.is_zero(s):
                del out[e]
            else:
                out[e] = s
    return out


def neg_terms(field, a):
    return {e: field.neg(c) for e, c in a.items()}


def scale_terms(field, a, c):
    if field.is_zero(c):
        return {}
    mul = field.mul
    return {e: mul(x, c) for e, x in a.items()}


# -- the series type ---------------------------------------------------------


class TruncatedSeries:
    """Immutable truncated power series; see the module docstring."""

    __slots__ = ("ring", "_terms")

    def __init__(self, ring, terms):
        self.ring = ring
        self._terms = terms

    @property
    def field(self):
        return self.ring.field

    @property
    def precision(self):
        return self.ring.precision

    @property
    def nvars(self):
        return self.ring.nvars

    @property
    def raw_terms(self):
        return self._terms

    def terms(self):
        """``{exponent: FieldElem}`` in graded-lex order."""
        wrap = self.field.wrap
        return {e: wrap(self._terms[e]) for e in sorted(self._terms, key=graded_key)}

    def __len__(self):
        return len(self._terms)

    def is_zero(self):
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def coefficient(self, exp):
        exp = tuple(exp)
        if sum(exp) >= self.precision:
            raise PrecisionExceeded(f"degree {sum(exp)} not below precision {self.precision}")
        raw = self._terms.get(exp)
        return self.field.wrap(self.field.zero if raw is None else raw)

    def constant_term(self):
        return self.coefficient((0,) * self.nvars)

    def order(self):
        """Least total degree of a stored term (``None`` for zero)."""
        return min(map(sum, self._terms), default=None)

    def degree(self):
        return max(map(sum, self._terms), default=-1)

    def degree_in(self, j):
        return max((e[j] for e in self._terms), default=-1)

    def leading_term(self):
        """First term in graded-lex order, as ``(exp, FieldElem)``, or ``None``."""
        if not self._terms:
            return None
        e = min(self._terms, key=graded_key)
        return e, self.field.wrap(self._terms[e])

    def with_precision(self, precision):
        """Move to precision ``precision``.

        Lowering truncates.  Raising treats the omitted tail as zero, which is
        exact only for polynomial data.
        """
        ring = self.ring.with_precision(precision)
        if precision >= self.precision:
            return TruncatedSeries(ring, self._terms)
        return TruncatedSeries(ring, _truncate(self._terms, precision))

    def agrees_with(self, other, precision=None):
        if not self.ring.compatible(other.ring):
            return False
        n = min(self.precision, other.precision)
        if precision is not None:
            n = min(n, precision)
        return _truncate(self._terms, n) == _truncate(other._terms, n)

    def _coerce(self, other):
        if isinstance(other, TruncatedSeries):
            return other
        if isinstance(other, (int, FieldElem)):
            return self.ring.constant(other)
        return NotImplemented

    # ring operations

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        ring = _check(self, other)
        out = add_terms(self.field, self._terms, other._terms)
        return TruncatedSeries(ring, _truncate(out, ring.precision))

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(self.ring, neg_terms(self.field, self._terms))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, FieldElem)):
            return self.scale(other)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        ring = _check(self, other)
        out = mul_terms(self.field, self._terms, other._terms, self.nvars, ring.precision)
        return TruncatedSeries(ring, out)

    def __rmul__(self, other):
        if isinstance(other, (int, FieldElem)):
            return self.scale(other)
        return NotImplemented

    def scale(self, c):
        raw = self.field(c).raw
        return TruncatedSeries(self.ring, scale_terms(self.field, self._terms, raw))

    def __pow__(self, e):
        if e < 0:
            return self.invert_unit() ** (-e)
        result = self.ring.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, (int, FieldElem)):
            other = self.ring.constant(other)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.agrees_with(other)

    __hash__ = None

    def invert_unit(self):
        """Inverse of a series with nonzero constant term (Newton iteration)."""
        field = self.field
        c0 = self._terms.get((0,) * self.nvars)
        if c0 is None:
            raise NotAUnit("constant term is zero")
        zero_exp = (0,) * self.nvars
        g = {zero_exp: field.inv(c0)}
        two = field.raw_int(2)
        prec = 1
        N = self.precision
        while prec < N:
            prec = min(2 * prec, N)
            fg = mul_terms(field, self._terms, g, self.nvars, prec)
            r = neg_terms(field, fg)
            r = add_terms(field, r, {zero_exp: two})
            g = mul_terms(field, g, r, self.nvars, prec)
        return TruncatedSeries(self.ring, g)

    def __truediv__(self, other):
        if isinstance(other, (int, FieldElem)):
            return self.scale(self.field(other).inverse())
        if isinstance(other, TruncatedSeries):
            return self * other.invert_unit()
        return NotImplemented

    def partial_derivative(self, j):
        """Formal derivative in variable ``j`` (0-based); precision drops by one."""
        if not 0 <= j < self.nvars:
            raise DomainError(f"variable index {j} out of range")
        if self.precision < 2:
            raise DomainError("derivative of a precision-1 series carries no information")
        field = self.field
        out = {}
        for e, c in self._terms.items():
            k = e[j]
            if k == 0:
                continue
            d = field.scale_int(c, k)
            if field.is_zero(d):
                continue
            ne = list(e)
            ne[j] = k - 1
            out[tuple(ne)] = d
        ring = self.ring.with_precision(self.precision - 1)
        return TruncatedSeries(ring, _truncate(out, ring.precision))

    def substitute(self, j, s):
        """Replace variable ``j`` by ``s`` (which must lie in the maximal ideal)."""
        if not 0 <= j < self.nvars:
            raise DomainError(f"variable index {j} out of range")
        ring = _check(self, s)
        zero_exp = (0,) * self.nvars
        if zero_exp in s._terms:
            raise InvalidSubstitution("substituted series has a nonzero constant term")
        field = self.field
        groups = {}
        for e, c in self._terms.items():
            k = e[j]
            rest = e[:j] + (0,) + e[j + 1 :]
            groups.setdefault(k, {})[rest] = c
        if not groups:
            return ring.zero()
        N = ring.precision
        st = _truncate(s._terms, N)
        top = max(groups)
        acc = _truncate(groups.get(top, {}), N)
        for k in range(top - 1, -1, -1):
            acc = mul_terms(field, acc, st, self.nvars, N)
            part = groups.get(k)
            if part:
                acc = add_terms(field, acc, _truncate(part, N))
        return TruncatedSeries(ring, acc)

    def axis_restriction(self, j):
        """Set every variable except ``j`` to zero."""
        keep = {e: c for e, c in self._terms.items() if all(x == 0 for i, x in enumerate(e) if i != j)}
        return TruncatedSeries(self.ring, keep)

    def is_pth_power(self):
        """Return ``g`` with ``g**p`` equal to this series, or ``None``.

        Decided on the stored terms; exact for polynomial inputs below
        precision.
        """
        field = self.field
        p = field.p
        out = {}
        for e, c in self._terms.items():
            if any(x % p for x in e):
                return None
            r = field.root(c)
            if r is None:
                return None
            out[tuple(x // p for x in e)] = r
        return TruncatedSeries(self.ring, out)

    def map_coefficients(self, fn):
        """Apply ``fn`` (raw -> raw) to every coefficient; zeros are dropped."""
        field = self.field
        out = {}
        for e, c in self._terms.items():
            d = fn(c)
            if not field.is_zero(d):
                out[e] = d
        return TruncatedSeries(self.ring, out)

    def __str__(self):
        return format_series(self)

    def __repr__(self):
        return f"TruncatedSeries({self} + O(deg {self.precision}))"


def format_series(f, names=None):
    names = names or f.ring.names
    field = f.field
    if not f._terms:
        return "0"
    parts = []
    for e in sorted(f._terms, key=graded_key):
        c = f._terms[e]
        mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
        cs = field.format(c)
        if not mono:
            parts.append(cs)
        elif field.is_one(c):
            parts.append(mono)
        else:
            if field.needs_parens(c):
                cs = f"({cs})"
            parts.append(f"{cs}*{mono}")
    return "+".join(parts)


class _SeriesAlgebra:
    def __init__(self, ring):
        self.ring = ring

    def const(self, n):
        return self.ring.constant(n)

    def name(self, s):
        ring = self.ring
        if s in ring.names:
            return ring.gen(ring.names.index(s))
        if not ring.field.is_prime_field and s == ring.field.generator:
            return ring.constant(ring.field.gen())
        raise KeyError(s)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def div(self, a, b):
        return a / b

    def pow(self, a, e):
        return a**e

    def neg(self, a):
        return -a

"""Weierstrass preparation and division by distinguished polynomials.

For a series ``f`` regular of order ``n`` in ``X_r``, :func:`prepare` returns
the unique unit ``u`` and distinguished polynomial ``f0`` of degree ``n`` in
``X_r`` with ``f = u * f0``.

Both routines read their input as the polynomial formed by its stored terms.
For polynomial inputs (the only kind the driver produces) every returned term
of total degree below the output precision is exact; for a genuinely
truncated series the top terms are those of its truncation.
"""

from dataclasses import dataclass

from .fields import DomainError
from .series import SeriesRing, TruncatedSeries, add_terms, mul_terms, neg_terms


class NotRegular(ValueError):
    """The series is not regular in the requested variable at this precision."""


@dataclass(frozen=True)
class DistinguishedPoly:
    """``X_r^n + a_{n-1} X_r^{n-1} + ... + a_0`` with every ``a_i`` in the maximal ideal."""

    ring: SeriesRing
    var: int
    coeffs: tuple

    def __post_init__(self):
        zero = (0,) * self.ring.nvars
        for a in self.coeffs:
            if any(e[self.var] for e in a.raw_terms):
                raise DomainError("coefficient involves the distinguished variable")
            if zero in a.raw_terms:
                raise DomainError("coefficient is a unit; not distinguished")

    @property
    def degree(self):
        return len(self.coeffs)

    def as_series(self):
        ring = self.ring
        n = self.degree
        lead = [0] * ring.nvars
        lead[self.var] = n
        out = {}
        if n < ring.precision:
            out[tuple(lead)] = ring.field.one
        for i, a in enumerate(self.coeffs):
            for e, c in a.raw_terms.items():
                ne = list(e)
                ne[self.var] = i
                if sum(ne) < ring.precision:
                    out[tuple(ne)] = c
        return TruncatedSeries(ring, out)

    def __str__(self):
        return str(self.as_series())


@dataclass(frozen=True)
class WeierstrassFactorization:
    unit: TruncatedSeries
    distinguished: DistinguishedPoly

    @property
    def precision(self):
        return self.unit.precision


def weierstrass_order(f, r):
    """Least ``n`` such that the coefficient of ``X_r^n`` is a unit, or ``None``."""
    pure = [e[r] for e in f.raw_terms if all(x == 0 for i, x in enumerate(e) if i != r)]
    return min(pure, default=None)


def _shift(terms, r, k):
    out = {}
    for e, c in terms.items():
        ne = list(e)
        ne[r] += k
        out[tuple(ne)] = c
    return out


def _sub(field, a, b):
    return add_terms(field, a, neg_terms(field, b))


def prepare(f, r, precision=None):
    """Weierstrass preparation of ``f`` with respect to variable ``r`` (0-based).

    The result lives in ``f.ring`` at ``precision`` (default: ``f.precision``).
    The factors are lifted layer by layer in the total degree of the other
    variables: layer 0 is ``X_r^n * h0(X_r)`` and each later layer is solved
    with the inverse of ``h0`` modulo ``X_r^n``.
    """
    N = f.precision if precision is None else precision
    ring = f.ring.with_precision(N)
    field = f.field
    nv = f.nvars
    n = weierstrass_order(f, r)
    if n is None or n >= N:
        raise NotRegular(f"not regular in variable {r} below precision {N}")

    if n == 0:
        unit = TruncatedSeries(ring, {e: c for e, c in f.raw_terms.items() if sum(e) < N})
        return WeierstrassFactorization(unit, DistinguishedPoly(ring, r, ()))

    layers = {}
    for e, c in f.raw_terms.items():
        k = sum(e) - e[r]
        if k < N:
            layers.setdefault(k, {})[e] = c
    base = layers.get(0, {})
    h0 = {}
    for e, c in base.items():
        ne = list(e)
        ne[r] -= n
        h0[tuple(ne)] = c

    # inverse of h0 modulo X_r^n
    unit_exp = [0] * nv
    h0c = [field.zero] * n
    for e, c in h0.items():
        if e[r] < n:
            h0c[e[r]] = c
    tc = [field.inv(h0c[0])] + [field.zero] * (n - 1)
    for m in range(1, n):
        acc = field.zero
        for i in range(1, m + 1):
            acc = field.add(acc, field.mul(h0c[i], tc[m - i]))
        tc[m] = field.neg(field.mul(tc[0], acc))
    T = {}
    for m, c in enumerate(tc):
        if not field.is_zero(c):
            unit_exp[r] = m
            T[tuple(unit_exp)] = c

    xw = tuple(1 if i == r else 0 for i in range(nv))
    sw = tuple(0 if i == r else 1 for i in range(nv))
    g_all = {}  # layers >= 1 of the distinguished factor
    h_all = dict(h0)  # all layers of the unit
    g_acc = {}  # layers 1..k-1
    h_acc = {}  # layers 1..k-1
    running = {}  # S-degree -> sum of g_i h_j over 1 <= i, j < k
    for k in range(1, N):
        E = layers.get(k, {})
        prod_k = running.pop(k, None)
        if prod_k:
            E = _sub(field, E, prod_k)
        if not E:
            continue
        gk = mul_terms(field, E, T, nv, n, xw)
        diff = _sub(field, E, mul_terms(field, gk, h0, nv, None))
        if any(e[r] < n for e in diff):
            raise ArithmeticError("layer equation left a remainder below X_r^n")
        hk = _shift(diff, r, -n)
        if k < N - 1:
            new = add_terms(
                field,
                mul_terms(field, gk, add_terms(field, h_acc, hk), nv, N, sw),
                mul_terms(field, g_acc, hk, nv, N, sw),
            )
            buckets = {}
            for e, c in new.items():
                buckets.setdefault(sum(e) - e[r], {})[e] = c
            for j, part in buckets.items():
                running[j] = add_terms(field, running.get(j, {}), part)
        g_acc = add_terms(field, g_acc, gk)
        h_acc = add_terms(field, h_acc, hk)
        g_all.update(gk)
        h_all = add_terms(field, h_all, hk)

    coeffs = [{} for _ in range(n)]
    for e, c in g_all.items():
        if sum(e) < N:
            i = e[r]
            ne = list(e)
            ne[r] = 0
            coeffs[i][tuple(ne)] = c
    dist = DistinguishedPoly(ring, r, tuple(TruncatedSeries(ring, a) for a in coeffs))
    unit = TruncatedSeries(ring, {e: c for e, c in h_all.items() if sum(e) < N})
    return WeierstrassFactorization(unit, dist)


def reduce_mod(g, d):
    """Remainder of ``g`` modulo the distinguished polynomial ``d``.

    Classical long division in ``X_r`` with coefficients truncated by their
    degree in the other variables; the remainder has ``X_r``-degree below
    ``d.degree``.
    """
    if not g.ring.compatible(d.ring):
        raise DomainError("ring mismatch")
    P = min(g.precision, d.ring.precision)
    ring = g.ring.with_precision(P)
    field = g.field
    nv = g.nvars
    r = d.var
    n = d.degree
    sw = tuple(0 if i == r else 1 for i in range(nv))
    groups = {}
    for e, c in g.raw_terms.items():
        ne = list(e)
        ne[r] = 0
        groups.setdefault(e[r], {})[tuple(ne)] = c
    coeffs = [a.raw_terms for a in d.coeffs]
    for e in range(max(groups, default=-1), n - 1, -1):
        c = groups.pop(e, None)
        if not c:
            continue
        for i, a in enumerate(coeffs):
            if not a:
                continue
            k = e - n + i
            groups[k] = _sub(field, groups.get(k, {}), mul_terms(field, c, a, nv, P, sw))
    out = {}
    for e, part in groups.items():
        for m, c in part.items():
            ne = list(m)
            ne[r] = e
            if sum(ne) < P:
                out[tuple(ne)] = c
    return TruncatedSeries(ring, out)

"""Naive dense polynomial arithmetic used as a reference for the series code.

Deliberately slow and independent of :mod:`sepnorm.series`: coefficients are
:class:`~sepnorm.fields.FieldElem` objects in a numpy object array with one
axis per variable, and every operation is schoolbook and untruncated.
"""

import itertools

import numpy as np

DEFAULT_CAP = 250_000


class OracleTooLarge(MemoryError):
    pass


class DensePoly:
    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        self.field = field
        self.coeffs = coeffs

    @classmethod
    def zeros(cls, field, shape, cap=DEFAULT_CAP):
        shape = tuple(max(int(s), 1) for s in shape)
        if int(np.prod(shape)) > cap:
            raise OracleTooLarge(f"dense shape {shape} exceeds cap {cap}")
        arr = np.empty(shape, dtype=object)
        zero = field(0)
        for idx in np.ndindex(shape):
            arr[idx] = zero
        return cls(field, arr)

    @classmethod
    def from_terms(cls, field, nvars, terms, cap=DEFAULT_CAP):
        """``terms`` maps exponent tuples to FieldElem / int."""
        shape = [1] * nvars
        for e in terms:
            for i, x in enumerate(e):
                shape[i] = max(shape[i], x + 1)
        out = cls.zeros(field, shape, cap)
        for e, c in terms.items():
            out.coeffs[tuple(e)] = out.coeffs[tuple(e)] + field(c)
        return out

    @property
    def nvars(self):
        return self.coeffs.ndim

    @property
    def shape(self):
        return self.coeffs.shape

    def terms(self):
        return {idx: c for idx, c in np.ndenumerate(self.coeffs) if not c.is_zero()}

    def __eq__(self, other):
        return self.terms() == other.terms()


def dense_add(a, b, cap=DEFAULT_CAP):
    shape = [max(x, y) for x, y in zip(a.shape, b.shape)]
    out = DensePoly.zeros(a.field, shape, cap)
    for idx, c in np.ndenumerate(a.coeffs):
        out.coeffs[idx] = out.coeffs[idx] + c
    for idx, c in np.ndenumerate(b.coeffs):
        out.coeffs[idx] = out.coeffs[idx] + c
    return out


def dense_mul(a, b, cap=DEFAULT_CAP):
    shape = [x + y - 1 for x, y in zip(a.shape, b.shape)]
    out = DensePoly.zeros(a.field, shape, cap)
    for ia, ca in np.ndenumerate(a.coeffs):
        if ca.is_zero():
            continue
        for ib, cb in np.ndenumerate(b.coeffs):
            if cb.is_zero():
                continue
            idx = tuple(x + y for x, y in zip(ia, ib))
            out.coeffs[idx] = out.coeffs[idx] + ca * cb
    return out


def dense_derivative(a, j, cap=DEFAULT_CAP):
    shape = list(a.shape)
    shape[j] = max(shape[j] - 1, 1)
    out = DensePoly.zeros(a.field, shape, cap)
    for idx, c in np.ndenumerate(a.coeffs):
        k = idx[j]
        if k == 0:
            continue
        new = list(idx)
        new[j] = k - 1
        out.coeffs[tuple(new)] = out.coeffs[tuple(new)] + c * k
    return out


def _one(field, nvars, cap):
    out = DensePoly.zeros(field, [1] * nvars, cap)
    out.coeffs[(0,) * nvars] = field(1)
    return out


def dense_substitute(a, j, s, cap=DEFAULT_CAP):
    """Exact composition ``a(..., X_j = s, ...)``."""
    field = a.field
    n = a.nvars
    powers = [_one(field, n, cap)]
    for _ in range(1, a.shape[j]):
        powers.append(dense_mul(powers[-1], s, cap))
    result = DensePoly.zeros(field, [1] * n, cap)
    for idx, c in np.ndenumerate(a.coeffs):
        if c.is_zero():
            continue
        rest = list(idx)
        rest[j] = 0
        mono = DensePoly.zeros(field, [x + 1 for x in rest], cap)
        mono.coeffs[tuple(rest)] = c
        result = dense_add(result, dense_mul(mono, powers[idx[j]], cap), cap)
    return result


def agree(sparse, dense, precision):
    """True iff ``sparse`` and ``dense`` have the same terms of degree < precision.

    ``sparse`` is anything with a ``terms()`` method returning
    ``{exp: FieldElem}``.
    """
    lhs = {e: c for e, c in sparse.terms().items() if sum(e) < precision and not c.is_zero()}
    rhs = {e: c for e, c in dense.terms().items() if sum(e) < precision}
    return lhs == rhs


def all_exponents(nvars, max_degree):
    """Every exponent vector with total degree <= max_degree (graded order)."""
    for d in range(max_degree + 1):
        for e in itertools.product(range(d + 1), repeat=nvars):
            if sum(e) == d:
                yield e


__all__ = [
    "DensePoly",
    "OracleTooLarge",
    "agree",
    "all_exponents",
    "dense_add",
    "dense_derivative",
    "dense_mul",
    "dense_substitute",
]

"""Random polynomial generators shared by the test modules."""

import random

from sepnorm.fields import FieldDescriptor
from sepnorm.series import SeriesRing


def field_for(p, rational=False):
    return FieldDescriptor(p, "Fp(t)" if rational else "Fp")


def random_coeff(rng, field, tdeg=2):
    if field.is_prime_field:
        return rng.randrange(field.p)
    return field.wrap(field.raw_poly([rng.randrange(field.p) for _ in range(tdeg + 1)]))


def random_poly(rng, ring, max_deg, nterms, constant=True, exclude=None):
    """Random polynomial with at most ``nterms`` terms of total degree <= max_deg."""
    terms = {}
    for _ in range(nterms):
        e = [0] * ring.nvars
        d = rng.randint(0 if constant else 1, max_deg)
        for _ in range(d):
            e[rng.randrange(ring.nvars)] += 1
        if exclude is not None and e[exclude]:
            continue
        if not constant and not any(e):
            continue
        terms[tuple(e)] = random_coeff(rng, ring.field)
    return ring.from_terms(terms)


def random_unit(rng, ring, max_deg=4, nterms=6):
    u = random_poly(rng, ring, max_deg, nterms, constant=False)
    c = rng.randrange(1, ring.field.p)
    return u + c


def random_distinguished_terms(rng, ring, r, degree, coeff_deg=4, nterms=4):
    """``X_r^degree + sum a_i X_r^i`` with each a_i in the maximal ideal, free of X_r."""
    coeffs = [random_poly(rng, ring, coeff_deg, nterms, constant=False, exclude=r) for _ in range(degree)]
    f = ring.monomial(tuple(degree if i == r else 0 for i in range(ring.nvars)))
    for i, a in enumerate(coeffs):
        f = f + a * ring.monomial(tuple(i if k == r else 0 for k in range(ring.nvars)))
    return f, coeffs


def make_ring(p, nvars, precision=24, rational=False, names=None):
    return SeriesRing(field_for(p, rational), nvars, precision, names)


def rng_for(*key):
    # string seeds are hashed deterministically, unlike hash() of a tuple
    return random.Random(repr(key))


def random_step1_poly(rng, p, nvars, precision=64):
    """Random f over F_p with df/dX1 = 0 and some X_j^b column with p not dividing b."""
    R = make_ring(p, nvars, precision=precision)
    terms = {}
    for _ in range(rng.randint(1, 5)):
        e = [p * rng.randint(0, 2)] + [rng.randint(0, 4) for _ in range(nvars - 1)]
        if any(e):
            terms[tuple(e)] = rng.randrange(1, p)
    j = rng.randrange(1, nvars)
    e = [p * rng.randint(0, 2)] + [0] * (nvars - 1)
    e[j] = rng.choice([b for b in range(1, 6) if b % p])
    terms[tuple(e)] = rng.randrange(1, p)
    return R.from_terms(terms)

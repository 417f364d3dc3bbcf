# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
# distutils: language = c++
"""Compiled kernels; same contracts as ``_pykernels``."""

from libc.stdlib cimport malloc, calloc, free
from libcpp.unordered_map cimport unordered_map
from cython.operator cimport dereference as deref, preincrement as inc

ctypedef long long i64

cdef i64 DENSE_LIMIT = 1 << 22


cdef inline i64 _inv(i64 a, i64 p):
    cdef i64 r = 1, b = a % p, e = p - 2
    while e > 0:
        if e & 1:
            r = r * b % p
        b = b * b % p
        e >>= 1
    return r


cdef inline i64 _mod(i64 a, i64 p):
    a = a % p
    return a + p if a < 0 else a


cdef list _trim(list a):
    while a and a[len(a) - 1] == 0:
        a.pop()
    return a


def poly_trim(a):
    return _trim(a)


def poly_mul(list a, list b, i64 p):
    cdef Py_ssize_t na = len(a), nb = len(b), i, j
    if na == 0 or nb == 0:
        return []
    cdef i64 *x = <i64 *> malloc(na * sizeof(i64))
    cdef i64 *y = <i64 *> malloc(nb * sizeof(i64))
    cdef i64 *out = <i64 *> calloc(na + nb - 1, sizeof(i64))
    cdef i64 xi
    try:
        for i in range(na):
            x[i] = _mod(a[i], p)
        for j in range(nb):
            y[j] = _mod(b[j], p)
        for i in range(na):
            xi = x[i]
            if xi == 0:
                continue
            for j in range(nb):
                out[i + j] = (out[i + j] + xi * y[j]) % p
        res = [out[i] for i in range(na + nb - 1)]
    finally:
        free(x)
        free(y)
        free(out)
    return _trim(res)


def poly_divmod(list a, list b, i64 p):
    cdef Py_ssize_t na = len(a), nb = len(b), k, i, db
    if nb == 0:
        raise ZeroDivisionError("polynomial division by zero")
    db = nb - 1
    if na - 1 < db:
        return [], _trim([_mod(c, p) for c in a])
    cdef i64 *r = <i64 *> malloc(na * sizeof(i64))
    cdef i64 *d = <i64 *> malloc(nb * sizeof(i64))
    cdef i64 *q = <i64 *> calloc(na - db, sizeof(i64))
    cdef i64 inv, c
    try:
        for k in range(na):
            r[k] = _mod(a[k], p)
        for i in range(nb):
            d[i] = _mod(b[i], p)
        inv = _inv(d[db], p)
        for k in range(na - 1, db - 1, -1):
            c = r[k]
            if c == 0:
                continue
            c = c * inv % p
            q[k - db] = c
            for i in range(db + 1):
                r[k - db + i] = (r[k - db + i] + (p - c) * d[i]) % p
        quo = [q[k] for k in range(na - db)]
        rem = [r[k] for k in range(db)]
    finally:
        free(r)
        free(d)
        free(q)
    return _trim(quo), _trim(rem)


cdef Py_ssize_t _reduce(i64 *a, Py_ssize_t na, i64 *b, Py_ssize_t nb, i64 p):
    """Replace ``a`` (length ``na``) by ``a mod b`` in place; returns the new length."""
    cdef Py_ssize_t db = nb - 1, k, i
    cdef i64 inv = _inv(b[db], p), c
    for k in range(na - 1, db - 1, -1):
        c = a[k]
        if c == 0:
            continue
        c = (p - c * inv % p) % p
        for i in range(db + 1):
            a[k - db + i] = (a[k - db + i] + c * b[i]) % p
    k = db if na > db else na
    while k > 0 and a[k - 1] == 0:
        k -= 1
    return k


def poly_gcd(a, b, i64 p):
    """Monic gcd; ``poly_gcd([], [], p) == []``."""
    cdef Py_ssize_t na = len(a), nb = len(b), i, n
    cdef i64 *x = <i64 *> malloc((na + 1) * sizeof(i64))
    cdef i64 *y = <i64 *> malloc((nb + 1) * sizeof(i64))
    cdef i64 *tmp
    cdef i64 inv
    try:
        for i in range(na):
            x[i] = _mod(a[i], p)
        for i in range(nb):
            y[i] = _mod(b[i], p)
        while na > 0 and x[na - 1] == 0:
            na -= 1
        while nb > 0 and y[nb - 1] == 0:
            nb -= 1
        while nb > 0:
            na = _reduce(x, na, y, nb, p)
            tmp = x
            x = y
            y = tmp
            n = na
            na = nb
            nb = n
        if na == 0:
            return []
        inv = _inv(x[na - 1], p)
        return [x[i] * inv % p for i in range(na)]
    finally:
        free(x)
        free(y)


def series_mul_modp(akeys, acoefs, adeg, bkeys, bcoefs, bdeg, i64 bound, i64 p):
    cdef Py_ssize_t na = len(akeys), nb = len(bkeys), i, j
    if na == 0 or nb == 0:
        return [], []
    cdef i64 *ka = <i64 *> malloc(na * sizeof(i64))
    cdef i64 *ca = <i64 *> malloc(na * sizeof(i64))
    cdef i64 *da = <i64 *> malloc(na * sizeof(i64))
    cdef i64 *kb = <i64 *> malloc(nb * sizeof(i64))
    cdef i64 *cb = <i64 *> malloc(nb * sizeof(i64))
    cdef i64 *db = <i64 *> malloc(nb * sizeof(i64))
    cdef i64 *dense = NULL
    cdef unordered_map[i64, i64] sparse
    cdef unordered_map[i64, i64].iterator it
    cdef i64 maxkey = 0, room, k, c, x
    keys = []
    coefs = []
    try:
        for i in range(na):
            ka[i] = akeys[i]
            ca[i] = _mod(acoefs[i], p)
            da[i] = adeg[i]
        for j in range(nb):
            kb[j] = bkeys[j]
            cb[j] = _mod(bcoefs[j], p)
            db[j] = bdeg[j]
        for i in range(na):
            if ka[i] > maxkey:
                maxkey = ka[i]
        k = 0
        for j in range(nb):
            if kb[j] > k:
                k = kb[j]
        maxkey += k + 1
        if maxkey <= DENSE_LIMIT:
            dense = <i64 *> calloc(maxkey, sizeof(i64))
            for i in range(na):
                room = bound - da[i]
                x = ca[i]
                for j in range(nb):
                    if db[j] >= room:
                        break
                    k = ka[i] + kb[j]
                    dense[k] = (dense[k] + x * cb[j]) % p
            for k in range(maxkey):
                if dense[k] != 0:
                    keys.append(k)
                    coefs.append(dense[k])
        else:
            for i in range(na):
                room = bound - da[i]
                x = ca[i]
                for j in range(nb):
                    if db[j] >= room:
                        break
                    k = ka[i] + kb[j]
                    sparse[k] = (sparse[k] + x * cb[j]) % p
            it = sparse.begin()
            while it != sparse.end():
                c = deref(it).second
                if c != 0:
                    keys.append(deref(it).first)
                    coefs.append(c)
                inc(it)
    finally:
        free(ka)
        free(ca)
        free(da)
        free(kb)
        free(cb)
        free(db)
        if dense != NULL:
            free(dense)
    return keys, coefs

"""Pure-Python reference versions of the hot kernels.

Dense polynomials over F_p are lists of ints, lowest degree first, with no
trailing zeros; the zero polynomial is ``[]``.
"""


def poly_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return poly_trim([c % p for c in out])


def poly_divmod(a, b, p):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = [c % p for c in a]
    db = len(b) - 1
    if len(r) - 1 < db:
        return [], poly_trim(r)
    inv = pow(b[-1], p - 2, p)
    q = [0] * (len(r) - db)
    for k in range(len(r) - 1, db - 1, -1):
        c = r[k] % p
        if c == 0:
            continue
        c = c * inv % p
        q[k - db] = c
        for i in range(db + 1):
            r[k - db + i] -= c * b[i]
    r = [c % p for c in r[:db]]
    return poly_trim(q), poly_trim(r)


def poly_gcd(a, b, p):
    """Monic gcd; ``poly_gcd([], [], p) == []``."""
    a = poly_trim([c % p for c in a])
    b = poly_trim([c % p for c in b])
    while b:
        a, b = b, poly_divmod(a, b, p)[1]
    if not a:
        return []
    inv = pow(a[-1], p - 2, p)
    return [c * inv % p for c in a]


def series_mul_modp(akeys, acoefs, adeg, bkeys, bcoefs, bdeg, bound, p):
    """Truncated product of two packed sparse series over F_p.

    Keys are mixed-radix packed exponent vectors whose radices leave room for
    the sum, so packed keys add like exponent vectors.  ``adeg``/``bdeg`` hold
    the (weighted) degree of each term and ``bdeg`` must be non-decreasing;
    products with degree ``>= bound`` are dropped.  Returns ``(keys, coefs)`` with zero coefficients removed.
    """
    acc = {}
    get = acc.get
    nb = len(bkeys)
    for i in range(len(akeys)):
        ka = akeys[i]
        ca = acoefs[i]
        room = bound - adeg[i]
        for j in range(nb):
            if bdeg[j] >= room:
                break
            k = ka + bkeys[j]
            acc[k] = get(k, 0) + ca * bcoefs[j]
    keys = []
    coefs = []
    for k, c in acc.items():
        c %= p
        if c:
            keys.append(k)
            coefs.append(c)
    return keys, coefs

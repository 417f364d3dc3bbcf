"""Compare the compiled and pure-Python kernels.

Run with ``python3 benchmarks/bench_kernels.py [--repeat N]``.  Each row
times one kernel on both backends with identical inputs and checks that the
outputs agree.
"""

import argparse
import random
import timeit

from sepnorm.kernels import _pykernels

try:
    from sepnorm.kernels import _ckernels
except ImportError:  # extension not built
    _ckernels = None


def _poly(rng, deg, p):
    return [rng.randrange(p) for _ in range(deg)] + [rng.randrange(1, p)]


def _series_case(rng, nterms, p, bound):
    # two variables packed with stride 64
    def make():
        keys, coefs, degs = [], [], []
        seen = set()
        while len(keys) < nterms:
            a, b = rng.randrange(bound), rng.randrange(bound)
            if a + b >= bound or (a, b) in seen:
                continue
            seen.add((a, b))
            keys.append(a * 64 + b)
            coefs.append(rng.randrange(1, p))
            degs.append(a + b)
        return keys, coefs, degs

    ak, ac, ad = make()
    bk, bc, bd = make()
    order = sorted(range(nterms), key=lambda i: bd[i])
    bk = [bk[i] for i in order]
    bc = [bc[i] for i in order]
    bd = [bd[i] for i in order]
    return (ak, ac, ad, bk, bc, bd, bound, p)


def cases(seed=0):
    rng = random.Random(seed)
    p = 7
    a, b = _poly(rng, 60, p), _poly(rng, 40, p)
    yield "poly_mul deg 60x40", "poly_mul", (a, b, p)
    yield "poly_divmod deg 100/30", "poly_divmod", (_poly(rng, 100, p), _poly(rng, 30, p), p)
    yield "poly_gcd deg 50,50", "poly_gcd", (_poly(rng, 50, p), _poly(rng, 50, p), p)
    yield "series_mul 200x200 terms", "series_mul_modp", _series_case(rng, 200, 3, 48)
    yield "series_mul 600x600 terms", "series_mul_modp", _series_case(rng, 600, 5, 64)


def _normalize(out):
    if isinstance(out, tuple) and len(out) == 2 and isinstance(out[0], list):
        keys, coefs = out
        return sorted(zip(keys, coefs))
    return out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if _ckernels is None:
        print("compiled kernels not built; only the Python backend is available")
    print(f"{'kernel':28} {'python (ms)':>12} {'cython (ms)':>12} {'speedup':>8}")
    for label, name, inputs in cases():
        py = getattr(_pykernels, name)
        t_py = min(timeit.repeat(lambda: py(*inputs), number=1, repeat=args.repeat)) * 1e3
        if _ckernels is None:
            print(f"{label:28} {t_py:12.3f} {'-':>12} {'-':>8}")
            continue
        cy = getattr(_ckernels, name)
        if _normalize(py(*inputs)) != _normalize(cy(*inputs)):
            raise SystemExit(f"backends disagree on {label}")
        t_cy = min(timeit.repeat(lambda: cy(*inputs), number=1, repeat=args.repeat)) * 1e3
        print(f"{label:28} {t_py:12.3f} {t_cy:12.3f} {t_py / t_cy:8.1f}")


if __name__ == "__main__":
    main()

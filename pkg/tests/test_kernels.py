import random

import pytest
from hypothesis import given, settings, strategies as st

from sepnorm import kernels
from sepnorm.kernels import _pykernels

from conftest import _ckernels

polys = st.lists(st.integers(0, 10), max_size=12)


def _naive_mul(a, b, p):
    out = [0] * max(len(a) + len(b) - 1, 0)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    return _pykernels.poly_trim(out)


@pytest.mark.parametrize("p", [2, 3, 7])
def test_poly_mul_matches_schoolbook(backend, p):
    rng = random.Random(p)
    for _ in range(200):
        a = [rng.randrange(p) for _ in range(rng.randrange(8))]
        b = [rng.randrange(p) for _ in range(rng.randrange(8))]
        assert list(backend.poly_mul(a, b, p)) == list(_naive_mul(a, b, p))


def test_poly_divmod_identity(backend):
    p = 5
    rng = random.Random(1)
    for _ in range(200):
        a = [rng.randrange(p) for _ in range(rng.randrange(10))]
        b = [rng.randrange(p) for _ in range(rng.randrange(5))] + [rng.randrange(1, p)]
        q, r = backend.poly_divmod(a, b, p)
        assert len(r) < len(b)
        back = [(x + y) % p for x, y in zip(_pad(_naive_mul(q, b, p), len(a)), _pad(r, len(a)))]
        assert _pykernels.poly_trim(back) == _pykernels.poly_trim([x % p for x in a])


def _pad(a, n):
    a = list(a)
    return a + [0] * (n - len(a))


def test_poly_divmod_by_zero(backend):
    with pytest.raises(ZeroDivisionError):
        backend.poly_divmod([1, 2], [], 3)


def test_poly_gcd_monic_common_factor(backend):
    p = 3
    common = [1, 1]  # 1 + t
    a = _naive_mul(common, [2, 0, 1], p)
    b = _naive_mul(common, [1, 2], p)
    g = list(backend.poly_gcd(list(a), list(b), p))
    assert g[-1] == 1
    q, r = backend.poly_divmod(list(a), g, p)
    assert not list(r)


def test_negative_inputs_are_reduced(backend):
    assert list(backend.poly_mul([-1], [1, 1], 3)) == [2, 2]
    q, r = backend.poly_divmod([-1, 0, 1], [1, 1], 3)
    assert list(q) == [2, 1] and not list(r)


def _series_inputs(rng, p, n, bound):
    def make():
        items = {}
        while len(items) < n:
            a, b = rng.randrange(bound), rng.randrange(bound)
            items[a * 64 + b] = (rng.randrange(1, p), a + b)
        return items

    a, b = make(), make()
    bl = sorted(b.items(), key=lambda kv: kv[1][1])
    return (
        list(a),
        [c for c, _ in a.values()],
        [d for _, d in a.values()],
        [k for k, _ in bl],
        [c for _, (c, _) in bl],
        [d for _, (_, d) in bl],
    )


def test_series_mul_truncates_and_agrees(backend):
    rng = random.Random(7)
    for p in (2, 3, 5):
        for _ in range(30):
            ak, ac, ad, bk, bc, bd = _series_inputs(rng, p, 15, 12)
            keys, coefs = backend.series_mul_modp(ak, ac, ad, bk, bc, bd, 14, p)
            naive = {}
            for k1, c1, d1 in zip(ak, ac, ad):
                for k2, c2, d2 in zip(bk, bc, bd):
                    if d1 + d2 < 14:
                        naive[k1 + k2] = (naive.get(k1 + k2, 0) + c1 * c2) % p
            naive = {k: c for k, c in naive.items() if c}
            assert dict(zip(keys, coefs)) == naive


@pytest.mark.skipif(_ckernels is None, reason="compiled kernels not built")
@settings(max_examples=200, deadline=None)
@given(a=polys, b=polys, p=st.sampled_from([2, 3, 5, 7]))
def test_backends_agree(a, b, p):
    assert list(_ckernels.poly_mul(a, b, p)) == list(_pykernels.poly_mul(a, b, p))
    assert list(_ckernels.poly_gcd(a, b, p)) == list(_pykernels.poly_gcd(a, b, p))
    if _pykernels.poly_trim([x % p for x in b]):
        cq, cr = _ckernels.poly_divmod(a, b, p)
        pq, pr = _pykernels.poly_divmod(a, b, p)
        assert (list(cq), list(cr)) == (list(pq), list(pr))


def test_backend_selection_is_reported():
    assert kernels.BACKEND in ("cython", "python")


def test_pure_python_override(tmp_path):
    import os
    import subprocess
    import sys

    env = dict(os.environ, SEPNORM_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "from sepnorm import kernels; print(kernels.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"

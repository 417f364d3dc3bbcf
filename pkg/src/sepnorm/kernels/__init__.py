"""Hot inner loops: dense F_p[t] arithmetic and packed sparse series products.

The compiled extension is used when it was built; otherwise the pure-Python
versions are used.  Set ``SEPNORM_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _pykernels

if os.environ.get("SEPNORM_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl
    except ImportError:  # extension not built
        _impl = _pykernels

BACKEND = "cython" if _impl is not _pykernels else "python"

poly_mul = _impl.poly_mul
poly_divmod = _impl.poly_divmod
poly_gcd = _impl.poly_gcd
series_mul_modp = _impl.series_mul_modp
poly_trim = _pykernels.poly_trim
# arbitrary-size packed keys
series_mul_modp_bigkeys = _pykernels.series_mul_modp

# keys are packed into signed 64-bit ints by the compiled kernel
KEY_LIMIT = 1 << 62

__all__ = [
    "BACKEND",
    "KEY_LIMIT",
    "poly_mul",
    "poly_divmod",
    "poly_gcd",
    "poly_trim",
    "series_mul_modp",
    "series_mul_modp_bigkeys",
]

"""Hot kernels with a compiled core and a numpy fallback.

The compiled extension is used when it imports; set ``LDLC_PURE_PYTHON=1``
to force the fallback. ``BACKEND`` names the active implementation and
``backends()`` returns every importable one (used by the tests and the
benchmark to compare them).
"""
import importlib
import os

from . import _py


def _load_compiled():
    if os.environ.get("LDLC_PURE_PYTHON"):
        return None
    try:
        return importlib.import_module(__name__ + "._cy")
    except ImportError:  # extension not built
        return None


_cy = _load_compiled()

_active = _cy if _cy is not None else _py
BACKEND = "cython" if _cy is not None else "python"

rref_inplace = _active.rref_inplace
min_weight_coset = _active.min_weight_coset
poly_mul = _active.poly_mul
rank_batch = _active.rank_batch


def backends():
    out = {"python": _py}
    if _cy is not None:
        out["cython"] = _cy
    return out

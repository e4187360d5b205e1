"""Backend selection for the hot loops.

The compiled ``_ckernels`` module is used when it imports; otherwise the
pure-Python ``_pykernels`` twin.  Set ``MATROIDAUT_PURE_PYTHON=1`` to force the
fallback.
"""

import importlib
import os

def load_backend(name):
    """Return the kernel module for ``"cython"`` or ``"python"``."""
    if name == "cython":
        return importlib.import_module("._ckernels", __package__)
    if name == "python":
        return importlib.import_module("._pykernels", __package__)
    raise ValueError(f"unknown kernel backend {name!r}")


def available_backends():
    out = ["python"]
    try:
        load_backend("cython")
    except ImportError:
        pass
    else:
        out.insert(0, "cython")
    return out


if os.environ.get("MATROIDAUT_PURE_PYTHON") == "1":
    BACKEND = "python"
else:
    BACKEND = available_backends()[0]

_impl = load_backend(BACKEND)

stable_size_profile = _impl.stable_size_profile
automorphisms = _impl.automorphisms
classify_family = _impl.classify_family
sparse_census_tally = _impl.sparse_census_tally
matroid_families = _impl.matroid_families
exchange_violation = _impl.exchange_violation

"""Kernel dispatch.

The compiled ``_core`` extension is used when it imports; otherwise the
numpy reference in ``_core_py`` takes over.  Set ``SPIRALTOWER_BACKEND=python``
to force the fallback.
"""

import os

from spiraltower import _core_py

BACKEND = "python"
_impl = _core_py

if os.environ.get("SPIRALTOWER_BACKEND", "").lower() != "python":
    try:
        from spiraltower import _core as _impl  # noqa: F811
        BACKEND = "compiled"
    except ImportError:  # pragma: no cover - depends on the build
        _impl = _core_py

unique_keys = _impl.unique_keys
edge_image_keys = _impl.edge_image_keys
degree_defects = _impl.degree_defects
closed_cycles = _impl.closed_cycles
witness_arrays = _impl.witness_arrays
witness_sweep = _impl.witness_sweep


def backends():
    """Available kernel modules by name; the fallback is always present."""
    found = {"python": _core_py}
    try:
        from spiraltower import _core
        found["compiled"] = _core
    except ImportError:  # pragma: no cover
        pass
    return found

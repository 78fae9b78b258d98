"""Backend selection for the combinatorial kernels.

The compiled extension is used when it imports; setting the environment
variable ``HOLOKIT_PURE_PYTHON=1`` forces the pure-Python implementation.
"""

from __future__ import annotations

import os
from types import ModuleType

from holokit import _pykernels


def _load_compiled() -> ModuleType | None:
    try:
        from holokit import _ckernels
    except ImportError:
        return None
    return _ckernels


_compiled = _load_compiled()


def get_backend(name: str | None = None) -> ModuleType:
    """Return the kernel module for ``"c"``, ``"python"`` or the default."""
    if name == "python":
        return _pykernels
    if name == "c":
        if _compiled is None:
            raise ImportError("compiled kernels are not built; run `pip install -e . --no-build-isolation`")
        return _compiled
    if os.environ.get("HOLOKIT_PURE_PYTHON") or _compiled is None:
        return _pykernels
    return _compiled


def backend_name() -> str:
    return "python" if get_backend() is _pykernels else "c"


def available_backends() -> list[str]:
    return ["python"] + (["c"] if _compiled is not None else [])


def ks_search(*args):
    return get_backend().ks_search(*args)


def best_deterministic(*args):
    return get_backend().best_deterministic(*args)


def global_sections(*args):
    return get_backend().global_sections(*args)

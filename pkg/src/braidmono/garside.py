"""Normal-form kernel selection.

The compiled kernel is used when the extension was built; otherwise the
pure-Python implementation is used.  Set ``BRAIDMONO_PURE=1`` to force the
fallback (the benchmark and the kernel-agreement tests do this).
"""

from __future__ import annotations

import os

from . import _garside_py

try:
    if os.environ.get("BRAIDMONO_PURE"):
        raise ImportError("pure kernel requested")
    from . import _garside as _compiled  # type: ignore[attr-defined]
except ImportError:
    _compiled = None

if _compiled is not None:
    normal_form = _compiled.normal_form
    KERNEL = "cython"
else:
    normal_form = _garside_py.normal_form
    KERNEL = "python"

python_normal_form = _garside_py.normal_form
compiled_normal_form = _compiled.normal_form if _compiled is not None else None

__all__ = ["normal_form", "python_normal_form", "compiled_normal_form", "KERNEL"]

"""Kernel backend selection: compiled extension when available, numpy fallback.

Set ANTICONC_PURE=1 to force the fallback (used by the parity tests and
the benchmark).  Both backends implement the same three entry points with
identical results; see _pure for the authoritative semantics.
"""

import os

from ..config import ENV_PURE
from . import _pure

if os.environ.get(ENV_PURE, "").strip() not in ("", "0"):
    _impl = _pure
else:
    try:
        from . import _ext as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _pure

BACKEND = _impl.BACKEND
mix64 = _impl.mix64
sample_walk_counts = _impl.sample_walk_counts
sample_matrix_walk = _impl.sample_matrix_walk
search_max_topk = _impl.search_max_topk


def available_backends():
    """Names of importable backends (always includes 'pure')."""
    names = ["pure"]
    try:
        from . import _ext  # noqa: F401

        names.append("ext")
    except ImportError:
        pass
    return names


def get_backend(name: str):
    """Fetch a backend module by name ('pure' or 'ext')."""
    if name == "pure":
        return _pure
    if name == "ext":
        from . import _ext

        return _ext
    raise ValueError(f"unknown backend {name!r}")

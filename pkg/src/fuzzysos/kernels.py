"""Kernel backend selection.

The compiled extension is preferred; set ``FUZZYSOS_PURE=1`` to force the
numpy fallback.
"""
import os

BACKEND = "python"

if os.environ.get("FUZZYSOS_PURE", "") not in ("1", "true", "yes"):
    try:
        from ._ckernels import clipped_centroid, pwl_eval  # noqa: F401

        BACKEND = "cython"
    except ImportError:
        pass

if BACKEND == "python":
    from ._kernels_py import clipped_centroid, pwl_eval  # noqa: F401

__all__ = ["BACKEND", "clipped_centroid", "pwl_eval"]

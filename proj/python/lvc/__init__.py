"""Python bindings for the lvc query-attention video compression kernel."""

import warnings

import numpy as np

from ._lvc import LvcError, __version__, sample_frame_indices
from ._lvc import compress as _compress
from ._lvc import oracle_compress as _oracle_compress

__all__ = ["LvcError", "__version__", "compress", "oracle_compress", "sample_frame_indices"]


def _as_float32(a, name):
    if a is None:
        return None
    if isinstance(a, np.ndarray) and a.dtype == np.float32 and a.flags.c_contiguous:
        return a
    warnings.warn(f"{name}: converting to C-contiguous float32", stacklevel=3)
    return np.ascontiguousarray(a, dtype=np.float32)


def compress(features, query=None, *, tokens_per_frame, pseudo_frames, heads=1, mode="query-attn"):
    """Compress frame features into pseudo frames; returns a (pseudo_frames*tokens, dim) array.

    ``mode`` is one of "query-attn", "query-attn-mh" or "avg-pool"; the latter needs no query.
    """
    return _compress(_as_float32(features, "features"), _as_float32(query, "query"),
                     tokens_per_frame, pseudo_frames, heads, mode)


def oracle_compress(features, query, *, tokens_per_frame, pseudo_frames, heads=1, mode="query-attn"):
    return _oracle_compress(_as_float32(features, "features"), _as_float32(query, "query"),
                            tokens_per_frame, pseudo_frames, heads, mode)

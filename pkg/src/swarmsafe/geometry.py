"""Dimension-generic (2D/3D) vector helpers shared by all modules.

Vectors are plain float64 numpy arrays of length 2 or 3. 2D scenarios stay
native 2D everywhere; only cross-product paths zero-pad to 3D and truncate
back. Norms are Euclidean; the zero vector has norm 0 (callers handle
degeneracy).
"""

from __future__ import annotations

import numpy as np

SUPPORTED_DIMS = (2, 3)


def as_vec(x, dim: int | None = None) -> np.ndarray:
    """Validate and convert to a float64 vector of length 2 or 3.

    Rejects non-finite components and, when `dim` is given, any length
    mismatch.
    """
    v = np.asarray(x, dtype=np.float64).ravel()
    if v.size not in SUPPORTED_DIMS:
        raise ValueError(f"vector must have 2 or 3 components, got {v.size}")
    if dim is not None and v.size != dim:
        raise ValueError(f"expected dim {dim}, got {v.size}")
    if not np.all(np.isfinite(v)):
        raise ValueError(f"vector has non-finite components: {v}")
    return v


def norm(a) -> float:
    return float(np.linalg.norm(np.asarray(a, dtype=np.float64)))


def dot(a, b) -> float:
    return float(np.dot(np.asarray(a, dtype=np.float64), np.asarray(b, dtype=np.float64)))


def embed3(a) -> np.ndarray:
    """Zero-pad a 2D vector to 3D; pass 3D through unchanged."""
    v = as_vec(a)
    if v.size == 3:
        return v
    return np.array([v[0], v[1], 0.0])


def cross_planar(a, b) -> np.ndarray:
    """3D cross product of two same-dimension vectors, zero-padding 2D inputs.

    Always returns a length-3 vector so line-of-sight rate cross products are
    well defined in planar scenarios.
    """
    va = as_vec(a)
    vb = as_vec(b)
    if va.size != vb.size:
        raise ValueError(f"dimension mismatch: {va.size} vs {vb.size}")
    return np.cross(embed3(va), embed3(vb))


def clamp_norm(a: np.ndarray, limit: float) -> np.ndarray:
    """Radially scale `a` so its Euclidean norm is at most `limit`.

    Direction-preserving; returns the input array unchanged (same object)
    when already within the limit.
    """
    if limit < 0:
        raise ValueError("limit must be non-negative")
    n = float(np.linalg.norm(a))
    if n <= limit or n == 0.0:
        return a
    return a * (limit / n)

"""Geometry kernel dispatch: compiled core with a pure-numpy fallback.

The compiled extension ``_geomcore`` (Cython) is used when it was built;
otherwise, or when ``POLYMER_TRAPS_BACKEND=python`` is set, the numpy
fallback takes over. Both implement identical predicates, so results are
interchangeable (tests assert exact agreement).

Voxels are anchored at absolute multiples of the edge ``h``: the voxel with
global integer index ``i`` has center ``(i + 0.5) * h``. Anchoring never
depends on the data, which makes occupancy monotone under point-set
inclusion and radius increase.
"""

import os

import numpy as np

from .errors import ConfigurationError

if os.environ.get("POLYMER_TRAPS_BACKEND", "").lower() == "python":
    from . import _geomfallback as _impl
    BACKEND = "python"
else:
    try:
        from . import _geomcore as _impl
        BACKEND = "compiled"
    except ImportError:
        from . import _geomfallback as _impl
        BACKEND = "python"

MAX_VOXELS = 1 << 28  # bitmap cells; ~256 MB of uint8


def get_backend():
    return BACKEND


def _as_points(points):
    pts = np.ascontiguousarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[0] == 0:
        raise ValueError("expected a non-empty (n, d) point array")
    return pts


def voxel_occupancy_count(points, r, h, backend=None):
    """Number of voxels (edge h, absolute anchoring) with center within r of the set."""
    pts = _as_points(points)
    d = pts.shape[1]
    if r <= 0 or h <= 0:
        raise ValueError("radius and voxel edge must be positive")
    margin = int(np.ceil(r / h)) + 2
    lo = np.floor(pts.min(axis=0) / h).astype(np.int64) - margin
    hi = np.floor(pts.max(axis=0) / h).astype(np.int64) + margin
    dims = hi - lo + 1
    total = int(np.prod(dims.astype(object)))
    if total > MAX_VOXELS:
        raise ConfigurationError(
            f"voxel window of {total} cells exceeds the {MAX_VOXELS} cap; "
            "coarsen h or use the hit-or-miss estimator")
    impl = _select(backend, d)
    bitmap = np.zeros(total, dtype=np.uint8)
    impl.stamp_balls(pts, float(r), float(h), lo, dims, bitmap)
    return int(np.count_nonzero(bitmap))


def count_within(queries, refs, radius, early_exit=False, backend=None):
    """Count query points having at least one reference point within ``radius``.

    Candidate search is a uniform spatial hash with cell size ``radius``
    (one-ring neighborhoods suffice). ``early_exit`` returns 1 at the first
    hit, for existence queries.
    """
    q = _as_points(queries)
    refs = np.ascontiguousarray(refs, dtype=np.float64)
    if refs.ndim != 2 or refs.shape[1] != q.shape[1]:
        raise ValueError("queries and refs must share dimension")
    if radius <= 0:
        raise ValueError("radius must be positive")
    if refs.shape[0] == 0:
        return 0
    d = q.shape[1]
    cells = np.floor(refs / radius).astype(np.int64)
    cmin = cells.min(axis=0)
    extent = cells.max(axis=0) - cmin + 1
    rel = cells - cmin
    ids = rel[:, 0].copy()
    for z in range(1, d):
        ids = ids * extent[z] + rel[:, z]
    order = np.argsort(ids, kind="stable").astype(np.int64)
    sorted_ids = ids[order]
    impl = _select(backend, d)
    return int(impl.count_within(q, refs, sorted_ids, order, cmin, extent,
                                 float(radius), float(radius), bool(early_exit)))


def _select(backend, d):
    # the compiled core only covers d <= 3; higher d silently falls back
    if backend is None:
        backend = BACKEND
    if backend == "compiled":
        if BACKEND != "compiled":
            raise ConfigurationError("compiled geometry backend is not built")
        if d > 3:
            from . import _geomfallback
            return _geomfallback
        from . import _geomcore
        return _geomcore
    if backend == "python":
        from . import _geomfallback
        return _geomfallback
    raise ValueError(f"unknown backend {backend!r}")

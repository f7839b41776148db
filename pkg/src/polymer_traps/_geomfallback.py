"""Pure-numpy fallback for the compiled geometry kernels.

Implements exactly the same occupancy / hit predicates as ``_geomcore`` so
that both backends produce identical counts; only the candidate search
strategy differs (broadcast stencils here, row-span stamping there).
"""

import numpy as np

_CHUNK_BUDGET = 4_000_000  # candidate voxels handled per broadcast chunk


def stamp_balls(pts, r, h, lo, dims, bitmap):
    n, d = pts.shape
    radius_cells = int(np.ceil(r / h)) + 1
    axes = [np.arange(-radius_cells, radius_cells + 1)] * d
    offsets = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, d)
    stencil = offsets.shape[0]
    grid = bitmap.reshape(tuple(dims))
    lo = np.asarray(lo)
    chunk = max(1, _CHUNK_BUDGET // stencil)
    for start in range(0, n, chunk):
        block = pts[start:start + chunk]
        base = np.floor(block / h).astype(np.int64)
        cells = base[:, None, :] + offsets[None, :, :]
        centers = (cells + 0.5) * h
        diff = centers - block[:, None, :]
        mask = np.einsum("ijk,ijk->ij", diff, diff) <= r * r
        idx = cells[mask] - lo
        grid[tuple(idx.T)] = 1


def count_within(queries, refs, sorted_ids, order, cmin, extent,
                 cell, radius, early_exit):
    nq, d = queries.shape
    if refs.shape[0] == 0:
        return 0
    qcells = np.floor(queries / cell).astype(np.int64)
    hits = np.zeros(nq, dtype=bool)
    axes = [np.arange(-1, 2)] * d
    offsets = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, d)
    cmin = np.asarray(cmin)
    extent = np.asarray(extent)
    r2 = radius * radius
    for off in offsets:
        pending = ~hits
        nb = qcells[pending] + off
        valid = np.all((nb >= cmin) & (nb < cmin + extent), axis=1)
        if not valid.any():
            continue
        rel = nb[valid] - cmin
        cid = rel[:, 0]
        for z in range(1, d):
            cid = cid * extent[z] + rel[:, z]
        left = np.searchsorted(sorted_ids, cid, side="left")
        right = np.searchsorted(sorted_ids, cid, side="right")
        qidx = np.flatnonzero(pending)[valid]
        width = int((right - left).max(initial=0))
        for k in range(width):
            live = left + k < right
            if not live.any():
                break
            refs_k = refs[order[left[live] + k]]
            diff = queries[qidx[live]] - refs_k
            close = np.einsum("ij,ij->i", diff, diff) <= r2
            hits[qidx[live][close]] = True
        if early_exit and hits.any():
            return 1
    return int(hits.sum())

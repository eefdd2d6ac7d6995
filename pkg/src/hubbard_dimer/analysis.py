"""Structural checks on sweep surfaces: discontinuities between neighbouring cells."""
from __future__ import annotations

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components


def adjacent_jumps(F: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Absolute differences along x (``F[:, 1:] - F[:, :-1]``) and along y."""
    F = np.asarray(F, dtype=float)
    return np.abs(np.diff(F, axis=1)), np.abs(np.diff(F, axis=0))


def max_jump(F: np.ndarray) -> float:
    jx, jy = adjacent_jumps(F)
    return float(max(np.nanmax(jx), np.nanmax(jy)))


def jump_regions(F: np.ndarray, threshold: float) -> tuple[int, np.ndarray]:
    """Connected regions left after cutting every link whose jump exceeds ``threshold``.

    More than one region means the jump locus closes on itself or on the grid
    boundary, i.e. it encloses part of the plane.
    """
    F = np.asarray(F, dtype=float)
    ny, nx = F.shape
    idx = np.arange(ny * nx).reshape(ny, nx)
    jx, jy = adjacent_jumps(F)
    keep_x = jx <= threshold
    keep_y = jy <= threshold
    rows = np.concatenate([idx[:, :-1][keep_x], idx[:-1, :][keep_y]])
    cols = np.concatenate([idx[:, 1:][keep_x], idx[1:, :][keep_y]])
    graph = coo_matrix((np.ones(rows.size), (rows, cols)), shape=(ny * nx, ny * nx))
    n, labels = connected_components(graph, directed=False)
    return n, labels.reshape(ny, nx)

"""Marching-squares level sets on a rectilinear grid.

Values are sampled at nodes ``F[iy, ix]`` over coordinates ``xs`` and ``ys``.
A node counts as inside when ``F >= level``.  Crossing points are linearly
interpolated along cell edges, and the two ambiguous saddle cases are
resolved by the mean of the four corners.  Cells touching a NaN are skipped.
"""
from __future__ import annotations

import numpy as np

# Cell corners, counter-clockwise from bottom-left:
#   3 --e2-- 2
#   |        |
#   e3      e1
#   |        |
#   0 --e0-- 1
_EDGE_CORNERS = ((0, 1), (1, 2), (3, 2), (0, 3))

# case index = sum(inside_k << k); saddles 5 and 10 hold (centre-out, centre-in) variants
_SEGMENTS = {
    0: (), 15: (),
    1: ((3, 0),), 14: ((3, 0),),
    2: ((0, 1),), 13: ((0, 1),),
    3: ((3, 1),), 12: ((3, 1),),
    4: ((1, 2),), 11: ((1, 2),),
    6: ((0, 2),), 9: ((0, 2),),
    7: ((3, 2),), 8: ((3, 2),),
}
_SADDLES = {
    # corners 0 and 2 inside
    5: (((3, 0), (1, 2)), ((3, 2), (0, 1))),
    # corners 1 and 3 inside
    10: (((0, 1), (3, 2)), ((3, 0), (1, 2))),
}


def _edge_key(iy: int, ix: int, edge: int) -> tuple:
    if edge == 0:
        return ("h", iy, ix)
    if edge == 2:
        return ("h", iy + 1, ix)
    if edge == 3:
        return ("v", iy, ix)
    return ("v", iy, ix + 1)


def _segments(xs, ys, F, level):
    ny, nx = F.shape
    inside = F >= level
    points = {}
    segs = []
    for iy in range(ny - 1):
        for ix in range(nx - 1):
            corners = ((iy, ix), (iy, ix + 1), (iy + 1, ix + 1), (iy + 1, ix))
            vals = [F[c] for c in corners]
            if any(np.isnan(v) for v in vals):
                continue
            case = sum(int(inside[c]) << k for k, c in enumerate(corners))
            if case in _SADDLES:
                centre_in = float(np.mean(vals)) >= level
                pairs = _SADDLES[case][1 if centre_in else 0]
            else:
                pairs = _SEGMENTS[case]
            for e_a, e_b in pairs:
                keys = []
                for e in (e_a, e_b):
                    key = _edge_key(iy, ix, e)
                    if key not in points:
                        ca, cb = (corners[k] for k in _EDGE_CORNERS[e])
                        fa, fb = F[ca], F[cb]
                        t = (level - fa) / (fb - fa)
                        pa = np.array([xs[ca[1]], ys[ca[0]]])
                        pb = np.array([xs[cb[1]], ys[cb[0]]])
                        points[key] = pa + t * (pb - pa)
                    keys.append(key)
                segs.append(tuple(keys))
    return points, segs


def _chain(segs):
    """Join segments that share an edge crossing into ordered key chains."""
    touching = {}
    for k, (a, b) in enumerate(segs):
        touching.setdefault(a, []).append(k)
        touching.setdefault(b, []).append(k)
    used = [False] * len(segs)

    def walk(key, came_from):
        path = []
        while True:
            nxt = [k for k in touching[key] if not used[k] and k != came_from]
            if not nxt:
                return path
            k = nxt[0]
            used[k] = True
            a, b = segs[k]
            key = b if a == key else a
            path.append(key)
            came_from = k

    chains = []
    # open chains start at keys touched once, so they come out whole
    for start in sorted(touching, key=lambda kk: min(touching[kk])):
        if len(touching[start]) == 1 and not used[touching[start][0]]:
            chains.append([start] + walk(start, None))
    for k, (a, _) in enumerate(segs):
        if not used[k]:
            chains.append([a] + walk(a, None))
    return chains


def marching_squares(xs, ys, F, level: float = 0.0) -> list[np.ndarray]:
    """Polylines of ``F == level``; each is an ``(n, 2)`` array of ``(x, y)`` points.

    Closed loops repeat their first point at the end.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    F = np.asarray(F, dtype=float)
    if F.shape != (ys.size, xs.size):
        raise ValueError(f"grid shape {F.shape} does not match axes ({ys.size}, {xs.size})")
    points, segs = _segments(xs, ys, F, level)
    return [np.array([points[k] for k in chain]) for chain in _chain(segs)]

"""Planar geometry helpers: segment proximity scans, winding tests, Hausdorff.

Polylines are given as complex sample arrays with a real parameter per
sample (two-sided curve time).  The self-intersection scan is brute force
over candidate segment pairs pruned with a KD-tree on midpoints.
"""

from __future__ import annotations

import numpy as np
from scipy.spatial import cKDTree


def _segment_pair_distance(p1, p2, q1, q2):
    """Min distance between segments [p1,p2] and [q1,q2], vectorized (complex)."""

    def _pt_seg(pts, a, b):
        ab = b - a
        denom = np.abs(ab) ** 2
        with np.errstate(divide="ignore", invalid="ignore"):
            s = ((pts - a) * np.conj(ab)).real / denom
        s = np.where(denom > 0.0, np.clip(s, 0.0, 1.0), 0.0)
        return np.abs(pts - (a + s * ab))

    d = np.minimum(
        np.minimum(_pt_seg(q1, p1, p2), _pt_seg(q2, p1, p2)),
        np.minimum(_pt_seg(p1, q1, q2), _pt_seg(p2, q1, q2)),
    )
    # proper crossings: orientation tests; distance zero when interiors intersect
    def _cross(o, a, b):
        return ((a - o) * np.conj(b - o)).imag

    d1 = _cross(p1, p2, q1)
    d2 = _cross(p1, p2, q2)
    d3 = _cross(q1, q2, p1)
    d4 = _cross(q1, q2, p2)
    crossing = (d1 * d2 < 0.0) & (d3 * d4 < 0.0)
    return np.where(crossing, 0.0, d)


def first_self_contact(params, points, tol, arc_gap=None):
    """Earliest |parameter| at which two non-adjacent segments come within tol.

    params: increasing parameter per vertex (two-sided curve time, may be
    negative); points: complex vertices.  Segment pairs are skipped when they
    share a vertex index or when the polyline arc length between them is
    below `arc_gap` (default 4*tol), so stationary or densely sampled stretches
    do not read as self-contact.  Returns None when the polyline is simple at
    this tolerance.
    """
    params = np.asarray(params, dtype=np.float64)
    pts = np.asarray(points, dtype=np.complex128)
    n_seg = len(pts) - 1
    if n_seg < 2:
        return None
    if arc_gap is None:
        arc_gap = 4.0 * tol
    seg_len = np.abs(np.diff(pts))
    arc = np.concatenate([[0.0], np.cumsum(seg_len)])  # arc[i] = length up to vertex i
    mids = 0.5 * (pts[:-1] + pts[1:])
    radius = float(seg_len.max()) + tol if n_seg else tol
    tree = cKDTree(np.column_stack([mids.real, mids.imag]))
    pairs = tree.query_pairs(r=radius, output_type="ndarray")
    if len(pairs) == 0:
        return None
    i, j = pairs[:, 0], pairs[:, 1]
    keep = j > i + 1  # sharing a vertex is adjacency, not contact
    # arc separation between end of segment i and start of segment j
    keep &= (arc[j] - arc[i + 1]) > arc_gap
    i, j = i[keep], j[keep]
    if len(i) == 0:
        return None
    d = _segment_pair_distance(pts[i], pts[i + 1], pts[j], pts[j + 1])
    close = d <= tol
    if not close.any():
        return None
    i, j = i[close], j[close]
    t_pair = np.maximum(
        np.maximum(np.abs(params[i]), np.abs(params[i + 1])),
        np.maximum(np.abs(params[j]), np.abs(params[j + 1])),
    )
    return float(t_pair.min())


def distance_to_polyline(points, vertices):
    """sup over points of the distance to the polyline through vertices."""
    pts = np.atleast_1d(np.asarray(points, dtype=np.complex128))
    v = np.asarray(vertices, dtype=np.complex128)
    if len(pts) == 0:
        return 0.0
    if len(v) < 2:
        return one_sided_distance(pts, v)
    a, b = v[:-1], v[1:]
    worst = 0.0
    for p in pts:
        ab = b - a
        denom = np.abs(ab) ** 2
        with np.errstate(divide="ignore", invalid="ignore"):
            s = ((p - a) * np.conj(ab)).real / denom
        s = np.where(denom > 0.0, np.clip(s, 0.0, 1.0), 0.0)
        worst = max(worst, float(np.min(np.abs(p - (a + s * ab)))))
    return worst


def points_inside_loop(loop, queries, chunk=8192):
    """Even-odd winding test of complex query points against a closed polygon.

    The polygon is closed implicitly (last vertex joins the first).
    """
    loop = np.asarray(loop, dtype=np.complex128)
    qs = np.atleast_1d(np.asarray(queries, dtype=np.complex128))
    x1, y1 = loop.real, loop.imag
    x2, y2 = np.roll(x1, -1), np.roll(y1, -1)
    inside = np.zeros(qs.shape, dtype=bool)
    for k in range(0, len(qs), chunk):
        qx = qs[k : k + chunk].real[:, None]
        qy = qs[k : k + chunk].imag[:, None]
        spans = (y1[None, :] > qy) != (y2[None, :] > qy)
        with np.errstate(divide="ignore", invalid="ignore"):
            x_hit = x1[None, :] + (qy - y1[None, :]) * (x2 - x1)[None, :] / (y2 - y1)[None, :]
        crossings = spans & (qx < x_hit)
        inside[k : k + chunk] = np.sum(crossings, axis=1) % 2 == 1
    return inside if len(inside) > 1 else inside


def hausdorff_distance(a, b):
    """Symmetric Hausdorff distance between two complex point sets."""
    a = np.atleast_1d(np.asarray(a, dtype=np.complex128))
    b = np.atleast_1d(np.asarray(b, dtype=np.complex128))
    if len(a) == 0 and len(b) == 0:
        return 0.0
    if len(a) == 0 or len(b) == 0:
        return np.inf
    ta = cKDTree(np.column_stack([a.real, a.imag]))
    tb = cKDTree(np.column_stack([b.real, b.imag]))
    d_ab, _ = tb.query(np.column_stack([a.real, a.imag]))
    d_ba, _ = ta.query(np.column_stack([b.real, b.imag]))
    return float(max(d_ab.max(), d_ba.max()))


def one_sided_distance(a, b):
    """sup over a of the distance to the set b."""
    a = np.atleast_1d(np.asarray(a, dtype=np.complex128))
    b = np.atleast_1d(np.asarray(b, dtype=np.complex128))
    if len(a) == 0:
        return 0.0
    if len(b) == 0:
        return np.inf
    tb = cKDTree(np.column_stack([b.real, b.imag]))
    d, _ = tb.query(np.column_stack([a.real, a.imag]))
    return float(d.max())


def marching_squares(xs, ys, mask):
    """Boundary segments of a boolean raster, midpoint marching squares.

    Returns a list of (z0, z1) complex segment endpoints, deterministic
    row-major order.  Good enough for SVG contours of sublevel sets.
    """
    mask = np.asarray(mask, dtype=bool)
    ny, nx = mask.shape
    segs = []
    for j in range(ny - 1):
        for i in range(nx - 1):
            c = (
                (mask[j, i] << 0)
                | (mask[j, i + 1] << 1)
                | (mask[j + 1, i + 1] << 2)
                | (mask[j + 1, i] << 3)
            )
            if c == 0 or c == 15:
                continue
            xm, xp = xs[i], xs[i + 1]
            ym, yp = ys[j], ys[j + 1]
            bottom = complex(0.5 * (xm + xp), ym)
            top = complex(0.5 * (xm + xp), yp)
            left = complex(xm, 0.5 * (ym + yp))
            right = complex(xp, 0.5 * (ym + yp))
            table = {
                1: [(left, bottom)],
                2: [(bottom, right)],
                3: [(left, right)],
                4: [(right, top)],
                5: [(left, top), (bottom, right)],
                6: [(bottom, top)],
                7: [(left, top)],
                8: [(top, left)],
                9: [(top, bottom)],
                10: [(top, left), (bottom, right)],
                11: [(top, right)],
                12: [(right, left)],
                13: [(right, bottom)],
                14: [(bottom, left)],
            }
            segs.extend(table[c])
    return segs

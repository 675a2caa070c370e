"""File formats: CSV, ASCII PGM, SVG, and run manifests.

All writers are deterministic: fixed float formatting, no timestamps, and a
manifest sibling carrying the resolved configuration hash beside every
output file.
"""

from __future__ import annotations

import hashlib
import json
import math
from pathlib import Path

import numpy as np

from .geometry import marching_squares
from .hulls import CurveTrace, HullField

_FMT = "%.17g"


def _f(x) -> str:
    if isinstance(x, float) and math.isnan(x):
        return "nan"
    return _FMT % x


def trajectory_csv(traj, path):
    """Columns t, re_g, im_g, status; status set on the final row only."""
    lines = ["t,re_g,im_g,status"]
    last = len(traj.times) - 1
    for k, (t, g) in enumerate(zip(traj.times, traj.values)):
        status = traj.status if k == last else ""
        lines.append(f"{_f(float(t))},{_f(g.real)},{_f(g.imag)},{status}")
    Path(path).write_text("\n".join(lines) + "\n")


def hull_field_csv(field: HullField, path):
    """Columns x, y, t_blow with "inf" for alive nodes and "fail" for failures."""
    xs, ys = field.grid.xs, field.grid.ys
    lines = ["x,y,t_blow"]
    for j, y in enumerate(ys):
        for i, x in enumerate(xs):
            v = field.times[j, i]
            if math.isnan(v):
                sval = "fail"
            elif math.isinf(v):
                sval = "inf"
            else:
                sval = _f(float(v))
            lines.append(f"{_f(float(x))},{_f(float(y))},{sval}")
    Path(path).write_text("\n".join(lines) + "\n")


def hull_field_pgm(field: HullField, path):
    """ASCII P2 image: 0 alive, 1 failed, 2..255 by swallow time (early = bright)."""
    t_max = field.t_max if field.t_max > 0 else 1.0
    vals = field.times
    img = np.zeros(vals.shape, dtype=np.int64)
    img[np.isnan(vals)] = 1
    with np.errstate(invalid="ignore"):
        sw = vals <= t_max
    scaled = 255 - np.clip((vals / t_max) * 253.0, 0.0, 253.0).astype(np.int64)
    img[sw] = scaled[sw]
    rows = [" ".join(str(v) for v in row) for row in img[::-1]]  # top row = max y
    body = f"P2\n{vals.shape[1]} {vals.shape[0]}\n255\n" + "\n".join(rows) + "\n"
    Path(path).write_text(body)


def curve_trace_csv(trace: CurveTrace, path):
    """Columns t, re_gp, im_gp, ell_p, re_gm, im_gm, ell_m, residual.

    ell columns are empty for general (non-pioneer) traces; NaN samples leave
    their coordinate cells empty.
    """
    lines = ["t,re_gp,im_gp,ell_p,re_gm,im_gm,ell_m,residual"]
    has_ell = trace.ell_plus is not None
    for k, t in enumerate(trace.times):
        gp, gm = trace.gamma_plus[k], trace.gamma_minus[k]
        cp = ["", ""] if np.isnan(gp) else [_f(gp.real), _f(gp.imag)]
        cm = ["", ""] if np.isnan(gm) else [_f(gm.real), _f(gm.imag)]
        ep = str(int(trace.ell_plus[k])) if has_ell and not np.isnan(gp) else ""
        em = str(int(trace.ell_minus[k])) if has_ell and not np.isnan(gm) else ""
        lines.append(
            ",".join([_f(float(t)), cp[0], cp[1], ep, cm[0], cm[1], em, _f(float(trace.residuals[k]))])
        )
    Path(path).write_text("\n".join(lines) + "\n")


def read_curve_trace_csv(path) -> CurveTrace:
    rows = Path(path).read_text().strip().split("\n")[1:]
    times, gps, gms, res, ellp, ellm = [], [], [], [], [], []
    any_ell = False
    for row in rows:
        cells = row.split(",")
        times.append(float(cells[0]))
        gps.append(complex(float(cells[1]), float(cells[2])) if cells[1] else np.nan)
        gms.append(complex(float(cells[4]), float(cells[5])) if cells[4] else np.nan)
        ellp.append(int(cells[3]) if cells[3] else 0)
        ellm.append(int(cells[6]) if cells[6] else 0)
        any_ell = any_ell or bool(cells[3]) or bool(cells[6])
        res.append(float(cells[7]))
    return CurveTrace(
        np.asarray(times),
        np.asarray(gps, dtype=np.complex128),
        np.asarray(gms, dtype=np.complex128),
        np.asarray(res),
        ell_plus=np.asarray(ellp) if any_ell else None,
        ell_minus=np.asarray(ellm) if any_ell else None,
    )


# ---------------------------------------------------------------------------
# SVG
# ---------------------------------------------------------------------------


def _svg_header(x0, x1, y0, y1, width=640):
    # y axis flipped so the upper half-plane is up
    w, h = x1 - x0, y1 - y0
    height = int(round(width * h / w)) if w > 0 else width
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="{x0:.6g} {-y1:.6g} {w:.6g} {h:.6g}">\n'
    ), max(w, h)


def _poly_points(zs):
    return " ".join(f"{z.real:.6g},{-z.imag:.6g}" for z in zs)


def trace_svg(trace: CurveTrace, path, width=640):
    """Plus branch and minus branch as polylines (blue / orange)."""
    pts = np.concatenate(
        [trace.gamma_plus[~np.isnan(trace.gamma_plus)], trace.gamma_minus[~np.isnan(trace.gamma_minus)]]
    )
    if len(pts) == 0:
        Path(path).write_text('<svg xmlns="http://www.w3.org/2000/svg"/>\n')
        return
    margin = 0.05 * max(np.ptp(pts.real), np.ptp(pts.imag), 1e-6)
    head, scale = _svg_header(
        pts.real.min() - margin, pts.real.max() + margin,
        pts.imag.min() - margin, pts.imag.max() + margin, width,
    )
    sw = scale / width * 1.5
    gp = trace.gamma_plus[~np.isnan(trace.gamma_plus)]
    gm = trace.gamma_minus[~np.isnan(trace.gamma_minus)]
    body = [head]
    if len(gm) > 1:
        body.append(
            f'<polyline fill="none" stroke="#e07020" stroke-width="{sw:.4g}" points="{_poly_points(gm)}"/>\n'
        )
    if len(gp) > 1:
        body.append(
            f'<polyline fill="none" stroke="#2050c0" stroke-width="{sw:.4g}" points="{_poly_points(gp)}"/>\n'
        )
    body.append("</svg>\n")
    Path(path).write_text("".join(body))


def hull_field_svg(field: HullField, path, t=None, width=640):
    """Marching-squares contour of the sublevel set {T_z <= t}."""
    g = field.grid
    head, scale = _svg_header(g.x0, g.x1, g.y0, g.y1, width)
    sw = scale / width * 1.5
    segs = marching_squares(g.xs, g.ys, field.swallowed_mask(t))
    body = [head]
    for z0, z1 in segs:
        body.append(
            f'<line stroke="#202020" stroke-width="{sw:.4g}" '
            f'x1="{z0.real:.6g}" y1="{-z0.imag:.6g}" x2="{z1.real:.6g}" y2="{-z1.imag:.6g}"/>\n'
        )
    # swallowed nodes as dots, since sparse rasters have no contour area
    for z in field.swallowed_points(t):
        body.append(f'<circle cx="{z.real:.6g}" cy="{-z.imag:.6g}" r="{sw:.4g}" fill="#c02020"/>\n')
    body.append("</svg>\n")
    Path(path).write_text("".join(body))


# ---------------------------------------------------------------------------
# manifests
# ---------------------------------------------------------------------------


def config_hash(config: dict) -> str:
    blob = json.dumps(config, sort_keys=True, default=str)
    return hashlib.sha1(blob.encode()).hexdigest()[:16]


def write_manifest(out_path, config: dict, version: str):
    manifest = {
        "tool": "loewner",
        "version": version,
        "config": config,
        "config_hash": config_hash(config),
    }
    p = Path(str(out_path) + ".manifest.json")
    p.write_text(json.dumps(manifest, indent=2, sort_keys=True, default=str) + "\n")
    return p

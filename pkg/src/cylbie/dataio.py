"""Delimited file formats: far-field data, boundary curves, iteration traces.

All floats are written with repr-faithful precision ('%.17g') and without
timestamps, so identical runs produce byte-identical files.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .direct import FarFieldPattern

_FMT = "%.17g"

FARFIELD_COLUMNS = "obs_angle,re_e,im_e,re_h,im_h"
_META_KEYS = ("omega", "theta", "phi", "delta1", "delta2", "seed", "n")


def _fmt(value):
    return _FMT % value


def write_farfield(path, pattern: FarFieldPattern, meta):
    """Write one far-field pattern; ``meta`` must carry the run parameters
    (omega, theta, phi, delta1, delta2, seed, n)."""
    missing = [key for key in _META_KEYS if key not in meta]
    if missing:
        raise ValueError(f"missing far-field metadata: {missing}")
    lines = ["# cylbie far-field data"]
    for key in _META_KEYS:
        lines.append(f"# {key}={_fmt(meta[key])}")
    lines.append(FARFIELD_COLUMNS)
    for angle, e, h in zip(pattern.obs_angles, pattern.e_inf, pattern.h_inf):
        lines.append(",".join(_fmt(v) for v in (angle, e.real, e.imag, h.real, h.imag)))
    Path(path).write_text("\n".join(lines) + "\n")


def read_farfield(path):
    """Read a far-field file back into (pattern, meta)."""
    meta = {}
    rows = []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line.lstrip("#").strip()
            if "=" in body:
                key, _, value = body.partition("=")
                meta[key.strip()] = float(value)
            continue
        if line == FARFIELD_COLUMNS:
            continue
        rows.append([float(v) for v in line.split(",")])
    if not rows:
        raise ValueError(f"no far-field samples found in {path}")
    data = np.asarray(rows)
    missing = [key for key in _META_KEYS if key not in meta]
    if missing:
        raise ValueError(f"far-field file {path} lacks metadata: {missing}")
    pattern = FarFieldPattern(
        obs_angles=data[:, 0],
        e_inf=data[:, 1] + 1j * data[:, 2],
        h_inf=data[:, 3] + 1j * data[:, 4],
    )
    return pattern, meta


def write_curve(path, curve):
    """Boundary samples as rows (t, r, x, y, nx, ny)."""
    lines = ["t,r,x,y,nx,ny"]
    for j in range(curve.t.size):
        lines.append(
            ",".join(
                _fmt(v)
                for v in (
                    curve.t[j],
                    curve.r[j],
                    curve.z[j, 0],
                    curve.z[j, 1],
                    curve.normal[j, 0],
                    curve.normal[j, 1],
                )
            )
        )
    Path(path).write_text("\n".join(lines) + "\n")


def write_trace(path, records, t):
    """Per-iteration radial curves as rows (iteration, t, r)."""
    lines = ["iteration,t,r"]
    for rec in records:
        values = rec.radial(t)
        for tj, rj in zip(t, values):
            lines.append(f"{rec.k:d}," + _fmt(tj) + "," + _fmt(rj))
    Path(path).write_text("\n".join(lines) + "\n")


def write_summary(path, summary):
    Path(path).write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")

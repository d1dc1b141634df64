"""CSV point data for the classical-bit triangle and the qubit ball."""

import csv
import io
import math

import numpy as np

from .classical import ClassicalModel, extreme_points
from .errors import DomainError
from .quantum import QuantumModel, random_density_matrix

TRIANGLE_HEADER = ["kind", "p1", "p2", "valid"]
BALL_HEADER = ["kind", "p_x+", "p_y+", "p_z+", "pure"]


def triangle_rows(resolution):
    """Vertices of the classical-bit state set, then a grid over the unit square."""
    model = ClassicalModel(2)
    rows = [("vertex", float(p[0]), float(p[1]), 1) for p in extreme_points(2)]
    grid = np.linspace(0.0, 1.0, resolution)
    for a in grid:
        for b in grid:
            rows.append(("grid", float(a), float(b), int(model.contains_state([a, b]))))
    return rows


def ball_rows(resolution, seed=0):
    """Pure qubit states on a polar mesh, then as many random mixed states."""
    model = QuantumModel(2)
    rows = []
    for theta in np.linspace(0.0, math.pi, resolution):
        for phi in np.linspace(0.0, 2.0 * math.pi, resolution, endpoint=False):
            ket = np.array([math.cos(theta / 2), np.exp(1j * phi) * math.sin(theta / 2)])
            p = model.p(np.outer(ket, ket.conj()))
            rows.append(("mesh", float(p[2]), float(p[3]), float(p[0]), int(model.is_pure(p))))
    rng = np.random.default_rng(seed)
    for _ in range(resolution * resolution):
        p = model.p(random_density_matrix(2, rng))
        rows.append(("interior", float(p[2]), float(p[3]), float(p[0]), int(model.is_pure(p))))
    return rows


def figure_csv(which, resolution, seed=0):
    if resolution < 2:
        raise DomainError("resolution must be at least 2")
    if which == "triangle":
        header, rows = TRIANGLE_HEADER, triangle_rows(resolution)
    elif which == "ball":
        header, rows = BALL_HEADER, ball_rows(resolution, seed)
    else:
        raise DomainError(f"unknown figure {which!r}; expected 'triangle' or 'ball'")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(x) if isinstance(x, float) else x for x in row])
    return buf.getvalue()


def emit_figure_data(which, resolution, out, seed=0):
    """Write the figure CSV to ``out`` and return the path."""
    text = figure_csv(which, resolution, seed)
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return out

"""Renderers for the reverse-annealing CSV schemas.

Five figure kinds: phase-diagram heatmaps with black transition segments,
landscape contours with a cutoff whiteout, reduced-landscape waterfalls
(each curve shifted so its minimum is zero, colored blue to red along the
path), trajectory panels with an optional control-path inset, and final-
error sweeps on a log axis.

Rendering is deterministic: the Agg backend, fixed DPI and fonts, a pinned
SVG hash salt, and no date metadata, so identical inputs give identical
bytes at a fixed matplotlib version.  Images are written through a
temporary file, so failures never leave a partial image.
"""

from __future__ import annotations

import os
import tempfile
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

plt.rcParams.update({
    "figure.dpi": 130,
    "savefig.dpi": 130,
    "font.family": "DejaVu Sans",
    "svg.hashsalt": "araplot",
})

KINDS = ("heatmap", "contour", "waterfall", "trajectory", "delta-m")

_SCHEMAS = {
    "diagram": ["s", "lambda", "m"],
    "edges": ["s1", "lambda1", "s2", "lambda2"],
    "landscape": ["m_u", "m_d", "phi"],
    "reduced": ["m_d", "phi", "m_u_argmin"],
    "trajectory": ["t", "s", "lambda", "m_u", "m_d", "e"],
    "sweep": ["tau", "delta_m"],
}


class SchemaError(ValueError):
    """Input CSV does not match the declared schema."""


@dataclass(frozen=True)
class FigureSpec:
    """What to draw: kind, inputs, presentation options, output path."""

    kind: str
    inputs: tuple[str, ...]
    output: str
    diagram: str | None = None          # trajectory inset background
    edges: str | None = None            # transition overlay (heatmap/inset)
    cutoff: float | None = None         # contour whiteout level
    colormap: str = "viridis"
    labels: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SchemaError(f"unknown figure kind {self.kind!r}")
        if not self.inputs:
            raise SchemaError("at least one input CSV required")
        for path in self.inputs + tuple(p for p in (self.diagram, self.edges) if p):
            if not os.path.exists(path):
                raise SchemaError(f"input file not found: {path}")


def _load(path: str, schema: str) -> np.ndarray:
    expected = _SCHEMAS[schema]
    with open(path) as fh:
        header = fh.readline().strip().split(",")
    if [h.strip() for h in header[:len(expected)]] != expected:
        raise SchemaError(
            f"{path}: expected columns {','.join(expected)}, found {','.join(header)}")
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    if data.size == 0:
        return np.empty((0, len(expected)))
    if data.shape[1] < len(expected):
        raise SchemaError(f"{path}: too few columns for schema {schema}")
    return data


def _to_grid(data: np.ndarray):
    x = np.unique(data[:, 0])
    y = np.unique(data[:, 1])
    grid = np.full((len(y), len(x)), np.nan)
    xi = np.searchsorted(x, data[:, 0])
    yi = np.searchsorted(y, data[:, 1])
    grid[yi, xi] = data[:, 2]
    if np.isnan(grid).any():
        raise SchemaError("grid CSV does not cover a full cartesian product")
    return x, y, grid


def _save(fig, output: str) -> None:
    directory = os.path.dirname(os.path.abspath(output)) or "."
    os.makedirs(directory, exist_ok=True)
    ext = os.path.splitext(output)[1].lstrip(".").lower() or "png"
    if ext not in ("png", "svg"):
        raise SchemaError(f"unsupported image format {ext!r} (png or svg)")
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", suffix=f".{ext}", dir=directory)
    os.close(fd)
    try:
        fig.savefig(tmp, format=ext, metadata={"Date": None} if ext == "svg" else None)
        os.replace(tmp, output)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    finally:
        plt.close(fig)


def _draw_edges(ax, edges_path: str | None, lw: float = 1.6) -> None:
    if not edges_path:
        return
    data = _load(edges_path, "edges")
    for s1, l1, s2, l2 in data:
        ax.plot([s1, s2], [l1, l2], color="black", lw=lw, solid_capstyle="round")


def render(spec: FigureSpec) -> str:
    """Render the figure and return the output path."""
    fig = _FIGURES[spec.kind](spec)
    _save(fig, spec.output)
    return spec.output


def _heatmap(spec: FigureSpec):
    s, lam, m = _to_grid(_load(spec.inputs[0], "diagram"))
    fig, ax = plt.subplots(figsize=(5.2, 4.2))
    mesh = ax.pcolormesh(s, lam, m, cmap=spec.colormap, vmin=-1.0, vmax=1.0,
                         shading="nearest")
    fig.colorbar(mesh, ax=ax, label=spec.labels.get("cbar", "m"))
    edges = spec.edges or (spec.inputs[1] if len(spec.inputs) > 1 else None)
    _draw_edges(ax, edges)
    ax.set_xlabel(spec.labels.get("x", "s"))
    ax.set_ylabel(spec.labels.get("y", "lambda"))
    ax.set_xlim(s.min(), s.max())
    ax.set_ylim(lam.min(), lam.max())
    return fig


def _contour(spec: FigureSpec):
    mu, md, phi = _to_grid(_load(spec.inputs[0], "landscape"))
    # _to_grid returns [i_md, i_mu]; plot m_u on x, m_d on y
    fig, ax = plt.subplots(figsize=(5.2, 4.2))
    masked = phi
    if spec.cutoff is not None:
        masked = np.ma.masked_greater(phi, spec.cutoff)
    levels = 24
    cs = ax.contourf(mu, md, masked, levels=levels, cmap=spec.colormap)
    fig.colorbar(cs, ax=ax, label=spec.labels.get("cbar", "phi"))
    ax.set_facecolor("white")
    ax.set_xlabel(spec.labels.get("x", "m_u"))
    ax.set_ylabel(spec.labels.get("y", "m_d"))
    return fig


def _waterfall(spec: FigureSpec):
    fig, ax = plt.subplots(figsize=(5.2, 4.2))
    n = len(spec.inputs)
    for k, path in enumerate(spec.inputs):
        data = _load(path, "reduced")
        frac = k / max(n - 1, 1)
        color = (frac, 0.15, 1.0 - frac)  # blue to red along the path
        ax.plot(data[:, 0], data[:, 1] - data[:, 1].min(), color=color, lw=1.4)
    ax.set_xlabel(spec.labels.get("x", "m_d"))
    ax.set_ylabel(spec.labels.get("y", "phi - min phi"))
    return fig


def _trajectory(spec: FigureSpec):
    fig, ax = plt.subplots(figsize=(5.6, 4.2))
    n = len(spec.inputs)
    last = None
    for k, path in enumerate(spec.inputs):
        data = _load(path, "trajectory")
        frac = k / max(n - 1, 1)
        color = plt.get_cmap(spec.colormap)(0.15 + 0.7 * frac)
        ax.plot(data[:, 0], data[:, 4], color=color, lw=1.2,
                label=f"tau={data[-1, 0]:g}")
        last = data
    ax.set_xlabel(spec.labels.get("x", "t"))
    ax.set_ylabel(spec.labels.get("y", "m_d"))
    ax.legend(loc="best", fontsize=8)
    if spec.diagram and last is not None:
        inset = ax.inset_axes([0.62, 0.08, 0.34, 0.34])
        s, lam, m = _to_grid(_load(spec.diagram, "diagram"))
        inset.pcolormesh(s, lam, m, cmap=spec.colormap, vmin=-1.0, vmax=1.0,
                         shading="nearest")
        _draw_edges(inset, spec.edges, lw=1.0)
        inset.plot(last[:, 1], last[:, 2], color="limegreen", lw=1.6)
        inset.set_xticks([])
        inset.set_yticks([])
    return fig


def _delta_m(spec: FigureSpec):
    fig, ax = plt.subplots(figsize=(5.2, 4.2))
    markers = ("o", "s", "^", "d")
    for k, path in enumerate(spec.inputs):
        data = _load(path, "sweep")
        label = spec.labels.get(f"series{k}", os.path.splitext(os.path.basename(path))[0])
        ax.semilogy(data[:, 0], np.abs(data[:, 1]), marker=markers[k % 4],
                    lw=1.2, label=label)
    ax.set_xlabel(spec.labels.get("x", "tau"))
    ax.set_ylabel(spec.labels.get("y", "|delta_m|"))
    ax.legend(loc="best", fontsize=8)
    return fig


_FIGURES = {
    "heatmap": _heatmap,
    "contour": _contour,
    "waterfall": _waterfall,
    "trajectory": _trajectory,
    "delta-m": _delta_m,
}

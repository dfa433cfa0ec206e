"""Equilibrium scans of the (s, lambda) control plane and path feasibility.

For every point of a uniform grid over [0, 1]^2 the landscape's global
minimum is located and the total magnetization m = m_u* + m_d* recorded.
Discontinuous transitions are flagged with the pixel-jump rule: an edge
between horizontally or vertically adjacent grid cells is marked when |dm|
exceeds the threshold (default 0.05).  Paths are rasterized onto the pixel
grid with an exact traversal, so feasibility means "crosses no marked edge".

Global minima are found per cell from a fixed candidate set: the argmin of a
coarse dense grid, the three canonical wells near (1-x, x), (1-x, -x) and
(0, 0), and the neighboring cell's minimum (one sweep in each direction along
the row), each refined by coordinate golden-section descent.  Rows are
independent, so scans may fan out row-parallel; results merge by row index
and are bit-for-bit reproducible.
"""

from __future__ import annotations

import math
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .landscape import LandscapeKind, _phi_arrays, descend_vec
from .model import AnnealPath, DomainError, ModelParams, LINEAR_SQRT

DEFAULT_THRESHOLD = 0.05


@dataclass(frozen=True)
class PhaseDiagram:
    """Scan result; m_grid is indexed [lambda index, s index]."""

    params: ModelParams
    kind: LandscapeKind
    resolution: int
    threshold: float
    s_values: np.ndarray
    lam_values: np.ndarray
    m_grid: np.ndarray
    trans_h: np.ndarray  # (res, res-1): edge between s-neighbors (i, i+1) at row j
    trans_v: np.ndarray  # (res-1, res): edge between lambda-neighbors (j, j+1) at column i

    @staticmethod
    def from_m_grid(params: ModelParams, kind: LandscapeKind, m_grid: np.ndarray,
                    threshold: float = DEFAULT_THRESHOLD) -> "PhaseDiagram":
        res = m_grid.shape[0]
        if m_grid.shape != (res, res):
            raise DomainError("m_grid must be square")
        axis = np.linspace(0.0, 1.0, res)
        trans_h = np.abs(np.diff(m_grid, axis=1)) > threshold
        trans_v = np.abs(np.diff(m_grid, axis=0)) > threshold
        return PhaseDiagram(params=params, kind=kind, resolution=res,
                            threshold=threshold, s_values=axis, lam_values=axis,
                            m_grid=m_grid, trans_h=trans_h, trans_v=trans_v)

    def edge_list(self) -> list[tuple[float, float, float, float]]:
        """Marked edges as (s1, lambda1, s2, lambda2), horizontal ones first."""
        edges = []
        sj, lj = self.s_values, self.lam_values
        for j, i in zip(*np.nonzero(self.trans_h)):
            edges.append((float(sj[i]), float(lj[j]), float(sj[i + 1]), float(lj[j])))
        for j, i in zip(*np.nonzero(self.trans_v)):
            edges.append((float(sj[i]), float(lj[j]), float(sj[i]), float(lj[j + 1])))
        return edges


def _lex_better(val_a, mu_a, md_a, val_b, mu_b, md_b):
    return (val_a < val_b) | ((val_a == val_b)
                              & ((mu_a < mu_b)
                                 | ((mu_a == mu_b) & (md_a < md_b))))


def _scan_rows(params: ModelParams, kind: LandscapeKind, s_values: np.ndarray,
               lam_values: np.ndarray, coarse_n: int) -> np.ndarray:
    """Global-minimum magnetization over all (row, column) cells of a block.

    Every cell of the block is one vector lane: coarse-grid / canonical seeds
    are refined by coordinate descent lane-parallel, then two hot-start
    sweeps reseed each cell from its row neighbor's converged minimum.
    """
    w = params.m_u_max
    xx = params.m_d_max
    res = len(s_values)
    nrows = len(lam_values)
    bounds = (-w, w, -xx, xx)
    S = np.broadcast_to(s_values[None, :], (nrows, res)).ravel()
    L = np.broadcast_to(lam_values[:, None], (nrows, res)).ravel()

    def phi(idx, mu, md):
        return _phi_arrays(params, kind, S[idx], L[idx], mu, md)

    # coarse-grid seed, chunked over lanes to bound memory
    mu_c = np.linspace(-w, w, coarse_n)
    md_c = np.linspace(-xx, xx, coarse_n)
    n_lane = nrows * res
    seed_mu = np.empty(n_lane)
    seed_md = np.empty(n_lane)
    chunk = max(1, 2_000_000 // (coarse_n * coarse_n))
    for k0 in range(0, n_lane, chunk):
        k1 = min(k0 + chunk, n_lane)
        block = _phi_arrays(params, kind, S[k0:k1, None, None], L[k0:k1, None, None],
                            mu_c[None, :, None], md_c[None, None, :])
        flat = block.reshape(k1 - k0, -1).argmin(axis=1)
        seed_mu[k0:k1] = mu_c[flat // coarse_n]
        seed_md[k0:k1] = md_c[flat % coarse_n]

    seeds = [(seed_mu, seed_md)]
    for cu, cd in ((w, xx), (w, -xx), (0.0, 0.0)):
        seeds.append((np.full(n_lane, cu), np.full(n_lane, cd)))

    r_u = 2.0 * w / (coarse_n - 1)
    r_d = 2.0 * xx / (coarse_n - 1)
    best_mu = best_md = best_val = None
    for su, sd in seeds:
        mu, md, val = descend_vec(phi, su, sd, bounds, r_u, r_d, max_sweeps=60)
        if best_val is None:
            best_mu, best_md, best_val = mu, md, val
        else:
            take = _lex_better(val, mu, md, best_val, best_mu, best_md)
            best_mu = np.where(take, mu, best_mu)
            best_md = np.where(take, md, best_md)
            best_val = np.where(take, val, best_val)

    # hot-start sweeps: seed each cell from its row neighbor's minimum
    for shift in (1, -1):
        su = np.roll(best_mu.reshape(nrows, res), shift, axis=1)
        sd = np.roll(best_md.reshape(nrows, res), shift, axis=1)
        edge = 0 if shift == 1 else res - 1
        su[:, edge] = best_mu.reshape(nrows, res)[:, edge]
        sd[:, edge] = best_md.reshape(nrows, res)[:, edge]
        mu, md, val = descend_vec(phi, su.ravel(), sd.ravel(), bounds,
                                  r_u, r_d, max_sweeps=60)
        take = _lex_better(val, mu, md, best_val, best_mu, best_md)
        best_mu = np.where(take, mu, best_mu)
        best_md = np.where(take, md, best_md)
        best_val = np.where(take, val, best_val)

    return (best_mu + best_md).reshape(nrows, res)


def scan_phase_diagram(params: ModelParams, kind: LandscapeKind, resolution: int,
                       threshold: float = DEFAULT_THRESHOLD, threads: int = 1,
                       coarse_n: int = 41) -> PhaseDiagram:
    """Scan the unit control square and flag discontinuous transitions."""
    if resolution < 11:
        raise DomainError("resolution must be >= 11")
    axis = np.linspace(0.0, 1.0, resolution)
    if threads > 1:
        blocks = np.array_split(np.arange(resolution), min(threads, resolution))
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(
                lambda jj: _scan_rows(params, kind, axis, axis[jj], coarse_n),
                blocks))
        m_grid = np.vstack(rows)
    else:
        m_grid = _scan_rows(params, kind, axis, axis, coarse_n)
    return PhaseDiagram.from_m_grid(params, kind, m_grid, threshold)


# ---------------------------------------------------------------------------
# exact pixel traversal

def _pixel(u: float) -> int:
    return int(math.floor(u + 0.5))


def _segment_edges(res: int, p0, p1, trans_h, trans_v, collect: bool):
    """Edges crossed by the straight segment p0 -> p1 (unit-square coords).

    Returns the number of marked edges crossed and, when `collect`, the list
    of crossed marked edges as ((s1, l1), (s2, l2)) grid coordinates.  Exact
    corner hits step horizontally first, then vertically.
    """
    scale = res - 1
    x0, y0 = p0[0] * scale, p0[1] * scale
    x1, y1 = p1[0] * scale, p1[1] * scale
    i, j = _pixel(x0), _pixel(y0)
    i_end, j_end = _pixel(x1), _pixel(y1)
    dx, dy = x1 - x0, y1 - y0
    step_i = 1 if dx > 0 else -1
    step_j = 1 if dy > 0 else -1
    t_x = ((i + 0.5 * step_i) - x0) / dx if dx != 0.0 else math.inf
    t_y = ((j + 0.5 * step_j) - y0) / dy if dy != 0.0 else math.inf
    blocked = 0
    hits = [] if collect else None
    h = 1.0 / scale

    def cross_h():
        nonlocal i, t_x, blocked
        lo = min(i, i + step_i)
        if trans_h[j, lo]:
            blocked += 1
            if collect:
                hits.append(((lo * h, j * h), ((lo + 1) * h, j * h)))
        i += step_i
        t_x = ((i + 0.5 * step_i) - x0) / dx

    def cross_v():
        nonlocal j, t_y, blocked
        lo = min(j, j + step_j)
        if trans_v[lo, i]:
            blocked += 1
            if collect:
                hits.append(((i * h, lo * h), (i * h, (lo + 1) * h)))
        j += step_j
        t_y = ((j + 0.5 * step_j) - y0) / dy

    guard = 4 * res + 8
    while (i, j) != (i_end, j_end):
        guard -= 1
        if guard < 0:
            raise RuntimeError("pixel traversal failed to terminate")
        if t_x < t_y - 1e-15:
            cross_h()
        elif t_y < t_x - 1e-15:
            cross_v()
        else:
            cross_h()
            cross_v()
    return blocked, hits


def _path_polyline(path: AnnealPath, res: int) -> list[tuple[float, float]]:
    if path.kind == LINEAR_SQRT:
        k = np.arange(4 * res + 1, dtype=float) / (4 * res)
        u = k * k
        return list(zip(u.tolist(), np.sqrt(u).tolist()))
    return list(path.waypoints)


def path_is_feasible(diagram: PhaseDiagram, path: AnnealPath):
    """Whether the path crosses no marked transition edge.

    Returns (feasible, crossings); crossings lists the marked grid edges the
    rasterized path crosses, as ((s1, l1), (s2, l2)) pairs.
    """
    pts = _path_polyline(path, diagram.resolution)
    for s, lam in pts:
        if not (-1e-12 <= s <= 1.0 + 1e-12 and -1e-12 <= lam <= 1.0 + 1e-12):
            raise DomainError(f"path point ({s}, {lam}) outside the unit square")
    crossings = []
    for a, b in zip(pts[:-1], pts[1:]):
        if a == b:
            continue
        _, hits = _segment_edges(diagram.resolution, a, b,
                                 diagram.trans_h, diagram.trans_v, collect=True)
        crossings.extend(hits)
    return len(crossings) == 0, crossings


# ---------------------------------------------------------------------------
# candidate-path searches

def feasible_constant_lambdas(diagram: PhaseDiagram) -> np.ndarray:
    """Boolean mask over grid rows: constant-lambda line s=0 -> s=1 feasible."""
    return ~diagram.trans_h.any(axis=1)


def search_three_stage(diagram: PhaseDiagram):
    """First feasible three-stage path (0,0)->(s1,L)->(s2,L)->(1,0) on the grid.

    Waypoints run over all grid values with s1 <= s2; returns the path or
    None when the whole family is blocked.  Search order is deterministic:
    ascending lambda row, then ascending s1, then the smallest workable s2.
    """
    res = diagram.resolution
    axis = diagram.s_values
    th, tv = diagram.trans_h, diagram.trans_v
    for j in range(res):
        lam = float(axis[j])
        first_ok = np.array([
            _segment_edges(res, (0.0, 0.0), (float(axis[a]), lam), th, tv, False)[0] == 0
            if (a, j) != (0, 0) else True
            for a in range(res)])
        if not first_ok.any():
            continue
        third_ok = np.array([
            _segment_edges(res, (float(axis[b]), lam), (1.0, 0.0), th, tv, False)[0] == 0
            if (b, j) != (res - 1, 0) else True
            for b in range(res)])
        if not third_ok.any():
            continue
        # reach[a]: largest column connected to a through unmarked row edges
        reach = np.empty(res, dtype=int)
        r = res - 1
        for a in range(res - 1, -1, -1):
            reach[a] = r
            if a > 0 and th[j, a - 1]:
                r = a - 1
        for a in np.nonzero(first_ok)[0]:
            hi = reach[a]
            window = np.nonzero(third_ok[a:hi + 1])[0]
            if window.size:
                b = int(a + window[0])
                return AnnealPath.piecewise(
                    [(0.0, 0.0), (float(axis[a]), lam), (float(axis[b]), lam), (1.0, 0.0)],
                    tau=1.0)
    return None


def has_pixel_path(diagram: PhaseDiagram) -> bool:
    """Whether any 4-connected pixel path joins the s=0 and s=1 columns."""
    res = diagram.resolution
    seen = np.zeros((res, res), dtype=bool)
    queue = deque((j, 0) for j in range(res))
    seen[:, 0] = True
    while queue:
        j, i = queue.popleft()
        if i == res - 1:
            return True
        if i + 1 < res and not diagram.trans_h[j, i] and not seen[j, i + 1]:
            seen[j, i + 1] = True
            queue.append((j, i + 1))
        if i > 0 and not diagram.trans_h[j, i - 1] and not seen[j, i - 1]:
            seen[j, i - 1] = True
            queue.append((j, i - 1))
        if j + 1 < res and not diagram.trans_v[j, i] and not seen[j + 1, i]:
            seen[j + 1, i] = True
            queue.append((j + 1, i))
        if j > 0 and not diagram.trans_v[j - 1, i] and not seen[j - 1, i]:
            seen[j - 1, i] = True
            queue.append((j - 1, i))
    return False

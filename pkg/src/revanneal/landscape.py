"""Static actions and free-energy landscapes of the reverse-annealing model.

Two closed-form landscapes over the order-parameter box
|m_u| <= 1-x, |m_d| <= x are provided:

  quantum (zero temperature, transverse field G = (1-s)*lambda):
      Phi = -s (m_u+m_d)^p - s a (m_u-m_d)^p - (1-s)(1-lambda)(m_u-m_d)
            - G sqrt((1-x)^2 - m_u^2) - G sqrt(x^2 - m_d^2)

  thermal (zero field, temperature T = (1-s)*lambda, constant dropped):
      Phi = [same polynomial and longitudinal terms]
            + T [ (1-x+m_u)/2 log(1-x+m_u) + (1-x-m_u)/2 log(1-x-m_u)
                + (x+m_d)/2 log(x+m_d)     + (x-m_d)/2 log(x-m_d) ]

with the convention 0*log(0) = 0 on the boundary.  Both reduce to the bare
energy density at s = 1.  The four-argument actions (before eliminating the
conjugate fields h_u, h_d) are also exposed, along with the analytic field
solutions, a reduced one-dimensional landscape Phi'(m_d) = min over m_u, and
a deterministic global/local minimizer (dense grid seeding plus
coordinate-wise golden-section descent).

All evaluators are pure and accept numpy arrays elementwise, so grids can be
evaluated concurrently with no shared state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import (
    DomainError,
    FieldPair,
    ModelParams,
    OrderParams,
    SchedulePoint,
    SingularFieldError,
)

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class LandscapeKind:
    """Which landscape to evaluate; beta only applies to the finite-T action."""

    name: str
    beta: float | None = None

    def __post_init__(self):
        if self.name not in ("ara-zero-t", "sra-thermal", "finite-t-static"):
            raise DomainError(f"unknown landscape kind {self.name!r}")
        if self.name == "finite-t-static":
            if self.beta is None or not self.beta > 0.0:
                raise DomainError("finite-t-static requires beta > 0")
        elif self.beta is not None:
            raise DomainError(f"kind {self.name!r} takes no beta")


ARA_ZERO_T = LandscapeKind("ara-zero-t")
SRA_THERMAL = LandscapeKind("sra-thermal")


def finite_t_static(beta: float) -> LandscapeKind:
    return LandscapeKind("finite-t-static", beta)


@dataclass(frozen=True)
class MinimizationResult:
    """Global minimum of a landscape plus every refined local minimum."""

    m_star: OrderParams
    value: float
    local_minima: list  # [(OrderParams, value)] sorted by (value, m_u, m_d)


# ---------------------------------------------------------------------------
# stable elementary pieces

def _log2cosh_over_beta(r, beta):
    """(1/beta) * log(2 cosh(beta r)) for r >= 0, without overflow."""
    r = np.asarray(r, dtype=float)
    return r + np.log1p(np.exp(-2.0 * beta * r)) / beta


def _xlogy(a, b):
    """a * log(b) with the boundary convention 0 * log(0) = 0 (a, b >= 0)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    safe = np.where(a > 0.0, b, 1.0)
    return np.where(a > 0.0, a * np.log(safe), 0.0)


def _poly_terms(params: ModelParams, s, m_u, m_d):
    p = params.p
    return -s * (m_u + m_d) ** p - s * params.alpha * (m_u - m_d) ** p


# ---------------------------------------------------------------------------
# four-argument actions

def static_action_finite_t(params: ModelParams, point: SchedulePoint,
                           m: OrderParams, h: FieldPair, beta: float) -> float:
    """Finite-temperature action with the transverse field inside the roots."""
    if not beta > 0.0:
        raise DomainError(f"beta must be > 0, got {beta!r}")
    s, lam = point.s, point.lam
    g = (1.0 - s) * lam
    base = (_poly_terms(params, s, m.m_u, m.m_d)
            - (1.0 - s) * (1.0 - lam) * (m.m_u - m.m_d)
            + h.h_u * m.m_u + h.h_d * m.m_d)
    ru = math.hypot(h.h_u, g)
    rd = math.hypot(h.h_d, g)
    w = 1.0 - params.x
    return float(base
                 - w * _log2cosh_over_beta(ru, beta)
                 - params.x * _log2cosh_over_beta(rd, beta))


def static_action_zero_t(params: ModelParams, point: SchedulePoint,
                         m: OrderParams, h: FieldPair) -> float:
    """Zero-temperature limit of the finite-T action."""
    s, lam = point.s, point.lam
    g = (1.0 - s) * lam
    base = (_poly_terms(params, s, m.m_u, m.m_d)
            - (1.0 - s) * (1.0 - lam) * (m.m_u - m.m_d)
            + h.h_u * m.m_u + h.h_d * m.m_d)
    w = 1.0 - params.x
    return float(base - w * math.hypot(h.h_u, g) - params.x * math.hypot(h.h_d, g))


def static_action_thermal(params: ModelParams, point: SchedulePoint,
                          m: OrderParams, h: FieldPair) -> float:
    """Zero-field action at temperature T = (1-s)*lambda (T = 0 limit included)."""
    s, lam = point.s, point.lam
    t_eff = (1.0 - s) * lam
    base = (_poly_terms(params, s, m.m_u, m.m_d)
            - (1.0 - s) * (1.0 - lam) * (m.m_u - m.m_d)
            + h.h_u * m.m_u + h.h_d * m.m_d)
    w = 1.0 - params.x
    if t_eff == 0.0:
        return float(base - w * abs(h.h_u) - params.x * abs(h.h_d))
    return float(base
                 - w * t_eff * float(_log2cosh_over_beta(abs(h.h_u) / t_eff, 1.0))
                 - params.x * t_eff * float(_log2cosh_over_beta(abs(h.h_d) / t_eff, 1.0)))


# ---------------------------------------------------------------------------
# analytic field solutions

def solve_fields(params: ModelParams, point: SchedulePoint,
                 m: OrderParams, kind: LandscapeKind) -> FieldPair:
    """Fields that make the action stationary at fixed (m_u, m_d).

    Quantum: h = G m / sqrt(w^2 - m^2); thermal: h = (T/2) log((w+m)/(w-m)),
    per sublattice with w = 1-x or x.  Requires strictly interior m.
    """
    w = params.m_u_max
    xx = params.m_d_max
    if not (abs(m.m_u) < w and abs(m.m_d) < xx):
        raise SingularFieldError(
            f"fields diverge on the boundary: m={m!r}, limits=({w}, {xx})")
    g = (1.0 - point.s) * point.lam
    if kind.name == "ara-zero-t":
        return FieldPair(g * m.m_u / math.sqrt(w * w - m.m_u * m.m_u),
                         g * m.m_d / math.sqrt(xx * xx - m.m_d * m.m_d))
    if kind.name == "sra-thermal":
        return FieldPair(0.5 * g * math.log((w + m.m_u) / (w - m.m_u)),
                         0.5 * g * math.log((xx + m.m_d) / (xx - m.m_d)))
    raise DomainError("no closed-form field solution for the finite-T static kind")


# ---------------------------------------------------------------------------
# landscapes over (m_u, m_d)

def _phi_arrays(params: ModelParams, kind: LandscapeKind, s, lam, m_u, m_d):
    """Elementwise landscape value; inputs broadcast, domain assumed valid."""
    s = np.asarray(s, dtype=float)
    lam = np.asarray(lam, dtype=float)
    m_u = np.asarray(m_u, dtype=float)
    m_d = np.asarray(m_d, dtype=float)
    w = params.m_u_max
    xx = params.m_d_max
    g = (1.0 - s) * lam
    base = (_poly_terms(params, s, m_u, m_d)
            - (1.0 - s) * (1.0 - lam) * (m_u - m_d))
    if kind.name == "ara-zero-t":
        return base - g * (np.sqrt(np.maximum(w * w - m_u * m_u, 0.0))
                           + np.sqrt(np.maximum(xx * xx - m_d * m_d, 0.0)))
    if kind.name == "sra-thermal":
        au, bu = np.maximum(w + m_u, 0.0), np.maximum(w - m_u, 0.0)
        ad, bd = np.maximum(xx + m_d, 0.0), np.maximum(xx - m_d, 0.0)
        entropy = 0.5 * (_xlogy(au, au) + _xlogy(bu, bu)
                         + _xlogy(ad, ad) + _xlogy(bd, bd))
        return base + g * entropy
    raise DomainError("landscape_value supports the quantum and thermal kinds only")


def landscape_value(params: ModelParams, point: SchedulePoint,
                    m: OrderParams, kind: LandscapeKind) -> float:
    """Landscape at a single point of the closed order-parameter box."""
    if not m.in_domain(params, tol=1e-12):
        raise DomainError(f"order parameters {m!r} outside the domain")
    return float(_phi_arrays(params, kind, point.s, point.lam, m.m_u, m.m_d))


def landscape_grid(params: ModelParams, point: SchedulePoint,
                   kind: LandscapeKind, n: int = 401):
    """Dense landscape grid; returns (m_u values, m_d values, Phi[i_u, i_d])."""
    if n < 2:
        raise DomainError("grid needs n >= 2")
    mu = np.linspace(-params.m_u_max, params.m_u_max, n)
    md = np.linspace(-params.m_d_max, params.m_d_max, n)
    phi = _phi_arrays(params, kind, point.s, point.lam, mu[:, None], md[None, :])
    return mu, md, phi


# ---------------------------------------------------------------------------
# vectorized golden-section machinery

def golden_min_vec(f, a, b, tol: float, width0: float | None = None):
    """Minimize f lane-wise over brackets [a, b] to bracket width tol.

    f maps an array of positions to an array of values; the iteration count is
    fixed from `width0` (default: the widest bracket), so every call is
    deterministic and independent of how lanes are batched.
    Returns (x, f(x)) at the best evaluated interior point per lane.
    """
    a = np.asarray(a, dtype=float).copy()
    b = np.asarray(b, dtype=float).copy()
    width = float(np.max(b - a)) if a.size else 0.0
    if width0 is not None:
        width = max(width, width0)
    x1 = b - _INVPHI * (b - a)
    x2 = a + _INVPHI * (b - a)
    f1 = f(x1)
    f2 = f(x2)
    if width > tol:
        n_iter = int(math.ceil(math.log(tol / width) / math.log(_INVPHI)))
        for _ in range(n_iter):
            take = f1 < f2
            b = np.where(take, x2, b)
            a = np.where(take, a, x1)
            span = b - a
            x1_new = np.where(take, b - _INVPHI * span, x2)
            x2_new = np.where(take, x1, a + _INVPHI * span)
            xq = np.where(take, x1_new, x2_new)
            fq = f(xq)
            f1, f2 = np.where(take, fq, f2), np.where(take, f1, fq)
            x1, x2 = x1_new, x2_new
    best1 = f1 <= f2
    return np.where(best1, x1, x2), np.where(best1, f1, f2)


def descend_vec(phi_idx, m_u, m_d, bounds, r_u0: float, r_d0: float,
                step_tol: float = 1e-10, bracket_tol: float = 1e-12,
                max_sweeps: int = 200):
    """Coordinate-wise golden-section descent, vectorized over lanes.

    phi_idx(idx, m_u, m_d) -> values for the lane subset `idx`.  Brackets are
    trust regions of radius r around the current point, clipped to `bounds`;
    a radius doubles whenever the lane's argmin hugs an interior bracket edge
    (the lane is still walking downhill).  A lane is done once it moves less
    than step_tol in a sweep; finished lanes are dropped from the working
    set, which does not change their result.
    """
    mu_lo, mu_hi, md_lo, md_hi = bounds
    m_u = np.asarray(m_u, dtype=float).copy()
    m_d = np.asarray(m_d, dtype=float).copy()
    n = m_u.size
    r_u = np.full(n, r_u0)
    r_d = np.full(n, r_d0)
    w_u = mu_hi - mu_lo
    w_d = md_hi - md_lo
    edge = 4.0 * bracket_tol
    active = np.arange(n)
    for _ in range(max_sweeps):
        mu = m_u[active]
        md = m_d[active]
        ru = r_u[active]
        rd = r_d[active]

        a = np.maximum(mu - ru, mu_lo)
        b = np.minimum(mu + ru, mu_hi)
        mu_new, _ = golden_min_vec(lambda u: phi_idx(active, u, md),
                                   a, b, bracket_tol, width0=w_u)
        grew_u = (((mu_new - a < edge) & (a > mu_lo + 1e-13))
                  | ((b - mu_new < edge) & (b < mu_hi - 1e-13)))

        a = np.maximum(md - rd, md_lo)
        b = np.minimum(md + rd, md_hi)
        md_new, _ = golden_min_vec(lambda d: phi_idx(active, mu_new, d),
                                   a, b, bracket_tol, width0=w_d)
        grew_d = (((md_new - a < edge) & (a > md_lo + 1e-13))
                  | ((b - md_new < edge) & (b < md_hi - 1e-13)))

        step = np.abs(mu_new - mu) + np.abs(md_new - md)
        m_u[active] = mu_new
        m_d[active] = md_new
        r_u[active] = np.where(grew_u, np.minimum(ru * 2.0, 0.5 * w_u), ru)
        r_d[active] = np.where(grew_d, np.minimum(rd * 2.0, 0.5 * w_d), rd)
        still = grew_u | grew_d | (step >= step_tol)
        active = active[still]
        if active.size == 0:
            break
    return m_u, m_d, phi_idx(np.arange(n), m_u, m_d)


# ---------------------------------------------------------------------------
# reduced landscape Phi'(m_d)

def reduced_landscape(params: ModelParams, point: SchedulePoint, m_d: float,
                      kind: LandscapeKind, n_grid: int = 2001) -> tuple[float, float]:
    """min over m_u of the landscape at fixed m_d; returns (value, argmin m_u)."""
    val, arg = reduced_landscape_profile(params, point, np.array([m_d]), kind, n_grid)
    return float(val[0]), float(arg[0])


def reduced_landscape_profile(params: ModelParams, point: SchedulePoint,
                              m_d: np.ndarray, kind: LandscapeKind,
                              n_grid: int = 2001):
    """Vectorized reduced landscape over an array of m_d values.

    Dense m_u grid scan followed by golden-section refinement of the winning
    cell to a 1e-10 bracket.  Returns (values, m_u argmins).
    """
    m_d = np.asarray(m_d, dtype=float)
    if np.any(np.abs(m_d) > params.m_d_max + 1e-12):
        raise DomainError("m_d outside its domain")
    m_d = np.clip(m_d, -params.m_d_max, params.m_d_max)
    w = params.m_u_max
    mu = np.linspace(-w, w, n_grid)
    phi = _phi_arrays(params, kind, point.s, point.lam, mu[None, :], m_d[:, None])
    idx = np.argmin(phi, axis=1)
    h = mu[1] - mu[0]
    a = np.maximum(mu[idx] - h, -w)
    b = np.minimum(mu[idx] + h, w)
    arg, val = golden_min_vec(
        lambda u: _phi_arrays(params, kind, point.s, point.lam, u, m_d), a, b, 1e-10)
    return val, arg


# ---------------------------------------------------------------------------
# global minimization

def minimize_landscape(params: ModelParams, point: SchedulePoint,
                       kind: LandscapeKind, grid_n: int = 201) -> MinimizationResult:
    """Global minimum over the closed box, with every local minimum refined.

    A grid_n x grid_n scan marks cells strictly lower than their 8 neighbors
    (the overall grid argmin is always included as a candidate); each
    candidate is refined by coordinate golden-section descent and duplicates
    merging into one basin are reported once.  Exact value ties are broken
    lexicographically on (m_u, m_d).
    """
    if grid_n < 3:
        raise DomainError("grid_n must be >= 3")
    w = params.m_u_max
    xx = params.m_d_max
    mu, md, phi = landscape_grid(params, point, kind, grid_n)
    pad = np.pad(phi, 1, constant_values=np.inf)
    mask = np.ones_like(phi, dtype=bool)
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di == 0 and dj == 0:
                continue
            mask &= phi < pad[1 + di:1 + di + grid_n, 1 + dj:1 + dj + grid_n]
    gi, gj = np.unravel_index(int(np.argmin(phi)), phi.shape)
    mask[gi, gj] = True
    iu, id_ = np.nonzero(mask)

    hu = mu[1] - mu[0]
    hd = md[1] - md[0]
    phi_fn = lambda idx, a, b: _phi_arrays(params, kind, point.s, point.lam, a, b)
    mu_r, md_r, val_r = descend_vec(phi_fn, mu[iu], md[id_],
                                    (-w, w, -xx, xx), hu, hd)

    order = np.lexsort((md_r, mu_r, val_r))
    minima: list[tuple[OrderParams, float]] = []
    for k in order:
        cand = (float(mu_r[k]), float(md_r[k]))
        if any(abs(cand[0] - q.m_u) < 1e-5 and abs(cand[1] - q.m_d) < 1e-5
               for q, _ in minima):
            continue
        minima.append((OrderParams(*cand), float(val_r[k])))
    m_star, value = minima[0]
    return MinimizationResult(m_star=m_star, value=value, local_minima=minima)

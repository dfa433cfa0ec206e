"""Core model definitions: couplings, schedules, order parameters, observables.

The target Hamiltonian is the two-pattern mean-field model

    H0 / N = -(m_u + m_d)**p - alpha * (m_u - m_d)**p,

where m_u (m_d) is the magnetization density of the sublattice of spins that
point up (down) in the marked state, with domains |m_u| <= 1 - x and
|m_d| <= x.  The all-up ground state sits at (1 - x, x) and the marked state
at (1 - x, -x).  Annealing protocols are curves (s(t), lambda(t)) in the unit
square: at (0, 0) the marked state is the ground state of the control
Hamiltonian, at s = 1 only H0 remains.  The classical protocol reads its
temperature off the same curve, T = (1 - s) * lambda.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np


class DomainError(ValueError):
    """An argument lies outside the physical domain."""


class SingularFieldError(DomainError):
    """Saddle-point fields diverge (order parameter on the boundary)."""


class ResourceLimitError(RuntimeError):
    """An exact finite-N computation would exceed the configured size cap."""


class IntegratorAbort(RuntimeError):
    """A dynamics integrator detected an invalid internal state."""


PIECEWISE_LINEAR = "piecewise-linear"
LINEAR_SQRT = "linear-sqrt"


@dataclass(frozen=True)
class ModelParams:
    """Couplings of the target Hamiltonian and geometry of the marked state.

    p: odd exponent >= 3 of both pattern terms.
    alpha: relative weight of the marked-state pattern, in (0, 1).
    x: fraction of spins pointing down in the marked state, in (0, 0.5].
    """

    p: int
    alpha: float
    x: float

    def __post_init__(self):
        if int(self.p) != self.p or self.p < 3 or self.p % 2 == 0:
            raise DomainError(f"p must be an odd integer >= 3, got {self.p!r}")
        if not 0.0 < self.alpha < 1.0:
            raise DomainError(f"alpha must lie in (0, 1), got {self.alpha!r}")
        if not 0.0 < self.x <= 0.5:
            raise DomainError(f"x must lie in (0, 0.5], got {self.x!r}")

    @property
    def m_u_max(self) -> float:
        return 1.0 - self.x

    @property
    def m_d_max(self) -> float:
        return self.x

    @staticmethod
    def from_config(cfg: dict) -> "ModelParams":
        try:
            return ModelParams(p=int(cfg["p"]), alpha=float(cfg["alpha"]), x=float(cfg["x"]))
        except KeyError as exc:
            raise DomainError(f"missing model parameter {exc.args[0]!r} in config") from None


@dataclass(frozen=True)
class SchedulePoint:
    """A point (s, lambda) in the annealing control plane."""

    s: float
    lam: float

    def __post_init__(self):
        if not 0.0 <= self.s <= 1.0:
            raise DomainError(f"s must lie in [0, 1], got {self.s!r}")
        if not 0.0 <= self.lam <= 1.0:
            raise DomainError(f"lambda must lie in [0, 1], got {self.lam!r}")

    @property
    def temperature(self) -> float:
        """Temperature read off the control point, T = (1 - s) * lambda."""
        return (1.0 - self.s) * self.lam


@dataclass(frozen=True)
class OrderParams:
    """Partial magnetization densities (m_u, m_d) of the two sublattices."""

    m_u: float
    m_d: float

    def in_domain(self, params: ModelParams, tol: float = 0.0) -> bool:
        return (abs(self.m_u) <= params.m_u_max + tol
                and abs(self.m_d) <= params.m_d_max + tol)

    @property
    def m(self) -> float:
        return self.m_u + self.m_d


@dataclass(frozen=True)
class FieldPair:
    """Longitudinal saddle/mean fields acting on the two sublattices."""

    h_u: float
    h_d: float


@dataclass(frozen=True)
class AnnealPath:
    """A time-parametrized control curve (s(t), lambda(t)) of runtime tau.

    kind "piecewise-linear": straight segments through `waypoints`, traversed
    at uniform parameter speed (each segment takes the same time regardless of
    its length).  kind "linear-sqrt": s(t) = t/tau, lambda(t) = sqrt(t/tau).
    """

    kind: str
    tau: float
    waypoints: tuple[tuple[float, float], ...] = ()

    def __post_init__(self):
        if self.kind not in (PIECEWISE_LINEAR, LINEAR_SQRT):
            raise DomainError(f"unknown path kind {self.kind!r}")
        if not self.tau > 0.0:
            raise DomainError(f"tau must be > 0, got {self.tau!r}")
        if self.kind == PIECEWISE_LINEAR:
            if len(self.waypoints) < 2:
                raise DomainError("piecewise-linear path needs >= 2 waypoints")
            for w in self.waypoints:
                if len(w) != 2 or not (0.0 <= w[0] <= 1.0 and 0.0 <= w[1] <= 1.0):
                    raise DomainError(f"waypoint {w!r} outside the unit square")
            object.__setattr__(self, "waypoints",
                               tuple((float(a), float(b)) for a, b in self.waypoints))
        elif self.waypoints:
            raise DomainError("linear-sqrt path takes no waypoints")

    @staticmethod
    def linear_sqrt(tau: float) -> "AnnealPath":
        return AnnealPath(kind=LINEAR_SQRT, tau=tau)

    @staticmethod
    def piecewise(waypoints: Sequence[Sequence[float]], tau: float) -> "AnnealPath":
        return AnnealPath(kind=PIECEWISE_LINEAR, tau=tau,
                          waypoints=tuple(tuple(w) for w in waypoints))

    @staticmethod
    def frozen(s: float, lam: float, tau: float) -> "AnnealPath":
        """Constant-(s, lambda) protocol, used for equilibration diagnostics."""
        return AnnealPath.piecewise([(s, lam), (s, lam)], tau)

    @staticmethod
    def from_config(cfg: dict) -> "AnnealPath":
        try:
            path = cfg["path"]
            kind = path["kind"]
            tau = float(path["tau"])
        except KeyError as exc:
            raise DomainError(f"missing path key {exc.args[0]!r} in config") from None
        if kind == LINEAR_SQRT:
            return AnnealPath.linear_sqrt(tau)
        return AnnealPath.piecewise(path.get("waypoints", ()), tau)

    def is_constant(self) -> bool:
        return (self.kind == PIECEWISE_LINEAR
                and all(w == self.waypoints[0] for w in self.waypoints))

    def starts_at_origin(self) -> bool:
        """True for protocol paths beginning at (0, 0); constant diagnostic
        paths (frozen control point) are admitted regardless of the point."""
        if self.kind == LINEAR_SQRT or self.is_constant():
            return True
        s0, l0 = self.waypoints[0]
        return s0 == 0.0 and l0 == 0.0


def schedule_at(path: AnnealPath, t: float) -> SchedulePoint:
    """Exact control point (s, lambda) at time t along the path."""
    if not -1e-12 <= t <= path.tau * (1.0 + 1e-12):
        raise DomainError(f"t={t!r} outside [0, {path.tau}]")
    s, lam = _schedule_raw(path, min(max(t, 0.0), path.tau))
    return SchedulePoint(min(max(s, 0.0), 1.0), min(max(lam, 0.0), 1.0))


def schedule_samples(path: AnnealPath, t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized schedule evaluation; t must lie within [0, tau]."""
    t = np.asarray(t, dtype=float)
    if t.size and (t.min() < -1e-12 or t.max() > path.tau * (1.0 + 1e-12)):
        raise DomainError("sample times outside [0, tau]")
    u = np.clip(t / path.tau, 0.0, 1.0)
    if path.kind == LINEAR_SQRT:
        return u, np.sqrt(u)
    w = np.asarray(path.waypoints, dtype=float)
    nseg = len(w) - 1
    pos = u * nseg
    k = np.minimum(pos.astype(int), nseg - 1)
    frac = pos - k
    s = w[k, 0] + frac * (w[k + 1, 0] - w[k, 0])
    lam = w[k, 1] + frac * (w[k + 1, 1] - w[k, 1])
    return s, lam


def _schedule_raw(path: AnnealPath, t: float) -> tuple[float, float]:
    u = t / path.tau
    if path.kind == LINEAR_SQRT:
        return u, math.sqrt(u)
    w = path.waypoints
    nseg = len(w) - 1
    pos = u * nseg
    k = min(int(pos), nseg - 1)
    frac = pos - k
    a, b = w[k], w[k + 1]
    return a[0] + frac * (b[0] - a[0]), a[1] + frac * (b[1] - a[1])


def energy_density(params: ModelParams, m: OrderParams) -> float:
    """Energy density of the target Hamiltonian at order parameters m."""
    return float(energy_density_arrays(params, m.m_u, m.m_d))


def energy_density_arrays(params: ModelParams, m_u, m_d):
    """Elementwise energy density, -(m_u+m_d)^p - alpha (m_u-m_d)^p."""
    m_u = np.asarray(m_u, dtype=float)
    m_d = np.asarray(m_d, dtype=float)
    return -((m_u + m_d) ** params.p) - params.alpha * (m_u - m_d) ** params.p


@dataclass(frozen=True)
class Trajectory:
    """Sampled time series of a dynamics run.

    Columns are aligned arrays; `extras` carries integrator diagnostics
    (wavefunction norms, probability sums, transverse magnetizations,
    run-to-run standard errors) keyed by name.
    """

    t: np.ndarray
    s: np.ndarray
    lam: np.ndarray
    m_u: np.ndarray
    m_d: np.ndarray
    e: np.ndarray
    extras: dict = field(default_factory=dict)

    def __post_init__(self):
        n = len(self.t)
        for name in ("s", "lam", "m_u", "m_d", "e"):
            if len(getattr(self, name)) != n:
                raise DomainError(f"trajectory column {name!r} has mismatched length")
        if n and (self.t[0] < 0.0 or np.any(np.diff(self.t) <= 0.0)):
            raise DomainError("trajectory times must be strictly increasing from 0")

    @property
    def delta_m(self) -> float:
        """Final magnetization deficit, 1 - m_u(tau) - m_d(tau)."""
        return float(1.0 - self.m_u[-1] - self.m_d[-1])

"""Self-consistent quantum mean-field dynamics and an exact finite-N oracle.

The thermodynamic-limit dynamics reduces to two spins u and d, each a
two-component wavefunction, precessing in self-consistent fields

    h_u = s p (m_u+m_d)^(p-1) + s alpha p (m_u-m_d)^(p-1) + (1-s)(1-lambda)
    h_d = s p (m_u+m_d)^(p-1) - s alpha p (m_u-m_d)^(p-1) - (1-s)(1-lambda)

with transverse field G = (1-s) lambda and m_u = (1-x) <sz>_u,
m_d = x <sz>_d.  Each step measures the magnetizations, sets the fields, and
advances both spins with the exact 2x2 propagator of the frozen-field
Hamiltonian H = -h sz - G sx, which is unitary to machine precision.  Field
evaluation at the step start is the default; a midpoint-field variant
(second-order accurate, conserves the mean-field energy under frozen
schedules) is available via the config flag.

The oracle propagates the full N-spin Hamiltonian restricted to the
permutation-symmetric sector of each sublattice, dimension
(N_u+1) x (N_d+1), with a Strang splitting between the diagonal part and the
collective transverse term (exactly unitary; the transverse factor is applied
in its eigenbasis).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import (
    AnnealPath,
    DomainError,
    FieldPair,
    IntegratorAbort,
    ModelParams,
    OrderParams,
    ResourceLimitError,
    SchedulePoint,
    Trajectory,
    schedule_samples,
)

SECTOR_DIM_CAP = 100_000


@dataclass(frozen=True)
class SpinStateQ:
    """Normalized two-component wavefunction of one effective spin."""

    amp_up: complex
    amp_down: complex

    def __post_init__(self):
        if abs(self.norm() - 1.0) > 1e-9:
            raise DomainError("spin state must be normalized to 1e-9")

    def norm(self) -> float:
        return math.sqrt(abs(self.amp_up) ** 2 + abs(self.amp_down) ** 2)

    def sigma_z(self) -> float:
        return abs(self.amp_up) ** 2 - abs(self.amp_down) ** 2

    def sigma_x(self) -> float:
        return 2.0 * (self.amp_up.conjugate() * self.amp_down).real


@dataclass(frozen=True)
class AraIntegratorConfig:
    """Timestep and sampling for the mean-field integrator."""

    dt: float
    sampling_stride: int = 1
    midpoint_fields: bool = False

    def __post_init__(self):
        if not self.dt > 0.0:
            raise DomainError(f"dt must be > 0, got {self.dt!r}")
        if self.sampling_stride < 1:
            raise DomainError("sampling_stride must be >= 1")


def default_ara_dt(tau: float) -> float:
    """Default timestep: 1e-4 * tau, capped at 1e-3."""
    return min(1e-3, 1e-4 * tau)


@dataclass
class CollectiveSector:
    """State vector over the joint symmetric sector of the two sublattices."""

    N: int
    N_u: int
    N_d: int
    state: np.ndarray  # complex, shape (N_u+1, N_d+1)

    @staticmethod
    def marked_state(params: ModelParams, N: int) -> "CollectiveSector":
        N_u = round(N * (1.0 - params.x))
        N_d = N - N_u
        dim = (N_u + 1) * (N_d + 1)
        if dim > SECTOR_DIM_CAP:
            raise ResourceLimitError(
                f"sector dimension {dim} exceeds the cap {SECTOR_DIM_CAP}")
        state = np.zeros((N_u + 1, N_d + 1), dtype=complex)
        state[N_u, 0] = 1.0  # all u-spins up, all d-spins down
        return CollectiveSector(N=N, N_u=N_u, N_d=N_d, state=state)

    def norm(self) -> float:
        return float(np.linalg.norm(self.state))


def ara_fields(params: ModelParams, point: SchedulePoint, m: OrderParams) -> FieldPair:
    """Self-consistent longitudinal fields on the two effective spins."""
    h_u, h_d = _fields_raw(params, point.s, point.lam, m.m_u, m.m_d)
    return FieldPair(h_u, h_d)


def _fields_raw(params: ModelParams, s: float, lam: float,
                m_u: float, m_d: float) -> tuple[float, float]:
    p = params.p
    common = s * p * (m_u + m_d) ** (p - 1)
    split = s * params.alpha * p * (m_u - m_d) ** (p - 1)
    bias = (1.0 - s) * (1.0 - lam)
    return common + split + bias, common - split - bias


def _rotate(up: complex, dn: complex, h: float, g: float, dt: float):
    """Exact propagator of H = -h sz - g sx applied for time dt."""
    om = math.hypot(h, g)
    if om == 0.0:
        return up, dn
    th = om * dt
    c = math.cos(th)
    sn = math.sin(th) / om
    return ((c + 1j * sn * h) * up + (1j * sn * g) * dn,
            (1j * sn * g) * up + (c - 1j * sn * h) * dn)


def ara_evolve(params: ModelParams, path: AnnealPath,
               cfg: AraIntegratorConfig | None = None) -> Trajectory:
    """Integrate the two-spin self-consistent dynamics along the path.

    The path must start at (0, 0); the initial condition is the marked state
    (spin u up, spin d down).  Samples every `sampling_stride` steps plus the
    final time; extras carry <sx> per spin and the wavefunction norms.
    """
    if not path.starts_at_origin():
        raise DomainError("dynamics paths must start at (s, lambda) = (0, 0)")
    if cfg is None:
        cfg = AraIntegratorConfig(dt=default_ara_dt(path.tau))
    if cfg.dt > path.tau:
        raise DomainError("dt must not exceed the path runtime")
    tau = path.tau
    n = max(1, round(tau / cfg.dt))
    dt = tau / n
    t_grid = np.arange(n + 1) * dt
    sv, lv = schedule_samples(path, t_grid)
    if cfg.midpoint_fields:
        sm, lm = schedule_samples(path, np.minimum(t_grid[:-1] + 0.5 * dt, tau))

    w = params.m_u_max
    xx = params.m_d_max
    au_u, au_d = 1.0 + 0.0j, 0.0j
    ad_u, ad_d = 0.0j, 1.0 + 0.0j

    idx = list(range(0, n, cfg.sampling_stride)) + [n]
    take = np.zeros(n + 1, dtype=bool)
    take[idx] = True
    n_samp = int(take.sum())
    out = {name: np.empty(n_samp) for name in
           ("t", "s", "lam", "m_u", "m_d", "e", "sigma_x_u", "sigma_x_d",
            "norm_u", "norm_d")}

    k_out = 0
    for k in range(n + 1):
        s, lam = float(sv[k]), float(lv[k])
        m_u = w * (abs(au_u) ** 2 - abs(au_d) ** 2)
        m_d = xx * (abs(ad_u) ** 2 - abs(ad_d) ** 2)
        if take[k]:
            out["t"][k_out] = t_grid[k]
            out["s"][k_out] = s
            out["lam"][k_out] = lam
            out["m_u"][k_out] = m_u
            out["m_d"][k_out] = m_d
            out["e"][k_out] = (-(m_u + m_d) ** params.p
                               - params.alpha * (m_u - m_d) ** params.p)
            out["sigma_x_u"][k_out] = 2.0 * (au_u.conjugate() * au_d).real
            out["sigma_x_d"][k_out] = 2.0 * (ad_u.conjugate() * ad_d).real
            out["norm_u"][k_out] = math.sqrt(abs(au_u) ** 2 + abs(au_d) ** 2)
            out["norm_d"][k_out] = math.sqrt(abs(ad_u) ** 2 + abs(ad_d) ** 2)
            k_out += 1
        if k == n:
            break
        h_u, h_d = _fields_raw(params, s, lam, m_u, m_d)
        g = (1.0 - s) * lam
        if not (math.isfinite(h_u) and math.isfinite(h_d)):
            raise IntegratorAbort(f"non-finite field at t={t_grid[k]!r}")
        if cfg.midpoint_fields:
            bu = _rotate(au_u, au_d, h_u, g, 0.5 * dt)
            bd = _rotate(ad_u, ad_d, h_d, g, 0.5 * dt)
            m_u2 = w * (abs(bu[0]) ** 2 - abs(bu[1]) ** 2)
            m_d2 = xx * (abs(bd[0]) ** 2 - abs(bd[1]) ** 2)
            s2, lam2 = float(sm[k]), float(lm[k])
            h_u, h_d = _fields_raw(params, s2, lam2, m_u2, m_d2)
            g = (1.0 - s2) * lam2
        au_u, au_d = _rotate(au_u, au_d, h_u, g, dt)
        ad_u, ad_d = _rotate(ad_u, ad_d, h_d, g, dt)

    extras = {name: out[name] for name in
              ("sigma_x_u", "sigma_x_d", "norm_u", "norm_d")}
    return Trajectory(t=out["t"], s=out["s"], lam=out["lam"], m_u=out["m_u"],
                      m_d=out["m_d"], e=out["e"], extras=extras)


def mean_field_energy(params: ModelParams, traj: Trajectory) -> np.ndarray:
    """Full mean-field energy density along a quantum trajectory.

    Includes the transverse term, so it needs the <sx> extras; constant in
    time under a frozen schedule (to integrator accuracy).
    """
    sxu = traj.extras["sigma_x_u"]
    sxd = traj.extras["sigma_x_d"]
    s, lam = traj.s, traj.lam
    mu, md = traj.m_u, traj.m_d
    w = params.m_u_max
    return (-s * (mu + md) ** params.p - s * params.alpha * (mu - md) ** params.p
            - (1.0 - s) * (lam * (w * sxu + params.x * sxd)
                           + (1.0 - lam) * (mu - md)))


def _collective_sx(n_spins: int) -> np.ndarray:
    """Matrix of sum_j sigma^x_j in the symmetric sector (basis: k spins up)."""
    j = 0.5 * n_spins
    k = np.arange(n_spins)
    mz = k - j
    off = 2.0 * 0.5 * np.sqrt(j * (j + 1.0) - mz * (mz + 1.0))  # 2 * J_x elements
    mat = np.zeros((n_spins + 1, n_spins + 1))
    mat[k + 1, k] = off
    mat[k, k + 1] = off
    return mat


def ara_exact_finite_n(params: ModelParams, path: AnnealPath, N: int, dt: float,
                       sampling_stride: int = 1) -> Trajectory:
    """Exact Schrodinger evolution of N spins in the symmetric sector.

    Independent oracle for the mean-field limit: no self-consistency, just
    the full collective Hamiltonian.  Returns m_u(t) = <S_u^z>/N and
    m_d(t) = <S_d^z>/N; e is the energy density evaluated at those
    magnetizations.
    """
    if not path.starts_at_origin():
        raise DomainError("dynamics paths must start at (s, lambda) = (0, 0)")
    if not dt > 0.0:
        raise DomainError("dt must be > 0")
    sector = CollectiveSector.marked_state(params, N)
    N_u, N_d = sector.N_u, sector.N_d
    psi = sector.state

    M_u = (2.0 * np.arange(N_u + 1) - N_u)[:, None]
    M_d = (2.0 * np.arange(N_d + 1) - N_d)[None, :]
    scale = float(N) ** (1 - params.p)
    pow_plus = scale * (M_u + M_d) ** params.p
    pow_minus = scale * (M_u - M_d) ** params.p
    bias = M_u - M_d

    wu, Vu = np.linalg.eigh(_collective_sx(N_u))
    wd, Vd = np.linalg.eigh(_collective_sx(N_d))

    tau = path.tau
    n = max(1, round(tau / dt))
    dt = tau / n
    t_grid = np.arange(n + 1) * dt
    sv, lv = schedule_samples(path, np.minimum(t_grid[:-1] + 0.5 * dt, tau))
    s_samp, l_samp = schedule_samples(path, t_grid)

    idx = list(range(0, n, sampling_stride)) + [n]
    take = np.zeros(n + 1, dtype=bool)
    take[idx] = True
    n_samp = int(take.sum())
    out = {name: np.empty(n_samp) for name in
           ("t", "s", "lam", "m_u", "m_d", "e", "norm")}

    k_out = 0
    for k in range(n + 1):
        if take[k]:
            prob = np.abs(psi) ** 2
            m_u = float((prob * M_u).sum()) / N
            m_d = float((prob * M_d).sum()) / N
            out["t"][k_out] = t_grid[k]
            out["s"][k_out] = s_samp[k]
            out["lam"][k_out] = l_samp[k]
            out["m_u"][k_out] = m_u
            out["m_d"][k_out] = m_d
            out["e"][k_out] = (-(m_u + m_d) ** params.p
                               - params.alpha * (m_u - m_d) ** params.p)
            out["norm"][k_out] = float(np.linalg.norm(psi))
            k_out += 1
        if k == n:
            break
        s, lam = float(sv[k]), float(lv[k])
        diag = -s * pow_plus - s * params.alpha * pow_minus - (1.0 - s) * (1.0 - lam) * bias
        half = np.exp(-0.5j * dt * diag)
        psi = half * psi
        g = (1.0 - s) * lam
        if g != 0.0:
            psi = Vu @ (np.exp(1j * dt * g * wu)[:, None] * (Vu.T @ psi))
            psi = (psi @ Vd) * np.exp(1j * dt * g * wd)[None, :] @ Vd.T
        psi = half * psi

    return Trajectory(t=out["t"], s=out["s"], lam=out["lam"], m_u=out["m_u"],
                      m_d=out["m_d"], e=out["e"], extras={"norm": out["norm"]})

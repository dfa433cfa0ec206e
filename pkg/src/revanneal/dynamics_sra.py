"""Classical reverse-annealing dynamics: mean-field master equation and
finite-N Metropolis Monte Carlo.

The thermodynamic-limit dynamics reduces to two independent two-state
distributions rho_u, rho_d driven by the same self-consistent fields as the
quantum protocol and the Metropolis transition kernel

    pi(flip | sigma; b) = gamma dt min{ exp(-2 b sigma / T), 1 },

with temperature schedule T = (1 - s) lambda.  The zero-temperature limit
(both protocol endpoints) uses the analytic step function: flips happen at
rate gamma iff b sigma <= 0.

The finite-N oracle runs the literal algorithm on N explicit spins:
single-spin Metropolis attempts at rate gamma per spin (N attempts per unit
time at gamma = 1), energy differences evaluated exactly from the extensive
Hamiltonian, averaged over independently seeded runs.
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
    SchedulePoint,
    Trajectory,
    schedule_samples,
)
from .dynamics_ara import _fields_raw, ara_fields


@dataclass(frozen=True)
class SpinStateC:
    """Two-state probability distribution of one effective classical spin."""

    prob_up: float
    prob_down: float

    def __post_init__(self):
        if not (0.0 <= self.prob_up <= 1.0 and 0.0 <= self.prob_down <= 1.0):
            raise DomainError("probabilities must lie in [0, 1]")
        if abs(self.prob_up + self.prob_down - 1.0) > 1e-12:
            raise DomainError("probabilities must sum to 1 within 1e-12")

    def mean_sigma(self) -> float:
        return self.prob_up - self.prob_down


@dataclass(frozen=True)
class SraConfig:
    """Attempt rate, timestep and zero-temperature floor."""

    gamma: float = 1.0
    dt: float = 1e-3
    t_floor: float = 1e-12
    sampling_stride: int = 1

    def __post_init__(self):
        if not self.gamma > 0.0:
            raise DomainError("gamma must be > 0")
        if not self.dt > 0.0:
            raise DomainError("dt must be > 0")
        if self.gamma * self.dt > 1.0:
            raise DomainError("gamma * dt must not exceed 1")
        if not self.t_floor > 0.0:
            raise DomainError("t_floor must be > 0")
        if self.sampling_stride < 1:
            raise DomainError("sampling_stride must be >= 1")


def metropolis_kernel(sigma: int, b: float, T: float, gamma: float, dt: float,
                      t_floor: float = 1e-12) -> float:
    """Probability that the spin flips during dt, gamma dt min{e^(-2 b sigma/T), 1}."""
    if sigma not in (1, -1):
        raise DomainError(f"sigma must be +1 or -1, got {sigma!r}")
    if T < 0.0:
        raise DomainError("temperature must be >= 0")
    if gamma * dt > 1.0:
        raise DomainError("gamma * dt must not exceed 1")
    bs = b * sigma
    if T <= t_floor:
        return gamma * dt if bs <= 0.0 else 0.0
    if bs <= 0.0:
        return gamma * dt
    return gamma * dt * math.exp(-2.0 * bs / T)


def sra_fields(params: ModelParams, point: SchedulePoint, m: OrderParams) -> FieldPair:
    """Mean local fields of the classical dynamics (same form as the quantum ones)."""
    return ara_fields(params, point, m)


def sra_evolve(params: ModelParams, path: AnnealPath,
               cfg: SraConfig | None = None) -> Trajectory:
    """Integrate the two-spin master equation along the path.

    The path must start at (0, 0); initially rho_u = delta(up) and
    rho_d = delta(down).  Extras carry the probability sums per spin.
    """
    if not path.starts_at_origin():
        raise DomainError("dynamics paths must start at (s, lambda) = (0, 0)")
    if cfg is None:
        cfg = SraConfig()
    if cfg.dt > path.tau:
        raise DomainError("dt must not exceed the path runtime")
    tau = path.tau
    n = max(1, round(tau / cfg.dt))
    dt = tau / n
    gdt = cfg.gamma * dt
    if gdt > 1.0:
        raise DomainError("gamma * dt must not exceed 1 after step rounding")
    t_grid = np.arange(n + 1) * dt
    sv, lv = schedule_samples(path, t_grid)

    w = params.m_u_max
    xx = params.m_d_max
    floor = cfg.t_floor
    pu_up, pu_dn = 1.0, 0.0
    pd_up, pd_dn = 0.0, 1.0

    idx = list(range(0, n, cfg.sampling_stride)) + [n]
    take = np.zeros(n + 1, dtype=bool)
    take[idx] = True
    n_samp = int(take.sum())
    out = {name: np.empty(n_samp) for name in
           ("t", "s", "lam", "m_u", "m_d", "e", "prob_sum_u", "prob_sum_d")}

    def flip_probs(b: float, T: float) -> tuple[float, float]:
        # returns (flip prob for sigma=+1, flip prob for sigma=-1)
        if T <= floor:
            return (gdt if b <= 0.0 else 0.0, gdt if b >= 0.0 else 0.0)
        if b >= 0.0:
            return gdt * math.exp(-2.0 * b / T), gdt
        return gdt, gdt * math.exp(2.0 * b / T)

    k_out = 0
    for k in range(n + 1):
        s, lam = float(sv[k]), float(lv[k])
        m_u = w * (pu_up - pu_dn)
        m_d = xx * (pd_up - pd_dn)
        if take[k]:
            out["t"][k_out] = t_grid[k]
            out["s"][k_out] = s
            out["lam"][k_out] = lam
            out["m_u"][k_out] = m_u
            out["m_d"][k_out] = m_d
            out["e"][k_out] = (-(m_u + m_d) ** params.p
                               - params.alpha * (m_u - m_d) ** params.p)
            out["prob_sum_u"][k_out] = pu_up + pu_dn
            out["prob_sum_d"][k_out] = pd_up + pd_dn
            k_out += 1
        if k == n:
            break
        b_u, b_d = _fields_raw(params, s, lam, m_u, m_d)
        T = (1.0 - s) * lam
        fu_p, fu_m = flip_probs(b_u, T)
        fd_p, fd_m = flip_probs(b_d, T)
        pu_up, pu_dn = (pu_up * (1.0 - fu_p) + pu_dn * fu_m,
                        pu_dn * (1.0 - fu_m) + pu_up * fu_p)
        pd_up, pd_dn = (pd_up * (1.0 - fd_p) + pd_dn * fd_m,
                        pd_dn * (1.0 - fd_m) + pd_up * fd_p)
        for val in (pu_up, pu_dn, pd_up, pd_dn):
            if val < -1e-12 or val > 1.0 + 1e-12:
                raise IntegratorAbort(
                    f"probability {val!r} left [0, 1]; check gamma * dt")

    extras = {"prob_sum_u": out["prob_sum_u"], "prob_sum_d": out["prob_sum_d"]}
    return Trajectory(t=out["t"], s=out["s"], lam=out["lam"], m_u=out["m_u"],
                      m_d=out["m_d"], e=out["e"], extras=extras)


def sra_finite_n(params: ModelParams, path: AnnealPath, N: int, n_runs: int,
                 seed: int, cfg: SraConfig | None = None,
                 sample_every: float = 0.05) -> Trajectory:
    """Metropolis Monte Carlo on N explicit spins, averaged over runs.

    Run r uses seed + r; all runs step in lockstep (one attempted flip per
    unit 1/(gamma N)), which preserves the per-run streams exactly.  Samples
    every `sample_every` sweeps; extras carry the standard error over runs.
    """
    if N < 10:
        raise DomainError("N must be >= 10")
    if n_runs < 1:
        raise DomainError("n_runs must be >= 1")
    if not path.starts_at_origin():
        raise DomainError("dynamics paths must start at (s, lambda) = (0, 0)")
    if cfg is None:
        cfg = SraConfig()
    N_u = round(N * (1.0 - params.x))
    N_d = N - N_u
    gamma = cfg.gamma
    tau = path.tau
    n_att = max(1, round(tau * gamma * N))
    dt_att = tau / n_att
    stride = max(1, round(sample_every * gamma * N))

    t_att = np.arange(n_att + 1) * dt_att
    sv, lv = schedule_samples(path, t_att)
    Tv = (1.0 - sv) * lv
    p_now = params.p
    floor = cfg.t_floor

    n_up_u = np.full(n_runs, N_u, dtype=np.int64)
    n_up_d = np.zeros(n_runs, dtype=np.int64)
    gens = [np.random.default_rng(seed + r) for r in range(n_runs)]

    idx = list(range(0, n_att, stride)) + [n_att]
    take = np.zeros(n_att + 1, dtype=bool)
    take[idx] = True
    n_samp = int(take.sum())
    mu_s = np.empty((n_samp, n_runs))
    md_s = np.empty((n_samp, n_runs))
    t_s = np.empty(n_samp)
    s_s = np.empty(n_samp)
    l_s = np.empty(n_samp)

    frac_u = N_u / N
    chunk = 4096
    k_out = 0
    for k0 in range(0, n_att + 1, chunk):
        k1 = min(k0 + chunk, n_att + 1)
        size = k1 - k0
        U = np.empty((size, n_runs, 3))
        for r, g in enumerate(gens):
            U[:, r, :] = g.random((size, 3))
        for kk in range(size):
            k = k0 + kk
            if take[k]:
                Su = 2.0 * n_up_u - N_u
                Sd = 2.0 * n_up_d - N_d
                mu_s[k_out] = Su / N
                md_s[k_out] = Sd / N
                t_s[k_out] = t_att[k]
                s_s[k_out] = sv[k]
                l_s[k_out] = lv[k]
                k_out += 1
            if k == n_att:
                break
            s, lam, T = sv[k], lv[k], Tv[k]
            u0 = U[kk, :, 0]
            u1 = U[kk, :, 1]
            u2 = U[kk, :, 2]
            in_u = u0 < frac_u
            cur_up_frac = np.where(in_u, n_up_u / N_u, n_up_d / max(N_d, 1))
            sigma = np.where(u1 < cur_up_frac, 1.0, -1.0)
            aj = np.where(in_u, 1.0, -1.0)
            Su = 2.0 * n_up_u - N_u
            Sd = 2.0 * n_up_d - N_d
            M = (Su + Sd) / N
            Ma = (Su - Sd) / N
            M2 = M - 2.0 * sigma / N
            Ma2 = Ma - 2.0 * sigma * aj / N
            dE = (-s * N * (M2 ** p_now - M ** p_now)
                  - s * params.alpha * N * (Ma2 ** p_now - Ma ** p_now)
                  - (1.0 - s) * (1.0 - lam) * N * (Ma2 - Ma))
            Tc = max(T, floor)
            accept = (dE <= 0.0) | (u2 < np.exp(-np.maximum(dE, 0.0) / Tc))
            if T <= floor:
                accept = dE <= 0.0
            flip = accept
            d_sigma = np.where(flip, -sigma, 0.0).astype(np.int64)
            n_up_u += np.where(in_u, d_sigma, 0)
            n_up_d += np.where(in_u, 0, d_sigma)

    m_u = mu_s.mean(axis=1)
    m_d = md_s.mean(axis=1)
    if n_runs > 1:
        se_u = mu_s.std(axis=1, ddof=1) / math.sqrt(n_runs)
        se_d = md_s.std(axis=1, ddof=1) / math.sqrt(n_runs)
    else:
        se_u = np.zeros(n_samp)
        se_d = np.zeros(n_samp)
    e = -((m_u + m_d) ** p_now) - params.alpha * (m_u - m_d) ** p_now
    return Trajectory(t=t_s, s=s_s, lam=l_s, m_u=m_u, m_d=m_d, e=e,
                      extras={"stderr_m_u": se_u, "stderr_m_d": se_d})

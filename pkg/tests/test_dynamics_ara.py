import numpy as np
import pytest

from revanneal import (
    AnnealPath,
    AraIntegratorConfig,
    CollectiveSector,
    DomainError,
    ModelParams,
    OrderParams,
    ResourceLimitError,
    SchedulePoint,
    SpinStateQ,
    ara_evolve,
    ara_exact_finite_n,
    ara_fields,
    default_ara_dt,
    mean_field_energy,
)

P352 = ModelParams(3, 0.5, 0.2)
P311 = ModelParams(3, 0.1, 0.1)


def test_ara_fields_hand_values():
    f = ara_fields(P352, SchedulePoint(0.0, 0.0), OrderParams(0.3, -0.1))
    assert (f.h_u, f.h_d) == (1.0, -1.0)
    f = ara_fields(P352, SchedulePoint(1.0, 0.5), OrderParams(0.8, 0.2))
    assert f.h_u == pytest.approx(3.0 + 1.5 * 0.36, abs=1e-12)
    assert f.h_d == pytest.approx(3.0 - 1.5 * 0.36, abs=1e-12)
    f = ara_fields(P352, SchedulePoint(0.0, 1.0), OrderParams(0.5, 0.1))
    assert (f.h_u, f.h_d) == (0.0, 0.0)


def test_spin_state_validation():
    SpinStateQ(1.0, 0.0)
    s = SpinStateQ(np.sqrt(0.5), np.sqrt(0.5) * 1j)
    assert s.sigma_z() == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(DomainError):
        SpinStateQ(1.0, 0.5)


def test_config_validation():
    with pytest.raises(DomainError):
        AraIntegratorConfig(dt=0.0)
    with pytest.raises(DomainError):
        AraIntegratorConfig(dt=1e-3, sampling_stride=0)
    assert default_ara_dt(10.0) == pytest.approx(1e-3)
    assert default_ara_dt(1.0) == pytest.approx(1e-4)


def test_frozen_origin_is_stationary():
    traj = ara_evolve(P352, AnnealPath.frozen(0.0, 0.0, 5.0),
                      AraIntegratorConfig(dt=1e-3, sampling_stride=50))
    assert np.max(np.abs(traj.m_u - 0.8)) < 1e-9
    assert np.max(np.abs(traj.m_d + 0.2)) < 1e-9


def test_frozen_pure_transverse_precession():
    traj = ara_evolve(P352, AnnealPath.frozen(0.0, 1.0, 3.0),
                      AraIntegratorConfig(dt=1e-4, sampling_stride=37))
    assert np.max(np.abs(traj.m_u - 0.8 * np.cos(2 * traj.t))) < 1e-9
    assert np.max(np.abs(traj.m_d + 0.2 * np.cos(2 * traj.t))) < 1e-9


def test_norm_conservation_every_sample():
    traj = ara_evolve(P311, AnnealPath.linear_sqrt(10.0),
                      AraIntegratorConfig(dt=1e-3, sampling_stride=10))
    assert np.max(np.abs(traj.extras["norm_u"] - 1.0)) < 1e-9
    assert np.max(np.abs(traj.extras["norm_d"] - 1.0)) < 1e-9


def test_energy_conservation_frozen_schedule():
    """Mean-field energy constant within 1e-6 over tau=10 at dt=1e-4.

    The midpoint-field stepper meets this; the default start-of-step stepper
    is first order in the self-consistent coupling (drift proportional to dt)
    and is characterized separately below."""
    path = AnnealPath.frozen(0.35, 0.6, 10.0)
    traj = ara_evolve(P352, path, AraIntegratorConfig(
        dt=1e-4, sampling_stride=10, midpoint_fields=True))
    e = mean_field_energy(P352, traj)
    assert e.max() - e.min() < 1e-6


def test_literal_stepper_energy_drift_is_first_order():
    path = AnnealPath.frozen(0.35, 0.6, 10.0)
    bands = []
    for dt in (2e-4, 1e-4):
        traj = ara_evolve(P352, path, AraIntegratorConfig(dt=dt, sampling_stride=10))
        e = mean_field_energy(P352, traj)
        bands.append(e.max() - e.min())
    assert bands[1] < 1e-3
    assert bands[1] < 0.7 * bands[0]  # shrinks roughly linearly with dt


def test_timestep_convergence():
    # successive halvings of dt change m_d(tau) by less than 4x the change
    # from the previous halving
    path = AnnealPath.linear_sqrt(4.0)
    finals = []
    for dt in (4e-3, 2e-3, 1e-3, 5e-4):
        traj = ara_evolve(P311, path, AraIntegratorConfig(dt=dt, sampling_stride=10 ** 9))
        finals.append(traj.m_d[-1])
    changes = [abs(finals[k + 1] - finals[k]) for k in range(3)]
    assert changes[1] < 4.0 * changes[0]
    assert changes[2] < 4.0 * changes[1]


def test_path_must_start_at_origin():
    bad = AnnealPath.piecewise([(0.5, 0.5), (1.0, 0.0)], 1.0)
    with pytest.raises(DomainError):
        ara_evolve(P352, bad, AraIntegratorConfig(dt=1e-3))
    with pytest.raises(DomainError):
        ara_exact_finite_n(P352, bad, 20, 1e-3)


def test_dt_cannot_exceed_tau():
    with pytest.raises(DomainError):
        ara_evolve(P352, AnnealPath.linear_sqrt(0.01), AraIntegratorConfig(dt=0.1))


def test_sector_construction_and_cap():
    sector = CollectiveSector.marked_state(P352, 20)
    assert (sector.N_u, sector.N_d) == (16, 4)
    assert sector.state.shape == (17, 5)
    assert sector.norm() == pytest.approx(1.0)
    with pytest.raises(ResourceLimitError):
        CollectiveSector.marked_state(ModelParams(3, 0.5, 0.5), 1000)


def test_finite_n_frozen_marked_state_is_eigenstate():
    traj = ara_exact_finite_n(P352, AnnealPath.frozen(0.0, 0.0, 2.0), 20, 1e-3,
                              sampling_stride=100)
    assert np.max(np.abs(traj.m_u - 0.8)) < 1e-10
    assert np.max(np.abs(traj.m_d + 0.2)) < 1e-10


def test_finite_n_pure_transverse_product_precession():
    traj = ara_exact_finite_n(P352, AnnealPath.frozen(0.0, 1.0, 2.0), 10, 1e-3,
                              sampling_stride=50)
    assert np.max(np.abs(traj.m_u - 0.8 * np.cos(2 * traj.t))) < 1e-9
    assert np.max(np.abs(traj.m_d + 0.2 * np.cos(2 * traj.t))) < 1e-9
    assert np.max(np.abs(traj.extras["norm"] - 1.0)) < 1e-9


def test_finite_n_converges_to_mean_field():
    path = AnnealPath.linear_sqrt(10.0)
    mf = ara_evolve(P311, path, AraIntegratorConfig(dt=1e-3, sampling_stride=10 ** 9))
    devs = []
    for n_spins in (50, 100, 200):
        fn = ara_exact_finite_n(P311, path, n_spins, 2e-3, sampling_stride=10 ** 9)
        devs.append(abs(fn.m_d[-1] - mf.m_d[-1]))
    assert devs[2] < devs[1] < devs[0]


def test_fig5_success_trajectory_shape():
    # m_d rises from -x toward +x, closer with larger tau
    finals = []
    for tau in (10.0, 20.0):
        traj = ara_evolve(P311, AnnealPath.linear_sqrt(tau),
                          AraIntegratorConfig(dt=1e-3, sampling_stride=100))
        assert traj.m_d[0] == pytest.approx(-0.1, abs=1e-12)
        finals.append(traj.m_d[-1])
    assert abs(finals[1] - 0.1) < abs(finals[0] - 0.1)


def test_fig8_failure_trajectory_shape():
    params = ModelParams(5, 0.9, 0.2)
    traj = ara_evolve(params, AnnealPath.linear_sqrt(10.0),
                      AraIntegratorConfig(dt=1e-3, sampling_stride=100))
    assert np.max(np.abs(traj.m_d + 0.2)) < 0.05

import numpy as np
import pytest

import heatgrid as hg
from heatgrid.building import BuildingGrid, CvType, MaterialField, SimulationConfig
from heatgrid.conditions import StepBoundary
from heatgrid.solar import PoaIrradiance
from heatgrid.tensor_solver import SolverError

from conftest import constant_weather


def dark_boundary(t_inf, t_gnd=None, t_sky=None, q_x=None):
    return StepBoundary(
        t_inf=t_inf,
        t_gnd=t_inf if t_gnd is None else t_gnd,
        t_sky=t_inf if t_sky is None else t_sky,
        poa=PoaIrradiance.dark(),
        q_x=q_x,
    )


def bare_config(**overrides):
    base = dict(
        dt=200.0,
        convergence_epsilon=1e-3,
        max_inner_iterations=500,
        enable_interior_lw=False,
        enable_exterior_lw=False,
        enable_solar=False,
        enable_interior_mass=False,
    )
    base.update(overrides)
    return SimulationConfig(**base)


def random_raw_case(rng, rows, cols):
    """Raw grid and materials, every cell live (no structural validation)."""
    cv = np.full((rows, cols), int(CvType.INTERIOR_AIR))
    grid = BuildingGrid.from_cv_types(
        cv, float(rng.uniform(0.4, 1.0)), float(rng.uniform(0.4, 1.0)), 3.0
    )
    mats = MaterialField.zeros(rows, cols)
    mats.k_face = rng.uniform(0.05, 2.0, (4, rows, cols))
    mats.h_face = rng.uniform(0.0, 12.0, (4, rows, cols))
    mats.heat_capacity = rng.uniform(700.0, 1100.0, (rows, cols))
    mats.density = rng.uniform(1.0, 2500.0, (rows, cols))
    return grid, mats


def baseline_update(t, t_prev, grid, mats, dt, t_inf, q_x):
    """Direct evaluation of the bare conduction-convection update."""
    u, v, z = grid.u, grid.v, grid.z
    pad = np.pad(t, 1, constant_values=t_inf)
    t1, t2 = pad[1:-1, 2:], pad[:-2, 1:-1]
    t3, t4 = pad[1:-1, :-2], pad[2:, 1:-1]
    k1, k2, k3, k4 = mats.k_face
    h1, h2, h3, h4 = mats.h_face
    capacity = mats.heat_capacity * mats.density * u * v * z / dt
    q_x = 0.0 if q_x is None else q_x
    numer = (
        q_x
        + v * z * (k1 / u * t1 + h1 * t_inf + k3 / u * t3 + h3 * t_inf)
        + u * z * (k2 / v * t2 + h2 * t_inf + k4 / v * t4 + h4 * t_inf)
        + capacity * t_prev
    )
    denom = (
        v * z * (k1 / u + h1 + k3 / u + h3)
        + u * z * (k2 / v + h2 + k4 / v + h4)
        + capacity
    )
    return numer / denom


# -----------------------------------------------------------------------------
# shifted fields
# -----------------------------------------------------------------------------

def test_shift_uniform_field():
    t = np.full((3, 4), 7.0)
    s = hg.shift_fields(t, 2.0)
    assert (s.t1[:, :-1] == 7.0).all() and (s.t1[:, -1] == 2.0).all()
    assert (s.t2[1:, :] == 7.0).all() and (s.t2[0, :] == 2.0).all()
    assert (s.t3[:, 1:] == 7.0).all() and (s.t3[:, 0] == 2.0).all()
    assert (s.t4[:-1, :] == 7.0).all() and (s.t4[-1, :] == 2.0).all()


def test_shift_two_by_two_manual():
    t = np.array([[1.0, 2.0], [3.0, 4.0]])
    s = hg.shift_fields(t, 9.0)
    assert np.array_equal(s.t1, [[2.0, 9.0], [4.0, 9.0]])  # east neighbor
    assert np.array_equal(s.t2, [[9.0, 9.0], [1.0, 2.0]])  # north neighbor
    assert np.array_equal(s.t3, [[9.0, 1.0], [9.0, 3.0]])  # west neighbor
    assert np.array_equal(s.t4, [[3.0, 4.0], [9.0, 9.0]])  # south neighbor


def test_shift_homogeneous_case():
    t = np.full((4, 4), 5.0)
    s = hg.shift_fields(t, 5.0)
    for f in (s.t1, s.t2, s.t3, s.t4):
        assert (f == 5.0).all()


# -----------------------------------------------------------------------------
# reduction to the bare update
# -----------------------------------------------------------------------------

def test_single_iteration_reduces_to_bare_update(rng):
    for _ in range(20):
        rows = int(rng.integers(2, 9))
        cols = int(rng.integers(2, 9))
        grid, mats = random_raw_case(rng, rows, cols)
        t = rng.uniform(260.0, 320.0, (rows, cols))
        q_x = rng.uniform(-100.0, 100.0, (rows, cols))
        t_inf = float(rng.uniform(260.0, 310.0))
        config = bare_config(max_inner_iterations=1)
        state = hg.ThermalState(t=t.copy(), t_prev_step=t.copy())
        new, _ = hg.step(state, grid, mats, config, dark_boundary(t_inf, q_x=q_x))
        direct = baseline_update(t, t, grid, mats, config.dt, t_inf, q_x)
        rel = np.abs(new.t - direct) / np.abs(direct)
        assert rel.max() <= 1e-12


# -----------------------------------------------------------------------------
# step behavior
# -----------------------------------------------------------------------------

def test_uniform_state_is_fixed_point_in_one_iteration(rng):
    grid, mats = random_raw_case(rng, 5, 5)
    config = bare_config()
    t = np.full((5, 5), 288.0)
    state = hg.ThermalState(t=t, t_prev_step=t.copy())
    new, report = hg.step(state, grid, mats, config, dark_boundary(288.0))
    assert report.converged and report.inner_iterations == 1
    assert np.abs(new.t - 288.0).max() < 1e-10


def test_degenerate_denominator_names_cell(rng):
    grid, mats = random_raw_case(rng, 4, 4)
    mats.k_face[:, 2, 1] = 0.0
    mats.h_face[:, 2, 1] = 0.0
    mats.density[2, 1] = 0.0
    config = bare_config()
    t = np.full((4, 4), 290.0)
    state = hg.ThermalState(t=t, t_prev_step=t.copy())
    with pytest.raises(SolverError, match=r"\(2, 1\)"):
        hg.step(state, grid, mats, config, dark_boundary(290.0))


def test_nonconvergence_reported_not_raised(rng):
    grid, mats = random_raw_case(rng, 5, 5)
    config = bare_config(max_inner_iterations=2, convergence_epsilon=1e-12)
    t = rng.uniform(280.0, 300.0, (5, 5))
    state = hg.ThermalState(t=t, t_prev_step=t.copy())
    new, report = hg.step(state, grid, mats, config, dark_boundary(250.0))
    assert not report.converged
    assert report.inner_iterations == 2
    assert report.max_delta >= config.convergence_epsilon


def test_interior_lw_requires_matrix(canonical):
    grid, mats, config = canonical
    t = np.full((grid.rows, grid.cols), 293.0)
    state = hg.ThermalState(t=t, t_prev_step=t.copy())
    with pytest.raises(SolverError, match="exchange"):
        hg.step(state, grid, mats, config, dark_boundary(293.0))


def test_state_shape_mismatch_rejected(canonical):
    grid, mats, config = canonical
    t = np.full((3, 3), 293.0)
    state = hg.ThermalState(t=t, t_prev_step=t.copy())
    with pytest.raises(SolverError, match="shape"):
        hg.step(state, grid, mats, config, dark_boundary(293.0))


def test_boundary_cells_pinned_to_ambient():
    cv = np.full((5, 5), int(CvType.BOUNDARY))
    cv[1:-1, 1:-1] = int(CvType.EXTERIOR_WALL)
    cv[2, 2] = int(CvType.INTERIOR_AIR)
    grid = BuildingGrid.from_cv_types(cv, 0.5, 0.5, 3.0)
    mats = MaterialField.zeros(5, 5)
    mats.k_face[:, 1:-1, 1:-1] = 0.8
    mats.h_face[:, grid.exposed_mask.any(axis=0)] = 10.0
    mats.heat_capacity[:] = 900.0
    mats.density[:] = 1500.0
    mats.density[cv == int(CvType.BOUNDARY)] = 0.0
    t = np.full((5, 5), 300.0)
    state = hg.ThermalState(t=t, t_prev_step=t.copy())
    new, report = hg.step(state, grid, mats, bare_config(), dark_boundary(270.0))
    boundary_cells = grid.cv_type == int(CvType.BOUNDARY)
    assert (new.t[boundary_cells] == 270.0).all()
    assert (new.t[~boundary_cells] < 300.0).all()  # cooling toward ambient


def test_hot_cell_decay_is_symmetric_and_matches_oracle(rng):
    rows = cols = 7
    cv = np.full((rows, cols), int(CvType.EXTERIOR_WALL))
    cv[1:-1, 1:-1] = int(CvType.INTERIOR_AIR)
    grid = BuildingGrid.from_cv_types(cv, 0.5, 0.5, 3.0)
    mats = MaterialField.zeros(rows, cols)
    mats.k_face[:] = 0.6
    for d in range(4):
        mats.k_face[d][grid.exposed_mask[d]] = 0.0
        mats.h_face[d][grid.exposed_mask[d]] = 8.0
    mats.heat_capacity[:] = 1000.0
    mats.density[:] = 100.0
    config = bare_config(convergence_epsilon=1e-9, max_inner_iterations=5000)
    t = np.full((rows, cols), 290.0)
    t[3, 3] = 320.0
    state = hg.ThermalState(t=t.copy(), t_prev_step=t.copy())
    bc = dark_boundary(290.0)
    new_t, _ = hg.step(state, grid, mats, config, bc)
    state_o = hg.ThermalState(t=t.copy(), t_prev_step=t.copy())
    new_o, _ = hg.oracle_step(state_o, grid, mats, config, bc)

    field = new_t.t
    assert np.allclose(field, field.T, atol=1e-9)
    assert np.allclose(field, field[::-1, :], atol=1e-9)
    assert field[3, 3] > field[3, 4] > field[3, 5]
    assert np.abs(field - new_o.t).max() < 1e-7


def test_trajectories_bit_identical(canonical, canonical_weather):
    grid, mats, config = canonical
    runs = []
    for _ in range(2):
        snaps, _ = hg.run_episode(grid, mats, config, canonical_weather, 5)
        runs.append(snaps)
    for a, b in zip(*runs):
        assert np.array_equal(a.t, b.t)
        assert np.array_equal(a.mass.t_mass, b.mass.t_mass)


# -----------------------------------------------------------------------------
# episodes
# -----------------------------------------------------------------------------

def test_episode_rejects_zero_steps(canonical, canonical_weather):
    grid, mats, config = canonical
    with pytest.raises(ValueError, match="n_steps"):
        hg.run_episode(grid, mats, config, canonical_weather, 0)


def test_episode_snapshot_cadence(canonical, canonical_weather):
    grid, mats, config = canonical
    snaps, reports = hg.run_episode(
        grid, mats, config, canonical_weather, 5, snapshot_every=2
    )
    assert len(reports) == 5
    assert [s.step_index for s in snaps] == [2, 4, 5]


def test_episode_weather_horizon_error_carries_step_index(canonical):
    from datetime import timedelta

    grid, mats, config = canonical
    first = constant_weather(t_air=290.0)[0]
    # two records an hour apart cover two hours in total (one held interval)
    second = hg.WeatherRecord(
        timestamp=first.timestamp + timedelta(hours=1),
        t_air=291.0, t_gnd=290.0, t_sky=None, ghi=0.0, dni=0.0, dhi=0.0,
    )
    with pytest.raises(SolverError, match="step 25"):
        hg.run_episode(grid, mats, config, [first, second], 40)  # 40 * 300 s > 2 h


def test_long_constant_weather_approaches_steady_state(canonical):
    grid, mats, config = canonical
    records = constant_weather(t_air=283.0, t_gnd=281.0, t_sky=265.0)
    snaps, reports = hg.run_episode(grid, mats, config, records, 60)
    moves = [r.max_delta for r in reports]
    # per-step change settles monotonically after the initial transient
    assert moves[-1] < moves[5] < moves[0] or moves[-1] < config.convergence_epsilon

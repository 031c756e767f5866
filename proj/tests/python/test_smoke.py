"""End-to-end smoke tests for the compiled python bindings."""

import json
import math
import os

import pytest

import mfront


@pytest.fixture(scope="module")
def spec():
    return mfront.make_problem(0.1, n=801)


def test_make_problem_and_exact_steady(spec):
    assert spec.epsilon == pytest.approx(0.1)
    assert spec.grid.n() == 801
    steady = mfront.exact_steady(spec)
    assert len(steady.profile) == 801
    assert steady.profile[0] == pytest.approx(1.0, abs=1e-8)
    assert steady.profile[-1] == pytest.approx(-1.0, abs=1e-8)
    assert steady.kappa == pytest.approx(0.50009, rel=1e-3)
    assert abs(steady.x_star) < 1e-12
    assert abs(mfront.equilibrium_point(spec)) < 1e-12


def test_member_and_residual(spec):
    member = mfront.approx_member(spec, 0.2)
    assert member.xi == pytest.approx(0.2)
    assert len(member.profile) == spec.grid.n()
    omega = mfront.omega_residual(spec, member)
    omega_log = mfront.omega_residual_log(spec, member)
    assert omega > 0.0
    assert omega < 1e-2
    assert math.exp(omega_log.log_abs) == pytest.approx(omega, rel=1e-12)


def test_spectrum_layout(spec):
    member = mfront.approx_member(spec, 0.2)
    sp = mfront.spectrum(spec, member, modes=3)
    assert len(sp.eigenvalues) == 3
    assert sp.eigenvalues[0] < 0.0
    assert sp.eigenvalues[0] > sp.eigenvalues[1] > sp.eigenvalues[2]
    assert len(sp.phi) == 3 and len(sp.phi[0]) == spec.grid.n()
    assert max(sp.residuals) <= 1e-8 * max(1.0, abs(sp.eigenvalues[-1]))


def test_reduced_dynamics(spec):
    theta = mfront.interface_speed(spec, 0.2, fast=True)
    assert theta.sign == -1  # right of center, pushed back toward it
    beta = mfront.decay_rate(spec, fast=True)
    assert beta > 0.0
    traj = mfront.integrate_interface(spec, 0.3, fast=True)
    assert list(traj.times) == sorted(traj.times)
    assert abs(traj.xi[-1]) < abs(traj.xi[0])
    assert mfront.halving_time(spec, 0.3, fast=True) > 0.0


def test_extraction_and_simulation(spec):
    u0 = mfront.member_plus_bump(spec, 0.2, 0.05, 0.0, 0.2)
    found = mfront.extract_interface(u0, spec)
    assert found.xi_hat == pytest.approx(0.2, abs=0.05)

    run = mfront.run_simulation(spec, u0, t_end=1.0, snapshot_count=4)
    assert not run.blew_up
    assert len(run.snapshots) >= 4
    assert run.final_state.t == pytest.approx(1.0)
    assert run.snapshots[-1].v_norms.l2 < run.snapshots[0].v_norms.l2


def test_config_roundtrip_and_artifacts(tmp_path):
    text = json.dumps(
        {
            "problem": {"epsilon": 0.1, "ell": 1.0, "n": 201},
            "experiment": {"kind": "steady"},
        }
    )
    cfg = mfront.ExperimentConfig.from_json(text)
    again = mfront.ExperimentConfig.from_json(cfg.to_json())
    assert again.to_json() == cfg.to_json()

    spec = cfg.make_problem(0.1)
    assert spec.grid.n() == 201

    mfront.run_experiment_config(cfg, out_dir=str(tmp_path))
    profile = tmp_path / "steady_profile.csv"
    assert profile.exists()
    with open(profile, "rb") as fh:
        header = fh.readline()
    assert header == b"x,u\n"
    assert (tmp_path / "steady_metadata.json").exists()

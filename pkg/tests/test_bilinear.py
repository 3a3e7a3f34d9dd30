import numpy as np
import pytest

from bolab.bilinear import (
    BilinearSweepConfig,
    LatticeMismatchError,
    SpaceTimeField,
    UndefinedRatioError,
    band,
    bourgain_norm,
    dual_norm_estimate,
    dyadic_index,
    estimate_ratio,
    extension,
    linf_l2_norm,
    modulation_identity_check,
    modulation_triple,
    product_field,
    random_block,
    run_ratio_sweep,
    smooth_bump,
    spacetime_from_trajectory,
    tau_grid,
    trilinear_form,
)
from bolab.solver import SolverConfig, Trajectory, solve
from bolab.spectral import GridSpec, analyze, field_from_modes, semigroup_bo


def point_mass(xi0, tau_index, value, xi_lo, xi_hi, tau, symbol):
    xi = np.arange(xi_lo, xi_hi)
    vals = np.zeros((xi.size, tau.size), dtype=complex)
    vals[xi0 - xi_lo, tau_index + tau.size // 2] = value
    return SpaceTimeField(xi, tau, vals, symbol)


class TestBump:
    def test_plateau_and_support(self):
        t = np.array([-2.5, -2.0, -1.0, -0.3, 0.0, 0.9, 1.0, 1.5, 2.0, 3.0])
        eta = smooth_bump(t)
        assert np.all(eta[np.abs(t) <= 1.0] == 1.0)
        assert np.all(eta[np.abs(t) >= 2.0] == 0.0)
        assert np.all((0.0 <= eta) & (eta <= 1.0))

    def test_monotone_on_transition(self):
        t = np.linspace(1.0, 2.0, 200)
        eta = smooth_bump(t)
        assert np.all(np.diff(eta) <= 1e-12)


class TestBourgainNorm:
    def test_point_mass_formula(self):
        tau = tau_grid(16, 0.5)
        f = point_mass(3, 1, 2.0, 2, 4, tau, "schrodinger_minus")
        xi0, tau0 = 3.0, 0.5
        want = (1 + xi0**2) ** 0.35 * (1 + (tau0 + xi0**2) ** 2) ** 0.15 * 2.0 * np.sqrt(0.5)
        assert np.isclose(bourgain_norm(f, 0.7, 0.3), want, rtol=1e-13)

    def test_zero_weights_is_plain_l2(self):
        tau = tau_grid(32, 0.25)
        f = random_block(3, +1, tau, "bo", 1)
        direct = np.sqrt(np.sum(np.abs(f.values) ** 2) * f.dtau)
        assert np.isclose(bourgain_norm(f, 0.0, 0.0), direct, rtol=1e-13)

    def test_monotone_in_b_off_characteristic(self):
        # support shifted so <tau+omega> >= 2 everywhere
        tau = tau_grid(32, 1.0)
        xi = np.arange(1, 3)
        vals = np.zeros((2, 32), dtype=complex)
        rng = np.random.default_rng(2)
        # place mass away from tau = -xi^2
        for i, x in enumerate(xi):
            for k in range(32):
                if abs(tau[k] + x * x) >= 2.0:
                    vals[i, k] = rng.standard_normal() + 1j * rng.standard_normal()
        f = SpaceTimeField(xi, tau, vals, "schrodinger_minus")
        norms = [bourgain_norm(f, 0.0, b) for b in (0.0, 0.25, 0.5, 1.0)]
        assert np.all(np.diff(norms) > 0.0)


class TestModulation:
    def test_worked_example(self):
        l1, l2, l3, m, j = modulation_triple(3, -9, -2, 4)
        assert (l1, l2, l3) == (0, 0, 4)
        assert (m, j) == (2, 1)
        assert max(l1, l2, l3) >= 2 ** (m + j) / 6.0

    def test_characteristic_pair_reduces_to_cross_term(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            xi1 = int(rng.integers(-40, 40))
            xi2 = int(rng.integers(-40, 40))
            if xi2 == 0 or xi1 + xi2 == 0:
                continue
            l1, l2, l3, _, _ = modulation_triple(xi1, -xi1 * xi1, xi2, xi2 * xi2)
            assert l1 == 0 and l2 == 0
            assert l3 == abs(2 * xi2 * (xi1 + xi2))

    def test_randomized_lattice_samples(self):
        rng = np.random.default_rng(4)
        arr = rng.integers(-300, 300, size=(10_000, 4))
        samples = [
            (int(a), int(b), int(c), int(d)) for a, b, c, d in arr if c != 0 and a + c != 0
        ]
        assert modulation_identity_check(samples) == 0

    def test_dyadic_index(self):
        assert dyadic_index(1) == 1
        assert dyadic_index(2) == 2
        assert dyadic_index(3) == 2
        assert dyadic_index(4) == 3
        with pytest.raises(ValueError):
            dyadic_index(0)


class TestTrilinearForm:
    def setup_method(self):
        self.tau = tau_grid(64, 0.5)
        self.v = random_block(3, +1, self.tau, "schrodinger_minus", 5)
        self.u = random_block(2, -1, self.tau, "schrodinger_plus", 6)
        self.p = random_block(2, -1, self.tau, "schrodinger_plus", 7)

    def test_zero_input_gives_zero(self):
        z = SpaceTimeField(self.v.xi, self.tau, np.zeros_like(self.v.values), self.v.symbol)
        assert trilinear_form(z, self.u, self.p) == 0.0

    def test_partition_is_exact(self):
        total = trilinear_form(self.v, self.u, self.p)
        parts = [
            trilinear_form(self.v, self.u, self.p, restriction=r)
            for r in ("A1", "A1c*A3", "A1c*A2*A3c")
        ]
        assert abs(total - sum(parts)) <= 1e-12 * abs(total)

    def test_point_masses_multiply(self):
        tau = tau_grid(16, 0.5)
        v = point_mass(3, 1, 2.0 + 1j, 2, 4, tau, "schrodinger_minus")
        u = point_mass(-2, 2, 1.5, -4, -1, tau, "schrodinger_plus")
        p = point_mass(-1, -3, 0.5 - 0.5j, -2, 0, tau, "schrodinger_plus")
        got = trilinear_form(v, u, p)
        assert np.isclose(got, (2 + 1j) * 1.5 * (0.5 - 0.5j) * 0.25, rtol=1e-13)

    def test_lattice_mismatch(self):
        other = random_block(2, -1, tau_grid(64, 0.25), "schrodinger_plus", 8)
        with pytest.raises(LatticeMismatchError):
            trilinear_form(self.v, self.u, other)

    def test_unknown_restriction(self):
        with pytest.raises(ValueError):
            trilinear_form(self.v, self.u, self.p, restriction="A2")


class TestExtension:
    def make_traj(self, t_cap=1.0, m=64, n=32):
        grid = GridSpec(n)
        dt_snap = 4.0 * t_cap / m
        u0 = analyze(np.cos(grid.x), grid)
        cfg = SolverConfig(dt=dt_snap / 8.0, t_end=t_cap, record_every=8)
        return solve(u0, cfg), t_cap, m

    def test_agrees_with_trajectory_on_window(self):
        traj, t_cap, m = self.make_traj()
        times, samples = extension(traj, t_cap, m)
        for i, t in enumerate(times):
            if 0.0 <= t <= t_cap:
                want = traj.state_at(float(t)).coeffs
                assert np.max(np.abs(samples[:, i] - want)) == 0.0

    def test_vanishes_outside_double_window(self):
        traj, t_cap, m = self.make_traj()
        times, samples = extension(traj, t_cap, m)
        outside = np.abs(times) >= 2.0 * t_cap - 1e-12
        assert np.max(np.abs(samples[:, outside])) == 0.0

    def test_single_mode_scalar_composition(self):
        # for a free wave the extension is eta * (free wave) at every time
        grid = GridSpec(32)
        t_cap, m = 1.0, 64
        dt_snap = 4.0 * t_cap / m
        e1 = field_from_modes(grid, {1: 2.0 * np.pi})
        times_snap = np.arange(0.0, t_cap + 1e-12, dt_snap)
        states = [semigroup_bo(e1, t) for t in times_snap]
        traj = Trajectory(grid=grid, times=times_snap, states=states,
                          config=SolverConfig(dt=dt_snap, t_end=t_cap))
        times, samples = extension(traj, t_cap, m, symbol="bo")
        scalar = smooth_bump(times / t_cap) * np.exp(-1j * times) * 2.0 * np.pi
        assert np.max(np.abs(samples[1, :] - scalar)) < 1e-13 * 2.0 * np.pi

    def test_insufficient_coverage(self):
        traj, t_cap, m = self.make_traj()
        with pytest.raises(ValueError):
            extension(traj, 2.0 * t_cap, m)


class TestSpacetimeTransform:
    def test_zero_trajectory(self):
        grid = GridSpec(32)
        cfg = SolverConfig(dt=1.0 / 16.0, t_end=1.0, record_every=1)
        from bolab.spectral import zero_field

        traj = solve(zero_field(grid), cfg)
        st = spacetime_from_trajectory(traj, 1.0, 64)
        assert np.all(st.values == 0.0)

    def test_parseval_in_time(self):
        grid = GridSpec(32)
        t_cap, m = 1.0, 64
        u0 = analyze(np.cos(grid.x), grid)
        cfg = SolverConfig(dt=4.0 * t_cap / m / 8.0, t_end=t_cap, record_every=8)
        traj = solve(u0, cfg)
        st = spacetime_from_trajectory(traj, t_cap, m)
        times, samples = extension(traj, t_cap, m)
        dt = times[1] - times[0]
        lhs = np.sum(np.abs(st.values) ** 2) * st.dtau / (2.0 * np.pi) ** 2
        rhs = float(np.sum(np.abs(samples) ** 2) / (2.0 * np.pi) * dt)
        assert abs(lhs - rhs) < 1e-6 * rhs

    def test_free_wave_concentrates_at_characteristic(self):
        grid = GridSpec(32)
        t_cap, m = 1.0, 256
        dt_snap = 4.0 * t_cap / m
        xi0 = 3
        e = field_from_modes(grid, {xi0: 2.0 * np.pi})
        times_snap = np.arange(0.0, t_cap + 1e-12, dt_snap)
        states = [semigroup_bo(e, t) for t in times_snap]
        traj = Trajectory(grid=grid, times=times_snap, states=states,
                          config=SolverConfig(dt=dt_snap, t_end=t_cap))
        st = spacetime_from_trajectory(traj, t_cap, m, symbol="bo")
        row = np.abs(st.values[list(st.xi).index(xi0)]) ** 2
        peak = int(np.argmax(row))
        # characteristic tau = -|xi0| xi0 = -9
        assert abs(st.tau[peak] + 9.0) <= st.dtau
        assert row[max(0, peak - 2) : peak + 3].sum() > 0.9 * row.sum()


class TestEstimateRatio:
    def test_zero_inputs_raise(self):
        tau = tau_grid(128, 0.5)
        v = random_block(4, +1, tau, "schrodinger_minus", 1)
        z = SpaceTimeField(band(3, -1), tau, np.zeros((4, 128), dtype=complex),
                           "schrodinger_plus")
        with pytest.raises(UndefinedRatioError):
            estimate_ratio(v, z, 4, 3, 3)

    def test_ratio_finite_on_random_blocks(self):
        tau = tau_grid(512, 0.5)
        v = random_block(4, +1, tau, "schrodinger_minus", 2)
        u = random_block(3, -1, tau, "schrodinger_plus", 3)
        r = estimate_ratio(v, u, 4, 3, 3)
        assert np.isfinite(r) and r > 0.0

    def test_ratio_finite_on_characteristic_u(self):
        tau = tau_grid(512, 0.5)
        v = random_block(4, +1, tau, "schrodinger_minus", 4)
        u = random_block(3, -1, tau, "schrodinger_plus", 5, profile="characteristic")
        r = estimate_ratio(v, u, 4, 3, 3)
        assert np.isfinite(r)

    def test_support_validation(self):
        tau = tau_grid(128, 0.5)
        v = random_block(4, +1, tau, "schrodinger_minus", 6)
        u = random_block(3, -1, tau, "schrodinger_plus", 7)
        with pytest.raises(ValueError):
            estimate_ratio(v, u, 5, 3, 3)  # V really lives in band 4

    def test_small_sweep_runs(self):
        cfg = BilinearSweepConfig(mj_pairs=((4, 2),), k_values=(4, 5), ensemble=2,
                                  n_tau=256, dtau=0.5)
        rows, summary = run_ratio_sweep(cfg)
        assert len(rows) == 4
        d = summary["m4_j2"]
        assert d["n_points"] == 2
        assert np.isfinite(d["slope"])


class TestProductField:
    def test_single_modes_convolve(self):
        tau = tau_grid(16, 0.5)
        v = point_mass(3, 1, 2.0, 2, 4, tau, "schrodinger_minus")
        u = point_mass(-2, 2, 3.0, -4, -1, tau, "schrodinger_plus")
        w = product_field(v, u)
        i = list(w.xi).index(1)
        k = 3 + w.tau.size // 2  # tau = 0.5 + 1.0 = 1.5 -> index 3
        want = 2.0 * 3.0 * w.dtau / (2.0 * np.pi) ** 2
        assert np.isclose(w.values[i, k], want, rtol=1e-13)
        mask = np.ones_like(w.values, dtype=bool)
        mask[i, k] = False
        assert np.max(np.abs(w.values[mask])) == 0.0


def test_dual_norm_within_factor_two():
    tau = tau_grid(64, 0.5)
    f = random_block(3, +1, tau, "schrodinger_minus", 9)
    direct, paired = dual_norm_estimate(f, 0.55)
    assert paired <= direct * (1.0 + 1e-10)
    assert paired >= direct / 2.0


def test_linf_l2_of_constant_in_time_field():
    # a field whose tau content is a single zero bin is constant in time;
    # its sup-in-time L2 norm equals that constant's L2 norm
    tau = tau_grid(32, 0.5)
    xi = np.arange(1, 3)
    vals = np.zeros((2, 32), dtype=complex)
    vals[0, 16] = 2.0 * np.pi  # tau = 0 bin
    f = SpaceTimeField(xi, tau, vals, "schrodinger_minus")
    # fhat(xi=1, t) = (1/2pi) * value * dtau = dtau; L2 over x: dtau/sqrt(2pi)
    want = f.dtau * 2.0 * np.pi / (2.0 * np.pi) / np.sqrt(2.0 * np.pi)
    assert np.isclose(linf_l2_norm(f), want, rtol=1e-12)

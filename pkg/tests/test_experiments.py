import numpy as np
import pytest

from bolab.experiments import (
    DataGenSpec,
    ExperimentConfig,
    dyadic_split_norm,
    fit_power_law,
    gen_field,
    gen_random_sobolev,
    partial_sum_check,
    run_growth,
    run_smoothing,
    theorem_11_window,
    write_csv,
)
from bolab.solver import SolverConfig
from bolab.spectral import GridSpec, analyze, field_from_modes, sobolev_norm

from conftest import random_real_field


def small_solver(**kw):
    defaults = dict(dt=2e-3, t_end=1.0, record_every=100, conservation_tolerance=1e-5)
    defaults.update(kw)
    return SolverConfig(**defaults)


class TestRandomSobolev:
    def test_deterministic(self, grid256):
        spec = DataGenSpec(kind="random_sobolev", s_target=0.55, target_norm=1.0, seed=12)
        a = gen_random_sobolev(spec, grid256)
        b = gen_random_sobolev(spec, grid256)
        assert np.array_equal(a.coeffs, b.coeffs)

    def test_norm_hits_target(self, grid256):
        spec = DataGenSpec(kind="random_sobolev", s_target=0.55, target_norm=2.5, seed=1)
        f = gen_random_sobolev(spec, grid256)
        assert abs(sobolev_norm(f, 0.55) - 2.5) < 1e-10
        assert f.is_real and f.mean_zero

    def test_decay_slope_over_ensemble(self):
        # ensemble mean of log|u(xi)| vs log<xi> regresses to -(s+1/2+delta)
        grid = GridSpec(512)
        s_target, delta = 0.55, 0.01
        acc = np.zeros(grid.n_modes // 4)
        n_seeds = 32
        for seed in range(n_seeds):
            spec = DataGenSpec(kind="random_sobolev", s_target=s_target,
                               target_norm=1.0, decay_offset=delta, seed=seed)
            f = gen_random_sobolev(spec, grid)
            acc += np.abs(f.coeffs[1 : grid.n_modes // 4 + 1])
        xi = np.arange(1, grid.n_modes // 4 + 1, dtype=float)
        slope = np.polyfit(np.log(np.sqrt(1 + xi * xi)), np.log(acc / n_seeds), 1)[0]
        assert abs(slope + (s_target + 0.5 + delta)) < 0.1

    def test_coarse_modes_shared_across_resolutions(self):
        spec = DataGenSpec(kind="random_sobolev", s_target=0.75, target_norm=1.0, seed=3)
        small = gen_random_sobolev(spec, GridSpec(64))
        big = gen_random_sobolev(spec, GridSpec(256))
        # same Gaussian draws feed the first 16 modes; rescaling differs only
        # by the overall norm factor
        ratio = big.coeffs[1] / small.coeffs[1]
        assert np.allclose(big.coeffs[1:17], ratio * small.coeffs[1:17], rtol=1e-12)


class TestConfigValidation:
    def test_smoothing_range_accepts_valid(self):
        ExperimentConfig(
            kind="smoothing", s=0.55, a_grid=(0.1, 0.3), n_grid=(64,),
            solver=small_solver(), data_gen=DataGenSpec(),
        )

    def test_smoothing_rejects_out_of_range_gain(self):
        with pytest.raises(ValueError, match="admissible range"):
            ExperimentConfig(
                kind="smoothing", s=0.4, a_grid=(0.35,), n_grid=(64,),
                solver=small_solver(), data_gen=DataGenSpec(),
            )

    def test_growth_requires_s_above_half(self):
        with pytest.raises(ValueError):
            ExperimentConfig(
                kind="growth", s=0.5, n_grid=(64,),
                solver=small_solver(), data_gen=DataGenSpec(),
            )

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            ExperimentConfig(
                kind="blowup", s=0.75, n_grid=(64,),
                solver=small_solver(), data_gen=DataGenSpec(),
            )


class TestFitPowerLaw:
    def test_exact_power_law(self):
        t = np.linspace(0.0, 50.0, 64)
        v = (1.0 + t * t) ** 0.75  # <t>^{1.5}
        fit = fit_power_law(t, v)
        assert abs(fit.exponent - 1.5) < 1e-10
        assert not fit.degenerate

    def test_constant_series(self):
        fit = fit_power_law(np.linspace(1, 10, 12), np.full(12, 3.7))
        assert fit.exponent == 0.0
        assert fit.degenerate

    def test_noisy_synthetic(self):
        rng = np.random.default_rng(0)
        t = np.linspace(1.0, 60.0, 200)
        v = (1.0 + t * t) ** 0.4 * np.exp(rng.normal(0.0, 0.01, t.size))
        fit = fit_power_law(t, v)
        assert abs(fit.exponent - 0.8) < 0.05
        assert fit.r_squared > 0.9

    def test_requires_eight_points(self):
        with pytest.raises(ValueError):
            fit_power_law([1, 2, 3], [1.0, 2.0, 3.0])

    def test_requires_positive_values(self):
        with pytest.raises(ValueError):
            fit_power_law(np.arange(10.0), np.linspace(-1, 1, 10))


class TestPartialSum:
    def test_arithmetic_series(self):
        r = partial_sum_check(1.0, 10)
        assert r.total == 55.0
        assert r.asymptote == 50.0
        assert r.error == 5.0

    def test_flat_series(self):
        r = partial_sum_check(0.0, 100)
        assert r.total == 100.0 and r.error == 0.0

    def test_inverse_sqrt_error_is_bounded(self):
        r = partial_sum_check(-0.5, 10**6)
        assert abs(r.error) <= 2.0  # ~ zeta(1/2) = -1.4603...

    def test_alpha_validation(self):
        with pytest.raises(ValueError):
            partial_sum_check(-1.0, 100)


class TestDyadicSplit:
    def test_high_part_empty_beyond_grid(self, grid64):
        f = random_real_field(grid64, 2)
        low, high = dyadic_split_norm(f, 0.75, 64)
        assert high == 0.0
        assert abs(low - sobolev_norm(f, 0.75)) < 1e-13

    def test_single_mode_above_cutoff(self, grid64):
        f = field_from_modes(grid64, {5: np.pi}, real=True)
        low, high = dyadic_split_norm(f, 0.75, 4)
        assert low == 0.0
        assert abs(high - sobolev_norm(f, 0.75)) < 1e-13

    @pytest.mark.parametrize("s", [0.5, 0.75, 1.0])
    @pytest.mark.parametrize("cutoff", [1, 4, 9, 33])
    def test_pythagoras_and_multiplier_bound(self, grid256, s, cutoff):
        f = random_real_field(grid256, 40 + cutoff)
        low, high = dyadic_split_norm(f, s, cutoff)  # multiplier bound asserted inside
        total = sobolev_norm(f, s)
        assert abs(low**2 + high**2 - total**2) < 1e-12 * total**2


def test_theorem_11_window_caps_at_one(grid64):
    small = gen_random_sobolev(DataGenSpec(s_target=1.0, target_norm=0.1, seed=0), grid64)
    assert theorem_11_window(small, 1e-2) == 1.0
    big = gen_random_sobolev(DataGenSpec(s_target=1.0, target_norm=10.0, seed=0), grid64)
    assert theorem_11_window(big, 1e-2) < 1.0


class TestRunners:
    def test_smoothing_small_and_deterministic(self, tmp_path):
        cfg = ExperimentConfig(
            kind="smoothing", s=0.55, a_grid=(0.2,), n_grid=(64, 128), seed=1,
            ensemble=2, solver=small_solver(), data_gen=DataGenSpec(s_target=0.55),
        )
        s1 = run_smoothing(cfg, tmp_path / "a")
        s2 = run_smoothing(cfg, tmp_path / "b")
        for name in ("smoothing.csv", "smoothing_summary.json"):
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
        beta = s1["per_a"]["0.2"]["beta"]
        assert np.isfinite(beta)

    def test_growth_small(self, tmp_path):
        cfg = ExperimentConfig(
            kind="growth", s=1.0, n_grid=(64,), seed=2, ensemble=1, t_end=2.0,
            solver=small_solver(t_end=2.0),
            data_gen=DataGenSpec(kind="random_sobolev", s_target=1.0, target_norm=0.5),
        )
        summary = run_growth(cfg, tmp_path)
        assert summary["bound_exponent"] == pytest.approx(1.51)
        assert np.isfinite(summary["gamma_max"])
        header = (tmp_path / "growth.csv").read_text().splitlines()[0]
        assert header == "seed,t,hs_norm,i1,i2,e3,energy_half"

    def test_kind_mismatch(self, tmp_path):
        cfg = ExperimentConfig(kind="growth", s=1.0, n_grid=(64,),
                               solver=small_solver(), data_gen=DataGenSpec())
        with pytest.raises(ValueError):
            run_smoothing(cfg, tmp_path)


def test_write_csv_formats_floats_stably(tmp_path):
    path = tmp_path / "x.csv"
    write_csv(path, ["a", "b"], [(1, 0.1), (2, 1e-17)])
    assert path.read_text() == "a,b\n1,0.1\n2,1e-17\n"

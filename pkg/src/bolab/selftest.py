"""Programmatic invariant battery behind ``bolab selftest``.

Each check is small and fast; together they cover the operator algebra,
the integrator's linear exactness, conservation on a short run, the gauge
identities, and the modulation-set machinery.  Returns True iff every
check passes, printing one line per check.
"""

from __future__ import annotations

import numpy as np

from . import bilinear, gauge, solver, spectral
from .experiments import DataGenSpec, gen_random_sobolev


def _check(name, fn, report):
    try:
        fn()
        report(f"PASS {name}")
        return True
    except Exception as exc:  # noqa: BLE001 - the battery reports, not raises
        report(f"FAIL {name}: {exc}")
        return False


def run_selftest(report=print) -> bool:
    grid = spectral.GridSpec(64)
    x = grid.x
    cos = spectral.analyze(np.cos(x), grid)
    rng_field = gen_random_sobolev(DataGenSpec(seed=11, s_target=0.75), grid)

    def operator_algebra():
        sin = spectral.analyze(np.sin(x), grid)
        assert np.allclose(spectral.hilbert(cos).coeffs, sin.coeffs, atol=1e-12)
        one = spectral.analyze(np.ones_like(x), grid)
        assert np.max(np.abs(spectral.hilbert(one).coeffs)) == 0.0
        twice = spectral.hilbert(spectral.hilbert(rng_field))
        assert np.allclose(twice.coeffs, -rng_field.coeffs, atol=1e-12)
        total = (spectral.project(rng_field, "plus") + spectral.project(rng_field, "minus")).coeffs
        assert np.allclose(total, rng_field.coeffs, atol=1e-12)
        rt = spectral.derivative(spectral.antiderivative(rng_field))
        assert np.allclose(rt.coeffs, rng_field.coeffs, atol=1e-12)

    def round_trip():
        samples = spectral.synthesize(rng_field)
        assert np.allclose(spectral.analyze(samples, grid).coeffs, rng_field.coeffs,
                           rtol=1e-13, atol=1e-13)

    def linear_exactness():
        cfg = solver.SolverConfig(dt=0.05, t_end=0.05, nonlinear=False)
        stepped = solver.step(cos, 0.05, cfg)
        exact = spectral.semigroup_bo(cos, 0.05)
        assert np.max(np.abs(stepped.coeffs - exact.coeffs)) < 1e-13

    def conservation_short():
        cfg = solver.SolverConfig(dt=1e-3, t_end=0.2, record_every=50)
        traj = solver.solve(cos, cfg)
        i2 = [solver.conserved(u).i2 for u in traj.states]
        assert abs(i2[-1] - i2[0]) < 1e-10 * i2[0] + 1e-14

    def gauge_identities():
        w = gauge.gauge_transform(rng_field)
        assert np.max(np.abs(w.coeffs[grid.xi <= 0])) == 0.0
        assert abs(gauge.gauge_constant(cos) - 1.0 / 8.0) < 1e-12
        res = gauge.f_equation_residual(rng_field, solver.bo_rhs(rng_field))
        assert res < 1e-10

    def modulation_sets():
        rng = np.random.default_rng(3)
        samples = [
            (int(a), int(b), int(c), int(d))
            for a, b, c, d in rng.integers(-50, 50, size=(2000, 4))
            if c != 0 and a + c != 0
        ]
        assert bilinear.modulation_identity_check(samples) == 0

    def trilinear_partition():
        tau = bilinear.tau_grid(64, 0.5)
        v = bilinear.random_block(3, +1, tau, "schrodinger_minus", 5)
        u = bilinear.random_block(2, -1, tau, "schrodinger_plus", 6)
        p = bilinear.random_block(2, -1, tau, "schrodinger_plus", 7)
        total = bilinear.trilinear_form(v, u, p)
        parts = sum(
            bilinear.trilinear_form(v, u, p, restriction=r)
            for r in ("A1", "A1c*A3", "A1c*A2*A3c")
        )
        assert abs(total - parts) <= 1e-12 * max(1.0, abs(total))

    checks = [
        ("spectral operator algebra", operator_algebra),
        ("analyze/synthesize round trip", round_trip),
        ("integrator linear exactness", linear_exactness),
        ("short-run conservation", conservation_short),
        ("gauge identities", gauge_identities),
        ("modulation identity and inequality", modulation_sets),
        ("trilinear partition exactness", trilinear_partition),
    ]
    return all([_check(name, fn, report) for name, fn in checks])

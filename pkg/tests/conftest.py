import numpy as np
import pytest

from bolab.spectral import GridSpec, SpectralField, analyze


@pytest.fixture
def grid64():
    return GridSpec(64)


@pytest.fixture
def grid256():
    return GridSpec(256)


def random_real_field(grid: GridSpec, seed: int = 0, scale: float = 1.0) -> SpectralField:
    rng = np.random.default_rng(seed)
    return analyze(scale * rng.standard_normal(grid.n_modes), grid)


def decaying_field(grid: GridSpec, sigma: float, seed: int = 0, amp: float = np.pi,
                   max_mode: int | None = None) -> SpectralField:
    """Real mean-zero field with exponentially decaying spectrum
    c(xi) = amp * exp(-sigma*|xi|) * random phase."""
    n = grid.n_modes
    top = grid.max_mode if max_mode is None else min(max_mode, grid.max_mode)
    rng = np.random.default_rng(seed)
    phases = rng.uniform(0.0, 2.0 * np.pi, top)
    c = np.zeros(n, dtype=complex)
    for k in range(1, top + 1):
        c[k] = amp * np.exp(-sigma * k) * np.exp(1j * phases[k - 1])
        c[-k] = np.conj(c[k])
    return SpectralField(grid, c, is_real=True, mean_zero=True)


def fourier_coefficient_oracle(func, n: int, resolution: int = 1 << 16) -> complex:
    """Independent high-resolution trapezoid quadrature of
    integral exp(-i n x) func(x) dx (spectrally exact for entire func)."""
    x = 2.0 * np.pi * np.arange(resolution) / resolution
    return complex((2.0 * np.pi / resolution) * np.sum(np.exp(-1j * n * x) * func(x)))

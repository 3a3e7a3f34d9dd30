"""Discrete space-time lattice machinery for Bourgain-type norms.

A SpaceTimeField holds coefficients on an integer frequency range crossed
with a uniform tau grid of M points and spacing dtau; the grid represents
the time-frequency content of a window of length 2*pi/dtau.  The symbol
selects the modulation weight <tau + omega(xi)> used by the norms:

    schrodinger_minus: omega(xi) = xi^2        (the X space, weight <tau+xi^2>)
    schrodinger_plus:  omega(xi) = -xi^2       (the X-bar space, weight <tau-xi^2>)
    bo:                omega(xi) = |xi| xi

Norm convention: ||f||^2_{s,b} = sum_xi sum_tau <xi>^{2s} <tau+omega>^{2b}
|f(xi,tau)|^2 dtau (counting measure in xi).  A point mass of value v at
(xi0, tau0) therefore has norm <xi0>^s <tau0+omega(xi0)>^b |v| sqrt(dtau).
Under the package's transform conventions the (s,b) = (0,0) norm squared
equals (2*pi)^2 times the space-time L^2 norm squared.

The trilinear form, its modulation-set decomposition, and the bilinear
estimate ratio sweep all operate on these lattices.  Restriction masks
factor per argument, so the three-set decomposition reuses one evaluator
and sums to the unrestricted value exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .solver import Trajectory
from .spectral import SpectralField, semigroup_bo, semigroup_schrodinger

_SYMBOLS = ("schrodinger_minus", "schrodinger_plus", "bo")


class LatticeMismatchError(ValueError):
    """Operands live on incompatible (xi, tau) lattices."""


class UndefinedRatioError(ZeroDivisionError):
    """The right-hand side of the estimate vanished."""


def omega(symbol: str, xi):
    xi = np.asarray(xi, dtype=float)
    if symbol == "schrodinger_minus":
        return xi * xi
    if symbol == "schrodinger_plus":
        return -xi * xi
    if symbol == "bo":
        return np.abs(xi) * xi
    raise ValueError(f"unknown symbol {symbol!r}")


def smooth_bump(t):
    """C-infinity window: 1 on [-1, 1], 0 outside (-2, 2), monotone between.

    Built from psi(s) = exp(-1/s) for s > 0: eta = psi(2-|t|) /
    (psi(2-|t|) + psi(|t|-1)) on the transition region.
    """
    t = np.abs(np.asarray(t, dtype=float))
    out = np.zeros_like(t)
    out[t <= 1.0] = 1.0
    band = (t > 1.0) & (t < 2.0)
    if np.any(band):
        def psi(s):
            r = np.zeros_like(s)
            pos = s > 0
            r[pos] = np.exp(-1.0 / s[pos])
            return r

        up = psi(2.0 - t[band])
        down = psi(t[band] - 1.0)
        out[band] = up / (up + down)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class SpaceTimeField:
    """Complex coefficients over xi (contiguous integer range) x tau
    (uniform symmetric grid tau_m = m * dtau, m in [-M/2, M/2))."""

    xi: np.ndarray
    tau: np.ndarray
    values: np.ndarray
    symbol: str = "schrodinger_minus"

    def __post_init__(self):
        if self.symbol not in _SYMBOLS:
            raise ValueError(f"symbol must be one of {_SYMBOLS}")
        if self.values.shape != (self.xi.size, self.tau.size):
            raise LatticeMismatchError("values shape does not match lattice")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("non-finite space-time values")
        if self.tau.size >= 2:
            d = np.diff(self.tau)
            if not np.allclose(d, d[0], rtol=1e-12, atol=0.0):
                raise ValueError("tau grid must be uniform")
        self.xi.setflags(write=False)
        self.tau.setflags(write=False)
        self.values.setflags(write=False)

    @property
    def dtau(self) -> float:
        return float(self.tau[1] - self.tau[0])

    def row(self, xi: int):
        i = int(xi) - int(self.xi[0])
        if not 0 <= i < self.xi.size:
            return None
        return self.values[i]

    def modulation(self) -> np.ndarray:
        """<tau + omega(xi)> on the lattice."""
        lam = self.tau[None, :] + omega(self.symbol, self.xi)[:, None]
        return np.sqrt(1.0 + lam * lam)

    def masked(self, mask: np.ndarray) -> "SpaceTimeField":
        return replace(self, values=np.where(mask, self.values, 0.0))

    def restrict_xi(self, keep) -> "SpaceTimeField":
        mask = np.zeros_like(self.values, dtype=bool)
        mask[keep(self.xi), :] = True
        return self.masked(mask)


def tau_grid(n_tau: int, dtau: float) -> np.ndarray:
    if n_tau % 2 != 0:
        raise ValueError("n_tau must be even")
    return dtau * np.arange(-n_tau // 2, n_tau // 2).astype(float)


def bourgain_norm(f: SpaceTimeField, s: float, b: float, symbol: Optional[str] = None) -> float:
    """Weighted lattice norm (see module docstring for the convention)."""
    if symbol is not None and symbol != f.symbol:
        f = replace(f, symbol=symbol)
    xi = f.xi.astype(float)
    wxi = (1.0 + xi * xi) ** s
    wmod = f.modulation() ** (2.0 * b)
    total = np.sum(wxi[:, None] * wmod * np.abs(f.values) ** 2) * f.dtau
    return float(np.sqrt(total))


# ---------------------------------------------------------------------------
# extension operator and trajectory transform
# ---------------------------------------------------------------------------


def _mu_fold(t: float, t_cap: float) -> float:
    if 0.0 <= t <= t_cap:
        return t
    if t_cap < t <= 2.0 * t_cap:
        return 2.0 * t_cap - t
    return 0.0


def _semigroup(symbol: str, u: SpectralField, t: float) -> SpectralField:
    if symbol == "bo":
        return semigroup_bo(u, t)
    if symbol == "schrodinger_minus":
        return semigroup_schrodinger(u, t)
    # schrodinger_plus: conjugate characteristic, multiplier exp(+i xi^2 t)
    return semigroup_schrodinger(u, -t)


def extension(traj: Trajectory, t_cap: float, n_time: int, symbol: str = "bo"):
    """Global-in-time extension u*(t) = S(t) eta(t/T) S(-mu(t)) u(mu(t)).

    mu folds [T, 2T] back onto [0, T] and clamps to 0 elsewhere, so u* agrees
    with u on [0, T] (eta = 1 and mu = identity there) and vanishes for
    |t| >= 2T.  Returns (times, coefficient matrix of shape N x n_time)
    sampled uniformly on [-2T, 2T).  Snapshots must exist at each folded
    time (the sample spacing has to divide the snapshot spacing).
    """
    if n_time % 4 != 0:
        raise ValueError("n_time must be a multiple of 4")
    times = -2.0 * t_cap + (4.0 * t_cap / n_time) * np.arange(n_time)
    if traj.times[-1] < t_cap - 1e-9:
        raise ValueError(f"trajectory covers [0, {traj.times[-1]}], need [0, {t_cap}]")
    n = traj.grid.n_modes
    out = np.zeros((n, n_time), dtype=complex)
    window = smooth_bump(times / t_cap)
    for i, t in enumerate(times):
        if window[i] == 0.0:
            continue
        mu = _mu_fold(float(t), t_cap)
        u = traj.state_at(mu)  # raises if no aligned snapshot
        out[:, i] = window[i] * _semigroup(symbol, u, float(t) - mu).coeffs
    return times, out


def spacetime_from_trajectory(
    traj: Trajectory, t_cap: float, n_time: int, symbol: str = "bo"
) -> SpaceTimeField:
    """Windowed extension followed by a discrete transform in time.

    The tau grid has spacing dtau = 2*pi/(4T) (the window length is 4T) and
    the transform matches the spatial convention: f(xi, tau) =
    dt * sum_n exp(-i tau t_n) fhat(xi, t_n).
    """
    times, samples = extension(traj, t_cap, n_time, symbol)
    dt = times[1] - times[0]
    m = n_time
    spec = dt * np.fft.fft(samples, axis=1)  # bins tau_q = q * dtau, fft order
    spec = np.fft.fftshift(spec, axes=1)
    tau = (2.0 * np.pi / (m * dt)) * np.arange(-m // 2, m // 2).astype(float)
    # fft assumed t_0 = 0; the window actually starts at t_0 = -2T
    spec = spec * np.exp(-1j * tau * times[0])[None, :]
    xi_order = np.argsort(traj.grid.xi)
    xi = traj.grid.xi[xi_order]
    return SpaceTimeField(xi=xi.copy(), tau=tau, values=spec[xi_order], symbol=symbol)


# ---------------------------------------------------------------------------
# modulation identity
# ---------------------------------------------------------------------------


def dyadic_index(x: int) -> int:
    """Smallest m with |x| < 2^m (so 2^(m-1) <= |x| < 2^m for x != 0)."""
    ax = abs(int(x))
    if ax == 0:
        raise ValueError("dyadic index undefined for 0")
    return ax.bit_length()


def modulation_triple(xi1, tau1, xi2, tau2):
    """The three modulations (L1, L2, L3) and dyadic indices (m, j) of
    |xi2| and |xi1+xi2|."""
    if xi2 == 0 or xi1 + xi2 == 0:
        raise ValueError("requires xi2 != 0 and xi1 + xi2 != 0")
    l1 = abs(tau1 + xi1**2)
    l2 = abs(tau2 - xi2**2)
    l3 = abs(-(tau1 + tau2) - (xi1 + xi2) ** 2)
    return l1, l2, l3, dyadic_index(xi2), dyadic_index(xi1 + xi2)


def modulation_identity_check(samples) -> int:
    """Count violations of the resonance identity and of
    max(L1, L2, L3) >= 2^(m+j)/6 over (xi1, tau1, xi2, tau2) samples.

    Integer inputs are checked in exact integer arithmetic; floats to a
    1e-9 relative slack on the identity.  Returns the violation count
    (zero for any valid sample set).
    """
    bad = 0
    for xi1, tau1, xi2, tau2 in samples:
        l1, l2, l3, m, j = modulation_triple(xi1, tau1, xi2, tau2)
        lhs = -(tau1 + tau2) - (xi1 + xi2) ** 2
        rhs = -(tau1 + xi1**2) - (tau2 - xi2**2) - 2 * xi2 * (xi1 + xi2)
        exact = isinstance(tau1, int) and isinstance(tau2, int)
        if exact:
            identity_ok = lhs == rhs
        else:
            scale = max(abs(lhs), abs(rhs), 1.0)
            identity_ok = abs(lhs - rhs) <= 1e-9 * scale
        if not identity_ok:
            bad += 1
            continue
        if max(l1, l2, l3) < 2 ** (m + j) / 6.0:
            bad += 1
    return bad


# ---------------------------------------------------------------------------
# trilinear form and its decomposition
# ---------------------------------------------------------------------------

_RESTRICTIONS = (None, "A1", "A1c*A3", "A1c*A2*A3c")


def _check_compatible(*fields):
    ref = fields[0]
    for f in fields[1:]:
        if f.tau.size != ref.tau.size or abs(f.dtau - ref.dtau) > 1e-12 * ref.dtau:
            raise LatticeMismatchError("tau grids differ")
        if abs(f.tau[0] - ref.tau[0]) > 1e-9 * max(1.0, abs(ref.tau[0])):
            raise LatticeMismatchError("tau grids differ in offset")


def _set_masks(v, u, p, threshold):
    """Characteristic-function masks of the modulation sets, one per slot.

    L1 lives on V's lattice (weight tau+xi^2), L2 on U's (tau-xi^2), L3 on
    the third slot's own lattice (tau-xi^2 at (xi3, tau3))."""
    lam1 = v.tau[None, :] + v.xi.astype(float)[:, None] ** 2
    lam2 = u.tau[None, :] - u.xi.astype(float)[:, None] ** 2
    lam3 = p.tau[None, :] - p.xi.astype(float)[:, None] ** 2
    a1 = np.abs(lam1) >= threshold
    a2 = np.abs(lam2) >= threshold
    a3 = np.abs(lam3) >= threshold
    return a1, a2, a3


def trilinear_form(vk: SpaceTimeField, um: SpaceTimeField, phij: SpaceTimeField,
                   restriction: Optional[str] = None, m: Optional[int] = None,
                   j: Optional[int] = None) -> complex:
    """Direct evaluation of
    dtau^2 * sum V(xi1,tau1) U(xi2,tau2) Phi(-(xi1+xi2), -(tau1+tau2)).

    ``restriction`` picks one piece of the partition
    1 = chi_{A1} + chi_{A1^c} chi_{A3} + chi_{A1^c} chi_{A2} chi_{A3^c}
    with A_i = {L_i >= 2^(m+j)/6}; the three pieces sum to the unrestricted
    form exactly.  m and j default to the dyadic indices of the U and Phi
    supports.
    """
    _check_compatible(vk, um, phij)
    if restriction not in _RESTRICTIONS:
        raise ValueError(f"restriction must be one of {_RESTRICTIONS}")
    v, u, p = vk, um, phij
    if restriction is not None:
        if m is None:
            m = _support_dyadic(um)
        if j is None:
            j = _support_dyadic(phij)
        thr = 2.0 ** (m + j) / 6.0
        a1, a2, a3 = _set_masks(v, u, p, thr)
        if restriction == "A1":
            v = v.masked(a1)
        elif restriction == "A1c*A3":
            v = v.masked(~a1)
            p = p.masked(a3)
        else:  # A1c*A2*A3c
            v = v.masked(~a1)
            u = u.masked(a2)
            p = p.masked(~a3)
    return _convolution_sum(v, u, p) * v.dtau**2


def _support_dyadic(f: SpaceTimeField) -> int:
    """Dyadic index of the support; the decomposition needs single-band
    inputs, so straddling two bands is an error."""
    live = np.any(f.values != 0.0, axis=1)
    if not np.any(live):
        raise ValueError("cannot infer dyadic index of an empty field")
    indices = {dyadic_index(int(x)) for x in f.xi[live]}
    if len(indices) != 1:
        raise ValueError(f"support straddles dyadic bands {sorted(indices)}")
    return indices.pop()


def _convolution_sum(v, u, p) -> complex:
    m_len = v.tau.size
    total = 0.0 + 0.0j
    v_live = [int(x) for x in v.xi[np.any(v.values != 0.0, axis=1)]]
    u_live = [int(x) for x in u.xi[np.any(u.values != 0.0, axis=1)]]
    q = np.arange(m_len // 2 + 1, min(3 * m_len // 2, 2 * m_len - 2) + 1)
    pos3 = 3 * m_len // 2 - q
    for xi1 in v_live:
        row1 = v.row(xi1)
        for xi2 in u_live:
            row3 = p.row(-(xi1 + xi2))
            if row3 is None:
                continue
            conv = np.convolve(row1, u.row(xi2))
            total += np.dot(conv[q], row3[pos3])
    return complex(total)


# ---------------------------------------------------------------------------
# products and the bilinear-estimate ratio
# ---------------------------------------------------------------------------


def product_field(v: SpaceTimeField, u: SpaceTimeField) -> SpaceTimeField:
    """Space-time pointwise product on the lattice:
    (vu)(xi3, tau3) = dtau/(2 pi)^2 * sum_{xi1+xi2=xi3, tau1+tau2=tau3} v u.

    tau sums falling outside the grid are dropped; size the grid so the
    retained modulations cover the content of interest.
    """
    _check_compatible(v, u)
    m_len = v.tau.size
    xi_lo = int(v.xi[0] + u.xi[0])
    xi_hi = int(v.xi[-1] + u.xi[-1])
    xi = np.arange(xi_lo, xi_hi + 1)
    out = np.zeros((xi.size, m_len), dtype=complex)
    u_live = [int(x) for x in u.xi[np.any(u.values != 0.0, axis=1)]]
    v_live = [int(x) for x in v.xi[np.any(v.values != 0.0, axis=1)]]
    sl = slice(m_len // 2, 3 * m_len // 2)
    for xi1 in v_live:
        row1 = v.row(xi1)
        for xi2 in u_live:
            conv = np.convolve(row1, u.row(xi2))
            out[xi1 + xi2 - xi_lo] += conv[sl]
    out *= v.dtau / (2.0 * np.pi) ** 2
    return SpaceTimeField(xi=xi, tau=v.tau.copy(), values=out, symbol="schrodinger_minus")


def pi_minus_lattice(f: SpaceTimeField) -> SpaceTimeField:
    return f.restrict_xi(lambda xi: xi < 0)


def linf_l2_norm(f: SpaceTimeField) -> float:
    """sup over the time window of the spatial L2 norm,
    reconstructed from the lattice by inverse DFT in tau."""
    m_len = f.tau.size
    dtau = f.dtau
    t0 = -np.pi / dtau  # window [-T_win/2, T_win/2), T_win = 2 pi / dtau
    phased = f.values * np.exp(1j * f.tau * t0)[None, :]
    rows = np.fft.ifft(np.fft.ifftshift(phased, axes=1), axis=1) * (m_len * dtau / (2.0 * np.pi))
    l2 = np.sqrt(np.sum(np.abs(rows) ** 2, axis=0) / (2.0 * np.pi))
    return float(np.max(l2))


def band(k: int, sign: int):
    """Integer modes of the dyadic band 2^(k-1) <= |xi| < 2^k on one side."""
    lo, hi = 2 ** (k - 1), 2**k
    if sign > 0:
        return np.arange(lo, hi)
    return np.arange(-hi + 1, -lo + 1)


def estimate_ratio(vk: SpaceTimeField, um: SpaceTimeField, k: int, m: int, j: int,
                   delta: float = 0.05) -> float:
    """Left/right ratio of the dyadic bilinear estimate

        ||P_j Pi+ (V_k Pi-(U_m))||_{X^{0,-1/2-delta}}
          <= C 2^{(1/6+delta)k - (m+j)/2} ||V_k||_{X^{0,1/2}}
             (||Pi-(U_m)||_{Linf L2} + 2^{-(m+j)/2} ||Pi-(U_m)||_{Xbar^{0,1}}).

    Supports are validated against the dyadic bands.  Raises
    UndefinedRatioError when the right side vanishes.
    """
    _check_vk_support(vk, k)
    um = pi_minus_lattice(um)
    _check_band_support(um, m)
    w = product_field(vk, um)
    wj = w.restrict_xi(lambda xi: (xi >= 2 ** (j - 1)) & (xi < 2**j))
    lhs = bourgain_norm(wj, 0.0, -0.5 - delta, symbol="schrodinger_minus")
    vnorm = bourgain_norm(vk, 0.0, 0.5, symbol="schrodinger_minus")
    ubar = bourgain_norm(um, 0.0, 1.0, symbol="schrodinger_plus")
    rhs = (
        2.0 ** ((1.0 / 6.0 + delta) * k - (m + j) / 2.0)
        * vnorm
        * (linf_l2_norm(um) + 2.0 ** (-(m + j) / 2.0) * ubar)
    )
    if rhs == 0.0:
        raise UndefinedRatioError("estimate right-hand side is zero")
    return lhs / rhs


def _check_vk_support(f: SpaceTimeField, k: int):
    live = f.xi[np.any(f.values != 0.0, axis=1)]
    if live.size and not np.all((np.abs(live) >= 2 ** (k - 1)) & (np.abs(live) < 2**k)):
        raise ValueError(f"V support escapes dyadic band k={k}")


def _check_band_support(f: SpaceTimeField, m: int):
    live = f.xi[np.any(f.values != 0.0, axis=1)]
    if live.size and not np.all((np.abs(live) >= 2 ** (m - 1)) & (np.abs(live) < 2**m)):
        raise ValueError(f"U support escapes dyadic band m={m}")


# ---------------------------------------------------------------------------
# random ensembles and the sweep
# ---------------------------------------------------------------------------


def random_block(k: int, sign: int, tau: np.ndarray, symbol: str, seed: int,
                 profile: str = "decay", decay_power: float = 1.0) -> SpaceTimeField:
    """Seeded random field on one dyadic band.

    'decay' spreads complex Gaussians with modulation weight
    <tau+omega>^-decay_power; 'characteristic' puts all mass on the lattice
    bin nearest the characteristic tau = -omega(xi).
    """
    xi = band(k, sign)
    rng = np.random.default_rng(seed)
    values = np.zeros((xi.size, tau.size), dtype=complex)
    if profile == "decay":
        g = rng.standard_normal((xi.size, tau.size, 2))
        lam = tau[None, :] + omega(symbol, xi)[:, None]
        weight = (1.0 + lam * lam) ** (-decay_power / 2.0)
        values = (g[..., 0] + 1j * g[..., 1]) / np.sqrt(2.0) * weight
    elif profile == "characteristic":
        dtau = float(tau[1] - tau[0])
        centers = -omega(symbol, xi)
        g = rng.standard_normal((xi.size, 2))
        for i, c in enumerate(centers):
            pos = int(round((c - tau[0]) / dtau))
            if 0 <= pos < tau.size:
                values[i, pos] = (g[i, 0] + 1j * g[i, 1]) / np.sqrt(2.0)
    else:
        raise ValueError(f"unknown profile {profile!r}")
    return SpaceTimeField(xi=xi, tau=tau.copy(), values=values, symbol=symbol)


@dataclass(frozen=True)
class BilinearSweepConfig:
    mj_pairs: tuple = ((3, 3), (4, 2))
    k_values: tuple = (4, 5, 6, 7, 8, 9)
    ensemble: int = 16
    seed: int = 0
    n_tau: int = 1024
    dtau: float = 0.5
    delta: float = 0.05

    def __post_init__(self):
        if self.ensemble < 1 or self.n_tau % 2 or self.dtau <= 0:
            raise ValueError("invalid sweep configuration")
        for m, j in self.mj_pairs:
            if m < 1 or j < 1:
                raise ValueError("dyadic indices must be >= 1")


def _seed_profile(i: int):
    # deterministic mix: every fourth member is characteristic-supported
    if i % 4 == 3:
        return "characteristic", 1.0
    return "decay", (0.75, 1.0, 1.5)[i % 3]


def run_ratio_sweep(cfg: BilinearSweepConfig):
    """Max estimate ratio per (m, j, k) over a seeded ensemble, with the
    log-ratio regression slope in k per (m, j).

    k cells whose interaction is empty by frequency-support arithmetic
    (ratio identically 0) cannot enter a log fit and are excluded from the
    regression; they are reported with ratio 0 in the rows.
    """
    tau = tau_grid(cfg.n_tau, cfg.dtau)
    rows = []
    summary = {}
    for m, j in cfg.mj_pairs:
        max_ratio = {}
        for k in cfg.k_values:
            ratios = []
            for i in range(cfg.ensemble):
                seed = cfg.seed + i
                profile, power = _seed_profile(i)
                v = random_block(k, +1, tau, "schrodinger_minus", seed * 7919 + k,
                                 profile="decay", decay_power=power)
                u = random_block(m, -1, tau, "schrodinger_plus", seed * 6007 + m,
                                 profile=profile, decay_power=power)
                r = estimate_ratio(v, u, k, m, j, cfg.delta)
                ratios.append(r)
                rows.append((k, m, j, seed, r))
            max_ratio[k] = max(ratios)
        ks = [k for k in cfg.k_values if max_ratio[k] > 0.0]
        if len(ks) >= 2:
            slope = float(np.polyfit([float(k) for k in ks],
                                     [np.log(max_ratio[k]) for k in ks], 1)[0])
        else:
            slope = 0.0
        summary[f"m{m}_j{j}"] = {
            "slope": slope,
            "n_points": len(ks),
            "max_ratio": {str(k): max_ratio[k] for k in cfg.k_values},
        }
    return rows, summary


# ---------------------------------------------------------------------------
# dual-norm sanity
# ---------------------------------------------------------------------------


def dual_norm_estimate(f: SpaceTimeField, b: float, n_random: int = 16, seed: int = 0):
    """(direct, paired) evaluation of ||f||_{X^{0,-b}}.

    direct is the weighted-lattice norm; paired is the best |<f, phi>| over
    unit-norm phi in X^{0,b} across the analytic optimizer
    (phi = <tau+omega>^{-2b} f, duality's extremizer) plus seeded random
    fields.  The two agree to rounding through the optimizer; random
    members only probe the inequality direction.
    """
    direct = bourgain_norm(f, 0.0, -b)
    weight = f.modulation() ** (-2.0 * b)
    candidates = [replace(f, values=f.values * weight)]
    rng = np.random.default_rng(seed)
    for _ in range(n_random):
        g = rng.standard_normal(f.values.shape + (2,))
        candidates.append(replace(f, values=g[..., 0] + 1j * g[..., 1]))
    best = 0.0
    for phi in candidates:
        denom = bourgain_norm(phi, 0.0, b)
        if denom == 0.0:
            continue
        pairing = abs(complex(np.sum(f.values * np.conj(phi.values)) * f.dtau))
        best = max(best, pairing / denom)
    return direct, best

"""Reproducible numerical experiments: smoothing and growth probes,
random-data generation, power-law fits, CSV/JSON emission.

Every run is deterministic given its configuration (seeds included): cell
results are aggregated in sorted order, floats are emitted via repr, and no
timestamps enter the CSV bodies, so re-running a config reproduces its
outputs byte for byte.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import NamedTuple, Optional

import numpy as np

from . import __version__
from .gauge import (
    f_equation_residual,
    gauge_transform,
    gauged_equation_residual,
    l2_norm,
    smoothing_residual,
    ungauge_ratio,
)
from .solver import (
    ConservationError,
    ConservedTriple,
    SolverConfig,
    Trajectory,
    bo_rhs,
    conserved,
    energy_half,
    solve,
)
from .spectral import GridSpec, SpectralField, sobolev_norm

_KINDS = ("smoothing", "growth", "conservation", "gauge_residual")
_GEN_KINDS = ("single_mode", "multi_mode", "random_sobolev")


@dataclass(frozen=True)
class DataGenSpec:
    kind: str = "random_sobolev"
    s_target: float = 0.55
    target_norm: float = 1.0
    decay_offset: float = 0.01
    seed: int = 0
    mode: int = 1  # used by single_mode

    def __post_init__(self):
        if self.kind not in _GEN_KINDS:
            raise ValueError(f"data kind must be one of {_GEN_KINDS}, got {self.kind!r}")
        if self.target_norm <= 0:
            raise ValueError("target_norm must be positive")
        if self.decay_offset <= 0:
            raise ValueError("decay_offset must be positive")


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str
    s: float
    solver: SolverConfig
    data_gen: DataGenSpec
    a_grid: tuple = ()
    n_grid: tuple = (256,)
    seed: int = 0
    ensemble: int = 1
    t_end: Optional[float] = None  # None: Theorem-1.1-style default window
    eps: float = 0.01

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"experiment kind must be one of {_KINDS}, got {self.kind!r}")
        if self.kind == "smoothing":
            if not (1.0 / 6.0 < self.s <= 1.0):
                raise ValueError(f"smoothing requires s in (1/6, 1], got {self.s}")
            limit = min(self.s - 1.0 / 6.0, 1.0 / 3.0)
            for a in self.a_grid:
                if not (0.0 < a < limit):
                    raise ValueError(
                        f"smoothing gain a={a} outside the admissible range "
                        f"0 < a < min(s - 1/6, 1/3) = {limit:.6g} at s={self.s}"
                    )
            if not self.a_grid:
                raise ValueError("smoothing requires a non-empty a_grid")
        elif self.kind == "growth":
            if not (0.5 < self.s <= 1.0):
                raise ValueError(f"growth requires s in (1/2, 1], got {self.s}")
        if self.ensemble < 1:
            raise ValueError("ensemble must be >= 1")
        for n in self.n_grid:
            GridSpec(n)  # validates

    def cell_seeds(self):
        return [self.seed + i for i in range(self.ensemble)]


# ---------------------------------------------------------------------------
# data generation
# ---------------------------------------------------------------------------


def gen_random_sobolev(spec: DataGenSpec, grid: GridSpec) -> SpectralField:
    """Real mean-zero field of sharp H^{s_target} regularity.

    Coefficients <xi>^(-s-1/2-delta) g_xi on 1 <= xi <= N/4 with i.i.d.
    standard complex Gaussians g_xi, Hermitian-extended and rescaled so that
    the H^{s_target} norm equals target_norm exactly.  Deterministic given
    the seed, and the leading modes agree across resolutions for a fixed
    seed (draws are consumed in mode order).
    """
    n = grid.n_modes
    mmax = n // 4
    rng = np.random.default_rng(spec.seed)
    draws = rng.standard_normal(2 * mmax)
    g = (draws[0::2] + 1j * draws[1::2]) / np.sqrt(2.0)
    xi = np.arange(1, mmax + 1, dtype=float)
    weights = (1.0 + xi * xi) ** (-(spec.s_target + 0.5 + spec.decay_offset) / 2.0)
    c = np.zeros(n, dtype=complex)
    c[1 : mmax + 1] = weights * g
    c[-mmax:] = np.conj(c[1 : mmax + 1])[::-1]
    f = SpectralField(grid, c, is_real=True, mean_zero=True)
    return (spec.target_norm / sobolev_norm(f, spec.s_target)) * f


def gen_field(spec: DataGenSpec, grid: GridSpec) -> SpectralField:
    """Dispatch on spec.kind; all generators yield real mean-zero fields."""
    if spec.kind == "random_sobolev":
        return gen_random_sobolev(spec, grid)
    if spec.kind == "single_mode":
        c = np.zeros(grid.n_modes, dtype=complex)
        c[spec.mode % grid.n_modes] = np.pi * spec.target_norm
        c[-spec.mode % grid.n_modes] = np.pi * spec.target_norm
        return SpectralField(grid, c, is_real=True, mean_zero=True)
    # multi_mode: eight low modes, geometric amplitudes, seeded phases
    rng = np.random.default_rng(spec.seed)
    phases = rng.uniform(0.0, 2.0 * np.pi, size=8)
    c = np.zeros(grid.n_modes, dtype=complex)
    for m, phase in enumerate(phases, start=1):
        val = np.pi * 2.0 ** (-m) * np.exp(1j * phase)
        c[m] = val
        c[-m % grid.n_modes] = np.conj(val)
    f = SpectralField(grid, c, is_real=True, mean_zero=True)
    return (spec.target_norm / sobolev_norm(f, spec.s_target)) * f


# ---------------------------------------------------------------------------
# fits and elementary checks
# ---------------------------------------------------------------------------


class PowerLawFit(NamedTuple):
    exponent: float
    intercept: float
    r_squared: float
    degenerate: bool


def fit_power_law(times, values) -> PowerLawFit:
    """Least-squares fit of log(values) against log<t>, <t> = sqrt(1+t^2).

    Requires at least 8 strictly positive values.  A (near-)constant series
    is flagged degenerate and reported with exponent 0.
    """
    t = np.asarray(times, dtype=float)
    v = np.asarray(values, dtype=float)
    if t.size < 8:
        raise ValueError("power-law fit needs at least 8 points")
    if np.any(v <= 0.0):
        raise ValueError("power-law fit requires positive values")
    x = 0.5 * np.log1p(t * t)
    y = np.log(v)
    if float(np.std(y)) < 1e-13:
        return PowerLawFit(0.0, float(y[0]), 0.0, True)
    a = np.vstack([x, np.ones_like(x)]).T
    (slope, intercept), res, _, _ = np.linalg.lstsq(a, y, rcond=None)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    ss_res = float(res[0]) if res.size else float(np.sum((y - a @ [slope, intercept]) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 0.0
    return PowerLawFit(float(slope), float(intercept), r2, False)


class PartialSumResult(NamedTuple):
    total: float
    asymptote: float
    error: float


def partial_sum_check(alpha: float, n: int) -> PartialSumResult:
    """Compare sum_{k=1}^{n} k^alpha with n^(alpha+1)/(alpha+1).

    The difference is O(n^max(0, alpha)) for alpha > -1; alpha <= -1 is
    rejected.
    """
    if alpha <= -1.0:
        raise ValueError("partial-sum asymptotics require alpha > -1")
    if n < 1:
        raise ValueError("n must be >= 1")
    total = math.fsum(float(k) ** alpha for k in range(1, n + 1))
    asymptote = float(n) ** (alpha + 1.0) / (alpha + 1.0)
    return PartialSumResult(total, asymptote, total - asymptote)


def dyadic_split_norm(f: SpectralField, s: float, cutoff: int):
    """H^s norms of the frequency ranges |xi| <= M and |xi| > M.

    The split is orthogonal (low^2 + high^2 = total^2) and for s >= 1/2 the
    low part obeys the pointwise multiplier bound
    low <= <M>^(s-1/2) ||f||_{H^{1/2}}, which is asserted.
    """
    if cutoff < 1:
        raise ValueError("cutoff must be >= 1")
    axi = np.abs(f.grid.xi)
    w = (1.0 + f.grid.xi.astype(float) ** 2) ** s
    sq = w * np.abs(f.coeffs) ** 2 / (2.0 * np.pi)
    low = float(np.sqrt(np.sum(sq[axi <= cutoff])))
    high = float(np.sqrt(np.sum(sq[axi > cutoff])))
    if s >= 0.5:
        bound = (1.0 + cutoff * cutoff) ** ((s - 0.5) / 2.0) * sobolev_norm(f, 0.5)
        if low > bound * (1.0 + 1e-12):
            raise AssertionError(
                f"low-frequency multiplier bound violated: {low} > {bound}"
            )
    return low, high


def theorem_11_window(u0: SpectralField, dt: float) -> float:
    """Default experiment window T ~ min(||u0||_{L2}^{-4}, 1), snapped to a
    multiple of dt."""
    t = min(l2_norm(u0) ** (-4.0), 1.0)
    return max(1, round(t / dt)) * dt


# ---------------------------------------------------------------------------
# deterministic emission
# ---------------------------------------------------------------------------


def _fmt(v) -> str:
    if isinstance(v, (np.floating, float)):
        return repr(float(v))
    if isinstance(v, (np.integer, int)):
        return str(int(v))
    return str(v)


def write_csv(path, header, rows) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    path.write_text("\n".join(lines) + "\n")


def _plain(obj):
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    return obj


def write_json(path, obj) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(_plain(obj), indent=2, sort_keys=True) + "\n")


def config_echo(cfg: ExperimentConfig) -> dict:
    return _plain(asdict(cfg))


# ---------------------------------------------------------------------------
# diagnostics records
# ---------------------------------------------------------------------------


@dataclass
class DiagnosticsRecord:
    t: float
    hs_norms: dict
    w_norms: dict
    residual_norms: dict
    conserved: ConservedTriple
    energy_half: float
    ungauge_ratio: Optional[float]


def compute_diagnostics(traj: Trajectory, s_values, residual_s_values=(), ratio_s=0.75):
    """Per-snapshot DiagnosticsRecord list for a solved trajectory."""
    u0 = traj.states[0]
    times, residuals = smoothing_residual(traj)
    records = []
    for t, u, r in zip(times, traj.states, residuals):
        w = gauge_transform(u)
        rec = DiagnosticsRecord(
            t=float(t),
            hs_norms={s: sobolev_norm(u, s) for s in s_values},
            w_norms={s: sobolev_norm(w, s) for s in s_values},
            residual_norms={s: sobolev_norm(r, s) for s in residual_s_values},
            conserved=conserved(u),
            energy_half=energy_half(u),
            ungauge_ratio=ungauge_ratio(u, w, u0, ratio_s) if 0.5 < ratio_s <= 1.0 else None,
        )
        for name, value in (("hs", rec.hs_norms), ("w", rec.w_norms), ("r", rec.residual_norms)):
            for s, x in value.items():
                if not np.isfinite(x):
                    raise FloatingPointError(f"non-finite {name} norm at t={t}, s={s}")
        records.append(rec)
    return records


# ---------------------------------------------------------------------------
# smoothing experiment
# ---------------------------------------------------------------------------


# The IF-RK4 step must resolve the transformed nonlinearity's modulation
# (rate ~ (N/2)^2 at the top mode), so the starting dt scales like N^-2
# from a 256-mode reference; a coarse/fine agreement check then certifies
# dt-insensitivity of the measured residuals.
_REFINE_RTOL = 0.02
_REFINE_MAX_ROUNDS = 4
_SNAPSHOTS = 10


def _sup_residuals(u0, cfg, t_end, n_steps):
    run_cfg = replace(
        cfg.solver,
        dt=t_end / n_steps,
        t_end=t_end,
        record_every=n_steps // _SNAPSHOTS,
        conservation_action="off",
    )
    traj = solve(u0, run_cfg)
    _, residuals = smoothing_residual(traj)
    return {a: max(sobolev_norm(r, cfg.s + a) for r in residuals) for a in cfg.a_grid}, traj


def _check_conservation(traj, cfg):
    if cfg.solver.conservation_action == "off":
        return
    ref = None
    for u in traj.states:
        tr = conserved(u)
        vals = {"i2": tr.i2, "e3": tr.e3, "energy_half": energy_half(u)}
        if ref is None:
            ref = vals
            continue
        for name in vals:
            drift = abs(vals[name] - ref[name]) / (abs(ref[name]) + 1e-12)
            if drift > cfg.solver.conservation_tolerance:
                raise ConservationError(name, drift, float(traj.times[-1]))


def _smoothing_cell(args):
    cfg, n, seed = args
    grid = GridSpec(n)
    u0 = gen_field(replace(cfg.data_gen, seed=seed), grid)
    t_end = cfg.t_end if cfg.t_end is not None else min(l2_norm(u0) ** (-4.0), 1.0)
    dt0 = cfg.solver.dt * min(1.0, (256.0 / n) ** 2)
    n_coarse = _SNAPSHOTS * math.ceil(t_end / (_SNAPSHOTS * 2.0 * dt0))
    sup_coarse, _ = _sup_residuals(u0, cfg, t_end, n_coarse)
    rounds = 0
    while True:
        n_fine = 2 * n_coarse
        sup_fine, traj = _sup_residuals(u0, cfg, t_end, n_fine)
        change = max(
            abs(sup_fine[a] - sup_coarse[a]) / max(sup_fine[a], 1e-30) for a in cfg.a_grid
        )
        if change <= _REFINE_RTOL or rounds >= _REFINE_MAX_ROUNDS:
            break
        sup_coarse, n_coarse, rounds = sup_fine, n_fine, rounds + 1
    _check_conservation(traj, cfg)
    w0 = gauge_transform(u0)
    return {
        "n": n,
        "seed": seed,
        "sup_residual": sup_fine,
        "w0_norm": {a: sobolev_norm(w0, cfg.s + a) for a in cfg.a_grid},
        "u0_norm": sobolev_norm(u0, cfg.s),
        "t_window": t_end,
        "dt": t_end / n_fine,
        "refine_rounds": rounds,
    }


def _run_cells(fn, cells, workers):
    if workers <= 1:
        return [fn(c) for c in cells]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, cells))


def run_smoothing(cfg: ExperimentConfig, out_dir=None, workers: int = 1) -> dict:
    """Resolution-scaling surrogate for the nonlinear-smoothing theorem.

    For sharp-regularity random data, ||w0||_{H^{s+a}} grows like N^a while
    the theorem bounds sup_t ||r(t)||_{H^{s+a}} by the (N-independent)
    H^s size of the data; the fitted exponent beta(a) of the residual should
    therefore sit well below a.
    """
    if cfg.kind != "smoothing":
        raise ValueError("config kind must be 'smoothing'")
    cells = [(cfg, n, seed) for n in sorted(cfg.n_grid) for seed in cfg.cell_seeds()]
    results = _run_cells(_smoothing_cell, cells, workers)
    results.sort(key=lambda r: (r["n"], r["seed"]))

    rows = []
    for r in results:
        for a in cfg.a_grid:
            rows.append(
                (r["n"], r["seed"], a, r["sup_residual"][a], r["w0_norm"][a],
                 r["u0_norm"], r["t_window"], r["dt"])
            )

    per_a = {}
    ns = sorted(set(r["n"] for r in results))
    logn = np.log([float(n) for n in ns])
    for a in cfg.a_grid:
        med_res = [float(np.median([r["sup_residual"][a] for r in results if r["n"] == n])) for n in ns]
        med_w0 = [float(np.median([r["w0_norm"][a] for r in results if r["n"] == n])) for n in ns]
        beta = float(np.polyfit(logn, np.log(med_res), 1)[0])
        w0_exp = float(np.polyfit(logn, np.log(med_w0), 1)[0])
        per_a[a] = {
            "beta": beta,
            "w0_exponent": w0_exp,
            "gap": w0_exp - beta,
            "median_sup_residual": dict(zip(map(str, ns), med_res)),
            "median_w0_norm": dict(zip(map(str, ns), med_w0)),
        }

    summary = {
        "kind": "smoothing",
        "version": __version__,
        "config": config_echo(cfg),
        "seeds": cfg.cell_seeds(),
        "per_a": {repr(float(a)): per_a[a] for a in cfg.a_grid},
    }
    if out_dir is not None:
        out = Path(out_dir)
        write_csv(
            out / "smoothing.csv",
            ["n_modes", "seed", "a", "sup_residual", "w0_norm", "u0_norm_s", "t_window", "dt"],
            rows,
        )
        write_json(out / "smoothing_summary.json", summary)
    return summary


# ---------------------------------------------------------------------------
# growth experiment
# ---------------------------------------------------------------------------


def run_growth(cfg: ExperimentConfig, out_dir=None) -> dict:
    """Long-run H^s norm history with a log-log fit over the final decade,
    reported against the theorem's one-sided bound 3(s - 1/2) + eps."""
    if cfg.kind != "growth":
        raise ValueError("config kind must be 'growth'")
    t_end = cfg.t_end if cfg.t_end is not None else cfg.solver.t_end
    n = cfg.n_grid[0]
    grid = GridSpec(n)
    rows = []
    gammas = {}
    for seed in cfg.cell_seeds():
        u0 = gen_field(replace(cfg.data_gen, seed=seed), grid)
        traj = solve(u0, replace(cfg.solver, t_end=t_end))
        series = [sobolev_norm(u, cfg.s) for u in traj.states]
        for t, hs, u in zip(traj.times, series, traj.states):
            tr = conserved(u)
            rows.append((seed, float(t), hs, tr.i1, tr.i2, tr.e3, energy_half(u)))
        mask = traj.times >= t_end / 10.0
        fit = fit_power_law(traj.times[mask], np.asarray(series)[mask])
        gammas[seed] = fit
    bound = 3.0 * (cfg.s - 0.5) + cfg.eps
    summary = {
        "kind": "growth",
        "version": __version__,
        "config": config_echo(cfg),
        "bound_exponent": bound,
        "per_seed": {
            str(seed): {
                "gamma": fit.exponent,
                "r_squared": fit.r_squared,
                "degenerate": fit.degenerate,
            }
            for seed, fit in gammas.items()
        },
        "gamma_max": max(fit.exponent for fit in gammas.values()),
    }
    if out_dir is not None:
        out = Path(out_dir)
        write_csv(
            out / "growth.csv",
            ["seed", "t", "hs_norm", "i1", "i2", "e3", "energy_half"],
            rows,
        )
        write_json(out / "growth_summary.json", summary)
    return summary


# ---------------------------------------------------------------------------
# conservation / gauge diagnostics pipelines (cli: solve, gauge-check, norms)
# ---------------------------------------------------------------------------


def run_conservation(cfg: ExperimentConfig, out_dir=None):
    """Solve and emit the conserved-quantity history with relative drifts."""
    grid = GridSpec(cfg.n_grid[0])
    u0 = gen_field(cfg.data_gen, grid)
    t_end = cfg.t_end if cfg.t_end is not None else cfg.solver.t_end
    traj = solve(u0, replace(cfg.solver, t_end=t_end))
    ref = None
    rows = []
    drifts = {"i1": 0.0, "i2": 0.0, "e3": 0.0, "energy_half": 0.0}
    for t, u in zip(traj.times, traj.states):
        tr = conserved(u)
        eh = energy_half(u)
        vals = {"i1": tr.i1, "i2": tr.i2, "e3": tr.e3, "energy_half": eh}
        if ref is None:
            ref = vals
        rel = {
            k: abs(vals[k] - ref[k]) / max(abs(ref[k]), 1e-12) for k in vals
        }
        for k in drifts:
            drifts[k] = max(drifts[k], rel[k])
        rows.append((float(t), tr.i1, tr.i2, tr.e3, eh, rel["i1"], rel["i2"], rel["e3"], rel["energy_half"]))
    summary = {
        "kind": "conservation",
        "version": __version__,
        "config": config_echo(cfg),
        "max_drift": drifts,
    }
    if out_dir is not None:
        out = Path(out_dir)
        write_csv(
            out / "conservation.csv",
            ["t", "i1", "i2", "e3", "energy_half",
             "drift_i1", "drift_i2", "drift_e3", "drift_energy_half"],
            rows,
        )
        write_json(out / "conservation_summary.json", summary)
    return summary, traj


def run_gauge_residual(cfg: ExperimentConfig, out_dir=None):
    """Solve and emit per-snapshot gauge-algebra residuals."""
    grid = GridSpec(cfg.n_grid[0])
    u0 = gen_field(cfg.data_gen, grid)
    t_end = cfg.t_end if cfg.t_end is not None else cfg.solver.t_end
    traj = solve(u0, replace(cfg.solver, t_end=t_end))
    times, residuals = smoothing_residual(traj)
    ratio_s = cfg.s if 0.5 < cfg.s <= 1.0 else 0.75
    rows = []
    for t, u, r in zip(times, traj.states, residuals):
        w = gauge_transform(u)
        rows.append(
            (
                float(t),
                gauged_equation_residual(u),
                f_equation_residual(u, bo_rhs(u)),
                l2_norm(r),
                ungauge_ratio(u, w, u0, ratio_s),
            )
        )
    summary = {
        "kind": "gauge_residual",
        "version": __version__,
        "config": config_echo(cfg),
        "max_w_eq_residual": max(r[1] for r in rows),
        "max_f_eq_residual": max(r[2] for r in rows),
        "max_ungauge_ratio": max(r[4] for r in rows),
    }
    if out_dir is not None:
        out = Path(out_dir)
        write_csv(
            out / "gauge_residuals.csv",
            ["t", "w_eq_residual", "f_eq_residual", "r_l2", "ungauge_ratio"],
            rows,
        )
        write_json(out / "gauge_summary.json", summary)
    return summary


def run_norms(cfg: ExperimentConfig, out_dir=None):
    """Solve and emit the full per-snapshot diagnostics table."""
    grid = GridSpec(cfg.n_grid[0])
    u0 = gen_field(cfg.data_gen, grid)
    t_end = cfg.t_end if cfg.t_end is not None else cfg.solver.t_end
    traj = solve(u0, replace(cfg.solver, t_end=t_end))
    s_values = sorted({0.0, 0.5, round(cfg.s, 10), 1.0})
    resid_s = tuple(round(cfg.s + a, 10) for a in cfg.a_grid)
    ratio_s = cfg.s if 0.5 < cfg.s <= 1.0 else 0.75
    records = compute_diagnostics(traj, s_values, resid_s, ratio_s)
    header = (
        ["t"]
        + [f"u_h{s}" for s in s_values]
        + [f"w_h{s}" for s in s_values]
        + [f"r_h{s}" for s in resid_s]
        + ["i1", "i2", "e3", "energy_half", "ungauge_ratio"]
    )
    rows = []
    for rec in records:
        rows.append(
            [rec.t]
            + [rec.hs_norms[s] for s in s_values]
            + [rec.w_norms[s] for s in s_values]
            + [rec.residual_norms[s] for s in resid_s]
            + [rec.conserved.i1, rec.conserved.i2, rec.conserved.e3, rec.energy_half,
               rec.ungauge_ratio if rec.ungauge_ratio is not None else float("nan")]
        )
    summary = {
        "kind": "norms",
        "version": __version__,
        "config": config_echo(cfg),
        "s_values": list(s_values),
        "residual_s_values": list(resid_s),
    }
    if out_dir is not None:
        out = Path(out_dir)
        write_csv(out / "norms.csv", header, rows)
        write_json(out / "norms_summary.json", summary)
    return summary

"""Desk-scale smoothing and growth experiments with CSV/JSON output.

Run:  python3 demos/05_experiments.py
Writes into demos/output/; the frontend report generator consumes these
files (see frontend/README.md).
"""

from pathlib import Path

from bolab.experiments import DataGenSpec, ExperimentConfig, run_growth, run_smoothing
from bolab.solver import SolverConfig

out = Path(__file__).parent / "output"

# --- smoothing: residual-vs-resolution exponent gap ----------------------------
smoothing_cfg = ExperimentConfig(
    kind="smoothing",
    s=0.55,
    a_grid=(0.1, 0.2, 0.3),
    n_grid=(128, 256, 512),
    seed=1,
    ensemble=4,
    solver=SolverConfig(dt=5e-4, t_end=1.0, record_every=1, conservation_tolerance=1e-6),
    data_gen=DataGenSpec(kind="random_sobolev", s_target=0.55, target_norm=1.0),
)
summary = run_smoothing(smoothing_cfg, out, workers=4)
print("smoothing exponents (residual should scale slower than w0 ~ N^a):")
for a, d in summary["per_a"].items():
    print(f"  a={a}: beta={d['beta']:+.3f}  w0 exponent={d['w0_exponent']:+.3f}")

# --- growth: long-run H^s norm against the polynomial bound --------------------
growth_cfg = ExperimentConfig(
    kind="growth",
    s=1.0,
    n_grid=(256,),
    seed=3,
    ensemble=1,
    t_end=20.0,
    solver=SolverConfig(dt=5e-4, t_end=20.0, record_every=400, conservation_tolerance=1e-5),
    data_gen=DataGenSpec(kind="random_sobolev", s_target=1.0, target_norm=1.0),
)
summary = run_growth(growth_cfg, out)
print(f"\ngrowth: fitted exponent gamma={summary['gamma_max']:.5f} "
      f"(one-sided bound {summary['bound_exponent']})")
print(f"\noutputs in {out}/")

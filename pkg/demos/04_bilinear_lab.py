"""Space-time lattice machinery: modulation sets, the trilinear
decomposition, and the dyadic bilinear-estimate ratio.

Run:  python3 demos/04_bilinear_lab.py
"""

import numpy as np

from bolab.bilinear import (
    BilinearSweepConfig,
    bourgain_norm,
    estimate_ratio,
    modulation_identity_check,
    modulation_triple,
    random_block,
    run_ratio_sweep,
    spacetime_from_trajectory,
    tau_grid,
    trilinear_form,
)
from bolab.solver import SolverConfig, solve
from bolab.spectral import GridSpec, analyze

# --- the resonance identity ---------------------------------------------------
print("worked modulation triple for (xi1,tau1,xi2,tau2) = (3,-9,-2,4):")
l1, l2, l3, m, j = modulation_triple(3, -9, -2, 4)
print(f"  L = ({l1}, {l2}, {l3}), m = {m}, j = {j}, bound 2^(m+j)/6 = {2**(m+j)/6:.4f}")

rng = np.random.default_rng(0)
samples = [(int(a), int(b), int(c), int(d))
           for a, b, c, d in rng.integers(-300, 300, size=(50_000, 4))
           if c != 0 and a + c != 0]
print("violations over", len(samples), "random lattice samples:",
      modulation_identity_check(samples))

# --- trilinear form and its three-set decomposition ----------------------------
tau = tau_grid(128, 0.5)
v = random_block(3, +1, tau, "schrodinger_minus", 1)
u = random_block(2, -1, tau, "schrodinger_plus", 2)
p = random_block(2, -1, tau, "schrodinger_plus", 3)
total = trilinear_form(v, u, p)
parts = [trilinear_form(v, u, p, restriction=r) for r in ("A1", "A1c*A3", "A1c*A2*A3c")]
print("\ntrilinear form:", total)
print("sum of A-set pieces:", sum(parts), " (exact partition)")

# --- Bourgain norms of an actual trajectory ------------------------------------
grid = GridSpec(64)
u0 = analyze(np.cos(grid.x), grid)
t_cap, n_time = 1.0, 128
cfg = SolverConfig(dt=4 * t_cap / n_time / 8, t_end=t_cap, record_every=8)
st = spacetime_from_trajectory(solve(u0, cfg), t_cap, n_time, symbol="bo")
print("\nwindowed trajectory of cos x in X-type norms:")
for b in (0.0, 0.25, 0.5):
    print(f"  ||u||_(s=0, b={b}) = {bourgain_norm(st, 0.0, b):.4f}")

# --- the dyadic bilinear-estimate ratio ----------------------------------------
tau = tau_grid(512, 0.5)
vk = random_block(4, +1, tau, "schrodinger_minus", 7)
um = random_block(3, -1, tau, "schrodinger_plus", 8)
print("\nsingle estimate ratio (k,m,j)=(4,3,3):", estimate_ratio(vk, um, 4, 3, 3))

rows, summary = run_ratio_sweep(BilinearSweepConfig(
    mj_pairs=((4, 2),), k_values=(4, 5, 6), ensemble=4, n_tau=512, dtau=0.5))
print("mini sweep summary:", summary)

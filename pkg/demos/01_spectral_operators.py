"""Tour of the spectral toolkit: transforms, multipliers, norms.

Run:  python3 demos/01_spectral_operators.py
"""

import numpy as np

from bolab.spectral import (
    GridSpec,
    analyze,
    antiderivative,
    bessel,
    derivative,
    hilbert,
    lp_block,
    lp_norm,
    mean_value,
    project,
    semigroup_bo,
    semigroup_schrodinger,
    sobolev_norm,
    synthesize,
)

grid = GridSpec(256)
x = grid.x

# --- analyze / synthesize ---------------------------------------------------
cos = analyze(np.cos(x), grid)
print("coefficients of cos x at xi = +/-1:", cos.coeff(1), cos.coeff(-1))
print("round-trip error:", np.max(np.abs(synthesize(cos) - np.cos(x))))

# --- the Hilbert transform and friends --------------------------------------
print("\nH(cos) = sin:", np.max(np.abs(synthesize(hilbert(cos)) - np.sin(x))))
print("H annihilates constants:", np.max(np.abs(hilbert(analyze(np.ones_like(x), grid)).coeffs)))
print("antiderivative(cos) = sin:", np.max(np.abs(synthesize(antiderivative(cos)) - np.sin(x))))
print("derivative(antiderivative) round trip:",
      np.max(np.abs(derivative(antiderivative(cos)).coeffs - cos.coeffs)))

# --- projections and dyadic blocks -------------------------------------------
f = analyze(2.0 + np.cos(x) + 0.5 * np.sin(3 * x), grid)
print("\nmean of 2 + cos x + sin(3x)/2:", mean_value(f))
print("P+ keeps only positive modes:", project(f, "plus").coeff(1))
print("LP block P_2 isolates |xi| in [2,4):", lp_block(f, 2).coeff(3))

# --- norms -------------------------------------------------------------------
print("\n||cos||_L2 =", sobolev_norm(cos, 0.0), " (sqrt(pi) =", np.sqrt(np.pi), ")")
print("||cos||_H1 =", sobolev_norm(cos, 1.0), " (sqrt(2 pi) =", np.sqrt(2 * np.pi), ")")
print("int cos^4 =", lp_norm(cos, 0.0, 4) ** 4, " (3 pi/4 =", 3 * np.pi / 4, ")")

# --- the two free groups -----------------------------------------------------
t = 0.37
bo = semigroup_bo(cos, t)
sch = semigroup_schrodinger(cos, t)
print("\nfree BO flow keeps real data real:", bo.is_real)
print("free Schroedinger flow is an H^s isometry:",
      abs(sobolev_norm(sch, 0.75) - sobolev_norm(cos, 0.75)))

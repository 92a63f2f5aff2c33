"""
Entropy production, work and free energy along a trajectory
===========================================================

The ledger computes rates from the velocity fields at each snapshot and
compares them with finite differences of S, U and F over time.
"""
import numpy as np

from infodyn import (Potential, StateSpec, coherent_state, evolve, feedback_and_speeds,
                     ho_eigenstate, law_residuals, make_grid,
                     minimum_entropy_production_probe, superposition)

grid = make_grid(-20.0, 20.0, 2048)
ho = Potential.harmonic(1.0)

# Ground state: nothing flows. The work rate is beta0 * E = 1/2 and F grows at that rate.
L = law_residuals(evolve(ho_eigenstate(0, 1.0, grid), ho, 2.5e-4, 4000, 40))
print("ground  S_int max", np.abs(L.S_int_rate).max(), " W_rate", L.W_rate[0],
      " dF/dt", np.nanmean(L.F_rate))

# Coherent oscillation: entropy production swings with the momentum.
L = law_residuals(evolve(coherent_state(1.0, 1.0, grid), ho, 1e-3, 10_000, 10))
print("\ncoherent  S_int ranges over", L.S_int_rate.min(), "..", L.S_int_rate.max())
for name in ("residual_entropy_rate", "residual_first_law", "residual_extremum",
             "residual_feedback"):
    print(f"  {name:<22} {L.max_abs(name):.1e}")
fb = feedback_and_speeds(L)
i = np.nanargmax(np.abs(fb.F_accel))
print(f"  at t = {L.times[i]:.2f}: d/dt dF/dt = {fb.F_accel[i]: .4f}, "
      f"T0 d/dt S_int = {fb.entropy_speed[i]: .4f}")
print("  entropy production is", minimum_entropy_production_probe(L).classification)

# A superposition with a node crossing every pi: F and U are undefined there
# and the ledger leaves those entries out.
beat = superposition([StateSpec("ho_eigenstate", {"n": 0}),
                      StateSpec("ho_eigenstate", {"n": 1})], [2 ** -0.5, 2 ** -0.5], grid)
L = law_residuals(evolve(beat, ho, 1e-3, 10_000, 10))
print(f"\nbeat  F unavailable at {np.isnan(L.F).sum()} of {len(L.F)} snapshots, "
      f"first-law residual where defined {L.max_abs('residual_first_law'):.1e}")

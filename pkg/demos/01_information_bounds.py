"""
Entropies, Fisher information and the bounds between them
==========================================================

The oscillator ground state sits exactly on every bound; random
superpositions of eigenstates sit strictly inside them.
"""
import numpy as np

from infodyn import (ENTROPIC_BOUND, audit_inequalities, free_gaussian_at, ho_eigenstate,
                     make_grid, random_ho_superposition)

grid = make_grid(-20.0, 20.0, 2048)

# The ground state: S_q + S_p equals 1 + ln(pi) and F = 1 / var_x.
rep = audit_inequalities(ho_eigenstate(0, 1.0, grid))
print(f"ground state  S_q = {rep.S_q:.10f}  S_p = {rep.S_p:.10f}")
print(f"              S_q + S_p = {rep.entropy_sum:.10f}  (bound {ENTROPIC_BOUND:.10f})")
print(f"              F = {rep.fisher:.10f}  1/var_x = {1 / rep.var_x:.10f}")

# Every slack is (left side) - (right side); the ground state makes them all zero.
for name, slack in rep.slacks.items():
    print(f"  {name:<24} {slack: .2e}")

# A packet after free flight has a quadratic phase. Its momentum variance
# splits into a classical part and a Fisher part, var_p = var_cl + F / 4.
rep = audit_inequalities(free_gaussian_at(1.0, 0.0, 0.0, 0.5, grid))
print(f"\nchirped packet  var_p = {rep.var_p:.6f}  var_cl = {rep.var_p_cl:.6f}  "
      f"F/4 = {rep.fisher / 4:.6f}")

# Random five-term superpositions: the bounds hold with room to spare.
rng = np.random.default_rng(1)
slacks = np.array([list(audit_inequalities(random_ho_superposition(rng, grid)).slacks.values())
                   for _ in range(50)])
print("\nsmallest slack over 50 random superpositions")
for name, lo in zip(rep.slacks, slacks.min(axis=0)):
    print(f"  {name:<24} {lo: .3e}")

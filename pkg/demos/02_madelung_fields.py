"""
Osmotic and current velocities
==============================

Splitting psi into density and phase gives two velocity fields. Their
mean squares add up to the momentum variance, and the osmotic part is the
Fisher information in disguise.
"""
import numpy as np

from infodyn import (coherent_state, decompose, fisher_identities, ho_eigenstate,
                     make_grid, moments, velocity_variances)

grid = make_grid(-20.0, 20.0, 2048)
x = grid.x
bulk = np.abs(x) < 4

# Ground state: u = -x, v = 0, and the quantum potential is x^2/2 - 1/2.
f = decompose(ho_eigenstate(0, 1.0, grid))
print("ground state  max|u + x| =", np.max(np.abs(f.u[bulk] + x[bulk])))
print("              max|Q - (x^2 - 1)/2| =",
      np.max(np.abs(f.q_pot[bulk] - 0.5 * (x[bulk] ** 2 - 1))))

# A moving coherent state has a uniform current velocity.
wf = coherent_state(0.5 + 1.0j, 1.0, grid)
f = decompose(wf)
print("\ncoherent state  v in the bulk:", f.v[bulk].min(), "..", f.v[bulk].max())

# m^2 (var_u + var_v) = var_p, with the two parts computed from different fields.
vv = velocity_variances(f)
print(f"var_u = {vv.var_u:.12f}  var_v = {vv.var_v:.3e}  var_p = {moments(wf).var_p:.12f}")

# D^2 F = <u^2> = -2 <Q> = -D <u'>, and <(P - m v)^2> = (m D)^2 F.
ids = fisher_identities(wf)
for name, r in ids.as_dict().items():
    print(f"  {name:<22} residual {r: .1e}")

# States with nodes have no global phase, but the rate-level quantities survive.
f1 = decompose(ho_eigenstate(1, 1.0, grid))
print("\nfirst excited state nodeless?", f1.nodeless, "  <u^2> =", round(f1.mean_u2, 12))

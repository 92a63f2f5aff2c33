"""
Split-step evolution and its cross-checks
=========================================

Free spreading and the oscillating coherent state have closed forms; a
Crank-Nicolson solver on a tridiagonal stencil gives a second opinion.
"""
import numpy as np

from infodyn import (Potential, coherent_state, energy, evolve, free_gaussian_at,
                     gaussian_packet, make_grid, moments)

grid = make_grid(-20.0, 20.0, 2048)
ho = Potential.harmonic(1.0)


def l2(a, b):
    return np.sqrt(np.sum(np.abs(a - b) ** 2) * grid.dx)


# Free spreading: var_x(t) = var0 + (D t)^2 / var0.
traj = evolve(gaussian_packet(0.0, 0.0, 0.5, grid), Potential.free(), 1e-3, 2000, 100)
for t, wf in zip(traj.times[::5], traj.snapshots[::5]):
    exact = free_gaussian_at(t, 0.0, 0.0, 0.5, grid)
    print(f"t = {t:4.1f}  var_x = {moments(wf).var_x:.10f}  "
          f"closed form {0.5 + (0.5 * t) ** 2 / 0.5:.10f}  L2 err {l2(wf.psi, exact.psi):.1e}")

# Coherent state: <X> follows the classical orbit sqrt(2) cos t.
traj = evolve(coherent_state(1.0, 1.0, grid), ho, 1e-3, 10_000, 500)
E = np.array([energy(w, ho) for w in traj])
print("\nmax |<X> - sqrt(2) cos t| =",
      max(abs(moments(w).mean_x - np.sqrt(2) * np.cos(t)) for t, w in zip(traj.times, traj)))
print("relative energy drift over t in [0, 10]:", np.max(np.abs(E / E[0] - 1)))

# Same run with Crank-Nicolson and a fourth-order compact Laplacian.
a = evolve(coherent_state(1.0, 1.0, grid), ho, 1e-3, 1000, 1000).psi[-1]
b = evolve(coherent_state(1.0, 1.0, grid), ho, 1e-3, 1000, 1000,
           "crank_nicolson", laplacian="compact4").psi[-1]
print("split-step vs Crank-Nicolson at t = 1:", l2(a, b))

# Second order in dt, visible once the potential does not commute with the kinetic term.
exact = coherent_state(np.exp(-1j), 1.0, grid).psi
errs = []
for dt in (0.1, 0.05, 0.025):
    n = int(round(1 / dt))
    psi = evolve(coherent_state(1.0, 1.0, grid), ho, dt, n, n).psi[-1]
    errs.append(np.sqrt(max(2 - 2 * abs(np.sum(np.conj(psi) * exact) * grid.dx), 0)))
print("error ratios on halving dt:", [round(float(errs[i] / errs[i + 1]), 3) for i in range(2)])

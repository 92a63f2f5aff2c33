"""Information functionals and thermodynamic bookkeeping for 1-D wave packets.

Shannon entropies, Fisher information and their uncertainty-type bounds,
the Madelung (hydrodynamic) fields of a wavefunction, split-step time
evolution, and an entropy/free-energy ledger along trajectories.
"""
from .errors import (BoxOverflowError, GridError, IdentityViolation, InequalityViolation,
                     InfodynError, NodalStateError, ResolutionError, UnitarityError)
from .grid import (Grid1D, MomentumWave, WaveFunction, edge_mass, from_momentum,
                   make_grid, quadrature, spectral_derivative, to_momentum)
from .hydro import (FisherIdentities, HydroFields, VelocityVariances, decompose,
                    fisher_identities, velocity_variances)
from .info import (ENTROPIC_BOUND, InfoReport, Moments, audit_inequalities,
                   fisher_information, momentum_entropy, moments, shannon_entropy)
from .propagate import Potential, Trajectory, energy, evolve, hydrodynamic_energy
from .scenario import (BUILTIN_SCENARIOS, ConfigError, ScenarioConfig, builtin_config,
                       load_config, parse_config, run_scenario)
from .states import (StateSpec, build_state, coherent_state, free_gaussian_at,
                     gaussian_packet, ho_eigenstate, random_ho_superposition, superposition)
from .thermo import (ThermoLedger, ThermoParams, entropy_rates, feedback_and_speeds,
                     helmholtz, law_residuals, minimum_entropy_production_probe,
                     smoluchowski_potential, work_and_heat_rates)

__version__ = "0.1.0"

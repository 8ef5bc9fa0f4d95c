"""Intrinsic decoherence of a dipole-coupled two-qubit Heisenberg chain.

Library API is re-exported here; the command-line interface lives in
`dipcoh.cli` and installs as the `dipcoh` script.
"""

from dipcoh import errors
from dipcoh._kernels import BACKEND as _BACKEND
from dipcoh.analysis import (
    Axis,
    SweepRow,
    SweepSpec,
    count_steady_crossings,
    fd_partial_c2,
    monotonicity_verdict,
    run_sweep,
    settling_time,
    steady_coherence,
    steady_coherence_squared,
    time_series,
)
from dipcoh.coherence import coherence, coherence_squared, dephase, jsd_distance
from dipcoh.evolution import (
    closed_form_elements,
    evolve_spectral,
    evolve_spectral_grid,
    evolve_stepped_oracle,
    initial_state,
    steady_state,
)
from dipcoh.model import (
    DerivedQuantities,
    ModelParams,
    build_hamiltonian,
    derived_quantities,
    eigensystem_closed_form,
)
from dipcoh.qops import (
    EigenSystem,
    hermitian_eigensystem,
    validate_density_matrix,
    von_neumann_entropy,
)

__version__ = "0.1.0"


def backend_name() -> str:
    """Name of the active kernel backend: 'compiled' or 'python'."""
    return _BACKEND


__all__ = [
    "Axis",
    "DerivedQuantities",
    "EigenSystem",
    "ModelParams",
    "SweepRow",
    "SweepSpec",
    "backend_name",
    "build_hamiltonian",
    "closed_form_elements",
    "coherence",
    "coherence_squared",
    "count_steady_crossings",
    "dephase",
    "derived_quantities",
    "eigensystem_closed_form",
    "errors",
    "evolve_spectral",
    "evolve_spectral_grid",
    "evolve_stepped_oracle",
    "fd_partial_c2",
    "hermitian_eigensystem",
    "initial_state",
    "jsd_distance",
    "monotonicity_verdict",
    "run_sweep",
    "settling_time",
    "steady_coherence",
    "steady_coherence_squared",
    "steady_state",
    "time_series",
    "validate_density_matrix",
    "von_neumann_entropy",
]

"""Spectral split-operator propagation of the Wigner quasi-probability function.

The state is advanced in the x-theta representation, where the equation of
motion is Schrodinger-like: each step applies a potential phase factor there
and a kinetic phase factor in the lambda-p representation, hopping between
the two with axis-wise FFTs. Conservation of total probability and purity
then holds to round-off by construction.
"""

__version__ = "0.1.0"

from .grid import Grid, make_grid, wrapped_frequencies
from .observables import (
    DiagnosticsRecord,
    boundary_mass,
    diagnostics_record,
    energy,
    expectation,
    marginals,
    max_im_rel,
    negativity_volume,
    purity,
    total_probability,
)
from .oracle import (
    compare_fields,
    cross_validate,
    gaussian_wavepacket,
    harmonic_wavefunction,
    initial_wavefunction,
    schrodinger_propagate,
    schrodinger_step,
)
from .potentials import (
    Drive,
    PotentialSpec,
    evaluate,
    free,
    gaussian_barrier,
    harmonic,
    is_time_dependent,
    morse,
    morse_unsquared,
    quartic,
)
from .propagator import (
    PropagationError,
    PropagatorPlan,
    kinetic_factor,
    make_plan,
    potential_factor,
    propagate,
    step_first_order,
    step_second_order,
)
from .states import (
    BoundaryMassWarning,
    StateSpec,
    build_initial_state,
    gaussian_wigner,
    ho_eigenstate_wigner,
    wigner_from_wavefunction,
)
from .transforms import (
    Field,
    Rep,
    RepresentationError,
    lambdap_to_xp,
    lambdap_to_xtheta,
    lambdatheta_to_xtheta,
    worker_count,
    xp_to_xtheta,
    xtheta_to_lambdap,
    xtheta_to_lambdatheta,
    xtheta_to_xp,
)

__all__ = [
    "__version__",
    "Grid", "make_grid", "wrapped_frequencies",
    "Field", "Rep", "RepresentationError",
    "xp_to_xtheta", "xtheta_to_xp", "xtheta_to_lambdap", "lambdap_to_xtheta",
    "xtheta_to_lambdatheta", "lambdatheta_to_xtheta", "lambdap_to_xp",
    "worker_count",
    "Drive", "PotentialSpec", "evaluate", "is_time_dependent",
    "free", "harmonic", "quartic", "morse", "morse_unsquared", "gaussian_barrier",
    "StateSpec", "BoundaryMassWarning", "build_initial_state",
    "gaussian_wigner", "ho_eigenstate_wigner", "wigner_from_wavefunction",
    "PropagatorPlan", "PropagationError", "make_plan",
    "potential_factor", "kinetic_factor",
    "step_first_order", "step_second_order", "propagate",
    "DiagnosticsRecord", "diagnostics_record", "total_probability", "purity",
    "expectation", "marginals", "negativity_volume", "energy",
    "max_im_rel", "boundary_mass",
    "harmonic_wavefunction", "gaussian_wavepacket", "initial_wavefunction",
    "schrodinger_step", "schrodinger_propagate",
    "compare_fields", "cross_validate",
]

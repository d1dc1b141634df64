"""Classical and quantum theory in fiducial-probability coordinates.

States are vectors ``p`` of fiducial probabilities, measurements are
effect vectors ``r`` with outcome probability ``r . p``, and physical
transformations are real matrices ``Z`` acting as ``p -> Z p``.
"""

__version__ = "0.1.0"

from .config import DEFAULT, Tolerances
from .core import TheoryModel, Validity, is_pure, mix, probability, validate_effect, validate_state
from .classical import (
    ClassicalModel,
    classical_discreteness_gap,
    classical_model,
    classical_reversible_transforms,
    coin_mix_effect,
    look_in_box,
)
from .quantum import (
    FiducialFrame,
    QuantumChannel,
    QuantumModel,
    channel_to_Z,
    fiducial_frame,
    is_valid_quantum_transform,
    operator_to_effect,
    p_to_rho,
    quantum_model,
    qubit_ball_coords,
    rho_to_p,
    unitary_path,
)
from .composition import compose_models, product_state, separable_span_dim
from .axioms import (
    continuity_witness,
    max_distinguishable,
    subspace_restrict,
    verify_affinity,
    verify_power_law,
)
from .measurement import (
    apply_update,
    lueders_instrument,
    make_instrument,
    simulate_frequencies,
)

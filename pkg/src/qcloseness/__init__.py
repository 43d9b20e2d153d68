"""Closeness of unknown pure states against a threshold, and why it cannot be tested unambiguously.

Submodules:

``states``    pure states, ensembles, the closeness functional
``extremal``  Gram-matrix analysis and minimal-closeness ensembles
``povm``      composite-space measurements and the symmetric comparison test
``nogo``      perturbed families, spanning certificates, nullspace decay
``textio``    ensemble/operator text files and CSV reports
``cli``       ``python -m qcloseness``
"""

from .errors import *  # noqa: F401,F403
from .extremal import GramMatrix, c_min, closeness_via_gram, gram_matrix, minimal_ensemble, power_mean_gap
from .nogo import (
    DecayCurve,
    PerturbedFamily,
    SpanningCertificate,
    build_family,
    complement_basis,
    expanded_closeness,
    force_zero_operator,
    nullspace_decay,
    sample_region,
    select_epsilon,
    spanning_certificate,
    witness,
)
from .povm import (
    CompositeOperator,
    Povm,
    ProductState,
    comparison_povm,
    kron_state,
    outcome_probability,
    symmetric_projector,
    unambiguity_violation,
    validate_povm,
)
from .states import (
    PureState,
    StateEnsemble,
    ThresholdSpec,
    basis_state,
    closeness,
    fidelity,
    haar_ensemble,
    haar_state,
    make_ensemble,
    make_state,
    threshold_predicate,
)

__version__ = "0.1.0"

"""Four-potentials, gauge transformations and physicality checks for transverse fields."""
from .minkowski import CausalClass, FourVector, classify, make_propagation_vector, minkowski_dot, phase
from .potential import (
    FieldKind,
    FieldSample,
    PotentialField,
    SingularityError,
    Waveform,
    circular_plane_wave,
    coulomb,
    evaluate_fields,
    nonphysical_gauge,
    plane_wave,
    superpose,
)
from .gauge import (
    GaugeFunction,
    GaugeKind,
    apply_gauge,
    constant,
    lambda_from_potential,
    light_cone_gauge,
    wave_equation_residual,
)
from .validator import CheckResult, Status, ValidationConfig, ValidationReport, Verdict, validate
from .dynamics import (
    ParticleState,
    PonderomotiveSummary,
    Trajectory,
    dipole_freeze,
    drift_momentum,
    photon_number,
    ponderomotive_energy,
    simulate,
)

__version__ = "0.1.0"

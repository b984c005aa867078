"""Projective spherical (t,t)-designs: construction, search, certification.

The package is organised around the design potential (``core``), a
Riemannian trust-region searcher (``optimize``), closed-form design
families (``families``), independent certification oracles (``verify``),
structure discovery (``structure``), the n-sweep engine (``scan``), the
design-file format (``designio``) and a command-line front end (``cli``).
"""

from .core import (
    Configuration,
    DesignProblem,
    GramMatrix,
    Mode,
    PotentialValue,
    bessel_residual,
    design_constant,
    n_bounds,
    normalize_trace,
    potential,
    potential_gradient,
)
from .designio import load_design, save_design
from .families import (
    MercedesAngles,
    SubspaceBasis,
    equally_spaced_lines,
    equiisoclinic_planes_r4,
    kempner_24pt,
    mercedes_benz,
    new_11pt_d5,
    reznick_11pt,
    stroud_design,
    three_mubs_r4,
    twelve_point_design,
    z3_orbit,
)
from .optimize import (
    Converged,
    SolveResult,
    SolverOptions,
    minimize,
    multi_start,
    optimize_z3_seeds,
    random_configuration,
    retract,
    riemannian_gradient,
    weighted_objective,
)
from .scan import (
    ScanRecord,
    ScanTable,
    bisect_jump,
    detect_jump,
    detect_special,
    exceptional_check,
    load_table,
    save_table,
    scan_n_range,
)
from .structure import (
    AngleProfile,
    MProductFingerprint,
    angle_profile,
    m_product_fingerprint,
    match_to_family,
    norm_profile,
    per_vector_angle_incidence,
)
from .verify import (
    cubature_residual,
    equiisoclinic_residual,
    is_design,
    sphere_monomial_integral,
    z3_design_residual,
)

__version__ = "0.1.0"

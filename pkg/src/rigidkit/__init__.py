"""rigidkit: statics and kinematics of bar-and-joint frameworks in
Euclidean, spherical and hyperbolic space, with Maxwell-Cremona
conversions between self-stresses, reciprocal diagrams and polyhedral
lifts in dimension 2.
"""

from . import errors
from ._linalg import RANK_TOL
from .spaces import (
    Bivector,
    ModelPoint,
    Space,
    SpaceKind,
    TangentVector,
    cross3,
    distance,
    euclidean,
    exp_map,
    hyperbolic,
    signed_inner,
    spherical,
    unit_tangent,
    validate_point,
    wedge,
)
from .graphs import (
    DualPair,
    Graph,
    PlanarEmbedding,
    dual_graph,
    generic_dof_count,
    graph,
    is_3_connected,
    laman_check,
    validate_embedding,
)
from .frameworks import (
    EdgeLengthMap,
    Framework,
    build_framework,
    edge_lengths,
    framework_from_dict,
    framework_to_dict,
    is_isometric,
    is_spanning,
    load_framework,
    save_framework,
)
from .kinematics import (
    MotionSpaces,
    RigidityOperator,
    VectorField,
    is_infinitesimally_rigid,
    kinematic_dof,
    motion_space,
    motion_spaces,
    rigidity_operator,
    trivial_motion_space,
    vector_field,
)
from .statics import (
    Load,
    StaticSpaces,
    Stress,
    Unresolvable,
    apply_stress,
    force_bivector,
    is_equilibrium_load,
    load,
    resolve_load,
    self_stress_space,
    static_dof,
    static_spaces,
    stress_from_dict,
    virtual_work,
)
from .transforms import (
    MapSpec,
    affine_map,
    apply_map,
    apply_projective,
    average,
    deaverage,
    geodesic_map,
    geodesic_project,
    pogorelov_kinematic,
    pogorelov_static,
    pogorelov_stress,
    projective_map,
)
from .maxwell_cremona import (
    ConvexityReport,
    LiftKind,
    PolyhedralLift,
    ReciprocalDiagram,
    euclid_convexity_classify,
    euclid_lift_from_reciprocal,
    euclid_lift_to_stress,
    euclid_reciprocal_from_lift,
    euclid_reciprocal_to_stress,
    euclid_stress_to_lift,
    euclid_stress_to_reciprocal,
    hyp_lift_to_reciprocal,
    hyp_lift_to_stress,
    hyp_reciprocal_to_lift,
    hyp_reciprocal_to_stress,
    hyp_stress_to_lift,
    hyp_stress_to_reciprocal,
    radial_vertical_convert,
    sph_lift_to_reciprocal,
    sph_lift_to_stress,
    sph_reciprocal_to_lift,
    sph_reciprocal_to_stress,
    sph_stress_to_lift,
    sph_stress_to_reciprocal,
)
from . import gallery

__version__ = "0.1.0"
